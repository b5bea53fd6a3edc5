#!/usr/bin/env python3
"""Independent oracle for the frozen crypto test vectors.

Uses hashlib/hmac and py_ecc only (no code from the C++ library). Run it
to regenerate tests/unit/vectors.inc:

    python3 tests/oracle/gen_vectors.py > tests/unit/vectors.inc
"""
import hashlib
import hmac

from py_ecc.bls.point_compression import compress_G1, compress_G2
from py_ecc.optimized_bls12_381 import G1, G2, curve_order as Q, multiply


def h2s(msg: bytes) -> int:
    return int.from_bytes(hashlib.sha512(b"h2s" + msg).digest(), "big") % Q


def prf(key: bytes, msg: bytes) -> bytes:
    return hmac.new(key, msg, hashlib.sha256).digest()


def prg_block(seed: bytes, index: int) -> int:
    idx = index.to_bytes(8, "big")
    wide = prf(seed, b"r" + idx + b"\x00") + prf(seed, b"r" + idx + b"\x01")
    return int.from_bytes(wide, "big") % Q


def g1_bytes(k: int) -> bytes:
    return compress_G1(multiply(G1, k)).to_bytes(48, "big")


def g2_bytes(k: int) -> bytes:
    z1, z2 = compress_G2(multiply(G2, k))
    return z1.to_bytes(48, "big") + z2.to_bytes(48, "big")


def emit(name: str, value: bytes) -> None:
    print(f'constexpr std::string_view {name} = "{value.hex()}";')


def main() -> None:
    key = bytes(range(32))
    emit("kH2sEmpty", h2s(b"").to_bytes(32, "big"))
    emit("kH2sAbc", h2s(b"abc").to_bytes(32, "big"))
    emit("kPrfKey0to31Hello", prf(key, b"hello"))
    flipped = bytes([key[0] ^ 1]) + key[1:]
    emit("kPrfKeyFlippedHello", prf(flipped, b"hello"))
    # RFC 4231 test case 2
    emit("kHmacRfc4231Case2", prf(b"Jefe", b"what do ya want for nothing?"))
    zero = bytes(32)
    emit("kPrgZeroSeed1", prg_block(zero, 1).to_bytes(32, "big"))
    emit("kPrgZeroSeed2", prg_block(zero, 2).to_bytes(32, "big"))
    emit("kDocName0to15", hashlib.sha256(b"docname" + bytes(range(16))).digest())
    emit("kBilinearHashEmpty", g1_bytes(h2s(b"")))
    sk = h2s(b"bls-vector-sk")
    m = h2s(b"bls-vector-m")
    emit("kBlsSk", sk.to_bytes(32, "big"))
    emit("kBlsMsg", m.to_bytes(32, "big"))
    emit("kBlsPk", g2_bytes(sk))
    emit("kBlsSig", g1_bytes(sk * m % Q))
    emit("kG1Generator", g1_bytes(1))
    emit("kG2Generator", g2_bytes(1))
    pos = prf(key, bytes(range(16)) + (3).to_bytes(8, "big"))
    emit("kPositionKey0to31Id0to15Idx3", pos)


if __name__ == "__main__":
    main()
