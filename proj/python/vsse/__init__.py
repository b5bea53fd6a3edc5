"""Verifiable searchable encryption: on-disk store, simulator and benchmarks."""

from ._vsse import (
    DecodeError,
    InputError,
    SearchReport,
    Store,
    StoreError,
    UsageError,
    VsseError,
    bench,
    hash_to_scalar,
    prf,
    soundness_suite,
    strategies,
)

__all__ = [
    "DecodeError",
    "InputError",
    "SearchReport",
    "Store",
    "StoreError",
    "UsageError",
    "VsseError",
    "bench",
    "hash_to_scalar",
    "prf",
    "soundness_suite",
    "strategies",
]
