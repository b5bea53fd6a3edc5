import pytest

import vsse

ID1 = "00000000000000000000000000000001"
ID2 = "00000000000000000000000000000002"
ID3 = "00000000000000000000000000000003"


@pytest.fixture
def store(tmp_path):
    with vsse.Store.create(tmp_path / "s", seed=1) as s:
        s.build(f"apple\t{ID1},{ID2}\npear\t{ID2}\n", seed=2)
        yield s


def test_search_both_schemes(store):
    for scheme in ("forward", "static"):
        r = store.search("apple", scheme=scheme)
        assert r.accepted
        assert r.reason == "accept"
        assert r.ids == [ID1, ID2]
    assert store.search("missing").ids == []


def test_updates(store):
    store.add(ID3, ["apple", "pear"], seed=3)
    store.delete(ID1, ["apple"], seed=4)
    assert store.search("apple").ids == [ID2, ID3]
    assert store.search("apple", scheme="static").ids == [ID2, ID3]
    with pytest.raises(vsse.InputError):
        store.delete(ID1, ["apple"])


@pytest.mark.parametrize("adversary", ["DROP_ONE", "FLIP_ID_BIT", "FORGE_PROOF"])
def test_tampering_rejects(store, adversary):
    r = store.search("apple", adversary=adversary, seed=5)
    assert r.tampered
    assert not r.accepted
    assert r.ids == []


def test_lock_and_errors(tmp_path, store):
    with pytest.raises(vsse.UsageError):
        vsse.Store.open(store.dir)
    with pytest.raises(vsse.UsageError):
        vsse.Store.open(tmp_path / "absent")
    with pytest.raises(vsse.InputError):
        store.build("broken line\n")
    with pytest.raises(vsse.InputError):
        store.search("apple", scheme="other")
    store.close()
    with vsse.Store.open(store.dir) as again:
        assert again.search("pear").ids == [ID2]


def test_soundness_and_bench(store):
    report = vsse.soundness_suite(trials=3, seed=6)
    assert set(report) == set(vsse.strategies())
    assert all(t["accepted_forgeries"] == 0 for t in report.values())
    assert report["HONEST"]["accepted"] == report["HONEST"]["searches"]
    assert all(t["accepted_forgeries"] == 0 for t in store.soundness(trials=2, seed=7).values())

    rows = vsse.bench([1, 10], reps=5, seed=8)
    assert [r["result_size"] for r in rows] == [1, 10]
    assert len({r["proof_bytes"] for r in rows}) == 1
    assert all(r["auditor_ops"]["pairings"] == 2 for r in rows)


def test_primitives():
    assert vsse.hash_to_scalar(b"abc").hex() == (
        "4022c7c180bfe303154b8c8eb587c78d0b8dd916d5da00409aef880ff1887e34"
    )
    assert vsse.prf(bytes(range(32)), b"hello").hex() == (
        "53c40272a70c15ca4ee0af4df1f155fd6c41e00ce2307d8987ecd4bb36a7e990"
    )
    with pytest.raises(vsse.InputError):
        vsse.prf(b"short", b"x")
