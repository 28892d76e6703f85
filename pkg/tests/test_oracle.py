import pytest

from platdist.curves import bounds_below
from platdist.distance import FramedCurve, verify_path
from platdist.oracle import (BudgetExceeded, CurveInventory, bfs_distance, cache_dir, enumerate_curves,
                             load_or_enumerate)
from platdist.plat import uniform_plat


def test_empty_inventory():
    inv = enumerate_curves(6, 0)
    assert inv.curves == [] and inv.below == []


@pytest.mark.parametrize("bound, total, below", [(2, 9, 3), (4, 39, 3), (6, 167, 9), (8, 491, 9)])
def test_inventory_counts(bound, total, below):
    inv = enumerate_curves(6, bound)
    assert len(inv.curves) == total and sum(inv.below) == below


def test_inventory_entries_are_distinct_and_flagged():
    inv = enumerate_curves(6, 6)
    assert len({c.word for c in inv.curves}) == len(inv.curves)
    assert all(len(c.word) <= 6 for c in inv.curves)
    assert inv.below == [bounds_below(c) for c in inv.curves]


def test_bad_bound():
    with pytest.raises(ValueError):
        enumerate_curves(6, 3)
    with pytest.raises(ValueError):
        enumerate_curves(6, -2)


def test_budget_exceeded_keeps_partial_result():
    with pytest.raises(BudgetExceeded) as exc:
        enumerate_curves(6, 10, budget=50)
    assert exc.value.partial is not None


def test_cache_is_bit_identical(tmp_path):
    first = load_or_enumerate(6, 6, tmp_path)
    files = list(tmp_path.iterdir())
    assert [f.name for f in files] == ["inventory-6-6-v1.json"]
    raw = files[0].read_bytes()
    second = load_or_enumerate(6, 6, tmp_path)
    assert second.digest() == first.digest()
    assert files[0].read_bytes() == raw
    assert CurveInventory.from_json(first.to_json()).curves == first.curves


def test_cache_dir_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv("PLATDIST_CACHE", str(tmp_path / "env"))
    assert cache_dir(tmp_path / "x") == tmp_path / "x"
    assert cache_dir() == tmp_path / "env"
    monkeypatch.delenv("PLATDIST_CACHE")
    assert cache_dir().name == "platdist"


@pytest.mark.parametrize("n, bound, d", [(2, 2, 1), (3, 4, 2), pytest.param(4, 6, 2, marks=pytest.mark.slow)])
def test_bfs_matches_formula(n, bound, d):
    res = bfs_distance(uniform_plat(3, n), bound)
    assert res.distance == d and res.within_bound
    assert len(res.path) == d + 1
    assert res.to_json()["distance"] == d


def test_bfs_path_is_disjoint_chain():
    P = uniform_plat(3, 3)
    res = bfs_distance(P, 4)
    # the oracle path runs from the top disk set down; the independent checker wants it bottom first
    verts = [FramedCurve(f, c) for f, c in reversed(res.path)]
    rep = verify_path(P, verts)
    assert rep.ok and rep.length == 2


def test_bfs_without_disks_is_infinite():
    res = bfs_distance(uniform_plat(3, 2), 0)
    assert res.distance == float("inf") and not res.within_bound
    assert res.to_json()["distance"] is None
