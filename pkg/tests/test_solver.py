import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wangweave import (UNSAT, SolveInstance, TileSet, Word2D, count_solutions, dominoes_with_surrounding,
                       export_cnf, has_surrounding, is_valid, iter_solutions, solve_external,
                       solve_rectangle)
from wangweave import _kernels as K
from wangweave.errors import Timeout, WangError
from wangweave.jeandelrao import builtin
from wangweave.solver import matching_pairs

import oracles
from strategies import tilesets

T0 = builtin("T0")
T0_TILES = [tuple(t) for t in T0]


def test_one_by_one():
    T = TileSet([("a", "b", "c", "d")])
    assert solve_rectangle(SolveInstance(T, 1, 1)) == Word2D([[0]])


def test_invalid_instances():
    with pytest.raises(WangError):
        SolveInstance(T0, 0, 3)
    with pytest.raises(WangError):
        SolveInstance(T0, 2, 2, {(2, 0): 0})
    with pytest.raises(WangError):
        SolveInstance(T0, 2, 2, {(0, 0): 11})
    with pytest.raises(WangError):
        SolveInstance(T0, 2, 2, bottom=["0"])


def test_six_by_one_bottom_only():
    inst = SolveInstance(T0, 6, 1, bottom=list("232212"))
    sols = list(iter_solutions(inst))
    assert len(sols) == count_solutions(inst) == oracles.count(T0_TILES, 6, 1, bottom=list("232212"))
    tops = {"".join(T0[w[x, 0]].top for x in range(6)) for w in sols}
    assert "112312" in tops


def test_six_by_one_path_from_zero_to_zero():
    inst = SolveInstance(T0, 6, 1, left=["0"], right=["0"], bottom=list("232212"))
    w = solve_rectangle(inst)
    assert "".join(T0[w[x, 0]].top for x in range(6)) == "112312"
    assert count_solutions(inst) == 1


def test_unknown_boundary_color():
    assert solve_rectangle(SolveInstance(T0, 2, 1, bottom=["9", None])) is UNSAT


def test_rao_domino_has_14_by_9_surrounding():
    T4p = builtin("T4p")
    assert has_surrounding(T4p, Word2D([[28, 24]]), (6, 4))


def test_stacked_zeros_not_surrounded():
    pattern = Word2D([[0], [0]])
    assert not has_surrounding(T0, pattern, (1, 1))
    assert not oracles.surrounded(T0_TILES, {(0, 0): 0, (0, 1): 0}, 1, 1)


def test_margin_zero_is_validity():
    assert has_surrounding(T0, Word2D([[6, 6]]), (0, 0)) == is_valid(T0, Word2D([[6, 6]]))
    assert has_surrounding(T0, Word2D([[7, 7]]), (0, 0)) == is_valid(T0, Word2D([[7, 7]])) is False


def test_count_two_by_two_matches_brute_force():
    assert count_solutions(SolveInstance(T0, 2, 2)) == oracles.brute_count(T0_TILES, 2, 2) == 85


def test_enumeration_distinct_and_valid():
    sols = list(iter_solutions(SolveInstance(T0, 3, 2)))
    assert len(sols) == len(set(sols)) == oracles.count(T0_TILES, 3, 2)
    assert all(is_valid(T0, w) for w in sols)


def test_deterministic():
    inst = SolveInstance(builtin("T2"), 6, 5)
    assert solve_rectangle(inst) == solve_rectangle(inst)


def test_timeout_is_not_unsat():
    inst = SolveInstance(builtin("T4p"), 71, 9, {(35, 4): 24})
    with pytest.raises(Timeout):
        solve_rectangle(inst, budget=0.2)


@pytest.mark.parametrize("name,r", [("T0", 0), ("T0", 1), ("T2", 1)])
@pytest.mark.parametrize("i", [1, 2])
def test_dominoes_vs_oracle(name, r, i):
    T = builtin(name)
    assert dominoes_with_surrounding(T, i, r) == oracles.dominoes([tuple(t) for t in T], i, r)


def test_dominoes_radius_zero_all_matching():
    assert dominoes_with_surrounding(T0, 1, 0) == set(matching_pairs(T0, 1))


@pytest.mark.parametrize("i", [1, 2])
def test_dominoes_antitone(i):
    T = builtin("T3")
    sets = [dominoes_with_surrounding(T, i, r) for r in range(4)]
    assert all(a >= b for a, b in zip(sets, sets[1:]))


def test_bad_domino_args():
    with pytest.raises(ValueError):
        dominoes_with_surrounding(T0, 1, -1)
    with pytest.raises(ValueError):
        dominoes_with_surrounding(T0, 3, 1)


def test_cnf_sizes():
    cnf = export_cnf(SolveInstance(builtin("T4p"), 71, 9, {(35, 4): 24}))
    assert cnf.nvars == 19170
    one = export_cnf(SolveInstance(TileSet([("a", "b", "c", "d")]), 1, 1))
    assert one.nvars == 1 and one.clauses == [[1]]
    assert one.dimacs() == "p cnf 1 1\n1 0\n"


def test_cnf_write(tmp_path):
    inst = SolveInstance(T0, 2, 2)
    p = tmp_path / "x.cnf"
    export_cnf(inst).write(p)
    head = p.read_text().splitlines()[0].split()
    assert head[:2] == ["p", "cnf"] and int(head[2]) == 44


def test_cnf_models_are_tilings():
    pycosat = pytest.importorskip("pycosat")
    inst = SolveInstance(T0, 3, 2, {(1, 1): 7})
    cnf = export_cnf(inst)
    from wangweave.solver import decode_model
    models = {decode_model(inst, m) for m in pycosat.itersolve(cnf.clauses)}
    assert models == set(iter_solutions(inst))


@pytest.mark.parametrize("seed", range(5))
def test_external_agrees_with_dlx(seed):
    pytest.importorskip("pysat")
    rng = np.random.default_rng(seed)
    T = builtin(["T0", "T1", "T2", "T3", "T5"][seed])
    pre = {(int(rng.integers(6)), int(rng.integers(6))): int(rng.integers(len(T))) for _ in range(3)}
    inst = SolveInstance(T, 6, 6, pre)
    a = solve_rectangle(inst)
    b = solve_external(inst)
    assert (a is UNSAT) == (b is UNSAT)
    if b is not UNSAT:
        assert is_valid(T, b) and all(b[p] == t for p, t in pre.items())


@given(st.data())
def test_two_by_two_random_preassign_vs_brute(data):
    x, y = data.draw(st.integers(0, 1)), data.draw(st.integers(0, 1))
    t = data.draw(st.integers(0, 10))
    inst = SolveInstance(T0, 2, 2, {(x, y): t})
    expect = sum(1 for g in oracles.tilings(T0_TILES, 2, 2) if g[(x, y)] == t)
    assert count_solutions(inst) == expect


@given(tilesets(max_size=5), st.integers(1, 3), st.integers(1, 3))
def test_random_sets_vs_oracle(T, w, h):
    tiles = [tuple(t) for t in T]
    inst = SolveInstance(T, w, h)
    assert count_solutions(inst, limit=50) == oracles.count(tiles, w, h, limit=50)
    got = solve_rectangle(inst)
    assert (got is UNSAT) == (not oracles.exists(tiles, w, h))
    assert (solve_rectangle(inst, propagation="sac") is UNSAT) == (got is UNSAT)


@given(tilesets(max_size=6), st.integers(1, 4), st.integers(1, 4), st.data())
def test_arc_consistency_twins(T, w, h, data):
    _, _, codes = T.codes()
    dom = np.array(data.draw(st.lists(st.booleans(), min_size=w * h * len(T), max_size=w * h * len(T))),
                   dtype=np.bool_).reshape(h, w, len(T))
    free_h = np.full((h, 2), -1, np.int64)
    free_v = np.full((w, 2), -1, np.int64)
    a, b = dom.copy(), dom.copy()
    ra = K.arc_consistency(a, codes, free_h, free_v)
    rb = K.arc_consistency_numpy(b, codes, free_h, free_v)
    assert bool(ra) == bool(rb)
    if ra:
        assert (a == b).all()
        sa, sb = a.copy(), b.copy()
        assert bool(K.singleton_consistency(sa, codes)) == bool(K.singleton_consistency_numpy(sb, codes))
        if K.singleton_consistency(a, codes):
            K.singleton_consistency_numpy(b, codes)
            assert (a == b).all()


@given(tilesets(max_size=5), st.integers(1, 3), st.integers(1, 3))
def test_sac_is_sound(T, w, h):
    # every tile kept by SAC appears in some tiling, and every used tile is kept
    tiles = [tuple(t) for t in T]
    dom = SolveInstance(T, w, h).domains("sac")
    used = np.zeros((h, w, len(T)), np.bool_)
    for g in oracles.tilings(tiles, w, h, limit=500):
        for (x, y), t in g.items():
            used[y, x, t] = True
    if dom is None:
        assert not used.any()
    else:
        assert (dom >= used).all()


def test_fallback_engine_agrees():
    code = ("from wangweave import SolveInstance, count_solutions, USE_NUMBA\n"
            "from wangweave.jeandelrao import builtin\n"
            "assert not USE_NUMBA\n"
            "print(count_solutions(SolveInstance(builtin('T0'), 3, 3)),"
            " count_solutions(SolveInstance(builtin('T0'), 4, 2, {(1, 1): 7})))\n")
    env = dict(os.environ, WANGWEAVE_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    expect = (count_solutions(SolveInstance(T0, 3, 3)), count_solutions(SolveInstance(T0, 4, 2, {(1, 1): 7})))
    assert tuple(map(int, out.stdout.split())) == expect
