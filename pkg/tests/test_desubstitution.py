import pytest
from hypothesis import given, strategies as st

from wangweave import SolveInstance, apply, find_substitution, fuse, is_valid, solve_rectangle
from wangweave.errors import NotAMarkerSet
from wangweave.jeandelrao import DESUB_STEPS_A, DESUB_STEPS_B, builtin, chain_markers
from wangweave.words import Word2D

STEPS = DESUB_STEPS_A + DESUB_STEPS_B


@pytest.mark.parametrize("step", STEPS, ids=lambda s: f"{s[0]}-{s[1]}")
def test_chain_step_reproduced(step):
    src, dst, om, i, r, side = step
    res = find_substitution(builtin(src), chain_markers(src), i, r, side)
    assert list(res.derived) == list(builtin(dst))
    assert res.morphism == builtin(om)


def test_omega0_images():
    res = find_substitution(builtin("T0"), {0, 1}, 2, 1, "left")
    assert len(res.derived) == 13
    assert res.morphism(8).display() == [[9], [0]]
    assert res.morphism(12).display() == [[10], [1]]
    assert res.morphism(0) == Word2D.letter(2)


def test_omega3p_image():
    res = find_substitution(builtin("T3"), {0, 1, 2, 3}, 2, 3, "right")
    assert len(res.derived) == 30
    assert res.morphism(13).display() == [[3], [4]]


def test_omega11_image():
    res = find_substitution(builtin("T11"), {0, 1, 2, 9, 10, 11}, 1, 1, "right")
    assert len(res.derived) == 19
    assert res.morphism(6).display() == [[3, 1]]


@pytest.mark.parametrize("step", STEPS, ids=lambda s: f"{s[0]}-{s[1]}")
def test_provenance_and_index_order(step):
    src, _, _, i, r, side = step
    T = builtin(src)
    res = find_substitution(T, chain_markers(src), i, r, side)
    kept = [p.tiles[0] for p in res.provenance if not p.fused]
    pairs = [p.tiles for p in res.provenance if p.fused]
    assert kept == sorted(kept) and pairs == sorted(pairs)
    assert all(not p.fused for p in res.provenance[:len(kept)])
    for k, p in enumerate(res.provenance):
        if p.fused:
            assert res.derived[k] == fuse(i, T[p.tiles[0]], T[p.tiles[1]])
            assert p.axis == i and p.side == side
        else:
            assert res.derived[k] == T[p.tiles[0]]


def test_not_a_marker_set():
    with pytest.raises(NotAMarkerSet):
        find_substitution(builtin("T0"), {0, 1}, 1, 1)
    with pytest.raises(ValueError):
        find_substitution(builtin("T0"), {0, 1}, 2, 1, side="up")


_SETS = {s[1]: (s[0], s[2]) for s in STEPS}


@given(st.sampled_from(sorted(_SETS)), st.integers(2, 4), st.data())
def test_validity_transport(dst, k, data):
    src, om = _SETS[dst]
    S = builtin(dst)
    t = data.draw(st.integers(0, len(S) - 1))
    x, y = data.draw(st.integers(0, k - 1)), data.draw(st.integers(0, k - 1))
    w = solve_rectangle(SolveInstance(S, k, k, {(x, y): t}))
    if w:
        assert is_valid(S, w)
        assert is_valid(builtin(src), apply(builtin(om), w))
