import json

import pytest

from wangweave import UNSAT, Word2D, equivalent, is_valid, quotient_morphism, square_fixed_seeds
from wangweave.errors import MissingCertificate, SeedWithoutFaultLine, UnknownName
from wangweave.jeandelrao import (ABSENT_T4P, CARDINALITIES, FAULT_ROWS, FAULT_SEEDS, SEEDS, TILESET_NAMES,
                                  builtin, check_decoration, fault_line_patch, fibonacci_psi, fixed_patch,
                                  frequency_closed_forms, is_fibonacci_factor, jmath_map, rauzy_graph,
                                  remove_forbidden_tiles, run_pipeline, square_factors, strip_heights,
                                  t0_patch, tile_frequencies, tile_heights_in_T0, x4_sft_forbidden_set)
from wangweave.tiles import TileSet


def test_builtin_examples():
    assert builtin("T0")[0] == ("2", "4", "2", "1")
    assert builtin("T5")[0] == ("2113", "5", "2130", "1")
    assert builtin("omegaU")(18).display() == [[2, 0], [14, 8]]
    assert builtin("T4'") == builtin("T4p")
    assert builtin("omega4") == builtin("jmath")
    with pytest.raises(UnknownName):
        builtin("T13")


def test_cardinalities_of_data():
    assert [len(builtin(n)) for n in TILESET_NAMES] == CARDINALITIES


def test_remove_forbidden_tiles():
    T4, iota = remove_forbidden_tiles(builtin("T4p"), UNSAT)
    assert len(T4) == 28 and T4 == builtin("T4")
    img = iota.letter_images()
    assert img[:24] == list(range(24))
    assert img[24:] == [25, 26, 27, 29]
    with pytest.raises(MissingCertificate):
        remove_forbidden_tiles(builtin("T4p"))


def test_absent_transducer_pattern():
    assert ABSENT_T4P not in builtin("T4p")


def test_decoration():
    rep = check_decoration(builtin("T5"), builtin("T4"))
    assert rep["ok"], rep["failures"]
    assert rep["collisions"] == {"22": [22, 23]}
    assert rep["dominoes_below_22_23"] == [(0, 23), (3, 23), (7, 22), (13, 23), (18, 22)]
    assert rep["jmath"] == builtin("jmath").letter_images()


def test_x4_sets():
    D, G = x4_sft_forbidden_set()
    assert len(D[1]) == 37 and len(D[2]) == 75
    jm = jmath_map(builtin("T5"), builtin("T4"))
    T4 = builtin("T4")
    for i, pos in ((1, (0, 2)), (2, (1, 3))):
        for u, v in D[i]:
            assert T4[jm[u]][pos[0]] == T4[jm[v]][pos[1]]
        assert not G[i] & {(jm[u], jm[v]) for u, v in D[i]}


def test_pipeline_without_unsat():
    rep = run_pipeline(skip_unsat_check=True)
    assert rep.ok
    assert rep.cardinalities == CARDINALITIES
    steps = {s["step"]: s for s in rep.steps}
    assert steps["shear"]["eta"] == list(range(29))
    assert steps["T0 -> T1"]["markers"] == [0, 1]
    assert len(steps["T9 -> T10"]["candidates"]) == 3
    assert len(steps["T11 -> T12"]["candidates"]) == 3
    assert json.dumps(rep.to_json()) == json.dumps(run_pipeline(skip_unsat_check=True).to_json())


def test_equivalence_U_T12():
    eq = equivalent(builtin("U"), builtin("T12"))
    assert eq.vertical["A"] == "21030021300211300"
    assert eq.horizontal["P"] == "51060511"


def test_frequencies():
    f, v, lam = tile_frequencies()
    for a, b in zip(f, frequency_closed_forms()):
        assert abs(a - b) < 1e-9
    assert abs(f.sum() - 1) < 1e-12
    assert (f > 0).all()
    assert round(f[7], 4) == 0.1496 and round(f[2], 4) == 0.0256


def test_square_factors_and_seeds():
    U = builtin("U")
    f3 = square_factors(U, 3)
    assert len(square_factors(U, 0)) == 139
    assert len(square_factors(U, 2)) == len(f3) == 50
    assert square_fixed_seeds(builtin("omegaU"), f3) == set(SEEDS)


def test_fibonacci_quotient():
    tau = quotient_morphism(builtin("omegaU"), fibonacci_psi())
    assert [r.display() for r in tau.rules] == [[[1, 3], [0, 2]], [[0, 2]], [[1], [0]], [[0]]]


def test_tile_heights_follow_psi():
    h = tile_heights_in_T0()
    psi = fibonacci_psi()
    assert {h[a] for a in range(19) if psi[a] in (0, 2)} == {14}
    assert {h[a] for a in range(19) if psi[a] in (1, 3)} == {9}


@pytest.mark.parametrize("seed", SEEDS)
def test_strip_heights_fibonacci(seed):
    for n in range(3):
        heights = strip_heights(t0_patch(seed, n).word)
        assert heights and set(heights) <= {4, 5}
        assert is_fibonacci_factor(heights)


def test_fibonacci_factor_checker():
    assert is_fibonacci_factor([5, 4, 5, 5, 4])
    assert not is_fibonacci_factor([4, 4])
    assert not is_fibonacci_factor([5, 5, 5])


def test_fault_line_zero():
    fl = fault_line_patch(Word2D.from_display([[9, 14], [1, 6]]))
    assert fl.color == "0" and set(fl.fault_row_colors) == {"0"}
    assert fl.tiling_valid and fl.slid_valid
    assert fl.tiling_diagonal_breaks == [] and fl.slid_diagonal_breaks
    assert fl.tiling.shape == fl.slid.shape == (16, 10)


@pytest.mark.parametrize("seed", list(FAULT_SEEDS))
def test_fault_seed_rows(seed):
    fl = fault_line_patch(seed)
    assert set(fl.fault_row_colors) == {fl.color}
    assert set(fl.seed_row) <= FAULT_ROWS[fl.color]


def test_seed_without_fault_line():
    with pytest.raises(SeedWithoutFaultLine):
        fault_line_patch(Word2D.from_display([[16, 15], [3, 7]]))


@pytest.mark.parametrize("seed", [s for s in SEEDS if s not in FAULT_SEEDS])
def test_other_seeds_rows_mixed(seed):
    z = fixed_patch(seed, 2)
    (x0, x1), _ = z.bounds()
    row = {z[(x, -1)] for x in range(x0, x1 + 1)}
    assert not row <= FAULT_ROWS["0"] and not row <= FAULT_ROWS["1"]


def test_rauzy_graph_U():
    U = builtin("U")
    g = rauzy_graph(U, 1, 3)
    assert set(g.successors(13)) == {9}
    assert set(g.predecessors(10)) == {18}
    sizes = [rauzy_graph(U, 1, r).number_of_edges() for r in (1, 2, 3)]
    assert sizes == sorted(sizes, reverse=True)
    assert rauzy_graph(TileSet(), 1, 1).number_of_nodes() == 0


def test_embedded_data_consistent(raw):
    assert sorted(raw["tilesets"]) == sorted(TILESET_NAMES)
    for name, tiles in raw["tilesets"].items():
        assert [list(t) for t in builtin(name)] == tiles
    # omega3 is not stored; it is rebuilt from omega3' and iota
    assert "omega3" not in raw["morphisms"]
    assert builtin("omega3").domain_size == 28
