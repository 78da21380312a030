"""Embedded Jeandel-Rao data and the replay of its substitutive decomposition."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import networkx as nx

from .desubstitution import find_substitution
from .errors import MissingCertificate, NotEquivalent, SeedWithoutFaultLine, StepFailed, Timeout, UnknownName
from .markers import find_markers
from .morphisms import (Morphism2D, apply_to_anchored, compose, compose_all,
                        generate_fixed_patch, perron_frequencies,
                        push_frequencies)
from .shear import shear_tileset
from .solver import (UNSAT, SolveInstance, dominoes_with_surrounding, has_surrounding, matching_pairs,
                     solve_rectangle)
from .tiles import TileSet, WangTile, equivalent
from .words import Word2D, is_valid


@lru_cache(maxsize=None)
def _data():
    with resources.files("wangweave").joinpath("data/jeandelrao.json").open() as fh:
        return json.load(fh)


TILESET_NAMES = ["T0", "T1", "T2", "T3", "T4p", "T4", "T5", "T6", "T7", "T8", "T9", "T10",
                 "T11", "T12", "U"]
MORPHISM_NAMES = ["omega0", "omega1", "omega2", "omega3p", "omega3", "omega0to3", "iota",
                  "jmath", "eta", "omega6", "omega7", "omega8", "omega9", "omega10", "omega11",
                  "rho", "omegaU"]
ALIASES = {"T4'": "T4p", "T4prime": "T4p", "omega4": "jmath", "omega5": "eta"}

# domain / codomain tile sets of each morphism, used for alphabet sizes
_SIGNATURE = {"omega0": ("T1", "T0"), "omega1": ("T2", "T1"), "omega2": ("T3", "T2"),
              "omega3p": ("T4p", "T3"), "iota": ("T4", "T4p"), "omega0to3": ("T4", "T0"),
              "jmath": ("T5", "T4"), "eta": ("T6", "T5"), "omega6": ("T7", "T6"),
              "omega7": ("T8", "T7"), "omega8": ("T9", "T8"), "omega9": ("T10", "T9"),
              "omega10": ("T11", "T10"), "omega11": ("T12", "T11"), "rho": ("U", "T12"),
              "omegaU": ("U", "U")}


def builtin(name):
    name = ALIASES.get(name, name)
    d = _data()
    if name in d["tilesets"]:
        return TileSet(d["tilesets"][name])
    if name == "omega3":
        return compose(builtin("omega3p"), builtin("iota"))
    if name in d["morphisms"]:
        cod = len(d["tilesets"][_SIGNATURE[name][1]])
        return Morphism2D(d["morphisms"][name], cod)
    if name == "U_colors":
        return d["U_letters"]
    raise UnknownName(f"no built-in artifact named {name!r}")


def chain_markers(name):
    return _data()["markers"][name]


# (source, target, morphism, markers key, axis, radius, side)
DESUB_STEPS_A = [("T0", "T1", "omega0", 2, 1, "left"),
                 ("T1", "T2", "omega1", 2, 1, "left"),
                 ("T2", "T3", "omega2", 2, 2, "left"),
                 ("T3", "T4p", "omega3p", 2, 3, "right")]
DESUB_STEPS_B = [("T6", "T7", "omega6", 1, 1, "left"),
                 ("T7", "T8", "omega7", 1, 1, "right"),
                 ("T8", "T9", "omega8", 2, 2, "right"),
                 ("T9", "T10", "omega9", 1, 1, "right"),
                 ("T10", "T11", "omega10", 2, 2, "right"),
                 ("T11", "T12", "omega11", 1, 1, "right")]
SHEAR_RADIUS = 2
CARDINALITIES = [11, 13, 20, 24, 30, 28, 29, 29, 20, 20, 22, 18, 21, 19, 19]

RAO_WIDTH, RAO_HEIGHT, RAO_POS, RAO_TILE = 71, 9, (35, 4), 24
FORBIDDEN_T4P = [WangTile("23310", "0", "21330", "0"), WangTile("21103", "1", "23310", "0")]
ABSENT_T4P = WangTile("2310", "0", "2030", "0")

JMATH_COLORS = {"0": "0", "6": "0", "1": "1", "5": "1"}

MARKER_CLASSES_T5 = [(1, 6, 7, 8, 11, 12, 16, 17, 18, 19, 23, 26, 28),
                     (0, 3, 4, 5, 13, 14, 15, 24, 25),
                     (2, 9, 10, 20, 21, 22, 27)]
GREEN_T4 = frozenset({0, 3, 4, 5, 13, 14, 15, 23, 24})

SEEDS = [Word2D.from_display(s) for s in (
    [[9, 14], [8, 16]], [[9, 14], [1, 6]], [[17, 13], [16, 15]], [[17, 13], [6, 5]],
    [[16, 15], [3, 7]], [[10, 12], [9, 14]], [[16, 13], [2, 4]], [[10, 14], [11, 17]])]
FAULT_SEEDS = {SEEDS[1]: "0", SEEDS[3]: "0", SEEDS[0]: "1", SEEDS[2]: "1"}
FAULT_ROWS = {"0": frozenset({1, 5, 6}), "1": frozenset({8, 15, 16})}

FIB_CLASSES = {"a": range(12, 19), "b": range(2, 8), "c": range(8, 12), "d": range(0, 2)}


def fibonacci_psi():
    psi = [0] * 19
    for k, letters in enumerate(FIB_CLASSES.values()):
        for a in letters:
            psi[a] = k
    return psi


def rao_instance():
    return SolveInstance(builtin("T4p"), RAO_WIDTH, RAO_HEIGHT, {RAO_POS: RAO_TILE})


def remove_forbidden_tiles(T4p, certificate=None):
    """T4 = T4' minus the two tiles ruled out by the 71x9 refutation, and iota: T4 -> T4'."""
    if certificate is not UNSAT and certificate is not True:
        raise MissingCertificate("removing tiles needs the 71x9 Unsat certificate")
    keep = [k for k, t in enumerate(T4p) if t not in FORBIDDEN_T4P]
    return T4p.subset(keep), Morphism2D.letter_map(keep, len(T4p))


def jmath_tile(t):
    return WangTile(t.right, JMATH_COLORS.get(t.top, t.top), t.left, JMATH_COLORS.get(t.bottom, t.bottom))


def jmath_map(T5, T4):
    """Index map T5 -> T4 induced by the color projection; None where the image is missing."""
    index = {t: k for k, t in enumerate(T4)}
    return [index.get(jmath_tile(t)) for t in T5]


def check_decoration(T5, T4):
    failures = []
    jm = jmath_map(T5, T4)
    missing = [k for k, m in enumerate(jm) if m is None]
    if missing:
        failures.append(f"tiles {missing} of T5 have no image in T4")
    fibers = {}
    for k, m in enumerate(jm):
        fibers.setdefault(m, []).append(k)
    collisions = {m: ks for m, ks in fibers.items() if len(ks) > 1 and m is not None}
    if collisions != {22: [22, 23]}:
        failures.append(f"unexpected collisions {collisions}")
    Dv = dominoes_with_surrounding(T5, 2, 3)
    top_2223 = sorted(p for p in Dv if p[1] in (22, 23))
    expected = [(0, 23), (3, 23), (7, 22), (13, 23), (18, 22)]
    if top_2223 != expected:
        failures.append(f"dominoes under 22/23 are {top_2223}")
    return {"jmath": jm, "collisions": {str(k): v for k, v in collisions.items()},
            "dominoes_below_22_23": top_2223, "failures": failures, "ok": not failures}


def x4_sft_forbidden_set():
    """D: surviving T5 dominoes at radius 3; G: matching T4 dominoes outside jmath(D)."""
    T5, T4 = builtin("T5"), builtin("T4")
    jm = jmath_map(T5, T4)
    D = {i: dominoes_with_surrounding(T5, i, 3) for i in (1, 2)}
    G = {}
    for i in (1, 2):
        image = {(jm[u], jm[v]) for u, v in D[i]}
        G[i] = set(matching_pairs(T4, i)) - image
    return D, G


def rauzy_graph(T, i, r):
    g = nx.DiGraph()
    g.add_nodes_from(range(len(T)))
    g.add_edges_from(sorted(dominoes_with_surrounding(T, i, r)))
    return g


@dataclass
class PipelineReport:
    steps: list = field(default_factory=list)
    cardinalities: list = field(default_factory=list)
    ok: bool = True

    def add(self, name, **info):
        ok = info.get("ok", True)
        self.steps.append({"step": name, **info})
        self.ok = self.ok and ok

    def to_json(self):
        return {"ok": self.ok, "cardinalities": self.cardinalities, "steps": self.steps}


def run_pipeline(budget=None, skip_unsat_check=False, strict=True):
    """Replay the whole chain T0 <- ... <- T12 ~ U, comparing every artifact with the data."""
    t0 = time.monotonic()
    report = PipelineReport()

    def left():
        if budget is None:
            return None
        rest = budget - (time.monotonic() - t0)
        if rest <= 0:
            raise Timeout(f"pipeline exceeded {budget} s")
        return rest

    def check(name, cond, detail):
        if not cond and strict:
            raise StepFailed(name, detail)
        return cond

    derived = {"T0": builtin("T0")}
    for src, dst, om, i, r, side in DESUB_STEPS_A:
        left()
        _desub_step(report, derived, src, dst, om, i, r, side, check)

    T4p = derived["T4p"]
    ok = check("absent tile", ABSENT_T4P not in T4p, f"{tuple(ABSENT_T4P)} is in T4'")
    report.add("absent tile", tile=list(ABSENT_T4P), ok=ok)
    if skip_unsat_check:
        cert = True
        report.add("rao 71x9", skipped=True, ok=True)
    else:
        s0 = time.monotonic()
        inst = SolveInstance(T4p, RAO_WIDTH, RAO_HEIGHT, {RAO_POS: RAO_TILE})
        cert = solve_rectangle(inst, budget=left(), propagation="sac")
        ok = check("rao 71x9", cert is UNSAT, "the 71x9 rectangle has a tiling")
        report.add("rao 71x9", verdict=repr(cert) if cert is UNSAT else "SAT",
                   seconds=round(time.monotonic() - s0, 3), ok=ok)
    T4, iota = remove_forbidden_tiles(T4p, cert)
    ok = check("remove tiles", T4 == builtin("T4") and iota == builtin("iota"),
               "T4 or iota differ from the data")
    derived["T4"] = T4
    report.add("remove tiles", removed=[list(t) for t in FORBIDDEN_T4P], size=len(T4),
               iota=iota.letter_images(), ok=ok)

    T5 = builtin("T5")
    derived["T5"] = T5
    deco = check_decoration(T5, T4)
    ok = check("decoration", deco["ok"] and deco["jmath"] == builtin("jmath").letter_images(),
               "; ".join(deco["failures"]) or "jmath differs from the data")
    report.add("decoration", **{k: v for k, v in deco.items() if k != "ok"}, ok=ok)

    left()
    sh = shear_tileset(T5, SHEAR_RADIUS)
    eta = sh.eta_morphism()
    ok = check("shear", sh.derived == builtin("T6") and eta == builtin("eta"),
               "T6 or eta differ from the data")
    derived["T6"] = sh.derived
    report.add("shear", radius=SHEAR_RADIUS, size=len(sh.derived), eta=list(sh.eta), ok=ok)

    for src, dst, om, i, r, side in DESUB_STEPS_B:
        left()
        _desub_step(report, derived, src, dst, om, i, r, side, check)

    U = builtin("U")
    try:
        eq = equivalent(U, derived["T12"])
    except NotEquivalent as e:
        check("T12 ~ U", False, str(e))
        report.add("T12 ~ U", ok=False)
    else:
        report.add("T12 ~ U", vertical=eq.vertical, horizontal=eq.horizontal,
                   tiles=list(eq.tiles), ok=True)
    derived["U"] = U
    report.cardinalities = [len(derived[k]) for k in TILESET_NAMES]
    ok = check("cardinalities", report.cardinalities == CARDINALITIES, str(report.cardinalities))
    report.ok = report.ok and ok
    return report


def _desub_step(report, derived, src, dst, om, i, r, side, check):
    T = derived[src]
    found = [list(c.tiles) for c in find_markers(T, i, r)]
    M = chain_markers(src)
    name = f"{src} -> {dst}"
    check(name, M in found, f"markers {M} not among {found}")
    res = find_substitution(T, M, i, r, side)
    ok_t = check(name, res.derived == builtin(dst), f"derived set differs from {dst}")
    ok_m = check(name, res.morphism == builtin(om), f"morphism differs from {om}")
    derived[dst] = res.derived
    report.add(name, axis=i, radius=r, side=side, markers=M, candidates=found,
               alternatives=[c for c in found if c != M], size=len(res.derived),
               morphism=om, ok=bool(ok_t and ok_m))


def chain_to_T0():
    """omega0 omega1 omega2 omega3 jmath eta omega6 ... omega11 rho, each as a morphism."""
    names = ["omega0", "omega1", "omega2", "omega3p", "iota", "jmath", "eta",
             "omega6", "omega7", "omega8", "omega9", "omega10", "omega11", "rho"]
    return [builtin(n) for n in names]


def tile_frequencies():
    """Frequencies of the T0 tiles pushed from the Perron vector of omegaU."""
    v, lam = perron_frequencies(builtin("omegaU"))
    return push_frequencies(chain_to_T0(), v), v, lam


def frequency_closed_forms():
    phi = (1 + 5 ** 0.5) / 2
    f = {7: 5 / (12 * phi + 14), 5: 1 / (5 * phi + 4), 2: 1 / (18 * phi + 10)}
    for k in (0, 1, 3, 6, 9):
        f[k] = 1 / (2 * phi + 6)
    for k in (4, 8, 10):
        f[k] = 1 / (8 * phi + 2)
    return [f[k] for k in range(11)]


def square_factors(T, r):
    """Edge-valid 2x2 words over T that admit a surrounding of radius r."""
    H = matching_pairs(T, 1)
    out = set()
    for a, b in H:
        for c, d in H:
            w = Word2D([[a, b], [c, d]])
            if T[a].top == T[c].bottom and T[b].top == T[d].bottom and has_surrounding(T, w, (r, r)):
                out.add(w)
    return out


def fixed_patch(seed, n):
    return generate_fixed_patch(builtin("omegaU"), seed, n)


def u_to_T6():
    return compose_all([builtin(n) for n in ("omega6", "omega7", "omega8", "omega9", "omega10",
                                            "omega11", "rho")])


def t4_plane(seed, xr, yr, n=None):
    """The T4 tiling jmath eta omega6..omega11 rho (z) on the rectangle xr x yr.

    z is the fixed point of omegaU^2 grown from seed; n iterations are used, or
    as many as needed to cover the sheared preimage of the rectangle.
    """
    need_x = (xr[0] - yr[1], xr[1] - yr[0])
    c6 = u_to_T6()
    k = 1 if n is None else n
    while True:
        y6 = apply_to_anchored(c6, fixed_patch(seed, k))
        if y6.covers(need_x, yr) or n is not None:
            break
        k += 1
    if not y6.covers(need_x, yr):
        raise ValueError(f"{n} iterations do not cover the window")
    eta = builtin("eta").letter_images()
    jm = builtin("jmath").letter_images()
    out = {}
    for y in range(yr[0], yr[1] + 1):
        for x in range(xr[0], xr[1] + 1):
            out[(x, y)] = jm[eta[y6[(x - y, y)]]]
    return out, k


def _as_word(cells, xr, yr):
    return Word2D([[cells[(x, y)] for x in range(xr[0], xr[1] + 1)] for y in range(yr[0], yr[1] + 1)])


def diagonal_breaks(word, cls):
    """Cells p of the word where membership in cls differs between p and p + (1, 1)."""
    bad = []
    for y in range(word.height - 1):
        for x in range(word.width - 1):
            if (word[x, y] in cls) != (word[x + 1, y + 1] in cls):
                bad.append((x, y))
    return bad


@dataclass
class FaultLine:
    seed: Word2D
    color: str
    iterations: int
    window: tuple
    tiling: Word2D  # bottom-left cell is the window corner
    slid: Word2D
    fault_row_colors: list
    tiling_valid: bool
    slid_valid: bool
    tiling_diagonal_breaks: list
    slid_diagonal_breaks: list
    seed_row: list


def fault_line_patch(seed, n=None, window=((-8, 7), (-5, 4))):
    if seed not in FAULT_SEEDS:
        raise SeedWithoutFaultLine(f"{seed!r} is not one of the four fault-line seeds")
    color = FAULT_SEEDS[seed]
    xr, yr = window
    wide = (xr[0] - 1, xr[1])
    cells, k = t4_plane(seed, wide, yr, n)
    T4 = builtin("T4")
    tiling = _as_word(cells, xr, yr)
    slid_cells = {(x, y): cells[(x, y)] if y <= -2 else cells[(x - 1, y)]
                  for y in range(yr[0], yr[1] + 1) for x in range(xr[0], xr[1] + 1)}
    slid = _as_word(slid_cells, xr, yr)
    row = [T4[cells[(x, -1)]].bottom for x in range(xr[0], xr[1] + 1)]
    z = fixed_patch(seed, k)
    (x0, x1), _ = z.bounds()
    seed_row = [z[(x, -1)] for x in range(x0, x1 + 1)]
    return FaultLine(seed, color, k, window, tiling, slid, row, is_valid(T4, tiling),
                     is_valid(T4, slid), diagonal_breaks(tiling, GREEN_T4),
                     diagonal_breaks(slid, GREEN_T4), seed_row)


def marker_rows(word, markers=(0, 1)):
    """Indices of rows made only of marker tiles; rows mixing both kinds are an error."""
    rows = []
    ms = set(markers)
    for y in range(word.height):
        inside = [int(a) in ms for a in word.cells[y]]
        if all(inside):
            rows.append(y)
        elif any(inside):
            raise ValueError(f"row {y} mixes marker and non-marker tiles")
    return rows


def strip_heights(word):
    rows = marker_rows(word)
    return [b - a for a, b in zip(rows, rows[1:])]


def fibonacci_word(length):
    """Prefix of the fixed point of 5 -> 54, 4 -> 5."""
    w = "5"
    while len(w) < length:
        w = "".join("54" if c == "5" else "5" for c in w)
    return w[:length]


def is_fibonacci_factor(heights):
    s = "".join(str(h) for h in heights)
    if not s:
        return True
    if set(s) - {"4", "5"}:
        return False
    return s in fibonacci_word(4 * len(s) + 64)


def t0_patch(seed, n):
    """The fixed patch of omegaU^2 pushed all the way down to T0, shear ignored.

    Shearing preserves rows, so the row structure (marker rows, strip heights)
    is the same as in the true T0 image.
    """
    comp = compose_all(chain_to_T0())
    return apply_to_anchored(comp, fixed_patch(seed, n))


def tile_heights_in_T0():
    comp = compose_all(chain_to_T0())
    return [r.height for r in comp.rules]

