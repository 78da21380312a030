"""Rectangle tiling search: exact cover on dancing links, surroundings, dominoes, CNF."""
from __future__ import annotations

import functools
import time

import numpy as np

from . import _kernels as K
from .errors import Timeout, WangError
from .words import Word2D, is_valid


class _Unsat:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "UNSAT"

    def __bool__(self):
        return False


UNSAT = _Unsat()


class SolveInstance:
    """A rectangle to fill, with optional fixed tiles and boundary colors.

    Boundary lists are indexed by row (left, right) or column (bottom, top);
    None entries leave that half-edge free.
    """

    def __init__(self, tileset, width, height, preassigned=None,
                 left=None, right=None, bottom=None, top=None):
        if width <= 0 or height <= 0:
            raise WangError(f"rectangle must be non-empty, got {width}x{height}")
        self.tileset = tileset
        self.width = int(width)
        self.height = int(height)
        self.preassigned = {}
        for (x, y), t in dict(preassigned or {}).items():
            if not (0 <= x < width and 0 <= y < height):
                raise WangError(f"preassigned position {(x, y)} outside {width}x{height}")
            if not 0 <= t < len(tileset):
                raise WangError(f"tile index {t} out of range")
            self.preassigned[(int(x), int(y))] = int(t)
        self.left = self._side(left, height, "left")
        self.right = self._side(right, height, "right")
        self.bottom = self._side(bottom, width, "bottom")
        self.top = self._side(top, width, "top")

    @staticmethod
    def _side(colors, n, name):
        if colors is None:
            return [None] * n
        colors = [None if c is None else str(c) for c in colors]
        if len(colors) != n:
            raise WangError(f"{name} boundary needs {n} entries, got {len(colors)}")
        return colors

    def domains(self, propagation="ac"):
        """Boolean candidate array dom[y, x, t] after propagation, or None if refuted.

        propagation is "ac" (arc consistency) or "sac" (singleton arc
        consistency on top of it, much stronger on long thin rectangles).
        """
        T = self.tileset
        n = len(T)
        H, W = self.height, self.width
        vc, hc, codes = T.codes()
        vi = {c: k for k, c in enumerate(vc)}
        hi = {c: k for k, c in enumerate(hc)}
        dom = np.ones((H, W, max(n, 1)), dtype=np.bool_)
        if n == 0:
            return None
        for (x, y), t in self.preassigned.items():
            dom[y, x, :] = False
            dom[y, x, t] = True
        fixed_h = np.full((H, 2), -1, np.int64)
        fixed_v = np.full((W, 2), -1, np.int64)
        # a color absent from the tile set can never be matched
        missing = -2
        for y in range(H):
            if self.left[y] is not None:
                fixed_h[y, 0] = vi.get(self.left[y], missing)
            if self.right[y] is not None:
                fixed_h[y, 1] = vi.get(self.right[y], missing)
        for x in range(W):
            if self.bottom[x] is not None:
                fixed_v[x, 0] = hi.get(self.bottom[x], missing)
            if self.top[x] is not None:
                fixed_v[x, 1] = hi.get(self.top[x], missing)
        if (fixed_h == missing).any() or (fixed_v == missing).any():
            return None
        ac = K.arc_consistency if K.USE_NUMBA else K.arc_consistency_numpy
        if not ac(dom, codes, fixed_h, fixed_v):
            return None
        if not dom.any(axis=2).all():
            return None
        if propagation == "sac":
            sc = K.singleton_consistency if K.USE_NUMBA else K.singleton_consistency_numpy
            if not sc(dom, codes):
                return None
        elif propagation != "ac":
            raise ValueError(f"unknown propagation {propagation!r}")
        return dom


class ExactCover:
    """The exact-cover matrix of an instance, plus the row -> (x, y, tile) table."""

    def __init__(self, inst, dom):
        T = inst.tileset
        H, W = inst.height, inst.width
        _, _, codes = T.codes()
        ncells = H * W
        col = ncells + 1
        # color columns for the edge right of (x, y) and the edge above (x, y)
        right_cols = {}
        top_cols = {}
        for y in range(H):
            for x in range(W):
                here = np.nonzero(dom[y, x])[0]
                if x < W - 1:
                    there = np.nonzero(dom[y, x + 1])[0]
                    colors = sorted(set(codes[here, 0].tolist()) | set(codes[there, 2].tolist()))
                    if len(colors) > 1:
                        right_cols[(x, y)] = {c: col + k for k, c in enumerate(colors)}
                        col += len(colors)
                if y < H - 1:
                    there = np.nonzero(dom[y + 1, x])[0]
                    colors = sorted(set(codes[here, 1].tolist()) | set(codes[there, 3].tolist()))
                    if len(colors) > 1:
                        top_cols[(x, y)] = {c: col + k for k, c in enumerate(colors)}
                        col += len(colors)
        self.ncols = col - 1
        ptr = [0]
        cols = []
        rows = []
        for y in range(H):
            for x in range(W):
                rc = right_cols.get((x, y))
                tc = top_cols.get((x, y))
                lc = right_cols.get((x - 1, y))
                bc = top_cols.get((x, y - 1))
                for t in np.nonzero(dom[y, x])[0].tolist():
                    r, tp, l, b = codes[t]
                    cols.append(1 + y * W + x)
                    if rc is not None:
                        cols.extend(v for c, v in rc.items() if c != r)
                    if tc is not None:
                        cols.extend(v for c, v in tc.items() if c != tp)
                    if lc is not None:
                        cols.append(lc[l])
                    if bc is not None:
                        cols.append(bc[b])
                    ptr.append(len(cols))
                    rows.append((x, y, t))
        self.rows = rows
        self.row_ptr = np.array(ptr, dtype=np.int64)
        self.row_cols = np.array(cols, dtype=np.int64)


class Search:
    """Resumable dancing-links search over one instance."""

    def __init__(self, inst, propagation="ac"):
        self.inst = inst
        self.dom = inst.domains(propagation)
        self.empty = self.dom is None
        if self.empty:
            return
        self.ec = ExactCover(inst, self.dom)
        links = K.build_links(self.ec.ncols, self.ec.row_ptr, self.ec.row_cols)
        self.L, self.R, self.U, self.D, self.C, self.S, self.ROW = links
        depth = inst.width * inst.height + 1
        self.colsel = np.zeros(depth, np.int64)
        self.rowsel = np.zeros(depth, np.int64)
        self.st = np.zeros(4, np.int64)
        self.finished = False

    @property
    def steps(self):
        return 0 if self.empty else int(self.st[3])

    @property
    def solutions(self):
        return 0 if self.empty else int(self.st[2])

    def run(self, stop_at=1, budget=None, chunk=200_000):
        """Advance until stop_at solutions in total, exhaustion or the time budget."""
        if self.empty or self.finished:
            return K.DONE
        t0 = time.monotonic()
        while True:
            status = K.dlx_run(self.L, self.R, self.U, self.D, self.C, self.S,
                               self.colsel, self.rowsel, self.st, chunk, stop_at)
            if status == K.DONE:
                self.finished = True
                return status
            if status == K.FOUND:
                return status
            if budget is not None and time.monotonic() - t0 > budget:
                raise Timeout(f"no verdict after {budget} s ({self.steps} search steps)")

    def current(self):
        inst = self.inst
        cells = np.zeros((inst.height, inst.width), np.int64)
        for k in range(int(self.st[0])):
            x, y, t = self.ec.rows[self.ROW[self.rowsel[k]]]
            cells[y, x] = t
        return Word2D(cells)


def solve_rectangle(inst, budget=None, propagation="ac"):
    """First tiling in the deterministic search order, or UNSAT. Raises Timeout."""
    s = Search(inst, propagation)
    if s.run(stop_at=1, budget=budget) == K.FOUND:
        w = s.current()
        assert is_valid(inst.tileset, w)
        return w
    return UNSAT


def iter_solutions(inst, budget=None):
    s = Search(inst)
    k = 1
    while s.run(stop_at=k, budget=budget) == K.FOUND:
        yield s.current()
        k += 1


def count_solutions(inst, limit=None, budget=None):
    s = Search(inst)
    if s.empty:
        return 0
    s.run(stop_at=limit or 0, budget=budget)
    return s.solutions


def has_surrounding(T, pattern, margin, budget=None):
    mx, my = margin
    pre = {}
    for y in range(pattern.height):
        for x in range(pattern.width):
            pre[(x + mx, y + my)] = pattern[x, y]
    inst = SolveInstance(T, pattern.width + 2 * mx, pattern.height + 2 * my, pre)
    return solve_rectangle(inst, budget=budget) is not UNSAT


def matching_pairs(T, i):
    _, _, codes = T.codes()
    n = len(T)
    out = []
    for u in range(n):
        for v in range(n):
            if (i == 1 and codes[u, 0] == codes[v, 2]) or (i == 2 and codes[u, 1] == codes[v, 3]):
                out.append((u, v))
    return out


def domino(i, u, v):
    return Word2D([[u, v]]) if i == 1 else Word2D([[u], [v]])


@functools.lru_cache(maxsize=None)
def _dominoes(T, i, r):
    if r == 0:
        return tuple(matching_pairs(T, i))
    # surroundings only shrink as r grows, so test the previous survivors
    return tuple(p for p in _dominoes(T, i, r - 1) if has_surrounding(T, domino(i, *p), (r, r)))


def dominoes_with_surrounding(T, i, r):
    """Ordered pairs (u, v) whose domino along axis i has a surrounding of radius r."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    if i not in (1, 2):
        raise ValueError(f"axis must be 1 or 2, got {i}")
    return set(_dominoes(T, i, r))


def export_cnf(inst):
    """DIMACS text; variable (y*width + x)*|T| + t + 1 means tile t sits at (x, y)."""
    T = inst.tileset
    n = len(T)
    W, H = inst.width, inst.height
    _, _, codes = T.codes()

    def var(x, y, t):
        return (y * W + x) * n + t + 1

    clauses = []
    bad_h = [(a, b) for a in range(n) for b in range(n) if codes[a, 0] != codes[b, 2]]
    bad_v = [(a, b) for a in range(n) for b in range(n) if codes[a, 1] != codes[b, 3]]
    for y in range(H):
        for x in range(W):
            clauses.append([var(x, y, t) for t in range(n)])
            for a in range(n):
                for b in range(a + 1, n):
                    clauses.append([-var(x, y, a), -var(x, y, b)])
    for y in range(H):
        for x in range(W):
            if x + 1 < W:
                clauses.extend([-var(x, y, a), -var(x + 1, y, b)] for a, b in bad_h)
            if y + 1 < H:
                clauses.extend([-var(x, y, a), -var(x, y + 1, b)] for a, b in bad_v)
    for (x, y), t in sorted(inst.preassigned.items()):
        clauses.append([var(x, y, t)])
    for y in range(H):
        for x, want, pos in ((0, inst.left[y], 2), (W - 1, inst.right[y], 0)):
            if want is not None:
                clauses.extend([-var(x, y, t)] for t in range(n) if T[t][pos] != want)
    for x in range(W):
        for y, want, pos in ((0, inst.bottom[x], 3), (H - 1, inst.top[x], 1)):
            if want is not None:
                clauses.extend([-var(x, y, t)] for t in range(n) if T[t][pos] != want)
    return Cnf(W * H * n, clauses)


class Cnf:
    def __init__(self, nvars, clauses):
        self.nvars = nvars
        self.clauses = clauses

    def dimacs(self):
        lines = [f"p cnf {self.nvars} {len(self.clauses)}"]
        lines.extend(" ".join(map(str, c)) + " 0" for c in self.clauses)
        return "\n".join(lines) + "\n"

    def write(self, path):
        with open(path, "w") as fh:
            fh.write(self.dimacs())


def decode_model(inst, model):
    n = len(inst.tileset)
    cells = np.zeros((inst.height, inst.width), np.int64)
    for lit in model:
        if lit > 0:
            k = lit - 1
            cell, t = divmod(k, n)
            y, x = divmod(cell, inst.width)
            cells[y, x] = t
    return Word2D(cells)


def solve_external(inst, budget=None):
    """Solve the exported CNF with an installed SAT library (pysat Glucose, else pycosat)."""
    cnf = export_cnf(inst)
    try:
        from pysat.solvers import Glucose4
    except ImportError:
        Glucose4 = None
    if Glucose4 is not None:
        with Glucose4(bootstrap_with=cnf.clauses) as g:
            sat = g.solve()
            model = g.get_model() if sat else None
    else:
        try:
            import pycosat
        except ImportError as e:
            raise WangError("no external SAT backend: install python-sat or pycosat") from e
        res = pycosat.solve(cnf.clauses)
        sat = isinstance(res, list)
        model = res if sat else None
    if not sat:
        return UNSAT
    w = decode_model(inst, model)
    assert is_valid(inst.tileset, w)
    return w
