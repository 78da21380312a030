"""Two-dimensional morphisms: application, composition, incidence, fixed points, frequencies."""
from __future__ import annotations

import numpy as np
import networkx as nx

from .errors import (AlphabetMismatch, IncompatibleShapes, Inconsistent, NotPrimitive,
                     NotProlongable, SeedNotInDomain)
from .words import Word2D


class Morphism2D:
    """Letter -> rectangular word. rules[a] is the image of letter a."""

    __slots__ = ("rules", "codomain_size")

    def __init__(self, rules, codomain_size=None):
        self.rules = tuple(r if isinstance(r, Word2D) else Word2D.from_display(r) for r in rules)
        top = max((max(r.letters()) for r in self.rules), default=-1) + 1
        if codomain_size is None:
            codomain_size = top
        elif top > codomain_size:
            raise AlphabetMismatch(f"image letter {top - 1} outside codomain of size {codomain_size}")
        self.codomain_size = codomain_size

    @classmethod
    def identity(cls, n):
        return cls([Word2D.letter(a) for a in range(n)], n)

    @classmethod
    def letter_map(cls, images, codomain_size=None):
        return cls([Word2D.letter(b) for b in images], codomain_size)

    @property
    def domain_size(self):
        return len(self.rules)

    def __call__(self, a):
        return self.rules[a]

    def __len__(self):
        return len(self.rules)

    def __eq__(self, other):
        return isinstance(other, Morphism2D) and self.rules == other.rules \
            and self.codomain_size == other.codomain_size

    def __hash__(self):
        return hash(self.rules)

    def __repr__(self):
        return f"Morphism2D({self.domain_size} -> {self.codomain_size})"

    def is_letter_map(self):
        return all(r.shape == (1, 1) for r in self.rules)

    def letter_images(self):
        return [r[0, 0] for r in self.rules]


def _grid(omega, w):
    imgs = omega.rules
    widths = np.array([[imgs[a].width for a in row] for row in w.cells])
    heights = np.array([[imgs[a].height for a in row] for row in w.cells])
    if (widths != widths[0:1, :]).any():
        x = int(np.nonzero((widths != widths[0:1, :]).any(axis=0))[0][0])
        raise IncompatibleShapes(f"images in column {x} have different widths")
    if (heights != heights[:, 0:1]).any():
        y = int(np.nonzero((heights != heights[:, 0:1]).any(axis=1))[0][0])
        raise IncompatibleShapes(f"images in row {y} have different heights")
    return widths[0], heights[:, 0]


def apply(omega, w):
    """Block-assembled image of w; the image of w's bottom-left letter sits at the origin."""
    return apply_anchored(omega, w, (0, 0))[0]


def apply_anchored(omega, w, anchor):
    """Image of w, together with where the grid point anchor of w lands in the image."""
    if max(w.letters()) >= omega.domain_size:
        raise AlphabetMismatch(f"letter {max(w.letters())} outside domain of size {omega.domain_size}")
    cw, rh = _grid(omega, w)
    xs = np.concatenate([[0], np.cumsum(cw)])
    ys = np.concatenate([[0], np.cumsum(rh)])
    out = np.zeros((ys[-1], xs[-1]), np.int64)
    for a in w.letters():
        img = omega.rules[a].cells
        yy, xx = np.nonzero(w.cells == a)
        oy, ox = ys[yy], xs[xx]
        h, wd = img.shape
        for j in range(h):
            for i in range(wd):
                out[oy + j, ox + i] = img[j, i]
    ax, ay = anchor
    return Word2D(out), (int(xs[ax]), int(ys[ay]))


def compose(outer, inner):
    """The morphism a -> outer(inner(a))."""
    if inner.codomain_size != outer.domain_size:
        raise AlphabetMismatch(f"inner codomain {inner.codomain_size} != outer domain {outer.domain_size}")
    return Morphism2D([apply(outer, r) for r in inner.rules], outer.codomain_size)


def compose_all(morphisms):
    """Product m0 m1 ... mk, applied right to left."""
    out = morphisms[-1]
    for m in reversed(morphisms[:-1]):
        out = compose(m, out)
    return out


def incidence_matrix(omega):
    M = np.zeros((omega.codomain_size, omega.domain_size), np.int64)
    for a, r in enumerate(omega.rules):
        M[:, a] = np.bincount(r.cells.ravel(), minlength=omega.codomain_size)
    return M


def is_primitive(omega):
    """(True, m) with m the smallest power whose incidence matrix is positive, else (False, None)."""
    M = incidence_matrix(omega)
    n = M.shape[0]
    if M.shape[0] != M.shape[1]:
        raise AlphabetMismatch("primitivity needs a self-morphism")
    B = (M > 0).astype(np.int64)
    P = B.copy()
    for m in range(1, (n - 1) ** 2 + 2):
        if P.all():
            return True, m
        P = ((P @ B) > 0).astype(np.int64)
    return False, None


def perron_frequencies(omega, tol=1e-15, max_iter=100_000):
    """Normalized positive right Perron eigenvector and its eigenvalue."""
    ok, _ = is_primitive(omega)
    if not ok:
        raise NotPrimitive("incidence matrix has no positive power")
    M = incidence_matrix(omega).astype(np.float64)
    v = np.full(M.shape[0], 1.0 / M.shape[0])
    for _ in range(max_iter):
        w = M @ v
        w /= w.sum()
        if np.abs(w - v).max() < tol:
            v = w
            break
        v = w
    lam = float((M @ v).sum() / v.sum())
    return v, lam


def push_frequencies(chain, v):
    """Letter frequencies after the product chain[0] chain[1] ... chain[-1] of morphisms."""
    u = np.asarray(v, dtype=np.float64)
    for m in reversed(chain):
        u = incidence_matrix(m) @ u
    return u / u.sum()


def seed_successor(omega, seed):
    """Central 2x2 block of omega(seed) around the image of the seed's inner corner."""
    if seed.shape != (2, 2):
        raise SeedNotInDomain("seeds are 2x2 words")
    try:
        img, (cx, cy) = apply_anchored(omega, seed, (1, 1))
    except IncompatibleShapes as e:
        raise SeedNotInDomain(str(e)) from e
    return img.window(cx - 1, cy - 1, 2, 2)


def seed_graph(omega, seeds):
    g = nx.DiGraph()
    for s in seeds:
        g.add_edge(s, seed_successor(omega, s))
    return g


def square_fixed_seeds(omega, factors2x2):
    """Seeds s with omega^2 mapping s back to itself at the origin (cycles of length 1 or 2)."""
    out = set()
    for s in factors2x2:
        t = seed_successor(omega, s)
        if seed_successor(omega, t) == s:
            out.add(s)
    return out


class AnchoredWord:
    """A word placed in the plane: plane position p is word cell p + origin."""

    __slots__ = ("word", "origin")

    def __init__(self, word, origin):
        self.word = word
        self.origin = tuple(origin)

    def __getitem__(self, p):
        return self.word[p[0] + self.origin[0], p[1] + self.origin[1]]

    def bounds(self):
        """((xmin, xmax), (ymin, ymax)) in plane coordinates, inclusive."""
        ox, oy = self.origin
        return (-ox, self.word.width - 1 - ox), (-oy, self.word.height - 1 - oy)

    def covers(self, xr, yr):
        (x0, x1), (y0, y1) = self.bounds()
        return x0 <= xr[0] and xr[1] <= x1 and y0 <= yr[0] and yr[1] <= y1

    def window(self, xr, yr):
        """Rectangle [xr[0], xr[1]] x [yr[0], yr[1]] as a word, bottom-left first."""
        ox, oy = self.origin
        return self.word.window(xr[0] + ox, yr[0] + oy, xr[1] - xr[0] + 1, yr[1] - yr[0] + 1)


def apply_to_anchored(omega, aw):
    img, org = apply_anchored(omega, aw.word, aw.origin)
    return AnchoredWord(img, org)


def generate_fixed_patch(omega, seed, n):
    """omega^(2n)(seed) with the seed's inner corner kept at the origin."""
    cur = AnchoredWord(seed, (1, 1))
    for _ in range(n):
        nxt = apply_to_anchored(omega, apply_to_anchored(omega, cur))
        ox = nxt.origin[0] - cur.origin[0]
        oy = nxt.origin[1] - cur.origin[1]
        if ox < 0 or oy < 0 or nxt.word.window(ox, oy, cur.word.width, cur.word.height) != cur.word:
            raise NotProlongable("previous patch does not sit at the origin of the next one")
        cur = nxt
    return cur


def quotient_morphism(omega, psi, size=None):
    """tau on class letters with tau(psi(a)) = psi(omega(a)); psi[a] is the class of a."""
    psi = list(psi)
    if len(psi) != omega.domain_size or omega.domain_size != omega.codomain_size:
        raise AlphabetMismatch("psi must be total on the alphabet of a self-morphism")
    size = size or max(psi) + 1
    images = {}
    for a, r in enumerate(omega.rules):
        proj = r.map(lambda b: psi[b])
        k = psi[a]
        if k in images and images[k] != proj:
            raise Inconsistent(f"letters of class {k} have different projected images")
        images[k] = proj
    if sorted(images) != list(range(size)):
        raise Inconsistent("some class has no letter")
    return Morphism2D([images[k] for k in range(size)], size)
