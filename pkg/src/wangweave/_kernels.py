"""Hot search kernels. Compiled with numba unless WANGWEAVE_NO_NUMBA is set."""
import os

import numpy as np

USE_NUMBA = os.environ.get("WANGWEAVE_NO_NUMBA", "").lower() not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if not USE_NUMBA:
    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f

# status codes returned by dlx_run
DONE = 0
FOUND = 1
PAUSED = 2


@njit(cache=True)
def _cover(c, L, R, U, D, C, S):
    L[R[c]] = L[c]
    R[L[c]] = R[c]
    i = D[c]
    while i != c:
        j = R[i]
        while j != i:
            U[D[j]] = U[j]
            D[U[j]] = D[j]
            S[C[j]] -= 1
            j = R[j]
        i = D[i]


@njit(cache=True)
def _uncover(c, L, R, U, D, C, S):
    i = U[c]
    while i != c:
        j = L[i]
        while j != i:
            S[C[j]] += 1
            U[D[j]] = j
            D[U[j]] = j
            j = L[j]
        i = U[i]
    L[R[c]] = c
    R[L[c]] = c


@njit(cache=True)
def dlx_run(L, R, U, D, C, S, colsel, rowsel, st, budget, stop_at):
    """Algorithm X on dancing links, written as a resumable state machine.

    Node 0 is the root, nodes 1..ncols are column headers.  st holds
    [level, phase, solutions, steps].  Phase 0 selects a column at the current
    level, phase 1 backtracks.  Returns FOUND when a solution sits in
    rowsel[:level] and solutions has reached stop_at, DONE when the tree is
    exhausted and PAUSED when the step budget ran out.
    """
    level = st[0]
    phase = st[1]
    steps = 0
    while steps < budget:
        steps += 1
        if phase == 0:
            if R[0] == 0:
                st[2] += 1
                phase = 1
                if stop_at > 0 and st[2] >= stop_at:
                    st[0] = level
                    st[1] = phase
                    st[3] += steps
                    return FOUND
                continue
            # minimum remaining values, lowest index on ties
            best = -1
            bs = 1 << 62
            c = R[0]
            while c != 0:
                if S[c] < bs:
                    bs = S[c]
                    best = c
                    if bs == 0:
                        break
                c = R[c]
            if bs == 0:
                phase = 1
                continue
            _cover(best, L, R, U, D, C, S)
            r = D[best]
            colsel[level] = best
            rowsel[level] = r
            j = R[r]
            while j != r:
                _cover(C[j], L, R, U, D, C, S)
                j = R[j]
            level += 1
        else:
            if level == 0:
                st[0] = 0
                st[1] = 1
                st[3] += steps
                return DONE
            level -= 1
            r = rowsel[level]
            c = colsel[level]
            j = L[r]
            while j != r:
                _uncover(C[j], L, R, U, D, C, S)
                j = L[j]
            r = D[r]
            if r == c:
                _uncover(c, L, R, U, D, C, S)
                continue
            rowsel[level] = r
            j = R[r]
            while j != r:
                _cover(C[j], L, R, U, D, C, S)
                j = R[j]
            level += 1
            phase = 0
    st[0] = level
    st[1] = phase
    st[3] += steps
    return PAUSED


@njit(cache=True)
def _propagate(dom, codes, queue, inq, qlen, seen):
    """Worklist arc consistency starting from the cells in queue[:qlen]."""
    H, W, n = dom.shape
    head = 0
    size = H * W
    while qlen > 0:
        cell = queue[head]
        head = (head + 1) % size
        qlen -= 1
        inq[cell] = False
        y = cell // W
        x = cell % W
        for side in range(4):
            # the neighbour on this side is revised against (y, x)
            if side == 0:
                if x == W - 1:
                    continue
                ny, nx_, mine, theirs = y, x + 1, 0, 2
            elif side == 1:
                if y == H - 1:
                    continue
                ny, nx_, mine, theirs = y + 1, x, 1, 3
            elif side == 2:
                if x == 0:
                    continue
                ny, nx_, mine, theirs = y, x - 1, 2, 0
            else:
                if y == 0:
                    continue
                ny, nx_, mine, theirs = y - 1, x, 3, 1
            seen[:] = False
            for t in range(n):
                if dom[y, x, t]:
                    seen[codes[t, mine]] = True
            alive = 0
            changed = False
            for t in range(n):
                if dom[ny, nx_, t]:
                    if seen[codes[t, theirs]]:
                        alive += 1
                    else:
                        dom[ny, nx_, t] = False
                        changed = True
            if alive == 0:
                return False
            if changed:
                c2 = ny * W + nx_
                if not inq[c2]:
                    inq[c2] = True
                    queue[(head + qlen) % size] = c2
                    qlen += 1
    return True


@njit(cache=True)
def _ncolors(codes):
    m = 1
    for t in range(codes.shape[0]):
        for k in range(4):
            m = max(m, codes[t, k] + 1)
    return m


@njit(cache=True)
def arc_consistency(dom, codes, fixed_h, fixed_v):
    """Prune dom[y, x, t] until every kept tile has a matching neighbour on each side.

    fixed_h[y, 0] / fixed_h[y, 1] are required left / right boundary colors of
    row y (-1 for free), fixed_v[x, 0] / fixed_v[x, 1] the bottom / top ones of
    column x.  Returns False when some cell loses all its tiles.
    """
    H, W, n = dom.shape
    for y in range(H):
        for x in range(W):
            alive = 0
            for t in range(n):
                if not dom[y, x, t]:
                    continue
                if x == 0 and fixed_h[y, 0] != -1 and codes[t, 2] != fixed_h[y, 0]:
                    dom[y, x, t] = False
                elif x == W - 1 and fixed_h[y, 1] != -1 and codes[t, 0] != fixed_h[y, 1]:
                    dom[y, x, t] = False
                elif y == 0 and fixed_v[x, 0] != -1 and codes[t, 3] != fixed_v[x, 0]:
                    dom[y, x, t] = False
                elif y == H - 1 and fixed_v[x, 1] != -1 and codes[t, 1] != fixed_v[x, 1]:
                    dom[y, x, t] = False
                else:
                    alive += 1
            if alive == 0:
                return False
    queue = np.arange(H * W)
    inq = np.ones(H * W, dtype=np.bool_)
    seen = np.zeros(_ncolors(codes), dtype=np.bool_)
    return _propagate(dom, codes, queue, inq, H * W, seen)


@njit(cache=True)
def singleton_consistency(dom, codes):
    """Drop every tile whose placement alone makes arc consistency fail.

    dom must already be arc consistent.  Repeats until stable; returns False
    when the instance is refuted.
    """
    H, W, n = dom.shape
    size = H * W
    queue = np.zeros(size, np.int64)
    inq = np.zeros(size, dtype=np.bool_)
    seen = np.zeros(_ncolors(codes), dtype=np.bool_)
    changed = True
    while changed:
        changed = False
        for y in range(H):
            for x in range(W):
                for t in range(n):
                    if not dom[y, x, t]:
                        continue
                    trial = dom.copy()
                    trial[y, x, :] = False
                    trial[y, x, t] = True
                    inq[:] = False
                    queue[0] = y * W + x
                    inq[queue[0]] = True
                    if not _propagate(trial, codes, queue, inq, 1, seen):
                        dom[y, x, t] = False
                        changed = True
                        inq[:] = False
                        queue[0] = y * W + x
                        inq[queue[0]] = True
                        if not _propagate(dom, codes, queue, inq, 1, seen):
                            return False
    return True


def arc_consistency_numpy(dom, codes, fixed_h, fixed_v):
    """Vectorized twin of arc_consistency; same contract, same fixpoint."""
    H, W, n = dom.shape
    nv = int(max(codes[:, 0].max(), codes[:, 2].max())) + 1 if n else 1
    nh = int(max(codes[:, 1].max(), codes[:, 3].max())) + 1 if n else 1
    eye_v = np.eye(nv, dtype=np.float64)
    eye_h = np.eye(nh, dtype=np.float64)
    Rm, Lm = eye_v[codes[:, 0]], eye_v[codes[:, 2]]
    Tm, Bm = eye_h[codes[:, 1]], eye_h[codes[:, 3]]
    left = fixed_h[:, 0]
    rows = np.nonzero(left >= 0)[0]
    dom[rows, 0, :] &= codes[None, :, 2] == left[rows, None]
    right = fixed_h[:, 1]
    rows = np.nonzero(right >= 0)[0]
    dom[rows, W - 1, :] &= codes[None, :, 0] == right[rows, None]
    bottom = fixed_v[:, 0]
    cols = np.nonzero(bottom >= 0)[0]
    dom[0, cols, :] &= codes[None, :, 3] == bottom[cols, None]
    top = fixed_v[:, 1]
    cols = np.nonzero(top >= 0)[0]
    dom[H - 1, cols, :] &= codes[None, :, 1] == top[cols, None]
    while True:
        before = int(dom.sum())
        d = dom.astype(np.float64)
        # colors offered on each side of every cell
        r_have, l_have = d @ Rm > 0, d @ Lm > 0
        t_have, b_have = d @ Tm > 0, d @ Bm > 0
        dom[:, 1:, :] &= (r_have[:, :-1, :].astype(np.float64) @ Lm.T) > 0
        dom[:, :-1, :] &= (l_have[:, 1:, :].astype(np.float64) @ Rm.T) > 0
        dom[1:, :, :] &= (t_have[:-1, :, :].astype(np.float64) @ Bm.T) > 0
        dom[:-1, :, :] &= (b_have[1:, :, :].astype(np.float64) @ Tm.T) > 0
        if not dom.any(axis=2).all():
            return False
        if int(dom.sum()) == before:
            return True


@njit(cache=True)
def build_links(ncols, row_ptr, row_cols):
    """Dancing-links arrays for the 0/1 matrix given in CSR form (columns 1-based)."""
    nrows = row_ptr.shape[0] - 1
    nnodes = ncols + 1 + row_cols.shape[0]
    L = np.empty(nnodes, np.int64)
    R = np.empty(nnodes, np.int64)
    U = np.empty(nnodes, np.int64)
    D = np.empty(nnodes, np.int64)
    C = np.zeros(nnodes, np.int64)
    ROW = np.full(nnodes, -1, np.int64)
    S = np.zeros(ncols + 1, np.int64)
    for c in range(ncols + 1):
        L[c] = c - 1
        R[c] = c + 1
        U[c] = c
        D[c] = c
        C[c] = c
    L[0] = ncols
    R[ncols] = 0
    node = ncols + 1
    for r in range(nrows):
        first = node
        for k in range(row_ptr[r], row_ptr[r + 1]):
            c = row_cols[k]
            C[node] = c
            ROW[node] = r
            U[node] = U[c]
            D[node] = c
            D[U[c]] = node
            U[c] = node
            S[c] += 1
            L[node] = node - 1
            R[node] = node + 1
            node += 1
        if node > first:
            L[first] = node - 1
            R[node - 1] = first
    return L, R, U, D, C, S, ROW


def singleton_consistency_numpy(dom, codes):
    H, W, n = dom.shape
    free_h = np.full((H, 2), -1, np.int64)
    free_v = np.full((W, 2), -1, np.int64)
    changed = True
    while changed:
        changed = False
        for y in range(H):
            for x in range(W):
                for t in np.nonzero(dom[y, x])[0]:
                    trial = dom.copy()
                    trial[y, x, :] = False
                    trial[y, x, t] = True
                    if not arc_consistency_numpy(trial, codes, free_h, free_v):
                        dom[y, x, t] = False
                        changed = True
                        if not arc_consistency_numpy(dom, codes, free_h, free_v):
                            return False
    return True
