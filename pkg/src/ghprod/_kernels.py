"""Compiled inner loops for the exact GH solvers.

The enumerations visit candidates in increasing encoding order and accept
only strict improvements, so the witness is the smallest encoding among the
minimisers. The bisection search returns the lexicographically first optimal
map pair, which is the same witness the map-pair enumeration reports.
"""
import numpy as np
from numba import njit

HIGH_BITS = 6


@njit(cache=True)
def subset_enum(C, nx, ny):
    """Minimum of max C[c, c'] over doubly surjective masks of nx*ny cells.

    Cell c = i * ny + j stands for the pair (x_i, y_j). The low bits of the
    mask are tabulated once, the top HIGH_BITS bits are looped over.
    Returns (best value, best mask, number of correspondences).
    """
    B = nx * ny
    H = min(B, HIGH_BITS)
    L = B - H
    nlow = 1 << L
    dis_low = np.zeros(nlow)
    rows_low = np.zeros(nlow, np.int64)
    cols_low = np.zeros(nlow, np.int64)
    rc = np.zeros((H, nlow))
    for t in range(L):
        start = 1 << t
        for m in range(start, start << 1):
            rest = m ^ start
            v = dis_low[rest]
            r = rest
            c = 0
            while r:
                if r & 1:
                    w = C[t, c]
                    if w > v:
                        v = w
                r >>= 1
                c += 1
            dis_low[m] = v
            rows_low[m] = rows_low[rest] | (1 << (t // ny))
            cols_low[m] = cols_low[rest] | (1 << (t % ny))
            for hh in range(H):
                w = C[L + hh, t]
                prev = rc[hh, rest]
                rc[hh, m] = w if w > prev else prev

    full_rows = (1 << nx) - 1
    full_cols = (1 << ny) - 1
    best = np.inf
    best_mask = -1
    count = 0
    hbits = np.empty(H, np.int64)
    for h in range(1 << H):
        nb = 0
        rows_h = 0
        cols_h = 0
        dis_h = 0.0
        for hh in range(H):
            if (h >> hh) & 1:
                c = L + hh
                hbits[nb] = hh
                nb += 1
                rows_h |= 1 << (c // ny)
                cols_h |= 1 << (c % ny)
                for k in range(nb):
                    w = C[c, L + hbits[k]]
                    if w > dis_h:
                        dis_h = w
        for low in range(nlow):
            if (rows_low[low] | rows_h) != full_rows:
                continue
            if (cols_low[low] | cols_h) != full_cols:
                continue
            count += 1
            v = dis_low[low]
            if dis_h > v:
                v = dis_h
            if v >= best:
                continue
            for k in range(nb):
                w = rc[hbits[k], low]
                if w > v:
                    v = w
                    if v >= best:
                        break
            if v < best:
                best = v
                best_mask = (h << L) | low
    return best, best_mask, count


@njit(cache=True)
def _all_maps(n_dom, n_cod):
    total = n_cod ** n_dom
    out = np.zeros((total, n_dom), np.int64)
    for idx in range(total):
        r = idx
        for pos in range(n_dom - 1, -1, -1):
            out[idx, pos] = r % n_cod
            r //= n_cod
    return out


@njit(cache=True)
def _map_distortion(dA, dB, f):
    n = f.shape[0]
    v = 0.0
    for a in range(n):
        for a2 in range(a):
            w = abs(dA[a, a2] - dB[f[a], f[a2]])
            if w > v:
                v = w
    return v


@njit(cache=True)
def mappair_enum(dX, dY):
    """Minimum of max(dis f, dis g, codis(f, g)) over every map pair.

    Maps are enumerated lexicographically (first coordinate most
    significant); the pair index is f_index * n_g + g_index.
    Returns (best value, f index, g index, n_f, n_g).
    """
    nx = dX.shape[0]
    ny = dY.shape[0]
    F = _all_maps(nx, ny)
    G = _all_maps(ny, nx)
    nf = F.shape[0]
    ng = G.shape[0]
    disf = np.empty(nf)
    for i in range(nf):
        disf[i] = _map_distortion(dX, dY, F[i])
    disg = np.empty(ng)
    for j in range(ng):
        disg[j] = _map_distortion(dY, dX, G[j])
    best = np.inf
    bi = -1
    bj = -1
    for i in range(nf):
        if disf[i] >= best:
            continue
        f = F[i]
        for j in range(ng):
            v = disf[i]
            if disg[j] > v:
                v = disg[j]
            if v >= best:
                continue
            g = G[j]
            for x in range(nx):
                for y in range(ny):
                    w = abs(dX[x, g[y]] - dY[f[x], y])
                    if w > v:
                        v = w
                if v >= best:
                    break
            if v < best:
                best = v
                bi = i
                bj = j
    return best, bi, bj, nf, ng


@njit(cache=True)
def _supports(dX, dY, t, S):
    """S[i, a, j] = bitmask of values of variable j compatible with i := a.

    Variables 0..nx-1 are f(x_0..), the rest g(y_0..); compatibility means
    the distortion term linking the two assignments is at most t.
    """
    nx = dX.shape[0]
    ny = dY.shape[0]
    V = nx + ny
    for i in range(V):
        di = ny if i < nx else nx
        for a in range(di):
            for j in range(V):
                dj = ny if j < nx else nx
                mask = 0
                for b in range(dj):
                    if i == j:
                        ok = a == b
                    elif i < nx and j < nx:
                        ok = abs(dX[i, j] - dY[a, b]) <= t
                    elif i >= nx and j >= nx:
                        ok = abs(dY[i - nx, j - nx] - dX[a, b]) <= t
                    elif i < nx:
                        ok = abs(dX[i, b] - dY[a, j - nx]) <= t
                    else:
                        ok = abs(dX[j, a] - dY[b, i - nx]) <= t
                    if ok:
                        mask |= 1 << b
                S[i, a, j] = mask


@njit(cache=True)
def _first_solution(dX, dY, t, S, assign, node_budget):
    """Lexicographically first map pair whose distortion terms are all <= t.

    Depth-first search in the static order f(x_0), ..., g(y_last) with
    forward checking on bitset domains. Returns (found, nodes used);
    nodes > node_budget signals an aborted search.
    """
    nx = dX.shape[0]
    ny = dY.shape[0]
    V = nx + ny
    _supports(dX, dY, t, S)
    dom = np.zeros((V + 1, V), np.int64)
    for j in range(V):
        dom[0, j] = (1 << (ny if j < nx else nx)) - 1
    nxt = np.zeros(V, np.int64)
    nodes = 0
    level = 0
    while level >= 0:
        m = dom[level, level] >> nxt[level]
        if m == 0:
            level -= 1
            continue
        val = nxt[level]
        while (m & 1) == 0:
            m >>= 1
            val += 1
        nxt[level] = val + 1
        nodes += 1
        if nodes > node_budget:
            return False, nodes
        ok = True
        for j in range(level + 1, V):
            nd = dom[level, j] & S[level, val, j]
            if nd == 0:
                ok = False
                break
            dom[level + 1, j] = nd
        if not ok:
            continue
        assign[level] = val
        if level == V - 1:
            return True, nodes
        level += 1
        nxt[level] = 0
    return False, nodes


@njit(cache=True)
def mappair_bb(dX, dY, node_cap):
    """Bisection over candidate distortion values with a feasibility search.

    The optimum is one of the finitely many terms |d_X - d_Y|, so the
    smallest feasible threshold among them is the minimum distortion; the
    final search at that threshold yields the lexicographically first
    optimal map pair. Returns (best value, assignment, nodes, cap hit flag).
    """
    nx = dX.shape[0]
    ny = dY.shape[0]
    V = nx + ny
    terms = np.abs(dX.reshape(nx * nx, 1) - dY.reshape(1, ny * ny)).ravel()
    values = np.unique(terms)
    floor = abs(dX.max() - dY.max())
    lo = np.searchsorted(values, floor)
    hi = values.shape[0] - 1
    S = np.zeros((V, max(nx, ny), V), np.int64)
    assign = np.zeros(V, np.int64)
    nodes = 0
    while lo < hi:
        mid = (lo + hi) // 2
        found, used = _first_solution(dX, dY, values[mid], S, assign, node_cap - nodes)
        nodes += used
        if nodes > node_cap:
            return np.inf, assign, nodes, True
        if found:
            hi = mid
        else:
            lo = mid + 1
    found, used = _first_solution(dX, dY, values[lo], S, assign, node_cap - nodes)
    nodes += used
    if nodes > node_cap:
        return np.inf, assign, nodes, True
    return values[lo], assign, nodes, False
