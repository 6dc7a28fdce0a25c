"""Modular graph functions: lattice-sum evaluation for multigraphs, the
two- and three-point Laurent-polynomial parts via nested lattice sums
(S- and R-sums), identity checks, and finite-difference Laplacians.

Conventions: a multigraph on N vertices with edge multiplicities l_ij has
weight l = sum of multiplicities; each edge carries a propagator
(tau2/pi)/|m tau + n|^2 and the graph value sums over all momentum
assignments conserving momentum at vertices with no zero edge-momentum.
"""

from __future__ import annotations

import functools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import mpmath as mp
import numpy as np
from scipy.signal import fftconvolve

from .numkernel import MZVIndex, PrecisionCtx, mzv, zeta_int
from .laurent import LaurentPoly

__all__ = [
    "MultiGraph",
    "D_lattice",
    "S_direct",
    "S_zagier",
    "R_direct",
    "R_structured",
    "d2pt",
    "d3pt",
    "identity_suite",
    "laplace_fd",
    "worker_count",
]


def worker_count() -> int:
    """Number of worker threads, from ELLIPSUM_THREADS (default 1)."""
    try:
        n = int(os.environ.get("ELLIPSUM_THREADS", "1"))
    except ValueError:
        return 1
    return max(1, n)


_CHUNK = 32


def _parallel_sum(fn, items) -> float:
    """sum(fn(x) for x in items), partitioned into fixed-size contiguous
    chunks and reduced in chunk order, so the result is bit-identical for any
    worker count."""
    items = list(items)
    chunks = [items[i : i + _CHUNK] for i in range(0, len(items), _CHUNK)]

    def run(chunk):
        return float(sum(fn(x) for x in chunk))

    n = worker_count()
    if n == 1 or len(chunks) < 2:
        return float(sum(run(c) for c in chunks))
    with ThreadPoolExecutor(max_workers=n) as ex:
        return float(sum(ex.map(run, chunks)))


# ---------------------------------------------------------------------------
# graphs


class MultiGraph:
    """Undirected multigraph given by a symmetric multiplicity matrix."""

    def __init__(self, mult):
        mult = [list(map(int, row)) for row in mult]
        n = len(mult)
        if any(len(row) != n for row in mult):
            raise ValueError("multiplicity matrix must be square")
        for i in range(n):
            if mult[i][i] != 0:
                raise ValueError("no self-loops allowed")
            for j in range(n):
                if mult[i][j] != mult[j][i] or mult[i][j] < 0:
                    raise ValueError("multiplicity matrix must be symmetric nonnegative")
        self.N = n
        self.mult = mult

    @classmethod
    def from_edges(cls, n: int, edges) -> "MultiGraph":
        mult = [[0] * n for _ in range(n)]
        for i, j, m in edges:
            mult[i][j] += m
            mult[j][i] += m
        return cls(mult)

    @classmethod
    def cycle(cls, n: int) -> "MultiGraph":
        return cls.from_edges(n, [(i, (i + 1) % n, 1) for i in range(n)])

    @classmethod
    def banana(cls, l: int) -> "MultiGraph":
        """Two vertices joined by l parallel edges (the D_l graph)."""
        return cls.from_edges(2, [(0, 1, l)])

    @property
    def edge_list(self):
        """Individual edges (i, j) with i < j, parallel edges repeated."""
        out = []
        for i in range(self.N):
            for j in range(i + 1, self.N):
                out.extend([(i, j)] * self.mult[i][j])
        return out

    @property
    def weight(self) -> int:
        return len(self.edge_list)

    def is_connected(self) -> bool:
        if self.N == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in range(self.N):
                if self.mult[u][v] and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.N

    @property
    def depth(self) -> int:
        comps = self._component_count()
        return self.weight - self.N + comps

    def _component_count(self) -> int:
        seen = set()
        comps = 0
        for s in range(self.N):
            if s in seen:
                continue
            comps += 1
            stack = [s]
            seen.add(s)
            while stack:
                u = stack.pop()
                for v in range(self.N):
                    if self.mult[u][v] and v not in seen:
                        seen.add(v)
                        stack.append(v)
        return comps

    def blocks(self):
        """Biconnected components as lists of edge indices (into edge_list).

        Parallel edges are distinct edges, so a doubled edge forms a
        2-edge block and is not a bridge."""
        edges = self.edge_list
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(self.N)}
        for idx, (i, j) in enumerate(edges):
            adj[i].append((j, idx))
            adj[j].append((i, idx))
        disc: dict[int, int] = {}
        low: dict[int, int] = {}
        stack: list[int] = []
        out: list[list[int]] = []
        counter = [0]

        def dfs(u: int, parent_edge: int):
            disc[u] = low[u] = counter[0]
            counter[0] += 1
            for v, eidx in adj[u]:
                if eidx == parent_edge:
                    continue
                if v not in disc:
                    stack.append(eidx)
                    dfs(v, eidx)
                    low[u] = min(low[u], low[v])
                    if low[v] >= disc[u]:
                        block = []
                        while True:
                            e = stack.pop()
                            block.append(e)
                            if e == eidx:
                                break
                        out.append(block)
                elif disc[v] < disc[u]:
                    stack.append(eidx)
                    low[u] = min(low[u], disc[v])

        for s in range(self.N):
            if s not in disc:
                dfs(s, -1)
        return out

    def has_bridge(self) -> bool:
        return any(len(b) == 1 for b in self.blocks())

    def to_json(self) -> str:
        edges = []
        for i in range(self.N):
            for j in range(i + 1, self.N):
                if self.mult[i][j]:
                    edges.append([i, j, self.mult[i][j]])
        return json.dumps({"vertices": self.N, "edges": edges})

    @classmethod
    def from_json(cls, text: str) -> "MultiGraph":
        data = json.loads(text)
        return cls.from_edges(data["vertices"], data["edges"])

    def __repr__(self):
        return f"MultiGraph(N={self.N}, weight={self.weight}, depth={self.depth})"


# ---------------------------------------------------------------------------
# lattice evaluation


def _momentum_grid(tau, M: int):
    """|m tau + n|^2 on the square window |m|,|n| <= M (origin at center)."""
    t1, t2 = float(mp.re(tau)), float(mp.im(tau))
    m = np.arange(-M, M + 1)[:, None]
    n = np.arange(-M, M + 1)[None, :]
    return (m * t1 + n) ** 2 + (m * t2) ** 2


def _group_weight(norm2, k: int):
    """|omega|^{-2k} with the origin zeroed."""
    M = (norm2.shape[0] - 1) // 2
    w = np.zeros_like(norm2)
    mask = np.ones(norm2.shape, dtype=bool)
    mask[M, M] = False
    w[mask] = norm2[mask] ** (-k)
    return w


def _signatures(edges, block):
    """Loop-momentum signatures for the edges of a biconnected block.

    Returns (groups, depth): groups is a list of (signature tuple, edge count)
    with signatures canonicalized up to overall sign (propagators are even)."""
    verts = sorted({v for e in block for v in edges[e]})
    # spanning tree on the block, lowest edge index first
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = []
    loops = []
    for e in sorted(block):
        i, j = edges[e]
        ri, rj = find(i), find(j)
        if ri == rj:
            loops.append(e)
        else:
            parent[ri] = rj
            tree.append(e)
    d = len(loops)
    # adjacency over tree edges for path finding
    tadj: dict[int, list[tuple[int, int, int]]] = {v: [] for v in verts}
    for e in tree:
        i, j = edges[e]
        tadj[i].append((j, e, +1))
        tadj[j].append((i, e, -1))

    def tree_path(u, v):
        # list of (edge, direction) along the tree path u -> v
        prev = {u: None}
        stack = [u]
        while stack:
            x = stack.pop()
            if x == v:
                break
            for y, e, s in tadj[x]:
                if y not in prev:
                    prev[y] = (x, e, s)
                    stack.append(y)
        path = []
        x = v
        while prev[x] is not None:
            px, e, s = prev[x]
            path.append((e, s))
            x = px
        return path

    sig = {e: [0] * d for e in block}
    for k, e in enumerate(loops):
        i, j = edges[e]
        sig[e][k] = 1
        for te, s in tree_path(j, i):
            sig[te][k] += s
    groups: dict[tuple, int] = {}
    for e in block:
        s = tuple(sig[e])
        # canonical sign: first nonzero entry positive
        for x in s:
            if x:
                if x < 0:
                    s = tuple(-y for y in s)
                break
        groups[s] = groups.get(s, 0) + 1
    return list(groups.items()), d


def _shifted(ext, delta, M):
    """(2M+1)^2 window of an extended (4M+1)^2 grid, centered at +delta."""
    dm, dn = delta
    return ext[2 * M + dm - M : 2 * M + dm + M + 1, 2 * M + dn - M : 2 * M + dn + M + 1]


def _block_sum_d2(groups, tau, M: int, shifts=None):
    """sum over two loop momenta of a product of grouped propagators.

    shifts optionally adds a constant lattice offset (dm, dn) per group
    (used by the depth-3 reduction)."""
    norm2_ext = _momentum_grid(tau, 2 * M)
    shifts = shifts or {}

    sigs = [s for s, _ in groups]
    if len(sigs) <= 3:
        # try to express as a(p) b(q) c(p +/- q) with basis from the groups
        for i in range(len(sigs)):
            for j in range(len(sigs)):
                if i == j:
                    continue
                u, v = sigs[i], sigs[j]
                det = u[0] * v[1] - u[1] * v[0]
                if det not in (1, -1):
                    continue
                rest = [k for k in range(len(sigs)) if k not in (i, j)]
                ok = True
                coeffs = []
                for k in rest:
                    w = sigs[k]
                    a = (w[0] * v[1] - w[1] * v[0]) * det
                    b = (u[0] * w[1] - u[1] * w[0]) * det
                    if abs(a) != 1 or abs(b) != 1:
                        ok = False
                        break
                    coeffs.append((k, a, b))
                if not ok:
                    continue
                dA = shifts.get(i, (0, 0))
                dB = shifts.get(j, (0, 0))
                if max(abs(dA[0]), abs(dA[1]), abs(dB[0]), abs(dB[1])) > M:
                    continue  # shift outside the extended window; use fallback
                if rest:
                    k, a, b = coeffs[0]
                    if a != b:
                        # substitute q -> -q so that c is evaluated on p + q;
                        # the underlying grid is even, only the shift flips
                        dB = (-dB[0], -dB[1])
                if dA == (0, 0):
                    A = _group_weight(_momentum_grid(tau, M), groups[i][1])
                else:
                    A = _shifted(_group_weight(norm2_ext, groups[i][1]), dA, M)
                if dB == (0, 0):
                    B = _group_weight(_momentum_grid(tau, M), groups[j][1])
                else:
                    B = _shifted(_group_weight(norm2_ext, groups[j][1]), dB, M)
                conv = fftconvolve(A, B)  # indexed by p+q, |.|inf <= 2M
                if not rest:
                    return float(conv.sum())
                k, a, b = coeffs[0]
                dC = shifts.get(k, (0, 0))
                # c(a*(p+q) + d) = c((p+q) + a*d) by central symmetry
                dm, dn = a * dC[0], a * dC[1]
                W = 2 * M + max(abs(dm), abs(dn))
                Cext = _group_weight(_momentum_grid(tau, W), groups[k][1])
                Cwin = Cext[
                    W + dm - 2 * M : W + dm + 2 * M + 1,
                    W + dn - 2 * M : W + dn + 2 * M + 1,
                ]
                return float((conv * Cwin).sum())
    # general fallback: loop over q, vectorized in p
    exts = []
    for idx, (sig, cnt) in enumerate(groups):
        exts.append(_group_weight(_momentum_grid(tau, 2 * M), cnt))
    coords = np.arange(-M, M + 1)
    total = 0.0
    p_groups = [(idx, s) for idx, (s, _) in enumerate(groups) if s[1] == 0]
    pq_groups = [(idx, s) for idx, (s, _) in enumerate(groups) if s[1] != 0 and s[0] != 0]
    q_groups = [(idx, s) for idx, (s, _) in enumerate(groups) if s[0] == 0]
    base_p = np.ones((2 * M + 1, 2 * M + 1))
    for idx, s in p_groups:
        d = shifts.get(idx, (0, 0))
        base_p = base_p * _shifted(exts[idx], d, M)
    for qm in coords:
        for qn in coords:
            scal = 1.0
            for idx, s in q_groups:
                d = shifts.get(idx, (0, 0))
                im = 2 * M + s[1] * qm + d[0]
                jn = 2 * M + s[1] * qn + d[1]
                if not (0 <= im <= 4 * M and 0 <= jn <= 4 * M):
                    scal = 0.0
                    break
                scal *= exts[idx][im, jn]
            if scal == 0.0:
                continue
            arr = base_p
            for idx, s in pq_groups:
                d = shifts.get(idx, (0, 0))
                dm = s[1] * qm + d[0]
                dn = s[1] * qn + d[1]
                if abs(dm) > M or abs(dn) > M:
                    # use larger extension lazily: skip (outside support)
                    arr = None
                    break
                arr = arr * _shifted(exts[idx], (dm, dn), M)
            if arr is None:
                continue
            total += scal * arr.sum()
    return float(total)


def _block_sum(groups, d: int, tau, M: int) -> float:
    if d == 1:
        k = sum(cnt for _, cnt in groups)
        return float(_group_weight(_momentum_grid(tau, M), k).sum())
    if d == 2:
        return _block_sum_d2(groups, tau, M)
    if d == 3:
        if M > 16:
            raise ValueError("depth-3 lattice sums limited to M <= 16")
        coords = np.arange(-M, M + 1)
        # split off the third loop momentum r
        inner_groups = []
        r_exp = []
        for s, cnt in groups:
            inner_groups.append(((s[0], s[1]), cnt))
            r_exp.append(s[2])

        def row(rm):
            total = 0.0
            for rn in coords:
                scal = 1.0
                shifts = {}
                gsub = []
                ok = True
                for idx, ((s0, s1), cnt) in enumerate(inner_groups):
                    c = r_exp[idx]
                    if s0 == 0 and s1 == 0:
                        if c == 0:
                            ok = False  # would be a zero signature: impossible
                            break
                        t1, t2 = float(mp.re(tau)), float(mp.im(tau))
                        q2 = (c * rm * t1 + c * rn) ** 2 + (c * rm * t2) ** 2
                        if q2 == 0.0:
                            scal = 0.0
                            break
                        scal *= q2 ** (-cnt)
                    else:
                        gsub.append(((s0, s1), cnt))
                        if c:
                            shifts[len(gsub) - 1] = (c * rm, c * rn)
                if not ok or scal == 0.0:
                    continue
                total += scal * _block_sum_d2(gsub, tau, M, shifts=shifts)
            return total

        return _parallel_sum(row, coords)
    raise ValueError("depth > 3 not supported")


def D_lattice(g: MultiGraph, tau, M: int, ctx: PrecisionCtx | None = None,
              with_bound: bool = False):
    """Lattice-sum value of the modular graph function of g at cutoff M.

    Momenta are enumerated per independent cycle (one per non-tree edge of a
    lowest-index spanning tree); graphs with a bridge evaluate to exactly 0;
    values factorize over biconnected blocks."""
    if not g.is_connected():
        raise ValueError("graph must be connected")
    edges = g.edge_list
    blocks = g.blocks()
    if any(len(b) == 1 for b in blocks):
        return (0.0, 0.0) if with_bound else 0.0
    t2 = float(mp.im(tau))
    value = (t2 / math.pi) ** g.weight
    bound_rel = 0.0
    for b in blocks:
        groups, d = _signatures(edges, b)
        if d > 3:
            raise ValueError("block depth exceeds the cost guard (3)")
        value *= _block_sum(groups, d, tau, M)
        # slowest-decaying tail: the lightest group on the block
        kmin = min(cnt for _, cnt in groups)
        bound_rel += 8.0 * math.log(M + 1) / (M ** max(2 * kmin - 2, 1))
    if with_bound:
        return value, abs(value) * bound_rel
    return value


# ---------------------------------------------------------------------------
# S sums


def S_direct(m: int, n: int, cutoff: int) -> float:
    """Truncated direct evaluation of the constrained sum over (Z*)^m."""
    if m < 2:
        raise ValueError("m must be >= 2")
    if m == 2:
        k = np.arange(1, cutoff + 1, dtype=float)
        return float(2.0 * np.sum(1.0 / (k**2 * (2 * k) ** n)))
    if m > 4:
        raise ValueError("direct mode supports m <= 4 (use S_zagier)")
    ks = np.arange(-cutoff, cutoff + 1)
    ks = ks[ks != 0]
    if m == 3:
        # symmetric in k1 <-> -k1: sum k1 > 0 and double
        k2 = ks.astype(float)

        def row3(k1):
            k3 = -k1 - k2
            mask = k3 != 0
            return np.sum(
                1.0
                / (
                    k1
                    * np.abs(k2[mask] * k3[mask])
                    * (k1 + np.abs(k2[mask]) + np.abs(k3[mask])) ** n
                )
            )

        return 2.0 * _parallel_sum(row3, range(1, cutoff + 1))

    def row4(a):
        k1 = ks[:, None]
        k2 = ks[None, :]
        k3 = -a - k1 - k2
        mask = k3 != 0
        vals = np.zeros_like(k1 + k2, dtype=float)
        vals[mask] = 1.0 / (
            np.abs(a * k1 * k2 * k3)[mask]
            * (abs(a) + np.abs(k1) + np.abs(k2) + np.abs(k3))[mask] ** n
        )
        return vals.sum()

    return _parallel_sum(row4, ks)


def _compositions_12(total: int):
    """All compositions of `total` into parts 1 and 2."""
    if total == 0:
        yield ()
        return
    for first in (1, 2):
        if first <= total:
            for rest in _compositions_12(total - first):
                yield (first,) + rest


@functools.lru_cache(maxsize=None)
def _S_zagier_cached(m: int, n: int, dps: int):
    with mp.workdps(dps):
        total = mp.mpf(0)
        for comp in _compositions_12(m - 2):
            r = len(comp)
            total += mp.mpf(2) ** (2 * (r + 1) - m - n) * mzv(
                MZVIndex(comp + (n + 2,)), PrecisionCtx(max(dps - 10, 10))
            )
        return mp.factorial(m) * total


def S_zagier(m: int, n: int, ctx: PrecisionCtx | None = None):
    """MZV evaluation: m! sum over {1,2}-compositions a of m-2 of
    2^{2(r+1)-m-n} zeta(a_1, ..., a_r, n+2)."""
    if m < 2:
        raise ValueError("m must be >= 2")
    ctx = ctx or PrecisionCtx()
    return _S_zagier_cached(m, n, ctx.dps)


# ---------------------------------------------------------------------------
# R sums


def _shat_table(m: int, L: int) -> np.ndarray:
    """Rows r = 0..m of [x^l] Li_1(x)^r = (-log(1-x))^r for l = 0..L."""
    out = np.zeros((m + 1, L + 1))
    out[0, 0] = 1.0
    inv = np.zeros(L + 1)
    inv[1:] = 1.0 / np.arange(1, L + 1)
    for r in range(1, m + 1):
        prev = out[r - 1]
        cur = np.convolve(prev, inv)[: L + 1]
        out[r] = cur
    return out


def _c_vec(m: int, a: int, L: int, shat: np.ndarray) -> np.ndarray:
    """c_m(l + a, l) for l = 0..L, where c_m(u, v) = sum_r C(m,r) S_r(u) S_{m-r}(v).

    ``shat`` must cover column indices up to L + a."""
    if m == 0:
        v = np.zeros(L + 1)
        if a == 0:
            v[0] = 1.0
        return v
    out = np.zeros(L + 1)
    for r in range(m + 1):
        out += math.comb(m, r) * shat[r, a : a + L + 1] * shat[m - r, : L + 1]
    return out


def _R_at_cutoff(m1, m2, m3, alpha, beta, L) -> float:
    shats = {m: _shat_table(m, L + L) for m in {m1, m2, m3}}

    def cvec(m, a):
        return _c_vec(m, a, L, shats[m])

    def kernel(a, expo):
        s = np.arange(0, 2 * L + 1, dtype=float) + a
        out = np.ones_like(s)
        if expo:
            np.power(s, -float(expo), out=out, where=s > 0)
            if a == 0:
                # the s = 0 slot is only ever paired with c_m(0, 0), which
                # vanishes for every nonempty group
                out[0] = 0.0
        return out

    def corr(vec, k):
        # T[l1] = sum_{l2} vec[l2] * k[l1 + l2]
        return fftconvolve(vec[::-1], k)[L : 2 * L + 1]

    def layer(a):
        v1 = cvec(m1, a)
        v2 = cvec(m2, a)
        v3 = cvec(m3, a)
        if alpha == 0:
            T2 = np.full(L + 1, v2.sum())
        else:
            T2 = corr(v2, kernel(a, alpha))
        if beta == 0:
            T3 = np.full(L + 1, v3.sum())
        else:
            T3 = corr(v3, kernel(a, beta))
        return float(np.sum(v1 * T2 * T3))

    total = layer(0)
    for a in range(1, L + 1):
        total += 2.0 * layer(a)
    return total / 2.0 ** (alpha + beta)


def R_structured(m1: int, m2: int, m3: int, alpha: int, beta: int,
                 cutoff: int = 2000, ctx: PrecisionCtx | None = None) -> float:
    """Layered evaluation R = R_0 + 2 R_{>0} over per-layer coefficient
    vectors c_m(l+a, l), with FFT correlations for the coupled denominators.

    The truncation error decays polynomially in the cutoff (only like 1/L
    when alpha or beta is 0), so a three-point geometric-ratio Richardson
    extrapolation over cutoffs L/4, L/2, L is applied."""
    if min(alpha, beta) < 0:
        raise ValueError("alpha, beta must be >= 0")
    vals = [
        _R_at_cutoff(m1, m2, m3, alpha, beta, L)
        for L in (cutoff // 4, cutoff // 2, cutoff)
    ]
    d1, d2 = vals[1] - vals[0], vals[2] - vals[1]
    if d2 == 0 or d1 == 0 or d2 / d1 <= 0 or d2 / d1 >= 1:
        return vals[2]
    ratio = d2 / d1  # ~ 2^{-p}
    return vals[2] + d2 * ratio / (1.0 - ratio)


def R_direct(m1: int, m2: int, m3: int, alpha: int, beta: int, cutoff: int) -> float:
    """Direct triple-constrained sum, truncated at |k_i| <= cutoff; grouped by
    (common momentum a, per-group absolute-value sums)."""
    C = cutoff

    def group_tables(m):
        # tab[a][s] = sum over k in (Z*)^m, sum k = a, ||k|| = s of 1/|k|
        tabs = {}
        for a in range(-m * C, m * C + 1):
            tabs[a] = {}
        if m == 0:
            tabs = {0: {0: 1.0}}
            return tabs

        def rec(depth, ssum, asum, prod):
            if depth == m:
                d = tabs.setdefault(asum, {})
                d[ssum] = d.get(ssum, 0.0) + 1.0 / prod
                return
            for k in range(-C, C + 1):
                if k == 0:
                    continue
                rec(depth + 1, ssum + abs(k), asum + k, prod * abs(k))

        rec(0, 0, 0, 1.0)
        return tabs

    T1, T2, T3 = group_tables(m1), group_tables(m2), group_tables(m3)
    total = 0.0
    for a, d1 in T1.items():
        d2 = T2.get(a)
        d3 = T3.get(a)
        if not d1 or not d2 or not d3:
            continue
        for s1, w1 in d1.items():
            acc2 = sum(w2 / float(s1 + s2) ** alpha if alpha else w2 for s2, w2 in d2.items())
            acc3 = sum(w3 / float(s1 + s3) ** beta if beta else w3 for s3, w3 in d3.items())
            total += w1 * acc2 * acc3
    return total


# ---------------------------------------------------------------------------
# two-point Laurent polynomial


def d2pt(l: int, ctx: PrecisionCtx | None = None) -> LaurentPoly:
    """Laurent-polynomial (zero-mode) part d_l(y) of the two-vertex graph
    with l parallel edges."""
    if l < 2:
        raise ValueError("l must be >= 2")
    ctx = ctx or PrecisionCtx()
    with ctx.workprec():
        coeffs: dict[int, mp.mpf] = {}
        # terminating 2F1(1, -l; 3/2; 3/2) * (y/12)^l
        hyp = Fraction(0)
        term = Fraction(1)
        for k in range(l + 1):
            hyp += term
            term = term * (-(l - k)) * Fraction(3, 2) / (Fraction(3, 2) + k)
        coeffs[l] = mp.mpf(hyp.numerator) / hyp.denominator / mp.mpf(12) ** l
        for a in range(l + 1):
            for b in range(l - a + 1):
                for c in range(l - a - b + 1):
                    m = l - a - b - c
                    if m < 2:
                        continue
                    coef = (
                        mp.mpf(2)
                        / mp.mpf(4) ** l
                        * mp.factorial(l)
                        * mp.factorial(2 * a + b)
                        / (
                            mp.factorial(a)
                            * mp.factorial(b)
                            * mp.factorial(c)
                            * mp.factorial(m)
                        )
                        * (-1) ** b
                        / mp.mpf(6) ** c
                        * S_zagier(m, 2 * a + b + 1, ctx)
                        * mp.mpf(2) ** (c - a - 1)
                    )
                    e = c - a - 1
                    coeffs[e] = coeffs.get(e, mp.mpf(0)) + coef
        return LaurentPoly(coeffs, variable="y")


# ---------------------------------------------------------------------------
# three-point Laurent polynomial


def _vec_compositions(l, parts):
    """All tuples of `parts` nonnegative vectors summing to l componentwise."""
    def comps(n, k):
        if k == 1:
            yield (n,)
            return
        for first in range(n + 1):
            for rest in comps(n - first, k - 1):
                yield (first,) + rest

    per_coord = [list(comps(li, parts)) for li in l]
    idx = [0] * len(l)
    while True:
        yield tuple(tuple(per_coord[i][idx[i]][p] for i in range(len(l))) for p in range(parts))
        j = len(l) - 1
        while j >= 0:
            idx[j] += 1
            if idx[j] < len(per_coord[j]):
                break
            idx[j] = 0
            j -= 1
        if j < 0:
            return


def _fact_vec(v):
    out = 1
    for x in v:
        out *= math.factorial(x)
    return out


def _dA(l, ctx) -> LaurentPoly:
    lsum = sum(l)
    total = mp.mpf(0)
    for a, b, c in _vec_compositions(l, 3):
        lam = 2 * sum(a) + sum(b) + 1
        total += (
            mp.mpf(_fact_vec(l))
            / (_fact_vec(a) * _fact_vec(b) * _fact_vec(c))
            * (-1) ** sum(b)
            / mp.mpf(6) ** sum(c)
            * mp.factorial(2 * a[1] + b[1])
            * mp.factorial(2 * a[2] + b[2])
            / mp.factorial(2 * (a[1] + a[2]) + b[1] + b[2] + 1)
            / (lam + 1)
        )
    return LaurentPoly({lsum: 2 * mp.mpf(2) ** lsum * total}, variable="y")


def _m_ok_B(m) -> bool:
    pos = [x for x in m if x > 0]
    if len(pos) < 2:
        return False
    if len(pos) == 2 and min(pos) < 2:
        return False  # one zero entry forces the others >= 2
    return True


def _dB_ordered(l, cutoff, ctx) -> LaurentPoly:
    coeffs: dict[int, mp.mpf] = {}
    for a, b, c, m in _vec_compositions(l, 4):
        if not _m_ok_B(m):
            continue
        base = (
            2
            * mp.mpf(_fact_vec(l))
            / (_fact_vec(a) * _fact_vec(b) * _fact_vec(c) * _fact_vec(m))
            * (-1) ** sum(b)
            / mp.mpf(6) ** sum(c)
        )
        e_pow = sum(c) - sum(a) - 2
        for u in range(2 * a[2] + b[2] + 1):
            v = 2 * a[2] + b[2] - u
            for e in range(2 * a[0] + b[0] + u + 1):
                f = 2 * a[0] + b[0] + u - e
                alpha = 2 * a[1] + b[1] + v + f + 1
                beta = e + 1
                rval = _R_cached(m[0], m[1], m[2], alpha, beta, cutoff)
                term = (
                    base
                    * (-1) ** v
                    * mp.factorial(2 * a[2] + b[2])
                    * mp.factorial(2 * a[0] + b[0] + u)
                    * mp.factorial(2 * a[1] + b[1] + v + f)
                    / (mp.factorial(u) * mp.factorial(v) * mp.factorial(f))
                    * rval
                )
                coeffs[e_pow] = coeffs.get(e_pow, mp.mpf(0)) + term * mp.mpf(2) ** e_pow
    return LaurentPoly(coeffs, variable="y")


def _dC_ordered(l, ctx) -> LaurentPoly:
    coeffs: dict[int, mp.mpf] = {}
    for a, b, c, m in _vec_compositions(l, 4):
        if m[1] != 0 or m[2] != 0 or m[0] < 2:
            continue
        base = (
            2
            * mp.mpf(_fact_vec(l))
            / (_fact_vec(a) * _fact_vec(b) * _fact_vec(c) * _fact_vec(m))
            * (-1) ** sum(b)
            / mp.mpf(6) ** sum(c)
        )
        e_pow = sum(c) - sum(a) - 2
        lam = 2 * sum(a) + sum(b) + 1
        for u in range(2 * a[2] + b[2] + 1):
            v = 2 * a[2] + b[2] - u
            pref = (
                base
                * mp.factorial(2 * a[2] + b[2])
                / (mp.factorial(u) * mp.factorial(v))
                * (-1) ** v
                / (2 * a[1] + b[1] + v + 1)
                * mp.factorial(lam)
            )
            # constant-in-y piece S(m1, lam+1) at power e_pow
            coeffs[e_pow] = coeffs.get(e_pow, mp.mpf(0)) + pref * S_zagier(
                m[0], lam + 1, ctx
            ) * mp.mpf(2) ** e_pow
            for j in range(lam + 1):
                e = e_pow + lam - j
                coeffs[e] = coeffs.get(e, mp.mpf(0)) + pref * (
                    (-1) ** j
                    * S_zagier(m[0], j + 1, ctx)
                    / mp.factorial(lam - j)
                ) * mp.mpf(2) ** e
    return LaurentPoly(coeffs, variable="y")


@functools.lru_cache(maxsize=None)
def _R_cached(m1, m2, m3, alpha, beta, cutoff):
    return R_structured(m1, m2, m3, alpha, beta, cutoff)


def d3pt(l1: int, l2: int, l3: int, ctx: PrecisionCtx | None = None,
         cutoff: int = 2000) -> LaurentPoly:
    """Laurent-polynomial part d_{l1,l2,l3}(y) of the three-vertex graph,
    as the sum of the no-loop, coupled, and single-group contributions with
    their symmetrizations."""
    if min(l1, l2, l3) < 1:
        raise ValueError("l_i must be >= 1")
    ctx = ctx or PrecisionCtx()
    l = (l1, l2, l3)
    with ctx.workprec():
        out = _dA(l, ctx)
        for perm in [(0, 1, 2), (1, 0, 2), (2, 1, 0)]:
            out = out.add(_dB_ordered(tuple(l[i] for i in perm), cutoff, ctx))
        for perm in [(0, 1, 2), (1, 0, 2), (2, 0, 1)]:
            out = out.add(_dC_ordered(tuple(l[i] for i in perm), ctx))
        # drop numerically-zero residue entries
        top = max(abs(c) for c in out.coeffs.values())
        return LaurentPoly(
            {e: c for e, c in out.coeffs.items() if abs(c) > 1e-12 * top},
            variable="y",
        )


# ---------------------------------------------------------------------------
# identities and Laplacians


def laplace_fd(f, tau, h, ctx: PrecisionCtx | None = None):
    """Finite-difference hyperbolic Laplacian tau2^2 (d^2/dtau1^2 + d^2/dtau2^2)
    with a 5-point stencil of spacing h."""
    tau = mp.mpc(tau)
    h = mp.mpf(h)
    if mp.im(tau) - h <= 0:
        raise ValueError("stencil leaves the upper half-plane")
    t2 = mp.im(tau)
    return t2**2 * (
        f(tau + h) + f(tau - h) + f(tau + 1j * h) + f(tau - 1j * h) - 4 * f(tau)
    ) / h**2


def identity_suite(tau, M: int, ctx: PrecisionCtx | None = None) -> dict:
    """Residuals of the classical lattice identities relating small graph
    values to non-holomorphic Eisenstein series."""
    from .eisenstein import eis_nonholo

    ctx = ctx or PrecisionCtx()
    E2 = float(mp.re(eis_nonholo(2, tau, ctx, mode="cusp")))
    E3 = float(mp.re(eis_nonholo(3, tau, ctx, mode="cusp")))
    E4 = float(mp.re(eis_nonholo(4, tau, ctx, mode="cusp")))
    z3 = float(zeta_int(3, ctx))
    # Green-function normalization: 1/4 per edge relative to the bare
    # lattice sum (D_lattice(cycle of N) equals E(N) exactly)
    D2 = D_lattice(MultiGraph.banana(2), tau, M) / 4**2
    D3 = D_lattice(MultiGraph.banana(3), tau, M) / 4**3
    D111 = D_lattice(MultiGraph.cycle(3), tau, M) / 4**3
    D1111 = D_lattice(MultiGraph.cycle(4), tau, M) / 4**4
    report = {
        "D2=E2/16": (D2, E2 / 16, abs(D2 - E2 / 16)),
        "D111=E3/64": (D111, E3 / 64, abs(D111 - E3 / 64)),
        "D3=(E3+z3)/64": (D3, (E3 + z3) / 64, abs(D3 - (E3 + z3) / 64)),
        "D1111=E4/256": (D1111, E4 / 256, abs(D1111 - E4 / 256)),
    }
    return report
