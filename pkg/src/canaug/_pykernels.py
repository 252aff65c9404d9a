"""Pure Python / numpy implementations of the hot kernels.

These are the reference versions; the compiled module must agree with them
bit for bit.
"""

from __future__ import annotations

import zlib

import numpy as np


def _ranks(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    uniq, inv = np.unique(mat, axis=0, return_inverse=True)
    return inv.ravel().astype(np.int64), uniq


def refine(inc: np.ndarray, cc: np.ndarray, wc: np.ndarray):
    """Alternate word/coordinate refinement until the partition is stable.

    New colours sort by (old colour, neighbour counts per colour), so the
    order of existing cells is preserved.  The trace is a CRC over the
    signature tables and is therefore an isomorphism invariant.
    """
    cc = np.asarray(cc, dtype=np.int64)
    wc = np.asarray(wc, dtype=np.int64)
    m = inc.shape[1]
    nw = inc.shape[0]
    crc = 0
    if m == 0 or nw == 0:
        return cc, wc, crc
    incT = inc.T
    while True:
        nc = int(cc.max()) + 1
        sig_w = np.empty((nw, nc + 1), dtype=np.int64)
        sig_w[:, 0] = wc
        sig_w[:, 1:] = inc @ np.eye(nc, dtype=np.int64)[cc]
        wc2, uw = _ranks(sig_w)
        nwc = int(wc2.max()) + 1
        sig_c = np.empty((m, nwc + 1), dtype=np.int64)
        sig_c[:, 0] = cc
        sig_c[:, 1:] = incT @ np.eye(nwc, dtype=np.int64)[wc2]
        cc2, uc = _ranks(sig_c)
        crc = zlib.crc32(np.array(uw.shape + uc.shape, dtype=np.int64).tobytes(), crc)
        crc = zlib.crc32(uw.tobytes(), crc)
        crc = zlib.crc32(uc.tobytes(), crc)
        stable = int(cc2.max()) == nc - 1 and int(wc2.max()) == int(wc.max())
        cc, wc = cc2, wc2
        if stable:
            return cc, wc, crc


def normal_form(F, M: np.ndarray) -> tuple[bytes, list[int]]:
    """Scaling-normalised reduced echelon form of the row space of M.

    Column scalars are fixed along a spanning forest of the bipartite graph
    (pivot column of row i) -- (non-pivot column j) with an edge per nonzero
    entry, visited column by column; each forest edge is scaled to 1.
    """
    add, mul, inv = F._add, F._mul, F._inv
    neg = F.neg.tolist()
    R = [list(r) for r in np.asarray(M, dtype=np.uint8).tolist()]
    rows = len(R)
    m = len(R[0]) if rows else M.shape[1]
    piv: list[int] = []
    r = 0
    for c in range(m):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if R[i][c]), -1)
        if p < 0:
            continue
        R[r], R[p] = R[p], R[r]
        s = inv[R[r][c]]
        R[r] = [mul[s][x] for x in R[r]]
        pr = R[r]
        for i in range(rows):
            f = R[i][c]
            if i != r and f:
                nf = neg[f]
                R[i] = [add[a][mul[nf][b]] for a, b in zip(R[i], pr)]
        piv.append(c)
        r += 1
    R = R[:r]
    D = [1] * m
    comp = list(range(m))
    members = {j: [j] for j in range(m)}
    pivset = set(piv)
    for j in range(m):
        if j in pivset:
            continue
        for i in range(r):
            e = R[i][j]
            if not e:
                continue
            a, b = comp[piv[i]], comp[j]
            if a == b:
                continue
            # scale j's component by f so that e * D[j] * f / D[piv[i]] = 1
            f = mul[D[piv[i]]][inv[mul[e][D[j]]]]
            for c in members[b]:
                D[c] = mul[D[c]][f]
                comp[c] = a
            members[a].extend(members.pop(b))
    out = bytearray(r * m)
    for i in range(r):
        di = inv[D[piv[i]]]
        row = R[i]
        base = i * m
        for j in range(m):
            e = row[j]
            if e:
                out[base + j] = mul[mul[e][D[j]]][di]
    return bytes(out), D


def remaining_bounds(opt_match, pos_start):
    """Suffix sums over positions of the per-word min and max option matches."""
    npos = len(pos_start) - 1
    nx = opt_match.shape[1]
    rmin = np.zeros((npos + 1, nx), dtype=np.int64)
    rmax = np.zeros((npos + 1, nx), dtype=np.int64)
    for p in range(npos - 1, -1, -1):
        blk = opt_match[pos_start[p]:pos_start[p + 1]]
        rmin[p] = rmin[p + 1] + blk.min(axis=0)
        rmax[p] = rmax[p + 1] + blk.max(axis=0)
    return rmin, rmax


def multiset_search(d, base, opt_match, opt_wt, opt_vec, opt_total, pos_start, n_free,
                    forced_need, add, q, p, check_norm, divisor):
    """Depth-first choice of one option per position under distance pruning.

    Option ``o`` adds ``opt_match[o]`` coincidences (one entry per message
    x), ``opt_wt[o]`` to the weight of the new row and ``opt_vec[o]`` to the
    orthogonality residual.  Positions from ``n_free`` on are forced: once
    the free positions are fixed, row ``forced_need[residual]`` gives the
    ``opt_total`` each forced position must have (-1 when unsolvable).
    A leaf survives when every entry of ``base - matches`` is at least d,
    the norm condition holds and, with a divisor, all those weights are
    divisible.  Subtrees are cut as soon as some word's reachable weight
    range holds no admissible value.  Returns the chosen option indices of
    every surviving leaf.
    """
    npos = len(pos_start) - 1
    s = opt_vec.shape[1]
    digits = q ** np.arange(s - 1, -1, -1, dtype=np.int64)
    add = np.asarray(add)
    rmin, rmax = remaining_bounds(opt_match, pos_start)
    out = []
    choice = [0] * npos

    def rec(pos, matches, acc, weight, need):
        if pos == npos:
            if check_norm and (weight + 1) % p:
                return
            if divisor and ((base - matches) % divisor).any():
                return
            out.append(list(choice))
            return
        if pos == n_free:
            need = forced_need[int(acc.astype(np.int64) @ digits)]
            if need[0] < 0:
                return
        for o in range(pos_start[pos], pos_start[pos + 1]):
            if need is not None and opt_total[o] != need[pos - n_free]:
                continue
            nm = matches + opt_match[o]
            hi = base - nm - rmin[pos + 1]
            if (hi < d).any():
                continue
            if divisor:
                lo = np.maximum(base - nm - rmax[pos + 1], d)
                if ((hi - hi % divisor) < lo).any():
                    continue
            choice[pos] = o
            rec(pos + 1, nm, add[acc, opt_vec[o]], weight + opt_wt[o], need)

    rec(0, np.zeros(len(base), dtype=np.int64), np.zeros(s, dtype=np.uint8), 0, None)
    return np.array(out, dtype=np.int64).reshape(-1, npos)
