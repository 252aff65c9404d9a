# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot kernels; results match ``_pykernels`` exactly."""

import zlib

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset

cnp.import_array()

ctypedef cnp.int64_t i64


# ---------------------------------------------------------------------------
# row ranking (lexicographic, as numpy.unique(axis=0))

cdef inline int _cmp_rows(const i64* a, const i64* b, Py_ssize_t w) noexcept nogil:
    cdef Py_ssize_t t
    for t in range(w):
        if a[t] < b[t]:
            return -1
        if a[t] > b[t]:
            return 1
    return 0


cdef void _merge_sort(Py_ssize_t* idx, Py_ssize_t* tmp, Py_ssize_t lo, Py_ssize_t hi,
                      const i64* data, Py_ssize_t w) noexcept nogil:
    if hi - lo < 2:
        return
    cdef Py_ssize_t mid = (lo + hi) // 2, i, j, k
    _merge_sort(idx, tmp, lo, mid, data, w)
    _merge_sort(idx, tmp, mid, hi, data, w)
    i = lo
    j = mid
    k = lo
    while i < mid and j < hi:
        if _cmp_rows(data + idx[j] * w, data + idx[i] * w, w) < 0:
            tmp[k] = idx[j]
            j += 1
        else:
            tmp[k] = idx[i]
            i += 1
        k += 1
    while i < mid:
        tmp[k] = idx[i]
        i += 1
        k += 1
    while j < hi:
        tmp[k] = idx[j]
        j += 1
        k += 1
    for k in range(lo, hi):
        idx[k] = tmp[k]


cdef tuple _rank_rows(cnp.ndarray[i64, ndim=2, mode="c"] sig):
    cdef Py_ssize_t n = sig.shape[0], w = sig.shape[1], i, r
    cdef const i64* data = <const i64*> sig.data
    cdef Py_ssize_t* idx = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
    cdef Py_ssize_t* tmp = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
    cdef cnp.ndarray[i64, ndim=1] ranks = np.empty(n, dtype=np.int64)
    cdef list firsts = []
    try:
        for i in range(n):
            idx[i] = i
        _merge_sort(idx, tmp, 0, n, data, w)
        r = -1
        for i in range(n):
            if i == 0 or _cmp_rows(data + idx[i] * w, data + idx[i - 1] * w, w) != 0:
                r += 1
                firsts.append(idx[i])
            ranks[idx[i]] = r
    finally:
        free(idx)
        free(tmp)
    return ranks, sig[firsts]


def refine(inc, cc, wc):
    """Equitable refinement; see the Python reference for the semantics."""
    cdef cnp.ndarray[cnp.int32_t, ndim=2, mode="c"] B = np.ascontiguousarray(inc, dtype=np.int32)
    cdef cnp.ndarray[i64, ndim=1] c = np.ascontiguousarray(cc, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] wcol = np.ascontiguousarray(wc, dtype=np.int64)
    cdef Py_ssize_t nw = B.shape[0], m = B.shape[1], i, j
    cdef i64 nc, nwc
    cdef cnp.ndarray[i64, ndim=2, mode="c"] sig
    cdef cnp.ndarray[i64, ndim=1] w2
    crc = 0
    if m == 0 or nw == 0:
        return c, wcol, crc
    while True:
        nc = 0
        for j in range(m):
            if c[j] + 1 > nc:
                nc = c[j] + 1
        sig = np.zeros((nw, nc + 1), dtype=np.int64)
        for i in range(nw):
            sig[i, 0] = wcol[i]
            for j in range(m):
                if B[i, j]:
                    sig[i, 1 + c[j]] += 1
        wc2, uw = _rank_rows(sig)
        nwc = int(uw.shape[0])
        sig = np.zeros((m, nwc + 1), dtype=np.int64)
        for j in range(m):
            sig[j, 0] = c[j]
        w2 = wc2
        for i in range(nw):
            for j in range(m):
                if B[i, j]:
                    sig[j, 1 + w2[i]] += 1
        cc2, uc = _rank_rows(sig)
        crc = zlib.crc32(np.array(uw.shape + uc.shape, dtype=np.int64).tobytes(), crc)
        crc = zlib.crc32(uw.tobytes(), crc)
        crc = zlib.crc32(uc.tobytes(), crc)
        stable = uc.shape[0] == nc and nwc == int(wcol.max()) + 1
        c = cc2
        wcol = w2
        if stable:
            return c, wcol, crc


# ---------------------------------------------------------------------------
# scaling-normalised echelon form

def normal_form(F, M):
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] R = np.array(M, dtype=np.uint8, order="C")
    cdef const cnp.uint8_t[:, :] add = F.add
    cdef const cnp.uint8_t[:, :] mul = F.mul
    cdef const cnp.uint8_t[:] inv = F.inv
    cdef const cnp.uint8_t[:] neg = F.neg
    cdef Py_ssize_t rows = R.shape[0], m = R.shape[1], r = 0, c, i, j, p, t
    cdef cnp.uint8_t s, f, nf, e
    cdef Py_ssize_t a, b
    cdef Py_ssize_t* piv = <Py_ssize_t*> malloc((rows + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* comp = <Py_ssize_t*> malloc((m + 1) * sizeof(Py_ssize_t))
    cdef char* ispiv = <char*> malloc(m + 1)
    cdef cnp.uint8_t* D = <cnp.uint8_t*> malloc(m + 1)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out
    try:
        for c in range(m):
            if r == rows:
                break
            p = -1
            for i in range(r, rows):
                if R[i, c]:
                    p = i
                    break
            if p < 0:
                continue
            if p != r:
                for t in range(m):
                    e = R[r, t]
                    R[r, t] = R[p, t]
                    R[p, t] = e
            s = inv[R[r, c]]
            for t in range(m):
                R[r, t] = mul[s, R[r, t]]
            for i in range(rows):
                f = R[i, c]
                if i != r and f:
                    nf = neg[f]
                    for t in range(m):
                        R[i, t] = add[R[i, t], mul[nf, R[r, t]]]
            piv[r] = c
            r += 1
        memset(ispiv, 0, m + 1)
        for i in range(r):
            ispiv[piv[i]] = 1
        for j in range(m):
            D[j] = 1
            comp[j] = j
        for j in range(m):
            if ispiv[j]:
                continue
            for i in range(r):
                e = R[i, j]
                if not e:
                    continue
                a = comp[piv[i]]
                b = comp[j]
                if a == b:
                    continue
                f = mul[D[piv[i]], inv[mul[e, D[j]]]]
                for t in range(m):
                    if comp[t] == b:
                        D[t] = mul[D[t], f]
                        comp[t] = a
        out = np.zeros(r * m, dtype=np.uint8)
        for i in range(r):
            s = inv[D[piv[i]]]
            for j in range(m):
                e = R[i, j]
                if e:
                    out[i * m + j] = mul[mul[e, D[j]], s]
        return out.tobytes(), [int(D[j]) for j in range(m)]
    finally:
        free(piv)
        free(comp)
        free(ispiv)
        free(D)


# ---------------------------------------------------------------------------
# multiset candidate search

cdef struct _MS:
    Py_ssize_t npos, nx, s, n_free, n_forced, q, p
    i64 d, divisor
    int check_norm
    const i64* base
    const i64* match
    const i64* wt
    const cnp.uint8_t* vec
    const i64* total
    const i64* start
    const i64* need_tab
    const i64* rmin   # (npos + 1) * nx, fewest matches the remaining positions can add
    const i64* rmax   # (npos + 1) * nx, most matches they can add
    const cnp.uint8_t* add
    i64* matches      # (npos + 1) * nx
    cnp.uint8_t* acc  # (npos + 1) * s
    i64* choice
    const i64* need


cdef int _ms_rec(_MS* st, Py_ssize_t pos, i64 weight, list out) except -1:
    cdef Py_ssize_t nx = st.nx, s = st.s, x, t
    cdef i64 o, idx
    cdef i64* cur = st.matches + pos * nx
    cdef i64* nxt = st.matches + (pos + 1) * nx
    cdef cnp.uint8_t* acc = st.acc + pos * s
    cdef cnp.uint8_t* nacc = st.acc + (pos + 1) * s
    cdef const i64* om
    cdef const cnp.uint8_t* ov
    cdef const i64* lo_add = st.rmax + (pos + 1) * nx
    cdef const i64* hi_add = st.rmin + (pos + 1) * nx
    cdef i64 hi, lo
    cdef bint ok
    if pos == st.npos:
        if st.check_norm and (weight + 1) % st.p:
            return 0
        if st.divisor:
            for x in range(nx):
                if (st.base[x] - cur[x]) % st.divisor:
                    return 0
        out.append([st.choice[t] for t in range(st.npos)])
        return 0
    if pos == st.n_free:
        idx = 0
        for t in range(s):
            idx = idx * st.q + acc[t]
        st.need = st.need_tab + idx * st.n_forced
        if st.need[0] < 0:
            return 0
    for o in range(st.start[pos], st.start[pos + 1]):
        if pos >= st.n_free and st.total[o] != st.need[pos - st.n_free]:
            continue
        om = st.match + o * nx
        ok = True
        for x in range(nx):
            nxt[x] = cur[x] + om[x]
            # final weight of word x lies in [lo, hi]
            hi = st.base[x] - nxt[x] - hi_add[x]
            if hi < st.d:
                ok = False
                break
            if st.divisor:
                lo = st.base[x] - nxt[x] - lo_add[x]
                if lo < st.d:
                    lo = st.d
                if hi - hi % st.divisor < lo:
                    ok = False
                    break
        if not ok:
            continue
        ov = st.vec + o * s
        for t in range(s):
            nacc[t] = st.add[acc[t] * st.q + ov[t]]
        st.choice[pos] = o
        _ms_rec(st, pos + 1, weight + st.wt[o], out)
    return 0


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
    cdef cnp.ndarray[i64, ndim=1, mode="c"] b = np.ascontiguousarray(base, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=2, mode="c"] mt = np.ascontiguousarray(opt_match, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1, mode="c"] wt = np.ascontiguousarray(opt_wt, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] vec = np.ascontiguousarray(opt_vec, dtype=np.uint8)
    cdef cnp.ndarray[i64, ndim=1, mode="c"] tot = np.ascontiguousarray(opt_total, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1, mode="c"] start = np.ascontiguousarray(pos_start, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=2, mode="c"] need = np.ascontiguousarray(forced_need, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] addt = np.ascontiguousarray(add, dtype=np.uint8)
    cdef cnp.ndarray[i64, ndim=2, mode="c"] rmin
    cdef cnp.ndarray[i64, ndim=2, mode="c"] rmax
    rmin, rmax = remaining_bounds(mt, start)
    cdef _MS st
    cdef list out = []
    st.npos = start.shape[0] - 1
    st.nx = b.shape[0]
    st.s = vec.shape[1]
    st.n_free = n_free
    st.n_forced = need.shape[1]
    st.q = q
    st.p = p
    st.d = d
    st.divisor = divisor
    st.check_norm = 1 if check_norm else 0
    st.base = <const i64*> b.data
    st.match = <const i64*> mt.data
    st.wt = <const i64*> wt.data
    st.vec = <const cnp.uint8_t*> vec.data
    st.total = <const i64*> tot.data
    st.start = <const i64*> start.data
    st.need_tab = <const i64*> need.data
    st.rmin = <const i64*> rmin.data
    st.rmax = <const i64*> rmax.data
    st.add = <const cnp.uint8_t*> addt.data
    st.need = NULL
    st.matches = <i64*> malloc((st.npos + 1) * max(1, st.nx) * sizeof(i64))
    st.acc = <cnp.uint8_t*> malloc((st.npos + 1) * max(1, st.s))
    st.choice = <i64*> malloc(max(1, st.npos) * sizeof(i64))
    try:
        memset(st.matches, 0, st.nx * sizeof(i64))
        memset(st.acc, 0, max(1, st.s))
        _ms_rec(&st, 0, 0, out)
    finally:
        free(st.matches)
        free(st.acc)
        free(st.choice)
    return np.array(out, dtype=np.int64).reshape(-1, st.npos)
