# cython: language_level=3, boundscheck=False, wraparound=False
# distutils: language = c++
"""Compiled versions of the hot kernels; signatures mirror _kernels_py."""
import numpy as np
cimport numpy as cnp
from libcpp.vector cimport vector
from libcpp.algorithm cimport sort
from libcpp.unordered_map cimport unordered_map
from libc.math cimport fabs
from cython.operator cimport dereference

ctypedef long long i64

cnp.import_array()


cdef void _xor_into(vector[i64]& col, const vector[i64]& other, vector[i64]& tmp) noexcept nogil:
    # col and other are sorted ascending; result replaces col
    cdef size_t a = 0, b = 0
    cdef size_t na = col.size(), nb = other.size()
    tmp.clear()
    while a < na and b < nb:
        if col[a] < other[b]:
            tmp.push_back(col[a]); a += 1
        elif other[b] < col[a]:
            tmp.push_back(other[b]); b += 1
        else:
            a += 1; b += 1
    while a < na:
        tmp.push_back(col[a]); a += 1
    while b < nb:
        tmp.push_back(other[b]); b += 1
    col.swap(tmp)


def reduce_boundary(indptr, indices, dims):
    cdef cnp.ndarray[i64, ndim=1] ptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] dim = np.ascontiguousarray(dims, dtype=np.int8)
    cdef Py_ssize_t n = dim.shape[0]
    cdef cnp.ndarray[i64, ndim=1] low = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] pivot_col = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] cleared = np.zeros(n, dtype=np.uint8)
    cdef vector[vector[i64]] reduced
    cdef vector[i64] col, tmp
    cdef Py_ssize_t j, p
    cdef i64 k
    cdef int d, top = 0
    reduced.resize(n)
    for j in range(n):
        if dim[j] > top:
            top = dim[j]
    with nogil:
        for d in range(top, 0, -1):
            for j in range(n):
                if dim[j] != d or cleared[j]:
                    continue
                col.clear()
                for p in range(ptr[j], ptr[j + 1]):
                    col.push_back(idx[p])
                sort(col.begin(), col.end())
                while col.size() > 0:
                    k = pivot_col[col.back()]
                    if k < 0:
                        break
                    _xor_into(col, reduced[k], tmp)
                if col.size() > 0:
                    pivot_col[col.back()] = j
                    low[j] = col.back()
                    cleared[col.back()] = 1
                    reduced[j] = col
    return low


# ---------------------------------------------------------------------------
# Incremental Delaunay insertion.  Float filters run here; uncertified signs
# go back to the Python predicate object for the exact/perturbed answer.

cdef double _EPS = 2.0 ** -53
cdef double _O3D = 2.0 * (7.0 + 56.0 * _EPS) * _EPS
cdef double _ISP = 2.0 * (16.0 + 224.0 * _EPS) * _EPS
cdef i64 INF = -1


cdef inline double _orient_fast(const double* a, const double* b, const double* c,
                                const double* d) noexcept nogil:
    cdef double adx = a[0] - d[0], ady = a[1] - d[1], adz = a[2] - d[2]
    cdef double bdx = b[0] - d[0], bdy = b[1] - d[1], bdz = b[2] - d[2]
    cdef double cdx = c[0] - d[0], cdy = c[1] - d[1], cdz = c[2] - d[2]
    cdef double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy
    cdef double cdxady = cdx * ady, adxcdy = adx * cdy
    cdef double adxbdy = adx * bdy, bdxady = bdx * ady
    cdef double det = (adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy)
                       + cdz * (adxbdy - bdxady))
    cdef double perm = ((fabs(bdxcdy) + fabs(cdxbdy)) * fabs(adz)
                        + (fabs(cdxady) + fabs(adxcdy)) * fabs(bdz)
                        + (fabs(adxbdy) + fabs(bdxady)) * fabs(cdz))
    if fabs(det) > _O3D * perm:
        return det
    return 0.0


cdef inline double _insphere_fast(const double* a, const double* b, const double* c,
                                  const double* d, const double* e) noexcept nogil:
    cdef double aex = a[0] - e[0], aey = a[1] - e[1], aez = a[2] - e[2]
    cdef double bex = b[0] - e[0], bey = b[1] - e[1], bez = b[2] - e[2]
    cdef double cex = c[0] - e[0], cey = c[1] - e[1], cez = c[2] - e[2]
    cdef double dex = d[0] - e[0], dey = d[1] - e[1], dez = d[2] - e[2]
    cdef double aexbey = aex * bey, bexaey = bex * aey
    cdef double bexcey = bex * cey, cexbey = cex * bey
    cdef double cexdey = cex * dey, dexcey = dex * cey
    cdef double dexaey = dex * aey, aexdey = aex * dey
    cdef double aexcey = aex * cey, cexaey = cex * aey
    cdef double bexdey = bex * dey, dexbey = dex * bey
    cdef double ab = aexbey - bexaey, bc = bexcey - cexbey, cd = cexdey - dexcey
    cdef double da = dexaey - aexdey, ac = aexcey - cexaey, bd = bexdey - dexbey
    cdef double abc = aez * bc - bez * ac + cez * ab
    cdef double bcd = bez * cd - cez * bd + dez * bc
    cdef double cda = cez * da + dez * ac + aez * cd
    cdef double dab = dez * ab + aez * bd + bez * da
    cdef double alift = aex * aex + aey * aey + aez * aez
    cdef double blift = bex * bex + bey * bey + bez * bez
    cdef double clift = cex * cex + cey * cey + cez * cez
    cdef double dlift = dex * dex + dey * dey + dez * dez
    cdef double det = (dlift * abc - clift * dab) + (blift * cda - alift * bcd)
    cdef double az = fabs(aez), bz = fabs(bez), cz = fabs(cez), dz = fabs(dez)
    cdef double abp = fabs(aexbey) + fabs(bexaey), bcp = fabs(bexcey) + fabs(cexbey)
    cdef double cdp = fabs(cexdey) + fabs(dexcey), dap = fabs(dexaey) + fabs(aexdey)
    cdef double acp = fabs(aexcey) + fabs(cexaey), bdp = fabs(bexdey) + fabs(dexbey)
    cdef double perm = ((cdp * bz + bdp * cz + bcp * dz) * alift
                        + (dap * cz + acp * dz + cdp * az) * blift
                        + (abp * dz + bdp * az + dap * bz) * clift
                        + (bcp * az + acp * bz + abp * cz) * dlift)
    if fabs(det) > _ISP * perm:
        return det
    return 0.0


cdef class _BowyerWatson:
    cdef const double[:, ::1] pts
    cdef object pred
    cdef vector[i64] tv
    cdef vector[i64] tn
    cdef vector[char] alive
    cdef vector[i64] free_
    cdef vector[i64] stamp
    cdef vector[char] cval
    cdef vector[i64] cav_stamp
    cdef i64 cur
    cdef i64 last
    cdef unsigned long long rng
    cdef i64 n

    def __init__(self, points, pred, first, seed):
        self.pts = points
        self.pred = pred
        self.n = points.shape[0]
        self.cur = 0
        # splitmix-style seeding; the walk path never changes the result
        self.rng = (<unsigned long long>seed) * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL
        if self.rng == 0:
            self.rng = 1
        cdef i64 a = first[0], b = first[1], c = first[2], d = first[3]
        if self._orient(a, b, c, d) < 0:
            b, c = c, b
        cdef i64 t0 = self._new(a, b, c, d)
        cdef i64 g[4]
        cdef i64 gv[4]
        cdef int i, j, k, x
        for i in range(4):
            gv[0] = a; gv[1] = b; gv[2] = c; gv[3] = d
            gv[i] = INF
            j = 1 if i == 0 else 0
            k = j + 1
            if k == i:
                k += 1
            gv[j], gv[k] = gv[k], gv[j]
            g[i] = self._new(gv[0], gv[1], gv[2], gv[3])
        for i in range(4):
            self.tn[4 * t0 + i] = g[i]
            for x in range(4):
                if self.tv[4 * g[i] + x] == INF:
                    self.tn[4 * g[i] + x] = t0
        self._link_ghosts(g)
        self.last = t0

    cdef void _link_ghosts(self, i64* g):
        cdef int i, j, fi, fj, m, hits
        cdef i64 t, u, w
        for i in range(4):
            t = g[i]
            for fi in range(4):
                if self.tn[4 * t + fi] != -1 and self.tv[4 * t + fi] != INF:
                    continue
                if self.tv[4 * t + fi] == INF:
                    continue  # that face is the hull face, already linked
                for j in range(4):
                    if j == i:
                        continue
                    u = g[j]
                    for fj in range(4):
                        if self.tv[4 * u + fj] == INF:
                            continue
                        hits = 0
                        for m in range(4):
                            if m == fi:
                                continue
                            w = self.tv[4 * t + m]
                            if (w == self.tv[4 * u + (fj + 1) % 4] or w == self.tv[4 * u + (fj + 2) % 4]
                                    or w == self.tv[4 * u + (fj + 3) % 4]):
                                hits += 1
                        if hits == 3:
                            self.tn[4 * t + fi] = u
                            self.tn[4 * u + fj] = t

    cdef i64 _new(self, i64 a, i64 b, i64 c, i64 d):
        cdef i64 t
        if self.free_.size() > 0:
            t = self.free_.back()
            self.free_.pop_back()
            self.tv[4 * t] = a; self.tv[4 * t + 1] = b
            self.tv[4 * t + 2] = c; self.tv[4 * t + 3] = d
            for i in range(4):
                self.tn[4 * t + i] = -1
            self.alive[t] = 1
            self.stamp[t] = -1
            self.cav_stamp[t] = -1
            return t
        t = self.alive.size()
        self.tv.push_back(a); self.tv.push_back(b)
        self.tv.push_back(c); self.tv.push_back(d)
        for i in range(4):
            self.tn.push_back(-1)
        self.alive.push_back(1)
        self.stamp.push_back(-1)
        self.cval.push_back(0)
        self.cav_stamp.push_back(-1)
        return t

    cdef int _orient(self, i64 i, i64 j, i64 k, i64 l) except? -9:
        cdef double det = _orient_fast(&self.pts[i, 0], &self.pts[j, 0],
                                       &self.pts[k, 0], &self.pts[l, 0])
        if det > 0.0:
            return 1
        if det < 0.0:
            return -1
        return self.pred.orient(i, j, k, l)

    cdef int _insphere(self, i64 i, i64 j, i64 k, i64 l, i64 m) except? -9:
        cdef double det = _insphere_fast(&self.pts[i, 0], &self.pts[j, 0], &self.pts[k, 0],
                                         &self.pts[l, 0], &self.pts[m, 0])
        if det > 0.0:
            return 1
        if det < 0.0:
            return -1
        return self.pred.insphere(i, j, k, l, m)

    cdef inline bint _is_ghost(self, i64 t):
        return (self.tv[4 * t] == INF or self.tv[4 * t + 1] == INF
                or self.tv[4 * t + 2] == INF or self.tv[4 * t + 3] == INF)

    cdef int _conflict(self, i64 t, i64 p) except -1:
        if self.stamp[t] == self.cur:
            return self.cval[t]
        cdef i64 w[4]
        cdef int i, k = -1, o, res
        for i in range(4):
            w[i] = self.tv[4 * t + i]
            if w[i] == INF:
                k = i
        if k >= 0:
            w[k] = p
            o = self._orient(w[0], w[1], w[2], w[3])
            if o != 0:
                res = 1 if o > 0 else 0
            else:
                # p is coplanar with the hull face: defer to the solid tet
                res = self._conflict(self.tn[4 * t + k], p)
        else:
            res = 1 if self._insphere(w[0], w[1], w[2], w[3], p) > 0 else 0
        self.stamp[t] = self.cur
        self.cval[t] = res
        return res

    cdef unsigned long long _next(self):
        cdef unsigned long long x = self.rng
        x ^= x << 13
        x ^= x >> 7
        x ^= x << 17
        self.rng = x
        return x

    cdef i64 _locate(self, i64 p) except -2:
        cdef i64 t = self.last
        cdef i64 steps, limit, ntet = self.alive.size()
        cdef int order[4]
        cdef int i, r, tmp, fi
        cdef i64 w[4]
        if not self.alive[t] or self._is_ghost(t):
            for t in range(ntet):
                if self.alive[t] and not self._is_ghost(t):
                    break
        limit = 10 * ntet + 100
        for steps in range(limit):
            if self._is_ghost(t):
                return t
            order[0] = 0; order[1] = 1; order[2] = 2; order[3] = 3
            for i in range(3, 0, -1):
                r = <int>(self._next() % <unsigned long long>(i + 1))
                tmp = order[i]; order[i] = order[r]; order[r] = tmp
            moved = False
            for r in range(4):
                fi = order[r]
                for i in range(4):
                    w[i] = self.tv[4 * t + i]
                w[fi] = p
                if self._orient(w[0], w[1], w[2], w[3]) < 0:
                    t = self.tn[4 * t + fi]
                    moved = True
                    break
            if not moved:
                return t
        raise RuntimeError("point location did not terminate")

    cpdef insert(self, i64 p):
        self.cur += 1
        cdef i64 start = self._locate(p)
        cdef i64 t, nb, nt, outside, old, key, a, b, x, y, ntet
        cdef int i, k, j, m
        cdef vector[i64] cavity, stack, bt, new_ids
        cdef vector[int] bi
        cdef unordered_map[i64, i64] edge_faces
        cdef unordered_map[i64, i64].iterator it
        cdef i64 w[4]
        if not self._conflict(start, p):
            # start is a ghost whose face p does not strictly see
            ntet = self.alive.size()
            for t in range(ntet):
                if self.alive[t] and self._conflict(t, p):
                    start = t
                    break
            else:
                raise RuntimeError("no conflicting tetrahedron")
        self.cav_stamp[start] = self.cur
        cavity.push_back(start)
        stack.push_back(start)
        while stack.size() > 0:
            t = stack.back()
            stack.pop_back()
            for i in range(4):
                nb = self.tn[4 * t + i]
                if self.cav_stamp[nb] == self.cur:
                    continue
                if self._conflict(nb, p):
                    self.cav_stamp[nb] = self.cur
                    cavity.push_back(nb)
                    stack.push_back(nb)
                else:
                    bt.push_back(t)
                    bi.push_back(i)
        for m in range(<int>bt.size()):
            old = bt[m]
            i = bi[m]
            for k in range(4):
                w[k] = self.tv[4 * old + k]
            w[i] = p
            outside = self.tn[4 * old + i]
            nt = self._new(w[0], w[1], w[2], w[3])
            new_ids.push_back(nt)
            self.tn[4 * nt + i] = outside
            for k in range(4):
                if self.tn[4 * outside + k] == old:
                    self.tn[4 * outside + k] = nt
                    break
            for k in range(4):
                if k == i:
                    continue
                x = -2
                y = -2
                for j in range(4):
                    if j != i and j != k:
                        if x == -2:
                            x = w[j]
                        else:
                            y = w[j]
                if x < y:
                    a, b = x, y
                else:
                    a, b = y, x
                key = (a + 1) * (self.n + 1) + (b + 1)
                it = edge_faces.find(key)
                if it == edge_faces.end():
                    edge_faces[key] = 4 * nt + k
                else:
                    j = <int>(deref_second(it) % 4)
                    old = deref_second(it) // 4
                    self.tn[4 * nt + k] = old
                    self.tn[4 * old + j] = nt
                    edge_faces.erase(it)
        if edge_faces.size() > 0:
            raise RuntimeError("cavity boundary is not a closed surface")
        sort(cavity.begin(), cavity.end())
        for m in range(<int>cavity.size()):
            self.alive[cavity[m]] = 0
            self.free_.push_back(cavity[m])
        self.last = new_ids[0]
        for m in range(<int>new_ids.size()):
            if not self._is_ghost(new_ids[m]):
                self.last = new_ids[m]
                break

    def solid(self):
        cdef i64 ntet = self.alive.size(), t, count = 0
        for t in range(ntet):
            if self.alive[t] and not self._is_ghost(t):
                count += 1
        out = np.empty((count, 4), dtype=np.int64)
        cdef i64[:, ::1] o = out
        cdef i64 r = 0
        for t in range(ntet):
            if self.alive[t] and not self._is_ghost(t):
                for i in range(4):
                    o[r, i] = self.tv[4 * t + i]
                r += 1
        out.sort(axis=1)
        return out


cdef inline i64 deref_second(unordered_map[i64, i64].iterator it):
    return dereference(it).second


def delaunay_tets(points, order, first, seed, pred):
    """Solid tetrahedra (rows of sorted vertex ids) of the Delaunay triangulation."""
    cdef const double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)
    bw = _BowyerWatson(pts, pred, tuple(int(v) for v in first), int(seed) & 0xFFFFFFFFFFFF)
    cdef _BowyerWatson core = bw
    for p in order:
        core.insert(p)
    return core.solid()
