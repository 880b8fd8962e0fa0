"""Orientation and in-sphere predicates.

Every predicate first evaluates a floating-point determinant together with a
forward error bound; only when the sign is not certified is the determinant
recomputed exactly on integer images of the input coordinates.

The in-sphere test is made total by a symbolic perturbation of the lifted
coordinate ``|x|^2 + eps**(i + 1)`` of point ``i``.  Lower indices carry the
larger perturbation, so ties are resolved by the lowest-indexed point whose
cofactor does not vanish.

Sign conventions follow the classic ones: ``orient3d(a, b, c, d)`` is
``det[a - d, b - d, c - d]`` and ``insphere(a, b, c, d, e)`` is positive when
``e`` lies inside the sphere through a positively oriented ``a, b, c, d``.
"""
from __future__ import annotations

import sys

import numpy as np

_EPS = sys.float_info.epsilon * 0.5
# Twice the classic static bounds; the expression order below is not a
# verbatim copy of the reference evaluation so a little slack is kept.
O3D_ERRBOUND = 2.0 * (7.0 + 56.0 * _EPS) * _EPS
ISP_ERRBOUND = 2.0 * (16.0 + 224.0 * _EPS) * _EPS


def exact_images(points: np.ndarray) -> list[tuple[int, int, int]]:
    """Integer coordinates equal to ``points * 2**k`` for one shared ``k``."""
    flat = [float(x) for x in np.asarray(points, dtype=float).ravel()]
    ratios = [x.as_integer_ratio() for x in flat]
    scale = max(den for _, den in ratios)
    ints = [num * (scale // den) for num, den in ratios]
    return [tuple(ints[i:i + 3]) for i in range(0, len(ints), 3)]


def orient3d_fast(a, b, c, d) -> float:
    """Float determinant, or 0.0 when its sign is not certified."""
    adx = a[0] - d[0]
    ady = a[1] - d[1]
    adz = a[2] - d[2]
    bdx = b[0] - d[0]
    bdy = b[1] - d[1]
    bdz = b[2] - d[2]
    cdx = c[0] - d[0]
    cdy = c[1] - d[1]
    cdz = c[2] - d[2]
    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    cdxady = cdx * ady
    adxcdy = adx * cdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    det = (adz * (bdxcdy - cdxbdy)
           + bdz * (cdxady - adxcdy)
           + cdz * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * abs(adz)
                 + (abs(cdxady) + abs(adxcdy)) * abs(bdz)
                 + (abs(adxbdy) + abs(bdxady)) * abs(cdz))
    if abs(det) > O3D_ERRBOUND * permanent:
        return det
    return 0.0


def orient3d_exact(a, b, c, d) -> int:
    adx = a[0] - d[0]
    ady = a[1] - d[1]
    adz = a[2] - d[2]
    bdx = b[0] - d[0]
    bdy = b[1] - d[1]
    bdz = b[2] - d[2]
    cdx = c[0] - d[0]
    cdy = c[1] - d[1]
    cdz = c[2] - d[2]
    det = (adz * (bdx * cdy - cdx * bdy)
           + bdz * (cdx * ady - adx * cdy)
           + cdz * (adx * bdy - bdx * ady))
    return (det > 0) - (det < 0)


def insphere_fast(a, b, c, d, e) -> float:
    """Float in-sphere determinant, or 0.0 when its sign is not certified."""
    aex = a[0] - e[0]
    aey = a[1] - e[1]
    aez = a[2] - e[2]
    bex = b[0] - e[0]
    bey = b[1] - e[1]
    bez = b[2] - e[2]
    cex = c[0] - e[0]
    cey = c[1] - e[1]
    cez = c[2] - e[2]
    dex = d[0] - e[0]
    dey = d[1] - e[1]
    dez = d[2] - e[2]

    aexbey = aex * bey
    bexaey = bex * aey
    ab = aexbey - bexaey
    bexcey = bex * cey
    cexbey = cex * bey
    bc = bexcey - cexbey
    cexdey = cex * dey
    dexcey = dex * cey
    cd = cexdey - dexcey
    dexaey = dex * aey
    aexdey = aex * dey
    da = dexaey - aexdey
    aexcey = aex * cey
    cexaey = cex * aey
    ac = aexcey - cexaey
    bexdey = bex * dey
    dexbey = dex * bey
    bd = bexdey - dexbey

    abc = aez * bc - bez * ac + cez * ab
    bcd = bez * cd - cez * bd + dez * bc
    cda = cez * da + dez * ac + aez * cd
    dab = dez * ab + aez * bd + bez * da

    alift = aex * aex + aey * aey + aez * aez
    blift = bex * bex + bey * bey + bez * bez
    clift = cex * cex + cey * cey + cez * cez
    dlift = dex * dex + dey * dey + dez * dez

    det = (dlift * abc - clift * dab) + (blift * cda - alift * bcd)

    aezplus = abs(aez)
    bezplus = abs(bez)
    cezplus = abs(cez)
    dezplus = abs(dez)
    abp = abs(aexbey) + abs(bexaey)
    bcp = abs(bexcey) + abs(cexbey)
    cdp = abs(cexdey) + abs(dexcey)
    dap = abs(dexaey) + abs(aexdey)
    acp = abs(aexcey) + abs(cexaey)
    bdp = abs(bexdey) + abs(dexbey)
    permanent = ((cdp * bezplus + bdp * cezplus + bcp * dezplus) * alift
                 + (dap * cezplus + acp * dezplus + cdp * aezplus) * blift
                 + (abp * dezplus + bdp * aezplus + dap * bezplus) * clift
                 + (bcp * aezplus + acp * bezplus + abp * cezplus) * dlift)
    if abs(det) > ISP_ERRBOUND * permanent:
        return det
    return 0.0


def _det4(m) -> int:
    # cofactor expansion along the first row; entries are Python ints
    (a, b, c, d), (e, f, g, h), (i, j, k, l), (m0, n, o, p) = m
    kp_lo = k * p - l * o
    jp_ln = j * p - l * n
    jo_kn = j * o - k * n
    ip_lm = i * p - l * m0
    io_km = i * o - k * m0
    in_jm = i * n - j * m0
    return (a * (f * kp_lo - g * jp_ln + h * jo_kn)
            - b * (e * kp_lo - g * ip_lm + h * io_km)
            + c * (e * jp_ln - f * ip_lm + h * in_jm)
            - d * (e * jo_kn - f * io_km + g * in_jm))


def insphere_exact(a, b, c, d, e) -> int:
    rows = []
    for q in (a, b, c, d):
        x, y, z = q[0] - e[0], q[1] - e[1], q[2] - e[2]
        rows.append((x, y, z, x * x + y * y + z * z))
    det = _det4(rows)
    return (det > 0) - (det < 0)


def insphere_perturbed_exact(pts, ids) -> int:
    """Sign of the perturbed in-sphere determinant, never zero for a solid tet.

    ``ids`` are the five point indices in predicate order (a, b, c, d, e);
    ``pts`` are their exact integer images.
    """
    s = insphere_exact(*pts)
    if s:
        return s
    # The lifted column sits at index 3 of the 5x5 matrix [x y z w 1].
    for pos in sorted(range(5), key=lambda r: ids[r]):
        rows = [(*pts[r], 1) for r in range(5) if r != pos]
        cof = _det4(rows)
        if cof:
            if (pos + 3) % 2:
                cof = -cof
            return (cof > 0) - (cof < 0)
    return 0


class Predicates:
    """Predicates bound to one point set, addressed by point index."""

    def __init__(self, points: np.ndarray):
        self.points = np.ascontiguousarray(points, dtype=float)
        self.coords = [tuple(map(float, p)) for p in self.points]
        self._exact = None
        self.exact_calls = 0

    @property
    def exact(self):
        if self._exact is None:
            self._exact = exact_images(self.points)
        return self._exact

    def orient(self, i: int, j: int, k: int, l: int) -> int:
        c = self.coords
        det = orient3d_fast(c[i], c[j], c[k], c[l])
        if det > 0.0:
            return 1
        if det < 0.0:
            return -1
        self.exact_calls += 1
        x = self.exact
        return orient3d_exact(x[i], x[j], x[k], x[l])

    def insphere(self, i: int, j: int, k: int, l: int, m: int) -> int:
        """+1 if point ``m`` is inside the (perturbed) sphere of tet ijkl."""
        c = self.coords
        det = insphere_fast(c[i], c[j], c[k], c[l], c[m])
        if det > 0.0:
            return 1
        if det < 0.0:
            return -1
        self.exact_calls += 1
        x = self.exact
        ids = (i, j, k, l, m)
        return insphere_perturbed_exact([x[t] for t in ids], ids)
