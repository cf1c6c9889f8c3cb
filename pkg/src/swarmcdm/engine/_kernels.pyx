# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: 5-ray proximity sensing for all robots and the
sequential pose integration with contact cancellation.

The pure-Python twin (_kernels_py) performs the same operations in the
same order so both backends produce bit-identical trajectories.
"""

from libc.math cimport sin, cos, sqrt, fmod, INFINITY, M_PI

BACKEND = "compiled"

cdef double TWO_PI = 2.0 * M_PI

# Ray bearings relative to heading: -60, -30, 0, +30, +60 degrees.
cdef double[5] BEARINGS
BEARINGS[0] = -M_PI / 3.0
BEARINGS[1] = -M_PI / 6.0
BEARINGS[2] = 0.0
BEARINGS[3] = M_PI / 6.0
BEARINGS[4] = M_PI / 3.0


def sense_all(double[::1] px, double[::1] py, double[::1] heading,
              double[:, ::1] readings,
              double body_radius, double sense_range, double arena):
    """Fill readings[i, k] with the distance from robot i's center along
    ray k to the nearest wall or other robot disc, INFINITY if nothing
    lies within sense_range."""
    cdef Py_ssize_t n = px.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double ox, oy, ang, dx, dy, best, t, hit
    cdef double ocx, ocy, proj, d2, disc, rr
    rr = body_radius * body_radius
    for i in range(n):
        ox = px[i]
        oy = py[i]
        for k in range(5):
            ang = heading[i] + BEARINGS[k]
            dx = cos(ang)
            dy = sin(ang)
            best = INFINITY
            # Walls of the square arena [0, arena]^2.
            if dx < 0.0:
                t = -ox / dx
                if t < best:
                    best = t
            elif dx > 0.0:
                t = (arena - ox) / dx
                if t < best:
                    best = t
            if dy < 0.0:
                t = -oy / dy
                if t < best:
                    best = t
            elif dy > 0.0:
                t = (arena - oy) / dy
                if t < best:
                    best = t
            # Other robots as discs of body_radius.
            for j in range(n):
                if j == i:
                    continue
                ocx = px[j] - ox
                ocy = py[j] - oy
                proj = ocx * dx + ocy * dy
                if proj <= 0.0:
                    continue
                d2 = ocx * ocx + ocy * ocy - proj * proj
                if d2 > rr:
                    continue
                hit = proj - sqrt(rr - d2)
                if 0.0 < hit < best:
                    best = hit
            if best > sense_range:
                best = INFINITY
            readings[i, k] = best


def integrate_all(double[::1] px, double[::1] py, double[::1] heading,
                  double[::1] vl, double[::1] vr,
                  double dt, double axle, double body_radius, double arena):
    """Advance every pose one tick in index order. A position update that
    would overlap a wall or another robot disc is cancelled; the heading
    update always applies."""
    cdef Py_ssize_t n = px.shape[0]
    cdef Py_ssize_t i, j
    cdef double v, w, h, nh, nx, ny, radius, ddx, ddy, lo, hi, min2
    cdef bint ok
    lo = body_radius
    hi = arena - body_radius
    min2 = 4.0 * body_radius * body_radius
    for i in range(n):
        v = 0.5 * (vl[i] + vr[i])
        w = (vr[i] - vl[i]) / axle
        h = heading[i]
        if w == 0.0:
            nh = h
            nx = px[i] + v * cos(h) * dt
            ny = py[i] + v * sin(h) * dt
        else:
            nh = h + w * dt
            radius = v / w
            nx = px[i] + radius * (sin(nh) - sin(h))
            ny = py[i] - radius * (cos(nh) - cos(h))
        nh = fmod(nh, TWO_PI)
        if nh < 0.0:
            nh += TWO_PI
        ok = lo <= nx <= hi and lo <= ny <= hi
        if ok:
            for j in range(n):
                if j == i:
                    continue
                ddx = nx - px[j]
                ddy = ny - py[j]
                if ddx * ddx + ddy * ddy < min2:
                    ok = False
                    break
        if ok:
            px[i] = nx
            py[i] = ny
        heading[i] = nh
