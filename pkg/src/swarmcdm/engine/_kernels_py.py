"""Pure-Python twin of the compiled kernels.

Operation order matches _kernels.pyx exactly so both backends produce
bit-identical doubles; only speed differs.
"""

import math

BACKEND = "python"

TWO_PI = 2.0 * math.pi

BEARINGS = (
    -math.pi / 3.0,
    -math.pi / 6.0,
    0.0,
    math.pi / 6.0,
    math.pi / 3.0,
)


def sense_all(px, py, heading, readings, body_radius, sense_range, arena):
    n = px.shape[0]
    rr = body_radius * body_radius
    for i in range(n):
        ox = float(px[i])
        oy = float(py[i])
        h = float(heading[i])
        for k in range(5):
            ang = h + BEARINGS[k]
            dx = math.cos(ang)
            dy = math.sin(ang)
            best = math.inf
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
            for j in range(n):
                if j == i:
                    continue
                ocx = float(px[j]) - ox
                ocy = float(py[j]) - oy
                proj = ocx * dx + ocy * dy
                if proj <= 0.0:
                    continue
                d2 = ocx * ocx + ocy * ocy - proj * proj
                if d2 > rr:
                    continue
                hit = proj - math.sqrt(rr - d2)
                if 0.0 < hit < best:
                    best = hit
            if best > sense_range:
                best = math.inf
            readings[i, k] = best


def integrate_all(px, py, heading, vl, vr, dt, axle, body_radius, arena):
    n = px.shape[0]
    lo = body_radius
    hi = arena - body_radius
    min2 = 4.0 * body_radius * body_radius
    for i in range(n):
        v = 0.5 * (float(vl[i]) + float(vr[i]))
        w = (float(vr[i]) - float(vl[i])) / axle
        h = float(heading[i])
        x = float(px[i])
        y = float(py[i])
        if w == 0.0:
            nh = h
            nx = x + v * math.cos(h) * dt
            ny = y + v * math.sin(h) * dt
        else:
            nh = h + w * dt
            radius = v / w
            nx = x + radius * (math.sin(nh) - math.sin(h))
            ny = y - radius * (math.cos(nh) - math.cos(h))
        nh = math.fmod(nh, TWO_PI)
        if nh < 0.0:
            nh += TWO_PI
        ok = lo <= nx <= hi and lo <= ny <= hi
        if ok:
            for j in range(n):
                if j == i:
                    continue
                ddx = nx - float(px[j])
                ddy = ny - float(py[j])
                if ddx * ddx + ddy * ddy < min2:
                    ok = False
                    break
        if ok:
            px[i] = nx
            py[i] = ny
        heading[i] = nh
