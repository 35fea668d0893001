"""Independent reference computations used to check the library.

Nothing here calls into algdiag's section or polytope machinery.
"""
from fractions import Fraction
from itertools import product
from math import comb


def lucas_binom_mod(n: int, k: int, p: int) -> int:
    """C(n, k) mod p, one base-p digit at a time (works for huge n)."""
    out = 1
    while n or k:
        nd, kd = n % p, k % p
        if kd > nd:
            return 0
        out = out * comb(nd, kd) % p
        n //= p
        k //= p
    return out


def pascal_coeff(i: int, j: int, p: int) -> int:
    """[t1^i t2^j] 1/(1 - t1 - t2) mod p, i.e. C(i+j, i) mod p."""
    return lucas_binom_mod(i + j, i, p)


def catalan_mod(count: int, p: int) -> list[int]:
    """C_0..C_{count-1} mod p from the convolution recurrence."""
    c = [1]
    for m in range(1, count):
        c.append(sum(c[k] * c[m - 1 - k] for k in range(m)))
    return [x % p for x in c]


def central_binomial_mod(count: int, p: int) -> list[int]:
    return [comb(2 * k, k) % p for k in range(count)]


def _hull_2d(points):
    """Counter-clockwise hull vertices (monotone chain, exact integers)."""
    pts = sorted(set(map(tuple, points)))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for pt in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], pt) <= 0:
            lower.pop()
        lower.append(pt)
    for pt in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], pt) <= 0:
            upper.pop()
        upper.append(pt)
    return lower[:-1] + upper[:-1]


def _clip(poly, keep):
    """Sutherland-Hodgman clip of a point list against {v : keep(v) >= 0},
    ``keep`` affine.  Degenerate inputs (points, segments) are handled."""
    if len(poly) == 1:
        return poly if keep(poly[0]) >= 0 else []
    out = []
    m = len(poly)
    for k in range(m):
        cur, nxt = poly[k], poly[(k + 1) % m]
        fc, fn = keep(cur), keep(nxt)
        if fc >= 0:
            out.append(cur)
        if (fc >= 0) != (fn >= 0) and fc != fn:
            lam = fc / (fc - fn)
            out.append((cur[0] + lam * (nxt[0] - cur[0]), cur[1] + lam * (nxt[1] - cur[1])))
    return out


def box_points_2d(support):
    """Points z in N^2 of conv(support) + (-1, 0]^2, i.e. with the half-open
    unit box z + [0, 1)^2 meeting the hull.

    Clip the hull to the closed box [z, z+1]^2, then ask whether the clipped
    polygon reaches x < z1+1, y < z2+1: the concave function
    min(z1+1 - x, z2+1 - y) peaks at a vertex or where the two terms tie.
    """
    hull = [(Fraction(x), Fraction(y)) for x, y in _hull_2d(support)]
    top = max(max(x, y) for x, y in hull)
    out = []
    for z1 in range(int(top) + 1):
        for z2 in range(int(top) + 1):
            a, b = z1 + 1, z2 + 1
            poly = hull
            for keep in (
                lambda v: v[0] - z1, lambda v: a - v[0],
                lambda v: v[1] - z2, lambda v: b - v[1],
            ):
                poly = _clip(poly, keep)
                if not poly:
                    break
            if not poly:
                continue
            cand = list(poly)
            m = len(poly)
            for k in range(m):
                edge = [poly[k], poly[(k + 1) % m]]
                cand += _clip(edge, lambda v: (a - v[0]) - (b - v[1]))
                cand += _clip(edge, lambda v: (b - v[1]) - (a - v[0]))
            if any(x < a and y < b for x, y in cand):
                out.append((z1, z2))
    return out


def naive_ext_mul(a, b, modulus, p):
    """Product of two coefficient vectors in F_p[x]/(modulus), schoolbook."""
    e = len(modulus) - 1
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for i in range(e + 1):
                prod[k - e + i] = (prod[k - e + i] - c * modulus[i]) % p
    return prod[:e]


def naive_series_mul(F, a: dict, b: dict, prec: int) -> dict:
    """Product of two {exponent: code} maps, dropping total degree >= prec."""
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if sum(e) < prec:
                out[e] = F.add(out.get(e, 0), F.mul(ca, cb))
    return {e: c for e, c in out.items() if c}


def _vertical_slice(pts, x):
    """[ymin, ymax] of conv(pts) on the line X = x, or None.  In the plane the
    slice is spanned by the crossings of segments between pairs of points."""
    ys = []
    for (x1, y1) in pts:
        for (x2, y2) in pts:
            if x1 <= x <= x2:
                if x1 == x2:
                    ys += [Fraction(y1), Fraction(y2)]
                else:
                    ys.append(y1 + Fraction(x - x1, x2 - x1) * (y2 - y1))
    return (min(ys), max(ys)) if ys else None


def diagonal_classes_n2(support, hvec, d):
    """Classes (a1, a2, b), min(a) = 0, a_k <= h_k, b <= d, for n = 2.

    (a - lam*(1,1), y) lies in the hull for some lam iff (a1 - a2, y) lies in
    the hull of the support projected by (t1, t2, y) -> (t1 - t2, y).
    """
    proj = sorted({(t1 - t2, y) for t1, t2, y in support})
    out = []
    for a1 in range(hvec[0] + 1):
        for a2 in range(hvec[1] + 1):
            if min(a1, a2) != 0:
                continue
            sl = _vertical_slice(proj, a1 - a2)
            if sl is None:
                continue
            lo, hi = sl
            for b in range(d + 1):
                if lo < b + 1 and hi >= b:
                    out.append((a1, a2, b))
    return sorted(out)


def naive_fm_feasible(constraints, nvars):
    """Textbook Fourier-Motzkin with strictness flags and no pruning."""
    cons = {(tuple(Fraction(a) for a in c), Fraction(b), bool(s)) for c, b, s in constraints}
    for var in range(nvars):
        pos = [c for c in cons if c[0][var] > 0]
        neg = [c for c in cons if c[0][var] < 0]
        new = {c for c in cons if c[0][var] == 0}
        for cp, bp, sp in pos:
            for cn, bn, sn in neg:
                kp, kn = -cn[var], cp[var]
                new.add((tuple(kp * x + kn * y for x, y in zip(cp, cn)), kp * bp + kn * bn, sp or sn))
        cons = new
    return all((0 < b) if s else (0 <= b) for _, b, s in cons)
