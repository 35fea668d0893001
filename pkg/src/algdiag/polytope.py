"""Newton polytopes, lattice-point counts and the closed-form p-degree bound.

Everything here is exact: rational arithmetic via ``fractions.Fraction`` and
Fourier-Motzkin elimination that keeps strict and non-strict inequalities
apart, because the half-open boxes involved make floating-point tolerance
tests unsound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Sequence

from .errors import ZeroPolynomial
from .poly import DegreeProfile, MultiPoly, degree_profile, term_order_key

Point = tuple[int, ...]


@dataclass(frozen=True)
class Halfspace:
    """normal . x <= offset (or < offset when strict)."""

    normal: tuple[Fraction, ...]
    offset: Fraction
    strict: bool = False

    def holds(self, x: Sequence) -> bool:
        lhs = sum(a * b for a, b in zip(self.normal, x))
        return lhs < self.offset if self.strict else lhs <= self.offset


@dataclass(frozen=True)
class NewtonPolytope:
    dim: int
    vertices: tuple[Point, ...]
    halfspaces: tuple[Halfspace, ...]

    def contains(self, x: Sequence) -> bool:
        return all(h.holds(x) for h in self.halfspaces)


# -- exact linear algebra ---------------------------------------------------


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    pivots = []
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [v * inv for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                c = m[i][col]
                m[i] = [a - c * b for a, b in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
    return m[:rank], pivots


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def rank(rows: list[list[Fraction]]) -> int:
    return len(_rref(rows)[1]) if rows else 0


def _primitive(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints)
    return tuple(Fraction(x // g) for x in ints)


# -- hulls -------------------------------------------------------------------


def convex_hull(points: Sequence[Point]) -> NewtonPolytope:
    """Exact hull of a finite point set by brute-force facet enumeration.

    Intended for ambient dimension <= 5 and a few dozen points.
    """
    pts = sorted(set(tuple(int(c) for c in x) for x in points), key=term_order_key)
    if not pts:
        raise ZeroPolynomial("hull of an empty point set")
    D = len(pts[0])
    base = pts[0]
    diffs = [[Fraction(a - b) for a, b in zip(x, base)] for x in pts[1:]]
    direction, _ = _rref(diffs) if diffs else ([], [])
    m = len(direction)
    halfspaces: set[Halfspace] = set()
    # affine hull equalities, each as a pair of inequalities
    for w in nullspace(direction, D):
        w = _primitive(w)
        c = sum(a * b for a, b in zip(w, base))
        halfspaces.add(Halfspace(w, c))
        halfspaces.add(Halfspace(tuple(-a for a in w), -c))
    eq_normals = [list(h.normal) for h in halfspaces]
    if m >= 1:
        for combo in combinations(pts, m):
            fdiffs = [[Fraction(a - b) for a, b in zip(x, combo[0])] for x in combo[1:]]
            # facet normal: inside the direction space, orthogonal to the facet
            coeffs = nullspace(
                [[sum(a * b for a, b in zip(fd, dv)) for dv in direction] for fd in fdiffs], m
            )
            if len(coeffs) != 1:
                continue
            w = [sum(c * dv[k] for c, dv in zip(coeffs[0], direction)) for k in range(D)]
            w = _primitive(w)
            c = sum(a * b for a, b in zip(w, combo[0]))
            vals = [sum(a * b for a, b in zip(w, x)) for x in pts]
            if all(v <= c for v in vals):
                halfspaces.add(Halfspace(w, c))
            elif all(v >= c for v in vals):
                halfspaces.add(Halfspace(tuple(-a for a in w), -c))
    hs = tuple(sorted(halfspaces, key=lambda h: (h.normal, h.offset)))
    vertices = []
    for x in pts:
        tight = [list(h.normal) for h in hs if sum(a * b for a, b in zip(h.normal, x)) == h.offset]
        if rank(tight + eq_normals) == D:
            vertices.append(x)
    return NewtonPolytope(dim=D, vertices=tuple(vertices), halfspaces=hs)


def newton_polytope(A: MultiPoly) -> NewtonPolytope:
    if A.is_zero():
        raise ZeroPolynomial("Newton polytope of the zero polynomial")
    return _cached_hull(tuple(A.support()))


@lru_cache(maxsize=256)
def _cached_hull(support: tuple[Point, ...]) -> NewtonPolytope:
    return convex_hull(support)


def minkowski_vertices(P: NewtonPolytope, Q: NewtonPolytope) -> tuple[Point, ...]:
    sums = {tuple(a + b for a, b in zip(x, y)) for x in P.vertices for y in Q.vertices}
    return convex_hull(list(sums)).vertices


# -- Fourier-Motzkin -------------------------------------------------------------

Constraint = tuple[tuple[Fraction, ...], Fraction, bool]  # coeffs . x (<|<=) rhs


def _scaled(coeffs: tuple[Fraction, ...], rhs: Fraction) -> tuple[tuple[Fraction, ...], Fraction]:
    scale = next((abs(a) for a in coeffs if a != 0), None)
    if scale is None or scale == 1:
        return coeffs, rhs
    return tuple(a / scale for a in coeffs), rhs / scale


def fm_feasible(constraints: Sequence[Constraint], nvars: int) -> bool:
    """Decide {x in R^nvars : all constraints} != {} by Fourier-Motzkin.

    Strict rows ``a.x < b`` become ``a.x + s <= b`` with one shared slack s
    that is never eliminated; the system is feasible iff some s > 0 survives.
    With only non-strict rows left, Chernikov's rule applies: after k
    eliminations a row built from more than k + 1 original rows is redundant
    and is dropped.  Variables go in the order creating the fewest rows.
    """
    S = nvars  # index of the slack
    rows: dict[tuple[tuple[Fraction, ...], Fraction], frozenset[int]] = {}

    def add(coeffs, rhs, hist):
        key = _scaled(coeffs, rhs)
        old = rows.get(key)
        if old is None or len(hist) < len(old):
            rows[key] = hist

    for k, (coeffs, rhs, strict) in enumerate(constraints):
        coeffs = tuple(Fraction(a) for a in coeffs) + (Fraction(int(bool(strict))),)
        add(coeffs, Fraction(rhs), frozenset([k]))
    # keep the slack bounded so the final one-variable test is a plain interval
    add(tuple(Fraction(0) for _ in range(nvars)) + (Fraction(1),), Fraction(1), frozenset([-1]))

    todo = set(range(nvars))
    done = 0
    while todo:
        def cost(v):
            pos = sum(1 for c, _ in rows if c[v] > 0)
            neg = sum(1 for c, _ in rows if c[v] < 0)
            return pos * neg - pos - neg
        var = min(sorted(todo), key=cost)
        todo.discard(var)
        done += 1
        pos, neg, rest = [], [], []
        for (c, b), h in rows.items():
            (pos if c[var] > 0 else neg if c[var] < 0 else rest).append((c, b, h))
        rows = {}
        for c, b, h in rest:
            add(c, b, h)
        for cp, bp, hp in pos:
            for cn, bn, hn in neg:
                hist = hp | hn
                if len(hist) > done + 1:
                    continue
                kp, kn = -cn[var], cp[var]  # both positive
                coeffs = tuple(kp * x + kn * y for x, y in zip(cp, cn))
                add(coeffs, kp * bp + kn * bn, hist)
        # rows with no variable left except possibly the slack
        for (c, b) in list(rows):
            if not any(c[:S]) and c[S] == 0:
                if b < 0:
                    return False
                del rows[(c, b)]
    # every row now reads c * s <= b; look for s > 0
    lo, hi = Fraction(0), None
    for (c, b) in rows:
        a = c[S]
        if a > 0:
            hi = b / a if hi is None else min(hi, b / a)
        elif a < 0:
            lo = max(lo, b / a)
        elif b < 0:
            return False
    if hi is None:
        return True
    return hi > 0 and lo <= hi


def _polytope_constraints(P: NewtonPolytope) -> list[Constraint]:
    return [(h.normal, h.offset, h.strict) for h in P.halfspaces]


def box_meets_polytope(P: NewtonPolytope, z: Point) -> bool:
    """Does z + [0, 1)^D intersect P?  Equivalently z in P + (-1, 0]^D."""
    D = P.dim
    cons = _polytope_constraints(P)
    for k in range(D):
        unit = tuple(Fraction(int(i == k)) for i in range(D))
        neg = tuple(-u for u in unit)
        cons.append((neg, Fraction(-z[k]), False))  # x_k >= z_k
        cons.append((unit, Fraction(z[k] + 1), True))  # x_k < z_k + 1
    return fm_feasible(cons, D)


def box_points(A: MultiPoly) -> list[Point]:
    """C ∩ N^{n+1} for C = NP(A) + (-1, 0]^{n+1}, in graded lexicographic order."""
    if A.is_zero():
        raise ZeroPolynomial("lattice points of the zero polynomial")
    return list(_cached_box_points(tuple(A.support())))


@lru_cache(maxsize=256)
def _cached_box_points(support: tuple[Point, ...]) -> tuple[Point, ...]:
    P = _cached_hull(support)
    hi = [max(v[k] for v in P.vertices) for k in range(P.dim)]
    lo = [min(v[k] for v in P.vertices) for k in range(P.dim)]
    pts = [
        z
        for z in product(*(range(a, b + 1) for a, b in zip(lo, hi)))
        if box_meets_polytope(P, z)
    ]
    return tuple(sorted(pts, key=term_order_key))


def count_box_points(A: MultiPoly) -> int:
    return len(box_points(A))


def bound_closed_form(dp: DegreeProfile, n: int) -> int:
    """(d+1) * min(prod(h_i+1) - prod(h_i), C(n+h, n) - C(h, n))."""
    box = math.prod(k + 1 for k in dp.hvec) - math.prod(dp.hvec)
    simplex = math.comb(n + dp.h, n) - math.comb(dp.h, n)
    return (dp.d + 1) * min(box, simplex)


def diagonal_class_feasible(P: NewtonPolytope, a: Point, b: int) -> bool:
    """Exists real lam and y in [b, b+1) with (a - lam*(1..1), y) in P."""
    n = P.dim - 1
    cons: list[Constraint] = []
    # unknowns (lam, y)
    for h in P.halfspaces:
        w_t, w_y = h.normal[:n], h.normal[n]
        cons.append(((-sum(w_t), w_y), h.offset - sum(w * x for w, x in zip(w_t, a)), h.strict))
    cons.append(((Fraction(0), Fraction(-1)), Fraction(-b), False))
    cons.append(((Fraction(0), Fraction(1)), Fraction(b + 1), True))
    return fm_feasible(cons, 2)


def diagonal_classes(A: MultiPoly) -> list[Point]:
    """Canonical representatives (min a_k = 0) of pi_G(C ∩ N^{n+1}) for the
    full diagonal group G = Z(1, ..., 1)."""
    if A.is_zero():
        raise ZeroPolynomial("diagonal classes of the zero polynomial")
    P = newton_polytope(A)
    dp = degree_profile(A)
    n = A.n
    out = []
    for a in product(*(range(h + 1) for h in dp.hvec)):
        if n and min(a) != 0:
            continue
        for b in range(dp.d + 1):
            if diagonal_class_feasible(P, a, b):
                out.append(tuple(a) + (b,))
    return sorted(out, key=term_order_key)


def count_diagonal_classes(A: MultiPoly) -> int:
    return len(diagonal_classes(A))


@dataclass(frozen=True)
class BoundReport:
    N_closed: int
    N_box: int
    N_diag: int
    N_effective: int
    task: str = field(default="diagonal", compare=False)

    def to_dict(self) -> dict:
        return {
            "N_closed": self.N_closed,
            "N_box": self.N_box,
            "N_diag": self.N_diag,
            "N_effective": self.N_effective,
        }


def bound_report(A: MultiPoly, task: str = "diagonal") -> BoundReport:
    """All three counts; ``N_effective`` is min(N_closed, N_diag) for
    ``task="diagonal"`` and N_box for ``task="automaton"``."""
    if A.is_zero():
        raise ZeroPolynomial("bounds for the zero polynomial")
    closed = bound_closed_form(degree_profile(A), A.n)
    nbox = count_box_points(A)
    ndiag = count_diagonal_classes(A)
    if task == "diagonal":
        eff = min(closed, ndiag)
    elif task == "automaton":
        eff = nbox
    else:
        raise ValueError(f"unknown task {task!r}")
    return BoundReport(closed, nbox, ndiag, eff, task)
