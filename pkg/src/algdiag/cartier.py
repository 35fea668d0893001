"""Finite-dimensional section-operator dynamics.

A :class:`Representation` ``(E, P)`` denotes the series ``P(t, f) / E_y(t, f)``
where f is the branch of E.  With ``U = P * E^(p-1)``, the section operator
S_r acts by ``P -> Lambda_{r, p-1}(U)`` (keep the terms of U whose exponent is
congruent to ``(r, p-1)`` mod p, divide exponents by p, take p-th roots of the
coefficients).  The support of P never leaves the lattice points of
``NP(E) + (-1, 0]^{n+1}``, which makes the state space finite.

Digits are consumed least-significant first: S_r extracts a(p*i + r).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import MalformedInput, SingularBranch, SupportEscape, VariableCountMismatch
from .ff import FieldElem
from .poly import MultiPoly, derivative_y, lambda_extract, poly_pow
from .polytope import box_points
from .series import Branch, TruncatedSeries, eval_poly_at_series, hensel_solve


@dataclass(frozen=True)
class Representation:
    E: MultiPoly
    P: MultiPoly
    branch: Branch

    def __post_init__(self):
        basis = lattice_basis(self.E)
        if not set(self.P.terms) <= basis.index.keys():
            raise SupportEscape(
                f"support {sorted(set(self.P.terms) - basis.index.keys())} outside C' lattice points"
            )

    def vector(self) -> tuple[int, ...]:
        """Coefficient codes of P over the lattice basis of C'."""
        return lattice_basis(self.E).vector(self.P)


class LatticeBasis:
    """The points of C' ∩ N^{n+1} in graded lexicographic order."""

    def __init__(self, E: MultiPoly):
        self.points = box_points(E)
        self.index = {pt: k for k, pt in enumerate(self.points)}

    def __len__(self) -> int:
        return len(self.points)

    def vector(self, P: MultiPoly) -> tuple[int, ...]:
        v = [0] * len(self.points)
        for e, c in P.terms.items():
            v[self.index[e]] = c
        return tuple(v)

    def poly(self, E: MultiPoly, vector: Sequence[int]) -> MultiPoly:
        return MultiPoly(E.field, E.n, {pt: c for pt, c in zip(self.points, vector) if c})


@lru_cache(maxsize=128)
def lattice_basis(E: MultiPoly) -> LatticeBasis:
    return LatticeBasis(E)


class _Kernel:
    """Per-annihilator data for the fast section step: E^(p-1) bucketed by
    exponent residue mod p."""

    def __init__(self, E: MultiPoly):
        F = E.field
        p = F.p
        self.E = E
        self.Epm1 = poly_pow(E, p - 1)
        self.buckets: dict[tuple[int, ...], list[tuple[tuple[int, ...], int]]] = {}
        for e, c in self.Epm1.terms.items():
            self.buckets.setdefault(tuple(x % p for x in e), []).append((e, c))
        self.Ey = derivative_y(E)

    def step(self, P: MultiPoly, r: tuple[int, ...]) -> MultiPoly:
        """Lambda_{r, p-1}(P * E^(p-1)), computing only the surviving products."""
        F = P.field
        p = F.p
        target = tuple(r) + (p - 1,)
        acc: dict[tuple[int, ...], int] = {}
        prime = F.e == 1
        for ep, cp in P.terms.items():
            need = tuple((t - x) % p for t, x in zip(target, ep))
            for ee, ce in self.buckets.get(need, ()):
                key = tuple((x + y) // p for x, y in zip(ep, ee))
                if prime:
                    acc[key] = acc.get(key, 0) + cp * ce
                else:
                    acc[key] = F.add(acc.get(key, 0), F.mul(cp, ce))
        if prime:
            return MultiPoly(F, P.n, {k: v % p for k, v in acc.items()})
        return MultiPoly(F, P.n, {k: F.inv_frob(v) for k, v in acc.items()})


@lru_cache(maxsize=128)
def _kernel(E: MultiPoly) -> _Kernel:
    return _Kernel(E)


def embed_f(b: Branch) -> Representation:
    """f itself, as (y * E_y)(t, f) / E_y(t, f)."""
    Ey = derivative_y(b.E)
    if Ey.eval_at_origin(b.y0.value) == 0:
        raise SingularBranch()
    return Representation(b.E, MultiPoly.var(b.field, b.n, b.n) * Ey, b)


def constant_rep(b: Branch, c: int = 1) -> Representation:
    """The constant series c, as (c * E_y)(t, f) / E_y(t, f).

    Only available when the support of E_y lies in C'.  That fails for many
    annihilators (for (1 - t1 - t2) y - 1 the constants are not in the
    span at all) and then SupportEscape is raised.
    """
    return Representation(b.E, derivative_y(b.E).scale(c), b)


def apply_section_rep(rep: Representation, r: Sequence[int]) -> Representation:
    """Representation of S_r applied to the series denoted by ``rep``."""
    r = tuple(r)
    p = rep.E.field.p
    if len(r) != rep.E.n or not all(0 <= x < p for x in r):
        raise ValueError(f"digit tuple {r} out of range for p={p}")
    P2 = _kernel(rep.E).step(rep.P, r)
    return Representation(rep.E, P2, rep.branch)


def apply_section_rep_reference(rep: Representation, r: Sequence[int]) -> MultiPoly:
    """The same step written literally: Lambda(P * E^(p-1), r, p-1)."""
    p = rep.E.field.p
    return lambda_extract(rep.P * poly_pow(rep.E, p - 1), tuple(r), p - 1)


def rep_constant_term(rep: Representation) -> FieldElem:
    """P(0, y0) / E_y(0, y0)."""
    F = rep.E.field
    y0 = rep.branch.y0.value
    den = derivative_y(rep.E).eval_at_origin(y0)
    if den == 0:
        raise SingularBranch()
    return FieldElem(F, F.div(rep.P.eval_at_origin(y0), den))


def series_of(rep: Representation, prec: int, f: TruncatedSeries | None = None) -> TruncatedSeries:
    """Expand P(t, f) / E_y(t, f) to total degree < prec."""
    if f is None or f.prec < prec:
        f = hensel_solve(rep.branch, prec)
    f = f.truncate(prec)
    num = eval_poly_at_series(rep.P, f)
    den = eval_poly_at_series(derivative_y(rep.E), f)
    return num * den.inverse()


def t_expansion(A: MultiPoly, f: TruncatedSeries, order: int) -> list[TruncatedSeries]:
    """Series coefficients of T^0..T^(order-1) in A(t, f + T), by Horner's rule
    in (series)[T] / (T^order)."""
    F, n, prec = f.field, f.n, f.prec
    zero = TruncatedSeries(F, n, prec)
    coeffs = {j: TruncatedSeries.from_tpoly(c, F, n, prec) for j, c in A.y_coefficients().items()}
    acc = [zero] * order
    for j in range(A.y_degree(), -1, -1):
        # acc <- acc * (f + T) + A_j
        acc = [acc[k] * f + (acc[k - 1] if k else zero) for k in range(order)]
        if j in coeffs:
            acc[0] = acc[0] + coeffs[j]
    return acc


def residue_coefficient(rep: Representation, prec: int, f: TruncatedSeries | None = None) -> TruncatedSeries:
    """Degree-0 coefficient in T of P(t, f+T) * (E(t, f+T) / T)^(-1).

    Division by T is legitimate because E(t, f) vanishes; this is checked to
    ``prec`` and a nonzero remainder raises SupportEscape (E does not
    annihilate the branch).  The result should equal P(t, f) / E_y(t, f).
    """
    if f is None or f.prec < prec:
        f = hensel_solve(rep.branch, prec)
    f = f.truncate(prec)
    Eexp = t_expansion(rep.E, f, 2)
    if not Eexp[0].is_zero():
        raise SupportEscape("E(t, f) does not vanish to the requested precision")
    c0 = Eexp[1].constant_term()
    if c0 == 0:
        raise SingularBranch()
    return t_expansion(rep.P, f, 1)[0] * Eexp[1].inverse()


def base_p_digits(index: Sequence[int], p: int) -> list[tuple[int, ...]]:
    """LSD-first digit tuples, coordinates zero-padded to a common length."""
    index = [int(k) for k in index]
    if any(k < 0 for k in index):
        raise MalformedInput("indices must be nonnegative")
    out = []
    while any(index):
        out.append(tuple(k % p for k in index))
        index = [k // p for k in index]
    return out


class SectionWalker:
    """Coefficient oracle for one branch with memoised section steps."""

    def __init__(self, b: Branch):
        self.branch = b
        self.start = embed_f(b)
        self._kernel = _kernel(b.E)
        self._steps: dict[tuple[MultiPoly, tuple[int, ...]], MultiPoly] = {}
        self._basis = set(lattice_basis(b.E).points)

    def step(self, P: MultiPoly, r: tuple[int, ...]) -> MultiPoly:
        key = (P, r)
        out = self._steps.get(key)
        if out is None:
            out = self._kernel.step(P, r)
            if not set(out.terms) <= self._basis:
                raise SupportEscape(f"section step {r} left the lattice points of C'")
            self._steps[key] = out
        return out

    def coefficient(self, index: Sequence[int]) -> FieldElem:
        F = self.branch.field
        digits = base_p_digits(index, F.p)
        P = self.start.P
        for r in digits:
            P = self.step(P, r)
        y0 = self.branch.y0.value
        val = F.div(P.eval_at_origin(y0), self._kernel.Ey.eval_at_origin(y0))
        # each section took a p-th root of the coefficient; undo it
        return FieldElem(F, F.frob_power(val, len(digits)))

    def diagonal_coefficients(self, count: int) -> list[int]:
        """Codes of a(k, ..., k) for k < count."""
        n = self.branch.n
        return [self.coefficient((k,) * n).value for k in range(count)]


def coeff_query(b: Branch, index: Iterable[int]) -> FieldElem:
    """a(index) for indices of arbitrary size, via one section step per base-p
    digit position (least significant first) and a constant-term evaluation.

    Over F_q with q = p^e the result is raised back by Frobenius^(#digits),
    since every section step applies an inverse Frobenius to the coefficients.
    """
    index = tuple(index)
    if len(index) != b.n:
        raise VariableCountMismatch(f"index {list(index)} needs {b.n} coordinates")
    return _walker(b).coefficient(index)


@lru_cache(maxsize=32)
def _walker(b: Branch) -> SectionWalker:
    # repeated queries on one branch share the memoised section steps
    return SectionWalker(b)
