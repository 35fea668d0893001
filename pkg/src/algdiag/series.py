"""Truncated multivariate power series over F_q.

Truncation is by total degree: a series with precision ``prec`` knows every
coefficient a(i) with i_1 + ... + i_n < prec exactly.  This is the filtration
the diagonal needs (coefficient k of the diagonal sits in total degree n*k),
and it composes cleanly with section operators.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

import numpy as np

from . import _dense
from .errors import BadAxisCount, MalformedInput, NotARoot, SingularBranch, VariableCountMismatch
from .ff import Field, FieldElem
from .poly import MultiPoly, derivative_y


class TruncatedSeries:
    """Immutable series known below total degree ``prec``."""

    __slots__ = ("field", "n", "prec", "_codes")

    def __init__(self, field: Field, n: int, prec: int, codes: np.ndarray | None = None):
        if n < 1:
            raise ValueError("series need at least one variable")
        if prec < 0:
            raise ValueError("negative precision")
        self.field = field
        self.n = n
        self.prec = prec
        if codes is None:
            codes = _dense.zeros(n, prec)
        elif codes.shape != (prec,) * n:
            codes = _dense.truncate(codes, n, prec)
        codes.flags.writeable = False
        self._codes = codes

    # construction -----------------------------------------------------------

    @classmethod
    def from_terms(
        cls, field: Field, n: int, prec: int, terms: Mapping[tuple[int, ...], object]
    ) -> "TruncatedSeries":
        """Terms given as ints (reduced mod p), coefficient vectors or FieldElems.

        Raises MalformedInput for a term of total degree >= prec.
        """
        codes = _dense.zeros(n, prec)
        for exp, c in terms.items():
            exp = tuple(int(k) for k in exp)
            if len(exp) != n or min(exp) < 0:
                raise MalformedInput(f"exponent {list(exp)} does not have {n} nonnegative entries")
            if sum(exp) >= prec:
                raise MalformedInput(f"term {list(exp)} has total degree >= prec {prec}")
            code = c.value if isinstance(c, FieldElem) else field.encode(c)
            codes[exp] = field.add(int(codes[exp]), code)
        return cls(field, n, prec, codes)

    @classmethod
    def from_tpoly(cls, poly: MultiPoly | Mapping, field: Field, n: int, prec: int) -> "TruncatedSeries":
        """A polynomial in t only (dict t-exponent -> code, or a y-free MultiPoly)."""
        if isinstance(poly, MultiPoly):
            items = [(e[:-1], c) for e, c in poly.terms.items()]
        else:
            items = list(poly.items())
        codes = _dense.zeros(n, prec)
        for exp, c in items:
            if sum(exp) < prec:
                codes[tuple(exp)] = field.add(int(codes[tuple(exp)]), c)
        return cls(field, n, prec, codes)

    @classmethod
    def constant(cls, field: Field, n: int, prec: int, code: int) -> "TruncatedSeries":
        codes = _dense.zeros(n, prec)
        if prec > 0:
            codes[(0,) * n] = code
        return cls(field, n, prec, codes)

    # access -------------------------------------------------------------------

    @property
    def codes(self) -> np.ndarray:
        return self._codes

    @property
    def terms(self) -> dict[tuple[int, ...], FieldElem]:
        idx = np.argwhere(self._codes)
        return {tuple(int(k) for k in i): FieldElem(self.field, int(self._codes[tuple(i)])) for i in idx}

    def code_terms(self) -> dict[tuple[int, ...], int]:
        idx = np.argwhere(self._codes)
        return {tuple(int(k) for k in i): int(self._codes[tuple(i)]) for i in idx}

    def coeff(self, exp: Iterable[int]) -> FieldElem:
        exp = tuple(exp)
        if len(exp) != self.n:
            raise VariableCountMismatch(f"index {exp} for a series in {self.n} variables")
        if sum(exp) >= self.prec:
            raise IndexError(f"coefficient {exp} beyond precision {self.prec}")
        return FieldElem(self.field, int(self._codes[exp]))

    def coefficients(self) -> list[int]:
        """Univariate only: the codes a(0), ..., a(prec-1)."""
        if self.n != 1:
            raise VariableCountMismatch("coefficients() is for univariate series")
        return [int(c) for c in self._codes]

    def is_zero(self) -> bool:
        return not self._codes.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.field == other.field
            and self.n == other.n
            and self.prec == other.prec
            and np.array_equal(self._codes, other._codes)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"TruncatedSeries(n={self.n}, prec={self.prec}, nterms={int(np.count_nonzero(self._codes))})"

    def agrees_with(self, other: "TruncatedSeries") -> bool:
        """Equality up to the smaller of the two precisions."""
        m = min(self.prec, other.prec)
        return self.truncate(m) == other.truncate(m)

    # arithmetic ---------------------------------------------------------------

    def _check(self, other: "TruncatedSeries") -> None:
        if self.n != other.n:
            raise VariableCountMismatch(f"n={self.n} vs n={other.n}")
        if self.field != other.field:
            raise ValueError("series over different fields")

    def truncate(self, prec: int) -> "TruncatedSeries":
        if prec > self.prec:
            raise ValueError(f"cannot raise precision from {self.prec} to {prec}")
        if prec == self.prec:
            return self
        return TruncatedSeries(self.field, self.n, prec, _dense.truncate(self._codes, self.n, prec))

    def _extend(self, prec: int) -> np.ndarray:
        # zero-padded copy; only used where the padding is about to be corrected
        return _dense.truncate(self._codes, self.n, prec)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        m = min(self.prec, other.prec)
        a, b = self.truncate(m)._codes, other.truncate(m)._codes
        return TruncatedSeries(self.field, self.n, m, self.field.np_add(a, b))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        m = min(self.prec, other.prec)
        a, b = self.truncate(m)._codes, other.truncate(m)._codes
        return TruncatedSeries(self.field, self.n, m, self.field.np_sub(a, b))

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.field, self.n, self.prec, self.field.np_neg(self._codes))

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, FieldElem)):
            code = other.value if isinstance(other, FieldElem) else self.field.from_int(other)
            return TruncatedSeries(
                self.field, self.n, self.prec, _dense.scalar_mul(self.field, self._codes, code)
            )
        self._check(other)
        m = min(self.prec, other.prec)
        return TruncatedSeries(
            self.field, self.n, m, _dense.mul(self.field, self._codes, other._codes, self.n, m)
        )

    __rmul__ = __mul__

    def constant_term(self) -> int:
        if self.prec == 0:
            raise IndexError("series of precision 0 has no known constant term")
        return int(self._codes[(0,) * self.n])

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse by Newton iteration g <- g (2 - a g)."""
        F = self.field
        c0 = self.constant_term()
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        g = TruncatedSeries.constant(F, self.n, 1, F.inv(c0))
        cur = 1
        while cur < self.prec:
            cur = min(2 * cur, self.prec)
            g = TruncatedSeries(F, self.n, cur, g._extend(cur))
            a = self.truncate(cur)
            two = TruncatedSeries.constant(F, self.n, cur, F.from_int(2))
            g = g * (two - a * g)
        return g

    def frobenius_twist(self, times: int = 1) -> "TruncatedSeries":
        """F^times(f): exponents multiplied by p^times, coefficients raised to p^times.

        The result is exact below total degree p^times * prec.
        """
        F = self.field
        step = F.p**times
        newprec = step * self.prec
        out = _dense.zeros(self.n, newprec)
        src = self._codes
        if F.e > 1:
            src = src.copy()
            for _ in range(times % F.e):
                src = F.np_map("frob", src)
        out[(slice(None, None, step),) * self.n] = src
        return TruncatedSeries(F, self.n, newprec, out)

    def shift(self, exp: tuple[int, ...]) -> "TruncatedSeries":
        """Multiplication by the monomial t^exp."""
        newprec = self.prec + sum(exp)
        out = _dense.zeros(self.n, newprec)
        region = tuple(slice(k, k + self.prec) for k in exp)
        out[region] = self._codes
        return TruncatedSeries(self.field, self.n, newprec, out)


@dataclass(frozen=True)
class Branch:
    """An annihilator E together with a simple root y0 of E(0, y)."""

    E: MultiPoly
    y0: FieldElem

    def __post_init__(self):
        if self.E.is_zero():
            raise NotARoot("the zero polynomial does not pin a branch")
        if self.y0.field != self.E.field:
            raise ValueError("y0 and E live over different fields")
        if self.E.eval_at_origin(self.y0.value) != 0:
            raise NotARoot(f"E(0, {self.y0!r}) != 0")
        if derivative_y(self.E).eval_at_origin(self.y0.value) == 0:
            raise SingularBranch(f"E_y(0, {self.y0!r}) = 0")

    @property
    def field(self) -> Field:
        return self.E.field

    @property
    def n(self) -> int:
        return self.E.n


def _t_coeff_series(A: MultiPoly, prec: int) -> dict[int, TruncatedSeries]:
    F = A.field
    return {
        j: TruncatedSeries.from_tpoly(coeffs, F, A.n, prec)
        for j, coeffs in A.y_coefficients().items()
    }


def eval_poly_at_series(A: MultiPoly, f: TruncatedSeries) -> TruncatedSeries:
    """A(t, f(t)) truncated to the precision of f (Horner in y)."""
    if A.n != f.n:
        raise VariableCountMismatch(f"polynomial in {A.n} t-variables, series in {f.n}")
    F = f.field
    coeffs = _t_coeff_series(A, f.prec)
    d = A.y_degree()
    if d < 0:
        return TruncatedSeries(F, f.n, f.prec)
    acc = coeffs[d]
    for j in range(d - 1, -1, -1):
        acc = acc * f
        if j in coeffs:
            acc = acc + coeffs[j]
    return acc


def hensel_solve(b: Branch, prec: int) -> TruncatedSeries:
    """The root f of E with f(0) = y0, by Newton iteration with doubling
    precision 1, 2, 4, ..., prec."""
    if prec < 1:
        raise ValueError("precision must be >= 1")
    E, F, n = b.E, b.field, b.n
    # Branch construction already validated the root; re-check cheaply
    if E.eval_at_origin(b.y0.value) != 0:
        raise NotARoot("E(0, y0) != 0")
    Ey = derivative_y(E)
    if Ey.eval_at_origin(b.y0.value) == 0:
        raise SingularBranch()
    f = TruncatedSeries.constant(F, n, 1, b.y0.value)
    cur = 1
    while cur < prec:
        cur = min(2 * cur, prec)
        f = TruncatedSeries(F, n, cur, f._extend(cur))
        num = eval_poly_at_series(E, f)
        den = eval_poly_at_series(Ey, f)
        f = f - num * den.inverse()
    return f


def section_series(f: TruncatedSeries, r: tuple[int, ...]) -> TruncatedSeries:
    """S_r(f): coefficient i is the p-th root of a(p*i + r).

    The result has precision ceil((prec - |r|) / p).
    """
    F = f.field
    p = F.p
    r = tuple(r)
    if len(r) != f.n or not all(0 <= x < p for x in r):
        raise ValueError(f"digit tuple {r} out of range for p={p}, n={f.n}")
    newprec = max(0, -(-(f.prec - sum(r)) // p))
    sub = f.codes[tuple(slice(x, None, p) for x in r)]
    out = _dense.truncate(sub, f.n, newprec)
    return TruncatedSeries(F, f.n, newprec, F.np_map("inv_frob", out))


def diagonal(f: TruncatedSeries) -> TruncatedSeries:
    """sum_k a(k, ..., k) t^k, with precision ceil(prec / n)."""
    newprec = -(-f.prec // f.n)
    k = np.arange(newprec)
    codes = f.codes[(k,) * f.n].astype(np.int64) if newprec else _dense.zeros(1, 0)
    return TruncatedSeries(f.field, 1, newprec, np.ascontiguousarray(codes))


def partial_diagonal(f: TruncatedSeries, m: int) -> TruncatedSeries:
    """Keep t_1..t_m free and collapse the last n - m variables onto one
    variable x: the coefficient of t_1^i_1...t_m^i_m x^k is a(i_1..i_m, k..k).

    The result has m + 1 variables and precision ceil(prec / (n - m)).
    """
    n = f.n
    if not 0 <= m < n:
        raise BadAxisCount(f"need 0 <= m < n = {n}, got m = {m}")
    newprec = -(-f.prec // (n - m))
    out = _dense.zeros(m + 1, newprec)
    for idx in product(range(newprec), repeat=m + 1):
        if sum(idx) >= newprec:
            continue
        full = idx[:m] + (idx[m],) * (n - m)
        if sum(full) < f.prec:
            out[idx] = f.codes[full]
    return TruncatedSeries(f.field, m + 1, newprec, out)


def import_series(data: Mapping, field: Field) -> TruncatedSeries:
    """Series from a decoded ``{"n", "prec", "terms"}`` document.

    Integer coefficients are reduced mod p.  See :mod:`algdiag.io` for the
    file-level reader with field header and strict schema checks.
    """
    try:
        n, prec, terms = int(data["n"]), int(data["prec"]), data["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"series document needs n, prec, terms: {exc}") from exc
    if n < 1 or prec < 0:
        raise MalformedInput(f"bad series header n={n}, prec={prec}")
    acc: dict[tuple[int, ...], object] = {}
    for k, t in enumerate(terms):
        try:
            exp, c = tuple(t["e"]), t["c"]
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"terms[{k}] needs keys e and c") from exc
        if exp in acc:
            raise MalformedInput(f"terms[{k}] repeats exponent {list(exp)}")
        acc[exp] = c
    return TruncatedSeries.from_terms(field, n, prec, acc)


def reconstruct(sections: Mapping[tuple[int, ...], TruncatedSeries]) -> TruncatedSeries:
    """sum_r t^r F(S_r(f)) from the p^n sections of f."""
    total = None
    for r, s in sections.items():
        piece = s.frobenius_twist().shift(r)
        total = piece if total is None else total + piece
    return total


def digit_tuples(p: int, n: int) -> list[tuple[int, ...]]:
    return list(product(range(p), repeat=n))


def univariate_from_codes(field: Field, codes: list[int]) -> TruncatedSeries:
    return TruncatedSeries(field, 1, len(codes), np.array(codes, dtype=np.int64).reshape(len(codes)))

