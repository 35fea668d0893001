"""Sparse polynomials over F_q in t_1..t_n and y.

A :class:`MultiPoly` maps exponent vectors ``(i_1, ..., i_n, j)`` to nonzero
field codes; the last coordinate is always the y-exponent.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import VariableCountMismatch, ZeroPolynomial
from .ff import Field, FieldElem

Exponent = tuple[int, ...]


def term_order_key(exp: Exponent) -> tuple:
    """Graded lexicographic key on (i_1, ..., i_n, j)."""
    return (sum(exp), exp)


class MultiPoly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to codes."""

    __slots__ = ("field", "n", "_terms", "_hash")

    def __init__(self, field: Field, n: int, terms: Mapping[Exponent, int] | None = None):
        self.field = field
        self.n = n
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(k) for k in exp)
            if len(exp) != n + 1 or min(exp) < 0:
                raise ValueError(f"bad exponent {exp} for n={n}")
            if c:
                clean[exp] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, field: Field, n: int, terms: dict) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.field, obj.n, obj._terms, obj._hash = field, n, terms, None
        return obj

    @classmethod
    def from_coeffs(cls, field: Field, n: int, terms: Mapping[Exponent, object]) -> "MultiPoly":
        """Build from integers (reduced mod p) or coefficient vectors."""
        acc: dict[Exponent, int] = {}
        for exp, c in terms.items():
            code = c.value if isinstance(c, FieldElem) else field.encode(c)
            exp = tuple(exp)
            acc[exp] = field.add(acc.get(exp, 0), code)
        return cls(field, n, acc)

    @classmethod
    def constant(cls, field: Field, n: int, c: int = 1) -> "MultiPoly":
        return cls(field, n, {(0,) * (n + 1): c})

    @classmethod
    def var(cls, field: Field, n: int, k: int) -> "MultiPoly":
        """The k-th variable: t_{k+1} for k < n, y for k == n."""
        exp = [0] * (n + 1)
        exp[k] = 1
        return cls(field, n, {tuple(exp): 1})

    # container protocol ---------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self) -> list[tuple[Exponent, int]]:
        """Terms in canonical (graded lexicographic) order."""
        return sorted(self._terms.items(), key=lambda kv: term_order_key(kv[0]))

    def coeff(self, exp: Iterable[int]) -> FieldElem:
        return FieldElem(self.field, self._terms.get(tuple(exp), 0))

    def support(self) -> list[Exponent]:
        return sorted(self._terms, key=term_order_key)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.field == other.field and self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, self.n, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        names = [f"t{k + 1}" for k in range(self.n)] + ["y"]
        parts = []
        for exp, c in self.items():
            mono = "*".join(
                name if k == 1 else f"{name}^{k}" for name, k in zip(names, exp) if k
            )
            coef = repr(FieldElem(self.field, c))
            if not mono:
                parts.append(coef)
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{coef}*{mono}")
        return " + ".join(parts)

    # arithmetic -------------------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if self.n != other.n:
            raise VariableCountMismatch(f"n={self.n} vs n={other.n}")
        if self.field != other.field:
            raise ValueError("polynomials over different fields")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        return poly_arith(self, other, "add")

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return poly_arith(self, other, "sub")

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, FieldElem)):
            code = other.value if isinstance(other, FieldElem) else self.field.from_int(other)
            return self.scale(code)
        return poly_arith(self, other, "mul")

    __rmul__ = __mul__

    def __neg__(self) -> "MultiPoly":
        F = self.field
        return MultiPoly._raw(F, self.n, {e: F.neg(c) for e, c in self._terms.items()})

    def __pow__(self, k: int) -> "MultiPoly":
        return poly_pow(self, k)

    def scale(self, code: int) -> "MultiPoly":
        F = self.field
        if code == 0:
            return MultiPoly._raw(F, self.n, {})
        return MultiPoly._raw(F, self.n, {e: F.mul(c, code) for e, c in self._terms.items()})

    def frobenius_twist(self) -> "MultiPoly":
        """Term-wise p-th power: exponents times p, coefficients to the p."""
        F = self.field
        p = F.p
        return MultiPoly._raw(
            F, self.n, {tuple(p * k for k in e): F.frob(c) for e, c in self._terms.items()}
        )

    def y_degree(self) -> int:
        return max((e[-1] for e in self._terms), default=-1)

    def y_coefficients(self) -> dict[int, dict[tuple[int, ...], int]]:
        """Group terms by y-exponent: j -> {t-exponent: code}."""
        out: dict[int, dict[tuple[int, ...], int]] = {}
        for e, c in self._terms.items():
            out.setdefault(e[-1], {})[e[:-1]] = c
        return out

    def eval_y(self, y0: int) -> "MultiPoly":
        """Substitute the constant y = y0; the result has no y."""
        F = self.field
        acc: dict[Exponent, int] = {}
        for e, c in self._terms.items():
            key = e[:-1] + (0,)
            acc[key] = F.add(acc.get(key, 0), F.mul(c, F.pow(y0, e[-1])))
        return MultiPoly(F, self.n, acc)

    def eval_at_origin(self, y0: int) -> int:
        """A(0, y0) as a field code."""
        F = self.field
        acc = 0
        for e, c in self._terms.items():
            if not any(e[:-1]):
                acc = F.add(acc, F.mul(c, F.pow(y0, e[-1])))
        return acc


def _mul_terms(F: Field, a: dict, b: dict) -> dict:
    acc: dict[Exponent, int] = {}
    if F.e == 1:
        p = F.p
        for ea, ca in a.items():
            for eb, cb in b.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                acc[key] = acc.get(key, 0) + ca * cb
        return {k: v % p for k, v in acc.items() if v % p}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            acc[key] = F.add(acc.get(key, 0), F.mul(ca, cb))
    return {k: v for k, v in acc.items() if v}


def poly_arith(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    """Exact ``add``, ``sub`` or ``mul`` with zero terms pruned."""
    a._check(b)
    F = a.field
    if op == "mul":
        return MultiPoly._raw(F, a.n, _mul_terms(F, a._terms, b._terms))
    if op not in ("add", "sub"):
        raise ValueError(f"unknown op {op!r}")
    combine = F.add if op == "add" else F.sub
    out = dict(a._terms)
    for e, c in b._terms.items():
        v = combine(out.get(e, 0), c)
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return MultiPoly._raw(F, a.n, out)


def poly_pow(a: MultiPoly, k: int) -> MultiPoly:
    """a^k by binary powering, with the Frobenius twist as the a^p fast path."""
    if k < 0:
        raise ValueError("negative exponent")
    p = a.field.p
    if k == 0:
        return MultiPoly.constant(a.field, a.n)
    if k % p == 0:
        return poly_pow(a, k // p).frobenius_twist()
    result = None
    base = a
    while k:
        if k & 1:
            result = base if result is None else result * base
        k >>= 1
        if k:
            base = base * base
    return result


def derivative_y(a: MultiPoly) -> MultiPoly:
    F = a.field
    out = {}
    for e, c in a._terms.items():
        j = e[-1]
        if j % F.p:
            out[e[:-1] + (j - 1,)] = F.mul(c, j % F.p)
    return MultiPoly._raw(F, a.n, out)


def is_separable_in_y(E: MultiPoly) -> bool:
    if E.is_zero():
        raise ZeroPolynomial("separability of the zero polynomial")
    return not derivative_y(E).is_zero()


def lambda_extract(U: MultiPoly, r: tuple[int, ...], s: int) -> MultiPoly:
    """Keep the terms with exponent ≡ (r, s) mod p, divide exponents by p and
    take p-th roots of the coefficients."""
    F = U.field
    p = F.p
    if len(r) != U.n or not all(0 <= x < p for x in r) or not 0 <= s < p:
        raise ValueError(f"digits {r}, {s} out of range for p={p}")
    target = tuple(r) + (s,)
    out = {}
    for e, c in U._terms.items():
        if all(x % p == t for x, t in zip(e, target)):
            out[tuple(x // p for x in e)] = F.inv_frob(c)
    return MultiPoly._raw(F, U.n, out)


@dataclass(frozen=True)
class DegreeProfile:
    d: int
    h: int
    hvec: tuple[int, ...]


def degree_profile(E: MultiPoly) -> DegreeProfile:
    if E.is_zero():
        raise ZeroPolynomial("degree profile of the zero polynomial")
    exps = list(E._terms)
    return DegreeProfile(
        d=max(e[-1] for e in exps),
        h=max(sum(e[:-1]) for e in exps),
        hvec=tuple(max(e[k] for e in exps) for k in range(E.n)),
    )
