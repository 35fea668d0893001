"""Linearized polynomials annihilating diagonals.

A linearized polynomial ``c_0 X + c_1 X^p + ... + c_N X^(p^N)`` with
coefficients in F_q[t] is searched for by exact linear algebra over F_q on the
truncated series, then re-verified independently.  A certificate means
"annihilates up to ``verified_order``": exact identities are not certified.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import _dense
from .cartier import SectionWalker
from .errors import BoundViolation, InsufficientPrecision, MalformedInput, NotFound, ZeroSeries
from .ff import Field
from .polytope import BoundReport, bound_report
from .series import Branch, TruncatedSeries, diagonal, hensel_solve, univariate_from_codes

DEFAULT_DEGREES = (4, 8, 16, 32, 64, 128, 256)


def _trim(c: Sequence[int]) -> tuple[int, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class LinearizedPoly:
    field: Field
    coeffs: tuple[tuple[int, ...], ...]  # c_i as low-to-high codes in F_q[t]

    def __post_init__(self):
        coeffs = tuple(_trim(c) for c in self.coeffs)
        while coeffs and not coeffs[-1]:
            coeffs = coeffs[:-1]
        if not coeffs:
            raise ValueError("the zero linearized polynomial")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def N(self) -> int:
        """The p-degree."""
        return len(self.coeffs) - 1

    @property
    def max_degree(self) -> int:
        return max(len(c) - 1 for c in self.coeffs)


@dataclass(frozen=True)
class AnnihilatorCertificate:
    L: LinearizedPoly
    verified_order: int
    N_bound_used: int
    search_degree: int
    bound: BoundReport | None = field(default=None, compare=False)


def twist_codes(g: TruncatedSeries, i: int) -> np.ndarray:
    """Codes of g^(p^i) below g.prec (exponents times p^i, coefficients to p^i)."""
    F = g.field
    step = F.p**i
    out = np.zeros(g.prec, dtype=np.int64)
    src = g.codes[: -(-g.prec // step)]
    if F.e > 1:
        for _ in range(i % F.e):
            src = F.np_map("frob", src)
    out[::step] = src
    return out


def apply_linearized(L: LinearizedPoly, g: TruncatedSeries) -> TruncatedSeries:
    """sum_i c_i(t) g^(p^i), exact below g.prec."""
    if g.n != 1:
        raise ValueError("linearized polynomials act on univariate series")
    F = g.field
    acc = np.zeros(g.prec, dtype=np.int64)
    for i, c in enumerate(L.coeffs):
        if not c:
            continue
        tw = twist_codes(g, i)
        prod = _dense.mul(F, tw, np.array(c, dtype=np.int64), 1, g.prec)
        acc = F.np_add(acc, prod)
    return TruncatedSeries(F, 1, g.prec, acc)


def verify_annihilation(L: LinearizedPoly, g: TruncatedSeries, order: int) -> bool:
    """True iff L(g) has no nonzero coefficient below ``order``."""
    if order > g.prec:
        raise InsufficientPrecision(f"order {order} exceeds series precision {g.prec}")
    if order <= 0:
        return True
    return apply_linearized(L, g.truncate(order)).is_zero()


# -- linear algebra over F_q ---------------------------------------------------


def kernel_vector(F: Field, M: np.ndarray) -> np.ndarray | None:
    """A nonzero kernel vector of M over F_q, or None.

    Gaussian elimination to reduced row echelon form; the returned vector is
    the one attached to the first free column, normalised to 1 there, so its
    last nonzero entry sits as early as possible.
    """
    M = M.copy()
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = F.inv(int(M[r, c]))
        M[r] = F.np_mul(M[r], np.int64(inv))
        col = M[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            M[hit] = F.np_sub(M[hit], F.np_mul(col[hit, None], M[r][None, :]))
        pivots.append(c)
        r += 1
    free = next((c for c in range(cols) if c not in set(pivots)), None)
    if free is None:
        return None
    v = np.zeros(cols, dtype=np.int64)
    v[free] = 1
    for row, pc in enumerate(pivots):
        if pc < free:
            v[pc] = F.neg(int(M[row, free]))
    return v


def equation_count(N: int, D: int) -> int:
    return 2 * (N + 1) * (D + 1) + 32


def _system(g: TruncatedSeries, N: int, D: int, T: int) -> np.ndarray:
    # column (i, j) holds [t^m] t^j g^(p^i) = g^(p^i)[m - j]
    cols = []
    for i in range(N + 1):
        tw = twist_codes(g, i)[:T]
        for j in range(D + 1):
            col = np.zeros(T, dtype=np.int64)
            col[j:] = tw[: T - j]
            cols.append(col)
    return np.stack(cols, axis=1)


def find_linearized_annihilator(
    g: TruncatedSeries, N_max: int, deg_schedule: Sequence[int] = DEFAULT_DEGREES
) -> AnnihilatorCertificate:
    """Search p-degrees N = 0..N_max and coefficient degrees D along the
    schedule; the first (N, D) with a kernel vector that survives independent
    re-verification wins."""
    if g.n != 1:
        raise ValueError("annihilator search needs a univariate series")
    if g.is_zero():
        raise ZeroSeries("every linearized polynomial annihilates the zero series")
    F = g.field
    schedule = sorted(set(int(D) for D in deg_schedule))
    if not schedule:
        raise ValueError("empty degree schedule")
    if equation_count(0, schedule[0]) > g.prec:
        raise InsufficientPrecision(
            f"precision {g.prec} below the {equation_count(0, schedule[0])} equations of the smallest budget"
        )
    for N in range(N_max + 1):
        for D in schedule:
            T = equation_count(N, D)
            if T > g.prec:
                break
            v = kernel_vector(F, _system(g, N, D, T))
            if v is None:
                continue
            coeffs = [tuple(int(x) for x in v[i * (D + 1) : (i + 1) * (D + 1)]) for i in range(N + 1)]
            L = LinearizedPoly(F, tuple(coeffs))
            order = min(g.prec, 2 * T)
            if verify_annihilation(L, g, order):
                return AnnihilatorCertificate(L, order, N_max, D)
    raise NotFound(f"no annihilator with p-degree <= {N_max} within degrees {schedule}")


def diagonal_pipeline(
    b: Branch,
    univariate_order: int,
    deg_schedule: Sequence[int] = DEFAULT_DEGREES,
    extend: int = 2,
    nmax: int | None = None,
) -> tuple[AnnihilatorCertificate, BoundReport]:
    """Diagonal of the branch, its bounds, an annihilator of p-degree at most
    N_effective (or ``nmax`` when given), and verification out to
    ``extend * univariate_order``.

    The extended coefficients come from the section-operator coefficient
    oracle, which is cross-checked against the Hensel diagonal on the common
    range before it is trusted.
    """
    f = hensel_solve(b, b.n * univariate_order)
    g = diagonal(f).truncate(univariate_order)
    report = bound_report(b.E, task="diagonal")
    N_max = report.N_effective if nmax is None else nmax
    cert = find_linearized_annihilator(g, N_max, deg_schedule)
    if cert.L.N > report.N_effective:
        raise BoundViolation(f"p-degree {cert.L.N} exceeds N_effective {report.N_effective}")
    order = cert.verified_order
    if extend > 1:
        long = extended_diagonal(b, extend * univariate_order)
        if not long.agrees_with(g):
            raise AssertionError("section-operator diagonal disagrees with the Hensel diagonal")
        if verify_annihilation(cert.L, long, long.prec):
            order = long.prec
    cert = AnnihilatorCertificate(cert.L, order, N_max, cert.search_degree, report)
    return cert, report


def extended_diagonal(b: Branch, order: int) -> TruncatedSeries:
    """Diagonal coefficients below ``order`` via the section-operator oracle."""
    return univariate_from_codes(b.field, SectionWalker(b).diagonal_coefficients(order))


# -- serialisation -------------------------------------------------------------------


def certificate_to_dict(cert: AnnihilatorCertificate) -> dict[str, Any]:
    from .io import field_to_dict

    F = cert.L.field
    doc = {
        "field": field_to_dict(F),
        "N": cert.L.N,
        "coeffs": [[F.digits(c) for c in ci] for ci in cert.L.coeffs],
        "verified_order": cert.verified_order,
        "N_bound_used": cert.N_bound_used,
        "search_degree": cert.search_degree,
    }
    if cert.bound is not None:
        doc["bound"] = cert.bound.to_dict()
    return doc


def certificate_from_dict(doc: Any) -> AnnihilatorCertificate:
    from .io import _coeff, _int, check_keys, field_from_dict

    allowed = {"field", "N", "coeffs", "verified_order", "N_bound_used", "search_degree", "bound"}
    check_keys(doc, allowed, "certificate", required=allowed - {"bound"})
    F = field_from_dict(doc["field"])
    coeffs = doc["coeffs"]
    if not isinstance(coeffs, list) or not all(isinstance(c, list) for c in coeffs):
        raise MalformedInput("certificate.coeffs: expected a list of coefficient lists")
    try:
        L = LinearizedPoly(
            F, tuple(tuple(_coeff(F, x, "certificate.coeffs") for x in c) for c in coeffs)
        )
    except ValueError as exc:
        raise MalformedInput(f"certificate.coeffs: {exc}") from exc
    if L.N != _int(doc["N"], "certificate.N"):
        raise MalformedInput("certificate.N disagrees with its coefficients")
    bound = None
    if "bound" in doc:
        bd = doc["bound"]
        check_keys(bd, {"N_closed", "N_box", "N_diag", "N_effective"}, "certificate.bound")
        bound = BoundReport(**{k: _int(v, f"bound.{k}") for k, v in bd.items()})
    return AnnihilatorCertificate(
        L,
        _int(doc["verified_order"], "certificate.verified_order"),
        _int(doc["N_bound_used"], "certificate.N_bound_used"),
        _int(doc["search_degree"], "certificate.search_degree"),
        bound,
    )
