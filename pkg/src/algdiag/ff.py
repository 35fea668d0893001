"""Finite fields F_q, q = p^e, with Frobenius and its inverse.

Elements are encoded as plain integers in ``range(q)``: the element
``c_0 + c_1 x + ... + c_{e-1} x^{e-1}`` (power basis of the modulus) is stored
as ``c_0 + c_1 p + ... + c_{e-1} p^{e-1}``.  All hot loops (polynomials,
series, linear algebra) work on these codes; :class:`FieldElem` is the thin
public wrapper.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import MalformedInput, NonPrimeCharacteristic, ReducibleModulus


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def _poly_rem(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a by the monic m over F_p (low-to-high coefficient lists)."""
    a = [c % p for c in a]
    dm = len(m) - 1
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k]
        if c:
            for i in range(dm + 1):
                a[k - dm + i] = (a[k - dm + i] - c * m[i]) % p
    return a[:dm] if dm > 0 else []


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    # trial division by every monic polynomial of degree 1..e//2
    e = len(modulus) - 1
    for deg in range(1, e // 2 + 1):
        for low in product(range(p), repeat=deg):
            divisor = list(low) + [1]
            if not any(_poly_rem(list(modulus), divisor, p)):
                return False
    return True


class Field:
    """The finite field F_{p^e} in the power basis of ``modulus``.

    ``modulus`` is the low-to-high coefficient list of a monic irreducible
    polynomial of degree ``e`` over F_p (``e + 1`` entries, last one 1).
    """

    def __init__(self, p: int, e: int = 1, modulus: Sequence[int] | None = None):
        if not isinstance(p, int) or p < 2 or not is_prime(p):
            raise NonPrimeCharacteristic(f"characteristic {p} is not prime")
        if not isinstance(e, int) or e < 1:
            raise MalformedInput(f"extension degree must be >= 1, got {e}")
        if e == 1:
            if modulus is not None and len(modulus) not in (0, 2):
                raise MalformedInput("modulus of a prime field must be omitted or linear")
            modulus = None
        else:
            if modulus is None:
                raise MalformedInput(f"extension degree {e} requires a modulus")
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise MalformedInput(
                    f"modulus must list e+1 = {e + 1} low-to-high coefficients of a monic polynomial"
                )
            if not _is_irreducible(modulus, p):
                raise ReducibleModulus(f"modulus {list(modulus)} factors over F_{p}")
        self.p = p
        self.e = e
        self.modulus = modulus
        self.q = p**e

    # identity -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Field)
            and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.modulus))

    def __repr__(self) -> str:
        if self.e == 1:
            return f"Field(F_{self.p})"
        return f"Field(F_{self.q}, modulus={list(self.modulus)})"

    @property
    def is_prime(self) -> bool:
        return self.e == 1

    # encoding -----------------------------------------------------------

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            a, c = divmod(a, self.p)
            out.append(c)
        return out

    def encode(self, coeffs: Iterable[int] | int) -> int:
        """Integer code of a coefficient vector; entries are reduced mod p.

        A bare integer is read as an element of the prime subfield.
        """
        if isinstance(coeffs, (int, np.integer)):
            return int(coeffs) % self.p
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) != self.e:
            raise MalformedInput(f"field element needs {self.e} coefficients, got {len(coeffs)}")
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + c % self.p
        return code

    def __call__(self, coeffs) -> "FieldElem":
        return FieldElem(self, self.encode(coeffs))

    def elem(self, code: int) -> "FieldElem":
        return FieldElem(self, code)

    def elements(self) -> list["FieldElem"]:
        return [FieldElem(self, a) for a in range(self.q)]

    # arithmetic on codes ----------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return self._add_table[a][b] if self._add_table else self._digit_add(a, b, 1)

    def sub(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        return self._neg_table[a]

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.e == 1:
            return pow(a, -1, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if self.e == 1:
            return pow(a, k, self.p)
        if k == 0:
            return 1
        if a == 0:
            return 0
        return self._exp[(self._log[a] * k) % (self.q - 1)]

    def frob(self, a: int) -> int:
        if self.e == 1:
            return a
        return self.pow(a, self.p)

    def inv_frob(self, a: int) -> int:
        # the unique p-th root: x^(p^(e-1))
        if self.e == 1:
            return a
        return self.pow(a, self.p ** (self.e - 1))

    def frob_power(self, a: int, k: int) -> int:
        """Apply the Frobenius ``k`` times (``k`` may be negative)."""
        if self.e == 1:
            return a
        return self.pow(a, self.p ** (k % self.e))

    def from_int(self, n: int) -> int:
        return n % self.p

    # vectorised helpers -------------------------------------------------

    def np_digits(self, codes: np.ndarray) -> np.ndarray:
        """Codes of shape S to digit arrays of shape S + (e,)."""
        if self.e == 1:
            return codes[..., None]
        powers = self.p ** np.arange(self.e, dtype=np.int64)
        return (codes[..., None] // powers) % self.p

    def np_encode(self, digits: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return digits[..., 0] % self.p
        powers = self.p ** np.arange(self.e, dtype=np.int64)
        return (digits % self.p) @ powers

    def np_add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (a + b) % self.p
        return self.np_encode(self.np_digits(a) + self.np_digits(b))

    def np_neg(self, a: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return -a % self.p
        return self.np_encode(-self.np_digits(a))

    def np_sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.np_add(a, self.np_neg(b))

    def np_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (a * b) % self.p
        exp, log = self._np_tables
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def np_map(self, table: str, codes: np.ndarray) -> np.ndarray:
        """Apply ``frob`` / ``inv_frob`` element-wise."""
        if self.e == 1:
            return codes
        lut = self._np_frob if table == "frob" else self._np_inv_frob
        return lut[codes]

    # tables ---------------------------------------------------------------

    def _digit_add(self, a: int, b: int, sign: int) -> int:
        da, db = self.digits(a), self.digits(b)
        return self.encode([x + sign * y for x, y in zip(da, db)])

    def _mul_digits(self, a: list[int], b: list[int]) -> list[int]:
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return _poly_rem(prod, list(self.modulus), self.p)

    @cached_property
    def _exp_log(self) -> tuple[list[int], list[int]]:
        q = self.q
        for g in range(2, q):
            exp = [1]
            gd = self.digits(g)
            cur = [1] + [0] * (self.e - 1)
            for _ in range(q - 2):
                cur = self._mul_digits(cur, gd)
                code = self.encode(cur)
                if code == 1:
                    break
                exp.append(code)
            if len(exp) == q - 1:
                log = [0] * q
                for k, v in enumerate(exp):
                    log[v] = k
                return exp, log
        raise AssertionError("no primitive element found")  # pragma: no cover

    @property
    def _exp(self) -> list[int]:
        return self._exp_log[0]

    @property
    def _log(self) -> list[int]:
        return self._exp_log[1]

    @cached_property
    def _add_table(self):
        if self.q > 256:
            return None
        return [[self._digit_add(a, b, 1) for b in range(self.q)] for a in range(self.q)]

    @cached_property
    def _neg_table(self) -> list[int]:
        return [self.encode([-c for c in self.digits(a)]) for a in range(self.q)]

    @cached_property
    def _np_tables(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array(self._exp, dtype=np.int64), np.array(self._log, dtype=np.int64)

    @cached_property
    def _np_frob(self) -> np.ndarray:
        return np.array([self.frob(a) for a in range(self.q)], dtype=np.int64)

    @cached_property
    def _np_inv_frob(self) -> np.ndarray:
        return np.array([self.inv_frob(a) for a in range(self.q)], dtype=np.int64)


@dataclass(frozen=True)
class FieldElem:
    """An element of a :class:`Field`, stored by its integer code."""

    field: Field
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.field.digits(self.value))

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        return FieldElem(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return FieldElem(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return FieldElem(self.field, self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        return FieldElem(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        return FieldElem(self.field, self.field.div(self.value, b))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __pow__(self, k: int):
        if k < 0:
            return FieldElem(self.field, self.field.pow(self.field.inv(self.value), -k))
        return FieldElem(self.field, self.field.pow(self.value, k))

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == self.field.from_int(int(other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __repr__(self) -> str:
        if self.field.e == 1:
            return str(self.value)
        return str(list(self.coeffs))


def make_field(p: int, e: int = 1, modulus: Sequence[int] | None = None) -> Field:
    return Field(p, e, modulus)


def frobenius(x: FieldElem, F: Field | None = None) -> FieldElem:
    """x -> x^p."""
    F = F or x.field
    return FieldElem(F, F.frob(x.value))


def inv_frobenius(x: FieldElem, F: Field | None = None) -> FieldElem:
    """The unique p-th root of x, computed as x^(p^(e-1))."""
    F = F or x.field
    return FieldElem(F, F.inv_frob(x.value))
