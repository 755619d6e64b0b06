"""Exact arithmetic in multiquadratic fields Q(sqrt(p1), sqrt(p2), ...).

A :class:`Surd` is a finite rational combination ``sum c_d * sqrt(d)`` over
distinct squarefree radicands ``d`` (``d == 1`` is the rational part).  The
square roots of distinct squarefree integers are linearly independent over
Q, so this representation is canonical: equality of two surds is equality of
their coefficient maps.
"""

from __future__ import annotations

import math
import re
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import ConfigError

Rational = Union[int, Fraction]


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(a, d)`` with ``n == a*a*d`` and ``d`` squarefree."""
    if n < 1:
        raise ValueError("radicand must be positive")
    a, d = 1, 1
    rest = n
    p = 2
    while p * p <= rest:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        a *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1
    d *= rest
    return a, d


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


class Surd:
    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, Rational] | Rational = 0):
        if isinstance(coeffs, (int, Fraction)):
            coeffs = {1: coeffs}
        c: dict[int, Fraction] = {}
        for d, v in coeffs.items():
            v = Fraction(v)
            if v:
                if not is_squarefree(d):
                    raise ValueError(f"radicand {d} is not squarefree")
                c[d] = c.get(d, Fraction(0)) + v
        self._c = {d: v for d, v in sorted(c.items()) if v}
        self._hash = None

    @classmethod
    def sqrt(cls, n: int, coeff: Rational = 1) -> "Surd":
        a, d = squarefree_decompose(n)
        return cls({d: Fraction(coeff) * a})

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    @property
    def radicands(self) -> tuple[int, ...]:
        return tuple(self._c)

    def is_rational(self) -> bool:
        return all(d == 1 for d in self._c)

    def rational_part(self) -> Fraction:
        return self._c.get(1, Fraction(0))

    def coefficient(self, d: int) -> Fraction:
        return self._c.get(d, Fraction(0))

    def __float__(self) -> float:
        # fsum keeps this correctly rounded for the few-term surds used here
        return math.fsum(float(v) * math.sqrt(d) for d, v in self._c.items())

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._c)
        for d, v in other._c.items():
            out[d] = out.get(d, Fraction(0)) + v
        return Surd(out)

    __radd__ = __add__

    def __neg__(self):
        return Surd({d: -v for d, v in self._c.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, Fraction] = {}
        for d1, v1 in self._c.items():
            for d2, v2 in other._c.items():
                g = math.gcd(d1, d2)
                d = (d1 // g) * (d2 // g)
                out[d] = out.get(d, Fraction(0)) + v1 * v2 * g
        return Surd(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Surd({d: v / other for d, v in self._c.items()})
        if isinstance(other, Surd):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def _flip(self, p: int) -> "Surd":
        # field automorphism sqrt(p) -> -sqrt(p)
        return Surd({d: (-v if d % p == 0 else v) for d, v in self._c.items()})

    def inverse(self) -> "Surd":
        """Multiplicative inverse, by multiplying through by Galois conjugates."""
        if not self._c:
            raise ZeroDivisionError("inverse of zero surd")
        primes = sorted({p for d in self._c for p in _prime_factors(d)})
        y, num = self, Surd(1)
        for p in primes:
            c = y._flip(p)
            num = num * c
            y = y * c
        return num / y.rational_part()

    def sign(self) -> int:
        """Exact sign (-1, 0, 1)."""
        if not self._c:
            return 0
        if self.is_rational():
            v = self.rational_part()
            return (v > 0) - (v < 0)
        x = float(self)
        if abs(x) > 1e-9 * (1 + sum(abs(float(v)) * math.sqrt(d) for d, v in self._c.items())):
            return 1 if x > 0 else -1
        with localcontext() as ctx:
            ctx.prec = 80
            t = sum(Decimal(v.numerator) / Decimal(v.denominator) * Decimal(d).sqrt() for d, v in self._c.items())
        # a nonzero surd with small coefficients cannot vanish to 80 digits
        return 1 if t > 0 else -1

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            # rational surds hash like the equal Fraction
            self._hash = hash(self.rational_part()) if self.is_rational() else hash(tuple(self._c.items()))
        return self._hash

    def __bool__(self):
        return bool(self._c)

    def __repr__(self):
        if not self._c:
            return "Surd(0)"
        parts = []
        for d, v in self._c.items():
            parts.append(f"{v}" if d == 1 else f"{v}*sqrt({d})")
        return "Surd(" + " + ".join(parts) + ")"

    def to_json(self) -> dict[str, str]:
        return {str(d): str(v) for d, v in self._c.items()}

    @classmethod
    def from_json(cls, obj: Mapping[str, str]) -> "Surd":
        return cls({int(d): Fraction(v) for d, v in obj.items()})


def _coerce(x):
    if isinstance(x, Surd):
        return x
    if isinstance(x, (int, Fraction)):
        return Surd(x)
    return NotImplemented


_SURD_TOKEN = re.compile(
    r"^\s*(?P<sign>[+-]?)\s*(?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?"
    r"(?:√\s*(?P<r1>\d+)|sqrt\(\s*(?P<r2>\d+)\s*\))\s*$"
)
_RATIONAL = re.compile(r"^\s*[+-]?\d+(?:/\d+)?\s*$")


def parse_scalar(token: str | int | float) -> tuple[Union[Surd, float], bool]:
    """Parse a scalar token.

    Returns ``(value, certified)``.  Integers, ``p/q`` fractions and surd
    tokens such as ``√2``, ``-sqrt(3)``, ``2*sqrt(5)`` or ``1/2√7`` come back
    as exact :class:`Surd` values (certified).  Plain decimals come back as
    floats with ``certified=False``.
    """
    if isinstance(token, bool):
        raise ConfigError(f"not a scalar: {token!r}")
    if isinstance(token, int):
        return Surd(token), True
    if isinstance(token, float):
        return token, False
    s = str(token).strip()
    if _RATIONAL.match(s):
        return Surd(Fraction(s.replace(" ", ""))), True
    m = _SURD_TOKEN.match(s)
    if m:
        coef = Fraction(m.group("coef") or 1)
        if m.group("sign") == "-":
            coef = -coef
        radicand = int(m.group("r1") or m.group("r2"))
        return Surd.sqrt(radicand, coef), True
    try:
        return float(s), False
    except ValueError:
        raise ConfigError(f"cannot parse scalar {token!r}") from None


def to_float_array(values: Iterable) -> list[float]:
    return [float(v) for v in values]


class SurdArray:
    """A 2-D array of surds stored per radicand: ``X = sum_d C[d] * sqrt(d)``.

    Coefficient arrays are numpy object arrays of ints/Fractions, which keeps
    exact arithmetic vectorized over many points.
    """

    def __init__(self, coeffs: Mapping[int, np.ndarray], shape: tuple[int, int]):
        self.shape = tuple(shape)
        self.coeffs = {d: np.asarray(c, dtype=object).reshape(self.shape) for d, c in sorted(coeffs.items())}

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None) -> "SurdArray":
        rows = list(rows)
        ncols = len(rows[0]) if rows else (ncols or 0)
        coeffs: dict[int, np.ndarray] = {}
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                x = x if isinstance(x, Surd) else Surd(Fraction(x))
                for d, v in x._c.items():
                    if d not in coeffs:
                        coeffs[d] = np.zeros((len(rows), ncols), dtype=object)
                    coeffs[d][i, j] = v
        return cls(coeffs, (len(rows), ncols))

    @classmethod
    def affine(cls, meta: np.ndarray, terms: Sequence[tuple[int, int, Surd]], ncols: int) -> "SurdArray":
        """Rows ``sum meta[:, col] * value`` placed on axis ``axis`` for each term
        ``(col, axis, value)``."""
        N = meta.shape[0]
        coeffs: dict[int, np.ndarray] = {}
        m = meta.astype(object)
        for col, axis, value in terms:
            value = value if isinstance(value, Surd) else Surd(Fraction(value))
            for d, v in value._c.items():
                if d not in coeffs:
                    coeffs[d] = np.zeros((N, ncols), dtype=object)
                coeffs[d][:, axis] = coeffs[d][:, axis] + m[:, col] * (v if v.denominator != 1 else v.numerator)
        return cls(coeffs, (N, ncols))

    def __len__(self) -> int:
        return self.shape[0]

    @classmethod
    def concat(cls, parts: Sequence["SurdArray"]) -> "SurdArray":
        keys = sorted({d for p in parts for d in p.coeffs})
        ncols = parts[0].shape[1]
        coeffs = {d: np.concatenate([p.coeffs.get(d, np.zeros(p.shape, dtype=object)) for p in parts])
                  for d in keys}
        return cls(coeffs, (sum(len(p) for p in parts), ncols))

    def __getitem__(self, idx) -> "SurdArray":
        sub = {d: c[idx] for d, c in self.coeffs.items()}
        n = len(np.arange(self.shape[0])[idx])
        return SurdArray(sub, (n, self.shape[1]))

    def __eq__(self, other):
        if not isinstance(other, SurdArray) or self.shape != other.shape:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        zero = np.zeros(self.shape, dtype=object)
        return all(np.array_equal(self.coeffs.get(d, zero), other.coeffs.get(d, zero)) for d in keys)

    __hash__ = None

    def row(self, i: int) -> tuple[Surd, ...]:
        return tuple(Surd({d: c[i, j] for d, c in self.coeffs.items()}) for j in range(self.shape[1]))

    def to_rows(self) -> list[tuple[Surd, ...]]:
        return [self.row(i) for i in range(self.shape[0])]

    def approx(self) -> np.ndarray:
        out = np.zeros(self.shape)
        for d, c in self.coeffs.items():
            out += c.astype(float) * math.sqrt(d)
        return out

    def dot(self, nu: Sequence) -> "SurdArray":
        """Row-wise ``sum_j nu_j X[:, j]`` as an (N, 1) array."""
        out: dict[int, np.ndarray] = {}
        for j, c in enumerate(nu):
            c = c if isinstance(c, Surd) else Surd(Fraction(c))
            for d1, v1 in c._c.items():
                for d2, col in self.coeffs.items():
                    g = math.gcd(d1, d2)
                    d = (d1 // g) * (d2 // g)
                    term = col[:, j] * (v1 * g)
                    out[d] = out[d] + term if d in out else term
        return SurdArray(out, (self.shape[0], 1))

    def is_zero_rows(self) -> np.ndarray:
        mask = np.ones(self.shape[0], dtype=bool)
        for c in self.coeffs.values():
            mask &= np.all(c == 0, axis=1)
        return mask

    def compare_column(self, j: int, q: Fraction) -> np.ndarray:
        """Exact signs of ``X[:, j] - q``."""
        approx = np.zeros(self.shape[0])
        mag = np.full(self.shape[0], abs(float(q)))
        for d, c in self.coeffs.items():
            f = c[:, j].astype(float) * math.sqrt(d)
            approx += f
            mag += np.abs(f)
        approx -= float(q)
        sign = np.sign(approx).astype(int)
        unsure = np.abs(approx) <= 1e-9 * (1 + mag)
        for i in np.flatnonzero(unsure):
            sign[i] = (self.row(i)[j] - q).sign()
        return sign
