"""Exact phases e^{iπr}, their rational spans, and truncated q-series."""

from __future__ import annotations

import cmath
import math
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache, total_ordering
from math import lcm

from .errors import InconclusiveCancellation, MalformedInput
from .linalg import fmt_fraction, to_fraction

ZERO_CERTIFICATE = 1e-12

_TWO = Fraction(2)


@total_ordering
class Phase:
    """The unit complex number e^{iπ·exponent}, exponent kept in [0, 2)."""

    __slots__ = ("_exp",)

    def __init__(self, exponent=0):
        e = to_fraction(exponent) if not isinstance(exponent, Fraction) else exponent
        self._exp = e % _TWO

    @property
    def exponent(self) -> Fraction:
        return self._exp

    def __mul__(self, other):
        if isinstance(other, Phase):
            return Phase(self._exp + other._exp)
        if isinstance(other, Scalar):
            return Scalar.from_phase(self) * other
        return NotImplemented

    def __truediv__(self, other: Phase) -> Phase:
        return Phase(self._exp - other._exp)

    def __pow__(self, k: int) -> Phase:
        return Phase(self._exp * k)

    def inverse(self) -> Phase:
        return Phase(-self._exp)

    def conjugate(self) -> Phase:
        return self.inverse()

    def __eq__(self, other) -> bool:
        if isinstance(other, Phase):
            return self._exp == other._exp
        if isinstance(other, int) and other in (1, -1):
            return self._exp == (0 if other == 1 else 1)
        return NotImplemented

    def __lt__(self, other: Phase) -> bool:
        return self._exp < other._exp

    def __hash__(self) -> int:
        return hash(("Phase", self._exp))

    def __repr__(self) -> str:
        return f"Phase({self._exp})"

    def to_complex(self) -> complex:
        e = self._exp
        exact = {Fraction(0): 1, Fraction(1, 2): 1j, Fraction(1): -1, Fraction(3, 2): -1j}
        if e in exact:
            return complex(exact[e])
        return cmath.exp(1j * math.pi * float(e))

    def is_sign(self) -> bool:
        return self._exp.denominator == 1

    def to_json(self) -> dict:
        return {"exp": fmt_fraction(self._exp)}

    @classmethod
    def from_json(cls, obj) -> Phase:
        try:
            return cls(to_fraction(obj["exp"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"bad phase {obj!r}") from exc


def phase_mul(a: Phase, b: Phase) -> Phase:
    return a * b


ONE = Phase(0)
MINUS_ONE = Phase(1)


def sign(k: int) -> Phase:
    """(-1)^k as a Phase."""
    return Phase(Fraction(k) % 2)


class Scalar:
    """Finite rational combination Σ c_r e^{iπr}.

    Exponents are folded into [0, 1) using e^{iπ(r+1)} = -e^{iπr}; that is
    the symbolic merge.  Anything that survives it is settled numerically.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        acc: dict[Fraction, Fraction] = defaultdict(Fraction)
        for r, c in (terms or {}).items():
            r = to_fraction(r) % _TWO
            c = to_fraction(c)
            if r >= 1:
                acc[r - 1] -= c
            else:
                acc[r] += c
        self._terms = {r: c for r, c in sorted(acc.items()) if c != 0}

    @classmethod
    def from_phase(cls, p: Phase, coeff=1) -> Scalar:
        return cls({p.exponent: coeff})

    @classmethod
    def rational(cls, c) -> Scalar:
        return cls({Fraction(0): c})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def _coerce(self, other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, Phase):
            return Scalar.from_phase(other)
        if isinstance(other, (int, Fraction)):
            return Scalar.rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self._terms)
        for r, c in o._terms.items():
            terms[r] = terms.get(r, Fraction(0)) + c
        return Scalar(terms)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        return Scalar({r: -c for r, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms: dict[Fraction, Fraction] = defaultdict(Fraction)
        for r, c in self._terms.items():
            for s, d in o._terms.items():
                terms[r + s] += c * d
        return Scalar(terms)

    __rmul__ = __mul__

    def to_complex(self) -> complex:
        return sum((float(c) * Phase(r).to_complex() for r, c in self._terms.items()), 0j)

    def is_zero(self) -> bool:
        if not self._terms:
            return True
        if abs(self.to_complex()) < ZERO_CERTIFICATE:
            raise InconclusiveCancellation(f"cannot certify {self!r} as zero or nonzero")
        return False

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def to_phase(self) -> Phase | None:
        """The Phase this scalar equals, if it is a single unit term."""
        if len(self._terms) != 1:
            return None
        (r, c), = self._terms.items()
        if c == 1:
            return Phase(r)
        if c == -1:
            return Phase(r + 1)
        return None

    def __repr__(self) -> str:
        inner = ", ".join(f"{r}: {c}" for r, c in self._terms.items())
        return f"Scalar({{{inner}}})"


class QSeries:
    """Truncated series Σ c_k q^{offset + k·step}, exact below ``order``.

    ``offset`` is reduced into [0, step); a series only mixes with another
    sharing the same offset (i.e. the same exponent coset).
    """

    __slots__ = ("offset", "step", "order", "_coeffs")

    def __init__(self, terms, order, step=1, offset=None):
        step = to_fraction(step)
        order = to_fraction(order)
        if step <= 0:
            raise ValueError("step must be positive")
        acc: dict[Fraction, Fraction] = defaultdict(Fraction)
        for e, c in dict(terms).items():
            acc[to_fraction(e)] += to_fraction(c)
        exps = [e for e, c in acc.items() if c != 0 and e < order]
        if offset is None:
            offset = exps[0] % step if exps else Fraction(0)
        offset = to_fraction(offset) % step
        coeffs = {}
        for e in exps:
            k = (e - offset) / step
            if k.denominator != 1:
                raise ValueError(f"exponent {e} not on the lattice {offset} + {step}Z")
            coeffs[int(k)] = acc[e]
        self.offset = offset
        self.step = step
        self.order = order
        self._coeffs = dict(sorted(coeffs.items()))

    @classmethod
    def one(cls, order=Fraction(10**9)) -> QSeries:
        return cls({0: 1}, order)

    def exponent(self, k: int) -> Fraction:
        return self.offset + k * self.step

    def terms(self) -> dict[Fraction, Fraction]:
        return {self.exponent(k): c for k, c in self._coeffs.items()}

    def coefficient(self, exponent) -> Fraction:
        exponent = to_fraction(exponent)
        if exponent >= self.order:
            raise ValueError(f"q^{exponent} is beyond the truncation order {self.order}")
        k = (exponent - self.offset) / self.step
        if k.denominator != 1:
            return Fraction(0)
        return self._coeffs.get(int(k), Fraction(0))

    def valuation(self) -> Fraction:
        if not self._coeffs:
            return self.order
        return self.exponent(next(iter(self._coeffs)))

    def _rebased(self, step: Fraction) -> dict[int, Fraction]:
        ratio = self.step / step
        assert ratio.denominator == 1
        return {k * int(ratio): c for k, c in self._coeffs.items()}

    def __add__(self, other: QSeries) -> QSeries:
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.offset != other.offset and self._coeffs and other._coeffs:
            step = _common_step(self.step, other.step)
            if (self.offset - other.offset) % step != 0:
                raise ValueError(f"mixed exponent offsets {self.offset} and {other.offset}")
        terms: dict[Fraction, Fraction] = defaultdict(Fraction)
        for s in (self, other):
            for e, c in s.terms().items():
                terms[e] += c
        return QSeries(terms, min(self.order, other.order), _common_step(self.step, other.step))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries({e: c * other for e, c in self.terms().items()}, self.order, self.step, self.offset)
        if not isinstance(other, QSeries):
            return NotImplemented
        return qseries_mul(self, other)

    __rmul__ = __mul__

    def shift(self, exponent) -> QSeries:
        """Multiply by q^exponent."""
        exponent = to_fraction(exponent)
        return QSeries({e + exponent: c for e, c in self.terms().items()}, self.order + exponent, self.step)

    def truncate(self, order) -> QSeries:
        order = min(self.order, to_fraction(order))
        return QSeries(self.terms(), order, self.step, self.offset)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        order = min(self.order, other.order)
        a = {e: c for e, c in self.terms().items() if e < order}
        b = {e: c for e, c in other.terms().items() if e < order}
        return a == b

    def __repr__(self) -> str:
        body = " + ".join(f"{c}q^{e}" for e, c in self.terms().items()) or "0"
        return f"{body} + O(q^{self.order})"

    def to_json(self) -> dict:
        return {
            "offset": fmt_fraction(self.offset),
            "step": fmt_fraction(self.step),
            "order": fmt_fraction(self.order),
            "coeffs": {str(k): fmt_fraction(c) for k, c in self._coeffs.items()},
        }

    @classmethod
    def from_json(cls, obj) -> QSeries:
        try:
            offset = to_fraction(obj["offset"])
            step = to_fraction(obj.get("step", "1"))
            order = to_fraction(obj.get("order", str(10**9)))
            terms = {offset + int(k) * step: to_fraction(c) for k, c in obj["coeffs"].items()}
        except (KeyError, TypeError, ValueError, ZeroDivisionError, AttributeError) as exc:
            raise MalformedInput(f"bad q-series {obj!r}") from exc
        return cls(terms, order, step, offset)

    def to_text(self) -> str:
        parts = []
        for e, c in self.terms().items():
            parts.append(f"{c}*q^({e})")
        return " + ".join(parts or ["0"]) + f" + O(q^({self.order}))"


def _common_step(a: Fraction, b: Fraction) -> Fraction:
    den = lcm(a.denominator, b.denominator)
    return Fraction(math.gcd(a.numerator * (den // a.denominator), b.numerator * (den // b.denominator)), den)


def qseries_mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product; exact below min(a.order + val(b), b.order + val(a))."""
    order = min(a.order + b.valuation(), b.order + a.valuation())
    terms: dict[Fraction, Fraction] = defaultdict(Fraction)
    bt = b.terms()
    for e, c in a.terms().items():
        for f, d in bt.items():
            if e + f < order:
                terms[e + f] += c * d
    return QSeries(terms, order, _common_step(a.step, b.step))


@lru_cache(maxsize=None)
def colored_partition_counts(n: int, dmax: int) -> tuple[int, ...]:
    """p_n(d) for d <= dmax: coefficients of prod_k (1 - q^k)^{-n}."""
    p = [1] + [0] * dmax
    for k in range(1, dmax + 1):
        for _ in range(n):
            for d in range(k, dmax + 1):
                p[d] += p[d - k]
    return tuple(p)


def eta_inverse_series(n: int, order) -> QSeries:
    """q^{-n/24} Σ_d p_n(d) q^d truncated below ``order`` (η(τ)^{-n})."""
    order = to_fraction(order)
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return QSeries({0: 1}, order)
    shift = Fraction(-n, 24)
    if order <= shift:
        raise ValueError(f"order must exceed {shift}")
    dmax = math.ceil(order - shift) - 1
    counts = colored_partition_counts(n, max(dmax, 0))
    return QSeries({shift + d: counts[d] for d in range(dmax + 1)}, order)
