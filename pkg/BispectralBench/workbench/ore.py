"""Ore algebras over Scalar coefficients.

An ``OreRule`` fixes the main variable and the commutation law
``X*a = sigma(a)*X + delta(a)`` for one of three operator symbols:

* ``d``  the derivative in the main variable (sigma = id, delta = d/dx),
* ``Dq`` the dilation ``f(x) -> f(q*x)`` (delta = 0),
* ``T``  the shift ``f(n) -> f(n+1)`` (delta = 0, invertible).

``OreOperator`` keeps the normal form ``sum a_k * X^k`` with coefficients on
the left and no zero coefficients.
"""

import logging
from dataclasses import dataclass, replace
from functools import lru_cache
from math import comb
from types import MappingProxyType

from django.db import models

from .exceptions import ParameterError, RuleMismatchError, UnsupportedRuleError
from .scalars import Scalar

logger = logging.getLogger(__name__)


class RuleKind(models.TextChoices):
    DIFFERENTIAL = "differential", "Derivative d/dx"
    DILATION = "dilation", "q-dilation x -> q*x"
    SHIFT = "shift", "Shift n -> n+1"


OPERATOR_SYMBOLS = {
    RuleKind.DIFFERENTIAL: "d",
    RuleKind.DILATION: "Dq",
    RuleKind.SHIFT: "T",
}


@dataclass(frozen=True)
class OreRule:
    kind: RuleKind
    var: str
    q: Scalar = None

    def __post_init__(self):
        if self.kind == RuleKind.DILATION:
            if self.q is None:
                raise ParameterError("a dilation rule needs its q")
            if self.q.depends_on(self.var):
                raise ParameterError(f"q must not depend on the main variable {self.var}")
            if self.q.is_zero:
                raise ParameterError("q must be nonzero")
        elif self.q is not None:
            raise ParameterError(f"{self.kind} rules take no q")

    @classmethod
    def differential(cls, var="x"):
        return cls(RuleKind.DIFFERENTIAL, var)

    @classmethod
    def dilation(cls, var="x", q="q"):
        q = Scalar.symbol(q) if isinstance(q, str) and q.isidentifier() else Scalar.coerce(q)
        return cls(RuleKind.DILATION, var, q)

    @classmethod
    def shift(cls, var="n"):
        return cls(RuleKind.SHIFT, var)

    @property
    def symbol(self):
        return OPERATOR_SYMBOLS[self.kind]

    @property
    def invertible(self):
        return self.kind == RuleKind.SHIFT

    @property
    def variable(self):
        return Scalar.symbol(self.var)

    def sigma(self, a, power=1):
        """Apply the endomorphism ``power`` times (negative powers invert it)."""
        if self.kind == RuleKind.DIFFERENTIAL or power == 0 or not a.depends_on(self.var):
            return a
        if self.kind == RuleKind.DILATION:
            return a.substitute(self.var, self.q**power * self.variable)
        return a.substitute(self.var, self.variable + power)

    def delta(self, a):
        if self.kind == RuleKind.DIFFERENTIAL:
            return a.derivative(self.var)
        return Scalar.zero()

    def instantiate(self, values):
        if self.q is None:
            return self
        return replace(self, q=self.q.instantiate(values))

    def renamed(self, var):
        return replace(self, var=var)

    def __str__(self):
        if self.kind == RuleKind.DILATION:
            return f"{self.kind.value}({self.var}, q={self.q})"
        return f"{self.kind.value}({self.var})"


def _check_rules(a, b):
    if a.rule != b.rule:
        raise RuleMismatchError(a.rule, b.rule)


@lru_cache(maxsize=8192)
def _commute(rule, i, b):
    """Normal form of ``X^i * b`` as a tuple of ``(power, coefficient)``."""
    if i == 0:
        return ((0, b),)
    if rule.kind != RuleKind.DIFFERENTIAL:
        return ((i, rule.sigma(b, i)),)
    terms = []
    current = b
    for m in range(i + 1):
        if current.is_zero:
            break
        terms.append((i - m, current * comb(i, m)))
        current = current.derivative(rule.var)
    return tuple(terms)


class OreOperator:
    """Immutable operator ``sum a_k * X^k`` in normal form."""

    __slots__ = ("rule", "_terms", "_hash")

    def __init__(self, rule, terms=None):
        cleaned = {}
        for power, coeff in (terms or {}).items():
            coeff = Scalar.coerce(coeff)
            if coeff.is_zero:
                continue
            if power < 0 and not rule.invertible:
                raise UnsupportedRuleError(f"negative powers of {rule.symbol} do not exist")
            cleaned[power] = coeff
        self.rule = rule
        self._terms = cleaned
        self._hash = None

    @classmethod
    def zero(cls, rule):
        return cls(rule)

    @classmethod
    def one(cls, rule):
        return cls(rule, {0: Scalar.one()})

    @classmethod
    def scalar(cls, rule, value):
        return cls(rule, {0: Scalar.coerce(value)})

    @classmethod
    def generator(cls, rule, power=1):
        return cls(rule, {power: Scalar.one()})

    @classmethod
    def variable(cls, rule):
        return cls(rule, {0: rule.variable})

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def powers(self):
        """Stored powers, highest first."""
        return sorted(self._terms, reverse=True)

    @property
    def is_zero(self):
        return not self._terms

    @property
    def is_scalar(self):
        return all(power == 0 for power in self._terms)

    @property
    def degree(self):
        return max(self._terms) if self._terms else None

    @property
    def low_degree(self):
        return min(self._terms) if self._terms else None

    @property
    def leading_coefficient(self):
        if not self._terms:
            return Scalar.zero()
        return self._terms[self.degree]

    def coefficient(self, power):
        return self._terms.get(power, Scalar.zero())

    def scalar_part(self):
        if not self.is_scalar:
            raise ParameterError(f"{self} is not a function (operator degree {self.degree})")
        return self.coefficient(0)

    def has_polynomial_coefficients(self):
        """Whether every coefficient is polynomial in the main variable."""
        return all(
            not coeff.denominator().depends_on(self.rule.var) for coeff in self._terms.values()
        )

    def instantiate(self, values):
        return OreOperator(
            self.rule.instantiate(values),
            {power: coeff.instantiate(values) for power, coeff in self._terms.items()},
        )

    def renamed(self, var):
        """The same operator written in another main variable."""
        image = Scalar.symbol(var)
        old = self.rule.var
        return OreOperator(
            self.rule.renamed(var),
            {power: coeff.substitute(old, image) for power, coeff in self._terms.items()},
        )

    def _lift(self, value):
        if isinstance(value, OreOperator):
            return value
        try:
            return OreOperator.scalar(self.rule, value)
        except TypeError:
            return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return ore_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return OreOperator(self.rule, {power: -coeff for power, coeff in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return ore_add(self, -other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return ore_add(other, -self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return ore_mul(self, other)

    def __rmul__(self, other):
        # Scalars multiply from the left, which never reorders anything.
        try:
            return ore_scale(Scalar.coerce(other), self)
        except TypeError:
            return NotImplemented

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            raise ParameterError(f"operator exponents must be integers, got {exponent!r}")
        if exponent < 0:
            return self._inverse() ** (-exponent)
        result = OreOperator.one(self.rule)
        base = self
        while exponent:
            if exponent & 1:
                result = ore_mul(result, base)
            exponent >>= 1
            if exponent:
                base = ore_mul(base, base)
        return result

    def _inverse(self):
        if self.is_scalar and not self.is_zero:
            return OreOperator.scalar(self.rule, self.coefficient(0).inverse())
        if self.rule.invertible and len(self._terms) == 1:
            (power, coeff), = self._terms.items()
            # (c X^k)^-1 = X^-k c^-1
            return ore_mul(
                OreOperator.generator(self.rule, -power),
                OreOperator.scalar(self.rule, coeff.inverse()),
            )
        raise UnsupportedRuleError(f"{self} has no inverse in the {self.rule.kind} algebra")

    def __eq__(self, other):
        if not isinstance(other, OreOperator):
            return NotImplemented
        return self.rule == other.rule and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rule, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return not self.is_zero

    def __repr__(self):
        return f"OreOperator({self})"

    def __str__(self):
        from .formatting import format_operator

        return format_operator(self)


def ore_add(a, b):
    _check_rules(a, b)
    terms = dict(a._terms)
    for power, coeff in b._terms.items():
        terms[power] = terms[power] + coeff if power in terms else coeff
    return OreOperator(a.rule, terms)


def ore_scale(c, a):
    c = Scalar.coerce(c)
    if c.is_zero:
        return OreOperator.zero(a.rule)
    return OreOperator(a.rule, {power: c * coeff for power, coeff in a._terms.items()})


def ore_mul(a, b):
    """Normal-form product ``a * b``."""
    _check_rules(a, b)
    rule = a.rule
    result = {}
    for i, ai in a._terms.items():
        for j, bj in b._terms.items():
            for k, c in _commute(rule, i, bj):
                term = ai * c
                power = k + j
                result[power] = result[power] + term if power in result else term
    return OreOperator(rule, result)


def commutator(a, b):
    return ore_mul(a, b) - ore_mul(b, a)


def formal_conjugate(a):
    """Formal adjoint: ``x -> x``, ``d -> -d``, products reversed."""
    rule = a.rule
    if rule.kind != RuleKind.DIFFERENTIAL:
        raise UnsupportedRuleError("formal conjugation is defined for differential operators only")
    result = OreOperator.zero(rule)
    for power, coeff in a._terms.items():
        sign = -1 if power % 2 else 1
        result = result + ore_mul(
            OreOperator(rule, {power: Scalar.const(sign)}), OreOperator.scalar(rule, coeff)
        )
    return result


def apply_to_rational(a, g):
    """Act with ``a`` on the function ``g`` of the main variable."""
    g = Scalar.coerce(g)
    rule = a.rule
    result = Scalar.zero()
    if rule.kind == RuleKind.DIFFERENTIAL:
        derivatives = [g]
        for _ in range(a.degree or 0):
            derivatives.append(derivatives[-1].derivative(rule.var))
        for power, coeff in a._terms.items():
            result = result + coeff * derivatives[power]
        return result
    for power, coeff in a._terms.items():
        result = result + coeff * rule.sigma(g, power)
    return result


def right_divide(a, b):
    """``(quotient, remainder)`` with ``a = quotient * b + remainder`` and deg remainder < deg b."""
    _check_rules(a, b)
    rule = a.rule
    if b.is_zero or b.degree < 1:
        raise ParameterError(f"cannot divide by {b}: it has no positive degree")
    m = b.degree
    quotient = OreOperator.zero(rule)
    remainder = a
    while not remainder.is_zero and remainder.degree >= m:
        n = remainder.degree
        coeff = remainder.leading_coefficient / rule.sigma(b.leading_coefficient, n - m)
        term = OreOperator(rule, {n - m: coeff})
        quotient = quotient + term
        remainder = remainder - ore_mul(term, b)
    return quotient, remainder


def adic_expansion(a, b):
    """Digits ``[r_0, r_1, ...]`` with ``a = sum r_j * b^j`` and every deg r_j < deg b."""
    digits = []
    current = a
    while not current.is_zero:
        current, digit = right_divide(current, b)
        digits.append(digit)
    return digits
