"""ad-calculus: iterated commutators and locally nilpotent exponentials.

``exp(c ad L)(M) = sum_n c^n/n! (ad L)^n M`` is summed until the first
vanishing iterated commutator.  The sum is exact; the only cut-off is the
nilpotency bound, which turns a non-terminating series into an error.
"""

import logging
from dataclasses import dataclass, field

from . import conf
from .exceptions import NilpotencyExceeded, ParameterError, RuleMismatchError
from .ore import commutator
from .presented import apply_antiiso
from .scalars import Scalar

logger = logging.getLogger(__name__)


def _default_bound():
    return conf.get("NILPOTENCY_BOUND")


@dataclass(frozen=True)
class AdExp:
    """The automorphism ``exp(scale * ad L)``."""

    L: object
    scale: Scalar = field(default_factory=Scalar.one)
    bound: int = field(default_factory=_default_bound)

    def __post_init__(self):
        object.__setattr__(self, "scale", Scalar.coerce(self.scale))
        if not isinstance(self.bound, int) or self.bound < 1:
            raise ParameterError(f"the nilpotency bound must be a positive integer, got {self.bound!r}")

    def apply(self, M):
        return exp_ad(self, M)

    def inverse(self):
        return AdExp(self.L, -self.scale, self.bound)


def ad_power(L, M, n):
    """``[L, [L, ... [L, M]]]`` with ``n`` brackets."""
    if n < 0:
        raise ParameterError("ad powers are non-negative")
    if L.rule != M.rule:
        raise RuleMismatchError(L.rule, M.rule)
    for _ in range(n):
        M = commutator(L, M)
    return M


def exp_ad_with_index(t, M):
    """``(exp(c ad L) M, n)`` where ``n`` is the first index with ``(ad L)^n M = 0``."""
    if t.L.rule != M.rule:
        raise RuleMismatchError(t.L.rule, M.rule)
    if t.scale.is_zero:
        return M, 0
    result = M
    term = M
    coeff = Scalar.one()
    for n in range(1, t.bound + 1):
        term = commutator(t.L, term)
        if term.is_zero:
            logger.debug("ad L vanishes on the operand after %d steps", n)
            return result, n
        coeff = coeff * t.scale / n
        result = result + coeff * term
    raise NilpotencyExceeded(t.bound)


def exp_ad(t, M):
    return exp_ad_with_index(t, M)[0]


def twist_target(b, t):
    """``exp(c ad L') o b`` for ``L'`` in the target algebra."""
    if t.L.rule != b.target_rule:
        raise RuleMismatchError(b.target_rule, t.L.rule)
    twisted = b.with_twist(t)
    # Evaluate now so non-nilpotent twists fail here, not on first use.
    twisted.effective_images
    for lhs, rhs, holds in twisted.verify_relations():
        if not holds:
            logger.warning("relation %s = %s fails after twisting %s", lhs, rhs, b.name)
    return twisted


def twist_source(b, L_word, c, bound=None):
    """``b o exp(c ad L)`` computed as ``exp(-c ad b(L)) o b``."""
    L_image = apply_antiiso(b, L_word)
    t = AdExp(L_image, -Scalar.coerce(c), bound or _default_bound())
    return twist_target(b, t)


@dataclass(frozen=True)
class OperandResult:
    operand: object
    index: int = None

    @property
    def nilpotent(self):
        return self.index is not None


@dataclass(frozen=True)
class NilpotencyReport:
    bound: int
    results: tuple

    @property
    def all_nilpotent(self):
        return all(p.nilpotent for p in self.results)

    def indices(self):
        return [p.index for p in self.results]


def check_local_nilpotency(L, operands, bound=None):
    bound = bound or _default_bound()
    results = []
    for operand in operands:
        if L.rule != operand.rule:
            raise RuleMismatchError(L.rule, operand.rule)
        term = operand
        index = None
        for n in range(1, bound + 1):
            term = commutator(L, term)
            if term.is_zero:
                index = n
                break
        results.append(OperandResult(operand, index))
    return NilpotencyReport(bound, tuple(results))
