"""Bispectral Darboux transformations.

From a factorization ``L = Q * theta^-1 * P`` the transformed operator is
``L_bar = P * Q * theta^-1`` with eigenfunction ``P psi``, and on the
spectral side ``Lambda_bar = b(P) * b(Q) * f^-1`` where ``f = b(L)``.
Factorizations are inputs; they are verified by expansion, never searched.
"""

import logging
from dataclasses import dataclass, field
from functools import reduce
from operator import mul

from .exceptions import (
    ChainStepError,
    DivisionByZeroError,
    FactorizationError,
    SpectralMismatchError,
    UnknownGeneratorError,
    WorkbenchError,
)
from .ore import OreOperator
from .presented import GenWord, apply_antiiso, realize
from .scalars import Scalar

logger = logging.getLogger(__name__)


def _operator(value, realization):
    if isinstance(value, GenWord):
        if realization is None:
            raise UnknownGeneratorError(", ".join(sorted(value.generators())) or "<scalar>")
        return realize(value, realization)
    return value


def _function(value, realization, label):
    if isinstance(value, OreOperator) or isinstance(value, GenWord):
        op = _operator(value, realization)
        if not op.is_scalar:
            raise SpectralMismatchError(f"{label} must be a function, got {op}")
        value = op.coefficient(0)
    value = Scalar.coerce(value)
    if value.is_zero:
        raise DivisionByZeroError(f"{label} is zero")
    return value


@dataclass(frozen=True)
class CertificateEntry:
    """``prod(lhs) == prod(rhs)``, recorded together with its outcome."""

    label: str
    lhs: tuple
    rhs: tuple
    holds: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "holds", self.verify())

    def verify(self):
        return reduce(mul, self.lhs) == reduce(mul, self.rhs)


@dataclass(frozen=True)
class DarbouxInput:
    """Data of one Darboux step; ``triple`` may be None for operator-only chains."""

    triple: object
    L: object
    P: object = None
    Q: object = None
    theta: object = None
    f: object = None


@dataclass(frozen=True)
class DarbouxResult:
    L: OreOperator
    P: OreOperator
    L_bar: OreOperator
    certificate: tuple
    theta: Scalar = None
    Q: OreOperator = None
    f: Scalar = None
    Lambda: OreOperator = None
    Lambda_bar: OreOperator = None
    bP: OreOperator = None
    bQ: OreOperator = None
    reason: str = None

    @property
    def passed(self):
        return all(entry.holds for entry in self.certificate)

    @property
    def has_polynomial_coefficients(self):
        return self.L_bar.has_polynomial_coefficients()

    @property
    def order_preserved(self):
        return self.L_bar.degree == self.L.degree


def verify_factorization(P, Q, theta, L, r):
    """``Q * theta^-1 * P == L`` in the algebra of ``r``."""
    theta = _function(theta, r, "theta")
    rule = r.rule if r is not None else _operator(L, r).rule
    left = _operator(Q, r) * OreOperator.scalar(rule, theta.inverse()) * _operator(P, r)
    return left == _operator(L, r)


def _spectral_value(inp, b, L_op):
    """f as a Scalar, checked against b(L) when L is a word."""
    target = b.target if b is not None else None
    bL = None
    if b is not None and isinstance(inp.L, GenWord):
        bL = apply_antiiso(b, inp.L)
    if inp.f is None:
        if bL is None:
            return None
        return _function(bL, target, "b(L)")
    f_op = _operator(inp.f, target)
    if bL is not None and bL != f_op:
        raise SpectralMismatchError(f"f = {f_op} but b(L) = {bL}")
    return _function(f_op, target, "f")


def _target_side(b, P, Q, theta, f):
    """``(bP, bQ, Lambda, Lambda_bar, reason)`` from the source words."""
    if b is None:
        return None, None, None, None, "no anti-isomorphism available"
    if f is None:
        return None, None, None, None, "f is unknown"
    words = {"P": P, "Q": Q}
    for label, value in words.items():
        if not isinstance(value, GenWord):
            return None, None, None, None, f"{label} is not given as a generator word"
        unknown = value.generators() - set(b.images)
        if unknown:
            return None, None, None, None, f"b is not given on {sorted(unknown)}"
    bP = apply_antiiso(b, P)
    bQ = apply_antiiso(b, Q)
    rule = b.target_rule
    Lambda_bar = bP * bQ * OreOperator.scalar(rule, f.inverse())
    Lambda = apply_antiiso(b, theta) if isinstance(theta, GenWord) else None
    return bP, bQ, Lambda, Lambda_bar, None


def darboux_transform(inp):
    triple = inp.triple
    b = triple.b if triple is not None else None
    source = b.source if b is not None else None
    if inp.P is None or inp.Q is None or inp.theta is None:
        raise FactorizationError("a Darboux step needs P, Q and theta")
    L = _operator(inp.L, source)
    theta = _function(inp.theta, source, "theta")
    P = _operator(inp.P, source)
    Q = _operator(inp.Q, source)
    rule = L.rule
    theta_inv = OreOperator.scalar(rule, theta.inverse())
    if Q * theta_inv * P != L:
        raise FactorizationError(f"Q * theta^-1 * P does not expand to {L}")
    f = _spectral_value(inp, b, L)
    L_bar = P * Q * theta_inv
    entries = [
        CertificateEntry("factorization", (Q, theta_inv, P), (L,)),
        CertificateEntry("intertwining (source)", (L_bar, P), (P, L)),
    ]
    bP, bQ, Lambda, Lambda_bar, reason = _target_side(b, inp.P, inp.Q, inp.theta, f)
    if reason:
        logger.info("Lambda_bar not produced: %s", reason)
    elif Lambda is not None:
        f_inv = OreOperator.scalar(b.target_rule, f.inverse())
        entries.append(CertificateEntry("spectral factorization", (bQ, f_inv, bP), (Lambda,)))
        entries.append(CertificateEntry("intertwining (target)", (Lambda_bar, bP), (bP, Lambda)))
    return DarbouxResult(
        L=L,
        P=P,
        L_bar=L_bar,
        certificate=tuple(entries),
        theta=theta,
        Q=Q,
        f=f,
        Lambda=Lambda,
        Lambda_bar=Lambda_bar,
        bP=bP,
        bQ=bQ,
        reason=reason,
    )


@dataclass(frozen=True)
class FactorizationStep:
    P: object
    Q: object
    theta: object


@dataclass(frozen=True)
class IntertwiningStep:
    """``L_bar * P == P * L`` supplied directly, as in parameter-shift chains."""

    P: object
    L_bar: object


def _identity(inp):
    triple = inp.triple
    b = triple.b if triple is not None else None
    source = b.source if b is not None else None
    L = _operator(inp.L, source)
    one = OreOperator.one(L.rule)
    f = _spectral_value(inp, b, L)
    return DarbouxResult(
        L=L,
        P=one,
        L_bar=L,
        certificate=(CertificateEntry("factorization", (L, one, one), (L,)),),
        theta=Scalar.one(),
        Q=L,
        f=f,
        reason="identity",
    )


def darboux_chain(inp, schedule):
    """Certified results, starting with the identity record for ``inp.L``."""
    results = [_identity(inp)]
    f = results[0].f
    for index, step in enumerate(schedule, start=1):
        previous = results[-1]
        try:
            if isinstance(step, IntertwiningStep):
                results.append(_intertwine(previous, step, inp.triple))
                continue
            if index == 1:
                step_input = DarbouxInput(inp.triple, inp.L, step.P, step.Q, step.theta, inp.f)
                results.append(darboux_transform(step_input))
            else:
                # The transformed triple's anti-isomorphism is not known.
                step_input = DarbouxInput(None, previous.L_bar, *_realized(step, inp.triple), f)
                result = darboux_transform(step_input)
                results.append(result)
        except WorkbenchError as exc:
            raise ChainStepError(index, exc) from exc
        logger.debug("chain step %d gives %s", index, results[-1].L_bar)
    return results


def _realized(step, triple):
    source = triple.b.source if triple is not None else None
    return _operator(step.P, source), _operator(step.Q, source), _function(step.theta, source, "theta")


def _intertwine(previous, step, triple):
    source = triple.b.source if triple is not None else None
    P = _operator(step.P, source)
    L_bar = _operator(step.L_bar, source)
    entry = CertificateEntry("exchange identity", (L_bar, P), (P, previous.L_bar))
    if not entry.holds:
        raise FactorizationError(f"{L_bar} * P != P * {previous.L_bar}")
    return DarbouxResult(
        L=previous.L_bar,
        P=P,
        L_bar=L_bar,
        certificate=(entry,),
        f=previous.f,
        reason="intertwining step",
    )


def check_exchange_identity(A, B, A2, B2):
    """``A * B == B2 * A2``."""
    return A * B == B2 * A2
