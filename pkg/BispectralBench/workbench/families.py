"""Named operator families: Airy, Bessel, q-Bessel, Hermite and friends."""

from django.db import models

from .exceptions import ParameterError
from .ore import OreOperator, OreRule, RuleKind
from .scalars import Scalar


class Family(models.TextChoices):
    AIRY = "airy", "Generalized Airy operator"
    BESSEL = "bessel", "Generalized Bessel operator"
    Q_BESSEL = "q_bessel", "q-deformed Bessel operator"
    HERMITE = "hermite", "Hermite operator"
    EULER = "euler", "Euler operator D"
    DILATION_POWER = "dilation_power", "Power of the dilation D_q"
    Q_DERIVATIVE = "q_derivative", "q-derivative"


def parameter(value):
    """A family parameter: a symbol name, a rational literal or a Scalar."""
    if isinstance(value, str) and value.isidentifier():
        return Scalar.symbol(value)
    return Scalar.coerce(value)


def _order(N):
    if not isinstance(N, int) or isinstance(N, bool) or N < 1:
        raise ParameterError(f"the order N must be a positive integer, got {N!r}")
    return N


def _vector(values, length, label):
    values = list(values)
    if len(values) != length:
        raise ParameterError(f"{label} needs {length} entries, got {len(values)}")
    return [parameter(v) for v in values]


def euler(rule):
    """D = x*d for the derivative, D_q itself for the dilation."""
    if rule.kind == RuleKind.DIFFERENTIAL:
        return OreOperator(rule, {1: rule.variable})
    if rule.kind == RuleKind.DILATION:
        return OreOperator.generator(rule)
    raise ParameterError("the Euler operator needs a differential or dilation rule")


def airy(N, alphas=(), var="x"):
    """d^N + sum_{i=2}^{N-1} alpha_i d^(N-i) - x."""
    N = _order(N)
    if N < 2:
        raise ParameterError("Airy operators have order at least 2")
    coeffs = _vector(alphas, N - 2, "the alpha vector")
    rule = OreRule.differential(var)
    terms = {N: Scalar.one()}
    for i, alpha in enumerate(coeffs, start=2):
        terms[N - i] = alpha
    op = OreOperator(rule, terms)
    return op - OreOperator.variable(rule)


def _bessel_like(rule, N, roots):
    D = euler(rule)
    product = OreOperator.one(rule)
    for root in roots:
        product = product * (D - root)
    return rule.variable ** (-N) * product


def bessel(N, betas, var="x"):
    """x^-N (D - beta_1) ... (D - beta_N) with D = x*d."""
    N = _order(N)
    return _bessel_like(OreRule.differential(var), N, _vector(betas, N, "the beta vector"))


def q_bessel(N, qbetas, var="x", q="q"):
    """x^-N (D_q - u_1) ... (D_q - u_N) where u_i stands for q^beta_i."""
    N = _order(N)
    rule = OreRule.dilation(var, q)
    return _bessel_like(rule, N, _vector(qbetas, N, "the q^beta vector"))


def hermite(var="x"):
    rule = OreRule.differential(var)
    return OreOperator(rule, {2: Scalar.one(), 1: rule.variable * -2})


def dilation_power(k, var="x", q="q"):
    if not isinstance(k, int):
        raise ParameterError(f"dilation powers must be integers, got {k!r}")
    return OreOperator.generator(OreRule.dilation(var, q), 1) ** k


def q_derivative(var="x", q="q"):
    """x^-1 (D_q - 1), i.e. f -> (f(qx) - f(x)) / x."""
    rule = OreRule.dilation(var, q)
    return rule.variable ** -1 * (OreOperator.generator(rule) - 1)


def build_named(family, **params):
    try:
        family = Family(family)
    except ValueError as exc:
        raise ParameterError(f"unknown operator family: {family}") from exc
    try:
        return _build(family, params)
    except KeyError as exc:
        raise ParameterError(f"{family.value} needs the parameter {exc.args[0]}") from exc


def _build(family, params):
    if family == Family.AIRY:
        return airy(params["N"], params.get("alphas", ()), params.get("var", "x"))
    if family == Family.BESSEL:
        return bessel(params["N"], params["betas"], params.get("var", "x"))
    if family == Family.Q_BESSEL:
        return q_bessel(params["N"], params["qbetas"], params.get("var", "x"), params.get("q", "q"))
    if family == Family.HERMITE:
        return hermite(params.get("var", "x"))
    if family == Family.EULER:
        rule = params.get("rule") or OreRule.differential(params.get("var", "x"))
        return euler(rule)
    if family == Family.DILATION_POWER:
        return dilation_power(params.get("k", 1), params.get("var", "x"), params.get("q", "q"))
    return q_derivative(params.get("var", "x"), params.get("q", "q"))
