"""Truncated eigenfunctions and exact residual checks.

A ``GridWave`` stores ``psi = sum c[i, j] x^(i+mu) z^(j+nu)`` for the cells
of a reliable window: every coefficient inside the window is known exactly,
everything below ``floor`` is exactly zero and nothing outside the window is
ever read.  Operators act exactly on the stored coefficients and shrink the
window by their order.  A ``SequenceWave`` stores ``psi(x, n)`` as exact
polynomials in x for ``floor <= n <= bound``.

All parameters are instantiated to rationals before a wave is built or acted
on; symbolic coefficients are rejected.
"""

import logging
from dataclasses import dataclass, field, replace
from math import comb, factorial
from types import MappingProxyType

from django.db import models
from sympy.polys.domains import QQ

from . import conf
from .exceptions import ParameterError, RecursionPivotError, WindowError
from .ore import OreOperator, OreRule, RuleKind, apply_to_rational
from .scalars import Scalar, to_rational

logger = logging.getLogger(__name__)


class Side(models.TextChoices):
    X = "x", "x-side"
    Z = "z", "z-side"
    N = "n", "n-side"


class WaveKind(models.TextChoices):
    GRID = "grid", "Bivariate grid"
    CORE_PRODUCT = "core_product", "Univariate core in x*z"
    CORE_SUM = "core_sum", "Univariate core in x+z"
    SEQUENCE = "sequence", "Indexed polynomial sequence"


class WaveFamily(models.TextChoices):
    EXP_XZ = "exp_xz", "exp(xz)"
    Q_EXP_XZ = "q_exp_xz", "q-exponential exp_q(xz)"
    AIRY = "airy", "Airy wave Phi(x+z)"
    BESSEL = "bessel", "Bessel wave Phi(xz)"
    Q_BESSEL = "q_bessel", "q-Bessel wave Phi(xz)"
    HERMITE = "hermite", "Hermite sequence 2^-n H_n(x)"


def _low(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _plus(bound, amount):
    return None if bound is None else bound + amount


@dataclass(frozen=True)
class Window:
    """Down-closed set of exponent cells: ``i <= x``, ``j <= z``, ``i + j <= total``."""

    x: int = None
    z: int = None
    total: int = None

    def shifted(self, dx=0, dz=0):
        return Window(_plus(self.x, dx), _plus(self.z, dz), _plus(self.total, dx + dz))

    def meet(self, other):
        return Window(_low(self.x, other.x), _low(self.z, other.z), _low(self.total, other.total))

    def transposed(self):
        return Window(self.z, self.x, self.total)

    def contains(self, i, j):
        return (
            (self.x is None or i <= self.x)
            and (self.z is None or j <= self.z)
            and (self.total is None or i + j <= self.total)
        )

    def x_limit(self, j):
        limit = _low(self.x, None if self.total is None else self.total - j)
        if limit is None:
            raise WindowError("the window does not bound the x exponents")
        return limit

    def z_limit(self, i):
        return self.transposed().x_limit(i)

    def __str__(self):
        parts = []
        if self.x is not None:
            parts.append(f"i<={self.x}")
        if self.z is not None:
            parts.append(f"j<={self.z}")
        if self.total is not None:
            parts.append(f"i+j<={self.total}")
        return ", ".join(parts) or "unbounded"


@dataclass(frozen=True, eq=False)
class GridWave:
    coefficients: dict
    floor: tuple
    window: Window
    kind: str = WaveKind.GRID
    x_offset: object = QQ.zero
    z_offset: object = QQ.zero
    x_qpower: object = None
    z_qpower: object = None
    q: object = None
    params: dict = field(default_factory=dict)
    order: int = 0
    x_var: str = "x"
    z_var: str = "z"

    def __post_init__(self):
        kept = {
            cell: value
            for cell, value in self.coefficients.items()
            if value and self.window.contains(*cell)
        }
        object.__setattr__(self, "coefficients", MappingProxyType(kept))
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    def cells(self):
        i0, j0 = self.floor
        if not self.window.contains(i0, j0):
            return
        for j in range(j0, self.window.z_limit(i0) + 1):
            for i in range(i0, self.window.x_limit(j) + 1):
                yield i, j

    def coefficient(self, i, j):
        if not self.window.contains(i, j):
            raise WindowError(f"coefficient ({i}, {j}) lies outside the window {self.window}")
        return self.coefficients.get((i, j), QQ.zero)

    def transposed(self):
        return replace(
            self,
            coefficients={(j, i): c for (i, j), c in self.coefficients.items()},
            floor=(self.floor[1], self.floor[0]),
            window=self.window.transposed(),
            x_offset=self.z_offset,
            z_offset=self.x_offset,
            x_qpower=self.z_qpower,
            z_qpower=self.x_qpower,
            x_var=self.z_var,
            z_var=self.x_var,
        )

    def _derived(self, coefficients, floor, window):
        return replace(self, coefficients=coefficients, floor=floor, window=window)

    def side_variable(self, side):
        if side == Side.X:
            return self.x_var
        if side == Side.Z:
            return self.z_var
        raise ParameterError("grid waves have an x-side and a z-side only")


@dataclass(frozen=True, eq=False)
class SequenceWave:
    values: dict
    floor: int
    bound: int
    kind: str = WaveKind.SEQUENCE
    params: dict = field(default_factory=dict)
    order: int = 0
    x_var: str = "x"
    n_var: str = "n"

    def __post_init__(self):
        kept = {
            n: value
            for n, value in self.values.items()
            if not value.is_zero and self.floor <= n <= self.bound
        }
        object.__setattr__(self, "values", MappingProxyType(kept))
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    def cells(self):
        return range(self.floor, self.bound + 1)

    def value(self, n):
        if n > self.bound:
            raise WindowError(f"psi_{n} lies beyond the known range n <= {self.bound}")
        return self.values.get(n, Scalar.zero())

    @property
    def window(self):
        return f"{self.floor}<=n<={self.bound}"

    def side_variable(self, side):
        if side == Side.X:
            return self.x_var
        if side == Side.N:
            return self.n_var
        raise ParameterError("sequence waves have an x-side and an n-side only")


# -- wave construction -----------------------------------------------------


def _rational(params, key):
    try:
        return to_rational(params[key])
    except KeyError:
        raise ParameterError(f"the wave needs the parameter {key}") from None


def _integer(params, key, default=None):
    value = params.get(key, default)
    if value is None:
        raise ParameterError(f"the wave needs the parameter {key}")
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ParameterError(f"{key} must be an integer, got {value!r}") from None


def _rationals(params, key, length=None):
    values = [to_rational(v) for v in params.get(key, ())]
    if length is not None and len(values) != length:
        raise ParameterError(f"{key} needs {length} entries, got {len(values)}")
    return values


def _index(params, N):
    k = _integer(params, "k", 1)
    if not 1 <= k <= N:
        raise ParameterError(f"the branch index k must lie in 1..{N}, got {k}")
    return k - 1


def q_pochhammer(q, n):
    """(q;q)_n = (1-q)(1-q^2)...(1-q^n)."""
    value = QQ.one
    for m in range(1, n + 1):
        value *= QQ.one - q**m
    return value


def _diagonal(values, order, **fields):
    return GridWave(
        {(m, m): c for m, c in values.items()},
        floor=(0, 0),
        window=Window(order, order),
        kind=WaveKind.CORE_PRODUCT,
        order=order,
        **fields,
    )


def exp_xz(order, values=None):
    coeffs = {k: QQ(1, factorial(k)) for k in range(order + 1)}
    return _diagonal(coeffs, order, params=values or {})


def q_exp_xz(q, order, values=None):
    coeffs = {}
    for k in range(order + 1):
        pivot = q_pochhammer(q, k)
        if not pivot:
            raise RecursionPivotError(k, "(q;q)_k vanishes")
        coeffs[k] = QQ.one / pivot
    params = dict(values or {}, q=q)
    return _diagonal(coeffs, order, q=q, x_qpower=QQ.one, z_qpower=QQ.one, params=params)


def airy_core(N, alphas, order):
    """Coefficients of Phi with Phi^(N) + sum alpha_i Phi^(N-i) = s Phi, c_0 = 1."""
    c = [QQ.one] + [QQ.zero] * (N - 1)
    for n in range(0, order - N + 1):
        acc = c[n - 1] if n >= 1 else QQ.zero
        for i, alpha in enumerate(alphas, start=2):
            m = n + N - i
            acc -= alpha * c[m] * QQ(factorial(m), factorial(n))
        c.append(acc * QQ(factorial(n), factorial(n + N)))
    return c[: order + 1]


def airy_wave(N, alphas, order, values=None):
    core = airy_core(N, alphas, order)
    coeffs = {}
    for s, c in enumerate(core):
        if c:
            for i in range(s + 1):
                coeffs[(i, s - i)] = c * comb(s, i)
    return GridWave(
        coeffs,
        floor=(0, 0),
        window=Window(total=order),
        kind=WaveKind.CORE_SUM,
        order=order,
        params=values or {},
    )


def bessel_core(N, betas, k, order):
    """a_m with L_beta Phi(xz) = z^N Phi(xz), Phi = t^beta_k sum a_m t^m."""
    a = {0: QQ.one}
    for m in range(N, order + 1, N):
        pivot = QQ.one
        for beta in betas:
            pivot *= betas[k] + m - beta
        if not pivot:
            raise RecursionPivotError(m, "indicial roots differ by an integer")
        a[m] = a[m - N] / pivot
    return a


def bessel_wave(N, betas, k, order, values=None):
    a = bessel_core(N, betas, k, order)
    return _diagonal(a, order, x_offset=betas[k], z_offset=betas[k], params=values or {})


def q_bessel_core(N, qbetas, k, q, order):
    a = {0: QQ.one}
    for m in range(N, order + 1, N):
        pivot = QQ.one
        for u in qbetas:
            pivot *= qbetas[k] * q**m - u
        if not pivot:
            raise RecursionPivotError(m, "q-indicial roots collide")
        a[m] = a[m - N] / pivot
    return a


def q_bessel_wave(N, qbetas, k, q, order, values=None):
    a = q_bessel_core(N, qbetas, k, q, order)
    params = dict(values or {}, q=q)
    return _diagonal(
        a,
        order,
        x_offset=None,
        z_offset=None,
        x_qpower=qbetas[k],
        z_qpower=qbetas[k],
        q=q,
        params=params,
    )


def hermite_wave(order, values=None):
    """psi_n = 2^-n H_n(x) for 0 <= n <= order."""
    x = Scalar.symbol("x")
    H = [Scalar.one(), x * 2]
    for n in range(1, order):
        H.append(x * 2 * H[n] - H[n - 1] * (2 * n))
    psi = {n: H[n] * Scalar.const(QQ(1, 2**n)) for n in range(order + 1)}
    return SequenceWave(psi, floor=0, bound=order, order=order, params=values or {})


def make_wave(family, params=None, order=None, values=None):
    """Build the truncated wave of ``family``.

    ``params`` holds the family data (``q``, ``N``, ``alphas``, ``betas``,
    ``qbetas``, ``k``); ``values`` instantiates the symbols of the operators
    that will act on the wave.
    """
    params = dict(params or {})
    order = conf.get("DEFAULT_WAVE_ORDER") if order is None else int(order)
    if order < 1:
        raise ParameterError("the truncation order must be at least 1")
    values = {name: to_rational(v) for name, v in (values or {}).items()}
    try:
        family = WaveFamily(family)
    except ValueError:
        raise ParameterError(f"unknown wave family: {family}") from None
    if family == WaveFamily.EXP_XZ:
        wave = exp_xz(order, values)
    elif family == WaveFamily.Q_EXP_XZ:
        wave = q_exp_xz(_rational(params, "q"), order, values)
    elif family == WaveFamily.AIRY:
        N = _integer(params, "N", 2)
        if N < 2:
            raise ParameterError("Airy waves need N >= 2")
        wave = airy_wave(N, _rationals(params, "alphas", N - 2), order, values)
    elif family == WaveFamily.BESSEL:
        N = _integer(params, "N")
        betas = _rationals(params, "betas", N)
        wave = bessel_wave(N, betas, _index(params, N), order, values)
    elif family == WaveFamily.Q_BESSEL:
        N = _integer(params, "N")
        qbetas = _rationals(params, "qbetas", N)
        q = _rational(params, "q")
        wave = q_bessel_wave(N, qbetas, _index(params, N), q, order, values)
    else:
        wave = hermite_wave(order, values)
    logger.debug("built %s wave of order %d", family.value, order)
    return wave


# -- operator action -------------------------------------------------------


def _laurent(numer, denom, count):
    """First ``count`` Laurent coefficients of numer/denom at 0 and the valuation."""
    vn = min(numer)
    vd = min(denom)
    n = [numer.get(vn + m, QQ.zero) for m in range(count)]
    d = [denom.get(vd + m, QQ.zero) for m in range(count)]
    series = []
    for m in range(count):
        acc = n[m]
        for l in range(1, m + 1):
            if d[l]:
                acc -= d[l] * series[m - l]
        series.append(acc / d[0])
    return series, vn - vd


def _qpower(offset, qpower, q):
    if q is None:
        raise ParameterError("a dilation acts only on waves with a numeric q")
    if qpower is not None:
        return qpower
    if offset is None or offset.denominator != 1:
        raise ParameterError("q^offset is unknown for this wave")
    return q ** int(offset)


def _differentiate_x(w):
    if w.x_offset is None:
        raise ParameterError("d needs a known exponent offset")
    coeffs = {}
    for (i, j), c in w.coefficients.items():
        factor = i + w.x_offset
        if factor:
            coeffs[(i - 1, j)] = c * factor
    i0, j0 = w.floor
    return w._derived(coeffs, (i0 - 1, j0), w.window.shifted(dx=-1))


def _dilate_x(w, power):
    base = _qpower(w.x_offset, w.x_qpower, w.q)
    coeffs = {(i, j): c * (base * w.q**i) ** power for (i, j), c in w.coefficients.items()}
    return w._derived(coeffs, w.floor, w.window)


def _multiply_x(w, coeff, var):
    if coeff.is_one:
        return w
    numer, denom = coeff.univariate(var)
    i0, j0 = w.floor
    if not w.window.contains(i0, j0):
        raise WindowError("empty reliable window")
    count = w.window.x_limit(j0) - i0 + 1
    series, v = _laurent(numer, denom, count)
    coeffs = {}
    for (i, j), c in w.coefficients.items():
        for t in range(w.window.x_limit(j) - i + 1):
            if series[t]:
                key = (i + v + t, j)
                coeffs[key] = coeffs.get(key, QQ.zero) + series[t] * c
    return w._derived(coeffs, (i0 + v, j0), w.window.shifted(dx=v))


def _combine(a, b, sign=1):
    """``a + sign*b`` on the common window."""
    if isinstance(a, SequenceWave):
        values = dict(a.values)
        for n, value in b.values.items():
            values[n] = values.get(n, Scalar.zero()) + value * sign
        return replace(a, values=values, floor=min(a.floor, b.floor), bound=min(a.bound, b.bound))
    for attr in ("x_offset", "z_offset", "x_qpower", "z_qpower", "q"):
        if getattr(a, attr) != getattr(b, attr):
            raise ParameterError(f"cannot combine waves with different {attr}")
    coeffs = dict(a.coefficients)
    for cell, c in b.coefficients.items():
        coeffs[cell] = coeffs.get(cell, QQ.zero) + c * sign
    floor = (min(a.floor[0], b.floor[0]), min(a.floor[1], b.floor[1]))
    return a._derived(coeffs, floor, a.window.meet(b.window))


def _act_grid_x(op, w):
    rule = op.rule
    result = None
    for power, coeff in sorted(op.terms.items()):
        if rule.kind == RuleKind.DIFFERENTIAL:
            part = w
            for _ in range(power):
                part = _differentiate_x(part)
        elif rule.kind == RuleKind.DILATION:
            part = _dilate_x(w, power) if power else w
        else:
            raise ParameterError("shift operators act on the n-side of sequence waves")
        part = _multiply_x(part, coeff, rule.var)
        result = part if result is None else _combine(result, part)
    if result is None:
        return w._derived({}, w.floor, w.window)
    logger.debug("window %s -> %s", w.window, result.window)
    return result


def _act_sequence_n(op, w):
    powers = list(op.terms)
    if not powers:
        return replace(w, values={})
    # psi_n below the floor is taken as zero, but no result is produced there
    top = max(max(powers), 0)
    values = {}
    for n in range(w.floor, w.bound - top + 1):
        total = Scalar.zero()
        for power, coeff in op.terms.items():
            if n + power < w.floor:
                continue
            factor = coeff.substitute(op.rule.var, n)
            if not factor.is_constant:
                raise ParameterError(f"n-side coefficient {coeff} is not a function of n alone")
            total = total + factor * w.value(n + power)
        values[n] = total
    return replace(w, values=values, bound=w.bound - top)


def _prepare(op, w):
    op = op.instantiate(w.params)
    if op.rule.kind == RuleKind.DILATION:
        q = op.rule.q
        if getattr(w, "q", None) is None or not q.is_constant or q.to_rational() != w.q:
            raise ParameterError(f"the operator's q ({q}) does not match the wave")
    return op


def _as_operator(value, w, side):
    """Functions act as degree-0 operators on the given side."""
    if isinstance(value, OreOperator):
        return value
    var = w.side_variable(side)
    return OreOperator.scalar(OreRule.differential(var), Scalar.coerce(value))


def act(op, w, side):
    side = Side(side)
    var = w.side_variable(side)
    op = _as_operator(op, w, side)
    if op.rule.var != var:
        if not op.is_scalar or op.coefficient(0).depends_on(op.rule.var):
            raise ParameterError(f"operator in {op.rule.var} cannot act on the {side.label}")
        op = OreOperator.scalar(OreRule.differential(var), op.coefficient(0))
    op = _prepare(op, w)
    if isinstance(w, SequenceWave):
        if side == Side.X:
            values = {n: apply_to_rational(op, w.value(n)) for n in w.cells()}
            return replace(w, values=values)
        if op.rule.kind != RuleKind.SHIFT and not op.is_scalar:
            raise ParameterError("the n-side takes shift operators")
        return _act_sequence_n(op, w)
    if side == Side.X:
        return _act_grid_x(op, w)
    return _act_grid_x(op, w.transposed()).transposed()


def transform_wave(w, actions):
    """Apply ``(operator, side)`` pairs to ``w`` in order, e.g. ``psi -> z^-1 P psi``."""
    for op, side in actions:
        w = act(op, w, side)
    return w


# -- residual checks -------------------------------------------------------


@dataclass(frozen=True)
class ResidualCheck:
    label: str
    window: str
    floor: object
    cells: int
    nonzero: tuple

    @property
    def passed(self):
        return not self.nonzero


@dataclass(frozen=True)
class ResidualReport:
    checks: tuple

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def __add__(self, other):
        return ResidualReport(self.checks + other.checks)


def residual(label, w):
    """Every known coefficient of ``w`` that is not zero."""
    cells = list(w.cells())
    if not cells:
        raise WindowError(f"empty reliable window for {label}: raise the truncation order")
    if isinstance(w, SequenceWave):
        nonzero = tuple((n, w.value(n)) for n in cells if not w.value(n).is_zero)
    else:
        nonzero = tuple((cell, w.coefficients[cell]) for cell in cells if cell in w.coefficients)
    return ResidualCheck(label, str(w.window), w.floor, len(cells), nonzero)


def _default_sides(w):
    spectral = Side.N if isinstance(w, SequenceWave) else Side.Z
    return {"L": Side.X, "f": spectral, "Lambda": spectral, "theta": Side.X}


def check_pair(L, f, Lambda, theta, w, sides=None):
    """Residuals of ``(L - f) psi`` and ``(Lambda - theta) psi``."""
    sides = {**_default_sides(w), **(sides or {})}
    checks = []
    if L is not None:
        diff = _combine(act(L, w, sides["L"]), act(f, w, sides["f"]), -1)
        checks.append(residual("L psi = f psi", diff))
    if Lambda is not None:
        diff = _combine(act(Lambda, w, sides["Lambda"]), act(theta, w, sides["theta"]), -1)
        checks.append(residual("Lambda psi = theta psi", diff))
    return ResidualReport(tuple(checks))


def check_module_relation(A, B, w, sides=(Side.X, Side.Z), label=None):
    """``A psi = B psi`` with A and B acting on the given sides."""
    diff = _combine(act(A, w, sides[0]), act(B, w, sides[1]), -1)
    return ResidualReport((residual(label or f"{A} ~ {B}", diff),))


def check_triple_relations(triple, w):
    """``g psi = b(g) psi`` for every source generator of ``triple``."""
    spectral = Side.N if isinstance(w, SequenceWave) else Side.Z
    report = ResidualReport(())
    for gen, image in triple.b.source.images.items():
        target = triple.b.image(gen)
        report = report + check_module_relation(
            image, target, w, (Side.X, spectral), label=f"{gen} psi = b({gen}) psi"
        )
    return report


def check_darboux_wave(result, w, sides=None):
    """Check ``L_bar P psi = f P psi`` and, when known, ``Lambda_bar P psi = theta P psi``."""
    sides = {**_default_sides(w), **(sides or {})}
    psi_bar = act(result.P, w, Side.X)
    checks = []
    if result.f is not None:
        diff = _combine(act(result.L_bar, psi_bar, Side.X), act(result.f, psi_bar, sides["f"]), -1)
        checks.append(residual("L_bar psi_bar = f psi_bar", diff))
    if result.Lambda_bar is not None and result.theta is not None:
        diff = _combine(
            act(result.Lambda_bar, psi_bar, sides["Lambda"]),
            act(result.theta, psi_bar, Side.X),
            -1,
        )
        checks.append(residual("Lambda_bar psi_bar = theta psi_bar", diff))
    return ResidualReport(tuple(checks))
