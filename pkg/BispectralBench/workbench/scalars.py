"""Exact rational functions over QQ in named symbols.

A ``Scalar`` is a reduced fraction of sparse polynomials over QQ in a sorted
tuple of symbol names, ordered graded-lexicographically.  The denominator is
monic and only symbols that actually occur are kept, so equal field elements
always share one representation and compare and hash by structure.

Which symbol plays the role of the "main" variable is decided by the Ore
rule that uses the scalar, not by the scalar itself.
"""

import logging
from functools import lru_cache

from sympy import Rational
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from .exceptions import DivisionByZeroError, ParameterError, SubstitutionError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=1024)
def polynomial_ring(names):
    return PolyRing(names, QQ, grlex)


def to_rational(value):
    """Convert an int, a ``"p/q"`` string or a QQ element to a QQ element."""
    if QQ.of_type(value):
        return value
    if isinstance(value, bool):
        raise ParameterError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, str):
        try:
            return QQ.from_sympy(Rational(value.strip()))
        except (TypeError, ValueError, SyntaxError) as exc:
            raise ParameterError(f"not a rational number: {value!r}") from exc
    if isinstance(value, Scalar):
        return value.to_rational()
    raise ParameterError(f"not a rational number: {value!r}")


def _embed(poly, positions, ring):
    width = ring.ngens
    result = ring.zero
    for monom, coeff in poly.items():
        expv = [0] * width
        for pos, exp in zip(positions, monom):
            expv[pos] += exp
        result[tuple(expv)] = coeff
    return result


def _lift(scalar, names, ring):
    if scalar.names == names:
        return scalar.numer, scalar.denom
    positions = [names.index(n) for n in scalar.names]
    return _embed(scalar.numer, positions, ring), _embed(scalar.denom, positions, ring)


def _unify(a, b):
    if a.names == b.names:
        return a.names, a.numer, a.denom, b.numer, b.denom
    names = tuple(sorted(set(a.names) | set(b.names)))
    ring = polynomial_ring(names)
    an, ad = _lift(a, names, ring)
    bn, bd = _lift(b, names, ring)
    return names, an, ad, bn, bd


def _shrink(names, numer, denom):
    if not names:
        return Scalar(names, numer, denom)
    used = [False] * len(names)
    for poly in (numer, denom):
        for monom in poly.itermonoms():
            for i, exp in enumerate(monom):
                if exp:
                    used[i] = True
    if all(used):
        return Scalar(names, numer, denom)
    keep = [i for i, flag in enumerate(used) if flag]
    small = tuple(names[i] for i in keep)
    ring = polynomial_ring(small)

    def project(poly):
        result = ring.zero
        for monom, coeff in poly.items():
            result[tuple(monom[i] for i in keep)] = coeff
        return result

    return Scalar(small, project(numer), project(denom))


def _build(names, numer, denom, reduce=True):
    """Canonicalize ``numer/denom``: cancel, make denom monic, drop unused symbols."""
    if not denom:
        raise DivisionByZeroError("denominator vanishes")
    if not numer:
        return Scalar.zero()
    if reduce and not denom.is_ground and not numer.is_ground:
        numer, denom = numer.cancel(denom)
    lead = denom.LC
    if lead != QQ.one:
        numer = numer.quo_ground(lead)
        denom = denom.quo_ground(lead)
    return _shrink(names, numer, denom)


def _coerce(value):
    if isinstance(value, Scalar):
        return value
    if isinstance(value, int) and not isinstance(value, bool) or QQ.of_type(value):
        return Scalar.const(value)
    return None


class Scalar:
    """Immutable element of QQ(symbols)."""

    __slots__ = ("names", "numer", "denom", "_hash")

    def __init__(self, names, numer, denom):
        # Callers guarantee canonical form; use the constructors below.
        self.names = names
        self.numer = numer
        self.denom = denom
        self._hash = None

    @classmethod
    def zero(cls):
        ring = polynomial_ring(())
        return cls((), ring.zero, ring.one)

    @classmethod
    def one(cls):
        ring = polynomial_ring(())
        return cls((), ring.one, ring.one)

    @classmethod
    def const(cls, value):
        value = to_rational(value)
        ring = polynomial_ring(())
        numer = ring.ground_new(value) if value else ring.zero
        return cls((), numer, ring.one)

    @classmethod
    def symbol(cls, name):
        ring = polynomial_ring((name,))
        return cls((name,), ring.gens[0], ring.one)

    @classmethod
    def coerce(cls, value):
        scalar = _coerce(value)
        if scalar is None:
            if isinstance(value, str):
                return cls.const(value)
            raise TypeError(f"cannot convert {value!r} to Scalar")
        return scalar

    # -- predicates -------------------------------------------------------

    @property
    def is_zero(self):
        return not self.numer

    @property
    def is_one(self):
        return not self.names and self.numer.is_one

    @property
    def is_constant(self):
        return not self.names

    @property
    def is_polynomial(self):
        return self.denom.is_one

    @property
    def free_symbols(self):
        return frozenset(self.names)

    def depends_on(self, name):
        return name in self.names

    def is_monomial(self):
        """True for ``c * product of symbol powers`` with a constant denominator."""
        return self.is_polynomial and len(self.numer) <= 1

    def to_rational(self):
        if self.names:
            raise ParameterError(f"{self!r} is not a rational constant")
        return self.numer.get(self.numer.ring.zero_monom, QQ.zero)

    def degree(self, name):
        """Degree of the numerator in ``name`` (0 when absent)."""
        if name not in self.names:
            return 0
        i = self.names.index(name)
        return max(monom[i] for monom in self.numer.itermonoms())

    def numerator(self):
        return Scalar(self.names, self.numer, polynomial_ring(self.names).one)._reshaped()

    def denominator(self):
        return Scalar(self.names, self.denom, polynomial_ring(self.names).one)._reshaped()

    def _reshaped(self):
        return _shrink(self.names, self.numer, self.denom)

    def terms(self):
        """Numerator terms as ``(coeff, ((name, exp), ...))``, leading term first."""
        return _named_terms(self.names, self.numer)

    def denominator_terms(self):
        return _named_terms(self.names, self.denom)

    def univariate(self, var):
        """Numerator and denominator as ``{exponent: coeff}`` in the single symbol ``var``."""
        extra = set(self.names) - {var}
        if extra:
            raise ParameterError(
                f"expected a function of {var} only, found symbols {sorted(extra)}"
            )
        if not self.names:
            return {0: self.to_rational()} if self.numer else {}, {0: QQ.one}
        return (
            {monom[0]: coeff for monom, coeff in self.numer.items()},
            {monom[0]: coeff for monom, coeff in self.denom.items()},
        )

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        names, an, ad, bn, bd = _unify(self, other)
        if ad.is_one and bd.is_one:
            return _build(names, an + bn, ad, reduce=False)
        if ad == bd:
            return _build(names, an + bn, ad)
        return _build(names, an * bd + bn * ad, ad * bd)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.names, -self.numer, self.denom)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Scalar.zero()
        if other.is_one:
            return self
        if self.is_one:
            return other
        names, an, ad, bn, bd = _unify(self, other)
        if ad.is_one and bd.is_one:
            return _build(names, an * bn, ad, reduce=False)
        return _build(names, an * bn, ad * bd)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise DivisionByZeroError(f"division of {self!r} by zero")
        if other.is_one:
            return self
        names, an, ad, bn, bd = _unify(self, other)
        return _build(names, an * bd, ad * bn)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def inverse(self):
        if self.is_zero:
            raise DivisionByZeroError("zero has no inverse")
        return _build(self.names, self.denom, self.numer, reduce=False)

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            raise ParameterError(f"exponents must be integers, got {exponent!r}")
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if exponent == 0:
            return Scalar.one()
        if exponent == 1:
            return self
        # Powers of a reduced monic fraction stay reduced and monic.
        return Scalar(self.names, self.numer**exponent, self.denom**exponent)

    # -- calculus and substitution ---------------------------------------

    def derivative(self, var):
        if var not in self.names:
            return Scalar.zero()
        gen = polynomial_ring(self.names).gens[self.names.index(var)]
        dnum = self.numer.diff(gen)
        if self.denom.is_one:
            return _build(self.names, dnum, self.denom, reduce=False)
        ddenom = self.denom.diff(gen)
        return _build(self.names, dnum * self.denom - self.numer * ddenom, self.denom**2)

    def substitute(self, var, expr):
        """Replace the symbol ``var`` by ``expr`` and re-canonicalize."""
        expr = Scalar.coerce(expr)
        if var not in self.names:
            return self
        if expr.is_monomial():
            return self._substitute_monomial(var, expr)
        return self._substitute_general(var, expr)

    def instantiate(self, values):
        """Substitute several symbols by constants (or other scalars)."""
        result = self
        for name, value in values.items():
            if name in result.names:
                result = result.substitute(name, Scalar.coerce(value))
        return result

    def _target_names(self, var, expr):
        names = set(self.names) - {var}
        names |= set(expr.names)
        return tuple(sorted(names))

    def _substitute_monomial(self, var, expr):
        names = self._target_names(var, expr)
        ring = polynomial_ring(names)
        i_var = self.names.index(var)
        positions = [names.index(n) if n in names else None for n in self.names]
        if expr.is_zero:
            coeff, image = QQ.zero, (0,) * len(names)
        else:
            (emonom, coeff), = expr.numer.items()
            image = [0] * len(names)
            for name, exp in zip(expr.names, emonom):
                image[names.index(name)] += exp

        def push(poly):
            result = ring.zero
            for monom, c in poly.items():
                k = monom[i_var]
                if k and not coeff:
                    continue
                expv = [0] * len(names)
                for j, (pos, exp) in enumerate(zip(positions, monom)):
                    if j != i_var:
                        expv[pos] += exp
                if k:
                    for pos, exp in enumerate(image):
                        expv[pos] += k * exp
                    c = c * coeff**k
                key = tuple(expv)
                total = result.get(key, QQ.zero) + c
                if total:
                    result[key] = total
                elif key in result:
                    del result[key]
            return result

        denom = push(self.denom)
        if not denom:
            raise SubstitutionError(f"substituting {var} -> {expr!r} makes the denominator vanish")
        return _build(names, push(self.numer), denom)

    def _substitute_general(self, var, expr):
        names = self._target_names(var, expr)
        ring = polynomial_ring(names)
        en, ed = _lift(expr, names, ring)
        i_var = self.names.index(var)
        positions = [names.index(n) if n in names else None for n in self.names]
        num_pows = [ring.one]
        den_pows = [ring.one]

        def power(pows, base, k):
            while len(pows) <= k:
                pows.append(pows[-1] * base)
            return pows[k]

        def homogenize(poly):
            groups = {}
            for monom, c in poly.items():
                k = monom[i_var]
                expv = [0] * len(names)
                for j, (pos, exp) in enumerate(zip(positions, monom)):
                    if j != i_var:
                        expv[pos] += exp
                groups.setdefault(k, ring.zero)[tuple(expv)] = c
            top = max(groups)
            result = ring.zero
            for k, part in groups.items():
                result += part * power(num_pows, en, k) * power(den_pows, ed, top - k)
            return result, top

        numer, dn = homogenize(self.numer)
        denom, dd = homogenize(self.denom)
        if not denom:
            raise SubstitutionError(f"substituting {var} -> {expr!r} makes the denominator vanish")
        if dd >= dn:
            numer = numer * power(den_pows, ed, dd - dn)
        else:
            denom = denom * power(den_pows, ed, dn - dd)
        return _build(names, numer, denom)

    # -- comparison and display ------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.names == other.names and self.numer == other.numer and self.denom == other.denom

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.names, frozenset(self.numer.items()), frozenset(self.denom.items())))
        return self._hash

    def __bool__(self):
        return not self.is_zero

    def as_expr(self):
        """The value as a SymPy expression."""
        return self.numer.as_expr() / self.denom.as_expr()

    def __repr__(self):
        return f"Scalar({self.as_expr()})"

    def __str__(self):
        from .formatting import format_scalar

        return format_scalar(self)


def _named_terms(names, poly):
    terms = []
    for monom, coeff in poly.terms():
        powers = tuple((name, exp) for name, exp in zip(names, monom) if exp)
        terms.append((coeff, powers))
    return terms


def scalar_arith(op, a, b):
    """Field operation ``op`` in {add, sub, mul, div} on two scalars."""
    a, b = Scalar.coerce(a), Scalar.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown scalar operation: {op}")


def substitute(f, var, expr):
    return Scalar.coerce(f).substitute(var, expr)


def derivative(f, var):
    return Scalar.coerce(f).derivative(var)
