"""Canonical text for scalars, operators and generator words.

Every string produced here parses back to the same value in the matching
context of ``workbench.parser``.  Operators print in one of three styles:

``d``
    ``sum a_k * X^k`` in the rule's own symbol (``d``, ``Dq`` or ``T``).
``D``
    Powers of the Euler operator ``D = x*d`` (``Dq`` for dilation rules),
    which is how Bessel-type operators are usually read.
``factored``
    Digits of a named hint operator ``L``: ``sum r_j * L^j`` with each digit
    of lower order than ``L``, digits themselves in ``D`` form.
"""

from functools import lru_cache

from sympy.functions.combinatorial.numbers import stirling

from .exceptions import ParameterError
from .ore import OreOperator, RuleKind, adic_expansion
from .scalars import Scalar, to_rational

STYLES = ("d", "D", "factored")


def format_rational(value):
    value = to_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _monomial(powers):
    return "*".join(name if exp == 1 else f"{name}^{exp}" for name, exp in powers)


def _piece(coeff, powers):
    """``(negative, text)`` for one signed monomial."""
    negative = coeff < 0
    size = -coeff if negative else coeff
    if not powers:
        return negative, format_rational(size)
    if size == 1:
        return negative, _monomial(powers)
    return negative, f"{format_rational(size)}*{_monomial(powers)}"


def _join(pieces):
    if not pieces:
        return "0"
    text = []
    for i, (negative, body) in enumerate(pieces):
        if i == 0:
            text.append(f"-{body}" if negative else body)
        else:
            text.append(f" - {body}" if negative else f" + {body}")
    return "".join(text)


def _divide_powers(powers, by):
    exps = dict(powers)
    for name, exp in by:
        exps[name] = exps.get(name, 0) - exp
    return tuple((name, exp) for name, exp in sorted(exps.items()) if exp)


def _scalar_pieces(s):
    """Signed monomials summing to ``s``, or None when a fraction bar is needed."""
    if s.is_polynomial:
        return [_piece(c, p) for c, p in s.terms()]
    denominator = s.denominator_terms()
    if len(denominator) == 1:
        (_, by), = denominator
        return [_piece(c, _divide_powers(p, by)) for c, p in s.terms()]
    return None


def _fraction_piece(s):
    numerator = [_piece(c, p) for c, p in s.terms()]
    denominator = _join([_piece(c, p) for c, p in s.denominator_terms()])
    if len(numerator) == 1:
        negative, body = numerator[0]
        return negative, f"{body}/({denominator})"
    return False, f"({_join(numerator)})/({denominator})"


def format_scalar(s):
    pieces = _scalar_pieces(s)
    if pieces is None:
        pieces = [_fraction_piece(s)]
    return _join(pieces)


def _term_pieces(coeff, tail):
    """Pieces of ``coeff * tail``; an empty tail means the bare coefficient."""
    pieces = _scalar_pieces(coeff)
    if not tail:
        return pieces if pieces is not None else [_fraction_piece(coeff)]
    if pieces is None:
        negative, body = _fraction_piece(coeff)
        return [(negative, f"{body}*{tail}")]
    if len(pieces) == 1:
        negative, body = pieces[0]
        return [(negative, tail if body == "1" else f"{body}*{tail}")]
    return [(False, f"({_join(pieces)})*{tail}")]


def _power(name, k):
    if k == 0:
        return ""
    if k == 1:
        return name
    if k < 0 and name == "T":
        return "Tinv" if k == -1 else f"Tinv^{-k}"
    return f"{name}^{k}"


@lru_cache(maxsize=None)
def _stirling1(k, m):
    return int(stirling(k, m, kind=1, signed=True))


def euler_coefficients(a):
    """``{m: c_m}`` with ``a = sum c_m * D^m`` for ``D = x*d``."""
    if a.rule.kind != RuleKind.DIFFERENTIAL:
        raise ParameterError("Euler coefficients are computed for differential operators")
    x = a.rule.variable
    coeffs = {}
    # x^k d^k = D (D - 1) ... (D - k + 1)
    for k, ak in a.terms.items():
        scaled = ak * x ** (-k)
        for m in range(k + 1):
            s = _stirling1(k, m)
            if s:
                coeffs[m] = coeffs.get(m, Scalar.zero()) + scaled * s
    return {m: c for m, c in coeffs.items() if not c.is_zero}


def _expanded(a, style):
    """``(symbol, {power: coeff})`` for the ``d`` or ``D`` style."""
    rule = a.rule
    if style == "D" and rule.kind == RuleKind.DIFFERENTIAL:
        return "D", euler_coefficients(a)
    if style == "D" and rule.kind == RuleKind.DILATION:
        return "D", dict(a.terms)
    return rule.symbol, dict(a.terms)


def _operator_pieces(a, style):
    symbol, terms = _expanded(a, style)
    pieces = []
    for k in sorted(terms, reverse=True):
        pieces.extend(_term_pieces(terms[k], _power(symbol, k)))
    return pieces


def _hinted_pieces(a, name, hint):
    pieces = []
    digits = adic_expansion(a, hint)
    for j in reversed(range(len(digits))):
        digit = digits[j]
        if digit.is_zero:
            continue
        tail = _power(name, j)
        inner = _operator_pieces(digit, "D")
        if not tail:
            pieces.extend(inner)
        elif len(inner) == 1:
            negative, body = inner[0]
            pieces.append((negative, tail if body == "1" else f"{body}*{tail}"))
        else:
            pieces.append((False, f"({_join(inner)})*{tail}"))
    return pieces


def format_operator(a, style="d", hints=None):
    """Canonical text of ``a``; ``hints`` maps names to operators for the factored style."""
    if style not in STYLES:
        raise ParameterError(f"unknown operator style {style!r}, expected one of {STYLES}")
    if a.is_zero:
        return "0"
    if style == "factored":
        if not hints:
            return _join(_operator_pieces(a, "D"))
        # The first hint wins; the others stay available to the parser.
        name, hint = next(iter(hints.items()))
        return _join(_hinted_pieces(a, name, hint))
    return _join(_operator_pieces(a, style))


def format_word(w):
    pieces = []
    for word in sorted(w.terms, key=lambda letters: (-len(letters), letters)):
        pieces.extend(_term_pieces(w.terms[word], "*".join(word)))
    return _join(pieces)


def format_product(factors, style="d"):
    """``(F1)*(F2)*...`` for a product supplied factor by factor."""
    return "*".join(f"({format_value(f, style)})" for f in factors)


def format_value(value, style="d", hints=None):
    if isinstance(value, OreOperator):
        return format_operator(value, style, hints)
    if isinstance(value, Scalar):
        return format_scalar(value)
    from .presented import GenWord

    if isinstance(value, GenWord):
        return format_word(value)
    return str(value)
