"""Expression language for scalars, operators and generator words.

Grammar (explicit ``*`` everywhere, integer exponents only)::

    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "/") unary)*
    unary := ("-" | "+") unary | power
    power := atom ("^" ["-"] INTEGER | "^" "(" ["-"] INTEGER ")")?
    atom  := INTEGER | NAME | "(" expr ")"

What a name means is decided by the context.  In an operator context the
main variable is multiplication by that variable, ``d`` is the derivative
(the q-derivative in a dilation context), ``D`` is ``x*d`` (``Dq`` in a
dilation context), ``Dq``, ``T`` and ``Tinv`` are the Ore generators, and any
other name is a parameter.  Division is only by functions and multiplies on
the right.
"""

import re
from dataclasses import dataclass, field

from .exceptions import ParseError, UnknownSymbolError
from .ore import OreOperator, OreRule, RuleKind
from .presented import GenWord
from .scalars import Scalar

TOKEN = re.compile(r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")

RESERVED = frozenset({"d", "D", "Dq", "T", "Tinv"})


def tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = TOKEN.match(text, pos)
        if match is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class ScalarContext:
    """Every name is a symbol."""

    def __init__(self, parameters=None):
        self.parameters = parameters

    def number(self, value):
        return Scalar.const(value)

    def name(self, ident, position):
        if self.parameters is not None and ident not in self.parameters:
            raise UnknownSymbolError(ident, position)
        return Scalar.symbol(ident)

    def to_scalar(self, value):
        return value


@dataclass
class OperatorContext:
    rule: OreRule
    definitions: dict = field(default_factory=dict)
    parameters: frozenset = None

    def number(self, value):
        return OreOperator.scalar(self.rule, value)

    def name(self, ident, position):
        if ident in self.definitions:
            return self.definitions[ident]
        rule = self.rule
        if ident == rule.var:
            return OreOperator.variable(rule)
        if ident in RESERVED:
            return self._generator(ident, position)
        if self.parameters is not None and ident not in self.parameters:
            raise UnknownSymbolError(ident, position)
        return OreOperator.scalar(rule, Scalar.symbol(ident))

    def _generator(self, ident, position):
        from .families import euler

        rule = self.rule
        kind = rule.kind
        if kind == RuleKind.DIFFERENTIAL and ident in ("d", "D"):
            return OreOperator.generator(rule) if ident == "d" else euler(rule)
        if kind == RuleKind.DILATION and ident in ("D", "Dq"):
            return OreOperator.generator(rule)
        if kind == RuleKind.DILATION and ident == "d":
            return rule.variable ** -1 * (OreOperator.generator(rule) - 1)
        if kind == RuleKind.SHIFT and ident in ("T", "Tinv"):
            return OreOperator.generator(rule, 1 if ident == "T" else -1)
        raise UnknownSymbolError(ident, position)

    def to_scalar(self, value):
        if not value.is_scalar:
            return None
        return value.coefficient(0)


@dataclass
class WordContext:
    generators: frozenset
    definitions: dict = field(default_factory=dict)
    parameters: frozenset = None

    def number(self, value):
        return GenWord.scalar(value)

    def name(self, ident, position):
        if ident in self.definitions:
            return self.definitions[ident]
        if ident in self.generators:
            return GenWord.generator(ident)
        if ident in RESERVED or (self.parameters is not None and ident not in self.parameters):
            raise UnknownSymbolError(ident, position)
        return GenWord.scalar(Scalar.symbol(ident))

    def to_scalar(self, value):
        if not value.is_scalar:
            return None
        return value.scalar_part()


class _Parser:
    def __init__(self, text, context):
        self.tokens = tokenize(text)
        self.index = 0
        self.context = context

    @property
    def current(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def accept(self, op):
        kind, value, _ = self.current
        if kind == "op" and value == op:
            self.index += 1
            return True
        return False

    def expect(self, op):
        if not self.accept(op):
            _, value, pos = self.current
            found = repr(value) if value else "end of input"
            raise ParseError(f"expected {op!r}, found {found}", pos)

    def parse(self):
        value = self.expr()
        kind, token, pos = self.current
        if kind != "end":
            raise ParseError(f"unexpected {token!r}", pos)
        return value

    def expr(self):
        value = self.term()
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            if self.accept("*"):
                value = value * self.unary()
            elif self.accept("/"):
                pos = self.current[2]
                divisor = self.context.to_scalar(self.unary())
                if divisor is None:
                    raise ParseError("division is only by functions", pos)
                value = value * divisor.inverse()
            else:
                return value

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if not self.accept("^"):
            return base
        exponent = self.exponent()
        if exponent < 0:
            scalar = self.context.to_scalar(base)
            if scalar is not None:
                return self.context.number(1) * scalar.inverse() ** (-exponent)
        return base**exponent

    def exponent(self):
        parenthesized = self.accept("(")
        sign = -1 if self.accept("-") else 1
        kind, value, pos = self.advance()
        if kind != "number":
            raise ParseError("exponents must be integers", pos)
        if parenthesized:
            self.expect(")")
        return sign * int(value)

    def atom(self):
        kind, value, pos = self.advance()
        if kind == "number":
            return self.context.number(int(value))
        if kind == "name":
            return self.context.name(value, pos)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        found = repr(value) if value else "end of input"
        raise ParseError(f"unexpected {found}", pos)


def parse(text, context):
    return _Parser(text, context).parse()


def parse_operator(text, context):
    """Parse into an OreOperator (operator context) or a GenWord (word context)."""
    return parse(text, context)


def parse_scalar(text, parameters=None):
    return parse(text, ScalarContext(parameters))


BASIC_CONTEXTS = {
    "weyl": lambda: OreRule.differential("x"),
    "weyl_z": lambda: OreRule.differential("z"),
    "q": lambda: OreRule.dilation("x", "q"),
    "q_z": lambda: OreRule.dilation("z", "q"),
    "shift": lambda: OreRule.shift("n"),
}


def rule_for(name):
    try:
        return BASIC_CONTEXTS[name]()
    except KeyError:
        raise UnknownSymbolError(name) from None


def context_for(name, definitions=None):
    """Context by name: ``scalar`` or one of the basic operator contexts."""
    if name == "scalar":
        return ScalarContext()
    return OperatorContext(rule_for(name), dict(definitions or {}))
