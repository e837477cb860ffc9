"""Presented algebras: generator words, realizations and anti-isomorphisms.

Elements of the algebra B_psi are entered as ``GenWord`` linear combinations
of words in named generators.  A ``Realization`` evaluates words as Ore
operators, and an ``AntiIso`` maps source words to target operators by
reversing each word, sending every generator to its image word and applying
any ad-exponential twists.
"""

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from types import MappingProxyType

from .exceptions import (
    DefinitionError,
    RuleMismatchError,
    SpectralMismatchError,
    UnknownGeneratorError,
)
from .ore import OreOperator
from .scalars import Scalar

logger = logging.getLogger(__name__)


class GenWord:
    """Immutable linear combination of generator words with Scalar coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        cleaned = {}
        for word, coeff in (terms or {}).items():
            coeff = Scalar.coerce(coeff)
            if not coeff.is_zero:
                cleaned[tuple(word)] = coeff
        self._terms = cleaned
        self._hash = None

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({(): Scalar.one()})

    @classmethod
    def scalar(cls, value):
        return cls({(): Scalar.coerce(value)})

    @classmethod
    def generator(cls, name):
        return cls({(name,): Scalar.one()})

    @classmethod
    def word(cls, *letters):
        return cls({tuple(letters): Scalar.one()})

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @property
    def is_zero(self):
        return not self._terms

    @property
    def is_scalar(self):
        return all(not word for word in self._terms)

    def scalar_part(self):
        if not self.is_scalar:
            raise DefinitionError(f"{self} is not a scalar word")
        return self._terms.get((), Scalar.zero())

    def generators(self):
        return {letter for word in self._terms for letter in word}

    def _lift(self, value):
        if isinstance(value, GenWord):
            return value
        try:
            return GenWord.scalar(value)
        except TypeError:
            return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for word, coeff in other._terms.items():
            terms[word] = terms[word] + coeff if word in terms else coeff
        return GenWord(terms)

    __radd__ = __add__

    def __neg__(self):
        return GenWord({word: -coeff for word, coeff in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        terms = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                word = w1 + w2
                value = c1 * c2
                terms[word] = terms[word] + value if word in terms else value
        return GenWord(terms)

    def __rmul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other * self

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise DefinitionError(f"words only take non-negative integer powers, got {exponent!r}")
        result = GenWord.one()
        for _ in range(exponent):
            result = result * self
        return result

    def instantiate(self, values):
        return GenWord({word: coeff.instantiate(values) for word, coeff in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, GenWord):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"GenWord({self})"

    def __str__(self):
        from .formatting import format_word

        return format_word(self)


@dataclass(frozen=True, eq=False)
class Realization:
    """Generator name -> operator, all in one Ore algebra."""

    rule: object
    images: dict

    def __post_init__(self):
        for name, image in self.images.items():
            if image.rule != self.rule:
                raise RuleMismatchError(self.rule, image.rule)
        object.__setattr__(self, "images", MappingProxyType(dict(self.images)))

    @property
    def generators(self):
        return tuple(self.images)

    def image(self, name):
        try:
            return self.images[name]
        except KeyError:
            raise UnknownGeneratorError(name) from None


def _evaluate(word, images_for, rule):
    """Linear extension of word products; ``images_for`` maps a word to its letters' operators."""
    cache = {(): OreOperator.one(rule)}

    def product(letters):
        if letters not in cache:
            cache[letters] = product(letters[:-1]) * images_for(letters[-1])
        return cache[letters]

    result = OreOperator.zero(rule)
    for letters, coeff in word.terms.items():
        result = result + coeff * product(letters)
    return result


def realize(word, realization):
    return _evaluate(word, realization.image, realization.rule)


@dataclass(frozen=True, eq=False)
class AntiIso:
    """A bispectral anti-isomorphism given on generators.

    ``twists`` are applied after the plain image, first to last, so the
    effective map is ``t_k o ... o t_1 o b``.
    """

    source: Realization
    target: Realization
    images: dict
    relations: tuple = ()
    twists: tuple = ()
    name: str = ""

    def __post_init__(self):
        missing = [g for g in self.source.generators if g not in self.images]
        if missing:
            raise DefinitionError(f"no image given for source generators {missing}")
        for gen, word in self.images.items():
            if gen not in self.source.images:
                raise UnknownGeneratorError(gen)
            for letter in word.generators():
                if letter not in self.target.images:
                    raise UnknownGeneratorError(letter)
        object.__setattr__(self, "images", MappingProxyType(dict(self.images)))
        object.__setattr__(self, "relations", tuple(self.relations))
        object.__setattr__(self, "twists", tuple(self.twists))

    @property
    def source_rule(self):
        return self.source.rule

    @property
    def target_rule(self):
        return self.target.rule

    @cached_property
    def effective_images(self):
        images = {}
        for gen, word in self.images.items():
            op = realize(word, self.target)
            for twist in self.twists:
                op = twist.apply(op)
            images[gen] = op
        return MappingProxyType(images)

    def image(self, gen):
        try:
            return self.effective_images[gen]
        except KeyError:
            raise UnknownGeneratorError(gen) from None

    def with_twist(self, twist):
        return replace(self, twists=self.twists + (twist,))

    def verify_relations(self):
        """``[(lhs, rhs, holds)]`` for every registered relation."""
        return [(lhs, rhs, check_relation(self, lhs, rhs)) for lhs, rhs in self.relations]


def apply_antiiso(b, word):
    """b(w): reverse each word and multiply the (twisted) generator images."""
    reversed_word = GenWord({tuple(reversed(letters)): c for letters, c in word.terms.items()})
    return _evaluate(reversed_word, b.image, b.target_rule)


def check_relation(b, lhs, rhs):
    source_ok = realize(lhs, b.source) == realize(rhs, b.source)
    target_ok = apply_antiiso(b, lhs) == apply_antiiso(b, rhs)
    if not (source_ok and target_ok):
        logger.debug(
            "relation %s = %s fails (source %s, target %s)", lhs, rhs, source_ok, target_ok
        )
    return source_ok and target_ok


@dataclass(frozen=True, eq=False)
class BispectralTriple:
    """An anti-isomorphism with its designated witnesses.

    ``theta`` is a source word realized as a nonzero function; ``L`` is a
    source word with ``b(L) = f`` where ``f`` is a target word realized as a
    nonzero function.
    """

    name: str
    b: AntiIso
    theta: GenWord
    L: GenWord
    f: GenWord
    description: str = ""
    parameters: dict = field(default_factory=dict)
    wave: dict = None
    definition: dict = None

    @cached_property
    def Lambda(self):
        return apply_antiiso(self.b, self.theta)

    @cached_property
    def L_operator(self):
        return realize(self.L, self.b.source)

    @cached_property
    def f_operator(self):
        return realize(self.f, self.b.target)

    @cached_property
    def theta_operator(self):
        return realize(self.theta, self.b.source)

    def check_witnesses(self):
        """``[(label, holds)]`` for the witness conditions of a bispectral triple."""
        theta = self.theta_operator
        f = self.f_operator
        return [
            ("theta is a nonzero function", theta.is_scalar and not theta.is_zero),
            ("f is a nonzero function", f.is_scalar and not f.is_zero),
            ("b(L) = f", apply_antiiso(self.b, self.L) == f),
        ]

    def require_witnesses(self):
        failed = [label for label, ok in self.check_witnesses() if not ok]
        if failed:
            raise SpectralMismatchError(f"triple {self.name}: {', '.join(failed)}")

    def with_target_twist(self, twist):
        return replace(self, b=self.b.with_twist(twist))
