from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings
from hypothesis import strategies as st

from workbench.definitions import load_triple
from workbench.exceptions import NilpotencyExceeded, ParameterError, RuleMismatchError
from workbench.ore import OreOperator, OreRule
from workbench.parser import context_for, parse
from workbench.presented import GenWord, apply_antiiso
from workbench.scalars import Scalar
from workbench.twist import (
    AdExp,
    ad_power,
    check_local_nilpotency,
    exp_ad,
    exp_ad_with_index,
    twist_source,
    twist_target,
)

from .strategies import polynomials, small_ints, words

WEYL = OreRule.differential("x")
d = OreOperator.generator(WEYL)
x = OreOperator.variable(WEYL)
t = Scalar.symbol("t")


def weyl_z(text):
    return parse(text, context_for("weyl_z"))


class AdExpTests(SimpleTestCase):
    def test_ad_power(self):
        self.assertEqual(ad_power(d, x**3, 3), OreOperator.scalar(WEYL, 6))
        self.assertEqual(ad_power(d, x, 0), x)
        with self.assertRaises(ParameterError):
            ad_power(d, x, -1)

    def test_translation(self):
        # exp(t ad d) is the Taylor shift x -> x + t
        result, index = exp_ad_with_index(AdExp(d, t), x**2)
        self.assertEqual(result, x**2 + 2 * t * x + t**2)
        self.assertEqual(index, 3)

    def test_zero_scale_is_the_identity(self):
        self.assertEqual(exp_ad_with_index(AdExp(x * d, 0), x), (x, 0))

    def test_non_nilpotent_operand(self):
        # ad(x d) x = x, so the series never stops
        with self.assertRaises(NilpotencyExceeded) as caught:
            exp_ad(AdExp(x * d, 1, bound=10), x)
        self.assertEqual(caught.exception.bound, 10)

    def test_bound_must_be_positive(self):
        with self.assertRaises(ParameterError):
            AdExp(d, 1, bound=0)

    @override_settings(BISPECTRAL_WORKBENCH={"NILPOTENCY_BOUND": 3})
    def test_bound_comes_from_settings(self):
        self.assertEqual(AdExp(d).bound, 3)
        with self.assertRaises(NilpotencyExceeded):
            exp_ad(AdExp(d), x**4)

    def test_rules_must_match(self):
        with self.assertRaises(RuleMismatchError):
            exp_ad(AdExp(d), weyl_z("z"))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=1, max_value=3), polynomials(max_degree=3), st.integers(-3, 3))
    def test_inverse_undoes_the_twist(self, k, p, c):
        twist = AdExp(d**k, c)
        M = OreOperator.scalar(WEYL, p) * d
        self.assertEqual(twist.inverse().apply(twist.apply(M)), M)

    @settings(max_examples=50, deadline=None)
    @given(polynomials(max_degree=3), polynomials(max_degree=3))
    def test_twist_is_multiplicative(self, p, r):
        twist = AdExp(d**2, Scalar.const("1/3"))
        A = OreOperator.scalar(WEYL, p) * d
        B = OreOperator.scalar(WEYL, r)
        self.assertEqual(twist.apply(A * B), twist.apply(A) * twist.apply(B))


class NilpotencyTests(SimpleTestCase):
    def test_indices(self):
        report = check_local_nilpotency(d, [x**2, x * d])
        self.assertEqual(report.indices(), [3, 2])
        self.assertTrue(report.all_nilpotent)

    def test_missing_index(self):
        report = check_local_nilpotency(x * d, [x, d**2], bound=5)
        self.assertEqual(report.indices(), [None, None])
        self.assertFalse(report.all_nilpotent)


class TripleTwistTests(SimpleTestCase):
    def test_source_twists_of_the_exponential_triple(self):
        triple = load_triple("weyl_exponential")
        b1 = twist_source(triple.b, GenWord.word("x", "x"), 1)
        self.assertEqual(b1.image("x"), weyl_z("d"))
        self.assertEqual(b1.image("d"), weyl_z("z - 2*d"))
        b2 = twist_source(b1, GenWord.word("d", "d"), 1)
        self.assertEqual(b2.image("x"), weyl_z("2*z - 3*d"))
        self.assertTrue(all(holds for _, _, holds in b2.verify_relations()))

    def test_target_twist_keeps_the_relations(self):
        triple = load_triple("airy")
        twisted = twist_target(triple.b, AdExp(weyl_z("d^2"), Scalar.const("-1/3")))
        self.assertTrue(all(holds for _, _, holds in twisted.verify_relations()))
        self.assertEqual(len(twisted.twists), 1)

    def test_target_twist_in_the_wrong_algebra(self):
        triple = load_triple("airy")
        with self.assertRaises(RuleMismatchError):
            twist_target(triple.b, AdExp(d))

    def test_twisted_image_matches_direct_exponential(self):
        triple = load_triple("weyl_exponential")
        L = weyl_z("z^2")
        twisted = twist_target(triple.b, AdExp(L, 1))
        word = GenWord.word("d", "x")
        self.assertEqual(apply_antiiso(twisted, word), exp_ad(AdExp(L, 1), apply_antiiso(triple.b, word)))

    def test_bessel_conjugate_twisted_by_its_own_operator(self):
        Lg = weyl_z("z^-3*(D - g1)*(D - g2)*(D - g3)")
        M, index = exp_ad_with_index(AdExp(Lg, Scalar.const("-1/3")), weyl_z("z^3"))
        expected = parse(
            "-Lg*Lg + (3*D + 9 - g1 - g2 - g3)*Lg - 3*D*D + (2*(g1 + g2 + g3) - 9)*D"
            " - (9 - 3*(g1 + g2 + g3) + g1*g2 + g1*g3 + g2*g3) + z^3",
            context_for("weyl_z", {"Lg": Lg}),
        )
        self.assertEqual(M, expected)
        self.assertEqual(index, 4)
        product = parse("(Lg - D + g1)*(Lg - D + g2)*(Lg - D + g3)", context_for("weyl_z", {"Lg": Lg}))
        self.assertEqual(-M * Lg, product)

    def test_source_twist_by_a_cubic(self):
        triple = load_triple("weyl_exponential")
        b1 = twist_source(triple.b, GenWord.word("x", "x"), 1)
        b3 = twist_source(b1, GenWord.word("d", "d", "d"), 1)
        self.assertEqual(b3.image("x"), weyl_z("d + 3*(z - 2*d)^2"))
        self.assertEqual(b3.image("d"), weyl_z("z - 2*d"))
        self.assertEqual(apply_antiiso(b3, GenWord.word("d", "x") - GenWord.word("x", "d")), weyl_z("1"))


def _x_polynomial(coeffs):
    """``sum c_k x^k`` as a word in the generator ``x``."""
    return sum((c * GenWord.word(*("x",) * k) for k, c in enumerate(coeffs)), GenWord.zero())


class TwistEquivalenceTests(SimpleTestCase):
    """Source twists of the exponential triple against their closed form."""

    def setUp(self):
        self.b = load_triple("weyl_exponential").b

    @settings(max_examples=50, deadline=None)
    @given(st.lists(small_ints, min_size=1, max_size=4), words(("x", "d"), max_length=3))
    def test_source_twist_by_a_polynomial_in_x(self, coeffs, word):
        # exp(ad p(x)) fixes x and sends d to d - p'(x)
        p = _x_polynomial(coeffs)
        dp = _x_polynomial([k * c for k, c in enumerate(coeffs)][1:])
        images = {"x": GenWord.generator("x"), "d": GenWord.generator("d") - dp}
        twisted = twist_source(self.b, p, 1)
        self.assertEqual(twisted.image("x"), apply_antiiso(self.b, images["x"]))
        self.assertEqual(twisted.image("d"), apply_antiiso(self.b, images["d"]))
        substituted = GenWord.zero()
        for letters, coeff in word.terms.items():
            product = GenWord.one()
            for letter in letters:
                product = product * images[letter]
            substituted = substituted + coeff * product
        self.assertEqual(apply_antiiso(twisted, word), apply_antiiso(self.b, substituted))

    @settings(max_examples=50, deadline=None)
    @given(st.lists(small_ints, min_size=1, max_size=4), st.lists(small_ints, min_size=1, max_size=4))
    def test_twists_keep_the_weyl_relation(self, p_coeffs, r_coeffs):
        r = sum(
            (c * GenWord.word(*("d",) * k) for k, c in enumerate(r_coeffs)),
            GenWord.zero(),
        )
        twisted = twist_source(twist_source(self.b, _x_polynomial(p_coeffs), 1), r, 1)
        bracket = apply_antiiso(twisted, GenWord.word("d", "x") - GenWord.word("x", "d"))
        self.assertEqual(bracket, weyl_z("1"))
