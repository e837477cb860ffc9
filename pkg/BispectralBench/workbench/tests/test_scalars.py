from django.test import SimpleTestCase
from hypothesis import given, settings
from sympy.polys.domains import QQ

from workbench.exceptions import DivisionByZeroError, ParameterError
from workbench.scalars import Scalar, to_rational

from .strategies import fractions, nonzero_polynomials, nonzero_rationals, polynomials

x = Scalar.symbol("x")
q = Scalar.symbol("q")


class ScalarArithmeticTests(SimpleTestCase):
    def test_fractions_are_reduced(self):
        self.assertEqual((x**2 - 1) / (x - 1), x + 1)

    def test_unused_symbols_are_dropped(self):
        a = Scalar.symbol("a")
        value = a + q - a
        self.assertEqual(value, q)
        self.assertEqual(value.free_symbols, frozenset({"q"}))

    def test_derivative_of_a_quotient(self):
        self.assertEqual((1 / x).derivative("x"), -(x**-2))
        self.assertEqual((x**3 + q * x).derivative("x"), 3 * x**2 + q)
        self.assertTrue(q.derivative("x").is_zero)

    def test_dilation_substitution(self):
        self.assertEqual((x**2 + x).substitute("x", q * x), q**2 * x**2 + q * x)

    def test_general_substitution(self):
        y = Scalar.symbol("y")
        self.assertEqual((1 / (x + 1)).substitute("x", y - 1), 1 / y)

    def test_instantiate_constants(self):
        value = (q * x + 1).instantiate({"q": QQ(1, 2), "x": 4})
        self.assertEqual(value, Scalar.const(3))
        self.assertEqual(value.to_rational(), QQ(3))

    def test_division_by_zero(self):
        with self.assertRaises(DivisionByZeroError):
            x / Scalar.zero()
        with self.assertRaises(DivisionByZeroError):
            Scalar.zero().inverse()

    def test_symbolic_value_is_not_rational(self):
        with self.assertRaises(ParameterError):
            x.to_rational()

    def test_printing(self):
        self.assertEqual(str(x / 2 + 1), "1/2*x + 1")
        self.assertEqual(str(1 / (x + 1)), "1/(x + 1)")
        self.assertEqual(str(x**-2), "x^-2")
        self.assertEqual(str(Scalar.zero()), "0")


class ToRationalTests(SimpleTestCase):
    def test_accepted_inputs(self):
        self.assertEqual(to_rational(3), QQ(3))
        self.assertEqual(to_rational("3/4"), QQ(3, 4))
        self.assertEqual(to_rational(QQ(1, 5)), QQ(1, 5))
        self.assertEqual(to_rational(Scalar.const("-2/7")), QQ(-2, 7))

    def test_rejected_inputs(self):
        for value in (True, 0.5, None):
            with self.subTest(value=value):
                with self.assertRaises(ParameterError):
                    to_rational(value)


class ScalarFieldPropertyTests(SimpleTestCase):
    @settings(max_examples=300, deadline=None)
    @given(polynomials(), polynomials(), polynomials("q"))
    def test_distributive(self, a, b, c):
        self.assertEqual((a + b) * c, a * c + b * c)

    @settings(max_examples=300, deadline=None)
    @given(polynomials(), nonzero_polynomials("q"), nonzero_polynomials())
    def test_division_undoes_multiplication(self, a, b, c):
        self.assertEqual(a * (b / c) / b, a / c)

    @settings(max_examples=300, deadline=None)
    @given(nonzero_polynomials(), nonzero_polynomials())
    def test_quotient_rule(self, a, b):
        expected = (a.derivative("x") * b - a * b.derivative("x")) / b**2
        self.assertEqual((a / b).derivative("x"), expected)

    @settings(max_examples=300, deadline=None)
    @given(fractions(), fractions())
    def test_leibniz_rule(self, a, b):
        self.assertEqual((a * b).derivative("x"), a.derivative("x") * b + a * b.derivative("x"))

    @settings(max_examples=300, deadline=None)
    @given(fractions(), nonzero_rationals)
    def test_dilation_round_trip(self, f, c):
        c = Scalar.const(c)
        self.assertEqual(f.substitute("x", c * x).substitute("x", x / c), f)

    @settings(max_examples=300, deadline=None)
    @given(fractions(), polynomials("q"))
    def test_canonical_form_is_idempotent(self, a, b):
        value = a + b
        rebuilt = value.numerator() / value.denominator()
        self.assertEqual(rebuilt, value)
        self.assertEqual(rebuilt.names, value.names)
        self.assertEqual(str(rebuilt), str(value))
        self.assertEqual(hash(rebuilt), hash(value))

    @settings(max_examples=300, deadline=None)
    @given(fractions())
    def test_nonzero_values_are_invertible(self, a):
        if a.is_zero:
            return
        self.assertEqual(a * a.inverse(), Scalar.one())
