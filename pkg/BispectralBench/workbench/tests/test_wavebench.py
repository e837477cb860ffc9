from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import QQ

from workbench.exceptions import ParameterError, RecursionPivotError, WindowError
from workbench.families import hermite
from workbench.ore import OreRule
from workbench.parser import context_for, parse
from workbench.scalars import Scalar
from workbench.wavebench import (
    Side,
    Window,
    act,
    check_module_relation,
    check_pair,
    make_wave,
    q_pochhammer,
    transform_wave,
)

from .strategies import operators

HALF = QQ(1, 2)
WEYL = OreRule.differential("x")
WEYL_Z = OreRule.differential("z")


def op(text, context):
    return parse(text, context_for(context))


class WindowTests(SimpleTestCase):
    def test_containment(self):
        window = Window(x=3, total=4)
        self.assertTrue(window.contains(3, 1))
        self.assertFalse(window.contains(3, 2))
        self.assertEqual(window.x_limit(2), 2)

    def test_unbounded_window(self):
        with self.assertRaises(WindowError):
            Window(z=2).x_limit(0)

    def test_shift_and_meet(self):
        self.assertEqual(Window(4, 4).shifted(dx=-1), Window(3, 4))
        self.assertEqual(Window(4, 2).meet(Window(3, 5)), Window(3, 2))


class WaveConstructionTests(SimpleTestCase):
    def test_q_pochhammer(self):
        self.assertEqual(q_pochhammer(HALF, 0), QQ(1))
        self.assertEqual(q_pochhammer(HALF, 2), QQ(3, 8))

    def test_q_exponential_coefficients(self):
        w = make_wave("q_exp_xz", {"q": "1/2"}, order=4)
        self.assertEqual([w.coefficient(k, k) for k in range(3)], [QQ(1), QQ(2), QQ(8, 3)])
        self.assertEqual(w.coefficient(1, 0), QQ(0))

    def test_exponential_coefficients(self):
        w = make_wave("exp_xz", order=5)
        self.assertEqual(w.coefficient(3, 3), QQ(1, 6))
        with self.assertRaises(WindowError):
            w.coefficient(6, 0)

    def test_hermite_sequence(self):
        w = make_wave("hermite", order=4)
        x = Scalar.symbol("x")
        self.assertEqual(w.value(1), x)
        self.assertEqual(w.value(2), x**2 - HALF)
        with self.assertRaises(WindowError):
            w.value(5)

    @override_settings(BISPECTRAL_WORKBENCH={"DEFAULT_WAVE_ORDER": 6})
    def test_default_order(self):
        self.assertEqual(make_wave("exp_xz").order, 6)

    def test_bad_requests(self):
        with self.assertRaises(ParameterError):
            make_wave("laguerre")
        with self.assertRaises(ParameterError):
            make_wave("exp_xz", order=0)
        with self.assertRaises(ParameterError):
            make_wave("q_exp_xz")
        with self.assertRaises(ParameterError):
            make_wave("bessel", {"N": 2, "betas": ["0"]})
        with self.assertRaises(ParameterError):
            make_wave("bessel", {"N": 2, "betas": ["0", "1/2"], "k": 3})

    def test_resonant_indicial_roots(self):
        with self.assertRaises(RecursionPivotError):
            make_wave("bessel", {"N": 2, "betas": ["0", "2"], "k": 1})


class ResidualTests(SimpleTestCase):
    def test_exponential_pair(self):
        w = make_wave("exp_xz", order=10)
        report = check_pair(op("d", "weyl"), op("z", "weyl_z"), op("d", "weyl_z"), op("x", "weyl"), w)
        self.assertTrue(report.passed)
        self.assertEqual(len(report.checks), 2)
        self.assertGreater(report.checks[0].cells, 0)

    def test_wrong_eigenvalue_is_reported(self):
        w = make_wave("exp_xz", order=10)
        report = check_pair(op("d", "weyl"), op("2*z", "weyl_z"), None, None, w)
        self.assertFalse(report.passed)
        self.assertTrue(report.checks[0].nonzero)

    def test_q_exponential(self):
        w = make_wave("q_exp_xz", {"q": "1/2"}, order=12)
        report = check_pair(op("d", "q"), op("-z", "q_z"), op("d", "q_z"), op("-x", "q"), w)
        self.assertTrue(report.passed)

    def test_q_must_match_the_wave(self):
        w = make_wave("q_exp_xz", {"q": "1/2"}, order=6)
        with self.assertRaises(ParameterError):
            act(op("Dq", "q").instantiate({"q": QQ(1, 3)}), w, Side.X)

    def test_airy_pair(self):
        w = make_wave("airy", {"N": 2}, order=14)
        report = check_pair(op("d^2 - x", "weyl"), op("z", "weyl_z"), op("d^2 - z", "weyl_z"), op("x", "weyl"), w)
        self.assertTrue(report.passed)

    def test_bessel_pair(self):
        w = make_wave("bessel", {"N": 2, "betas": ["0", "1/2"], "k": 2}, order=12, values={"b1": "0", "b2": "1/2"})
        L = op("x^-2*(D - b1)*(D - b2)", "weyl")
        report = check_pair(L, op("z^2", "weyl_z"), None, None, w)
        self.assertTrue(report.passed)

    def test_hermite_relations(self):
        w = make_wave("hermite")
        report = check_pair(hermite(), op("-2*n", "shift"), None, None, w)
        report = report + check_module_relation(op("x", "weyl"), op("T + 1/2*n*Tinv", "shift"), w, (Side.X, Side.N))
        report = report + check_module_relation(op("d", "weyl"), op("n*Tinv", "shift"), w, (Side.X, Side.N))
        self.assertTrue(report.passed)

    def test_shift_on_the_x_side_is_refused(self):
        w = make_wave("exp_xz", order=4)
        with self.assertRaises(ParameterError):
            act(op("T", "shift"), w, Side.Z)


class WaveTransformTests(SimpleTestCase):
    def test_transformed_airy_wave(self):
        # (d^2 - x) psi = z psi, so z^-1 (d^2 - x) psi is psi again
        w = make_wave("airy", {"N": 2}, order=20)
        psi_bar = transform_wave(w, [(op("d^2 - x", "weyl"), Side.X), (op("z^-1", "weyl_z"), Side.Z)])
        cells = list(psi_bar.cells())
        self.assertTrue(cells)
        for i, j in cells:
            self.assertEqual(psi_bar.coefficient(i, j), w.coefficient(i, j))
        report = check_module_relation(op("d^3 - D - 1", "weyl"), op("D", "weyl_z"), psi_bar)
        self.assertTrue(report.passed)

    def test_no_actions_is_the_identity(self):
        w = make_wave("exp_xz", order=4)
        self.assertIs(transform_wave(w, []), w)


class ActionPropertyTests(SimpleTestCase):
    def assertAgree(self, a, b):
        window = a.window.meet(b.window)
        cells = {cell for w in (a, b) for cell in w.cells() if window.contains(*cell)}
        for i, j in cells:
            self.assertEqual(a.coefficient(i, j), b.coefficient(i, j), (i, j))

    @settings(max_examples=100, deadline=None)
    @given(operators(WEYL), operators(WEYL_Z))
    def test_x_and_z_actions_commute(self, A, B):
        w = make_wave("exp_xz", order=15)
        left = act(A, act(B, w, Side.Z), Side.X)
        right = act(B, act(A, w, Side.X), Side.Z)
        self.assertAgree(left, right)

    @settings(max_examples=100, deadline=None)
    @given(operators(WEYL), st.sampled_from([Side.X, Side.Z]))
    def test_results_do_not_depend_on_truncation(self, A, side):
        if side == Side.Z:
            A = A.renamed("z")
        small = act(A, make_wave("exp_xz", order=8), side)
        large = act(A, make_wave("exp_xz", order=14), side)
        cells = list(small.cells())
        self.assertTrue(cells)
        for i, j in cells:
            self.assertEqual(small.coefficient(i, j), large.coefficient(i, j))
        j = small.floor[1]
        with self.assertRaises(WindowError):
            small.coefficient(small.window.x_limit(j) + 1, j)
