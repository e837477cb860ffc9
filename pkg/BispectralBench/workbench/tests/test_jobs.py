from django.test import SimpleTestCase

from workbench.definitions import builtin_jobs
from workbench.jobs import JobRunner, JobStatus, run_job
from workbench.reports import render_items, render_report


def job(*steps, **fields):
    return {"name": fields.pop("name", "test"), "steps": list(steps), **fields}


class JobStatusTests(SimpleTestCase):
    def test_empty_job_passes(self):
        report = run_job(job())
        self.assertEqual(report.status, JobStatus.PASS)
        self.assertEqual(report.exit_code, 0)

    def test_unknown_op_stops_the_job(self):
        report = run_job(job({"op": "frobnicate"}, {"op": "define", "name": "A", "text": "d"}))
        self.assertEqual(report.status, JobStatus.ERROR)
        self.assertEqual(report.exit_code, 2)
        self.assertEqual(len(report.steps), 1)
        self.assertIn("frobnicate", report.steps[0].message)

    def test_parse_error_is_an_error(self):
        report = run_job(job({"op": "define", "name": "A", "text": "d*"}))
        self.assertEqual(report.status, JobStatus.ERROR)

    def test_missing_field_is_an_error(self):
        report = run_job(job({"op": "commutator", "A": "d"}))
        self.assertEqual(report.status, JobStatus.ERROR)
        self.assertIn("B", report.steps[0].message)

    def test_failed_check_continues(self):
        report = run_job(
            job(
                {"op": "expect_equal", "lhs": "d*x", "rhs": "x*d"},
                {"op": "commutator", "A": "d", "B": "x", "expect": "1"},
            )
        )
        self.assertEqual(report.status, JobStatus.FAIL)
        self.assertEqual(report.exit_code, 1)
        self.assertEqual([step.status for step in report.steps], [JobStatus.FAIL, JobStatus.PASS])

    def test_non_nilpotent_twist_fails(self):
        report = run_job(job({"op": "exp_ad", "L": "x*d", "M": "x", "bound": 5}))
        self.assertEqual(report.status, JobStatus.FAIL)
        self.assertIn("5", report.steps[0].message)


class JobStepTests(SimpleTestCase):
    def run_steps(self, *steps, **fields):
        report = run_job(job(*steps, **fields))
        self.assertEqual(report.status, JobStatus.PASS, render_report(report))
        return report

    def items(self, step):
        return dict(step.items)

    def test_definitions_are_shared_between_steps(self):
        report = self.run_steps(
            {"op": "define", "name": "L", "text": "d*d - x"},
            {"op": "commutator", "A": "L", "B": "d", "expect": "1"},
        )
        self.assertEqual(self.items(report.steps[0])["L"], "d^2 - x")

    def test_bindings_substitute_parameters(self):
        self.run_steps(
            {"op": "expect_equal", "lhs": "d - a", "rhs": "d - 2"},
            bindings={"a": "2"},
        )

    def test_runner_bindings(self):
        report = JobRunner(bindings={"a": "3"}).run(job({"op": "expect_equal", "lhs": "a*d", "rhs": "3*d"}))
        self.assertEqual(report.status, JobStatus.PASS)

    def test_conjugate_and_ad_power(self):
        report = self.run_steps(
            {"op": "conjugate", "A": "x*d", "expect": "-x*d - 1", "rename": "z"},
            {"op": "ad_power", "L": "d", "M": "x^3", "n": 2, "expect": "6*x"},
        )
        self.assertEqual(self.items(report.steps[0])["result"], "-z*d - 1")

    def test_exp_ad_index_and_nilpotency(self):
        report = self.run_steps(
            {"op": "exp_ad", "L": "d", "M": "x^2", "scale": "t", "expect": "x^2 + 2*t*x + t^2", "expect_index": 3},
            {"op": "nilpotency", "L": "d", "operands": ["x^2", "x*d"], "expect": [3, 2]},
        )
        self.assertEqual(self.items(report.steps[0])["index"], "3")

    def test_exchange_with_negative_expectation(self):
        self.run_steps(
            {"op": "exchange", "A": "d", "B": "x", "A2": "1", "B2": "d*x"},
            {"op": "exchange", "A": "d", "B": "x", "A2": "1", "B2": "x*d", "expect": False},
        )

    def test_operator_darboux_and_chain(self):
        self.run_steps(
            {"op": "darboux", "L": "d*x*d", "P": "d", "Q": "d*x", "theta": "1", "expect": {"L_bar": "x*d^2 + 2*d"}},
            {
                "op": "chain",
                "L": "d*x*d",
                "schedule": [{"P": "d", "Q": "d*x", "theta": "1"}, {"P": "d", "Q": "x*d + 2", "theta": "1"}],
                "expect_final": "x*d^2 + 3*d",
            },
        )

    def test_triple_steps(self):
        report = self.run_steps(
            {"op": "triple", "name": "weyl_exponential", "as": "e"},
            {"op": "apply", "triple": "e", "word": "x*d", "expect": "z*dz"},
            {"op": "check_relation", "triple": "e", "lhs": "d*x", "rhs": "x*d + 1"},
            {"op": "check_relation", "triple": "e", "lhs": "d*x", "rhs": "x*d", "expect": False},
            {"op": "twist", "triple": "e", "side": "target", "L": "z^2", "as": "t", "expect": {"x": "dz - 2*z"}},
        )
        self.assertEqual(self.items(report.steps[0])["Lambda"], "d")

    def test_darboux_on_a_triple_with_wave_check(self):
        self.run_steps(
            {"op": "triple", "name": "weyl_exponential"},
            {
                "op": "darboux",
                "triple": "weyl_exponential",
                "L": "d*d",
                "P": "x*d",
                "Q": "d",
                "theta": "x",
                "save": "step",
                "expect": {"bP": "z*dz"},
            },
            {"op": "wave_check", "darboux": "step", "wave": {"family": "exp_xz"}, "order": 12},
        )

    def test_wave_check_of_explicit_operators(self):
        self.run_steps(
            {
                "op": "wave_check",
                "wave": {"family": "airy", "params": {"N": 2}},
                "order": 12,
                "L": "d^2 - x",
                "f": "z",
                "Lambda": "d^2 - z",
                "theta": "x",
            },
            {"op": "wave_relation", "wave": {"family": "exp_xz"}, "order": 8, "A": "d", "B": "z"},
        )

    def test_wave_check_failure_names_a_cell(self):
        report = run_job(job({"op": "wave_check", "wave": {"family": "exp_xz"}, "order": 6, "L": "d", "f": "2*z"}))
        self.assertEqual(report.status, JobStatus.FAIL)
        self.assertIn("check.1.first_nonzero", self.items(report.steps[0]))

    def test_wave_stanza_applies_operators_in_order(self):
        wave = {
            "family": "airy",
            "params": {"N": 2},
            "apply": [{"A": "d^2 - x", "side": "x"}, {"A": "z^-1", "side": "z"}],
        }
        self.run_steps({"op": "wave_relation", "wave": wave, "order": 24, "A": "d^3 - D - 1", "B": "D"})
        # without z^-1 the wave is z psi, which picks up an extra z psi under Dz
        unscaled = {**wave, "apply": wave["apply"][:1]}
        report = run_job(job({"op": "wave_relation", "wave": unscaled, "order": 24, "A": "d^3 - D - 1", "B": "D"}))
        self.assertEqual(report.status, JobStatus.FAIL)

    def test_source_twist_by_a_cubic(self):
        report = self.run_steps(
            {"op": "triple", "name": "weyl_exponential"},
            {"op": "twist", "triple": "weyl_exponential", "side": "source", "L": "x*x", "as": "b1"},
            {
                "op": "twist",
                "triple": "b1",
                "side": "source",
                "L": "d*d*d",
                "as": "b3",
                "expect": {"x": "dz + 3*(z - 2*dz)^2", "d": "z - 2*dz"},
            },
            {"op": "apply", "triple": "b3", "word": "d*x - x*d", "expect": "1"},
        )
        self.assertEqual(self.items(report.steps[3])["image"], "1")


class BundledJobTests(SimpleTestCase):
    def test_every_bundled_job_passes(self):
        for name in builtin_jobs():
            with self.subTest(job=name):
                report = run_job(name)
                self.assertEqual(report.status, JobStatus.PASS, render_report(report))


class RenderingTests(SimpleTestCase):
    def setUp(self):
        self.report = run_job(job({"op": "commutator", "A": "d", "B": "x"}, name="demo", description="A demo"))

    def test_text(self):
        text = render_report(self.report)
        self.assertTrue(text.startswith("job demo: PASS\nA demo\n[1] commutator: PASS"))
        self.assertIn("    result  1", text)

    def test_structured(self):
        lines = render_report(self.report, "structured").splitlines()
        self.assertEqual(lines[:3], ["job.name=demo", "job.status=PASS", "job.steps=1"])
        self.assertIn("step.1.result=1", lines)

    def test_items(self):
        self.assertEqual(render_items([("a", 1), ("long", 2)]), "a     1\nlong  2")
        self.assertEqual(render_items([("a", 1)], "structured", "p."), "p.a=1")
