import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from workbench.models import JobRun, Session


def run(*args, **options):
    out = StringIO()
    call_command(*args, stdout=out, stderr=StringIO(), **options)
    return out.getvalue()


class CommandExitStatusMixin:
    def assertExitStatus(self, code, *args, **options):
        with self.assertRaises(CommandError) as caught:
            run(*args, **options)
        self.assertEqual(caught.exception.returncode, code)
        return caught.exception


class AlgebraCommandTests(CommandExitStatusMixin, SimpleTestCase):
    def test_parse(self):
        out = run("parse", "d*x")
        self.assertIn("x*d + 1", out)

    def test_parse_styles(self):
        self.assertIn("D^2 - D", run("parse", "x^2*d^2", "--style", "D"))
        self.assertIn("L^2 + x", run("parse", "d*d + x", "--style", "factored", "--hint", "L=d"))

    def test_parse_structured(self):
        out = run("parse", "Dq*x", "--context", "q", "--format", "structured")
        self.assertEqual(out.splitlines(), ["context=q", "value=q*x*Dq"])

    def test_parse_with_binding(self):
        self.assertIn("d - 2", run("parse", "d - a", "--bind", "a=2"))

    def test_parse_triple_word(self):
        self.assertIn("x*dx", run("parse", "x*dx", "--context", "triple:airy:source"))
        self.assertIn("-x + 1", run("parse", "dx*x - x*dx - x", "--context", "triple:airy:source", "--realize"))

    def test_usage_errors(self):
        self.assertExitStatus(2, "parse", "d*")
        self.assertExitStatus(2, "parse", "T", "--context", "weyl")
        self.assertExitStatus(2, "parse", "x", "--context", "nowhere")
        self.assertExitStatus(2, "parse", "d", "--bind", "oops")
        self.assertExitStatus(2, "parse", "d", "--save", "A")

    def test_mul(self):
        out = run("mul", "d", "x", "d")
        self.assertIn("(d)*(x)*(d)", out)
        self.assertIn("x*d^2 + d", out)

    def test_conj(self):
        self.assertIn("-z*d - 1", run("conj", "x*d", "--rename", "z"))
        self.assertExitStatus(2, "conj", "Dq", "--context", "q")

    def test_twist_operator(self):
        out = run("twist", "x^2", "--L", "d", "--scale", "t")
        self.assertIn("t^2 + 2*t*x + x^2", out)
        self.assertIn("PASS", out)

    def test_twist_without_nilpotency_fails(self):
        self.assertExitStatus(1, "twist", "x", "--L", "x*d", "--bound", "4")

    def test_twist_triple_dump(self):
        out = run("twist", "--triple", "weyl_exponential", "--side", "source", "--L", "x*x", "--dump")
        self.assertIn('"twists"', out)
        self.assertIn("image.d", out)

    def test_darboux_options(self):
        out = run("darboux", "--L", "d*x*d", "--P", "d", "--Q", "d*x", "--theta", "1")
        self.assertIn("x*d^2 + 2*d", out)
        self.assertExitStatus(2, "darboux", "--L", "d*x*d", "--P", "d")
        self.assertExitStatus(1, "darboux", "--L", "d*x*d", "--P", "d", "--Q", "x*d", "--theta", "1")

    def test_darboux_stanza_file(self):
        stanza = {"triple": "weyl_exponential", "L": "d*d", "P": "x*d", "Q": "d", "theta": "x"}
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory, "step.json")
            path.write_text(json.dumps(stanza), encoding="utf-8")
            out = run("darboux", str(path), "--format", "structured")
        self.assertIn("job.status=PASS", out)
        self.assertIn("step.1.certificate.3=spectral factorization", out)

    def test_wave_check(self):
        out = run("wave_check", "--family", "exp_xz", "--order", "8", "--L", "d", "--f", "z")
        self.assertIn("PASS", out)
        out = run("wave_check", "--triple", "q_bessel", "--order", "10")
        self.assertIn("PASS", out)
        self.assertExitStatus(1, "wave_check", "--family", "exp_xz", "--order", "8", "--L", "d", "--f", "2*z")

    def test_wave_check_list_params(self):
        out = run(
            "wave_check",
            "--family", "bessel",
            "--param", "N=2",
            "--param", "betas=0,1/2",
            "--param", "k=2",
            "--value", "b1=0",
            "--value", "b2=1/2",
            "--order", "10",
            "--L", "x^-2*(D - b1)*(D - b2)",
            "--f", "z^2",
        )
        self.assertIn("PASS", out)

    def test_run_and_list(self):
        self.assertIn("job ex1_3: PASS", run("run", "ex1_3"))
        listing = run("list_builtin")
        self.assertIn("triple.bessel", listing)
        self.assertIn("job.ex3_4", listing)
        self.assertExitStatus(2, "run", "no_such_job")

    def test_run_reports_failure(self):
        job = {"name": "broken", "steps": [{"op": "expect_equal", "lhs": "d*x", "rhs": "x*d"}]}
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory, "broken.json")
            path.write_text(json.dumps(job), encoding="utf-8")
            error = self.assertExitStatus(1, "run", str(path))
        self.assertIn("broken", str(error))


class SessionCommandTests(CommandExitStatusMixin, TestCase):
    def test_saved_objects_are_visible_later(self):
        run("parse", "d*d - x", "--session", "lab", "--save", "L")
        session = Session.objects.get(name="lab")
        self.assertEqual(session.entries.get(name="L").text, "d^2 - x")
        self.assertIn("value=1", run("parse", "L*d - d*L", "--session", "lab", "--format", "structured"))

    def test_saved_triple_is_loaded_from_the_session(self):
        run("twist", "--triple", "weyl_exponential", "--side", "source", "--L", "x*x", "--session", "lab", "--save", "w1")
        session = Session.objects.get(name="lab")
        self.assertTrue(session.has_triple("w1"))
        out = run("parse", "d", "--context", "triple:w1:source", "--realize", "--session", "lab")
        self.assertIn("d", out)
        job = {
            "name": "uses_session",
            "steps": [{"op": "apply", "triple": "w1", "word": "d", "expect": "z - 2*dz"}],
        }
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory, "uses_session.json")
            path.write_text(json.dumps(job), encoding="utf-8")
            run("run", str(path), "--session", "lab")

    def test_job_runs_are_logged(self):
        run("run", "ex1_3", "--session", "lab")
        self.assertExitStatus(2, "run", "no_such_job", "--session", "lab")
        runs = JobRun.objects.filter(session__name="lab")
        self.assertEqual(runs.count(), 1)
        self.assertEqual(runs.get().status, "PASS")
        self.assertIn("job.status=PASS", runs.get().report)
