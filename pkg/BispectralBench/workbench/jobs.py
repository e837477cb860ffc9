"""Job files: ordered verification steps with a PASS/FAIL report.

A job is a JSON object with a ``name``, an optional ``description``, optional
``bindings`` (scalar expressions standing for parameters) and a list of
``steps``.  Every step names its ``op``; see ``JobRunner`` for the fields of
each op.  Steps run in order and share a namespace of triples, defined
operators and Darboux results.  A failed check marks the step FAIL and the
job continues; a malformed step marks it ERROR and stops the job.
"""

import logging
from dataclasses import dataclass, field, replace

from django.db import models

from . import conf
from .darboux import (
    DarbouxInput,
    FactorizationStep,
    IntertwiningStep,
    check_exchange_identity,
    darboux_chain,
    darboux_transform,
)
from .definitions import (
    TRIPLE_PREFIX,
    load_job,
    load_triple,
    parse_bindings,
    parse_twist,
    resolve_context,
)
from .exceptions import (
    DefinitionError,
    ParameterError,
    ParseError,
    RuleMismatchError,
    UnknownGeneratorError,
    UnknownSymbolError,
    UnsupportedRuleError,
    WorkbenchError,
)
from .formatting import format_value
from .ore import commutator, formal_conjugate
from .parser import parse, parse_scalar
from .presented import GenWord, apply_antiiso, check_relation, realize
from .twist import AdExp, ad_power, check_local_nilpotency, exp_ad_with_index, twist_source, twist_target
from .wavebench import (
    Side,
    check_darboux_wave,
    check_module_relation,
    check_pair,
    check_triple_relations,
    make_wave,
    transform_wave,
)

logger = logging.getLogger(__name__)

USAGE_ERRORS = (
    DefinitionError,
    ParameterError,
    ParseError,
    RuleMismatchError,
    UnknownGeneratorError,
    UnknownSymbolError,
    UnsupportedRuleError,
)


class JobStatus(models.TextChoices):
    PASS = "PASS", "All checks passed"
    FAIL = "FAIL", "A verification failed"
    ERROR = "ERROR", "Malformed input"


EXIT_CODES = {JobStatus.PASS: 0, JobStatus.FAIL: 1, JobStatus.ERROR: 2}


def _text(value):
    if isinstance(value, bool):
        return "yes" if value else "no"
    if value is None:
        return "none"
    return str(value)


@dataclass
class StepRecord:
    index: int
    op: str
    status: str = JobStatus.PASS
    items: list = field(default_factory=list)
    message: str = ""

    def add(self, key, value):
        self.items.append((key, _text(value)))

    def expect(self, key, ok):
        self.add(key, bool(ok))
        if not ok and self.status == JobStatus.PASS:
            self.status = JobStatus.FAIL

    def fail(self, message):
        self.status = JobStatus.FAIL
        self.message = message


@dataclass
class JobReport:
    name: str
    steps: list
    description: str = ""

    @property
    def status(self):
        statuses = {step.status for step in self.steps}
        if JobStatus.ERROR in statuses:
            return JobStatus.ERROR
        if JobStatus.FAIL in statuses:
            return JobStatus.FAIL
        return JobStatus.PASS

    @property
    def exit_code(self):
        return EXIT_CODES[JobStatus(self.status)]


def _need(stanza, key):
    try:
        return stanza[key]
    except KeyError:
        raise DefinitionError(f"the {stanza.get('op')} step needs the field {key!r}") from None


class JobRunner:
    """Executes job steps against a shared namespace.

    ``session`` is an optional ``workbench.models.Session`` whose stored
    objects are visible by name in the matching contexts.
    """

    def __init__(self, triples=None, bindings=None, session=None):
        self.triples = dict(triples or {})
        self.scalars = parse_bindings(bindings)
        self.objects = {}
        self.results = {}
        self.session = session

    # -- namespace ---------------------------------------------------------

    def triple(self, name):
        if name not in self.triples:
            if self.session is not None and self.session.has_triple(name):
                self.triples[name] = self.session.triple(name)
            else:
                self.triples[name] = load_triple(name)
        return self.triples[name]

    def context(self, name):
        if name.startswith(TRIPLE_PREFIX):
            self.triple(name.split(":")[1])
        context = resolve_context(name, self.triples, self.scalars)
        if self.session is not None:
            context.definitions.update(self.session.namespace(name, context))
        context.definitions.update(self.objects.get(name, {}))
        return context

    def _realization(self, context_name):
        _, name, side = context_name.split(":")
        b = self.triple(name).b
        return b.source if side == "source" else b.target

    def parse(self, text, context_name):
        return parse(str(text), self.context(context_name))

    def operator(self, text, context_name):
        """Parsed text as an operator; words are realized on their triple side."""
        value = self.parse(text, context_name)
        if isinstance(value, GenWord):
            return realize(value, self._realization(context_name))
        return value

    def scalar(self, text):
        value = parse_scalar(str(text))
        for name, bound in self.scalars.items():
            if value.depends_on(name):
                value = value.substitute(name, bound)
        return value

    def values(self, stanza):
        return {name: self.scalar(v) for name, v in stanza.get("values", {}).items()}

    def show(self, value, stanza, context_name):
        if isinstance(value, GenWord):
            return format_value(value)
        hints = {name: self.operator(text, context_name) for name, text in stanza.get("hints", {}).items()}
        return format_value(value, stanza.get("style", "d"), hints)

    def _compare(self, record, key, actual, text, context_name):
        if actual is None:
            record.fail(f"{key} was not produced")
            return
        record.expect(f"{key}.matches", actual == self.operator(text, context_name))

    # -- running -----------------------------------------------------------

    def run(self, job):
        self.scalars.update(parse_bindings(job.get("bindings")))
        records = []
        for index, stanza in enumerate(job.get("steps", ()), start=1):
            record = self.run_step(index, stanza)
            records.append(record)
            if record.status == JobStatus.ERROR:
                break
        report = JobReport(job.get("name", ""), records, job.get("description", ""))
        logger.info("job %s finished: %s", report.name, report.status)
        return report

    def run_step(self, index, stanza):
        op = stanza.get("op")
        record = StepRecord(index, str(op))
        handler = getattr(self, f"step_{op}", None) if isinstance(op, str) else None
        if handler is None:
            record.status = JobStatus.ERROR
            record.message = f"unknown step op {op!r}"
            return record
        logger.debug("step %d: %s", index, op)
        try:
            handler(stanza, record)
        except USAGE_ERRORS as exc:
            record.status = JobStatus.ERROR
            record.message = str(exc)
        except WorkbenchError as exc:
            record.fail(str(exc))
        return record

    # -- algebra steps -----------------------------------------------------

    def step_define(self, stanza, record):
        """``name``, ``text``, ``context``: store a parsed value."""
        name = _need(stanza, "name")
        context_name = stanza.get("context", "weyl")
        value = self.parse(_need(stanza, "text"), context_name)
        self.objects.setdefault(context_name, {})[name] = value
        record.add(name, self.show(value, stanza, context_name))

    def step_expect_equal(self, stanza, record):
        """``lhs`` and ``rhs`` realize to the same operator."""
        context_name = stanza.get("context", "weyl")
        lhs = self.operator(_need(stanza, "lhs"), context_name)
        rhs = self.operator(_need(stanza, "rhs"), context_name)
        record.add("lhs", self.show(lhs, stanza, context_name))
        record.add("rhs", self.show(rhs, stanza, context_name))
        record.expect("equal", lhs == rhs)

    def step_commutator(self, stanza, record):
        context_name = stanza.get("context", "weyl")
        A = self.operator(_need(stanza, "A"), context_name)
        B = self.operator(_need(stanza, "B"), context_name)
        result = commutator(A, B)
        record.add("result", self.show(result, stanza, context_name))
        if "expect" in stanza:
            self._compare(record, "result", result, stanza["expect"], context_name)

    def step_conjugate(self, stanza, record):
        """Formal adjoint of ``A``; ``rename`` prints it in another variable."""
        context_name = stanza.get("context", "weyl")
        result = formal_conjugate(self.operator(_need(stanza, "A"), context_name))
        if "save" in stanza:
            self.objects.setdefault(context_name, {})[stanza["save"]] = result
        shown = result.renamed(stanza["rename"]) if "rename" in stanza else result
        record.add("result", self.show(shown, stanza, context_name))
        if "expect" in stanza:
            self._compare(record, "result", result, stanza["expect"], context_name)

    def step_ad_power(self, stanza, record):
        context_name = stanza.get("context", "weyl")
        L = self.operator(_need(stanza, "L"), context_name)
        M = self.operator(_need(stanza, "M"), context_name)
        result = ad_power(L, M, int(stanza.get("n", 1)))
        record.add("result", self.show(result, stanza, context_name))
        if "expect" in stanza:
            self._compare(record, "result", result, stanza["expect"], context_name)

    def step_exp_ad(self, stanza, record):
        """``exp(scale ad L) M`` with optional ``expect``, ``expect_index`` and ``save``."""
        context_name = stanza.get("context", "weyl")
        L = self.operator(_need(stanza, "L"), context_name)
        M = self.operator(_need(stanza, "M"), context_name)
        bound = int(stanza.get("bound") or conf.get("NILPOTENCY_BOUND"))
        result, index = exp_ad_with_index(AdExp(L, self.scalar(stanza.get("scale", "1")), bound), M)
        if "save" in stanza:
            self.objects.setdefault(context_name, {})[stanza["save"]] = result
        record.add("result", self.show(result, stanza, context_name))
        record.add("index", index)
        if "expect" in stanza:
            self._compare(record, "result", result, stanza["expect"], context_name)
        if "expect_index" in stanza:
            record.expect("index.matches", index == stanza["expect_index"])

    def step_nilpotency(self, stanza, record):
        """First vanishing ``(ad L)^n`` per operand; ``expect`` lists indices (null = none)."""
        context_name = stanza.get("context", "weyl")
        L = self.operator(_need(stanza, "L"), context_name)
        operands = [self.operator(text, context_name) for text in _need(stanza, "operands")]
        report = check_local_nilpotency(L, operands, stanza.get("bound"))
        expected = stanza.get("expect")
        for i, result in enumerate(report.results, start=1):
            record.add(f"operand.{i}", self.show(result.operand, stanza, context_name))
            record.add(f"operand.{i}.index", result.index)
            if expected is not None:
                record.expect(f"operand.{i}.matches", result.index == expected[i - 1])

    def step_exchange(self, stanza, record):
        """``A*B == B2*A2``, optionally at the parameter ``values``."""
        context_name = stanza.get("context", "weyl")
        values = self.values(stanza)
        ops = [self.operator(_need(stanza, key), context_name).instantiate(values) for key in ("A", "B", "A2", "B2")]
        holds = check_exchange_identity(*ops)
        record.add("holds", holds)
        record.expect("as_expected", holds == stanza.get("expect", True))

    # -- triple steps ------------------------------------------------------

    def step_triple(self, stanza, record):
        """Load ``name`` (with ``bindings``) as ``as`` and check its witnesses and relations."""
        name = _need(stanza, "name")
        alias = stanza.get("as", name)
        triple = load_triple(name, stanza.get("bindings"))
        self.triples[alias] = triple
        record.add("triple", alias)
        for i, (label, ok) in enumerate(triple.check_witnesses(), start=1):
            record.add(f"witness.{i}", label)
            record.expect(f"witness.{i}.holds", ok)
        self._relations(record, triple.b)
        record.add("Lambda", self.show(triple.Lambda, stanza, f"{TRIPLE_PREFIX}{alias}:target"))

    def _relations(self, record, b):
        for i, (lhs, rhs, holds) in enumerate(b.verify_relations(), start=1):
            record.add(f"relation.{i}", f"{lhs} = {rhs}")
            record.expect(f"relation.{i}.holds", holds)

    def step_apply(self, stanza, record):
        """b(word) for the source ``word`` of ``triple``."""
        alias = _need(stanza, "triple")
        b = self.triple(alias).b
        target = f"{TRIPLE_PREFIX}{alias}:target"
        image = apply_antiiso(b, self.parse(_need(stanza, "word"), f"{TRIPLE_PREFIX}{alias}:source"))
        record.add("image", self.show(image, stanza, target))
        if "expect" in stanza:
            self._compare(record, "image", image, stanza["expect"], target)

    def step_check_relation(self, stanza, record):
        alias = _need(stanza, "triple")
        source = f"{TRIPLE_PREFIX}{alias}:source"
        holds = check_relation(
            self.triple(alias).b,
            self.parse(_need(stanza, "lhs"), source),
            self.parse(_need(stanza, "rhs"), source),
        )
        record.add("holds", holds)
        record.expect("as_expected", holds == stanza.get("expect", True))

    def step_twist(self, stanza, record):
        """Twist ``triple`` on ``side`` by ``exp(scale ad L)``; store it as ``as``.

        A source twist takes ``L`` as a source word, a target twist as a
        target operator expression in which target generators may be named.
        """
        alias = _need(stanza, "triple")
        triple = self.triple(alias)
        side = stanza.get("side", "target")
        text = _need(stanza, "L")
        scale = stanza.get("scale", "1")
        bound = stanza.get("bound")
        if side == "source":
            word = self.parse(text, f"{TRIPLE_PREFIX}{alias}:source")
            twisted = twist_source(triple.b, word, self.scalar(scale), bound)
        elif side == "target":
            t = parse_twist({"L": text, "scale": scale, "bound": bound}, triple.b, self.scalars)
            twisted = twist_target(triple.b, t)
        else:
            raise DefinitionError(f"a twist side is 'source' or 'target', got {side!r}")
        new_alias = stanza.get("as", alias)
        self.triples[new_alias] = replace(triple, b=twisted)
        target = f"{TRIPLE_PREFIX}{new_alias}:target"
        expected = stanza.get("expect", {})
        for gen in twisted.source.generators:
            image = twisted.image(gen)
            record.add(f"image.{gen}", self.show(image, stanza, target))
            if gen in expected:
                self._compare(record, f"image.{gen}", image, expected[gen], target)
        self._relations(record, twisted)

    # -- Darboux steps -----------------------------------------------------

    def _contexts(self, stanza):
        alias = stanza.get("triple")
        if alias:
            self.triple(alias)
            return f"{TRIPLE_PREFIX}{alias}:source", f"{TRIPLE_PREFIX}{alias}:target"
        return stanza.get("context", "weyl"), None

    def _value(self, stanza, key, context_name):
        if key not in stanza:
            return None
        return self.parse(stanza[key], context_name)

    def _darboux_input(self, stanza):
        source, target = self._contexts(stanza)
        triple = self.triple(stanza["triple"]) if target else None
        L = self._value(stanza, "L", source)
        if L is None:
            if triple is None:
                raise DefinitionError("an operator-only Darboux step needs L")
            L = triple.L
        if target:
            f = self._value(stanza, "f", target)
        else:
            f = self.scalar(stanza["f"]) if "f" in stanza else None
        return DarbouxInput(
            triple,
            L,
            self._value(stanza, "P", source),
            self._value(stanza, "Q", source),
            self._value(stanza, "theta", source),
            f,
        )

    def step_darboux(self, stanza, record):
        """One Darboux step; ``expect`` may give ``L_bar``, ``Lambda_bar``, ``bP``, ``bQ``.

        Expected values are read on the matching triple side unless
        ``expect_contexts`` names another context for a key; word contexts
        cannot divide, so ``L_bar`` with its ``theta^-1`` is usually written
        in a basic operator context.
        """
        source, target = self._contexts(stanza)
        result = darboux_transform(self._darboux_input(stanza))
        if "save" in stanza:
            self.results[stanza["save"]] = result
        record.add("L_bar", self.show(result.L_bar, stanza, source))
        if result.Lambda_bar is not None:
            record.add("Lambda_bar", self.show(result.Lambda_bar, stanza, target))
        else:
            record.add("Lambda_bar.reason", result.reason)
        for i, entry in enumerate(result.certificate, start=1):
            record.add(f"certificate.{i}", entry.label)
            record.expect(f"certificate.{i}.holds", entry.holds)
        record.add("polynomial_coefficients", result.has_polynomial_coefficients)
        record.add("order_preserved", result.order_preserved)
        expected = stanza.get("expect", {})
        contexts = stanza.get("expect_contexts", {})
        for key in ("L_bar", "Lambda_bar", "bP", "bQ"):
            if key in expected:
                context_name = contexts.get(key, source if key == "L_bar" else target)
                if context_name is None:
                    raise DefinitionError(f"no context to read the expected {key} in")
                self._compare(record, key, getattr(result, key), expected[key], context_name)

    def step_chain(self, stanza, record):
        """A Darboux chain; each schedule entry has P, Q, theta or P, L_bar."""
        source, _ = self._contexts(stanza)
        inp = self._darboux_input({k: v for k, v in stanza.items() if k not in ("P", "Q", "theta")})
        schedule = []
        for entry in _need(stanza, "schedule"):
            P = self.parse(_need(entry, "P"), source)
            if "L_bar" in entry:
                schedule.append(IntertwiningStep(P, self.parse(entry["L_bar"], source)))
            else:
                schedule.append(
                    FactorizationStep(P, self.parse(_need(entry, "Q"), source), self.parse(_need(entry, "theta"), source))
                )
        results = darboux_chain(inp, schedule)
        for i, result in enumerate(results):
            record.add(f"chain.{i}.L_bar", self.show(result.L_bar, stanza, source))
            record.expect(f"chain.{i}.certified", result.passed)
        if "expect_final" in stanza:
            self._compare(record, "final", results[-1].L_bar, stanza["expect_final"], source)
        if "save" in stanza:
            self.results[stanza["save"]] = results[-1]

    # -- wave steps --------------------------------------------------------

    def _wave(self, stanza, fallback=None):
        """The stanza's wave, with its ``apply`` list of ``{"A", "side"}`` actions run in order."""
        wave = stanza.get("wave") or fallback
        if not wave:
            raise DefinitionError("the wave step needs a wave stanza")
        w = make_wave(
            _need(wave, "family"),
            wave.get("params"),
            stanza.get("order", wave.get("order")),
            wave.get("values"),
        )
        contexts = {
            Side.X: stanza.get("x_context", "weyl"),
            Side.Z: stanza.get("spectral_context", "weyl_z"),
            Side.N: "shift",
        }
        actions = []
        for entry in wave.get("apply", ()):
            side = Side(entry.get("side", Side.X))
            actions.append((self.operator(_need(entry, "A"), contexts[side]), side))
        return transform_wave(w, actions)

    def _residuals(self, record, report):
        for i, check in enumerate(report.checks, start=1):
            record.add(f"check.{i}", check.label)
            record.add(f"check.{i}.window", check.window)
            record.add(f"check.{i}.cells", check.cells)
            record.expect(f"check.{i}.passed", check.passed)
            if check.nonzero:
                cell, value = check.nonzero[0]
                record.add(f"check.{i}.first_nonzero", f"{cell}: {value}")

    def step_wave_check(self, stanza, record):
        """Eigenfunction checks of a triple, a Darboux result or explicit L, f, Lambda, theta."""
        if "darboux" in stanza:
            name = stanza["darboux"]
            if name not in self.results:
                raise DefinitionError(f"no Darboux result named {name!r}")
            report = check_darboux_wave(self.results[name], self._wave(stanza))
        elif "triple" in stanza:
            triple = self.triple(stanza["triple"])
            w = self._wave(stanza, triple.wave)
            report = check_pair(triple.L_operator, triple.f_operator, triple.Lambda, triple.theta_operator, w)
            report = report + check_triple_relations(triple, w)
        else:
            x_context = stanza.get("x_context", "weyl")
            spectral = stanza.get("spectral_context", "weyl_z")
            report = check_pair(
                self._operator_or_none(stanza, "L", x_context),
                self._operator_or_none(stanza, "f", spectral),
                self._operator_or_none(stanza, "Lambda", spectral),
                self._operator_or_none(stanza, "theta", x_context),
                self._wave(stanza),
            )
        self._residuals(record, report)

    def _operator_or_none(self, stanza, key, context_name):
        return self.operator(stanza[key], context_name) if key in stanza else None

    def step_wave_relation(self, stanza, record):
        """``A psi = B psi`` with A and B acting on ``sides`` (default x and z)."""
        sides = tuple(Side(s) for s in stanza.get("sides", ("x", "z")))
        A = self.operator(_need(stanza, "A"), stanza.get("x_context", "weyl"))
        B = self.operator(_need(stanza, "B"), stanza.get("spectral_context", "weyl_z"))
        report = check_module_relation(A, B, self._wave(stanza), sides, stanza.get("label"))
        self._residuals(record, report)


def run_job(job, runner=None):
    """Run a job given as a dict, a bundled job name or a path."""
    if not isinstance(job, dict):
        job = load_job(job)
    runner = runner or JobRunner()
    return runner.run(job)
