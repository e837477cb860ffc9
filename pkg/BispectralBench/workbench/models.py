import json
import logging

from django.core.exceptions import ValidationError
from django.core.validators import RegexValidator
from django.db import models
from django.db.models.signals import post_delete, post_save
from django.dispatch import receiver

from .definitions import TRIPLE_PREFIX, build_triple, dump_triple, resolve_context
from .exceptions import WorkbenchError
from .formatting import format_value
from .jobs import JobRunner, JobStatus
from .parser import RESERVED, parse
from .presented import GenWord

logger = logging.getLogger(__name__)

identifier = RegexValidator(
    r"^[A-Za-z_][A-Za-z0-9_]*$", "Names are identifiers: letters, digits and underscores."
)


class Session(models.Model):
    """Named operators, words and triples kept between commands."""

    name = models.CharField(max_length=100, unique=True, validators=[identifier])
    description = models.TextField(blank=True)
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        ordering = ["name"]
        verbose_name = "Session"
        verbose_name_plural = "Sessions"

    def __str__(self):
        return self.name

    def store(self, name, value, context):
        """Save a parsed operator or word under ``name`` in canonical text."""
        kind = SessionObject.Kind.WORD if isinstance(value, GenWord) else SessionObject.Kind.OPERATOR
        obj = self.entries.filter(name=name).first() or SessionObject(session=self, name=name)
        obj.kind = kind
        obj.context = context
        obj.text = format_value(value)
        obj.full_clean()
        obj.save()
        logger.info("session %s: stored %s %s", self.name, kind, name)
        return obj

    def store_triple(self, name, triple):
        obj = self.entries.filter(name=name).first() or SessionObject(session=self, name=name)
        obj.kind = SessionObject.Kind.TRIPLE
        obj.context = ""
        obj.text = json.dumps(dump_triple(triple), indent=2, sort_keys=True)
        obj.full_clean()
        obj.save()
        logger.info("session %s: stored triple %s", self.name, name)
        return obj

    def define(self, name, text, context):
        """Parse ``text`` in the named context, with earlier definitions visible, and store it."""
        value = JobRunner(session=self).parse(text, context)
        return self.store(name, value, context)

    def namespace(self, context, base=None):
        """``{name: value}`` of the stored objects of ``context``.

        ``base`` is the parse context to read the stored text in; by default
        the named context is resolved afresh.
        """
        objects = self.entries.filter(context=context).exclude(kind=SessionObject.Kind.TRIPLE)
        if not objects:
            return {}
        if base is None:
            base = resolve_context(context, {name: self.triple(name) for name in self.triple_names()})
        return {obj.name: parse(obj.text, base) for obj in objects}

    def triple_names(self):
        return list(self.entries.filter(kind=SessionObject.Kind.TRIPLE).values_list("name", flat=True))

    def has_triple(self, name):
        return self.entries.filter(kind=SessionObject.Kind.TRIPLE, name=name).exists()

    def triple(self, name):
        obj = self.entries.get(kind=SessionObject.Kind.TRIPLE, name=name)
        return build_triple(json.loads(obj.text))


class SessionObject(models.Model):
    """One stored object; ``text`` always parses back in ``context``."""

    class Kind(models.TextChoices):
        OPERATOR = "operator", "Operator"
        WORD = "word", "Generator word"
        TRIPLE = "triple", "Bispectral triple"

    session = models.ForeignKey(Session, on_delete=models.CASCADE, related_name="entries")
    name = models.CharField(max_length=100, validators=[identifier])
    kind = models.CharField(max_length=10, choices=Kind.choices)
    context = models.CharField(max_length=200, blank=True, help_text="Parse context, e.g. weyl or triple:airy:source")
    text = models.TextField(help_text="Canonical printed form")
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        ordering = ["session", "name"]
        unique_together = ["session", "name"]
        verbose_name = "Session object"
        verbose_name_plural = "Session objects"

    def __str__(self):
        return f"{self.session.name}.{self.name} ({self.kind})"

    def clean(self):
        if self.name in RESERVED:
            raise ValidationError({"name": f"{self.name} is a reserved operator symbol"})
        try:
            if self.kind == self.Kind.TRIPLE:
                build_triple(json.loads(self.text))
                return
            if not self.context:
                raise ValidationError({"context": "Operators and words need a parse context"})
            triples = {}
            if self.context.startswith(TRIPLE_PREFIX) and self.session_id:
                triple_name = self.context.split(":")[1]
                if self.session.has_triple(triple_name):
                    triples[triple_name] = self.session.triple(triple_name)
            parse(self.text, resolve_context(self.context, triples))
        except json.JSONDecodeError as exc:
            raise ValidationError({"text": f"not a JSON triple definition: {exc}"}) from exc
        except WorkbenchError as exc:
            raise ValidationError({"text": str(exc)}) from exc


class JobRun(models.Model):
    """The job log."""

    session = models.ForeignKey(
        Session, on_delete=models.SET_NULL, null=True, blank=True, related_name="job_runs"
    )
    job = models.CharField(max_length=200)
    status = models.CharField(max_length=5, choices=JobStatus.choices)
    report = models.TextField(blank=True)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["-created_at"]
        verbose_name = "Job run"
        verbose_name_plural = "Job runs"

    def __str__(self):
        return f"{self.job}: {self.status}"


# Signals


@receiver([post_save, post_delete], sender=SessionObject)
def touch_session_on_object_change(sender, instance, **kwargs):
    """Keep ``Session.updated_at`` at the time of the last stored object."""
    if Session.objects.filter(pk=instance.session_id).exists():
        instance.session.save(update_fields=["updated_at"])
