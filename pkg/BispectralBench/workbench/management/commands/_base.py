from django.core.management.base import BaseCommand, CommandError

from workbench.exceptions import DefinitionError, WorkbenchError
from workbench.jobs import USAGE_ERRORS, JobRunner, JobStatus
from workbench.reports import FORMATS, render_items, render_report

STATUS_EXIT = {JobStatus.FAIL: 1, JobStatus.ERROR: 2}


def pairs(values):
    """``{name: text}`` from repeated ``NAME=TEXT`` options, in order."""
    result = {}
    for value in values or ():
        name, sep, text = value.partition("=")
        if not sep or not name.strip():
            raise DefinitionError(f"expected NAME=VALUE, got {value!r}")
        result[name.strip()] = text.strip()
    return result


class WorkbenchCommand(BaseCommand):
    """Shared options and the exit status contract of the workbench commands.

    Exit status 0 means every check passed, 1 a failed verification and 2 a
    usage, parse or definition error.
    """

    def add_arguments(self, parser):
        parser.add_argument("--format", choices=FORMATS, default="text")
        parser.add_argument("--session", help="Session to read named objects from and save into")

    def handle(self, *args, **options):
        self.format = options["format"]
        self.session = self.open_session(options.get("session"))
        try:
            self.run(*args, **options)
        except USAGE_ERRORS as exc:
            raise CommandError(str(exc), returncode=2) from exc
        except WorkbenchError as exc:
            raise CommandError(str(exc), returncode=1) from exc

    def run(self, *args, **options):
        raise NotImplementedError

    def open_session(self, name):
        if not name:
            return None
        from workbench.models import Session

        session, created = Session.objects.get_or_create(name=name)
        if created:
            self.stderr.write(self.style.NOTICE(f"Session {name} created"))
        return session

    def runner(self, bindings=None):
        return JobRunner(bindings=bindings, session=self.session)

    def emit(self, items):
        self.stdout.write(render_items(items, self.format))

    def finish(self, report):
        """Print a job report, log it in the session and map its status to the exit code."""
        self.stdout.write(render_report(report, self.format))
        if self.session is not None:
            from workbench.models import JobRun

            JobRun.objects.create(
                session=self.session,
                job=report.name,
                status=report.status,
                report=render_report(report, "structured"),
            )
        status = JobStatus(report.status)
        if status in STATUS_EXIT:
            raise CommandError(f"{report.name}: {status.label.lower()}", returncode=STATUS_EXIT[status])
        self.stderr.write(self.style.SUCCESS(f"{report.name}: PASS"))

    def run_steps(self, name, steps, runner=None, description=""):
        runner = runner or self.runner()
        self.finish(runner.run({"name": name, "description": description, "steps": steps}))
