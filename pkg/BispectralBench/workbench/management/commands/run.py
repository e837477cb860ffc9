from workbench.definitions import load_job

from ._base import WorkbenchCommand, pairs


class Command(WorkbenchCommand):
    help = "Run a job file or a bundled job by name"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("job", help="Bundled job name (see list_builtin) or path to a job file")
        parser.add_argument("--bind", action="append", default=[], metavar="NAME=EXPR",
                            help="Extra bindings, applied before the job's own")

    def run(self, *args, **options):
        job = load_job(options["job"])
        self.finish(self.runner(pairs(options["bind"])).run(job))
