from django.core.management.base import CommandError

from workbench.formatting import STYLES

from ._base import WorkbenchCommand, pairs


class Command(WorkbenchCommand):
    help = "Parse an expression and print its canonical form"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("expression")
        parser.add_argument("--context", default="weyl", help="weyl, weyl_z, q, q_z, shift, scalar or triple:NAME:SIDE")
        parser.add_argument("--style", choices=STYLES, default="d")
        parser.add_argument("--hint", action="append", default=[], metavar="NAME=EXPR")
        parser.add_argument("--bind", action="append", default=[], metavar="NAME=EXPR")
        parser.add_argument("--realize", action="store_true", help="Print words as operators on their triple side")
        parser.add_argument("--save", metavar="NAME", help="Store the value in the session")

    def run(self, *args, **options):
        context = options["context"]
        runner = self.runner(pairs(options["bind"]))
        if options["realize"]:
            value = runner.operator(options["expression"], context)
        else:
            value = runner.parse(options["expression"], context)
        stanza = {"style": options["style"], "hints": pairs(options["hint"])}
        self.emit([("context", context), ("value", runner.show(value, stanza, context))])
        if options["save"]:
            if self.session is None:
                raise CommandError("--save needs --session", returncode=2)
            self.session.store(options["save"], value, context)
            self.stderr.write(self.style.SUCCESS(f"Saved {options['save']} in session {self.session.name}"))
