from workbench.formatting import STYLES
from workbench.ore import formal_conjugate

from ._base import WorkbenchCommand, pairs


class Command(WorkbenchCommand):
    help = "Formal conjugate (adjoint) of a differential or shift operator"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("expression")
        parser.add_argument("--context", default="weyl")
        parser.add_argument("--rename", metavar="VAR", help="Present the result in another variable")
        parser.add_argument("--style", choices=STYLES, default="d")
        parser.add_argument("--bind", action="append", default=[], metavar="NAME=EXPR")
        parser.add_argument("--save", metavar="NAME")

    def run(self, *args, **options):
        context = options["context"]
        runner = self.runner(pairs(options["bind"]))
        result = formal_conjugate(runner.operator(options["expression"], context))
        shown = result.renamed(options["rename"]) if options["rename"] else result
        self.emit([("conjugate", runner.show(shown, {"style": options["style"]}, context))])
        if options["save"] and self.session is not None:
            self.session.store(options["save"], result, context)
