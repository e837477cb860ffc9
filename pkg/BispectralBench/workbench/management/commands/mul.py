from functools import reduce
from operator import mul

from workbench.formatting import STYLES, format_product

from ._base import WorkbenchCommand, pairs


class Command(WorkbenchCommand):
    help = "Multiply two or more expressions in one context"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("factors", nargs="+")
        parser.add_argument("--context", default="weyl")
        parser.add_argument("--style", choices=STYLES, default="d")
        parser.add_argument("--hint", action="append", default=[], metavar="NAME=EXPR")
        parser.add_argument("--bind", action="append", default=[], metavar="NAME=EXPR")
        parser.add_argument("--save", metavar="NAME")

    def run(self, *args, **options):
        context = options["context"]
        runner = self.runner(pairs(options["bind"]))
        factors = [runner.parse(text, context) for text in options["factors"]]
        product = reduce(mul, factors)
        stanza = {"style": options["style"], "hints": pairs(options["hint"])}
        self.emit(
            [
                ("factors", format_product(factors)),
                ("product", runner.show(product, stanza, context)),
            ]
        )
        if options["save"] and self.session is not None:
            self.session.store(options["save"], product, context)
