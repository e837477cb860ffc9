import json

from django.core.management.base import CommandError

from workbench.definitions import dump_triple
from workbench.formatting import STYLES

from ._base import WorkbenchCommand, pairs


class Command(WorkbenchCommand):
    help = "Apply exp(c ad L) to an operator, or twist a bundled triple"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("expression", nargs="?", help="Operand M of exp(c ad L)")
        parser.add_argument("--L", dest="L", required=True, help="The operator L of the automorphism")
        parser.add_argument("--scale", default="1", help="The constant c")
        parser.add_argument("--bound", type=int, help="Nilpotency bound")
        parser.add_argument("--context", default="weyl")
        parser.add_argument("--triple", help="Twist this triple instead of a single operator")
        parser.add_argument("--side", choices=("source", "target"), default="target")
        parser.add_argument("--bind", action="append", default=[], metavar="NAME=EXPR")
        parser.add_argument("--style", choices=STYLES, default="d")
        parser.add_argument("--hint", action="append", default=[], metavar="NAME=EXPR")
        parser.add_argument("--save", metavar="NAME", help="Store the result in the session")
        parser.add_argument("--dump", action="store_true", help="Print the twisted triple as a triple file")

    def run(self, *args, **options):
        if options["triple"]:
            self.twist_triple(options)
            return
        if not options["expression"]:
            raise CommandError("give an operand or --triple", returncode=2)
        step = {
            "op": "exp_ad",
            "context": options["context"],
            "L": options["L"],
            "M": options["expression"],
            "scale": options["scale"],
            "bound": options["bound"],
            "style": options["style"],
            "hints": pairs(options["hint"]),
            "save": options["save"] or "_result",
        }
        runner = self.runner(pairs(options["bind"]))
        report = runner.run({"name": "twist", "steps": [step]})
        if options["save"] and self.session is not None and report.status == "PASS":
            result = runner.objects[options["context"]][options["save"]]
            self.session.store(options["save"], result, options["context"])
        self.finish(report)

    def twist_triple(self, options):
        name = options["triple"]
        alias = options["save"] or name
        steps = [
            {"op": "triple", "name": name, "bindings": pairs(options["bind"])},
            {
                "op": "twist",
                "triple": name,
                "side": options["side"],
                "L": options["L"],
                "scale": options["scale"],
                "bound": options["bound"],
                "style": options["style"],
                "as": alias,
            },
        ]
        runner = self.runner()
        report = runner.run({"name": f"twist {name}", "steps": steps})
        twisted = runner.triples.get(alias) if report.status != "ERROR" else None
        if twisted is not None and options["dump"]:
            self.stdout.write(json.dumps(dump_triple(twisted), indent=2, sort_keys=True))
        if twisted is not None and options["save"] and self.session is not None:
            self.session.store_triple(alias, twisted)
        self.finish(report)
