from django.core.management.base import CommandError

from workbench.definitions import read_definition
from workbench.formatting import STYLES

from ._base import WorkbenchCommand, pairs

FIELDS = ("L", "P", "Q", "theta", "f")


class Command(WorkbenchCommand):
    help = "Bispectral Darboux transformation from a stanza file or from options"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("stanza", nargs="?", help="JSON file holding a darboux step or a whole job")
        parser.add_argument("--triple", help="Triple whose source words P, Q, theta are written in")
        parser.add_argument("--context", default="weyl", help="Operator context when no triple is given")
        for name in FIELDS:
            parser.add_argument(f"--{name}", dest=name)
        parser.add_argument("--bind", action="append", default=[], metavar="NAME=EXPR")
        parser.add_argument("--style", choices=STYLES, default="d")
        parser.add_argument("--hint", action="append", default=[], metavar="NAME=EXPR")

    def run(self, *args, **options):
        if options["stanza"]:
            data = read_definition(options["stanza"])
            if "steps" in data:
                data.setdefault("name", options["stanza"])
                self.finish(self.runner().run(data))
                return
            steps = [{"op": "darboux", **data}]
        else:
            step = {"op": "darboux", "style": options["style"], "hints": pairs(options["hint"])}
            if options["triple"]:
                step["triple"] = options["triple"]
            else:
                step["context"] = options["context"]
            step.update({name: options[name] for name in FIELDS if options[name]})
            if not all(name in step for name in ("P", "Q", "theta")):
                raise CommandError("a Darboux step needs --P, --Q and --theta", returncode=2)
            steps = [step]
        self.run_steps("darboux", steps, self.runner(pairs(options["bind"])))
