from workbench.wavebench import WaveFamily

from ._base import WorkbenchCommand, pairs

LIST_PARAMS = ("alphas", "betas", "qbetas")


def wave_params(values):
    params = pairs(values)
    for key in LIST_PARAMS:
        if key in params:
            params[key] = [item.strip() for item in params[key].split(",") if item.strip()]
    return params


class Command(WorkbenchCommand):
    help = "Check L psi = f psi and Lambda psi = theta psi on a truncated wave"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--family", choices=WaveFamily.values, help="Wave family; defaults to the triple's wave")
        parser.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                            help="Wave data, e.g. q=1/2, N=3, betas=0,1/3,2/3, k=1")
        parser.add_argument("--value", action="append", default=[], metavar="NAME=VALUE",
                            help="Instantiate a symbol of the operators")
        parser.add_argument("--order", type=int)
        parser.add_argument("--triple", help="Check the witnesses and generator relations of this triple")
        parser.add_argument("--L", dest="L")
        parser.add_argument("--f", dest="f")
        parser.add_argument("--Lambda", dest="Lambda")
        parser.add_argument("--theta", dest="theta")
        parser.add_argument("--x-context", default="weyl")
        parser.add_argument("--spectral-context", default="weyl_z")

    def run(self, *args, **options):
        step = {"op": "wave_check"}
        if options["family"]:
            step["wave"] = {
                "family": options["family"],
                "params": wave_params(options["param"]),
                "values": pairs(options["value"]),
            }
        if options["order"]:
            step["order"] = options["order"]
        if options["triple"]:
            step["triple"] = options["triple"]
        else:
            step["x_context"] = options["x_context"]
            step["spectral_context"] = options["spectral_context"]
            step.update({key: options[key] for key in ("L", "f", "Lambda", "theta") if options[key]})
        self.run_steps("wave_check", [step])
