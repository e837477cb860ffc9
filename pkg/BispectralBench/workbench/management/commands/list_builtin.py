from workbench.definitions import builtin_jobs, builtin_triples, find_definition, read_definition

from ._base import WorkbenchCommand


class Command(WorkbenchCommand):
    help = "List the bundled triples and jobs"

    def run(self, *args, **options):
        items = []
        for kind, names in (("triple", builtin_triples()), ("job", builtin_jobs())):
            for name in names:
                data = read_definition(find_definition(f"{kind}s", name))
                items.append((f"{kind}.{name}", data.get("description", "")))
        self.emit(items)
