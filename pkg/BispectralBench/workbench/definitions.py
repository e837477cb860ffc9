"""Triple and job definition files.

A triple file is a JSON object::

    {
      "name": "airy",
      "description": "...",
      "source": {"context": "weyl", "generators": {"x": "x", "dx": "d"}},
      "target": {"context": "weyl_z", "generators": {"z": "z", "dz": "d"}},
      "images": {"x": "dz*dz - z", "dx": "dz"},
      "relations": [["dx*x", "x*dx + 1"]],
      "theta": "x", "L": "dx*dx - x", "f": "z",
      "bindings": {"u2": "q^2*u1"},
      "wave": {"family": "airy", "params": {"N": 2}, "order": 20},
      "twists": [{"L": "d^2", "scale": "-1/3"}]
    }

Generator realizations are operator expressions in the side's context and
may use generators defined before them.  Images, relations and witnesses are
words.  ``bindings`` name scalar expressions that stand for a parameter
everywhere in the file.  Twists are target-side operator expressions,
applied first to last.

Bundled triples and jobs live under ``ASSET_DIR``; extra triple directories
come from ``TRIPLE_DIRS``.
"""

import json
import logging
from pathlib import Path

from . import conf
from .exceptions import DefinitionError
from .ore import OreOperator
from .parser import OperatorContext, WordContext, context_for, parse, parse_scalar, rule_for
from .presented import AntiIso, BispectralTriple, GenWord, Realization
from .twist import AdExp

logger = logging.getLogger(__name__)

TRIPLE_PREFIX = "triple:"
SIDES = ("source", "target")


def _search_dirs(kind):
    dirs = [conf.asset_dir(kind)]
    if kind == "triples":
        dirs.extend(Path(d) for d in conf.get("TRIPLE_DIRS"))
    return dirs


def _builtin(kind):
    names = set()
    for directory in _search_dirs(kind):
        if directory.is_dir():
            names.update(path.stem for path in directory.glob("*.json"))
    return sorted(names)


def builtin_triples():
    return _builtin("triples")


def builtin_jobs():
    return _builtin("jobs")


def find_definition(kind, name):
    """Path of a bundled definition, or ``name`` itself when it is a file."""
    path = Path(name)
    if path.suffix == ".json" and path.is_file():
        return path
    for directory in _search_dirs(kind):
        candidate = directory / f"{name}.json"
        if candidate.is_file():
            return candidate
    raise DefinitionError(f"no {kind[:-1]} named {name!r}")


def read_definition(path):
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise DefinitionError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DefinitionError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise DefinitionError(f"{path} must hold a JSON object")
    return data


def _field(data, key, what):
    try:
        return data[key]
    except KeyError:
        raise DefinitionError(f"{what} lacks the field {key!r}") from None


def parse_bindings(bindings):
    """``{name: Scalar}`` from ``{name: text}``; later entries may use earlier ones."""
    scalars = {}
    for name, text in (bindings or {}).items():
        value = parse_scalar(str(text))
        for bound, scalar in scalars.items():
            if value.depends_on(bound):
                value = value.substitute(bound, scalar)
        scalars[name] = value
    return scalars


def operator_definitions(rule, scalars):
    return {name: OreOperator.scalar(rule, value) for name, value in scalars.items()}


def word_definitions(scalars):
    return {name: GenWord.scalar(value) for name, value in scalars.items()}


def _realization(side, scalars, what):
    context = OperatorContext(rule_for(_field(side, "context", what)))
    context.definitions.update(operator_definitions(context.rule, scalars))
    images = {}
    generators = _field(side, "generators", what)
    if not generators:
        raise DefinitionError(f"{what} has no generators")
    for name, text in generators.items():
        images[name] = parse(str(text), context)
        context.definitions[name] = images[name]
    return Realization(context.rule, images)


def word_context(realization, scalars=None):
    return WordContext(frozenset(realization.images), word_definitions(scalars or {}))


def target_operator_context(b, scalars=None):
    """Target operator context where target generator names stand for their realizations."""
    context = OperatorContext(b.target_rule)
    context.definitions.update(operator_definitions(b.target_rule, scalars or {}))
    context.definitions.update(b.target.images)
    return context


def parse_twist(stanza, b, scalars=None):
    L = parse(str(_field(stanza, "L", "a twist stanza")), target_operator_context(b, scalars))
    scale = parse_scalar(str(stanza.get("scale", "1")))
    bound = stanza.get("bound") or conf.get("NILPOTENCY_BOUND")
    return AdExp(L, scale, int(bound))


def build_triple(data, bindings=None):
    name = _field(data, "name", "a triple definition")
    what = f"triple {name}"
    scalars = parse_bindings({**data.get("bindings", {}), **(bindings or {})})
    source = _realization(_field(data, "source", what), scalars, f"{what} source")
    target = _realization(_field(data, "target", what), scalars, f"{what} target")
    source_words = word_context(source, scalars)
    target_words = word_context(target, scalars)
    images = {gen: parse(str(text), target_words) for gen, text in _field(data, "images", what).items()}
    relations = []
    for pair in data.get("relations", ()):
        if len(pair) != 2:
            raise DefinitionError(f"{what}: relations are [lhs, rhs] pairs")
        relations.append((parse(str(pair[0]), source_words), parse(str(pair[1]), source_words)))
    b = AntiIso(source, target, images, tuple(relations), name=name)
    for stanza in data.get("twists", ()):
        b = b.with_twist(parse_twist(stanza, b, scalars))
    definition = dict(data)
    if bindings:
        definition["bindings"] = {**data.get("bindings", {}), **bindings}
    triple = BispectralTriple(
        name=name,
        b=b,
        theta=parse(str(_field(data, "theta", what)), source_words),
        L=parse(str(_field(data, "L", what)), source_words),
        f=parse(str(_field(data, "f", what)), target_words),
        description=data.get("description", ""),
        parameters=dict(data.get("parameters", {})),
        wave=data.get("wave"),
        definition=definition,
    )
    for lhs, rhs, holds in b.verify_relations():
        if not holds:
            logger.warning("triple %s: relation %s = %s does not hold", name, lhs, rhs)
    logger.info("loaded triple %s", name)
    return triple


def load_triple(name, bindings=None):
    """A bundled triple by name, or a triple file by path."""
    return build_triple(read_definition(find_definition("triples", name)), bindings)


def load_job(name):
    data = read_definition(find_definition("jobs", name))
    data.setdefault("name", Path(name).stem)
    return data


def dump_triple(triple):
    """The triple as a definition dict; twists of ``triple.b`` become the twist stanza."""
    from .formatting import format_operator, format_scalar

    data = dict(triple.definition or {})
    data["name"] = triple.name
    twists = []
    for t in triple.b.twists:
        stanza = {"L": format_operator(t.L), "scale": format_scalar(t.scale)}
        if t.bound != conf.get("NILPOTENCY_BOUND"):
            stanza["bound"] = t.bound
        twists.append(stanza)
    data["twists"] = twists
    return data


def triple_context(triple, side, scalars=None):
    if side not in SIDES:
        raise DefinitionError(f"a triple side is 'source' or 'target', got {side!r}")
    realization = triple.b.source if side == "source" else triple.b.target
    return word_context(realization, scalars)


def resolve_context(name, triples=None, scalars=None):
    """Parse context by name: basic contexts or ``triple:NAME:source|target``.

    ``triples`` maps names to already loaded triples; other names are loaded
    from the bundled assets.
    """
    scalars = scalars or {}
    if name.startswith(TRIPLE_PREFIX):
        try:
            _, triple_name, side = name.split(":")
        except ValueError:
            raise DefinitionError(f"malformed triple context {name!r}") from None
        triple = (triples or {}).get(triple_name) or load_triple(triple_name)
        return triple_context(triple, side, scalars)
    context = context_for(name)
    if isinstance(context, OperatorContext):
        context.definitions.update(operator_definitions(context.rule, scalars))
    return context
