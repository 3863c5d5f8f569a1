"""Line-oriented tower description files.

Grammar, one directive per line, '#' starts a comment:

    params n m            parameter names for the constant field
    option se_window 30   options: se_window, ring_fast_path
    gen x : 1             generator with its increment expression
    seed x : x            representative seed for that generator's level

Generator lines are read top to bottom; each increment expression may
use the parameters and the generators declared above it.  Seed lines
must name an already declared generator and parse to a monic polynomial
in that generator.
"""

from .errors import ParseError
from .exprio import parse_expression
from .tower import Generator, TowerSpec

_OPTIONS = ("se_window", "ring_fast_path")


def load_tower_file(path):
    """TowerSpec from a tower description file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_tower_text(fh.read())


def parse_tower_text(text):
    """TowerSpec from the contents of a tower description file."""
    params = None
    options = {}
    records = []
    seeds = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if word == "params":
            if params is not None:
                raise ParseError("second params line", line=lineno)
            if records:
                raise ParseError("params must come before generators",
                                 line=lineno)
            params = rest.split()
        elif word == "option":
            key, _, val = rest.partition(" ")
            val = val.strip()
            if key not in _OPTIONS or not val:
                raise ParseError(f"unknown option line {line!r}", line=lineno)
            options[key] = val
        elif word == "gen":
            name, expr = _split_decl(rest, lineno)
            records.append((name, expr, lineno))
            seeds[name] = []
        elif word == "seed":
            name, expr = _split_decl(rest, lineno)
            if name not in seeds:
                raise ParseError(f"seed for undeclared generator {name!r}",
                                 line=lineno)
            seeds[name].append((expr, lineno))
        else:
            raise ParseError(f"unknown directive {word!r}", line=lineno)
    if not records:
        raise ParseError("no generators declared", line=None)
    if "se_window" in options:
        try:
            options["se_window"] = int(options["se_window"])
        except ValueError:
            raise ParseError("se_window must be an integer", line=None)

    params = tuple(params or ())
    gens = []
    for name, expr, lineno in records:
        prefix = TowerSpec(tuple(gens), params=params)
        delta = _parse_at(prefix, expr, lineno)
        probe = TowerSpec(tuple(gens) + (Generator(name, delta),),
                          params=params)
        reps = [_seed_poly(probe, sexpr, name, sline)
                for sexpr, sline in seeds[name]]
        gens.append(Generator(name, delta, seed_reps=reps))
    return TowerSpec(tuple(gens), params=params, **options)


def _split_decl(rest, lineno):
    name, sep, expr = rest.partition(":")
    name = name.strip()
    expr = expr.strip()
    if not sep or not name or not expr:
        raise ParseError("expected 'name : expression'", line=lineno)
    return name, expr


def _parse_at(spec, expr, lineno):
    try:
        return parse_expression(spec, expr)
    except ParseError as e:
        raise ParseError(e.message, position=e.position,
                         line=lineno) from None


def _seed_poly(spec, expr, name, lineno):
    v = _parse_at(spec, expr, lineno)
    if not v.den.is_one():
        raise ParseError(f"seed for {name!r} is not a polynomial",
                         line=lineno)
    return v.num
