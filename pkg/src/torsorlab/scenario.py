"""Sectioned plain-text scenario files.

Format::

    # comments run to end of line
    [group]
    kind = cyclic            # cyclic | permutations | table
    order = 2                # cyclic only
    perms = 1 0 2; 0 2 1     # permutations: image lists, one per generator
    table = 0 1; 1 0         # table: multiplication table rows
    generators = 1           # table only, optional

    [module M]
    rank = 1
    relations = 2 0; 0 3     # optional; matrix whose columns are relations
    action = -1              # one matrix per group generator: action.0, action.1, ...

    [gset S]
    size = 2
    images = 1 0             # one permutation per generator: images.0, ...

    [scenario]
    points = S
    ambient = M
    point.0 = 1              # pointmap on orbit representatives
    triv = 2                 # generators of the trivial classes, one row each
    target = A
    phi = 1                  # target rank x number of triv generators
    components = C           # optional
    component_map = 0 1      # optional, required with components

    [relations]
    generators = P Q
    degree_one = Q
    relation = 0 2; 2 -1     # one row per relation

    [curve]
    p = 5
    n = 2
    a = 1
    b = 0

Matrices are written row by row, rows separated by ``;`` and entries by
whitespace.  A single key with several generators is numbered: ``action.0``,
``action.1``...
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import fgab
from .cycles import CycleModel
from .errors import TorsorLabError, ValidationError
from .fgab import FgAbGroup
from .gmod import EquivariantHom, FiniteGroup, GModule, GSet, submodule


class ParseError(TorsorLabError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


# ---------------------------------------------------------------------------
# data


@dataclass
class GroupSpec:
    kind: str
    order: int | None = None
    perms: list | None = None
    table: list | None = None
    generators: list | None = None


@dataclass
class ModuleSpec:
    rank: int
    relations: list | None  # rows of the relation matrix
    actions: list  # one matrix per generator


@dataclass
class GSetSpec:
    size: int
    images: list  # one permutation per generator


@dataclass
class ScenarioSpec:
    points: str
    ambient: str
    point_values: dict  # point -> vector
    triv: list  # generator rows
    target: str
    phi: list
    components: str | None = None
    component_map: list | None = None


@dataclass
class RelationsSpec:
    generators: list
    relations: list
    degree_one: str | None = None


@dataclass
class CurveSpec:
    p: int
    n: int
    a: int
    b: int


@dataclass
class ScenarioFile:
    group: GroupSpec | None = None
    modules: dict = field(default_factory=dict)
    gsets: dict = field(default_factory=dict)
    scenario: ScenarioSpec | None = None
    relations: RelationsSpec | None = None
    curve: CurveSpec | None = None


# ---------------------------------------------------------------------------
# parsing

_SECTION = re.compile(r"^\[\s*([a-z]+)(?:\s+([A-Za-z_][A-Za-z0-9_]*))?\s*\]$")
_KEY = re.compile(r"^([a-z_]+)(?:\.(\d+))?$")

_ALLOWED = {
    "group": {"kind", "order", "perms", "table", "generators"},
    "module": {"rank", "relations", "action"},
    "gset": {"size", "images"},
    "scenario": {"points", "ambient", "point", "triv", "target", "phi", "components", "component_map"},
    "relations": {"generators", "relation", "degree_one"},
    "curve": {"p", "n", "a", "b"},
}
_NAMED = {"module", "gset"}


class _Entry:
    __slots__ = ("value", "line", "column")

    def __init__(self, value, line, column):
        self.value, self.line, self.column = value, line, column


def _ints(entry):
    out = []
    for m in re.finditer(r"\S+", entry.value):
        try:
            out.append(int(m.group()))
        except ValueError:
            raise ParseError(f"expected an integer, got {m.group()!r}", entry.line, entry.column + m.start()) from None
    return out


def _int(entry):
    vals = _ints(entry)
    if len(vals) != 1:
        raise ParseError("expected a single integer", entry.line, entry.column)
    return vals[0]


def _matrix(entry, cols=None):
    if not entry.value.strip():
        return []
    rows = []
    offset = 0
    for chunk in entry.value.split(";"):
        sub = _Entry(chunk, entry.line, entry.column + offset)
        offset += len(chunk) + 1
        row = _ints(sub)
        if cols is None:
            cols = len(row)
        if len(row) != cols:
            raise ParseError(f"arity mismatch: row has {len(row)} entries, expected {cols}", sub.line, sub.column)
        rows.append(row)
    return rows


def _numbered(sec, key, header):
    """Values of ``key`` or ``key.0, key.1, ...`` in index order."""
    out = {}
    for (k, idx), entry in sec.items():
        if k == key:
            out[0 if idx is None else idx] = entry
    if sorted(out) != list(range(len(out))):
        raise ParseError(f"{key}.N entries must be numbered 0..{len(out) - 1}", header, 1)
    return [out[i] for i in range(len(out))]


def _tokenize(text):
    sections = []  # (kind, name, header line, {(key, idx): entry})
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        col = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("["):
            m = _SECTION.match(stripped)
            if not m:
                raise ParseError(f"malformed section header {stripped!r}", lineno, col)
            kind, name = m.group(1), m.group(2)
            if kind not in _ALLOWED:
                raise ParseError(f"unknown section [{kind}]", lineno, col)
            if (kind in _NAMED) != (name is not None):
                raise ParseError(f"section [{kind}] {'needs' if kind in _NAMED else 'takes no'} name", lineno, col)
            current = (kind, name, lineno, {})
            sections.append(current)
            continue
        if current is None:
            raise ParseError("key outside of any section", lineno, col)
        if "=" not in stripped:
            raise ParseError("expected 'key = value'", lineno, col)
        key, value = line.split("=", 1)
        km = _KEY.match(key.strip())
        if not km or km.group(1) not in _ALLOWED[current[0]]:
            raise ParseError(f"unknown key {key.strip()!r} in [{current[0]}]", lineno, col)
        idx = int(km.group(2)) if km.group(2) is not None else None
        slot = (km.group(1), idx)
        if slot in current[3]:
            raise ParseError(f"duplicate key {key.strip()!r}", lineno, col)
        vcol = len(key) + 2 + (len(value) - len(value.lstrip()))
        current[3][slot] = _Entry(value.strip(), lineno, vcol)
    return sections


def _require(sec, key, kind, header):
    if (key, None) not in sec:
        raise ParseError(f"[{kind}] is missing '{key}'", header, 1)
    return sec[(key, None)]


def parse(text):
    """Parse scenario text into a :class:`ScenarioFile` (data only)."""
    out = ScenarioFile()
    for kind, name, header, sec in _tokenize(text):
        if kind == "group":
            if out.group is not None:
                raise ParseError("duplicate [group]", header, 1)
            gk = _require(sec, "kind", kind, header).value
            if gk == "cyclic":
                out.group = GroupSpec("cyclic", order=_int(_require(sec, "order", kind, header)))
            elif gk == "permutations":
                out.group = GroupSpec("permutations", perms=_matrix(_require(sec, "perms", kind, header)))
            elif gk == "table":
                gens = _ints(sec[("generators", None)]) if ("generators", None) in sec else None
                out.group = GroupSpec("table", table=_matrix(_require(sec, "table", kind, header)), generators=gens)
            else:
                e = sec[("kind", None)]
                raise ParseError(f"unknown group kind {gk!r}", e.line, e.column)
        elif kind == "module":
            if name in out.modules:
                raise ParseError(f"duplicate module {name}", header, 1)
            rank = _int(_require(sec, "rank", kind, header))
            rels = _matrix(sec[("relations", None)]) if ("relations", None) in sec else None
            if rels is not None and len(rels) != rank:
                e = sec[("relations", None)]
                raise ParseError(f"arity mismatch: relations need {rank} rows", e.line, e.column)
            acts = [_matrix(e, rank) for e in _numbered(sec, "action", header)]
            for e, A in zip(_numbered(sec, "action", header), acts):
                if len(A) != rank:
                    raise ParseError(f"arity mismatch: action needs {rank} rows", e.line, e.column)
            out.modules[name] = ModuleSpec(rank, rels, acts)
        elif kind == "gset":
            if name in out.gsets:
                raise ParseError(f"duplicate gset {name}", header, 1)
            size = _int(_require(sec, "size", kind, header))
            images = []
            for e in _numbered(sec, "images", header):
                row = _ints(e)
                if len(row) != size:
                    raise ParseError(f"arity mismatch: permutation needs {size} entries", e.line, e.column)
                images.append(row)
            out.gsets[name] = GSetSpec(size, images)
        elif kind == "scenario":
            if out.scenario is not None:
                raise ParseError("duplicate [scenario]", header, 1)
            pts = {idx: _ints(e) for (k, idx), e in sorted(sec.items(), key=lambda kv: (kv[0][0], kv[0][1] or 0)) if k == "point"}
            if None in pts:
                raise ParseError("point values are keyed point.N", header, 1)
            comps = sec[("components", None)].value if ("components", None) in sec else None
            cmap = _ints(sec[("component_map", None)]) if ("component_map", None) in sec else None
            out.scenario = ScenarioSpec(
                points=_require(sec, "points", kind, header).value,
                ambient=_require(sec, "ambient", kind, header).value,
                point_values=pts,
                triv=_matrix(_require(sec, "triv", kind, header)),
                target=_require(sec, "target", kind, header).value,
                phi=_matrix(_require(sec, "phi", kind, header)),
                components=comps,
                component_map=cmap,
            )
        elif kind == "relations":
            if out.relations is not None:
                raise ParseError("duplicate [relations]", header, 1)
            gens = _require(sec, "generators", kind, header).value.split()
            rels = [row for e in _numbered(sec, "relation", header) for row in _matrix(e, len(gens))]
            d1 = sec[("degree_one", None)].value if ("degree_one", None) in sec else None
            out.relations = RelationsSpec(gens, rels, d1)
        elif kind == "curve":
            if out.curve is not None:
                raise ParseError("duplicate [curve]", header, 1)
            out.curve = CurveSpec(*(_int(_require(sec, k, kind, header)) for k in ("p", "n", "a", "b")))
    if out.group is None and out.relations is None and out.curve is None:
        raise ParseError("missing [group]")
    if out.group is None and (out.modules or out.gsets or out.scenario):
        raise ParseError("missing [group]")
    return out


def parse_file(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# ---------------------------------------------------------------------------
# printing


def _fmt_row(row):
    return " ".join(str(x) for x in row)


def _fmt_matrix(rows):
    return "; ".join(_fmt_row(r) for r in rows)


def dumps(sf):
    """Canonical text of a :class:`ScenarioFile`; ``parse(dumps(x)) == x``."""
    out = []
    if sf.group is not None:
        g = sf.group
        out.append("[group]")
        out.append(f"kind = {g.kind}")
        if g.kind == "cyclic":
            out.append(f"order = {g.order}")
        elif g.kind == "permutations":
            out.append(f"perms = {_fmt_matrix(g.perms)}")
        else:
            out.append(f"table = {_fmt_matrix(g.table)}")
            if g.generators is not None:
                out.append(f"generators = {_fmt_row(g.generators)}")
        out.append("")
    for name, m in sf.modules.items():
        out.append(f"[module {name}]")
        out.append(f"rank = {m.rank}")
        if m.relations is not None:
            out.append(f"relations = {_fmt_matrix(m.relations)}")
        for i, A in enumerate(m.actions):
            out.append(f"action.{i} = {_fmt_matrix(A)}")
        out.append("")
    for name, gs in sf.gsets.items():
        out.append(f"[gset {name}]")
        out.append(f"size = {gs.size}")
        for i, p in enumerate(gs.images):
            out.append(f"images.{i} = {_fmt_row(p)}")
        out.append("")
    if sf.scenario is not None:
        s = sf.scenario
        out.append("[scenario]")
        out.append(f"points = {s.points}")
        out.append(f"ambient = {s.ambient}")
        for t in sorted(s.point_values):
            out.append(f"point.{t} = {_fmt_row(s.point_values[t])}")
        out.append(f"triv = {_fmt_matrix(s.triv)}")
        out.append(f"target = {s.target}")
        out.append(f"phi = {_fmt_matrix(s.phi)}")
        if s.components is not None:
            out.append(f"components = {s.components}")
        if s.component_map is not None:
            out.append(f"component_map = {_fmt_row(s.component_map)}")
        out.append("")
    if sf.relations is not None:
        r = sf.relations
        out.append("[relations]")
        out.append(f"generators = {' '.join(r.generators)}")
        if r.degree_one is not None:
            out.append(f"degree_one = {r.degree_one}")
        for i, row in enumerate(r.relations):
            out.append(f"relation.{i} = {_fmt_row(row)}")
        out.append("")
    if sf.curve is not None:
        c = sf.curve
        out.append("[curve]")
        out.extend(f"{k} = {getattr(c, k)}" for k in ("p", "n", "a", "b"))
        out.append("")
    return "\n".join(out)


# ---------------------------------------------------------------------------
# building library objects


@dataclass
class Built:
    group: FiniteGroup | None
    modules: dict
    gsets: dict
    model: CycleModel | None
    relations: object = None  # WcRelationSystem
    curve: object = None  # CurvePointGroup


def build_group(spec):
    if spec.kind == "cyclic":
        if spec.order < 1:
            raise ValidationError("order", "cyclic group order must be positive")
        return FiniteGroup.cyclic(spec.order)
    if spec.kind == "permutations":
        return FiniteGroup.from_permutations(spec.perms)
    return FiniteGroup.from_table(spec.table, spec.generators)


def build_module(G, spec):
    base = FgAbGroup(spec.rank, spec.relations if spec.relations else None)
    if len(spec.actions) != len(G.generators):
        raise ValidationError("arity", f"module needs {len(G.generators)} action matrices, got {len(spec.actions)}")
    return GModule.from_generators(G, base, spec.actions)


def build(sf):
    """Turn parsed data into groups, modules, G-sets and (if present) the
    cycle model; every constructor validates its own invariants."""
    extras = _build_extras(sf)
    if sf.group is None:
        return Built(None, {}, {}, None, *extras)
    G = build_group(sf.group)
    modules = {name: build_module(G, m) for name, m in sf.modules.items()}
    gsets = {}
    for name, gs in sf.gsets.items():
        if len(gs.images) != len(G.generators):
            raise ValidationError("arity", f"gset {name} needs {len(G.generators)} permutations")
        gsets[name] = GSet.from_generators(G, gs.images) if gs.images else GSet.trivial(G, gs.size)
    model = None
    if sf.scenario is not None:
        model = build_model(sf.scenario, G, modules, gsets)
    return Built(G, modules, gsets, model, *extras)


def _build_extras(sf):
    from .ellcurve import FiniteField, curve_group
    from .rationality import WcRelationSystem

    rel = curve = None
    if sf.relations is not None:
        r = sf.relations
        rel = WcRelationSystem(r.generators, r.relations, r.degree_one)
    if sf.curve is not None:
        c = sf.curve
        curve = curve_group(c.a, c.b, FiniteField(c.p, c.n))
    return rel, curve


def _lookup(table, name, what):
    if name not in table:
        raise ValidationError("reference", f"unknown {what} {name!r}")
    return table[name]


def build_model(s, G, modules, gsets):
    S = _lookup(gsets, s.points, "gset")
    amb = _lookup(modules, s.ambient, "module")
    A = _lookup(modules, s.target, "module")
    g = extend_pointmap(S, amb, s.point_values)
    triv, emb = submodule(amb, s.triv)
    phi = EquivariantHom(triv, A, s.phi)
    C = _lookup(gsets, s.components, "gset") if s.components is not None else None
    if (C is None) != (s.component_map is None):
        raise ValidationError("components", "components and component_map go together")
    return CycleModel(S, amb, g, triv, emb, phi, C, s.component_map)


def extend_pointmap(S, module, values):
    """Extend values given on some points to every point by ``g(t^s) = g(t)^s``,
    failing if two routes disagree (stabilizer not respected)."""
    G = S.group
    g = [None] * S.size
    for t, vec in sorted(values.items()):
        if not 0 <= t < S.size:
            raise ValidationError("reference", f"point {t} outside 0..{S.size - 1}")
        v = module.elem(vec)
        for s in G:
            u = S.act[s][t]
            w = module.act(v, s)
            if g[u] is None:
                g[u] = w
            elif g[u] != w:
                raise ValidationError("equivariance", f"point values disagree at {u}", point=u, sigma=s)
    missing = [t for t in range(S.size) if g[t] is None]
    if missing:
        raise ValidationError("coverage", f"no value reaches point(s) {missing}")
    return g


# ---------------------------------------------------------------------------
# library objects back to data


def _group_spec(G):
    if G.order == 1 or (G.generators == (1,) and all(G.mul[i][j] == (i + j) % G.order for i in G for j in G)):
        return GroupSpec("cyclic", order=G.order)
    return GroupSpec("table", table=[list(r) for r in G.mul], generators=list(G.generators))


def _module_spec(M):
    B = M.base
    rels = [list(r) for r in B.relation_matrix] if B.num_relations else None
    return ModuleSpec(B.rank, rels, [[list(r) for r in M.matrix(s)] for s in M.group.generators])


def model_to_file(model):
    """Data form of a cycle model (values on orbit representatives only)."""
    G = model.group
    sf = ScenarioFile(group=_group_spec(G))
    sf.modules["M"] = _module_spec(model.ambient)
    sf.modules["A"] = _module_spec(model.target)
    S = model.points
    sf.gsets["S"] = GSetSpec(S.size, [list(S.act[s]) for s in G.generators])
    reps = {orb[0]: list(model.pointmap[orb[0]].coords) for orb in S.orbits()}
    X = model.triv_embedding.matrix
    triv_rows = [[X[i][j] for i in range(len(X))] for j in range(len(X[0]) if X else 0)]
    comps = cmap = None
    if model.components.size > 1:
        C = model.components
        sf.gsets["C"] = GSetSpec(C.size, [list(C.act[s]) for s in G.generators])
        comps, cmap = "C", list(model.component_map)
    sf.scenario = ScenarioSpec(
        points="S", ambient="M", point_values=reps, triv=triv_rows, target="A",
        phi=[list(r) for r in model.phi.matrix], components=comps, component_map=cmap,
    )
    return sf
