"""Line-oriented workspace files: rings, modules, complexes, maps, towers,
metrics.

The format is declarative and hand-authorable; see README for the full
grammar.  Briefly:

    RING p n
    MODULE name j1 j2 ...          # Jordan block sizes; none = zero module
    COMPLEX name
      AT degree modulename
      DIFF degree e11 e12 ...      # row-major entries mod p, to degree+1
    END
    MAP name source target
      AT degree e11 e12 ...
    END
    TOWER name
      PREFIX c1 c2 ...
      CONNECT m1 m2 ...
      TAIL truncation modulename | TAIL constant complexname
    END
    METRIC name
      DUAL
      PIECE ray-above <expr> | PIECE ray-below <expr> | PIECE interval <expr> <expr>
    END

Metric piece bounds are integer-linear expressions in the level n, e.g.
"-n", "n+1", "2*n-3".  Level 1 is always the whole category regardless of
the pieces.  Everything is re-validated on load: d^2 = 0, R-linearity of
every matrix, commutation of chain-map squares; violations are reported
with the offending object and position.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import Matrix
from .rmodule import RModule, RModuleMap, Ring, zero_module
from .complexes import ChainMap, Complex, ValidationError
from .metric import GoodMetric, VanishingSpec, metric_i, metric_ii, metric_iii
from .cauchy import ConstantTail, Tower, TruncationTail


class WorkspaceError(ValueError):
    """Parse or validation failure, with position and object context."""


@dataclass(frozen=True)
class LinearExpr:
    """a*n + b, evaluated at ball level n."""

    a: int
    b: int

    def __call__(self, n: int) -> int:
        return self.a * n + self.b

    def __str__(self):
        if self.a == 0:
            return str(self.b)
        an = {1: "n", -1: "-n"}.get(self.a, "%d*n" % self.a)
        if self.b == 0:
            return an
        return "%s%+d" % (an, self.b)


def parse_linear(text: str) -> LinearExpr:
    """Accepts integer-linear expressions in n: "7", "n", "-n", "2*n",
    "n+1", "-3*n-2" and the like."""
    s = text.replace(" ", "")
    try:
        if "n" not in s:
            return LinearExpr(0, int(s))
        left, _, right = s.partition("n")
        if left in ("", "+"):
            a = 1
        elif left == "-":
            a = -1
        else:
            a = int(left[:-1] if left.endswith("*") else left)
        if right:
            if right[0] not in "+-":
                raise ValueError(right)
            b = int(right)
        else:
            b = 0
        return LinearExpr(a, b)
    except ValueError:
        raise WorkspaceError("cannot parse linear expression %r" % text)


@dataclass
class MetricSpec:
    """Declarative custom ball family; evaluates pieces for levels n >= 2."""

    name: str
    dual: bool = False
    pieces: list[tuple] = field(default_factory=list)  # (kind, LinearExpr[, LinearExpr])

    def build(self) -> GoodMetric:
        pieces = list(self.pieces)

        def family(n: int) -> VanishingSpec:
            if n == 1:
                return VanishingSpec.empty()
            spec = VanishingSpec.empty()
            for p in pieces:
                if p[0] == "ray-above":
                    spec = spec.union(VanishingSpec.ray_above(p[1](n)))
                elif p[0] == "ray-below":
                    spec = spec.union(VanishingSpec.ray_below(p[1](n)))
                else:
                    spec = spec.union(VanishingSpec.interval(p[1](n), p[2](n)))
            return spec

        return GoodMetric(self.name, family, dual=self.dual)


@dataclass
class Workspace:
    ring: Ring
    modules: dict[str, RModule] = field(default_factory=dict)
    complexes: dict[str, Complex] = field(default_factory=dict)
    maps: dict[str, ChainMap] = field(default_factory=dict)
    towers: dict[str, Tower] = field(default_factory=dict)
    metric_specs: dict[str, MetricSpec] = field(default_factory=dict)

    def metric(self, name: str) -> GoodMetric:
        """Resolve a metric name: custom names first, then i/ii/iii[:dual]."""
        base, _, flag = name.partition(":")
        dual = flag == "dual"
        if flag not in ("", "dual"):
            raise WorkspaceError("unknown metric flag %r" % flag)
        if base in self.metric_specs:
            spec = self.metric_specs[base]
            m = spec.build()
            if dual:
                m = GoodMetric(m.name, m._family, dual=not spec.dual,
                               support_level=m._support_level)
            return m
        table = {"i": metric_i, "ii": metric_ii, "iii": metric_iii}
        if base in table:
            return table[base](dual=dual)
        raise WorkspaceError("unknown metric %r" % name)


def _tokens(line: str) -> list[str]:
    return line.split("#", 1)[0].split()


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.at = 0

    def error(self, msg: str) -> WorkspaceError:
        return WorkspaceError("line %d: %s" % (self.at, msg))

    def next_tokens(self) -> list[str] | None:
        while self.at < len(self.lines):
            self.at += 1
            toks = _tokens(self.lines[self.at - 1])
            if toks:
                return toks
        return None

    def parse(self) -> Workspace:
        ws: Workspace | None = None
        names: set[str] = set()

        def claim(name: str):
            if name in names:
                raise self.error("duplicate name %r" % name)
            names.add(name)

        while True:
            toks = self.next_tokens()
            if toks is None:
                break
            head = toks[0].upper()
            if head == "RING":
                if ws is not None:
                    raise self.error("RING may only be declared once")
                if len(toks) != 3:
                    raise self.error("RING expects: RING p n")
                try:
                    ws = Workspace(ring=Ring(int(toks[1]), int(toks[2])))
                except ValueError as e:
                    raise self.error(str(e))
                continue
            if ws is None:
                raise self.error("the first declaration must be RING")
            if head == "MODULE":
                if len(toks) < 2:
                    raise self.error("MODULE expects a name")
                claim(toks[1])
                try:
                    ws.modules[toks[1]] = RModule(ws.ring, tuple(int(t) for t in toks[2:]))
                except ValueError as e:
                    raise self.error("module %r: %s" % (toks[1], e))
            elif head == "COMPLEX":
                if len(toks) != 2:
                    raise self.error("COMPLEX expects a name")
                claim(toks[1])
                ws.complexes[toks[1]] = self._parse_complex(ws, toks[1])
            elif head == "MAP":
                if len(toks) != 4:
                    raise self.error("MAP expects: MAP name source target")
                claim(toks[1])
                ws.maps[toks[1]] = self._parse_map(ws, toks[1], toks[2], toks[3])
            elif head == "TOWER":
                if len(toks) != 2:
                    raise self.error("TOWER expects a name")
                claim(toks[1])
                ws.towers[toks[1]] = self._parse_tower(ws, toks[1])
            elif head == "METRIC":
                if len(toks) != 2:
                    raise self.error("METRIC expects a name")
                claim(toks[1])
                ws.metric_specs[toks[1]] = self._parse_metric(toks[1])
            else:
                raise self.error("unknown declaration %r" % toks[0])
        if ws is None:
            raise WorkspaceError("empty workspace: no RING declaration")
        return ws

    def _matrix(self, entries: list[str], rows: int, cols: int, p: int, what: str) -> Matrix:
        if len(entries) != rows * cols:
            raise self.error("%s expects %d entries (%dx%d), got %d"
                             % (what, rows * cols, rows, cols, len(entries)))
        try:
            vals = [int(e) for e in entries]
        except ValueError:
            raise self.error("%s: entries must be integers" % what)
        arr = np.array(vals, dtype=np.int64).reshape(rows, cols) if vals else \
            np.zeros((rows, cols), dtype=np.int64)
        return Matrix(arr, p)

    def _parse_complex(self, ws: Workspace, name: str) -> Complex:
        comps: dict[int, RModule] = {}
        raw_diffs: dict[int, list[str]] = {}
        while True:
            toks = self.next_tokens()
            if toks is None:
                raise self.error("unterminated COMPLEX %r" % name)
            head = toks[0].upper()
            if head == "END":
                break
            if head == "AT":
                if len(toks) != 3:
                    raise self.error("AT expects: AT degree modulename")
                deg = self._int(toks[1], "degree")
                if toks[2] not in ws.modules:
                    raise self.error("unknown module %r" % toks[2])
                if deg in comps:
                    raise self.error("duplicate component at degree %d" % deg)
                comps[deg] = ws.modules[toks[2]]
            elif head == "DIFF":
                if len(toks) < 2:
                    raise self.error("DIFF expects: DIFF degree entries...")
                deg = self._int(toks[1], "degree")
                raw_diffs[deg] = toks[2:]
            else:
                raise self.error("unexpected %r inside COMPLEX" % toks[0])
        diffs: dict[int, RModuleMap] = {}
        for deg, entries in raw_diffs.items():
            src = comps.get(deg, zero_module(ws.ring))
            tgt = comps.get(deg + 1, zero_module(ws.ring))
            mat = self._matrix(entries, tgt.dim, src.dim, ws.ring.p,
                               "complex %r differential at %d" % (name, deg))
            try:
                diffs[deg] = RModuleMap(src, tgt, mat)
            except ValueError as e:
                raise self.error("complex %r differential at %d: %s" % (name, deg, e))
        try:
            return Complex(ws.ring, comps, diffs)
        except ValidationError as e:
            raise self.error("complex %r: %s" % (name, e))

    def _parse_map(self, ws: Workspace, name: str, src_name: str, tgt_name: str) -> ChainMap:
        if src_name not in ws.complexes:
            raise self.error("unknown complex %r" % src_name)
        if tgt_name not in ws.complexes:
            raise self.error("unknown complex %r" % tgt_name)
        src, tgt = ws.complexes[src_name], ws.complexes[tgt_name]
        comps: dict[int, RModuleMap] = {}
        while True:
            toks = self.next_tokens()
            if toks is None:
                raise self.error("unterminated MAP %r" % name)
            head = toks[0].upper()
            if head == "END":
                break
            if head != "AT":
                raise self.error("unexpected %r inside MAP" % toks[0])
            deg = self._int(toks[1], "degree")
            s, t = src.component(deg), tgt.component(deg)
            mat = self._matrix(toks[2:], t.dim, s.dim, ws.ring.p,
                               "map %r component at %d" % (name, deg))
            try:
                comps[deg] = RModuleMap(s, t, mat)
            except ValueError as e:
                raise self.error("map %r component at %d: %s" % (name, deg, e))
        try:
            return ChainMap(src, tgt, comps)
        except ValidationError as e:
            raise self.error("map %r: %s" % (name, e))

    def _parse_tower(self, ws: Workspace, name: str) -> Tower:
        prefix: list[Complex] = []
        maps: list[ChainMap] = []
        tail = None
        while True:
            toks = self.next_tokens()
            if toks is None:
                raise self.error("unterminated TOWER %r" % name)
            head = toks[0].upper()
            if head == "END":
                break
            if head == "PREFIX":
                for t in toks[1:]:
                    if t not in ws.complexes:
                        raise self.error("unknown complex %r" % t)
                    prefix.append(ws.complexes[t])
            elif head == "CONNECT":
                for t in toks[1:]:
                    if t not in ws.maps:
                        raise self.error("unknown map %r" % t)
                    maps.append(ws.maps[t])
            elif head == "TAIL":
                if len(toks) != 3:
                    raise self.error("TAIL expects: TAIL truncation|constant name")
                kind = toks[1].lower()
                if kind == "truncation":
                    if toks[2] not in ws.modules:
                        raise self.error("unknown module %r" % toks[2])
                    tail = TruncationTail(ws.modules[toks[2]])
                elif kind == "constant":
                    if toks[2] not in ws.complexes:
                        raise self.error("unknown complex %r" % toks[2])
                    tail = ConstantTail(ws.complexes[toks[2]])
                else:
                    raise self.error("unknown tail kind %r" % toks[1])
            else:
                raise self.error("unexpected %r inside TOWER" % toks[0])
        try:
            return Tower(ws.ring, prefix=prefix, prefix_maps=maps, tail=tail)
        except ValueError as e:
            raise self.error("tower %r: %s" % (name, e))

    def _parse_metric(self, name: str) -> MetricSpec:
        spec = MetricSpec(name=name)
        while True:
            toks = self.next_tokens()
            if toks is None:
                raise self.error("unterminated METRIC %r" % name)
            head = toks[0].upper()
            if head == "END":
                break
            if head == "DUAL":
                spec.dual = True
            elif head == "PIECE":
                if len(toks) < 3:
                    raise self.error("PIECE expects a kind and bounds")
                kind = toks[1].lower()
                try:
                    if kind in ("ray-above", "ray-below"):
                        if len(toks) != 3:
                            raise self.error("PIECE %s expects one bound" % kind)
                        spec.pieces.append((kind, parse_linear(toks[2])))
                    elif kind == "interval":
                        if len(toks) != 4:
                            raise self.error("PIECE interval expects two bounds")
                        spec.pieces.append((kind, parse_linear(toks[2]), parse_linear(toks[3])))
                    else:
                        raise self.error("unknown piece kind %r" % toks[1])
                except WorkspaceError as e:
                    raise self.error("metric %r: %s" % (name, e))
            else:
                raise self.error("unexpected %r inside METRIC" % toks[0])
        return spec

    def _int(self, tok: str, what: str) -> int:
        try:
            return int(tok)
        except ValueError:
            raise self.error("bad %s %r" % (what, tok))


def parse_workspace_text(text: str) -> Workspace:
    return _Parser(text).parse()


def parse_workspace(path: str) -> Workspace:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_workspace_text(fh.read())


# -- serialization -------------------------------------------------------------


def _entries(m: Matrix) -> str:
    return " ".join(str(int(v)) for v in m.a.ravel())


def serialize_workspace(ws: Workspace) -> str:
    """Canonical text form; parsing it back yields equal objects."""
    out = ["RING %d %d" % (ws.ring.p, ws.ring.n), ""]
    module_names: dict[tuple, str] = {}
    for name in sorted(ws.modules):
        module_names.setdefault(ws.modules[name].blocks, name)
        out.append("MODULE %s %s" % (name, " ".join(str(j) for j in ws.modules[name].blocks)))

    extra = 0

    def module_name(m: RModule) -> str:
        nonlocal extra
        if m.blocks in module_names:
            return module_names[m.blocks]
        extra += 1
        name = "_m%d" % extra
        module_names[m.blocks] = name
        out.append("MODULE %s %s" % (name, " ".join(str(j) for j in m.blocks)))
        return name

    # ensure every module appearing in a complex is declared
    for cname in sorted(ws.complexes):
        for i in ws.complexes[cname].degrees:
            module_name(ws.complexes[cname].component(i))
    for tname in sorted(ws.towers):
        tail = ws.towers[tname].tail
        if isinstance(tail, TruncationTail):
            module_name(tail.module)
    out.append("")
    for cname in sorted(ws.complexes):
        x = ws.complexes[cname]
        out.append("COMPLEX %s" % cname)
        for i in x.degrees:
            out.append("  AT %d %s" % (i, module_name(x.component(i))))
        for i in x.degrees:
            d = x.differential(i)
            if not d.is_zero():
                out.append("  DIFF %d %s" % (i, _entries(d.matrix)))
        out.append("END")
        out.append("")
    complex_names = {}
    for cname in sorted(ws.complexes):
        key = id(ws.complexes[cname])
        complex_names.setdefault(key, cname)

    def complex_name(x: Complex) -> str | None:
        for cname in sorted(ws.complexes):
            if ws.complexes[cname] == x:
                return cname
        return None

    for mname in sorted(ws.maps):
        f = ws.maps[mname]
        src, tgt = complex_name(f.source), complex_name(f.target)
        if src is None or tgt is None:
            raise WorkspaceError("map %r references a complex not in the workspace" % mname)
        out.append("MAP %s %s %s" % (mname, src, tgt))
        for i in sorted(f._components):
            out.append("  AT %d %s" % (i, _entries(f.component(i).matrix)))
        out.append("END")
        out.append("")
    for tname in sorted(ws.towers):
        t = ws.towers[tname]
        out.append("TOWER %s" % tname)
        if t.prefix:
            names = [complex_name(x) for x in t.prefix]
            if any(n is None for n in names):
                raise WorkspaceError("tower %r prefix entry not in the workspace" % tname)
            out.append("  PREFIX %s" % " ".join(names))
        if t.prefix_maps:
            mnames = []
            for f in t.prefix_maps:
                found = next((mn for mn in sorted(ws.maps) if ws.maps[mn] == f), None)
                if found is None:
                    raise WorkspaceError("tower %r connecting map not in the workspace" % tname)
                mnames.append(found)
            out.append("  CONNECT %s" % " ".join(mnames))
        if isinstance(t.tail, TruncationTail):
            out.append("  TAIL truncation %s" % module_name(t.tail.module))
        elif isinstance(t.tail, ConstantTail):
            cn = complex_name(t.tail.complex)
            if cn is None:
                raise WorkspaceError("tower %r tail complex not in the workspace" % tname)
            out.append("  TAIL constant %s" % cn)
        out.append("END")
        out.append("")
    for mname in sorted(ws.metric_specs):
        spec = ws.metric_specs[mname]
        out.append("METRIC %s" % mname)
        if spec.dual:
            out.append("  DUAL")
        for p in spec.pieces:
            if p[0] == "interval":
                out.append("  PIECE interval %s %s" % (p[1], p[2]))
            else:
                out.append("  PIECE %s %s" % (p[0], p[1]))
        out.append("END")
        out.append("")
    return "\n".join(out).rstrip() + "\n"
