"""Cayley-style quotient complexes over an abstract finite group.

The split construction puts a vertex at each group element x and, for each
simplex {x0} + D of the local template, the simplex {x} + {s_y x : y in D}.
The inert construction adds one vertex per set {x} + {s_t x : t in T_j} and
spans chambers x + {y_T(x) : T in D}.  Simplices are sorted tuples of vertex
keys, and every face of a generated simplex is stored.
"""

import json
import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from itertools import combinations

log = logging.getLogger(__name__)


# ---------------------------------------------------------------- groups

class GroupOracle:
    """Finite group with canonical hashable elements."""

    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def elements(self):
        """All elements, or None when the group is too large to list."""
        return None

    def color(self, a):
        """Vertex type of a, or None when no coloring is known."""
        return None

    def check_axioms(self, sample):
        e = self.identity()
        for a in sample:
            if self.mul(a, e) != a or self.mul(e, a) != a or self.mul(a, self.inv(a)) != e:
                return False
            for b in sample[:5]:
                for c in sample[:5]:
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                        return False
        return True


class CyclicGroup(GroupOracle):
    """Z/n under addition, optionally colored by a residue mod k (k | n)."""

    def __init__(self, n, colors=None):
        self.n = n
        self.k = colors

    def identity(self):
        return 0

    def mul(self, a, b):
        return (a + b) % self.n

    def inv(self, a):
        return -a % self.n

    def elements(self):
        return list(range(self.n))

    def color(self, a):
        return None if self.k is None else a % self.k


class DihedralGroup(GroupOracle):
    """Symmetries of the n-gon as pairs (r, f): x -> (-1)^f x + r."""

    def __init__(self, n):
        self.n = n

    def identity(self):
        return (0, 0)

    def mul(self, a, b):
        r1, f1 = a
        r2, f2 = b
        return ((r1 + (-1) ** f1 * r2) % self.n, f1 ^ f2)

    def inv(self, a):
        r, f = a
        return ((-r if not f else r) % self.n, f)

    def elements(self):
        return [(r, f) for f in (0, 1) for r in range(self.n)]


class PermutationGroup(GroupOracle):
    """Subgroup of S_m generated by permutations (tuples); elements found by closure."""

    def __init__(self, gens):
        self.gens = [tuple(g) for g in gens]
        self.m = len(self.gens[0])
        self._elements = None

    def identity(self):
        return tuple(range(self.m))

    def mul(self, a, b):
        # (a b)(i) = a(b(i))
        return tuple(a[i] for i in b)

    def inv(self, a):
        out = [0] * self.m
        for i, x in enumerate(a):
            out[x] = i
        return tuple(out)

    def elements(self):
        if self._elements is None:
            seen = {self.identity()}
            queue = deque(seen)
            while queue:
                a = queue.popleft()
                for g in self.gens:
                    b = self.mul(g, a)
                    if b not in seen:
                        seen.add(b)
                        queue.append(b)
            self._elements = sorted(seen)
        return self._elements


class MatrixGroupModN(GroupOracle):
    """Reduced gates as 5x5 matrices over O_E/n, optionally modulo central scalars.

    Elements are canonical tuples of residue pairs; with ``scalars`` the
    representative of a coset is the least one under the scalar action.
    """

    def __init__(self, n, scalars=None):
        from .modn import ModNMatrix
        self.n = n
        self._M = ModNMatrix
        self.scalars = scalars or []

    def key(self, M):
        if not self.scalars:
            return tuple(map(tuple, M.pairs()))
        return min(tuple(map(tuple, (M * z).pairs())) for z in self.scalars)

    def matrix(self, k):
        return self._M.from_pairs([list(r) for r in k], self.n)

    def identity(self):
        return self.key(self._M.identity(self.n))

    def mul(self, a, b):
        return self.key(self.matrix(a) * self.matrix(b))

    def inv(self, a):
        return self.key(self.matrix(a).inverse())


def unit_circle(n):
    """U_1(Z/n) = {z in O_E/n : z zbar = 1}, listed by brute force."""
    from .modn import ModNScalar
    out = []
    for r in range(n):
        for s in range(n):
            z = ModNScalar(r, s, n)
            if z * z.conj() == ModNScalar(1, 0, n):
                out.append(z)
    return out


def _canon(v):
    if isinstance(v, (frozenset, set)):
        return ("set",) + tuple(sorted((_canon(a) for a in v), key=repr))
    if isinstance(v, tuple):
        return tuple(_canon(a) for a in v)
    return v


def _vkey(v):
    """Sort key for vertices that does not depend on set iteration order."""
    return repr(_canon(v))


# ---------------------------------------------------------------- templates

@dataclass
class Template:
    """Local structure at x0.

    q: template vertices other than x0; simplices: tuples of vertices of q
    (each spans a simplex with x0); colors: type of each vertex relative to x0.
    For the inert case, parts maps a key j to T_j and chambers lists tuples of
    part keys spanning a top simplex with x0.
    """
    q: list
    simplices: list
    colors: dict = field(default_factory=dict)
    parts: dict = field(default_factory=dict)
    chambers: list = field(default_factory=list)
    part_colors: dict = field(default_factory=dict)


# ---------------------------------------------------------------- complexes

@dataclass
class QuotientComplex:
    vertices: dict = field(default_factory=dict)  # key -> color (or None)
    simplices: dict = field(default_factory=lambda: defaultdict(set))  # dim -> set of tuples
    provenance: dict = field(default_factory=dict)
    complete: bool = True

    def add_simplex(self, keys):
        keys = tuple(sorted(set(keys), key=_vkey))
        for r in range(1, len(keys) + 1):
            for face in combinations(keys, r):
                self.simplices[r - 1].add(face)

    def counts(self):
        return {d: len(s) for d, s in sorted(self.simplices.items()) if s}

    def dimension(self):
        return max((d for d, s in self.simplices.items() if s), default=-1)

    def is_downward_closed(self):
        for d, simp in self.simplices.items():
            if d == 0:
                continue
            for s in simp:
                for face in combinations(s, d):
                    if face not in self.simplices[d - 1]:
                        return False
        return True

    def coloring_valid(self):
        """Vertices of every simplex carry distinct colors (vacuous without colors)."""
        if any(c is None for c in self.vertices.values()):
            return True
        for simp in self.simplices.values():
            for s in simp:
                cols = [self.vertices[v] for v in s]
                if len(set(cols)) != len(cols):
                    return False
        return True

    def same_as(self, other):
        return (set(self.vertices) == set(other.vertices)
                and {d: s for d, s in self.simplices.items() if s}
                == {d: s for d, s in other.simplices.items() if s})

    def to_jsonl(self, path=None):
        lines = []
        for d in sorted(self.simplices):
            for s in sorted(self.simplices[d], key=_vkey):
                cols = sorted((self.vertices.get(v) for v in s), key=lambda c: (c is None, c))
                lines.append(json.dumps({"dim": d, "colors": cols, "vertices": [_jsonable(v) for v in s]},
                                        sort_keys=True))
        text = "\n".join(lines) + ("\n" if lines else "")
        if path:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def _jsonable(v):
    if isinstance(v, (tuple, list, frozenset)):
        return [_jsonable(x) for x in (sorted(v, key=_vkey) if isinstance(v, frozenset) else v)]
    return v


def _check_gate_map(template, gate_map):
    missing = [x for x in template.q if x not in gate_map]
    if missing:
        log.warning("gate map is missing %d of %d template vertices; exploratory mode",
                    len(missing), len(template.q))
    return not missing


def build_split_complex(group, gate_map, template):
    """Complex with a vertex per group element and translated template simplices."""
    complete = _check_gate_map(template, gate_map)
    elems = group.elements()
    if elems is None:
        raise ValueError("the group cannot be enumerated; use explore_vertex")
    c = QuotientComplex(provenance={"construction": "split", "order": len(elems),
                                    "template_vertices": len(template.q)},
                        complete=complete)
    for g in elems:
        c.vertices[g] = group.color(g)
    for x1 in elems:
        c.add_simplex([x1])
        for delta in template.simplices:
            if not all(y in gate_map for y in delta):
                continue
            c.add_simplex([x1] + [group.mul(gate_map[y], x1) for y in delta])
    return c


def _y_vertex(group, gate_map, T, x):
    return ("y", frozenset([x] + [group.mul(gate_map[t], x) for t in T]))


def build_inert_complex(group, gate_map, template):
    """Inert construction: group vertices, filled-in y_T(x) vertices, chambers through x."""
    complete = _check_gate_map(template, gate_map)
    elems = group.elements()
    if elems is None:
        raise ValueError("the group cannot be enumerated; use explore_vertex")
    c = QuotientComplex(provenance={"construction": "inert", "order": len(elems),
                                    "parts": len(template.parts)},
                        complete=complete)
    usable = {j: T for j, T in template.parts.items() if all(t in gate_map for t in T)}
    for x in elems:
        key = ("g", x)
        c.vertices[key] = group.color(x)
        c.add_simplex([key])
        for j, T in usable.items():
            c.vertices[_y_vertex(group, gate_map, T, x)] = template.part_colors.get(j)
        for ch in template.chambers:
            if all(j in usable for j in ch):
                c.add_simplex([key] + [_y_vertex(group, gate_map, usable[j], x) for j in ch])
    return c


# ---------------------------------------------------------------- brute-force oracles

def _closure(tops):
    """All nonempty subsets of the given sets, by repeatedly deleting one vertex."""
    out = defaultdict(set)
    frontier = {frozenset(t) for t in tops}
    while frontier:
        nxt = set()
        for s in frontier:
            key = tuple(sorted(s, key=_vkey))
            if key in out[len(s) - 1]:
                continue
            out[len(s) - 1].add(key)
            if len(s) > 1:
                nxt.update(s - {v} for v in s)
        frontier = nxt
    return out


def _orbit(group, start):
    """Right-translation orbit of a set of elements, walking generators of the group."""
    elems = group.elements()
    seen = {frozenset(start)}
    queue = deque(seen)
    while queue:
        s = queue.popleft()
        for h in elems:
            t = frozenset(group.mul(a, h) for a in s)
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def brute_force_split(group, gate_map, template):
    """Orbits of the simplices {e} + {s_y : y in D} under right translation, then closure."""
    e = group.identity()
    tops = set()
    for delta in template.simplices:
        if all(y in gate_map for y in delta):
            tops |= _orbit(group, [e] + [gate_map[y] for y in delta])
    tops |= {frozenset([g]) for g in group.elements()}
    return set(group.elements()), _closure(tops)


def brute_force_inert(group, gate_map, template):
    """Chambers at the identity built from explicit element sets, translated by every x."""
    e = group.identity()
    usable = {j: T for j, T in template.parts.items() if all(t in gate_map for t in T)}
    base_y = {j: frozenset([e] + [gate_map[t] for t in T]) for j, T in usable.items()}
    tops = set()
    verts = set()
    for x in group.elements():
        def shift(s):
            return ("y", frozenset(group.mul(a, x) for a in s))
        verts.add(("g", x))
        tops.add(frozenset([("g", x)]))
        for j in usable:
            verts.add(shift(base_y[j]))
        for ch in template.chambers:
            if all(j in usable for j in ch):
                tops.add(frozenset([("g", x)] + [shift(base_y[j]) for j in ch]))
    return verts, _closure(tops)


def equals_oracle(c, oracle):
    verts, simp = oracle
    mine = {d: s for d, s in c.simplices.items() if s}
    theirs = {d: s for d, s in simp.items() if s}
    return set(c.vertices) == verts and mine == theirs


# ---------------------------------------------------------------- exploration

@dataclass
class Star:
    center: object
    simplices: dict
    complete: bool
    radius: int

    def degrees(self):
        """Number of r-simplices containing the center, by r."""
        return {d: sum(1 for s in simp if self.center in s)
                for d, simp in sorted(self.simplices.items()) if simp}


def _split_star_tops(group, gate_map, template, x):
    """Generated simplices that contain x: translates by x1 = x or x1 = s_y^{-1} x."""
    seen = set()
    for delta in template.simplices:
        if not all(y in gate_map for y in delta):
            continue
        for x1 in [x] + [group.mul(group.inv(gate_map[y]), x) for y in delta]:
            s = frozenset([x1] + [group.mul(gate_map[y], x1) for y in delta])
            if x in s and s not in seen:
                seen.add(s)
                yield s


def _inert_star_tops(group, gate_map, template, x):
    usable = {j: T for j, T in template.parts.items() if all(t in gate_map for t in T)}
    for ch in template.chambers:
        if all(j in usable for j in ch):
            yield frozenset([("g", x)] + [_y_vertex(group, gate_map, usable[j], x) for j in ch])


def explore_vertex(group, gate_map, template, x, radius=1, case="split"):
    """Simplices containing x (radius 1) or meeting its radius-1 ball (radius 2).

    Inert stars are taken at type-0 vertices and only use chambers based at x.
    Nothing beyond the star is materialised.
    """
    complete = all(y in gate_map for y in template.q)
    center = x if case == "split" else ("g", x)
    if radius <= 0:
        return Star(center, {0: {(center,)}}, complete, radius)
    tops_fn = _split_star_tops if case == "split" else _inert_star_tops
    centers = [x]
    if radius >= 2:
        centers += [group.mul(gate_map[y], x) for y in template.q if y in gate_map]
        centers += [group.mul(group.inv(gate_map[y]), x) for y in template.q if y in gate_map]
    tops = set()
    for c in centers:
        tops.update(tops_fn(group, gate_map, template, c))
    tops.add(frozenset([center]))
    simp = _closure(tops)
    if radius == 1:
        simp = {d: {s for s in ss if center in s} for d, ss in simp.items()}
    return Star(center, simp, complete, radius)


def stream_star(group, gate_map, template, x, case="split"):
    """Yield the maximal generated simplices through x one at a time."""
    fn = _split_star_tops if case == "split" else _inert_star_tops
    for s in fn(group, gate_map, template, x):
        yield tuple(sorted(s, key=_vkey))


# ---------------------------------------------------------------- validation

def degree_bounds(table, case):
    """Number of r-simplices through a type-0 vertex, from a valency table."""
    out = defaultdict(int)
    for key, val in table.items():
        vt, shape = key
        if vt != 0:
            continue
        out[len(shape) - 1] += val
    if case == "inert":
        out = {1: table[(0, "01")] + table[(0, "02")], 2: table[(0, "012")]}
    return dict(out)


@dataclass
class StructureReport:
    ok: bool
    violations: list
    degrees: dict
    expected: dict
    complete: bool


def validate_structure(obj, expected, group=None, gates=None, samples=50, rng=None):
    """Degree audit plus gate injectivity checks.

    obj is a QuotientComplex or a Star; expected maps r to the number of
    r-simplices through a vertex.  For a complete object degrees must match,
    otherwise they may not exceed.  gates (group elements) are checked for
    duplicates, identity and sampled s t^{-1} = identity.
    """
    import random
    rng = rng or random.Random(0)
    violations = []
    if isinstance(obj, Star):
        per_vertex = {obj.center: obj.degrees()}
        complete = obj.complete
    else:
        complete = obj.complete
        per_vertex = defaultdict(lambda: defaultdict(int))
        for d, simp in obj.simplices.items():
            for s in simp:
                for v in s:
                    per_vertex[v][d] += 1
        # only the group-element vertices are audited
        per_vertex = {v: c for v, c in per_vertex.items()
                      if not (isinstance(v, tuple) and v and v[0] == "y")}
    for v, degs in per_vertex.items():
        for d, bound in expected.items():
            got = degs.get(d, 0)
            if got > bound or (complete and got != bound):
                violations.append(("degree", v, d, got, bound))
    if not isinstance(obj, Star) and not obj.is_downward_closed():
        violations.append(("not downward closed",))
    if not isinstance(obj, Star) and not obj.coloring_valid():
        violations.append(("coloring",))
    if gates is not None and group is not None:
        e = group.identity()
        seen = {}
        for i, g in enumerate(gates):
            if g == e:
                violations.append(("gate is identity", i))
            if g in seen:
                violations.append(("duplicate gate", seen[g], i))
            seen.setdefault(g, i)
        gl = list(gates)
        for _ in range(min(samples, len(gl) ** 2)):
            a, b = rng.randrange(len(gl)), rng.randrange(len(gl))
            if a != b and group.mul(gl[a], group.inv(gl[b])) == e:
                violations.append(("s t^-1 is identity", a, b))
    degrees = {repr(v): dict(d) for v, d in list(per_vertex.items())[:1]}
    return StructureReport(not violations, violations, degrees, dict(expected), complete)
