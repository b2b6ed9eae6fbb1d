"""Open undirected multigraphs of red/green spiders, Hadamard boxes and boundaries.

A :class:`Diagram` is an immutable value.  All construction and editing goes
through a :class:`DiagramBuilder`; ``Diagram.edit()`` returns a builder holding
a private copy and ``DiagramBuilder.freeze()`` hands back a new diagram.

Edges form a multiset of unordered vertex pairs.  Self-loops are stored once
per loop and count twice towards the degree of their vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import CompositionError, InputError, ValidationError
from .phase import Phase, PhaseLike, ZERO

Z, X, H, B = "Z", "X", "H", "B"
SPIDERS = (Z, X)
KINDS = (Z, X, H, B)


def other_colour(kind: str) -> str:
    if kind == Z:
        return X
    if kind == X:
        return Z
    raise ValueError(f"{kind!r} is not a spider kind")


@dataclass(frozen=True)
class VertexKind:
    kind: str
    phase: Optional[Phase] = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise InputError(f"unknown vertex kind {self.kind!r}")
        if self.kind in SPIDERS:
            object.__setattr__(self, "phase", Phase.of(self.phase if self.phase is not None else 0))
        elif self.phase is not None:
            raise InputError(f"vertex kind {self.kind} carries no phase")

    @property
    def is_spider(self) -> bool:
        return self.kind in SPIDERS

    def key(self) -> Tuple[int, int, int]:
        """Total order used for canonical labelling."""
        p = self.phase
        return (KINDS.index(self.kind), p.num if p else 0, p.den if p else 0)

    def __str__(self) -> str:
        if self.is_spider:
            return f"{self.kind}({self.phase})"
        return self.kind


def spider(kind: str, phase: PhaseLike = 0) -> VertexKind:
    return VertexKind(kind, Phase.of(phase))


@dataclass(frozen=True)
class Signature:
    n_inputs: int
    n_outputs: int

    def __str__(self) -> str:
        return f"{self.n_inputs}->{self.n_outputs}"


@dataclass(frozen=True)
class Violation:
    invariant: str
    vertex: Optional[int] = None
    edge: Optional[Tuple[int, int]] = None

    def __str__(self) -> str:
        where = []
        if self.vertex is not None:
            where.append(f"vertex {self.vertex}")
        if self.edge is not None:
            where.append(f"edge {self.edge}")
        return self.invariant + (f" ({', '.join(where)})" if where else "")


Adjacency = Dict[int, Dict[int, int]]


class Diagram:
    """Immutable red/green diagram with ordered input and output boundaries."""

    __slots__ = ("_kinds", "_adj", "_inputs", "_outputs", "_next_id", "_cache")

    def __init__(
        self,
        kinds: Dict[int, VertexKind],
        adj: Adjacency,
        inputs: Sequence[int],
        outputs: Sequence[int],
        next_id: int,
    ):
        self._kinds = kinds
        self._adj = adj
        self._inputs = tuple(inputs)
        self._outputs = tuple(outputs)
        self._next_id = next_id
        self._cache: dict = {}

    @classmethod
    def empty(cls) -> "Diagram":
        return cls({}, {}, (), (), 0)

    # -- queries -----------------------------------------------------------
    def vertices(self) -> List[int]:
        return sorted(self._kinds)

    def __contains__(self, v: int) -> bool:
        return v in self._kinds

    def __len__(self) -> int:
        return len(self._kinds)

    def kind(self, v: int) -> VertexKind:
        return self._kinds[v]

    def type(self, v: int) -> str:
        return self._kinds[v].kind

    def phase(self, v: int) -> Phase:
        return self._kinds[v].phase or ZERO

    def is_spider(self, v: int) -> bool:
        return self._kinds[v].kind in SPIDERS

    @property
    def inputs(self) -> Tuple[int, ...]:
        return self._inputs

    @property
    def outputs(self) -> Tuple[int, ...]:
        return self._outputs

    @property
    def next_id(self) -> int:
        return self._next_id

    @property
    def signature(self) -> Signature:
        return Signature(len(self._inputs), len(self._outputs))

    @property
    def n_inputs(self) -> int:
        return len(self._inputs)

    @property
    def n_outputs(self) -> int:
        return len(self._outputs)

    def neighbours(self, v: int) -> List[int]:
        """Distinct neighbours of ``v`` other than itself, sorted."""
        return sorted(u for u in self._adj[v] if u != v)

    def incident(self, v: int) -> List[int]:
        """One entry per edge end at ``v`` other than self-loops, sorted."""
        out = []
        for u, m in sorted(self._adj[v].items()):
            if u != v:
                out.extend([u] * m)
        return out

    def multiplicity(self, u: int, v: int) -> int:
        return self._adj[u].get(v, 0)

    def loops(self, v: int) -> int:
        return self._adj[v].get(v, 0)

    def degree(self, v: int) -> int:
        row = self._adj[v]
        return sum(row.values()) + row.get(v, 0)

    def adjacency(self, v: int) -> Dict[int, int]:
        return dict(self._adj[v])

    def edges(self) -> List[Tuple[int, int]]:
        if "edges" not in self._cache:
            out = []
            for u, row in self._adj.items():
                for v, m in row.items():
                    if u <= v:
                        out.extend([(u, v)] * m)
            out.sort()
            self._cache["edges"] = out
        return list(self._cache["edges"])

    def num_edges(self) -> int:
        return len(self.edges())

    def count(self, kind: str) -> int:
        return sum(1 for k in self._kinds.values() if k.kind == kind)

    def spiders(self) -> List[int]:
        return [v for v in self.vertices() if self.is_spider(v)]

    def boundary_role(self, v: int) -> Optional[Tuple[str, int]]:
        if "roles" not in self._cache:
            roles = {b: ("in", i) for i, b in enumerate(self._inputs)}
            roles.update({b: ("out", i) for i, b in enumerate(self._outputs)})
            self._cache["roles"] = roles
        return self._cache["roles"].get(v)

    def measure(self) -> Tuple[int, int, int]:
        """Lexicographic size measure: vertices, edges, Hadamard boxes."""
        return (len(self._kinds), self.num_edges(), self.count(H))

    # -- derived values ----------------------------------------------------
    def edit(self) -> "DiagramBuilder":
        return DiagramBuilder.from_diagram(self)

    def relabel(self, mapping: Dict[int, int]) -> "Diagram":
        b = DiagramBuilder()
        for v in self.vertices():
            b._add_with_id(mapping[v], self._kinds[v])
        for u, v in self.edges():
            b.add_edge(mapping[u], mapping[v])
        b.inputs = [mapping[v] for v in self._inputs]
        b.outputs = [mapping[v] for v in self._outputs]
        return b.freeze(check=False)

    def shifted(self, offset: int) -> "Diagram":
        return self.relabel({v: v + offset for v in self._kinds})

    def compact(self) -> "Diagram":
        """Relabel vertices to ``0..n-1`` preserving their order."""
        return self.relabel({v: i for i, v in enumerate(self.vertices())})

    def colour_swap(self) -> "Diagram":
        b = self.edit()
        for v in self.vertices():
            k = self._kinds[v]
            if k.is_spider:
                b.set_kind(v, VertexKind(other_colour(k.kind), k.phase))
        return b.freeze(check=False)

    def adjoint_free_transpose(self) -> "Diagram":
        """Swap the roles of inputs and outputs (no conjugation of phases)."""
        b = self.edit()
        b.inputs, b.outputs = list(self._outputs), list(self._inputs)
        return b.freeze(check=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return (
            self._kinds == other._kinds
            and self.edges() == other.edges()
            and self._inputs == other._inputs
            and self._outputs == other._outputs
        )

    def __hash__(self) -> int:
        return hash((tuple(sorted(self._kinds.items())), tuple(self.edges()), self._inputs, self._outputs))

    def __repr__(self) -> str:
        return (
            f"<Diagram {self.signature} V={len(self._kinds)} E={self.num_edges()} "
            f"Z={self.count(Z)} X={self.count(X)} H={self.count(H)}>"
        )

    # -- serialisation -----------------------------------------------------
    def to_json(self) -> dict:
        verts = []
        for v in self.vertices():
            k = self._kinds[v]
            entry: dict = {"id": v, "kind": k.kind}
            if k.is_spider:
                entry["phase"] = k.phase.to_json()
            verts.append(entry)
        return {
            "vertices": verts,
            "edges": [[u, v] for u, v in self.edges()],
            "inputs": list(self._inputs),
            "outputs": list(self._outputs),
        }

    @classmethod
    def from_json(cls, obj: dict, check: bool = True) -> "Diagram":
        try:
            b = DiagramBuilder()
            for entry in obj["vertices"]:
                kind = entry["kind"]
                if kind in SPIDERS:
                    if "phase" not in entry:
                        raise InputError(f"spider {entry['id']} is missing its phase")
                    vk = VertexKind(kind, Phase.from_json(entry["phase"]))
                else:
                    if "phase" in entry:
                        raise InputError(f"vertex {entry['id']} of kind {kind} must not carry a phase")
                    vk = VertexKind(kind)
                vid = int(entry["id"])
                if vid in b._kinds:
                    raise InputError(f"duplicate vertex id {vid}")
                b._add_with_id(vid, vk)
            for e in obj["edges"]:
                u, v = (int(x) for x in e)
                if u not in b._kinds or v not in b._kinds:
                    raise InputError(f"edge {[u, v]} refers to a missing vertex")
                b.add_edge(u, v)
            b.inputs = [int(v) for v in obj["inputs"]]
            b.outputs = [int(v) for v in obj["outputs"]]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed diagram JSON: {exc!r}") from exc
        return b.freeze(check=check)


class DiagramBuilder:
    """Mutable scratch space for constructing and rewriting diagrams."""

    def __init__(self) -> None:
        self._kinds: Dict[int, VertexKind] = {}
        self._adj: Adjacency = {}
        self.inputs: List[int] = []
        self.outputs: List[int] = []
        self._next_id = 0

    @classmethod
    def from_diagram(cls, d: Diagram) -> "DiagramBuilder":
        b = cls()
        b._kinds = dict(d._kinds)
        b._adj = {v: dict(row) for v, row in d._adj.items()}
        b.inputs = list(d._inputs)
        b.outputs = list(d._outputs)
        b._next_id = d._next_id
        return b

    def _add_with_id(self, vid: int, kind: VertexKind) -> int:
        self._kinds[vid] = kind
        self._adj[vid] = {}
        self._next_id = max(self._next_id, vid + 1)
        return vid

    def add_vertex(self, kind: str | VertexKind, phase: PhaseLike = 0) -> int:
        if not isinstance(kind, VertexKind):
            kind = VertexKind(kind, Phase.of(phase) if kind in SPIDERS else None)
        return self._add_with_id(self._next_id, kind)

    def z(self, phase: PhaseLike = 0) -> int:
        return self.add_vertex(Z, phase)

    def x(self, phase: PhaseLike = 0) -> int:
        return self.add_vertex(X, phase)

    def h(self) -> int:
        return self.add_vertex(H)

    def boundary(self) -> int:
        return self.add_vertex(B)

    def add_input(self) -> int:
        v = self.boundary()
        self.inputs.append(v)
        return v

    def add_output(self) -> int:
        v = self.boundary()
        self.outputs.append(v)
        return v

    def add_edge(self, u: int, v: int, times: int = 1) -> None:
        if times <= 0:
            return
        self._adj[u][v] = self._adj[u].get(v, 0) + times
        if u != v:
            self._adj[v][u] = self._adj[v].get(u, 0) + times

    def add_path(self, *vs: int) -> None:
        for u, v in zip(vs, vs[1:]):
            self.add_edge(u, v)

    def remove_edge(self, u: int, v: int) -> None:
        m = self._adj[u].get(v, 0)
        if m == 0:
            raise KeyError(f"no edge {u}-{v}")
        if m == 1:
            del self._adj[u][v]
            if u != v:
                del self._adj[v][u]
        else:
            self._adj[u][v] = m - 1
            if u != v:
                self._adj[v][u] = m - 1

    def remove_vertex(self, v: int) -> None:
        for u in list(self._adj[v]):
            if u != v:
                del self._adj[u][v]
        del self._adj[v]
        del self._kinds[v]
        if v in self.inputs:
            self.inputs.remove(v)
        if v in self.outputs:
            self.outputs.remove(v)

    def set_kind(self, v: int, kind: VertexKind) -> None:
        self._kinds[v] = kind

    def set_phase(self, v: int, phase: PhaseLike) -> None:
        k = self._kinds[v]
        self._kinds[v] = VertexKind(k.kind, Phase.of(phase))

    def add_phase(self, v: int, phase: PhaseLike) -> None:
        self.set_phase(v, self.phase(v) + phase)

    # read access mirrors Diagram
    def __contains__(self, v: int) -> bool:
        return v in self._kinds

    def kind(self, v: int) -> VertexKind:
        return self._kinds[v]

    def type(self, v: int) -> str:
        return self._kinds[v].kind

    def phase(self, v: int):
        return self._kinds[v].phase or ZERO

    def vertices(self) -> List[int]:
        return sorted(self._kinds)

    def multiplicity(self, u: int, v: int) -> int:
        return self._adj[u].get(v, 0)

    def loops(self, v: int) -> int:
        return self._adj[v].get(v, 0)

    def incident(self, v: int) -> List[int]:
        out = []
        for u, m in sorted(self._adj[v].items()):
            if u != v:
                out.extend([u] * m)
        return out

    def neighbours(self, v: int) -> List[int]:
        return sorted(u for u in self._adj[v] if u != v)

    def degree(self, v: int) -> int:
        row = self._adj[v]
        return sum(row.values()) + row.get(v, 0)

    def subdivide(self, u: int, v: int, kind: VertexKind) -> int:
        """Replace one ``u-v`` edge by ``u-w-v`` with a fresh vertex ``w``."""
        self.remove_edge(u, v)
        w = self.add_vertex(kind)
        self.add_edge(u, w)
        self.add_edge(w, v)
        return w

    def freeze(self, check: bool = True) -> Diagram:
        d = Diagram(
            dict(self._kinds),
            {v: dict(row) for v, row in self._adj.items()},
            self.inputs,
            self.outputs,
            self._next_id,
        )
        if check:
            violation = validate(d)
            if violation is not None:
                raise ValidationError(violation)
        return d


def validate(d: Diagram) -> Optional[Violation]:
    """Return the first violated diagram invariant, or ``None`` if ``d`` is well formed."""
    seen: Dict[int, str] = {}
    for name, ids in (("inputs", d.inputs), ("outputs", d.outputs)):
        for v in ids:
            if v not in d:
                return Violation(f"{name} lists a missing vertex", vertex=v)
            if d.type(v) != B:
                return Violation(f"{name} lists a non-boundary vertex", vertex=v)
            if v in seen:
                return Violation("boundary listed more than once", vertex=v)
            seen[v] = name
    for v in d.vertices():
        for u in d._adj[v]:
            if u not in d:
                return Violation("edge endpoint missing", edge=(min(u, v), max(u, v)))
    for v in d.vertices():
        t = d.type(v)
        deg = d.degree(v)
        if t == H and deg != 2:
            return Violation("Hadamard degree != 2", vertex=v)
        if t == B:
            if deg != 1:
                return Violation("Boundary degree != 1", vertex=v)
            if v not in seen:
                return Violation("boundary vertex not listed in inputs or outputs", vertex=v)
    return None


def check(d: Diagram) -> Diagram:
    violation = validate(d)
    if violation is not None:
        raise ValidationError(violation)
    return d


def _sole_neighbour(b: DiagramBuilder, v: int) -> int:
    (u,) = b.incident(v)
    return u


def compose_sequential(first: Diagram, second: Diagram) -> Diagram:
    """Plug the outputs of ``first`` into the inputs of ``second`` (``second`` after ``first``)."""
    if first.n_outputs != second.n_inputs:
        raise CompositionError(
            f"cannot compose {first.signature} with {second.signature}: "
            f"{first.n_outputs} outputs vs {second.n_inputs} inputs"
        )
    check(first)
    check(second)
    b = first.edit()
    shifted = second.shifted(first.next_id)
    for v in shifted.vertices():
        b._add_with_id(v, shifted.kind(v))
    for u, v in shifted.edges():
        b.add_edge(u, v)
    for o, i in zip(list(first.outputs), list(shifted.inputs)):
        a = _sole_neighbour(b, o)
        if a == i:
            # the two wires close into a bare loop, a scalar
            b.remove_vertex(o)
            b.remove_vertex(i)
            continue
        c = _sole_neighbour(b, i)
        b.remove_vertex(o)
        b.remove_vertex(i)
        b.add_edge(a, c)
    b.inputs = list(first.inputs)
    b.outputs = list(shifted.outputs)
    return b.freeze()


def compose_parallel(a: Diagram, b: Diagram) -> Diagram:
    """Monoidal product: disjoint union with concatenated boundaries."""
    out = a.edit()
    shifted = b.shifted(a.next_id)
    for v in shifted.vertices():
        out._add_with_id(v, shifted.kind(v))
    for u, v in shifted.edges():
        out.add_edge(u, v)
    out.inputs = list(a.inputs) + list(shifted.inputs)
    out.outputs = list(a.outputs) + list(shifted.outputs)
    return out.freeze(check=False)


def compose(*ds: Diagram) -> Diagram:
    """Sequential composition of several diagrams, applied left to right."""
    out = ds[0]
    for d in ds[1:]:
        out = compose_sequential(out, d)
    return out


def tensor(*ds: Diagram) -> Diagram:
    out = Diagram.empty()
    for d in ds:
        out = compose_parallel(out, d)
    return out


def connected_components(d: Diagram) -> List[List[int]]:
    seen: set = set()
    comps = []
    for v in d.vertices():
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            w = stack.pop()
            comp.append(w)
            for u in d.neighbours(w):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def iter_spider_pairs(d: Diagram) -> Iterator[Tuple[int, int]]:
    for u in d.vertices():
        for v in d.neighbours(u):
            if u < v:
                yield u, v
