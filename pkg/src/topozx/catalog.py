"""Reference diagrams used throughout the tests, examples and the gate library.

Each function returns a fresh :class:`Diagram`.  Diagrams that come with a
claimed rewrite also have a companion giving the expected result.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Sequence, Tuple

from .diagram import B, H, X, Z, Diagram, DiagramBuilder, VertexKind
from .phase import PI, ZERO, Phase

Node = Tuple[str, object]


def from_listing(
    nodes: Dict[object, Node],
    edges: Iterable[Tuple[object, object]],
    inputs: Sequence[object] = (),
    outputs: Sequence[object] = (),
) -> Tuple[Diagram, Dict[object, int]]:
    """Build a diagram from named nodes and edges.

    ``nodes`` maps a name to ``(kind, phase)``; the phase is ignored for
    Hadamards and boundaries.  Vertex ids follow the insertion order of
    ``nodes``.  Returns the diagram and the name-to-id map.
    """
    b = DiagramBuilder()
    ids: Dict[object, int] = {}
    for name, (kind, phase) in nodes.items():
        ids[name] = b.add_vertex(VertexKind(kind, Phase.of(phase or 0)) if kind in (Z, X) else VertexKind(kind))
    for u, v in edges:
        b.add_edge(ids[u], ids[v])
    b.inputs = [ids[n] for n in inputs]
    b.outputs = [ids[n] for n in outputs]
    return b.freeze(), ids


def _node(kind: str, phase=ZERO) -> Node:
    return (kind, phase)


def wire() -> Diagram:
    b = DiagramBuilder()
    i, o = b.add_input(), b.add_output()
    b.add_edge(i, o)
    return b.freeze()


def single_spider(kind: str, phase=0, n_in: int = 1, n_out: int = 1) -> Diagram:
    b = DiagramBuilder()
    s = b.add_vertex(kind, phase)
    for _ in range(n_in):
        b.add_edge(b.add_input(), s)
    for _ in range(n_out):
        b.add_edge(s, b.add_output())
    return b.freeze()


def state(kind: str, phase=0) -> Diagram:
    """A one-legged spider read as a state on one output."""
    return single_spider(kind, phase, 0, 1)


def chain(kinds: Sequence[Tuple[str, object]]) -> Diagram:
    """A 1-to-1 wire carrying the given spiders (or ``("H", None)``) in order."""
    b = DiagramBuilder()
    prev = b.add_input()
    for kind, phase in kinds:
        v = b.h() if kind == H else b.add_vertex(kind, phase)
        b.add_edge(prev, v)
        prev = v
    b.add_edge(prev, b.add_output())
    return b.freeze()


def double_hadamard() -> Diagram:
    """Two Hadamard boxes in a row; rewrites to a bare wire."""
    return chain([(H, None), (H, None)])


def spider_pair(kind: str = Z, a=0, b=0) -> Diagram:
    """Two connected spiders of one colour on a wire; fuses to one spider."""
    return chain([(kind, a), (kind, b)])


def copy_state(n_out: int = 2, phase=0) -> Diagram:
    """A red state (phase 0 or pi) entering a green spider with ``n_out`` outputs."""
    b = DiagramBuilder()
    e = b.x(phase)
    g = b.z()
    b.add_edge(e, g)
    for _ in range(n_out):
        b.add_edge(g, b.add_output())
    return b.freeze()


def copied_states(n_out: int = 2, phase=0) -> Diagram:
    b = DiagramBuilder()
    for _ in range(n_out):
        b.add_edge(b.x(phase), b.add_output())
    return b.freeze()


def pi_through_spider(n_out: int = 2) -> Diagram:
    """A red pi on the input of a green copy spider."""
    b = DiagramBuilder()
    i = b.add_input()
    p = b.x(PI)
    g = b.z()
    b.add_path(i, p, g)
    for _ in range(n_out):
        b.add_edge(g, b.add_output())
    return b.freeze()


def pi_copied(n_out: int = 2) -> Diagram:
    """The result of pushing a red pi through a green copy spider."""
    b = DiagramBuilder()
    i = b.add_input()
    g = b.z()
    b.add_edge(i, g)
    for _ in range(n_out):
        b.add_path(g, b.x(PI), b.add_output())
    return b.freeze()


def cnot() -> Diagram:
    """The CNOT gate: control on the green spider, target on the red one.

    Inputs are (control, target), outputs likewise.
    """
    nodes = {
        "a": _node(B),
        "w": _node(B),
        "g": _node(Z),
        "r": _node(X),
        "b": _node(B),
        "c": _node(B),
    }
    edges = [("g", "a"), ("c", "r"), ("w", "r"), ("b", "g"), ("r", "g")]
    return from_listing(nodes, edges, inputs=["b", "c"], outputs=["a", "w"])[0]


def cnot_conjugated_by_hadamards() -> Diagram:
    """CNOT with a Hadamard on both target legs; this is the CZ gate."""
    nodes = {
        "a": _node(B),
        "w": _node(B),
        "g": _node(Z),
        "h1": _node(H),
        "h2": _node(H),
        "r": _node(X),
        "b": _node(B),
        "c": _node(B),
    }
    edges = [("g", "a"), ("c", "h1"), ("h1", "r"), ("w", "h2"), ("h2", "r"), ("b", "g"), ("r", "g")]
    return from_listing(nodes, edges, inputs=["b", "c"], outputs=["a", "w"])[0]


def cz() -> Diagram:
    """The CZ gate: two green spiders joined through a Hadamard."""
    nodes = {
        "a": _node(B),
        "w": _node(B),
        "g": _node(Z),
        "h": _node(H),
        "j": _node(Z),
        "b": _node(B),
        "c": _node(B),
    }
    edges = [("g", "a"), ("c", "j"), ("w", "j"), ("b", "g"), ("j", "h"), ("h", "g")]
    return from_listing(nodes, edges, inputs=["b", "c"], outputs=["a", "w"])[0]


def bell_preparation() -> Diagram:
    """|+>|0> followed by CNOT: the state |00> + |11> on two outputs."""
    nodes = {
        "a": _node(B),
        "w": _node(B),
        "g": _node(Z),
        "r": _node(X),
        "plus": _node(Z),
        "zero": _node(X),
    }
    edges = [("g", "a"), ("zero", "r"), ("w", "r"), ("plus", "g"), ("r", "g")]
    return from_listing(nodes, edges, outputs=["a", "w"])[0]


def pauli(kind: str) -> Diagram:
    """The Pauli operator realised by a pi spider: green is Z, red is X."""
    return single_spider(kind, PI)


def append_paulis(d: Diagram, kinds: Sequence[str]) -> Diagram:
    """Follow each output of ``d`` with a pi spider of the given colour."""
    if len(kinds) != len(d.outputs):
        raise ValueError("one Pauli per output is needed")
    b = d.edit()
    for o, kind in zip(d.outputs, kinds):
        (n,) = b.incident(o)
        b.subdivide(n, o, VertexKind(kind, PI))
    return b.freeze()


def double_defect() -> Diagram:
    """Two paired defect tubes joined at the top into one logical line.

    Each tube has a four-qubit cross-section of green lines between red
    rings.  The lower ends of the two tubes are the open legs: the first
    four are inputs and the last four outputs.
    """
    nodes: Dict[object, Node] = {}
    for i in (0, 1, 2, 3, 12, 13, 14, 15):
        nodes[i] = _node(X)
    for i in list(range(4, 12)) + list(range(16, 24)):
        nodes[i] = _node(Z)
    edges = [
        (14, 18), (12, 6), (8, 13), (3, 10), (15, 23), (14, 17), (15, 20), (14, 16),
        (12, 4), (12, 14), (21, 15), (13, 11), (5, 2), (2, 6), (3, 9), (15, 22),
        (13, 10), (0, 2), (4, 2), (11, 3), (13, 15), (9, 13), (12, 7), (14, 19),
        (5, 12), (8, 3), (1, 3), (7, 2), (0, 1),
    ]
    legs = []
    for i in range(16, 24):
        nodes[("leg", i)] = _node(B)
        edges.append((i, ("leg", i)))
        legs.append(("leg", i))
    return from_listing(nodes, edges, inputs=legs[:4], outputs=legs[4:])[0]


DOUBLE_DEFECT_GROUPS = ([0, 1, 2, 3], [4, 5, 6, 7])


def braided_cnot() -> Diagram:
    """Translation of a primal qubit braiding a dual qubit into a diagram.

    The primal (control) line is green and its legs carry Hadamards; the
    dual (target) line is red.  Four legs per logical qubit and end.
    Inputs are the four control legs then the four target legs at the top;
    outputs likewise at the bottom.
    """
    nodes: Dict[object, Node] = {}
    for i in (0, 1, 2, 3, 8, 9, 10, 11, 19, 20, 21, 22, 27, 28, 29, 30):
        nodes[i] = _node(B)
    for i in (4, 5, 6, 7, 23, 24, 25, 26):
        nodes[i] = _node(H)
    for i in (12, 14, 18):
        nodes[i] = _node(Z)
    # 16 is drawn on top of a green 15 with the same edges; it is read as
    # one red node joining the two lines
    for i in (13, 16, 17):
        nodes[i] = _node(X)
    edges = [
        (0, 4), (7, 3), (24, 28), (14, 18), (12, 5), (17, 16), (26, 30), (14, 16),
        (13, 8), (18, 26), (13, 9), (18, 24), (23, 18), (27, 23), (12, 14), (21, 17),
        (4, 12), (29, 25), (17, 19), (17, 22), (5, 1), (16, 13), (2, 6), (12, 7),
        (25, 18), (13, 11), (17, 20), (6, 12), (10, 13),
    ]
    return from_listing(
        nodes,
        edges,
        inputs=[0, 1, 2, 3, 8, 9, 10, 11],
        outputs=[27, 28, 29, 30, 19, 20, 21, 22],
    )[0]


BRAIDED_CNOT_GROUPS = ([0, 1, 2, 3], [4, 5, 6, 7])


def plus_cluster() -> Diagram:
    """Five-qubit cross-shaped cluster state, one open leg per qubit."""
    from .lattice import build_graph_state

    return build_graph_state({0: [1, 2, 3, 4]}).diagram


def measured_ring_fragment() -> Diagram:
    """Eight alternating cluster qubits in a ring, each capped by an X measurement.

    Red qubits reach their measurement through a Hadamard.  Rewrites to the
    bare two-coloured ring.
    """
    ring = [(Z, "g0"), (X, "r1"), (Z, "g2"), (X, "r3"), (Z, "g4"), (X, "r5"), (Z, "g6"), (X, "r7")]
    nodes: Dict[object, Node] = {}
    edges: List[Tuple[object, object]] = []
    for kind, name in ring:
        nodes[name] = _node(kind)
    for (_, a), (_, c) in zip(ring, ring[1:] + ring[:1]):
        edges.append((a, c))
    for kind, name in ring:
        cap = ("cap", name)
        nodes[cap] = _node(Z)
        if kind == X:
            nodes[("h", name)] = _node(H)
            edges += [(name, ("h", name)), (("h", name), cap)]
        else:
            edges.append((name, cap))
    return from_listing(nodes, edges)[0]


def ring_graph(colours: Sequence[str]) -> Diagram:
    """A closed ring of phase-free spiders with the given colours."""
    b = DiagramBuilder()
    vs = [b.add_vertex(c) for c in colours]
    for a, c in zip(vs, vs[1:] + vs[:1]):
        b.add_edge(a, c)
    return b.freeze()


CATALOG = {
    "wire": wire,
    "double-hadamard": double_hadamard,
    "spider-pair": spider_pair,
    "copy-state": copy_state,
    "pi-through-spider": pi_through_spider,
    "cnot": cnot,
    "cnot-conjugated": cnot_conjugated_by_hadamards,
    "cz": cz,
    "bell-preparation": bell_preparation,
    "double-defect": double_defect,
    "braided-cnot": braided_cnot,
    "plus-cluster": plus_cluster,
    "measured-ring": measured_ring_fragment,
}
