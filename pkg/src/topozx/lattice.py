"""Cluster-state diagrams: graph states, the 3D unit cell and tiled lattices.

Lattice sites use doubled integer coordinates.  A cell spans two units per
axis; sites sit where exactly two coordinates are odd (face sites) or
exactly one is odd (edge sites).  Face sites of the primal lattice are the
edge sites of the dual lattice, offset by ``(1, 1, 1)``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .diagram import B, H, X, Z, Diagram, DiagramBuilder, VertexKind
from .errors import ColouringError, InputError, ResourceError

Coord = Tuple[int, int, int]

RED_CENTRE = "red-centre"
GREEN_CENTRE = "green-centre"
CONVENTIONS = (RED_CENTRE, GREEN_CENTRE)
PRIMAL, DUAL = "primal", "dual"
RED, GREEN = "red", "green"

DEFAULT_SITE_CAP = 20000


def odd_count(c: Coord) -> int:
    return sum(x % 2 for x in c)


def site_kind(c: Coord) -> Optional[str]:
    """``face`` for two odd coordinates, ``edge`` for one, else ``None``."""
    n = odd_count(c)
    return {2: "face", 1: "edge"}.get(n)


def is_site(c: Coord) -> bool:
    return site_kind(c) is not None


@dataclass(frozen=True)
class SiteClass:
    sublattice: str
    colour: str


def sublattice_of(c: Coord) -> str:
    """Sublattice whose cells have ``c`` as a face site."""
    kind = site_kind(c)
    if kind is None:
        raise InputError(f"{c} is not a lattice site")
    return PRIMAL if kind == "face" else DUAL


def colour_of_sublattice(sublattice: str, convention: str = RED_CENTRE) -> str:
    check_convention(convention)
    red_side = PRIMAL if convention == RED_CENTRE else DUAL
    return RED if sublattice == red_side else GREEN


def classify(c: Coord, convention: str = RED_CENTRE) -> SiteClass:
    sub = sublattice_of(c)
    return SiteClass(sub, colour_of_sublattice(sub, convention))


def classify_cell(origin: Coord, convention: str = RED_CENTRE) -> SiteClass:
    """Class of the cell whose lowest corner is ``origin``.

    Cells with even corners are primal; those shifted by half a cell in
    every direction are dual.  A cell is labelled by the class of its face
    sites.
    """
    if all(x % 2 == 0 for x in origin):
        sub = PRIMAL
    elif all(x % 2 == 1 for x in origin):
        sub = DUAL
    else:
        raise InputError(f"{origin} is not a cell corner")
    return SiteClass(sub, colour_of_sublattice(sub, convention))


def cell_face_sites(origin: Coord) -> List[Coord]:
    x, y, z = origin
    return [
        (x + 1, y + 1, z),
        (x + 1, y + 1, z + 2),
        (x + 1, y, z + 1),
        (x + 1, y + 2, z + 1),
        (x, y + 1, z + 1),
        (x + 2, y + 1, z + 1),
    ]


def cell_edge_sites(origin: Coord) -> List[Coord]:
    x, y, z = origin
    out = []
    for axis in range(3):
        for a, b in itertools.product((0, 2), repeat=2):
            c = [0, 0, 0]
            c[axis] = 1
            others = [i for i in range(3) if i != axis]
            c[others[0]], c[others[1]] = a, b
            out.append((x + c[0], y + c[1], z + c[2]))
    return sorted(out)


def cell_sites(origin: Coord = (0, 0, 0)) -> List[Coord]:
    x0, y0, z0 = origin
    return sorted(
        (x0 + a, y0 + b, z0 + c)
        for a, b, c in itertools.product(range(3), repeat=3)
        if is_site((a, b, c))
    )


def lattice_sites(nx: int, ny: int, nz: int) -> List[Coord]:
    return sorted(
        c
        for c in itertools.product(range(2 * nx + 1), range(2 * ny + 1), range(2 * nz + 1))
        if is_site(c)
    )


def site_neighbours(c: Coord) -> List[Coord]:
    out = []
    for axis in range(3):
        for step in (-1, 1):
            n = list(c)
            n[axis] += step
            t = tuple(n)
            if is_site(t):
                out.append(t)
    return sorted(out)


def check_convention(convention: str) -> str:
    if convention not in CONVENTIONS:
        raise InputError(f"unknown colouring convention {convention!r}; use one of {CONVENTIONS}")
    return convention


@dataclass
class ClusterBuild:
    """A cluster-state diagram with its site bookkeeping.

    ``site_index`` maps each qubit label to its spider and ``legs`` maps each
    spider to the boundary vertex of its open time leg.  Spider ids are
    only reliable before rewriting; boundary ids survive rewriting.
    """

    diagram: Diagram
    site_index: Dict[Hashable, int]
    legs: Dict[int, int]
    side: Dict[Hashable, int] = field(default_factory=dict)
    convention: Optional[str] = None
    cells: Optional[Tuple[int, int, int]] = None

    def leg_of(self, site: Hashable) -> int:
        return self.legs[self.site_index[site]]

    @property
    def sites(self) -> List[Hashable]:
        return list(self.site_index)

    def site_of_leg(self) -> Dict[int, Hashable]:
        return {self.legs[v]: s for s, v in self.site_index.items()}


def _normalise_graph(adjacency) -> Tuple[List[Hashable], List[Tuple[Hashable, Hashable]]]:
    if isinstance(adjacency, Mapping):
        nodes = list(adjacency)
        edges = []
        for u, nbrs in adjacency.items():
            for v in nbrs:
                if v not in adjacency:
                    raise InputError(f"neighbour {v!r} of {u!r} is not a node")
                edges.append((u, v))
        # each undirected edge is listed from both ends in a symmetric mapping
        seen: Dict[frozenset, int] = {}
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop at {u!r}")
            seen[frozenset((u, v))] = seen.get(frozenset((u, v)), 0) + 1
        for key, count in seen.items():
            if count > 2:
                raise InputError(f"duplicate edge {sorted(key, key=repr)}")
        pairs = []
        done = set()
        for u, v in edges:
            k = frozenset((u, v))
            if k not in done:
                done.add(k)
                pairs.append((u, v))
        return nodes, pairs
    nodes, edges = adjacency
    nodes = list(nodes)
    node_set = set(nodes)
    if len(node_set) != len(nodes):
        raise InputError("duplicate node labels")
    seen2 = set()
    pairs = []
    for u, v in edges:
        if u not in node_set or v not in node_set:
            raise InputError(f"edge {(u, v)} refers to an unknown node")
        if u == v:
            raise InputError(f"self-loop at {u!r}")
        k = frozenset((u, v))
        if k in seen2:
            raise InputError(f"duplicate edge {(u, v)}")
        seen2.add(k)
        pairs.append((u, v))
    return nodes, pairs


def _bipartition(nodes: List[Hashable], edges) -> Dict[Hashable, int]:
    """Side 0 holds, in each component, the first node of highest degree."""
    nbrs: Dict[Hashable, List[Hashable]] = {n: [] for n in nodes}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    side: Dict[Hashable, int] = {}
    for start in sorted(nodes, key=lambda n: (-len(nbrs[n]), nodes.index(n))):
        if start in side:
            continue
        side[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in nbrs[u]:
                if v not in side:
                    side[v] = 1 - side[u]
                    queue.append(v)
                elif side[v] == side[u]:
                    raise ColouringError(f"graph is not bipartite: edge {(u, v)} joins one colour class")
    return side


def build_graph_state(adjacency, side: Optional[Mapping[Hashable, int]] = None) -> ClusterBuild:
    """The graph state of a simple graph as green spiders joined through Hadamards.

    ``adjacency`` is either a mapping ``node -> neighbours`` or a pair
    ``(nodes, edges)``.  Each node gets one phase-free green spider with one
    open output leg, in node order.
    """
    nodes, edges = _normalise_graph(adjacency)
    if not nodes:
        raise InputError("a graph state needs at least one qubit")
    b = DiagramBuilder()
    index = {n: b.z() for n in nodes}
    legs = {}
    for n in nodes:
        o = b.add_output()
        b.add_edge(index[n], o)
        legs[index[n]] = o
    for u, v in edges:
        h = b.h()
        b.add_edge(index[u], h)
        b.add_edge(h, index[v])
    build = ClusterBuild(b.freeze(), index, legs)
    if side is not None:
        build.side = dict(side)
    else:
        try:
            build.side = _bipartition(nodes, edges)
        except ColouringError:
            build.side = {}
    return build


def _flip(b: DiagramBuilder, v: int) -> None:
    from .rewrite import _colour_change

    _colour_change(b, v, key=None)


def two_coloured(build: ClusterBuild, convention: str = RED_CENTRE) -> ClusterBuild:
    """Recolour a graph state so that neighbours have opposite colours.

    Spiders on side 0 turn red under ``red-centre`` and side 1 under
    ``green-centre``; each recoloured spider absorbs the Hadamards on its
    edges and gains one on its time leg.
    """
    check_convention(convention)
    if build.convention is not None:
        raise ColouringError("build is already two-coloured")
    if set(build.side) != set(build.site_index):
        raise ColouringError("graph is not bipartite; no two-colouring exists")
    red_side = 0 if convention == RED_CENTRE else 1
    d = build.diagram
    label_of = {v: s for s, v in build.site_index.items()}
    for s, v in build.site_index.items():
        for u in d.neighbours(v):
            if d.type(u) != H:
                continue
            (w,) = [x for x in d.incident(u) if x != v]
            t = label_of.get(w)
            if t is not None and build.side[t] == build.side[s]:
                raise ColouringError(f"sites {s!r} and {t!r} share a colour class")
    b = d.edit()
    for s, v in build.site_index.items():
        if build.side[s] == red_side:
            _flip(b, v)
    return ClusterBuild(b.freeze(), dict(build.site_index), dict(build.legs), dict(build.side), convention, build.cells)


def two_colour(build: ClusterBuild, convention: str = RED_CENTRE) -> Diagram:
    return two_coloured(build, convention).diagram


def build_sites(sites: Iterable[Coord], convention: Optional[str] = RED_CENTRE, cap: int = DEFAULT_SITE_CAP) -> ClusterBuild:
    """Cluster state on a set of lattice sites with nearest-neighbour bonds.

    With a convention the result is two-coloured by site parity: under
    ``red-centre`` face sites are red with a Hadamard on their time leg and
    edge sites are green.
    """
    sites = sorted(set(tuple(c) for c in sites))
    if len(sites) > cap:
        raise ResourceError(f"{len(sites)} sites exceed the build cap of {cap}")
    for c in sites:
        if not is_site(c):
            raise InputError(f"{c} is not a lattice site")
    present = set(sites)
    edges = [(c, n) for c in sites for n in site_neighbours(c) if n in present and c < n]
    side = {c: 0 if site_kind(c) == "face" else 1 for c in sites}
    build = build_graph_state((sites, edges), side=side)
    if convention is None:
        return build
    return two_coloured(build, convention)


def build_unit_cell(convention: str = RED_CENTRE) -> ClusterBuild:
    out = build_sites(cell_sites(), convention)
    out.cells = (1, 1, 1)
    return out


def tile_lattice(nx: int, ny: int, nz: int, convention: str = RED_CENTRE, cap: int = DEFAULT_SITE_CAP) -> ClusterBuild:
    for n in (nx, ny, nz):
        if not isinstance(n, int) or n < 1:
            raise InputError(f"cell counts must be positive integers, got {(nx, ny, nz)}")
    count = _site_count(nx, ny, nz)
    if count > cap:
        raise ResourceError(f"{count} sites exceed the build cap of {cap}")
    out = build_sites(lattice_sites(nx, ny, nz), convention, cap)
    out.cells = (nx, ny, nz)
    return out


def _site_count(nx: int, ny: int, nz: int) -> int:
    n = [nx, ny, nz]
    # along each axis there are n+1 even and n odd positions
    even = [k + 1 for k in n]
    odd = n
    total = 0
    for pattern in itertools.product((0, 1), repeat=3):
        if sum(pattern) in (1, 2):
            prod = 1
            for axis, p in enumerate(pattern):
                prod *= odd[axis] if p else even[axis]
            total += prod
    return total


def complete_cells(sites: Iterable[Coord]) -> List[Coord]:
    """Origins of primal cells whose six face sites are all present."""
    present = set(sites)
    origins = set()
    for c in present:
        if site_kind(c) == "face":
            for origin in _cells_touching(c):
                origins.add(origin)
    return sorted(o for o in origins if all(f in present for f in cell_face_sites(o)))


def _cells_touching(face: Coord) -> List[Coord]:
    # the face's even coordinate is shared by the two cells on either side
    axis = next(i for i in range(3) if face[i] % 2 == 0)
    base = [x - 1 if x % 2 else x for x in face]
    out = []
    for delta in (0, -2):
        o = list(base)
        o[axis] = face[axis] + delta
        out.append(tuple(o))
    return out


def lattice_spec_from_json(obj: dict) -> Tuple[Tuple[int, int, int], str]:
    try:
        cells = obj["cells"]
        if not isinstance(cells, list) or len(cells) != 3:
            raise InputError("'cells' must be a list of three cell counts")
        nx, ny, nz = (int(c) if isinstance(c, int) and not isinstance(c, bool) else _bad(c) for c in cells)
        convention = check_convention(obj.get("convention", RED_CENTRE))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed lattice spec: {exc!r}") from exc
    if min(nx, ny, nz) < 1:
        raise InputError(f"cell counts must be at least 1, got {cells}")
    return (nx, ny, nz), convention


def _bad(c):
    raise InputError(f"cell count {c!r} is not an integer")


def build_from_spec(obj: dict, cap: int = DEFAULT_SITE_CAP) -> ClusterBuild:
    (nx, ny, nz), convention = lattice_spec_from_json(obj)
    return tile_lattice(nx, ny, nz, convention, cap)
