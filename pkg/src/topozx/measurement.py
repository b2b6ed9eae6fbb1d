"""Measurement patterns on cluster builds.

Defect sites are measured in the Z basis, which caps their time legs with a
red effect.  Bulk sites are measured in the X basis, which caps them with a
green effect.  An outcome of -1 gives the effect a pi phase.  Logical
operators are spliced in as Pauli spiders on the measured qubits.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .diagram import H, X, Z, Diagram, DiagramBuilder, VertexKind, other_colour
from .errors import InputError, PatternError, SpecError
from .lattice import (
    DUAL,
    PRIMAL,
    RED_CENTRE,
    ClusterBuild,
    Coord,
    cell_face_sites,
    complete_cells,
    site_kind,
    site_neighbours,
    sublattice_of,
    tile_lattice,
    lattice_spec_from_json,
)
from .phase import PI, ZERO
from .rewrite import DEFAULT_BUDGET, Trace, normalize

BASIS_Z, BASIS_X = "Z", "X"
RING, CHAIN = "ring", "chain"


@dataclass
class Defect:
    sublattice: str
    path: List[Coord]


@dataclass
class DefectSpec:
    strands: List[Defect] = field(default_factory=list)
    pairs: List[Tuple[int, int]] = field(default_factory=list)

    def sites(self) -> List[Coord]:
        out: List[Coord] = []
        for s in self.strands:
            for c in s.path:
                if c not in out:
                    out.append(c)
        return out

    def groups(self) -> List[List[int]]:
        """Strand indices per logical qubit: paired strands share a group."""
        paired = {}
        for i, j in self.pairs:
            paired[i] = j
            paired[j] = i
        groups, seen = [], set()
        for i in range(len(self.strands)):
            if i in seen:
                continue
            g = [i] + ([paired[i]] if i in paired else [])
            seen.update(g)
            groups.append(sorted(g))
        return groups


@dataclass
class LogicalOperatorSpec:
    kind: str
    sites: List[Coord]


@dataclass
class MeasurementPattern:
    basis: Dict[Coord, Optional[str]]
    outcomes: Dict[Coord, int]
    source: str = "explicit"

    def measured(self, basis: str) -> List[Coord]:
        return sorted(c for c, b in self.basis.items() if b == basis)

    def sign(self, c: Coord) -> int:
        return self.outcomes[c]


def _phase_for(sign: int):
    if sign not in (1, -1):
        raise PatternError(f"outcome must be +1 or -1, got {sign}")
    return ZERO if sign == 1 else PI


# -- diagram surgery on time legs -------------------------------------------


def cap_leg(b: DiagramBuilder, boundary: int, kind: str, phase) -> int:
    """Replace an open leg's boundary vertex by an effect spider."""
    (n,) = b.incident(boundary)
    b.remove_vertex(boundary)
    e = b.add_vertex(VertexKind(kind, phase))
    b.add_edge(e, n)
    return e


def splice_pauli(b: DiagramBuilder, boundary: int, kind: str) -> int:
    """Put a pi spider of ``kind`` on the qubit whose open leg is ``boundary``.

    The spider goes next to the site spider so it can interact with it.  When
    the leg carries a Hadamard the spider sits on the far side of it with
    its colour flipped, which is the same map.
    """
    (n,) = b.incident(boundary)
    if b.type(n) == H:
        (s,) = [x for x in b.incident(n) if x != boundary]
        return b.subdivide(s, n, VertexKind(other_colour(kind), PI))
    return b.subdivide(n, boundary, VertexKind(kind, PI))


def _boundary_for(build: ClusterBuild, d: Diagram, site: Coord) -> int:
    if site not in build.site_index:
        raise SpecError(f"site {site} is not part of the lattice")
    bd = build.leg_of(site)
    if bd not in d or bd not in d.outputs and bd not in d.inputs:
        raise SpecError(f"site {site} has no open leg left (already measured or carved)")
    return bd


# -- defects ----------------------------------------------------------------


def check_defects(build: ClusterBuild, defects: DefectSpec) -> None:
    for k, strand in enumerate(defects.strands):
        if strand.sublattice not in (PRIMAL, DUAL):
            raise SpecError(f"defect {k}: unknown sublattice {strand.sublattice!r}")
        if not strand.path:
            raise SpecError(f"defect {k}: empty path")
        for c in strand.path:
            if c not in build.site_index:
                raise SpecError(f"defect {k}: site {c} is not in the lattice")
            if site_kind(c) is None or sublattice_of(c) != strand.sublattice:
                raise SpecError(f"defect {k}: site {c} is not a face site of the {strand.sublattice} lattice")
        for a, b in zip(strand.path, strand.path[1:]):
            diffs = [abs(x - y) for x, y in zip(a, b)]
            if sorted(diffs) != [0, 0, 2]:
                raise SpecError(f"defect {k}: sites {a} and {b} are not faces of one cell")
    n = len(defects.strands)
    for i, j in defects.pairs:
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise SpecError(f"pair {(i, j)} does not name two distinct strands")


def carve_defects(
    build: ClusterBuild,
    defects: DefectSpec,
    outcomes: Optional[Mapping[Coord, int]] = None,
    d: Optional[Diagram] = None,
    budget: int = DEFAULT_BUDGET,
) -> Diagram:
    """Measure every defect site in the Z basis and fold the effects in."""
    check_defects(build, defects)
    d = build.diagram if d is None else d
    sites = defects.sites()
    if not sites:
        return d
    b = d.edit()
    for c in sites:
        sign = outcomes.get(c, 1) if outcomes else 1
        cap_leg(b, _boundary_for(build, d, c), X, _phase_for(sign))
    nd, _ = normalize(b.freeze(), policy="measure", budget=budget)
    return nd


def measure_bulk_x(d: Diagram, pattern: MeasurementPattern, build: ClusterBuild, budget: int = DEFAULT_BUDGET) -> Diagram:
    """Cap every X-measured site with a green effect and fold the effects in."""
    b = d.edit()
    for c in pattern.measured(BASIS_X):
        if c not in pattern.outcomes:
            raise PatternError(f"no outcome for X-measured site {c}")
        cap_leg(b, _boundary_for(build, d, c), Z, _phase_for(pattern.outcomes[c]))
    nd, _ = normalize(b.freeze(), policy="measure", budget=budget)
    return nd


def parity_check(build: ClusterBuild, pattern: MeasurementPattern) -> List[dict]:
    """Complete cells whose six face outcomes multiply to -1."""
    reports = []
    measured = {c for c in pattern.measured(BASIS_X) if c in pattern.outcomes}
    for origin in complete_cells(build.site_index):
        faces = cell_face_sites(origin)
        if not all(f in measured for f in faces):
            continue
        prod = 1
        for f in faces:
            prod *= pattern.outcomes[f]
        if prod == -1:
            flipped = [list(f) for f in faces if pattern.outcomes[f] == -1]
            reports.append({"cell": list(origin), "flipped_faces": flipped})
    return reports


def insert_logical_operators(d: Diagram, ops: Sequence[LogicalOperatorSpec], build: ClusterBuild) -> Diagram:
    """Splice a physical Z(pi) onto every site listed in ``ops``."""
    b = d.edit()
    for op in ops:
        if op.kind not in (RING, CHAIN):
            raise SpecError(f"unknown logical operator kind {op.kind!r}")
        for c in op.sites:
            splice_pauli(b, _boundary_for(build, d, c), Z)
    return b.freeze()


def extract_logical(d: Diagram, budget: int = DEFAULT_BUDGET) -> Tuple[Diagram, Trace]:
    return normalize(d, policy="shrink", budget=budget)


# -- whole patterns ---------------------------------------------------------


@dataclass
class Pattern:
    """A parsed pattern file: lattice, defects, operators and outcomes."""

    cells: Tuple[int, int, int]
    convention: str
    defects: DefectSpec
    logical_ops: List[LogicalOperatorSpec]
    outcomes: object = "all-plus"

    def build(self, cap: Optional[int] = None) -> ClusterBuild:
        if cap is None:
            return tile_lattice(*self.cells, convention=self.convention)
        return tile_lattice(*self.cells, convention=self.convention, cap=cap)


def _coord(x) -> Coord:
    if not isinstance(x, (list, tuple)) or len(x) != 3 or not all(isinstance(v, int) for v in x):
        raise InputError(f"site {x!r} is not a list of three integers")
    return tuple(x)


def pattern_from_json(obj: dict) -> Pattern:
    if not isinstance(obj, dict):
        raise InputError("pattern file must hold a JSON object")
    try:
        cells, convention = lattice_spec_from_json(obj["lattice"])
        strands = [Defect(s["sublattice"], [_coord(c) for c in s["path"]]) for s in obj.get("defects", [])]
        pairs = [(int(i), int(j)) for i, j in obj.get("pairs", [])]
        ops = [LogicalOperatorSpec(o["kind"], [_coord(c) for c in o["sites"]]) for o in obj.get("logical_ops", [])]
        outcomes = obj.get("outcomes", "all-plus")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed pattern: {exc!r}") from exc
    for op in ops:
        if op.kind not in (RING, CHAIN):
            raise InputError(f"unknown logical operator kind {op.kind!r}")
    if not (outcomes == "all-plus" or isinstance(outcomes, dict) and len(outcomes) == 1 and (
        "seed" in outcomes or "explicit" in outcomes
    )):
        raise InputError("outcomes must be \"all-plus\", {\"seed\": int} or {\"explicit\": [...]}")
    return Pattern(cells, convention, DefectSpec(strands, pairs), ops, outcomes)


def io_sites(build: ClusterBuild, defects: DefectSpec) -> Tuple[List[List[Coord]], List[List[Coord]]]:
    """Open legs per logical group at its first and last z-layer.

    They are the non-defect sites next to a defect site of the group in the
    lowest and the highest layer the group reaches.
    """
    defect_sites = set(defects.sites())
    ins, outs = [], []
    for group in defects.groups():
        gsites = [c for k in group for c in defects.strands[k].path]
        zs = [c[2] for c in gsites]
        for layer, acc in ((min(zs), ins), (max(zs), outs)):
            legs = sorted(
                {
                    n
                    for c in gsites
                    if c[2] == layer
                    for n in site_neighbours(c)
                    if n[2] == layer and n in build.site_index and n not in defect_sites
                }
            )
            acc.append(legs)
    return ins, outs


def make_pattern(build: ClusterBuild, defects: DefectSpec, outcomes_spec: object = "all-plus") -> MeasurementPattern:
    ins, outs = io_sites(build, defects)
    open_sites = {c for g in ins + outs for c in g}
    defect_sites = set(defects.sites())
    basis: Dict[Coord, Optional[str]] = {}
    for c in build.site_index:
        if c in defect_sites:
            basis[c] = BASIS_Z
        elif c in open_sites:
            basis[c] = None
        else:
            basis[c] = BASIS_X
    measured = sorted(c for c, bs in basis.items() if bs is not None)
    source = "explicit"
    if outcomes_spec == "all-plus":
        outcomes = {c: 1 for c in measured}
    elif isinstance(outcomes_spec, dict) and "seed" in outcomes_spec:
        rng = random.Random(int(outcomes_spec["seed"]))
        outcomes = {c: rng.choice((1, -1)) for c in measured}
        source = "seeded-random"
    elif isinstance(outcomes_spec, dict) and "explicit" in outcomes_spec:
        outcomes = {c: 1 for c in measured}
        for entry in outcomes_spec["explicit"]:
            if len(entry) != 4:
                raise InputError(f"explicit outcome {entry!r} must be [x, y, z, sign]")
            c, sign = tuple(entry[:3]), entry[3]
            if c not in outcomes:
                raise PatternError(f"explicit outcome for unmeasured site {c}")
            _phase_for(sign)
            outcomes[c] = sign
    else:
        raise InputError(f"unrecognised outcomes {outcomes_spec!r}")
    return MeasurementPattern(basis, outcomes, source)


@dataclass
class CompiledPattern:
    build: ClusterBuild
    pattern: MeasurementPattern
    measured: Diagram
    normal: Diagram
    trace: Trace
    inputs: List[List[int]]
    outputs: List[List[int]]
    parity: List[dict]


def run_pattern(p: Pattern, budget: int = DEFAULT_BUDGET, normalise: bool = True) -> CompiledPattern:
    """Carve, measure and normalise a pattern; returns all intermediate data.

    Open legs at the bottom layer become inputs and those at the top layer
    outputs, grouped per logical qubit.  With ``normalise=False`` the normal
    form is left as the measured diagram and the trace empty.
    """
    build = p.build()
    check_defects(build, p.defects)
    for op in p.logical_ops:
        for c in op.sites:
            if c in set(p.defects.sites()):
                raise SpecError(f"operator site {c} lies on a defect")
    mp = make_pattern(build, p.defects, p.outcomes)
    ins, outs = io_sites(build, p.defects)
    d = build.diagram
    b = d.edit()
    in_b = [[build.leg_of(c) for c in g] for g in ins]
    out_b = [[build.leg_of(c) for c in g] for g in outs]
    b.inputs = [x for g in in_b for x in g]
    b.outputs = [x for g in out_b for x in g] + [x for x in d.outputs if x not in set(b.inputs) and x not in {y for g in out_b for y in g}]
    d = b.freeze()
    d = insert_logical_operators(d, p.logical_ops, build)
    d = carve_defects(build, p.defects, mp.outcomes, d=d, budget=budget)
    d = measure_bulk_x(d, mp, build, budget=budget)
    normal, trace = extract_logical(d, budget=budget) if normalise else (d, Trace())
    return CompiledPattern(build, mp, d, normal, trace, in_b, out_b, parity_check(build, mp))
