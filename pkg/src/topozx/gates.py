"""Logical gate library and recognition of normal forms.

Library entries ship as JSON files under ``data/gates``; each holds a
reference diagram and the expected matrix.  Users can point
:func:`load_library` at their own directory to extend recognition.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .canon import canonical_hash, isomorphic
from .diagram import H, X, Z, Diagram, DiagramBuilder, other_colour
from .errors import InputError, ResourceError
from .rewrite import normalize
from .semantics import DEFAULT_RANK_CAP, DEFAULT_TOL, TensorMap, equiv_up_to_scalar, evaluate

UNRECOGNIZED = "unrecognized"


def _line_colour(d: DiagramBuilder, leg: int) -> Optional[str]:
    """Colour of the logical line a boundary leg feeds into.

    Walks inwards past Hadamards (flipping the colour) and degree-two
    spiders carrying a nonzero phase, which are operators on the line.
    """
    prev, v, flip = leg, d.incident(leg)[0], False
    seen = {leg}
    while v not in seen:
        seen.add(v)
        kind = d.type(v)
        if kind == H or kind in (Z, X) and d.degree(v) == 2 and not d.phase(v).is_zero():
            nxt = [u for u in d.incident(v) if u != prev]
            if len(nxt) != 1:
                return None
            flip ^= kind == H
            prev, v = v, nxt[0]
            continue
        if kind in (Z, X):
            return other_colour(kind) if flip else kind
        return None
    return None


def _group_legs(b: DiagramBuilder, legs: Sequence[int]) -> int:
    """Join ``legs`` into one new boundary through a spider of the line's colour."""
    colours = {_line_colour(b, x) for x in legs}
    ends = []
    for x in legs:
        ends.append(b.incident(x)[0])
        b.remove_vertex(x)
    s = b.add_vertex(colours.pop() if len(colours) == 1 and None not in colours else Z)
    for n in ends:
        b.add_edge(s, n)
    nb = b.boundary()
    b.add_edge(s, nb)
    return nb


def _check_groups(d: Diagram, input_groups, output_groups):
    if input_groups is None:
        input_groups = [[i] for i in range(len(d.inputs))]
    if output_groups is None:
        output_groups = [[i] for i in range(len(d.outputs))]
    for groups, legs in ((input_groups, d.inputs), (output_groups, d.outputs)):
        flat = [i for g in groups for i in g]
        if sorted(flat) != list(range(len(legs))):
            raise InputError("boundary groups must partition the legs exactly")
    return input_groups, output_groups


def strip_frame(
    d: Diagram,
    input_groups: Optional[Sequence[Sequence[int]]] = None,
    output_groups: Optional[Sequence[Sequence[int]]] = None,
) -> Diagram:
    """Drop the Hadamards that start every leg of a logical qubit.

    Such Hadamards only fix the basis in which that logical qubit is read,
    so removing them on all of its legs at both ends is a change of frame.
    A qubit keeps its Hadamards unless all its legs, inputs and outputs
    alike, start with one.
    """
    input_groups, output_groups = _check_groups(d, input_groups, output_groups)
    n_q = max(len(input_groups), len(output_groups))
    b = d.edit()
    for q in range(n_q):
        legs = [d.inputs[i] for i in (input_groups[q] if q < len(input_groups) else [])]
        legs += [d.outputs[i] for i in (output_groups[q] if q < len(output_groups) else [])]
        nbrs = [b.incident(x)[0] for x in legs]
        if not nbrs or not all(b.type(n) == H for n in nbrs):
            continue
        for x, n in zip(legs, nbrs):
            (w,) = [u for u in b.incident(n) if u != x]
            b.remove_vertex(n)
            b.add_edge(x, w)
    return b.freeze()


def regroup(
    d: Diagram,
    input_groups: Optional[Sequence[Sequence[int]]] = None,
    output_groups: Optional[Sequence[Sequence[int]]] = None,
    budget: int = 100_000,
) -> Diagram:
    """Merge groups of boundary legs into one leg per logical qubit and normalise.

    Groups hold positions in ``d.inputs`` / ``d.outputs``; logical qubit
    ``q`` owns input group ``q`` and output group ``q``.  ``None`` keeps
    every leg on its own.  Each group is joined by a new spider of the
    colour of the line its legs feed into, so that spider fusion collapses
    it into the line.
    """
    input_groups, output_groups = _check_groups(d, input_groups, output_groups)
    b = d.edit()
    ins = [_group_legs(b, [d.inputs[i] for i in g]) if len(g) > 1 else d.inputs[g[0]] for g in input_groups]
    outs = [_group_legs(b, [d.outputs[i] for i in g]) if len(g) > 1 else d.outputs[g[0]] for g in output_groups]
    b.inputs = ins
    b.outputs = outs
    nf, _ = normalize(b.freeze(), budget=budget)
    return nf


def logical_form(
    d: Diagram,
    input_groups: Optional[Sequence[Sequence[int]]] = None,
    output_groups: Optional[Sequence[Sequence[int]]] = None,
    budget: int = 100_000,
) -> Diagram:
    """Frame change, normalisation and regrouping in one go."""
    framed = strip_frame(d, input_groups, output_groups)
    nf, _ = normalize(framed, budget=budget)
    return regroup(nf, input_groups, output_groups, budget=budget)


@dataclass
class GateLibraryEntry:
    name: str
    diagram: Diagram
    matrix: np.ndarray

    @property
    def tensor(self) -> TensorMap:
        return TensorMap(len(self.diagram.inputs), len(self.diagram.outputs), self.matrix)

    def to_json(self) -> dict:
        return {"name": self.name, "diagram": self.diagram.to_json(), "tensor": self.tensor.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "GateLibraryEntry":
        try:
            d = Diagram.from_json(obj["diagram"])
            tm = TensorMap.from_json(obj["tensor"])
            name = str(obj["name"])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed gate library entry: {exc!r}") from exc
        if (tm.n_inputs, tm.n_outputs) != (len(d.inputs), len(d.outputs)):
            raise InputError(f"gate {name}: tensor shape does not match the diagram's boundary")
        return cls(name, d, tm.matrix)


def default_library_dir() -> Path:
    return Path(str(resources.files("topozx") / "data" / "gates"))


def load_library(directory: Optional[Path] = None) -> List[GateLibraryEntry]:
    """Entries from every ``*.json`` file in ``directory``, sorted by file name."""
    directory = Path(directory) if directory is not None else default_library_dir()
    entries = []
    for path in sorted(directory.glob("*.json")):
        with open(path) as fh:
            entries.append(GateLibraryEntry.from_json(json.load(fh)))
    return entries


def library_entry(name: str, library: Optional[List[GateLibraryEntry]] = None) -> GateLibraryEntry:
    for e in library if library is not None else load_library():
        if e.name == name:
            return e
    raise InputError(f"no gate named {name!r} in the library")


@dataclass
class Recognition:
    name: str
    method: str
    scalar: Optional[complex] = None
    max_residual: Optional[float] = None

    def to_json(self) -> dict:
        out = {"gate": self.name, "method": self.method}
        if self.scalar is not None:
            out["scalar"] = [round(self.scalar.real, 12), round(self.scalar.imag, 12)]
            out["max_residual"] = self.max_residual
        return out


def recognize(
    normal: Diagram,
    library: Optional[Iterable[GateLibraryEntry]] = None,
    tol: float = DEFAULT_TOL,
    rank_cap: int = DEFAULT_RANK_CAP,
) -> Recognition:
    """Name the library gate that ``normal`` implements.

    Isomorphism with a library diagram decides first.  Otherwise the tensor
    is compared with each entry's matrix when it fits under ``rank_cap``.
    """
    library = list(library) if library is not None else load_library()
    for e in library:
        if isomorphic(normal, e.diagram)[0]:
            return Recognition(e.name, "isomorphism")
    try:
        tm = evaluate(normal, rank_cap=rank_cap)
    except ResourceError:
        return Recognition(UNRECOGNIZED, "none")
    for e in library:
        if e.matrix.shape != tm.matrix.shape:
            continue
        eq = equiv_up_to_scalar(tm, e.tensor, tol=tol)
        if eq.equivalent:
            return Recognition(e.name, "tensor", eq.scalar, eq.max_residual)
    return Recognition(UNRECOGNIZED, "none")


def build_default_entries() -> List[GateLibraryEntry]:
    """The shipped library, computed from reference diagrams."""
    from . import catalog
    from .diagram import X
    from .phase import PI
    from .semantics import CNOT, CZ, IDENTITY, PAULI_X, PAULI_Z

    specs = [
        ("identity", catalog.wire(), IDENTITY),
        ("Z_L", catalog.single_spider(Z, PI), PAULI_Z),
        ("X_L", catalog.single_spider(X, PI), PAULI_X),
        ("CZ", catalog.cz(), CZ),
        ("CNOT", catalog.cnot(), CNOT),
    ]
    return [GateLibraryEntry(name, normalize(d)[0], np.asarray(m, dtype=complex)) for name, d, m in specs]
