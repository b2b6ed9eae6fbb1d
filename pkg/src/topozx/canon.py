"""Canonical labelling, hashing and isomorphism of diagrams.

Vertices are first coloured by kind, phase, self-loop count and boundary
position, then the colouring is refined by neighbourhood multisets until it
is stable.  Remaining ties are broken by individualising each candidate
vertex in turn and keeping the lexicographically least certificate.
Automorphisms found along the way prune equivalent branches.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .diagram import Diagram, check

Colouring = Dict[int, int]


def _initial(d: Diagram) -> Colouring:
    keys = {}
    for v in d.vertices():
        k = d.kind(v).key()
        role = d.boundary_role(v)
        keys[v] = (k, role or ("", -1), d.loops(v))
    return _rank(keys)


def _rank(keys: Dict[int, tuple]) -> Colouring:
    order = {k: i for i, k in enumerate(sorted(set(keys.values())))}
    return {v: order[k] for v, k in keys.items()}


def refine(d: Diagram, colours: Colouring) -> Colouring:
    """Iterate neighbourhood refinement until the number of classes is stable."""
    n_classes = len(set(colours.values()))
    while True:
        keys = {}
        for v in colours:
            row = d._adj[v]
            sig = sorted((colours[u], m) for u, m in row.items() if u != v)
            keys[v] = (colours[v], tuple(sig))
        new = _rank(keys)
        k = len(set(new.values()))
        if k == n_classes:
            return new
        colours, n_classes = new, k


def _individualise(colours: Colouring, v: int) -> Colouring:
    c = colours[v]
    return _rank({u: (cu, 0 if u == v else 1) if cu == c else (cu, 0) for u, cu in colours.items()})


def _target_cell(colours: Colouring) -> Optional[List[int]]:
    cells: Dict[int, List[int]] = {}
    for v, c in colours.items():
        cells.setdefault(c, []).append(v)
    best = None
    for c in sorted(cells):
        cell = cells[c]
        if len(cell) > 1:
            # first smallest non-trivial cell keeps the branching factor low
            if best is None or len(cell) < len(best):
                best = cell
    return sorted(best) if best else None


def _certificate(d: Diagram, labels: Colouring) -> tuple:
    order = sorted(labels, key=labels.get)
    verts = []
    for v in order:
        k = d.kind(v).key()
        verts.append((k, d.loops(v)))
    edges = []
    for u in order:
        for w, m in d._adj[u].items():
            if w != u and labels[u] < labels[w]:
                edges.append((labels[u], labels[w], m))
    edges.sort()
    return (
        tuple(verts),
        tuple(edges),
        tuple(labels[v] for v in d.inputs),
        tuple(labels[v] for v in d.outputs),
    )


def _orbits(cell: Sequence[int], autos: List[Dict[int, int]]) -> Dict[int, int]:
    parent = {v: v for v in cell}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in autos:
        for v in cell:
            w = a[v]
            if w in parent:
                rv, rw = find(v), find(w)
                if rv != rw:
                    parent[max(rv, rw)] = min(rv, rw)
    return {v: find(v) for v in cell}


@dataclass(frozen=True)
class Labelling:
    labels: Dict[int, int]
    certificate: tuple

    @property
    def order(self) -> List[int]:
        return sorted(self.labels, key=self.labels.get)


class _Search:
    def __init__(self, d: Diagram):
        self.d = d
        self.best_cert: Optional[tuple] = None
        self.best_labels: Optional[Colouring] = None
        self.autos: List[Dict[int, int]] = []
        self.leaves: Dict[tuple, Colouring] = {}

    def run(self, colours: Colouring, fixed: Tuple[int, ...]) -> None:
        colours = refine(self.d, colours)
        cell = _target_cell(colours)
        if cell is None:
            self._leaf(colours)
            return
        explored: List[int] = []
        for v in cell:
            usable = [a for a in self.autos if all(a[f] == f for f in fixed)]
            if usable and explored:
                orbit = _orbits(cell, usable)
                if any(orbit[u] == orbit[v] for u in explored):
                    continue
            self.run(_individualise(colours, v), fixed + (v,))
            explored.append(v)

    def _leaf(self, labels: Colouring) -> None:
        cert = _certificate(self.d, labels)
        prev = self.leaves.get(cert)
        if prev is not None:
            # same certificate from two leaves: prev-label -> label is an automorphism
            inv = {lab: v for v, lab in labels.items()}
            self.autos.append({v: inv[prev[v]] for v in prev})
            return
        self.leaves[cert] = labels
        if self.best_cert is None or cert < self.best_cert:
            self.best_cert, self.best_labels = cert, labels


def canonical_labelling(d: Diagram) -> Labelling:
    cached = d._cache.get("canon")
    if cached is not None:
        return cached
    search = _Search(d)
    search.run(_initial(d), ())
    if search.best_labels is None:
        out = Labelling({}, _certificate(d, {}))
    else:
        out = Labelling(dict(search.best_labels), search.best_cert)
    d._cache["canon"] = out
    return out


def canonical_form(d: Diagram) -> Diagram:
    """The diagram relabelled so that vertex ids follow canonical order."""
    lab = canonical_labelling(d)
    return d.relabel(lab.labels)


def canonical_hash(d: Diagram) -> str:
    check(d)
    return hash_of_certificate(canonical_labelling(d).certificate)


def hash_of_certificate(cert: tuple) -> str:
    return hashlib.sha256(repr(cert).encode()).hexdigest()


def isomorphic(a: Diagram, b: Diagram) -> Tuple[bool, Optional[Dict[int, int]]]:
    """Test for a kind-, phase- and boundary-order-preserving isomorphism ``a -> b``."""
    if len(a) != len(b) or a.signature != b.signature or a.num_edges() != b.num_edges():
        return False, None
    la, lb = canonical_labelling(a), canonical_labelling(b)
    if la.certificate != lb.certificate:
        return False, None
    inv = {lab: v for v, lab in lb.labels.items()}
    return True, {v: inv[lab] for v, lab in la.labels.items()}


def canonical_order(d: Diagram) -> List[int]:
    """Vertex order used to rank rewrite matches.

    The order is computed on whichever of ``d`` and its colour swap has the
    smaller certificate, so colour-swapped diagrams are rewritten in
    corresponding order.
    """
    cached = d._cache.get("order")
    if cached is not None:
        return cached
    la = canonical_labelling(d)
    lb = canonical_labelling(d.colour_swap())
    d._cache["order"] = lb.order if lb.certificate < la.certificate else la.order
    return d._cache["order"]
