"""Graphviz DOT export.

Nodes are named ``n0, n1, ...`` in canonical-label order, so isomorphic
diagrams export to identical text.
"""

from __future__ import annotations

from typing import List

from .canon import canonical_labelling
from .diagram import B, H, X, Z, Diagram

_SHAPES = {
    Z: 'shape=circle, style=filled, fillcolor="#7bc67b"',
    X: 'shape=circle, style=filled, fillcolor="#e06666"',
    H: 'shape=square, style=filled, fillcolor="#f4d35e", label="H"',
    B: 'shape=point',
}


def to_dot(d: Diagram, name: str = "diagram") -> str:
    lines: List[str] = [f"graph {name} {{"]
    if len(d):
        lab = canonical_labelling(d)
        rank = {v: i for i, v in enumerate(lab.order)}
        for v in lab.order:
            k = d.kind(v)
            attrs = [f'kind="{k.kind}"']
            if k.is_spider:
                attrs.append(f'phase="{k.phase}"')
                attrs.append(f'label="{"" if k.phase.is_zero() else k.phase}"')
            role = d.boundary_role(v)
            if role is not None:
                attrs.append(f'role="{role[0]}{role[1]}"')
            lines.append(f"  n{rank[v]} [{_SHAPES[k.kind]}, {', '.join(attrs)}];")
        edges = sorted(tuple(sorted((rank[u], rank[v]))) for u, v in d.edges())
        for a, c in edges:
            lines.append(f"  n{a} -- n{c};")
    lines.append("}")
    return "\n".join(lines) + "\n"
