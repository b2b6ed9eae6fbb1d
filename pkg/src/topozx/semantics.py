"""Dense tensor semantics of diagrams and equivalence up to a global scalar.

This is the only floating point component of the package.  Every rewrite is
checked against it in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .diagram import B, H, X, Z, Diagram, VertexKind, check
from .errors import InputError, ResourceError, ShapeError

DEFAULT_TOL = 1e-9
DEFAULT_RANK_CAP = 2 ** 14

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


@dataclass
class TensorMap:
    """A ``2**n_outputs x 2**n_inputs`` complex matrix.

    Row bits follow the outputs list and column bits the inputs list, the
    first wire being the most significant bit.
    """

    n_inputs: int
    n_outputs: int
    matrix: np.ndarray
    scale: Optional[float] = None

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=complex)
        want = (2 ** self.n_outputs, 2 ** self.n_inputs)
        if self.matrix.shape != want:
            raise ShapeError(f"matrix shape {self.matrix.shape} does not match signature {want}")
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("tensor has non-finite entries")

    @property
    def signature(self) -> Tuple[int, int]:
        return (self.n_inputs, self.n_outputs)

    def to_json(self) -> dict:
        return {
            "n_inputs": self.n_inputs,
            "n_outputs": self.n_outputs,
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TensorMap":
        try:
            m = np.array(obj["re"], dtype=float) + 1j * np.array(obj["im"], dtype=float)
            return cls(int(obj["n_inputs"]), int(obj["n_outputs"]), m.reshape(2 ** int(obj["n_outputs"]), -1))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed tensor JSON: {exc}") from exc

    def __matmul__(self, other: "TensorMap") -> "TensorMap":
        """``self @ other`` applies ``other`` first."""
        return TensorMap(other.n_inputs, self.n_outputs, self.matrix @ other.matrix)

    def kron(self, other: "TensorMap") -> "TensorMap":
        return TensorMap(
            self.n_inputs + other.n_inputs, self.n_outputs + other.n_outputs, np.kron(self.matrix, other.matrix)
        )


@dataclass(frozen=True)
class ScalarEquivalence:
    equivalent: bool
    scalar: Optional[complex]
    max_residual: float

    def to_json(self) -> dict:
        s = self.scalar
        return {
            "equivalent": self.equivalent,
            "scalar": None if s is None else {"re": s.real, "im": s.imag},
            "residual": self.max_residual,
        }


def unit_phase(phase_radians: float) -> complex:
    """``exp(i*phase)``, exact at multiples of pi/2."""
    quarter = phase_radians / (math.pi / 2)
    k = round(quarter)
    if abs(quarter - k) < 1e-12:
        return (1, 1j, -1, -1j)[k % 4]
    return complex(np.exp(1j * phase_radians))


def spider_array(kind: str, phase_radians: float, arity: int) -> np.ndarray:
    """Rank-``arity`` array of a Z or X spider, one axis per leg.

    The X spider is the Z spider with a Hadamard on every leg, which gives
    ``2**(-arity/2) * (1 + e^{i phase} (-1)^{|x|})`` on bit string ``x``.
    """
    w = unit_phase(phase_radians)
    if arity == 0:
        return np.array(1 + w, dtype=complex)
    if kind == X:
        parity = np.indices((2,) * arity).sum(axis=0) % 2
        return (1 + w * (1 - 2 * parity)).astype(complex) / math.sqrt(2) ** arity
    t = np.zeros((2,) * arity, dtype=complex)
    t[(0,) * arity] = 1
    t[(1,) * arity] += w
    return t


def generator_tensor(kind: VertexKind, n_in: int, n_out: int) -> TensorMap:
    if kind.kind == H:
        if (n_in, n_out) != (1, 1):
            raise ShapeError(f"Hadamard box has arity 1->1, not {n_in}->{n_out}")
        return TensorMap(1, 1, HADAMARD.copy())
    if kind.kind == B:
        raise ShapeError("boundary vertices have no tensor of their own")
    t = spider_array(kind.kind, kind.phase.radians(), n_in + n_out)
    return TensorMap(n_in, n_out, np.asarray(t).reshape(2 ** n_out, 2 ** n_in))


class _Node:
    __slots__ = ("array", "legs")

    def __init__(self, array: np.ndarray, legs: List[int]):
        self.array = array
        self.legs = legs


def _contract_pair(a: _Node, b: _Node) -> _Node:
    labels: Dict[int, int] = {}

    def lab(x):
        if x not in labels:
            labels[x] = len(labels)
        return labels[x]

    la = [lab(x) for x in a.legs]
    lb = [lab(x) for x in b.legs]
    counts: Dict[int, int] = {}
    for x in a.legs + b.legs:
        counts[x] = counts.get(x, 0) + 1
    out_legs = [x for x in dict.fromkeys(a.legs + b.legs) if counts[x] == 1]
    arr = np.einsum(a.array, la, b.array, lb, [labels[x] for x in out_legs], optimize=False)
    return _Node(arr, out_legs)


def _self_trace(n: _Node) -> _Node:
    counts: Dict[int, int] = {}
    for x in n.legs:
        counts[x] = counts.get(x, 0) + 1
    if all(c == 1 for c in counts.values()):
        return n
    labels = {x: i for i, x in enumerate(dict.fromkeys(n.legs))}
    out = [x for x in dict.fromkeys(n.legs) if counts[x] == 1]
    arr = np.einsum(n.array, [labels[x] for x in n.legs], [labels[x] for x in out])
    return _Node(arr, out)


def _result_rank(a: _Node, b: _Node) -> int:
    sa, sb = set(a.legs), set(b.legs)
    return len(sa ^ sb)


def _cap_rank(rank_cap: int) -> int:
    return int(math.floor(math.log2(rank_cap))) if rank_cap >= 1 else 0


def _spider_nodes(kind: str, phase: float, legs: List[int], fresh) -> List[_Node]:
    """A spider as a chain of at most three-legged spiders.

    Same-colour spiders compose exactly, so splitting a wide spider keeps
    the intermediate tensors small without changing the contraction.
    """
    if len(legs) <= 3:
        return [_Node(spider_array(kind, phase, len(legs)), list(legs))]
    out = []
    t = fresh()
    out.append(_Node(spider_array(kind, phase, 3), [legs[0], legs[1], t]))
    rest = legs[2:]
    while len(rest) > 2:
        t2 = fresh()
        out.append(_Node(spider_array(kind, 0.0, 3), [t, rest[0], t2]))
        t, rest = t2, rest[1:]
    out.append(_Node(spider_array(kind, 0.0, 3), [t] + rest))
    return out


def _network(d: Diagram) -> Tuple[List[_Node], Dict[int, int]]:
    # every edge end gets a leg label; the two ends of an edge share it
    counter = [0]

    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    legs: Dict[int, List[int]] = {v: [] for v in d.vertices()}
    for u, v in d.edges():
        x = fresh()
        legs[u].append(x)
        legs[v].append(x)
    open_label = {b: -(i + 1) for i, b in enumerate(list(d.outputs) + list(d.inputs))}
    nodes: List[_Node] = []
    for v in d.vertices():
        k = d.kind(v)
        if k.kind == B:
            nodes.append(_Node(np.eye(2, dtype=complex), [open_label[v], legs[v][0]]))
        elif k.kind == H:
            nodes.append(_self_trace(_Node(HADAMARD.copy(), list(legs[v]))))
        else:
            for n in _spider_nodes(k.kind, k.phase.radians(), legs[v], fresh):
                nodes.append(_self_trace(n))
    return nodes, open_label


def _contract(nodes: List[_Node], max_rank: int, rank_cap: int, rng) -> _Node:
    nodes = list(nodes)
    for n in nodes:
        if len(n.legs) > max_rank:
            raise ResourceError(f"a generator needs rank {len(n.legs)}, exceeding cap {rank_cap}")
    while len(nodes) > 1:
        index: Dict[int, List[int]] = {}
        for i, n in enumerate(nodes):
            for x in set(n.legs):
                if x >= 0:
                    index.setdefault(x, []).append(i)
        pairs = sorted({tuple(sorted(o)) for o in index.values() if len(o) == 2})
        if not pairs:
            # disconnected pieces: outer product of the two smallest
            order = sorted(range(len(nodes)), key=lambda i: (len(nodes[i].legs), i))
            pairs = [tuple(sorted(order[:2]))]
        if rng is not None:
            i, j = pairs[int(rng.integers(len(pairs)))]
        else:
            i, j = min(pairs, key=lambda p: _result_rank(nodes[p[0]], nodes[p[1]]))
        r = _result_rank(nodes[i], nodes[j])
        if r > max_rank:
            raise ResourceError(
                f"contraction needs an intermediate of rank {r} ({2 ** r} amplitudes), exceeding cap {rank_cap}"
            )
        merged = _contract_pair(nodes[i], nodes[j])
        nodes = [n for k, n in enumerate(nodes) if k not in (i, j)] + [merged]
    if nodes:
        return nodes[0]
    return _Node(np.array(1, dtype=complex), [])


def evaluate(d: Diagram, rank_cap: int = DEFAULT_RANK_CAP, order_seed: Optional[int] = None) -> TensorMap:
    """Contract the diagram to a dense matrix.

    The contraction order is greedy (smallest intermediate first) unless
    ``order_seed`` is given, in which case connected pairs are picked at
    random; the result does not depend on the order.

    The returned map also carries ``scale``, the same contraction done on
    entrywise absolute values.  It bounds every entry and tells genuine
    zeros apart from cancellation roundoff.
    """
    check(d)
    max_rank = _cap_rank(rank_cap)
    n_open = d.n_inputs + d.n_outputs
    if n_open > max_rank:
        raise ResourceError(f"result has {n_open} open wires, {2 ** n_open} amplitudes exceed cap {rank_cap}")
    nodes, open_label = _network(d)
    rng = np.random.default_rng(order_seed) if order_seed is not None else None
    final = _contract(nodes, max_rank, rank_cap, rng)
    bound = _contract([_Node(np.abs(n.array), n.legs) for n in nodes], max_rank, rank_cap, None)
    wanted = [open_label[b] for b in d.outputs] + [open_label[b] for b in d.inputs]
    arr = final.array
    if wanted:
        arr = np.transpose(arr, [final.legs.index(x) for x in wanted])
    tm = TensorMap(d.n_inputs, d.n_outputs, np.asarray(arr).reshape(2 ** d.n_outputs, 2 ** d.n_inputs))
    tm.scale = float(np.max(np.abs(bound.array)))
    return tm


def _is_zero(t: TensorMap, amax: float, tol: float) -> bool:
    if amax == 0.0:
        return True
    scale = getattr(t, "scale", None)
    return scale is not None and amax <= tol * scale


def equiv_up_to_scalar(a: TensorMap, b: TensorMap, tol: float = DEFAULT_TOL) -> ScalarEquivalence:
    """Decide whether ``a = scalar * b`` for some nonzero complex scalar.

    The scalar is read off ``b``'s largest-magnitude entry.  The residual is
    measured after dividing both sides by the magnitude of ``a``'s largest
    entry, so the verdict does not depend on the overall size of the tensors.
    Maps produced by :func:`evaluate` whose entries are all within roundoff
    of zero count as the zero map.
    """
    if a.signature != b.signature:
        raise ShapeError(f"signatures differ: {a.signature} vs {b.signature}")
    if tol <= 0:
        raise InputError("tolerance must be positive")
    A, Bm = a.matrix, b.matrix
    amax = float(np.max(np.abs(A)))
    bmax = float(np.max(np.abs(Bm)))
    a_zero, b_zero = _is_zero(a, amax, tol), _is_zero(b, bmax, tol)
    if a_zero and b_zero:
        return ScalarEquivalence(True, 1 + 0j, 0.0)
    if a_zero or b_zero:
        # a zero map is not a rescaling of a nonzero one
        return ScalarEquivalence(False, None, 1.0)
    idx = np.unravel_index(int(np.argmax(np.abs(Bm))), Bm.shape)
    scalar = complex(A[idx] / Bm[idx])
    residual = float(np.max(np.abs(A - scalar * Bm))) / amax
    return ScalarEquivalence(residual <= tol, scalar, residual)


def diagram_equiv(a: Diagram, b: Diagram, tol: float = DEFAULT_TOL, rank_cap: int = DEFAULT_RANK_CAP) -> ScalarEquivalence:
    return equiv_up_to_scalar(evaluate(a, rank_cap), evaluate(b, rank_cap), tol)


# reference matrices used by tests, the gate library and the CLI
def _m(rows: Sequence[Sequence[complex]]) -> np.ndarray:
    return np.array(rows, dtype=complex)


PAULI_X = _m([[0, 1], [1, 0]])
PAULI_Z = _m([[1, 0], [0, -1]])
IDENTITY = np.eye(2, dtype=complex)
CNOT = _m([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
CZ = np.diag([1, 1, 1, -1]).astype(complex)
