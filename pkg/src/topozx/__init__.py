"""Red/green diagram rewriting and a topological cluster-state compiler."""

from .phase import Phase, ZERO, PI
from .diagram import Diagram, DiagramBuilder, VertexKind, Signature, Violation, validate
from .diagram import compose_sequential, compose_parallel
from .canon import canonical_hash, isomorphic
from .semantics import TensorMap, evaluate, equiv_up_to_scalar, generator_tensor

__version__ = "0.1.0"
