"""The compile pipeline behind the command line.

A pattern file is either a lattice pattern (lattice, defects, operators,
outcomes) or a ready-made process diagram with its logical leg groups.
Both end in a normal form that is regrouped into logical qubits and matched
against the gate library.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .diagram import Diagram
from .errors import InputError, ResourceError
from .gates import UNRECOGNIZED, GateLibraryEntry, Recognition, library_entry, load_library, recognize, regroup, strip_frame
from .measurement import Pattern, pattern_from_json, run_pattern
from .rewrite import DEFAULT_BUDGET, Trace, normalize
from .semantics import DEFAULT_RANK_CAP, DEFAULT_TOL, equiv_up_to_scalar, evaluate


def digest(obj) -> str:
    """sha256 of the canonical JSON text of ``obj``."""
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def _counts(d: Diagram) -> dict:
    v, e, h = d.measure()
    return {"vertices": v, "edges": e, "hadamards": h, "inputs": len(d.inputs), "outputs": len(d.outputs)}


def _positions(groups: Sequence[Sequence[int]]) -> List[List[int]]:
    out, k = [], 0
    for g in groups:
        out.append(list(range(k, k + len(g))))
        k += len(g)
    return out


@dataclass
class Compilation:
    """Everything one compile run produced."""

    source: str
    start: Diagram
    measured: Diagram
    normal: Diagram
    trace: Trace
    logical: Diagram
    input_groups: List[List[int]]
    output_groups: List[List[int]]
    recognition: Recognition
    equivalence: Optional[dict] = None
    soundness: Optional[dict] = None
    parity: List[dict] = field(default_factory=list)
    sites: Optional[int] = None
    outcome_source: Optional[str] = None
    trace_start: Optional[Diagram] = None


def diagram_pattern_from_json(obj: dict):
    try:
        d = Diagram.from_json(obj["diagram"])
        groups = obj.get("groups", {})
        ins = [[int(i) for i in g] for g in groups.get("inputs", [[i] for i in range(len(d.inputs))])]
        outs = [[int(i) for i in g] for g in groups.get("outputs", [[i] for i in range(len(d.outputs))])]
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed diagram pattern: {exc!r}") from exc
    return d, ins, outs


def _soundness(before: Diagram, after: Diagram, tol: float, rank_cap: int) -> Optional[dict]:
    try:
        eq = equiv_up_to_scalar(evaluate(before, rank_cap=rank_cap), evaluate(after, rank_cap=rank_cap), tol=tol)
    except ResourceError:
        return None
    return eq.to_json()


def compile_pattern(
    obj: dict,
    budget: int = DEFAULT_BUDGET,
    tol: float = DEFAULT_TOL,
    rank_cap: int = DEFAULT_RANK_CAP,
    outcomes: Optional[object] = None,
    library: Optional[List[GateLibraryEntry]] = None,
    check_soundness: bool = True,
) -> Compilation:
    """Run a parsed pattern file through to a recognised gate.

    ``outcomes`` overrides the outcome choice of a lattice pattern.
    """
    if not isinstance(obj, dict):
        raise InputError("pattern file must hold a JSON object")
    library = library if library is not None else load_library()
    parity: List[dict] = []
    sites = outcome_source = None
    if "diagram" in obj:
        source = "diagram"
        start, ins, outs = diagram_pattern_from_json(obj)
        measured = start
    else:
        source = "lattice"
        p: Pattern = pattern_from_json(obj)
        if outcomes is not None:
            p.outcomes = outcomes
        cp = run_pattern(p, budget=budget, normalise=False)
        start, measured = cp.build.diagram, cp.measured
        ins, outs = _positions(cp.inputs), _positions(cp.outputs)
        parity = cp.parity
        sites = len(cp.build.site_index)
        outcome_source = cp.pattern.source
    framed = strip_frame(measured, ins, outs)
    normal, trace = normalize(framed, budget=budget)
    logical = regroup(normal, ins, outs, budget=budget)
    rec = recognize(logical, library, tol=tol, rank_cap=rank_cap)
    equivalence = None
    if rec.name != UNRECOGNIZED:
        try:
            tm = evaluate(logical, rank_cap=rank_cap)
            equivalence = equiv_up_to_scalar(tm, library_entry(rec.name, library).tensor, tol=tol).to_json()
        except ResourceError:
            equivalence = None
    sound = _soundness(framed, normal, tol, rank_cap) if check_soundness else None
    return Compilation(
        source, start, measured, normal, trace, logical, ins, outs, rec, equivalence, sound, parity, sites, outcome_source, framed
    )


def report(c: Compilation, input_digest: str, wall_time: float, artifacts: Optional[dict] = None) -> dict:
    """The report dictionary; only ``wall_time_s`` varies between identical runs."""
    return {
        "input_sha256": input_digest,
        "source": c.source,
        "sites": c.sites,
        "outcomes": c.outcome_source,
        "counts": {
            "before": _counts(c.start),
            "measured": _counts(c.measured),
            "normal": _counts(c.normal),
            "logical": _counts(c.logical),
        },
        "trace_length": len(c.trace),
        "recognized": c.recognition.to_json(),
        "equivalence": c.equivalence,
        "soundness": c.soundness,
        "parity_violations": c.parity,
        "artifacts": artifacts or {},
        "wall_time_s": round(wall_time, 6),
    }


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        return False
