"""Rewrite rules, matching, single-step application and normalisation.

Seven rules are available.  The bialgebra and Hopf rules are deliberately
absent: without them the rule system is expected to be confluent, and that
claim is exercised empirically by the test suite.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .canon import canonical_hash, canonical_order
from .diagram import B, H, SPIDERS, Diagram, DiagramBuilder, VertexKind, other_colour
from .errors import BudgetError, InputError, MatchError, ReplayError
from .phase import PI, Phase

DEFAULT_BUDGET = 10 ** 6


class RuleId(enum.Enum):
    SPIDER_FUSE = "spider-fuse"
    IDENTITY_REMOVE = "identity-remove"
    HH_CANCEL = "hh-cancel"
    COLOR_CHANGE = "color-change"
    STATE_COPY = "state-copy"
    PI_COPY = "pi-copy"
    SELF_LOOP_REMOVE = "self-loop-remove"

    @classmethod
    def parse(cls, name: str) -> "RuleId":
        key = name.strip().lower().replace("_", "-")
        aliases = {
            "spiderfuse": "spider-fuse",
            "identityremove": "identity-remove",
            "hhcancel": "hh-cancel",
            "colorchange": "color-change",
            "colourchange": "color-change",
            "statecopy": "state-copy",
            "picopy": "pi-copy",
            "selfloopremove": "self-loop-remove",
        }
        key = aliases.get(key.replace("-", ""), key)
        for r in cls:
            if r.value == key:
                return r
        raise InputError(f"unknown rule {name!r}; choose from {', '.join(r.value for r in cls)}")


SHRINK_PRIORITY = (
    RuleId.HH_CANCEL,
    RuleId.SELF_LOOP_REMOVE,
    RuleId.STATE_COPY,
    RuleId.PI_COPY,
    RuleId.SPIDER_FUSE,
    RuleId.IDENTITY_REMOVE,
)


@dataclass(frozen=True)
class Match:
    rule: RuleId
    anchors: Tuple[int, ...]
    edges: Tuple[Tuple[int, int], ...] = ()


class RewriteStep:
    """One applied rule instance.

    Hashes are canonical hashes of the diagrams before and after the step.
    Steps recorded by :func:`normalize` keep both diagrams and compute the
    hashes on first use.
    """

    __slots__ = ("rule", "match", "_before", "_after", "_before_hash", "_after_hash")

    def __init__(self, rule, match, before_hash=None, after_hash=None, before=None, after=None):
        self.rule = rule
        self.match = match
        self._before_hash = before_hash
        self._after_hash = after_hash
        self._before = before
        self._after = after

    @property
    def before_hash(self) -> str:
        if self._before_hash is None:
            self._before_hash = canonical_hash(self._before)
        return self._before_hash

    @property
    def after_hash(self) -> str:
        if self._after_hash is None:
            self._after_hash = canonical_hash(self._after)
        return self._after_hash

    @property
    def after(self) -> Optional[Diagram]:
        return self._after

    def __repr__(self) -> str:
        return f"RewriteStep({self.rule.value}, {list(self.match.anchors)})"

    def to_json(self) -> dict:
        return {
            "rule": self.rule.value,
            "anchors": list(self.match.anchors),
            "before": self.before_hash,
            "after": self.after_hash,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RewriteStep":
        rule = RuleId.parse(obj["rule"])
        return cls(rule, Match(rule, tuple(int(a) for a in obj["anchors"])), str(obj["before"]), str(obj["after"]))


@dataclass
class Trace:
    steps: List[RewriteStep] = field(default_factory=list)
    # indices into ``steps`` where a committed group of steps ends; the size
    # measure strictly decreases from one checkpoint to the next
    checkpoints: List[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def to_json(self) -> dict:
        return {"steps": [s.to_json() for s in self.steps]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, obj: dict) -> "Trace":
        try:
            return cls([RewriteStep.from_json(s) for s in obj["steps"]])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed trace JSON: {exc!r}") from exc

    def is_contiguous(self) -> bool:
        return all(a.after_hash == b.before_hash for a, b in zip(self.steps, self.steps[1:]))


def measure(d: Diagram) -> Tuple[int, int, int]:
    return d.measure()


# -- local shape predicates -------------------------------------------------


def _h_doubly_attached(d, v: int) -> bool:
    return any(d.type(u) == H and d.multiplicity(v, u) == 2 for u in d.neighbours(v))


def _h_ends(d, v: int) -> Tuple[int, int]:
    """Number of edge ends at ``v`` going to Hadamard boxes and to anything else."""
    n_h = n_plain = 0
    for u in d.incident(v):
        if d.type(u) == H:
            n_h += 1
        else:
            n_plain += 1
    return n_h, n_plain


def _is_fuse(d, u: int, v: int) -> bool:
    return u != v and d.is_spider(u) and d.type(u) == d.type(v) and d.multiplicity(u, v) > 0


def _is_identity(d, v: int) -> bool:
    return d.is_spider(v) and d.phase(v).is_zero() and d.loops(v) == 0 and d.degree(v) == 2


def _is_hh(d, u: int, v: int) -> bool:
    return u != v and d.type(u) == H and d.type(v) == H and d.multiplicity(u, v) > 0


def _is_colour_change(d, v: int) -> bool:
    return d.is_spider(v) and not _h_doubly_attached(d, v)


def _is_state_copy(d, e: int, s: int) -> bool:
    return (
        d.is_spider(e)
        and d.is_spider(s)
        and d.type(e) != d.type(s)
        and d.degree(e) == 1
        and d.loops(e) == 0
        and d.phase(e).is_pauli()
        and d.multiplicity(e, s) == 1
        and d.loops(s) == 0
    )


def _is_pi_copy(d, p: int, s: int) -> bool:
    return (
        d.is_spider(p)
        and d.is_spider(s)
        and d.type(p) != d.type(s)
        and d.phase(p).is_pi()
        and d.degree(p) >= 2
        and d.loops(p) == 0
        and d.multiplicity(p, s) == 1
        and d.loops(s) == 0
    )


def _is_self_loop(d, v: int) -> bool:
    return d.is_spider(v) and d.loops(v) > 0


def is_valid_match(d: Diagram, m: Match) -> bool:
    a = m.anchors
    if any(v not in d for v in a):
        return False
    r = m.rule
    try:
        if r is RuleId.SPIDER_FUSE:
            return len(a) == 2 and _is_fuse(d, *a)
        if r is RuleId.IDENTITY_REMOVE:
            return len(a) == 1 and _is_identity(d, a[0])
        if r is RuleId.HH_CANCEL:
            return len(a) == 2 and _is_hh(d, *a)
        if r is RuleId.COLOR_CHANGE:
            return len(a) == 1 and _is_colour_change(d, a[0])
        if r is RuleId.STATE_COPY:
            return len(a) == 2 and _is_state_copy(d, *a)
        if r is RuleId.PI_COPY:
            return len(a) == 2 and _is_pi_copy(d, *a)
        if r is RuleId.SELF_LOOP_REMOVE:
            return len(a) == 1 and _is_self_loop(d, a[0])
    except KeyError:
        return False
    return False


# -- matching ---------------------------------------------------------------


def _raw_matches(d: Diagram, rule: RuleId) -> List[Match]:
    out: List[Match] = []
    verts = d.vertices()
    if rule is RuleId.SPIDER_FUSE:
        for u in verts:
            for v in d.neighbours(u):
                if u < v and _is_fuse(d, u, v):
                    out.append(Match(rule, (u, v), ((u, v),)))
    elif rule is RuleId.IDENTITY_REMOVE:
        out = [Match(rule, (v,)) for v in verts if _is_identity(d, v)]
    elif rule is RuleId.HH_CANCEL:
        for u in verts:
            for v in d.neighbours(u):
                if u < v and _is_hh(d, u, v):
                    out.append(Match(rule, (u, v), ((u, v),)))
    elif rule is RuleId.COLOR_CHANGE:
        out = [Match(rule, (v,)) for v in verts if _is_colour_change(d, v)]
    elif rule is RuleId.STATE_COPY:
        for e in verts:
            if d.is_spider(e) and d.degree(e) == 1:
                for s in d.neighbours(e):
                    if _is_state_copy(d, e, s):
                        out.append(Match(rule, (e, s), ((e, s),)))
    elif rule is RuleId.PI_COPY:
        for p in verts:
            if d.is_spider(p) and d.phase(p).is_pi():
                for s in d.neighbours(p):
                    if _is_pi_copy(d, p, s):
                        out.append(Match(rule, (p, s), ((p, s),)))
    elif rule is RuleId.SELF_LOOP_REMOVE:
        out = [Match(rule, (v,), ((v, v),)) for v in verts if _is_self_loop(d, v)]
    return out


class Ranking:
    """Vertex order used to pick among matches.

    It starts from the canonical order of a diagram.  Vertices created by
    later rewrites rank after all original ones, in creation order, so the
    order stays isomorphism-invariant without relabelling at every step.
    """

    def __init__(self, d: Diagram, order: Optional[Sequence[int]] = None):
        if order is None:
            order = canonical_order(d)
        self.rank = {v: i for i, v in enumerate(order)}
        self.base = len(self.rank) - d.next_id

    def __call__(self, v: int) -> int:
        r = self.rank.get(v)
        return r if r is not None else self.base + v + len(self.rank)


def _sorted(matches: List[Match], key: Callable[[int], int]) -> List[Match]:
    out = []
    for m in matches:
        if m.rule in (RuleId.SPIDER_FUSE, RuleId.HH_CANCEL):
            # symmetric pair: the lower-ranked vertex is kept and listed first
            m = Match(m.rule, tuple(sorted(m.anchors, key=key)), m.edges)
        out.append(m)
    out.sort(key=lambda m: tuple(key(v) for v in m.anchors))
    return out


def find_matches(d: Diagram, rule: RuleId, order: Optional[Sequence[int]] = None) -> List[Match]:
    """All matches of ``rule`` in ``d``, ordered by canonical vertex labels."""
    return _sorted(_raw_matches(d, rule), Ranking(d, order))


# -- application ------------------------------------------------------------


def _fuse(b: DiagramBuilder, key, u: int, v: int) -> None:
    b.add_phase(u, b.phase(v))
    m = b.multiplicity(u, v)
    loops = b.loops(v)
    for w in b.neighbours(v):
        if w != u:
            b.add_edge(u, w, b.multiplicity(v, w))
    b.add_edge(u, u, loops + m - 1)
    b.remove_vertex(v)


def _identity_remove(b: DiagramBuilder, key, v: int) -> None:
    a, c = b.incident(v)
    b.remove_vertex(v)
    b.add_edge(a, c)


def _hh_cancel(b: DiagramBuilder, key, h1: int, h2: int) -> None:
    if b.multiplicity(h1, h2) == 2:
        b.remove_vertex(h1)
        b.remove_vertex(h2)
        return
    (a,) = [x for x in b.incident(h1) if x != h2]
    (c,) = [x for x in b.incident(h2) if x != h1]
    b.remove_vertex(h1)
    b.remove_vertex(h2)
    b.add_edge(a, c)


def _colour_change(b: DiagramBuilder, v: int, key=None) -> None:
    k = b.kind(v)
    b.set_kind(v, VertexKind(other_colour(k.kind), k.phase))
    for u in sorted(b.incident(v), key=key):
        if b.type(u) == H:
            (w,) = [x for x in b.incident(u) if x != v]
            b.remove_vertex(u)
            b.add_edge(v, w)
        else:
            b.remove_edge(v, u)
            h = b.h()
            b.add_edge(v, h)
            b.add_edge(h, u)


def _colour_change_step(b: DiagramBuilder, key, v: int) -> None:
    _colour_change(b, v, key)


def _state_copy(b: DiagramBuilder, key, e: int, s: int) -> None:
    kind = b.kind(e)
    legs = sorted((w for w in b.incident(s) if w != e), key=key)
    b.remove_vertex(e)
    b.remove_vertex(s)
    for w in legs:
        n = b.add_vertex(kind)
        b.add_edge(n, w)


def _pi_copy(b: DiagramBuilder, key, p: int, s: int) -> None:
    pk = b.kind(p)
    b.set_phase(s, -b.phase(s))
    for w in sorted((x for x in b.incident(s) if x != p), key=key):
        b.subdivide(s, w, VertexKind(pk.kind, PI))
    b.set_phase(p, 0)


def _self_loop(b: DiagramBuilder, key, v: int) -> None:
    b.remove_edge(v, v)


_APPLY: Dict[RuleId, Callable] = {
    RuleId.SPIDER_FUSE: _fuse,
    RuleId.IDENTITY_REMOVE: _identity_remove,
    RuleId.HH_CANCEL: _hh_cancel,
    RuleId.COLOR_CHANGE: _colour_change_step,
    RuleId.STATE_COPY: _state_copy,
    RuleId.PI_COPY: _pi_copy,
    RuleId.SELF_LOOP_REMOVE: _self_loop,
}


def apply(d: Diagram, m: Match, check: bool = True, key: Optional[Callable[[int], int]] = None) -> Diagram:
    """Apply one match.  ``key`` orders the legs when new vertices are created."""
    if not is_valid_match(d, m):
        raise MatchError(f"{m.rule.value} does not match at anchors {list(m.anchors)}")
    b = d.edit()
    _APPLY[m.rule](b, key, *m.anchors)
    return b.freeze(check=check)


def match_at(d: Diagram, rule: RuleId, anchors: Sequence[int]) -> Match:
    """Build a match for ``rule`` from user-supplied anchors.

    For two-vertex rules a single anchor is accepted; the first match in
    canonical order that involves it is used.
    """
    anchors = tuple(anchors)
    m = Match(rule, anchors)
    if is_valid_match(d, m):
        return m
    if rule in (RuleId.SPIDER_FUSE, RuleId.HH_CANCEL) and len(anchors) == 2:
        swapped = Match(rule, anchors[::-1])
        if is_valid_match(d, swapped):
            return swapped
    for cand in find_matches(d, rule):
        if len(anchors) == 1 and anchors[0] in cand.anchors:
            return cand
    raise MatchError(f"no {rule.value} match at anchors {list(anchors)}")


# -- normalisation ----------------------------------------------------------


def _absorb_candidates(d: Diagram) -> List[Match]:
    out = []
    for v in d.vertices():
        if d.is_spider(v) and not _h_doubly_attached(d, v):
            n_h, n_plain = _h_ends(d, v)
            if n_h > n_plain:
                out.append(Match(RuleId.COLOR_CHANGE, (v,)))
    return out


def _reduces(d: Diagram, m: Match) -> bool:
    """Whether applying ``m`` strictly lowers (vertices, edges, Hadamards)."""
    r = m.rule
    if r in (RuleId.SPIDER_FUSE, RuleId.IDENTITY_REMOVE, RuleId.HH_CANCEL, RuleId.SELF_LOOP_REMOVE):
        return True
    if r is RuleId.STATE_COPY:
        return d.degree(m.anchors[1]) <= 3
    if r is RuleId.COLOR_CHANGE:
        n_h, n_plain = _h_ends(d, m.anchors[0])
        return n_h > n_plain
    # a pi copy always adds at least one vertex
    return False


Step = Tuple[Match, Diagram]


class _Run:
    """Book-keeping for one normalisation: current diagram, trace, budget."""

    def __init__(self, d: Diagram, budget: int):
        self.d = d
        self.trace = Trace()
        self.budget = budget

    def commit(self, steps: List[Step]) -> None:
        for m, after in steps:
            if len(self.trace.steps) >= self.budget:
                raise BudgetError(f"step budget {self.budget} exhausted", diagram=self.d, trace=self.trace)
            self.trace.steps.append(RewriteStep(m.rule, m, before=self.d, after=after))
            self.d = after
        self.trace.checkpoints.append(len(self.trace.steps))


def _first_match(d: Diagram, priority: Sequence[RuleId], key) -> Optional[Match]:
    for rule in priority:
        ms = [m for m in _raw_matches(d, rule) if _reduces(d, m)]
        if ms:
            return _sorted(ms, key)[0]
    absorb = _absorb_candidates(d)
    if absorb:
        return _sorted(absorb, key)[0]
    return None


def _greedy(d: Diagram, priority: Sequence[RuleId], key, limit: int) -> List[Step]:
    steps = []
    while len(steps) < limit:
        m = _first_match(d, priority, key)
        if m is None:
            break
        d = apply(d, m, check=False, key=key)
        steps.append((m, d))
    return steps


def _lookahead(d: Diagram, prio, key, limit: int) -> Optional[List[Step]]:
    start = d.measure()
    heads: List[Match] = []
    for rule in prio:
        if rule in (RuleId.STATE_COPY, RuleId.PI_COPY):
            heads.extend(m for m in _sorted(_raw_matches(d, rule), key) if not _reduces(d, m))
    for head in heads:
        d1 = apply(d, head, check=False, key=key)
        tail = _greedy(d1, prio, key, max(limit - 1, 0))
        final = tail[-1][1] if tail else d1
        if final.measure() < start:
            return [(head, d1)] + tail
    return None


def normalize(
    d: Diagram,
    policy: str = "shrink",
    budget: int = DEFAULT_BUDGET,
    priority: Optional[Sequence[RuleId]] = None,
) -> Tuple[Diagram, Trace]:
    """Rewrite ``d`` to a normal form, returning it with the applied steps.

    ``shrink`` applies size-reducing matches in rule-priority order, the first
    match in canonical order each time, then colour changes that strictly
    reduce a spider's Hadamard count.  When nothing reduces directly, each
    copy step is tried as the head of a group of steps that together reduce
    the size; the first such group found is kept.  Every kept group lowers
    (vertices, edges, Hadamards) lexicographically, so the loop terminates.

    ``measure`` only folds measurement effects into the graph and cancels
    pairs of pi phases along chains; it keeps the remaining graph intact.
    """
    from .diagram import check

    check(d)
    if policy == "measure":
        return _normalize_measured(d, budget)
    if policy != "shrink":
        raise InputError(f"unknown normalisation policy {policy!r}")
    prio = tuple(priority) if priority is not None else SHRINK_PRIORITY
    if set(prio) - set(SHRINK_PRIORITY):
        raise InputError("priority lists may only name size-reducing rules")
    run = _Run(d, budget)
    key = Ranking(d)
    while True:
        m = _first_match(run.d, prio, key)
        if m is not None:
            run.commit([(m, apply(run.d, m, check=False, key=key))])
            continue
        group = _lookahead(run.d, prio, key, budget - len(run.trace))
        if group is None:
            break
        run.commit(group)
    return check(run.d), run.trace


# -- measurement policy -----------------------------------------------------


def _effect_steps(d: Diagram) -> List[Match]:
    """Steps that fold a degree-one spider into the rest of the diagram."""
    out: List[Match] = []
    for v in d.vertices():
        if not d.is_spider(v) or d.degree(v) != 1 or d.loops(v):
            continue
        (u,) = d.incident(v)
        if d.type(u) == H:
            out.append(Match(RuleId.COLOR_CHANGE, (v,)))
        elif d.type(u) == d.type(v):
            out.append(Match(RuleId.SPIDER_FUSE, (u, v)))
        elif d.is_spider(u) and _is_state_copy(d, v, u):
            out.append(Match(RuleId.STATE_COPY, (v, u)))
    for rule in (RuleId.HH_CANCEL, RuleId.SELF_LOOP_REMOVE):
        out.extend(_raw_matches(d, rule))
    return out


def _count_pi(d: Diagram) -> int:
    return sum(1 for v in d.vertices() if d.is_spider(v) and not d.phase(v).is_zero())


def _pi_walk(d: Diagram, p: int, s: int, key) -> Optional[List[Step]]:
    """Carry the pi phase of ``p`` through degree-two spiders until it cancels.

    Each stride copies the phase through ``s`` and fuses the copy into the
    next spider of the same colour as ``p``.  Returns the steps when the
    number of spiders with nonzero phase drops, else ``None``.
    """
    start = _count_pi(d)
    steps: List[Step] = []
    seen = {p}
    for _ in range(len(d) + 1):
        if d.degree(s) != 2 or not _is_pi_copy(d, p, s):
            return None
        (r,) = [x for x in d.incident(s) if x != p]
        if d.type(r) != d.type(p) or r in seen:
            return None
        m = Match(RuleId.PI_COPY, (p, s))
        d = apply(d, m, check=False, key=key)
        steps.append((m, d))
        (q,) = [x for x in d.incident(s) if x != p]
        f = Match(RuleId.SPIDER_FUSE, (r, q))
        d = apply(d, f, check=False, key=key)
        steps.append((f, d))
        if _count_pi(d) < start:
            return steps
        if not d.phase(r).is_pi():
            return None
        seen.add(r)
        nxt = [x for x in d.incident(r) if x != s and d.is_spider(x) and d.type(x) != d.type(r)]
        if len(nxt) != 1 or d.degree(r) != 2:
            return None
        p, s = r, nxt[0]
    return None


def _normalize_measured(d: Diagram, budget: int) -> Tuple[Diagram, Trace]:
    from .diagram import check

    run = _Run(d, budget)
    key = Ranking(d)
    while True:
        ms = _effect_steps(run.d)
        if ms:
            m = _sorted(ms, key)[0]
            run.commit([(m, apply(run.d, m, check=False, key=key))])
            continue
        walked = None
        heads = _sorted(_raw_matches(run.d, RuleId.PI_COPY), key)
        for m in heads:
            p, s = m.anchors
            if run.d.degree(s) == 2:
                walked = _pi_walk(run.d, p, s, key)
                if walked:
                    break
        if not walked:
            break
        run.commit(walked)
    return check(run.d), run.trace


# -- replay -----------------------------------------------------------------


def replay(d: Diagram, t: Trace) -> Diagram:
    """Re-apply a recorded trace, checking hashes along the way."""
    key = Ranking(d) if t.steps else None
    for i, step in enumerate(t.steps):
        if canonical_hash(d) != step.before_hash:
            raise ReplayError(i, "diagram hash does not match the recorded before-hash")
        try:
            d = apply(d, Match(step.rule, step.match.anchors), key=key)
        except MatchError as exc:
            raise ReplayError(i, str(exc)) from exc
        if canonical_hash(d) != step.after_hash:
            raise ReplayError(i, "result hash does not match the recorded after-hash")
    return d


def is_normal(d: Diagram) -> bool:
    return len(normalize(d)[1]) == 0
