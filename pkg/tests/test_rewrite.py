import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from diagram_gen import random_diagram
from topozx import catalog
from topozx.canon import canonical_hash, isomorphic
from topozx.diagram import X, Z, DiagramBuilder
from topozx.errors import BudgetError, InputError, MatchError, ReplayError
from topozx.rewrite import RuleId, Trace, apply, find_matches, is_normal, match_at, normalize, replay
from topozx.semantics import equiv_up_to_scalar, evaluate

seeds = st.integers(min_value=0, max_value=10**6)


def _sound(a, b):
    return equiv_up_to_scalar(evaluate(a), evaluate(b)).equivalent


@pytest.mark.parametrize(
    "before, after, rule",
    [
        (lambda: catalog.spider_pair(Z, 1, 1), lambda: catalog.single_spider(Z, 0), RuleId.SPIDER_FUSE),
        (lambda: catalog.double_hadamard(), lambda: catalog.wire(), RuleId.HH_CANCEL),
        (lambda: catalog.copy_state(2), lambda: catalog.copied_states(2), RuleId.STATE_COPY),
        (lambda: catalog.pi_through_spider(2), lambda: catalog.pi_copied(2), RuleId.PI_COPY),
    ],
)
def test_rule_instances(before, after, rule):
    d = before()
    ms = find_matches(d, rule)
    assert ms
    out = apply(d, ms[0])
    assert _sound(d, out)
    assert isomorphic(normalize(out)[0], normalize(after())[0])[0]


def test_identity_remove():
    d = catalog.single_spider(X, 0)
    (m,) = find_matches(d, RuleId.IDENTITY_REMOVE)
    assert isomorphic(apply(d, m), catalog.wire())[0]


def test_self_loop_remove():
    b = DiagramBuilder()
    i, o, z = b.add_input(), b.add_output(), b.z(1)
    b.add_path(i, z, o)
    b.add_edge(z, z)
    d = b.freeze()
    (m,) = find_matches(d, RuleId.SELF_LOOP_REMOVE)
    out = apply(d, m)
    assert out.loops(m.anchors[0]) == 0
    assert _sound(d, out)


def test_colour_change_is_sound():
    d = catalog.cnot()
    for m in find_matches(d, RuleId.COLOR_CHANGE):
        assert _sound(d, apply(d, m))


def test_match_at_rejects_non_matches():
    d = catalog.cnot()
    with pytest.raises(MatchError):
        match_at(d, RuleId.HH_CANCEL, [d.spiders()[0]])


def test_rule_names_parse():
    assert RuleId.parse("colour_change") is RuleId.COLOR_CHANGE
    with pytest.raises(InputError):
        RuleId.parse("bialgebra")


def test_trace_json_and_replay():
    d = catalog.cnot_conjugated_by_hadamards()
    nf, trace = normalize(d)
    assert len(trace) > 0 and trace.is_contiguous()
    again = Trace.from_json(json.loads(trace.dumps()))
    assert canonical_hash(replay(d, again)) == canonical_hash(nf)


def test_replay_detects_wrong_start():
    d = catalog.cnot_conjugated_by_hadamards()
    _, trace = normalize(d)
    with pytest.raises(ReplayError):
        replay(catalog.cnot(), trace)


def test_budget_error_keeps_partial_trace():
    d = catalog.braided_cnot()
    with pytest.raises(BudgetError) as info:
        normalize(d, budget=2)
    assert info.value.trace is not None
    assert len(info.value.trace) == 2


def test_normal_forms_are_fixed_points():
    nf, _ = normalize(catalog.braided_cnot())
    assert is_normal(nf)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_normalize_sound_and_non_increasing(seed):
    d = random_diagram(random.Random(seed))
    nf, trace = normalize(d)
    assert _sound(d, nf)
    assert nf.measure() <= d.measure()
    assert is_normal(nf)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_every_single_step_is_sound(seed):
    d = random_diagram(random.Random(seed), max_vertices=8)
    t = evaluate(d)
    for rule in RuleId:
        for m in find_matches(d, rule):
            assert equiv_up_to_scalar(t, evaluate(apply(d, m))).equivalent, m


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_normalize_is_isomorphism_invariant(seed):
    rng = random.Random(seed)
    d = random_diagram(rng)
    ids = d.vertices()
    e = d.relabel(dict(zip(ids, rng.sample(range(500, 500 + 2 * len(ids)), len(ids)))))
    assert canonical_hash(normalize(d)[0]) == canonical_hash(normalize(e)[0])
