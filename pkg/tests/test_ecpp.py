import random

import pytest

from pascal_ecpp.certificate import emit, verify
from pascal_ecpp.cm import DiscriminantTable, load_table, make_record
from pascal_ecpp.ecpp import (
    Candidate,
    CompositeDetected,
    Exhausted,
    GraphNode,
    ProofConfig,
    _examine,
    atkin_step,
    build_curves_and_prove,
    priority,
    prove,
)
from pascal_ecpp.ecurve import CurveSpec, scalar_mul
from pascal_ecpp.errors import CompositeModulus, Stuck
from pascal_ecpp.numtheory import (
    FactoredInteger,
    cornacchia,
    exceeds_size_bound,
    is_probable_prime,
    within_hasse,
)
from pascal_ecpp.triangle import BASE_112, center

S1, S2 = 165490139, 173304931274467
A1, B1 = 148629518369919, 154064198784106


def test_priority_order():
    a = GraphNode(1, 10**39 + 1, 1, 5000)
    b = GraphNode(0, 10**59 + 1, 1, 5000)
    assert priority(a) < priority(b)
    c = GraphNode(2, 10**39 + 3, 1, 10**3)
    d = GraphNode(3, 10**39 + 7, 1, 10**5)
    assert priority(c) < priority(d)
    e = GraphNode(4, 10**39 + 9, 1, 10**3)
    assert priority(c) < priority(e)
    c.d_limit *= 4
    assert priority(e) < priority(c)


def test_config_validation():
    with pytest.raises(ValueError):
        ProofConfig(small_prime_threshold=1000)
    with pytest.raises(ValueError):
        ProofConfig(smooth_bound=1)
    with pytest.raises(ValueError):
        ProofConfig(strategy="magic")
    assert ProofConfig().bound_for(10**100) == 10**4
    assert ProofConfig().bound_for(10**999) == 50000
    assert ProofConfig(smooth_bound=77).bound_for(10**999) == 77


def test_small_orders_fail_the_size_bound():
    assert cornacchia(-7, 29) == (2, 4)
    assert 28 == 4 * 7 and not exceeds_size_bound(7, 29)
    assert _examine(29, make_record(-7), 2, 10, 0) == []


def test_reference_first_edge():
    # the smallest step of the reference downrun uses D = -8
    u, v = cornacchia(-8, S2)
    assert 4 * S2 - u * u == 8 * v * v
    edges = _examine(S2, make_record(-8), u, 10**6, 0)
    match = [e for e in edges if e.child == S1]
    assert len(match) == 1
    assert match[0].f.value == 1047222 and match[0].m == S1 * 1047222
    assert within_hasse(match[0].m, S2)
    # its curve has j = 8000 (the D = -8 invariant) modulo s_2
    num = 1728 * 4 * pow(A1, 3, S2)
    den = 4 * pow(A1, 3, S2) + 27 * B1 * B1
    assert num * pow(den, -1, S2) % S2 == 8000


def test_atkin_step_edges_satisfy_invariants():
    s = 10**30 + 57
    assert is_probable_prime(s)
    node = GraphNode(0, s, 0, 5000)
    cfg = ProofConfig()
    edges = atkin_step(node, cfg, load_table())
    assert edges
    for e in edges:
        assert e.m == e.f.value * e.child
        assert exceeds_size_bound(e.child, s) and within_hasse(e.m, s)
        assert is_probable_prime(e.child)


def test_atkin_step_rejects_small_input():
    with pytest.raises(ValueError):
        atkin_step(GraphNode(0, 10**6 + 3, 0, 5000), ProofConfig(), load_table())


def test_atkin_step_exhausted_with_tiny_table():
    table = DiscriminantTable([make_record(-7), make_record(-8)])
    node = GraphNode(0, 10**30 + 57, 0, 5)
    with pytest.raises(Exhausted):
        atkin_step(node, ProofConfig(), table)


def _edge(D, u, m, f, child):
    return Candidate(make_record(D), u, m, FactoredInteger(f, [(2, f.bit_length() - 1)] if f > 1 else []), child)


def test_build_curves_small_field():
    edge = _edge(-7, 4, 16, 2, 8)
    for seed in range(10):
        step = build_curves_and_prove(edge, 11, random.Random(seed))
        assert step is not None
        E = CurveSpec(11, step.a, step.b)
        P = (step.x, step.y)
        assert E.contains(P) and scalar_mul(16, P, E) is None and scalar_mul(2, P, E) is not None


def test_build_curves_wrong_order_is_abandoned():
    edge = _edge(-7, 4, 17, 1, 17)
    for seed in range(10):
        assert build_curves_and_prove(edge, 11, random.Random(seed)) is None


def test_build_curves_composite_modulus():
    edge = _edge(-11, 4, 16, 1, 16)
    with pytest.raises(CompositeModulus) as info:
        build_curves_and_prove(edge, 15, random.Random(0))
    assert info.value.witness in (3, 5)


def test_prove_row_24_center():
    n = 9232029156001
    cert = prove(n, ProofConfig(seed=1))
    assert cert.n == n and verify(cert)
    sizes = [st.s for st in cert.steps] + [n]
    assert sizes == sorted(set(sizes))
    assert cert.steps[0].s <= 10**9


def test_prove_is_deterministic():
    n = center(BASE_112, 156)
    one = emit(prove(n, ProofConfig(seed=5)))
    two = emit(prove(n, ProofConfig(seed=5)))
    assert one == two


def test_prove_parallel_matches_serial():
    n = 10**40 + 121
    assert is_probable_prime(n)
    serial = emit(prove(n, ProofConfig(seed=3)))
    parallel = emit(prove(n, ProofConfig(seed=3, jobs=2)))
    assert serial == parallel


def test_prove_fixed_strategy_baseline():
    n = 10**30 + 57
    cert = prove(n, ProofConfig(strategy="fixed"))
    assert verify(cert)


def test_prove_rejects_composites():
    with pytest.raises(CompositeDetected):
        prove(561)
    with pytest.raises(CompositeDetected):
        prove(1)
    with pytest.raises(CompositeDetected):
        prove((10**20 + 39) * (10**20 + 129))
    with pytest.raises(CompositeDetected) as info:
        prove(1000001, ProofConfig(small_prime_threshold=2**20))
    assert info.value.witness == 101


def test_prove_small_prime_uses_trial_division():
    cert = prove(7)
    assert cert.steps == [] and cert.n == 7


def test_prove_stuck_with_empty_table():
    with pytest.raises(Stuck):
        prove(10**30 + 57, ProofConfig(d_max=20), table=DiscriminantTable([make_record(-7)]))


def test_prove_just_above_threshold():
    cfg = ProofConfig(small_prime_threshold=2**20)
    for n in (2**21 + 17, 2**21 + 59):
        cert = prove(n, cfg)
        assert cert.steps and verify(cert)
        assert cert.steps[0].s <= 2**20
