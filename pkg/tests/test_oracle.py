from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ksep import (
    DensityMatrix,
    GuardError,
    NumericalError,
    ParameterError,
    ProductProbe,
    enumerate_kpartitions,
    evaluate,
    ghz,
    random_density,
)
from ksep.oracle import (
    TWO_COPY_GUARD,
    CampaignSummary,
    TwoCopyOperator,
    build_swap_operator,
    equivalence_campaign,
    oracle_evaluate,
    oracle_term,
    total_swap_operator,
)
from ksep.search import GHZ_PAIR, canonical_probe


def _random_probe(dims, rng):
    def factors():
        out = []
        for d in dims:
            raw = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            out.append(raw / np.linalg.norm(raw))
        return tuple(out)

    return ProductProbe(factors(), factors())


# --- permutation operators ------------------------------------------------------


def test_single_qubit_swap_index_map():
    # labels a*2 + b for one qubit per copy; swapping the only site
    # exchanges a and b: 0->0, 1->2, 2->1, 3->3
    op = build_swap_operator((2,), {0})
    assert list(op.index_map) == [0, 2, 1, 3]


def test_empty_swap_is_identity():
    op = build_swap_operator((2, 3), set())
    assert np.array_equal(op.index_map, np.arange(36))


def test_full_swap_equals_total():
    op = build_swap_operator((2, 3), {0, 1})
    total = total_swap_operator((2, 3))
    assert np.array_equal(op.index_map, total.index_map)


def test_swap_on_basis_labels():
    # dims (2, 2), swap site 1: |a0 a1> x |b0 b1> -> |a0 b1> x |b0 a1>
    op = build_swap_operator((2, 2), {1})
    for a in range(4):
        for b in range(4):
            a0, a1 = divmod(a, 2)
            b0, b1 = divmod(b, 2)
            image = (a0 * 2 + b1) * 4 + (b0 * 2 + a1)
            vec = np.zeros(16, dtype=np.complex128)
            vec[a * 4 + b] = 1.0
            out = op.apply(vec)
            assert out[image] == 1.0
            assert np.count_nonzero(out) == 1


@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
@settings(max_examples=30, deadline=None)
def test_swap_is_self_inverse(seed, n):
    # dims capped so the doubled space stays within the operator guard
    rng = np.random.default_rng(seed)
    dims = tuple(int(d) for d in rng.integers(2, 5, size=n))
    count = int(rng.integers(0, n + 1))
    sites = set(int(s) for s in rng.choice(n, size=count, replace=False))
    op = build_swap_operator(dims, sites)
    assert np.array_equal(op.index_map[op.index_map], np.arange(len(op.index_map)))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_disjoint_swaps_compose(seed):
    rng = np.random.default_rng(seed)
    dims = (2, 3, 2)
    op01 = build_swap_operator(dims, {0})
    op2 = build_swap_operator(dims, {2})
    combined = build_swap_operator(dims, {0, 2})
    # apply(vec)[m] = vec[map[m]], so composition chains the index maps
    assert np.array_equal(op01.index_map[op2.index_map], combined.index_map)
    vec = rng.standard_normal(144) + 1j * rng.standard_normal(144)
    assert np.array_equal(op2.apply(op01.apply(vec)), combined.apply(vec))


def test_as_matrix_matches_apply():
    rng = np.random.default_rng(7)
    op = build_swap_operator((2, 2), {0})
    mat = op.as_matrix()
    assert np.array_equal(mat @ mat, np.eye(16))  # self-inverse permutation
    assert np.array_equal(mat.sum(axis=0), np.ones(16))
    vec = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    assert np.array_equal(mat @ vec, op.apply(vec))


def test_operator_validation():
    with pytest.raises(ParameterError):
        TwoCopyOperator(dim=2, index_map=np.arange(3))
    with pytest.raises(ParameterError):
        build_swap_operator((2, 2), {5})


def test_two_copy_guard():
    # 7 qubits put the doubled space at 128^2 > 4096
    with pytest.raises(GuardError):
        build_swap_operator((2,) * 7, {0})
    with pytest.raises(GuardError):
        oracle_evaluate(ghz(7).to_density(), canonical_probe(GHZ_PAIR, (2,) * 7), 2)
    assert 64 * 64 <= TWO_COPY_GUARD  # 6 qubits still fit
    build_swap_operator((2,) * 6, {0})


# --- oracle terms ----------------------------------------------------------------


def test_oracle_term_ghz_full_swap():
    rho = ghz(3).to_density()
    probe = canonical_probe(GHZ_PAIR, (2, 2, 2))
    # swapping every site turns |000>x|111> into |111>x|000>, whose
    # two-copy weight is rho_77 * rho_00 = 1/4
    assert oracle_term(rho, probe, {0, 1, 2}) == pytest.approx(0.25, abs=1e-14)
    # a partial swap lands outside the GHZ support
    assert oracle_term(rho, probe, {0}) == pytest.approx(0.0, abs=1e-15)


def test_oracle_term_factorizes_on_diagonal():
    rng = np.random.default_rng(8)
    rho = random_density((2, 2), rng)
    probe = _random_probe((2, 2), rng)
    value = oracle_term(rho, probe, {0})
    x1 = np.kron(probe.v[0], probe.u[1])
    x2 = np.kron(probe.u[0], probe.v[1])
    expected = complex(np.vdot(x1, rho.mat @ x1)).real * complex(
        np.vdot(x2, rho.mat @ x2)
    ).real
    assert value == pytest.approx(expected, rel=1e-12, abs=1e-15)


def test_oracle_term_flags_complex_expectation():
    # a non-Hermitian matrix sneaks past construction (validation is lazy)
    # and produces a complex two-copy expectation
    mat = np.array([[0.5, 0.5], [-0.5, 0.5]], dtype=complex)
    rho = DensityMatrix((2,), mat)
    x = np.array([1.0, 1.0j], dtype=np.complex128) / np.sqrt(2)
    probe = ProductProbe((x,), (x,))
    with pytest.raises(NumericalError):
        oracle_term(rho, probe, {0})


# --- oracle evaluation -------------------------------------------------------------


def test_oracle_evaluate_ghz3():
    rho = ghz(3).to_density()
    probe = canonical_probe(GHZ_PAIR, (2, 2, 2))
    report = oracle_evaluate(rho, probe, 2)
    assert report.lhs == pytest.approx(0.5, abs=1e-12)
    assert report.first_term == pytest.approx(0.5, abs=1e-12)
    assert [t for _, t in report.partition_terms] == [0.0, 0.0, 0.0]
    assert report.verdict == "not_k_separable"


def test_oracle_evaluate_k_bounds():
    rho = ghz(3).to_density()
    probe = canonical_probe(GHZ_PAIR, (2, 2, 2))
    with pytest.raises(ParameterError):
        oracle_evaluate(rho, probe, 0)
    with pytest.raises(ParameterError):
        oracle_evaluate(rho, probe, 4)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=10, deadline=None)
def test_oracle_agrees_with_fast_path(seed):
    rng = np.random.default_rng(seed)
    dims = tuple(int(d) for d in rng.integers(2, 4, size=3))
    rho = random_density(dims, rng)
    probe = _random_probe(dims, rng)
    for k in (1, 2, 3):
        fast = evaluate(rho, probe, k)
        slow = oracle_evaluate(rho, probe, k)
        assert slow.lhs == pytest.approx(fast.lhs, abs=1e-10)
        for (pf, tf), (ps, ts) in zip(fast.partition_terms, slow.partition_terms):
            assert pf == ps
            assert ts == pytest.approx(tf, abs=1e-10)


def test_oracle_partition_order_matches_enumeration():
    rho = ghz(3).to_density()
    probe = canonical_probe(GHZ_PAIR, (2, 2, 2))
    report = oracle_evaluate(rho, probe, 2)
    assert [p for p, _ in report.partition_terms] == list(enumerate_kpartitions(3, 2))


# --- campaign ---------------------------------------------------------------------


def test_campaign_small_run_passes():
    summary = equivalence_campaign(n=2, dmax=3, trials=20, seed=11)
    assert summary.passed
    assert summary.trials == 20
    # every trial compares all partitions for k = 1 and k = 2: 1 + S(2,2)
    assert summary.comparisons == 20 * 2
    assert summary.max_term_deviation < 1e-12
    assert summary.max_lhs_deviation < 1e-12


def test_campaign_counts_partition_comparisons():
    summary = equivalence_campaign(n=3, dmax=2, trials=4, seed=12)
    # per trial: S(3,1) + S(3,2) + S(3,3) = 1 + 3 + 1
    assert summary.comparisons == 4 * 5
    assert summary.passed


def test_campaign_validation_and_guard():
    with pytest.raises(ParameterError):
        equivalence_campaign(n=0, dmax=2, trials=1, seed=0)
    with pytest.raises(ParameterError):
        equivalence_campaign(n=2, dmax=1, trials=1, seed=0)
    with pytest.raises(ParameterError):
        equivalence_campaign(n=2, dmax=2, trials=0, seed=0)
    with pytest.raises(GuardError):
        equivalence_campaign(n=7, dmax=2, trials=1, seed=0)


def test_campaign_summary_reporting():
    summary = CampaignSummary(
        trials=5,
        comparisons=10,
        max_term_deviation=2e-9,
        max_lhs_deviation=0.0,
        threshold=1e-10,
    )
    assert not summary.passed
    doc = summary.to_json_dict()
    assert doc["passed"] is False
    assert doc["comparisons"] == 10
    ok = CampaignSummary(5, 10, 1e-12, 1e-12, 1e-10)
    assert ok.passed and ok.to_json_dict()["passed"] is True
