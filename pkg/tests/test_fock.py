import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import sparse

from cndfock.fock import (FockVector, adjointness_obstruction, annihilate, apply, chaos_multiply,
                          commutator_defect, commutator_profile, commutator_suite, create,
                          create_vec, exp_tail_bound, exponential_inner_tail, exponential_vector,
                          fock_space, multiplication_operator, second_quantization,
                          second_quantization_norm)

seeds = st.integers(0, 2 ** 32 - 1)


def rand_h(rng, d, scale=1.0, complex_=True):
    h = rng.standard_normal(d) + (1j * rng.standard_normal(d) if complex_ else 0)
    return scale * h / np.linalg.norm(h) * rng.uniform(0, 1)


def test_space_size_and_orthonormal_basis():
    sp = fock_space(6, 10)
    assert len(sp) == math.comb(16, 10) == 8008
    assert int(sp.degrees.max()) == 10
    small = fock_space(3, 4)
    basis = np.array([small.basis_vector(a).amps for a in small.alphas])
    assert np.max(np.abs(basis.conj() @ basis.T - np.eye(len(small)))) <= 1e-12


def test_ladder_examples():
    sp = fock_space(2, 4)
    v = apply(create(sp, 1), sp.vacuum())
    assert v.amplitude((1, 0)) == 1.0
    v = apply(create(sp, 1), sp.basis_vector((1, 0)))
    assert v.amplitude((2, 0)) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert apply(annihilate(sp, 2), sp.vacuum()).norm() == 0.0
    edge = apply(create(sp, 1), sp.basis_vector((4, 0)))
    assert edge.norm() == 0.0
    assert edge.dropped_norm == pytest.approx(math.sqrt(5))


def test_number_grading():
    sp = fock_space(3, 6)
    for alpha in sp.alphas:
        if alpha.sum() == 6:
            continue
        e = sp.basis_vector(alpha)
        for j in (1, 2, 3):
            out = apply(annihilate(sp, j), apply(create(sp, j), e))
            ref = (alpha[j - 1] + 1) * e.amps
            # a a* = N + 1 and a* a = N, up to sqrt(k) * sqrt(k) rounding
            np.testing.assert_allclose(out.amps, ref, atol=1e-14)
            out2 = apply(create(sp, j), apply(annihilate(sp, j), e))
            np.testing.assert_allclose(out2.amps, alpha[j - 1] * e.amps, atol=1e-14)


def test_commutator_examples():
    e1, e2 = np.eye(2)[0], np.eye(2)[1]
    prof = commutator_profile(e1, e1, 8)
    assert prof[:8].max() <= 1e-12
    assert prof[8] > 0.5
    assert commutator_defect(e1, e2, 8) <= 1e-12
    assert commutator_defect(e1, e2, 8, kind="annihilators") <= 1e-12
    with pytest.raises(ValueError):
        commutator_profile(e1, e1, 3, kind="bogus")


@given(seeds, st.sampled_from([1.0, 0.5, 3.0]))
def test_ccr_random(seed, lam):
    rng = np.random.default_rng(seed)
    h, g = rand_h(rng, 3), rand_h(rng, 3)
    assert commutator_defect(h, g, 6, lam) <= 1e-12
    assert commutator_defect(h, g, 6, lam, kind="annihilators") <= 1e-12


def test_commutator_suite_default_truncation():
    out = commutator_suite(6, 10, lams=(1.0, 0.5, 3.0), pairs=1)
    for row in out.values():
        assert row["mixed"] <= 1e-12 and row["annihilators"] <= 1e-12


@pytest.mark.parametrize("lam", [1.0, 0.5, 3.0, 1.7])
def test_adjointness_obstruction(lam):
    h = np.array([0.6, -0.3j, 0.2])
    rep = adjointness_obstruction(h, 6, lam)
    assert rep.error <= 1e-10 * max(1.0, rep.predicted)
    assert (rep.obstruction_norm == 0.0) == (lam == 1.0)


def test_exponential_vector_examples():
    ev = exponential_vector(np.zeros(3), 5)
    assert ev.vector.amplitude((0, 0, 0)) == 1.0
    assert ev.vector.norm() == 1.0
    h = np.array([0.6, 0.8])
    ev = exponential_vector(h, 20)
    assert ev.vector.inner(ev.vector).real == pytest.approx(math.e, abs=1e-12)
    assert ev.tail_bound == pytest.approx(1 / math.factorial(21), rel=0.1)
    a = exponential_vector(np.array([1.0, 0.0]), 20).vector
    b = exponential_vector(np.array([0.0, 0.9]), 20).vector
    assert a.inner(b) == pytest.approx(1.0, abs=1e-15)


def test_exponential_vector_warns_for_large_h():
    with pytest.warns(RuntimeWarning):
        exponential_vector(np.array([2.0, 2.0]), 5)


@given(seeds)
def test_exponential_vector_inner_products(seed):
    rng = np.random.default_rng(seed)
    h1, h2 = rand_h(rng, 3), rand_h(rng, 3)
    v1, v2 = exponential_vector(h1, 20).vector, exponential_vector(h2, 20).vector
    exact = np.exp(np.vdot(h1, h2))
    assert abs(v1.inner(v2) - exact) <= exponential_inner_tail(h1, h2, 20) + 1e-12


def test_exponential_vector_amplitudes_against_series():
    # single mode oracle: <E_n, eps(h)> = h^n / sqrt(n!)
    v = exponential_vector(np.array([0.7 - 0.2j]), 12).vector
    ref = [(0.7 - 0.2j) ** n / math.sqrt(math.factorial(n)) for n in range(13)]
    np.testing.assert_allclose([v.amplitude((n,)) for n in range(13)], ref, rtol=1e-14)


def test_tail_bound_against_series():
    x = 0.8
    ref = math.exp(x) - sum(x ** n / math.factorial(n) for n in range(11))
    assert exp_tail_bound(x, 10) == pytest.approx(ref, rel=1e-6)
    assert exp_tail_bound(0.0, 3) == 0.0


def test_second_quantization():
    h = np.array([0.5, -0.4j, 0.3])
    ev = exponential_vector(h, 20).vector
    assert np.array_equal(second_quantization(1.0, ev).amps, ev.amps)
    got = second_quantization(0.5, ev)
    ref = exponential_vector(0.5 * h, 20).vector
    assert np.max(np.abs(got.amps - ref.amps)) <= 1e-12
    assert second_quantization_norm(ev.space, 0.5) <= 1.0
    with pytest.raises(ValueError):
        second_quantization(1.5, ev)
    with pytest.raises(ValueError):
        second_quantization(0.0, ev)


def test_chaos_multiply_examples():
    sp = fock_space(1, 6)
    v = chaos_multiply(np.array([1.0]), sp.vacuum())
    np.testing.assert_allclose(v.amps, sp.basis_vector((1,)).amps, atol=1e-15)
    v = chaos_multiply(np.array([1.0]), sp.basis_vector((1,)))
    ref = math.sqrt(2) * sp.basis_vector((2,)).amps + sp.vacuum().amps
    np.testing.assert_allclose(v.amps, ref, atol=1e-15)


def test_chaos_multiply_matches_quadrature_operator():
    h = np.array([0.4, -1.1, 0.3])
    mult = multiplication_operator(h, 5)
    sp = fock_space(3, 5)
    rng = np.random.default_rng(0)
    amps = rng.standard_normal(len(sp)) * sp.interior()
    v = FockVector(sp, amps)
    np.testing.assert_allclose(chaos_multiply(h, v).amps, mult @ amps, atol=1e-12)


@given(seeds)
def test_chaos_multiply_self_adjoint(seed):
    rng = np.random.default_rng(seed)
    sp = fock_space(2, 5)
    h = rng.standard_normal(2)
    inner = sp.interior()
    u = FockVector(sp, (rng.standard_normal(len(sp)) + 1j * rng.standard_normal(len(sp))) * inner)
    w = FockVector(sp, (rng.standard_normal(len(sp)) + 1j * rng.standard_normal(len(sp))) * inner)
    assert abs(chaos_multiply(h, u).inner(w) - u.inner(chaos_multiply(h, w))) <= 1e-12


def test_vector_json_round_trip():
    ev = exponential_vector(np.array([0.3, 0.2j]), 4).vector
    back = FockVector.from_json(ev.to_json())
    assert back.space == ev.space
    np.testing.assert_array_equal(back.amps, ev.amps)
    d = ev.to_dict()
    assert d["trunc"] == {"d": 2, "K": 4}


def test_incompatible_spaces_rejected():
    with pytest.raises(ValueError):
        fock_space(2, 3).vacuum().inner(fock_space(2, 4).vacuum())
    with pytest.raises(ValueError):
        apply(create_vec(fock_space(2, 3), [1, 0], lam=0.0), fock_space(2, 3).vacuum())


def test_operators_are_sparse():
    sp = fock_space(6, 10)
    assert sparse.issparse(sp.creation(1))
    assert sp.creation(1).nnz < 8008
