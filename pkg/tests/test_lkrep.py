import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bmwkz.coxeter import DihedralElement, DihedralModel
from bmwkz.lkrep import (
    FlatnessError,
    ParameterSet,
    build_connection,
    build_iota,
    build_projector,
    commutant_dimension,
    permutation_matrix,
    sample_generic_parameters,
    verify_brauer_rep,
)


def test_iota_permutations():
    s0 = build_iota(DihedralModel(3)).assign["s0"]
    assert np.array_equal(s0, np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]]))
    m4 = build_iota(DihedralModel(4)).assign
    assert np.array_equal(m4["s0"] @ np.eye(4)[:, 1], np.eye(4)[:, 3])
    assert np.array_equal(m4["s0"] @ np.eye(4)[:, 2], np.eye(4)[:, 2])
    assert np.array_equal(m4["r0"], np.eye(4))


def test_projector_rows():
    p = ParameterSet(((0.7, 1.9),), 0.05)
    P = build_projector(DihedralModel(3), p, 0)
    assert np.allclose(P[0], [1.9, 0.7, 0.7])
    assert np.allclose(P[1:], 0)
    p4 = ParameterSet(((0.7, 1.9), (1.1, 0.4)), 0.05)
    P4 = build_projector(DihedralModel(4), p4, 0)
    assert P4[0, 1] == 0 and P4[0, 3] == 0
    assert np.isclose(P4[0, 2], 2 * 1.1)  # t=1 and t=3 both lie in class 1


@pytest.mark.parametrize("m", [3, 4, 5, 6, 7])
def test_brauer_relations_of_lk(m):
    res = verify_brauer_rep(DihedralModel(m), sample_generic_parameters(1, m))
    assert res and max(res.values()) < 1e-12


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_flat_and_invariant(m):
    conn = build_connection(DihedralModel(m), sample_generic_parameters(2, m))
    assert conn.flatness_residual < 1e-12
    assert conn.invariance_residual < 1e-12


def test_conjugation_moves_coefficients():
    model = DihedralModel(4)
    X = build_connection(model, sample_generic_parameters(0, 4)).coefficients
    P = permutation_matrix(model, DihedralElement("s", 1))
    assert np.allclose(P @ X[0] @ P.T, X[2], atol=1e-15)


def test_zero_kappa_connection_vanishes():
    conn = build_connection(DihedralModel(5), sample_generic_parameters(0, 5).with_kappa(0))
    assert not np.any(conn.coefficients)


def test_non_flat_coefficients_rejected():
    from bmwkz import lkrep

    model = DihedralModel(3)
    params = sample_generic_parameters(0, 3)
    X = lkrep.connection_coefficients(model, params)
    X[0, 0, 1] += 0.3
    assert lkrep.flatness_residual(X) > 1e-3
    with pytest.raises(FlatnessError):
        orig = lkrep.connection_coefficients
        lkrep.connection_coefficients = lambda *_: X
        try:
            build_connection(model, params)
        finally:
            lkrep.connection_coefficients = orig


def test_commutant_dimensions():
    assert commutant_dimension([np.eye(3)]) == 9
    for m, want in [(3, 1), (5, 1), (4, 2), (6, 2)]:
        from bmwkz import monodromy_generators

        mono = monodromy_generators(DihedralModel(m), sample_generic_parameters(0, m))
        assert commutant_dimension(mono.T) == want


def test_sampling_is_deterministic_and_generic():
    a, b = sample_generic_parameters(7, 5), sample_generic_parameters(7, 5)
    assert a == b
    assert a.is_generic(1e-3)
    assert sample_generic_parameters(7, 6).n_classes == 2


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 2.0), st.floats(0.5, 2.0), st.floats(0.01, 0.2))
def test_tau_identity(k, alpha, kappa):
    p = ParameterSet(((k, alpha),), kappa)
    q, l = p.q(), p.l()
    if abs(q - 1 / q) < 1e-8:
        return
    assert abs(p.tau() - (1 + (1 / l - l) / (1 / q - q))) < 1e-9 * max(1.0, abs(p.tau()))


def test_parameter_json_round_trip():
    p = sample_generic_parameters(3, 4)
    assert ParameterSet.from_json(__import__("json").dumps(p.to_dict())) == p
    with pytest.raises(ValueError):
        p.for_model(DihedralModel(5))
