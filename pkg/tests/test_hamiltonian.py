import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holonomic.errors import ContractViolation, SingularityError
from holonomic.frame import one_qubit_frame
from holonomic.hamiltonian import (ErrorModel, LambdaModel, apply_error, assemble,
                                   model_custom_k22, model_k22_negbeta, model_k22_zero,
                                   pulse_area, pulse_area_closed_forms, pulse_schedule,
                                   solve_parameters)
from holonomic.holonomy import dynamical_matrix
from holonomic.linalg import dag, max_norm
from holonomic.path import make_cap_loop

FAMILIES = [model_k22_zero, model_k22_negbeta]


def test_loop_values_at_equator():
    # alpha = pi/2, dbeta = 4 pi: both families give Delta = -4 pi, Omega = 2 pi
    p = make_cap_loop(np.pi / 2)
    for fam in FAMILIES:
        m = fam(0.3, 0.0, p)
        assert m.delta(np.array([0.5]))[0] == pytest.approx(-4 * np.pi)
        assert m.omega(np.array([0.5]))[0] == pytest.approx(2 * np.pi)


def test_ramp_drive_is_imaginary_at_beta_zero():
    # dbeta = 0 on the ramps: W = i dalpha / 2 and Delta = 0
    p = make_cap_loop(1.0)
    for fam in FAMILIES:
        m = fam(0.3, 0.0, p)
        delta, w, _ = m.coefficients(np.array([0.1]))
        da = p.sample(np.array([0.1]))[2][0]
        assert delta[0] == 0.0
        assert w[0] == pytest.approx(0.5j * da)
        assert m.kappa(np.array([0.1]))[0] == pytest.approx(np.pi / 2)


@pytest.mark.parametrize("fam", FAMILIES)
@pytest.mark.parametrize("alpha0", [0.5, 1.4, 2.6])
def test_frame_reconstruction(fam, alpha0):
    # H = i dV V^dag + V diag(0, K22 - A22, -dgamma) V^dag with the closed forms.
    p = make_cap_loop(alpha0)
    m = fam(1.0, 2.0, p)
    f = one_qubit_frame(1.0, 2.0, p)
    t = np.linspace(0, 1, 500)
    a, _, _, db = p.sample(t)
    k22 = np.zeros_like(t) if fam is model_k22_zero else -db
    a22 = -0.5 * db * (1 - np.cos(a))
    d = np.zeros((t.size, 3, 3), dtype=complex)
    d[:, 1, 1] = k22 - a22
    d[:, 2, 2] = -m.gamma_rate(t)
    v, dv = f.basis_and_derivative(t)
    oracle = 1j * dv @ dag(v) + v @ d @ dag(v)
    assert max_norm(assemble(m, t) - oracle) < 1e-10


@settings(max_examples=25, deadline=None)
@given(theta=st.floats(0, np.pi), phi=st.floats(0, 6.28), alpha0=st.floats(0.2, 3.0),
       t=st.floats(0, 1))
def test_hamiltonian_is_hermitian(theta, phi, alpha0, t):
    for fam in FAMILIES:
        h = assemble(fam(theta, phi, make_cap_loop(alpha0)), t)
        assert max_norm(h - dag(h)) == 0.0


def test_rabi_frequencies_share_envelope():
    m = model_k22_zero(0.8, 1.2, make_cap_loop(1.0))
    t = np.linspace(0, 1, 50)
    w0, w1 = m.rabi_frequencies(t)
    assert np.allclose(np.abs(w0) ** 2 + np.abs(w1) ** 2, m.omega(t) ** 2)


@pytest.mark.parametrize("alpha0", [0.3, 1.0, np.pi / 2, 2.2, 3.0])
def test_pulse_areas(alpha0):
    p = make_cap_loop(alpha0)
    a1, a2 = pulse_area_closed_forms(alpha0)
    assert abs(pulse_area(model_k22_zero(0, 0, p)) - a1) < 1e-8
    assert abs(pulse_area(model_k22_negbeta(0, 0, p)) - a2) < 1e-8


def test_negbeta_singular_near_pole():
    p = make_cap_loop(1e-4)
    with pytest.raises(SingularityError) as err:
        model_k22_negbeta(0.3, 0.0, p).coefficients(np.linspace(0, 1, 11))
    assert 0.25 <= err.value.time <= 0.75
    # zero family is regular there
    assert np.all(np.isfinite(model_k22_zero(0.3, 0.0, p).delta(np.linspace(0, 1, 11))))


def test_negbeta_regular_at_pole_while_beta_frozen():
    m = model_k22_negbeta(0.3, 0.0, make_cap_loop(1.0))
    assert np.all(np.isfinite(m.delta(np.array([0.0, 1.0]))))


@pytest.mark.parametrize("fam,target", [(model_k22_zero, "zero"), (model_k22_negbeta, "neg")])
def test_custom_target_reproduces_family(fam, target):
    p = make_cap_loop(1.2)
    k22 = ((lambda t: np.zeros(np.shape(t))) if target == "zero"
           else (lambda t: -p.sample(np.atleast_1d(t))[3].reshape(np.shape(t))))
    custom = model_custom_k22(0.4, 0.1, p, k22)
    ref = fam(0.4, 0.1, p)
    t = np.linspace(0.01, 0.99, 300)
    assert max_norm(assemble(custom, t) - assemble(ref, t)) < 1e-10


def test_custom_target_singular_at_pole():
    # a nonzero K22 where alpha = 0 needs an infinite envelope
    p = make_cap_loop(1.2)
    k22 = lambda t: np.cos(2 * np.pi * np.asarray(t, dtype=float))
    with pytest.raises(SingularityError):
        model_custom_k22(0.4, 0.1, p, k22)


def test_custom_target_must_cancel():
    p = make_cap_loop(1.2)
    with pytest.raises(ContractViolation, match="cancel"):
        model_custom_k22(0.4, 0.1, p, lambda t: np.full(np.shape(t), 1.0))
    with pytest.raises(ContractViolation, match="finite"):
        model_custom_k22(0.4, 0.1, p, lambda t: np.full(np.shape(t), np.nan))


def test_custom_target_realized():
    # one sine period on the loop segment, zero on the ramps; read back from <nu_2|H|nu_2>
    p = make_cap_loop(1.2)

    def k22(t):
        t = np.asarray(t, dtype=float)
        return np.where((t > 0.25) & (t < 0.75), 3.0 * np.sin(4 * np.pi * (t - 0.25)), 0.0)

    m = model_custom_k22(0.4, 0.1, p, k22)
    f = one_qubit_frame(0.4, 0.1, p)
    t = np.linspace(0.3, 0.7, 50)
    assert np.allclose(dynamical_matrix(f, m, t)[:, 1, 1].real, k22(t), atol=1e-10)


def test_solve_parameters_round_trip():
    # prescribe kappa = beta + pi/3; the solved drive must carry that phase (mod pi)
    p = make_cap_loop(1.0)
    kappa = lambda t: p.sample(np.atleast_1d(t))[1] + np.pi / 3
    t = np.linspace(0.05, 0.2, 40)  # ramp: dalpha != 0
    m = solve_parameters(p, kappa, 0.2, 0.5)
    got = m.kappa(t)
    diff = np.mod(got - kappa(t) + np.pi / 2, np.pi) - np.pi / 2
    assert np.max(np.abs(diff)) < 1e-12
    a, b, da, db = p.sample(t)
    q = da / np.tan(np.pi / 3)
    assert np.allclose(m.delta(t), -q / np.tan(a) - db)


def test_solve_parameters_indeterminate():
    # kappa = beta on the loop where dalpha = 0: 0 * cot(0)
    p = make_cap_loop(1.0)
    m = solve_parameters(p, lambda t: p.sample(np.atleast_1d(t))[1])
    with pytest.raises(SingularityError, match="indeterminate"):
        m.coefficients(np.array([0.5]))


def test_error_scales_linearly():
    m = model_k22_negbeta(0.5, 0.5, make_cap_loop(1.7))
    t = np.linspace(0, 1, 101)
    for eps in (-0.2, 0.05, 0.3):
        assert max_norm(assemble(apply_error(m, eps), t) - (1 + eps) * assemble(m, t)) < 1e-12
    assert apply_error(m, ErrorModel(0.1)).scale == pytest.approx(1.1)
    with pytest.raises(ValueError):
        ErrorModel(1.0)


def test_two_qubit_register_embeds_lambda_block():
    p = make_cap_loop(0.9)
    one = model_k22_zero(0.6, 0.2, p)
    two = model_k22_zero(0.6, 0.2, p, register="two")
    t = np.linspace(0, 1, 40)
    h2 = assemble(two, t)
    assert h2.shape == (40, 5, 5)
    assert max_norm(h2[:, 2:, 2:] - assemble(one, t)) < 1e-15
    assert max_norm(h2[:, :2, :]) == 0.0


def test_model_argument_checks():
    p = make_cap_loop(1.0)
    with pytest.raises(ValueError):
        LambdaModel(p, 0.0, 0.0, "other")
    with pytest.raises(ValueError):
        LambdaModel(p, 0.0, 0.0, register="three")
    with pytest.raises(ValueError):
        LambdaModel(p, 0.0, 0.0, "custom")


def test_pulse_schedule_columns():
    m = model_k22_zero(0.6, 0.2, make_cap_loop(0.9))
    sched = pulse_schedule(m, 11)
    assert set(sched) == {"t", "delta", "omega", "kappa"}
    assert np.all(sched["omega"] >= 0) and sched["t"][-1] == 1.0
    with pytest.raises(ValueError):
        pulse_schedule(m, 1)
