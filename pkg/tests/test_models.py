import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from symfisher.errors import CoefficientsNotLoaded, DimensionError, ParseError, ValidationError
from symfisher.models import (
    CASES,
    NOMINAL_INPUTS,
    BeamMap,
    BeamModel,
    BenchmarkFunction,
    IdentityMap,
    beam_frf,
    beam_input_model,
    beam_response,
    benchmark_eval,
    benchmark_gradient,
    default_benchmark,
    load_benchmark_coefficients,
    natural_frequencies,
)
from symfisher.models.beam import mode_shapes

Z15 = np.zeros(15)


def coeffs(a1=Z15, a2=Z15, a3=Z15, M=None):
    return BenchmarkFunction(a1, a2, a3, np.zeros((15, 15)) if M is None else M)


def main_effect_variances(f, n=20_000, seed=0):
    """Pick-freeze first-order variances ``Var(E[f | x_i])`` for unit-normal inputs.

    ``AB_i`` shares column ``i`` with ``B`` and nothing else.
    """
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, 15))
    B = rng.standard_normal((n, 15))
    fA, fB = f(A), f(B)
    out = np.empty(15)
    for i in range(15):
        ABi = A.copy()
        ABi[:, i] = B[:, i]
        out[i] = np.mean(fB * (f(ABi) - fA))
    return out


def write(tmp_path, text):
    p = tmp_path / "c.txt"
    p.write_text(text)
    return p


def fmt(values):
    return " ".join(str(v) for v in values)


class TestBenchmark:
    def test_zero(self):
        assert benchmark_eval(coeffs(), np.arange(15.0)) == 0.0

    def test_linear(self):
        e1 = np.eye(15)[0]
        assert benchmark_eval(coeffs(a1=e1), e1) == 1.0

    def test_trig(self):
        ones = np.ones(15)
        assert benchmark_eval(coeffs(a2=ones), Z15) == 0.0
        assert benchmark_eval(coeffs(a3=ones), Z15) == 15.0

    def test_not_loaded(self):
        with pytest.raises(CoefficientsNotLoaded):
            benchmark_eval(None, Z15)

    def test_batch(self):
        f = default_benchmark()
        X = np.random.default_rng(1).standard_normal((4, 15))
        assert np.allclose(f(X), [benchmark_eval(f, x) for x in X])

    @given(st.integers(0, 2**32 - 1))
    def test_gradient(self, seed):
        rng = np.random.default_rng(seed)
        f = default_benchmark()
        x = rng.standard_normal(15)
        h = 1e-5
        fd = np.array([(f(x + h * e) - f(x - h * e)) / (2 * h) for e in np.eye(15)])
        g = benchmark_gradient(f, x)
        assert np.max(np.abs(fd - g)) <= 1e-6 * max(1.0, np.max(np.abs(g)))

    def test_load(self, tmp_path):
        text = f"a1:\n{fmt(range(15))}\na2:\n{fmt([1] * 15)}\na3:\n{fmt([0] * 15)}\nM:\n" + "\n".join(
            fmt([0.5] * 15) for _ in range(15)
        )
        f = load_benchmark_coefficients(write(tmp_path, text))
        assert f.a1[14] == 14.0 and f.M.shape == (15, 15)

    def test_wrong_count(self, tmp_path):
        text = f"a1: {fmt(range(14))}\na2: {fmt([1] * 15)}\na3: {fmt([0] * 15)}\nM: {fmt([0] * 225)}"
        with pytest.raises(DimensionError):
            load_benchmark_coefficients(write(tmp_path, text))

    @pytest.mark.parametrize("text", ["1 2 3", "a1: x", "b: 1", "a1: 1\na1: 2"])
    def test_parse_errors(self, tmp_path, text):
        with pytest.raises(ParseError):
            load_benchmark_coefficients(write(tmp_path, text))

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_benchmark_coefficients(tmp_path / "none.txt")

    def test_shipped_groups(self):
        V = main_effect_variances(default_benchmark())
        low, mid, high = V[:5].sum(), V[5:10].sum(), V[10:].sum()
        assert high > mid > low


class TestBeam:
    def test_validation(self):
        with pytest.raises(ValidationError):
            BeamModel(*NOMINAL_INPUTS, damping=1.5)
        with pytest.raises(ValidationError):
            BeamModel(-1.0, *NOMINAL_INPUTS[1:])

    def test_mode_shapes_normalized(self):
        xi = np.linspace(0, 1, 20001)
        phi, _ = mode_shapes(xi, 3)
        assert np.allclose(trapezoid(phi**2, xi, axis=0), 1.0, rtol=1e-6)
        assert np.allclose(phi[0], 0.0, atol=1e-12)

    def test_first_frequency_formula(self):
        m = BeamModel(*NOMINAL_INPUTS)
        E, rho, L, w, t = NOMINAL_INPUTS
        omega = 1.8751040687119611**2 * np.sqrt(E * w * t**3 / 12 / (rho * w * t * L**4))
        assert natural_frequencies(m)[0] == pytest.approx(omega, rel=1e-12)

    def test_stiffness_scaling(self):
        base = BeamModel(*NOMINAL_INPUTS)
        stiff = BeamModel(NOMINAL_INPUTS[0] * 10, *NOMINAL_INPUTS[1:])
        ratio = natural_frequencies(stiff) / natural_frequencies(base)
        assert np.allclose(ratio, np.sqrt(10), rtol=1e-9)

    def test_linearity(self):
        a = beam_response(BeamModel(*NOMINAL_INPUTS))
        b = beam_response(BeamModel(*NOMINAL_INPUTS, force_amplitude=2.0))
        assert b.peak_rms_acceleration == pytest.approx(2 * a.peak_rms_acceleration, rel=1e-12)
        assert b.peak_rms_strain == pytest.approx(2 * a.peak_rms_strain, rel=1e-12)

    def test_mean_inputs_and_thickness(self):
        E, rho, L, w, t = NOMINAL_INPUTS
        base = beam_response(BeamModel(E, rho, L, w, t))
        thick = beam_response(BeamModel(E, rho, L, w, 1.1 * t))
        assert 0 < base.peak_rms_acceleration < np.inf
        assert 0 < base.peak_rms_strain < np.inf
        assert thick.peak_rms_strain < base.peak_rms_strain

    def test_reciprocity(self):
        m = BeamModel(*NOMINAL_INPUTS)
        omega = np.linspace(10, 1000, 50)
        a = beam_frf(m, 0.1, 0.3, omega)
        b = beam_frf(m, 0.3, 0.1, omega)
        assert np.max(np.abs(a - b)) <= 1e-10 * np.max(np.abs(a))

    def test_frf_quantity(self):
        with pytest.raises(ValidationError):
            beam_frf(BeamModel(*NOMINAL_INPUTS), 0.1, 0.2, [1.0], quantity="velocity")

    def test_deterministic(self):
        X = beam_input_model("case2").mu[None, :] * np.array([[1.0], [1.05]])
        bm = BeamMap()
        assert np.array_equal(bm.raw(X), bm.raw(X.copy()))

    def test_map_normalization(self):
        X = np.array(NOMINAL_INPUTS)[None, :] * np.array([[1.0], [0.95], [1.05]])
        Y = BeamMap()(X)
        assert Y.shape == (3, 2)
        assert np.allclose(Y.max(axis=0), 1.0)

    def test_map_matches_single(self):
        X = np.array(NOMINAL_INPUTS)[None, :]
        r = beam_response(BeamModel(*NOMINAL_INPUTS))
        assert np.allclose(BeamMap().raw(X)[0], [r.peak_rms_acceleration, r.peak_rms_strain], rtol=1e-14)

    def test_input_cases(self):
        m = beam_input_model("case1")
        assert np.allclose(m.sigma / m.mu, CASES["case1"])
        assert m.names == ["E", "rho", "L", "w", "t"]
        with pytest.raises(ValidationError):
            beam_input_model("case3")


def test_identity_map():
    X = np.ones((2, 3))
    assert IdentityMap()(X) is X
    assert IdentityMap.is_identity
