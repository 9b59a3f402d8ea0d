import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resokit.errors import (
    BranchPointError,
    ConfigurationError,
    GeometryError,
    PoleProximityError,
)
from resokit.surface import (
    BackgroundPhase,
    ResonancePole,
    Sheet,
    SMatrixModel,
    blaschke_residue,
    energy_to_momentum,
    locate_pole,
    momentum_to_energy,
    poles_of,
    unitarity_deviation,
)

complex_energies = st.complex_numbers(
    min_magnitude=1e-6, max_magnitude=1e6, allow_nan=False, allow_infinity=False
)


class TestSurfaceMap:
    def test_physical_sheet_upper_half_plane(self):
        k = energy_to_momentum(-1.0 + 0.0j, Sheet.I)
        assert k == pytest.approx(1j)

    def test_second_sheet_is_negative_branch(self):
        e = 1.0 - 0.1j
        assert energy_to_momentum(e, Sheet.II) == pytest.approx(
            -energy_to_momentum(e, Sheet.I)
        )

    def test_positive_energy_rim(self):
        k = energy_to_momentum(4.0, Sheet.I)
        assert k == pytest.approx(2.0)
        assert momentum_to_energy(2.0) == (pytest.approx(4.0), Sheet.I)

    def test_branch_point_rejected(self):
        with pytest.raises(BranchPointError):
            energy_to_momentum(0.0, Sheet.I)
        with pytest.raises(BranchPointError):
            momentum_to_energy(0.0)

    def test_bad_sheet_rejected(self):
        with pytest.raises(ConfigurationError):
            energy_to_momentum(1.0, "I")

    @given(e=complex_energies, sheet=st.sampled_from([Sheet.I, Sheet.II]))
    @settings(max_examples=200, deadline=None)
    def test_round_trip(self, e, sheet):
        k = energy_to_momentum(e, sheet)
        if sheet is Sheet.I:
            assert k.imag > 0.0 or (k.imag == 0.0 and k.real >= 0.0)
        else:
            assert k.imag < 0.0 or (k.imag == 0.0 and k.real <= 0.0)
        e_back, sheet_back = momentum_to_energy(k)
        assert abs(e_back - e) <= 1e-9 * abs(e)
        # the boundary rays are owned by fixed sheets; off the boundary
        # the sheet must survive the round trip
        if abs(k.imag) > 1e-12 * abs(k):
            assert sheet_back is sheet


class TestResonancePole:
    def test_position_and_momentum_quadrant(self, pole):
        assert pole.position == 1.0 - 0.1j
        k = pole.momentum
        assert k.real > 0.0 and k.imag < 0.0
        assert k * k == pytest.approx(pole.position)

    def test_momentum_frozen_value(self, pole):
        assert pole.momentum == pytest.approx(
            1.0012461141278124 - 0.04993777183700247j, abs=1e-14
        )

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            ResonancePole(energy=-1.0, width=0.1)
        with pytest.raises(ConfigurationError):
            ResonancePole(energy=1.0, width=0.0)
        with pytest.raises(ConfigurationError):
            ResonancePole(energy=0.1, width=0.5)

    def test_json_round_trip(self, pole):
        assert ResonancePole.from_dict(pole.to_dict()) == pole


class TestSMatrixModel:
    def test_needs_poles(self):
        with pytest.raises(ConfigurationError):
            SMatrixModel(poles=())

    def test_coincident_poles_rejected(self, pole):
        with pytest.raises(ConfigurationError):
            SMatrixModel(poles=(pole, ResonancePole(energy=1.0, width=0.2)))

    def test_unitary_on_real_axis(self, model_two):
        k = np.linspace(0.05, 8.0, 320)
        assert unitarity_deviation(model_two, k) < 1e-12

    def test_pure_pole_reflection_identities(self, model_two):
        # S(-k) S(k) = 1 and S(-conj k) = conj(S(k)), everywhere
        rng = np.random.default_rng(11)
        pts = rng.normal(size=16) + 1j * rng.normal(size=16)
        for k in pts:
            s = model_two.eval(k)
            assert model_two.eval(-k) * s == pytest.approx(1.0, rel=1e-10)
            assert model_two.eval(-np.conj(k)) == pytest.approx(np.conj(s), rel=1e-10)

    def test_threshold_value_is_one(self, model_two):
        assert model_two.on_spectrum(0.0) == pytest.approx(1.0, abs=1e-12)

    def test_negative_energy_not_on_spectrum(self, model):
        with pytest.raises(BranchPointError):
            model.on_spectrum(-1.0)

    def test_eval_energy_sheets_differ(self, model, pole):
        e = 1.0 + 0.3j
        s1 = model.eval_energy(e, Sheet.I)
        s2 = model.eval_energy(e, Sheet.II)
        assert abs(s1 - s2) > 1e-3

    def test_pole_proximity_guard(self, model, pole):
        with pytest.raises(PoleProximityError):
            model.eval(pole.momentum)

    def test_json_round_trip(self, model_two):
        clone = SMatrixModel.from_dict(model_two.to_dict())
        k = 0.7 + 0.2j
        assert clone.eval(k) == pytest.approx(model_two.eval(k))


class TestPoleLocation:
    def test_poles_located_to_1e8(self, model_two):
        declared = [p.momentum for p in model_two.poles]
        found = poles_of(model_two)
        for d, f in zip(declared, found):
            assert abs(f - d) / abs(d) < 1e-8

    def test_locator_tolerates_center_offset(self, model, pole):
        k = pole.momentum
        off = k + 0.004 - 0.003j
        found = locate_pole(model, off, 0.02)
        assert abs(found - k) / abs(k) < 1e-10

    def test_residue_closed_form_vs_contour(self, model_two):
        from resokit.quadrature import circle_residue

        for i, p in enumerate(model_two.poles):
            k = p.momentum
            numeric = circle_residue(model_two.eval, k, 0.01)
            assert numeric == pytest.approx(blaschke_residue(model_two, i), rel=1e-9)


class TestBackgroundPhase:
    def test_phase_real_on_real_axis(self):
        bg = BackgroundPhase(terms=((0.3, -1.0, 0.5), (-0.1, -2.0, 1.5)))
        k = np.linspace(-4.0, 4.0, 41)
        assert np.max(np.abs(np.imag(bg.phase(k)))) < 1e-15

    def test_positive_pole_center_rejected(self):
        with pytest.raises(GeometryError):
            BackgroundPhase(terms=((0.3, 1.0, 0.5),))

    def test_zero_half_width_rejected(self):
        with pytest.raises(ConfigurationError):
            BackgroundPhase(terms=((0.3, -1.0, 0.0),))

    def test_model_with_background_still_unitary(self, pole):
        bg = BackgroundPhase(terms=((0.4, -0.8, 0.6),))
        model = SMatrixModel(poles=(pole,), background=bg)
        k = np.linspace(0.05, 6.0, 200)
        assert unitarity_deviation(model, k) < 1e-12

    def test_background_shifts_pole_residue_not_location(self, pole):
        bg = BackgroundPhase(terms=((0.4, -0.8, 0.6),))
        model = SMatrixModel(poles=(pole,), background=bg)
        found = poles_of(model)
        assert abs(found[0] - pole.momentum) / abs(pole.momentum) < 1e-8
        bare = SMatrixModel(poles=(pole,))
        assert blaschke_residue(model, 0) != pytest.approx(
            blaschke_residue(bare, 0), rel=1e-3
        )
