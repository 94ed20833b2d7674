import cmath
import math

import numpy as np
import pytest

from conftest import make_params
from fdjc import dynamics as d
from fdjc.deformation import DeformationSpec, PhotonWeights
from fdjc.errors import DegenerateBranch, NoConvergence
from fdjc.presets import preset

Q = DeformationSpec.q_type(1.04)
IDENT = DeformationSpec.identity()

# RK4 values at half the default step (agreement with the default step ~1e-11)
FIG1B_N3_LT1 = (0.32853548421989665 - 0.00260692510948639j, 0.3146499820256398 + 0.00699441425773325j)
FIG1C_N5_P07 = {
    0.5: (0.2743042234127291 - 0.00130347069939614j, 0.20879914451848886 + 0.0048905899445876j),
    1.0: (0.2759791878906627 - 0.00662888342881731j, 0.20648673218639674 + 0.00450353486324565j),
    5.0: (0.2738709388722055 - 0.03285252198321754j, 0.20558002540679465 + 0.02275478925256994j),
}
FIG1A_LT10_N3_P16 = (0.3231667041614767 - 0.047149461425848714j, 0.3132407578095351 + 0.04707792184663051j)


def at(params, lt):
    return np.atleast_1d(np.asarray(lt, dtype=float)) / params.lambda_c


class TestMomentumGrid:
    def test_single_node(self):
        g = d.make_momentum_grid(1)
        assert g.p.tolist() == [0.0] and g.weight.tolist() == [1.0]

    @pytest.mark.parametrize("nodes", [2, 7, 32])
    def test_moments(self, nodes):
        g = d.make_momentum_grid(nodes)
        assert math.fsum(g.weight) == pytest.approx(1.0, abs=1e-14)
        assert abs(np.dot(g.weight, g.p)) < 1e-14
        assert np.all(g.weight > 0)

    def test_variance_against_riemann_sum(self):
        g = d.make_momentum_grid(32)
        x = np.linspace(-8, 8, 1_000_001)
        dens = np.exp(-2 * x**2)
        riemann = np.sum(x**2 * dens) / np.sum(dens)
        assert np.dot(g.weight, g.p**2) == pytest.approx(0.25, rel=1e-13)
        assert riemann == pytest.approx(0.25, rel=1e-9)

    def test_invalid(self):
        with pytest.raises(ValueError):
            d.make_momentum_grid(0)


class TestParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            make_params(c_e=1.0, c_g=0.5)
        with pytest.raises(ValueError):
            make_params(kg=-1.0)
        with pytest.raises(ValueError):
            make_params(scaled_t=[0.5, 1.0])
        with pytest.raises(ValueError):
            make_params(scaled_t=[0.0, 2.0, 1.0])
        with pytest.raises(ValueError):
            make_params(omega=1.0)

    def test_omega_derived(self):
        p = make_params()
        assert p.omega == pytest.approx(4e7)
        assert p.replace(nu=0.0).omega == pytest.approx(3e7)

    def test_complex_amplitudes(self):
        p = make_params(c_e=0.6, c_g=0.8j)
        assert p.c_g == 0.8j


class TestDetuning:
    def test_identity_collapses(self):
        p = make_params(spec=IDENT)
        for n in range(10):
            assert d.detuning_n(p, n) == pytest.approx(3e7, abs=1e-6)

    def test_q_type_n0(self):
        assert d.detuning_n(make_params(), 0) == pytest.approx(3e7, rel=1e-15)

    def test_q_type_reference(self):
        # Delta + nu {3 f^2(3) - 4 f^2(4) + 1} with nu = 1e7, q = 1.04 (mpmath)
        assert d.detuning_n(make_params(), 3) == pytest.approx(3e7 - 1248640.0, rel=1e-12)

    def test_block_detuning_pinned(self):
        p = make_params()
        assert d.block_detuning(p, 0, 0.0) == 3e7
        assert d.block_detuning(p, 0, 1.0) == pytest.approx(3e7 + p.recoil_rate)

    def test_time_detuning(self):
        p = make_params(kg=2e7)
        assert d.time_detuning(p, 0, 0.0, 0.0) == 3e7
        assert d.time_detuning(p, 0, 0.0, 1e-5) == pytest.approx(3e7 + 1e2, rel=1e-15)
        flat = make_params(kg=0.0)
        assert d.time_detuning(flat, 2, 0.3, 1e-4) == d.time_detuning(flat, 2, 0.3, 0.0)


class TestRabiParams:
    def test_gravity_shift(self):
        p = make_params(kg=2e7)
        r = d.rabi_params(p, 2, 0.1)
        assert r.omega2 - r.omega2_static == pytest.approx(2e7j)

    def test_identity_static(self):
        p = make_params(kg=2e7, spec=IDENT)
        r = d.rabi_params(p, 3, 0.0)
        assert r.omega2_static == pytest.approx(1e10 * 4 + 9e14, rel=1e-15)

    def test_fig1b_values(self):
        p = preset("fig1b")
        r = d.rabi_params(p, 2, 0.0)
        g2 = 1e10 * 3 * (1 - 1.04**3) / (3 * (1 - 1.04))
        assert r.a2 == pytest.approx(g2 / 2e7, rel=1e-12)
        dk = d.block_detuning(p, 2, 0.0)
        assert r.b(0.0) == pytest.approx(cmath.exp(0.25j * math.pi) * dk / (2 * math.sqrt(1e7)), rel=1e-14)

    def test_flat_is_degenerate(self):
        with pytest.raises(DegenerateBranch):
            d.rabi_params(make_params(kg=0.0), 0, 0.0)
        with pytest.raises(DegenerateBranch):
            d.amplitudes_closed_form(make_params(kg=0.0), 0, 0.0, 0.0)
        with pytest.raises(DegenerateBranch):
            d.amplitudes_flat_branch(make_params(kg=1.0), 0, 0.0, 0.0)


def small_params(**kw):
    """Dimensionless parameters where the Hermite/Kummer series is summed directly."""
    base = dict(lambda_c=1.0, delta_k_bar=-2.0, kg=2.0, nu=0.3, recoil_rate=0.5, c_e=0.6, c_g=0.8j,
                p_nodes=4, scaled_t=np.linspace(0, 3, 31))
    base.update(kw)
    return make_params(**base)


class TestClosedForm:
    @pytest.mark.parametrize("kg", [2e7, 8e7])
    def test_initial_condition(self, kg):
        p = preset("fig1c").replace(kg=kg)
        for n in (0, 4, 22):
            y0 = d.initial_block(p, n)
            a, b = d.amplitudes_closed_form(p, n, 0.37, 0.0)
            assert abs(a - y0[0]) < 1e-10 and abs(b - y0[1]) < 1e-10

    def test_series_initial_condition(self):
        p = small_params()
        for n in range(4):
            assert d.closed_form_regime(p, n, 0.2, p.t_grid) == "series"
            a, b = d.amplitudes_closed_form(p, n, 0.2, 0.0)
            y0 = d.initial_block(p, n)
            assert abs(a - y0[0]) < 1e-10 and abs(b - y0[1]) < 1e-10

    def test_fixture_fig1b(self):
        p = preset("fig1b")
        a, b = d.amplitudes_closed_form(p, 3, 0.0, at(p, 1.0))
        assert abs(a[0] - FIG1B_N3_LT1[0]) < 1e-9 and abs(b[0] - FIG1B_N3_LT1[1]) < 1e-9

    @pytest.mark.parametrize("kw", [{}, {"delta_k_bar": 0.5, "kg": 1.0, "scaled_t": np.linspace(0, 2, 21)}, {"lambda_c": 0.5, "kg": 0.5},
                                    {"delta_k_bar": -3.0, "kg": 3.0, "lambda_c": 1.5}])
    def test_series_matches_oracle(self, kw):
        p = small_params(**kw)
        g = p.momentum_grid
        for n in (0, 1, 3):
            a = d.amplitudes_closed_form(p, n, g.p, p.t_grid)
            b = d.amplitudes_ode_oracle(p, n, g.p, p.t_grid)
            assert np.max(np.abs(a[0] - b[0])) < 1e-9
            assert np.max(np.abs(a[1] - b[1])) < 1e-9

    def test_routes_agree_where_both_apply(self):
        # large but moderate detuning: the series still sums and the adiabatic form is accurate
        p = small_params(delta_k_bar=-12.0, kg=0.5, lambda_c=0.3, recoil_rate=0.0, scaled_t=np.linspace(0, 2, 5))
        a = d.amplitudes_closed_form(p, 0, 0.0, p.t_grid, method="asymptotic")
        b = d.amplitudes_ode_oracle(p, 0, 0.0, p.t_grid)
        assert np.max(np.abs(a[0] - b[0])) < 1e-5

    def test_block_norm(self):
        p = preset("fig1c")
        a, b = d.amplitudes_closed_form(p, 7, p.momentum_grid.p, p.t_grid[::10])
        norm0 = sum(abs(x) ** 2 for x in d.initial_block(p, 7))
        assert np.max(np.abs(np.abs(a) ** 2 + np.abs(b) ** 2 - norm0)) < 1e-8

    def test_gauge_invariance(self):
        for p in (preset("fig1b"), small_params()):
            t = p.t_grid[::20]
            y0 = d.initial_block(p, 2)
            ph = cmath.exp(0.73j)
            a1, b1 = d.amplitudes_closed_form(p, 2, 0.4, t, psi0=y0)
            a2, b2 = d.amplitudes_closed_form(p, 2, 0.4, t, psi0=(y0[0] * ph, y0[1] * ph))
            assert np.max(np.abs(np.abs(a1) ** 2 - np.abs(a2) ** 2)) < 1e-10
            assert np.max(np.abs(np.abs(b1) ** 2 - np.abs(b2) ** 2)) < 1e-10

    def test_p_continuity(self):
        p = preset("fig1b")
        t = at(p, [0.0, 3.0])
        h = 1e-3
        plus = d.amplitudes_closed_form(p, 4, 0.5 + h, t)[1][-1]
        minus = d.amplitudes_closed_form(p, 4, 0.5 - h, t)[1][-1]
        fd_p = (plus - minus) / (2 * h)
        # oracle derivative with respect to Delta_k, through the chain rule
        dd = h * p.recoil_rate
        shift = lambda s: p.replace(delta_k_bar=p.delta_k_bar + s)
        op = d.amplitudes_ode_oracle(shift(dd), 4, 0.5, t)[1][-1]
        om = d.amplitudes_ode_oracle(shift(-dd), 4, 0.5, t)[1][-1]
        fd_dk = (op - om) / (2 * dd) * p.recoil_rate
        assert abs(fd_p - fd_dk) <= 0.05 * abs(fd_dk)

    def test_trivial_block(self):
        p = small_params().replace(lambda_c=0.0)
        a, b = d.amplitudes_closed_form(p, 1, 0.0, p.t_grid)
        assert np.allclose(np.abs(a), abs(d.initial_block(p, 1)[0]))

    def test_out_of_reach_raises(self):
        p = small_params(delta_k_bar=-20.0, kg=1.0, lambda_c=5.0)
        with pytest.raises(NoConvergence):
            d.closed_form_regime(p, 0, 0.0, p.t_grid)


class TestFlatBranch:
    def test_resonant_rabi(self):
        p = make_params(spec=IDENT, delta_k_bar=0.0, nu=0.0, recoil_rate=0.0, c_e=1.0, c_g=0.0,
                        weights=PhotonWeights.fock(0))
        t = p.t_grid
        for n in range(4):
            a, b = d.amplitudes_flat_branch(p, n, 0.0, t, psi0=(1.0, 0.0))
            assert np.max(np.abs(np.abs(b) ** 2 - np.sin(p.lambda_c * math.sqrt(n + 1) * t) ** 2)) < 1e-12

    def test_no_coupling(self):
        p = make_params().replace(lambda_c=0.0)
        y0 = (0.3 + 0.1j, -0.2j)
        a, b = d.amplitudes_flat_branch(p, 3, 0.4, np.linspace(0, 1, 7), psi0=y0)
        assert np.allclose(a, y0[0], atol=1e-15) and np.allclose(b, y0[1], atol=1e-15)

    def test_detuned_against_oracle(self):
        p = make_params(kg=0.0)
        t = at(p, np.linspace(0, 2, 11))
        a = d.amplitudes_flat_branch(p, 0, 0.0, t)
        b = d.amplitudes_ode_oracle(p, 0, 0.0, t)
        assert np.max(np.abs(a[0] - b[0])) < 1e-10 and np.max(np.abs(a[1] - b[1])) < 1e-10

    def test_rabi_frequency_convention(self):
        # population transfer oscillates at sqrt(4 G^2 + Dk^2)
        p = make_params(spec=IDENT, delta_k_bar=3e5, nu=0.0, recoil_rate=0.0, kg=0.0)
        t = np.linspace(0, 1e-4, 201)
        a, b = d.amplitudes_flat_branch(p, 0, 0.0, t, psi0=(1.0, 0.0))
        G, dk = 1e5, 3e5
        om = math.sqrt(4 * G * G + dk * dk)
        assert np.allclose(np.abs(b) ** 2, (2 * G / om) ** 2 * np.sin(om * t / 2) ** 2, atol=1e-13)


class TestOracle:
    def test_fixture_fig1c(self):
        p = preset("fig1c")
        lts = sorted(FIG1C_N5_P07)
        a, b = d.amplitudes_ode_oracle(p, 5, 0.7, at(p, [0.0] + lts))
        for i, lt in enumerate(lts, start=1):
            assert abs(a[i] - FIG1C_N5_P07[lt][0]) < 1e-9
            assert abs(b[i] - FIG1C_N5_P07[lt][1]) < 1e-9

    def test_norm(self):
        p = preset("fig1c")
        a, b = d.amplitudes_ode_oracle(p, 9, -1.3, p.t_grid)
        norm0 = abs(a[0]) ** 2 + abs(b[0]) ** 2
        assert np.max(np.abs(np.abs(a) ** 2 + np.abs(b) ** 2 - norm0)) < 1e-10

    def test_resonant_law(self):
        p = make_params(spec=IDENT, delta_k_bar=0.0, nu=0.0, recoil_rate=0.0, kg=0.0)
        t = p.t_grid
        a, b = d.amplitudes_ode_oracle(p, 2, 0.0, t, psi0=(1.0, 0.0))
        assert np.max(np.abs(np.abs(a) ** 2 - np.cos(p.lambda_c * math.sqrt(3) * t) ** 2)) < 1e-8

    def test_step_halving(self):
        p = preset("fig1c")
        t = at(p, [0.0, 5.0, 25.0])
        a = d.amplitudes_ode_oracle(p, 22, 2.1, t)
        b = d.amplitudes_ode_oracle(p, 22, 2.1, t, phase_step=d.RK4_PHASE_STEP / 2)
        assert np.max(np.abs(a[0] - b[0])) < 1e-9 and np.max(np.abs(a[1] - b[1])) < 1e-9

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            d.amplitudes_ode_oracle(make_params(), 0, 0.0, [1.0, 2.0])


class TestEvolveState:
    def test_global_norm(self):
        for name in ("fig1a", "fig1c"):
            p = preset(name).replace(p_nodes=8)
            tr = d.evolve_state(p)
            assert np.max(np.abs(tr.norm() - 1)) < 1e-8

    def test_vacuum_ground_support(self):
        p = make_params(c_e=1.0, c_g=0.0, weights=PhotonWeights.fock(0), kg=2e7)
        tr = d.evolve_state(p)
        assert tr.psi1.shape[0] == 1
        assert np.all(tr.g0 == 0)
        assert np.max(np.abs(tr.norm() - 1)) < 1e-12

    def test_fixture_fig1a(self):
        p = preset("fig1a")
        p = p.replace(t_grid=at(p, [0.0, 10.0]))
        tr = d.evolve_state(p)
        assert abs(tr.psi1[3, 16, 1] - FIG1A_LT10_N3_P16[0]) < 1e-9
        assert abs(tr.psi2[3, 16, 1] - FIG1A_LT10_N3_P16[1]) < 1e-9

    def test_modes_agree(self):
        p = preset("fig1b").replace(p_nodes=4)
        p = p.replace(t_grid=p.t_grid[::50])
        a = d.evolve_state(p)
        b = d.evolve_state(p, mode="oracle")
        assert np.max(np.abs(a.psi1 - b.psi1)) < 1e-8
        assert np.max(np.abs(a.psi2 - b.psi2)) < 1e-8

    def test_thread_count_is_invisible(self):
        p = preset("fig1b").replace(p_nodes=6)
        one = d.evolve_state(p, threads=1)
        many = d.evolve_state(p, threads=4)
        assert np.array_equal(one.psi1, many.psi1) and np.array_equal(one.psi2, many.psi2)

    def test_block_failures_are_aggregated(self):
        p = small_params(delta_k_bar=-20.0, kg=1.0, lambda_c=5.0)
        expected = []
        for n in range(p.n_max + 1):
            try:
                d.closed_form_regime(p, n, p.momentum_grid.p, p.t_grid)
            except NoConvergence:
                expected.append(n)
        with pytest.raises(d.BlockFailure) as info:
            d.evolve_state(p)
        assert expected and [n for n, _ in info.value.failures] == expected
        assert "n=0" in str(info.value)

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            d.evolve_state(make_params(), mode="magic")
