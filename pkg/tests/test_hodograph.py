import numpy as np
import pytest

from heleshaw.curve import build_curve, schwarz_two_sheeted, solve_double_point, sqrt_p2, trace_real_section
from heleshaw.errors import BifurcationError, InvalidInputError
from heleshaw.geometry import max_curvature
from heleshaw.hodograph import (
    BranchPoints,
    DipoleEnd,
    HodographParams,
    bifurcation_scan,
    differential_minus,
    differential_plus,
    differential_residue,
    dipole,
    eval_differential,
    f1_f2_split,
    f2_derivative,
    hodograph_jacobian,
    hodograph_residual,
    pump_differential,
    sdz_decomposition_check,
    solve_hodograph,
    solved_curve,
    string_rhs,
    whitham_velocity,
)

P, Q = 2.0, -3.0


def raw_residuals(p, q, mu, T, E1, E2):
    """Residual formulas without the ordering guard (test-side oracle)."""
    nu = mu - T
    A = np.sqrt((p - E2) / (p - E1))
    B = np.sqrt((E2 - q) / (E1 - q))
    s = (E2 - E1) / 2
    return np.array([mu * A + nu * B + T + s * (p - q),
                     mu / A + nu / B + T - s * (p - q)])


class TestResidual:
    def test_vanishes_at_double_root_solution(self, base_params, base_curve):
        bp = BranchPoints(base_curve.E1, base_curve.E2)
        r = hodograph_residual(base_params, bp)
        assert np.max(np.abs(r)) < 1e-10

    def test_residuals_match_f2_zeros_at_solution(self, base_params, base_curve):
        # at a solution the residuals are twice the split part f2 at the
        # branch points, so both vanish together
        bp = BranchPoints(base_curve.E1, base_curve.E2)
        r = hodograph_residual(base_params, bp)
        _, f2a = f1_f2_split(base_curve, complex(base_curve.E1))
        _, f2b = f1_f2_split(base_curve, complex(base_curve.E2))
        assert abs(r[0] - 2 * np.real(f2a)) < 1e-10
        assert abs(r[1] - 2 * np.real(f2b)) < 1e-10
        assert abs(f2a) < 1e-10 and abs(f2b) < 1e-10

    def test_swap_exchanges_components(self):
        # the formula pair swaps under E1 <-> E2 (r1 <-> r2)
        r = raw_residuals(P, Q, 0.1, 1.0, -2.9, -2.6)
        rs = raw_residuals(P, Q, 0.1, 1.0, -2.6, -2.9)
        assert rs[0] == pytest.approx(r[1], abs=1e-14)
        assert rs[1] == pytest.approx(r[0], abs=1e-14)

    def test_coincident_branch_points_limit(self):
        # as E2 -> E1 every ratio tends to 1 and both residuals tend to
        # mu + nu + T = 2 mu, so the diagonal is not a spurious root
        mu, T = 0.1, 1.0
        r = raw_residuals(P, Q, mu, T, -2.8, -2.8 + 1e-9)
        assert np.allclose(r, 2 * mu, atol=1e-6)

    def test_ordering_guard(self, base_params):
        with pytest.raises(InvalidInputError):
            hodograph_residual(base_params, BranchPoints(-3.5, -2.6))


class TestJacobian:
    def test_against_finite_differences(self, base_params, base_curve):
        bp = BranchPoints(base_curve.E1 - 0.03, base_curve.E2 + 0.05)
        J = hodograph_jacobian(base_params, bp)
        d = 1e-7
        for j, dE in enumerate([(d, 0), (0, d)]):
            rp = hodograph_residual(base_params, BranchPoints(bp.E1 + dE[0], bp.E2 + dE[1]))
            rm = hodograph_residual(base_params, BranchPoints(bp.E1 - dE[0], bp.E2 - dE[1]))
            fd = (rp - rm) / (2 * d)
            assert np.allclose(J[:, j], fd, rtol=1e-6, atol=1e-6)


class TestSolver:
    def test_reference_agreement_with_double_root(self, base_params, base_curve):
        bp = solve_hodograph(base_params)
        assert np.max(np.abs(hodograph_residual(base_params, bp))) < 1e-12
        assert abs(bp.E1 - base_curve.E1) < 1e-8
        assert abs(bp.E2 - base_curve.E2) < 1e-8

    def test_continuation_path_in_T(self):
        seed = None
        for T in np.linspace(0.5, 1.5, 100):
            params = HodographParams(P, Q, 0.1, T)
            bp = solve_hodograph(params, seed=seed)
            assert np.max(np.abs(hodograph_residual(params, bp))) < 1e-12
            # independent curve-side verification
            oracle = solve_double_point(params.curve(), hint=(bp.E1, bp.E2, 0.0))
            assert abs(bp.E1 - oracle.E1) < 1e-8
            assert abs(bp.E2 - oracle.E2) < 1e-8
            seed = bp

    def test_small_mu_limit(self):
        gaps = []
        for mu in (1e-2, 1e-3, 1e-4):
            bp = solve_hodograph(HodographParams(P, Q, mu, 1.0))
            gaps.append(bp.E2 - bp.E1)
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 0.02

    def test_alphas_nonzero(self, base_branch_points):
        assert abs(base_branch_points.alpha1) > 1e-3
        assert abs(base_branch_points.alpha2) > 1e-3


class TestDifferentials:
    def test_plus_principal_part(self, base_curve):
        d = differential_plus(base_curve)
        for z in (1e6, 1e6j, 3e5 - 4e5j):
            assert abs(eval_differential(d, z, 1) - 1.0) < 1e-10  # (1 + O(z^-2))
            assert abs(eval_differential(d, z, 2)) < 1e-10

    def test_plus_plus_minus_is_dz(self, base_curve, rng):
        dp = differential_plus(base_curve)
        dm = differential_minus(base_curve)
        z = rng.normal(size=20) * 2 + 1j * rng.normal(size=20)
        for sheet in (1, 2):
            total = dp.density(z, sheet) + dm.density(z, sheet)
            assert np.max(np.abs(total - 1.0)) < 1e-14

    def test_dipole_residues(self, base_curve):
        c = base_curve
        a = DipoleEnd(0.5 + 2.0j, 1, complex(sqrt_p2(c.E1, c.E2, 0.5 + 2.0j, 1)))
        b = DipoleEnd(-1.0 - 1.5j, 2, complex(sqrt_p2(c.E1, c.E2, -1.0 - 1.5j, 2)))
        d = dipole(c, a, b)
        assert abs(differential_residue(d, a.point, 1) - 1.0) < 1e-10
        assert abs(differential_residue(d, b.point, 2) + 1.0) < 1e-10
        # nothing on the opposite sheets
        assert abs(differential_residue(d, a.point, 2)) < 1e-10
        assert abs(differential_residue(d, b.point, 1)) < 1e-10

    def test_pump_differential_residues(self, base_curve):
        c = base_curve
        d_inf = pump_differential(c, "inf")
        q_end = d_inf.ends[1]
        assert abs(differential_residue(d_inf, c.q, q_end.sheet) + 1.0) < 1e-10
        d_p = pump_differential(c, "p")
        p_end = d_p.ends[0]
        assert abs(differential_residue(d_p, c.p, p_end.sheet) - 1.0) < 1e-10

    def test_singular_point_guard(self, base_curve):
        d = differential_plus(base_curve)
        with pytest.raises(InvalidInputError):
            eval_differential(d, base_curve.E1, 1)


class TestSplit:
    def test_reconstruction(self, base_curve, rng):
        c = base_curve
        z = rng.normal(size=50) * 1.5 + 1j * rng.normal(size=50) * 1.5
        f1, f2 = f1_f2_split(c, z)
        s = f1 + f2 / sqrt_p2(c.E1, c.E2, z, 1)
        target = schwarz_two_sheeted(c, z, 1)
        assert np.max(np.abs(s - target)) < 1e-10

    def test_zero_at_branch_points(self, base_curve):
        c = base_curve
        for Ek in (c.E1, c.E2):
            _, f2 = f1_f2_split(c, complex(Ek))
            assert abs(f2) < 1e-10

    def test_real_on_real_axis(self, base_curve):
        c = base_curve
        for x in (1.0, 0.5, -0.2, 2.5, 3.5):
            f1, f2 = f1_f2_split(c, complex(x))
            assert abs(np.imag(f1)) < 1e-12
            assert abs(np.imag(f2)) < 1e-12


class TestStringEquation:
    def test_rates_real(self, base_params, base_branch_points):
        for pump in ("inf", "p"):
            rates = string_rhs(base_params, base_branch_points, pump)
            assert rates.dtype.kind == "f"

    def test_infinity_pump_finite_differences(self, base_params):
        d = 1e-4
        bp = solve_hodograph(base_params)
        rates = string_rhs(base_params, bp, "inf")
        up = solve_hodograph(HodographParams(P, Q, base_params.mu, base_params.T + d), seed=bp)
        dn = solve_hodograph(HodographParams(P, Q, base_params.mu, base_params.T - d), seed=bp)
        fd = (up.as_array - dn.as_array) / (2 * d)
        assert np.max(np.abs((rates - fd) / fd)) < 1e-5

    def test_point_pump_finite_differences(self, base_params):
        # the pump at p advances mu and T together (T tracks total area)
        d = 1e-4
        bp = solve_hodograph(base_params)
        rates = string_rhs(base_params, bp, "p")
        up = solve_hodograph(
            HodographParams(P, Q, base_params.mu + d, base_params.T + d), seed=bp)
        dn = solve_hodograph(
            HodographParams(P, Q, base_params.mu - d, base_params.T - d), seed=bp)
        fd = (up.as_array - dn.as_array) / (2 * d)
        assert np.max(np.abs((rates - fd) / fd)) < 1e-5


class TestWhithamVelocity:
    def test_same_pump_unity(self, base_params, base_branch_points):
        v = whitham_velocity(base_params, base_branch_points, "inf", "inf")
        assert np.allclose(v, 1.0, atol=1e-14)

    def test_reciprocity(self, base_params, base_branch_points):
        v1 = whitham_velocity(base_params, base_branch_points, "p", "inf")
        v2 = whitham_velocity(base_params, base_branch_points, "inf", "p")
        assert np.allclose(v1 * v2, 1.0, atol=1e-12)

    def test_characteristic_identity_finite_differences(self, base_params):
        # dE_k/dT^(p) = V_k^(p,inf) dE_k/dT^(inf)
        d = 1e-4
        bp = solve_hodograph(base_params)
        v = whitham_velocity(base_params, bp, "p", "inf")
        up_p = solve_hodograph(HodographParams(P, Q, base_params.mu + d, base_params.T + d), seed=bp)
        dn_p = solve_hodograph(HodographParams(P, Q, base_params.mu - d, base_params.T - d), seed=bp)
        up_i = solve_hodograph(HodographParams(P, Q, base_params.mu, base_params.T + d), seed=bp)
        dn_i = solve_hodograph(HodographParams(P, Q, base_params.mu, base_params.T - d), seed=bp)
        fd_p = (up_p.as_array - dn_p.as_array) / (2 * d)
        fd_i = (up_i.as_array - dn_i.as_array) / (2 * d)
        assert np.max(np.abs(fd_p / fd_i - v) / np.abs(v)) < 1e-4


class TestSdzDecomposition:
    def test_sup_residual(self, base_curve, rng):
        z = rng.normal(size=200) * 2 + 1j * rng.normal(size=200) * 2
        rep = sdz_decomposition_check(base_curve, z)
        assert rep.sup_residual < 1e-9

    def test_total_residue_audit(self, base_curve):
        # the boundary differential has residues -mu, -nu at the finite
        # poles and conj(nu), conj(mu) at the two infinities; their sum
        # vanishes exactly when mu + nu is real
        c = base_curve
        th = 2 * np.pi * np.arange(1024) / 1024

        def S_res(center, sheet, rad=5e-3):
            ring = center + rad * np.exp(1j * th)
            return np.mean(schwarz_two_sheeted(c, ring, sheet) * rad * np.exp(1j * th))

        vq = c.sqrtP2_at_q
        q_sheet = 1 if abs(sqrt_p2(c.E1, c.E2, c.q, 1) - vq) < abs(
            sqrt_p2(c.E1, c.E2, c.q, 1) + vq) else 2
        finite = S_res(c.p, 1) + S_res(c.q, q_sheet)
        assert abs(finite - (-(c.mu + c.nu))) < 1e-9
        # big anticlockwise loops pick up all finite residues (the two
        # sheets' cut contributions cancel in the sum), so the residues at
        # the infinities are minus the loop total
        R = 60.0
        ring = R * np.exp(1j * th)
        loops = sum(np.mean(schwarz_two_sheeted(c, ring, sheet) * ring)
                    for sheet in (1, 2))
        at_infinity = -loops
        assert abs(finite + at_infinity) < 1e-9
        assert abs(at_infinity - (np.conj(c.mu) + np.conj(c.nu))) < 1e-9


class TestBifurcationScan:
    def test_interior_regular(self):
        rows = bifurcation_scan(P, Q, [0.05, 0.1], [0.8, 1.0, 1.2])
        assert all(r.status == "solved" for r in rows)
        assert all(r.sigma_min > 1e-3 for r in rows)
        assert all(r.residual < 1e-12 for r in rows)

    def test_breakdown_at_large_T(self):
        rows = bifurcation_scan(P, Q, [1.0], [8.0, 10.0, 12.0, 13.0, 14.0, 16.0])
        statuses = [r.status for r in rows]
        assert statuses[0] == "solved"
        assert statuses[-1] != "solved"
        # sigma_min shrinks approaching the breakdown
        solved = [r for r in rows if r.status == "solved"]
        assert solved[-1].sigma_min < solved[0].sigma_min

    def test_cusp_curvature_blowup(self):
        # bracket the breakdown along T at mu = 1, then compare boundary
        # curvature deep inside vs near the edge: it must blow up
        lo, hi = 8.0, 16.0
        for _ in range(12):
            mid = (lo + hi) / 2
            try:
                solve_hodograph(HodographParams(P, Q, 1.0, mid))
                lo = mid
            except Exception:
                hi = mid
        curv = []
        for T in (8.0, lo - 1e-2):
            params = HodographParams(P, Q, 1.0, T)
            c = solved_curve(params)
            comp = trace_real_section(c, find_all=False)[0]
            curv.append(max_curvature(comp.contour))
        assert curv[1] > 10 * curv[0]
