use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use slitwave::diffraction::{aperture_field, wavefunction_at, QuadratureSettings, WaveField};
use slitwave::model::{ApertureSpec, BeamParams, Grid1D, SlitKind, Snapshot};
use slitwave::phase_space::{
    de_broglie_density, marginal_k, marginal_x, negativity_metrics, wigner_function, wigner_function_on,
    wigner_k_limit, zero_set_consistency,
};
use slitwave::spectral::{momentum_spectrum, relative_l2};

const SIGMA: f64 = 1e-6;

fn gaussian() -> WaveField {
    let grid = Grid1D::new(-8.0 * SIGMA, 8.0 * SIGMA, 641).unwrap();
    let norm = (PI * SIGMA * SIGMA).powf(-0.25);
    let values = grid.points().map(|x| Complex64::new(norm * (-x * x / (2.0 * SIGMA * SIGMA)).exp(), 0.0)).collect();
    WaveField::new(grid, values, Snapshot::SLIT_PLANE).unwrap()
}

fn gaussian_kgrid() -> Grid1D {
    Grid1D::new(-6.0 / SIGMA, 6.0 / SIGMA, 241).unwrap()
}

fn diffracted(kind: SlitKind, y: f64, grid: &Grid1D) -> WaveField {
    let beam = BeamParams::helium();
    let snapshot = Snapshot::at_distance(y, beam.velocity()).unwrap();
    wavefunction_at(&ApertureSpec::helium(kind), &beam, snapshot, grid, &QuadratureSettings::default()).unwrap()
}

fn slit_plane(kind: SlitKind) -> WaveField {
    aperture_field(&ApertureSpec::helium(kind), &Grid1D::new(-8e-6, 8e-6, 1601).unwrap())
}

/// `(1/π) Σ_ξ e^{2ikξ} ψ*(x_i + ξ) ψ(x_i - ξ) Δξ`, term by term.
fn direct_wigner(psi: &WaveField, i: usize, k: f64) -> Complex64 {
    let h = psi.grid().spacing();
    let v = psi.values();
    let reach = i.min(v.len() - 1 - i) as i64;
    (-reach..=reach)
        .map(|m| {
            let (a, b) = ((i as i64 + m) as usize, (i as i64 - m) as usize);
            Complex64::from_polar(h / PI, 2.0 * k * m as f64 * h) * v[a].conj() * v[b]
        })
        .sum()
}

#[test]
fn gaussian_wigner_matches_closed_form() {
    let psi = gaussian();
    let w = wigner_function(&psi, &gaussian_kgrid()).unwrap();
    let mut exact = Vec::new();
    for x in w.xgrid().points() {
        for k in w.kgrid().points() {
            exact.push((-x * x / (SIGMA * SIGMA) - SIGMA * SIGMA * k * k).exp() / PI);
        }
    }
    assert!(relative_l2(&exact, &w.to_dense()) < 1e-6);
}

#[test]
fn gaussian_marginals_match_closed_form() {
    let psi = gaussian();
    let w = wigner_function(&psi, &gaussian_kgrid()).unwrap();
    assert!(relative_l2(&psi.intensity(), &marginal_x(&w)) < 1e-6);
    let spectrum: Vec<f64> = w.kgrid().points().map(|k| SIGMA / PI.sqrt() * (-SIGMA * SIGMA * k * k).exp()).collect();
    assert!(relative_l2(&spectrum, &marginal_k(&w)) < 1e-6);
}

#[test]
fn gaussian_wigner_is_positive() {
    let m = negativity_metrics(&wigner_function(&gaussian(), &gaussian_kgrid()).unwrap());
    assert!(m.negative_volume <= 1e-6);
    assert!(m.min_value > -1e-12);
}

#[test]
fn gaussian_without_zeros_is_consistent() {
    // window and k-range narrow enough that neither density drops below the threshold
    let grid = Grid1D::new(-2.5 * SIGMA, 2.5 * SIGMA, 201).unwrap();
    let norm = (PI * SIGMA * SIGMA).powf(-0.25);
    let values = grid.points().map(|x| Complex64::new(norm * (-x * x / (2.0 * SIGMA * SIGMA)).exp(), 0.0)).collect();
    let psi = WaveField::new(grid, values, Snapshot::SLIT_PLANE).unwrap();
    let kgrid = Grid1D::new(-2.5 / SIGMA, 2.5 / SIGMA, 101).unwrap();
    let spectrum = momentum_spectrum(&psi, &kgrid).unwrap();
    let report = zero_set_consistency(&psi, &spectrum, &wigner_function(&psi, &kgrid).unwrap());
    assert!(report.position_lines.is_empty() && report.momentum_lines.is_empty());
    assert!(report.consistent);
}

#[test]
fn fast_path_matches_direct_sum() {
    let mut rng = StdRng::seed_from_u64(7);
    let states =
        [slit_plane(SlitKind::Double), diffracted(SlitKind::Double, 0.03, &Grid1D::new(-24e-6, 24e-6, 2049).unwrap())];
    for psi in &states {
        let limit = wigner_k_limit(psi.grid().spacing());
        let kgrid = Grid1D::new(-0.4 * limit, 0.3 * limit, 777).unwrap();
        let w = wigner_function(psi, &kgrid).unwrap();
        let max = w.max_abs();
        for _ in 0..25 {
            let (i, j) = (rng.gen_range(0..psi.grid().len()), rng.gen_range(0..kgrid.len()));
            let direct = direct_wigner(psi, i, kgrid.at(j));
            assert!((direct.re - w.value(i, j)).abs() <= 1e-6 * max);
            assert!(direct.im.abs() <= 1e-10 * max);
        }
    }
}

#[test]
fn midplane_negativity_of_two_rectangles() {
    // W′(0, k) = (2A²/πk) cos(k(Δ+δ)) sin(kδ) for two slits of height A
    let spec = ApertureSpec::helium(SlitKind::Double);
    let h = 1e-9;
    let psi = aperture_field(&spec, &Grid1D::new(-8e-6, 8e-6, 16_001).unwrap());
    let a2 = spec.amplitude().powi(2);
    let kgrid = Grid1D::new(1e5, 1.2e6, 12).unwrap();
    let w = wigner_function_on(&psi, &Grid1D::new(-h, h, 3).unwrap(), &kgrid).unwrap();
    // the half-height edge cells shift the ξ integral by O(h)
    let tol = 2.0 * a2 * h / PI;
    let mut negative = 0;
    for (j, k) in kgrid.points().enumerate() {
        let exact = 2.0 * a2 / (PI * k) * (k * spec.separation()).cos() * (k * spec.delta()).sin();
        let got = w.value(1, j);
        assert!((got - exact).abs() < tol, "k = {k}: {got} vs {exact}");
        if exact < -0.05 {
            negative += 1;
            assert!(got < 0.0);
        }
    }
    assert!(negative > 0);
}

#[test]
fn pure_state_bound() {
    let grid = Grid1D::new(-64e-6, 64e-6, 8192).unwrap();
    let kgrid = Grid1D::new(-1e8, 1e8, 1025).unwrap();
    for psi in [slit_plane(SlitKind::Double), diffracted(SlitKind::Double, 0.12, &grid)] {
        let kgrid = if psi.grid().len() == grid.len() { kgrid } else { Grid1D::new(-2e7, 2e7, 801).unwrap() };
        let w = wigner_function(&psi, &kgrid).unwrap();
        assert!(w.max_abs() <= 1.0 / PI + 1e-6);
    }
}

#[test]
fn double_slit_map_is_point_symmetric() {
    let grid = Grid1D::new(-40e-6, 40e-6, 4097).unwrap();
    let psi = diffracted(SlitKind::Double, 0.12, &grid);
    let kgrid = Grid1D::new(-2e7, 2e7, 401).unwrap();
    let w = wigner_function(&psi, &kgrid).unwrap();
    let (nx, nk) = w.dims();
    let max = w.max_abs();
    for i in (0..nx).step_by(7) {
        for j in 0..nk {
            assert!((w.value(i, j) - w.value(nx - 1 - i, nk - 1 - j)).abs() <= 1e-8 * max);
        }
    }
}

#[test]
fn interference_dominates_negativity() {
    let grid = Grid1D::new(-40e-6, 40e-6, 4097).unwrap();
    let kgrid = Grid1D::new(-2e7, 2e7, 401).unwrap();
    let negative =
        |psi: &WaveField, kgrid: &Grid1D| negativity_metrics(&wigner_function(psi, kgrid).unwrap()).negative_volume;
    let k0 = Grid1D::new(-2e7, 2e7, 801).unwrap();
    assert!(negative(&slit_plane(SlitKind::SingleLower), &k0) < negative(&slit_plane(SlitKind::Double), &k0));
    for y in [0.03, 0.12] {
        let single = negative(&diffracted(SlitKind::SingleLower, y, &grid), &kgrid);
        let double = negative(&diffracted(SlitKind::Double, y, &grid), &kgrid);
        assert!(single < double, "y = {y}: {single} vs {double}");
    }
}

#[test]
fn wigner_map_integrates_to_one() {
    let grid = Grid1D::new(-64e-6, 64e-6, 8192).unwrap();
    let psi = diffracted(SlitKind::Double, 0.12, &grid);
    let kgrid = Grid1D::new(-1e8, 1e8, 4097).unwrap();
    let w = wigner_function(&psi, &kgrid).unwrap();
    assert!((w.integral() - 1.0).abs() < 1e-2);
}

#[test]
fn de_broglie_map_properties() {
    let grid = Grid1D::new(-64e-6, 64e-6, 8192).unwrap();
    let psi = diffracted(SlitKind::Double, 0.12, &grid);
    let kgrid = Grid1D::new(-2e8, 2e8, 8193).unwrap();
    let spectrum = momentum_spectrum(&psi, &kgrid).unwrap();
    let p = de_broglie_density(&psi, &spectrum).unwrap();
    assert!(relative_l2(&psi.intensity(), &marginal_x(&p)) < 1e-3);
    assert!(relative_l2(&spectrum.density(), &marginal_k(&p)) < 1e-3);
    let m = negativity_metrics(&p);
    assert!(m.min_value >= 0.0 && m.negative_volume == 0.0);
    let report = zero_set_consistency(&psi, &spectrum, &p);
    assert!(report.consistent);
    assert!(!report.momentum_lines.is_empty());
}

#[test]
fn double_slit_wigner_breaks_zero_set_consistency() {
    let psi = slit_plane(SlitKind::Double);
    let kgrid = Grid1D::new(-2e7, 2e7, 801).unwrap();
    let spectrum = momentum_spectrum(&psi, &kgrid).unwrap();
    let report = zero_set_consistency(&psi, &spectrum, &wigner_function(&psi, &kgrid).unwrap());
    assert!(!report.consistent);
    let line = report.momentum_line_near(PI / 8e-6).unwrap();
    assert!((line.coord - PI / 8e-6).abs() < 1e5);
    assert!(line.line_max > 1e-3 * report.map_max);
}

#[test]
fn snapped_rows_equal_full_rows() {
    let psi = diffracted(SlitKind::Double, 0.03, &Grid1D::new(-24e-6, 24e-6, 2049).unwrap());
    let kgrid = Grid1D::new(-2e7, 2e7, 201).unwrap();
    let full = wigner_function(&psi, &kgrid).unwrap();
    let coarse = wigner_function_on(&psi, &Grid1D::new(-20e-6, 20e-6, 41).unwrap(), &kgrid).unwrap();
    for (r, x) in coarse.xgrid().points().enumerate() {
        let i = psi.grid().nearest_index(x);
        assert!((psi.grid().at(i) - x).abs() < 1e-3 * psi.grid().spacing());
        for j in 0..kgrid.len() {
            assert!((coarse.value(r, j) - full.value(i, j)).abs() <= 1e-12 * full.max_abs());
        }
    }
}

#[test]
fn maps_need_matching_snapshots() {
    let grid = Grid1D::new(-24e-6, 24e-6, 2049).unwrap();
    let a = diffracted(SlitKind::Double, 0.03, &grid);
    let b = diffracted(SlitKind::Double, 0.06, &grid);
    let spectrum = momentum_spectrum(&b, &Grid1D::new(-2e7, 2e7, 401).unwrap()).unwrap();
    assert!(de_broglie_density(&a, &spectrum).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wigner_x_marginal_is_exact_on_the_full_band(
        parts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 9..40)
    ) {
        let n = parts.len();
        let grid = Grid1D::new(0.0, 1.0, n).unwrap();
        let values = parts.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let psi = WaveField::new(grid, values, Snapshot::SLIT_PLANE).unwrap();
        let limit = wigner_k_limit(grid.spacing());
        let w = wigner_function(&psi, &Grid1D::new(-limit, limit, n + 1).unwrap()).unwrap();
        let rho = psi.intensity();
        for (a, b) in marginal_x(&w).iter().zip(&rho) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn de_broglie_map_is_never_negative(
        parts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4..32)
    ) {
        let grid = Grid1D::new(-1.0, 1.0, parts.len()).unwrap();
        let values = parts.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let psi = WaveField::new(grid, values, Snapshot::SLIT_PLANE).unwrap();
        let spectrum = momentum_spectrum(&psi, &Grid1D::new(-3.0, 3.0, 31).unwrap()).unwrap();
        let m = negativity_metrics(&de_broglie_density(&psi, &spectrum).unwrap());
        prop_assert!(m.min_value >= 0.0);
        prop_assert_eq!(m.negative_volume, 0.0);
    }
}
