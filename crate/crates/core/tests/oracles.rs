//! Closed forms against independent linear-algebra oracles built here with
//! nalgebra, without going through the crate's own drift matrix or solver.

use cavity_eit::scalar::{relative_error, relative_error_real};
use cavity_eit::{drift_matrix, spectra_analytic, steady_state_analytic, steady_state_numeric, Params};
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use proptest::prelude::*;

fn generator(p: &Params) -> Matrix3<Complex64> {
    let i = Complex64::i();
    let diag = |delta: f64, decay: f64| -i * delta - decay / 2.0;
    Matrix3::new(
        diag(p.detuning_cavity, p.cavity_decay),
        -i * p.coupling_a,
        -i * p.coupling_b,
        -i * p.coupling_a,
        diag(p.detuning_a, p.decay_a),
        Complex64::new(0.0, 0.0),
        -i * p.coupling_b,
        Complex64::new(0.0, 0.0),
        diag(p.detuning_b, p.decay_b),
    )
}

fn steady_oracle(p: &Params) -> [Complex64; 3] {
    let rhs = Vector3::new(Complex64::new(0.0, 0.0), Complex64::i() * p.drive, Complex64::new(0.0, 0.0));
    let x = generator(p).lu().solve(&rhs).expect("invertible");
    [x[0], x[1], x[2]]
}

fn spectra_oracle(p: &Params, omega: f64) -> [f64; 3] {
    let shifted = Matrix3::from_diagonal_element(Complex64::new(0.0, -omega)) - generator(p);
    let noise = Matrix3::from_diagonal(&Vector3::new(
        Complex64::from(p.cavity_decay.sqrt()),
        Complex64::from(p.decay_a.sqrt()),
        Complex64::from(p.decay_b.sqrt()),
    ));
    let r = shifted.try_inverse().expect("invertible") * noise;
    let d = Matrix3::from_diagonal(&Vector3::new(
        Complex64::from(p.thermal_c + 1.0),
        Complex64::from(p.thermal_a + 1.0),
        Complex64::from(p.thermal_b + 1.0),
    ));
    let cov = r * d * r.adjoint();
    [cov[(0, 0)].re, cov[(1, 1)].re, cov[(2, 2)].re]
}

fn params() -> impl Strategy<Value = Params> {
    (
        (-50.0..50.0f64, -50.0..50.0f64, -50.0..50.0f64),
        (0.0..20.0f64, 0.0..20.0f64, 0.0..5.0f64),
        (0.1..10.0f64, 0.1..100.0f64, 0.1..100.0f64),
        (0.0..2.0f64, 0.0..2.0f64, 0.0..2.0f64),
    )
        .prop_map(|((dc, da, db), (ga, gb, chi), (k, ya, yb), (nc, na, nb))| Params {
            detuning_cavity: dc,
            detuning_a: da,
            detuning_b: db,
            coupling_a: ga,
            coupling_b: gb,
            drive: chi,
            cavity_decay: k,
            decay_a: ya,
            decay_b: yb,
            thermal_c: nc,
            thermal_a: na,
            thermal_b: nb,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn steady_closed_form_matches_nalgebra(p in params()) {
        let analytic = steady_state_analytic(&p).unwrap().as_array();
        let own = steady_state_numeric(&p).unwrap().as_array();
        let oracle = steady_oracle(&p);
        for k in 0..3 {
            prop_assert!(relative_error(analytic[k], oracle[k]) <= 1e-12, "mode {k}: {} vs {}", analytic[k], oracle[k]);
            prop_assert!(relative_error(own[k], oracle[k]) <= 1e-12, "mode {k}: {} vs {}", own[k], oracle[k]);
        }
    }

    #[test]
    fn spectra_closed_form_matches_nalgebra(p in params(), omega in -60.0..60.0f64) {
        let analytic = spectra_analytic(&p, omega).unwrap();
        let oracle = spectra_oracle(&p, omega);
        for k in 0..3 {
            prop_assert!(relative_error_real(analytic[k], oracle[k]) <= 1e-10, "mode {k}: {} vs {}", analytic[k], oracle[k]);
        }
    }

    #[test]
    fn eigenvalues_match_schur(p in params()) {
        let ours = drift_matrix(&p).unwrap().eigenvalues().to_vec();
        let schur = generator(&p).schur();
        let theirs: Vec<Complex64> = schur.eigenvalues().expect("complex Schur").iter().copied().collect();
        let scale = 1.0 + generator(&p).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        for z in &ours {
            let nearest = theirs.iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(nearest <= 1e-6 * scale, "{z} not found in {theirs:?}");
            prop_assert!(z.re < 0.0);
        }
    }
}

#[test]
fn f32_aliases_track_f64() {
    let p = cavity_eit::preset("fig4a").unwrap();
    let p64: Params = p.params();
    let p32: cavity_eit::ParamsF32 = p.params();
    for omega in [-12.0, -3.0, 0.0, 0.5, 10.0] {
        let a = spectra_analytic(&p64, omega).unwrap();
        let b = spectra_analytic(&p32, omega as f32).unwrap();
        for k in 0..3 {
            assert!(relative_error_real(a[k], b[k] as f64) < 1e-4);
        }
    }
}
