mod common;

use common::{angular_tau, logspace, rel_frobenius, richardson_z_derivs};
use coop_emission::oracle::SphereRule;
use coop_emission::{tau, tau_with_derivs, Vec3};
use proptest::prelude::*;

const K: f64 = 3.3356e6;

fn directions() -> Vec<Vec3> {
    vec![Vec3::z(), Vec3::x(), Vec3::new(0.3, -0.4, 0.866).normalize(), Vec3::new(-1.0, 2.0, -0.5).normalize()]
}

fn worst_fd_error(kr: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for u in directions() {
        for &x in kr {
            let r = u * (x / K);
            let (_, d) = tau_with_derivs(K, &r).unwrap();
            let h = 1e-2 * r.norm().min(1.0 / K);
            let (fd1, fd2) = richardson_z_derivs(|p| tau(K, p).unwrap().tau, &r, h);
            worst = worst.max(rel_frobenius(&d.d1, &fd1)).max(rel_frobenius(&d.d2, &fd2));
        }
    }
    worst
}

#[test]
fn derivatives_match_finite_differences() {
    let worst = worst_fd_error(&logspace(0.05, 50.0, 100));
    assert!(worst < 1e-6, "worst relative error {worst:e}");
}

#[test]
fn derivatives_match_near_series_switch() {
    let kr: Vec<f64> = (0..21).map(|i| 2.3 + 0.02 * i as f64).collect();
    assert!(worst_fd_error(&kr) < 1e-6);
}

#[test]
fn tensor_matches_angular_mode_sum() {
    let rule = SphereRule::new(64, 128);
    for u in directions() {
        for x in [0.1, 1.0, 6.7, 20.0] {
            let r = u * (x / K);
            let got = tau(K, &r).unwrap().tau;
            let want = angular_tau(K, &r, &rule);
            assert!((got - want).norm() < 1e-12, "x = {x}: {:e}", (got - want).norm());
        }
    }
}

proptest! {
    #[test]
    fn mirror_symmetry_of_derivatives(x in 0.01f64..80.0, th in 0.0f64..std::f64::consts::PI, ph in 0.0f64..std::f64::consts::TAU) {
        // Reflecting R through the mirror plane conjugates tau and d2 by sigma
        // and flips the sign of d1.
        let u = Vec3::new(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos());
        let r = u * (x / K);
        let s = coop_emission::SIGMA.matrix();
        let (t, d) = tau_with_derivs(K, &r).unwrap();
        let (tm, dm) = tau_with_derivs(K, &(s * r)).unwrap();
        let scale = t.tau.norm();
        prop_assert!((s * t.tau * s - tm.tau).norm() <= 1e-13 * scale);
        prop_assert!((s * d.d1 * s + dm.d1).norm() <= 1e-12 * d.d1.norm().max(K * 1e-3));
        prop_assert!((s * d.d2 * s - dm.d2).norm() <= 1e-12 * d.d2.norm().max(K * K * 1e-3));
    }

    #[test]
    fn trace_identity(x in 0.01f64..200.0) {
        // tr tau = 2 sin(x)/x for any direction.
        let t = tau(K, &(Vec3::new(0.2, 0.5, -0.3).normalize() * (x / K))).unwrap().tau;
        prop_assert!((t.trace() - 2.0 * x.sin() / x).abs() < 1e-13);
    }
}
