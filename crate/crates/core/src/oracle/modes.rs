//! Standing-wave modes of a perfectly conducting cubic box with walls at
//! `x = +/-L/2`, `y = +/-L/2`, `z = 0` and `z = L`.

use crate::config::Vec3;

use super::OracleError;

/// Two real transverse unit vectors for the propagation direction `k`.
///
/// `e1` is `k x z` normalized (or `x` when `k` is along `z`) and
/// `e2 = k_hat x e1`, so `(e1, e2, k_hat)` is right-handed.
pub fn polarization_basis(k: &Vec3) -> [Vec3; 2] {
    let khat = k.normalize();
    let c = khat.cross(&Vec3::z());
    let e1 = if c.norm() > 1e-12 { c.normalize() } else { Vec3::x() };
    let e2 = khat.cross(&e1);
    [e1, e2]
}

/// Wave vector of the box mode with mode numbers `n`.
pub fn box_wavevector(n: [u32; 3], l: f64) -> Vec3 {
    Vec3::new(n[0] as f64, n[1] as f64, n[2] as f64) * (std::f64::consts::PI / l)
}

/// Mode function `f_kj(r)` for polarization `j` (0 or 1), normalized so that
/// `int f . f d^3r = V` over the box.
pub fn oracle_mode_functions(r: &Vec3, k: &Vec3, polarization: usize, l: f64) -> Result<Vec3, OracleError> {
    let h = 0.5 * l;
    let inside = r.x >= -h && r.x <= h && r.y >= -h && r.y <= h && r.z >= 0.0 && r.z <= l;
    if !inside {
        return Err(OracleError::OutsideBox { position: [r.x, r.y, r.z], side: l });
    }
    if polarization > 1 {
        return Err(OracleError::BadPolarization(polarization));
    }
    let e = polarization_basis(k)[polarization];
    let (sx, cx) = (k.x * (r.x + h)).sin_cos();
    let (sy, cy) = (k.y * (r.y + h)).sin_cos();
    let (sz, cz) = (k.z * r.z).sin_cos();
    let n = 8f64.sqrt();
    Ok(Vec3::new(n * e.x * cx * sy * sz, n * e.y * sx * cy * sz, n * e.z * sx * sy * cz))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Mat3;

    #[test]
    fn tangential_field_vanishes_on_mirror() {
        let l = 2e-5;
        let k = box_wavevector([7, 3, 11], l);
        for j in 0..2 {
            for (x, y) in [(0.0, 0.0), (1.3e-6, -4.1e-6), (-9e-6, 2e-6)] {
                let f = oracle_mode_functions(&Vec3::new(x, y, 0.0), &k, j, l).unwrap();
                assert!(f.x.abs() < 1e-15 && f.y.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn completeness_of_transverse_basis() {
        for k in [Vec3::new(1.0, 2.0, 3.0), Vec3::new(0.0, 0.0, 1.0), Vec3::new(-1.0, 0.5, 0.0)] {
            let [e1, e2] = polarization_basis(&k);
            let khat = k.normalize();
            assert!(e1.dot(&khat).abs() < 1e-15 && e2.dot(&khat).abs() < 1e-15 && e1.dot(&e2).abs() < 1e-15);
            let sum = e1 * e1.transpose() + e2 * e2.transpose();
            assert!((sum - (Mat3::identity() - khat * khat.transpose())).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_points_outside() {
        let k = box_wavevector([1, 1, 1], 1.0);
        assert!(matches!(
            oracle_mode_functions(&Vec3::new(0.0, 0.0, -0.1), &k, 0, 1.0),
            Err(OracleError::OutsideBox { .. })
        ));
        assert!(matches!(
            oracle_mode_functions(&Vec3::new(0.0, 0.0, 0.5), &k, 2, 1.0),
            Err(OracleError::BadPolarization(2))
        ));
    }
}
