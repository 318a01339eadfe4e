//! Dipole contractions of the radiation tensor shared by the spectrum and
//! decay assemblies.

use crate::config::{Geometry, SystemConfig, Vec3, SIGMA};
use crate::tensor::{self, TensorError};

/// Contractions `mu_u^T M mu_v` of the free and image tensors at one
/// wavenumber, in (statC·cm)^2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Couplings {
    /// `(2/3)(|mu_A|^2 + |mu_B|^2)`.
    pub free_single: f64,
    /// `mu_A^T tau(R_AB) mu_B`.
    pub free_cross: f64,
    /// Image terms, `None` when the mirror is disabled.
    pub image: Option<ImageCouplings>,
}

/// `(sigma mu_u)^T T(Rbar) mu_v` for `T` = tau, d1, d2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImageCouplings {
    pub single: [f64; 3],
    pub cross: [f64; 3],
}

impl Couplings {
    pub fn evaluate(config: &SystemConfig, geometry: &Geometry, k: f64) -> Result<Self, TensorError> {
        let mu_a = &config.atom_a.dipole;
        let mu_b = &config.atom_b.dipole;
        let free_single = 2.0 / 3.0 * (mu_a.norm_squared() + mu_b.norm_squared());
        let tau_ab = if geometry.is_colocated() && config.dicke_limit {
            tensor::tau_coincident(k).tau
        } else {
            tensor::tau(k, &geometry.r_ab)?.tau
        };
        let free_cross = mu_a.dot(&(tau_ab * mu_b));

        let image = match geometry.images() {
            None => None,
            Some(img) => {
                let mut out = ImageCouplings::default();
                for (rbar, mu) in [(&img.rbar_a, mu_a), (&img.rbar_b, mu_b)] {
                    let c = image_contractions(k, rbar, mu, mu)?;
                    for (acc, v) in out.single.iter_mut().zip(c) {
                        *acc += v;
                    }
                }
                out.cross = image_contractions(k, &img.rbar_ab, mu_a, mu_b)?;
                Some(out)
            }
        };
        Ok(Self { free_single, free_cross, image })
    }
}

fn image_contractions(k: f64, rbar: &Vec3, mu_l: &Vec3, mu_r: &Vec3) -> Result<[f64; 3], TensorError> {
    let (t, d) = tensor::tau_with_derivs(k, rbar)?;
    let left = SIGMA.apply(mu_l);
    Ok([left.dot(&(t.tau * mu_r)), left.dot(&(d.d1 * mu_r)), left.dot(&(d.d2 * mu_r))])
}
