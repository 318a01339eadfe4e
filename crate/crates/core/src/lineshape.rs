//! Time-dependent lineshapes `h0..h3` of the emitted spectrum.
//!
//! Every ratio of the form `sin(x t/2) / (x/2)` is routed through
//! [`kernel`], which is `t sinc(x t/2)` and is exact at `x = 0`.

/// `sin(x)/x`, with a series fallback for `|x| < 1e-4`.
#[inline]
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

/// `sin(x t/2) / (x/2)` in seconds.
#[inline]
pub fn kernel(x: f64, t: f64) -> f64 {
    t * sinc(0.5 * x * t)
}

/// Values of the four lineshapes at one detuning (all in s^2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineshapeSet {
    pub h0: f64,
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    pub detuning: f64,
    pub omega_p: f64,
    pub t: f64,
}

impl LineshapeSet {
    pub fn eval(detuning: f64, omega_p: f64, t: f64) -> Self {
        let s0 = kernel(detuning, t);
        let sp = kernel(detuning + omega_p, t);
        let sm = kernel(detuning - omega_p, t);
        let sp2 = kernel(detuning + 2.0 * omega_p, t);
        let sm2 = kernel(detuning - 2.0 * omega_p, t);
        let cos_pt = (omega_p * t).cos();
        Self {
            h0: s0 * s0,
            h1: (0.5 * omega_p * t).sin() * s0 * (sp + sm),
            h2: 0.5 * sp * sp + 0.5 * sm * sm - cos_pt * sp * sm,
            h3: s0 * s0 - 0.5 * cos_pt * s0 * (sp2 + sm2),
            detuning,
            omega_p,
            t,
        }
    }

    /// Lineshape multiplying the second-order term.
    pub fn h2_plus_h3(&self) -> f64 {
        self.h2 + self.h3
    }
}

/// `sin^2(D t/2) / (D/2)^2`.
pub fn h0(detuning: f64, t: f64) -> f64 {
    let s = kernel(detuning, t);
    s * s
}

/// `sin(w t/2) s(D) [s(D + w) + s(D - w)]` with `s(x) = sin(x t/2)/(x/2)`.
pub fn h1(detuning: f64, omega_p: f64, t: f64) -> f64 {
    LineshapeSet::eval(detuning, omega_p, t).h1
}

/// `sin^2((D+w)t/2)/((D+w)^2/2) + sin^2((D-w)t/2)/((D-w)^2/2)
///  - cos(w t) sin((D+w)t/2) sin((D-w)t/2) / ((D+w)(D-w)/4)`.
pub fn h2(detuning: f64, omega_p: f64, t: f64) -> f64 {
    LineshapeSet::eval(detuning, omega_p, t).h2
}

/// `h0 - 2 cos(w t) sin(D t/2)/D [sin((D+2w)t/2)/(D+2w) + sin((D-2w)t/2)/(D-2w)]`.
pub fn h3(detuning: f64, omega_p: f64, t: f64) -> f64 {
    LineshapeSet::eval(detuning, omega_p, t).h3
}
