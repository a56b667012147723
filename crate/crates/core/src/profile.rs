//! Exponential cusp profile u(t) = e * exp(-t^-alpha) and its inverse.

use crate::error::{Error, Result};

/// Cusp sharpness profile, normalized so that `u(1) = 1`.
///
/// `u` is strictly increasing on (0, 1] with u(t) -> 0 and u'(t) -> 0 as
/// t -> 0+, so the surface of revolution rho = u(t) closes into a genuine
/// cusp at the origin. The inverse is `u_inv(eta) = log(e/eta)^(-1/alpha)`.
///
/// Direct evaluation of `u` underflows f64 once t^-alpha exceeds ~745, so
/// membership checks and round trips should go through the log-space forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CuspProfile {
    alpha: f64,
}

impl CuspProfile {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "cusp profile requires alpha > 0, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// u(t) = e * exp(-t^-alpha) for t in (0, 1]; u(0) = 0.
    pub fn u(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        (self.log_u(t)).exp()
    }

    /// ln u(t) = 1 - t^-alpha, finite for all t > 0.
    pub fn log_u(&self, t: f64) -> f64 {
        1.0 - t.powf(-self.alpha)
    }

    /// u'(t) = u(t) * alpha * t^-(alpha+1).
    pub fn u_prime(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.u(t) * self.alpha * t.powf(-self.alpha - 1.0)
    }

    /// u^-1(eta) = log(e/eta)^(-1/alpha) for eta in (0, 1].
    pub fn u_inv(&self, eta: f64) -> f64 {
        debug_assert!(eta > 0.0);
        self.u_inv_from_w(w_of_rho(eta))
    }

    /// Inverse through w = log(e/eta) = 1 - ln(eta).
    pub fn u_inv_from_w(&self, w: f64) -> f64 {
        w.powf(-1.0 / self.alpha)
    }

    /// d/d eta of u^-1 at eta: (1/(alpha*eta)) * w^(-1/alpha - 1).
    pub fn u_inv_prime(&self, eta: f64) -> f64 {
        let w = w_of_rho(eta);
        w.powf(-1.0 / self.alpha - 1.0) / (self.alpha * eta)
    }
}

/// The substitution variable w = log(e / rho) = 1 - ln(rho).
pub fn w_of_rho(rho: f64) -> f64 {
    1.0 - rho.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_and_inverse() {
        let pr = CuspProfile::new(2.0).unwrap();
        assert!((pr.u(1.0) - 1.0).abs() < 1e-15);
        assert_eq!(pr.u_inv(1.0), 1.0);
        // u_inv(u(t)) = t through the log form, t down to 1e-3
        let mut t = 1.0;
        while t >= 1e-3 {
            let w = 1.0 - pr.log_u(t); // log(e / u(t)) without underflow
            let back = pr.u_inv_from_w(w);
            assert!((back - t).abs() <= 1e-12 * t, "t={t} back={back}");
            t *= 0.7;
        }
    }

    #[test]
    fn strictly_increasing_with_flat_start() {
        let pr = CuspProfile::new(1.5).unwrap();
        let mut prev = 0.0;
        let mut prev_slope = 0.0;
        // finite differences on a log grid, kept above the f64 underflow of
        // u itself (t^-alpha < ~700); u' increasing toward 0+ where u' -> 0
        for j in (1..=6).rev() {
            let t = 2.0f64.powi(-j);
            let h = t * 1e-4;
            let slope = (pr.u(t + h) - pr.u(t - h)) / (2.0 * h);
            assert!(pr.u(t) > prev);
            assert!(slope >= prev_slope);
            prev = pr.u(t);
            prev_slope = slope;
        }
        // the closed form drives u' to 0 long before t does
        assert!(pr.u_prime(0.05) > 0.0);
        assert!(pr.u_prime(0.05) < pr.u_prime(0.1));
        assert!(pr.u_prime(0.05) < 1e-30);
    }

    #[test]
    fn spot_value() {
        // eta = e * exp(-4) has log(e/eta) = 4, so u_inv = 4^(-1/2) = 1/2
        let pr = CuspProfile::new(2.0).unwrap();
        let eta = (1.0f64 - 4.0).exp();
        assert!((pr.u_inv(eta) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn rejects_nonpositive_alpha() {
        assert!(CuspProfile::new(0.0).is_err());
        assert!(CuspProfile::new(-1.0).is_err());
    }
}
