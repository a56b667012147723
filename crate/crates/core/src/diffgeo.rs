//! Pointwise differential-geometric kernel: deformation gradient, Jacobian,
//! co-differential, operator norm, and the inner/outer distortion quotients.

use crate::error::{Error, Result};
use crate::mapzoo::{fd_differential, MapSpec};
use crate::matrix::MatN;
use crate::point::PointN;

/// Jacobians closer to zero than this are treated as degenerate when forming
/// distortion quotients; more negative values are an orientation violation.
pub const ORIENTATION_TOL: f64 = 1e-9;

/// Deformation gradient at p: analytic when the branch is smooth there,
/// otherwise validated central differences.
pub fn differential(map: &MapSpec, p: &PointN) -> Result<MatN> {
    match map.analytic_diff(p) {
        Ok(m) => Ok(m),
        Err(Error::DomainViolation(_)) => fd_differential(map, p),
        Err(e) => Err(e),
    }
}

/// Pointwise record of a map's first-order data and distortion quotients.
#[derive(Clone, Copy, Debug)]
pub struct DistortionSample {
    pub point: PointN,
    pub d: MatN,
    pub j: f64,
    pub adj: MatN,
    pub opnorm: f64,
    pub k_o: f64,
    pub k_i: f64,
}

impl DistortionSample {
    /// Flat record for CSV emission: coordinates, J, |D|, |adj D|, K_O, K_I.
    pub fn csv_row(&self) -> Vec<f64> {
        let mut row: Vec<f64> = self.point.coords().to_vec();
        row.extend([self.j, self.opnorm, self.adj.op_norm(), self.k_o, self.k_i]);
        row
    }
}

/// Distortion quotients of a deformation gradient.
///
/// For J > 0 these are K_O = |D|^n / J and K_I = |adj D|^n / J^(n-1). The
/// degenerate conventions keep the kernel total: J = 0 with a vanishing
/// co-differential (resp. gradient) gives 1, otherwise +infinity.
pub fn distortion_from_matrix(d: &MatN) -> Result<(f64, MatN, f64, f64, f64)> {
    d.require_finite()?;
    let n = d.dim() as i32;
    let j = d.det();
    let adj = d.adjugate();
    let opnorm = d.op_norm();
    if j > 0.0 {
        let k_o = opnorm.powi(n) / j;
        let k_i = adj.op_norm().powi(n) / j.powi(n - 1);
        Ok((j, adj, opnorm, k_o.max(1.0), k_i.max(1.0)))
    } else {
        let k_o = if opnorm == 0.0 { 1.0 } else { f64::INFINITY };
        let k_i = if adj.max_abs() == 0.0 { 1.0 } else { f64::INFINITY };
        Ok((j, adj, opnorm, k_o, k_i))
    }
}

/// Full distortion record at an interior point of the map's domain.
pub fn distortion_sample(map: &MapSpec, p: &PointN) -> Result<DistortionSample> {
    let d = differential(map, p)?;
    let (j, adj, opnorm, k_o, k_i) = distortion_from_matrix(&d)?;
    if j < -ORIENTATION_TOL {
        return Err(Error::OrientationViolation { t: p.t(), rho: p.rho(), j });
    }
    Ok(DistortionSample { point: *p, d, j, adj, opnorm, k_o, k_i })
}

/// Distortion record on the axisymmetric quadrature path, evaluated at the
/// representative point (t, rho, 0, ...). Assumes (t, rho) interior.
pub fn distortion_at(map: &MapSpec, t: f64, rho: f64) -> Result<(f64, f64, f64, f64)> {
    let d = map.rep_matrix(t, rho);
    let (j, _adj, opnorm, k_o, k_i) = distortion_from_matrix(&d)?;
    if j < -ORIENTATION_TOL {
        return Err(Error::OrientationViolation { t, rho, j });
    }
    Ok((j, opnorm, k_o, k_i))
}

/// Residual of the chain-rule identities for an inverse pair at p:
/// the Frobenius gap of Df(h(p)) Dh(p) = I and the relative gap of
/// K_I(p, h) = |Df(h(p))|^n J_h(p).
pub fn pointwise_identity(h: &MapSpec, f: &MapSpec, p: &PointN) -> Result<f64> {
    let n = h.dim() as i32;
    let s = distortion_sample(h, p)?;
    let q = h.eval(p)?;
    let df = differential(f, &q)?;
    let chain = df.mul(&s.d).sub(&MatN::identity(h.dim())).frobenius();
    let ki_alt = df.op_norm().powi(n) * s.j;
    let ki_gap = (s.k_i - ki_alt).abs() / s.k_i.max(1e-300);
    Ok(chain.max(ki_gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapzoo::{make_identity, make_radial_map, make_slit_pair};

    fn p3(t: f64, x0: f64, x1: f64) -> PointN {
        PointN::new(t, &[x0, x1]).unwrap()
    }

    #[test]
    fn identity_sample() {
        let id = make_identity(3).unwrap();
        let s = distortion_sample(&id, &p3(0.1, 0.2, 0.3)).unwrap();
        assert_eq!(s.j, 1.0);
        assert_eq!(s.k_o, 1.0);
        assert_eq!(s.k_i, 1.0);
    }

    #[test]
    fn radial_distortions_are_constant() {
        // singular values {2s, s, s}: K_O = 4, K_I = 2 at every point
        let h = make_radial_map(2.0, 3).unwrap();
        for p in [p3(0.0, 0.5, 0.0), p3(0.3, 0.2, -0.4), p3(-0.6, 0.1, 0.1)] {
            let s = distortion_sample(&h, &p).unwrap();
            assert!((s.k_i - 2.0).abs() < 1e-9, "K_I = {}", s.k_i);
            assert!((s.k_o - 4.0).abs() < 1e-9, "K_O = {}", s.k_o);
            let r = p.norm();
            assert!((s.opnorm - 2.0 * r).abs() < 1e-10);
            assert!((s.adj.op_norm() - 2.0 * r * r).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_conventions() {
        // J = 0 with adj = 0: K_I = 1; J = 0 with adj != 0: infinity
        let rank1 = MatN::from_fn(3, |i, j| ((i + 1) * (j + 1)) as f64);
        let (_, _, _, k_o, k_i) = distortion_from_matrix(&rank1).unwrap();
        assert!(k_o.is_infinite());
        assert_eq!(k_i, 1.0);
        let rank2 = MatN::from_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]);
        let (_, _, _, _, k_i2) = distortion_from_matrix(&rank2).unwrap();
        assert!(k_i2.is_infinite());
        let zero = MatN::zeros(3);
        let (_, _, _, k_o3, k_i3) = distortion_from_matrix(&zero).unwrap();
        assert_eq!((k_o3, k_i3), (1.0, 1.0));
    }

    #[test]
    fn orientation_violation_detected() {
        let flip = MatN::diag(&[-1.0, 1.0, 1.0]);
        let (j, ..) = distortion_from_matrix(&flip).unwrap();
        assert!(j < 0.0);
        let h = make_radial_map(2.0, 3).unwrap();
        assert!(distortion_sample(&h, &p3(0.0, 0.5, 0.0)).is_ok());
    }

    #[test]
    fn chain_rule_residuals() {
        let id = make_identity(3).unwrap();
        assert!(pointwise_identity(&id, &id, &p3(0.1, 0.4, 0.2)).unwrap() < 1e-14);
        let h = make_radial_map(2.0, 3).unwrap();
        let f = h.inverse().unwrap();
        let r = pointwise_identity(&h, &f, &p3(0.2, 0.5, -0.1)).unwrap();
        assert!(r < 1e-9, "analytic residual {r}");
        let (sh, sf) = make_slit_pair(3).unwrap();
        let r2 = pointwise_identity(&sh, &sf, &p3(0.5, 0.3, 0.0)).unwrap();
        assert!(r2 < 1e-9, "slit residual {r2}");
    }
}
