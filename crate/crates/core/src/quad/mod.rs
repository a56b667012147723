//! Axisymmetric quadrature over the model domains.
//!
//! Integrals of axisymmetric integrands reduce to the (t, rho) half-plane:
//! the n-dimensional integral of g equals
//! `omega_{n-2} * iint g(t, rho) rho^(n-2) dt drho` over the reduced region.
//! This module supplies that reduction, a sphere-restriction integral, a
//! change-of-variables residual check, and a coarse full-dimensional
//! subdivision fallback used only for cross-validation.

pub mod classify;
mod gauss;
mod shell;

pub use classify::{classify, FitModel, TailFit, BETA_CONV, BETA_DIV};
pub use gauss::{adaptive, compensated_sum, gauss_legendre, OnDepth, Quadrature};
pub use shell::{energy, energy_of, EnergyResult, QuadOpts, ShellLedger, ShellRow, Verdict};

use crate::domain::{DomainKind, DomainSpec};
use crate::error::{Error, Result};
use crate::mapzoo::MapSpec;
use crate::point::PointN;

/// Surface area of the unit m-sphere, m = n - 2 for the transverse factor.
pub fn unit_sphere_area(m: usize) -> f64 {
    use std::f64::consts::PI;
    match m {
        0 => 2.0,
        1 => 2.0 * PI,
        2 => 4.0 * PI,
        3 => 2.0 * PI * PI,
        4 => 8.0 * PI * PI / 3.0,
        5 => PI.powi(3),
        6 => 16.0 * PI.powi(3) / 15.0,
        _ => unreachable!("dimension cap is {}", crate::point::MAX_DIM),
    }
}

/// rho-values where the section structure of a region has kinks.
fn rho_breaks(domain: &DomainSpec) -> Vec<f64> {
    match domain.kind() {
        DomainKind::Annulus { r_in, .. } => vec![*r_in],
        _ => Vec::new(),
    }
}

/// Integrates `g(t, rho)` (times the axisymmetric weight and transverse
/// sphere area) over the rho-slice (rho_lo, rho_hi) of the reduced region.
pub(crate) fn integrate_slice(
    g: &dyn Fn(f64, f64) -> Result<f64>,
    domain: &DomainSpec,
    rho_lo: f64,
    rho_hi: f64,
    rel_tol: f64,
    max_depth: u32,
    on_depth: OnDepth,
) -> Result<Quadrature> {
    let n = domain.dim();
    let omega = unit_sphere_area(n - 2);
    let weight_pow = (n - 2) as i32;
    let breaks = domain.t_breaks();
    let inner_tol = rel_tol * 0.3;

    let mut panels: u64 = 0;
    let mut capped = false;
    let mut outer = |rho: f64| -> Result<f64> {
        let mut acc = 0.0;
        for (a, b) in domain.sections(rho) {
            // split the section at branch interfaces so panels stay smooth
            let mut cuts = vec![a];
            for &c in breaks {
                if c > a && c < b {
                    cuts.push(c);
                }
            }
            cuts.push(b);
            for win in cuts.windows(2) {
                let mut inner = |t: f64| {
                    let v = g(t, rho)?;
                    if !v.is_finite() {
                        return Err(Error::NonFiniteIntegrand { t, rho });
                    }
                    Ok(v)
                };
                let q = adaptive(&mut inner, win[0], win[1], inner_tol, 0.0, max_depth, on_depth)?;
                panels += q.panels;
                capped |= q.depth_capped;
                acc += q.value;
            }
        }
        Ok(acc * rho.powi(weight_pow))
    };

    let mut cuts = vec![rho_lo];
    for c in rho_breaks(domain) {
        if c > rho_lo && c < rho_hi {
            cuts.push(c);
        }
    }
    cuts.push(rho_hi);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut total = Quadrature::default();
    for win in cuts.windows(2) {
        let q = adaptive(&mut outer, win[0], win[1], rel_tol * 0.7, 0.0, max_depth, on_depth)?;
        total.value += q.value;
        total.est_error += q.est_error;
        total.depth_capped |= q.depth_capped;
    }
    total.value *= omega;
    total.est_error = omega * (total.est_error + inner_tol * total.value.abs());
    total.panels = panels;
    total.depth_capped |= capped;
    Ok(total)
}

/// Adaptive axisymmetric integral of `g` over a reduced region.
///
/// The integrand must be finite on the open region; non-integrable endpoint
/// behavior surfaces as `MaxDepthExceeded`.
pub fn integrate_axisym(
    g: impl Fn(f64, f64) -> f64,
    domain: &DomainSpec,
    tol: f64,
) -> Result<(f64, f64)> {
    let (lo, hi) = domain.rho_range();
    if !(lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "region {} has empty rho-range",
            domain.id()
        )));
    }
    let wrapped = |t: f64, rho: f64| Ok(g(t, rho));
    let q = integrate_slice(&wrapped, domain, lo, hi, tol, 24, OnDepth::Fail)?;
    Ok((q.value, q.est_error))
}

/// Scalar fields on the codomain used by the change-of-variables check.
#[derive(Clone, Copy, Debug)]
pub enum TestFn {
    One,
    /// eta(s, y) = |y|
    TransverseNorm,
    /// eta(z) = |z|^2
    NormSq,
}

impl TestFn {
    fn eval(&self, t: f64, rho: f64) -> f64 {
        match self {
            TestFn::One => 1.0,
            TestFn::TransverseNorm => rho,
            TestFn::NormSq => t * t + rho * rho,
        }
    }
}

/// Relative residual of the change-of-variables identity
/// `int_A eta(h(x)) |J_h| dx = int_{h(A)} eta(y) dy`,
/// both sides through the same quadrature engine.
pub fn change_of_variables_check(
    map: &MapSpec,
    region: &DomainSpec,
    test_fn: TestFn,
    tol: f64,
) -> Result<f64> {
    let image = map.push_domain(region).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "no catalogued image region for {} over {}",
            map.name(),
            region.id()
        ))
    })?;
    let lhs = integrate_axisym(
        |t, rho| {
            let (a, b) = map.image_trho(t, rho);
            let j = map.rep_matrix(t, rho).det();
            test_fn.eval(a, b) * j.abs()
        },
        region,
        tol,
    )?;
    let rhs = integrate_axisym(|t, rho| test_fn.eval(t, rho), &image, tol)?;
    Ok((lhs.0 - rhs.0).abs() / rhs.0.abs().max(1e-12))
}

/// Surface integral of |Dmap|^p over the sphere |z| = radius intersected
/// with the domain, by latitude quadrature with the axisymmetric weight.
pub fn sphere_integral(map: &MapSpec, domain: &DomainSpec, radius: f64, p: f64) -> Result<f64> {
    use std::f64::consts::PI;
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter("sphere radius must be positive".into()));
    }
    let n = domain.dim();
    let inside = |theta: f64| domain.contains_trho(radius * theta.cos(), radius * theta.sin());

    // locate the admissible latitude intervals
    const SCAN: usize = 4096;
    let step = PI / SCAN as f64;
    let mut edges: Vec<f64> = vec![];
    let mut open = inside(0.0);
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut start = if open { Some(0.0) } else { None };
    for i in 1..=SCAN {
        let th = step * i as f64;
        let now = inside(th);
        if now != open {
            let mut a = th - step;
            let mut b = th;
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if inside(m) == open {
                    a = m;
                } else {
                    b = m;
                }
            }
            let edge = 0.5 * (a + b);
            edges.push(edge);
            if now {
                start = Some(edge);
            } else if let Some(s) = start.take() {
                intervals.push((s, edge));
            }
            open = now;
        }
    }
    if let Some(s) = start {
        intervals.push((s, PI));
    }

    let sin_pow = (n - 2) as i32;
    let mut integrand = |theta: f64| -> Result<f64> {
        let (t, rho) = (radius * theta.cos(), radius * theta.sin());
        let v = map.rep_matrix(t, rho).op_norm().powf(p) * theta.sin().powi(sin_pow);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteIntegrand { t, rho })
        }
    };
    let mut acc = 0.0;
    for (a, b) in intervals {
        // split at the equator where split formulas change branch
        let mid = PI / 2.0;
        let pieces: &[(f64, f64)] =
            if a < mid && mid < b { &[(a, mid), (mid, b)] } else { &[(a, b)] };
        for &(lo, hi) in pieces {
            let q = adaptive(&mut integrand, lo, hi, 1e-9, 0.0, 24, OnDepth::Clamp)?;
            acc += q.value;
        }
    }
    Ok(unit_sphere_area(n - 2) * radius.powi((n - 1) as i32) * acc)
}

/// Coarse full-dimensional subdivision integral over the bounding box,
/// using membership sampling on boundary cells. Validation only.
pub fn integrate_fallback_nd(
    g: impl Fn(&PointN) -> f64,
    domain: &DomainSpec,
    cells_per_axis: usize,
) -> (f64, f64) {
    let n = domain.dim();
    let (t_lo, t_hi, rho_max) = domain.sample_box();
    let mut lo = vec![-rho_max; n];
    let mut hi = vec![rho_max; n];
    lo[0] = t_lo;
    hi[0] = t_hi;
    let m = cells_per_axis;
    let h: Vec<f64> = (0..n).map(|i| (hi[i] - lo[i]) / m as f64).collect();
    let cell_vol: f64 = h.iter().product();

    let contains = |c: &[f64]| -> bool {
        let rho = c[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
        domain.contains_trho(c[0], rho)
    };

    let mut idx = vec![0usize; n];
    let mut value = 0.0;
    let mut err = 0.0;
    let sub = 3usize; // membership sub-sampling per axis on boundary cells
    loop {
        let corner: Vec<f64> = (0..n).map(|i| lo[i] + h[i] * idx[i] as f64).collect();
        let center: Vec<f64> = (0..n).map(|i| corner[i] + 0.5 * h[i]).collect();

        // classify by corners + center
        let mut inside_cnt = 0;
        let mut total_cnt = 0;
        let mut cidx = vec![0usize; n];
        loop {
            let pt: Vec<f64> = (0..n).map(|i| corner[i] + h[i] * cidx[i] as f64).collect();
            total_cnt += 1;
            if contains(&pt) {
                inside_cnt += 1;
            }
            if !advance(&mut cidx, 2) {
                break;
            }
        }
        if contains(&center) {
            inside_cnt += 1;
        }
        total_cnt += 1;

        if inside_cnt == total_cnt {
            // fully inside: midpoint value
            let p = PointN::from_coords(&center).expect("dim ok");
            value += g(&p) * cell_vol;
        } else if inside_cnt > 0 {
            // boundary cell: sub-sample membership fraction
            let mut sidx = vec![0usize; n];
            let mut hits = 0usize;
            let mut acc = 0.0;
            let mut cnt = 0usize;
            loop {
                let pt: Vec<f64> = (0..n)
                    .map(|i| corner[i] + h[i] * (sidx[i] as f64 + 0.5) / sub as f64)
                    .collect();
                cnt += 1;
                if contains(&pt) {
                    hits += 1;
                    acc += g(&PointN::from_coords(&pt).expect("dim ok"));
                }
                if !advance(&mut sidx, sub) {
                    break;
                }
            }
            if hits > 0 {
                value += acc / cnt as f64 * cell_vol;
                err += cell_vol * (acc / hits as f64).abs();
            }
        }
        if !advance(&mut idx, m) {
            break;
        }
    }
    (value, err)
}

fn advance(idx: &mut [usize], base: usize) -> bool {
    for v in idx.iter_mut() {
        *v += 1;
        if *v < base {
            return true;
        }
        *v = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ball_volume_n3() {
        let ball = DomainSpec::unit_ball(3);
        let (v, _) = integrate_axisym(|_, _| 1.0, &ball, 1e-9).unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-6 * v, "got {v}");
    }

    #[test]
    fn ball_volume_n2_and_n4() {
        let b2 = DomainSpec::unit_ball(2);
        let (v2, _) = integrate_axisym(|_, _| 1.0, &b2, 1e-9).unwrap();
        assert!((v2 - PI).abs() < 1e-7);
        let b4 = DomainSpec::unit_ball(4);
        let (v4, _) = integrate_axisym(|_, _| 1.0, &b4, 1e-9).unwrap();
        assert!((v4 - PI * PI / 2.0).abs() < 1e-6 * v4);
    }

    #[test]
    fn clipped_log_weight_matches_closed_form() {
        // t^2 / rho^2 over the t > 0 half of the slit cylinder, rho > rho_min:
        // 2*pi * int_rho^1 rho^{-1} drho * int_0^1 t^2 dt = (2 pi/3) ln(1/rho_min)
        for rho_min in [1e-2, 1e-4] {
            let region = DomainSpec::new(DomainKind::CutY, 3)
                .unwrap()
                .with_t_range(0.0, f64::INFINITY)
                .with_rho_above(rho_min);
            let (v, _) =
                integrate_axisym(|t, rho| t * t / (rho * rho), &region, 1e-9).unwrap();
            let expect = 2.0 * PI / 3.0 * (1.0 / rho_min).ln();
            assert!((v - expect).abs() < 1e-6 * expect, "rho_min={rho_min}: {v} vs {expect}");
        }
    }

    #[test]
    fn fallback_matches_axisym_volume() {
        let ball = DomainSpec::unit_ball(3);
        let (v, err) = integrate_fallback_nd(|_| 1.0, &ball, 40);
        assert!((v - 4.0 * PI / 3.0).abs() < 0.05, "v={v} err={err}");
    }
}
