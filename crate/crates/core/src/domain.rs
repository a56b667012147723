//! Model domains: membership, axisymmetric reduction to the (t, rho)
//! half-plane, singular-set descriptors, and distance estimates.
//!
//! Every catalogued domain is a solid of revolution around the t-axis, so the
//! quadrature engine only ever sees its reduced region: for each transverse
//! radius rho the admissible t-values form a short list of open intervals.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::point::PointN;
use crate::profile::CuspProfile;

/// Zero-volume singular feature of a domain, always on the axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SingularSet {
    None,
    /// Single axis point (t0, 0).
    Point { t0: f64 },
    /// Axis segment { t in [lo, hi], rho = 0 }.
    AxisSegment { lo: f64, hi: f64 },
}

/// Membership predicate for a user-supplied axisymmetric domain.
pub struct CustomDomain {
    pub name: String,
    pub rho_max: f64,
    pub t_range: (f64, f64),
    pub contains: Box<dyn Fn(f64, f64) -> bool + Send + Sync>,
}

impl fmt::Debug for CustomDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomDomain({})", self.name)
    }
}

/// Catalogue of model domains.
///
/// The split kinds pair a lower half-cylinder with an upper part pinched by a
/// slit, a cone, a crease, or a cusp horn; `X`/`Y` mark the reference and
/// deformed side of the corresponding map pair.
#[derive(Clone, Debug)]
pub enum DomainKind {
    /// Open unit ball.
    UnitBall,
    /// Open annulus r_in < |z| < r_out.
    Annulus { r_in: f64, r_out: f64 },
    /// Unit ball minus the rotational spike { t >= 0, rho <= u(t) }.
    CuspBall { profile: CuspProfile },
    /// Cylinder (-1,1) x B^{n-1} minus the slit { 0 <= t < 1, rho = 0 }.
    SlitX,
    /// Cone-capped cylinder { rho < 1, -1 < t < rho }.
    SlitY,
    /// Cylinder minus the solid cone { t >= 0, rho <= t/2 }.
    CutX,
    /// Same point set as `SlitX`; target of the cut pair.
    CutY,
    /// Lower half-cylinder { t <= 0 } glued to { 0 < t < rho < 1 }.
    CuspX { profile: CuspProfile },
    /// Lower half-cylinder glued to the cusp collar { u(t) < rho < 1, t > 0 }.
    CuspY { profile: CuspProfile },
    /// Extension hook: arbitrary axisymmetric membership predicate.
    Custom(Arc<CustomDomain>),
}

/// Clipping modifiers applied on top of a base domain kind.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Clip {
    /// Keep only rho > rho_lo.
    pub rho_lo: f64,
    /// Keep only rho < rho_hi (0 = unbounded).
    pub rho_hi: f64,
    /// Keep only t > t_lo / t < t_hi when finite.
    pub t_lo: f64,
    pub t_hi: f64,
    /// Intersect with the axis-centered ball (t - t0)^2 + rho^2 < r^2.
    pub ball: Option<(f64, f64)>,
}

impl Clip {
    pub fn none() -> Self {
        Clip {
            rho_lo: 0.0,
            rho_hi: 0.0,
            t_lo: f64::NEG_INFINITY,
            t_hi: f64::INFINITY,
            ball: None,
        }
    }

    fn is_none(&self) -> bool {
        self.rho_lo == 0.0
            && self.rho_hi == 0.0
            && self.t_lo == f64::NEG_INFINITY
            && self.t_hi == f64::INFINITY
            && self.ball.is_none()
    }
}

/// A model domain of a given dimension, possibly clipped.
#[derive(Clone, Debug)]
pub struct DomainSpec {
    kind: DomainKind,
    n: usize,
    clip: Clip,
}

impl DomainSpec {
    pub fn new(kind: DomainKind, n: usize) -> Result<Self> {
        if !(2..=crate::point::MAX_DIM).contains(&n) {
            return Err(Error::InvalidParameter(format!("unsupported dimension {n}")));
        }
        if let DomainKind::Annulus { r_in, r_out } = kind {
            if !(0.0 < r_in && r_in < r_out) {
                return Err(Error::InvalidParameter(format!(
                    "annulus requires 0 < r_in < r_out, got ({r_in}, {r_out})"
                )));
            }
        }
        Ok(Self { kind, n, clip: Clip::none() })
    }

    pub fn unit_ball(n: usize) -> Self {
        Self::new(DomainKind::UnitBall, n).expect("valid dimension")
    }

    pub fn annulus(r_in: f64, r_out: f64, n: usize) -> Result<Self> {
        Self::new(DomainKind::Annulus { r_in, r_out }, n)
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn clip(&self) -> Clip {
        self.clip
    }

    /// All catalogued kinds are solids of revolution; custom domains are
    /// declared axisymmetric by construction of their predicate.
    pub fn axisymmetric(&self) -> bool {
        true
    }

    pub fn with_rho_above(mut self, rho_lo: f64) -> Self {
        self.clip.rho_lo = self.clip.rho_lo.max(rho_lo);
        self
    }

    pub fn with_rho_below(mut self, rho_hi: f64) -> Self {
        self.clip.rho_hi = if self.clip.rho_hi == 0.0 { rho_hi } else { self.clip.rho_hi.min(rho_hi) };
        self
    }

    pub fn with_t_range(mut self, lo: f64, hi: f64) -> Self {
        self.clip.t_lo = self.clip.t_lo.max(lo);
        self.clip.t_hi = self.clip.t_hi.min(hi);
        self
    }

    /// Intersects with a ball centered on the axis at (t0, 0).
    pub fn with_ball(mut self, t0: f64, r: f64) -> Self {
        self.clip.ball = Some((t0, r));
        self
    }

    /// Canonical identifier, used in reports and the CLI catalogue.
    pub fn id(&self) -> String {
        let base = match &self.kind {
            DomainKind::UnitBall => "ball".to_string(),
            DomainKind::Annulus { r_in, r_out } => format!("annulus:{r_in}:{r_out}"),
            DomainKind::CuspBall { profile } => format!("cusp-ball:alpha={}", profile.alpha()),
            DomainKind::SlitX => "slit-x".to_string(),
            DomainKind::SlitY => "slit-y".to_string(),
            DomainKind::CutX => "cut-x".to_string(),
            DomainKind::CutY => "cut-y".to_string(),
            DomainKind::CuspX { profile } => format!("cusp-x:alpha={}", profile.alpha()),
            DomainKind::CuspY { profile } => format!("cusp-y:alpha={}", profile.alpha()),
            DomainKind::Custom(c) => format!("custom:{}", c.name),
        };
        if self.clip.is_none() {
            base
        } else {
            let mut s = base;
            if self.clip.rho_lo > 0.0 {
                s.push_str(&format!("|rho>{}", self.clip.rho_lo));
            }
            if self.clip.rho_hi > 0.0 {
                s.push_str(&format!("|rho<{}", self.clip.rho_hi));
            }
            if self.clip.t_lo.is_finite() {
                s.push_str(&format!("|t>{}", self.clip.t_lo));
            }
            if self.clip.t_hi.is_finite() {
                s.push_str(&format!("|t<{}", self.clip.t_hi));
            }
            if let Some((t0, r)) = self.clip.ball {
                s.push_str(&format!("|ball({t0},{r})"));
            }
            s
        }
    }

    /// Membership for a reduced point (t, rho), rho >= 0.
    pub fn contains_trho(&self, t: f64, rho: f64) -> bool {
        if rho <= self.clip.rho_lo && !(self.clip.rho_lo == 0.0 && rho == 0.0) {
            return false;
        }
        if self.clip.rho_hi > 0.0 && rho >= self.clip.rho_hi {
            return false;
        }
        if t <= self.clip.t_lo || t >= self.clip.t_hi {
            return false;
        }
        if let Some((t0, r)) = self.clip.ball {
            if (t - t0).powi(2) + rho * rho >= r * r {
                return false;
            }
        }
        match &self.kind {
            DomainKind::UnitBall => t * t + rho * rho < 1.0,
            DomainKind::Annulus { r_in, r_out } => {
                let r2 = t * t + rho * rho;
                r_in * r_in < r2 && r2 < r_out * r_out
            }
            DomainKind::CuspBall { profile } => {
                if t * t + rho * rho >= 1.0 {
                    return false;
                }
                // excluded spike: t >= 0 and rho <= u(t), i.e. t >= u_inv(rho)
                if t < 0.0 {
                    true
                } else if rho <= 0.0 {
                    false
                } else {
                    t < profile.u_inv(rho)
                }
            }
            DomainKind::SlitX | DomainKind::CutY => {
                t > -1.0 && t < 1.0 && rho < 1.0 && !(t >= 0.0 && rho == 0.0)
            }
            DomainKind::SlitY => rho < 1.0 && t > -1.0 && t < rho,
            DomainKind::CutX => t > -1.0 && t < 1.0 && rho < 1.0 && (t < 0.0 || rho > t / 2.0),
            DomainKind::CuspX { .. } => t > -1.0 && rho < 1.0 && (t <= 0.0 || t < rho),
            DomainKind::CuspY { profile } => {
                if !(t > -1.0 && t < 1.0 && rho < 1.0) {
                    false
                } else if t <= 0.0 {
                    true
                } else if rho <= 0.0 {
                    false
                } else {
                    t < profile.u_inv(rho)
                }
            }
            DomainKind::Custom(c) => (c.contains)(t, rho),
        }
    }

    pub fn contains(&self, p: &PointN) -> bool {
        p.dim() == self.n && self.contains_trho(p.t(), p.rho())
    }

    /// Singular-set descriptor of the unclipped base kind.
    pub fn singular_set(&self) -> SingularSet {
        match &self.kind {
            DomainKind::UnitBall | DomainKind::Annulus { .. } => SingularSet::None,
            DomainKind::SlitX | DomainKind::CutY => SingularSet::AxisSegment { lo: 0.0, hi: 1.0 },
            DomainKind::SlitY
            | DomainKind::CutX
            | DomainKind::CuspX { .. }
            | DomainKind::CuspY { .. }
            | DomainKind::CuspBall { .. } => SingularSet::Point { t0: 0.0 },
            DomainKind::Custom(_) => SingularSet::None,
        }
    }

    /// Distance from a reduced point to the singular set, if there is one.
    pub fn singular_distance(&self, t: f64, rho: f64) -> Option<f64> {
        match self.singular_set() {
            SingularSet::None => None,
            SingularSet::Point { t0 } => Some(((t - t0).powi(2) + rho * rho).sqrt()),
            SingularSet::AxisSegment { lo, hi } => {
                let dt = if t < lo {
                    lo - t
                } else if t > hi {
                    t - hi
                } else {
                    0.0
                };
                Some((dt * dt + rho * rho).sqrt())
            }
        }
    }

    /// Conservative lower bound for the distance to the domain boundary.
    pub fn boundary_distance(&self, t: f64, rho: f64) -> f64 {
        let r = (t * t + rho * rho).sqrt();
        let base = match &self.kind {
            DomainKind::UnitBall => 1.0 - r,
            DomainKind::Annulus { r_in, r_out } => (r - r_in).min(r_out - r),
            DomainKind::CuspBall { profile } => {
                let spike = if t < 0.0 {
                    (t * t + rho * rho).sqrt()
                } else {
                    let gap = rho - profile.u(t.min(1.0));
                    gap.max(0.0) / (1.0 + profile.alpha())
                };
                (1.0 - r).min(spike)
            }
            DomainKind::SlitX | DomainKind::CutY => (1.0 - t.abs()).min(1.0 - rho),
            DomainKind::SlitY => {
                let cone = if t >= -rho {
                    (rho - t) / std::f64::consts::SQRT_2
                } else {
                    (t * t + rho * rho).sqrt()
                };
                (1.0 - rho).min(1.0 + t).min(cone)
            }
            DomainKind::CutX => {
                let cone = if t >= 0.0 {
                    (2.0 * rho - t) / 5.0f64.sqrt()
                } else {
                    (t * t + rho * rho).sqrt()
                };
                (1.0 - t.abs()).min(1.0 - rho).min(cone)
            }
            DomainKind::CuspX { .. } => {
                let crease = if t >= -rho {
                    (rho - t) / std::f64::consts::SQRT_2
                } else {
                    (t * t + rho * rho).sqrt()
                };
                (1.0 - rho).min(1.0 + t).min(crease)
            }
            DomainKind::CuspY { profile } => {
                let horn = if t <= 0.0 {
                    (t * t + rho * rho).sqrt()
                } else {
                    (rho - profile.u(t)).max(0.0) / (1.0 + profile.alpha()).hypot(1.0)
                };
                (1.0 - rho).min(1.0 + t).min(1.0 - t).min(horn)
            }
            DomainKind::Custom(c) => {
                let (lo, hi) = c.t_range;
                (t - lo).min(hi - t).min(c.rho_max - rho)
            }
        };
        let mut d = base;
        if self.clip.rho_lo > 0.0 {
            d = d.min(rho - self.clip.rho_lo);
        }
        if self.clip.rho_hi > 0.0 {
            d = d.min(self.clip.rho_hi - rho);
        }
        if self.clip.t_lo.is_finite() {
            d = d.min(t - self.clip.t_lo);
        }
        if self.clip.t_hi.is_finite() {
            d = d.min(self.clip.t_hi - t);
        }
        if let Some((t0, rb)) = self.clip.ball {
            d = d.min(rb - ((t - t0).powi(2) + rho * rho).sqrt());
        }
        d.max(0.0)
    }

    /// Distance used for dyadic stratification: distance to the singular set
    /// when there is one, otherwise to the boundary.
    pub fn stratum_distance(&self, t: f64, rho: f64) -> f64 {
        self.singular_distance(t, rho)
            .unwrap_or_else(|| self.boundary_distance(t, rho))
    }

    /// Transverse radius range (rho_lo, rho_hi) of the reduced region.
    pub fn rho_range(&self) -> (f64, f64) {
        let base_hi = match &self.kind {
            DomainKind::Annulus { r_out, .. } => *r_out,
            DomainKind::Custom(c) => c.rho_max,
            _ => 1.0,
        };
        let mut hi = base_hi;
        if self.clip.rho_hi > 0.0 {
            hi = hi.min(self.clip.rho_hi);
        }
        if let Some((_, r)) = self.clip.ball {
            hi = hi.min(r);
        }
        (self.clip.rho_lo, hi)
    }

    /// Open t-intervals of the section at transverse radius rho > 0.
    pub fn sections(&self, rho: f64) -> Vec<(f64, f64)> {
        let (lo, hi) = self.rho_range();
        if rho <= lo || rho >= hi {
            return Vec::new();
        }
        let mut secs: Vec<(f64, f64)> = match &self.kind {
            DomainKind::UnitBall => {
                let h = (1.0 - rho * rho).sqrt();
                vec![(-h, h)]
            }
            DomainKind::Annulus { r_in, r_out } => {
                let ho = (r_out * r_out - rho * rho).max(0.0).sqrt();
                if rho < *r_in {
                    let hi_in = (r_in * r_in - rho * rho).sqrt();
                    vec![(-ho, -hi_in), (hi_in, ho)]
                } else {
                    vec![(-ho, ho)]
                }
            }
            DomainKind::CuspBall { profile } => {
                let h = (1.0 - rho * rho).sqrt();
                vec![(-h, profile.u_inv(rho).min(h))]
            }
            DomainKind::SlitX | DomainKind::CutY => vec![(-1.0, 1.0)],
            DomainKind::SlitY => vec![(-1.0, rho)],
            DomainKind::CutX => vec![(-1.0, (2.0 * rho).min(1.0))],
            DomainKind::CuspX { .. } => vec![(-1.0, rho)],
            DomainKind::CuspY { profile } => vec![(-1.0, profile.u_inv(rho))],
            DomainKind::Custom(c) => custom_sections(c, rho),
        };
        // apply t-window and ball clips
        let mut t_lo = self.clip.t_lo;
        let mut t_hi = self.clip.t_hi;
        if let Some((t0, r)) = self.clip.ball {
            let h2 = r * r - rho * rho;
            if h2 <= 0.0 {
                return Vec::new();
            }
            let h = h2.sqrt();
            t_lo = t_lo.max(t0 - h);
            t_hi = t_hi.min(t0 + h);
        }
        if t_lo.is_finite() || t_hi.is_finite() {
            secs = secs
                .into_iter()
                .filter_map(|(a, b)| {
                    let a = a.max(t_lo);
                    let b = b.min(t_hi);
                    if a < b {
                        Some((a, b))
                    } else {
                        None
                    }
                })
                .collect();
        }
        secs.retain(|(a, b)| a < b);
        secs
    }

    /// t-values where integrands may switch formula branch.
    pub fn t_breaks(&self) -> &'static [f64] {
        match self.kind {
            DomainKind::UnitBall | DomainKind::Annulus { .. } => &[],
            _ => &[0.0],
        }
    }

    /// Bounding box (t_lo, t_hi, rho_max) for rejection sampling.
    pub fn sample_box(&self) -> (f64, f64, f64) {
        let (_, rho_hi) = self.rho_range();
        match &self.kind {
            DomainKind::UnitBall => (-1.0, 1.0, rho_hi),
            DomainKind::Annulus { r_out, .. } => (-r_out, *r_out, rho_hi),
            DomainKind::Custom(c) => (c.t_range.0, c.t_range.1, rho_hi),
            _ => (-1.0, 1.0, rho_hi),
        }
    }
}

/// Scan-and-bisect section finder for custom membership predicates.
fn custom_sections(c: &CustomDomain, rho: f64) -> Vec<(f64, f64)> {
    const SCAN: usize = 1024;
    let (lo, hi) = c.t_range;
    let step = (hi - lo) / SCAN as f64;
    let mut secs = Vec::new();
    let mut inside_from: Option<f64> = None;
    let mut prev_t = lo;
    let mut prev_in = false;
    for i in 0..=SCAN {
        let t = lo + step * i as f64;
        let now_in = (c.contains)(t, rho);
        if now_in != prev_in && i > 0 {
            let edge = bisect_edge(c, rho, prev_t, t, prev_in);
            if now_in {
                inside_from = Some(edge);
            } else if let Some(a) = inside_from.take() {
                secs.push((a, edge));
            }
        } else if i == 0 && now_in {
            inside_from = Some(t);
        }
        prev_t = t;
        prev_in = now_in;
    }
    if let Some(a) = inside_from {
        secs.push((a, hi));
    }
    secs
}

fn bisect_edge(c: &CustomDomain, rho: f64, mut a: f64, mut b: f64, a_in: bool) -> f64 {
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if (c.contains)(m, rho) == a_in {
            a = m;
        } else {
            b = m;
        }
        if b - a < 1e-14 {
            break;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3(t: f64, x0: f64, x1: f64) -> PointN {
        PointN::new(t, &[x0, x1]).unwrap()
    }

    #[test]
    fn ball_and_annulus_membership() {
        let ball = DomainSpec::unit_ball(3);
        assert!(ball.contains(&p3(0.0, 0.5, 0.0)));
        assert!(!ball.contains(&p3(1.0, 0.5, 0.0)));
        let ann = DomainSpec::annulus(0.5, 1.0, 3).unwrap();
        assert!(ann.contains(&p3(0.0, 0.7, 0.0)));
        assert!(!ann.contains(&p3(0.0, 0.3, 0.0)));
    }

    #[test]
    fn slit_membership_splits_on_axis() {
        let x = DomainSpec::new(DomainKind::SlitX, 3).unwrap();
        assert!(x.contains(&p3(-0.5, 0.0, 0.0)), "axis allowed for t < 0");
        assert!(!x.contains(&p3(0.5, 0.0, 0.0)), "slit removed for t >= 0");
        assert!(x.contains(&p3(0.5, 0.3, 0.0)));
        let y = DomainSpec::new(DomainKind::SlitY, 3).unwrap();
        assert!(y.contains(&p3(0.2, 0.3, 0.0)));
        assert!(!y.contains(&p3(0.3, 0.2, 0.0)), "needs t < rho");
    }

    #[test]
    fn cut_and_cusp_membership() {
        let cx = DomainSpec::new(DomainKind::CutX, 3).unwrap();
        assert!(cx.contains(&p3(0.5, 0.3, 0.0)));
        assert!(!cx.contains(&p3(0.8, 0.3, 0.0)), "inside removed cone");
        let profile = CuspProfile::new(2.0).unwrap();
        let cy = DomainSpec::new(DomainKind::CuspY { profile }, 3).unwrap();
        // u(0.5) = e^-3 ~ 0.0498: rho = 0.1 is outside the horn, 0.01 inside
        assert!(cy.contains(&p3(0.5, 0.1, 0.0)));
        assert!(!cy.contains(&p3(0.5, 0.01, 0.0)));
    }

    #[test]
    fn sections_tile_expected_intervals() {
        let ann = DomainSpec::annulus(0.5, 1.0, 3).unwrap();
        let two = ann.sections(0.3);
        assert_eq!(two.len(), 2);
        let one = ann.sections(0.7);
        assert_eq!(one.len(), 1);
        let y = DomainSpec::new(DomainKind::SlitY, 3).unwrap();
        assert_eq!(y.sections(0.25), vec![(-1.0, 0.25)]);
        let clipped = y.with_t_range(0.0, f64::INFINITY);
        assert_eq!(clipped.sections(0.25), vec![(0.0, 0.25)]);
    }

    #[test]
    fn distances_are_conservative() {
        let y = DomainSpec::new(DomainKind::SlitY, 3).unwrap();
        let d = y.boundary_distance(0.1, 0.3);
        assert!(d > 0.0 && d <= (0.3 - 0.1) / std::f64::consts::SQRT_2 + 1e-15);
        let x = DomainSpec::new(DomainKind::SlitX, 3).unwrap();
        assert_eq!(x.singular_distance(0.5, 0.25), Some(0.25));
        assert!((x.singular_distance(-0.3, 0.4).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ball_clip_restricts_sections() {
        let cx = DomainSpec::new(
            DomainKind::CuspX { profile: CuspProfile::new(2.0).unwrap() },
            3,
        )
        .unwrap()
        .with_ball(0.0, 0.125);
        let secs = cx.sections(0.1);
        assert_eq!(secs.len(), 1);
        let (a, b) = secs[0];
        assert!(a >= -0.125 && b <= 0.1 + 1e-15);
        assert!(cx.sections(0.2).is_empty());
    }
}
