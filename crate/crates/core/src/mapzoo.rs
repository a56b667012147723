//! Catalogue of explicit homeomorphisms between the model domains.
//!
//! Every map here is axisymmetric in split coordinates: it sends (t, x) to
//! (a(t, rho), b(t, rho) * x/rho) with rho = |x|, acting as the identity on
//! the lower half of its split domain. The radial stretch acts on the whole
//! ball. Evaluators, analytic differentials, known inverses, and the gradient
//! envelopes used by the energy experiments all live on [`MapSpec`].

use crate::domain::{DomainKind, DomainSpec};
use crate::error::{Error, Result};
use crate::matrix::MatN;
use crate::point::PointN;
use crate::profile::{w_of_rho, CuspProfile};

/// Which side of the gluing interface t = 0 a formula branch applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Minus,
    Plus,
}

/// First-order data of an axisymmetric map at a reduced point (t, rho):
/// the values (a, b) and the partials that populate the differential.
#[derive(Clone, Copy, Debug)]
pub struct AxialJet {
    pub a: f64,
    pub b: f64,
    pub a_t: f64,
    pub a_rho: f64,
    pub b_t: f64,
    pub b_rho: f64,
    /// Tangential stretch b/rho, the remaining n-2 singular values.
    pub b_over_rho: f64,
}

impl AxialJet {
    fn identity(t: f64, rho: f64) -> Self {
        AxialJet { a: t, b: rho, a_t: 1.0, a_rho: 0.0, b_t: 0.0, b_rho: 1.0, b_over_rho: 1.0 }
    }
}

/// The catalogued map families.
#[derive(Clone, Debug)]
pub enum MapBody {
    Identity,
    /// z -> |z|^(a-1) z on the unit ball.
    Radial { a: f64 },
    /// (t, x) -> (t |x|, x) for t > 0, identity below; closes the slit.
    SlitH,
    /// (s, y) -> (s/|y|, y) for s >= 0; reopens the slit.
    SlitF,
    /// (t, x) -> (t, [(2|x| - t)/(2 - t)] x/|x|) for t >= 0; squeezes the cone to a slit.
    CutH,
    /// (s, y) -> (s, [((2 - s)|y| + s)/2] y/|y|) for s >= 0.
    CutF,
    /// (t, x) -> ((u^-1(|x|)/|x|) t, x) for t > 0; carves the cusp collar.
    CuspH { profile: CuspProfile },
    /// (s, y) -> ((|y|/u^-1(|y|)) s, y) for s > 0; Lipschitz inverse.
    CuspF { profile: CuspProfile },
}

/// A named closed-form map with domain and codomain descriptors.
#[derive(Clone, Debug)]
pub struct MapSpec {
    name: String,
    n: usize,
    body: MapBody,
    domain: DomainSpec,
    codomain: DomainSpec,
}

pub fn make_identity(n: usize) -> Result<MapSpec> {
    Ok(MapSpec {
        name: "identity".into(),
        n,
        body: MapBody::Identity,
        domain: DomainSpec::new(DomainKind::UnitBall, n)?,
        codomain: DomainSpec::new(DomainKind::UnitBall, n)?,
    })
}

/// Radial stretching h(z) = |z|^(a-1) z on the unit ball; inverse exponent 1/a.
pub fn make_radial_map(a: f64, n: usize) -> Result<MapSpec> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "radial map requires a > 0, got {a}"
        )));
    }
    Ok(MapSpec {
        name: format!("radial:a={a}"),
        n,
        body: MapBody::Radial { a },
        domain: DomainSpec::new(DomainKind::UnitBall, n)?,
        codomain: DomainSpec::new(DomainKind::UnitBall, n)?,
    })
}

/// The slit pair: h maps the slit cylinder onto the cone-capped cylinder,
/// f is its exact inverse with |Df| <= C/|y|.
pub fn make_slit_pair(n: usize) -> Result<(MapSpec, MapSpec)> {
    require_n3(n, "slit pair")?;
    let h = MapSpec {
        name: "slit".into(),
        n,
        body: MapBody::SlitH,
        domain: DomainSpec::new(DomainKind::SlitX, n)?,
        codomain: DomainSpec::new(DomainKind::SlitY, n)?,
    };
    let f = MapSpec {
        name: "slit-inv".into(),
        n,
        body: MapBody::SlitF,
        domain: DomainSpec::new(DomainKind::SlitY, n)?,
        codomain: DomainSpec::new(DomainKind::SlitX, n)?,
    };
    Ok((h, f))
}

/// The cut pair: h squeezes the removed cone down to a slit; f is its exact
/// inverse with |Df| <= C (1 + s/|y|).
pub fn make_cut_pair(n: usize) -> Result<(MapSpec, MapSpec)> {
    require_n3(n, "cut pair")?;
    let h = MapSpec {
        name: "cut".into(),
        n,
        body: MapBody::CutH,
        domain: DomainSpec::new(DomainKind::CutX, n)?,
        codomain: DomainSpec::new(DomainKind::CutY, n)?,
    };
    let f = MapSpec {
        name: "cut-inv".into(),
        n,
        body: MapBody::CutF,
        domain: DomainSpec::new(DomainKind::CutY, n)?,
        codomain: DomainSpec::new(DomainKind::CutX, n)?,
    };
    Ok((h, f))
}

/// The cusp pair for profile exponent alpha: h carves the cusp collar with
/// |Dh| <= C / (|x| log^(1/alpha)(e/|x|)); f is Lipschitz.
pub fn make_cusp_pair(alpha: f64, n: usize) -> Result<(MapSpec, MapSpec)> {
    require_n3(n, "cusp pair")?;
    let profile = CuspProfile::new(alpha)?;
    let h = MapSpec {
        name: format!("cusp:alpha={alpha}"),
        n,
        body: MapBody::CuspH { profile },
        domain: DomainSpec::new(DomainKind::CuspX { profile }, n)?,
        codomain: DomainSpec::new(DomainKind::CuspY { profile }, n)?,
    };
    let f = MapSpec {
        name: format!("cusp-inv:alpha={alpha}"),
        n,
        body: MapBody::CuspF { profile },
        domain: DomainSpec::new(DomainKind::CuspY { profile }, n)?,
        codomain: DomainSpec::new(DomainKind::CuspX { profile }, n)?,
    };
    Ok((h, f))
}

fn require_n3(n: usize, what: &str) -> Result<()> {
    if n < 3 {
        Err(Error::InvalidParameter(format!("{what} requires dimension >= 3, got {n}")))
    } else {
        Ok(())
    }
}

/// Resolves a catalogue identifier like "radial:a=2" or "cusp-inv:alpha=2".
pub fn lookup(id: &str, n: usize) -> Result<MapSpec> {
    let (head, param) = match id.split_once(':') {
        Some((h, p)) => (h, Some(p)),
        None => (id, None),
    };
    let parse_param = |key: &str| -> Result<f64> {
        let p = param.ok_or_else(|| {
            Error::InvalidParameter(format!("map '{head}' requires parameter {key}=<value>"))
        })?;
        let (k, v) = p.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!("malformed map parameter '{p}', expected {key}=<value>"))
        })?;
        if k != key {
            return Err(Error::InvalidParameter(format!(
                "map '{head}' expects parameter '{key}', got '{k}'"
            )));
        }
        v.parse::<f64>()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse '{v}' as a number")))
    };
    match head {
        "identity" => make_identity(n),
        "radial" => make_radial_map(parse_param("a")?, n),
        "radial-inv" => {
            let a = parse_param("a")?;
            if a <= 0.0 {
                return Err(Error::InvalidParameter("radial-inv requires a > 0".into()));
            }
            make_radial_map(1.0 / a, n)
        }
        "slit" => Ok(make_slit_pair(n)?.0),
        "slit-inv" => Ok(make_slit_pair(n)?.1),
        "cut" => Ok(make_cut_pair(n)?.0),
        "cut-inv" => Ok(make_cut_pair(n)?.1),
        "cusp" => Ok(make_cusp_pair(parse_param("alpha")?, n)?.0),
        "cusp-inv" => Ok(make_cusp_pair(parse_param("alpha")?, n)?.1),
        _ => Err(Error::InvalidParameter(format!("unknown map id '{id}'"))),
    }
}

/// One catalogue entry for the CLI listing.
pub struct MapEntry {
    pub id: &'static str,
    pub summary: &'static str,
    pub min_dim: usize,
}

pub fn catalog() -> Vec<MapEntry> {
    vec![
        MapEntry { id: "identity", summary: "identity on the unit ball", min_dim: 2 },
        MapEntry {
            id: "radial:a=<a>",
            summary: "|z|^(a-1) z on the unit ball; constant inner distortion for a >= 1",
            min_dim: 2,
        },
        MapEntry {
            id: "slit / slit-inv",
            summary: "slit cylinder <-> cone-capped cylinder; |D slit-inv| ~ 1/rho",
            min_dim: 3,
        },
        MapEntry {
            id: "cut / cut-inv",
            summary: "cylinder-minus-cone <-> slit cylinder; |D cut-inv| ~ 1 + t/rho",
            min_dim: 3,
        },
        MapEntry {
            id: "cusp:alpha=<a> / cusp-inv:alpha=<a>",
            summary: "cone-capped cylinder <-> cusp collar; cusp-inv is Lipschitz",
            min_dim: 3,
        },
    ]
}

impl MapSpec {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn body(&self) -> &MapBody {
        &self.body
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn codomain(&self) -> &DomainSpec {
        &self.codomain
    }

    /// The catalogued inverse map.
    pub fn inverse(&self) -> Option<MapSpec> {
        let body = match &self.body {
            MapBody::Identity => MapBody::Identity,
            MapBody::Radial { a } => MapBody::Radial { a: 1.0 / a },
            MapBody::SlitH => MapBody::SlitF,
            MapBody::SlitF => MapBody::SlitH,
            MapBody::CutH => MapBody::CutF,
            MapBody::CutF => MapBody::CutH,
            MapBody::CuspH { profile } => MapBody::CuspF { profile: *profile },
            MapBody::CuspF { profile } => MapBody::CuspH { profile: *profile },
        };
        let name = match &self.body {
            MapBody::Identity => "identity".to_string(),
            MapBody::Radial { a } => format!("radial:a={}", 1.0 / a),
            MapBody::SlitH => "slit-inv".into(),
            MapBody::SlitF => "slit".into(),
            MapBody::CutH => "cut-inv".into(),
            MapBody::CutF => "cut".into(),
            MapBody::CuspH { profile } => format!("cusp-inv:alpha={}", profile.alpha()),
            MapBody::CuspF { profile } => format!("cusp:alpha={}", profile.alpha()),
        };
        Some(MapSpec {
            name,
            n: self.n,
            body,
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
        })
    }

    /// Branch values (a, b) at a reduced point; `side` picks the formula.
    pub fn split_values(&self, side: Side, t: f64, rho: f64) -> (f64, f64) {
        let j = self.jet(side, t, rho);
        (j.a, j.b)
    }

    /// First-order jet of the chosen branch at (t, rho) with rho > 0.
    pub fn jet(&self, side: Side, t: f64, rho: f64) -> AxialJet {
        match (&self.body, side) {
            (MapBody::Identity, _) => AxialJet::identity(t, rho),
            (MapBody::Radial { a }, _) => {
                let a = *a;
                let r2 = t * t + rho * rho;
                let r = r2.sqrt();
                let s = r.powf(a - 1.0);
                let c = (a - 1.0) * r.powf(a - 3.0);
                AxialJet {
                    a: s * t,
                    b: s * rho,
                    a_t: s + c * t * t,
                    a_rho: c * t * rho,
                    b_t: c * t * rho,
                    b_rho: s + c * rho * rho,
                    b_over_rho: s,
                }
            }
            (_, Side::Minus) => AxialJet::identity(t, rho),
            (MapBody::SlitH, Side::Plus) => AxialJet {
                a: t * rho,
                b: rho,
                a_t: rho,
                a_rho: t,
                b_t: 0.0,
                b_rho: 1.0,
                b_over_rho: 1.0,
            },
            (MapBody::SlitF, Side::Plus) => AxialJet {
                a: t / rho,
                b: rho,
                a_t: 1.0 / rho,
                a_rho: -t / (rho * rho),
                b_t: 0.0,
                b_rho: 1.0,
                b_over_rho: 1.0,
            },
            (MapBody::CutH, Side::Plus) => {
                let d = 2.0 - t;
                let b = (2.0 * rho - t) / d;
                AxialJet {
                    a: t,
                    b,
                    a_t: 1.0,
                    a_rho: 0.0,
                    b_t: 2.0 * (rho - 1.0) / (d * d),
                    b_rho: 2.0 / d,
                    b_over_rho: b / rho,
                }
            }
            (MapBody::CutF, Side::Plus) => {
                let b = ((2.0 - t) * rho + t) / 2.0;
                AxialJet {
                    a: t,
                    b,
                    a_t: 1.0,
                    a_rho: 0.0,
                    b_t: (1.0 - rho) / 2.0,
                    b_rho: (2.0 - t) / 2.0,
                    b_over_rho: b / rho,
                }
            }
            (MapBody::CuspH { profile }, Side::Plus) => {
                let w = w_of_rho(rho);
                let inv_a = 1.0 / profile.alpha();
                let wp = w.powf(-inv_a); // u^-1(rho)
                let phi = wp / rho;
                let phi_p = wp / (rho * rho) * (inv_a / w - 1.0);
                AxialJet {
                    a: phi * t,
                    b: rho,
                    a_t: phi,
                    a_rho: phi_p * t,
                    b_t: 0.0,
                    b_rho: 1.0,
                    b_over_rho: 1.0,
                }
            }
            (MapBody::CuspF { profile }, Side::Plus) => {
                let w = w_of_rho(rho);
                let inv_a = 1.0 / profile.alpha();
                let wq = w.powf(inv_a);
                let psi = rho * wq; // |y| / u^-1(|y|)
                let psi_p = wq * (1.0 - inv_a / w);
                AxialJet {
                    a: psi * t,
                    b: rho,
                    a_t: psi,
                    a_rho: psi_p * t,
                    b_t: 0.0,
                    b_rho: 1.0,
                    b_over_rho: 1.0,
                }
            }
        }
    }

    fn side_of(t: f64, rho: f64) -> Side {
        if t > 0.0 || (t == 0.0 && rho > 0.0) {
            Side::Plus
        } else {
            Side::Minus
        }
    }

    /// Raw formula evaluation without membership checks.
    pub(crate) fn eval_raw(&self, p: &PointN) -> PointN {
        match &self.body {
            MapBody::Identity => *p,
            MapBody::Radial { a } => {
                let r = p.norm();
                if r == 0.0 {
                    return *p;
                }
                let s = r.powf(a - 1.0);
                let mut coords = [0.0; crate::point::MAX_DIM];
                for (i, &v) in p.coords().iter().enumerate() {
                    coords[i] = s * v;
                }
                PointN::from_coords(&coords[..p.dim()]).expect("dimension preserved")
            }
            _ => {
                let (t, rho) = (p.t(), p.rho());
                let side = Self::side_of(t, rho);
                if side == Side::Minus || rho == 0.0 {
                    // all split maps are the identity on the minus branch
                    return *p;
                }
                let (a, b) = self.split_values(side, t, rho);
                p.with_axial(a, b)
            }
        }
    }

    /// Evaluates the map, rejecting points outside the domain.
    pub fn eval(&self, p: &PointN) -> Result<PointN> {
        if p.dim() != self.n {
            return Err(Error::DomainViolation(format!(
                "point dimension {} does not match map dimension {}",
                p.dim(),
                self.n
            )));
        }
        if !p.is_finite() {
            return Err(Error::DomainViolation("non-finite point".into()));
        }
        if !self.domain.contains(p) {
            return Err(Error::DomainViolation(format!(
                "point (t={}, rho={}) outside domain {}",
                p.t(),
                p.rho(),
                self.domain.id()
            )));
        }
        Ok(self.eval_raw(p))
    }

    /// Analytic differential at p, where the chosen branch is smooth.
    pub fn analytic_diff(&self, p: &PointN) -> Result<MatN> {
        let n = self.n;
        let (t, rho) = (p.t(), p.rho());
        match &self.body {
            MapBody::Identity => Ok(MatN::identity(n)),
            MapBody::Radial { a } => {
                let r = p.norm();
                if r == 0.0 {
                    return if *a == 1.0 {
                        Ok(MatN::identity(n))
                    } else if *a > 1.0 {
                        Ok(MatN::zeros(n))
                    } else {
                        Err(Error::DomainViolation(
                            "radial differential singular at the origin for a < 1".into(),
                        ))
                    };
                }
                let s = r.powf(a - 1.0);
                let c = (a - 1.0) * r.powf(a - 3.0);
                let z = p.coords();
                Ok(MatN::from_fn(n, |i, j| {
                    let d = if i == j { s } else { 0.0 };
                    d + c * z[i] * z[j]
                }))
            }
            _ => {
                if t == 0.0 {
                    return Err(Error::DomainViolation(
                        "differential undefined on the gluing interface t = 0".into(),
                    ));
                }
                if t < 0.0 {
                    return Ok(MatN::identity(n));
                }
                let xh = p.x_hat().ok_or_else(|| {
                    Error::DomainViolation("branch formula singular on the axis".into())
                })?;
                let j = self.jet(Side::Plus, t, rho);
                Ok(jet_to_matrix(&j, n, &xh[..n - 1]))
            }
        }
    }

    /// Reduced image coordinates (a, b) of the point (t, rho, 0, ...).
    pub fn image_trho(&self, t: f64, rho: f64) -> (f64, f64) {
        match &self.body {
            MapBody::Identity => (t, rho),
            MapBody::Radial { .. } => self.split_values(Side::Plus, t, rho),
            _ => self.split_values(Self::side_of(t, rho), t, rho),
        }
    }

    /// Differential at the representative point (t, rho, 0, ...), used on the
    /// axisymmetric quadrature path. Assumes t != 0 and rho > 0.
    pub fn rep_matrix(&self, t: f64, rho: f64) -> MatN {
        match &self.body {
            MapBody::Identity => MatN::identity(self.n),
            MapBody::Radial { .. } => {
                let j = self.jet(Side::Plus, t, rho);
                jet_to_matrix_axial(&j, self.n)
            }
            _ => {
                let side = Self::side_of(t, rho);
                if side == Side::Minus {
                    MatN::identity(self.n)
                } else {
                    let j = self.jet(Side::Plus, t, rho);
                    jet_to_matrix_axial(&j, self.n)
                }
            }
        }
    }

    /// Closed-form envelope g with |Dmap| <= C g on the domain, when the
    /// construction claims one.
    pub fn gradient_bound(&self, t: f64, rho: f64) -> f64 {
        match &self.body {
            MapBody::Identity | MapBody::SlitH | MapBody::CutH | MapBody::CuspF { .. } => 1.0,
            MapBody::Radial { a } => {
                let r = (t * t + rho * rho).sqrt();
                a.max(1.0) * r.powf(a - 1.0)
            }
            MapBody::SlitF => {
                if rho > 0.0 {
                    1.0 / rho
                } else {
                    1.0
                }
            }
            MapBody::CutF => 1.0 + t.max(0.0) / rho,
            MapBody::CuspH { profile } => {
                let w = w_of_rho(rho);
                1.0 / (rho * w.powf(1.0 / profile.alpha()))
            }
        }
    }

    /// Image of a catalogued region under this map, when expressible.
    pub fn push_domain(&self, d: &DomainSpec) -> Option<DomainSpec> {
        let clip = d.clip();
        match &self.body {
            MapBody::Identity => Some(d.clone()),
            MapBody::Radial { a } => {
                if clip != crate::domain::Clip::none() {
                    return None;
                }
                match d.kind() {
                    DomainKind::UnitBall => Some(DomainSpec::unit_ball(self.n)),
                    DomainKind::Annulus { r_in, r_out } => {
                        DomainSpec::annulus(r_in.powf(*a), r_out.powf(*a), self.n).ok()
                    }
                    _ => None,
                }
            }
            // rho-preserving split maps: carry rho clips and the t > 0 window
            MapBody::SlitH | MapBody::SlitF | MapBody::CuspH { .. } | MapBody::CuspF { .. } => {
                if clip.ball.is_some()
                    || clip.t_hi.is_finite()
                    || (clip.t_lo.is_finite() && clip.t_lo != 0.0)
                {
                    return None;
                }
                let src_ok = domain_kind_matches(d.kind(), self.domain.kind());
                if !src_ok {
                    return None;
                }
                let mut out = DomainSpec::new(self.codomain.kind().clone(), self.n).ok()?;
                if clip.rho_lo > 0.0 {
                    out = out.with_rho_above(clip.rho_lo);
                }
                if clip.rho_hi > 0.0 {
                    out = out.with_rho_below(clip.rho_hi);
                }
                if clip.t_lo == 0.0 {
                    out = out.with_t_range(0.0, f64::INFINITY);
                }
                Some(out)
            }
            MapBody::CutH | MapBody::CutF => None,
        }
    }
}

fn domain_kind_matches(a: &DomainKind, b: &DomainKind) -> bool {
    matches!(
        (a, b),
        (DomainKind::SlitX, DomainKind::SlitX)
            | (DomainKind::SlitY, DomainKind::SlitY)
            | (DomainKind::CuspX { .. }, DomainKind::CuspX { .. })
            | (DomainKind::CuspY { .. }, DomainKind::CuspY { .. })
    )
}

/// Full differential from a jet and the unit transverse direction.
fn jet_to_matrix(j: &AxialJet, n: usize, xhat: &[f64]) -> MatN {
    let mut m = MatN::zeros(n);
    m.set(0, 0, j.a_t);
    for (k, &u) in xhat.iter().enumerate() {
        m.set(0, k + 1, j.a_rho * u);
        m.set(k + 1, 0, j.b_t * u);
    }
    for i in 0..n - 1 {
        for k in 0..n - 1 {
            let radial = (j.b_rho - j.b_over_rho) * xhat[i] * xhat[k];
            let tang = if i == k { j.b_over_rho } else { 0.0 };
            m.set(i + 1, k + 1, radial + tang);
        }
    }
    m
}

/// Differential at the representative direction e1 (block 2x2 plus diagonal).
fn jet_to_matrix_axial(j: &AxialJet, n: usize) -> MatN {
    let mut m = MatN::zeros(n);
    m.set(0, 0, j.a_t);
    m.set(0, 1, j.a_rho);
    m.set(1, 0, j.b_t);
    m.set(1, 1, j.b_rho);
    for i in 2..n {
        m.set(i, i, j.b_over_rho);
    }
    m
}

/// Central-difference differential following the shared step policy:
/// step 1e-5 * max(1, |p|), shrunk to a quarter of the distance to the
/// singular set and boundary, with a Richardson halving check.
pub fn fd_differential(map: &MapSpec, p: &PointN) -> Result<MatN> {
    let n = map.dim();
    let (t, rho) = (p.t(), p.rho());
    let mut dist = map.domain().boundary_distance(t, rho);
    if let Some(ds) = map.domain().singular_distance(t, rho) {
        dist = dist.min(ds);
    }
    if dist <= 0.0 {
        return Err(Error::DomainViolation(
            "finite differences need interior clearance".into(),
        ));
    }
    let delta = (1e-5 * p.norm().max(1.0)).min(dist / 4.0);
    let coarse = fd_matrix(map, p, delta);
    let fine = fd_matrix(map, p, delta / 2.0);
    let scale = fine.frobenius().max(1e-300);
    let change = fine.sub(&coarse).frobenius() / scale;
    if change > 1e-6 {
        return Err(Error::FdUnstable { t, rho, change });
    }
    // Richardson extrapolation of the two central-difference estimates
    Ok(fine.scale(4.0 / 3.0).sub(&coarse.scale(1.0 / 3.0)))
}

fn fd_matrix(map: &MapSpec, p: &PointN, delta: f64) -> MatN {
    let n = map.dim();
    MatN::from_fn(n, |i, j| {
        let mut hi = [0.0; crate::point::MAX_DIM];
        let mut lo = [0.0; crate::point::MAX_DIM];
        hi[..n].copy_from_slice(p.coords());
        lo[..n].copy_from_slice(p.coords());
        hi[j] += delta;
        lo[j] -= delta;
        let ph = PointN::from_coords(&hi[..n]).expect("valid point");
        let pl = PointN::from_coords(&lo[..n]).expect("valid point");
        (map.eval_raw(&ph).coords()[i] - map.eval_raw(&pl).coords()[i]) / (2.0 * delta)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3(t: f64, x0: f64, x1: f64) -> PointN {
        PointN::new(t, &[x0, x1]).unwrap()
    }

    #[test]
    fn radial_formula_and_identity_case() {
        let id = make_radial_map(1.0, 3).unwrap();
        let p = p3(0.2, 0.3, -0.1);
        assert_eq!(id.eval(&p).unwrap(), p);
        assert_eq!(id.analytic_diff(&p).unwrap(), MatN::identity(3));

        let h = make_radial_map(2.0, 3).unwrap();
        let q = h.eval(&p3(0.0, 0.5, 0.0)).unwrap();
        assert!((q.norm() - 0.25).abs() < 1e-15, "|h(x)| = |x|^a");
    }

    #[test]
    fn slit_pair_round_trip_and_lower_branch() {
        let (h, f) = make_slit_pair(3).unwrap();
        let below = p3(-0.5, 0.3, 0.4);
        assert_eq!(h.eval(&below).unwrap(), below);
        let p = p3(0.5, 0.5, 0.0);
        let q = h.eval(&p).unwrap();
        assert!((q.t() - 0.25).abs() < 1e-15);
        assert_eq!(q.x(), p.x());
        let back = f.eval(&q).unwrap();
        assert!(back.dist(&p) < 1e-12);
    }

    #[test]
    fn cut_pair_round_trip() {
        let (h, f) = make_cut_pair(3).unwrap();
        let p = p3(0.5, 0.6, 0.0);
        let q = h.eval(&p).unwrap();
        let back = f.eval(&q).unwrap();
        assert!(back.dist(&p) < 1e-9);
        let below = p3(-0.25, 0.1, 0.2);
        assert_eq!(h.eval(&below).unwrap(), below);
    }

    #[test]
    fn cusp_first_coordinate_spot_value() {
        // alpha = 2, rho = e*exp(-4): u_inv(rho) = 1/2, so h_1 = t/(2 rho)
        let (h, _) = make_cusp_pair(2.0, 3).unwrap();
        let rho = (1.0f64 - 4.0).exp();
        let t = 0.4 * rho;
        let q = h.eval(&p3(t, rho, 0.0)).unwrap();
        assert!((q.t() - t / (2.0 * rho)).abs() < 1e-14);
        // outer rim formula: u_inv(1) = 1 fixes (t, b) = (t, 1)
        let (a, b) = h.split_values(Side::Plus, 0.3, 1.0);
        assert!((a - 0.3).abs() < 1e-15 && (b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn branch_gluing_at_interface() {
        let (slit_h, slit_f) = make_slit_pair(3).unwrap();
        let (cut_h, cut_f) = make_cut_pair(3).unwrap();
        let (cusp_h, cusp_f) = make_cusp_pair(2.0, 3).unwrap();
        for map in [&slit_h, &slit_f, &cut_h, &cut_f, &cusp_h, &cusp_f] {
            for k in 1..20 {
                let rho = k as f64 / 20.0;
                let (ap, bp) = map.split_values(Side::Plus, 0.0, rho);
                let (am, bm) = map.split_values(Side::Minus, 0.0, rho);
                assert!((ap - am).abs() <= 1e-12 && (bp - bm).abs() <= 1e-12,
                    "{} branch mismatch at rho={rho}", map.name());
            }
        }
    }

    #[test]
    fn fd_matches_analytic() {
        let (h, f) = make_slit_pair(3).unwrap();
        let (ch, cf) = make_cut_pair(3).unwrap();
        let (uh, uf) = make_cusp_pair(2.0, 3).unwrap();
        let radial = make_radial_map(2.0, 3).unwrap();
        let pts = [p3(0.31, 0.52, 0.11), p3(-0.42, 0.23, 0.35), p3(0.05, 0.61, -0.33)];
        for map in [&h, &f, &ch, &cf, &uh, &uf, &radial] {
            for p in &pts {
                if !map.domain().contains(p) {
                    continue;
                }
                let a = map.analytic_diff(p).unwrap();
                let fd = fd_differential(map, p).unwrap();
                let rel = fd.sub(&a).frobenius() / a.frobenius().max(1e-300);
                assert!(rel < 1e-6, "{} at {:?}: rel={rel:e}", map.name(), p.coords());
            }
        }
    }

    #[test]
    fn slit_inverse_block_formula() {
        // hand formula: Df(s, y) = [[1/rho, -s/rho^2 * yhat^T], [0, I]]
        let (_, f) = make_slit_pair(3).unwrap();
        let p = p3(0.05, 0.06, 0.08); // rho = 0.1, s < rho
        let d = f.analytic_diff(&p).unwrap();
        let rho = 0.1;
        let expect = MatN::from_rows(&[
            &[1.0 / rho, -0.05 / (rho * rho) * 0.6, -0.05 / (rho * rho) * 0.8],
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
        ]);
        assert!(d.sub(&expect).max_abs() < 1e-12);
    }

    #[test]
    fn cut_inverse_norm_envelope_spot() {
        let (_, f) = make_cut_pair(3).unwrap();
        let p = p3(0.9, 0.01, 0.0);
        let d = f.analytic_diff(&p).unwrap();
        let env = 1.0 + 0.9 / 0.01;
        let ratio = d.op_norm() / env;
        assert!((0.1..=10.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn lookup_parses_catalogue_ids() {
        assert!(lookup("identity", 3).is_ok());
        assert_eq!(lookup("radial:a=2", 3).unwrap().name(), "radial:a=2");
        assert!(lookup("cusp:alpha=2", 3).is_ok());
        assert!(lookup("cusp:alpha=-1", 3).is_err());
        assert!(lookup("slit", 2).is_err(), "slit needs n >= 3");
        assert!(lookup("nope", 3).is_err());
    }

    #[test]
    fn eval_rejects_outside_points() {
        let (h, _) = make_slit_pair(3).unwrap();
        assert!(h.eval(&p3(0.5, 0.0, 0.0)).is_err(), "on the slit");
        assert!(h.eval(&p3(1.5, 0.1, 0.0)).is_err());
    }
}
