//! Points of R^n in split coordinates (t, x) with a distinguished axis.

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 8;

/// A point of R^n stored as `(t, x)` with `t` the distinguished horizontal
/// coordinate and `x` the transverse block of length `n - 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointN {
    n: usize,
    c: [f64; MAX_DIM],
}

impl PointN {
    /// Builds a point from the distinguished coordinate and transverse block.
    pub fn new(t: f64, x: &[f64]) -> Result<Self> {
        Self::from_coords_impl(t, x)
    }

    /// Builds a point from a full coordinate slice `[t, x_1, ..., x_{n-1}]`.
    pub fn from_coords(coords: &[f64]) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("empty coordinate list".into()));
        }
        Self::from_coords_impl(coords[0], &coords[1..])
    }

    fn from_coords_impl(t: f64, x: &[f64]) -> Result<Self> {
        let n = x.len() + 1;
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "dimension must be at least 2, got {n}"
            )));
        }
        if n > MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "dimension must be at most {MAX_DIM}, got {n}"
            )));
        }
        let mut c = [0.0; MAX_DIM];
        c[0] = t;
        c[1..n].copy_from_slice(x);
        Ok(Self { n, c })
    }

    /// Representative point `(t, rho, 0, ..., 0)` on the first transverse axis.
    pub fn axial(t: f64, rho: f64, n: usize) -> Self {
        let mut c = [0.0; MAX_DIM];
        c[0] = t;
        c[1] = rho;
        Self { n, c }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> f64 {
        self.c[0]
    }

    /// Transverse block `x` of length `n - 1`.
    pub fn x(&self) -> &[f64] {
        &self.c[1..self.n]
    }

    /// Full coordinate slice `[t, x...]`.
    pub fn coords(&self) -> &[f64] {
        &self.c[..self.n]
    }

    /// Transverse radius `rho = |x|`.
    pub fn rho(&self) -> f64 {
        norm(self.x())
    }

    /// Euclidean norm of the full point.
    pub fn norm(&self) -> f64 {
        norm(self.coords())
    }

    pub fn dist(&self, other: &PointN) -> f64 {
        debug_assert_eq!(self.n, other.n);
        let mut s = 0.0;
        for i in 0..self.n {
            let d = self.c[i] - other.c[i];
            s += d * d;
        }
        s.sqrt()
    }

    /// Unit transverse direction `x / |x|`, or `None` on the axis.
    pub fn x_hat(&self) -> Option<[f64; MAX_DIM]> {
        let rho = self.rho();
        if rho == 0.0 {
            return None;
        }
        let mut u = [0.0; MAX_DIM];
        for (i, &v) in self.x().iter().enumerate() {
            u[i] = v / rho;
        }
        Some(u)
    }

    /// Point with the same transverse direction, new `(t, rho)`.
    pub fn with_axial(&self, t: f64, rho: f64) -> PointN {
        match self.x_hat() {
            Some(u) => {
                let mut c = [0.0; MAX_DIM];
                c[0] = t;
                for i in 0..self.n - 1 {
                    c[i + 1] = rho * u[i];
                }
                PointN { n: self.n, c }
            }
            None => PointN::axial(t, rho, self.n),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|v| v.is_finite())
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_coordinates() {
        let p = PointN::new(0.5, &[3.0, 4.0]).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.t(), 0.5);
        assert_eq!(p.x(), &[3.0, 4.0]);
        assert_eq!(p.rho(), 5.0);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(PointN::new(0.0, &[]).is_err());
        assert!(PointN::new(0.0, &[0.0; 8]).is_err());
        assert!(PointN::from_coords(&[1.0, 2.0]).is_ok());
    }

    #[test]
    fn axial_representative() {
        let p = PointN::axial(0.25, 0.5, 4);
        assert_eq!(p.coords(), &[0.25, 0.5, 0.0, 0.0]);
        assert_eq!(p.rho(), 0.5);
    }
}
