//! Problem data for box-constrained quadratic programs and the artifact
//! types shared across the crate: index partitions, lifted points,
//! multiplier certificates, classification reports, and generator settings.
//!
//! The problem throughout is
//!
//! ```text
//!     minimize  q(x) = 1/2 x'Qx + c'x    subject to  x in [0,1]^n
//! ```
//!
//! with `Q` symmetric. Indices are 0-based everywhere in this crate;
//! serialization and the command line present them 1-based.

use crate::numlin::{dot, SymMatrix};
use crate::{Error, Result};

/// Default tolerance for deciding whether a coordinate sits at a bound.
pub const DEFAULT_BOX_TOL: f64 = 1e-9;

/// A box-constrained quadratic program `min 1/2 x'Qx + c'x over [0,1]^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxQpInstance {
    q: SymMatrix,
    c: Vec<f64>,
}

impl BoxQpInstance {
    pub fn new(q: SymMatrix, c: Vec<f64>) -> Result<Self> {
        if c.len() != q.n() {
            return Err(Error::DimensionMismatch { expected: q.n(), found: c.len() });
        }
        for i in 0..q.n() {
            if q.row(i).iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!("Q row {} has a non-finite entry", i)));
            }
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("c has a non-finite entry".into()));
        }
        Ok(BoxQpInstance { q, c })
    }

    pub fn n(&self) -> usize {
        self.q.n()
    }

    pub fn q(&self) -> &SymMatrix {
        &self.q
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// Objective value `1/2 x'Qx + c'x`.
    ///
    /// The quadratic form accumulates row-major term by term; the linear
    /// relaxation's evaluator uses the same order, which makes the two agree
    /// bit for bit at box vertices.
    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: x.len() });
        }
        Ok(0.5 * self.q.quad_form(x) + dot(&self.c, x))
    }
}

/// Which bound (if any) a coordinate sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Band {
    Lower,
    Interior,
    Upper,
}

/// Partition of `0..n` into coordinates at the lower bound, strictly
/// between the bounds, and at the upper bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexPartition {
    bands: Vec<Band>,
}

impl IndexPartition {
    pub fn from_bands(bands: Vec<Band>) -> Self {
        IndexPartition { bands }
    }

    /// Classifies each coordinate of `x` with tolerance `tol`: at most `tol`
    /// from a bound counts as on it. Requires `x` to lie in the box up to
    /// `tol` on each side.
    pub fn of_point(x: &[f64], tol: f64) -> Result<Self> {
        let mut bands = Vec::with_capacity(x.len());
        for (j, &v) in x.iter().enumerate() {
            if !(v >= -tol && v <= 1.0 + tol) {
                return Err(Error::OutOfBox { index: j, value: v });
            }
            bands.push(if v <= tol {
                Band::Lower
            } else if v >= 1.0 - tol {
                Band::Upper
            } else {
                Band::Interior
            });
        }
        Ok(IndexPartition { bands })
    }

    /// Builds a partition from three disjoint index sets covering `0..n`.
    pub fn from_sets(n: usize, lower: &[usize], interior: &[usize], upper: &[usize]) -> Result<Self> {
        let mut bands = vec![None; n];
        for (set, band) in [(lower, Band::Lower), (interior, Band::Interior), (upper, Band::Upper)] {
            for &j in set {
                if j >= n {
                    return Err(Error::InvalidIndexSet(format!("index {} out of range for n = {}", j, n)));
                }
                if bands[j].is_some() {
                    return Err(Error::InvalidIndexSet(format!("index {} assigned twice", j)));
                }
                bands[j] = Some(band);
            }
        }
        let bands: Option<Vec<Band>> = bands.into_iter().collect();
        bands
            .map(IndexPartition::from_bands)
            .ok_or_else(|| Error::InvalidIndexSet("sets do not cover every index".into()))
    }

    pub fn n(&self) -> usize {
        self.bands.len()
    }

    pub fn band(&self, j: usize) -> Band {
        self.bands[j]
    }

    fn collect(&self, band: Band) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.bands[j] == band).collect()
    }

    /// Indices at the lower bound.
    pub fn lower(&self) -> Vec<usize> {
        self.collect(Band::Lower)
    }

    /// Indices strictly between the bounds.
    pub fn interior(&self) -> Vec<usize> {
        self.collect(Band::Interior)
    }

    /// Indices at the upper bound.
    pub fn upper(&self) -> Vec<usize> {
        self.collect(Band::Upper)
    }

    /// Copies `x`, forcing coordinates in the boundary bands to exact 0/1.
    pub fn snapped(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.bands)
            .map(|(&v, band)| match band {
                Band::Lower => 0.0,
                Band::Upper => 1.0,
                Band::Interior => v,
            })
            .collect()
    }
}

/// A point `x` together with a symmetric lift `X` standing in for `xx'`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedPoint {
    pub x: Vec<f64>,
    pub x_mat: SymMatrix,
}

impl LiftedPoint {
    pub fn new(x: Vec<f64>, x_mat: SymMatrix) -> Result<Self> {
        if x_mat.n() != x.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: x_mat.n() });
        }
        Ok(LiftedPoint { x, x_mat })
    }

    /// The exact lift `X = xx'`.
    pub fn outer(x: &[f64]) -> Self {
        let x_mat = SymMatrix::from_fn(x.len(), |i, j| x[i] * x[j]);
        LiftedPoint { x: x.to_vec(), x_mat }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
}

/// Multipliers certifying optimality for the linear (McCormick) relaxation:
/// `u` for `x <= e`, `v` for `x >= 0`, `w` for the pairwise lower envelope
/// `X_ij >= x_i + x_j - 1`, `y` for the upper envelope `X_ij <= x_j`, and
/// `z` for `X >= 0`. All must be entrywise nonnegative.
#[derive(Clone, Debug, PartialEq)]
pub struct RltCert {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: SymMatrix,
    pub y: crate::numlin::Mat,
    pub z: SymMatrix,
}

impl RltCert {
    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn validate_dims(&self) -> Result<()> {
        let n = self.u.len();
        let ok = self.v.len() == n
            && self.w.n() == n
            && self.y.rows() == n
            && self.y.cols() == n
            && self.z.n() == n;
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionInconsistency("certificate blocks disagree on n".into()))
        }
    }

    pub fn zeros(n: usize) -> Self {
        RltCert {
            u: vec![0.0; n],
            v: vec![0.0; n],
            w: SymMatrix::zeros(n),
            y: crate::numlin::Mat::zeros(n, n),
            z: SymMatrix::zeros(n),
        }
    }
}

/// Certificate for the semidefinite strengthening: the multipliers of
/// [`RltCert`] plus `(beta, h, h_mat)` forming the bordered matrix
/// `[[beta, h'], [h, H]]` that must be positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpRltCert {
    pub base: RltCert,
    pub beta: f64,
    pub h: Vec<f64>,
    pub h_mat: SymMatrix,
}

impl SdpRltCert {
    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn validate_dims(&self) -> Result<()> {
        self.base.validate_dims()?;
        let n = self.base.n();
        if self.h.len() == n && self.h_mat.n() == n {
            Ok(())
        } else {
            Err(Error::DimensionInconsistency("psd block disagrees on n".into()))
        }
    }

    /// The bordered matrix `[[beta, h'], [h, H]]` of order `n + 1`.
    pub fn bordered(&self) -> SymMatrix {
        let n = self.n();
        SymMatrix::from_fn(n + 1, |i, j| match (i, j) {
            (0, 0) => self.beta,
            (0, j) => self.h[j - 1],
            (i, j) => self.h_mat[(i - 1, j - 1)],
        })
    }
}

/// How tight the two relaxations are on an instance.
///
/// `E1`: both exact. `E2`: only the semidefinite strengthening is exact.
/// `E3`: both share a value strictly below the optimum. `E4`: strictly
/// increasing values. `Partial` carries whatever facts were provable.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactnessLabel {
    E1,
    E2,
    E3,
    E4,
    Partial(String),
}

impl std::fmt::Display for ExactnessLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExactnessLabel::E1 => write!(f, "E1"),
            ExactnessLabel::E2 => write!(f, "E2"),
            ExactnessLabel::E3 => write!(f, "E3"),
            ExactnessLabel::E4 => write!(f, "E4"),
            ExactnessLabel::Partial(s) => write!(f, "PARTIAL: {}", s),
        }
    }
}

/// Outcome of classifying an instance: the relaxation value, the global
/// value and pinned strengthening value when they could be established, and
/// the label the evidence supports.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactnessReport {
    pub rlt_value: f64,
    pub global_value: Option<f64>,
    pub sdprlt_value: Option<f64>,
    pub label: ExactnessLabel,
}

/// Settings for the instance generators.
///
/// `magnitude` bounds the sampled multipliers, `density` is the probability
/// that a free nonnegative parameter is nonzero, and `strict_floor` is the
/// lower bound enforced on parameters that must stay away from zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForgeSpec {
    pub seed: u64,
    pub magnitude: f64,
    pub density: f64,
    pub strict_floor: f64,
}

impl ForgeSpec {
    pub fn new(seed: u64) -> Self {
        ForgeSpec { seed, magnitude: 1.0, density: 1.0, strict_floor: 0.1 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.magnitude.is_finite() && self.magnitude > 0.0) {
            return Err(Error::InvalidParameter(format!("magnitude {} must be positive", self.magnitude)));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::InvalidParameter(format!("density {} must lie in (0, 1]", self.density)));
        }
        if !(self.strict_floor.is_finite() && self.strict_floor > 0.0) {
            return Err(Error::InvalidParameter(format!("strict_floor {} must be positive", self.strict_floor)));
        }
        Ok(())
    }
}
