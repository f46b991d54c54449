//! Seeded generators for box-constrained quadratic instances with known
//! relaxation behavior.
//!
//! Instead of sampling `(Q, c)` blindly and solving relaxations to discover
//! how tight they are, every generator here works backwards: it fixes a
//! designated point and a dual certificate with a carefully restricted
//! support, then assembles the unique instance for which that certificate
//! proves what we want. The resulting [`ForgedInstance`] carries the
//! instance together with the evidence, so every claim can be re-verified
//! independently by the checkers in [`crate::rlt`] and [`crate::sdprlt`].
//!
//! The five constructions:
//!
//! * [`exact_rlt`] — the linear relaxation is exact and a designated vertex
//!   is globally optimal.
//! * [`inexact_rlt`] — every optimal solution of the linear relaxation
//!   keeps a pivot coordinate at 1/2, so the relaxation is strictly below
//!   the optimal value.
//! * [`exact_sdprlt`] — the semidefinite strengthening is exact and a
//!   designated (possibly fractional) point is globally optimal.
//! * [`exact_sdprlt_inexact_rlt`] — the strengthening is exact at a
//!   designated non-vertex point while the linear relaxation is strictly
//!   below it.
//! * [`inexact_sdprlt_family`] — a closed-form family on which even the
//!   strengthening provably stays strictly below the optimal value,
//!   evidenced by a feasible witness rather than a certificate.
//!
//! All randomness comes from a counter-based generator seeded by
//! [`ForgeSpec::seed`], and every construction consumes draws in a fixed
//! documented order, so equal inputs reproduce bitwise-equal instances on
//! every platform and thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{
    Band, BoxQpInstance, ForgeSpec, IndexPartition, LiftedPoint, RltCert, SdpRltCert,
    DEFAULT_BOX_TOL,
};
use crate::numlin::{dot, Mat, SymMatrix};

/// Which construction produced an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForgedKind {
    /// Linear relaxation exact; designated vertex optimal.
    ExactRlt,
    /// Linear relaxation strictly below the optimal value.
    InexactRlt,
    /// Semidefinite strengthening exact; designated point optimal.
    ExactSdpRlt,
    /// Strengthening exact at a non-vertex point, linear relaxation not.
    ExactSdpRltInexactRlt,
    /// Closed-form family with a strictly loose strengthening.
    InexactSdpRltFamily,
}

impl ForgedKind {
    pub const ALL: [ForgedKind; 5] = [
        ForgedKind::ExactRlt,
        ForgedKind::InexactRlt,
        ForgedKind::ExactSdpRlt,
        ForgedKind::ExactSdpRltInexactRlt,
        ForgedKind::InexactSdpRltFamily,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ForgedKind::ExactRlt => "exact-rlt",
            ForgedKind::InexactRlt => "inexact-rlt",
            ForgedKind::ExactSdpRlt => "exact-sdp-rlt",
            ForgedKind::ExactSdpRltInexactRlt => "exact-sdp-rlt-inexact-rlt",
            ForgedKind::InexactSdpRltFamily => "inexact-sdp-rlt-family",
        }
    }
}

impl std::fmt::Display for ForgedKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ForgedKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ForgedKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown instance kind `{s}` (expected one of: {})",
                    ForgedKind::ALL.map(|k| k.as_str()).join(", ")
                ))
            })
    }
}

/// A generated instance bundled with the evidence for its claimed behavior.
///
/// `designated_point` is the point the construction is organized around:
/// the optimal vertex for [`ForgedKind::ExactRlt`], the half-fractional
/// relaxation optimum for [`ForgedKind::InexactRlt`], the designated global
/// optimum for the two exact-strengthening kinds, and the all-half witness
/// point for the family. `certified_point` is the lifted point at which the
/// attached certificate satisfies complementary slackness; `witness` is a
/// relaxation-feasible lifted point whose objective value strictly
/// undercuts the optimal value (family only).
#[derive(Clone, Debug, PartialEq)]
pub struct ForgedInstance {
    pub instance: BoxQpInstance,
    pub kind: ForgedKind,
    pub designated_point: Vec<f64>,
    pub partition: IndexPartition,
    pub rlt_cert: Option<RltCert>,
    pub sdprlt_cert: Option<SdpRltCert>,
    pub certified_point: Option<LiftedPoint>,
    pub witness: Option<LiftedPoint>,
    pub spec: ForgeSpec,
}

/// Deterministic multiplier sampler. Every helper consumes a fixed number
/// of draws regardless of outcome, so the stream layout depends only on
/// the dimension and the draw order, never on sampled values.
struct Sampler {
    rng: ChaCha8Rng,
    magnitude: f64,
    density: f64,
    strict_floor: f64,
}

impl Sampler {
    fn new(spec: &ForgeSpec) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
            magnitude: spec.magnitude,
            density: spec.density,
            strict_floor: spec.strict_floor,
        }
    }

    /// Free nonnegative multiplier: uniform on `[0, magnitude)`, zeroed
    /// with probability `1 - density`.
    fn nonneg(&mut self) -> f64 {
        let value = self.rng.random_range(0.0..self.magnitude);
        let keep = self.rng.random::<f64>() < self.density;
        if keep {
            value
        } else {
            0.0
        }
    }

    /// Multiplier that must stay away from zero: `strict_floor` plus a
    /// uniform draw on `[0, magnitude)`. Never zeroed.
    fn strict(&mut self) -> f64 {
        self.strict_floor + self.rng.random_range(0.0..self.magnitude)
    }

    /// Unconstrained entry, uniform on `[-magnitude, magnitude)`.
    fn signed(&mut self) -> f64 {
        self.rng.random_range(-self.magnitude..self.magnitude)
    }

    /// Bernoulli gate with success probability `density`.
    fn coin(&mut self) -> bool {
        self.rng.random::<f64>() < self.density
    }
}

fn in_l(p: &IndexPartition, j: usize) -> bool {
    p.band(j) == Band::Lower
}

fn in_b(p: &IndexPartition, j: usize) -> bool {
    p.band(j) == Band::Interior
}

fn in_u(p: &IndexPartition, j: usize) -> bool {
    p.band(j) == Band::Upper
}

/// Draws the five multiplier blocks on the support that makes every
/// complementary-slackness product vanish identically at the designated
/// point: `u` lives on the at-upper-bound set, `v` on the at-lower-bound
/// set, `w` needs an at-upper-bound index, `y` an at-lower-bound column or
/// at-upper-bound row, and `z` an at-lower-bound index.
///
/// With `pivot = Some(k)` the interior-by-interior blocks of `w` and `z`
/// are additionally allowed and their `(k, k)` entries are forced strictly
/// positive; together those two entries pin coordinate `k` to exactly 1/2
/// in every optimal solution of the linear relaxation.
///
/// Draw order (fixed): `u` by index, `v` by index, upper triangle of `w`
/// row-major, all of `y` row-major, upper triangle of `z` row-major, then
/// the two strict pivot entries. Masked positions still consume draws, so
/// the stream layout is independent of the partition.
fn sample_multipliers(s: &mut Sampler, partition: &IndexPartition, pivot: Option<usize>) -> RltCert {
    let n = partition.n();
    let bb_allowed = pivot.is_some();

    let mut u = vec![0.0; n];
    for (j, slot) in u.iter_mut().enumerate() {
        let draw = s.nonneg();
        if in_u(partition, j) {
            *slot = draw;
        }
    }

    let mut v = vec![0.0; n];
    for (j, slot) in v.iter_mut().enumerate() {
        let draw = s.nonneg();
        if in_l(partition, j) {
            *slot = draw;
        }
    }

    let mut w = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let draw = s.nonneg();
            let allowed = in_u(partition, i)
                || in_u(partition, j)
                || (bb_allowed && in_b(partition, i) && in_b(partition, j));
            if allowed {
                w.set(i, j, draw);
            }
        }
    }

    let mut y = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let draw = s.nonneg();
            if in_l(partition, j) || in_u(partition, i) {
                y.set(i, j, draw);
            }
        }
    }

    let mut z = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let draw = s.nonneg();
            let allowed = in_l(partition, i)
                || in_l(partition, j)
                || (bb_allowed && in_b(partition, i) && in_b(partition, j));
            if allowed {
                z.set(i, j, draw);
            }
        }
    }

    if let Some(k) = pivot {
        w.set(k, k, s.strict());
        z.set(k, k, s.strict());
    }

    RltCert { u, v, w, y, z }
}

/// A random Gram matrix `A' A` with the entries of `A` uniform on
/// `[-magnitude, magnitude)`, plus `floor` times the identity when a strict
/// eigenvalue floor is required.
fn sample_psd(s: &mut Sampler, n: usize, floor: Option<f64>) -> SymMatrix {
    let mut a = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, s.signed());
        }
    }
    SymMatrix::from_fn(n, |i, j| {
        let mut acc = 0.0;
        for k in 0..n {
            acc += a[(k, i)] * a[(k, j)];
        }
        if i == j {
            acc + floor.unwrap_or(0.0)
        } else {
            acc
        }
    })
}

/// Assembles the unique instance whose linear-relaxation dual multipliers
/// are exactly `cert`: `Q = W - Y - Y' + Z` and `c = -u + v - We + Y'e`.
/// By weak duality its relaxation value is at least the certificate's dual
/// objective, with equality whenever complementary slackness holds at some
/// feasible lifted point.
pub fn assemble_rlt(cert: &RltCert) -> Result<BoxQpInstance> {
    cert.validate_dims()?;
    let n = cert.n();
    let q = SymMatrix::from_fn(n, |i, j| {
        cert.w[(i, j)] - cert.y[(i, j)] - cert.y[(j, i)] + cert.z[(i, j)]
    });
    let c = (0..n)
        .map(|j| {
            let we: f64 = cert.w.row(j).iter().sum();
            let yte: f64 = (0..n).map(|i| cert.y[(i, j)]).sum();
            -cert.u[j] + cert.v[j] - we + yte
        })
        .collect();
    BoxQpInstance::new(q, c)
}

/// Assembles the instance whose strengthened dual multipliers are exactly
/// `cert`: the linear assembly plus `H` on the quadratic side and `h` on
/// the linear side.
pub fn assemble_sdprlt(cert: &SdpRltCert) -> Result<BoxQpInstance> {
    cert.validate_dims()?;
    let base = assemble_rlt(&cert.base)?;
    let q = base.q().add(&cert.h_mat);
    let c = base.c().iter().zip(&cert.h).map(|(a, b)| a + b).collect();
    BoxQpInstance::new(q, c)
}

/// Generates an instance whose linear relaxation is exact, with the vertex
/// that is 0 on `lower` and 1 elsewhere designated as a global optimum.
///
/// The sampled certificate satisfies complementary slackness identically
/// at that vertex, so its dual objective, the relaxation value, the
/// designated vertex's objective value, and the optimal value all agree.
pub fn exact_rlt(n: usize, lower: &[usize], spec: &ForgeSpec) -> Result<ForgedInstance> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    let upper: Vec<usize> = (0..n).filter(|j| !lower.contains(j)).collect();
    let partition = IndexPartition::from_sets(n, lower, &[], &upper)?;
    let mut s = Sampler::new(spec);
    let cert = sample_multipliers(&mut s, &partition, None);
    let instance = assemble_rlt(&cert)?;
    let x: Vec<f64> = (0..n)
        .map(|j| if in_u(&partition, j) { 1.0 } else { 0.0 })
        .collect();
    let certified = LiftedPoint::outer(&x);
    Ok(ForgedInstance {
        instance,
        kind: ForgedKind::ExactRlt,
        designated_point: x,
        partition,
        rlt_cert: Some(cert),
        sdprlt_cert: None,
        certified_point: Some(certified),
        witness: None,
        spec: *spec,
    })
}

/// Generates an instance whose linear relaxation is strictly below the
/// optimal value.
///
/// Coordinates in `lower` are pinned at 0, those in `interior` at 1/2, and
/// the rest at 1. The strictly positive `(pivot, pivot)` entries of the
/// `w` and `z` blocks force `x[pivot] = 1/2` in every optimal solution of
/// the relaxation, so no vertex can attain the relaxation value. The
/// certificate's complementary-slackness point is the designated point
/// with the half-fractional lift (interior-by-interior block 0,
/// interior-by-upper block 1/2, upper-by-upper block 1), which is where
/// the relaxation optimum is attained.
pub fn inexact_rlt(
    n: usize,
    lower: &[usize],
    interior: &[usize],
    pivot: usize,
    spec: &ForgeSpec,
) -> Result<ForgedInstance> {
    spec.validate()?;
    if interior.is_empty() {
        return Err(Error::InvalidIndexSet(
            "at least one coordinate must be pinned strictly inside the box".into(),
        ));
    }
    if !interior.contains(&pivot) {
        return Err(Error::InvalidParameter(format!(
            "pivot {pivot} must belong to the interior index set"
        )));
    }
    let upper: Vec<usize> = (0..n)
        .filter(|j| !lower.contains(j) && !interior.contains(j))
        .collect();
    let partition = IndexPartition::from_sets(n, lower, interior, &upper)?;
    let mut s = Sampler::new(spec);
    let cert = sample_multipliers(&mut s, &partition, Some(pivot));
    let instance = assemble_rlt(&cert)?;
    let x: Vec<f64> = (0..n)
        .map(|j| match partition.band(j) {
            Band::Lower => 0.0,
            Band::Interior => 0.5,
            Band::Upper => 1.0,
        })
        .collect();
    let x_mat = SymMatrix::from_fn(n, |i, j| match (partition.band(i), partition.band(j)) {
        (Band::Upper, Band::Upper) => 1.0,
        (Band::Interior, Band::Upper) | (Band::Upper, Band::Interior) => 0.5,
        _ => 0.0,
    });
    let certified = LiftedPoint::new(x.clone(), x_mat)?;
    Ok(ForgedInstance {
        instance,
        kind: ForgedKind::InexactRlt,
        designated_point: x,
        partition,
        rlt_cert: Some(cert),
        sdprlt_cert: None,
        certified_point: Some(certified),
        witness: None,
        spec: *spec,
    })
}

fn sdprlt_core(
    n: usize,
    designated: &[f64],
    spec: &ForgeSpec,
    strict: bool,
    kind: ForgedKind,
) -> Result<ForgedInstance> {
    spec.validate()?;
    if designated.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: designated.len() });
    }
    let partition = IndexPartition::of_point(designated, DEFAULT_BOX_TOL)?;
    let xhat = partition.snapped(designated);
    if strict && partition.interior().is_empty() {
        return Err(Error::InvalidParameter(
            "the designated point must have at least one coordinate strictly between 0 and 1"
                .into(),
        ));
    }
    let mut s = Sampler::new(spec);
    let base = sample_multipliers(&mut s, &partition, None);
    let h_mat = if strict {
        sample_psd(&mut s, n, Some(spec.strict_floor))
    } else if s.coin() {
        sample_psd(&mut s, n, None)
    } else {
        SymMatrix::zeros(n)
    };
    let h: Vec<f64> = h_mat.matvec(&xhat).iter().map(|t| -t).collect();
    let beta = -dot(&h, &xhat);
    let cert = SdpRltCert { base, beta, h, h_mat };
    let instance = assemble_sdprlt(&cert)?;
    let certified = LiftedPoint::outer(&xhat);
    Ok(ForgedInstance {
        instance,
        kind,
        designated_point: xhat,
        partition,
        rlt_cert: None,
        sdprlt_cert: Some(cert),
        certified_point: Some(certified),
        witness: None,
        spec: *spec,
    })
}

/// Generates an instance whose semidefinite strengthening is exact, with
/// `designated` (snapped onto exact bounds within the box tolerance)
/// designated as a global optimum.
///
/// The multiplier blocks follow the same supports as [`exact_rlt`] for the
/// partition induced by the designated point; on top of that, with
/// probability `density` a random Gram matrix `H` enters the quadratic
/// side along with `h = -H x` and `beta = -h' x`, which keeps the bordered
/// block positive semidefinite and complementary at the designated point.
pub fn exact_sdprlt(n: usize, designated: &[f64], spec: &ForgeSpec) -> Result<ForgedInstance> {
    sdprlt_core(n, designated, spec, false, ForgedKind::ExactSdpRlt)
}

/// Generates an instance whose semidefinite strengthening is exact at the
/// designated non-vertex point while the linear relaxation stays strictly
/// below it.
///
/// Identical to [`exact_sdprlt`] except that the Gram block is always
/// present and strictly positive definite (eigenvalues at least
/// `strict_floor`), which makes the designated point the unique optimum of
/// the strengthened relaxation; since the point is not a vertex, the
/// linear relaxation cannot be exact.
pub fn exact_sdprlt_inexact_rlt(
    n: usize,
    designated: &[f64],
    spec: &ForgeSpec,
) -> Result<ForgedInstance> {
    sdprlt_core(n, designated, spec, true, ForgedKind::ExactSdpRltInexactRlt)
}

/// The active odd block size of the family instance of dimension `n`.
fn family_block(n: usize) -> Result<usize> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "the loose-strengthening family needs dimension at least 3, got {n}"
        )));
    }
    Ok(if n % 2 == 1 { n } else { n - 1 })
}

/// Closed-form optimal value of the family instance of dimension `n`:
/// `(k^2/m - k) / 2` where `m` is the active odd block size and
/// `k = (m - 1) / 2`. Attained at any vertex with exactly `k` (or `k + 1`)
/// ones inside the active block.
pub fn family_optimal_value(n: usize) -> Result<f64> {
    let m = family_block(n)?;
    let k = (m / 2) as f64;
    Ok(0.5 * (k * k / (m as f64) - k))
}

/// Generates the family instance on which the semidefinite strengthening
/// is provably strictly below the optimal value.
///
/// The active block has `Q = ee'/m - I` (negative semidefinite) and
/// `c = 0`; for even `n` the instance is padded with one zero row and
/// column. The attached witness is the all-half point with lift
/// `(1 + 1/(m-1))/4` on the diagonal and `(1 - 1/(m-1))/4` off it, which
/// is feasible for the strengthening and evaluates to `-m/8`, strictly
/// below the optimal value [`family_optimal_value`]. No certificate is
/// attached: the construction bounds the strengthening from above, it does
/// not pin it.
pub fn inexact_sdprlt_family(n: usize) -> Result<ForgedInstance> {
    let m = family_block(n)?;
    let mf = m as f64;
    let q = SymMatrix::from_fn(n, |i, j| {
        if i >= m || j >= m {
            0.0
        } else if i == j {
            1.0 / mf - 1.0
        } else {
            1.0 / mf
        }
    });
    let instance = BoxQpInstance::new(q, vec![0.0; n])?;
    let x: Vec<f64> = (0..n).map(|j| if j < m { 0.5 } else { 0.0 }).collect();
    let shrink = 1.0 / (mf - 1.0);
    let off = 0.25 * (1.0 - shrink);
    let x_mat = SymMatrix::from_fn(n, |i, j| {
        if i >= m || j >= m {
            0.0
        } else if i == j {
            0.5
        } else {
            off
        }
    });
    let witness = LiftedPoint::new(x.clone(), x_mat)?;
    let bands: Vec<Band> = (0..n)
        .map(|j| if j < m { Band::Interior } else { Band::Lower })
        .collect();
    let partition = IndexPartition::from_bands(bands);
    Ok(ForgedInstance {
        instance,
        kind: ForgedKind::InexactSdpRltFamily,
        designated_point: x,
        partition,
        rlt_cert: None,
        sdprlt_cert: None,
        certified_point: None,
        witness: Some(witness),
        spec: ForgeSpec::new(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::eig_sym;
    use crate::{oracle, rlt, sdprlt};
    use proptest::prelude::*;

    fn spec(seed: u64) -> ForgeSpec {
        ForgeSpec::new(seed)
    }

    /// Two-variable vertex construction, convex choice: diagonal `w` and
    /// `z` blocks only.
    #[test]
    fn convex_vertex_assembly() {
        let n = 2;
        let mut w = SymMatrix::zeros(n);
        w.set(1, 1, 1.0);
        let mut z = SymMatrix::zeros(n);
        z.set(0, 0, 1.0);
        let cert = RltCert { u: vec![0.0; n], v: vec![0.0; n], w, y: Mat::zeros(n, n), z };
        let inst = assemble_rlt(&cert).unwrap();
        assert_eq!(inst.q().to_rows(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(inst.c(), &[0.0, -1.0]);

        let x = vec![0.0, 1.0];
        let point = LiftedPoint::outer(&x);
        let check = rlt::verify_certificate(&inst, &point, &cert, rlt::DEFAULT_CERT_TOL).unwrap();
        assert!(check.verified, "failing: {:?}", check.failing());
        assert_eq!(rlt::dual_objective(&cert), -0.5);
        assert_eq!(inst.objective(&x).unwrap(), -0.5);
    }

    /// Concave choice: diagonal `y` block only. The assembled linear term
    /// is (1, 1): the designated vertex stays optimal even though the
    /// objective is concave.
    #[test]
    fn concave_vertex_assembly() {
        let n = 2;
        let mut y = Mat::zeros(n, n);
        y.set(0, 0, 1.0);
        y.set(1, 1, 1.0);
        let cert = RltCert {
            u: vec![0.0; n],
            v: vec![0.0; n],
            w: SymMatrix::zeros(n),
            y,
            z: SymMatrix::zeros(n),
        };
        let inst = assemble_rlt(&cert).unwrap();
        assert_eq!(inst.q().to_rows(), vec![vec![-2.0, 0.0], vec![0.0, -2.0]]);
        assert_eq!(inst.c(), &[1.0, 1.0]);

        let x = vec![0.0, 1.0];
        let point = LiftedPoint::outer(&x);
        let check = rlt::verify_certificate(&inst, &point, &cert, rlt::DEFAULT_CERT_TOL).unwrap();
        assert!(check.verified, "failing: {:?}", check.failing());
        assert_eq!(rlt::dual_objective(&cert), 0.0);
        assert_eq!(inst.objective(&x).unwrap(), 0.0);
        let global = oracle::solve_global(&inst, oracle::DEFAULT_ORACLE_TOL).unwrap();
        assert!((global.value - 0.0).abs() <= 1e-12);
    }

    /// Indefinite choice: one diagonal `z` entry against one diagonal `y`
    /// entry.
    #[test]
    fn indefinite_vertex_assembly() {
        let n = 2;
        let mut z = SymMatrix::zeros(n);
        z.set(0, 0, 1.0);
        let mut y = Mat::zeros(n, n);
        y.set(1, 1, 1.0);
        let cert = RltCert {
            u: vec![0.0; n],
            v: vec![0.0; n],
            w: SymMatrix::zeros(n),
            y,
            z,
        };
        let inst = assemble_rlt(&cert).unwrap();
        assert_eq!(inst.q().to_rows(), vec![vec![1.0, 0.0], vec![0.0, -2.0]]);
        assert_eq!(inst.c(), &[0.0, 1.0]);
        let point = LiftedPoint::outer(&[0.0, 1.0]);
        let check = rlt::verify_certificate(&inst, &point, &cert, rlt::DEFAULT_CERT_TOL).unwrap();
        assert!(check.verified, "failing: {:?}", check.failing());
    }

    /// Three-variable pivot construction with only the two strict diagonal
    /// entries set: the relaxation value -1/2 is strictly below the
    /// optimal value -1/4 and is attained only with the pivot coordinate
    /// at 1/2.
    #[test]
    fn pivot_assembly_and_gap() {
        let n = 3;
        let mut w = SymMatrix::zeros(n);
        w.set(1, 1, 1.0);
        let mut z = SymMatrix::zeros(n);
        z.set(1, 1, 1.0);
        let cert = RltCert { u: vec![0.0; n], v: vec![0.0; n], w, y: Mat::zeros(n, n), z };
        let inst = assemble_rlt(&cert).unwrap();
        assert_eq!(
            inst.q().to_rows(),
            vec![vec![0.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 0.0]]
        );
        assert_eq!(inst.c(), &[0.0, -1.0, 0.0]);
        assert_eq!(rlt::dual_objective(&cert), -0.5);

        let sol = rlt::solve(&inst).unwrap();
        assert!((sol.value - (-0.5)).abs() <= 1e-12);
        assert_eq!(sol.argmin.x[1], 0.5);

        let global = oracle::solve_global(&inst, oracle::DEFAULT_ORACLE_TOL).unwrap();
        assert!((global.value - (-0.25)).abs() <= 1e-12);

        // Complementary slackness holds exactly at the half-fractional
        // certified point.
        let x = vec![0.0, 0.5, 1.0];
        let mut xm = SymMatrix::zeros(n);
        xm.set(1, 2, 0.5);
        xm.set(2, 2, 1.0);
        let point = LiftedPoint::new(x, xm).unwrap();
        let check = rlt::verify_certificate(&inst, &point, &cert, rlt::DEFAULT_CERT_TOL).unwrap();
        assert!(check.verified, "failing: {:?}", check.failing());
        for cond in &check.conditions {
            if cond.name.starts_with("comp_slack") {
                assert_eq!(cond.residual, 0.0, "{} should vanish exactly", cond.name);
            }
        }
    }

    /// Strict-Gram construction at (0, 1/2, 1) with identity Gram block
    /// and no sampled multipliers: everything is known in closed form.
    #[test]
    fn strict_gram_assembly_pins_known_values() {
        let n = 3;
        let xhat = vec![0.0, 0.5, 1.0];
        let h_mat = SymMatrix::identity(n);
        let h: Vec<f64> = h_mat.matvec(&xhat).iter().map(|t| -t).collect();
        let beta = -dot(&h, &xhat);
        let cert = SdpRltCert { base: RltCert::zeros(n), beta, h, h_mat };
        let inst = assemble_sdprlt(&cert).unwrap();
        assert_eq!(inst.q().to_rows(), SymMatrix::identity(n).to_rows());
        assert_eq!(inst.c(), &[0.0, -0.5, -1.0]);
        assert_eq!(cert.beta, 1.25);

        let point = LiftedPoint::outer(&xhat);
        let pinned = sdprlt::pin_value(&inst, &point, &cert, rlt::DEFAULT_CERT_TOL).unwrap();
        assert!((pinned.value - (-0.625)).abs() <= 1e-12);

        let sol = rlt::solve(&inst).unwrap();
        assert!((sol.value - (-0.75)).abs() <= 1e-12);

        let global = oracle::solve_global(&inst, oracle::DEFAULT_ORACLE_TOL).unwrap();
        assert!((global.value - (-0.625)).abs() <= 1e-9);
    }

    #[test]
    fn vertex_generator_certifies_and_matches_solvers() {
        let sp = spec(11);
        let fi = exact_rlt(5, &[1, 3], &sp).unwrap();
        assert_eq!(fi.kind, ForgedKind::ExactRlt);
        assert_eq!(fi.designated_point, vec![1.0, 0.0, 1.0, 0.0, 1.0]);

        let cert = fi.rlt_cert.as_ref().unwrap();
        let point = fi.certified_point.as_ref().unwrap();
        let check =
            rlt::verify_certificate(&fi.instance, point, cert, rlt::DEFAULT_CERT_TOL).unwrap();
        assert!(check.verified, "failing: {:?}", check.failing());

        let dual = rlt::dual_objective(cert);
        let value_at_vertex = fi.instance.objective(&fi.designated_point).unwrap();
        let scale = 1.0_f64.max(value_at_vertex.abs());
        assert!((dual - value_at_vertex).abs() <= 1e-9 * scale);

        let sol = rlt::solve(&fi.instance).unwrap();
        assert!((sol.value - dual).abs() <= 1e-9 * scale);

        let global = oracle::solve_global(&fi.instance, oracle::DEFAULT_ORACLE_TOL).unwrap();
        assert!((global.value - dual).abs() <= 1e-9 * scale);
    }

    #[test]
    fn pivot_generator_forces_fractional_optimum() {
        let sp = spec(23);
        let fi = inexact_rlt(4, &[3], &[0, 1], 0, &sp).unwrap();
        assert_eq!(fi.kind, ForgedKind::InexactRlt);
        assert_eq!(fi.designated_point, vec![0.5, 0.5, 1.0, 0.0]);

        // Both strict diagonal entries survive into the quadratic term.
        assert!(fi.instance.q()[(0, 0)] >= 2.0 * sp.strict_floor);

        let cert = fi.rlt_cert.as_ref().unwrap();
        let point = fi.certified_point.as_ref().unwrap();
        let check =
            rlt::verify_certificate(&fi.instance, point, cert, rlt::DEFAULT_CERT_TOL).unwrap();
        assert!(check.verified, "failing: {:?}", check.failing());

        let dual = rlt::dual_objective(cert);
        let sol = rlt::solve(&fi.instance).unwrap();
        let scale = 1.0_f64.max(dual.abs());
        assert!((sol.value - dual).abs() <= 1e-9 * scale);
        assert_eq!(sol.argmin.x[0], 0.5, "pivot coordinate must sit at 1/2");

        let global = oracle::solve_global(&fi.instance, oracle::DEFAULT_ORACLE_TOL).unwrap();
        assert!(global.value > sol.value + 1e-9, "relaxation must be strictly loose");
    }

    #[test]
    fn gram_sampler_respects_floor() {
        let mut s = Sampler::new(&spec(3));
        let plain = sample_psd(&mut s, 5, None);
        let (vals, _) = eig_sym(&plain).unwrap();
        assert!(vals[0] >= -1e-10 * 1.0_f64.max(plain.max_norm()));

        let mut s = Sampler::new(&spec(4));
        let floored = sample_psd(&mut s, 5, Some(0.3));
        let (vals, _) = eig_sym(&floored).unwrap();
        assert!(vals[0] >= 0.3 - 1e-9);
    }

    #[test]
    fn psd_generator_pins_designated_value() {
        let sp = spec(31);
        let designated = [0.3, 1.0, 0.0, 0.7];
        let fi = exact_sdprlt(4, &designated, &sp).unwrap();
        assert_eq!(fi.kind, ForgedKind::ExactSdpRlt);
        assert_eq!(fi.designated_point, designated.to_vec());
        assert_eq!(fi.partition.lower(), vec![2]);
        assert_eq!(fi.partition.interior(), vec![0, 3]);
        assert_eq!(fi.partition.upper(), vec![1]);

        let cert = fi.sdprlt_cert.as_ref().unwrap();
        let point = fi.certified_point.as_ref().unwrap();
        let pinned = sdprlt::pin_value(&fi.instance, point, cert, rlt::DEFAULT_CERT_TOL).unwrap();
        let expected = fi.instance.objective(&fi.designated_point).unwrap();
        let scale = 1.0_f64.max(expected.abs());
        assert!((pinned.value - expected).abs() <= 1e-9 * scale);

        let global = oracle::solve_global(&fi.instance, oracle::DEFAULT_ORACLE_TOL).unwrap();
        assert!((global.value - pinned.value).abs() <= 1e-7 * scale);
    }

    #[test]
    fn strict_psd_generator_opens_relaxation_gap() {
        let sp = spec(47);
        let fi = exact_sdprlt_inexact_rlt(3, &[0.25, 0.75, 1.0], &sp).unwrap();
        assert_eq!(fi.kind, ForgedKind::ExactSdpRltInexactRlt);

        let cert = fi.sdprlt_cert.as_ref().unwrap();
        let point = fi.certified_point.as_ref().unwrap();
        let pinned = sdprlt::pin_value(&fi.instance, point, cert, rlt::DEFAULT_CERT_TOL).unwrap();
        let expected = fi.instance.objective(&fi.designated_point).unwrap();
        let scale = 1.0_f64.max(expected.abs());
        assert!((pinned.value - expected).abs() <= 1e-9 * scale);

        let relaxed = rlt::solve(&fi.instance).unwrap();
        assert!(relaxed.value < pinned.value - 1e-9, "linear relaxation must stay strictly below");

        let global = oracle::solve_global(&fi.instance, oracle::DEFAULT_ORACLE_TOL).unwrap();
        assert!((global.value - pinned.value).abs() <= 1e-7 * scale);
    }

    #[test]
    fn family_matches_closed_form_values() {
        for n in [3usize, 5, 7] {
            let fi = inexact_sdprlt_family(n).unwrap();
            assert_eq!(fi.kind, ForgedKind::InexactSdpRltFamily);
            let expected = family_optimal_value(n).unwrap();
            let global = oracle::solve_global(&fi.instance, oracle::DEFAULT_ORACLE_TOL).unwrap();
            assert!(
                (global.value - expected).abs() <= 1e-12,
                "n = {n}: {} vs {expected}",
                global.value
            );

            let witness = fi.witness.as_ref().unwrap();
            let bound =
                sdprlt::witness_upper_bound(&fi.instance, witness, crate::numlin::DEFAULT_PSD_TOL)
                    .unwrap();
            assert!((bound - (-(n as f64) / 8.0)).abs() <= 1e-12);
            assert!(bound < expected - 1e-9, "witness must strictly undercut the optimum");
        }
    }

    #[test]
    fn family_even_dimension_pads_with_zeros() {
        let fi = inexact_sdprlt_family(4).unwrap();
        assert_eq!(fi.instance.q().row(3), &[0.0, 0.0, 0.0, 0.0]);
        assert_eq!(fi.designated_point, vec![0.5, 0.5, 0.5, 0.0]);
        assert_eq!(fi.partition.lower(), vec![3]);

        let expected = family_optimal_value(4).unwrap();
        assert_eq!(expected, family_optimal_value(3).unwrap());
        let global = oracle::solve_global(&fi.instance, oracle::DEFAULT_ORACLE_TOL).unwrap();
        assert!((global.value - expected).abs() <= 1e-12);

        let witness = fi.witness.as_ref().unwrap();
        let report = sdprlt::membership(witness, crate::numlin::DEFAULT_PSD_TOL).unwrap();
        assert!(report.feasible, "padded witness must stay feasible: {:?}", report.violations);
        let bound =
            sdprlt::witness_upper_bound(&fi.instance, witness, crate::numlin::DEFAULT_PSD_TOL)
                .unwrap();
        assert!((bound - (-0.375)).abs() <= 1e-12);
    }

    #[test]
    fn generation_is_bitwise_deterministic() {
        let sp = spec(99);
        let a = exact_rlt(5, &[1, 3], &sp).unwrap();
        let b = exact_rlt(5, &[1, 3], &sp).unwrap();
        assert_eq!(a, b);

        let c = inexact_rlt(4, &[3], &[0, 1], 0, &sp).unwrap();
        let d = inexact_rlt(4, &[3], &[0, 1], 0, &sp).unwrap();
        assert_eq!(c, d);

        let e = exact_sdprlt(3, &[0.5, 1.0, 0.0], &sp).unwrap();
        let f = exact_sdprlt(3, &[0.5, 1.0, 0.0], &sp).unwrap();
        assert_eq!(e, f);

        let g = exact_rlt(5, &[1, 3], &spec(100)).unwrap();
        assert_ne!(a.instance, g.instance, "different seeds should differ");
    }

    /// Shifting `u` and `v` by the same constant keeps the instance (the
    /// shifts cancel in the linear identity) and keeps the multipliers
    /// feasible, but breaks complementary slackness, so the shifted
    /// certificate only weakly bounds the relaxation from below.
    #[test]
    fn uniform_shift_breaks_slackness_but_keeps_weak_duality() {
        let sp = spec(5);
        let fi = exact_rlt(3, &[0], &sp).unwrap();
        let cert = fi.rlt_cert.as_ref().unwrap();
        let t = 0.25;
        let shifted = RltCert {
            u: cert.u.iter().map(|a| a + t).collect(),
            v: cert.v.iter().map(|a| a + t).collect(),
            w: cert.w.clone(),
            y: cert.y.clone(),
            z: cert.z.clone(),
        };
        let reassembled = assemble_rlt(&shifted).unwrap();
        let dq = reassembled.q().sub(fi.instance.q()).max_norm();
        let dc: f64 = reassembled
            .c()
            .iter()
            .zip(fi.instance.c())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(dq == 0.0 && dc <= 1e-12, "shift must cancel in the assembly");

        let sol = rlt::solve(&fi.instance).unwrap();
        let dual = rlt::dual_objective(&shifted);
        assert!(dual <= sol.value + 1e-12, "weak duality must survive the shift");

        let point = fi.certified_point.as_ref().unwrap();
        let check =
            rlt::verify_certificate(&fi.instance, point, &shifted, rlt::DEFAULT_CERT_TOL).unwrap();
        assert!(!check.verified);
        let failing = check.failing();
        assert!(failing.contains(&"comp_slack_u"), "failing: {failing:?}");
        assert!(failing.contains(&"comp_slack_v"), "failing: {failing:?}");
    }

    /// A vertex certificate embeds into the strengthened form with a zero
    /// bordered block and still verifies.
    #[test]
    fn vertex_certificate_embeds_into_strengthened_form() {
        let sp = spec(13);
        let fi = exact_rlt(4, &[0, 2], &sp).unwrap();
        let base = fi.rlt_cert.clone().unwrap();
        let n = base.n();
        let embedded =
            SdpRltCert { base, beta: 0.0, h: vec![0.0; n], h_mat: SymMatrix::zeros(n) };
        let point = fi.certified_point.as_ref().unwrap();
        let check =
            sdprlt::verify_certificate(&fi.instance, point, &embedded, rlt::DEFAULT_CERT_TOL)
                .unwrap();
        assert!(check.verified, "failing: {:?}", check.failing());
        assert_eq!(
            sdprlt::dual_objective(&embedded),
            rlt::dual_objective(&embedded.base)
        );
    }

    #[test]
    fn kind_strings_round_trip() {
        for kind in ForgedKind::ALL {
            let parsed: ForgedKind = kind.as_str().parse().unwrap();
            assert_eq!(parsed, kind);
        }
        assert!("no-such-kind".parse::<ForgedKind>().is_err());
        assert_eq!(ForgedKind::ExactSdpRltInexactRlt.to_string(), "exact-sdp-rlt-inexact-rlt");
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let sp = spec(1);
        assert!(matches!(exact_rlt(0, &[], &sp), Err(Error::InvalidParameter(_))));
        assert!(exact_rlt(3, &[7], &sp).is_err());
        assert!(matches!(
            inexact_rlt(3, &[0], &[], 1, &sp),
            Err(Error::InvalidIndexSet(_))
        ));
        assert!(matches!(
            inexact_rlt(3, &[0], &[1], 2, &sp),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            exact_sdprlt(3, &[0.5, 0.5], &sp),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
        assert!(matches!(
            exact_sdprlt(2, &[-0.5, 0.5], &sp),
            Err(Error::OutOfBox { index: 0, .. })
        ));
        assert!(matches!(
            exact_sdprlt_inexact_rlt(2, &[0.0, 1.0], &sp),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(inexact_sdprlt_family(2), Err(Error::InvalidParameter(_))));

        let bad = ForgeSpec { seed: 0, magnitude: -1.0, density: 1.0, strict_floor: 0.1 };
        assert!(matches!(exact_rlt(2, &[], &bad), Err(Error::InvalidParameter(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        /// Every sampled vertex construction certifies, and its dual
        /// objective agrees with the designated vertex's objective value,
        /// the relaxation value, and the optimal value.
        #[test]
        fn prop_vertex_kind_verifies(seed in any::<u64>(), n in 1usize..=5, mask in 0u8..32) {
            let lower: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
            let fi = exact_rlt(n, &lower, &spec(seed)).unwrap();
            let cert = fi.rlt_cert.as_ref().unwrap();
            let point = fi.certified_point.as_ref().unwrap();
            let check = rlt::verify_certificate(&fi.instance, point, cert, rlt::DEFAULT_CERT_TOL).unwrap();
            prop_assert!(check.verified, "failing: {:?}", check.failing());

            let dual = rlt::dual_objective(cert);
            let at_vertex = fi.instance.objective(&fi.designated_point).unwrap();
            let scale = 1.0_f64.max(at_vertex.abs());
            prop_assert!((dual - at_vertex).abs() <= 1e-9 * scale);

            let sol = rlt::solve(&fi.instance).unwrap();
            prop_assert!((sol.value - dual).abs() <= 1e-9 * scale);
        }

        /// Every sampled pivot construction certifies at its
        /// half-fractional point, which is feasible, and the lattice
        /// optimum keeps the pivot at 1/2.
        #[test]
        fn prop_pivot_kind_pins_half(seed in any::<u64>(), n in 2usize..=5, bands in proptest::collection::vec(0u8..3, 2..=5), pivot_pick in any::<u16>()) {
            let bands = &bands[..bands.len().min(n)];
            let n = bands.len();
            let mut interior: Vec<usize> = (0..n).filter(|&j| bands[j] == 1).collect();
            if interior.is_empty() {
                interior.push(0);
            }
            let lower: Vec<usize> = (0..n).filter(|&j| bands[j] == 0 && !interior.contains(&j)).collect();
            let pivot = interior[pivot_pick as usize % interior.len()];

            let fi = inexact_rlt(n, &lower, &interior, pivot, &spec(seed)).unwrap();
            let cert = fi.rlt_cert.as_ref().unwrap();
            let point = fi.certified_point.as_ref().unwrap();

            let membership = rlt::membership(point, 1e-12);
            prop_assert!(membership.feasible, "certified point must be feasible: {:?}", membership.violations);

            let check = rlt::verify_certificate(&fi.instance, point, cert, rlt::DEFAULT_CERT_TOL).unwrap();
            prop_assert!(check.verified, "failing: {:?}", check.failing());

            let dual = rlt::dual_objective(cert);
            let sol = rlt::solve(&fi.instance).unwrap();
            let scale = 1.0_f64.max(dual.abs());
            prop_assert!((sol.value - dual).abs() <= 1e-9 * scale);
            prop_assert_eq!(sol.argmin.x[pivot], 0.5);
        }

        /// Every sampled strengthened construction pins the designated
        /// point's objective value, which the exhaustive oracle confirms
        /// as globally optimal.
        #[test]
        fn prop_psd_kind_pins_designated(seed in any::<u64>(), coords in proptest::collection::vec(prop_oneof![Just(0.0), Just(0.25), Just(0.5), Just(1.0)], 1..=4)) {
            let n = coords.len();
            let fi = exact_sdprlt(n, &coords, &spec(seed)).unwrap();
            let cert = fi.sdprlt_cert.as_ref().unwrap();
            let point = fi.certified_point.as_ref().unwrap();
            let pinned = sdprlt::pin_value(&fi.instance, point, cert, rlt::DEFAULT_CERT_TOL).unwrap();
            let expected = fi.instance.objective(&fi.designated_point).unwrap();
            let scale = 1.0_f64.max(expected.abs());
            prop_assert!((pinned.value - expected).abs() <= 1e-8 * scale);

            let global = oracle::solve_global(&fi.instance, oracle::DEFAULT_ORACLE_TOL).unwrap();
            prop_assert!((global.value - pinned.value).abs() <= 1e-7 * scale);
        }
    }
}
