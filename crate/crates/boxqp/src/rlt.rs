//! The linear relaxation of a box-constrained QP obtained by replacing each
//! product `x_i x_j` with a lifted variable `X_ij` fenced in by its
//! McCormick envelopes over the unit box:
//!
//! ```text
//!     max(0, x_i + x_j - 1)  <=  X_ij  <=  min(x_i, x_j).
//! ```
//!
//! Minimizing `1/2 <Q, X> + c'x` over the envelope for fixed `x` has a
//! closed form: positive entries of `Q` pull `X_ij` to the lower envelope,
//! negative entries to the upper one. That yields a piecewise-linear convex
//! underestimator of the objective whose exact minimum over the box is
//! always attained on the lattice `{0, 1/2, 1}^n`, so small instances can
//! be solved by enumeration.
//!
//! The module also checks feasibility of lifted points, decomposes lifts
//! relative to the product `xx'`, and verifies optimality certificates
//! (dual multipliers with complementary slackness) for designated points.

use std::num::NonZeroUsize;

use crate::model::{BoxQpInstance, IndexPartition, LiftedPoint, RltCert, DEFAULT_BOX_TOL};
use crate::numlin::{dot, max_abs, SymMatrix};
use crate::{Error, Result};

/// Largest `n` the lattice solver accepts (`3^n` points are enumerated).
pub const DEFAULT_DIM_CAP: usize = 12;

/// Default relative tolerance for certificate residuals.
pub const DEFAULT_CERT_TOL: f64 = 1e-8;

/// Evaluates the closed-form underestimator without the box check.
///
/// Accumulates over all ordered pairs in row-major order with a single
/// accumulator; at box vertices this reproduces the objective's own
/// accumulation bit for bit.
fn underestimator_raw(q: &SymMatrix, c: &[f64], x: &[f64]) -> f64 {
    let n = q.n();
    let mut acc = 0.0;
    for i in 0..n {
        let row = q.row(i);
        let xi = x[i];
        for (j, &qij) in row.iter().enumerate() {
            if qij > 0.0 {
                let lo = (xi + x[j] - 1.0).max(0.0);
                acc += qij * lo;
            } else if qij < 0.0 {
                acc += qij * xi.min(x[j]);
            }
        }
    }
    0.5 * acc + dot(c, x)
}

/// Value of the relaxation's convex underestimator at `x` (which must lie
/// in the unit box up to the default bound tolerance).
pub fn underestimator(inst: &BoxQpInstance, x: &[f64]) -> Result<f64> {
    if x.len() != inst.n() {
        return Err(Error::DimensionMismatch { expected: inst.n(), found: x.len() });
    }
    for (j, &v) in x.iter().enumerate() {
        if !(v >= -DEFAULT_BOX_TOL && v <= 1.0 + DEFAULT_BOX_TOL) {
            return Err(Error::OutOfBox { index: j, value: v });
        }
    }
    Ok(underestimator_raw(inst.q(), inst.c(), x))
}

/// The lift that attains the underestimator at `x`: entrywise, the
/// McCormick bound the sign of `Q_ij` pulls toward (zero where `Q_ij` is).
pub fn optimal_lift(q: &SymMatrix, x: &[f64]) -> SymMatrix {
    SymMatrix::from_fn(q.n(), |i, j| {
        let qij = q[(i, j)];
        if qij > 0.0 {
            (x[i] + x[j] - 1.0).max(0.0)
        } else if qij < 0.0 {
            x[i].min(x[j])
        } else {
            0.0
        }
    })
}

/// Exact minimum of the linear relaxation.
#[derive(Clone, Debug, PartialEq)]
pub struct RltSolution {
    pub value: f64,
    /// Lexicographically smallest minimizing point on `{0, 1/2, 1}^n`,
    /// together with the lift attaining the value there.
    pub argmin: LiftedPoint,
    /// Number of lattice points attaining the minimum exactly.
    pub lattice_minimizers: usize,
}

/// Solves the relaxation exactly by enumerating the lattice `{0, 1/2, 1}^n`
/// with the default thread policy. Fails for `n` above the dimension cap.
pub fn solve(inst: &BoxQpInstance) -> Result<RltSolution> {
    solve_with_threads(inst, None)
}

struct ChunkBest {
    value: f64,
    index: usize,
    count: usize,
}

fn scan_lattice(q: &SymMatrix, c: &[f64], lo: usize, hi: usize) -> ChunkBest {
    let n = q.n();
    let mut x = vec![0.0f64; n];
    let mut best = ChunkBest { value: f64::INFINITY, index: lo, count: 0 };
    for idx in lo..hi {
        let mut rem = idx;
        // most significant digit first so index order is lexicographic order
        for j in (0..n).rev() {
            x[j] = match rem % 3 {
                0 => 0.0,
                1 => 0.5,
                _ => 1.0,
            };
            rem /= 3;
        }
        let v = underestimator_raw(q, c, &x);
        if v < best.value {
            best = ChunkBest { value: v, index: idx, count: 1 };
        } else if v == best.value {
            best.count += 1;
        }
    }
    best
}

fn merge_best(a: ChunkBest, b: ChunkBest) -> ChunkBest {
    if b.value < a.value {
        b
    } else if a.value < b.value {
        a
    } else {
        ChunkBest { value: a.value, index: a.index.min(b.index), count: a.count + b.count }
    }
}

fn resolve_threads(requested: Option<NonZeroUsize>, work: usize) -> usize {
    let threads = match requested {
        Some(k) => k.get(),
        None if work >= 19_683 => std::thread::available_parallelism().map_or(1, |p| p.get().min(8)),
        None => 1,
    };
    threads.max(1).min(work.max(1))
}

/// As [`solve`], with an explicit worker count. The lattice is split into
/// contiguous chunks and per-chunk results are merged in chunk order with
/// exact-equality tie breaking, so the outcome does not depend on the
/// worker count.
pub fn solve_with_threads(inst: &BoxQpInstance, threads: Option<NonZeroUsize>) -> Result<RltSolution> {
    let n = inst.n();
    if n > DEFAULT_DIM_CAP {
        return Err(Error::DimensionCap { n, cap: DEFAULT_DIM_CAP });
    }
    let total = 3usize.pow(n as u32);
    let workers = resolve_threads(threads, total);

    let best = if workers == 1 {
        scan_lattice(inst.q(), inst.c(), 0, total)
    } else {
        let chunk = total.div_ceil(workers);
        let q = inst.q();
        let c = inst.c();
        let results: Vec<ChunkBest> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let lo = w * chunk;
                    let hi = total.min(lo + chunk);
                    scope.spawn(move || scan_lattice(q, c, lo, hi))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("lattice worker panicked")).collect()
        });
        results.into_iter().reduce(merge_best).expect("at least one chunk")
    };

    let mut x = vec![0.0f64; n];
    let mut rem = best.index;
    for j in (0..n).rev() {
        x[j] = match rem % 3 {
            0 => 0.0,
            1 => 0.5,
            _ => 1.0,
        };
        rem /= 3;
    }
    let x_mat = optimal_lift(inst.q(), &x);
    Ok(RltSolution {
        value: best.value,
        argmin: LiftedPoint { x, x_mat },
        lattice_minimizers: best.count,
    })
}

/// A violated constraint of the relaxation's feasible set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// `x_j >= 0`
    BoxLower,
    /// `x_j <= 1`
    BoxUpper,
    /// `X_ij >= max(0, x_i + x_j - 1)`
    EnvelopeLower,
    /// `X_ij <= min(x_i, x_j)`
    EnvelopeUpper,
    /// `X - xx'` must be positive semidefinite (strengthened set only)
    LiftPsd,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::BoxLower => "box_lower",
            ViolationKind::BoxUpper => "box_upper",
            ViolationKind::EnvelopeLower => "envelope_lower",
            ViolationKind::EnvelopeUpper => "envelope_upper",
            ViolationKind::LiftPsd => "lift_psd",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub i: usize,
    pub j: usize,
    /// How far past the bound (after tolerance slack) the entry lies.
    pub amount: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MembershipReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

impl MembershipReport {
    pub fn max_violation(&self) -> f64 {
        self.violations.iter().fold(0.0, |m, v| m.max(v.amount))
    }
}

/// Checks membership of a lifted point in the relaxation's feasible set:
/// box bounds on `x` and McCormick envelopes on `X`, each allowed slack
/// `tol`.
pub fn membership(point: &LiftedPoint, tol: f64) -> MembershipReport {
    let n = point.n();
    let x = &point.x;
    let xm = &point.x_mat;
    let mut violations = Vec::new();
    for j in 0..n {
        if x[j] < -tol {
            violations.push(Violation { kind: ViolationKind::BoxLower, i: j, j, amount: -x[j] });
        }
        if x[j] > 1.0 + tol {
            violations.push(Violation { kind: ViolationKind::BoxUpper, i: j, j, amount: x[j] - 1.0 });
        }
    }
    for i in 0..n {
        for j in i..n {
            let lo = (x[i] + x[j] - 1.0).max(0.0);
            let hi = x[i].min(x[j]);
            let v = xm[(i, j)];
            if v < lo - tol {
                violations.push(Violation { kind: ViolationKind::EnvelopeLower, i, j, amount: lo - v });
            }
            if v > hi + tol {
                violations.push(Violation { kind: ViolationKind::EnvelopeUpper, i, j, amount: v - hi });
            }
        }
    }
    MembershipReport { feasible: violations.is_empty(), violations }
}

/// The lift split into product part and residual: `X = xx' + M`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub m: SymMatrix,
    /// Whether `M` satisfies the residual bounds equivalent to membership
    /// of `(x, X)` in the relaxation's feasible set: zero outside the
    /// interior block, two-sided envelope-derived bounds inside it.
    pub feasible: bool,
}

/// Splits `X = xx' + M` and tests the residual bounds with slack `tol`
/// (also used to decide which coordinates count as interior).
pub fn decompose(point: &LiftedPoint, tol: f64) -> Result<Decomposition> {
    let n = point.n();
    let x = &point.x;
    let partition = IndexPartition::of_point(x, tol)?;
    let interior: Vec<bool> = (0..n).map(|j| partition.band(j) == crate::model::Band::Interior).collect();
    let m = SymMatrix::from_fn(n, |i, j| point.x_mat[(i, j)] - x[i] * x[j]);

    let mut feasible = true;
    for i in 0..n {
        for j in i..n {
            let mij = m[(i, j)];
            if interior[i] && interior[j] {
                let prod = x[i] * x[j];
                let lo = (-prod).max(x[i] + x[j] - 1.0 - prod);
                let hi = (x[i] - prod).min(x[j] - prod);
                if mij < lo - tol || mij > hi + tol {
                    feasible = false;
                }
            } else if mij.abs() > tol {
                feasible = false;
            }
        }
    }
    Ok(Decomposition { m, feasible })
}

/// One named residual of a certificate check.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionResidual {
    pub name: &'static str,
    pub residual: f64,
    pub ok: bool,
}

/// Outcome of verifying a certificate against a designated lifted point.
///
/// `scale` is the common scaling `max(1, data max-norms)` applied to `tol`;
/// a certificate verifies when every condition's residual passes and the
/// point itself is feasible.
#[derive(Clone, Debug, PartialEq)]
pub struct CertCheck {
    pub verified: bool,
    pub scale: f64,
    pub conditions: Vec<ConditionResidual>,
    pub membership: MembershipReport,
}

impl CertCheck {
    pub fn failing(&self) -> Vec<&'static str> {
        self.conditions.iter().filter(|c| !c.ok).map(|c| c.name).collect()
    }
}

pub(crate) struct RltResiduals {
    pub eq_q: f64,
    pub eq_c: f64,
    pub cs_u: f64,
    pub cs_v: f64,
    pub cs_w: f64,
    pub cs_y: f64,
    pub cs_z: f64,
    pub neg_u: f64,
    pub neg_v: f64,
    pub neg_w: f64,
    pub neg_y: f64,
    pub neg_z: f64,
}

/// Shared residual computations for the plain and strengthened verifiers.
/// `extra_q`/`extra_c` carry the strengthened form's additional terms in
/// the two linear identities (zero matrices/vectors for the plain form).
pub(crate) fn rlt_residuals(
    inst: &BoxQpInstance,
    point: &LiftedPoint,
    cert: &RltCert,
    extra_q: Option<&SymMatrix>,
    extra_c: Option<&[f64]>,
) -> RltResiduals {
    let n = inst.n();
    let q = inst.q();
    let c = inst.c();
    let x = &point.x;
    let xm = &point.x_mat;
    let (u, v, w, y, z) = (&cert.u, &cert.v, &cert.w, &cert.y, &cert.z);

    let mut eq_q = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut rhs = w[(i, j)] - y[(i, j)] - y[(j, i)] + z[(i, j)];
            if let Some(h) = extra_q {
                rhs += h[(i, j)];
            }
            eq_q = eq_q.max((q[(i, j)] - rhs).abs());
        }
    }

    let mut eq_c = 0.0f64;
    for j in 0..n {
        let we: f64 = w.row(j).iter().sum();
        let yte: f64 = (0..n).map(|i| y[(i, j)]).sum();
        let mut rhs = -u[j] + v[j] - we + yte;
        if let Some(h) = extra_c {
            rhs += h[j];
        }
        eq_c = eq_c.max((c[j] - rhs).abs());
    }

    let cs_u: f64 = u.iter().zip(x).map(|(ui, xi)| ui * (1.0 - xi)).sum::<f64>().abs();
    let cs_v: f64 = dot(v, x).abs();

    let mut cs_w = 0.0f64;
    let mut cs_y = 0.0f64;
    let mut cs_z = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            cs_w += w[(i, j)] * (xm[(i, j)] - x[i] - x[j] + 1.0);
            cs_y += y[(i, j)] * (x[j] - xm[(i, j)]);
            cs_z += z[(i, j)] * xm[(i, j)];
        }
    }
    let (cs_w, cs_y, cs_z) = (cs_w.abs(), cs_y.abs(), cs_z.abs());

    let neg = |vals: &[f64]| -> f64 { vals.iter().fold(0.0f64, |m, &t| m.max(-t)) };
    let neg_u = neg(u);
    let neg_v = neg(v);
    let neg_w = (0..n).fold(0.0f64, |m, i| m.max(neg(w.row(i))));
    let neg_y = (0..n).fold(0.0f64, |m, i| m.max(neg(y.row(i))));
    let neg_z = (0..n).fold(0.0f64, |m, i| m.max(neg(z.row(i))));

    RltResiduals { eq_q, eq_c, cs_u, cs_v, cs_w, cs_y, cs_z, neg_u, neg_v, neg_w, neg_y, neg_z }
}

pub(crate) fn cert_scale(inst: &BoxQpInstance, cert: &RltCert) -> f64 {
    1.0f64
        .max(inst.q().max_norm())
        .max(max_abs(inst.c()))
        .max(max_abs(&cert.u))
        .max(max_abs(&cert.v))
        .max(cert.w.max_norm())
        .max(cert.y.max_norm())
        .max(cert.z.max_norm())
}

/// Verifies that `cert` proves `point` optimal for the linear relaxation of
/// `inst`: the two linear identities tying `(Q, c)` to the multipliers,
/// complementary slackness of every multiplier block, entrywise
/// nonnegativity, and feasibility of the point itself. Residuals are
/// compared against `tol * max(1, data max-norms)`.
pub fn verify_certificate(
    inst: &BoxQpInstance,
    point: &LiftedPoint,
    cert: &RltCert,
    tol: f64,
) -> Result<CertCheck> {
    if point.n() != inst.n() {
        return Err(Error::DimensionMismatch { expected: inst.n(), found: point.n() });
    }
    cert.validate_dims()?;
    if cert.n() != inst.n() {
        return Err(Error::DimensionMismatch { expected: inst.n(), found: cert.n() });
    }

    let scale = cert_scale(inst, cert);
    let r = rlt_residuals(inst, point, cert, None, None);
    let member = membership(point, tol);

    let mut conditions = vec![
        ("dual_eq_q", r.eq_q),
        ("dual_eq_c", r.eq_c),
        ("comp_slack_u", r.cs_u),
        ("comp_slack_v", r.cs_v),
        ("comp_slack_w", r.cs_w),
        ("comp_slack_y", r.cs_y),
        ("comp_slack_z", r.cs_z),
        ("nonneg_u", r.neg_u),
        ("nonneg_v", r.neg_v),
        ("nonneg_w", r.neg_w),
        ("nonneg_y", r.neg_y),
        ("nonneg_z", r.neg_z),
    ]
    .into_iter()
    .map(|(name, residual)| ConditionResidual { name, residual, ok: residual <= tol * scale })
    .collect::<Vec<_>>();
    conditions.push(ConditionResidual {
        name: "primal_feasible",
        residual: member.max_violation(),
        ok: member.feasible,
    });

    let verified = conditions.iter().all(|c| c.ok);
    Ok(CertCheck { verified, scale, conditions, membership: member })
}

/// Dual objective `-e'u - 1/2 e'We` of a certificate; by weak duality this
/// never exceeds the relaxation's exact minimum when the certificate's
/// linear identities and nonnegativity hold.
pub fn dual_objective(cert: &RltCert) -> f64 {
    let n = cert.n();
    let mut we = 0.0;
    for i in 0..n {
        we += cert.w.row(i).iter().sum::<f64>();
    }
    -cert.u.iter().sum::<f64>() - 0.5 * we
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn example_indefinite() -> BoxQpInstance {
        let q = SymMatrix::from_rows(&[vec![-1.0, -2.0], vec![-2.0, 1.0]], 0.0).unwrap();
        BoxQpInstance::new(q, vec![1.0, 1.0]).unwrap()
    }

    fn random_instance(rng: &mut ChaCha8Rng, n: usize, span: f64) -> BoxQpInstance {
        let q = SymMatrix::from_fn(n, |_, _| rng.random_range(-span..=span));
        let c = (0..n).map(|_| rng.random_range(-span..=span)).collect();
        BoxQpInstance::new(q, c).unwrap()
    }

    #[test]
    fn underestimator_at_half_point() {
        let inst = example_indefinite();
        assert_eq!(underestimator(&inst, &[0.5, 0.5]).unwrap(), -0.25);
    }

    #[test]
    fn underestimator_rejects_outside_box() {
        let inst = example_indefinite();
        assert!(matches!(
            underestimator(&inst, &[1.5, 0.0]),
            Err(Error::OutOfBox { index: 0, .. })
        ));
    }

    #[test]
    fn negative_average_instance_at_center() {
        // Q = ones(3)/3 - I, c = 0: every off-diagonal pulls to min(x_i, x_j)
        let q = SymMatrix::from_fn(3, |i, j| 1.0 / 3.0 - if i == j { 1.0 } else { 0.0 });
        let inst = BoxQpInstance::new(q, vec![0.0; 3]).unwrap();
        let v = underestimator(&inst, &[0.5; 3]).unwrap();
        assert!((v - (-0.5)).abs() <= 1e-15, "got {v}");
    }

    #[test]
    fn solve_example_indefinite() {
        let sol = solve(&example_indefinite()).unwrap();
        assert_eq!(sol.value, -0.25);
        assert_eq!(sol.argmin.x, vec![0.5, 0.5]);
        assert_eq!(sol.lattice_minimizers, 1);
    }

    #[test]
    fn solve_identity_quadratic() {
        let inst = BoxQpInstance::new(SymMatrix::identity(3), vec![0.0; 3]).unwrap();
        let sol = solve(&inst).unwrap();
        assert_eq!(sol.value, 0.0);
        assert_eq!(sol.argmin.x, vec![0.0; 3]);
        // zero is attained wherever every coordinate is 0 or 1/2
        assert_eq!(sol.lattice_minimizers, 8);
    }

    #[test]
    fn solve_respects_dimension_cap() {
        let inst = BoxQpInstance::new(SymMatrix::zeros(13), vec![0.0; 13]).unwrap();
        assert!(matches!(solve(&inst), Err(Error::DimensionCap { n: 13, cap: 12 })));
    }

    #[test]
    fn solve_agrees_across_thread_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let inst = random_instance(&mut rng, 5, 2.0);
            let a = solve_with_threads(&inst, NonZeroUsize::new(1)).unwrap();
            let b = solve_with_threads(&inst, NonZeroUsize::new(4)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn lattice_minimum_matches_fine_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let inst = random_instance(&mut rng, 3, 2.0);
            let sol = solve(&inst).unwrap();
            let k = 41; // includes 0, 1/2, 1, so the lattice is a subset
            let mut grid_min = f64::INFINITY;
            for a in 0..k {
                for b in 0..k {
                    for c in 0..k {
                        let x = [
                            a as f64 / (k - 1) as f64,
                            b as f64 / (k - 1) as f64,
                            c as f64 / (k - 1) as f64,
                        ];
                        grid_min = grid_min.min(underestimator_raw(inst.q(), inst.c(), &x));
                    }
                }
            }
            assert!(sol.value <= grid_min + 1e-12);
            assert!(grid_min <= sol.value + 1e-12);
        }
    }

    #[test]
    fn membership_accepts_products_and_flags_envelope_breaks() {
        let good = LiftedPoint::outer(&[0.3, 0.9]);
        assert!(membership(&good, 1e-9).feasible);

        let bad = LiftedPoint::new(
            vec![0.5, 0.5],
            SymMatrix::from_rows(&[vec![0.25, 0.55], vec![0.55, 0.25]], 0.0).unwrap(),
        )
        .unwrap();
        let report = membership(&bad, 1e-9);
        assert!(!report.feasible);
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!(v.kind, ViolationKind::EnvelopeUpper);
        assert_eq!((v.i, v.j), (0, 1));
        assert!((v.amount - 0.05).abs() <= 1e-12);
    }

    #[test]
    fn membership_accepts_centered_spread_lift() {
        // x = e/2 with X = (1+a)/4 I + (1-a)/4 ee', a = 1/(n-1): diagonal
        // hits the upper envelope, off-diagonals stay strictly inside.
        let n = 3;
        let a = 1.0 / (n as f64 - 1.0);
        let x = vec![0.5; n];
        let xm = SymMatrix::from_fn(n, |i, j| {
            if i == j {
                0.5
            } else {
                0.25 * (1.0 - a)
            }
        });
        let point = LiftedPoint::new(x, xm).unwrap();
        assert!(membership(&point, 1e-12).feasible);

        let d = decompose(&point, 1e-9).unwrap();
        assert!(d.feasible);
        assert!((d.m[(0, 0)] - 0.25).abs() <= 1e-15);
        assert!((d.m[(0, 1)] - (-0.125)).abs() <= 1e-15);
    }

    #[test]
    fn decompose_rejects_offset_at_vertices() {
        let x = vec![0.0, 1.0];
        let mut xm = LiftedPoint::outer(&x).x_mat;
        xm.set(0, 1, 0.3);
        let d = decompose(&LiftedPoint::new(x, xm).unwrap(), 1e-9).unwrap();
        assert!(!d.feasible);
        assert!((d.m[(0, 1)] - 0.3).abs() <= 1e-15);
    }

    #[test]
    fn zero_certificate_verifies_zero_instance_at_origin() {
        let inst = BoxQpInstance::new(SymMatrix::zeros(2), vec![0.0; 2]).unwrap();
        let cert = RltCert::zeros(2);
        let point = LiftedPoint::outer(&[0.0, 0.0]);
        let check = verify_certificate(&inst, &point, &cert, DEFAULT_CERT_TOL).unwrap();
        assert!(check.verified);
        assert!(check.conditions.iter().all(|c| c.residual == 0.0));
    }

    #[test]
    fn dual_objective_examples() {
        assert_eq!(dual_objective(&RltCert::zeros(3)), 0.0);
        let mut cert = RltCert::zeros(3);
        cert.u = vec![1.0; 3];
        assert_eq!(dual_objective(&cert), -3.0);
        cert.u = vec![0.0; 3];
        cert.w = SymMatrix::identity(3);
        assert_eq!(dual_objective(&cert), -1.5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn underestimates_objective_everywhere(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.random_range(1..=5);
            let inst = random_instance(&mut rng, n, 3.0);
            for _ in 0..20 {
                let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=1.0)).collect();
                let under = underestimator(&inst, &x).unwrap();
                let q = inst.objective(&x).unwrap();
                prop_assert!(under <= q + 1e-10, "{under} > {q}");
            }
        }

        #[test]
        fn matches_objective_exactly_at_vertices(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.random_range(1..=6);
            let inst = random_instance(&mut rng, n, 3.0);
            for mask in 0..(1usize << n) {
                let v: Vec<f64> = (0..n).map(|j| ((mask >> j) & 1) as f64).collect();
                prop_assert_eq!(
                    underestimator(&inst, &v).unwrap(),
                    inst.objective(&v).unwrap()
                );
            }
        }

        #[test]
        fn midpoint_convexity(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.random_range(1..=5);
            let inst = random_instance(&mut rng, n, 3.0);
            let a: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=1.0)).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=1.0)).collect();
            let mid: Vec<f64> = a.iter().zip(&b).map(|(p, q)| 0.5 * (p + q)).collect();
            let lhs = underestimator(&inst, &mid).unwrap();
            let rhs = 0.5 * underestimator(&inst, &a).unwrap() + 0.5 * underestimator(&inst, &b).unwrap();
            prop_assert!(lhs <= rhs + 1e-10);
        }

        #[test]
        fn solution_lift_is_feasible_and_attains_value(seed in 0u64..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.random_range(1..=4);
            let inst = random_instance(&mut rng, n, 3.0);
            let sol = solve(&inst).unwrap();
            prop_assert!(membership(&sol.argmin, 1e-12).feasible);
            for &xi in &sol.argmin.x {
                prop_assert!(xi == 0.0 || xi == 0.5 || xi == 1.0);
            }
            let attained = 0.5 * inst.q().inner(&sol.argmin.x_mat) + dot(inst.c(), &sol.argmin.x);
            prop_assert!((attained - sol.value).abs() <= 1e-12);
        }
    }
}
