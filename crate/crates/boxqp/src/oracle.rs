//! Exact global minimization of small box-constrained QPs.
//!
//! Every point of the box lies in exactly one open face, determined by
//! which coordinates sit at 0, at 1, or strictly between. A global
//! minimizer is stationary within its own open face, so enumerating all
//! `3^n` support patterns, solving the stationarity system on each face,
//! and keeping representatives that actually lie in the open face covers
//! every possible minimizer. Vertices (empty interior block) are always
//! candidates, so a minimum is always found.
//!
//! A face whose stationarity system is consistent but singular carries a
//! whole affine set of stationary points with one common objective value;
//! a kernel line search tries to center a representative inside the box.
//! When the nullity is 2 or more and no representative is found, the face
//! is counted in `degenerate_faces` so callers can fall back to the grid
//! search.

use std::num::NonZeroUsize;

use crate::model::{Band, BoxQpInstance, IndexPartition, DEFAULT_BOX_TOL};
use crate::numlin::{is_psd, max_abs, solve_min_norm, Mat};
use crate::rlt::DEFAULT_DIM_CAP;
use crate::{Error, Result};

/// Default tolerance: linear-system cutoffs and the margin a face
/// representative must keep from the bounds.
pub const DEFAULT_ORACLE_TOL: f64 = 1e-9;

/// Largest `n` the grid search accepts.
pub const GRID_DIM_CAP: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    FaceEnumeration,
    Grid,
}

impl SolveMethod {
    pub fn name(self) -> &'static str {
        match self {
            SolveMethod::FaceEnumeration => "face-enumeration",
            SolveMethod::Grid => "grid",
        }
    }
}

/// A certified global minimum (for [`solve_global`]) or a grid minimum
/// (for [`solve_grid`]).
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalSolution {
    pub value: f64,
    pub argmin: Vec<f64>,
    pub method: SolveMethod,
    /// Feasible points whose objective was compared.
    pub candidates_examined: usize,
    /// Faces with a consistent stationarity system of nullity two or more
    /// where no in-face representative was found; nonzero means the
    /// reported minimum could in principle miss such a face.
    pub degenerate_faces: usize,
}

/// Tries to move `x0` into the open box `[margin, 1-margin]^d` along the
/// kernel columns. Objective values are unaffected: the kernel directions
/// keep the stationarity residual (and on a stationary set, the value)
/// unchanged.
fn interior_representative(x0: &[f64], kernel: &Mat, margin: f64) -> Option<Vec<f64>> {
    let inside = |x: &[f64]| x.iter().all(|&v| v >= margin && v <= 1.0 - margin);
    let mut x = x0.to_vec();
    if inside(&x) {
        return Some(x);
    }
    if kernel.cols() == 0 {
        return None;
    }
    for _ in 0..3 {
        for col in 0..kernel.cols() {
            let k = kernel.col(col);
            let mut lo = f64::NEG_INFINITY;
            let mut hi = f64::INFINITY;
            let mut movable = false;
            for (xi, ki) in x.iter().zip(&k) {
                if ki.abs() <= 1e-13 {
                    continue;
                }
                movable = true;
                let a = (margin - xi) / ki;
                let b = (1.0 - margin - xi) / ki;
                lo = lo.max(a.min(b));
                hi = hi.min(a.max(b));
            }
            if !movable || lo > hi {
                continue;
            }
            let t = 0.5 * (lo + hi);
            for (xi, ki) in x.iter_mut().zip(&k) {
                *xi += t * ki;
            }
        }
        if inside(&x) {
            return Some(x);
        }
    }
    None
}

struct PatternScan {
    value: f64,
    pattern: usize,
    x: Vec<f64>,
    candidates: usize,
    degenerate: usize,
}

fn scan_patterns(inst: &BoxQpInstance, tol: f64, lo: usize, hi: usize) -> Result<PatternScan> {
    let n = inst.n();
    let q = inst.q();
    let c = inst.c();
    let mut best = PatternScan {
        value: f64::INFINITY,
        pattern: lo,
        x: vec![0.0; n],
        candidates: 0,
        degenerate: 0,
    };
    let mut digits = vec![0u8; n];
    let mut x = vec![0.0f64; n];

    for pattern in lo..hi {
        let mut rem = pattern;
        for j in (0..n).rev() {
            digits[j] = (rem % 3) as u8;
            rem /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&j| digits[j] == 1).collect();
        for j in 0..n {
            x[j] = match digits[j] {
                0 => 0.0,
                1 => 0.0, // filled from the stationary solve below
                _ => 1.0,
            };
        }

        let candidate: Option<Vec<f64>> = if free.is_empty() {
            Some(x.clone())
        } else {
            let a = q.principal(&free);
            let rhs: Vec<f64> = free
                .iter()
                .map(|&b| {
                    let mut s = c[b];
                    for j in 0..n {
                        if digits[j] == 2 {
                            s += q[(b, j)];
                        }
                    }
                    -s
                })
                .collect();
            let sol = solve_min_norm(&a, &rhs, tol)?;
            if !sol.consistent {
                None
            } else {
                match interior_representative(&sol.x, &sol.kernel, tol) {
                    Some(xb) => {
                        let mut full = x.clone();
                        for (slot, &j) in free.iter().enumerate() {
                            full[j] = xb[slot];
                        }
                        Some(full)
                    }
                    None => {
                        if sol.nullity >= 2 {
                            best.degenerate += 1;
                        }
                        None
                    }
                }
            }
        };

        if let Some(point) = candidate {
            let value = inst.objective(&point)?;
            best.candidates += 1;
            if value < best.value {
                best.value = value;
                best.pattern = pattern;
                best.x = point;
            }
        }
    }
    Ok(best)
}

fn merge_scans(a: PatternScan, b: PatternScan) -> PatternScan {
    let (mut keep, other) = if b.value < a.value || (b.value == a.value && b.pattern < a.pattern) {
        (b, a)
    } else {
        (a, b)
    };
    keep.candidates += other.candidates;
    keep.degenerate += other.degenerate;
    keep
}

/// Exact global minimum by face enumeration with the default thread
/// policy. `tol` controls the stationarity solves' rank cutoff and the
/// interior margin for face representatives.
pub fn solve_global(inst: &BoxQpInstance, tol: f64) -> Result<GlobalSolution> {
    solve_global_with_threads(inst, tol, None)
}

/// As [`solve_global`] with an explicit worker count; results are merged
/// in pattern order, so the outcome does not depend on the worker count.
pub fn solve_global_with_threads(
    inst: &BoxQpInstance,
    tol: f64,
    threads: Option<NonZeroUsize>,
) -> Result<GlobalSolution> {
    let n = inst.n();
    if n > DEFAULT_DIM_CAP {
        return Err(Error::DimensionCap { n, cap: DEFAULT_DIM_CAP });
    }
    let total = 3usize.pow(n as u32);
    let workers = match threads {
        Some(k) => k.get().min(total),
        None if total >= 19_683 => std::thread::available_parallelism().map_or(1, |p| p.get().min(8)),
        None => 1,
    }
    .max(1);

    let best = if workers == 1 {
        scan_patterns(inst, tol, 0, total)?
    } else {
        let chunk = total.div_ceil(workers);
        let results: Vec<Result<PatternScan>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let lo = w * chunk;
                    let hi = total.min(lo + chunk);
                    scope.spawn(move || scan_patterns(inst, tol, lo, hi))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("pattern worker panicked")).collect()
        });
        let mut merged: Option<PatternScan> = None;
        for r in results {
            let scan = r?;
            merged = Some(match merged {
                None => scan,
                Some(acc) => merge_scans(acc, scan),
            });
        }
        merged.expect("at least one chunk")
    };

    Ok(GlobalSolution {
        value: best.value,
        argmin: best.x,
        method: SolveMethod::FaceEnumeration,
        candidates_examined: best.candidates,
        degenerate_faces: best.degenerate,
    })
}

/// Minimum of the objective over the uniform grid with `points_per_axis`
/// points per axis (odd and at least 3, so that 0, 1/2, and 1 are all on
/// the grid). Only supports `n` up to [`GRID_DIM_CAP`].
pub fn solve_grid(inst: &BoxQpInstance, points_per_axis: usize) -> Result<GlobalSolution> {
    let n = inst.n();
    if n > GRID_DIM_CAP {
        return Err(Error::DimensionCap { n, cap: GRID_DIM_CAP });
    }
    if points_per_axis < 3 || points_per_axis % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "points_per_axis {} must be odd and at least 3",
            points_per_axis
        )));
    }
    let k = points_per_axis;
    let step = (k - 1) as f64;
    let total = k.pow(n as u32);
    let mut best_value = f64::INFINITY;
    let mut best_x = vec![0.0; n];
    let mut x = vec![0.0f64; n];
    for idx in 0..total {
        let mut rem = idx;
        for j in (0..n).rev() {
            x[j] = (rem % k) as f64 / step;
            rem /= k;
        }
        let v = inst.objective(&x)?;
        if v < best_value {
            best_value = v;
            best_x.copy_from_slice(&x);
        }
    }
    Ok(GlobalSolution {
        value: best_value,
        argmin: best_x,
        method: SolveMethod::Grid,
        candidates_examined: total,
        degenerate_faces: 0,
    })
}

/// First-order optimality data at a feasible point.
///
/// `u` and `v` are the unique multipliers for `x <= e` and `x >= 0`
/// implied by the gradient: `u_j = -g_j` on coordinates at 1, `v_j = g_j`
/// on coordinates at 0, zero elsewhere. The check passes when both are
/// nonnegative (up to tolerance) and the gradient vanishes on interior
/// coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstOrderCheck {
    pub satisfied: bool,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub gradient: Vec<f64>,
}

/// Evaluates the first-order conditions at `x` with tolerance scaled by
/// `max(1, ||Q||_max, ||c||_max)`. Coordinates are banded with the default
/// bound tolerance.
pub fn check_first_order(inst: &BoxQpInstance, x: &[f64], tol: f64) -> Result<FirstOrderCheck> {
    if x.len() != inst.n() {
        return Err(Error::DimensionMismatch { expected: inst.n(), found: x.len() });
    }
    let partition = IndexPartition::of_point(x, DEFAULT_BOX_TOL)?;
    let mut gradient = inst.q().matvec(x);
    for (gj, cj) in gradient.iter_mut().zip(inst.c()) {
        *gj += cj;
    }
    let scale = inst.q().max_norm().max(max_abs(inst.c())).max(1.0);
    let slack = tol * scale;

    let n = inst.n();
    let mut u = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut satisfied = true;
    for j in 0..n {
        match partition.band(j) {
            Band::Upper => {
                u[j] = -gradient[j];
                if u[j] < -slack {
                    satisfied = false;
                }
            }
            Band::Lower => {
                v[j] = gradient[j];
                if v[j] < -slack {
                    satisfied = false;
                }
            }
            Band::Interior => {
                if gradient[j].abs() > slack {
                    satisfied = false;
                }
            }
        }
    }
    Ok(FirstOrderCheck { satisfied, u, v, gradient })
}

/// Second-order necessary condition at `x`: the principal block of `Q` on
/// the interior coordinates must be positive semidefinite. Vacuously true
/// at vertices.
pub fn check_second_order(inst: &BoxQpInstance, x: &[f64], tol: f64) -> Result<bool> {
    let partition = IndexPartition::of_point(x, DEFAULT_BOX_TOL)?;
    let interior = partition.interior();
    if interior.is_empty() {
        return Ok(true);
    }
    is_psd(&inst.q().principal(&interior), tol)
}
