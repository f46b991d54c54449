//! Exactness classification: decide how tight the two relaxations are on a
//! given instance, using only exhaustive enumeration plus whatever
//! certificates or witnesses the caller can supply.
//!
//! The classifier computes two numbers itself — the linear relaxation value
//! (lattice enumeration) and the optimal value (face enumeration) — and
//! never solves the semidefinite strengthening. The strengthened value is
//! sandwiched between those two; it can only be *pinned* by a verified
//! optimality certificate, or *bounded from above* by a feasible witness
//! point. The resulting [`ExactnessReport`] states exactly as much as the
//! evidence supports:
//!
//! * relaxation value equals the optimum: label `E1` (the sandwich pins
//!   the strengthened value too);
//! * a certificate pins the strengthened value at the optimum: `E2`;
//! * a certificate pins it strictly between: `E3` when it coincides with
//!   the relaxation value, `E4` otherwise;
//! * a witness proves it sits strictly below the optimum but cannot locate
//!   it: `E3` when the witness collapses the sandwich onto the relaxation
//!   value, otherwise a `Partial` label carrying the proven interval;
//! * no usable evidence: a `Partial` label saying which side is open.
//!
//! Evidence that contradicts the enumerated values (a pinned value outside
//! the sandwich, a witness below the relaxation value) is reported as
//! [`Error::InconsistentReport`] rather than silently clamped.

use crate::error::{Error, Result};
use crate::forge::ForgedInstance;
use crate::model::{BoxQpInstance, ExactnessLabel, ExactnessReport, LiftedPoint, SdpRltCert};
use crate::{oracle, rlt, sdprlt};

/// Default relative tolerance for value comparisons during classification.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-7;

/// Optional evidence handed to [`classify`].
#[derive(Clone, Debug, Default)]
pub struct Hints {
    /// A lifted point together with a certificate that, if verified, pins
    /// the strengthened relaxation value at that point's objective value.
    pub pinned: Option<(LiftedPoint, SdpRltCert)>,
    /// A feasible point of the strengthened relaxation whose objective
    /// value bounds the strengthened value from above.
    pub witness: Option<LiftedPoint>,
}

impl Hints {
    pub fn none() -> Self {
        Hints::default()
    }

    /// Extracts whatever evidence a generated instance carries: the
    /// strengthened certificate with its certified point when present, and
    /// the witness otherwise.
    pub fn from_forged(fi: &ForgedInstance) -> Self {
        let pinned = match (&fi.sdprlt_cert, &fi.certified_point) {
            (Some(cert), Some(point)) => Some((point.clone(), cert.clone())),
            _ => None,
        };
        Hints { pinned, witness: fi.witness.clone() }
    }
}

/// `a` equals `b` up to `tol`, relative to the magnitude of `b`.
fn eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1.0_f64.max(b.abs())
}

/// Pure label decision from the established numbers. `pinned` is a proven
/// exact strengthened value; `witness` is a proven upper bound on it.
/// Returns the label and the strengthened value when it is determined.
fn decide_label(
    rlt_value: f64,
    global_value: f64,
    pinned: Option<f64>,
    witness: Option<f64>,
    tol: f64,
) -> Result<(ExactnessLabel, Option<f64>)> {
    let scale = 1.0_f64.max(global_value.abs());
    if rlt_value > global_value + tol * scale {
        return Err(Error::InconsistentReport(format!(
            "relaxation value {rlt_value} exceeds the optimal value {global_value}"
        )));
    }
    if let Some(s) = pinned {
        if s < rlt_value - tol * 1.0_f64.max(rlt_value.abs()) || s > global_value + tol * scale {
            return Err(Error::InconsistentReport(format!(
                "pinned strengthened value {s} falls outside [{rlt_value}, {global_value}]"
            )));
        }
    }
    if let Some(wv) = witness {
        if wv < rlt_value - tol * 1.0_f64.max(rlt_value.abs()) {
            return Err(Error::InconsistentReport(format!(
                "witness value {wv} undercuts the relaxation value {rlt_value}"
            )));
        }
    }

    if eq(rlt_value, global_value, tol) {
        // The strengthened value is sandwiched between two equal numbers.
        if let Some(wv) = witness {
            if wv < global_value - tol * scale {
                return Err(Error::InconsistentReport(format!(
                    "witness value {wv} contradicts an exact relaxation at {global_value}"
                )));
            }
        }
        return Ok((ExactnessLabel::E1, Some(global_value)));
    }

    if let Some(s) = pinned {
        if eq(s, global_value, tol) {
            return Ok((ExactnessLabel::E2, Some(s)));
        }
        if eq(rlt_value, s, tol) {
            return Ok((ExactnessLabel::E3, Some(s)));
        }
        return Ok((ExactnessLabel::E4, Some(s)));
    }

    if let Some(wv) = witness {
        if wv < global_value - tol * scale {
            if eq(rlt_value, wv, tol) {
                // The sandwich [relaxation value, witness value] has
                // collapsed: both relaxations share the same loose value.
                return Ok((ExactnessLabel::E3, Some(rlt_value)));
            }
            return Ok((
                ExactnessLabel::Partial(format!(
                    "strengthening proven inexact: its value lies in \
                     [{rlt_value:.9}, {wv:.9}], strictly below the optimum \
                     {global_value:.9}"
                )),
                None,
            ));
        }
        return Ok((
            ExactnessLabel::Partial(format!(
                "relaxation inexact; the witness bound {wv:.9} does not \
                 separate the strengthened value from the optimum \
                 {global_value:.9}"
            )),
            None,
        ));
    }

    Ok((
        ExactnessLabel::Partial(
            "relaxation inexact; no certificate or witness located the strengthened value"
                .into(),
        ),
        None,
    ))
}

/// Classifies `inst` using exhaustive enumeration for the relaxation and
/// optimal values plus the supplied evidence for the strengthened value.
///
/// Invalid evidence is an error, not a downgrade: a certificate that fails
/// verification or a witness that is infeasible aborts classification, and
/// evidence inconsistent with the enumerated values yields
/// [`Error::InconsistentReport`].
pub fn classify(inst: &BoxQpInstance, hints: &Hints, tol: f64) -> Result<ExactnessReport> {
    let rlt_value = rlt::solve(inst)?.value;
    let global = oracle::solve_global(inst, oracle::DEFAULT_ORACLE_TOL)?;

    let pinned = match &hints.pinned {
        Some((point, cert)) => Some(sdprlt::pin_value(inst, point, cert, tol)?.value),
        None => None,
    };
    let witness = match &hints.witness {
        Some(point) => Some(sdprlt::witness_upper_bound(inst, point, tol)?),
        None => None,
    };

    let (label, sdprlt_value) = decide_label(rlt_value, global.value, pinned, witness, tol)?;
    Ok(ExactnessReport { rlt_value, global_value: Some(global.value), sdprlt_value, label })
}
