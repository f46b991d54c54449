//! The semidefinite strengthening of the linear relaxation: on top of the
//! McCormick envelopes, the lift must satisfy `X - xx' >= 0` (psd).
//!
//! No SDP solver is involved anywhere. The strengthened bound is only ever
//! *pinned* (certified exactly) or bounded: a certificate whose residuals
//! vanish and whose primal and dual values agree pins the optimal value,
//! and any feasible lifted point yields an upper bound on it. Strong
//! duality holds for this pair (both sides are strictly feasible), which is
//! what makes pinning sound.
//!
//! Dual certificates extend the linear relaxation's multipliers by a
//! bordered block `[[beta, h'], [h, H]]` required to be psd; it enters the
//! two linear identities as `+H` and `+h` and pairs in complementary
//! slackness with the point's own bordered matrix `[[1, x'], [x, X]]`.

use crate::model::{BoxQpInstance, LiftedPoint, SdpRltCert};
use crate::numlin::{dot, eig_sym, SymMatrix};
use crate::rlt::{
    cert_scale, rlt_residuals, CertCheck, ConditionResidual, MembershipReport, Violation,
    ViolationKind,
};
use crate::{Error, Result};

/// Checks membership of a lifted point in the strengthened feasible set:
/// the linear envelope checks plus positive semidefiniteness of `X - xx'`
/// down to `-tol * max(1, norm)`.
pub fn membership(point: &LiftedPoint, tol: f64) -> Result<MembershipReport> {
    let mut report = crate::rlt::membership(point, tol);
    let n = point.n();
    let m = SymMatrix::from_fn(n, |i, j| point.x_mat[(i, j)] - point.x[i] * point.x[j]);
    let (lambda, _) = eig_sym(&m)?;
    let floor = -tol * m.max_norm().max(1.0);
    if lambda[0] < floor {
        report.feasible = false;
        report.violations.push(Violation {
            kind: ViolationKind::LiftPsd,
            i: 0,
            j: 0,
            amount: -lambda[0],
        });
    }
    Ok(report)
}

/// Verifies that `cert` proves `point` optimal for the strengthened
/// relaxation of `inst`: the linear identities with the `+H`/`+h` terms,
/// all multiplier slackness and nonnegativity conditions, semidefiniteness
/// of the bordered block, its complementary slackness against
/// `[[1, x'], [x, X]]`, and feasibility of the point.
pub fn verify_certificate(
    inst: &BoxQpInstance,
    point: &LiftedPoint,
    cert: &SdpRltCert,
    tol: f64,
) -> Result<CertCheck> {
    if point.n() != inst.n() {
        return Err(Error::DimensionMismatch { expected: inst.n(), found: point.n() });
    }
    cert.validate_dims()?;
    if cert.n() != inst.n() {
        return Err(Error::DimensionMismatch { expected: inst.n(), found: cert.n() });
    }

    let bordered = cert.bordered();
    let scale = cert_scale(inst, &cert.base).max(bordered.max_norm());
    let r = rlt_residuals(inst, point, &cert.base, Some(&cert.h_mat), Some(&cert.h));

    let (lambda, _) = eig_sym(&bordered)?;
    let bordered_neg = (-lambda[0]).max(0.0);

    // <[[1, x'], [x, X]], [[beta, h'], [h, H]]> = beta + 2 h'x + <H, X>
    let cs_psd = (cert.beta + 2.0 * dot(&cert.h, &point.x) + cert.h_mat.inner(&point.x_mat)).abs();

    let member = membership(point, tol)?;

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
        ("bordered_psd", bordered_neg),
        ("comp_slack_psd", cs_psd),
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

/// Dual objective `-e'u - 1/2 e'We - beta/2` of a strengthened certificate.
pub fn dual_objective(cert: &SdpRltCert) -> f64 {
    crate::rlt::dual_objective(&cert.base) - 0.5 * cert.beta
}

/// An exactly certified optimal value of the strengthened relaxation.
#[derive(Clone, Debug, PartialEq)]
pub struct PinnedValue {
    pub value: f64,
    pub witness: LiftedPoint,
    pub certificate: SdpRltCert,
}

/// Pins the strengthened relaxation's optimal value: the certificate must
/// verify at `point` and the primal value `1/2 <Q, X> + c'x` must agree
/// with the dual objective within `tol * max(1, |value|)`. Anything less
/// is reported as an invalid certificate, never as a weaker claim.
pub fn pin_value(
    inst: &BoxQpInstance,
    point: &LiftedPoint,
    cert: &SdpRltCert,
    tol: f64,
) -> Result<PinnedValue> {
    let check = verify_certificate(inst, point, cert, tol)?;
    if !check.verified {
        return Err(Error::CertificateInvalid(format!(
            "conditions failed: {}",
            check.failing().join(", ")
        )));
    }
    let primal = 0.5 * inst.q().inner(&point.x_mat) + dot(inst.c(), &point.x);
    let dual = dual_objective(cert);
    if (primal - dual).abs() > tol * primal.abs().max(1.0) {
        return Err(Error::CertificateInvalid(format!(
            "primal value {primal} and dual value {dual} do not agree"
        )));
    }
    Ok(PinnedValue { value: primal, witness: point.clone(), certificate: cert.clone() })
}

/// Upper bound on the strengthened relaxation's value from any feasible
/// lifted point: its objective `1/2 <Q, X> + c'x`. Fails if the point is
/// not feasible within `tol`.
pub fn witness_upper_bound(inst: &BoxQpInstance, point: &LiftedPoint, tol: f64) -> Result<f64> {
    if point.n() != inst.n() {
        return Err(Error::DimensionMismatch { expected: inst.n(), found: point.n() });
    }
    let member = membership(point, tol)?;
    if !member.feasible {
        let worst = member
            .violations
            .iter()
            .max_by(|a, b| a.amount.partial_cmp(&b.amount).unwrap())
            .expect("infeasible report has a violation");
        return Err(Error::InfeasibleWitness(format!(
            "{} violated by {:.3e} at ({}, {})",
            worst.kind.name(),
            worst.amount,
            worst.i,
            worst.j
        )));
    }
    Ok(0.5 * inst.q().inner(&point.x_mat) + dot(inst.c(), &point.x))
}
