//! JSON file formats for instances, certificates, and classification
//! reports.
//!
//! All files carry an explicit `format_version` (currently
//! [`FORMAT_VERSION`]) and are rejected on any other value. Matrices are
//! stored as full row-major nested arrays so files are readable and
//! diffable; symmetric matrices are checked for symmetry on load (scaled
//! `1e-12`) and canonicalized to their upper triangle. Floating-point
//! values survive a save/load cycle bit-exactly: serialization uses the
//! shortest decimal form that round-trips.
//!
//! Index lists inside files (the `partition` block) are **1-based**, which
//! matches the command-line interface; the in-memory API is 0-based
//! throughout. Conversion happens here and nowhere else.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forge::{ForgedInstance, ForgedKind};
use crate::model::{
    BoxQpInstance, ExactnessReport, ForgeSpec, IndexPartition, LiftedPoint, RltCert, SdpRltCert,
};
use crate::numlin::{Mat, SymMatrix};

/// Version tag written into and required of every file this module touches.
pub const FORMAT_VERSION: &str = "boxqp-forge/1";

// ---------------------------------------------------------------------------
// Data-transfer shapes
// ---------------------------------------------------------------------------

/// On-disk form of a boxed quadratic instance, with optional provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub format_version: String,
    pub n: usize,
    /// Full row-major symmetric matrix of quadratic coefficients.
    pub q: Vec<Vec<f64>>,
    /// Linear coefficients.
    pub c: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub metadata: Option<Metadata>,
}

/// Generator provenance: how the instance was built and what it certifies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    /// Generator name, one of the strings accepted by
    /// [`ForgedKind::from_str`](std::str::FromStr).
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub designated_point: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub partition: Option<PartitionDto>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generator: Option<GeneratorDto>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificates: Option<CertificatesDto>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witnesses: Option<WitnessesDto>,
}

/// Index partition with **1-based** indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionDto {
    pub lower: Vec<usize>,
    pub interior: Vec<usize>,
    pub upper: Vec<usize>,
}

/// Sampling parameters the generator ran with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorDto {
    pub seed: u64,
    pub magnitude: f64,
    pub density: f64,
    pub strict_floor: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificatesDto {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rlt: Option<RltCertDto>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sdprlt: Option<SdpRltCertDto>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessesDto {
    /// Lifted point at which the stored certificate's complementary
    /// slackness conditions hold.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certified_point: Option<LiftedPointDto>,
    /// Feasible point of the strengthened relaxation, valued as an upper
    /// bound on its optimal value.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub feasible_witness: Option<LiftedPointDto>,
}

/// Dual multipliers of the linear relaxation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RltCertDto {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<Vec<f64>>,
    pub y: Vec<Vec<f64>>,
    pub z: Vec<Vec<f64>>,
}

/// Dual multipliers of the strengthened relaxation: the linear block plus
/// the bordered semidefinite block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpRltCertDto {
    #[serde(flatten)]
    pub base: RltCertDto,
    pub beta: f64,
    pub h: Vec<f64>,
    pub h_mat: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedPointDto {
    pub x: Vec<f64>,
    pub x_mat: Vec<Vec<f64>>,
}

/// On-disk form of a standalone certificate: the point it certifies plus
/// one of the two multiplier blocks, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub format_version: String,
    /// `"rlt"` or `"sdprlt"`.
    pub kind: String,
    pub point: LiftedPointDto,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rlt: Option<RltCertDto>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sdprlt: Option<SdpRltCertDto>,
}

/// On-disk form of an [`ExactnessReport`]. Unknown values serialize as
/// `null` so a report always shows all four fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub format_version: String,
    pub rlt_value: f64,
    pub global_value: Option<f64>,
    pub sdprlt_value: Option<f64>,
    pub label: String,
}

// ---------------------------------------------------------------------------
// Matrix and certificate conversions
// ---------------------------------------------------------------------------

fn sym_from_rows(rows: &[Vec<f64>], what: &str) -> Result<SymMatrix> {
    let scale =
        rows.iter().flat_map(|r| r.iter()).fold(1.0_f64, |acc, &value| acc.max(value.abs()));
    SymMatrix::from_rows(rows, 1e-12 * scale).map_err(|e| match e {
        Error::DimensionInconsistency(msg) => {
            Error::DimensionInconsistency(format!("{what}: {msg}"))
        }
        other => other,
    })
}

fn mat_from_rows(rows: &[Vec<f64>], what: &str) -> Result<Mat> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::DimensionInconsistency(format!("{what}: empty matrix")));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionInconsistency(format!(
                "{what}: row {i} has length {}, expected {n}",
                row.len()
            )));
        }
    }
    Ok(Mat::from_fn(n, n, |i, j| rows[i][j]))
}

impl RltCertDto {
    pub fn from_cert(cert: &RltCert) -> Self {
        RltCertDto {
            u: cert.u.clone(),
            v: cert.v.clone(),
            w: cert.w.to_rows(),
            y: cert.y.to_rows(),
            z: cert.z.to_rows(),
        }
    }

    pub fn to_cert(&self) -> Result<RltCert> {
        let cert = RltCert {
            u: self.u.clone(),
            v: self.v.clone(),
            w: sym_from_rows(&self.w, "certificate block w")?,
            y: mat_from_rows(&self.y, "certificate block y")?,
            z: sym_from_rows(&self.z, "certificate block z")?,
        };
        cert.validate_dims()?;
        Ok(cert)
    }
}

impl SdpRltCertDto {
    pub fn from_cert(cert: &SdpRltCert) -> Self {
        SdpRltCertDto {
            base: RltCertDto::from_cert(&cert.base),
            beta: cert.beta,
            h: cert.h.clone(),
            h_mat: cert.h_mat.to_rows(),
        }
    }

    pub fn to_cert(&self) -> Result<SdpRltCert> {
        let cert = SdpRltCert {
            base: self.base.to_cert()?,
            beta: self.beta,
            h: self.h.clone(),
            h_mat: sym_from_rows(&self.h_mat, "certificate block h_mat")?,
        };
        cert.validate_dims()?;
        Ok(cert)
    }
}

impl LiftedPointDto {
    pub fn from_point(point: &LiftedPoint) -> Self {
        LiftedPointDto { x: point.x.clone(), x_mat: point.x_mat.to_rows() }
    }

    pub fn to_point(&self) -> Result<LiftedPoint> {
        LiftedPoint::new(self.x.clone(), sym_from_rows(&self.x_mat, "lifted point x_mat")?)
    }
}

impl PartitionDto {
    /// Converts the library's 0-based partition to 1-based lists.
    pub fn from_partition(partition: &IndexPartition) -> Self {
        let shift = |v: Vec<usize>| v.into_iter().map(|j| j + 1).collect();
        PartitionDto {
            lower: shift(partition.lower()),
            interior: shift(partition.interior()),
            upper: shift(partition.upper()),
        }
    }

    /// Converts the file's 1-based lists back to a 0-based partition of
    /// `{0, …, n-1}`, rejecting index 0, out-of-range indices, overlaps,
    /// and gaps.
    pub fn to_partition(&self, n: usize) -> Result<IndexPartition> {
        let shift = |set: &[usize], name: &str| -> Result<Vec<usize>> {
            set.iter()
                .map(|&j| {
                    if j == 0 {
                        Err(Error::InvalidIndexSet(format!(
                            "{name} list contains index 0; file indices are 1-based"
                        )))
                    } else {
                        Ok(j - 1)
                    }
                })
                .collect()
        };
        let lower = shift(&self.lower, "lower")?;
        let interior = shift(&self.interior, "interior")?;
        let upper = shift(&self.upper, "upper")?;
        IndexPartition::from_sets(n, &lower, &interior, &upper)
    }
}

// ---------------------------------------------------------------------------
// Instance files
// ---------------------------------------------------------------------------

impl InstanceFile {
    /// Wraps a bare instance with no provenance.
    pub fn from_instance(inst: &BoxQpInstance) -> Self {
        InstanceFile {
            format_version: FORMAT_VERSION.to_string(),
            n: inst.n(),
            q: inst.q().to_rows(),
            c: inst.c().to_vec(),
            metadata: None,
        }
    }

    /// Validates dimensions and symmetry and rebuilds the instance.
    pub fn instance(&self) -> Result<BoxQpInstance> {
        if self.q.len() != self.n {
            return Err(Error::DimensionInconsistency(format!(
                "header says n = {}, but q has {} rows",
                self.n,
                self.q.len()
            )));
        }
        if self.c.len() != self.n {
            return Err(Error::DimensionInconsistency(format!(
                "header says n = {}, but c has {} entries",
                self.n,
                self.c.len()
            )));
        }
        let q = sym_from_rows(&self.q, "instance matrix q")?;
        BoxQpInstance::new(q, self.c.clone())
    }

    /// Parses the generator name stored in the metadata, if any.
    pub fn kind(&self) -> Result<Option<ForgedKind>> {
        match &self.metadata {
            None => Ok(None),
            Some(md) => md.kind.parse::<ForgedKind>().map(Some),
        }
    }

    fn certified_point(&self) -> Result<Option<LiftedPoint>> {
        let md = match &self.metadata {
            None => return Ok(None),
            Some(md) => md,
        };
        if let Some(dto) = md.witnesses.as_ref().and_then(|w| w.certified_point.as_ref()) {
            return Ok(Some(dto.to_point()?));
        }
        // Certificates certify the designated point; default to its
        // rank-one lift when no explicit certified point is stored.
        match &md.designated_point {
            Some(x) => Ok(Some(LiftedPoint::outer(x))),
            None => Ok(None),
        }
    }

    /// Embedded linear-relaxation certificate and the point it certifies.
    pub fn rlt_certificate(&self) -> Result<Option<(LiftedPoint, RltCert)>> {
        let dto = self
            .metadata
            .as_ref()
            .and_then(|md| md.certificates.as_ref())
            .and_then(|certs| certs.rlt.as_ref());
        match dto {
            None => Ok(None),
            Some(dto) => {
                let cert = dto.to_cert()?;
                let point = self.certified_point()?.ok_or_else(|| {
                    Error::InvalidParameter(
                        "certificate stored without a certified or designated point".into(),
                    )
                })?;
                Ok(Some((point, cert)))
            }
        }
    }

    /// Embedded strengthened-relaxation certificate and its point.
    pub fn sdprlt_certificate(&self) -> Result<Option<(LiftedPoint, SdpRltCert)>> {
        let dto = self
            .metadata
            .as_ref()
            .and_then(|md| md.certificates.as_ref())
            .and_then(|certs| certs.sdprlt.as_ref());
        match dto {
            None => Ok(None),
            Some(dto) => {
                let cert = dto.to_cert()?;
                let point = self.certified_point()?.ok_or_else(|| {
                    Error::InvalidParameter(
                        "certificate stored without a certified or designated point".into(),
                    )
                })?;
                Ok(Some((point, cert)))
            }
        }
    }

    /// Embedded feasible witness of the strengthened relaxation.
    pub fn feasible_witness(&self) -> Result<Option<LiftedPoint>> {
        let dto = self
            .metadata
            .as_ref()
            .and_then(|md| md.witnesses.as_ref())
            .and_then(|w| w.feasible_witness.as_ref());
        match dto {
            None => Ok(None),
            Some(dto) => Ok(Some(dto.to_point()?)),
        }
    }
}

impl From<&ForgedInstance> for InstanceFile {
    fn from(fi: &ForgedInstance) -> Self {
        let certificates = match (&fi.rlt_cert, &fi.sdprlt_cert) {
            (None, None) => None,
            (rlt, sdprlt) => Some(CertificatesDto {
                rlt: rlt.as_ref().map(RltCertDto::from_cert),
                sdprlt: sdprlt.as_ref().map(SdpRltCertDto::from_cert),
            }),
        };
        let witnesses = match (&fi.certified_point, &fi.witness) {
            (None, None) => None,
            (certified, witness) => Some(WitnessesDto {
                certified_point: certified.as_ref().map(LiftedPointDto::from_point),
                feasible_witness: witness.as_ref().map(LiftedPointDto::from_point),
            }),
        };
        let ForgeSpec { seed, magnitude, density, strict_floor } = fi.spec;
        InstanceFile {
            format_version: FORMAT_VERSION.to_string(),
            n: fi.instance.n(),
            q: fi.instance.q().to_rows(),
            c: fi.instance.c().to_vec(),
            metadata: Some(Metadata {
                kind: fi.kind.as_str().to_string(),
                designated_point: Some(fi.designated_point.clone()),
                partition: Some(PartitionDto::from_partition(&fi.partition)),
                generator: Some(GeneratorDto { seed, magnitude, density, strict_floor }),
                certificates,
                witnesses,
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// Certificate files
// ---------------------------------------------------------------------------

impl CertificateFile {
    pub fn from_rlt(point: &LiftedPoint, cert: &RltCert) -> Self {
        CertificateFile {
            format_version: FORMAT_VERSION.to_string(),
            kind: "rlt".to_string(),
            point: LiftedPointDto::from_point(point),
            rlt: Some(RltCertDto::from_cert(cert)),
            sdprlt: None,
        }
    }

    pub fn from_sdprlt(point: &LiftedPoint, cert: &SdpRltCert) -> Self {
        CertificateFile {
            format_version: FORMAT_VERSION.to_string(),
            kind: "sdprlt".to_string(),
            point: LiftedPointDto::from_point(point),
            rlt: None,
            sdprlt: Some(SdpRltCertDto::from_cert(cert)),
        }
    }

    pub fn rlt_pair(&self) -> Result<(LiftedPoint, RltCert)> {
        if self.kind != "rlt" {
            return Err(Error::InvalidParameter(format!(
                "certificate file has kind \"{}\", expected \"rlt\"",
                self.kind
            )));
        }
        let dto = self.rlt.as_ref().ok_or_else(|| {
            Error::InvalidParameter("certificate file of kind \"rlt\" lacks an rlt block".into())
        })?;
        Ok((self.point.to_point()?, dto.to_cert()?))
    }

    pub fn sdprlt_pair(&self) -> Result<(LiftedPoint, SdpRltCert)> {
        if self.kind != "sdprlt" {
            return Err(Error::InvalidParameter(format!(
                "certificate file has kind \"{}\", expected \"sdprlt\"",
                self.kind
            )));
        }
        let dto = self.sdprlt.as_ref().ok_or_else(|| {
            Error::InvalidParameter(
                "certificate file of kind \"sdprlt\" lacks an sdprlt block".into(),
            )
        })?;
        Ok((self.point.to_point()?, dto.to_cert()?))
    }
}

// ---------------------------------------------------------------------------
// Report files
// ---------------------------------------------------------------------------

impl ReportFile {
    pub fn from_report(report: &ExactnessReport) -> Self {
        ReportFile {
            format_version: FORMAT_VERSION.to_string(),
            rlt_value: report.rlt_value,
            global_value: report.global_value,
            sdprlt_value: report.sdprlt_value,
            label: report.label.to_string(),
        }
    }
}

// ---------------------------------------------------------------------------
// Serialization entry points
// ---------------------------------------------------------------------------

fn check_version(found: &str) -> Result<()> {
    if found != FORMAT_VERSION {
        return Err(Error::VersionMismatch { found: found.to_string() });
    }
    Ok(())
}

/// Pretty-prints any of the file shapes, with a trailing newline.
pub fn to_json<T: Serialize>(file: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(file)?;
    text.push('\n');
    Ok(text)
}

pub fn instance_from_json(text: &str) -> Result<InstanceFile> {
    let file: InstanceFile = serde_json::from_str(text)?;
    check_version(&file.format_version)?;
    Ok(file)
}

pub fn certificate_from_json(text: &str) -> Result<CertificateFile> {
    let file: CertificateFile = serde_json::from_str(text)?;
    check_version(&file.format_version)?;
    Ok(file)
}

pub fn save_instance(path: &Path, file: &InstanceFile) -> Result<()> {
    fs::write(path, to_json(file)?)?;
    Ok(())
}

pub fn load_instance(path: &Path) -> Result<InstanceFile> {
    instance_from_json(&fs::read_to_string(path)?)
}

pub fn save_certificate(path: &Path, file: &CertificateFile) -> Result<()> {
    fs::write(path, to_json(file)?)?;
    Ok(())
}

pub fn load_certificate(path: &Path) -> Result<CertificateFile> {
    certificate_from_json(&fs::read_to_string(path)?)
}
