//! The classification report: one row per instance, computed in parallel
//! and assembled in family then parameter order.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::whitehead::{Criterion, Transcript, Verdict};

use super::data::Catalog;
use super::families::instantiate;
use super::plan::{check, route};
use super::{Arity, CatalogError, FamilyId, Params};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Parameter ranges per family, as upper bounds on the parameters.
/// Single-instance families ignore the bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranges {
    entries: Vec<(FamilyId, u32)>,
}

impl Default for Ranges {
    fn default() -> Self {
        let entries = FamilyId::ALL
            .into_iter()
            .map(|f| {
                let max = match f {
                    FamilyId::AI => 10,
                    FamilyId::AIII => 3,
                    FamilyId::BDI => 8,
                    FamilyId::AII | FamilyId::DIII | FamilyId::CI | FamilyId::CII => 6,
                    _ => 0,
                };
                (f, max)
            })
            .collect();
        Ranges { entries }
    }
}

impl Ranges {
    pub fn empty() -> Self {
        Ranges { entries: vec![] }
    }

    /// Keeps only `family`, optionally with a new upper bound.
    pub fn restrict(&self, family: FamilyId, max: Option<u32>) -> Result<Ranges, CatalogError> {
        let current = self.entries.iter().find(|(f, _)| *f == family).map_or(0, |e| e.1);
        let max = max.unwrap_or(current);
        if family.arity() != Arity::None && max < family.lower_bound() {
            return Err(CatalogError::Parameter {
                family,
                message: format!("--max {max} is below the bound {}", family.constraint()),
            });
        }
        Ok(Ranges { entries: vec![(family, max)] })
    }

    pub fn families(&self) -> impl Iterator<Item = FamilyId> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    /// All instances in report order.
    pub fn instances(&self) -> Vec<(FamilyId, Params)> {
        let mut out = Vec::new();
        for &(f, max) in &self.entries {
            let lo = f.lower_bound();
            match f {
                FamilyId::AIII => {
                    for m in lo..=max {
                        for n in m..=max {
                            out.push((f, Params::mn(m, n)));
                        }
                    }
                }
                FamilyId::BDI | FamilyId::CII => {
                    for m in lo..=max {
                        for n in lo..=m {
                            out.push((f, Params::mn(m, n)));
                        }
                    }
                }
                _ if f.arity() == Arity::N => out.extend((lo..=max).map(|n| (f, Params::n(n)))),
                _ => out.push((f, Params::none())),
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub family: FamilyId,
    pub params: Params,
    pub space: String,
    pub name: String,
    /// Criteria attempted, in order.
    pub plan: Vec<String>,
    pub criterion: Criterion,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conclusion: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exception: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_hypothesis: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<String>,
    /// Refusals from criteria tried first, as `criterion: failed hypothesis`.
    pub attempts: Vec<String>,
    pub cross_checks: Vec<String>,
    pub transcript: Transcript,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn concluded(&self) -> usize {
        self.rows.iter().filter(|r| r.certified).count()
    }
}

/// The row for a single instance.
pub fn report_row(catalog: &Catalog, family: FamilyId, params: Params) -> Result<ReportRow, CatalogError> {
    let inst = instantiate(catalog, family, params)?;
    let outcome = check(&inst)?;
    let plan = route(&inst).steps.iter().map(|s| s.describe()).collect();
    let attempts = outcome.attempts.iter().map(|r| format!("{}: {}", r.criterion, r.failed_hypothesis)).collect();
    let cross_checks = outcome.cross_checks.iter().map(|c| c.summary()).collect();
    let base = |criterion, certified, transcript| ReportRow {
        family,
        params,
        space: inst.label.clone(),
        name: inst.name.clone(),
        plan,
        criterion,
        certified,
        witness: None,
        conclusion: None,
        exception: None,
        failed_hypothesis: None,
        normalization: inst.normalization.clone(),
        attempts,
        cross_checks,
        transcript,
    };
    Ok(match &outcome.verdict {
        Verdict::Certified(c) => {
            let concl = outcome.verdict.conclude().expect("certified verdicts conclude");
            ReportRow {
                witness: Some(c.witness().to_string()),
                conclusion: Some(concl.statement),
                ..base(c.criterion(), true, concl.transcript)
            }
        }
        Verdict::Refused(r) => ReportRow {
            exception: r.exception.clone(),
            failed_hypothesis: Some(r.failed_hypothesis.clone()),
            ..base(r.criterion, false, r.transcript.clone())
        },
    })
}

pub fn report(catalog: &Catalog, ranges: &Ranges) -> Result<Report, CatalogError> {
    let rows =
        ranges.instances().into_par_iter().map(|(f, p)| report_row(catalog, f, p)).collect::<Result<Vec<_>, _>>()?;
    Ok(Report { schema_version: REPORT_SCHEMA_VERSION, rows })
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "schema_version: {}", self.schema_version)?;
        for r in &self.rows {
            let result = match (&r.conclusion, &r.exception) {
                (Some(c), _) => c.clone(),
                (None, Some(e)) => format!("no conclusion; known exception: {e}"),
                (None, None) => "no conclusion from this criterion".into(),
            };
            writeln!(f, "{} {} [{}]: {}", r.space, r.name, r.criterion, result)?;
            if let Some(w) = &r.witness {
                writeln!(f, "  witness: {w}")?;
            }
            if let Some(h) = &r.failed_hypothesis {
                writeln!(f, "  failed: {h}")?;
            }
            if let Some(n) = &r.normalization {
                writeln!(f, "  normalization: {n}")?;
            }
            for a in &r.attempts {
                writeln!(f, "  attempt: {a}")?;
            }
            for c in &r.cross_checks {
                writeln!(f, "  cross-check: {c}")?;
            }
        }
        writeln!(f, "concluded: {} of {}", self.concluded(), self.rows.len())
    }
}
