//! Routing a space to its criteria and running them in order.

use serde::Serialize;

use crate::algebra::{format_poly, Presentation};
use crate::steenrod::{char_class_operation, check_steenrod_criterion, SteenrodCriterionInstance, TorusModel};
use crate::sullivan::{check_rational_criterion, RationalProvenance};
use crate::whitehead::{
    check_partial_projective_criterion, Certificate, Criterion, ExteriorActionData, GeneratingMapWitness, Refusal,
    Transcript, Verdict, Witness,
};

use super::data::CrossCheckRecord;
use super::families::{Fallback, InstanceData, SpaceInstance};
use super::CatalogError;

/// A highly connected map `space -> target of the criterion`, along which
/// maps from low-dimensional sources lift.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lift {
    pub map: String,
    /// Space receiving the lifted certificate.
    pub target: String,
    pub connectivity: u32,
    pub kind: String,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanStep {
    Rational { space: String, presentation: Presentation, provenance: RationalProvenance },
    Steenrod { instance: Box<SteenrodCriterionInstance>, cross_check: Option<CrossCheckRecord> },
    Lift(Lift),
    PartialProjectivePlane { data: ExteriorActionData, generating_map: GeneratingMapWitness },
    Recorded { statement: String, citation: String },
    KnownException { note: String, citation: String },
}

impl PlanStep {
    pub fn describe(&self) -> String {
        match self {
            PlanStep::Rational { space, .. } => format!("rational criterion on {space}"),
            PlanStep::Steenrod { instance, .. } => {
                format!("Steenrod criterion on {} with {}({})", instance.space, instance.operation, instance.x)
            }
            PlanStep::Lift(l) => format!("lift along {} ({})", l.map, l.kind),
            PlanStep::PartialProjectivePlane { generating_map, .. } => {
                format!("partial projective plane criterion with generating map from {}", generating_map.source)
            }
            PlanStep::Recorded { .. } => "recorded external result".into(),
            PlanStep::KnownException { note, .. } => format!("known exception: {note}"),
        }
    }
}

/// Criteria to attempt for one space. Steps run in order; the first
/// certificate wins and a `Lift` transports the current certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub space: String,
    pub normalization: Option<String>,
    pub steps: Vec<PlanStep>,
}

pub fn route(inst: &SpaceInstance) -> Plan {
    let steps = match &inst.data {
        InstanceData::Steenrod { criterion, cross_check, lift } => {
            let mut steps = vec![PlanStep::Steenrod { instance: criterion.clone(), cross_check: cross_check.clone() }];
            steps.extend(lift.clone().map(PlanStep::Lift));
            steps
        }
        InstanceData::Rational { presentation, provenance, fallback } => {
            let mut steps = vec![PlanStep::Rational {
                space: inst.label.clone(),
                presentation: presentation.clone(),
                provenance: provenance.clone(),
            }];
            match fallback {
                Fallback::None => {}
                Fallback::Recorded { statement, citation } => {
                    steps.push(PlanStep::Recorded { statement: statement.clone(), citation: citation.clone() })
                }
                Fallback::Exception { note, citation } => {
                    steps.push(PlanStep::KnownException { note: note.clone(), citation: citation.clone() })
                }
            }
            steps
        }
        InstanceData::Projective { data, map } => {
            vec![PlanStep::PartialProjectivePlane { data: data.clone(), generating_map: map.clone() }]
        }
        InstanceData::Recorded { statement, citation } => {
            vec![PlanStep::Recorded { statement: statement.clone(), citation: citation.clone() }]
        }
    };
    Plan { space: inst.label.clone(), normalization: inst.normalization.clone(), steps }
}

/// Comparison of a cited operation value with the torus engine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheckOutcome {
    pub model: String,
    /// Full value in the model's classes.
    pub computed: String,
    /// The part that pulls back along the recorded images.
    pub image: String,
    /// Terms involving classes with no recorded image.
    pub residual: String,
    pub recorded: String,
    pub agrees: bool,
}

impl CrossCheckOutcome {
    pub fn summary(&self) -> String {
        let verdict = match (self.agrees, self.residual.as_str()) {
            (false, _) => "MISMATCH with",
            (true, "0") => "agrees with",
            (true, _) => "agrees, modulo unresolved terms, with",
        };
        format!(
            "{}: computed {} pulls back to {} (unresolved: {}), {verdict} recorded {}",
            self.model, self.computed, self.image, self.residual, self.recorded
        )
    }
}

fn cross_check(inst: &SteenrodCriterionInstance, rec: &CrossCheckRecord) -> Result<CrossCheckOutcome, String> {
    let op = inst.operation;
    let model = TorusModel::new(rec.group, rec.rank, op.prime()).map_err(|e| e.to_string())?;
    let value = char_class_operation(&model, &rec.class, op).map_err(|e| e.to_string())?;
    let alg = inst.cohomology.presentation.algebra();
    let images: Vec<_> = model.classes().iter().map(|c| rec.images.get(&c.name).cloned()).collect();
    let (image, residual) = model.pull_back(&value, alg, &images).map_err(|e| e.to_string())?;
    let recorded = inst
        .cohomology
        .actions
        .get(&inst.x, op)
        .map(|e| e.value.clone())
        .ok_or_else(|| format!("no recorded {op}({})", inst.x))?;
    let classes = model.class_algebra();
    Ok(CrossCheckOutcome {
        model: format!("{op}({}) in {model}", rec.class),
        computed: format_poly(classes, &value),
        image: format_poly(alg, &image),
        residual: format_poly(classes, &residual),
        recorded: format_poly(alg, &recorded),
        agrees: image == recorded,
    })
}

/// Result of running a plan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub verdict: Verdict,
    /// Refusals from criteria tried before the final verdict.
    pub attempts: Vec<Refusal>,
    pub cross_checks: Vec<CrossCheckOutcome>,
}

fn apply_lift(cert: &Certificate, lift: &Lift, source_dims: &[u32]) -> Verdict {
    let mut t = Transcript::new();
    t.asserted(format!("{} is an equivalence", lift.map), lift.kind.clone(), lift.citation.clone());
    let top = source_dims.iter().copied().max().unwrap_or(0);
    if top > lift.connectivity {
        return Verdict::Refused(Refusal {
            space: lift.target.clone(),
            criterion: cert.criterion(),
            failed_hypothesis: format!(
                "lift: source dimension {top} exceeds the connectivity {} of {}",
                lift.connectivity, lift.map
            ),
            transcript: t,
            exception: None,
        });
    }
    t.verified(
        "lift dimension bound",
        format!("sources have dimension <= {top} <= {}, so α and β lift to {}", lift.connectivity, lift.target),
    );
    t.verified(
        "naturality",
        format!("the lifted Whitehead product maps to the certified one, so it is non-trivial in {}", lift.target),
    );
    Verdict::Certified(cert.extended(lift.target.clone(), &t))
}

fn recorded(space: &str, statement: &str, citation: &str) -> Verdict {
    let mut t = Transcript::new();
    t.asserted("recorded result", statement.to_string(), citation.to_string());
    let cert =
        Certificate::new(space, Criterion::RecordedExternal, Witness::Recorded { statement: statement.to_string() }, t)
            .expect("recorded certificates need no verified entry");
    Verdict::Certified(cert)
}

pub fn check(inst: &SpaceInstance) -> Result<CheckOutcome, CatalogError> {
    let plan = route(inst);
    let comp = |e: String| CatalogError::Computation { space: inst.label.clone(), message: e };
    let mut attempts: Vec<Refusal> = Vec::new();
    let mut cross_checks = Vec::new();
    let mut current: Option<Certificate> = None;
    let mut source_dims: Vec<u32> = Vec::new();
    for step in &plan.steps {
        if current.is_some() && !matches!(step, PlanStep::Lift(_)) {
            continue;
        }
        let verdict = match step {
            PlanStep::Rational { space, presentation, provenance } => {
                check_rational_criterion(space, presentation, provenance).map_err(|e| comp(e.to_string()))?
            }
            PlanStep::Steenrod { instance, cross_check: rec } => {
                let mut verdict = check_steenrod_criterion(instance).map_err(|e| comp(e.to_string()))?;
                if let Some(rec) = rec {
                    let outcome = cross_check(instance, rec).map_err(comp)?;
                    if let Verdict::Certified(c) = &verdict {
                        let mut t = Transcript::new();
                        t.asserted(
                            "pullback to the classifying space",
                            format!("images {}", describe_images(rec, instance)),
                            rec.citation.clone(),
                        );
                        t.verified("cross-check of the cited operation value", outcome.summary());
                        verdict = Verdict::Certified(c.extended(c.space().to_string(), &t));
                    }
                    cross_checks.push(outcome);
                }
                source_dims = [&instance.alpha, &instance.beta]
                    .iter()
                    .map(|s| s.model.classes().iter().map(|c| c.degree).max().unwrap_or(0))
                    .collect();
                verdict
            }
            PlanStep::Lift(lift) => match &current {
                Some(cert) => apply_lift(cert, lift, &source_dims),
                None => continue,
            },
            PlanStep::PartialProjectivePlane { data, generating_map } => {
                check_partial_projective_criterion(data, generating_map)
            }
            PlanStep::Recorded { statement, citation } => recorded(&plan.space, statement, citation),
            PlanStep::KnownException { note, citation } => {
                // Ends the plan with a refusal flagged as the exception.
                let last = attempts.pop();
                let mut transcript = last.as_ref().map(|r| r.transcript.clone()).unwrap_or_default();
                transcript.asserted("known exception", note.clone(), citation.clone());
                let refusal = Refusal {
                    space: plan.space.clone(),
                    criterion: last.as_ref().map_or(Criterion::RecordedExternal, |r| r.criterion),
                    failed_hypothesis: last.map_or_else(|| note.clone(), |r| r.failed_hypothesis),
                    transcript,
                    exception: Some(note.clone()),
                };
                return Ok(CheckOutcome { verdict: Verdict::Refused(refusal), attempts, cross_checks });
            }
        };
        match verdict {
            Verdict::Certified(c) => current = Some(c),
            Verdict::Refused(r) => {
                if matches!(step, PlanStep::Lift(_)) {
                    return Ok(CheckOutcome { verdict: Verdict::Refused(r), attempts, cross_checks });
                }
                attempts.push(r)
            }
        }
    }
    let verdict = match current {
        Some(c) => Verdict::Certified(c),
        None => Verdict::Refused(attempts.pop().ok_or_else(|| comp("empty plan".into()))?),
    };
    Ok(CheckOutcome { verdict, attempts, cross_checks })
}

fn describe_images(rec: &CrossCheckRecord, inst: &SteenrodCriterionInstance) -> String {
    let alg = inst.cohomology.presentation.algebra();
    let parts: Vec<String> = rec.images.iter().map(|(c, p)| format!("{c} -> {}", format_poly(alg, p))).collect();
    format!("{} in {}({})", parts.join(", "), rec.group, rec.rank)
}
