//! The partial-projective-plane criterion for mod-2 exterior cohomology
//! with a linear total square and a generating map from a suspension.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{format_poly, AlgebraError, Parity, Poly, Presentation};

use super::certificate::{Certificate, Criterion, Refusal, Transcript, Verdict, Witness};

const TODA_CITATION: &str =
    "Toda: a truncated polynomial algebra Z2[y_1..y_n]/(y)^3 closed under Sq has minimal generator degree 2^k";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionDataError {
    #[error("total square data must be mod 2, got characteristic {0}")]
    NotMod2(u32),
    #[error("`{0}` is not a generator")]
    UnknownGenerator(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Mod-2 cohomology with a table of total squares `Sq x = x + Sq^1 x + ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorActionData {
    presentation: Presentation,
    sq: BTreeMap<String, Poly>,
    citation: String,
}

impl ExteriorActionData {
    pub fn new(
        presentation: Presentation,
        sq: BTreeMap<String, Poly>,
        citation: impl Into<String>,
    ) -> Result<Self, ActionDataError> {
        let ch = presentation.field().characteristic();
        if ch != 2 {
            return Err(ActionDataError::NotMod2(ch));
        }
        let alg = presentation.algebra();
        for (name, value) in &sq {
            if alg.index_of(name).is_none() {
                return Err(ActionDataError::UnknownGenerator(name.clone()));
            }
            for m in value.monomials() {
                alg.check_arity(m.exponents().len())?;
            }
        }
        Ok(ExteriorActionData { presentation, sq, citation: citation.into() })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn total_square(&self, generator: &str) -> Option<&Poly> {
        self.sq.get(generator)
    }

    pub fn table(&self) -> &BTreeMap<String, Poly> {
        &self.sq
    }

    pub fn citation(&self) -> &str {
        &self.citation
    }

    fn describe(&self) -> String {
        let alg = self.presentation.algebra();
        self.sq.iter().map(|(g, v)| format!("Sq {g} = {}", format_poly(alg, v))).collect::<Vec<_>>().join(", ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqViolation {
    pub generator: String,
    pub message: String,
}

impl fmt::Display for SqViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.generator, self.message)
    }
}

/// Checks `Sq^0 = id`, `Sq^{|x|} x = x^2` and that nothing lands above
/// degree `2|x|`. Generators without an entry are reported too.
pub fn validate_sq_action(data: &ExteriorActionData) -> Vec<SqViolation> {
    let alg = data.presentation.algebra();
    let mut out = Vec::new();
    for (i, g) in alg.generators().iter().enumerate() {
        let name = g.name().to_string();
        let d = g.degree();
        let Some(value) = data.sq.get(g.name()) else {
            out.push(SqViolation { generator: name, message: "no total square recorded".into() });
            continue;
        };
        let x = alg.gen(i);
        if value.homogeneous_component(d) != x {
            out.push(SqViolation {
                generator: name.clone(),
                message: format!("Sq^0 component is {}", format_poly(alg, &value.homogeneous_component(d))),
            });
        }
        let square = alg.mul(&x, &x).expect("same algebra");
        if value.homogeneous_component(2 * d) != square {
            out.push(SqViolation {
                generator: name.clone(),
                message: format!("Sq^{d} component is not the square {}", format_poly(alg, &square)),
            });
        }
        for deg in value.degrees() {
            if deg > 2 * d {
                out.push(SqViolation {
                    generator: name.clone(),
                    message: format!("component in degree {deg} exceeds 2*{d}"),
                });
            } else if deg < d {
                out.push(SqViolation {
                    generator: name.clone(),
                    message: format!("component in degree {deg} is below {d}"),
                });
            }
        }
    }
    out
}

/// Whether every total square is a linear combination of generators.
pub fn check_sq_linearity(data: &ExteriorActionData) -> bool {
    data.sq.values().all(|v| v.monomials().all(|m| m.word_length() <= 1))
}

/// `g: ΣB -> X` inducing an isomorphism from `QH*(X)` onto `H~*(ΣB)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingMapWitness {
    pub source: String,
    /// `B` when the source is `ΣB`.
    pub desuspension: Option<String>,
    pub target: String,
    pub citation: String,
}

impl GeneratingMapWitness {
    pub fn suspension(desuspension: impl Into<String>, target: impl Into<String>, citation: impl Into<String>) -> Self {
        let b = desuspension.into();
        GeneratingMapWitness {
            source: format!("Σ{b}"),
            desuspension: Some(b),
            target: target.into(),
            citation: citation.into(),
        }
    }
}

/// Whether `d = 2^k - 1` for some `k >= 1`.
pub fn is_two_power_minus_one(d: u32) -> bool {
    let mut v: u64 = 2;
    while v - 1 < u64::from(d) {
        v *= 2;
    }
    v - 1 == u64::from(d)
}

pub fn check_partial_projective_criterion(data: &ExteriorActionData, g: &GeneratingMapWitness) -> Verdict {
    let pres = &data.presentation;
    let alg = pres.algebra();
    let space = g.target.clone();
    let mut t = Transcript::new();
    t.asserted("mod 2 cohomology and total squares", data.describe(), &data.citation);
    t.asserted("generating map", format!("{} -> {}", g.source, g.target), &g.citation);
    let refuse = |t: Transcript, failed: String| {
        Verdict::Refused(Refusal {
            space: space.clone(),
            criterion: Criterion::PartialProjectivePlane,
            failed_hypothesis: failed,
            transcript: t,
            exception: None,
        })
    };

    if let Some(even) = alg.generators().iter().find(|g| g.parity() == Parity::Even) {
        return refuse(t, format!("condition (1): generator {} has even degree {}", even.name(), even.degree()));
    }
    if !pres.relations().is_empty() {
        return refuse(t, "condition (1): the cohomology has relations beyond exterior ones".into());
    }
    let names: Vec<String> = alg.generators().iter().map(|g| format!("{}@{}", g.name(), g.degree())).collect();
    t.verified("condition (1)", format!("generated by odd-degree classes {}", names.join(", ")));

    let violations = validate_sq_action(data);
    if let Some(v) = violations.first() {
        return refuse(t, format!("total square table: {v}"));
    }
    t.verified("total square table", "Sq^0 = id, top component is the square, no component above 2|x|");
    if !check_sq_linearity(data) {
        return refuse(t, "condition (2): some Sq x_i is not a linear combination of generators".into());
    }
    t.verified("condition (2)", "every Sq x_i is a linear combination of generators");

    if g.desuspension.is_none() {
        return refuse(t, format!("generating map source {} is not a suspension", g.source));
    }
    t.verified("suspension source", format!("{} is a suspension", g.source));

    let Some(min) = alg.generators().iter().map(|g| g.degree()).min() else {
        return refuse(t, "condition (1): no generators".into());
    };
    if is_two_power_minus_one(min) {
        return refuse(t, format!("minimal degree {min} is of the form 2^k - 1"));
    }
    t.verified("minimal degree", format!("{min} + 1 = {} is not a power of 2", min + 1));
    t.asserted("truncated algebra argument", format!("[g, g] != 0 for g: {} -> {}", g.source, g.target), TODA_CITATION);
    let witness = Witness::PartialProjectivePlane { generating_map_source: g.source.clone(), min_degree: min };
    Verdict::Certified(
        Certificate::new(space, Criterion::PartialProjectivePlane, witness, t).expect("checks were machine-verified"),
    )
}
