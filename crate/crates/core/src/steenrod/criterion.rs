//! The six-condition criterion: for maps `α: ΣA -> X`, `β: ΣB -> X` and
//! an operation `θ` with `θ(x)` decomposable containing `ab`, the
//! Whitehead product `[α, β]` is non-trivial provided
//!
//! 1. `α*(a) != 0` and `β*(b) != 0`,
//! 2. `β*(a) = 0` when p = 2,
//! 3. `A = B`, `α = β` and `a = b` when `|a| = |b|` and p is odd,
//! 4. `QH^{|a|}(X)` is one-dimensional,
//! 5. `θ(x)` is decomposable and contains `ab` with nonzero coefficient,
//! 6. `θ` vanishes on `H^{|x|}(ΣA × ΣB)`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{format_poly, is_decomposable, Poly, Presentation};
use crate::whitehead::{Certificate, Criterion, Refusal, Transcript, Verdict, Witness};

use super::suspension::{evaluate_on_suspension, SuspensionModel};
use super::{Operation, SteenrodError};

const CRITERION_CITATION: &str =
    "six-condition Steenrod-operation criterion for Whitehead products, from the prior study of homotopy commutativity of Hermitian symmetric spaces";

/// Where a recorded operation value comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionProvenance {
    /// Computed by the torus engine and transported along a cited
    /// identification of generators.
    Computed { derivation: String, identification: String, citation: String },
    /// Taken from a citation.
    Cited { citation: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionEntry {
    pub value: Poly,
    pub provenance: ActionProvenance,
}

/// Recorded values `θ(x)` for generators `x` of a space.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OperationAction {
    entries: BTreeMap<(String, Operation), ActionEntry>,
}

impl OperationAction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, generator: impl Into<String>, op: Operation, entry: ActionEntry) {
        self.entries.insert((generator.into(), op), entry);
    }

    pub fn get(&self, generator: &str, op: Operation) -> Option<&ActionEntry> {
        self.entries.get(&(generator.to_string(), op))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Operation, &ActionEntry)> {
        self.entries.iter().map(|((g, op), e)| (g.as_str(), *op, e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceCohomology {
    pub presentation: Presentation,
    pub actions: OperationAction,
    pub citation: String,
}

/// A map from a suspension, known through its effect on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceMap {
    pub label: String,
    pub model: SuspensionModel,
    /// Generator name to suspension class name; missing generators pull
    /// back to zero.
    pub pullback: BTreeMap<String, String>,
    pub citation: String,
}

impl SourceMap {
    fn image(&self, generator: &str) -> Option<&str> {
        self.pullback.get(generator).map(String::as_str)
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = self.pullback.iter().map(|(g, c)| format!("{g} -> {c}")).collect();
        format!("{} from {}: {}", self.label, self.model.base(), parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteenrodCriterionInstance {
    pub space: String,
    pub cohomology: SpaceCohomology,
    pub a: String,
    pub b: String,
    pub x: String,
    pub operation: Operation,
    pub alpha: SourceMap,
    pub beta: SourceMap,
}

/// Runs the six conditions in order. The first failing condition produces
/// a refusal; inconsistent or incomplete data is an error.
pub fn check_steenrod_criterion(inst: &SteenrodCriterionInstance) -> Result<Verdict, SteenrodError> {
    let pres = &inst.cohomology.presentation;
    let alg = pres.algebra();
    let p = pres.field().characteristic();
    let op = inst.operation;
    if op.prime() != p {
        return Err(SteenrodError::Inconsistent(format!("{op} is not an operation mod {p}")));
    }
    for m in [&inst.alpha, &inst.beta] {
        if m.model.prime() != p {
            return Err(SteenrodError::Inconsistent(format!("{} is modelled mod {}", m.label, m.model.prime())));
        }
    }
    let degree = |name: &str| -> Result<u32, SteenrodError> {
        alg.index_of(name)
            .map(|i| alg.generator(i).degree())
            .ok_or_else(|| SteenrodError::Inconsistent(format!("`{name}` is not a generator of {}", inst.space)))
    };
    let (da, db, dx) = (degree(&inst.a)?, degree(&inst.b)?, degree(&inst.x)?);
    if dx + op.shift() != da + db {
        return Err(SteenrodError::Inconsistent(format!(
            "|{op}({})| = {} but |{}| + |{}| = {}",
            inst.x,
            dx + op.shift(),
            inst.a,
            inst.b,
            da + db
        )));
    }
    let entry = inst.cohomology.actions.get(&inst.x, op).ok_or_else(|| {
        SteenrodError::DataIncomplete(format!("no recorded value of {op}({}) in {}", inst.x, inst.space))
    })?;

    let mut t = Transcript::new();
    t.asserted(
        "cohomology of the space",
        format!("{} over F{p}", describe_presentation(pres)),
        &inst.cohomology.citation,
    );
    t.asserted("pullback along α", inst.alpha.describe(), &inst.alpha.citation);
    t.asserted("pullback along β", inst.beta.describe(), &inst.beta.citation);
    let refuse = |t: Transcript, failed: String| {
        Ok(Verdict::Refused(Refusal {
            space: inst.space.clone(),
            criterion: Criterion::Steenrod,
            failed_hypothesis: failed,
            transcript: t,
            exception: None,
        }))
    };

    // (1)
    let alpha_a = inst.alpha.image(&inst.a);
    let beta_b = inst.beta.image(&inst.b);
    match (alpha_a, beta_b) {
        (Some(ca), Some(cb)) => {
            t.verified("condition (1)", format!("α*({}) = {ca} != 0 and β*({}) = {cb} != 0", inst.a, inst.b))
        }
        (None, _) => return refuse(t, format!("condition (1): α*({}) = 0", inst.a)),
        (_, None) => return refuse(t, format!("condition (1): β*({}) = 0", inst.b)),
    }

    // (2)
    if p == 2 {
        if let Some(c) = inst.beta.image(&inst.a) {
            return refuse(t, format!("condition (2): β*({}) = {c} != 0", inst.a));
        }
        t.verified("condition (2)", format!("β*({}) = 0", inst.a));
    } else {
        t.verified("condition (2)", "not required at an odd prime");
    }

    // (3)
    if p != 2 && da == db {
        let same_map = inst.alpha.label == inst.beta.label && inst.alpha.model == inst.beta.model;
        if !same_map || inst.a != inst.b {
            return refuse(t, "condition (3): |a| = |b| at an odd prime needs α = β and a = b".into());
        }
        t.verified("condition (3)", format!("α = β = {} and a = b = {}", inst.alpha.label, inst.a));
    } else {
        t.verified("condition (3)", "not required (p = 2 or |a| != |b|)");
    }

    // (4)
    let qdim = pres.indecomposable_dimension(da)?;
    if qdim != 1 {
        return refuse(t, format!("condition (4): dim QH^{da} = {qdim}, not 1"));
    }
    t.verified("condition (4)", format!("dim QH^{da} = 1"));

    // (5)
    let value = &entry.value;
    let ab = alg.monomial_from_names(&if inst.a == inst.b {
        vec![(inst.a.as_str(), 2)]
    } else {
        vec![(inst.a.as_str(), 1), (inst.b.as_str(), 1)]
    })?;
    let ab_poly = alg.term(ab.clone(), pres.field().one());
    let value_text = format_poly(alg, value);
    match &entry.provenance {
        ActionProvenance::Computed { derivation, identification, citation } => {
            t.asserted("identification of generators", identification.clone(), citation);
            t.verified(format!("{op}({})", inst.x), format!("{value_text}, computed from {derivation}"));
        }
        ActionProvenance::Cited { citation } => {
            t.asserted(format!("{op}({})", inst.x), value_text.clone(), citation);
        }
    }
    if !value.is_zero() && !is_decomposable(value)? {
        return refuse(t, format!("condition (5): {op}({}) = {value_text} is not decomposable", inst.x));
    }
    if value.coefficient(&ab).is_zero() {
        return refuse(
            t,
            format!("condition (5): {op}({}) = {value_text} has no {} term", inst.x, format_poly(alg, &ab_poly)),
        );
    }
    if pres.ideal_contains(&ab_poly)? {
        return refuse(t, format!("condition (5): {} vanishes in the cohomology ring", format_poly(alg, &ab_poly)));
    }
    t.verified(
        "condition (5)",
        format!(
            "{op}({}) = {value_text} is decomposable and contains {} (nonzero in the quotient)",
            inst.x,
            format_poly(alg, &ab_poly)
        ),
    );

    // (6)
    match vanishes_on_product(&inst.alpha.model, &inst.beta.model, dx, op) {
        Ok(basis) => t.verified(
            "condition (6)",
            format!(
                "{op} vanishes on the Künneth basis of H^{dx}({} × {}): {{{}}}",
                inst.alpha.model.base(),
                inst.beta.model.base(),
                basis.join(", ")
            ),
        ),
        Err(Condition6::Nonzero(at)) => return refuse(t, format!("condition (6): {op}({at}) != 0")),
        Err(Condition6::Unrecorded(e)) => return refuse(t, format!("condition (6): {e}")),
    }

    t.asserted(
        "Whitehead product from the six conditions",
        format!("[{}, {}] != 0 in {}", inst.alpha.label, inst.beta.label, inst.space),
        CRITERION_CITATION,
    );
    let witness = Witness::Steenrod {
        a: inst.a.clone(),
        b: inst.b.clone(),
        x: inst.x.clone(),
        operation: op.to_string(),
        prime: p,
        alpha_source: format!("{} on {}", inst.alpha.label, inst.alpha.model.base()),
        beta_source: format!("{} on {}", inst.beta.label, inst.beta.model.base()),
    };
    let cert =
        Certificate::new(&inst.space, Criterion::Steenrod, witness, t).expect("conditions were machine-verified");
    Ok(Verdict::Certified(cert))
}

fn describe_presentation(pres: &Presentation) -> String {
    let alg = pres.algebra();
    let gens: Vec<String> = pres
        .generators()
        .iter()
        .map(|g| format!("{}{}", g.name(), if g.squares_to_zero() { " (square zero)" } else { "" }))
        .collect();
    let rels: Vec<String> = pres.relations().iter().map(|r| format_poly(alg, r.known_terms())).collect();
    if rels.is_empty() {
        format!("generators {}", gens.join(", "))
    } else {
        format!("generators {}; relations {}", gens.join(", "), rels.join(", "))
    }
}

enum Condition6 {
    Nonzero(String),
    Unrecorded(SteenrodError),
}

/// A basis element of one factor: the unit or a class index.
type Factor = Option<usize>;

fn factor_name(model: &SuspensionModel, f: Factor) -> String {
    f.map_or_else(|| "1".to_string(), |i| model.classes()[i].name.clone())
}

fn factor_degree(model: &SuspensionModel, f: Factor) -> u32 {
    f.map_or(0, |i| model.classes()[i].degree)
}

fn eval_factor(model: &SuspensionModel, f: Factor, op: Operation) -> Result<Vec<(Factor, i128)>, SteenrodError> {
    match f {
        None => Ok(if op.index() == 0 { vec![(None, 1)] } else { Vec::new() }),
        Some(i) => Ok(evaluate_on_suspension(model, i, op)?.into_iter().map(|(j, c)| (Some(j), c)).collect()),
    }
}

/// Checks that `op` kills every Künneth basis element of degree `n`,
/// using the Cartan formula. Returns the basis on success.
fn vanishes_on_product(
    a: &SuspensionModel,
    b: &SuspensionModel,
    n: u32,
    op: Operation,
) -> Result<Vec<String>, Condition6> {
    let p = a.prime() as i128;
    let factors = |m: &SuspensionModel| -> Vec<Factor> {
        std::iter::once(None).chain((0..m.classes().len()).map(Some)).collect()
    };
    let mut basis = Vec::new();
    for fa in factors(a) {
        for fb in factors(b) {
            if factor_degree(a, fa) + factor_degree(b, fb) != n {
                continue;
            }
            let name = format!("{}⊗{}", factor_name(a, fa), factor_name(b, fb));
            let mut sum: BTreeMap<(Factor, Factor), i128> = BTreeMap::new();
            for i in 0..=op.index() {
                let left = eval_factor(a, fa, op.with_index(i)).map_err(Condition6::Unrecorded)?;
                if left.is_empty() {
                    continue;
                }
                let right = eval_factor(b, fb, op.with_index(op.index() - i)).map_err(Condition6::Unrecorded)?;
                for &(x, cx) in &left {
                    for &(y, cy) in &right {
                        let v = sum.entry((x, y)).or_insert(0);
                        *v = (*v + cx * cy).rem_euclid(p);
                    }
                }
            }
            if sum.values().any(|&v| v != 0) {
                return Err(Condition6::Nonzero(name));
            }
            basis.push(name);
        }
    }
    Ok(basis)
}
