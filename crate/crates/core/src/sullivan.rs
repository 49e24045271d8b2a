//! Formal minimal Sullivan models of even-generated complete intersections
//! and rational Whitehead-product witnesses read off their quadratic parts.
//!
//! Models print as
//!
//! ```text
//! Λ(x4, x6, x8, y15, y17, y23); d y15 = x8^2 + …; d y17 = …
//! ```
//!
//! The generator list comes first. A generator whose name does not end in
//! its degree is written `name@degree`. Each `d name = poly` clause gives a
//! nonzero differential; generators without a clause are closed. A trailing
//! `…` marks a differential known only through the listed terms. Explicit
//! models round-trip exactly through [`SullivanModel::parse`].

use std::fmt;

use thiserror::Error;

use crate::algebra::{
    format_poly, is_complete_intersection, is_decomposable, parse_poly, Algebra, AlgebraError, FieldSpec, Generator,
    Monomial, Parity, Poly, Presentation, RelationBody,
};
use crate::whitehead::{Certificate, Criterion, Refusal, Transcript, Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SullivanError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("transfer not justified: {0}")]
    TransferNotJustified(String),
    #[error("model parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Differential {
    Explicit(Poly),
    /// Only some terms are known; the full value is asserted decomposable
    /// when the flag is set.
    Partial {
        certified: Poly,
        decomposable_asserted: bool,
    },
}

impl Differential {
    pub fn known_terms(&self) -> &Poly {
        match self {
            Differential::Explicit(p) => p,
            Differential::Partial { certified, .. } => certified,
        }
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self, Differential::Explicit(_))
    }

    fn decomposable(&self) -> bool {
        match self {
            Differential::Explicit(p) => is_decomposable(p).unwrap_or(false),
            Differential::Partial { certified, decomposable_asserted } => {
                *decomposable_asserted && certified.monomials().all(|m| m.word_length() >= 2)
            }
        }
    }
}

/// A free graded-commutative algebra over Q with a degree +1 differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SullivanModel {
    label: String,
    algebra: Algebra,
    differential: Vec<Differential>,
    /// For generators introduced to kill a relation, that relation's index.
    origin: Vec<Option<usize>>,
}

impl SullivanModel {
    pub fn new(algebra: Algebra, differential: Vec<Differential>) -> Result<Self, SullivanError> {
        let origin = vec![None; algebra.len()];
        Self::with_origin(algebra, differential, origin)
    }

    fn with_origin(
        algebra: Algebra,
        differential: Vec<Differential>,
        origin: Vec<Option<usize>>,
    ) -> Result<Self, SullivanError> {
        if !algebra.field().is_rational() {
            return Err(SullivanError::Hypothesis("Sullivan models are over Q".into()));
        }
        algebra.check_arity(differential.len())?;
        for (i, d) in differential.iter().enumerate() {
            let g = algebra.generator(i);
            for m in d.known_terms().monomials() {
                algebra.check_arity(m.exponents().len())?;
                if m.degree() != g.degree() + 1 {
                    return Err(SullivanError::Hypothesis(format!(
                        "d {} has a term of degree {}, expected {}",
                        g.name(),
                        m.degree(),
                        g.degree() + 1
                    )));
                }
            }
        }
        Ok(SullivanModel { label: "X".into(), algebra, differential, origin })
    }

    pub fn labelled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn generators(&self) -> &[Generator] {
        self.algebra.generators()
    }

    pub fn differential(&self, i: usize) -> &Differential {
        &self.differential[i]
    }

    pub fn differential_of(&self, name: &str) -> Option<&Differential> {
        self.algebra.index_of(name).map(|i| &self.differential[i])
    }

    pub fn is_explicit(&self) -> bool {
        self.differential.iter().all(Differential::is_explicit)
    }

    /// Extends `d` to `p` as a derivation of degree +1.
    pub fn apply(&self, p: &Poly) -> Result<Poly, SullivanError> {
        let alg = &self.algebra;
        let mut out = alg.zero();
        for (m, c) in p.terms() {
            let factors = m.factors();
            let mut sign_odd = false;
            for (k, &g) in factors.iter().enumerate() {
                let dg = match &self.differential[g] {
                    Differential::Explicit(p) => p,
                    Differential::Partial { .. } => {
                        return Err(SullivanError::Unsupported(format!(
                            "d {} is only partially known",
                            alg.generator(g).name()
                        )))
                    }
                };
                if !dg.is_zero() {
                    let mut term = alg.constant(1);
                    for &f in &factors[..k] {
                        term = alg.mul(&term, &alg.gen(f))?;
                    }
                    term = alg.mul(&term, dg)?;
                    for &f in &factors[k + 1..] {
                        term = alg.mul(&term, &alg.gen(f))?;
                    }
                    let mut coeff = c.clone();
                    if sign_odd {
                        coeff = -coeff;
                    }
                    out = alg.add(&out, &alg.scale(&term, &coeff));
                }
                if alg.generator(g).parity() == Parity::Odd {
                    sign_odd = !sign_odd;
                }
            }
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let gens: Vec<String> = self
            .generators()
            .iter()
            .map(|g| {
                if trailing_degree(g.name()) == Some(g.degree()) {
                    g.name().to_string()
                } else {
                    format!("{}@{}", g.name(), g.degree())
                }
            })
            .collect();
        let mut out = format!("Λ({})", gens.join(", "));
        for (i, d) in self.differential.iter().enumerate() {
            let name = self.algebra.generator(i).name();
            match d {
                Differential::Explicit(p) if p.is_zero() => {}
                Differential::Explicit(p) => {
                    out.push_str(&format!("; d {name} = {}", format_poly(&self.algebra, p)));
                }
                Differential::Partial { certified, .. } if certified.is_zero() => {
                    out.push_str(&format!("; d {name} = …"));
                }
                Differential::Partial { certified, .. } => {
                    out.push_str(&format!("; d {name} = {} + …", format_poly(&self.algebra, certified)));
                }
            }
        }
        out
    }

    /// Parses the text form. Partial clauses are read with the
    /// decomposability assertion set.
    pub fn parse(text: &str) -> Result<Self, SullivanError> {
        let perr = |m: &str| SullivanError::Parse(m.to_string());
        let mut clauses = text.trim().split(';').map(str::trim);
        let head = clauses.next().unwrap_or("");
        let inner =
            head.strip_prefix("Λ(").and_then(|s| s.strip_suffix(')')).ok_or_else(|| perr("expected `Λ(...)`"))?;
        let mut gens = Vec::new();
        for item in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, degree) = match item.split_once('@') {
                Some((n, d)) => (n, d.parse::<u32>().map_err(|_| perr("bad degree after `@`"))?),
                None => (item, trailing_degree(item).ok_or_else(|| perr("generator without degree"))?),
            };
            gens.push(if degree % 2 == 1 {
                Generator::exterior(name, degree)
            } else {
                Generator::polynomial(name, degree)
            });
        }
        let algebra = Algebra::new(FieldSpec::rationals(), gens)?;
        let mut differential = vec![Differential::Explicit(Poly::zero()); algebra.len()];
        let mut seen = vec![false; algebra.len()];
        for clause in clauses {
            let rest = clause.strip_prefix("d ").ok_or_else(|| perr("expected `d name = ...`"))?;
            let (name, body) = rest.split_once('=').ok_or_else(|| perr("missing `=`"))?;
            let name = name.trim();
            let i =
                algebra.index_of(name).ok_or_else(|| SullivanError::Parse(format!("unknown generator `{name}`")))?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(SullivanError::Parse(format!("duplicate differential for `{name}`")));
            }
            let body = body.trim();
            differential[i] = if let Some(known) = body.strip_suffix('…') {
                let known = known.trim_end();
                let known = known.strip_suffix('+').unwrap_or(known).trim();
                let certified = if known.is_empty() { Poly::zero() } else { parse_poly(&algebra, known)? };
                Differential::Partial { certified, decomposable_asserted: true }
            } else {
                let p = parse_poly(&algebra, body)?;
                if p.is_zero() {
                    return Err(perr("zero differentials are written by omission"));
                }
                Differential::Explicit(p)
            };
        }
        Self::new(algebra, differential)
    }
}

impl fmt::Display for SullivanModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn trailing_degree(name: &str) -> Option<u32> {
    let digits = name.len() - name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    if digits == 0 || digits == name.len() {
        return None;
    }
    name[name.len() - digits..].parse().ok()
}

/// Builds `Λ(x_1..x_n, y_1..y_n)` with `dx_i = 0` and `dy_i = ρ_i`.
pub fn build_formal_model(pres: &Presentation) -> Result<SullivanModel, SullivanError> {
    formal_model_hypothesis(pres)?;
    let src = pres.algebra();
    let mut gens: Vec<Generator> = src.generators().to_vec();
    let mut origin = vec![None; gens.len()];
    for (i, r) in pres.relations().iter().enumerate() {
        let degree = r.degree() - 1;
        let base = format!("y{degree}");
        let mut name = base.clone();
        let mut k = 2;
        while gens.iter().any(|g| g.name() == name) {
            name = format!("{base}_{k}");
            k += 1;
        }
        gens.push(Generator::exterior(name, degree));
        origin.push(Some(i));
    }
    let algebra = Algebra::new(FieldSpec::rationals(), gens)?;
    let width = algebra.len();
    let embed = |p: &Poly| -> Result<Poly, SullivanError> {
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let mut exps = m.exponents().to_vec();
            exps.resize(width, 0);
            terms.push((algebra.monomial(exps)?, c.clone()));
        }
        Ok(algebra.from_terms(terms)?)
    };
    let mut differential = vec![Differential::Explicit(Poly::zero()); src.len()];
    for r in pres.relations() {
        differential.push(match r.body() {
            RelationBody::Explicit(p) => Differential::Explicit(embed(p)?),
            RelationBody::Partial { certified, decomposable_asserted } => {
                Differential::Partial { certified: embed(certified)?, decomposable_asserted: *decomposable_asserted }
            }
        });
    }
    SullivanModel::with_origin(algebra, differential, origin)
}

/// Checks the structural hypotheses of the formal-model recipe, naming the
/// first one that fails. Complete intersection is checked separately since
/// it needs explicit bodies.
fn formal_model_hypothesis(pres: &Presentation) -> Result<(), SullivanError> {
    if !pres.field().is_rational() {
        return Err(SullivanError::Hypothesis(format!("coefficient field is {}, not Q", pres.field())));
    }
    if let Some(g) = pres.generators().iter().find(|g| g.degree() % 2 == 1) {
        return Err(SullivanError::Hypothesis(format!("generator {} has odd degree", g.name())));
    }
    if pres.relations().len() != pres.generators().len() {
        return Err(SullivanError::Hypothesis(format!(
            "{} relations for {} generators",
            pres.relations().len(),
            pres.generators().len()
        )));
    }
    if let Some(i) = pres.relations().iter().position(|r| !r.decomposable()) {
        return Err(SullivanError::Hypothesis(format!("relation {i} is not decomposable")));
    }
    Ok(())
}

/// Whether `d∘d` vanishes on every generator.
pub fn check_d_squared(model: &SullivanModel) -> Result<bool, SullivanError> {
    for (i, d) in model.differential.iter().enumerate() {
        let Differential::Explicit(p) = d else {
            return Err(SullivanError::Unsupported(format!(
                "d {} is only partially known",
                model.algebra.generator(i).name()
            )));
        };
        if !model.apply(p)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalWitness {
    pub space: String,
    pub m: u32,
    pub n: u32,
    pub target_degree: u32,
    pub relation_index: usize,
    pub pair: (String, String),
    pub transcript: Transcript,
    pub transferred_from: Option<String>,
}

impl RationalWitness {
    pub fn to_witness(&self) -> Witness {
        Witness::Rational {
            m: self.m,
            n: self.n,
            target_degree: self.target_degree,
            pair: [self.pair.0.clone(), self.pair.1.clone()],
            relation: self.relation_index,
            transferred_from: self.transferred_from.clone(),
        }
    }
}

/// The first generator (in declaration order) whose differential is
/// decomposable with a quadratic term, using the name-wise smallest pair.
pub fn find_rational_witness(model: &SullivanModel) -> Option<RationalWitness> {
    let alg = &model.algebra;
    for (i, d) in model.differential.iter().enumerate() {
        if d.known_terms().is_zero() || !d.decomposable() {
            continue;
        }
        let best = d.known_terms().monomials().filter(|m| m.word_length() == 2).map(|m| pair_names(alg, m)).min();
        if let Some(((a, da), (b, db))) = best {
            let mut transcript = Transcript::new();
            transcript.verified("quadratic term", format!("d {} contains {a}*{b}", alg.generator(i).name()));
            return Some(RationalWitness {
                space: model.label.clone(),
                m: da,
                n: db,
                target_degree: da + db - 1,
                relation_index: model.origin[i].unwrap_or(i),
                pair: (a, b),
                transcript,
                transferred_from: None,
            });
        }
    }
    None
}

fn pair_names(alg: &Algebra, m: &Monomial) -> ((String, u32), (String, u32)) {
    let f = m.factors();
    let a = alg.generator(f[0]);
    let b = alg.generator(f[1]);
    let (a, b) = ((a.name().to_string(), a.degree()), (b.name().to_string(), b.degree()));
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A map inducing an isomorphism on rational homotopy in degrees at or
/// above `threshold`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferFact {
    pub source: String,
    pub target: String,
    pub fiber: String,
    pub threshold: u32,
    pub citation: String,
}

/// Re-attributes a witness along a rational homotopy isomorphism in
/// degrees `>= threshold`.
pub fn transfer_witness(w: &RationalWitness, threshold: u32, target: &str) -> Result<RationalWitness, SullivanError> {
    for (what, d) in [("m", w.m), ("n", w.n), ("m+n-1", w.target_degree)] {
        if d < threshold {
            return Err(SullivanError::TransferNotJustified(format!(
                "{what} = {d} is below the isomorphism range {threshold}"
            )));
        }
    }
    let mut out = w.clone();
    out.transferred_from = Some(w.space.clone());
    out.space = target.to_string();
    out.transcript.verified(
        "transfer degree bound",
        format!("degrees {}, {}, {} are all >= {threshold}", w.m, w.n, w.target_degree),
    );
    Ok(out)
}

/// Cited sources for the parts of the rational criterion that are not
/// computed here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalProvenance {
    /// Source for decomposability and regularity of relations that are
    /// only partially printed.
    pub relations: String,
    pub transfer: Option<TransferFact>,
}

const QUADRATIC_PART_CITATION: &str =
    "Félix-Halperin-Thomas, Rational Homotopy Theory, quadratic part of the minimal model differential is dual to the Whitehead product";

/// Runs the rational criterion on `pres` (the cohomology of `space`, or of
/// the transfer source when a transfer fact is given).
pub fn check_rational_criterion(
    space: &str,
    pres: &Presentation,
    provenance: &RationalProvenance,
) -> Result<Verdict, SullivanError> {
    let mut t = Transcript::new();
    let model_space = provenance.transfer.as_ref().map_or(space, |f| f.source.as_str());
    let refuse = |t: Transcript, failed: String| {
        Ok(Verdict::Refused(Refusal {
            space: space.to_string(),
            criterion: Criterion::Rational,
            failed_hypothesis: failed,
            transcript: t,
            exception: None,
        }))
    };
    if let Err(SullivanError::Hypothesis(h)) = formal_model_hypothesis(pres) {
        return refuse(t, h);
    }
    t.verified("coefficient field", "Q");
    t.verified("generator parity", "all generators have even degree");
    t.verified(
        "relation count",
        format!("{} relations for {} generators", pres.relations().len(), pres.generators().len()),
    );
    for (i, r) in pres.relations().iter().enumerate() {
        if r.is_explicit() {
            t.verified(
                format!("relation {i} decomposable"),
                format!("degree {} body has word length >= 2", r.degree()),
            );
        } else {
            t.asserted(
                format!("relation {i} decomposable"),
                format!("degree {} relation, certified terms have word length >= 2", r.degree()),
                &provenance.relations,
            );
        }
    }
    if pres.all_explicit() {
        if !is_complete_intersection(pres)? {
            return refuse(t, "relations do not form a regular sequence".into());
        }
        t.verified("complete intersection", "Hilbert function matches the regular-sequence series");
    } else {
        t.asserted(
            "complete intersection",
            "cohomology is finite dimensional, so the relations form a regular sequence",
            &provenance.relations,
        );
    }
    let model = build_formal_model(pres)?.labelled(model_space);
    if model.is_explicit() {
        if !check_d_squared(&model)? {
            return refuse(t, "d∘d is nonzero".into());
        }
        t.verified("d∘d = 0", "checked on every generator");
    }
    t.verified("formal minimal model", model.to_text());
    let Some(mut w) = find_rational_witness(&model) else {
        return refuse(t, "no relation has a quadratic term".into());
    };
    t.extend(&w.transcript);
    t.asserted(
        "Whitehead product from quadratic term",
        format!("[a,b] != 0 in pi_{} (x) Q of {model_space}", w.target_degree),
        QUADRATIC_PART_CITATION,
    );
    if let Some(fact) = &provenance.transfer {
        t.asserted(
            "rational homotopy isomorphism",
            format!(
                "{} -> {} with fiber {} is an isomorphism on pi_* (x) Q for * >= {}",
                fact.source, fact.target, fact.fiber, fact.threshold
            ),
            &fact.citation,
        );
        match transfer_witness(&w, fact.threshold, &fact.target) {
            Ok(moved) => w = moved,
            Err(SullivanError::TransferNotJustified(why)) => return refuse(t, why),
            Err(e) => return Err(e),
        }
        t.extend(&Transcript::from_entries(w.transcript.entries()[1..].to_vec()));
    }
    let cert = Certificate::new(space, Criterion::Rational, w.to_witness(), t)
        .expect("transcript has machine-verified entries");
    Ok(Verdict::Certified(cert))
}
