//! Instantiating families: parameter-dependent presentations, sources and
//! operation values.

use std::collections::BTreeMap;

use crate::algebra::{format_poly, FieldSpec, Generator, Poly, Presentation, Relation};
use crate::steenrod::{
    char_class_operation, ActionEntry, ActionProvenance, Group, Operation, OperationAction, SourceMap, SpaceCohomology,
    SteenrodCriterionInstance, SuspensionModel, TorusModel,
};
use crate::sullivan::{RationalProvenance, TransferFact};
use crate::whitehead::{ExteriorActionData, GeneratingMapWitness};

use super::data::{Catalog, CrossCheckRecord, SpaceRecord};
use super::plan::Lift;
use super::{CatalogError, FamilyId, Params};

/// A fully populated member of a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceInstance {
    pub family: FamilyId,
    pub params: Params,
    /// Family id with parameters, e.g. `AI(n=7)`.
    pub label: String,
    /// `G/H`.
    pub name: String,
    /// Reduction applied before routing, e.g. swapping `m` and `n`.
    pub normalization: Option<String>,
    pub(crate) data: InstanceData,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum InstanceData {
    Steenrod { criterion: Box<SteenrodCriterionInstance>, cross_check: Option<CrossCheckRecord>, lift: Option<Lift> },
    Rational { presentation: Presentation, provenance: RationalProvenance, fallback: Fallback },
    Projective { data: ExteriorActionData, map: GeneratingMapWitness },
    Recorded { statement: String, citation: String },
}

/// What to do when the rational criterion refuses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Fallback {
    None,
    Recorded { statement: String, citation: String },
    Exception { note: String, citation: String },
}

impl SpaceInstance {
    /// The cohomology presentations this instance carries.
    pub fn presentations(&self) -> Vec<&Presentation> {
        match &self.data {
            InstanceData::Steenrod { criterion, .. } => vec![&criterion.cohomology.presentation],
            InstanceData::Rational { presentation, .. } => vec![presentation],
            InstanceData::Projective { data, .. } => vec![data.presentation()],
            InstanceData::Recorded { .. } => vec![],
        }
    }

    /// The Steenrod criterion data, when the instance routes there.
    pub fn steenrod_instance(&self) -> Option<&SteenrodCriterionInstance> {
        match &self.data {
            InstanceData::Steenrod { criterion, .. } => Some(criterion),
            _ => None,
        }
    }

    /// A copy with the Steenrod criterion data replaced.
    pub fn with_steenrod_instance(&self, inst: SteenrodCriterionInstance) -> Option<SpaceInstance> {
        let mut out = self.clone();
        match &mut out.data {
            InstanceData::Steenrod { criterion, .. } => **criterion = inst,
            _ => return None,
        }
        Some(out)
    }
}

pub fn instantiate(catalog: &Catalog, family: FamilyId, params: Params) -> Result<SpaceInstance, CatalogError> {
    params.validate(family)?;
    let label = format!("{family}{params}");
    let name = family.homogeneous_name(&params);
    let comp = |e: &dyn std::fmt::Display| CatalogError::Computation { space: label.clone(), message: e.to_string() };
    let hermitian =
        |statement: String| InstanceData::Recorded { statement, citation: catalog.citation("hermitian").to_string() };
    let mut normalization = None;
    let data = match family {
        FamilyId::AI => {
            let n = params.n.unwrap();
            if n == 2 {
                InstanceData::Recorded {
                    statement: "AI(n=2) = SU(2)/SO(2) = S^2 and [1_{S^2}, 1_{S^2}] != 0".into(),
                    citation: catalog.citation("s2_whitehead").to_string(),
                }
            } else {
                let criterion = orthogonal_instance(catalog, &label, n, true).map_err(|e| comp(&e))?;
                InstanceData::Steenrod { criterion: Box::new(criterion), cross_check: None, lift: None }
            }
        }
        FamilyId::BDI => {
            let (m, n) = normalize(&params, &mut normalization);
            if n == 2 {
                hermitian(format!("BDI with min(m, n) = 2 is the Hermitian space SO({})/SO({m})×SO(2)", m + 2))
            } else {
                let criterion = orthogonal_instance(catalog, &format!("BSO({n})"), n, false).map_err(|e| comp(&e))?;
                let lift = Lift {
                    map: format!("{label} -> BSO({n})"),
                    target: label.clone(),
                    connectivity: n,
                    kind: format!("{n}-equivalence"),
                    citation: catalog.citation("bdi_equivalence").to_string(),
                };
                InstanceData::Steenrod { criterion: Box::new(criterion), cross_check: None, lift: Some(lift) }
            }
        }
        FamilyId::CII => {
            let (_, n) = normalize(&params, &mut normalization);
            let criterion = symplectic_instance(catalog, n).map_err(|e| comp(&e))?;
            let lift = Lift {
                map: format!("{label} -> BSp({n})"),
                target: label.clone(),
                connectivity: 4 * n + 2,
                kind: format!("{}-equivalence", 4 * n + 2),
                citation: catalog.citation("cii_equivalence").to_string(),
            };
            InstanceData::Steenrod { criterion: Box::new(criterion), cross_check: None, lift: Some(lift) }
        }
        FamilyId::AII => {
            let n = params.n.unwrap();
            let data = aii_data(catalog, n).map_err(|e| comp(&e))?;
            let map = GeneratingMapWitness::suspension(
                format!("HP^{}", n - 1),
                label.clone(),
                catalog.citation("aii_generating"),
            );
            InstanceData::Projective { data, map }
        }
        FamilyId::AIII => {
            let (m, n) = (params.m.unwrap(), params.n.unwrap());
            let (lo, hi) = (m.min(n), m.max(n));
            if lo == 1 {
                let presentation = complex_projective(hi).map_err(|e| comp(&e))?;
                let fallback = if hi == 3 {
                    Fallback::Exception {
                        note: "CP^3: the known exception, its loop space is homotopy commutative".into(),
                        citation: catalog.citation("ganea").to_string(),
                    }
                } else {
                    Fallback::Recorded {
                        statement: format!("CP^{hi} is an irreducible Hermitian symmetric space other than CP^3"),
                        citation: catalog.citation("hermitian").to_string(),
                    }
                };
                InstanceData::Rational {
                    presentation,
                    provenance: RationalProvenance {
                        relations: catalog.citation("cp_cohomology").to_string(),
                        transfer: None,
                    },
                    fallback,
                }
            } else {
                hermitian(format!("{label} is a complex Grassmannian, Hermitian and not CP^3"))
            }
        }
        FamilyId::DIII => {
            let n = params.n.unwrap();
            if n == 3 {
                // SO(6)/U(3) is CP^3.
                InstanceData::Rational {
                    presentation: complex_projective(3).map_err(|e| comp(&e))?,
                    provenance: RationalProvenance {
                        relations: format!("SO(6)/U(3) = CP^3; {}", catalog.citation("cp_cohomology")),
                        transfer: None,
                    },
                    fallback: Fallback::Exception {
                        note: "DIII(n=3) = SO(6)/U(3) is CP^3, the known exception".into(),
                        citation: catalog.citation("ganea").to_string(),
                    },
                }
            } else {
                hermitian(format!("{label} is an irreducible Hermitian symmetric space other than CP^3"))
            }
        }
        FamilyId::CI => hermitian(format!("{label} is an irreducible Hermitian symmetric space other than CP^3")),
        _ => exceptional(catalog, family, &label)?,
    };
    Ok(SpaceInstance { family, params, label, name, normalization, data })
}

/// Orders `(m, n)` so that `m >= n` and records the swap.
fn normalize(params: &Params, note: &mut Option<String>) -> (u32, u32) {
    let (m, n) = (params.m.unwrap(), params.n.unwrap());
    if m < n {
        *note = Some(format!("swapped to m = {n} >= n = {m}"));
        (n, m)
    } else {
        (m, n)
    }
}

fn complex_projective(k: u32) -> Result<Presentation, crate::algebra::AlgebraError> {
    let field = FieldSpec::rationals();
    let alg = crate::algebra::Algebra::new(field, vec![Generator::polynomial("x2", 2)])?;
    let rel = alg.pow(&alg.gen(0), k + 1)?;
    Presentation::new(alg, vec![Relation::explicit(2 * (k + 1), rel)], Some(2 * k))
}

fn real_projective_source(label: String, prefix: &str, top: u32, citation: String) -> SourceMap {
    let pullback = (2..=top + 1).map(|i| (format!("{prefix}{i}"), format!("Σu^{}", i - 1))).collect();
    SourceMap { label, model: SuspensionModel::real_projective(top), pullback, citation }
}

/// The criterion on `SU(n)/SO(n)` (`exterior`, classes `v_i`) or on
/// `BSO(n)` (polynomial, classes `w_i`).
fn orthogonal_instance(
    catalog: &Catalog,
    space: &str,
    n: u32,
    exterior: bool,
) -> Result<SteenrodCriterionInstance, crate::steenrod::SteenrodError> {
    let field = FieldSpec::prime(2)?;
    let prefix = if exterior { "v" } else { "w" };
    let gens = (2..=n)
        .map(|i| {
            let name = format!("{prefix}{i}");
            if exterior {
                Generator::exterior(name, i)
            } else {
                Generator::polynomial(name, i)
            }
        })
        .collect();
    let presentation = Presentation::from_parts(field, gens, vec![], None)?;
    let (op, b_index, beta_top) =
        if n.is_multiple_of(4) || n % 4 == 3 { (Operation::Sq(2), 2, 1) } else { (Operation::Sq(n - 1), n - 1, n - 2) };
    let so = TorusModel::new(Group::SpecialOrthogonal, n as usize, 2)?;
    let x = format!("{prefix}{n}");
    let value = char_class_operation(&so, &format!("w{n}"), op)?;
    let images: Vec<Option<Poly>> =
        (2..=n).map(|i| presentation.algebra().gen_named(&format!("{prefix}{i}"))).collect();
    let (image, residual) = so.pull_back(&value, presentation.algebra(), &images)?;
    debug_assert!(residual.is_zero());
    let mut actions = OperationAction::new();
    let (identification, id_cite, source_cite) = if exterior {
        (
            "v_i = ι*(w_i) for ι: SU(n)/SO(n) -> BSO(n)".to_string(),
            catalog.citation("ai_cohomology").to_string(),
            format!("{}; {}", catalog.citation("reflection"), catalog.citation("ai_lift")),
        )
    } else {
        (
            "w_i are the Stiefel-Whitney classes of BSO(n)".to_string(),
            catalog.citation("bso_cohomology").to_string(),
            catalog.citation("reflection").to_string(),
        )
    };
    actions.insert(
        x.clone(),
        op,
        ActionEntry {
            value: image,
            provenance: ActionProvenance::Computed {
                derivation: format!(
                    "the splitting principle in H*(BSO({n}); Z2): {op}(w{n}) = {}",
                    format_poly(so.class_algebra(), &value)
                ),
                identification,
                citation: id_cite.clone(),
            },
        },
    );
    let map = if exterior { "g̃" } else { "ḡ" };
    let alpha = real_projective_source(map.to_string(), prefix, n - 1, source_cite.clone());
    let beta = real_projective_source(format!("{map}|ΣRP^{beta_top}"), prefix, beta_top, source_cite);
    Ok(SteenrodCriterionInstance {
        space: space.to_string(),
        cohomology: SpaceCohomology { presentation, actions, citation: id_cite },
        a: x.clone(),
        b: format!("{prefix}{b_index}"),
        x,
        operation: op,
        alpha,
        beta,
    })
}

fn quasi_projective_source(
    label: String,
    k: u32,
    prime: u32,
    citation: String,
) -> Result<SourceMap, crate::steenrod::SteenrodError> {
    let pullback = (1..=k).map(|i| (format!("q{i}"), format!("Σx_{i}"))).collect();
    Ok(SourceMap { label, model: SuspensionModel::quasi_projective(k, prime)?, pullback, citation })
}

/// Smallest odd prime factor.
fn odd_prime_factor(n: u32) -> Option<u32> {
    let mut m = n;
    while m.is_multiple_of(2) && m > 0 {
        m /= 2;
    }
    (3..=m).step_by(2).find(|p| m.is_multiple_of(*p))
}

/// The criterion on `BSp(n)` through `ḡ: ΣQ_n -> BSp(n)`.
fn symplectic_instance(catalog: &Catalog, n: u32) -> Result<SteenrodCriterionInstance, crate::steenrod::SteenrodError> {
    // n = 1 uses P^1 at p = 3 with a = b = q1; otherwise an odd prime factor
    // p gives P^1 with a = q_{(p-1)/2}, and a power of 2 gives Sq^4.
    let (prime, op, a, alpha_k, b, beta_k) = match odd_prime_factor(n) {
        _ if n == 1 => (3, Operation::P { k: 1, prime: 3 }, 1, 1, 1, 1),
        Some(p) => (p, Operation::P { k: 1, prime: p }, (p - 1) / 2, (p - 1) / 2, n, n),
        None => (2, Operation::Sq(4), n, n, 1, 1),
    };
    let field = FieldSpec::prime(prime)?;
    let gens = (1..=n).map(|i| Generator::polynomial(format!("q{i}"), 4 * i)).collect();
    let presentation = Presentation::from_parts(field, gens, vec![], None)?;
    let sp = TorusModel::new(Group::Symplectic, n as usize, prime)?;
    let x = format!("q{n}");
    let value = char_class_operation(&sp, &x, op)?;
    let images: Vec<Option<Poly>> = (1..=n).map(|i| presentation.algebra().gen_named(&format!("q{i}"))).collect();
    let (image, _) = sp.pull_back(&value, presentation.algebra(), &images)?;
    let mut actions = OperationAction::new();
    let cite = catalog.citation("bsp_cohomology").to_string();
    actions.insert(
        x.clone(),
        op,
        ActionEntry {
            value: image,
            provenance: ActionProvenance::Computed {
                derivation: format!(
                    "the splitting principle in H*(BSp({n}); Z{prime}) with q_i = e_i(t_1^2, ..., t_n^2)"
                ),
                identification: "q_i are the symplectic Pontrjagin classes of BSp(n)".into(),
                citation: cite.clone(),
            },
        },
    );
    let src_cite = catalog.citation("quasi_projective").to_string();
    let restrict = |k: u32| if k == n { "ḡ".to_string() } else { format!("ḡ|ΣQ_{k}") };
    let alpha = quasi_projective_source(restrict(alpha_k), alpha_k, prime, src_cite.clone())?;
    let beta = quasi_projective_source(restrict(beta_k), beta_k, prime, src_cite)?;
    Ok(SteenrodCriterionInstance {
        space: format!("BSp({n})"),
        cohomology: SpaceCohomology { presentation, actions, citation: cite },
        a: format!("q{a}"),
        b: format!("q{b}"),
        x,
        operation: op,
        alpha,
        beta,
    })
}

/// Total squares on `x_{4i+1}`, `1 <= i < n`, from the linear part of the
/// Wu formula for Chern classes: `Sq^{2j} x_{2k-1} = C(k-1, j) x_{2k+2j-1}`.
/// Odd `j` never contributes since `C(2i, j)` is even.
pub fn aii_square_table(n: u32) -> Result<(Presentation, BTreeMap<String, Poly>), crate::algebra::AlgebraError> {
    let field = FieldSpec::prime(2)?;
    let gens: Vec<Generator> = (1..n).map(|i| Generator::exterior(format!("x{}", 4 * i + 1), 4 * i + 1)).collect();
    let presentation = Presentation::from_parts(field, gens, vec![], None)?;
    let alg = presentation.algebra();
    let mut table = BTreeMap::new();
    for i in 1..n {
        let k = 2 * i + 1;
        let mut sq = alg.zero();
        for j in 0.. {
            let target = 2 * (k + j) - 1;
            if target > 4 * n - 3 {
                break;
            }
            let c = field.binomial(u64::from(k - 1), u64::from(j));
            if let Some(g) = alg.gen_named(&format!("x{target}")) {
                sq = alg.add(&sq, &alg.scale(&g, &c));
            } else {
                debug_assert!(num_traits::Zero::is_zero(&c));
            }
        }
        table.insert(format!("x{}", 4 * i + 1), sq);
    }
    Ok((presentation, table))
}

fn aii_data(catalog: &Catalog, n: u32) -> Result<ExteriorActionData, CatalogError> {
    let err =
        |e: &dyn std::fmt::Display| CatalogError::Computation { space: format!("AII(n={n})"), message: e.to_string() };
    let (presentation, table) = aii_square_table(n).map_err(|e| err(&e))?;
    let citation = format!("{}; {}", catalog.citation("aii_cohomology"), catalog.citation("chern_wu"));
    ExteriorActionData::new(presentation, table, citation).map_err(|e| err(&e))
}

fn exceptional(catalog: &Catalog, family: FamilyId, label: &str) -> Result<InstanceData, CatalogError> {
    let entry = catalog
        .space(family)
        .ok_or_else(|| CatalogError::Data { file: "facts.toml".into(), message: format!("no record for {family}") })?;
    let comp =
        |e: &dyn std::fmt::Display| CatalogError::Computation { space: label.to_string(), message: e.to_string() };
    Ok(match &entry.record {
        SpaceRecord::Rational { presentation, cohomology, transfer } => InstanceData::Rational {
            presentation: presentation.clone(),
            provenance: RationalProvenance {
                relations: cohomology.clone(),
                transfer: transfer.as_ref().map(|t| TransferFact {
                    source: t.source.clone(),
                    target: label.to_string(),
                    fiber: t.fiber.clone(),
                    threshold: t.threshold,
                    citation: t.citation.clone(),
                }),
            },
            fallback: Fallback::None,
        },
        SpaceRecord::Steenrod {
            presentation,
            cohomology,
            operation,
            x,
            a,
            b,
            action,
            action_citation,
            cross_check,
            alpha,
            beta,
        } => {
            let mut actions = OperationAction::new();
            actions.insert(
                x.clone(),
                *operation,
                ActionEntry {
                    value: action.clone(),
                    provenance: ActionProvenance::Cited { citation: action_citation.clone() },
                },
            );
            let source = |s: &super::data::SourceRecord| SourceMap {
                label: s.label.clone(),
                model: s.model.clone(),
                pullback: s.pullback.clone(),
                citation: s.citation.clone(),
            };
            let criterion = SteenrodCriterionInstance {
                space: label.to_string(),
                cohomology: SpaceCohomology {
                    presentation: presentation.clone(),
                    actions,
                    citation: cohomology.clone(),
                },
                a: a.clone(),
                b: b.clone(),
                x: x.clone(),
                operation: *operation,
                alpha: source(alpha),
                beta: source(beta),
            };
            InstanceData::Steenrod { criterion: Box::new(criterion), cross_check: cross_check.clone(), lift: None }
        }
        SpaceRecord::PartialProjectivePlane { presentation, cohomology, squares, desuspension, generating_map } => {
            let data = ExteriorActionData::new(presentation.clone(), squares.clone(), cohomology.clone())
                .map_err(|e| comp(&e))?;
            let map = GeneratingMapWitness::suspension(desuspension.clone(), label.to_string(), generating_map.clone());
            InstanceData::Projective { data, map }
        }
        SpaceRecord::Recorded { statement, citation } => {
            InstanceData::Recorded { statement: statement.clone(), citation: citation.clone() }
        }
    })
}
