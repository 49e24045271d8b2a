use std::collections::BTreeMap;

use num_traits::Zero;

use super::field::{FieldSpec, Scalar};
use super::poly::{is_decomposable, Algebra, Generator, Monomial, Poly};
use super::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationBody {
    Explicit(Poly),
    /// Known only by degree and a few certified terms; the full body is
    /// asserted decomposable by a cited source.
    Partial {
        certified: Poly,
        decomposable_asserted: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    degree: u32,
    body: RelationBody,
}

impl Relation {
    pub fn explicit(degree: u32, body: Poly) -> Self {
        Relation { degree, body: RelationBody::Explicit(body) }
    }

    pub fn partial(degree: u32, certified: Poly, decomposable_asserted: bool) -> Self {
        Relation { degree, body: RelationBody::Partial { certified, decomposable_asserted } }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn body(&self) -> &RelationBody {
        &self.body
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.body, RelationBody::Explicit(_))
    }

    /// The explicit body, or the certified terms of a partial one.
    pub fn known_terms(&self) -> &Poly {
        match &self.body {
            RelationBody::Explicit(p) => p,
            RelationBody::Partial { certified, .. } => certified,
        }
    }

    /// Decomposability: computed for explicit bodies, read from the
    /// assertion flag for partial ones.
    pub fn decomposable(&self) -> bool {
        match &self.body {
            RelationBody::Explicit(p) => is_decomposable(p).unwrap_or(false),
            RelationBody::Partial { certified, decomposable_asserted } => {
                *decomposable_asserted && certified.monomials().all(|m| m.word_length() >= 2)
            }
        }
    }

    fn validate(&self, index: usize, alg: &Algebra) -> Result<(), AlgebraError> {
        let invalid = |reason: String| AlgebraError::InvalidRelation { index, reason };
        if self.degree == 0 {
            return Err(invalid("degree must be positive".into()));
        }
        for m in self.known_terms().monomials() {
            alg.check_arity(m.exponents().len())?;
            if m.degree() != self.degree {
                return Err(invalid(format!("term of degree {} in a relation of degree {}", m.degree(), self.degree)));
            }
        }
        Ok(())
    }
}

/// A quadratic monomial `g_i g_j` (with `i <= j`) and its coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticTerm {
    pub pair: (usize, usize),
    pub coefficient: Scalar,
}

/// All word-length-two terms of the known part of a relation.
pub fn quadratic_terms(r: &Relation) -> Vec<QuadraticTerm> {
    r.known_terms()
        .terms()
        .filter(|(m, _)| m.word_length() == 2)
        .map(|(m, c)| {
            let f = m.factors();
            QuadraticTerm { pair: (f[0], f[1]), coefficient: c.clone() }
        })
        .collect()
}

/// Generators and homogeneous relations over a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    algebra: Algebra,
    relations: Vec<Relation>,
    formal_dimension: Option<u32>,
}

impl Presentation {
    pub fn new(
        algebra: Algebra,
        relations: Vec<Relation>,
        formal_dimension: Option<u32>,
    ) -> Result<Self, AlgebraError> {
        for (i, r) in relations.iter().enumerate() {
            r.validate(i, &algebra)?;
        }
        if formal_dimension == Some(0) {
            return Err(AlgebraError::HypothesisViolation("formal dimension must be positive".into()));
        }
        Ok(Presentation { algebra, relations, formal_dimension })
    }

    /// Convenience constructor from generators.
    pub fn from_parts(
        field: FieldSpec,
        generators: Vec<Generator>,
        relations: Vec<Relation>,
        formal_dimension: Option<u32>,
    ) -> Result<Self, AlgebraError> {
        Self::new(Algebra::new(field, generators)?, relations, formal_dimension)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn generators(&self) -> &[Generator] {
        self.algebra.generators()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn formal_dimension(&self) -> Option<u32> {
        self.formal_dimension
    }

    pub fn all_explicit(&self) -> bool {
        self.relations.iter().all(Relation::is_explicit)
    }

    fn explicit_bodies(&self) -> Result<Vec<&Poly>, AlgebraError> {
        self.relations
            .iter()
            .enumerate()
            .map(|(i, r)| match r.body() {
                RelationBody::Explicit(p) => Ok(p),
                RelationBody::Partial { .. } => Err(AlgebraError::PartialRelation(i)),
            })
            .collect()
    }

    /// Generators that are not square-zero (they contribute `1/(1 - t^d)`
    /// to the Hilbert series).
    pub fn polynomial_generators(&self) -> impl Iterator<Item = &Generator> {
        self.generators().iter().filter(|g| !g.squares_to_zero())
    }

    /// Top degree predicted for a complete intersection.
    pub fn expected_top_degree(&self) -> i64 {
        let rel: i64 = self.relations.iter().map(|r| r.degree as i64).sum();
        let poly: i64 = self.polynomial_generators().map(|g| g.degree() as i64).sum();
        let ext: i64 = self.generators().iter().filter(|g| g.squares_to_zero()).map(|g| g.degree() as i64).sum();
        rel - poly + ext
    }

    /// Dimension of the indecomposable quotient in `degree`: generators of
    /// that degree modulo the linear parts of relations of that degree.
    pub fn indecomposable_dimension(&self, degree: u32) -> Result<usize, AlgebraError> {
        let gens: Vec<usize> =
            (0..self.algebra.len()).filter(|&i| self.algebra.generator(i).degree() == degree).collect();
        let mut echelon = Echelon::new(self.field());
        for (i, r) in self.relations.iter().enumerate() {
            if r.degree() != degree {
                continue;
            }
            let body = match r.body() {
                RelationBody::Explicit(p) => p,
                RelationBody::Partial { .. } => return Err(AlgebraError::PartialRelation(i)),
            };
            let row =
                body.terms().filter(|(m, _)| m.word_length() == 1).map(|(m, c)| (m.factors()[0], c.clone())).collect();
            echelon.insert(row);
        }
        Ok(gens.len() - echelon.rank())
    }
}

impl Presentation {
    /// Whether a homogeneous element lies in the ideal generated by the
    /// relations, i.e. vanishes in the quotient.
    pub fn ideal_contains(&self, p: &Poly) -> Result<bool, AlgebraError> {
        let Some(d) = p.degree() else {
            return Ok(true);
        };
        if !p.is_homogeneous() {
            return Err(AlgebraError::NotHomogeneous);
        }
        let bodies = self.explicit_bodies()?;
        let alg = &self.algebra;
        let basis = alg.monomials_of_degree(d);
        let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut echelon = Echelon::new(self.field());
        for (rel, body) in self.relations.iter().zip(&bodies) {
            if rel.degree() > d || body.is_zero() {
                continue;
            }
            for m in alg.monomials_of_degree(d - rel.degree()) {
                let prod = alg.mul(&alg.term(m, self.field().one()), body)?;
                echelon.insert(prod.terms().map(|(mm, c)| (index[mm], c.clone())).collect());
            }
        }
        let row = p
            .terms()
            .map(|(m, c)| index.get(m).map(|&i| (i, c.clone())).ok_or(AlgebraError::NotHomogeneous))
            .collect::<Result<_, _>>()?;
        Ok(!echelon.insert(row))
    }
}

/// Incremental row echelon form over a field with sparse rows.
pub(crate) struct Echelon {
    field: FieldSpec,
    pivots: BTreeMap<usize, BTreeMap<usize, Scalar>>,
}

impl Echelon {
    pub(crate) fn new(field: FieldSpec) -> Self {
        Echelon { field, pivots: BTreeMap::new() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots and adds it if independent.
    pub(crate) fn insert(&mut self, mut row: BTreeMap<usize, Scalar>) -> bool {
        row.retain(|_, c| !c.is_zero());
        loop {
            let Some((&col, lead)) = row.iter().find(|(col, _)| self.pivots.contains_key(col)) else {
                break;
            };
            let lead = lead.clone();
            let pivot_row = &self.pivots[&col];
            for (&j, c) in pivot_row {
                let v = row.get(&j).cloned().unwrap_or_else(Scalar::zero);
                let nv = self.field.sub(&v, &self.field.mul(&lead, c));
                if nv.is_zero() {
                    row.remove(&j);
                } else {
                    row.insert(j, nv);
                }
            }
        }
        let Some((&col, lead)) = row.iter().next() else {
            return false;
        };
        let inv = self.field.inv(lead).expect("nonzero pivot");
        let normalized: BTreeMap<usize, Scalar> = row.iter().map(|(&j, c)| (j, self.field.mul(c, &inv))).collect();
        // keep pivot rows fully reduced against the new pivot
        for other in self.pivots.values_mut() {
            if let Some(f) = other.get(&col).cloned() {
                for (&j, c) in &normalized {
                    let v = other.get(&j).cloned().unwrap_or_else(Scalar::zero);
                    let nv = self.field.sub(&v, &self.field.mul(&f, c));
                    if nv.is_zero() {
                        other.remove(&j);
                    } else {
                        other.insert(j, nv);
                    }
                }
            }
        }
        self.pivots.insert(col, normalized);
        true
    }
}

/// Dimensions of the quotient algebra in degrees `0..=up_to`, by exact
/// degreewise linear algebra.
pub fn hilbert_function(pres: &Presentation, up_to: u32) -> Result<Vec<usize>, AlgebraError> {
    let bodies = pres.explicit_bodies()?;
    let alg = pres.algebra();
    let mut dims = Vec::with_capacity(up_to as usize + 1);
    for d in 0..=up_to {
        let basis = alg.monomials_of_degree(d);
        let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut echelon = Echelon::new(pres.field());
        for (rel, body) in pres.relations().iter().zip(&bodies) {
            if rel.degree() > d || body.is_zero() {
                continue;
            }
            for m in alg.monomials_of_degree(d - rel.degree()) {
                let prod = alg.mul(&alg.term(m, pres.field().one()), body)?;
                let row = prod.terms().map(|(mm, c)| (index[mm], c.clone())).collect();
                echelon.insert(row);
                if echelon.rank() == basis.len() {
                    break;
                }
            }
        }
        dims.push(basis.len() - echelon.rank());
    }
    Ok(dims)
}

/// Coefficients of the predicted Hilbert series
/// `prod (1 - t^|rho|) * prod (1 + t^|y|) / prod (1 - t^|x|)` up to `up_to`.
pub fn complete_intersection_series(pres: &Presentation, up_to: u32) -> Vec<i64> {
    let n = up_to as usize + 1;
    let mut series = vec![0i64; n];
    series[0] = 1;
    for r in pres.relations() {
        let d = r.degree() as usize;
        for i in (d..n).rev() {
            series[i] -= series[i - d];
        }
    }
    for g in pres.generators() {
        let d = g.degree() as usize;
        if g.squares_to_zero() {
            for i in (d..n).rev() {
                series[i] += series[i - d];
            }
        } else {
            for i in d..n {
                series[i] += series[i - d];
            }
        }
    }
    series
}

/// Checks that the relations form a regular sequence by comparing the
/// Hilbert function with the complete-intersection series.
pub fn is_complete_intersection(pres: &Presentation) -> Result<bool, AlgebraError> {
    let npoly = pres.polynomial_generators().count();
    if pres.relations().len() != npoly {
        return Err(AlgebraError::HypothesisViolation(format!(
            "{} relations for {} polynomial generators",
            pres.relations().len(),
            npoly
        )));
    }
    let bodies = pres.explicit_bodies()?;
    for (i, b) in bodies.iter().enumerate() {
        if !is_decomposable(b)? {
            return Err(AlgebraError::HypothesisViolation(format!("relation {i} is not decomposable")));
        }
    }
    let top = pres.expected_top_degree();
    if top < 0 {
        return Ok(false);
    }
    let top = top as u32;
    if let Some(fd) = pres.formal_dimension() {
        if fd != top {
            return Ok(false);
        }
    }
    // Vanishing on (top, top + max generator degree] forces vanishing above:
    // any monomial of higher degree has a divisor in that window.
    let max_gen = pres.generators().iter().map(Generator::degree).max().unwrap_or(0);
    let bound = top + max_gen;
    let dims = hilbert_function(pres, bound)?;
    let predicted = complete_intersection_series(pres, bound);
    Ok(dims.iter().zip(&predicted).enumerate().all(|(d, (&actual, &pred))| {
        if d as u32 > top {
            actual == 0
        } else {
            pred >= 0 && actual as i64 == pred
        }
    }))
}
