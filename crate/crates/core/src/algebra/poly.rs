use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::field::{FieldSpec, Scalar};
use super::AlgebraError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// A generator of a free graded-commutative algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    name: String,
    degree: u32,
    squares_to_zero: bool,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32, squares_to_zero: bool) -> Self {
        Generator { name: name.into(), degree, squares_to_zero }
    }

    /// Polynomial (non-nilpotent) generator.
    pub fn polynomial(name: impl Into<String>, degree: u32) -> Self {
        Self::new(name, degree, false)
    }

    /// Exterior generator: its square vanishes.
    pub fn exterior(name: impl Into<String>, degree: u32) -> Self {
        Self::new(name, degree, true)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn parity(&self) -> Parity {
        if self.degree.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn squares_to_zero(&self) -> bool {
        self.squares_to_zero
    }
}

/// Exponent vector over a generator table, ordered by degree and then
/// lexicographically by generator index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exponents[i]
    }

    /// Number of generator factors counted with multiplicity.
    pub fn word_length(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0 && self.exponents.iter().all(|&e| e == 0)
    }

    /// Generator indices with multiplicity, in canonical order.
    pub fn factors(&self) -> Vec<usize> {
        self.exponents.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize)).collect()
    }
}

/// Finite linear combination of monomials with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn homogeneous_component(&self, degree: u32) -> Poly {
        Poly {
            terms: self.terms.iter().filter(|(m, _)| m.degree == degree).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|m| m.degree).collect();
        d.dedup();
        d
    }

    /// Terms whose monomial has the given word length.
    pub fn with_word_length(&self, len: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.word_length() == len)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Poly {
        Poly { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    fn add_term(&mut self, field: &FieldSpec, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = field.add(o.get(), &c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }
}

/// A generator table together with its coefficient field: the free
/// graded-commutative algebra that polynomials live in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Algebra {
    field: FieldSpec,
    generators: Vec<Generator>,
}

impl Algebra {
    pub fn new(field: FieldSpec, generators: Vec<Generator>) -> Result<Self, AlgebraError> {
        let mut seen = HashMap::new();
        for g in &generators {
            if !is_identifier(&g.name) {
                return Err(AlgebraError::InvalidGenerator {
                    name: g.name.clone(),
                    reason: "names must match [A-Za-z][A-Za-z0-9_]*".into(),
                });
            }
            if g.degree == 0 {
                return Err(AlgebraError::InvalidGenerator {
                    name: g.name.clone(),
                    reason: "degree must be positive".into(),
                });
            }
            if g.parity() == Parity::Odd && field.characteristic() != 2 && !g.squares_to_zero {
                return Err(AlgebraError::InvalidGenerator {
                    name: g.name.clone(),
                    reason: "odd generators square to zero away from characteristic 2".into(),
                });
            }
            if seen.insert(g.name.clone(), ()).is_some() {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(Algebra { field, generators })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.generators[i]
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Builds a monomial, rejecting exponents above one on square-zero
    /// generators.
    pub fn monomial(&self, exponents: Vec<u32>) -> Result<Monomial, AlgebraError> {
        self.check_arity(exponents.len())?;
        for (g, &e) in self.generators.iter().zip(&exponents) {
            if g.squares_to_zero && e > 1 {
                return Err(AlgebraError::InvalidMonomial(format!(
                    "generator `{}` squares to zero but has exponent {e}",
                    g.name
                )));
            }
        }
        let degree = self.generators.iter().zip(&exponents).map(|(g, &e)| g.degree * e).sum();
        Ok(Monomial { degree, exponents })
    }

    pub fn unit_monomial(&self) -> Monomial {
        Monomial { degree: 0, exponents: vec![0; self.generators.len()] }
    }

    pub fn generator_monomial(&self, i: usize) -> Monomial {
        let mut exponents = vec![0; self.generators.len()];
        exponents[i] = 1;
        Monomial { degree: self.generators[i].degree, exponents }
    }

    pub fn one(&self) -> Poly {
        self.term(self.unit_monomial(), Scalar::one())
    }

    pub fn zero(&self) -> Poly {
        Poly::zero()
    }

    pub fn gen(&self, i: usize) -> Poly {
        self.term(self.generator_monomial(i), Scalar::one())
    }

    pub fn gen_named(&self, name: &str) -> Option<Poly> {
        self.index_of(name).map(|i| self.gen(i))
    }

    pub fn constant(&self, c: i64) -> Poly {
        self.term(self.unit_monomial(), self.field.from_int(c))
    }

    /// Single term `c·m`; `c` is reduced into the field.
    pub fn term(&self, m: Monomial, c: Scalar) -> Poly {
        let c = self.field.reduce(&c).expect("coefficient defined in field");
        let mut p = Poly::zero();
        p.add_term(&self.field, m, c);
        p
    }

    /// Collects `(monomial, coefficient)` pairs into canonical form.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Result<Poly, AlgebraError> {
        let mut p = Poly::zero();
        for (m, c) in terms {
            self.check_arity(m.exponents.len())?;
            let c = self.field.reduce(&c)?;
            p.add_term(&self.field, m, c);
        }
        Ok(p)
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = a.clone();
        for (m, c) in &b.terms {
            out.add_term(&self.field, m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        self.scale(a, &self.field.from_int(-1))
    }

    pub fn scale(&self, a: &Poly, c: &Scalar) -> Poly {
        let mut out = Poly::zero();
        for (m, x) in &a.terms {
            out.add_term(&self.field, m.clone(), self.field.mul(x, c));
        }
        out
    }

    /// Product with the Koszul sign rule: moving an odd factor past another
    /// odd factor contributes `-1`, and square-zero generators annihilate
    /// their own square.
    pub fn mul(&self, a: &Poly, b: &Poly) -> Result<Poly, AlgebraError> {
        for m in a.terms.keys().chain(b.terms.keys()) {
            self.check_arity(m.exponents.len())?;
        }
        let mut out = Poly::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some((m, negative)) = self.mul_monomials(ma, mb) {
                    let mut c = self.field.mul(ca, cb);
                    if negative {
                        c = self.field.neg(&c);
                    }
                    out.add_term(&self.field, m, c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, a: &Poly, e: u32) -> Result<Poly, AlgebraError> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    pub(crate) fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        let n = self.generators.len();
        let mut exponents = Vec::with_capacity(n);
        // parity of the odd-degree part of `a` strictly to the right of index j
        let mut suffix_odd = vec![false; n + 1];
        for i in (0..n).rev() {
            let odd = self.generators[i].degree % 2 == 1 && a.exponents[i] % 2 == 1;
            suffix_odd[i] = suffix_odd[i + 1] ^ odd;
        }
        let mut negative = false;
        for j in 0..n {
            let g = &self.generators[j];
            let e = a.exponents[j] + b.exponents[j];
            if g.squares_to_zero && e > 1 {
                return None;
            }
            if g.degree % 2 == 1 && b.exponents[j] % 2 == 1 && suffix_odd[j + 1] {
                negative = !negative;
            }
            exponents.push(e);
        }
        Some((Monomial { degree: a.degree + b.degree, exponents }, negative))
    }

    /// Ring map sending generator `i` to `images[i]` in `target`.
    pub fn substitute(&self, p: &Poly, target: &Algebra, images: &[Poly]) -> Result<Poly, AlgebraError> {
        self.check_arity(images.len())?;
        let mut out = Poly::zero();
        for (m, c) in &p.terms {
            let mut acc = target.one();
            for i in m.factors() {
                acc = target.mul(&acc, &images[i])?;
                if acc.is_zero() {
                    break;
                }
            }
            let c = target.field.reduce(c)?;
            out = target.add(&out, &target.scale(&acc, &c));
        }
        Ok(out)
    }

    /// Rewrites a polynomial of another algebra that has the same generator
    /// count into this one (used to change the field or the names).
    pub fn reinterpret(&self, p: &Poly) -> Result<Poly, AlgebraError> {
        self.from_terms(p.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    /// Every monomial of the given degree, in canonical order.
    pub fn monomials_of_degree(&self, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.generators.len()];
        self.enumerate(0, degree, &mut exps, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, i: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == self.generators.len() {
            if remaining == 0 {
                out.push(Monomial { degree: self.degree_of(exps), exponents: exps.clone() });
            }
            return;
        }
        let g = &self.generators[i];
        let max = if g.squares_to_zero { 1 } else { remaining / g.degree };
        for e in 0..=max.min(remaining / g.degree) {
            exps[i] = e;
            self.enumerate(i + 1, remaining - e * g.degree, exps, out);
        }
        exps[i] = 0;
    }

    fn degree_of(&self, exps: &[u32]) -> u32 {
        self.generators.iter().zip(exps).map(|(g, &e)| g.degree * e).sum()
    }

    pub(crate) fn check_arity(&self, found: usize) -> Result<(), AlgebraError> {
        if found != self.generators.len() {
            return Err(AlgebraError::TableMismatch { expected: self.generators.len(), found });
        }
        Ok(())
    }

    /// Monomial from `(generator name, exponent)` pairs.
    pub fn monomial_from_names(&self, factors: &[(&str, u32)]) -> Result<Monomial, AlgebraError> {
        let mut exps = vec![0; self.generators.len()];
        for (name, e) in factors {
            let i = self.index_of(name).ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))?;
            exps[i] += e;
        }
        self.monomial(exps)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// True iff every monomial of the homogeneous polynomial `p` has word
/// length at least two.
pub fn is_decomposable(p: &Poly) -> Result<bool, AlgebraError> {
    if !p.is_homogeneous() {
        return Err(AlgebraError::NotHomogeneous);
    }
    Ok(p.monomials().all(|m| m.word_length() >= 2))
}
