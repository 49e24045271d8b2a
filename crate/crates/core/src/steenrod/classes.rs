//! Characteristic classes of classifying spaces as symmetric polynomials
//! in torus variables.

use std::fmt;

use num_bigint::BigInt;

use crate::algebra::{Algebra, FieldSpec, Generator, Poly, Scalar};

use super::torus::{express_symmetric, operation_component, TorusPoly};
use super::{Operation, SteenrodError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    SpecialOrthogonal,
    SpecialUnitary,
    Symplectic,
    Spin9,
    ProjectiveSymplectic4,
}

impl Group {
    pub const ALL: [Group; 5] = [
        Group::SpecialOrthogonal,
        Group::SpecialUnitary,
        Group::Symplectic,
        Group::Spin9,
        Group::ProjectiveSymplectic4,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Group::SpecialOrthogonal => "so",
            Group::SpecialUnitary => "su",
            Group::Symplectic => "sp",
            Group::Spin9 => "spin9",
            Group::ProjectiveSymplectic4 => "psp4",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Group> {
        Group::ALL.into_iter().find(|g| g.tag().eq_ignore_ascii_case(tag))
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A class `e_index` of the torus variables (or of their squares).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharClass {
    pub name: String,
    pub index: usize,
    pub degree: u32,
}

/// Mod-p cohomology of a classifying space via its restriction to a torus.
///
/// Conventions: `so(n)` uses `n` degree-1 variables at p = 2 with
/// `w_i = e_i(t)` and `w_1 = 0`; `su(n)` uses degree-2 variables with
/// `c_i = e_i(t)` and `c_1 = 0`; `sp(n)` uses `q_i = e_i(t_1^2, ..., t_n^2)`
/// with no sign twist; `spin9` uses `p_i = e_i(t_1^2, ..., t_4^2)`;
/// `psp4` is only defined at odd primes and shares the `sp(4)` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusModel {
    group: Group,
    rank: usize,
    prime: u32,
    var_degree: u32,
    squared: bool,
    classes: Vec<CharClass>,
    class_algebra: Algebra,
}

impl TorusModel {
    pub fn new(group: Group, rank: usize, prime: u32) -> Result<Self, SteenrodError> {
        let field = FieldSpec::prime(prime)?;
        let contract = |m: String| Err(SteenrodError::Contract(m));
        let (letter, first, var_degree, squared, class_degree) = match group {
            Group::SpecialOrthogonal => {
                if prime != 2 {
                    return contract(format!("so(n) classes are modelled mod 2, not mod {prime}"));
                }
                if rank < 2 {
                    return contract("so(n) needs n >= 2".into());
                }
                ('w', 2, 1, false, 1)
            }
            Group::SpecialUnitary => {
                if rank < 2 {
                    return contract("su(n) needs n >= 2".into());
                }
                ('c', 2, 2, false, 2)
            }
            Group::Symplectic => {
                if rank < 1 {
                    return contract("sp(n) needs n >= 1".into());
                }
                ('q', 1, 2, true, 4)
            }
            Group::Spin9 | Group::ProjectiveSymplectic4 => {
                if rank != 4 {
                    return contract(format!("{group} has rank 4"));
                }
                if prime == 2 {
                    return contract(format!("{group} is modelled at odd primes only"));
                }
                (if group == Group::Spin9 { 'p' } else { 'q' }, 1, 2, true, 4)
            }
        };
        let classes: Vec<CharClass> = (first..=rank)
            .map(|k| CharClass { name: format!("{letter}{k}"), index: k, degree: class_degree * k as u32 })
            .collect();
        let class_algebra =
            Algebra::new(field, classes.iter().map(|c| Generator::polynomial(&c.name, c.degree)).collect())?;
        Ok(TorusModel { group, rank, prime, var_degree, squared, classes, class_algebra })
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn variable_degree(&self) -> u32 {
        self.var_degree
    }

    pub fn classes(&self) -> &[CharClass] {
        &self.classes
    }

    pub fn class(&self, name: &str) -> Result<&CharClass, SteenrodError> {
        self.classes
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| SteenrodError::UnknownClass { class: name.to_string(), model: self.to_string() })
    }

    /// The polynomial ring on the characteristic classes, over `F_p`.
    pub fn class_algebra(&self) -> &Algebra {
        &self.class_algebra
    }

    /// The class as a symmetric polynomial in the torus variables.
    pub fn class_polynomial(&self, name: &str) -> Result<TorusPoly, SteenrodError> {
        let c = self.class(name)?;
        let e = TorusPoly::elementary(self.rank, self.prime, c.index);
        Ok(if self.squared { e.map_exponents(|x| 2 * x) } else { e })
    }

    /// Rewrites a symmetric torus polynomial in the characteristic classes.
    pub fn to_classes(&self, f: &TorusPoly) -> Result<Poly, SteenrodError> {
        let f = if self.squared {
            f.halve_exponents()
                .ok_or_else(|| SteenrodError::Contract("expected a polynomial in the squares t_i^2".into()))?
        } else {
            f.clone()
        };
        let e = express_symmetric(&f, self.rank)?;
        let mut terms = Vec::new();
        'terms: for (exps, &c) in e.terms() {
            let mut out = vec![0u32; self.classes.len()];
            for (k, &x) in exps.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match self.classes.iter().position(|cl| cl.index == k + 1) {
                    Some(pos) => out[pos] = x,
                    // e_1 restricts to zero (w_1 or c_1).
                    None => continue 'terms,
                }
            }
            terms.push((self.class_algebra.monomial(out)?, Scalar::from_integer(BigInt::from(c))));
        }
        Ok(self.class_algebra.from_terms(terms)?)
    }

    /// Pulls a class polynomial back along a ring map given on generators.
    /// Classes whose image is `None` are unresolved: terms involving them
    /// are returned separately, untouched.
    pub fn pull_back(
        &self,
        p: &Poly,
        target: &Algebra,
        images: &[Option<Poly>],
    ) -> Result<(Poly, Poly), SteenrodError> {
        let alg = &self.class_algebra;
        let resolved: Vec<Poly> = images.iter().map(|i| i.clone().unwrap_or_else(Poly::zero)).collect();
        let unresolved = |m: &crate::algebra::Monomial| m.factors().iter().any(|&g| images[g].is_none());
        let known = p.filter_terms(|m| !unresolved(m));
        let residual = p.filter_terms(unresolved);
        let image = alg.substitute(&known, target, &resolved)?;
        Ok((image, residual))
    }
}

impl fmt::Display for TorusModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}) mod {}", self.group, self.rank, self.prime)
    }
}

/// `θ(class)` as a polynomial in characteristic classes.
pub fn char_class_operation(model: &TorusModel, class: &str, op: Operation) -> Result<Poly, SteenrodError> {
    if op.prime() != model.prime {
        return Err(SteenrodError::Contract(format!("{op} at p = {} does not act on {model}", op.prime())));
    }
    let f = model.class_polynomial(class)?;
    let g = operation_component(&f, op, model.var_degree)?;
    model.to_classes(&g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::format_poly;

    fn op(model: &TorusModel, class: &str, o: Operation) -> String {
        format_poly(model.class_algebra(), &char_class_operation(model, class, o).unwrap())
    }

    #[test]
    fn wu_examples() {
        let so4 = TorusModel::new(Group::SpecialOrthogonal, 4, 2).unwrap();
        assert_eq!(op(&so4, "w4", Operation::Sq(2)), "w2*w4");
        assert_eq!(op(&so4, "w2", Operation::Sq(1)), "w3");
        assert_eq!(op(&so4, "w3", Operation::Sq(2)), "w2*w3");
        assert_eq!(op(&so4, "w3", Operation::Sq(3)), "w3^2");
        assert_eq!(op(&so4, "w3", Operation::Sq(4)), "0");
    }

    #[test]
    fn symplectic_powers() {
        let sp2 = TorusModel::new(Group::Symplectic, 2, 2).unwrap();
        let v = char_class_operation(&sp2, "q2", Operation::Sq(4)).unwrap();
        let m = sp2.class_algebra().monomial_from_names(&[("q1", 1), ("q2", 1)]).unwrap();
        assert_eq!(v.coefficient(&m), Scalar::from_integer(1.into()));
        let sp3 = TorusModel::new(Group::Symplectic, 3, 3).unwrap();
        let v = char_class_operation(&sp3, "q3", Operation::P { k: 1, prime: 3 }).unwrap();
        let m = sp3.class_algebra().monomial_from_names(&[("q1", 1), ("q3", 1)]).unwrap();
        assert_eq!(v.coefficient(&m), Scalar::from_integer(2.into()));
    }

    #[test]
    fn unknown_classes_and_primes() {
        let so4 = TorusModel::new(Group::SpecialOrthogonal, 4, 2).unwrap();
        assert!(matches!(char_class_operation(&so4, "w9", Operation::Sq(2)), Err(SteenrodError::UnknownClass { .. })));
        assert!(TorusModel::new(Group::SpecialOrthogonal, 4, 3).is_err());
        assert!(TorusModel::new(Group::Spin9, 4, 2).is_err());
        assert!(TorusModel::new(Group::ProjectiveSymplectic4, 3, 5).is_err());
    }

    #[test]
    fn pull_back_reports_unresolved_terms() {
        let m = TorusModel::new(Group::ProjectiveSymplectic4, 4, 5).unwrap();
        let v = char_class_operation(&m, "q2", Operation::P { k: 1, prime: 5 }).unwrap();
        assert_eq!(format_poly(m.class_algebra(), &v), "2*q1^2*q2 + 3*q1*q3 + q2^2 + 3*q4");
        let target = Algebra::new(FieldSpec::prime(5).unwrap(), vec![Generator::polynomial("x8", 8)]).unwrap();
        let images = [Some(Poly::zero()), Some(target.gen(0)), Some(Poly::zero()), None];
        let (image, residual) = m.pull_back(&v, &target, &images).unwrap();
        assert_eq!(format_poly(&target, &image), "x8^2");
        assert_eq!(format_poly(m.class_algebra(), &residual), "3*q4");
    }
}
