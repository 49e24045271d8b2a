//! Cohomology of suspensions with their stable operation tables.
//!
//! A table records, for each class `c` and each operation of shift
//! strictly between 0 and `|c|` whose target degree carries a class, the
//! coefficient of that class (zero entries included). Everything else
//! follows from the axioms: the identity in shift 0, and zero when the
//! shift reaches `|c|` since squares vanish in a suspension, or when the
//! target degree is empty.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::FieldSpec;

use super::torus::binomial;
use super::{Operation, SteenrodError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuspensionBase {
    /// `Σ RP^m`.
    RealProjective(u32),
    /// `Σ Q_n` for the quaternionic quasi-projective space `Q_n`.
    QuasiProjective(u32),
    /// The sphere `S^k` itself, viewed as `Σ S^{k-1}`.
    Sphere(u32),
    /// The mod-2 Moore space `M = S^2 ∪_2 e^3 = Σ RP^2`.
    Moore,
}

impl fmt::Display for SuspensionBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuspensionBase::RealProjective(m) => write!(f, "ΣRP^{m}"),
            SuspensionBase::QuasiProjective(n) => write!(f, "ΣQ_{n}"),
            SuspensionBase::Sphere(k) => write!(f, "S^{k}"),
            SuspensionBase::Moore => f.write_str("M"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuspensionClass {
    pub name: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuspensionModel {
    base: SuspensionBase,
    prime: u32,
    classes: Vec<SuspensionClass>,
    table: BTreeMap<(usize, Operation), i128>,
}

impl SuspensionModel {
    fn build(base: SuspensionBase, prime: u32, classes: Vec<SuspensionClass>) -> Self {
        let mut degrees: Vec<u32> = classes.iter().map(|c| c.degree).collect();
        degrees.sort_unstable();
        degrees.dedup();
        assert_eq!(degrees.len(), classes.len(), "at most one class per degree");
        SuspensionModel { base, prime, classes, table: BTreeMap::new() }
    }

    /// `Σ RP^m` mod 2 with `Sq^k Σu^i = C(i, k) Σu^{i+k}`.
    pub fn real_projective(m: u32) -> Self {
        let classes = (1..=m).map(|i| SuspensionClass { name: format!("Σu^{i}"), degree: i + 1 }).collect();
        let mut model = Self::build(SuspensionBase::RealProjective(m), 2, classes);
        for i in 1..=m {
            for k in 1..=i {
                if i + k <= m {
                    model.table.insert((i as usize - 1, Operation::Sq(k)), binomial(i, k, 2));
                }
            }
        }
        model
    }

    /// `Σ Q_n` at `prime`, classes `Σx_i` in degree `4i`. The action is the
    /// linear part of the corresponding operation on `q_i` in `BSp(n)`,
    /// since `Σx_i` is the pullback of `q_i` and products vanish.
    pub fn quasi_projective(n: u32, prime: u32) -> Result<Self, SteenrodError> {
        FieldSpec::prime(prime)?;
        let classes = (1..=n).map(|i| SuspensionClass { name: format!("Σx_{i}"), degree: 4 * i }).collect();
        let mut model = Self::build(SuspensionBase::QuasiProjective(n), prime, classes);
        for i in 1..=n {
            let ops: Vec<Operation> = if prime == 2 {
                (1..4 * i).map(Operation::Sq).collect()
            } else {
                (1..).take_while(|k| 2 * k < 4 * i).map(|k| Operation::P { k, prime }).collect()
            };
            for op in ops {
                let target = 4 * i + op.shift();
                if target % 4 != 0 || target / 4 > n {
                    continue;
                }
                model.table.insert((i as usize - 1, op), symplectic_linear_coefficient(i, op));
            }
        }
        Ok(model)
    }

    pub fn sphere(k: u32, prime: u32) -> Self {
        Self::build(SuspensionBase::Sphere(k), prime, vec![SuspensionClass { name: format!("ι_{k}"), degree: k }])
    }

    /// `M = S^2 ∪_2 e^3` with `Sq^1 u_2 = u_3`.
    pub fn moore() -> Self {
        let classes =
            vec![SuspensionClass { name: "u_2".into(), degree: 2 }, SuspensionClass { name: "u_3".into(), degree: 3 }];
        let mut model = Self::build(SuspensionBase::Moore, 2, classes);
        model.table.insert((0, Operation::Sq(1)), 1);
        model
    }

    pub fn base(&self) -> SuspensionBase {
        self.base
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn classes(&self) -> &[SuspensionClass] {
        &self.classes
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    pub fn class_in_degree(&self, degree: u32) -> Option<usize> {
        self.classes.iter().position(|c| c.degree == degree)
    }

    /// Recorded table entries as `(class, operation, coefficient)`.
    pub fn entries(&self) -> impl Iterator<Item = (&str, Operation, i128)> + '_ {
        self.table.iter().map(|((i, op), &c)| (self.classes[*i].name.as_str(), *op, c))
    }

    /// A copy with one table entry removed.
    pub fn without_entry(&self, class: &str, op: Operation) -> Result<Self, SteenrodError> {
        let i = self.index_or_err(class)?;
        let mut out = self.clone();
        out.table.remove(&(i, op));
        Ok(out)
    }

    /// A copy with one table entry set.
    pub fn with_entry(&self, class: &str, op: Operation, coefficient: i128) -> Result<Self, SteenrodError> {
        let i = self.index_or_err(class)?;
        let mut out = self.clone();
        out.table.insert((i, op), coefficient.rem_euclid(self.prime as i128));
        Ok(out)
    }

    fn index_or_err(&self, class: &str) -> Result<usize, SteenrodError> {
        self.class_index(class)
            .ok_or_else(|| SteenrodError::UnknownClass { class: class.to_string(), model: self.base.to_string() })
    }
}

/// `θ(class)` as a list of `(class index, coefficient)` with nonzero
/// coefficients; empty means zero.
pub fn evaluate_on_suspension(
    model: &SuspensionModel,
    class: usize,
    op: Operation,
) -> Result<Vec<(usize, i128)>, SteenrodError> {
    if op.prime() != model.prime {
        return Err(SteenrodError::Contract(format!("{op} does not act mod {}", model.prime)));
    }
    let c = model
        .classes
        .get(class)
        .ok_or_else(|| SteenrodError::Contract(format!("class index {class} out of range for {}", model.base)))?;
    if op.index() == 0 {
        return Ok(vec![(class, 1)]);
    }
    let unstable = match op {
        Operation::Sq(k) => k >= c.degree,
        Operation::P { k, .. } => 2 * k >= c.degree,
    };
    if unstable {
        return Ok(Vec::new());
    }
    let Some(target) = model.class_in_degree(c.degree + op.shift()) else {
        return Ok(Vec::new());
    };
    match model.table.get(&(class, op)) {
        Some(0) => Ok(Vec::new()),
        Some(&v) => Ok(vec![(target, v)]),
        None => {
            Err(SteenrodError::Unrecorded { model: model.base.to_string(), class: c.name.clone(), op: op.to_string() })
        }
    }
}

/// Coefficient of `q_j` in `θ(q_i)` for `BSp`, where `|q_j| = |q_i| + shift`.
///
/// With `s = t^2`, `q_i = e_i(s)` and `e_i = (-1)^(i-1) p_i / i` modulo
/// decomposables. The total operation sends `t` to `t + t^p` (`t + t^2` at
/// `p = 2`), so on power sums `θ(p_i) = C(2i, b) p_j` where `b` is the
/// number of steps. Hence the coefficient is `(-1)^(i+j) C(2i, b) j / i`,
/// an integer, reduced mod `p`.
pub(crate) fn symplectic_linear_coefficient(i: u32, op: Operation) -> i128 {
    let p = op.prime();
    let (b, lift) = match op {
        Operation::Sq(k) if k % 4 == 0 => (k / 2, k / 4),
        Operation::Sq(_) => return 0,
        Operation::P { k, prime } => (k, k * (prime - 1) / 2),
    };
    let j = i + lift;
    let mut c = BigInt::one();
    for r in 0..b {
        c = c * BigInt::from(2 * i - r) / BigInt::from(r + 1);
    }
    if b > 2 * i {
        c = BigInt::zero();
    }
    let exact = c * BigInt::from(j);
    debug_assert!((&exact % BigInt::from(i)).is_zero(), "linear coefficient is integral");
    let q = exact / BigInt::from(i);
    let signed = if (i + j).is_multiple_of(2) { q } else { -q };
    let modulus = BigInt::from(p);
    (((signed % &modulus) + &modulus) % &modulus).to_i128().expect("residue fits")
}
