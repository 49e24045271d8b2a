//! Polynomials in torus variables, total operations by the splitting
//! principle, and rewriting symmetric polynomials in elementary ones.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{Operation, SteenrodError};

/// A polynomial in `nvars` commuting variables with integer coefficients,
/// reduced mod `modulus` when it is nonzero. Integer arithmetic is checked
/// and panics on overflow rather than wrapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusPoly {
    nvars: usize,
    modulus: u32,
    terms: BTreeMap<Vec<u32>, i128>,
}

fn reduce(c: i128, modulus: u32) -> i128 {
    if modulus == 0 {
        c
    } else {
        c.rem_euclid(modulus as i128)
    }
}

fn add_coeff(a: i128, b: i128, modulus: u32) -> i128 {
    reduce(a.checked_add(b).expect("coefficient overflow"), modulus)
}

fn mul_coeff(a: i128, b: i128, modulus: u32) -> i128 {
    reduce(a.checked_mul(b).expect("coefficient overflow"), modulus)
}

/// `C(n, k)` as an integer, reduced mod `modulus`.
pub(crate) fn binomial(n: u32, k: u32, modulus: u32) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    reduce(acc, modulus)
}

impl TorusPoly {
    pub fn zero(nvars: usize, modulus: u32) -> Self {
        TorusPoly { nvars, modulus, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, modulus: u32, c: i128) -> Self {
        let mut p = Self::zero(nvars, modulus);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, modulus: u32, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, modulus, e, 1)
    }

    pub fn monomial(nvars: usize, modulus: u32, exponents: Vec<u32>, c: i128) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent vector length");
        let mut p = Self::zero(nvars, modulus);
        p.add_term(exponents, c);
        p
    }

    pub fn from_terms(nvars: usize, modulus: u32, terms: impl IntoIterator<Item = (Vec<u32>, i128)>) -> Self {
        let mut p = Self::zero(nvars, modulus);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    /// Elementary symmetric polynomial `e_k` in all variables.
    pub fn elementary(nvars: usize, modulus: u32, k: usize) -> Self {
        let mut p = Self::zero(nvars, modulus);
        let mut e = vec![0u32; nvars];
        fn walk(i: usize, left: usize, e: &mut Vec<u32>, p: &mut TorusPoly) {
            if left == 0 {
                p.add_term(e.clone(), 1);
                return;
            }
            if e.len() - i < left {
                return;
            }
            e[i] = 1;
            walk(i + 1, left - 1, e, p);
            e[i] = 0;
            walk(i + 1, left, e, p);
        }
        walk(0, k, &mut e, &mut p);
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: i128) {
        let c = reduce(c, self.modulus);
        if c == 0 {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = add_coeff(*o.get(), c, self.modulus);
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &i128)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> i128 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &TorusPoly) -> TorusPoly {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &TorusPoly) -> TorusPoly {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i128) -> TorusPoly {
        let mut out = TorusPoly::zero(self.nvars, self.modulus);
        for (e, &v) in &self.terms {
            out.add_term(e.clone(), mul_coeff(v, c, self.modulus));
        }
        out
    }

    pub fn mul(&self, other: &TorusPoly) -> TorusPoly {
        let mut acc: BTreeMap<Vec<u32>, i128> = BTreeMap::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let v = acc.entry(e).or_insert(0);
                *v = add_coeff(*v, mul_coeff(ca, cb, self.modulus), self.modulus);
            }
        }
        acc.retain(|_, v| *v != 0);
        TorusPoly { nvars: self.nvars, modulus: self.modulus, terms: acc }
    }

    pub fn pow(&self, e: u32) -> TorusPoly {
        let mut acc = TorusPoly::constant(self.nvars, self.modulus, 1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Terms whose exponent sum is `d`.
    pub fn homogeneous_component(&self, d: u32) -> TorusPoly {
        TorusPoly {
            nvars: self.nvars,
            modulus: self.modulus,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == d)
                .map(|(e, &c)| (e.clone(), c))
                .collect(),
        }
    }

    /// Exchanges variables `i` and `j`.
    pub fn swap(&self, i: usize, j: usize) -> TorusPoly {
        TorusPoly {
            nvars: self.nvars,
            modulus: self.modulus,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| {
                    let mut e = e.clone();
                    e.swap(i, j);
                    (e, c)
                })
                .collect(),
        }
    }

    /// Maps every exponent through `f`, merging terms that collide.
    pub fn map_exponents(&self, f: impl Fn(u32) -> u32) -> TorusPoly {
        TorusPoly::from_terms(
            self.nvars,
            self.modulus,
            self.terms.iter().map(|(e, &c)| (e.iter().map(|&x| f(x)).collect(), c)),
        )
    }

    /// Rewrites a polynomial in `t_i^2` as one in `s_i = t_i^2`.
    pub fn halve_exponents(&self) -> Option<TorusPoly> {
        if self.terms.keys().any(|e| e.iter().any(|x| x % 2 == 1)) {
            return None;
        }
        Some(self.map_exponents(|x| x / 2))
    }
}

impl fmt::Display for TorusPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_terms(f, &self.terms, "t", self.modulus, |e| e.iter().sum())
    }
}

fn format_terms(
    f: &mut fmt::Formatter<'_>,
    terms: &BTreeMap<Vec<u32>, i128>,
    var: &str,
    modulus: u32,
    weight: impl Fn(&[u32]) -> u32,
) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    let mut sorted: Vec<_> = terms.iter().collect();
    sorted.sort_by(|a, b| (weight(b.0), b.0).cmp(&(weight(a.0), a.0)));
    for (k, (e, &c)) in sorted.into_iter().enumerate() {
        let (neg, abs) = if modulus == 0 && c < 0 { (true, -c) } else { (false, c) };
        match (k, neg) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let mono: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(i, &x)| if x == 1 { format!("{var}{}", i + 1) } else { format!("{var}{}^{x}", i + 1) })
            .collect();
        if mono.is_empty() {
            write!(f, "{abs}")?;
        } else if abs == 1 {
            f.write_str(&mono.join("*"))?;
        } else {
            write!(f, "{abs}*{}", mono.join("*"))?;
        }
    }
    Ok(())
}

/// Exponent step and count of elementary steps needed for `op`, given
/// the degree of the torus variables. `None` if the operation cannot be
/// evaluated by the splitting principle in this setting.
fn step_data(op: Operation, var_degree: u32, modulus: u32) -> Result<(u32, Option<u32>), SteenrodError> {
    match op {
        Operation::Sq(k) => {
            if modulus != 2 {
                return Err(SteenrodError::Contract(format!("{op} needs coefficients mod 2, got modulus {modulus}")));
            }
            if !(var_degree == 1 || var_degree == 2) {
                return Err(SteenrodError::Contract(format!("{op} needs variables of degree 1 or 2")));
            }
            // Sq(t) = t + t^2: one step raises the degree by |t|.
            Ok((1, (k % var_degree == 0).then_some(k / var_degree)))
        }
        Operation::P { k, prime } => {
            if prime != modulus || prime == 2 {
                return Err(SteenrodError::Contract(format!(
                    "{op} needs coefficients mod the odd prime {prime}, got modulus {modulus}"
                )));
            }
            if var_degree != 2 {
                return Err(SteenrodError::Contract(format!("{op} needs variables of degree 2")));
            }
            // P(t) = t + t^p: one step raises the exponent by p - 1.
            Ok((prime - 1, Some(k)))
        }
    }
}

/// The full total operation, `Sq(t) = t + t^2` or `P(t) = t + t^p`
/// extended multiplicatively. Only the family and prime of `op` matter.
pub fn total_operation_on_torus(f: &TorusPoly, op: Operation, var_degree: u32) -> Result<TorusPoly, SteenrodError> {
    let (step, _) = step_data(op, var_degree, f.modulus)?;
    let mut out = TorusPoly::zero(f.nvars, f.modulus);
    for (e, &c) in &f.terms {
        let mut acc = TorusPoly::constant(f.nvars, f.modulus, c);
        for (i, &a) in e.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let mut factor = TorusPoly::zero(f.nvars, f.modulus);
            for j in 0..=a {
                let mut ex = vec![0; f.nvars];
                ex[i] = a + j * step;
                factor.add_term(ex, binomial(a, j, f.modulus));
            }
            acc = acc.mul(&factor);
        }
        out = out.add(&acc);
    }
    Ok(out)
}

/// The single component `op(f)` of the total operation.
pub fn operation_component(f: &TorusPoly, op: Operation, var_degree: u32) -> Result<TorusPoly, SteenrodError> {
    let (step, steps) = step_data(op, var_degree, f.modulus)?;
    let mut out = TorusPoly::zero(f.nvars, f.modulus);
    let Some(steps) = steps else {
        return Ok(out);
    };
    let mut js = vec![0u32; f.nvars];
    for (e, &c) in &f.terms {
        distribute(e, 0, steps, &mut js, &mut |js| {
            let mut coeff = c;
            let mut ex = e.clone();
            for (i, &j) in js.iter().enumerate() {
                coeff = mul_coeff(coeff, binomial(e[i], j, f.modulus), f.modulus);
                ex[i] += j * step;
            }
            out.add_term(ex, coeff);
        });
    }
    Ok(out)
}

/// Calls `visit` on every `js` with `js[i] <= caps[i]` summing to `left`.
fn distribute(caps: &[u32], i: usize, left: u32, js: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if i == caps.len() {
        if left == 0 {
            visit(js);
        }
        return;
    }
    let rest: u32 = caps[i + 1..].iter().sum();
    let lo = left.saturating_sub(rest);
    for j in lo..=caps[i].min(left) {
        js[i] = j;
        distribute(caps, i + 1, left - j, js, visit);
    }
    js[i] = 0;
}

/// A polynomial in the elementary symmetric polynomials `e_1..e_rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryPoly {
    rank: usize,
    modulus: u32,
    terms: BTreeMap<Vec<u32>, i128>,
}

impl ElementaryPoly {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms keyed by exponent vectors over `e_1..e_rank`.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &i128)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> i128 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    /// Substitutes the elementary symmetric polynomials back in.
    pub fn expand(&self, nvars: usize) -> TorusPoly {
        let es: Vec<TorusPoly> = (1..=self.rank).map(|k| TorusPoly::elementary(nvars, self.modulus, k)).collect();
        let mut out = TorusPoly::zero(nvars, self.modulus);
        for (e, &c) in &self.terms {
            let mut acc = TorusPoly::constant(nvars, self.modulus, c);
            for (k, &x) in e.iter().enumerate() {
                if x > 0 {
                    acc = acc.mul(&es[k].pow(x));
                }
            }
            out = out.add(&acc);
        }
        out
    }
}

impl fmt::Display for ElementaryPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_terms(f, &self.terms, "e", self.modulus, |e| {
            e.iter().enumerate().map(|(i, &x)| (i as u32 + 1) * x).sum()
        })
    }
}

/// Checks symmetry, naming an adjacent transposition that moves `f`.
pub fn check_symmetric(f: &TorusPoly) -> Result<(), SteenrodError> {
    for i in 0..f.nvars.saturating_sub(1) {
        if f.swap(i, i + 1) != *f {
            return Err(SteenrodError::NotSymmetric { i: i + 1, j: i + 2 });
        }
    }
    Ok(())
}

/// Writes a symmetric polynomial in the elementary symmetric polynomials
/// by leading-term elimination, then drops terms involving `e_j` with
/// `j > rank`.
pub fn express_symmetric(f: &TorusPoly, rank: usize) -> Result<ElementaryPoly, SteenrodError> {
    check_symmetric(f)?;
    let n = f.nvars;
    let modulus = f.modulus;
    let es: Vec<TorusPoly> = (1..=n).map(|k| TorusPoly::elementary(n, modulus, k)).collect();
    let mut powers: HashMap<(usize, u32), TorusPoly> = HashMap::new();
    let mut rest = f.clone();
    let mut out: BTreeMap<Vec<u32>, i128> = BTreeMap::new();
    while let Some((lead, &c)) = rest.terms.iter().next_back() {
        let lead = lead.clone();
        // Leading exponents of a symmetric polynomial are non-increasing.
        let d: Vec<u32> = (0..n).map(|i| lead[i] - lead.get(i + 1).copied().unwrap_or(0)).collect();
        let mut prod = TorusPoly::constant(n, modulus, c);
        for (k, &x) in d.iter().enumerate() {
            if x > 0 {
                let p = powers.entry((k, x)).or_insert_with(|| es[k].pow(x));
                prod = prod.mul(p);
            }
        }
        rest = rest.sub(&prod);
        debug_assert!(rest.coefficient(&lead) == 0);
        if d.iter().skip(rank).all(|&x| x == 0) {
            let mut key = d;
            key.truncate(rank);
            key.resize(rank, 0);
            let v = out.entry(key).or_insert(0);
            *v = add_coeff(*v, c, modulus);
        }
    }
    out.retain(|_, v| *v != 0);
    Ok(ElementaryPoly { rank, modulus, terms: out })
}
