use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

/// Exact coefficient. In characteristic `p` the stored value is always an
/// integer in `0..p`.
pub type Scalar = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    PrimeField,
}

/// Coefficient field: the rationals or `Z/p` for a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    characteristic: u32,
}

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec { characteristic: 0 };

    pub fn rationals() -> Self {
        Self::RATIONALS
    }

    pub fn prime(p: u32) -> Result<Self, AlgebraError> {
        if is_prime(p) {
            Ok(FieldSpec { characteristic: p })
        } else {
            Err(AlgebraError::InvalidCharacteristic(p))
        }
    }

    pub fn from_characteristic(c: u32) -> Result<Self, AlgebraError> {
        if c == 0 {
            Ok(Self::RATIONALS)
        } else {
            Self::prime(c)
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn kind(&self) -> FieldKind {
        if self.characteristic == 0 {
            FieldKind::Rational
        } else {
            FieldKind::PrimeField
        }
    }

    pub fn is_rational(&self) -> bool {
        self.characteristic == 0
    }

    /// Canonical representative of `c`, or an error when `c` has a
    /// denominator divisible by the characteristic.
    pub fn reduce(&self, c: &Scalar) -> Result<Scalar, AlgebraError> {
        if self.characteristic == 0 {
            return Ok(c.clone());
        }
        let p = BigInt::from(self.characteristic);
        let num = c.numer().mod_floor_big(&p);
        let den = c.denom().mod_floor_big(&p);
        if den.is_zero() {
            return Err(AlgebraError::UndefinedCoefficient {
                value: c.to_string(),
                characteristic: self.characteristic,
            });
        }
        let den = den.to_u64().expect("residue fits in u64");
        let inv = pow_mod(den, self.characteristic as u64 - 2, self.characteristic as u64);
        let num = num.to_u64().expect("residue fits in u64");
        Ok(self.residue(num * inv % self.characteristic as u64))
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        if self.characteristic == 0 {
            return Scalar::from_integer(BigInt::from(n));
        }
        let p = self.characteristic as i64;
        self.residue(n.rem_euclid(p) as u64)
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self.characteristic {
            0 => a + b,
            p => self.residue((small(a) + small(b)) % p as u64),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self.characteristic {
            0 => a * b,
            p => self.residue(small(a) * small(b) % p as u64),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match self.characteristic {
            0 => -a,
            p => self.residue((p as u64 - small(a)) % p as u64),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match self.characteristic {
            0 => Some(a.recip()),
            p => Some(self.residue(pow_mod(small(a), p as u64 - 2, p as u64))),
        }
    }

    /// Binomial coefficient `C(n, k)` read in this field; zero when `k > n`.
    pub fn binomial(&self, n: u64, k: u64) -> Scalar {
        if k > n {
            return Scalar::zero();
        }
        match self.characteristic {
            0 => Scalar::from_integer(binomial_big(n, k)),
            p => self.residue(lucas(n, k, p as u64)),
        }
    }

    fn residue(&self, r: u64) -> Scalar {
        Scalar::from_integer(BigInt::from(r))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.characteristic {
            0 => write!(f, "Q"),
            p => write!(f, "F{p}"),
        }
    }
}

trait ModFloorBig {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

fn small(a: &Scalar) -> u64 {
    a.numer().to_u64().expect("prime-field scalar is a canonical residue")
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn binomial_big(n: u64, k: u64) -> BigInt {
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

// Lucas' theorem: C(n, k) mod p as the product of digitwise binomials.
fn lucas(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        acc = acc * (binomial_big(nd, kd) % BigInt::from(p)).to_u64().unwrap() % p;
        n /= p;
        k /= p;
    }
    acc
}

/// Formats a scalar as `a` or `a/b`.
pub fn format_scalar(c: &Scalar) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Parses `a` or `a/b` (optionally signed) into an unreduced rational.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Scalar::new(n, d))
        }
        None => Some(Scalar::from_integer(s.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_must_be_zero_or_prime() {
        assert!(FieldSpec::from_characteristic(0).is_ok());
        assert!(FieldSpec::from_characteristic(5).is_ok());
        assert_eq!(FieldSpec::from_characteristic(6), Err(AlgebraError::InvalidCharacteristic(6)));
        assert!(FieldSpec::prime(1).is_err());
    }

    #[test]
    fn reduce_mod_p() {
        let f5 = FieldSpec::prime(5).unwrap();
        let half = Scalar::new(1.into(), 2.into());
        assert_eq!(f5.reduce(&half).unwrap(), f5.from_int(3));
        assert_eq!(f5.reduce(&f5.from_int(-4)).unwrap(), f5.from_int(1));
        assert!(f5.reduce(&Scalar::new(1.into(), 5.into())).is_err());
    }

    #[test]
    fn binomials_reduce_at_the_end() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(f2.binomial(6, 2), f2.from_int(1));
        assert_eq!(f2.binomial(4, 2), f2.from_int(0));
        assert_eq!(FieldSpec::RATIONALS.binomial(10, 3), FieldSpec::RATIONALS.from_int(120));
        assert_eq!(f2.binomial(1, 2), f2.from_int(0));
    }

    #[test]
    fn inverse_in_prime_field() {
        let f7 = FieldSpec::prime(7).unwrap();
        for a in 1..7 {
            let a = f7.from_int(a);
            let inv = f7.inv(&a).unwrap();
            assert_eq!(f7.mul(&a, &inv), f7.one());
        }
        assert!(f7.inv(&f7.from_int(0)).is_none());
    }
}
