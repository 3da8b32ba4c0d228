use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{input, precondition, Result};

/// Exact scalar. Every ring stores its elements as rationals kept in
/// canonical form for that ring (integers for `Integers`, residues in
/// `[0, p)` for `PrimeField`).
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Coefficient ring of a matrix or module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

impl Ring {
    /// `PrimeField(p)`, after checking that `p` is prime.
    pub fn prime_field(p: u64) -> Result<Ring> {
        if !is_prime(p) {
            return input(format!("modulus {p} is not prime"));
        }
        Ok(Ring::PrimeField(p))
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Integers)
    }

    /// 0 for the integers and rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            Ring::PrimeField(p) => *p,
            _ => 0,
        }
    }

    /// Whether the integer `n` is a unit of this ring.
    pub fn is_unit_integer(&self, n: u64) -> bool {
        match self {
            Ring::Integers => n == 1,
            Ring::Rationals => n != 0,
            Ring::PrimeField(p) => n % p != 0,
        }
    }

    /// Canonical representative of `x` in this ring, or an error when `x`
    /// has no image (a fraction over the integers, or a denominator
    /// divisible by `p`).
    pub fn reduce(&self, x: &Rat) -> Result<Rat> {
        match self {
            Ring::Rationals => Ok(x.clone()),
            Ring::Integers => {
                if x.is_integer() {
                    Ok(x.clone())
                } else {
                    input(format!("{x} is not an integer"))
                }
            }
            Ring::PrimeField(p) => {
                let m = BigInt::from(*p);
                let num = x.numer().mod_floor(&m).to_u64().unwrap();
                let den = x.denom().mod_floor(&m).to_u64().unwrap();
                if den == 0 {
                    return input(format!("{x} has no image in F{p}"));
                }
                let v = mul_mod(num, inv_mod(den, *p), *p);
                Ok(rat(v as i64))
            }
        }
    }

    pub fn add(&self, a: &Rat, b: &Rat) -> Rat {
        self.wrap(a + b)
    }

    pub fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        self.wrap(a - b)
    }

    pub fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        self.wrap(a * b)
    }

    pub fn neg(&self, a: &Rat) -> Rat {
        self.wrap(-a)
    }

    /// Inverse within the ring, if `a` is a unit.
    pub fn inv(&self, a: &Rat) -> Option<Rat> {
        if a.is_zero() {
            return None;
        }
        match self {
            Ring::Rationals => Some(a.recip()),
            Ring::Integers => {
                if a.abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            Ring::PrimeField(p) => {
                let v = a.numer().to_u64().unwrap();
                Some(rat(inv_mod(v, *p) as i64))
            }
        }
    }

    /// Image of an integer-valued (or, for the prime fields,
    /// denominator-coprime) result of exact arithmetic.
    fn wrap(&self, x: Rat) -> Rat {
        match self {
            Ring::PrimeField(_) => self.reduce(&x).expect("denominator invertible mod p"),
            _ => x,
        }
    }

    /// Checks that `|G|` may be divided by in this ring.
    pub fn require_unit(&self, n: u64, what: &str) -> Result<()> {
        if self.is_unit_integer(n) {
            Ok(())
        } else {
            precondition(format!(
                "{what} = {n} is not invertible in {self} (characteristic {})",
                self.characteristic()
            ))
        }
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime throughout the crate
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factors of `n` in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| crate::error::Error::Input(format!("cannot parse scalar {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return input(format!("zero denominator in {s:?}"));
            }
            Ok(Rat::new(parse_int(n)?, d))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}
