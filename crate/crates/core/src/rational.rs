//! Exact rational scalars and dense coefficient vectors.
//!
//! Every computation in this crate is exact: vectors are dense `Vec<Rat>`
//! and the canonical form of a ray or constraint row is the unique positive
//! scaling that turns all entries into coprime integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

/// Arbitrary-precision rational number, always stored reduced with a
/// positive denominator.
pub type Rat = BigRational;

/// Dense exact-rational vector.
pub type QVec = Vec<Rat>;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid rational literal {input:?}: {reason}")]
pub struct ParseRatError {
    pub input: String,
    pub reason: String,
}

/// Shorthand for small rational constants.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for small integer constants.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` with optional sign; `q` must be nonzero.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let err = |reason: &str| ParseRatError {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let s = s.trim();
    let (numer_str, denom_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let numer: BigInt = numer_str
        .parse()
        .map_err(|_| err("numerator is not an integer"))?;
    let denom: BigInt = match denom_str {
        Some(d) => d.parse().map_err(|_| err("denominator is not an integer"))?,
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return Err(err("denominator is zero"));
    }
    Ok(Rat::new(numer, denom))
}

/// Formats a rational as `"p"` or `"p/q"` (canonical reduced form).
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Rat::is_zero)
}

pub fn zero_vec(dim: usize) -> QVec {
    vec![Rat::zero(); dim]
}

/// Scales `v` to coprime integer entries. The scaling factor is positive, so
/// the direction of the vector is preserved; the zero vector maps to itself.
pub fn canonical_form(v: &[Rat]) -> QVec {
    int_form(v).into_iter().map(Rat::from_integer).collect()
}

/// Like [`canonical_form`] but returns the raw integers.
pub fn int_form(v: &[Rat]) -> Vec<BigInt> {
    let mut denom_lcm = BigInt::from(1);
    for x in v {
        if !x.is_zero() {
            denom_lcm = denom_lcm.lcm(x.denom());
        }
    }
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&denom_lcm / x.denom()))
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        if !x.is_zero() {
            g = g.gcd(x);
        }
    }
    if !g.is_zero() && !g.is_one() {
        for x in &mut ints {
            *x = &*x / &g;
        }
    }
    ints
}

pub fn rats_from_ints(v: &[BigInt]) -> QVec {
    v.iter().cloned().map(Rat::from_integer).collect()
}

/// Componentwise `a + c * b`.
pub fn axpy(a: &[Rat], c: &Rat, b: &[Rat]) -> QVec {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + c * y).collect()
}

pub fn scale(v: &[Rat], c: &Rat) -> QVec {
    v.iter().map(|x| x * c).collect()
}

use num_traits::One;
