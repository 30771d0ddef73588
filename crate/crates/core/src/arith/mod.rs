//! Exact rationals, the field Q(u) of rational functions in one parameter,
//! and sign determination of elements of Q(u) under assumptions on `u`.

mod ratfn;
mod sign;
mod upoly;

pub use ratfn::RatFn;
pub use sign::{sign_under, sturm_root_count, sturm_sequence, ParamAssumption, Sign};
pub use upoly::UPoly;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rat = num_rational::BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `a` or `a/b` with optional sign.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rat::new(n, d))
}

/// Greatest common divisor of two nonnegative rationals, as the generator
/// of the subgroup of Q they generate.
pub fn rat_gcd(a: &Rat, b: &Rat) -> Rat {
    use num_integer::Integer;
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let n = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    Rat::new(n, a.denom() * b.denom())
}

/// True when `x` is an integer multiple of `g` (with `g > 0`).
pub fn is_multiple(x: &Rat, g: &Rat) -> bool {
    (x / g).is_integer()
}

/// Exponentiation by a signed integer; fails on 0 to a negative power.
pub fn rat_pow(x: &Rat, e: i64) -> Option<Rat> {
    if e < 0 && x.is_zero() {
        return None;
    }
    let mut acc = Rat::one();
    for _ in 0..e.unsigned_abs() {
        acc *= x;
    }
    Some(if e < 0 { acc.recip() } else { acc })
}
