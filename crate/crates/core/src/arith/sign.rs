use std::fmt;
use std::ops::{Mul, Neg};

use num_traits::{One, Signed, Zero};

use super::{rat_int, Rat, RatFn, UPoly};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of_rat(x: &Rat) -> Sign {
        if x.is_zero() {
            Sign::Zero
        } else if x.is_positive() {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn of_i32(x: i32) -> Sign {
        match x.signum() {
            0 => Sign::Zero,
            1 => Sign::Pos,
            _ => Sign::Neg,
        }
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Neg => "-",
            Sign::Zero => "0",
            Sign::Pos => "+",
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, o: Sign) -> Sign {
        Sign::of_i32(self.to_i32() * o.to_i32())
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        Sign::of_i32(-self.to_i32())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// What is known about the parameter `u`. Interval bounds of `None` are infinite.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ParamAssumption {
    Exact(Rat),
    Interval { lo: Option<Rat>, hi: Option<Rat> },
}

impl ParamAssumption {
    pub fn interval(lo: Option<Rat>, hi: Option<Rat>) -> Result<Self> {
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l >= h {
                return Err(Error::InvariantViolation(format!("empty interval ({l}, {h})")));
            }
        }
        Ok(ParamAssumption::Interval { lo, hi })
    }

    /// No constraint on `u`.
    pub fn free() -> Self {
        ParamAssumption::Interval { lo: None, hi: None }
    }

    pub fn greater_than(lo: Rat) -> Self {
        ParamAssumption::Interval { lo: Some(lo), hi: None }
    }

    pub fn exact_value(&self) -> Option<&Rat> {
        match self {
            ParamAssumption::Exact(q) => Some(q),
            _ => None,
        }
    }

    /// A rational point satisfying the assumption.
    pub fn sample(&self) -> Rat {
        match self {
            ParamAssumption::Exact(q) => q.clone(),
            ParamAssumption::Interval { lo, hi } => sample_point(lo.as_ref(), hi.as_ref()),
        }
    }

    /// True when `q` satisfies the assumption.
    pub fn contains(&self, q: &Rat) -> bool {
        match self {
            ParamAssumption::Exact(x) => x == q,
            ParamAssumption::Interval { lo, hi } => {
                lo.as_ref().is_none_or(|l| q > l) && hi.as_ref().is_none_or(|h| q < h)
            }
        }
    }
}

impl fmt::Display for ParamAssumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamAssumption::Exact(q) => write!(f, "u = {q}"),
            ParamAssumption::Interval { lo: None, hi: None } => write!(f, "u free"),
            ParamAssumption::Interval { lo: Some(l), hi: None } => write!(f, "u > {l}"),
            ParamAssumption::Interval { lo: None, hi: Some(h) } => write!(f, "u < {h}"),
            ParamAssumption::Interval { lo: Some(l), hi: Some(h) } => write!(f, "{l} < u < {h}"),
        }
    }
}

fn sample_point(lo: Option<&Rat>, hi: Option<&Rat>) -> Rat {
    match (lo, hi) {
        (Some(l), Some(h)) => (l + h) / rat_int(2),
        (Some(l), None) => l + Rat::one(),
        (None, Some(h)) => h - Rat::one(),
        (None, None) => Rat::zero(),
    }
}

/// Sturm sequence p, p', -rem(p, p'), ...
pub fn sturm_sequence(p: &UPoly) -> Vec<UPoly> {
    let mut seq = vec![p.clone()];
    if p.is_zero() {
        return seq;
    }
    let mut prev = p.clone();
    let mut cur = p.derivative();
    while !cur.is_zero() {
        let (_, r) = prev.div_rem(&cur);
        seq.push(cur.clone());
        prev = cur;
        cur = -&r;
    }
    seq
}

fn variations(seq: &[UPoly], at: Option<&Rat>, neg_inf: bool) -> usize {
    let signs: Vec<i32> = seq
        .iter()
        .map(|q| match at {
            Some(x) => Sign::of_rat(&q.eval(x)).to_i32(),
            None => q.sign_at_infinity(neg_inf),
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` in the open interval (lo, hi).
/// `None` bounds are infinite.
pub fn sturm_root_count(p: &UPoly, lo: Option<&Rat>, hi: Option<&Rat>) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::InvariantViolation("Sturm count of the zero polynomial".into()));
    }
    if let (Some(l), Some(h)) = (lo, hi) {
        if l >= h {
            return Err(Error::InvariantViolation(format!("empty interval ({l}, {h})")));
        }
    }
    for x in [lo, hi].into_iter().flatten() {
        if p.eval(x).is_zero() {
            return Err(Error::EndpointIsRoot(x.clone()));
        }
    }
    let seq = sturm_sequence(p);
    let a = variations(&seq, lo, true);
    let b = variations(&seq, hi, false);
    Ok(a - b)
}

/// Divides out roots sitting exactly on finite endpoints.
fn deflate_endpoints(p: &UPoly, lo: Option<&Rat>, hi: Option<&Rat>) -> UPoly {
    let mut q = p.clone();
    for x in [lo, hi].into_iter().flatten() {
        let lin = UPoly::from_coeffs(vec![-x.clone(), Rat::one()]);
        while !q.is_zero() && q.eval(x).is_zero() {
            q = q.div_rem(&lin).0;
        }
    }
    q
}

/// The constant sign of `f` on the set described by `a`.
pub fn sign_under(f: &RatFn, a: &ParamAssumption) -> Result<Sign> {
    if f.is_zero() {
        return Ok(Sign::Zero);
    }
    match a {
        ParamAssumption::Exact(q) => match f.eval(q) {
            Ok(v) => Ok(Sign::of_rat(&v)),
            Err(_) => Err(Error::PoleInInterval(format!("{f} at u = {q}"))),
        },
        ParamAssumption::Interval { lo, hi } => {
            let (lo, hi) = (lo.as_ref(), hi.as_ref());
            if f.is_constant() {
                return Ok(Sign::of_rat(&f.as_rat().unwrap()));
            }
            if !f.den().is_constant() {
                let d = deflate_endpoints(f.den(), lo, hi);
                if !d.is_constant() && sturm_root_count(&d, lo, hi)? > 0 {
                    return Err(Error::PoleInInterval(format!("{f} on {a}")));
                }
            }
            // A numerator root on an endpoint does not affect the open interval.
            let n = deflate_endpoints(f.num(), lo, hi);
            if !n.is_constant() && sturm_root_count(&n, lo, hi)? > 0 {
                return Err(Error::AmbiguousSign(format!("{f} on {a}")));
            }
            let x = sample_point(lo, hi);
            Ok(Sign::of_rat(&f.eval(&x)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(cs: &[i64]) -> UPoly {
        UPoly::from_ints(cs)
    }

    fn gt2() -> ParamAssumption {
        ParamAssumption::greater_than(rat_int(2))
    }

    #[test]
    fn signs_on_half_line() {
        assert_eq!(sign_under(&RatFn::from_poly(p(&[-1, 2])), &gt2()).unwrap(), Sign::Pos);
        assert_eq!(sign_under(&RatFn::from_poly(p(&[2, -1])), &gt2()).unwrap(), Sign::Neg);
        assert_eq!(sign_under(&RatFn::from_poly(p(&[3, -1])), &gt2()).unwrap_err().code(), "ambiguous-sign");
        assert_eq!(sign_under(&RatFn::from_poly(p(&[-9, 0, 1])), &gt2()).unwrap_err().code(), "ambiguous-sign");
        assert_eq!(sign_under(&RatFn::from_poly(p(&[1, -1])), &gt2()).unwrap(), Sign::Neg);
    }

    #[test]
    fn pole_detected() {
        let f = RatFn::new(p(&[1]), p(&[-3, 1])).unwrap();
        assert_eq!(sign_under(&f, &gt2()).unwrap_err().code(), "pole-in-interval");
        let g = RatFn::new(p(&[1]), p(&[-2, 1])).unwrap();
        assert_eq!(sign_under(&g, &gt2()).unwrap(), Sign::Pos);
    }

    #[test]
    fn exact_values() {
        let a = ParamAssumption::Exact(rat_int(3));
        let f = RatFn::new(p(&[-1, 2]), p(&[1, 1])).unwrap();
        assert_eq!(sign_under(&f, &a).unwrap(), Sign::Pos);
        let g = RatFn::from_poly(p(&[3, -1]));
        assert_eq!(sign_under(&g, &a).unwrap(), Sign::Zero);
    }

    #[test]
    fn sturm_examples() {
        let (z, two) = (rat_int(0), rat_int(2));
        assert_eq!(sturm_root_count(&p(&[-2, 0, 1]), Some(&z), Some(&two)).unwrap(), 1);
        assert_eq!(sturm_root_count(&p(&[1, 0, 1]), Some(&rat_int(-10)), Some(&rat_int(10))).unwrap(), 0);
        assert_eq!(sturm_root_count(&p(&[15, -8, 1]), Some(&two), Some(&rat_int(6))).unwrap(), 2);
        assert_eq!(sturm_root_count(&p(&[15, -8, 1]), None, None).unwrap(), 2);
        assert_eq!(sturm_root_count(&p(&[-2, 1]), Some(&z), Some(&two)).unwrap_err().code(), "endpoint-is-root");
        // double root counts once
        assert_eq!(sturm_root_count(&p(&[1, -2, 1]), Some(&z), Some(&two)).unwrap(), 1);
        assert_eq!(sturm_root_count(&p(&[-1, 0, 4]), Some(&z), Some(&rat(1, 3))).unwrap(), 0);
    }
}
