use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Rat, UPoly};
use crate::error::{Error, Result};

/// Element of Q(u), kept as a reduced fraction with a monic denominator.
/// Zero is always `0/1`, so structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFn {
    num: UPoly,
    den: UPoly,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn { num: UPoly::zero(), den: UPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_rat(c: Rat) -> Self {
        RatFn { num: UPoly::constant(c), den: UPoly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_rat(super::rat_int(c))
    }

    pub fn from_poly(p: UPoly) -> Self {
        RatFn { num: p, den: UPoly::one() }
    }

    pub fn u() -> Self {
        Self::from_poly(UPoly::u())
    }

    pub fn new(num: UPoly, den: UPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: UPoly, den: UPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = UPoly::gcd(&num, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        };
        let l = den.lead();
        if l.is_one() {
            RatFn { num, den }
        } else {
            let inv = l.recip();
            RatFn { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num.is_constant() && self.num.constant_term().is_one()
    }

    /// True when the function does not depend on `u`.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The rational value when constant.
    pub fn as_rat(&self) -> Option<Rat> {
        self.is_constant().then(|| self.num.constant_term())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, o: &RatFn) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    /// Evaluation at `u = x`; fails when `x` is a pole.
    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn pow(&self, e: u32) -> Self {
        RatFn { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::normalize(self.num.scale(c), self.den.clone())
    }

    /// Derivative with respect to `u`.
    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::normalize(n, &self.den * &self.den)
    }

    /// True when printing needs parentheses inside a product.
    pub fn is_compound(&self) -> bool {
        !self.den.is_constant() || self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
    }
}

impl Default for RatFn {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rat> for RatFn {
    fn from(c: Rat) -> Self {
        Self::from_rat(c)
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn::normalize(&self.num + &o.num, self.den.clone());
        }
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFn::normalize(n, &self.den * &o.den)
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, o: &RatFn) -> RatFn {
        self + &(-o)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero();
        }
        if self.den.is_constant() && o.den.is_constant() {
            return RatFn { num: &self.num * &o.num, den: UPoly::one() };
        }
        RatFn::normalize(&self.num * &o.num, &self.den * &o.den)
    }
}

/// Panics on a zero divisor; use [`RatFn::checked_div`] where that can happen.
impl Div for &RatFn {
    type Output = RatFn;
    fn div(self, o: &RatFn) -> RatFn {
        self.checked_div(o).expect("division by zero in Q(u)")
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFn {
            type Output = RatFn;
            fn $m(self, o: RatFn) -> RatFn { (&self).$m(&o) }
        }
        impl $tr<&RatFn> for RatFn {
            type Output = RatFn;
            fn $m(self, o: &RatFn) -> RatFn { (&self).$m(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write!(f, "{}", self.num);
        }
        let n = if self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        write!(f, "{n}/({})", self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> UPoly {
        UPoly::from_ints(cs)
    }

    #[test]
    fn cancels_common_factor() {
        let a = RatFn::new(p(&[-1, 2]), p(&[1, 1])).unwrap();
        let b = RatFn::from_poly(p(&[1, 1]));
        assert_eq!(&a * &b, RatFn::from_poly(p(&[-1, 2])));
    }

    #[test]
    fn zero_is_canonical() {
        let a = RatFn::new(p(&[1]), p(&[0, 1])).unwrap();
        assert_eq!(&a - &a, RatFn::zero());
        assert!(RatFn::new(p(&[1]), UPoly::zero()).is_err());
    }

    #[test]
    fn denominator_is_monic() {
        let a = RatFn::new(p(&[2]), p(&[4, 2])).unwrap();
        assert_eq!(a.den(), &p(&[2, 1]));
        assert_eq!(a.num(), &p(&[1]));
        assert_eq!(a.to_string(), "1/(u + 2)");
    }
}
