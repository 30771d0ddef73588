//! Truncated power series in `t` with rational exponents and Q(u) coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{Rat, RatFn};
use crate::error::{Error, Result};
use crate::poly::{format_terms, Poly};

/// t-adic order of a truncated series.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SeriesOrder {
    Finite(Rat),
    /// Every coefficient below the truncation order vanishes.
    ZeroToTruncation,
}

impl SeriesOrder {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            SeriesOrder::Finite(v) => Some(v),
            SeriesOrder::ZeroToTruncation => None,
        }
    }
}

impl fmt::Display for SeriesOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesOrder::Finite(v) => write!(f, "{v}"),
            SeriesOrder::ZeroToTruncation => write!(f, "zero-to-truncation"),
        }
    }
}

/// Series known exactly below `trunc` (exclusive).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TruncSeries {
    terms: BTreeMap<Rat, RatFn>,
    trunc: Rat,
}

impl TruncSeries {
    pub fn new(terms: impl IntoIterator<Item = (Rat, RatFn)>, trunc: Rat) -> Self {
        let mut s = TruncSeries { terms: BTreeMap::new(), trunc };
        for (e, c) in terms {
            s.add_term(e, &c);
        }
        s
    }

    pub fn zero(trunc: Rat) -> Self {
        TruncSeries { terms: BTreeMap::new(), trunc }
    }

    pub fn monomial(c: RatFn, e: Rat, trunc: Rat) -> Self {
        Self::new([(e, c)], trunc)
    }

    pub fn constant(c: RatFn, trunc: Rat) -> Self {
        Self::monomial(c, Rat::zero(), trunc)
    }

    pub fn trunc(&self) -> &Rat {
        &self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &RatFn)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Rat) -> RatFn {
        self.terms.get(e).cloned().unwrap_or_else(RatFn::zero)
    }

    fn add_term(&mut self, e: Rat, c: &RatFn) {
        if c.is_zero() || e >= self.trunc {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = &*old + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn order(&self) -> SeriesOrder {
        match self.terms.keys().next() {
            Some(e) => SeriesOrder::Finite(e.clone()),
            None => SeriesOrder::ZeroToTruncation,
        }
    }

    /// Leading exponent and coefficient.
    pub fn lead(&self) -> Option<(&Rat, &RatFn)> {
        self.terms.iter().next()
    }

    /// Lower bound for the true order: the order if known, else the truncation.
    fn order_bound(&self) -> Rat {
        self.terms.keys().next().cloned().unwrap_or_else(|| self.trunc.clone())
    }

    /// Lowers the truncation order.
    pub fn truncate(&self, n: &Rat) -> Self {
        let n = n.min(&self.trunc).clone();
        TruncSeries {
            terms: self.terms.iter().filter(|(e, _)| **e < n).map(|(e, c)| (e.clone(), c.clone())).collect(),
            trunc: n,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let trunc = self.trunc.clone().min(o.trunc.clone());
        let mut r = self.truncate(&trunc);
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c);
        }
        r
    }

    pub fn neg(&self) -> Self {
        TruncSeries { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(), trunc: self.trunc.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &RatFn) -> Self {
        if c.is_zero() {
            return Self::zero(self.trunc.clone());
        }
        TruncSeries { terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(), trunc: self.trunc.clone() }
    }

    /// Product, reliable below min(N1 + o2, N2 + o1).
    pub fn mul(&self, o: &Self) -> Self {
        let trunc = (&self.trunc + o.order_bound()).min(&o.trunc + self.order_bound());
        let mut r = Self::zero(trunc);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1 + e2;
                if e >= r.trunc {
                    break;
                }
                r.add_term(e, &(c1 * c2));
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(RatFn::one(), self.trunc.clone());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Quotient by a series of known order. The result is reliable below
    /// min(N_n - o_d, N_d + o_n - 2 o_d).
    pub fn div(&self, d: &Self) -> Result<Self> {
        let (od, cd) = match d.lead() {
            Some((e, c)) => (e.clone(), c.clone()),
            None => return Err(Error::ValueUnknown(d.trunc.clone())),
        };
        let on = self.order_bound();
        let trunc = (&self.trunc - &od).min(&d.trunc + &on - &od - &od);
        let mut q = Self::zero(trunc.clone());
        let limit = &trunc + &od;
        let mut rem = self.truncate(&limit);
        let cinv = cd.inv()?;
        while let Some((e, c)) = rem.lead().map(|(e, c)| (e.clone(), c.clone())) {
            let qe = &e - &od;
            let qc = &c * &cinv;
            q.add_term(qe.clone(), &qc);
            let step = TruncSeries {
                terms: d.terms.iter().map(|(de, dc)| (de + &qe, dc * &qc)).filter(|(x, _)| *x < limit).collect(),
                trunc: limit.clone(),
            };
            rem = rem.sub(&step);
            // the leading term cancels exactly
            debug_assert!(rem.lead().is_none_or(|(x, _)| *x > e));
        }
        Ok(q)
    }

    /// Coefficients specialized at `u = x`.
    pub fn specialize(&self, x: &Rat) -> Result<Self> {
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            terms.push((e.clone(), RatFn::from_rat(c.eval(x)?)));
        }
        Ok(Self::new(terms, self.trunc.clone()))
    }

    /// Substitutes `t -> -t`; exponents must be integers.
    pub fn flip_t(&self) -> Result<Self> {
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if !e.is_integer() {
                return Err(Error::InvariantViolation(format!("t -> -t with exponent {e}")));
            }
            let odd = (e.to_integer() % 2u8) != 0.into();
            terms.push((e.clone(), if odd { -c } else { c.clone() }));
        }
        Ok(Self::new(terms, self.trunc.clone()))
    }
}

impl fmt::Display for TruncSeries {
    /// `(2*u - 1)*t^21 + u^2*t^22 + O(t^40)`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = format_terms(self.terms.iter().map(|(e, c)| (c.clone(), t_power(e))));
        if self.terms.is_empty() {
            write!(f, "O(t^{})", self.trunc)
        } else {
            write!(f, "{body} + O(t^{})", self.trunc)
        }
    }
}

fn t_power(e: &Rat) -> String {
    if e.is_zero() {
        "1".into()
    } else if e.is_one() {
        "t".into()
    } else if e.is_integer() {
        format!("t^{e}")
    } else {
        format!("t^({e})")
    }
}

/// Image of `f` under `vars[i] -> assignment[i]`.
pub fn series_substitute(f: &Poly, assignment: &[TruncSeries]) -> Result<TruncSeries> {
    if assignment.len() != f.vars().len() {
        return Err(Error::ArityMismatch(format!("{} series for {} variables", assignment.len(), f.vars().len())));
    }
    let base = assignment.iter().map(|s| s.trunc.clone()).min().unwrap_or_else(|| Rat::from_integer(1_000_000.into()));
    let one = TruncSeries::constant(RatFn::one(), base.clone());
    let mut cache: Vec<Vec<TruncSeries>> = assignment.iter().map(|s| vec![one.clone(), s.clone()]).collect();
    // a lone monomial is cheaper by repeated squaring
    let single = f.nterms() == 1;
    let mut out: Option<TruncSeries> = None;
    for (e, c) in f.terms() {
        let mut m: Option<TruncSeries> = None;
        for (i, &a) in e.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let p = &if single {
                assignment[i].pow(a)
            } else {
                while cache[i].len() <= a as usize {
                    let next = cache[i].last().unwrap().mul(&assignment[i]);
                    cache[i].push(next);
                }
                cache[i][a as usize].clone()
            };
            m = Some(match m {
                None => p.clone(),
                Some(m) => m.mul(p),
            });
        }
        let m = m.unwrap_or_else(|| one.clone()).scale(c);
        out = Some(match out {
            None => m,
            Some(o) => o.add(&m),
        });
    }
    Ok(out.unwrap_or_else(|| TruncSeries::zero(base)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat_int, UPoly};

    pub(crate) fn ajm(n: i64) -> (Vec<String>, Vec<TruncSeries>) {
        let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let n = rat_int(n);
        let one = RatFn::one();
        let x = TruncSeries::monomial(one.clone(), rat_int(6), n.clone());
        let y = TruncSeries::new([(rat_int(10), one.clone()), (rat_int(11), RatFn::u())], n.clone());
        let z = TruncSeries::new([(rat_int(14), one.clone()), (rat_int(15), one)], n);
        (vars, vec![x, y, z])
    }

    #[test]
    fn q4_q5_images() {
        let (v, a) = ajm(64);
        let (x, y, z) = (Poly::var(&v, 0), Poly::var(&v, 1), Poly::var(&v, 2));
        let q4 = &(&y * &y) - &(&x * &z);
        let s = series_substitute(&q4, &a).unwrap();
        let expect = TruncSeries::new(
            [
                (rat_int(21), RatFn::from_poly(UPoly::from_ints(&[-1, 2]))),
                (rat_int(22), RatFn::from_poly(UPoly::from_ints(&[0, 0, 1]))),
            ],
            s.trunc().clone(),
        );
        assert_eq!(s, expect);
        assert_eq!(s.order(), SeriesOrder::Finite(rat_int(21)));
        let q5 = &(&y * &z) - &x.pow(4);
        let s5 = series_substitute(&q5, &a).unwrap();
        assert_eq!(s5.to_string().split(" + O").next().unwrap(), "(u + 1)*t^25 + u*t^26");
        let one = series_substitute(&Poly::one(&v), &a).unwrap();
        assert_eq!(one.order(), SeriesOrder::Finite(rat_int(0)));
    }

    #[test]
    fn product_truncation_rule() {
        let a = TruncSeries::monomial(RatFn::one(), rat_int(6), rat_int(20));
        let b = TruncSeries::monomial(RatFn::one(), rat_int(10), rat_int(30));
        assert_eq!(a.mul(&b).trunc(), &rat_int(30));
        assert_eq!(TruncSeries::zero(rat_int(40)).order(), SeriesOrder::ZeroToTruncation);
    }

    #[test]
    fn division_inverts_product() {
        let x = TruncSeries::new([(rat_int(2), RatFn::one()), (rat_int(3), RatFn::one())], rat_int(20));
        let y = TruncSeries::new([(rat_int(3), RatFn::one()), (rat_int(4), RatFn::u())], rat_int(20));
        let q = x.mul(&y).div(&x).unwrap();
        assert_eq!(q.truncate(&rat_int(15)), y.truncate(&rat_int(15)));
        let r = y.div(&x).unwrap();
        // t^3(1 + u t) / t^2(1 + t) = t + (u - 1) t^2 - (u - 1) t^3 + ...
        assert_eq!(r.coeff(&rat_int(2)), RatFn::from_poly(UPoly::from_ints(&[-1, 1])));
        assert_eq!(r.coeff(&rat_int(3)), RatFn::from_poly(UPoly::from_ints(&[1, -1])));
    }
}
