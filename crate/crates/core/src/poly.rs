//! Polynomials over Q(u) in named variables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use crate::arith::{Rat, RatFn};
use crate::error::{Error, Result};

/// Exponent vector aligned with a variable list.
pub type Exps = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Exps, RatFn>,
}

impl Poly {
    pub fn zero(vars: &[String]) -> Self {
        Poly { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: RatFn) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, RatFn::one())
    }

    /// The `i`-th variable.
    pub fn var(vars: &[String], i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, RatFn::one())
    }

    pub fn var_named(vars: &[String], name: &str) -> Option<Self> {
        vars.iter().position(|v| v == name).map(|i| Self::var(vars, i))
    }

    pub fn monomial(vars: &[String], exps: Exps, c: RatFn) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { vars: vars.to_vec(), terms }
    }

    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Exps, RatFn)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &RatFn)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exps) -> RatFn {
        self.terms.get(e).cloned().unwrap_or_else(RatFn::zero)
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&a| a == 0))
    }

    pub fn constant_term(&self) -> RatFn {
        self.coeff(&vec![0; self.vars.len()])
    }

    pub fn add_term(&mut self, e: Exps, c: &RatFn) {
        if c.is_zero() {
            return;
        }
        assert_eq!(e.len(), self.vars.len(), "exponent vector arity");
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

    fn check_vars(&self, o: &Poly) -> Result<()> {
        if self.vars != o.vars {
            return Err(Error::ArityMismatch(format!("[{}] vs [{}]", self.vars.join(", "), o.vars.join(", "))));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &Poly) -> Result<Poly> {
        self.check_vars(o)?;
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c);
        }
        Ok(r)
    }

    pub fn checked_sub(&self, o: &Poly) -> Result<Poly> {
        self.checked_add(&-o)
    }

    pub fn checked_mul(&self, o: &Poly) -> Result<Poly> {
        self.check_vars(o)?;
        let mut r = Poly::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, &(c1 * c2));
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &RatFn) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(&self.vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Order at the origin (least total degree); `None` for zero.
    pub fn m_order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    /// Largest power of variable `i` dividing every term.
    pub fn var_multiplicity(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).min().unwrap_or(0)
    }

    /// Divides by `vars[i]^k`; every term must be divisible.
    pub fn div_var_pow(&self, i: usize, k: u32) -> Option<Poly> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] < k {
                return None;
            }
            let mut e = e.clone();
            e[i] -= k;
            terms.insert(e, c.clone());
        }
        Some(Poly { vars: self.vars.clone(), terms })
    }

    /// Replaces every variable by a polynomial over a (possibly different)
    /// variable list `new_vars`.
    pub fn compose(&self, images: &[Poly], new_vars: &[String]) -> Result<Poly> {
        if images.len() != self.vars.len() {
            return Err(Error::ArityMismatch(format!("{} images for {} variables", images.len(), self.vars.len())));
        }
        for im in images {
            if im.vars != new_vars {
                return Err(Error::ArityMismatch("image over the wrong variables".into()));
            }
        }
        let mut cache: Vec<Vec<Poly>> = images.iter().map(|im| vec![Poly::one(new_vars), im.clone()]).collect();
        let mut out = Poly::zero(new_vars);
        for (e, c) in &self.terms {
            let mut m = Poly::constant(new_vars, c.clone());
            for (i, &a) in e.iter().enumerate() {
                while cache[i].len() <= a as usize {
                    let next = cache[i].last().unwrap() * &images[i];
                    cache[i].push(next);
                }
                if a > 0 {
                    m = &m * &cache[i][a as usize];
                }
            }
            out = &out + &m;
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over a larger variable list that contains
    /// all current variables.
    pub fn embed(&self, new_vars: &[String]) -> Result<Poly> {
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                new_vars
                    .iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::ArityMismatch(format!("variable {v} not in target list")))
            })
            .collect::<Result<_>>()?;
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = vec![0; new_vars.len()];
            for (k, &a) in e.iter().enumerate() {
                ne[idx[k]] = a;
            }
            (ne, c.clone())
        });
        Ok(Poly::from_terms(new_vars, terms))
    }

    /// Terms ordered by weighted degree, then exponent vector ascending.
    pub fn sorted_terms(&self, weights: Option<&[Rat]>) -> Vec<(&Exps, &RatFn)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        match weights {
            Some(w) => v.sort_by_cached_key(|(e, _)| (weighted_degree(e, w), (*e).clone())),
            None => v.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), (*e).clone())),
        }
        v
    }

    /// Display with terms in weighted order.
    pub fn display_weighted(&self, weights: &[Rat]) -> String {
        let terms = self.sorted_terms(Some(weights));
        format_terms(terms.iter().map(|(e, c)| ((*c).clone(), monomial_string(&self.vars, e))))
    }
}

pub fn weighted_degree(e: &[u32], w: &[Rat]) -> Rat {
    e.iter().zip(w).map(|(&a, b)| b * Rat::from_integer(a.into())).sum()
}

/// `x^2*y`, or `1` for the empty monomial.
pub fn monomial_string(vars: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, &a)| a > 0)
        .map(|(v, &a)| if a == 1 { v.clone() } else { format!("{v}^{a}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn negative_lead(c: &RatFn) -> bool {
    c.num().lead().is_negative()
}

/// Writes `c1*m1 + c2*m2 - ...` pulling signs out of coefficients.
pub fn format_terms(terms: impl IntoIterator<Item = (RatFn, String)>) -> String {
    let mut s = String::new();
    for (c, m) in terms {
        let neg = negative_lead(&c);
        let a = if neg { -&c } else { c };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if m == "1" {
            if a.is_compound() {
                s.push_str(&format!("({a})"));
            } else {
                s.push_str(&a.to_string());
            }
        } else if a.is_one() {
            s.push_str(&m);
        } else if a.is_compound() {
            s.push_str(&format!("({a})*{m}"));
        } else {
            s.push_str(&format!("{a}*{m}"));
        }
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms(None);
        f.write_str(&format_terms(terms.iter().map(|(e, c)| ((*c).clone(), monomial_string(&self.vars, e)))))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        self.checked_add(o).expect("variable lists differ")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self.checked_sub(o).expect("variable lists differ")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        self.checked_mul(o).expect("variable lists differ")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly { (&self).$m(&o) }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: &Poly) -> Poly { (&self).$m(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat_int, UPoly};

    fn xyz() -> (Vec<String>, Poly, Poly, Poly) {
        let v: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let (x, y, z) = (Poly::var(&v, 0), Poly::var(&v, 1), Poly::var(&v, 2));
        (v, x, y, z)
    }

    #[test]
    fn syzygy_is_zero() {
        let (_, x, y, z) = xyz();
        let q4 = &(&y * &y) - &(&x * &z);
        let q5 = &(&y * &z) - &x.pow(4);
        let q6 = &(&z * &z) - &(&x.pow(3) * &y);
        let s = &(&(&x * &q6) - &(&y * &q5)) + &(&z * &q4);
        assert!(s.is_zero());
        assert_eq!(q4.to_string(), "y^2 - x*z");
        assert_eq!((&q4 + &(&x * &z)).to_string(), "y^2");
        assert_eq!((&y * &q4).to_string(), "y^3 - x*y*z");
    }

    #[test]
    fn arity_mismatch() {
        let (_, x, _, _) = xyz();
        let w = Poly::var(&["x".to_string()], 0);
        assert_eq!(x.checked_add(&w).unwrap_err().code(), "arity-mismatch");
    }

    #[test]
    fn compose_and_divide() {
        let v: Vec<String> = vec!["x".into(), "y".into()];
        let (x, y) = (Poly::var(&v, 0), Poly::var(&v, 1));
        let f = &(&y * &y) - &x.pow(3);
        let g = f.compose(&[x.clone(), &x * &y], &v).unwrap();
        assert_eq!(g.var_multiplicity(0), 2);
        assert_eq!(g.div_var_pow(0, 2).unwrap().to_string(), "-x + y^2");
        assert_eq!(f.m_order(), Some(2));
    }

    #[test]
    fn coefficient_display() {
        let (v, x, _, _) = xyz();
        let c = RatFn::from_poly(UPoly::from_ints(&[2, -1]));
        let p = &Poly::constant(&v, RatFn::from_int(3)) + &x.scale(&c);
        assert_eq!(p.to_string(), "3 - (u - 2)*x");
        let w = [rat_int(6), rat_int(10), rat_int(14)];
        assert_eq!(x.display_weighted(&w), "x");
    }
}
