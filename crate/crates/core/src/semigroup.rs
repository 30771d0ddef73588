//! Finitely generated subsemigroups of the positive rationals.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{rat_gcd, Rat};
use crate::error::{Error, Result};

/// Semigroup generated by positive rationals, with 0 included. Enumerations
/// are cached behind a mutex so a shared value can be read from several threads.
#[derive(Debug)]
pub struct Semigroup {
    gens: Vec<Rat>,
    scale: BigInt,
    int_gens: Vec<usize>,
    cache: Mutex<Vec<Rat>>,
}

impl Clone for Semigroup {
    fn clone(&self) -> Self {
        Semigroup {
            gens: self.gens.clone(),
            scale: self.scale.clone(),
            int_gens: self.int_gens.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl Semigroup {
    pub fn new(gens: impl IntoIterator<Item = Rat>) -> Result<Self> {
        let mut gens: Vec<Rat> = gens.into_iter().collect();
        if gens.is_empty() {
            return Err(Error::InvariantViolation("a semigroup needs at least one generator".into()));
        }
        if let Some(g) = gens.iter().find(|g| !g.is_positive()) {
            return Err(Error::InvariantViolation(format!("generator {g} is not positive")));
        }
        gens.sort();
        gens.dedup();
        let scale = gens.iter().fold(BigInt::one(), |acc, g| acc.lcm(g.denom()));
        let int_gens = gens
            .iter()
            .map(|g| {
                (g * Rat::from_integer(scale.clone()))
                    .to_integer()
                    .to_usize()
                    .ok_or_else(|| Error::InvariantViolation(format!("generator {g} too large")))
            })
            .collect::<Result<_>>()?;
        Ok(Semigroup { gens, scale, int_gens, cache: Mutex::new(Vec::new()) })
    }

    pub fn generators(&self) -> &[Rat] {
        &self.gens
    }

    fn to_int(&self, x: &Rat) -> Option<usize> {
        let y = x * Rat::from_integer(self.scale.clone());
        if y.is_integer() {
            y.to_integer().to_usize()
        } else {
            None
        }
    }

    fn scaled(&self, n: usize) -> Rat {
        Rat::new(BigInt::from(n), self.scale.clone())
    }

    /// Membership table for scaled integers 0..=bound.
    fn table(&self, bound: usize) -> Vec<bool> {
        let mut t = vec![false; bound + 1];
        t[0] = true;
        for n in 1..=bound {
            t[n] = self.int_gens.iter().any(|&g| g <= n && t[n - g]);
        }
        t
    }

    pub fn contains(&self, x: &Rat) -> bool {
        if x.is_zero() {
            return true;
        }
        if x.is_negative() {
            return false;
        }
        match self.to_int(x) {
            Some(n) => self.table(n)[n],
            None => false,
        }
    }

    /// The first `count` positive elements in increasing order.
    pub fn enumerate(&self, count: usize) -> Vec<Rat> {
        {
            let c = self.cache.lock().unwrap();
            if c.len() >= count {
                return c[..count].to_vec();
            }
        }
        let bound = self.int_gens[0] * count;
        let t = self.table(bound);
        let all: Vec<Rat> = (1..=bound).filter(|&n| t[n]).take(count).map(|n| self.scaled(n)).collect();
        let mut c = self.cache.lock().unwrap();
        if c.len() < all.len() {
            *c = all.clone();
        }
        all
    }

    /// Positive elements not exceeding `bound`.
    pub fn elements_up_to(&self, bound: &Rat) -> Vec<Rat> {
        let b = (bound * Rat::from_integer(self.scale.clone())).floor().to_integer();
        let Some(b) = b.to_usize() else { return Vec::new() };
        let t = self.table(b);
        (1..=b).filter(|&n| t[n]).map(|n| self.scaled(n)).collect()
    }

    /// Smallest element strictly greater than `x`.
    pub fn next_after(&self, x: &Rat) -> Rat {
        let s = Rat::from_integer(self.scale.clone());
        let lo = (x * &s).floor().to_integer();
        let lo = lo.to_usize().unwrap_or(0);
        let bound = lo + self.int_gens[0] + 1;
        let t = self.table(bound);
        let n = (lo + 1..=bound).find(|&n| t[n] && self.scaled(n) > *x).expect("a multiple of the least generator");
        self.scaled(n)
    }

    /// Generator of the group spanned by the semigroup.
    pub fn group_generator(&self) -> Rat {
        self.gens.iter().fold(Rat::zero(), |acc, g| rat_gcd(&acc, g))
    }
}

/// The first `count` positive elements of the semigroup generated by `gens`.
pub fn semigroup_enumerate(gens: &[Rat], count: usize) -> Result<Vec<Rat>> {
    Ok(Semigroup::new(gens.iter().cloned())?.enumerate(count))
}
