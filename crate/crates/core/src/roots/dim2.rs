use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{is_multiple, rat_gcd, Rat, RatFn};
use crate::error::{Error, Result};
use crate::poly::{format_terms, Poly};
use crate::series::{SeriesOrder, TruncSeries};
use crate::valuation::Curvette;

use super::Mono;

/// Refinements allowed for one root before giving up.
const CHAIN_BUDGET: usize = 64;

#[derive(Clone, PartialEq, Debug)]
pub struct Root2d {
    pub label: String,
    pub poly: Poly,
    pub series: TruncSeries,
    pub value: SeriesOrder,
    pub expression: Vec<(RatFn, Mono)>,
    /// Smallest positive integer putting a multiple of the value in the group
    /// of earlier values; known once the root is finished.
    pub alpha_prime: Option<u32>,
    /// `d * alpha_prime` with `d = 1`.
    pub alpha: Option<u32>,
    /// Earlier members of the inessential-predecessor chain, oldest first.
    pub predecessors: Vec<Poly>,
}

impl Root2d {
    pub fn lead(&self) -> Option<&RatFn> {
        self.series.lead().map(|(_, c)| c)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Termination2d {
    MaxRoots,
    /// The last root vanishes to the truncation order: either the point lies
    /// on that curve or more terms are needed.
    ValueUnknown,
    ChainBudget,
}

#[derive(Clone, PartialEq, Debug)]
pub struct System2d {
    pub curvette: Curvette,
    /// Variable index of `Q1` and `Q2`.
    pub var_order: [usize; 2],
    pub roots: Vec<Root2d>,
    pub termination: Termination2d,
}

impl System2d {
    pub fn labels(&self) -> Vec<String> {
        self.roots.iter().map(|r| r.label.clone()).collect()
    }

    pub fn betas(&self) -> Vec<Rat> {
        self.roots.iter().filter_map(|r| r.value.finite().cloned()).collect()
    }

    /// Roots whose alpha is known.
    pub fn finished(&self) -> usize {
        self.roots.iter().take_while(|r| r.alpha.is_some()).count()
    }

    pub fn render_expression(&self, e: &[(RatFn, Mono)]) -> String {
        let labels = self.labels();
        format_terms(e.iter().map(|(c, m)| (c.clone(), m.render(&labels))))
    }

    pub fn mono_poly(&self, m: &Mono) -> Poly {
        let mut acc = Poly::one(self.curvette.vars());
        for i in m.support() {
            acc = &acc * &self.roots[i].poly.pow(m.get(i));
        }
        acc
    }
}

/// Order of `beta` modulo the group generated by `earlier`.
pub fn alpha_prime(beta: &Rat, earlier: &[Rat]) -> u32 {
    let g = earlier.iter().fold(Rat::zero(), |a, b| rat_gcd(&a, b));
    let q = beta / g;
    q.denom().to_u32().expect("small denominator")
}

/// Exponents `eps` with `sum eps_r beta_r = v`, `0 <= eps_r < alpha_r` for
/// `r >= 1`, following the standard representation.
pub fn standard_exponents(v: &Rat, betas: &[Rat], alphas: &[u32]) -> Result<Vec<u32>> {
    let mut eps = vec![0u32; betas.len()];
    let mut rem = v.clone();
    for r in (1..betas.len()).rev() {
        let g = betas[..r].iter().fold(Rat::zero(), |a, b| rat_gcd(&a, b));
        let e = (0..alphas[r])
            .find(|&e| is_multiple(&(&rem - &betas[r] * Rat::from_integer(e.into())), &g))
            .ok_or_else(|| Error::Internal(format!("{v} has no standard representation")))?;
        rem -= &betas[r] * Rat::from_integer(e.into());
        eps[r] = e;
    }
    let e0 = &rem / &betas[0];
    if !e0.is_integer() || e0 < Rat::zero() {
        return Err(Error::Internal(format!("{v} leaves a negative power of the first root")));
    }
    eps[0] = e0.to_integer().to_u32().unwrap_or(u32::MAX);
    Ok(eps)
}

/// The key-polynomial sequence of a two-variable curvette.
pub fn roots_2d(c: &Curvette, max_roots: usize) -> Result<System2d> {
    if c.vars().len() != 2 {
        return Err(Error::ArityMismatch(format!("roots_2d needs 2 variables, got {}", c.vars().len())));
    }
    let key = |j: usize| match c.series()[j].order() {
        SeriesOrder::Finite(v) => (0, v),
        SeriesOrder::ZeroToTruncation => (1, Rat::zero()),
    };
    let var_order = if key(1) < key(0) { [1, 0] } else { [0, 1] };
    let vars = c.vars();
    let mut roots: Vec<Root2d> = var_order
        .iter()
        .enumerate()
        .map(|(k, &j)| Root2d {
            label: vars[j].clone(),
            poly: Poly::var(vars, j),
            series: c.series()[j].clone(),
            value: c.series()[j].order(),
            expression: vec![(RatFn::one(), Mono::single(k))],
            alpha_prime: None,
            alpha: None,
            predecessors: Vec::new(),
        })
        .collect();
    if let SeriesOrder::Finite(_) = roots[0].value {
        roots[0].alpha_prime = Some(1);
        roots[0].alpha = Some(1);
    } else {
        return Err(Error::TruncationExceeded(format!("{} vanishes to truncation", roots[0].label)));
    }
    let termination;
    let mut refinements = 0usize;
    loop {
        let i = roots.len() - 1;
        let beta = match &roots[i].value {
            SeriesOrder::Finite(b) => b.clone(),
            SeriesOrder::ZeroToTruncation => {
                termination = Termination2d::ValueUnknown;
                break;
            }
        };
        if roots.len() >= max_roots && refinements == 0 {
            termination = Termination2d::MaxRoots;
            break;
        }
        if refinements >= CHAIN_BUDGET {
            termination = Termination2d::ChainBudget;
            break;
        }
        let betas: Vec<Rat> = roots[..i].iter().map(|r| r.value.finite().unwrap().clone()).collect();
        let alphas: Vec<u32> = roots[..i].iter().map(|r| r.alpha.unwrap()).collect();
        let ap = alpha_prime(&beta, &betas);
        let v = &beta * Rat::from_integer(BigInt::from(ap));
        let eps = standard_exponents(&v, &betas, &alphas)?;
        let mono = Mono::from_vec(eps);
        let mut mlead = RatFn::one();
        let mut mseries: Option<TruncSeries> = None;
        for r in mono.support() {
            mlead = &mlead * &roots[r].lead().unwrap().pow(mono.get(r));
            let p = roots[r].series.pow(mono.get(r));
            mseries = Some(match mseries {
                None => p,
                Some(s) => s.mul(&p),
            });
        }
        let cur = &roots[i];
        let z = cur.lead().unwrap().pow(ap).checked_div(&mlead)?;
        let mpoly = {
            let mut acc = Poly::one(vars);
            for r in mono.support() {
                acc = &acc * &roots[r].poly.pow(mono.get(r));
            }
            acc
        };
        let series = cur.series.pow(ap).sub(&mseries.unwrap().scale(&z));
        let poly = &cur.poly.pow(ap) - &mpoly.scale(&z);
        let value = series.order();
        if ap > 1 {
            roots[i].alpha_prime = Some(ap);
            roots[i].alpha = Some(ap);
            roots.push(Root2d {
                label: format!("Q{}", i + 2),
                poly,
                series,
                value,
                expression: vec![(RatFn::one(), Mono::power(i, ap)), (-z, mono)],
                alpha_prime: None,
                alpha: None,
                predecessors: Vec::new(),
            });
            refinements = 0;
        } else {
            let r = &mut roots[i];
            r.predecessors.push(r.poly.clone());
            r.expression.push((-z, mono));
            r.poly = poly;
            r.series = series;
            r.value = value;
            refinements += 1;
        }
    }
    Ok(System2d { curvette: c.clone(), var_order, roots, termination })
}
