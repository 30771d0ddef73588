use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::series::SeriesOrder;
use crate::valuation::Curvette;

use super::RootBuilder;

/// Coordinate change `vars[var] <- vars[var] - subtract`, where `subtract`
/// is written in the coordinates current at the time of the change.
#[derive(Clone, PartialEq, Debug)]
pub struct Substitution {
    pub var: usize,
    pub subtract: Poly,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Prepared {
    pub curvette: Curvette,
    pub substitutions: Vec<Substitution>,
}

impl Prepared {
    /// Rewrites a polynomial in the original coordinates into the prepared ones.
    pub fn rewrite(&self, f: &Poly) -> Result<Poly> {
        let vars = f.vars().to_vec();
        let mut g = f.clone();
        for s in &self.substitutions {
            let images: Vec<Poly> = (0..vars.len())
                .map(|j| if j == s.var { &Poly::var(&vars, j) + &s.subtract } else { Poly::var(&vars, j) })
                .collect();
            g = g.compose(&images, &vars)?;
        }
        Ok(g)
    }

    /// Inverse of [`Prepared::rewrite`].
    pub fn to_original(&self, f: &Poly) -> Result<Poly> {
        let vars = f.vars().to_vec();
        let mut g = f.clone();
        for s in self.substitutions.iter().rev() {
            let images: Vec<Poly> = (0..vars.len())
                .map(|j| if j == s.var { &Poly::var(&vars, j) - &s.subtract } else { Poly::var(&vars, j) })
                .collect();
            g = g.compose(&images, &vars)?;
        }
        Ok(g)
    }

    /// Applies the same coordinate changes to another point.
    pub fn replay(&self, c: &Curvette) -> Result<Curvette> {
        apply_all(c, &self.substitutions)
    }
}

fn apply(c: &Curvette, s: &Substitution) -> Result<Curvette> {
    let img = c.image(&s.subtract)?;
    let mut series = c.series().to_vec();
    series[s.var] = series[s.var].sub(&img);
    c.with_series(c.vars().to_vec(), series)
}

fn apply_all(c: &Curvette, subs: &[Substitution]) -> Result<Curvette> {
    let mut c = c.clone();
    for s in subs {
        c = apply(&c, s)?;
    }
    Ok(c)
}

/// Changes coordinates until no coordinate's initial form is reached by
/// monomials in the coordinates of smaller value. Coordinates whose value
/// exceeds `bound` are left alone.
pub fn prepare_coordinates(c: &Curvette, bound: Option<&Rat>) -> Result<Prepared> {
    prepare_coordinates_with(c, bound, false)
}

/// As [`prepare_coordinates`]; with `constant_only` the first change whose
/// coefficient depends on `u` is not made, and nothing at or above its value
/// is prepared. Two points of a symbolic curvette already differ there.
pub fn prepare_coordinates_with(c: &Curvette, bound: Option<&Rat>, constant_only: bool) -> Result<Prepared> {
    let bound = bound.cloned().unwrap_or_else(|| c.trunc());
    let mut cap: Option<Rat> = None;
    let n = c.vars().len();
    let vars = c.vars().to_vec();
    let mut cur = c.clone();
    let mut subs = Vec::new();
    // builder over the coordinates of smaller value, reused while they are unchanged
    let mut cache: Option<(Vec<usize>, RootBuilder)> = None;
    'outer: loop {
        let mut order: Vec<(Rat, usize)> = Vec::new();
        for j in 0..n {
            match cur.series()[j].order() {
                SeriesOrder::Finite(v) => order.push((v, j)),
                // a coordinate identically zero to truncation cannot be improved
                SeriesOrder::ZeroToTruncation => {}
            }
        }
        order.sort();
        for p in 1..order.len() {
            let (vj, j) = order[p].clone();
            if vj > bound || cap.as_ref().is_some_and(|c| vj >= *c) {
                break;
            }
            let earlier: Vec<usize> = order[..p].iter().map(|(_, k)| *k).collect();
            if cache.as_ref().is_none_or(|(k, _)| *k != earlier) {
                let sub_vars: Vec<String> = earlier.iter().map(|&k| vars[k].clone()).collect();
                let sub_series = earlier.iter().map(|&k| cur.series()[k].clone()).collect();
                let sub = cur.with_series(sub_vars, sub_series)?;
                cache = Some((earlier.clone(), RootBuilder::new(&sub)?));
            }
            let b = &mut cache.as_mut().unwrap().1;
            let sub_trunc = b.system().curvette.trunc();
            while b.next_level() <= vj && b.next_level() < sub_trunc {
                b.step()?;
            }
            let hit = b.system().levels.iter().find(|l| l.gamma == vj).and_then(|l| l.candidates.last().cloned());
            let Some(cand) = hit else { continue };
            let lead_j = cur.series()[j].lead().unwrap().1.clone();
            let coeff = lead_j.checked_div(&cand.lead)?;
            if constant_only && !coeff.is_constant() {
                cap = Some(vj.clone());
                continue 'outer;
            }
            let m = b.system().mono_poly(&cand.mono).scale(&coeff);
            let subtract = m.embed(&vars)?;
            let s = Substitution { var: j, subtract };
            let next = apply(&cur, &s)?;
            if let SeriesOrder::Finite(w) = next.series()[j].order() {
                if w <= vj {
                    return Err(Error::Internal(format!("preparation did not raise the value of {}", vars[j])));
                }
            }
            if cache.as_ref().is_some_and(|(k, _)| k.contains(&j)) {
                cache = None;
            }
            subs.push(s);
            cur = next;
            continue 'outer;
        }
        break;
    }
    Ok(Prepared { curvette: cur, substitutions: subs })
}
