//! Standard forms over an approximate-root system, the ideals of elements of
//! value at least gamma, and the check that lead relations come from the
//! roots' expressions.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::arith::{Rat, RatFn};
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::poly::Poly;
use crate::roots::{LevelRecord, Mono, RootSystem};
use crate::semigroup::Semigroup;

/// Rewrites allowed before the loop is declared runaway.
pub const STEP_BUDGET: usize = 1_000_000;

pub type Term = (RatFn, Mono);

#[derive(Clone, PartialEq, Debug)]
pub struct Rewrite {
    /// 1 replaces an initial monomial by its root, 2 replaces a superseded
    /// root by its successor.
    pub rule: u8,
    pub monomial: Mono,
    pub root: usize,
    pub replacement: Vec<Term>,
    /// The whole form after the step.
    pub result: Vec<Term>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct StandardForm {
    pub level: Rat,
    pub settled: Vec<Term>,
    pub tail: Vec<Term>,
    pub steps: Vec<Rewrite>,
}

impl StandardForm {
    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.settled.iter().chain(self.tail.iter())
    }

    pub fn render(&self, rs: &RootSystem) -> String {
        let t: Vec<Term> = self.terms().cloned().collect();
        rs.render_expression(&t)
    }

    /// Values of all monomials in order.
    pub fn values(&self, rs: &RootSystem) -> Vec<Rat> {
        self.terms().map(|(_, m)| rs.mono_value(m)).collect()
    }

    /// Expands back to a polynomial in the coordinates.
    pub fn expand(&self, rs: &RootSystem) -> Poly {
        let mut acc = Poly::zero(rs.curvette.vars());
        for (c, m) in self.terms() {
            acc = &acc + &rs.mono_poly(m).scale(c);
        }
        acc
    }
}

/// `rule 1: y^3 -> y*Q4 + x*y*z`.
pub struct RewriteDisplay<'a>(pub &'a Rewrite, pub &'a RootSystem);

impl fmt::Display for RewriteDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, rs) = (self.0, self.1);
        write!(
            f,
            "rule {}: {} -> {}  gives  {}",
            s.rule,
            rs.render_mono(&s.monomial),
            rs.render_expression(&s.replacement),
            rs.render_expression(&s.result)
        )
    }
}

/// The level record governing level `l`: the last processed level not above it.
fn record_at<'a>(rs: &'a RootSystem, l: &Rat) -> Option<&'a LevelRecord> {
    rs.levels.iter().take_while(|r| r.gamma <= *l).last()
}

/// Non-coordinate roots created at or below `l`.
fn created_by<'a>(rs: &'a RootSystem, l: &Rat) -> impl Iterator<Item = usize> + 'a {
    let l = l.clone();
    (0..rs.roots.len()).filter(move |&i| !rs.roots[i].is_variable() && rs.roots[i].created_at <= l)
}

pub fn is_standard(m: &Mono, rs: &RootSystem, level: &Rat) -> bool {
    let v: &[usize] = record_at(rs, level).map(|r| r.v.as_slice()).unwrap_or(&[]);
    m.support().all(|i| v.contains(&i)) && !created_by(rs, level).any(|q| rs.roots[q].in_monomial.divides(m))
}

/// Rewrites `m` once, returning the rule, the root used and the replacement.
fn rewrite_once(m: &Mono, rs: &RootSystem, level: &Rat) -> Result<(u8, usize, Vec<Term>)> {
    let v: &[usize] = record_at(rs, level).map(|r| r.v.as_slice()).unwrap_or(&[]);
    // rule 2 first: a root outside V is traded for its successor
    for i in m.support() {
        if v.contains(&i) {
            continue;
        }
        let Some(s) = rs.roots[i].successor.filter(|&s| rs.roots[s].created_at <= *level) else {
            return Err(Error::Internal(format!("{} is outside V with no successor", rs.roots[i].label)));
        };
        // successor = root + (c, last), so root = successor - c*last
        let (c, last) = rs.roots[s].expression.last().unwrap().clone();
        let rest = Mono::single(i).quotient_of(m);
        let out = vec![(RatFn::one(), rest.mul(&Mono::single(s))), (-c, rest.mul(&last))];
        return Ok((2, i, out));
    }
    // rule 1: the latest chain member whose initial monomial divides m
    let mut best: Option<usize> = None;
    for q in created_by(rs, level) {
        let r = &rs.roots[q];
        if !r.in_monomial.divides(m) {
            continue;
        }
        best = match best {
            None => Some(q),
            Some(b) if rs.roots[b].family == r.family && r.created_at > rs.roots[b].created_at => Some(q),
            keep => keep,
        };
    }
    let q = best.ok_or_else(|| Error::Internal(format!("no rewrite for {}", rs.render_mono(m))))?;
    let r = &rs.roots[q];
    let rest = r.in_monomial.quotient_of(m);
    let mut out = vec![(RatFn::one(), rest.mul(&Mono::single(q)))];
    for (c, e) in &r.expression[1..] {
        out.push((-c, rest.mul(e)));
    }
    Ok((1, q, out))
}

/// Root monomials of a polynomial in the coordinates.
pub fn to_root_terms(f: &Poly, rs: &RootSystem) -> Result<Vec<Term>> {
    if f.vars() != rs.curvette.vars() {
        return Err(Error::ArityMismatch(format!("{:?} vs {:?}", f.vars(), rs.curvette.vars())));
    }
    let idx = rs.variable_roots();
    Ok(f.terms()
        .map(|(e, c)| {
            let mut m = Mono::one();
            for (j, &a) in e.iter().enumerate() {
                if a > 0 {
                    m = m.mul(&Mono::power(idx[j], a));
                }
            }
            (c.clone(), m)
        })
        .collect())
}

type Form = BTreeMap<(Rat, Mono), RatFn>;

fn add_to(form: &mut Form, rs: &RootSystem, c: RatFn, m: Mono) {
    let key = (rs.mono_value(&m), m);
    let new = match form.remove(&key) {
        Some(old) => &old + &c,
        None => c,
    };
    if !new.is_zero() {
        form.insert(key, new);
    }
}

fn listed(form: &Form) -> Vec<Term> {
    form.iter().map(|((_, m), c)| (c.clone(), m.clone())).collect()
}

/// Standard form of `f` of level `level` from already root-expressed terms.
pub fn standard_form_terms(terms: Vec<Term>, level: &Rat, rs: &RootSystem, log: bool) -> Result<StandardForm> {
    if rs.level() < *level {
        return Err(Error::LevelInsufficient { have: rs.level(), need: level.to_string() });
    }
    let mut form = Form::new();
    for (c, m) in terms {
        add_to(&mut form, rs, c, m);
    }
    let mut steps = Vec::new();
    let mut count = 0usize;
    loop {
        let next = form
            .iter()
            .take_while(|((v, _), _)| v < level)
            .find(|((_, m), _)| !is_standard(m, rs, level))
            .map(|(k, c)| (k.clone(), c.clone()));
        let Some((key, c)) = next else { break };
        count += 1;
        if count > STEP_BUDGET {
            return Err(Error::NonTerminatingGuard(STEP_BUDGET));
        }
        form.remove(&key);
        let (rule, root, rep) = rewrite_once(&key.1, rs, level)?;
        for (d, m) in &rep {
            add_to(&mut form, rs, &c * d, m.clone());
        }
        if log {
            steps.push(Rewrite { rule, monomial: key.1, root, replacement: rep, result: listed(&form) });
        }
    }
    let (mut settled, mut tail) = (Vec::new(), Vec::new());
    for ((v, m), c) in form {
        if v < *level {
            settled.push((c, m))
        } else {
            tail.push((c, m))
        }
    }
    Ok(StandardForm { level: level.clone(), settled, tail, steps })
}

pub fn standard_form(f: &Poly, level: &Rat, rs: &RootSystem) -> Result<StandardForm> {
    standard_form_terms(to_root_terms(f, rs)?, level, rs, true)
}

/// The smallest value in the standard form at the system's last level.
pub fn value_via_standard_form(f: &Poly, rs: &RootSystem) -> Result<Rat> {
    let l = rs.level();
    let sf = standard_form_terms(to_root_terms(f, rs)?, &l, rs, false)?;
    match sf.settled.first() {
        Some((_, m)) => Ok(rs.mono_value(m)),
        None => Err(Error::LevelInsufficient { have: l, need: "the value of the element".into() }),
    }
}

/// Monomials over `roots` that have value at least `gamma` but lose that
/// property when any one factor is removed.
fn minimal_monomials(rs: &RootSystem, roots: &[usize], gamma: &Rat) -> Vec<Mono> {
    fn go(rs: &RootSystem, roots: &[usize], k: usize, cur: Mono, val: Rat, gamma: &Rat, out: &mut Vec<Mono>) {
        if val >= *gamma {
            let minimal = cur.support().all(|i| &val - &rs.roots[i].value < *gamma);
            if minimal {
                out.push(cur);
            }
            return;
        }
        if k == roots.len() {
            return;
        }
        let i = roots[k];
        let mut e = 0u32;
        let mut v = val;
        loop {
            go(rs, roots, k + 1, cur.with(i, e), v.clone(), gamma, out);
            if v >= *gamma {
                break;
            }
            v += &rs.roots[i].value;
            e += 1;
        }
    }
    let mut out = Vec::new();
    go(rs, roots, 0, Mono::one(), Rat::zero(), gamma, &mut out);
    out.sort_by(|a, b| (rs.mono_value(a), a).cmp(&(rs.mono_value(b), b)));
    out.dedup();
    out
}

/// Whether `m` lies in the ideal generated by `gens`, certified by expanding
/// roots through their expressions down to the coordinates.
fn in_ideal(m: &Mono, gens: &[Mono], rs: &RootSystem) -> bool {
    if gens.iter().any(|g| g.divides(m)) {
        return true;
    }
    let Some(q) = m.support().filter(|&i| !rs.roots[i].is_variable()).max() else { return false };
    let rest = Mono::single(q).quotient_of(m);
    rs.roots[q].expression.iter().all(|(_, e)| in_ideal(&rest.mul(e), gens, rs))
}

/// Generators of the ideal of elements of value at least `gamma`, as root
/// monomials. With `prune`, generators lying in the ideal of the others are
/// dropped, largest first.
pub fn nu_ideal_generators(gamma: &Rat, rs: &RootSystem, prune: bool) -> Vec<Mono> {
    let mut roots: Vec<usize> =
        rs.psi().iter().chain(rs.theta()).copied().filter(|&i| !rs.roots[i].value_is_bound).collect();
    if rs.levels.is_empty() {
        roots = rs.variable_roots();
    }
    monomial_generators(rs, &roots, gamma, prune)
}

/// Monomials over `roots` generating the elements of value at least `gamma`
/// among combinations of such monomials.
pub fn monomial_generators(rs: &RootSystem, roots: &[usize], gamma: &Rat, prune: bool) -> Vec<Mono> {
    let mut roots = roots.to_vec();
    roots.sort();
    roots.dedup();
    let mut gens = minimal_monomials(rs, &roots, gamma);
    if prune {
        let mut k = gens.len();
        while k > 0 {
            k -= 1;
            let g = gens[k].clone();
            let others: Vec<Mono> = gens.iter().filter(|h| **h != g).cloned().collect();
            if in_ideal(&g, &others, rs) {
                gens.remove(k);
            }
        }
    }
    gens
}

#[derive(Clone, PartialEq, Debug)]
pub struct KernelDegree {
    pub degree: Rat,
    pub monomials: Vec<Mono>,
    pub kernel_dim: usize,
    pub ideal_dim: usize,
    pub pass: bool,
}

/// For each graded degree below `level`, compares the kernel of the map
/// sending X-monomials over V to their leads with the degree part of the
/// ideal generated by least-degree parts of root expressions.
pub fn relations_kernel_check(rs: &RootSystem, level: &Rat) -> Vec<KernelDegree> {
    let Some(rec) = record_at(rs, level) else { return Vec::new() };
    let v = rec.v.clone();
    let sg = Semigroup::new(v.iter().map(|&i| rs.roots[i].value.clone())).expect("positive values");
    let mut hs: Vec<(Rat, Vec<Term>)> = Vec::new();
    for &q in rec.v.iter().chain(&rec.theta) {
        let r = &rs.roots[q];
        if r.is_variable() {
            continue;
        }
        let d = rs.mono_value(&r.in_monomial);
        let h: Vec<Term> = r.expression.iter().filter(|(_, m)| rs.mono_value(m) == d).cloned().collect();
        if h.iter().all(|(_, m)| m.support().all(|i| v.contains(&i))) && !hs.iter().any(|(_, g)| *g == h) {
            hs.push((d, h));
        }
    }
    let mut out = Vec::new();
    for b in sg.elements_up_to(level) {
        if b >= *level || b.is_zero() {
            continue;
        }
        let monos = rs.monomials_of_value(&v, &b);
        let leads: Vec<RatFn> = monos.iter().map(|m| rs.mono_lead(m)).collect();
        let kernel_dim = monos.len().saturating_sub(1);
        let mut rows = Vec::new();
        let mut inside = true;
        for (d, h) in &hs {
            if *d > b {
                continue;
            }
            for mu in rs.monomials_of_value(&v, &(&b - d)) {
                let mut row = vec![RatFn::zero(); monos.len()];
                for (c, m) in h {
                    let p = monos.iter().position(|n| *n == mu.mul(m)).expect("degree-b monomial");
                    row[p] = &row[p] + c;
                }
                let image = row.iter().zip(&leads).fold(RatFn::zero(), |a, (c, l)| &a + &(c * l));
                inside &= image.is_zero();
                rows.push(row);
            }
        }
        let ideal_dim = rank(&rows);
        out.push(KernelDegree {
            degree: b,
            monomials: monos,
            kernel_dim,
            ideal_dim,
            pass: inside && ideal_dim == kernel_dim,
        });
    }
    out
}
