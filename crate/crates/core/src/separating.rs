//! The separating ideal of two curvettes sharing the origin: the value where
//! their graded data first disagree, monomial generators, a sign-changing
//! witness, and the sets C and C' built from standard expansions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{sign_under, ParamAssumption, Rat, RatFn, Sign};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::roots::{prepare_coordinates_with, Mono, Prepared, RootBuilder, RootSystem};
use crate::series::{SeriesOrder, TruncSeries};
use crate::standard_form::{monomial_generators, standard_form, Term};
use crate::valuation::{t_power_sign, Curvette};

#[derive(Clone, PartialEq, Debug)]
pub struct CurvettePair {
    pub alpha: Curvette,
    pub beta: Curvette,
    /// One symbolic curvette standing for two points with distinct parameter
    /// values in the same interval.
    pub generic: bool,
}

fn depends_on_u(c: &Curvette) -> bool {
    c.series().iter().any(|s| s.terms().any(|(_, a)| !a.is_constant()))
}

fn check_centered(c: &Curvette) -> Result<()> {
    for (s, v) in c.series().iter().zip(c.vars()) {
        if let SeriesOrder::Finite(e) = s.order() {
            if e <= Rat::zero() {
                return Err(Error::InvariantViolation(format!("{v} does not vanish at the origin")));
            }
        }
    }
    Ok(())
}

impl CurvettePair {
    pub fn new(alpha: Curvette, beta: Curvette) -> Result<Self> {
        if alpha.vars() != beta.vars() {
            return Err(Error::ArityMismatch(format!("[{}] vs [{}]", alpha.vars().join(", "), beta.vars().join(", "))));
        }
        check_centered(&alpha)?;
        check_centered(&beta)?;
        Ok(CurvettePair { alpha, beta, generic: false })
    }

    /// Two points given by `c` at independent distinct parameter values.
    pub fn generic(c: Curvette) -> Result<Self> {
        if !depends_on_u(&c) || c.param().exact_value().is_some() {
            return Err(Error::InvariantViolation(
                "a generic pair needs a curvette depending on u over an interval".into(),
            ));
        }
        check_centered(&c)?;
        Ok(CurvettePair { alpha: c.clone(), beta: c, generic: true })
    }

    /// Generic when both sides are the same symbolic curvette, literal otherwise.
    pub fn auto(alpha: Curvette, beta: Curvette) -> Result<Self> {
        if alpha == beta && depends_on_u(&alpha) && alpha.param().exact_value().is_none() {
            Self::generic(alpha)
        } else {
            Self::new(alpha, beta)
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DivergenceKind {
    MonomialSetMismatch,
    SignOrderMismatch,
}

impl fmt::Display for DivergenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DivergenceKind::MonomialSetMismatch => "monomial-set-mismatch",
            DivergenceKind::SignOrderMismatch => "sign-order-mismatch",
        })
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Divergence {
    /// 1-based position in the value lists of both points.
    pub index: usize,
    pub value_alpha: Rat,
    pub value_beta: Rat,
    pub kind: DivergenceKind,
    pub monos_alpha: Vec<Mono>,
    pub monos_beta: Vec<Mono>,
    /// Leads of the monomials times the sign of the matching power of t.
    pub leads_alpha: Vec<RatFn>,
    pub leads_beta: Vec<RatFn>,
    /// First root each point creates at the divergence level, if any.
    pub next_roots: Option<(Poly, Poly)>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct SepResult {
    pub pair: CurvettePair,
    pub prepared: Prepared,
    /// `beta` in the prepared coordinates.
    pub beta_prepared: Curvette,
    /// Roots common to both points, with values for alpha.
    pub common: RootSystem,
    /// The same roots with values for beta.
    pub common_beta: RootSystem,
    /// Alpha's system through the divergence level when it could be built.
    pub alpha_system: RootSystem,
    pub divergence: Option<Divergence>,
    /// Levels were compared up to here.
    pub bound: Rat,
}

impl SepResult {
    pub fn value_alpha(&self) -> Option<&Rat> {
        self.divergence.as_ref().map(|d| &d.value_alpha)
    }
}

fn signed_lead(rs: &RootSystem, m: &Mono, gamma: &Rat) -> Result<RatFn> {
    let l = rs.mono_lead(m);
    Ok(match t_power_sign(gamma, rs.curvette.t_sign())? {
        Sign::Neg => -l,
        _ => l,
    })
}

/// Whether `b = rho * a` with `rho > 0`, for exact vectors.
pub fn positively_proportional(a: &[Rat], b: &[Rat]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some(i) = a.iter().position(|x| !x.is_zero()) else { return b.iter().all(|x| x.is_zero()) };
    let rho = &b[i] / &a[i];
    rho.is_positive() && a.iter().zip(b).all(|(x, y)| &rho * x == *y)
}

/// Proportionality for a shared unknown parameter value under `param`.
fn proportional_shared(a: &[RatFn], b: &[RatFn], param: &ParamAssumption) -> Result<bool> {
    let rho = b[0].checked_div(&a[0])?;
    for (x, y) in a.iter().zip(b).skip(1) {
        let d = y - &(&rho * x);
        if !d.is_zero() {
            // a difference with no root in the interval separates the vectors
            return match sign_under(&d, param)? {
                Sign::Zero => Ok(true),
                _ => Ok(false),
            };
        }
    }
    Ok(sign_under(&rho, param)? == Sign::Pos)
}

/// Proportionality of `a(u1)` and `a(u2)` for every pair of distinct
/// parameter values allowed by `param`.
fn proportional_generic(a: &[RatFn], param: &ParamAssumption) -> Result<bool> {
    // a sign change of the first lead would already split some pairs
    sign_under(&a[0], param)?;
    for x in &a[1..] {
        let r = x.checked_div(&a[0])?;
        if r.is_constant() {
            continue;
        }
        // a strictly monotone ratio takes each value once
        let d = r.derivative();
        return match sign_under(&d, param) {
            Ok(Sign::Pos) | Ok(Sign::Neg) => Ok(false),
            _ => Err(Error::AmbiguousSign(format!("ratio {r} is not monotone under {param}"))),
        };
    }
    Ok(true)
}

fn proportional(p: &CurvettePair, a: &[RatFn], b: &[RatFn]) -> Result<bool> {
    if p.generic {
        return proportional_generic(a, p.alpha.param());
    }
    match (p.alpha.param().exact_value(), p.beta.param().exact_value()) {
        (Some(ua), Some(ub)) => {
            let ea = a.iter().map(|x| x.eval(ua)).collect::<Result<Vec<_>>>()?;
            let eb = b.iter().map(|x| x.eval(ub)).collect::<Result<Vec<_>>>()?;
            Ok(positively_proportional(&ea, &eb))
        }
        _ if p.alpha.param() == p.beta.param() => proportional_shared(a, b, p.alpha.param()),
        _ if a.iter().chain(b).all(|x| x.is_constant()) => {
            let ea: Vec<Rat> = a.iter().map(|x| x.as_rat().unwrap()).collect();
            let eb: Vec<Rat> = b.iter().map(|x| x.as_rat().unwrap()).collect();
            Ok(positively_proportional(&ea, &eb))
        }
        _ => Err(Error::AmbiguousSign("the two points carry different parameter assumptions".into())),
    }
}

fn level_data(rs: &RootSystem, gamma: &Rat) -> Result<(Vec<Mono>, Vec<RatFn>)> {
    let monos = rs.monomials_of_value(&rs.roots_up_to_value(gamma), gamma);
    let leads = monos.iter().map(|m| signed_lead(rs, m, gamma)).collect::<Result<_>>()?;
    Ok((monos, leads))
}

fn same_relations(a: &RootSystem, b: &RootSystem) -> bool {
    let (Some(la), Some(lb)) = (a.last_level(), b.last_level()) else { return true };
    la.candidates.iter().map(|c| &c.mono).eq(lb.candidates.iter().map(|c| &c.mono))
        && la.relations.iter().map(|r| (r.head, &r.coeff)).eq(lb.relations.iter().map(|r| (r.head, &r.coeff)))
}

/// Walks both value lists in step until their graded data disagree or the
/// level passes `bound` (default: just below the truncation order).
pub fn separating_value(p: &CurvettePair, bound: Option<&Rat>) -> Result<SepResult> {
    // coordinates of value above the bound never enter the walk; a generic
    // pair cannot share a change of coordinates whose coefficient involves u
    let prepared = prepare_coordinates_with(&p.alpha, bound, p.generic)?;
    let a = prepared.curvette.clone();
    let b = if p.generic { a.clone() } else { prepared.replay(&p.beta)? };
    let trunc = a.trunc().min(b.trunc());
    let bound = bound.cloned().unwrap_or_else(|| &trunc - Rat::one());
    let mut ba = RootBuilder::new(&a)?;
    let mut bb = RootBuilder::new(&b)?;
    let mut index = 0;
    let divergence = loop {
        let (ga, gb) = (ba.next_level(), bb.next_level());
        if ga > bound || ga >= trunc || gb >= trunc {
            break None;
        }
        index += 1;
        let (ma, la) = level_data(ba.system(), &ga)?;
        let (mb, lb) = level_data(bb.system(), &gb)?;
        let kind = if ma != mb {
            Some(DivergenceKind::MonomialSetMismatch)
        } else if !proportional(p, &la, &lb)? {
            Some(DivergenceKind::SignOrderMismatch)
        } else {
            None
        };
        if let Some(kind) = kind {
            break Some(Divergence {
                index,
                value_alpha: ga,
                value_beta: gb,
                kind,
                monos_alpha: ma,
                monos_beta: mb,
                leads_alpha: la,
                leads_beta: lb,
                next_roots: None,
            });
        }
        ba.step()?;
        bb.step()?;
        if !same_relations(ba.system(), bb.system()) {
            return Err(Error::Internal(format!("roots split at level {ga} although the leads agree")));
        }
    };
    let common = ba.system().clone();
    let common_beta = bb.system().clone();
    let mut divergence = divergence;
    let mut alpha_system = common.clone();
    if let Some(d) = divergence.as_mut() {
        let n = common.roots.len();
        if ba.step().is_ok() {
            alpha_system = ba.system().clone();
            if !p.generic && bb.step().is_ok() {
                let (ra, rb) = (&ba.system().roots, &bb.system().roots);
                if ra.len() > n && rb.len() > n {
                    d.next_roots = Some((ra[n].poly.clone(), rb[n].poly.clone()));
                }
            }
        }
    }
    Ok(SepResult { pair: p.clone(), prepared, beta_prepared: b, common, common_beta, alpha_system, divergence, bound })
}

/// The common roots up to `bound`.
pub fn common_roots(p: &CurvettePair, bound: &Rat) -> Result<RootSystem> {
    Ok(separating_value(p, Some(bound))?.common)
}

/// Monomials in the common roots of alpha-value at least the separating value,
/// pruned as for the value ideals. Empty when no divergence was found.
pub fn separating_generators(s: &SepResult) -> Vec<Mono> {
    let Some(d) = &s.divergence else { return Vec::new() };
    // roots known only to vanish past the truncation order have value above
    // the separating value and belong to the ideal
    let roots: Vec<usize> = (0..s.common.roots.len()).collect();
    monomial_generators(&s.common, &roots, &d.value_alpha, true)
}

#[derive(Clone, PartialEq, Debug)]
pub struct Witness {
    /// In the original coordinates.
    pub poly: Poly,
    /// Over the common roots.
    pub terms: Vec<Term>,
}

/// The shortest decimal in the open interval, avoiding zero.
pub fn shortest_decimal(lo: Option<&Rat>, hi: Option<&Rat>) -> Option<Rat> {
    for d in 0..=12u32 {
        let scale = Rat::from_integer(BigInt::from(10).pow(d));
        let nmin: Option<BigInt> = lo.map(|l| (l * &scale).floor().to_integer() + 1);
        let nmax: Option<BigInt> = hi.map(|h| (h * &scale).ceil().to_integer() - 1);
        if let (Some(a), Some(b)) = (&nmin, &nmax) {
            if a > b {
                continue;
            }
        }
        let one = BigInt::one();
        let pick = match (&nmin, &nmax) {
            (Some(a), _) if a.is_positive() => Some(a.clone()),
            (_, Some(b)) if b.is_negative() => Some(b.clone()),
            (_, b) if b.as_ref().is_none_or(|b| *b >= one) => Some(one),
            (a, _) if a.as_ref().is_none_or(|a| *a <= -BigInt::one()) => Some(-BigInt::one()),
            _ => None,
        };
        if let Some(n) = pick {
            return Some(Rat::from_integer(n) / scale);
        }
    }
    None
}

/// A side's data for one monomial: value and numeric signed lead.
struct SideMono {
    value: Rat,
    lead: Rat,
}

fn side_data(rs: &RootSystem, m: &Mono) -> Result<Option<SideMono>> {
    let value = rs.mono_value(m);
    let lead = signed_lead(rs, m, &value)?;
    let lead = match rs.curvette.param().exact_value() {
        Some(u) => lead.eval(u)?,
        None => match lead.as_rat() {
            Some(r) => r,
            None => return Ok(None),
        },
    };
    Ok(Some(SideMono { value, lead }))
}

/// Interval for `l2` such that `l1 m1 + l2 m2` has sign `target` on a side.
fn constrain(m1: &SideMono, m2: &SideMono, l1: &Rat, target: i32, lo: &mut Option<Rat>, hi: &mut Option<Rat>) -> bool {
    let t = Rat::from_integer(target.into());
    let mut lower = |x: Rat| *lo = Some(lo.take().map_or(x.clone(), |l| l.max(x)));
    if m1.value < m2.value {
        return (l1 * &m1.lead * &t).is_positive();
    }
    if m2.value < m1.value {
        if (&m2.lead * &t).is_positive() {
            lower(Rat::zero());
        } else {
            *hi = Some(hi.take().map_or(Rat::zero(), |h| h.min(Rat::zero())));
        }
        return true;
    }
    // t*(l1 c1 + l2 c2) > 0
    let k = &t * &m2.lead;
    let bnd = -(&t * l1 * &m1.lead) / &k;
    if k.is_positive() {
        lower(bnd);
    } else {
        *hi = Some(hi.take().map_or(bnd.clone(), |h| h.min(bnd)));
    }
    true
}

/// A combination of divergence-level monomials positive on alpha and negative
/// on beta, verified by direct sign evaluation on the original curvettes.
pub fn witness_sign_change(s: &SepResult) -> Result<Witness> {
    let d = s.divergence.as_ref().ok_or_else(|| Error::NotFoundWithinBudget("no divergence below the bound".into()))?;
    if s.pair.generic {
        return Err(Error::NotFoundWithinBudget(
            "both parameter values are symbolic; fix them to get a witness".into(),
        ));
    }
    let mut monos: Vec<Mono> = d.monos_alpha.iter().chain(&d.monos_beta).cloned().collect();
    monos.sort();
    monos.dedup();
    let mut data = Vec::new();
    for m in &monos {
        match (side_data(&s.common, m)?, side_data(&s.common_beta, m)?) {
            (Some(a), Some(b)) => data.push((m.clone(), a, b)),
            _ => return Err(Error::NotFoundWithinBudget("leads depend on an unfixed parameter".into())),
        }
    }
    let mut tries: Vec<Vec<Term>> = Vec::new();
    for (m, a, b) in &data {
        if a.lead.is_positive() != b.lead.is_positive() {
            let c = if a.lead.is_positive() { 1 } else { -1 };
            tries.push(vec![(RatFn::from_int(c), m.clone())]);
        }
    }
    for i in 0..data.len() {
        for j in i + 1..data.len() {
            for l1 in [-1i64, 1] {
                let l1r = Rat::from_integer(l1.into());
                let (mut lo, mut hi): (Option<Rat>, Option<Rat>) = (None, None);
                let ok = constrain(&data[i].1, &data[j].1, &l1r, 1, &mut lo, &mut hi)
                    && constrain(&data[i].2, &data[j].2, &l1r, -1, &mut lo, &mut hi);
                if !ok {
                    continue;
                }
                if let Some(l2) = shortest_decimal(lo.as_ref(), hi.as_ref()) {
                    tries
                        .push(vec![(RatFn::from_int(l1), data[i].0.clone()), (RatFn::from_rat(l2), data[j].0.clone())]);
                }
            }
        }
    }
    for terms in tries {
        let mut f = Poly::zero(s.common.curvette.vars());
        for (c, m) in &terms {
            f = &f + &s.common.mono_poly(m).scale(c);
        }
        let f = s.prepared.to_original(&f)?;
        let sa = s.pair.alpha.sign_at(&f);
        let sb = s.pair.beta.sign_at(&f);
        if matches!((sa, sb), (Ok(Sign::Pos), Ok(Sign::Neg))) {
            return Ok(Witness { poly: f, terms });
        }
    }
    Err(Error::NotFoundWithinBudget(format!("no sign-changing pair among {} monomials", monos.len())))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    C,
    CPrime,
}

#[derive(Clone, PartialEq, Debug)]
pub struct ConnectedEntry {
    pub f: Poly,
    pub value: Rat,
    pub heads: Vec<Term>,
    pub tails: Vec<Term>,
    /// Roots appearing in the heads with their sign at alpha.
    pub head_roots: Vec<(usize, Sign)>,
    /// Sign at alpha of the sum of the heads.
    pub head_sign: Sign,
}

#[derive(Clone, PartialEq, Debug)]
pub struct ConnectedSetDesc {
    pub variant: Variant,
    pub level: Rat,
    pub system: RootSystem,
    pub prepared: Prepared,
    pub entries: Vec<ConnectedEntry>,
}

fn terms_series(rs: &RootSystem, terms: &[Term]) -> TruncSeries {
    let mut acc = TruncSeries::zero(rs.curvette.trunc());
    for (c, m) in terms {
        acc = acc.add(&rs.mono_series(m).scale(c));
    }
    acc
}

/// Splits each standard expansion of level the separating value into its
/// lowest-value slice and the rest, with sign targets read off at alpha.
pub fn connected_set(s: &SepResult, fs: &[Poly], variant: Variant) -> Result<ConnectedSetDesc> {
    let d = s.divergence.as_ref().ok_or_else(|| Error::NotFoundWithinBudget("no divergence below the bound".into()))?;
    let level = d.value_alpha.clone();
    let rs = &s.alpha_system;
    let mut entries = Vec::new();
    for f in fs {
        let g = s.prepared.rewrite(f)?;
        let value = rs.curvette.value(&g)?;
        if value >= level {
            return Err(Error::InSeparatingIdeal(format!("value {value} is at least {level}")));
        }
        let sf = standard_form(&g, &level, rs)?;
        let (heads, tails): (Vec<Term>, Vec<Term>) = sf.terms().cloned().partition(|(_, m)| rs.mono_value(m) == value);
        let mut roots: Vec<usize> = heads.iter().flat_map(|(_, m)| m.support().collect::<Vec<_>>()).collect();
        roots.sort();
        roots.dedup();
        let head_roots = roots
            .into_iter()
            .map(|i| Ok((i, rs.curvette.sign_of_series(&rs.roots[i].series)?)))
            .collect::<Result<_>>()?;
        let head_sign = rs.curvette.sign_of_series(&terms_series(rs, &heads))?;
        entries.push(ConnectedEntry { f: f.clone(), value, heads, tails, head_roots, head_sign });
    }
    Ok(ConnectedSetDesc { variant, level, system: rs.clone(), prepared: s.prepared.clone(), entries })
}

impl ConnectedSetDesc {
    /// Conditions failing at `delta`, each as a short sentence.
    pub fn failures(&self, delta: &Curvette) -> Result<Vec<String>> {
        let dl = self.prepared.replay(delta)?;
        let rs = &self.system;
        let mut used: Vec<usize> = self
            .entries
            .iter()
            .flat_map(|e| e.heads.iter().chain(&e.tails).flat_map(|(_, m)| m.support().collect::<Vec<_>>()))
            .collect();
        used.sort();
        used.dedup();
        let mut images: Vec<Option<TruncSeries>> = vec![None; rs.roots.len()];
        for i in used {
            images[i] = Some(dl.image(&rs.roots[i].poly)?);
        }
        let root_series = |i: usize| -> Result<TruncSeries> { Ok(images[i].clone().expect("image computed")) };
        let mono_series = |m: &Mono| -> Result<TruncSeries> {
            let mut acc = TruncSeries::constant(RatFn::one(), dl.trunc());
            for i in m.support() {
                acc = acc.mul(&root_series(i)?.pow(m.get(i)));
            }
            Ok(acc)
        };
        let value = |s: &TruncSeries| s.order().finite().cloned().ok_or_else(|| Error::ValueUnknown(s.trunc().clone()));
        let mut out = Vec::new();
        for (k, e) in self.entries.iter().enumerate() {
            let heads: Vec<TruncSeries> = e.heads.iter().map(|(_, m)| mono_series(m)).collect::<Result<_>>()?;
            let tails: Vec<TruncSeries> = e.tails.iter().map(|(_, m)| mono_series(m)).collect::<Result<_>>()?;
            for (i, sgn) in &e.head_roots {
                if dl.sign_of_series(&root_series(*i)?)? != *sgn {
                    out.push(format!("f{}: sign of {} differs", k + 1, rs.roots[*i].label));
                }
            }
            let mut h = TruncSeries::zero(dl.trunc());
            for ((c, _), s) in e.heads.iter().zip(&heads) {
                h = h.add(&s.scale(c));
            }
            let hs = dl.sign_of_series(&h)?;
            if hs != e.head_sign {
                out.push(format!("f{}: sign of the head sum differs", k + 1));
            }
            match self.variant {
                Variant::C => {
                    for (hm, hsr) in e.heads.iter().zip(&heads) {
                        for (tm, tsr) in e.tails.iter().zip(&tails) {
                            if value(hsr)? >= value(tsr)? {
                                out.push(format!(
                                    "f{}: {} does not stay below {}",
                                    k + 1,
                                    rs.render_mono(&hm.1),
                                    rs.render_mono(&tm.1)
                                ));
                            }
                        }
                    }
                }
                Variant::CPrime => {
                    let n = RatFn::from_int(e.tails.len() as i64);
                    for (tm, tsr) in e.tails.iter().zip(&tails) {
                        let ts = dl.sign_of_series(tsr)?;
                        let abs_h = if hs == Sign::Neg { h.neg() } else { h.clone() };
                        let abs_t = if ts == Sign::Neg { tsr.neg() } else { tsr.clone() };
                        let diff = abs_h.sub(&abs_t.scale(&n));
                        if dl.sign_of_series(&diff)? != Sign::Pos {
                            out.push(format!("f{}: head sum does not dominate {}", k + 1, rs.render_mono(&tm.1)));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

pub fn membership(d: &ConnectedSetDesc, delta: &Curvette) -> Result<bool> {
    Ok(d.failures(delta)?.is_empty())
}
