//! Point blowups of a plane chart following a valuation: strict and weak
//! transforms, the resolution of a separating ideal, and the chart where each
//! root's strict transform becomes a coordinate.

use std::fmt;

use num_traits::Zero;

use crate::arith::{Rat, RatFn};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::roots::System2d;
use crate::separating::{separating_generators, separating_value, CurvettePair, DivergenceKind, SepResult};
use crate::series::SeriesOrder;
use crate::valuation::Curvette;

/// Exponents searched for the companion coordinate of a root.
const GAMMA_BOUND: i64 = 12;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Branch {
    /// `y = x (y' + c0)`.
    YOverX,
    /// `x = y (x' + c0)`.
    XOverY,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::YOverX => "y/x",
            Branch::XOverY => "x/y",
        })
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct BlowStep {
    pub branch: Branch,
    pub c0: RatFn,
}

impl BlowStep {
    /// Index of the exceptional coordinate.
    pub fn divisor(&self) -> usize {
        match self.branch {
            Branch::YOverX => 0,
            Branch::XOverY => 1,
        }
    }

    pub fn other(&self) -> usize {
        1 - self.divisor()
    }

    /// Images of the old coordinates in the new ones.
    pub fn images(&self, vars: &[String]) -> Vec<Poly> {
        let e = Poly::var(vars, self.divisor());
        let o = &Poly::var(vars, self.other()) + &Poly::constant(vars, self.c0.clone());
        let mut im = vec![Poly::zero(vars), Poly::zero(vars)];
        im[self.divisor()] = e.clone();
        im[self.other()] = &e * &o;
        im
    }

    /// Applies the substitution and removes the largest power of the
    /// exceptional coordinate.
    pub fn transform_poly(&self, f: &Poly) -> Result<TransformResult> {
        let vars = f.vars().to_vec();
        if vars.len() != 2 {
            return Err(Error::ArityMismatch(format!("blowups need 2 variables, got {}", vars.len())));
        }
        let g = f.compose(&self.images(&vars), &vars)?;
        let m = g.var_multiplicity(self.divisor());
        let strict = g.div_var_pow(self.divisor(), m).expect("multiplicity divides");
        let weak_exponent = f.m_order().unwrap_or(0);
        Ok(TransformResult { strict, exceptional_multiplicity: m, weak_exponent })
    }

    /// The point in the new chart.
    pub fn transform_curvette(&self, c: &Curvette) -> Result<Curvette> {
        let s = c.series();
        let (e, o) = (self.divisor(), self.other());
        if s[e].order() == SeriesOrder::ZeroToTruncation && s[o].order() == SeriesOrder::ZeroToTruncation {
            return Err(Error::CenterEqualsPoint);
        }
        if let (SeriesOrder::Finite(ve), SeriesOrder::Finite(vo)) = (s[e].order(), s[o].order()) {
            if vo < ve {
                return Err(Error::InvariantViolation(format!(
                    "branch {} does not contain the point; use the other branch",
                    self.branch
                )));
            }
        }
        let q = s[o].div(&s[e])?;
        let mut ns = s.to_vec();
        ns[o] = q.sub(&crate::series::TruncSeries::constant(self.c0.clone(), q.trunc().clone()));
        if *ns[o].trunc() <= Rat::zero() {
            return Err(Error::TruncationExceeded("nothing left of the series after division".into()));
        }
        c.with_series(c.vars().to_vec(), ns)
    }

    fn render(&self, vars: &[String], k: usize) -> String {
        let p = "'".repeat(k);
        let (e, o) = (&vars[self.divisor()], &vars[self.other()]);
        if self.c0.is_zero() {
            format!("{o}{} = {e}{p}*{o}{p}", "'".repeat(k - 1))
        } else if self.c0.is_compound() {
            format!("{o}{} = {e}{p}*({o}{p} + ({}))", "'".repeat(k - 1), self.c0)
        } else {
            format!("{o}{} = {e}{p}*({o}{p} + {})", "'".repeat(k - 1), self.c0)
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct TransformResult {
    pub strict: Poly,
    pub exceptional_multiplicity: u32,
    /// Order of the input at the center.
    pub weak_exponent: u32,
}

/// A chart reached by a sequence of blowups, with the original coordinates
/// as polynomials in the current ones.
#[derive(Clone, PartialEq, Debug)]
pub struct Chart {
    vars: Vec<String>,
    history: Vec<BlowStep>,
    images: Vec<Poly>,
}

impl Chart {
    pub fn origin(vars: &[String]) -> Result<Self> {
        if vars.len() != 2 {
            return Err(Error::ArityMismatch(format!("charts have 2 variables, got {}", vars.len())));
        }
        let images = (0..2).map(|i| Poly::var(vars, i)).collect();
        Ok(Chart { vars: vars.to_vec(), history: Vec::new(), images })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn history(&self) -> &[BlowStep] {
        &self.history
    }

    /// Original coordinates in the current ones.
    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn last_step(&self) -> Option<&BlowStep> {
        self.history.last()
    }

    pub fn push(&self, step: BlowStep) -> Result<Chart> {
        let im = step.images(&self.vars);
        let images = self.images.iter().map(|p| p.compose(&im, &self.vars)).collect::<Result<_>>()?;
        let mut history = self.history.clone();
        history.push(step);
        Ok(Chart { vars: self.vars.clone(), history, images })
    }

    /// Total transform of a polynomial in the original coordinates.
    pub fn pull_back(&self, f: &Poly) -> Result<Poly> {
        f.compose(&self.images, &self.vars)
    }

    /// Strict transform through the whole history.
    pub fn strict_transform(&self, f: &Poly) -> Result<Poly> {
        let mut g = f.clone();
        for s in &self.history {
            g = s.transform_poly(&g)?.strict;
        }
        Ok(g)
    }

    /// One line per substitution, primes counting the steps.
    pub fn log(&self) -> Vec<String> {
        self.history.iter().enumerate().map(|(k, s)| s.render(&self.vars, k + 1)).collect()
    }
}

/// The branch and residue the point selects.
pub fn choose_step(c: &Curvette) -> Result<BlowStep> {
    let s = c.series();
    if s.len() != 2 {
        return Err(Error::ArityMismatch(format!("blowups need 2 variables, got {}", s.len())));
    }
    let (ox, oy) = (s[0].order(), s[1].order());
    for o in [&ox, &oy] {
        if let SeriesOrder::Finite(v) = o {
            if *v <= Rat::zero() {
                return Err(Error::InvariantViolation("the point is not at the chart origin".into()));
            }
        }
    }
    Ok(match (ox, oy) {
        (SeriesOrder::ZeroToTruncation, SeriesOrder::ZeroToTruncation) => return Err(Error::CenterEqualsPoint),
        (SeriesOrder::ZeroToTruncation, _) => BlowStep { branch: Branch::XOverY, c0: RatFn::zero() },
        (_, SeriesOrder::ZeroToTruncation) => BlowStep { branch: Branch::YOverX, c0: RatFn::zero() },
        (SeriesOrder::Finite(vx), SeriesOrder::Finite(vy)) => {
            if vy > vx {
                BlowStep { branch: Branch::YOverX, c0: RatFn::zero() }
            } else if vy < vx {
                BlowStep { branch: Branch::XOverY, c0: RatFn::zero() }
            } else {
                let c0 = s[1].lead().unwrap().1.checked_div(s[0].lead().unwrap().1)?;
                BlowStep { branch: Branch::YOverX, c0 }
            }
        }
    })
}

/// Blows up the chart's origin, moving to the chart containing the point.
pub fn local_blowup(ch: &Chart, c: &Curvette) -> Result<(Chart, Curvette)> {
    if c.vars() != ch.vars() {
        return Err(Error::ArityMismatch("curvette and chart variables differ".into()));
    }
    let step = choose_step(c)?;
    let c2 = step.transform_curvette(c)?;
    Ok((ch.push(step)?, c2))
}

/// Strict transform of `f`, given in the previous chart's coordinates, under
/// the chart's last substitution.
pub fn strict_transform_poly(ch: &Chart, f: &Poly) -> Result<TransformResult> {
    match ch.last_step() {
        Some(s) => s.transform_poly(f),
        None => Ok(TransformResult { strict: f.clone(), exceptional_multiplicity: 0, weak_exponent: 0 }),
    }
}

/// A point of the previous chart moved through the chart's last substitution.
pub fn strict_transform_curvette(ch: &Chart, d: &Curvette) -> Result<Curvette> {
    match ch.last_step() {
        Some(s) => s.transform_curvette(d),
        None => Ok(d.clone()),
    }
}

fn coordinate_values(c: &Curvette) -> Result<Vec<Option<Rat>>> {
    Ok(c.series().iter().map(|s| s.order().finite().cloned()).collect())
}

fn min_coordinate_value(c: &Curvette) -> Result<Rat> {
    coordinate_values(c)?.into_iter().flatten().min().ok_or(Error::CenterEqualsPoint)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Stop {
    /// The transformed separating ideal is the maximal ideal.
    Resolved,
    /// No divergence below the truncation order after `max_steps` blowups.
    MaxSteps,
    /// The two points stopped sharing a center.
    Split,
}

impl fmt::Display for Stop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stop::Resolved => "resolved",
            Stop::MaxSteps => "max-steps",
            Stop::Split => "split",
        })
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct ResolveStep {
    pub chart: Chart,
    pub alpha: Curvette,
    pub beta: Curvette,
    pub sep: SepResult,
    /// Value of the maximal ideal for alpha.
    pub maximal: Rat,
    /// Generators of the separating ideal in chart coordinates.
    pub generators: Vec<Poly>,
    /// Order of the separating ideal at the origin.
    pub ideal_order: Option<u32>,
    /// Previous value minus the previous ideal order times the value of the
    /// exceptional coordinate.
    pub predicted: Option<Rat>,
    /// Least alpha-value of the weak transforms of the previous generators.
    pub weak_min: Option<Rat>,
}

impl ResolveStep {
    pub fn value(&self) -> Option<&Rat> {
        self.sep.value_alpha()
    }

    pub fn kind(&self) -> Option<DivergenceKind> {
        self.sep.divergence.as_ref().map(|d| d.kind)
    }

    /// Prediction, weak transforms and the computed value agree.
    pub fn prediction_holds(&self) -> bool {
        match &self.predicted {
            None => true,
            Some(p) => self.value() == Some(p) && self.weak_min.as_ref() == Some(p),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Resolution {
    pub steps: Vec<ResolveStep>,
    pub stop: Stop,
}

impl Resolution {
    /// Number of blowups performed.
    pub fn blowups(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn prediction_holds(&self) -> bool {
        self.steps.iter().all(|s| s.prediction_holds())
    }
}

fn analyse(chart: Chart, alpha: Curvette, beta: Curvette, generic: bool, bound: Option<&Rat>) -> Result<ResolveStep> {
    let pair =
        if generic { CurvettePair::generic(alpha.clone())? } else { CurvettePair::new(alpha.clone(), beta.clone())? };
    let sep = separating_value(&pair, bound)?;
    let generators = separating_generators(&sep)
        .iter()
        .map(|m| sep.prepared.to_original(&sep.common.mono_poly(m)))
        .collect::<Result<Vec<_>>>()?;
    let ideal_order = generators.iter().filter_map(|g| g.m_order()).min();
    let maximal = min_coordinate_value(&alpha)?;
    Ok(ResolveStep { chart, alpha, beta, sep, maximal, generators, ideal_order, predicted: None, weak_min: None })
}

/// Blows up the common center of the pair until the separating ideal becomes
/// the maximal ideal.
pub fn resolve_pair(p: &CurvettePair, max_steps: usize) -> Result<Resolution> {
    let chart = Chart::origin(p.alpha.vars())?;
    let mut cur = analyse(chart, p.alpha.clone(), p.beta.clone(), p.generic, None)?;
    let mut steps = Vec::new();
    loop {
        let value = cur.value().cloned();
        if value.as_ref() == Some(&cur.maximal) {
            steps.push(cur);
            return Ok(Resolution { steps, stop: Stop::Resolved });
        }
        if steps.len() == max_steps {
            if value.is_some() {
                return Err(Error::StepBudgetExceeded(max_steps));
            }
            steps.push(cur);
            return Ok(Resolution { steps, stop: Stop::MaxSteps });
        }
        let step = choose_step(&cur.alpha)?;
        let split = if p.generic { !step.c0.is_constant() } else { choose_step(&cur.beta)? != step };
        if split {
            steps.push(cur);
            return Ok(Resolution { steps, stop: Stop::Split });
        }
        let e_value = coordinate_values(&cur.alpha)?[step.divisor()].clone().ok_or(Error::CenterEqualsPoint)?;
        let alpha = step.transform_curvette(&cur.alpha)?;
        let beta = if p.generic { alpha.clone() } else { step.transform_curvette(&cur.beta)? };
        let chart = cur.chart.push(step.clone())?;
        // the transformed separating value is smaller than the current one,
        // so the walk in the new chart can stop there
        let mut next = analyse(chart, alpha, beta, p.generic, value.as_ref())?;
        if let (Some(v), Some(a)) = (&value, cur.ideal_order) {
            next.predicted = Some(v - &e_value * Rat::from_integer(a.into()));
            let mut weak_min: Option<Rat> = None;
            for g in &cur.generators {
                let t = step.transform_poly(g)?;
                let extra = t.exceptional_multiplicity - a;
                let w = &t.strict * &Poly::var(g.vars(), step.divisor()).pow(extra);
                // a weak transform vanishing to the truncation order cannot be the minimum
                let SeriesOrder::Finite(wv) = next.alpha.nu_value(&w)? else { continue };
                weak_min = Some(match weak_min {
                    Some(m) if m <= wv => m,
                    _ => wv,
                });
            }
            next.weak_min = weak_min;
        }
        steps.push(cur);
        cur = next;
    }
}

/// The charts visited by a point, starting with the original one.
pub fn resolution_charts(c: &Curvette, max_steps: usize) -> Result<Vec<(Chart, Curvette)>> {
    let mut out = vec![(Chart::origin(c.vars())?, c.clone())];
    while out.len() <= max_steps {
        let (ch, cv) = out.last().unwrap();
        match local_blowup(ch, cv) {
            Ok(next) => out.push(next),
            Err(Error::TruncationExceeded(_)) | Err(Error::ValueUnknown(_)) | Err(Error::CenterEqualsPoint) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// `x^a y^b` times a remainder, with whether the remainder is a unit.
fn monomial_part(p: &Poly) -> ([u32; 2], Poly, bool) {
    let a = p.var_multiplicity(0);
    let b = p.var_multiplicity(1);
    let r = p.div_var_pow(0, a).and_then(|q| q.div_var_pow(1, b)).expect("multiplicities divide");
    let unit = !r.coeff(&vec![0, 0]).is_zero();
    ([a, b], r, unit)
}

/// Every pulled-back polynomial is a monomial times a unit at the origin.
pub fn is_locally_monomial(ch: &Chart, gs: &[Poly]) -> Result<bool> {
    for g in gs {
        let p = ch.pull_back(g)?;
        if p.is_zero() || !monomial_part(&p).2 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, PartialEq, Debug)]
pub struct ChartRow {
    pub label: String,
    /// 1-based position in the chart sequence, the original chart being 1.
    pub ell: usize,
    /// Strict transform of the root, a coordinate there.
    pub strict: Poly,
    /// Exponents of the earlier roots in the companion coordinate; `None`
    /// for the first root.
    pub gamma: Option<Vec<i64>>,
    /// Chart variable the companion coordinate equals up to a unit.
    pub companion: Option<usize>,
    /// Each earlier root as (label, exponent of companion, exponent of strict).
    pub earlier: Vec<(String, u32, u32)>,
    /// Exceptional multiplicity of the root at the first blowup.
    pub first_multiplicity: u32,
    /// Product of the alphas of the earlier roots.
    pub alpha_product: u32,
}

#[derive(Clone, PartialEq, Debug)]
pub struct ChartTable {
    pub charts: Vec<Chart>,
    pub rows: Vec<ChartRow>,
}

/// Smallest-norm integer vector `g` with `sum g_j w_j = target`.
fn search_gamma(ws: &[[u32; 2]], target: [i64; 2]) -> Option<Vec<i64>> {
    let n = ws.len();
    for norm in 0..=GAMMA_BOUND * n as i64 {
        let mut found: Option<Vec<i64>> = None;
        let mut g = vec![0i64; n];
        enumerate_norm(&mut g, 0, norm, &mut |g| {
            let s0: i64 = g.iter().zip(ws).map(|(a, w)| a * w[0] as i64).sum();
            let s1: i64 = g.iter().zip(ws).map(|(a, w)| a * w[1] as i64).sum();
            if [s0, s1] == target {
                // prefer vectors without negative entries
                let better = match &found {
                    None => true,
                    Some(f) => f.iter().any(|&x| x < 0) && g.iter().all(|&x| x >= 0),
                };
                if better {
                    found = Some(g.to_vec());
                }
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

fn enumerate_norm(g: &mut Vec<i64>, i: usize, left: i64, f: &mut dyn FnMut(&[i64])) {
    if i == g.len() {
        if left == 0 {
            f(g);
        }
        return;
    }
    if i + 1 == g.len() {
        for v in if left == 0 { vec![0] } else { vec![left, -left] } {
            if v.abs() <= GAMMA_BOUND {
                g[i] = v;
                f(g);
            }
        }
        g[i] = 0;
        return;
    }
    for a in 0..=left.min(GAMMA_BOUND) {
        for v in if a == 0 { vec![0] } else { vec![a, -a] } {
            g[i] = v;
            enumerate_norm(g, i + 1, left - a, f);
        }
    }
    g[i] = 0;
}

struct Pulled {
    exps: [u32; 2],
    unit: bool,
    strict: Poly,
}

fn linear_part(p: &Poly) -> [RatFn; 2] {
    [p.coeff(&vec![1, 0]), p.coeff(&vec![0, 1])]
}

/// `s = v * unit` for the chart variable `v`.
fn is_coordinate_times_unit(s: &Poly, v: usize) -> bool {
    match s.div_var_pow(v, 1) {
        Some(q) => !q.coeff(&vec![0, 0]).is_zero(),
        None => false,
    }
}

/// Companion exponents, companion variable and the earlier roots' exponents.
type RowData = (Option<Vec<i64>>, Option<usize>, Vec<(u32, u32)>);

fn try_row(i: usize, pulled: &[Pulled]) -> Option<RowData> {
    let s = &pulled[i].strict;
    if s.m_order() != Some(1) {
        return None;
    }
    if i == 0 {
        return Some((None, None, Vec::new()));
    }
    if pulled[..i].iter().any(|p| !p.unit) {
        return None;
    }
    let lin = linear_part(s);
    for c1 in 0..2 {
        let c2 = 1 - c1;
        // the companion and the strict transform must be independent
        if lin[c2].is_zero() {
            continue;
        }
        let s_is_c2 = is_coordinate_times_unit(s, c2);
        if pulled[..i].iter().any(|p| p.exps[c2] > 0) && !s_is_c2 {
            continue;
        }
        let ws: Vec<[u32; 2]> = pulled[..i].iter().map(|p| p.exps).collect();
        let mut target = [0i64; 2];
        target[c1] = 1;
        if let Some(g) = search_gamma(&ws, target) {
            let earlier = ws.iter().map(|w| (w[c1], w[c2])).collect();
            return Some((Some(g), Some(c1), earlier));
        }
    }
    None
}

/// For each root, the first chart after the previous root's where its strict
/// transform and a Laurent monomial in the earlier roots form a regular
/// system, with every earlier root a monomial in them times a unit.
pub fn chart_data(sys: &System2d, max_steps: usize) -> Result<ChartTable> {
    let seq = resolution_charts(&sys.curvette, max_steps)?;
    let charts: Vec<Chart> = seq.into_iter().map(|(c, _)| c).collect();
    let mut rows = Vec::new();
    let mut start = 0;
    let first = charts.get(1).map(|c| &c.history()[0]);
    for (i, r) in sys.roots.iter().enumerate() {
        let alpha_product = sys.roots[..i].iter().map(|q| q.alpha.unwrap_or(1)).product();
        let first_multiplicity = match first {
            Some(s) => s.transform_poly(&r.poly)?.exceptional_multiplicity,
            None => r.poly.m_order().unwrap_or(0),
        };
        let mut hit = None;
        for (k, ch) in charts.iter().enumerate().skip(start) {
            let pulled = sys.roots[..=i]
                .iter()
                .map(|q| {
                    let p = ch.pull_back(&q.poly)?;
                    let (exps, _, unit) = monomial_part(&p);
                    Ok(Pulled { exps, unit, strict: ch.strict_transform(&q.poly)? })
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(found) = try_row(i, &pulled) {
                hit = Some((k, found, pulled[i].strict.clone()));
                break;
            }
        }
        let Some((k, (gamma, companion, earlier), strict)) = hit else {
            return Err(Error::NotReachedWithinSteps(format!("{} within {} blowups", r.label, max_steps)));
        };
        let earlier = earlier.into_iter().zip(&sys.roots).map(|((a, b), q)| (q.label.clone(), a, b)).collect();
        rows.push(ChartRow {
            label: r.label.clone(),
            ell: k + 1,
            strict,
            gamma,
            companion,
            earlier,
            first_multiplicity,
            alpha_product,
        });
        start = k + 1;
    }
    Ok(ChartTable { charts, rows })
}

impl ChartTable {
    pub fn render_companion(&self, row: &ChartRow) -> String {
        let Some(g) = &row.gamma else { return "-".into() };
        let parts: Vec<String> = g
            .iter()
            .zip(&self.rows)
            .filter(|(a, _)| **a != 0)
            .map(|(a, r)| if *a == 1 { r.label.clone() } else { format!("{}^{}", r.label, a) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}
