//! Approximate roots of a curvette valuation, built level by level over the
//! value semigroup, plus coordinate preparation and the two-variable recursion.

mod dim2;
mod mono;
mod prepare;

pub use dim2::{alpha_prime, roots_2d, standard_exponents, Root2d, System2d, Termination2d};
pub use mono::Mono;
pub use prepare::{prepare_coordinates, prepare_coordinates_with, Prepared, Substitution};

use num_traits::Zero;

use crate::arith::{Rat, RatFn};
use crate::error::{Error, Result};
use crate::poly::{format_terms, Poly};
use crate::semigroup::Semigroup;
use crate::series::{SeriesOrder, TruncSeries};
use crate::valuation::Curvette;

#[derive(Clone, PartialEq, Debug)]
pub struct RootRecord {
    pub label: String,
    /// Roots in one inessential-predecessor chain share a family number.
    pub family: usize,
    pub poly: Poly,
    pub series: TruncSeries,
    /// The value, or a lower bound for it when `value_is_bound` is set.
    pub value: Rat,
    /// The root's image vanishes below its truncation order, so only a lower
    /// bound for the value is known. Such roots stay in Theta below that bound.
    pub value_is_bound: bool,
    /// Leading coefficient; zero when only a bound is known.
    pub lead: RatFn,
    /// Increasing in the monomial order; the first entry is `In(Q)`.
    pub expression: Vec<(RatFn, Mono)>,
    pub in_monomial: Mono,
    /// Position in the curvette's variable list, for coordinate roots.
    pub var_index: Option<usize>,
    /// Level at which the root was created; 0 for coordinates.
    pub created_at: Rat,
    pub successor: Option<usize>,
    pub predecessor: Option<usize>,
}

impl RootRecord {
    pub fn is_variable(&self) -> bool {
        self.var_index.is_some()
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Candidate {
    pub mono: Mono,
    pub lead: RatFn,
}

/// One dependency found at a level: `candidates[head] - coeff * candidates[last]`.
#[derive(Clone, PartialEq, Debug)]
pub struct Relation {
    pub head: usize,
    pub coeff: RatFn,
    pub new_root: usize,
}

#[derive(Clone, PartialEq, Debug)]
pub struct LevelRecord {
    pub gamma: Rat,
    pub lambda: Vec<usize>,
    pub psi: Vec<usize>,
    pub v: Vec<usize>,
    pub theta: Vec<usize>,
    pub candidates: Vec<Candidate>,
    pub relations: Vec<Relation>,
}

/// Flags of a root relative to the last processed level.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RootFlags {
    pub essential: bool,
    pub in_v: bool,
    pub in_theta: bool,
}

#[derive(Clone, PartialEq, Debug)]
pub struct RootSystem {
    pub curvette: Curvette,
    pub roots: Vec<RootRecord>,
    pub levels: Vec<LevelRecord>,
    /// Theta before the first level: the coordinates in value order.
    initial_theta: Vec<usize>,
}

impl RootSystem {
    /// The last processed level, 0 before any.
    pub fn level(&self) -> Rat {
        self.levels.last().map(|l| l.gamma.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn labels(&self) -> Vec<String> {
        self.roots.iter().map(|r| r.label.clone()).collect()
    }

    pub fn find(&self, label: &str) -> Option<&RootRecord> {
        self.roots.iter().find(|r| r.label == label)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.roots.iter().position(|r| r.label == label)
    }

    pub fn last_level(&self) -> Option<&LevelRecord> {
        self.levels.last()
    }

    pub fn lambda(&self) -> &[usize] {
        self.levels.last().map(|l| l.lambda.as_slice()).unwrap_or(&[])
    }

    pub fn psi(&self) -> &[usize] {
        self.levels.last().map(|l| l.psi.as_slice()).unwrap_or(&[])
    }

    pub fn v(&self) -> &[usize] {
        self.levels.last().map(|l| l.v.as_slice()).unwrap_or(&[])
    }

    pub fn theta(&self) -> &[usize] {
        self.levels.last().map(|l| l.theta.as_slice()).unwrap_or(&self.initial_theta)
    }

    /// Essential means not superseded by a successor created at or below `gamma`.
    pub fn essential_at(&self, i: usize, gamma: &Rat) -> bool {
        match self.roots[i].successor {
            Some(s) => self.roots[s].created_at > *gamma,
            None => true,
        }
    }

    pub fn flags(&self, i: usize) -> RootFlags {
        RootFlags {
            essential: self.essential_at(i, &self.level()),
            in_v: self.v().contains(&i),
            in_theta: self.theta().contains(&i),
        }
    }

    pub fn mono_value(&self, m: &Mono) -> Rat {
        m.support().map(|i| &self.roots[i].value * Rat::from_integer(m.get(i).into())).sum()
    }

    pub fn mono_lead(&self, m: &Mono) -> RatFn {
        let mut acc = RatFn::one();
        for i in m.support() {
            acc = &acc * &self.roots[i].lead.pow(m.get(i));
        }
        acc
    }

    pub fn mono_poly(&self, m: &Mono) -> Poly {
        let mut acc = Poly::one(self.curvette.vars());
        for i in m.support() {
            acc = &acc * &self.roots[i].poly.pow(m.get(i));
        }
        acc
    }

    pub fn mono_series(&self, m: &Mono) -> TruncSeries {
        let mut acc: Option<TruncSeries> = None;
        for i in m.support() {
            let p = self.roots[i].series.pow(m.get(i));
            acc = Some(match acc {
                None => p,
                Some(a) => a.mul(&p),
            });
        }
        acc.unwrap_or_else(|| TruncSeries::constant(RatFn::one(), self.curvette.trunc()))
    }

    pub fn render_mono(&self, m: &Mono) -> String {
        m.render(&self.labels())
    }

    /// `y*Q4 - ((2*u - 1)/(u + 1))*x*Q5`.
    pub fn render_expression(&self, e: &[(RatFn, Mono)]) -> String {
        let labels = self.labels();
        format_terms(e.iter().map(|(c, m)| (c.clone(), m.render(&labels))))
    }

    /// The polynomial in display order given by the coordinate values.
    pub fn render_poly(&self, p: &Poly) -> String {
        match self.curvette.coordinate_values() {
            Ok(w) => p.display_weighted(&w),
            Err(_) => p.to_string(),
        }
    }

    /// Monomials over the roots `v` of value exactly `b`, in lex order.
    pub fn monomials_of_value(&self, v: &[usize], b: &Rat) -> Vec<Mono> {
        fn go(rs: &RootSystem, v: &[usize], k: usize, cur: Mono, rest: Rat, out: &mut Vec<Mono>) {
            if rest.is_zero() {
                out.push(cur);
                return;
            }
            if k == v.len() {
                return;
            }
            let val = &rs.roots[v[k]].value;
            let mut e = 0u32;
            let mut r = rest;
            while r >= Rat::zero() {
                go(rs, v, k + 1, cur.with(v[k], e), r.clone(), out);
                r -= val;
                e += 1;
            }
        }
        let mut out = Vec::new();
        go(self, v, 0, Mono::one(), b.clone(), &mut out);
        out.sort();
        out
    }

    /// Roots whose value is known and at most `b`.
    pub fn roots_up_to_value(&self, b: &Rat) -> Vec<usize> {
        (0..self.roots.len()).filter(|&i| !self.roots[i].value_is_bound && self.roots[i].value <= *b).collect()
    }

    /// Values of the coordinates in variable order.
    pub fn variable_roots(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.roots.len()).filter(|&i| self.roots[i].is_variable()).collect();
        v.sort_by_key(|&i| self.roots[i].var_index);
        v
    }
}

/// Incremental construction; each [`RootBuilder::step`] processes one level.
#[derive(Clone, Debug)]
pub struct RootBuilder {
    sys: RootSystem,
    lambda: Vec<usize>,
    theta: Vec<usize>,
    next_family: usize,
}

impl RootBuilder {
    /// Starts from a prepared curvette; coordinates are ordered by value.
    pub fn new(c: &Curvette) -> Result<Self> {
        let trunc = c.trunc();
        let mut order: Vec<(Rat, usize)> = Vec::new();
        let mut vanishing = Vec::new();
        for (j, s) in c.series().iter().enumerate() {
            match s.order() {
                SeriesOrder::Finite(v) => order.push((v, j)),
                // kept with its truncation order as a lower bound
                SeriesOrder::ZeroToTruncation => vanishing.push(j),
            }
        }
        if order.is_empty() {
            return Err(Error::TruncationExceeded(format!("every coordinate vanishes to order {trunc}")));
        }
        order.sort();
        let vars = c.vars().to_vec();
        let mut roots = Vec::new();
        for (k, (v, j)) in order.iter().enumerate() {
            let s = &c.series()[*j];
            roots.push(RootRecord {
                label: vars[*j].clone(),
                family: k + 1,
                poly: Poly::var(&vars, *j),
                series: s.clone(),
                value: v.clone(),
                value_is_bound: false,
                lead: s.lead().unwrap().1.clone(),
                expression: vec![(RatFn::one(), Mono::single(k))],
                in_monomial: Mono::single(k),
                var_index: Some(*j),
                created_at: Rat::zero(),
                successor: None,
                predecessor: None,
            });
        }
        for j in vanishing {
            let k = roots.len();
            let s = &c.series()[j];
            roots.push(RootRecord {
                label: vars[j].clone(),
                family: k + 1,
                poly: Poly::var(&vars, j),
                series: s.clone(),
                value: s.trunc().clone(),
                value_is_bound: true,
                lead: RatFn::one(),
                expression: vec![(RatFn::one(), Mono::single(k))],
                in_monomial: Mono::single(k),
                var_index: Some(j),
                created_at: Rat::zero(),
                successor: None,
                predecessor: None,
            });
        }
        let n = roots.len();
        let theta: Vec<usize> = (0..n).collect();
        Ok(RootBuilder {
            sys: RootSystem { curvette: c.clone(), roots, levels: Vec::new(), initial_theta: theta.clone() },
            lambda: Vec::new(),
            theta,
            next_family: n + 1,
        })
    }

    pub fn system(&self) -> &RootSystem {
        &self.sys
    }

    pub fn into_system(self) -> RootSystem {
        self.sys
    }

    /// The next element of the semigroup generated by all root values.
    pub fn next_level(&self) -> Rat {
        let vals = self.sys.roots.iter().filter(|r| !r.value_is_bound).map(|r| r.value.clone());
        let sg = Semigroup::new(vals).expect("positive root values");
        sg.next_after(&self.sys.level())
    }

    /// Monomials over `v` of value exactly `gamma` avoiding `excl`.
    fn monomials_of_value(&self, v: &[usize], gamma: &Rat, excl: &[Mono]) -> Vec<Mono> {
        let mut out = self.sys.monomials_of_value(v, gamma);
        out.retain(|m| !excl.iter().any(|e| e.divides(m)));
        out
    }

    /// Processes the next level and returns its record.
    pub fn step(&mut self) -> Result<&LevelRecord> {
        let gamma = self.next_level();
        let trunc = self.sys.curvette.trunc();
        if gamma >= trunc {
            return Err(Error::TruncationExceeded(format!("level {gamma} is not below the truncation order {trunc}")));
        }
        let roots = &self.sys.roots;

        let mut lambda = self.lambda.clone();
        lambda.extend(self.theta.iter().filter(|&&i| roots[i].value < gamma));
        let psi: Vec<usize> =
            lambda.iter().copied().filter(|&i| roots[i].successor.is_none_or(|s| !lambda.contains(&s))).collect();
        let mut v: Vec<usize> = Vec::new();
        for &i in &psi {
            let spanned = !v.is_empty()
                && Semigroup::new(v.iter().map(|&j| roots[j].value.clone())).unwrap().contains(&roots[i].value);
            if !spanned {
                v.push(i);
            }
        }
        let excl: Vec<Mono> = roots.iter().filter(|r| !r.is_variable()).map(|r| r.in_monomial.clone()).collect();
        let mut monos = self.monomials_of_value(&v, &gamma, &excl);
        monos.extend(self.theta.iter().filter(|&&i| roots[i].value == gamma).map(|&i| Mono::single(i)));
        monos.sort();
        let candidates: Vec<Candidate> =
            monos.into_iter().map(|m| Candidate { lead: self.sys.mono_lead(&m), mono: m }).collect();

        // Graded pieces are one-dimensional here, so the last candidate spans and
        // every earlier one is a multiple of it. Relations come out with the
        // largest dependent index first.
        let mut pending = Vec::new();
        if let Some(last) = candidates.last() {
            for i in (0..candidates.len() - 1).rev() {
                let c = candidates[i].lead.checked_div(&last.lead)?;
                pending.push((i, c));
            }
        }

        // New families are numbered in increasing order of their initial monomial.
        let mut fresh: Vec<usize> = pending
            .iter()
            .map(|(i, _)| *i)
            .filter(|&i| self.theta_root_of(&candidates[i].mono, &gamma).is_none())
            .collect();
        fresh.sort();
        let families: Vec<(usize, usize)> = fresh.iter().enumerate().map(|(k, &i)| (i, self.next_family + k)).collect();
        self.next_family += fresh.len();

        let mut relations = Vec::new();
        let mut created = Vec::new();
        for (i, c) in pending {
            let head = &candidates[i].mono;
            let last = &candidates[candidates.len() - 1].mono;
            let tail_series = self.sys.mono_series(last).scale(&c);
            let tail_poly = self.sys.mono_poly(last).scale(&c);
            let (expression, poly, series, family, pred) = match self.theta_root_of(head, &gamma) {
                Some(q) => {
                    let r = &self.sys.roots[q];
                    let mut ex = r.expression.clone();
                    ex.push((-&c, last.clone()));
                    (ex, &r.poly - &tail_poly, r.series.sub(&tail_series), r.family, Some(q))
                }
                None => {
                    let ex = vec![(RatFn::one(), head.clone()), (-&c, last.clone())];
                    let poly = &self.sys.mono_poly(head) - &tail_poly;
                    let series = self.sys.mono_series(head).sub(&tail_series);
                    let f = families.iter().find(|(h, _)| *h == i).unwrap().1;
                    (ex, poly, series, f, None)
                }
            };
            let (value, lead, bound) = match series.lead() {
                Some((e, l)) => (e.clone(), l.clone(), false),
                None => (series.trunc().clone(), RatFn::zero(), true),
            };
            if value <= gamma {
                return Err(Error::Internal(format!("new root of value {value} at level {gamma}")));
            }
            let idx = self.sys.roots.len();
            if let Some(q) = pred {
                self.sys.roots[q].successor = Some(idx);
            }
            self.sys.roots.push(RootRecord {
                label: String::new(),
                family,
                poly,
                series,
                value,
                value_is_bound: bound,
                lead,
                in_monomial: expression[0].1.clone(),
                expression,
                var_index: None,
                created_at: gamma.clone(),
                successor: None,
                predecessor: pred,
            });
            relations.push(Relation { head: i, coeff: c, new_root: idx });
            created.push(idx);
        }

        let roots = &self.sys.roots;
        let mut theta: Vec<usize> = self.theta.iter().copied().filter(|&i| roots[i].value >= gamma).collect();
        theta.extend(created);
        debug_assert!(lambda.iter().all(|&i| roots[i].value < gamma));
        debug_assert!(theta.iter().all(|&i| roots[i].value >= gamma));
        self.lambda = lambda.clone();
        self.theta = theta.clone();
        self.sys.levels.push(LevelRecord { gamma, lambda, psi, v, theta, candidates, relations });
        self.relabel();
        Ok(self.sys.levels.last().unwrap())
    }

    fn theta_root_of(&self, m: &Mono, gamma: &Rat) -> Option<usize> {
        let i = m.support().next()?;
        (m.degree() == 1 && self.theta.contains(&i) && self.sys.roots[i].value == *gamma).then_some(i)
    }

    fn relabel(&mut self) {
        let n = self.sys.roots.len();
        for i in 0..n {
            if self.sys.roots[i].is_variable() {
                continue;
            }
            let f = self.sys.roots[i].family;
            let chain = self.sys.roots.iter().filter(|r| r.family == f).count() > 1;
            self.sys.roots[i].label =
                if chain { format!("Q{f}^({})", self.sys.roots[i].created_at) } else { format!("Q{f}") };
        }
    }

    /// Processes every level up to and including `level`.
    pub fn run_to(&mut self, level: &Rat) -> Result<()> {
        while self.next_level() <= *level {
            self.step()?;
        }
        Ok(())
    }
}

/// Root system through every semigroup level not exceeding `level`.
pub fn roots_up_to(c: &Curvette, level: &Rat) -> Result<RootSystem> {
    let mut b = RootBuilder::new(c)?;
    b.run_to(level)?;
    Ok(b.into_system())
}

/// Essential flags at level `gamma`.
pub fn classify_essential(rs: &RootSystem, gamma: &Rat) -> Vec<bool> {
    (0..rs.roots.len()).map(|i| rs.essential_at(i, gamma)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat_int, UPoly};
    use crate::valuation::tests::ajm_curvette;

    #[test]
    fn ajm_first_roots() {
        let c = ajm_curvette(64);
        let rs = roots_up_to(&c, &rat_int(37)).unwrap();
        let v = c.vars().to_vec();
        let (x, y, z) = (Poly::var(&v, 0), Poly::var(&v, 1), Poly::var(&v, 2));
        let q4 = rs.find("Q4").unwrap();
        assert_eq!(q4.poly, &(&y * &y) - &(&x * &z));
        assert_eq!(q4.value, rat_int(21));
        assert_eq!(q4.lead, RatFn::from_poly(UPoly::from_ints(&[-1, 2])));
        let q5 = rs.find("Q5").unwrap();
        assert_eq!(q5.poly, &(&y * &z) - &x.pow(4));
        assert_eq!(q5.value, rat_int(25));
        let q6 = rs.find("Q6").unwrap();
        assert_eq!(q6.poly, &(&z * &z) - &(&x.pow(3) * &y));
        assert_eq!(q6.value, rat_int(29));
        assert_eq!(q6.lead, RatFn::from_poly(UPoly::from_ints(&[2, -1])));
        let q7 = rs.find("Q7^(31)").unwrap();
        assert_eq!(q7.value, rat_int(32));
        assert_eq!(rs.render_expression(&q7.expression), "y*Q4 - ((2*u - 1)/(u + 1))*x*Q5");
        assert_eq!(rs.find("Q7^(32)").unwrap().value, rat_int(33));
        assert_eq!(
            rs.render_expression(&rs.find("Q8^(35)").unwrap().expression[..2]),
            "z*Q4 + ((2*u - 1)/(u - 2))*x*Q6"
        );
        // the chain ends in an element vanishing on the curve
        let last = rs.find("Q7^(36)").unwrap();
        assert!(last.value_is_bound);
        assert!(c.nu_value(&last.poly).unwrap() == SeriesOrder::ZeroToTruncation);
        assert!(!rs.flags(rs.index_of("Q7^(31)").unwrap()).essential);
        for l in ["Q7^(33)", "Q7^(34)", "Q7^(35)", "Q8^(35)", "Q9^(35)"] {
            assert!(rs.find(l).is_some(), "{l} missing: {:?}", rs.labels());
        }
        for i in rs.variable_roots() {
            assert!(rs.flags(i).essential);
        }
    }

    #[test]
    fn cusp_relation_at_six() {
        let vars: Vec<String> = vec!["x".into(), "y".into()];
        let n = rat_int(30);
        let x = TruncSeries::monomial(RatFn::one(), rat_int(2), n.clone());
        let y = TruncSeries::monomial(RatFn::one(), rat_int(3), n);
        let c = Curvette::new(vars, vec![x, y], crate::ParamAssumption::free(), crate::Sign::Pos).unwrap();
        let mut b = RootBuilder::new(&c).unwrap();
        b.run_to(&rat_int(5)).unwrap();
        assert_eq!(b.system().roots.len(), 2);
        b.run_to(&rat_int(6)).unwrap();
        let q3 = &b.system().roots[2];
        assert_eq!(q3.poly.to_string(), "y^2 - x^3");
        assert!(q3.value_is_bound);
        assert_eq!(b.run_to(&rat_int(30)).unwrap_err().code(), "truncation-exceeded");
    }
}
