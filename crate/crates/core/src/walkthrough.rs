//! End-to-end reproduction of the running example
//! x = t^6, y = t^10 + u t^11, z = t^14 + t^15 with u > 2.
//!
//! Every golden value is recomputed and compared; a report with any failed
//! check turns into [`Error::Mismatch`] through [`Report::into_result`].

use std::fmt::Write as _;

use crate::arith::{rat_int, Rat, RatFn, UPoly};
use crate::error::{Error, Result};
use crate::linalg::det;
use crate::poly::Poly;
use crate::roots::{roots_up_to, RootSystem};
use crate::semigroup::Semigroup;
use crate::separating::{separating_value, CurvettePair, DivergenceKind};
use crate::session::{parse_session, AJM_SESSION};
use crate::standard_form::standard_form;
use crate::valuation::Curvette;

/// Roots are built through this level; the last chain needs values up to 35.
pub const ROOT_LEVEL: i64 = 37;

#[derive(Clone, PartialEq, Debug)]
pub struct Check {
    pub group: &'static str,
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Report {
    pub trunc: i64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn into_result(self) -> Result<Report> {
        if self.passed() {
            return Ok(self);
        }
        let names: Vec<String> = self.failures().iter().map(|c| format!("{}: {}", c.group, c.name)).collect();
        Err(Error::Mismatch(names.join("; ")))
    }

    pub fn render(&self) -> String {
        let mut s = format!("walkthrough at truncation {}\n", self.trunc);
        let mut group = "";
        for c in &self.checks {
            if c.group != group {
                group = c.group;
                let _ = writeln!(s, "\n[{group}]");
            }
            let mark = if c.pass { "ok  " } else { "FAIL" };
            let _ = writeln!(s, "{mark} {} = {}", c.name, c.actual);
            if !c.pass {
                let _ = writeln!(s, "     expected {}", c.expected);
            }
        }
        let n = self.checks.len();
        let bad = self.failures().len();
        let _ = writeln!(s, "\n{} of {n} checks passed", n - bad);
        s
    }
}

struct Acc {
    group: &'static str,
    checks: Vec<Check>,
}

impl Acc {
    fn eq(&mut self, name: impl Into<String>, expected: impl ToString, actual: impl ToString) {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        let pass = expected == actual;
        self.checks.push(Check { group: self.group, name: name.into(), expected, actual, pass });
    }

    fn holds(&mut self, name: impl Into<String>, actual: impl ToString, pass: bool) {
        let actual = actual.to_string();
        self.checks.push(Check { group: self.group, name: name.into(), expected: "holds".into(), actual, pass });
    }
}

fn lin(c0: i64, c1: i64) -> RatFn {
    RatFn::from_poly(UPoly::from_ints(&[c0, c1]))
}

fn root_checks(acc: &mut Acc, rs: &RootSystem) {
    acc.group = "approximate roots";
    let v = rs.curvette.vars();
    let (x, y, z) = (Poly::var(v, 0), Poly::var(v, 1), Poly::var(v, 2));
    let golden = [
        ("Q4", &(&y * &y) - &(&x * &z), 21, lin(-1, 2)),
        ("Q5", &(&y * &z) - &x.pow(4), 25, lin(1, 1)),
        ("Q6", &(&z * &z) - &(&x.pow(3) * &y), 29, lin(2, -1)),
    ];
    for (label, poly, value, lead) in golden {
        match rs.find(label) {
            Some(r) => {
                acc.eq(label.to_string(), &poly, &r.poly);
                acc.eq(format!("nu({label})"), value, &r.value);
                acc.eq(format!("lead({label})"), &lead, &r.lead);
            }
            None => acc.eq(label.to_string(), &poly, "missing"),
        }
    }
    for (label, value) in [("Q7^(31)", 32), ("Q7^(32)", 33)] {
        let actual = rs.find(label).map_or_else(|| "missing".to_string(), |r| r.value.to_string());
        acc.eq(format!("nu({label})"), value, actual);
    }
    let ex = rs.find("Q7^(31)").map_or_else(|| "missing".into(), |r| rs.render_expression(&r.expression));
    acc.eq("Ex(Q7^(31))", "y*Q4 - ((2*u - 1)/(u + 1))*x*Q5", ex);

    acc.group = "syzygy";
    let [q4, q5, q6] = [&golden_poly(rs, "Q4"), &golden_poly(rs, "Q5"), &golden_poly(rs, "Q6")];
    let syz = &(&(&x * q6) - &(&y * q5)) + &(&z * q4);
    acc.holds("x*Q6 - y*Q5 + z*Q4", &syz, syz.is_zero());
}

fn golden_poly(rs: &RootSystem, label: &str) -> Poly {
    rs.find(label).map_or_else(|| Poly::var(rs.curvette.vars(), 0), |r| r.poly.clone())
}

fn semigroup_checks(acc: &mut Acc, rs: &RootSystem) -> Result<()> {
    acc.group = "semigroup";
    let gens: Vec<Rat> =
        ["x", "y", "z", "Q4", "Q5", "Q6"].iter().filter_map(|l| rs.find(l)).map(|r| r.value.clone()).collect();
    let g = Semigroup::new(gens)?;
    let e = g.enumerate(11);
    acc.eq("8th element", 21, &e[7]);
    acc.eq("11th element", 25, &e[10]);
    Ok(())
}

fn standard_form_checks(acc: &mut Acc, rs: &RootSystem) -> Result<()> {
    acc.group = "standard form of x^3 + y^3 + z^3";
    let v = rs.curvette.vars();
    let f = &(&Poly::var(v, 0).pow(3) + &Poly::var(v, 1).pow(3)) + &Poly::var(v, 2).pow(3);
    let sf = standard_form(&f, &rat_int(31), rs)?;
    let step = sf.steps.first().map_or_else(|| "none".into(), |s| rs.render_expression(&s.result));
    acc.eq("intermediate step at level 31", "x^3 + x*y*z + y*Q4 + z^3", step);
    acc.eq("level 31", "x^3 + x^5 + y*Q4 + x*Q5 + z^3", sf.render(rs));
    let vals: Vec<String> = sf.values(rs).iter().map(|r| r.to_string()).collect();
    acc.eq("term values", "18 30 31 31 42", vals.join(" "));
    acc.holds("expansion equals f", sf.expand(rs), sf.expand(rs) == f);
    Ok(())
}

fn separation_checks(acc: &mut Acc, c: &Curvette) -> Result<()> {
    acc.group = "separating value";
    let generic = CurvettePair::auto(c.clone(), c.clone())?;
    let s = separating_value(&generic, None)?;
    match &s.divergence {
        Some(d) => {
            acc.eq("symbolic pair, u in (2, inf)", 31, &d.value_alpha);
            acc.eq("symbolic pair kind", DivergenceKind::SignOrderMismatch, d.kind);
        }
        None => acc.eq("symbolic pair, u in (2, inf)", 31, "no divergence"),
    }
    let pair = CurvettePair::new(c.specialize(&rat_int(3))?, c.specialize(&rat_int(4))?)?;
    let s = separating_value(&pair, None)?;
    let Some(d) = &s.divergence else {
        acc.eq("u = 3 against u = 4", 31, "no divergence");
        return Ok(());
    };
    acc.eq("u = 3 against u = 4", 31, &d.value_alpha);
    acc.eq("exact pair kind", DivergenceKind::SignOrderMismatch, d.kind);
    let m = det(&[d.leads_alpha.clone(), d.leads_beta.clone()]);
    acc.holds("2x2 lead matrix is non-singular", format!("det = {m}"), !m.is_zero());

    acc.group = "divergence of Q7";
    match &d.next_roots {
        Some((qa, qb)) => acc.holds("Q7 at u = 3 differs from Q7 at u = 4", format!("{qa} | {qb}"), qa != qb),
        None => acc.holds("Q7 at u = 3 differs from Q7 at u = 4", "no roots", false),
    }
    Ok(())
}

/// Runs every check against the bundled session. `trunc` overrides the
/// session's truncation order.
pub fn run_walkthrough(trunc: Option<i64>) -> Result<Report> {
    let session = parse_session(AJM_SESSION)?;
    let n = session.truncation(trunc);
    let c = session.curvette(None, trunc)?;
    let rs = roots_up_to(&c, &rat_int(ROOT_LEVEL))?;
    let mut acc = Acc { group: "", checks: Vec::new() };
    root_checks(&mut acc, &rs);
    semigroup_checks(&mut acc, &rs)?;
    standard_form_checks(&mut acc, &rs)?;
    separation_checks(&mut acc, &c)?;
    Ok(Report { trunc: n, checks: acc.checks })
}
