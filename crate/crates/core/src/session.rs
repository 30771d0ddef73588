//! Session files: curvette definitions, parameter assumptions and the
//! truncation order, plus the expression parser shared with polynomial input.
//!
//! ```text
//! # the running example
//! trunc 64
//! assume u > 2
//! x = t^6
//! y = t^10 + u*t^11
//! z = t^14 + t^15
//!
//! [beta]
//! assume u = 4
//! ```
//!
//! Lines before the first `[name]` header form the section `main`; every
//! later section starts from a copy of it. Within a section the last
//! `assume` about `u` wins.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::arith::ParamAssumption;
use crate::arith::{parse_rat, Rat, RatFn, Sign};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::series::TruncSeries;
use crate::valuation::Curvette;

pub const DEFAULT_TRUNC: i64 = 64;

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col, msg: msg.into() }
}

fn lex(s: &str, line: usize, col0: usize) -> Result<Vec<(usize, Tok)>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push((col, Tok::Num(cs[st..i].iter().collect())));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push((col, Tok::Ident(cs[st..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((col, Tok::Op(c)));
            i += 1;
        } else {
            return Err(syntax(line, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// What an expression evaluates into.
trait Algebra: Sized + Clone {
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn as_constant(&self) -> Option<RatFn>;
    /// Power by a rational; `None` when not defined for this value.
    fn pow_rat(&self, e: &Rat) -> Option<Self>;
}

/// Finite sums of `c * t^e` with rational `e`.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct TSum(pub BTreeMap<Rat, RatFn>);

impl TSum {
    fn mono(e: Rat, c: RatFn) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c);
        }
        TSum(m)
    }

    pub fn to_series(&self, trunc: &Rat) -> TruncSeries {
        TruncSeries::new(self.0.iter().map(|(e, c)| (e.clone(), c.clone())), trunc.clone())
    }
}

impl TSum {
    fn constant(c: RatFn) -> Self {
        Self::mono(Rat::zero(), c)
    }
}

impl Algebra for TSum {
    fn add(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (e, c) in &o.0 {
            let s = m.get(e).map_or_else(|| c.clone(), |a| a + c);
            if s.is_zero() {
                m.remove(e);
            } else {
                m.insert(e.clone(), s);
            }
        }
        TSum(m)
    }
    fn mul(&self, o: &Self) -> Self {
        let mut acc = TSum::default();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                acc = acc.add(&Self::mono(e1 + e2, c1 * c2));
            }
        }
        acc
    }
    fn neg(&self) -> Self {
        TSum(self.0.iter().map(|(e, c)| (e.clone(), -c)).collect())
    }
    fn as_constant(&self) -> Option<RatFn> {
        match self.0.len() {
            0 => Some(RatFn::zero()),
            1 => self.0.get(&Rat::zero()).cloned(),
            _ => None,
        }
    }
    fn pow_rat(&self, e: &Rat) -> Option<Self> {
        if e.is_integer() && !e.is_negative() {
            let k: u32 = e.to_integer().try_into().ok()?;
            let mut acc = Self::constant(RatFn::one());
            for _ in 0..k {
                acc = acc.mul(self);
            }
            return Some(acc);
        }
        // fractional or negative powers only of a bare power of t
        if self.0.len() == 1 {
            let (a, c) = self.0.iter().next().unwrap();
            if c.is_one() {
                return Some(Self::mono(a * e, RatFn::one()));
            }
        }
        None
    }
}

impl Algebra for Poly {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn as_constant(&self) -> Option<RatFn> {
        if self.is_zero() {
            return Some(RatFn::zero());
        }
        let z = vec![0; self.vars().len()];
        (self.nterms() == 1).then(|| self.coeff(&z)).filter(|c| !c.is_zero())
    }
    fn pow_rat(&self, e: &Rat) -> Option<Self> {
        if e.is_integer() && !e.is_negative() {
            Some(self.pow(e.to_integer().try_into().ok()?))
        } else {
            None
        }
    }
}

struct Parser<'a, A: Algebra> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    line: usize,
    end_col: usize,
    atom: &'a dyn Fn(&str) -> Option<A>,
    konst: &'a dyn Fn(RatFn) -> A,
}

impl<A: Algebra> Parser<'_, A> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        syntax(self.line, self.col(), msg)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<A> {
        let mut acc = if self.eat('-') { self.term()?.neg() } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.add(&self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<A> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.peek() == Some(&Tok::Op('/')) {
                let col = self.col();
                self.pos += 1;
                let d = self.power()?;
                let c = d.as_constant().ok_or_else(|| syntax(self.line, col, "can only divide by a constant"))?;
                let inv = c.inv().map_err(|_| syntax(self.line, col, "division by zero"))?;
                acc = acc.mul(&(self.konst)(inv));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<A> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let col = self.col();
        let e = self.exponent()?;
        base.pow_rat(&e).ok_or_else(|| syntax(self.line, col, format!("exponent {e} is not allowed here")))
    }

    /// `n`, `-n`, `(p/q)` or `(-p/q)`.
    fn exponent(&mut self) -> Result<Rat> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let col = self.col();
        let Some(Tok::Num(n)) = self.peek().cloned() else { return Err(self.err("malformed exponent")) };
        self.pos += 1;
        let mut text = n;
        if paren && self.eat('/') {
            let Some(Tok::Num(d)) = self.peek().cloned() else { return Err(self.err("malformed exponent")) };
            self.pos += 1;
            text = format!("{text}/{d}");
        }
        if paren && !self.eat(')') {
            return Err(self.err("expected `)`"));
        }
        let e = parse_rat(&text).ok_or_else(|| syntax(self.line, col, "malformed exponent"))?;
        Ok(if neg { -e } else { e })
    }

    fn atom(&mut self) -> Result<A> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok((self.konst)(RatFn::from_rat(parse_rat(&n).unwrap())))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "u" {
                    return Ok((self.konst)(RatFn::u()));
                }
                (self.atom)(&name).ok_or(Error::UnknownVariable { name, line: self.line, col })
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(v)
            }
            Some(Tok::Op(c)) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

fn parse_with<A: Algebra>(
    text: &str,
    line: usize,
    col0: usize,
    atom: &dyn Fn(&str) -> Option<A>,
    konst: &dyn Fn(RatFn) -> A,
) -> Result<A> {
    let toks = lex(text, line, col0)?;
    let end_col = col0 + text.chars().count();
    let mut p = Parser { toks, pos: 0, line, end_col, atom, konst };
    let v = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.err("unexpected input after the expression"));
    }
    Ok(v)
}

/// Parses a sum of `c * t^e` terms with coefficients in Q(u).
pub fn parse_series_expr(text: &str, line: usize, col0: usize) -> Result<TSum> {
    let t = |name: &str| (name == "t").then(|| TSum::mono(Rat::one(), RatFn::one()));
    parse_with(text, line, col0, &t, &TSum::constant)
}

/// Parses a polynomial in `vars` with coefficients in Q(u).
pub fn parse_poly(text: &str, vars: &[String]) -> Result<Poly> {
    parse_poly_at(text, vars, 1, 1)
}

pub fn parse_poly_at(text: &str, vars: &[String], line: usize, col0: usize) -> Result<Poly> {
    let atom = |name: &str| Poly::var_named(vars, name);
    let konst = |c: RatFn| Poly::constant(vars, c);
    parse_with(text, line, col0, &atom, &konst)
}

#[derive(Clone, PartialEq, Debug)]
pub struct Section {
    pub name: String,
    /// Coordinates in order of first definition.
    pub coords: Vec<(String, TSum)>,
    pub param: ParamAssumption,
    pub t_sign: Sign,
}

#[derive(Clone, PartialEq, Debug)]
pub struct SessionConfig {
    pub sections: Vec<Section>,
    /// From a `trunc` line, if any.
    pub trunc: Option<i64>,
}

impl SessionConfig {
    pub fn section(&self, name: Option<&str>) -> Result<&Section> {
        let name = name.unwrap_or("main");
        self.sections
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::InvariantViolation(format!("no section [{name}]")))
    }

    /// Truncation order with precedence command line, file, default.
    pub fn truncation(&self, cli: Option<i64>) -> i64 {
        cli.or(self.trunc).unwrap_or(DEFAULT_TRUNC)
    }

    pub fn curvette(&self, name: Option<&str>, cli_trunc: Option<i64>) -> Result<Curvette> {
        let s = self.section(name)?;
        s.curvette(self.truncation(cli_trunc))
    }
}

impl Section {
    pub fn vars(&self) -> Vec<String> {
        self.coords.iter().map(|(v, _)| v.clone()).collect()
    }

    pub fn curvette(&self, trunc: i64) -> Result<Curvette> {
        if self.coords.is_empty() {
            return Err(Error::InvariantViolation(format!("section [{}] defines no coordinates", self.name)));
        }
        let n = Rat::from_integer(trunc.into());
        let series = self.coords.iter().map(|(_, s)| s.to_series(&n)).collect();
        let c = Curvette::new(self.vars(), series, self.param.clone(), self.t_sign)?;
        // an exact parameter value is substituted right away
        match self.param.exact_value() {
            Some(x) => c.specialize(x),
            None => Ok(c),
        }
    }
}

/// Bound on `u` from `u > q`, `u < q`, `q < u`, `q > u`.
fn parse_assume(rest: &str, line: usize, col0: usize, sec: &mut Section) -> Result<()> {
    let toks: Vec<&str> = rest.split_whitespace().collect();
    let bad = || syntax(line, col0, format!("cannot read assumption `{}`", rest.trim()));
    let num = |s: &str| parse_rat(s).ok_or_else(bad);
    match toks.as_slice() {
        ["t", op, "0"] => {
            sec.t_sign = match *op {
                ">" => Sign::Pos,
                "<" => Sign::Neg,
                _ => return Err(bad()),
            }
        }
        ["u", "=", q] => sec.param = ParamAssumption::Exact(num(q)?),
        ["u", ">", q] | [q, "<", "u"] => sec.param = ParamAssumption::interval(Some(num(q)?), None)?,
        ["u", "<", q] | [q, ">", "u"] => sec.param = ParamAssumption::interval(None, Some(num(q)?))?,
        [a, "<", "u", "<", b] => sec.param = ParamAssumption::interval(Some(num(a)?), Some(num(b)?))?,
        _ => return Err(bad()),
    }
    Ok(())
}

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses a session file.
pub fn parse_session(text: &str) -> Result<SessionConfig> {
    let mut main =
        Section { name: "main".into(), coords: Vec::new(), param: ParamAssumption::free(), t_sign: Sign::Pos };
    let mut sections: Vec<Section> = Vec::new();
    let mut trunc = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col0 = body.len() - body.trim_start().len() + 1;
        if let Some(h) = trimmed.strip_prefix('[') {
            let name = h.strip_suffix(']').ok_or_else(|| syntax(line, col0, "expected `]`"))?.trim();
            if !valid_name(name) || name == "main" {
                return Err(syntax(line, col0 + 1, format!("bad section name `{name}`")));
            }
            if sections.iter().any(|s| s.name == name) {
                return Err(Error::InvariantViolation(format!("section [{name}] defined twice")));
            }
            let mut s = main.clone();
            s.name = name.to_string();
            sections.push(s);
            continue;
        }
        let cur = sections.last_mut().unwrap_or(&mut main);
        if let Some(rest) = trimmed.strip_prefix("trunc ") {
            let n: i64 = rest.trim().parse().map_err(|_| syntax(line, col0 + 6, "expected an integer"))?;
            if n < 2 {
                return Err(Error::InvariantViolation(format!("truncation order {n} is too small")));
            }
            trunc = Some(n);
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("assume ") {
            parse_assume(rest, line, col0 + 7, cur)?;
            continue;
        }
        let Some((lhs, rhs)) = body.split_once('=') else {
            return Err(syntax(line, col0, "expected `name = expression`, `assume ...`, `trunc N` or `[name]`"));
        };
        let name = lhs.trim();
        if !valid_name(name) || name == "t" || name == "u" {
            return Err(syntax(line, col0, format!("bad coordinate name `{name}`")));
        }
        let rcol = lhs.chars().count() + 2;
        let s = parse_series_expr(rhs, line, rcol)?;
        if let Some((e, _)) = s.0.iter().next() {
            if *e <= Rat::zero() {
                return Err(Error::InvariantViolation(format!("{name} does not vanish at t = 0")));
            }
        }
        match cur.coords.iter_mut().find(|(v, _)| v == name) {
            Some(slot) => slot.1 = s,
            None => cur.coords.push((name.to_string(), s)),
        }
    }
    let mut all = vec![main];
    all.extend(sections);
    Ok(SessionConfig { sections: all, trunc })
}

/// Splits `FILE#name` into the path and the section.
pub fn split_ref(s: &str) -> (&str, Option<&str>) {
    match s.rsplit_once('#') {
        Some((p, n)) if !n.is_empty() && !n.contains('/') => (p, Some(n)),
        _ => (s, None),
    }
}

/// The running example as a session file.
pub const AJM_SESSION: &str = "\
# x = t^6, y = t^10 + u t^11, z = t^14 + t^15 with u > 2
assume u > 2
x = t^6
y = t^10 + u*t^11
z = t^14 + t^15
";
