//! Curvettes, their valuations and signs, and monomial valuations.

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{sign_under, ParamAssumption, Rat, RatFn, Sign};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::series::{series_substitute, SeriesOrder, TruncSeries};

/// A point given by a parametrization of every ring variable by a series in `t`,
/// together with the assumption on `u` and the sign of `t`.
#[derive(Clone, PartialEq, Debug)]
pub struct Curvette {
    vars: Vec<String>,
    series: Vec<TruncSeries>,
    param: ParamAssumption,
    t_sign: Sign,
}

/// `lead * T^value`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InitialForm {
    pub value: Rat,
    pub lead: RatFn,
}

impl fmt::Display for InitialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lead.is_compound() {
            write!(f, "({})*T^{}", self.lead, self.value)
        } else {
            write!(f, "{}*T^{}", self.lead, self.value)
        }
    }
}

/// Sign of `t^e` when `t` has sign `t_sign`.
pub fn t_power_sign(e: &Rat, t_sign: Sign) -> Result<Sign> {
    if t_sign != Sign::Neg || e.is_zero() {
        return Ok(Sign::Pos);
    }
    if e.denom().is_even() {
        return Err(Error::InvariantViolation(format!(
            "t < 0 with exponent {e}: even denominator leaves the sign undefined"
        )));
    }
    Ok(if e.numer().is_odd() { Sign::Neg } else { Sign::Pos })
}

impl Curvette {
    pub fn new(vars: Vec<String>, series: Vec<TruncSeries>, param: ParamAssumption, t_sign: Sign) -> Result<Self> {
        if vars.len() != series.len() {
            return Err(Error::ArityMismatch(format!("{} variables, {} series", vars.len(), series.len())));
        }
        if t_sign == Sign::Zero {
            return Err(Error::InvariantViolation("t must have a sign".into()));
        }
        let c = Curvette { vars, series, param, t_sign };
        for (v, s) in c.vars.iter().zip(&c.series) {
            if let Some((e, lead)) = s.lead() {
                if !e.is_positive() {
                    return Err(Error::InvariantViolation(format!(
                        "{v} has order {e}; every variable must vanish at the center"
                    )));
                }
                sign_under(lead, &c.param)?;
                t_power_sign(e, t_sign)?;
            }
        }
        Ok(c)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn series(&self) -> &[TruncSeries] {
        &self.series
    }

    pub fn param(&self) -> &ParamAssumption {
        &self.param
    }

    pub fn t_sign(&self) -> Sign {
        self.t_sign
    }

    /// Smallest truncation order among the coordinates.
    pub fn trunc(&self) -> Rat {
        self.series.iter().map(|s| s.trunc().clone()).min().unwrap_or_else(Rat::zero)
    }

    pub fn with_param(&self, param: ParamAssumption) -> Result<Self> {
        Curvette::new(self.vars.clone(), self.series.clone(), param, self.t_sign)
    }

    /// Same point with the coordinate series replaced.
    pub fn with_series(&self, vars: Vec<String>, series: Vec<TruncSeries>) -> Result<Self> {
        Curvette::new(vars, series, self.param.clone(), self.t_sign)
    }

    /// Specializes `u` to an exact rational in every coefficient.
    pub fn specialize(&self, x: &Rat) -> Result<Self> {
        let series = self.series.iter().map(|s| s.specialize(x)).collect::<Result<_>>()?;
        Curvette::new(self.vars.clone(), series, ParamAssumption::Exact(x.clone()), self.t_sign)
    }

    pub fn image(&self, f: &Poly) -> Result<TruncSeries> {
        if f.vars() != self.vars.as_slice() {
            return Err(Error::ArityMismatch(format!(
                "polynomial over [{}], curvette over [{}]",
                f.vars().join(", "),
                self.vars.join(", ")
            )));
        }
        series_substitute(f, &self.series)
    }

    pub fn nu_value(&self, f: &Poly) -> Result<SeriesOrder> {
        Ok(self.image(f)?.order())
    }

    /// The value, failing when it is hidden by truncation.
    pub fn value(&self, f: &Poly) -> Result<Rat> {
        let s = self.image(f)?;
        match s.order() {
            SeriesOrder::Finite(v) => Ok(v),
            SeriesOrder::ZeroToTruncation => Err(Error::ValueUnknown(s.trunc().clone())),
        }
    }

    pub fn initial_form(&self, f: &Poly) -> Result<InitialForm> {
        initial_form_of(&self.image(f)?)
    }

    /// Values of the coordinates, in variable order.
    pub fn coordinate_values(&self) -> Result<Vec<Rat>> {
        self.series
            .iter()
            .map(|s| s.order().finite().cloned().ok_or_else(|| Error::ValueUnknown(s.trunc().clone())))
            .collect()
    }

    pub fn sign_at(&self, f: &Poly) -> Result<Sign> {
        if f.is_zero() {
            return Ok(Sign::Zero);
        }
        self.sign_of_series(&self.image(f)?)
    }

    pub fn sign_of_series(&self, s: &TruncSeries) -> Result<Sign> {
        match s.lead() {
            None => Err(Error::ValueUnknown(s.trunc().clone())),
            Some((e, c)) => Ok(sign_under(c, &self.param)? * t_power_sign(e, self.t_sign)?),
        }
    }

    /// Sign of `lead * T^value` at this point.
    pub fn sign_of_initial(&self, inf: &InitialForm) -> Result<Sign> {
        Ok(sign_under(&inf.lead, &self.param)? * t_power_sign(&inf.value, self.t_sign)?)
    }
}

pub fn initial_form_of(s: &TruncSeries) -> Result<InitialForm> {
    match s.lead() {
        Some((e, c)) => Ok(InitialForm { value: e.clone(), lead: c.clone() }),
        None => Err(Error::ValueUnknown(s.trunc().clone())),
    }
}

impl fmt::Display for Curvette {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, s) in self.vars.iter().zip(&self.series) {
            writeln!(f, "{v} = {s}")?;
        }
        write!(f, "assume {}", self.param)?;
        if self.t_sign == Sign::Neg {
            write!(f, "; t < 0")?;
        }
        Ok(())
    }
}

/// Monomial valuation with positive weights on the variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialValuation {
    vars: Vec<String>,
    weights: Vec<Rat>,
}

impl MonomialValuation {
    pub fn new(vars: Vec<String>, weights: Vec<Rat>) -> Result<Self> {
        if vars.len() != weights.len() {
            return Err(Error::ArityMismatch(format!("{} variables, {} weights", vars.len(), weights.len())));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::InvariantViolation(format!("weight {w} is not positive")));
        }
        Ok(MonomialValuation { vars, weights })
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    /// Least weighted degree over the support; `None` stands for the value of 0.
    pub fn value(&self, f: &Poly) -> Result<Option<Rat>> {
        if f.vars() != self.vars.as_slice() {
            return Err(Error::ArityMismatch("polynomial and weights use different variables".into()));
        }
        Ok(f.terms().map(|(e, _)| crate::poly::weighted_degree(e, &self.weights)).min())
    }
}
