//! One function per subcommand. Each returns the text report and a JSON
//! value with the same fields.

use std::fmt::Write as _;
use std::path::Path;

use keypoly::arith::parse_rat;
use keypoly::blowup::{chart_data, resolve_pair, ChartTable};
use keypoly::dual_graph::{parse_script, run_script};
use keypoly::roots::{roots_2d, roots_up_to, Termination2d};
use keypoly::separating::{
    connected_set as build_connected_set, membership, separating_generators, separating_value, witness_sign_change,
    CurvettePair, SepResult, Variant,
};
use keypoly::session::{parse_poly, parse_session, split_ref};
use keypoly::standard_form::{standard_form as build_standard_form, RewriteDisplay};
use keypoly::walkthrough::run_walkthrough;
use keypoly::{Curvette, Error, Poly, Rat, Semigroup, SeriesOrder};
use serde_json::{json, Value};

use crate::{table, Failure};

pub struct Ctx {
    pub trunc: Option<i64>,
    pub show_steps: bool,
}

pub struct Out {
    pub text: String,
    pub json: Value,
    /// Reported after the output; makes the exit status 1.
    pub failure: Option<Error>,
}

impl Out {
    fn ok(text: String, json: Value) -> Self {
        Out { text, json, failure: None }
    }
}

type Res = Result<Out, Failure>;

/// Roots of a plane curvette computed for `blowup --chart-table`.
const CHART_TABLE_ROOTS: usize = 4;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(ctx: &Ctx, reference: &str) -> Result<Curvette, Failure> {
    let (path, section) = split_ref(reference);
    let cfg = parse_session(&read(Path::new(path))?)?;
    Ok(cfg.curvette(section, ctx.trunc)?)
}

fn rational(flag: &str, s: &str) -> Result<Rat, Failure> {
    parse_rat(s).ok_or_else(|| Failure::Usage(format!("--{flag}: expected a rational number, got `{s}`")))
}

fn order_text(o: &SeriesOrder, trunc: &Rat) -> String {
    match o {
        SeriesOrder::Finite(v) => v.to_string(),
        SeriesOrder::ZeroToTruncation => format!(">= {trunc}"),
    }
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

pub fn value(ctx: &Ctx, file: &str, poly: &str) -> Res {
    let c = load(ctx, file)?;
    let f = parse_poly(poly, c.vars())?;
    let image = c.image(&f)?;
    let trunc = c.trunc();
    let Some((v, lead)) = image.lead() else {
        let text = format!("f = {f}\nvalue: zero to truncation order {trunc}\n");
        let json = json!({ "f": f.to_string(), "value": null, "zero_to_truncation": true, "trunc": trunc.to_string() });
        return Ok(Out::ok(text, json));
    };
    let sign = match c.sign_of_series(&image) {
        Ok(s) => s.symbol().to_string(),
        Err(e) => format!("undetermined ({})", e.code()),
    };
    let text = format!("f = {f}\nvalue: {v}\nlead: {lead}\nsign: {sign}\n");
    let json = json!({
        "f": f.to_string(),
        "value": v.to_string(),
        "zero_to_truncation": false,
        "trunc": trunc.to_string(),
        "lead": lead.to_string(),
        "sign": sign,
    });
    Ok(Out::ok(text, json))
}

pub fn semigroup(gens: &[String], count: usize) -> Res {
    let gens = gens.iter().map(|g| rational("gens", g)).collect::<Result<Vec<_>, _>>()?;
    let g = Semigroup::new(gens)?;
    let elems = g.enumerate(count);
    let rows: Vec<Vec<String>> =
        elems.iter().enumerate().map(|(i, e)| vec![(i + 1).to_string(), e.to_string()]).collect();
    let mut text = format!("generators: {}\n", strings(g.generators()).join(", "));
    text.push_str(&table::render(&["#", "element"], &rows));
    let json = json!({ "generators": strings(g.generators()), "elements": strings(&elems) });
    Ok(Out::ok(text, json))
}

pub fn roots(ctx: &Ctx, file: &str, level: &str) -> Res {
    let c = load(ctx, file)?;
    let level = rational("level", level)?;
    let rs = roots_up_to(&c, &level)?;
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for (i, r) in rs.roots.iter().enumerate() {
        let flags = rs.flags(i);
        let names: Vec<&str> = [(flags.essential, "essential"), (flags.in_v, "V"), (flags.in_theta, "Theta")]
            .into_iter()
            .filter_map(|(on, n)| on.then_some(n))
            .collect();
        let value = if r.value_is_bound { format!(">= {}", r.value) } else { r.value.to_string() };
        let poly = rs.render_poly(&r.poly);
        let expression = rs.render_expression(&r.expression);
        rows.push(vec![
            (i + 1).to_string(),
            r.label.clone(),
            poly.clone(),
            value.clone(),
            expression.clone(),
            if names.is_empty() { "-".into() } else { names.join(",") },
        ]);
        items.push(json!({
            "index": i + 1,
            "label": r.label,
            "poly": poly,
            "value": value,
            "expression": expression,
            "flags": { "essential": flags.essential, "v": flags.in_v, "theta": flags.in_theta },
        }));
    }
    let mut text = format!("roots through level {} (truncation {})\n", rs.level(), c.trunc());
    text.push_str(&table::render(&["#", "root", "polynomial", "value", "expression", "flags"], &rows));
    let json = json!({ "level": rs.level().to_string(), "trunc": c.trunc().to_string(), "roots": items });
    Ok(Out::ok(text, json))
}

pub fn roots2d(ctx: &Ctx, file: &str, max: usize) -> Res {
    let c = load(ctx, file)?;
    let s = roots_2d(&c, max)?;
    let trunc = c.trunc();
    let opt = |a: Option<u32>| a.map_or_else(|| "-".to_string(), |a| a.to_string());
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for (i, r) in s.roots.iter().enumerate() {
        let value = order_text(&r.value, &trunc);
        let expression = s.render_expression(&r.expression);
        rows.push(vec![
            (i + 1).to_string(),
            r.label.clone(),
            r.poly.to_string(),
            value.clone(),
            expression.clone(),
            opt(r.alpha_prime),
            opt(r.alpha),
        ]);
        items.push(json!({
            "index": i + 1,
            "label": r.label,
            "poly": r.poly.to_string(),
            "value": value,
            "expression": expression,
            "alpha_prime": r.alpha_prime,
            "alpha": r.alpha,
        }));
    }
    let termination = match s.termination {
        Termination2d::MaxRoots => "max-roots",
        Termination2d::ValueUnknown => "value-unknown",
        Termination2d::ChainBudget => "chain-budget",
    };
    let mut text = table::render(&["#", "root", "polynomial", "value", "expression", "alpha'", "alpha"], &rows);
    let _ = writeln!(text, "stopped: {termination}");
    let json = json!({ "trunc": trunc.to_string(), "roots": items, "termination": termination });
    Ok(Out::ok(text, json))
}

pub fn standard_form(ctx: &Ctx, file: &str, poly: &str, level: &str) -> Res {
    let c = load(ctx, file)?;
    let f = parse_poly(poly, c.vars())?;
    let level = rational("level", level)?;
    let rs = roots_up_to(&c, &level)?;
    let sf = build_standard_form(&f, &level, &rs)?;
    let mut text = format!("f = {f}\n");
    let mut steps = Vec::new();
    if ctx.show_steps {
        for (k, s) in sf.steps.iter().enumerate() {
            let _ = writeln!(text, "step {}: {}", k + 1, RewriteDisplay(s, &rs));
            steps.push(json!({
                "rule": s.rule,
                "monomial": rs.render_mono(&s.monomial),
                "replacement": rs.render_expression(&s.replacement),
                "result": rs.render_expression(&s.result),
            }));
        }
    }
    let form = sf.render(&rs);
    let _ = writeln!(text, "standard form at level {level}: {form}");
    let values = sf.values(&rs);
    let rows: Vec<Vec<String>> =
        sf.terms().zip(&values).map(|((co, m), v)| vec![co.to_string(), rs.render_mono(m), v.to_string()]).collect();
    text.push_str(&table::render(&["coefficient", "monomial", "value"], &rows));
    let terms: Vec<Value> =
        rows.iter().map(|r| json!({ "coefficient": r[0], "monomial": r[1], "value": r[2] })).collect();
    let mut json = json!({ "f": f.to_string(), "level": level.to_string(), "form": form, "terms": terms });
    if ctx.show_steps {
        json["steps"] = Value::Array(steps);
    }
    Ok(Out::ok(text, json))
}

fn load_pair(ctx: &Ctx, alpha: &str, beta: &str, exact: Option<&[String]>) -> Result<CurvettePair, Failure> {
    let (mut a, mut b) = (load(ctx, alpha)?, load(ctx, beta)?);
    if let Some(ps) = exact {
        if ps.len() != 2 {
            return Err(Failure::Usage(format!("--exact-params takes two values, got {}", ps.len())));
        }
        a = a.specialize(&rational("exact-params", &ps[0])?)?;
        b = b.specialize(&rational("exact-params", &ps[1])?)?;
    }
    Ok(CurvettePair::auto(a, b)?)
}

fn no_divergence(s: &SepResult) -> Out {
    let text = format!("no divergence through level {}\n", s.bound);
    Out::ok(text, json!({ "separating_value": null, "bound": s.bound.to_string() }))
}

pub fn sep_ideal(ctx: &Ctx, alpha: &str, beta: &str, exact: Option<&[String]>) -> Res {
    let pair = load_pair(ctx, alpha, beta, exact)?;
    let s = separating_value(&pair, None)?;
    let Some(d) = &s.divergence else { return Ok(no_divergence(&s)) };
    let rs = &s.common;
    let mut text = String::new();
    let _ = writeln!(text, "pair: {}", if pair.generic { "generic" } else { "exact" });
    let subs: Vec<String> = s
        .prepared
        .substitutions
        .iter()
        .map(|sb| format!("{0} -> {0} - ({1})", rs.curvette.vars()[sb.var], sb.subtract))
        .collect();
    if !subs.is_empty() {
        let _ = writeln!(text, "coordinate changes: {}", subs.join("; "));
    }
    let _ = writeln!(text, "separating value: {} (level {} of beta)", d.value_alpha, d.value_beta);
    let _ = writeln!(text, "index: {}", d.index);
    let _ = writeln!(text, "kind: {}", d.kind);
    let monos_a = strings(d.monos_alpha.iter().map(|m| rs.render_mono(m)));
    let monos_b = strings(d.monos_beta.iter().map(|m| s.common_beta.render_mono(m)));
    let _ = writeln!(text, "monomials at alpha: {}", monos_a.join(", "));
    let _ = writeln!(text, "leads at alpha: {}", strings(&d.leads_alpha).join(", "));
    let _ = writeln!(text, "monomials at beta: {}", monos_b.join(", "));
    let _ = writeln!(text, "leads at beta: {}", strings(&d.leads_beta).join(", "));
    let mut gens = Vec::new();
    for m in separating_generators(&s) {
        gens.push((rs.render_mono(&m), s.prepared.to_original(&rs.mono_poly(&m))?.to_string()));
    }
    let _ = writeln!(text, "generators:");
    for (m, p) in &gens {
        let _ = writeln!(text, "  {m} = {p}");
    }
    let witness = match witness_sign_change(&s) {
        Ok(w) => {
            let terms = rs.render_expression(&w.terms);
            let _ = writeln!(text, "witness: {} = {}", terms, w.poly);
            json!({ "poly": w.poly.to_string(), "terms": terms })
        }
        Err(e) => {
            let _ = writeln!(text, "witness: none, {} ({})", e, e.code());
            json!({ "error": { "code": e.code(), "message": e.to_string() } })
        }
    };
    let json = json!({
        "pair": if pair.generic { "generic" } else { "exact" },
        "coordinate_changes": subs,
        "separating_value": d.value_alpha.to_string(),
        "value_beta": d.value_beta.to_string(),
        "index": d.index,
        "kind": d.kind.to_string(),
        "monomials_alpha": monos_a,
        "leads_alpha": strings(&d.leads_alpha),
        "monomials_beta": monos_b,
        "leads_beta": strings(&d.leads_beta),
        "generators": gens.iter().map(|(m, p)| json!({ "monomial": m, "poly": p })).collect::<Vec<_>>(),
        "witness": witness,
    });
    Ok(Out::ok(text, json))
}

pub fn connected_set(
    ctx: &Ctx,
    alpha: &str,
    beta: &str,
    exact: Option<&[String]>,
    polys: &[String],
    variant: Variant,
) -> Res {
    let pair = load_pair(ctx, alpha, beta, exact)?;
    let fs = polys.iter().map(|p| parse_poly(p, pair.alpha.vars())).collect::<keypoly::Result<Vec<Poly>>>()?;
    let s = separating_value(&pair, None)?;
    if s.divergence.is_none() {
        return Ok(no_divergence(&s));
    }
    let d = build_connected_set(&s, &fs, variant)?;
    let rs = &d.system;
    let name = match variant {
        Variant::C => "C",
        Variant::CPrime => "Cprime",
    };
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for e in &d.entries {
        let row = vec![
            e.f.to_string(),
            e.value.to_string(),
            rs.render_expression(&e.heads),
            rs.render_expression(&e.tails),
            e.head_sign.symbol().to_string(),
        ];
        entries.push(json!({ "f": row[0], "value": row[1], "heads": row[2], "tails": row[3], "head_sign": row[4] }));
        rows.push(row);
    }
    let mut text = format!("variant {name} at level {}\n", d.level);
    text.push_str(&table::render(&["f", "value", "heads", "tails", "sign"], &rows));
    let in_alpha = membership(&d, &pair.alpha)?;
    let _ = writeln!(text, "alpha is a member: {}", yes_no(in_alpha));
    let mut json =
        json!({ "variant": name, "level": d.level.to_string(), "entries": entries, "alpha_member": in_alpha });
    if !pair.generic {
        let in_beta = membership(&d, &pair.beta)?;
        let _ = writeln!(text, "beta is a member: {}", yes_no(in_beta));
        json["beta_member"] = Value::Bool(in_beta);
    }
    Ok(Out::ok(text, json))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn chart_rows(t: &ChartTable) -> (String, Value) {
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for r in &t.rows {
        let earlier: Vec<String> = r.earlier.iter().map(|(l, a, b)| format!("{l}:({a},{b})")).collect();
        let companion = t.render_companion(r);
        let row = vec![
            r.label.clone(),
            r.ell.to_string(),
            r.strict.to_string(),
            companion.clone(),
            earlier.join(" "),
            r.first_multiplicity.to_string(),
            r.alpha_product.to_string(),
        ];
        items.push(json!({
            "label": r.label,
            "chart": r.ell,
            "strict_transform": r.strict.to_string(),
            "companion": companion,
            "earlier": r.earlier.iter().map(|(l, a, b)| json!({ "root": l, "companion_exp": a, "strict_exp": b })).collect::<Vec<_>>(),
            "first_multiplicity": r.first_multiplicity,
            "alpha_product": r.alpha_product,
        }));
        rows.push(row);
    }
    let text = table::render(&["root", "chart", "strict", "companion", "earlier", "mult", "alphas"], &rows);
    (text, Value::Array(items))
}

pub fn blowup(ctx: &Ctx, files: &[String], max_steps: usize, with_table: bool) -> Res {
    let alpha = load(ctx, &files[0])?;
    let mut text = String::new();
    let mut json = json!({});
    let resolve = files.len() == 2 || !with_table;
    if resolve {
        let pair = match files.get(1) {
            Some(b) => CurvettePair::new(alpha.clone(), load(ctx, b)?)?,
            None => CurvettePair::generic(alpha.clone())?,
        };
        let r = resolve_pair(&pair, max_steps)?;
        let opt = |x: Option<&Rat>| x.map_or_else(|| "-".to_string(), |x| x.to_string());
        let mut rows = Vec::new();
        let mut steps = Vec::new();
        for (k, s) in r.steps.iter().enumerate() {
            let row = vec![
                k.to_string(),
                opt(s.value()),
                s.kind().map_or_else(|| "-".into(), |k| k.to_string()),
                s.maximal.to_string(),
                s.ideal_order.map_or_else(|| "-".into(), |o| o.to_string()),
                opt(s.predicted.as_ref()),
                opt(s.weak_min.as_ref()),
                yes_no(s.prediction_holds()).to_string(),
            ];
            steps.push(json!({
                "step": k,
                "substitution": s.chart.log().last(),
                "value": row[1],
                "kind": row[2],
                "maximal_value": row[3],
                "ideal_order": row[4],
                "predicted": row[5],
                "weak_min": row[6],
                "prediction_holds": s.prediction_holds(),
                "generators": strings(&s.generators),
            }));
            rows.push(row);
        }
        let log = r.steps.last().map(|s| s.chart.log()).unwrap_or_default();
        let _ = writeln!(text, "substitutions:");
        for l in &log {
            let _ = writeln!(text, "  {l}");
        }
        text.push_str(&table::render(
            &["step", "value", "kind", "m-value", "order", "predicted", "weak-min", "holds"],
            &rows,
        ));
        let _ = writeln!(text, "stop: {} after {} blowups", r.stop, r.blowups());
        json["substitutions"] = json!(log);
        json["steps"] = Value::Array(steps);
        json["stop"] = json!(r.stop.to_string());
        json["blowups"] = json!(r.blowups());
    }
    if with_table {
        let sys = roots_2d(&alpha, CHART_TABLE_ROOTS)?;
        let t = chart_data(&sys, max_steps)?;
        let (tt, tj) = chart_rows(&t);
        if resolve {
            text.push('\n');
        }
        let _ = writeln!(text, "charts of the roots:");
        text.push_str(&tt);
        json["chart_table"] = tj;
    }
    Ok(Out::ok(text, json))
}

pub fn dual_graph(path: &Path, dot: bool) -> Res {
    let script = parse_script(&read(path)?)?;
    let graphs = run_script(&script)?;
    let mut text = String::new();
    let mut steps = Vec::new();
    let mut all = true;
    for (k, g) in graphs.iter().enumerate() {
        let event = match k {
            0 => format!("init {:?}", script.region),
            _ => script.events[k - 1].1.to_string(),
        };
        let bamboo = g.is_bamboo();
        all &= bamboo;
        let _ = writeln!(text, "step {k}: {event}");
        let adj: Vec<String> = g.adjacency().iter().map(|l| l.trim_end().to_string()).collect();
        for l in &adj {
            let _ = writeln!(text, "  {l}");
        }
        let _ = writeln!(text, "  bamboo: {}", yes_no(bamboo));
        steps.push(json!({ "step": k, "event": event, "adjacency": adj, "bamboo": bamboo }));
    }
    let last = graphs.last().expect("run_script returns the initial graph");
    let mut json = json!({ "steps": steps, "bamboo": all });
    if dot {
        text.push_str(&last.to_dot());
        json["dot"] = json!(last.to_dot());
    }
    let mut out = Out::ok(text, json);
    if !all {
        out.failure = Some(Error::InvariantViolation("a graph in the run is not a bamboo".into()));
    }
    Ok(out)
}

pub fn walkthrough(ctx: &Ctx) -> Res {
    let report = run_walkthrough(ctx.trunc)?;
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(
            |c| json!({ "group": c.group, "name": c.name, "expected": c.expected, "actual": c.actual, "pass": c.pass }),
        )
        .collect();
    let json = json!({ "trunc": report.trunc, "passed": report.passed(), "checks": checks });
    let text = report.render();
    let failure = report.into_result().err();
    Ok(Out { text, json, failure })
}
