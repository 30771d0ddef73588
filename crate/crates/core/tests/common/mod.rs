//! Case generators and independent checkers shared by the property suites
//! and the acceptance runner. Generators take a seeded RNG so a failing
//! case can be replayed from its seed alone.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use keypoly::arith::{rat, rat_gcd, rat_int};
use keypoly::blowup::{resolve_pair, Resolution};
use keypoly::dual_graph::{init_graph, Region, SignedDualGraph};
use keypoly::roots::{alpha_prime, prepare_coordinates, roots_2d, roots_up_to, RootSystem, System2d};
use keypoly::semigroup::{semigroup_enumerate, Semigroup};
use keypoly::separating::{
    connected_set, membership, positively_proportional, separating_value, ConnectedSetDesc, CurvettePair, Variant,
};
use keypoly::session::{parse_session, AJM_SESSION};
use keypoly::standard_form::value_via_standard_form;
use keypoly::{Curvette, MonomialValuation, ParamAssumption, Poly, Rat, RatFn, SeriesOrder, Sign, TruncSeries};
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn names(n: usize) -> Vec<String> {
    ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect()
}

fn nonzero(r: &mut StdRng, k: i64) -> i64 {
    let c = r.gen_range(1..=k);
    if r.gen_bool(0.5) {
        -c
    } else {
        c
    }
}

fn dot(l: &[i64], a: &[Rat]) -> Rat {
    l.iter().zip(a).map(|(x, y)| rat_int(*x) * y).sum()
}

fn sign(x: &Rat) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn curvette(series: &[&[(i64, i64)]], trunc: i64) -> Curvette {
    let n = rat_int(trunc);
    let s = series
        .iter()
        .map(|e| TruncSeries::new(e.iter().map(|&(c, k)| (rat_int(k), RatFn::from_int(c))), n.clone()))
        .collect();
    Curvette::new(names(series.len()), s, ParamAssumption::free(), Sign::Pos).unwrap()
}

pub fn ajm() -> Curvette {
    parse_session(AJM_SESSION).unwrap().curvette(None, None).unwrap()
}

pub fn ajm_roots() -> &'static RootSystem {
    static RS: OnceLock<RootSystem> = OnceLock::new();
    RS.get_or_init(|| roots_up_to(&ajm(), &rat_int(37)).unwrap())
}

// ---- monomial valuations against ideal membership ----

#[derive(Debug)]
pub struct MonoCase {
    pub weights: Vec<Rat>,
    pub f: Poly,
}

pub fn gen_mono_case(r: &mut StdRng) -> MonoCase {
    let n = r.gen_range(1..=3);
    let weights = (0..n).map(|_| rat(r.gen_range(1..=6), r.gen_range(1..=3))).collect();
    let terms: Vec<(Vec<u32>, RatFn)> = (0..r.gen_range(1..=4))
        .map(|_| ((0..n).map(|_| r.gen_range(0..=3)).collect(), RatFn::from_int(nonzero(r, 3))))
        .collect();
    MonoCase { weights, f: Poly::from_terms(&names(n), terms) }
}

/// The value as the largest `g` among monomial weights with `f` in the
/// monomial ideal generated by all monomials of weight at least `g`.
pub fn check_monomial_value(c: &MonoCase) -> Check {
    let vars = c.f.vars().to_vec();
    let v = MonomialValuation::new(vars, c.weights.clone()).map_err(|e| e.to_string())?;
    let got = v.value(&c.f).map_err(|e| e.to_string())?;
    let exps: Vec<Vec<u32>> = c.f.terms().map(|(e, _)| e.clone()).collect();
    let weight = |a: &[u32]| a.iter().zip(&c.weights).map(|(k, w)| rat_int(*k as i64) * w).sum::<Rat>();
    let boxes = |e: &[u32]| {
        let mut out = vec![Vec::new()];
        for &k in e {
            out = out.into_iter().flat_map(|p: Vec<u32>| (0..=k).map(move |j| [p.clone(), vec![j]].concat())).collect();
        }
        out
    };
    let mut cands: Vec<Rat> = exps.iter().flat_map(|e| boxes(e)).map(|a| weight(&a)).collect();
    cands.sort();
    cands.dedup();
    let member = |g: &Rat| exps.iter().all(|e| boxes(e).iter().any(|a| weight(a) >= *g));
    let want = cands.into_iter().rev().find(|g| member(g));
    if got == want {
        Ok(())
    } else {
        Err(format!("{c:?}: library {got:?}, oracle {want:?}"))
    }
}

// ---- semigroup enumeration ----

pub fn gen_semigroup_case(r: &mut StdRng) -> (Vec<Rat>, usize) {
    let gens = (0..r.gen_range(1..=4)).map(|_| rat(r.gen_range(1..=12), r.gen_range(1..=3))).collect();
    (gens, r.gen_range(1..=15))
}

/// All sums of generators up to `bound`, by closure.
fn sums_up_to(gens: &[Rat], bound: &Rat) -> BTreeSet<Rat> {
    let mut seen = BTreeSet::from([Rat::zero()]);
    let mut todo = vec![Rat::zero()];
    while let Some(s) = todo.pop() {
        for g in gens {
            let t = &s + g;
            if t <= *bound && seen.insert(t.clone()) {
                todo.push(t);
            }
        }
    }
    seen
}

pub fn check_semigroup(gens: &[Rat], count: usize) -> Check {
    let got = semigroup_enumerate(gens, count).map_err(|e| e.to_string())?;
    // the first `count` multiples of the least generator bound the answer
    let least = gens.iter().min().unwrap();
    let bound = least * rat_int(count as i64);
    let want: Vec<Rat> = sums_up_to(gens, &bound).into_iter().filter(|x| !x.is_zero()).take(count).collect();
    if got == want {
        Ok(())
    } else {
        Err(format!("gens {gens:?}, count {count}: library {got:?}, oracle {want:?}"))
    }
}

// ---- value of a sum from its initial forms ----

#[derive(Debug)]
pub struct SumCase {
    pub curvette: Curvette,
    pub family: Vec<Poly>,
}

pub fn gen_sum_case(r: &mut StdRng) -> SumCase {
    let a = r.gen_range(1..=4);
    let b = r.gen_range(1..=6);
    let c = curvette(&[&[(1, a)], &[(1, b), (r.gen_range(-2..=2), b + r.gen_range(1..=3))]], 60);
    let vars = names(2);
    let mono = |r: &mut StdRng| {
        let e = vec![r.gen_range(0..=3), r.gen_range(0..=3)];
        Poly::from_terms(&vars, [(e, RatFn::from_int(nonzero(r, 2)))])
    };
    let mut family: Vec<Poly> = (0..r.gen_range(1..=4)).map(|_| &mono(r) + &mono(r)).filter(|p| !p.is_zero()).collect();
    if family.is_empty() {
        family.push(Poly::var(&vars, 0));
    }
    if r.gen_bool(0.5) {
        // cancel the first member up to a term of large value
        let tail = Poly::var(&vars, 0).pow(r.gen_range(4..=8));
        family.push(&(-&family[0]) + &tail);
    }
    SumCase { curvette: c, family }
}

/// `nu(sum) = min nu(y_i)` exactly when the leads of minimal value do not
/// cancel. Returns whether the leads cancelled, for coverage counts.
pub fn check_sum_value(s: &SumCase) -> Result<bool, String> {
    let c = &s.curvette;
    let mut forms = Vec::new();
    for y in &s.family {
        match c.nu_value(y).map_err(|e| e.to_string())? {
            SeriesOrder::Finite(_) => forms.push(c.initial_form(y).map_err(|e| e.to_string())?),
            SeriesOrder::ZeroToTruncation => return Ok(false),
        }
    }
    let m = forms.iter().map(|f| f.value.clone()).min().unwrap();
    let leads = forms.iter().filter(|f| f.value == m).fold(RatFn::zero(), |acc, f| &acc + &f.lead);
    let sum = s.family.iter().fold(Poly::zero(c.vars()), |acc, y| &acc + y);
    let attains = c.nu_value(&sum).map_err(|e| e.to_string())? == SeriesOrder::Finite(m.clone());
    if attains == !leads.is_zero() {
        Ok(leads.is_zero())
    } else {
        Err(format!("{s:?}: min {m}, leads sum {leads}, attains {attains}"))
    }
}

// ---- positive proportionality against a grid of combinations ----

pub fn gen_lead_pair(r: &mut StdRng) -> (Vec<Rat>, Vec<Rat>) {
    let n = r.gen_range(1..=4);
    let a: Vec<Rat> = (0..n).map(|_| rat_int(r.gen_range(-3..=3))).collect();
    let b = if r.gen_bool(0.4) {
        let rho = [rat(1, 2), rat_int(1), rat_int(2), rat_int(3), rat_int(-1), rat(-1, 3)][r.gen_range(0..6)].clone();
        a.iter().map(|x| x * &rho).collect()
    } else {
        (0..n).map(|_| rat_int(r.gen_range(-3..=3))).collect()
    };
    (a, b)
}

/// Every grid combination takes the same sign on both vectors. With entries
/// in [-3, 3] the grid contains each `a_j e_i - a_i e_j`, which span the
/// orthogonal complement of `a`, so the grid decides proportionality.
pub fn check_proportional(a: &[Rat], b: &[Rat]) -> Result<bool, String> {
    let n = a.len();
    let mut agree = true;
    let mut l = vec![-3i64; n];
    'grid: loop {
        if sign(&dot(&l, a)) != sign(&dot(&l, b)) {
            agree = false;
            break;
        }
        for x in l.iter_mut() {
            if *x < 3 {
                *x += 1;
                continue 'grid;
            }
            *x = -3;
        }
        break;
    }
    let got = positively_proportional(a, b);
    if got == agree {
        Ok(got)
    } else {
        Err(format!("{a:?} vs {b:?}: library {got}, grid {agree}"))
    }
}

// ---- standard forms against direct evaluation ----

pub fn gen_root_combination(r: &mut StdRng) -> Poly {
    let rs = ajm_roots();
    let labels = ["x", "y", "z", "Q4", "Q5", "Q6"];
    let vars = rs.curvette.vars().to_vec();
    let mut f = Poly::zero(&vars);
    for _ in 0..r.gen_range(1..=4) {
        let mut m = Poly::one(&vars);
        for _ in 0..r.gen_range(1..=3) {
            m = &m * &rs.find(labels[r.gen_range(0..labels.len())]).unwrap().poly;
        }
        let c = if r.gen_bool(0.2) { RatFn::u() } else { RatFn::from_int(nonzero(r, 3)) };
        f = &f + &m.scale(&c);
    }
    f
}

/// Below the system's level the standard form must reproduce the value;
/// above it, the library may decline but must never report a smaller value.
pub fn check_standard_value(f: &Poly) -> Check {
    let rs = ajm_roots();
    let level = rat_int(37);
    let nu = rs.curvette.nu_value(f).map_err(|e| e.to_string())?;
    let got = value_via_standard_form(f, rs);
    match (&nu, &got) {
        (SeriesOrder::Finite(v), Ok(w)) if v == w => Ok(()),
        (SeriesOrder::Finite(v), Err(e)) if *v >= level && e.code() == "level-insufficient" => Ok(()),
        (SeriesOrder::ZeroToTruncation, Ok(w)) if *w >= level => Ok(()),
        (SeriesOrder::ZeroToTruncation, Err(_)) => Ok(()),
        _ => Err(format!("{f}: series order {nu:?}, standard form {got:?}")),
    }
}

// ---- dimension-2 laws ----

pub fn gen_plane_curvette(r: &mut StdRng) -> Curvette {
    let a = [2, 3, 4, 4, 6, 6, 8, 9, 10][r.gen_range(0..9)];
    let mut exps = BTreeSet::new();
    exps.insert(r.gen_range(a + 1..=12));
    for _ in 0..r.gen_range(0..=3) {
        let lo = *exps.iter().next().unwrap() + 1;
        if lo <= 12 {
            exps.insert(r.gen_range(lo..=12));
        }
    }
    let y: Vec<(i64, i64)> = exps.into_iter().map(|e| ([1, 1, -1, 2][r.gen_range(0..4)], e)).collect();
    curvette(&[&[(1, a)], &y], 96)
}

pub fn plane_system(c: &Curvette) -> Result<System2d, String> {
    let p = prepare_coordinates(c, None).map_err(|e| e.to_string())?;
    roots_2d(&p.curvette, 6).map_err(|e| e.to_string())
}

/// `alpha_1 = 1`, then the alphas of the finished roots.
fn alphas(s: &System2d) -> Vec<u32> {
    let mut out = vec![1];
    out.extend(s.roots.iter().skip(1).map_while(|r| r.alpha));
    out
}

fn m_orders(s: &System2d) -> Vec<u32> {
    s.roots.iter().map(|r| r.poly.m_order().unwrap_or(0)).collect()
}

/// The m-adic order of `Q_i` is the product of the earlier alphas.
/// Returns how many roots were checked.
pub fn check_multiplicity_law(s: &System2d) -> Result<usize, String> {
    let al = alphas(s);
    let mo = m_orders(s);
    let mut checked = 0;
    for i in 3..=s.roots.len() {
        if i - 1 > al.len() {
            break;
        }
        let prod: u32 = al[..i - 1].iter().product();
        if mo[i - 1] != prod {
            return Err(format!("{}: m-order {} but alpha product {prod}", s.roots[i - 1].label, mo[i - 1]));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Exponent tuples with `0 <= g_j < alpha_j` for `j` in `from..top`, `g_top`
/// up to `top_max`, and `g_0` up to `first_max` when `from == 0`.
#[allow(clippy::needless_range_loop)]
fn tuples(al: &[u32], from: usize, top: usize, first_max: u32, top_max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for j in from..=top {
        let hi = if j == top {
            top_max
        } else if j == 0 {
            first_max
        } else {
            al[j] - 1
        };
        out = out.into_iter().flat_map(|p: Vec<u32>| (0..=hi).map(move |k| [p.clone(), vec![k]].concat())).collect();
    }
    out
}

fn lex_rev_less(a: &[u32], b: &[u32]) -> bool {
    a.iter().rev().lt(b.iter().rev())
}

/// Equal-valued monomials in `Q_1..Q_i`, standard below `i`: the one with
/// the lex-smaller reversed exponent has the larger m-adic order. Returns
/// the number of pairs compared.
pub fn check_equal_value_orders(s: &System2d) -> Result<usize, String> {
    let al = alphas(s);
    let mo = m_orders(s);
    let betas = s.betas();
    let mut pairs = 0;
    for i in 1..s.roots.len().min(al.len() + 1).min(betas.len()) {
        let ts = tuples(&al, 0, i, 12, 2 * al.get(i).copied().unwrap_or(2));
        let val = |g: &[u32]| g.iter().zip(&betas).map(|(k, b)| rat_int(*k as i64) * b).sum::<Rat>();
        let ord = |g: &[u32]| g.iter().zip(&mo).map(|(k, m)| k * m).sum::<u32>();
        let mut keyed: Vec<(Rat, &Vec<u32>)> = ts.iter().map(|g| (val(g), g)).collect();
        keyed.sort();
        for w in keyed.chunk_by(|a, b| a.0 == b.0) {
            for (_, g) in w {
                for (_, h) in w {
                    if lex_rev_less(g, h) {
                        pairs += 1;
                        if ord(g) <= ord(h) {
                            return Err(format!("{g:?} vs {h:?}: orders {} and {}", ord(g), ord(h)));
                        }
                    }
                }
            }
        }
    }
    Ok(pairs)
}

/// Standard monomials in `Q_3..Q_i` with `i < s`: lex-smaller reversed
/// exponents give an m-adic order at least `n = ord(Q_3)` smaller.
pub fn check_order_gap(s: &System2d) -> Result<usize, String> {
    let al = alphas(s);
    let mo = m_orders(s);
    if s.roots.len() < 4 || al.len() < 3 {
        return Ok(0);
    }
    let n = mo[2];
    let mut pairs = 0;
    for i in 3..s.roots.len() {
        if i > al.len() {
            break;
        }
        // indices 2..i-1 are Q_3..Q_i
        let ts = tuples(&al, 2, i - 1, 0, al[i - 1] - 1);
        let ord = |g: &[u32]| g.iter().zip(&mo[2..]).map(|(k, m)| k * m).sum::<u32>();
        for g in &ts {
            for h in &ts {
                if lex_rev_less(g, h) {
                    pairs += 1;
                    if ord(g) + n > ord(h) {
                        return Err(format!("Q3..Q{i}: {g:?} vs {h:?}, orders {} and {}, n = {n}", ord(g), ord(h)));
                    }
                }
            }
        }
    }
    Ok(pairs)
}

// ---- semigroup laws ----

fn group_gen(bs: &[Rat]) -> Rat {
    bs.iter().fold(Rat::zero(), |a, b| rat_gcd(&a, b))
}

/// Smallest `k >= 1` with `k * beta` in the group of `earlier`, by search.
pub fn alpha_prime_search(beta: &Rat, earlier: &[Rat]) -> u32 {
    let d = group_gen(earlier);
    (1..).find(|&k| (rat_int(k as i64) * beta / &d).is_integer()).unwrap()
}

fn in_sg(a: &Rat, gens: &[Rat]) -> bool {
    sums_up_to(gens, a).contains(a)
}

/// Every group element at or above `t` lies in the semigroup. Translating
/// by the first generator, the window `[t, t + gens[0])` decides it.
/// Also compares the library's membership test on the window.
pub fn threshold_in_semigroup(gens: &[Rat], t: &Rat) -> Result<bool, String> {
    let d = group_gen(gens);
    let lib = Semigroup::new(gens.to_vec()).map_err(|e| e.to_string())?;
    let mut a = (t / &d).ceil() * &d;
    let end = t + &gens[0];
    let all = sums_up_to(gens, &end);
    let mut ok = true;
    while a < end {
        let brute = all.contains(&a);
        if lib.contains(&a) != brute {
            return Err(format!("membership of {a} in sg{gens:?}: library {}, closure {brute}", !brute));
        }
        ok &= brute;
        a += &d;
    }
    Ok(ok)
}

fn gen_rat(r: &mut StdRng, num: std::ops::RangeInclusive<i64>) -> Rat {
    rat(r.gen_range(num), r.gen_range(1..=3))
}

/// `beta_i >= alpha_{i-1} beta_{i-1}` with arbitrary positive alphas.
pub fn gen_bounded_tail(r: &mut StdRng) -> (Vec<Rat>, Vec<u32>) {
    let g = r.gen_range(2..=4);
    let al: Vec<u32> = (0..g).map(|j| if j == 0 { 1 } else { r.gen_range(1..=4) }).collect();
    let mut bs = vec![gen_rat(r, 1..=12), gen_rat(r, 1..=12)];
    for i in 2..g {
        let next = &bs[i - 1] * rat_int(al[i - 1] as i64) + gen_rat(r, 0..=6);
        bs.push(next);
    }
    (bs, al)
}

/// With `0 <= gamma_j < alpha_j` for `j >= 2` and the sum at least
/// `alpha_g beta_g`, `gamma_1 > 0`. Returns how many tuples met the
/// hypothesis.
pub fn check_bounded_tail(bs: &[Rat], al: &[u32]) -> Result<usize, String> {
    let g = bs.len();
    let target = &bs[g - 1] * rat_int(al[g - 1] as i64);
    let k = (&target / &bs[0]).ceil().to_integer().try_into().unwrap_or(64i64) + 2;
    let mut hits = 0;
    for rest in tuples(al, 1, g - 1, 0, al[g - 1] - 1) {
        let tail: Rat = rest.iter().zip(&bs[1..]).map(|(c, b)| rat_int(*c as i64) * b).sum();
        for g1 in -k..=k {
            if rat_int(g1) * &bs[0] + &tail >= target {
                hits += 1;
                if g1 <= 0 {
                    return Err(format!("{bs:?} alphas {al:?}: gamma = ({g1}, {rest:?})"));
                }
            }
        }
    }
    Ok(hits)
}

/// Tuples obeying `beta_i >= alpha'_{i-1} beta_{i-1}` from `i = 3`.
pub fn gen_growing_tuple(r: &mut StdRng) -> Vec<Rat> {
    let g = r.gen_range(3..=5);
    let mut bs = vec![gen_rat(r, 1..=9), gen_rat(r, 1..=9)];
    while bs.len() < g {
        let i = bs.len();
        let ap = alpha_prime_search(&bs[i - 1], &bs[..i - 1]);
        let next = &bs[i - 1] * rat_int(ap as i64) + gen_rat(r, 0..=4);
        bs.push(next);
    }
    bs
}

/// Equalities (group = semigroup above `alpha'_i beta_i`) for every prefix,
/// and agreement of the library's alpha' with the search.
pub fn check_growing_tuple(bs: &[Rat]) -> Check {
    for i in 1..bs.len() {
        let ap = alpha_prime_search(&bs[i], &bs[..i]);
        let lib = alpha_prime(&bs[i], &bs[..i]);
        if lib != ap {
            return Err(format!("{bs:?}: alpha' of index {i}: library {lib}, search {ap}"));
        }
        let t = &bs[i] * rat_int(ap as i64);
        if !threshold_in_semigroup(&bs[..=i], &t)? {
            return Err(format!("{bs:?}: group elements above {t} missing from sg(beta_1..beta_{})", i + 1));
        }
    }
    Ok(())
}

/// Random tuples with only the last inequality imposed; when the prefix
/// equality holds, the full one must too. Returns whether the hypothesis
/// held.
pub fn gen_prefix_equality(r: &mut StdRng) -> Vec<Rat> {
    let g = r.gen_range(3..=4);
    let mut bs: Vec<Rat> = (0..g - 1).map(|_| gen_rat(r, 1..=12)).collect();
    let ap = alpha_prime_search(&bs[g - 2], &bs[..g - 2]);
    let last = &bs[g - 2] * rat_int(ap as i64) + gen_rat(r, 0..=4);
    bs.push(last);
    bs
}

pub fn check_prefix_equality(bs: &[Rat]) -> Result<bool, String> {
    let g = bs.len();
    let ap_prev = alpha_prime_search(&bs[g - 2], &bs[..g - 2]);
    let hyp = threshold_in_semigroup(&bs[..g - 1], &(&bs[g - 2] * rat_int(ap_prev as i64)))?;
    if !hyp {
        return Ok(false);
    }
    let ap = alpha_prime_search(&bs[g - 1], &bs[..g - 1]);
    if threshold_in_semigroup(bs, &(&bs[g - 1] * rat_int(ap as i64)))? {
        Ok(true)
    } else {
        Err(format!("{bs:?}: prefix equality holds but the full one fails"))
    }
}

// ---- blowups ----

/// Pairs of plane points separated at various depths.
pub fn resolution_pairs() -> Vec<(Curvette, Curvette)> {
    let c = |x: &[(i64, i64)], y: &[(i64, i64)]| curvette(&[x, y], 40);
    vec![
        (c(&[(1, 2)], &[(1, 3), (1, 4)]), c(&[(1, 2)], &[(1, 3), (2, 4)])),
        (c(&[(1, 2)], &[(1, 3)]), c(&[(1, 2)], &[(-1, 3)])),
        (c(&[(1, 4)], &[(1, 6), (1, 7)]), c(&[(1, 4)], &[(1, 6), (-1, 7)])),
        (c(&[(1, 3)], &[(1, 4), (1, 5)]), c(&[(1, 3)], &[(1, 4), (2, 5)])),
        (c(&[(1, 2)], &[(1, 5)]), c(&[(1, 2)], &[(1, 5), (1, 6)])),
        (c(&[(1, 4)], &[(1, 6), (1, 7)]), c(&[(1, 4)], &[(1, 6), (1, 7), (1, 9)])),
        (c(&[(1, 3)], &[(1, 5)]), c(&[(1, 3)], &[(1, 5), (1, 7)])),
    ]
}

pub fn check_resolution(a: &Curvette, b: &Curvette) -> Result<Resolution, String> {
    let p = CurvettePair::new(a.clone(), b.clone()).map_err(|e| e.to_string())?;
    let r = resolve_pair(&p, 16).map_err(|e| e.to_string())?;
    if r.prediction_holds() {
        Ok(r)
    } else {
        let bad: Vec<String> = r
            .steps
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.prediction_holds())
            .map(|(i, s)| {
                format!("step {i}: value {:?}, predicted {:?}, weak {:?}", s.value(), s.predicted, s.weak_min)
            })
            .collect();
        Err(bad.join("; "))
    }
}

// ---- signed dual graphs ----

/// A random run of valid events; is_bamboo after each.
pub fn check_bamboo_run(r: &mut StdRng) -> Result<SignedDualGraph, String> {
    let region = if r.gen_bool(0.5) { Region::U } else { Region::V };
    let mut g = init_graph(region);
    for step in 0..r.gen_range(1..=50) {
        let evs = g.valid_events(3);
        if evs.is_empty() {
            break;
        }
        let e = &evs[r.gen_range(0..evs.len())];
        g = g.apply(e).map_err(|err| format!("step {step}, {e}: {err}"))?;
        if !g.is_bamboo() {
            return Err(format!("step {step}, after {e}: not a bamboo: {:?}", g.edges));
        }
    }
    Ok(g)
}

// ---- connected sets ----

pub struct Cubes {
    pub alpha: Curvette,
    pub beta: Curvette,
    pub c: ConnectedSetDesc,
    pub c_prime: ConnectedSetDesc,
}

pub fn cubes_sets() -> &'static Cubes {
    static S: OnceLock<Cubes> = OnceLock::new();
    S.get_or_init(|| {
        let c = ajm();
        let alpha = c.specialize(&rat_int(3)).unwrap();
        let beta = c.specialize(&rat_int(4)).unwrap();
        let p = CurvettePair::new(alpha.clone(), beta.clone()).unwrap();
        let s = separating_value(&p, None).unwrap();
        let v = c.vars().to_vec();
        let (x, y, z) = (Poly::var(&v, 0), Poly::var(&v, 1), Poly::var(&v, 2));
        let cubes = &(&x.pow(3) + &y.pow(3)) + &z.pow(3);
        let q6 = s.common.find("Q6").unwrap().poly.clone();
        let fs = [cubes, x, q6];
        let cs = connected_set(&s, &fs, Variant::C).unwrap();
        let cp = connected_set(&s, &fs, Variant::CPrime).unwrap();
        Cubes { alpha, beta, c: cs, c_prime: cp }
    })
}

/// A point near the pair: a parameter value in (2, 10) and a few extra
/// terms of high order, with a random sign of t.
pub fn gen_delta(r: &mut StdRng) -> Curvette {
    let c = ajm();
    let u = rat(r.gen_range(21..=100), 10);
    let d = c.specialize(&u).unwrap();
    let mut series = d.series().to_vec();
    for _ in 0..r.gen_range(0..=3) {
        let j = r.gen_range(0..3);
        let e = r.gen_range(12..=34);
        let extra = TruncSeries::monomial(RatFn::from_int(nonzero(r, 5)), rat_int(e), d.trunc());
        series[j] = series[j].add(&extra);
    }
    let t = if r.gen_bool(0.8) { Sign::Pos } else { Sign::Neg };
    Curvette::new(d.vars().to_vec(), series, d.param().clone(), t).unwrap()
}

/// Members of the set never meet the zero set of an `f_i`. Returns whether
/// `delta` was a member of C.
pub fn check_member_signs(delta: &Curvette) -> Result<bool, String> {
    let sets = cubes_sets();
    let mut member_c = false;
    for (name, d) in [("C", &sets.c), ("C'", &sets.c_prime)] {
        if membership(d, delta).map_err(|e| e.to_string())? {
            member_c |= name == "C";
            for e in &d.entries {
                if delta.sign_at(&e.f).map_err(|e| e.to_string())? == Sign::Zero {
                    return Err(format!("{name} member on the zero set of {}", e.f));
                }
            }
        }
    }
    Ok(member_c)
}
