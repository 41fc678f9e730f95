//! Property suites that check each theorem of the algebra against the oracle.
//!
//! Random suites draw one instance per trial from a ChaCha8 stream keyed by
//! `(seed, trial)`, so a trial is reproducible on its own and the aggregate
//! does not depend on how trials are scheduled across threads. Suites that
//! support it can instead sweep every parameter tuple up to a bound.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    enumerate_serial, enumerate_solutions, find_empty_among, find_empty_witness, input_candidates, is_solution,
    pulse_trains, serial_link_exists, set_equal, set_subset, solution_hull, GridConfig, OracleError, MAX_SPAN,
};
use crate::algebra::{
    baidc_consistent, bridc_consistent, bridc_det_output, bridc_regimes, AicParams, AlgebraError, Atom, BdcParams,
    BridcRegime, CondExpr, ParamError, RicParams,
};
use crate::signal::{Direction, Signal, SignalError};

type S = Signal<i64>;
type P = BdcParams<i64>;

/// Refinement of the intermediate grid used for serial composition.
pub const SERIAL_REFINE: i64 = 2;

/// Counterexamples kept per report.
const KEEP: usize = 5;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("unknown theorem {0:?}")]
    UnknownTheorem(String),
    #[error("theorem {0} has no sweep mode")]
    NoSweep(Theorem),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    T1,
    T14a,
    T14b,
    T14c,
    T14d,
    T14e,
    T14f,
    T14g,
    Baidc,
    BaidcSerial,
    T42,
    T45,
    T47,
    Pulse,
}

impl Theorem {
    pub const ALL: [Theorem; 14] = [
        Theorem::T1,
        Theorem::T14a,
        Theorem::T14b,
        Theorem::T14c,
        Theorem::T14d,
        Theorem::T14e,
        Theorem::T14f,
        Theorem::T14g,
        Theorem::Baidc,
        Theorem::BaidcSerial,
        Theorem::T42,
        Theorem::T45,
        Theorem::T47,
        Theorem::Pulse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::T1 => "t1",
            Theorem::T14a => "t14a",
            Theorem::T14b => "t14b",
            Theorem::T14c => "t14c",
            Theorem::T14d => "t14d",
            Theorem::T14e => "t14e",
            Theorem::T14f => "t14f",
            Theorem::T14g => "t14g",
            Theorem::Baidc => "baidc",
            Theorem::BaidcSerial => "baidc-serial",
            Theorem::T42 => "t42",
            Theorem::T45 => "t45",
            Theorem::T47 => "t47",
            Theorem::Pulse => "pulse",
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Theorem::T1 | Theorem::Baidc | Theorem::T45 | Theorem::T47 => 200,
            Theorem::BaidcSerial => 50,
            _ => 100,
        }
    }

    pub fn has_sweep(self) -> bool {
        matches!(self, Theorem::T14c | Theorem::T14f | Theorem::Baidc | Theorem::T45)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, VerifyError> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| VerifyError::UnknownTheorem(s.to_string()))
    }
}

/// How many instances to check and how to draw them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Plan {
    pub trials: usize,
    pub seed: u64,
    /// Sweep every parameter tuple with entries up to this bound instead of
    /// sampling.
    pub sweep: Option<i64>,
}

impl Plan {
    pub fn sampled(trials: usize, seed: u64) -> Self {
        Plan {
            trials,
            seed,
            sweep: None,
        }
    }

    pub fn sweep(max_param: i64) -> Self {
        Plan {
            trials: 0,
            seed: 0,
            sweep: Some(max_param),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub mode: String,
    pub trials: usize,
    pub checks: usize,
    pub failures: usize,
    pub counterexamples: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub regimes: BTreeMap<String, usize>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checks > 0
    }
}

#[derive(Debug, Default)]
struct Outcome {
    checks: usize,
    failures: Vec<String>,
    regimes: Vec<BridcRegime>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

pub fn verify(theorem: Theorem, plan: &Plan) -> Result<TheoremReport, VerifyError> {
    let (mode, outcomes) = match plan.sweep {
        Some(max) => (format!("sweep<={max}"), sweep(theorem, max)?),
        None => {
            let seed = plan.seed;
            let outcomes = (0..plan.trials)
                .into_par_iter()
                .map(|i| trial(theorem, &mut rng_for(seed, i as u64)))
                .collect::<Result<Vec<_>, _>>()?;
            (format!("sampled seed={seed}"), outcomes)
        }
    };
    let mut report = TheoremReport {
        theorem: theorem.name().to_string(),
        mode,
        trials: outcomes.len(),
        checks: 0,
        failures: 0,
        counterexamples: Vec::new(),
        regimes: BTreeMap::new(),
    };
    if theorem == Theorem::T45 {
        for r in BridcRegime::ALL {
            report.regimes.insert(r.label().to_string(), 0);
        }
    }
    for o in outcomes {
        report.checks += o.checks;
        report.failures += o.failures.len();
        for f in o.failures {
            if report.counterexamples.len() < KEEP {
                report.counterexamples.push(f);
            }
        }
        for r in o.regimes {
            *report.regimes.entry(r.label().to_string()).or_default() += 1;
        }
    }
    Ok(report)
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn trial(theorem: Theorem, rng: &mut ChaCha8Rng) -> Result<Outcome, VerifyError> {
    match theorem {
        Theorem::T1 => t1(rng),
        Theorem::T14a => {
            let (p, q, u) = pair_case(rng);
            t14a(&p, &q, &u)
        }
        Theorem::T14b => {
            let (p, q, u) = pair_case(rng);
            t14b(&p, &q, &u)
        }
        Theorem::T14c => {
            let p = rand_bdc(rng, 4, Some(true));
            t14c(&p, &[rand_pulse(rng, 9)])
        }
        Theorem::T14d => {
            let (p, q, u) = pair_case(rng);
            t14d(&p, &q, &u)
        }
        Theorem::T14e => t14e(rng),
        Theorem::T14f => {
            let p = rand_bdc(rng, 4, Some(true));
            t14f(&p, &[rand_pulse(rng, 9)])
        }
        Theorem::T14g => {
            let (p, q, u) = compose_case(rng);
            t14g(&p, &q, &u)
        }
        Theorem::Baidc => {
            let p = rand_bdc(rng, 4, Some(true));
            let a = AicParams::new(rng.gen_range(0..=4), rng.gen_range(0..=4))?;
            baidc(&p, &a)
        }
        Theorem::BaidcSerial => baidc_serial(rng),
        Theorem::T42 => t42(rng),
        Theorem::T45 => {
            let p = rand_bdc(rng, 4, None);
            let r = rand_ric(rng, 4);
            t45(&p, &r)
        }
        Theorem::T47 => t47(rng),
        Theorem::Pulse => pulse(rng),
    }
}

fn sweep(theorem: Theorem, max: i64) -> Result<Vec<Outcome>, VerifyError> {
    let tuples = all_tuples(max);
    match theorem {
        Theorem::T14c | Theorem::T14f => {
            let inputs = pulse_family(max);
            let cases: Vec<P> = tuples.into_iter().filter(|p| p.cc_holds()).collect();
            cases
                .par_iter()
                .map(|p| match theorem {
                    Theorem::T14c => t14c(p, &inputs),
                    _ => t14f(p, &inputs),
                })
                .collect()
        }
        Theorem::Baidc => {
            let mut cases = Vec::new();
            for p in tuples.iter().filter(|p| p.cc_holds()) {
                for dr in 0..=max {
                    for df in 0..=max {
                        cases.push((*p, AicParams::new(dr, df)?));
                    }
                }
            }
            cases.par_iter().map(|(p, a)| baidc(p, a)).collect()
        }
        Theorem::T45 => {
            let mut cases = Vec::new();
            for p in &tuples {
                for q in &tuples {
                    cases.push((*p, RicParams::new(q.mr(), q.dr(), q.mf(), q.df())?));
                }
            }
            cases.par_iter().map(|(p, r)| t45(p, r)).collect()
        }
        other => Err(VerifyError::NoSweep(other)),
    }
}

// ---- sampling ----

fn all_tuples(max: i64) -> Vec<P> {
    let mut out = Vec::new();
    for dr in 0..=max {
        for mr in 0..=dr {
            for df in 0..=max {
                for mf in 0..=df {
                    out.push(BdcParams::new(mr, dr, mf, df).expect("in range"));
                }
            }
        }
    }
    out
}

fn rand_bdc(rng: &mut impl Rng, max: i64, cc: Option<bool>) -> P {
    loop {
        let dr = rng.gen_range(0..=max);
        let df = rng.gen_range(0..=max);
        let p = BdcParams::new(rng.gen_range(0..=dr), dr, rng.gen_range(0..=df), df).expect("in range");
        if cc.is_none_or(|want| p.cc_holds() == want) {
            return p;
        }
    }
}

fn rand_ric(rng: &mut impl Rng, max: i64) -> RicParams<i64> {
    let dr = rng.gen_range(0..=max);
    let df = rng.gen_range(0..=max);
    RicParams::new(rng.gen_range(0..=dr), dr, rng.gen_range(0..=df), df).expect("in range")
}

/// A signal with at most `max_switches` switches, all in `[1, hi]`.
fn rand_signal(rng: &mut impl Rng, hi: i64, max_switches: usize) -> S {
    let n = hi as usize;
    let k = rng.gen_range(0..=max_switches.min(n));
    let mut ticks: Vec<i64> = index::sample(rng, n, k).into_iter().map(|i| i as i64 + 1).collect();
    ticks.sort_unstable();
    Signal::new(rng.gen(), ticks).expect("distinct and sorted")
}

/// A single 1-pulse or 0-pulse starting at tick 1.
fn rand_pulse(rng: &mut impl Rng, max_width: i64) -> S {
    let w = rng.gen_range(1..=max_width);
    Signal::new(rng.gen(), vec![1, 1 + w]).expect("increasing")
}

/// Both polarities of every pulse up to width `2 * max + 1`.
fn pulse_family(max: i64) -> Vec<S> {
    let mut out = Vec::new();
    for w in 1..=2 * max + 1 {
        for initial in [false, true] {
            out.push(Signal::new(initial, vec![1, 1 + w]).expect("increasing"));
        }
    }
    out
}

fn pair_case(rng: &mut impl Rng) -> (P, P, S) {
    let p = rand_bdc(rng, 3, Some(true));
    let q = rand_bdc(rng, 3, Some(true));
    (p, q, rand_signal(rng, 8, 4))
}

fn compose_case(rng: &mut impl Rng) -> (P, P, S) {
    let p = rand_bdc(rng, 2, Some(true));
    let q = rand_bdc(rng, 2, Some(true));
    (p, q, rand_signal(rng, 8, 3))
}

fn pair_grid() -> GridConfig<i64> {
    GridConfig::new(0, 20).expect("valid horizon")
}

/// Inputs tried when a claim says some input must behave differently.
fn probe_inputs() -> Vec<S> {
    input_candidates(1, 8, 2).expect("small range")
}

fn sols(u: &S, e: &CondExpr<i64>, g: &GridConfig<i64>) -> Result<Vec<S>, OracleError> {
    enumerate_solutions(u, e, g)
}

fn bdc(p: &P) -> CondExpr<i64> {
    CondExpr::bdc(*p)
}

// ---- suites ----

fn t1(rng: &mut impl Rng) -> Result<Outcome, VerifyError> {
    let mut o = Outcome::default();
    let p = rand_bdc(rng, 6, Some(true));
    let u = rand_signal(rng, 10, 4);
    let g = GridConfig::new(0, 24)?;
    let (lo, hi) = (p.min_solution(&u)?, p.max_solution(&u)?);
    let hull = solution_hull(&u, &bdc(&p), &g)?;
    o.check(hull.is_some(), || format!("p={p} u={u}: no solution"));
    o.check(is_solution(&u, &lo, &bdc(&p), &g)?, || {
        format!("p={p} u={u}: min {lo} rejected")
    });
    o.check(is_solution(&u, &hi, &bdc(&p), &g)?, || {
        format!("p={p} u={u}: max {hi} rejected")
    });
    if let Some((meet, join)) = hull {
        o.check(meet == lo && join == hi, || {
            format!("p={p} u={u}: hull ({meet}, {join}) != ({lo}, {hi})")
        });
    }

    let bad = rand_bdc(rng, 6, Some(false));
    let span = 2 * (bad.dr() + bad.df()) + 4;
    let g = GridConfig::new(0, span)?;
    let w = find_empty_witness(&bdc(&bad), &g, 2)?;
    o.check(w.is_some(), || {
        format!("p={bad} violates CC but no witness on [0, {span}]")
    });
    Ok(o)
}

fn t14a(p: &P, q: &P, u: &S) -> Result<Outcome, VerifyError> {
    let mut o = Outcome::default();
    let g = pair_grid();
    let both = bdc(p).and(&bdc(q));
    match p.intersection(q)? {
        Some(r) => {
            let (a, b) = (sols(u, &both, &g)?, sols(u, &bdc(&r), &g)?);
            o.check(set_equal(&a, &b), || {
                let extra = a.iter().chain(&b).find(|x| a.contains(x) != b.contains(x));
                format!(
                    "p={p} q={q} r={r} u={u}: |p&q|={} |r|={} differ at {}",
                    a.len(),
                    b.len(),
                    extra.map(|x| x.to_string()).unwrap_or_default()
                )
            });
        }
        None => {
            let w = find_empty_among(&both, &g, &probe_inputs())?;
            o.check(w.is_some(), || {
                format!("p={p} q={q}: no intersection but every probe is solvable")
            });
        }
    }
    Ok(o)
}

fn union_gap(p: &P, q: &P, env: &P, u: &S, g: &GridConfig<i64>) -> Result<(bool, Option<S>), OracleError> {
    let mut union = sols(u, &bdc(p), g)?;
    union.extend(sols(u, &bdc(q), g)?);
    let big = sols(u, &bdc(env), g)?;
    let outside = big.iter().find(|x| !union.contains(x)).cloned();
    Ok((set_subset(&union, &big), outside))
}

fn t14b(p: &P, q: &P, u: &S) -> Result<Outcome, VerifyError> {
    let mut o = Outcome::default();
    let g = pair_grid();
    let env = p.union_envelope(q)?;
    let (sub, outside) = union_gap(p, q, &env, u, &g)?;
    o.check(sub, || {
        format!("p={p} q={q} env={env} u={u}: union not inside envelope")
    });
    if p.intersection(q)?.is_some() {
        o.check(outside.is_none(), || {
            format!(
                "p={p} q={q} env={env} u={u}: {} solves the envelope but neither",
                outside.as_ref().expect("present")
            )
        });
    } else {
        let mut strict = false;
        for v in probe_inputs() {
            if union_gap(p, q, &env, &v, &g)?.1.is_some() {
                strict = true;
                break;
            }
        }
        o.check(strict, || {
            format!("p={p} q={q} env={env}: no intersection but every probe has equality")
        });
    }
    Ok(o)
}

fn t14c(p: &P, inputs: &[S]) -> Result<Outcome, VerifyError> {
    let mut o = Outcome::default();
    let det = p.is_deterministic()?;
    let mut all_single = true;
    for u in inputs {
        let last = u.switches().last().copied().unwrap_or(0);
        let g = GridConfig::new(0, last + p.dr().max(p.df()) + 2)?;
        let s = sols(u, &bdc(p), &g)?;
        if s.len() == 1 {
            let shifted = u.translate(p.dr())?;
            o.check(s[0] == shifted, || {
                format!("p={p} u={u}: singleton {} != translate {shifted}", s[0])
            });
        } else {
            all_single = false;
        }
    }
    o.check(det == all_single, || {
        format!("p={p}: deterministic={det} but all-singleton={all_single}")
    });
    if let Some(d) = p.as_translation()? {
        o.check(d == p.dr() && d == p.df(), || format!("p={p}: translation by {d}"));
    }
    Ok(o)
}

fn t14d(p: &P, q: &P, u: &S) -> Result<Outcome, VerifyError> {
    let mut o = Outcome::default();
    let g = pair_grid();
    let claim = p.includes(q)?;
    let sub = |v: &S| -> Result<Option<S>, OracleError> {
        let a = sols(v, &bdc(p), &g)?;
        let b = sols(v, &bdc(q), &g)?;
        Ok(a.into_iter().find(|x| !b.contains(x)))
    };
    if claim {
        let escaped = sub(u)?;
        o.check(escaped.is_none(), || {
            format!("p={p} q={q} u={u}: {} escapes", escaped.as_ref().expect("present"))
        });
    } else {
        let mut found = false;
        for v in probe_inputs() {
            if sub(&v)?.is_some() {
                found = true;
                break;
            }
        }
        o.check(found, || format!("p={p} q={q}: inclusion denied but no probe escapes"));
    }
    Ok(o)
}

/// Translation commutation on the same instances the pair and composition
/// suites draw for this trial.
fn t14e(rng: &mut ChaCha8Rng) -> Result<Outcome, VerifyError> {
    let mut o = Outcome::default();
    let mut shift = rng.clone();
    shift.set_word_pos(1 << 40);
    let (p, q, u) = pair_case(&mut rng.clone());
    let (cp, cq, cu) = compose_case(&mut rng.clone());
    for (p, u) in [(p, &u), (q, &u), (cp, &cu), (cq, &cu)] {
        let k = shift.gen_range(-3..=3);
        let g = pair_grid();
        let gk = GridConfig::new(k, 20 + k)?;
        let moved = sols(u, &bdc(&p), &g)?
            .into_iter()
            .map(|x| x.translate(k))
            .collect::<Result<Vec<_>, _>>()?;
        let direct = sols(&u.translate(k)?, &bdc(&p), &gk)?;
        o.check(set_equal(&moved, &direct), || {
            format!("p={p} u={u} k={k}: shifted sets differ")
        });
    }
    Ok(o)
}

fn t14f(p: &P, inputs: &[S]) -> Result<Outcome, VerifyError> {
    let mut o = Outcome::default();
    let claim = p.is_symmetrical();
    let mut dual = true;
    for u in inputs {
        let last = u.switches().last().copied().unwrap_or(0);
        let g = GridConfig::new(0, last + p.dr().max(p.df()) + 2)?;
        let flipped: Vec<S> = sols(u, &bdc(p), &g)?.iter().map(Signal::complement).collect();
        if !set_equal(&flipped, &sols(&u.complement(), &bdc(p), &g)?) {
            dual = false;
            break;
        }
    }
    o.check(claim == dual, || {
        format!("p={p}: symmetrical={claim} but complement duality={dual}")
    });
    Ok(o)
}

fn t14g(p: &P, q: &P, u: &S) -> Result<Outcome, VerifyError> {
    let mut o = Outcome::default();
    let g = pair_grid();
    let r = p.compose(q)?;
    let chained = enumerate_serial(u, &bdc(p), &bdc(q), &g)?;
    let direct = sols(u, &bdc(&r), &g)?;
    let stray = chained.iter().find(|y| !direct.contains(y));
    o.check(stray.is_none(), || {
        format!(
            "p={p} q={q} u={u}: {} reached in series but not by {r}",
            stray.expect("present")
        )
    });
    for y in &direct {
        let linked = serial_link_exists(u, y, &bdc(p), &bdc(q), &g, SERIAL_REFINE)?;
        o.check(linked, || {
            format!("p={p} q={q} u={u}: {y} solves {r} but has no intermediate")
        });
    }
    Ok(o)
}

/// Searches for an input with no solution: pulse trains on a long horizon,
/// then every input with up to three switches on a short one.
fn empty_witness(e: &CondExpr<i64>) -> Result<Option<S>, OracleError> {
    let reach = e.reach();
    let span = MAX_SPAN - 4;
    let g = GridConfig::new(0, span)?;
    let trains = pulse_trains(0, (span - reach - 1).max(1), 2 * reach + 3)?;
    if let Some(w) = find_empty_among(e, &g, &trains)? {
        return Ok(Some(w));
    }
    find_empty_witness(e, &GridConfig::new(0, 22)?, 3)
}

fn baidc(p: &P, a: &AicParams<i64>) -> Result<Outcome, VerifyError> {
    let mut o = Outcome::default();
    let claim = baidc_consistent(p, a)?;
    let w = empty_witness(&CondExpr::baidc(*p, *a))?;
    o.check(claim == w.is_none(), || match &w {
        Some(u) => format!("p={p} a={a}: claimed consistent, {u} has no solution"),
        None => format!("p={p} a={a}: claimed inconsistent, no witness found"),
    });
    Ok(o)
}

fn rand_baidc(rng: &mut impl Rng) -> (P, AicParams<i64>) {
    loop {
        let p = rand_bdc(rng, 2, Some(true));
        let a = AicParams::new(rng.gen_range(0..=2), rng.gen_range(0..=2)).expect("non-negative");
        if baidc_consistent(&p, &a).expect("cc holds") {
            return (p, a);
        }
    }
}

fn baidc_serial(rng: &mut impl Rng) -> Result<Outcome, VerifyError> {
    let mut o = Outcome::default();
    let (p, a) = rand_baidc(rng);
    let (q, b) = rand_baidc(rng);
    let u = rand_signal(rng, 8, 3);
    let g = pair_grid();
    let target = CondExpr::baidc(p.compose(&q)?, b);
    let ys = enumerate_serial(&u, &CondExpr::baidc(p, a), &CondExpr::baidc(q, b), &g)?;
    o.check(!ys.is_empty(), || {
        format!("p={p} a={a} q={q} b={b} u={u}: empty serial set")
    });
    for y in &ys {
        o.check(is_solution(&u, y, &target, &g)?, || {
            format!("p={p} a={a} q={q} b={b} u={u}: {y} outside {target}")
        });
    }
    Ok(o)
}

fn t42(rng: &mut impl Rng) -> Result<Outcome, VerifyError> {
    let mut o = Outcome::default();
    let (r, a) = loop {
        let r = rand_ric(rng, 4);
        if let Some(a) = r.to_aic() {
            break (r, a);
        }
    };
    let u = rand_signal(rng, 10, 4);
    let g = pair_grid();
    let xs = sols(&u, &CondExpr::single(Atom::Ric(r))?, &g)?;
    for x in &xs {
        o.check(a.member(x), || format!("r={r} u={u}: {x} fails {a}"));
    }
    Ok(o)
}

fn t45(p: &P, r: &RicParams<i64>) -> Result<Outcome, VerifyError> {
    let mut o = Outcome::default();
    let claim = bridc_consistent(p, r)?;
    o.regimes = bridc_regimes(p, r)?;
    let w = empty_witness(&CondExpr::bridc(*p, *r))?;
    o.check(claim == w.is_none(), || match &w {
        Some(u) => format!("p={p} r={r}: claimed consistent, {u} has no solution"),
        None => format!("p={p} r={r}: claimed inconsistent, no witness found"),
    });
    Ok(o)
}

fn t47(rng: &mut impl Rng) -> Result<Outcome, VerifyError> {
    let mut o = Outcome::default();
    let p = if rng.gen_ratio(1, 4) {
        BdcParams::fixed(rng.gen_range(0..=4))?
    } else {
        rand_bdc(rng, 4, Some(true))
    };
    let u = rand_signal(rng, 10, 4);
    let g = GridConfig::new(0, 24)?;
    let det = bridc_det_output(&u, &p)?;
    let xs = sols(&u, &CondExpr::bridc(p, p.into()), &g)?;
    o.check(xs.len() == 1 && xs[0] == det, || {
        format!("p={p} u={u}: det {det}, oracle has {} solutions", xs.len())
    });
    if p.mr() == 0 && p.mf() == 0 {
        let shifted = u.translate(p.dr())?;
        o.check(det == shifted, || {
            format!("p={p} u={u}: det {det} != translate {shifted}")
        });
    }
    let k = rng.gen_range(-5..=5);
    let moved = bridc_det_output(&u.translate(k)?, &p)?;
    o.check(moved == det.translate(k)?, || {
        format!("p={p} u={u} k={k}: not time invariant")
    });
    for c in [false, true] {
        let s = Signal::constant(c);
        o.check(bridc_det_output(&s, &p)? == s, || {
            format!("p={p}: constant {c} not fixed")
        });
    }
    Ok(o)
}

fn pulse(rng: &mut impl Rng) -> Result<Outcome, VerifyError> {
    let mut o = Outcome::default();
    let p = rand_bdc(rng, 4, Some(true));
    let u = rand_pulse(rng, 7);
    let w = u.switches()[1] - u.switches()[0];
    let x = bridc_det_output(&u, &p)?;
    let (dir, m) = if u.initial() {
        (Direction::Falling, p.mf())
    } else {
        (Direction::Rising, p.mr())
    };
    let moved = x.edges().iter().any(|e| e.direction == dir);
    o.check(!moved || w > m, || {
        format!("p={p} u={u}: width {w} <= {m} passed through")
    });
    o.check(moved || w <= m, || format!("p={p} u={u}: width {w} > {m} filtered out"));
    Ok(o)
}
