//! Brute-force solution sets over a bounded tick horizon.
//!
//! The oracle enumerates tick-aligned candidate outputs on `[lo, hi]`
//! (constant outside) and keeps those for which every condition holds at
//! every tick of the horizon padded by the largest window reach. Conditions
//! are evaluated pointwise from their definitions, independently of the
//! switch-list algorithms in [`crate::signal`] and [`crate::algebra`], so it
//! can serve as ground truth for them.

mod search;
pub mod verify;

use rayon::prelude::*;

use crate::algebra::{Atom, CondExpr};
use crate::signal::Signal;
use crate::tick::{self, TickInt, TickOverflow};
use search::{Constraint, Dense, Problem, Side};

/// Largest supported horizon span `hi - lo`.
pub const MAX_SPAN: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("horizon [{lo}, {hi}] is empty or wider than {MAX_SPAN} ticks")]
    Horizon { lo: i64, hi: i64 },
    #[error("more than {0} solutions; narrow the horizon or cap switches")]
    TooManySolutions(usize),
    #[error("signal switches at {at}, outside the horizon [{lo}, {hi}]")]
    OutsideHorizon { at: i64, lo: i64, hi: i64 },
    #[error("refinement factor must be at least 1")]
    Refinement,
    #[error(transparent)]
    Overflow(#[from] TickOverflow),
}

/// Horizon and caps for an enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridConfig<T> {
    lo: T,
    hi: T,
    /// Candidates with more switches inside the horizon are skipped.
    pub max_switches: Option<usize>,
    /// Enumeration fails with [`OracleError::TooManySolutions`] past this.
    pub max_solutions: usize,
}

impl<T: TickInt> GridConfig<T> {
    pub fn new(lo: T, hi: T) -> Result<Self, OracleError> {
        let (l, h) = (tick::to_i64(lo)?, tick::to_i64(hi)?);
        if l >= h || h - l > MAX_SPAN {
            return Err(OracleError::Horizon { lo: l, hi: h });
        }
        Ok(GridConfig {
            lo,
            hi,
            max_switches: None,
            max_solutions: 1 << 20,
        })
    }

    pub fn with_max_switches(mut self, cap: usize) -> Self {
        self.max_switches = Some(cap);
        self
    }

    pub fn with_max_solutions(mut self, cap: usize) -> Self {
        self.max_solutions = cap;
        self
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    fn bounds(&self) -> (i64, i64) {
        // Validated in `new`.
        (self.lo.to_i64().unwrap(), self.hi.to_i64().unwrap())
    }
}

/// An atom with plain `i64` parameters, used inside the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum GridAtom {
    Fdc { d: i64 },
    Bdc { mr: i64, dr: i64, mf: i64, df: i64 },
    Aic { dr: i64, df: i64 },
    Ric { mu_r: i64, dr: i64, mu_f: i64, df: i64 },
}

impl GridAtom {
    fn from_atom<T: TickInt>(atom: &Atom<T>, scale: i64) -> Result<Self, OracleError> {
        let c = |v: T| -> Result<i64, OracleError> {
            tick::to_i64(v)?
                .checked_mul(scale)
                .ok_or(OracleError::Overflow(TickOverflow))
        };
        Ok(match atom {
            Atom::Fdc { d } => GridAtom::Fdc { d: c(*d)? },
            Atom::Bdc(p) => GridAtom::Bdc {
                mr: c(p.mr())?,
                dr: c(p.dr())?,
                mf: c(p.mf())?,
                df: c(p.df())?,
            },
            Atom::Aic(a) => GridAtom::Aic {
                dr: c(a.delta_r())?,
                df: c(a.delta_f())?,
            },
            Atom::Ric(r) => GridAtom::Ric {
                mu_r: c(r.mu_r())?,
                dr: c(r.delta_r())?,
                mu_f: c(r.mu_f())?,
                df: c(r.delta_f())?,
            },
        })
    }

    fn reach(&self) -> i64 {
        match *self {
            GridAtom::Fdc { d } => d,
            GridAtom::Bdc { dr, df, .. } | GridAtom::Aic { dr, df } | GridAtom::Ric { dr, df, .. } => dr.max(df),
        }
    }
}

fn dense<T: TickInt>(s: &Signal<T>, scale: i64) -> Result<Dense, OracleError> {
    let switches = s
        .switches()
        .iter()
        .map(|&t| {
            tick::to_i64(t)?
                .checked_mul(scale)
                .ok_or(OracleError::Overflow(TickOverflow))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Dense::new(s.initial(), switches))
}

fn constraints<T: TickInt>(
    expr: &CondExpr<T>,
    known: &Signal<T>,
    side: Side,
    scale: i64,
) -> Result<Vec<Constraint>, OracleError> {
    let known = dense(known, scale)?;
    expr.atoms()
        .iter()
        .map(|a| {
            Ok(Constraint {
                atom: GridAtom::from_atom(a, scale)?,
                known: known.clone(),
                side,
            })
        })
        .collect()
}

fn pad_for(constraints: &[Constraint]) -> i64 {
    constraints.iter().map(|c| c.atom.reach()).max().unwrap_or(0) + 1
}

fn output_problem<T: TickInt>(u: &Signal<T>, expr: &CondExpr<T>, g: &GridConfig<T>) -> Result<Problem, OracleError> {
    let (lo, hi) = g.bounds();
    let cs = constraints(expr, u, Side::Output, 1)?;
    let pad = pad_for(&cs) + span_of(u, lo, hi);
    Ok(Problem::new(lo, hi, pad, g.max_switches, cs))
}

/// Extra padding so that input switches outside the horizon are still seen.
fn span_of<T: TickInt>(u: &Signal<T>, lo: i64, hi: i64) -> i64 {
    let first = u.switches().first().and_then(|t| t.to_i64()).unwrap_or(lo);
    let last = u.switches().last().and_then(|t| t.to_i64()).unwrap_or(hi);
    (lo - first).max(last - hi).max(0)
}

fn to_signal<T: TickInt>(lo: i64, bits: &[bool]) -> Result<Signal<T>, OracleError> {
    let mut switches = Vec::new();
    for k in 1..bits.len() {
        if bits[k] != bits[k - 1] {
            switches.push(tick::from_i64(lo + k as i64)?);
        }
    }
    Ok(Signal::new(bits[0], switches).expect("increasing by construction"))
}

fn to_bits<T: TickInt>(s: &Signal<T>, lo: i64, hi: i64) -> Result<Vec<bool>, OracleError> {
    for &t in s.switches() {
        let at = tick::to_i64(t)?;
        if at <= lo || at > hi {
            // A switch at `lo` itself cannot be represented with a constant left tail.
            return Err(OracleError::OutsideHorizon { at, lo, hi });
        }
    }
    let d = dense(s, 1)?;
    Ok((lo..=hi).map(|t| d.at(t)).collect())
}

/// Every solution of `expr` for input `u` on the horizon, in lexicographic
/// order of the tick bit-vector.
pub fn enumerate_solutions<T: TickInt>(
    u: &Signal<T>,
    expr: &CondExpr<T>,
    g: &GridConfig<T>,
) -> Result<Vec<Signal<T>>, OracleError> {
    let problem = output_problem(u, expr, g)?;
    let mut out = Vec::new();
    let mut overflow = false;
    problem.search(|bits| {
        if out.len() == g.max_solutions {
            overflow = true;
            return false;
        }
        out.push(bits.to_vec());
        true
    });
    if overflow {
        return Err(OracleError::TooManySolutions(g.max_solutions));
    }
    out.iter().map(|b| to_signal(problem.lo, b)).collect()
}

/// First solution in enumeration order, if any.
pub fn find_solution<T: TickInt>(
    u: &Signal<T>,
    expr: &CondExpr<T>,
    g: &GridConfig<T>,
) -> Result<Option<Signal<T>>, OracleError> {
    let problem = output_problem(u, expr, g)?;
    let mut found = None;
    problem.search(|bits| {
        found = Some(bits.to_vec());
        false
    });
    found.map(|b| to_signal(problem.lo, &b)).transpose()
}

pub fn has_solution<T: TickInt>(u: &Signal<T>, expr: &CondExpr<T>, g: &GridConfig<T>) -> Result<bool, OracleError> {
    Ok(find_solution(u, expr, g)?.is_some())
}

/// Pointwise meet and join of a solution set.
pub type Hull<T> = (Signal<T>, Signal<T>);

/// Pointwise meet and join of all solutions on the horizon, or `None` when
/// there are none. Computed with one existence query per undecided tick
/// value, so it scales to solution sets far too large to list.
pub fn solution_hull<T: TickInt>(
    u: &Signal<T>,
    expr: &CondExpr<T>,
    g: &GridConfig<T>,
) -> Result<Option<Hull<T>>, OracleError> {
    let mut problem = output_problem(u, expr, g)?;
    let n = problem.len();
    // seen[k][v]: some solution has value v at tick k.
    let mut seen = vec![[false; 2]; n];
    let mut first = None;
    problem.search(|bits| {
        first = Some(bits.to_vec());
        false
    });
    let Some(first) = first else {
        return Ok(None);
    };
    for (k, &b) in first.iter().enumerate() {
        seen[k][usize::from(b)] = true;
    }
    for k in 0..n {
        for v in [false, true] {
            if seen[k][usize::from(v)] {
                continue;
            }
            problem.forced[k] = Some(v);
            let mut hit = None;
            problem.search(|bits| {
                hit = Some(bits.to_vec());
                false
            });
            problem.forced[k] = None;
            if let Some(bits) = hit {
                for (j, &b) in bits.iter().enumerate() {
                    seen[j][usize::from(b)] = true;
                }
            }
        }
    }
    let low: Vec<bool> = seen.iter().map(|s| !s[0]).collect();
    let high: Vec<bool> = seen.iter().map(|s| s[1]).collect();
    Ok(Some((to_signal(problem.lo, &low)?, to_signal(problem.lo, &high)?)))
}

/// The oracle's own membership test for a signal whose switches lie inside
/// the horizon.
pub fn is_solution<T: TickInt>(
    u: &Signal<T>,
    x: &Signal<T>,
    expr: &CondExpr<T>,
    g: &GridConfig<T>,
) -> Result<bool, OracleError> {
    let problem = output_problem(u, expr, g)?;
    let bits = to_bits(x, problem.lo, problem.hi)?;
    Ok(problem.accepts(&bits))
}

/// All inputs on `[lo, hi]` with at most `max_switches` switches, ordered by
/// switch count, then by switch positions, then by initial value.
pub fn input_candidates<T: TickInt>(lo: T, hi: T, max_switches: usize) -> Result<Vec<Signal<T>>, OracleError> {
    let (l, h) = (tick::to_i64(lo)?, tick::to_i64(hi)?);
    let mut out = Vec::new();
    let ticks: Vec<i64> = (l..=h).collect();
    for count in 0..=max_switches.min(ticks.len()) {
        let mut combo: Vec<usize> = (0..count).collect();
        loop {
            for initial in [false, true] {
                let switches = combo
                    .iter()
                    .map(|&i| tick::from_i64(ticks[i]))
                    .collect::<Result<Vec<T>, _>>()?;
                out.push(Signal::new(initial, switches).expect("increasing by construction"));
            }
            if !next_combination(&mut combo, ticks.len()) {
                break;
            }
        }
    }
    Ok(out)
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Searches inputs switching inside `[g.lo + 1, g.hi - reach - 1]` (so
/// responses fit in the horizon) for one whose solution set is empty. Returns the
/// first such input in [`input_candidates`] order.
pub fn find_empty_witness<T: TickInt>(
    expr: &CondExpr<T>,
    g: &GridConfig<T>,
    input_switches: usize,
) -> Result<Option<Signal<T>>, OracleError> {
    let (lo, hi) = g.bounds();
    let reach = tick::to_i64(expr.reach())?;
    let input_lo = lo + 1;
    let input_hi = (hi - reach - 1).max(input_lo);
    let inputs = input_candidates(
        tick::from_i64::<T>(input_lo)?,
        tick::from_i64::<T>(input_hi)?,
        input_switches,
    )?;
    find_empty_among(expr, g, &inputs)
}

/// Periodic inputs starting with a switch at `lo + 1`: alternating runs of
/// `a` and `b` ticks (first run opposite to `initial`, both at most
/// `max_width`) until `hi`. Ordered by period, then `a`, then initial value.
pub fn pulse_trains<T: TickInt>(lo: T, hi: T, max_width: i64) -> Result<Vec<Signal<T>>, OracleError> {
    let (l, h) = (tick::to_i64(lo)?, tick::to_i64(hi)?);
    let mut out = Vec::new();
    for period in 2..=2 * max_width {
        for a in (period - max_width).max(1)..=max_width.min(period - 1) {
            let b = period - a;
            for initial in [false, true] {
                let mut switches = Vec::new();
                let mut t = l + 1;
                let mut widths = [a, b].into_iter().cycle();
                while t <= h {
                    switches.push(tick::from_i64(t)?);
                    t += widths.next().expect("cycle");
                }
                out.push(Signal::new(initial, switches).expect("increasing by construction"));
            }
        }
    }
    Ok(out)
}

/// First input of `inputs` (in order) whose solution set on `g` is empty.
pub fn find_empty_among<T: TickInt>(
    expr: &CondExpr<T>,
    g: &GridConfig<T>,
    inputs: &[Signal<T>],
) -> Result<Option<Signal<T>>, OracleError> {
    let found = inputs
        .par_iter()
        .map(|u| has_solution(u, expr, g).map(|ok| (!ok).then(|| u.clone())))
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        None => Ok(None),
        Some(r) => r,
    }
}

/// Whether some `x` solves `first` for `u` while `y` solves `second` for
/// `x`. Intermediate candidates live on a grid `refine` times finer than the
/// tick grid, with every time and parameter scaled accordingly.
pub fn serial_link_exists<T: TickInt>(
    u: &Signal<T>,
    y: &Signal<T>,
    first: &CondExpr<T>,
    second: &CondExpr<T>,
    g: &GridConfig<T>,
    refine: i64,
) -> Result<bool, OracleError> {
    if refine < 1 {
        return Err(OracleError::Refinement);
    }
    let (lo, hi) = g.bounds();
    let mut cs = constraints(first, u, Side::Output, refine)?;
    cs.extend(constraints(second, y, Side::Input, refine)?);
    let extra = span_of(u, lo, hi).max(span_of(y, lo, hi));
    let pad = pad_for(&cs) + extra * refine;
    let problem = Problem::new(lo * refine, hi * refine, pad, g.max_switches, cs);
    let mut found = false;
    problem.search(|_| {
        found = true;
        false
    });
    Ok(found)
}

/// `{ y : y solves second for some x solving first for u }`, both stages on
/// the tick grid, sorted and deduplicated.
pub fn enumerate_serial<T: TickInt>(
    u: &Signal<T>,
    first: &CondExpr<T>,
    second: &CondExpr<T>,
    g: &GridConfig<T>,
) -> Result<Vec<Signal<T>>, OracleError> {
    let mut out = std::collections::BTreeSet::new();
    for x in enumerate_solutions(u, first, g)? {
        out.extend(enumerate_solutions(&x, second, g)?);
        if out.len() > g.max_solutions {
            return Err(OracleError::TooManySolutions(g.max_solutions));
        }
    }
    Ok(out.into_iter().collect())
}

/// Extensional equality of two solution sets.
pub fn set_equal<T: TickInt>(a: &[Signal<T>], b: &[Signal<T>]) -> bool {
    set_subset(a, b) && set_subset(b, a)
}

/// Whether every element of `a` is in `b`.
pub fn set_subset<T: TickInt>(a: &[Signal<T>], b: &[Signal<T>]) -> bool {
    let b: std::collections::HashSet<&Signal<T>> = b.iter().collect();
    a.iter().all(|s| b.contains(s))
}
