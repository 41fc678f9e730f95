//! Absolute and relative inertia, and their conjunctions with bounded
//! delays.

use std::fmt;

use serde::Serialize;

use super::params::{AicParams, BdcParams, RicParams};
use super::AlgebraError;
use crate::signal::{Direction, Signal};
use crate::tick::{self, TickInt};

impl<T: TickInt> AicParams<T> {
    /// Every 1-run entered by a rise lasts more than `delta_r` ticks and
    /// every 0-run entered by a fall lasts more than `delta_f` ticks.
    pub fn member(&self, x: &Signal<T>) -> bool {
        let edges = x.edges();
        edges.windows(2).all(|pair| {
            let hold = match pair[0].direction {
                Direction::Rising => self.delta_r(),
                Direction::Falling => self.delta_f(),
            };
            // [t, t + hold] must fit before the next switch.
            pair[1].at - pair[0].at > hold
        })
    }
}

impl<T: TickInt> RicParams<T> {
    /// Signal that is 1 at `t` when a rise of the output at `t` is allowed.
    pub fn rise_enable(&self, u: &Signal<T>) -> Result<Signal<T>, AlgebraError> {
        Ok(u.window_and(self.delta_r(), self.mu_r())?)
    }

    /// Signal that is 1 at `t` when a fall of the output at `t` is allowed.
    pub fn fall_enable(&self, u: &Signal<T>) -> Result<Signal<T>, AlgebraError> {
        Ok(u.complement().window_and(self.delta_f(), self.mu_f())?)
    }

    pub fn member(&self, u: &Signal<T>, x: &Signal<T>) -> Result<bool, AlgebraError> {
        let rise = self.rise_enable(u)?;
        let fall = self.fall_enable(u)?;
        Ok(x.edges().iter().all(|e| match e.direction {
            Direction::Rising => rise.value_at(e.at),
            Direction::Falling => fall.value_at(e.at),
        }))
    }

    /// Absolute inertia implied by this relative inertia, when
    /// `delta_r >= delta_f - mu_f` and `delta_f >= delta_r - mu_r`.
    ///
    /// A solution can only rise once the input has held 1 long enough, and
    /// only fall after it held 0; the gap between the two windows is the
    /// guaranteed hold time.
    pub fn to_aic(&self) -> Option<AicParams<T>> {
        let (mu_r, delta_r, mu_f, delta_f) = (self.mu_r(), self.delta_r(), self.mu_f(), self.delta_f());
        if delta_r < delta_f - mu_f || delta_f < delta_r - mu_r {
            return None;
        }
        AicParams::new(delta_f - delta_r + mu_r, delta_r - delta_f + mu_f).ok()
    }
}

/// Whether a bounded delay conjoined with absolute inertia still admits a
/// solution for every input: `delta_r + delta_f <= mr + mf`.
pub fn baidc_consistent<T: TickInt>(p: &BdcParams<T>, a: &AicParams<T>) -> Result<bool, AlgebraError> {
    p.require_cc()?;
    let hold = tick::add(a.delta_r(), a.delta_f())?;
    let memory = tick::add(p.mr(), p.mf())?;
    Ok(hold <= memory)
}

/// The four parameter regimes under which a bounded delay conjoined with
/// relative inertia admits a solution for every input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BridcRegime {
    /// `df-mf <= delta_r <= dr <= delta_r-mu_r+mr` and
    /// `dr-mr <= delta_f <= df <= delta_f-mu_f+mf`.
    #[serde(rename = "b.i")]
    I,
    /// `dr-mr+mu_r <= delta_r <= df-mf <= dr` and
    /// `df-mf+mu_f <= delta_f <= dr-mr <= df`.
    #[serde(rename = "b.ii")]
    II,
    /// `df-mf <= delta_r <= dr-mr+mu_r <= dr` and
    /// `dr-mr <= delta_f <= df-mf+mu_f <= df`.
    #[serde(rename = "b.iii")]
    III,
    /// `delta_r <= df-mf <= delta_r+mr-mu_r <= dr` and
    /// `delta_f <= dr-mr <= delta_f+mf-mu_f <= df`.
    #[serde(rename = "b.iv")]
    IV,
}

impl BridcRegime {
    pub const ALL: [BridcRegime; 4] = [Self::I, Self::II, Self::III, Self::IV];

    pub fn label(self) -> &'static str {
        match self {
            Self::I => "b.i",
            Self::II => "b.ii",
            Self::III => "b.iii",
            Self::IV => "b.iv",
        }
    }
}

impl fmt::Display for BridcRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn chain<T: TickInt>(values: &[T]) -> bool {
    values.windows(2).all(|w| w[0] <= w[1])
}

/// Evaluates one regime literally, clause by clause.
pub fn bridc_regime_holds<T: TickInt>(
    regime: BridcRegime,
    p: &BdcParams<T>,
    r: &RicParams<T>,
) -> Result<bool, AlgebraError> {
    let (mr, dr, mf, df) = (p.mr(), p.dr(), p.mf(), p.df());
    let (mu_r, delta_r, mu_f, delta_f) = (r.mu_r(), r.delta_r(), r.mu_f(), r.delta_f());
    // Sums like delta_r - mu_r + mr can exceed the range of T.
    let a = |x: T, y: T| tick::add(x, y);
    let s = |x: T, y: T| tick::sub(x, y);
    let rise_lower = s(df, mf)?;
    let fall_lower = s(dr, mr)?;
    Ok(match regime {
        BridcRegime::I => {
            chain(&[rise_lower, delta_r, dr, a(s(delta_r, mu_r)?, mr)?])
                && chain(&[fall_lower, delta_f, df, a(s(delta_f, mu_f)?, mf)?])
        }
        BridcRegime::II => {
            chain(&[a(fall_lower, mu_r)?, delta_r, rise_lower, dr])
                && chain(&[a(rise_lower, mu_f)?, delta_f, fall_lower, df])
        }
        BridcRegime::III => {
            chain(&[rise_lower, delta_r, a(fall_lower, mu_r)?, dr])
                && chain(&[fall_lower, delta_f, a(rise_lower, mu_f)?, df])
        }
        BridcRegime::IV => {
            chain(&[delta_r, rise_lower, s(a(delta_r, mr)?, mu_r)?, dr])
                && chain(&[delta_f, fall_lower, s(a(delta_f, mf)?, mu_f)?, df])
        }
    })
}

/// All regimes that hold for `(p, r)`; the pair is consistent when this is
/// non-empty.
pub fn bridc_regimes<T: TickInt>(p: &BdcParams<T>, r: &RicParams<T>) -> Result<Vec<BridcRegime>, AlgebraError> {
    let mut out = Vec::new();
    for regime in BridcRegime::ALL {
        if bridc_regime_holds(regime, p, r)? {
            out.push(regime);
        }
    }
    Ok(out)
}

pub fn bridc_consistent<T: TickInt>(p: &BdcParams<T>, r: &RicParams<T>) -> Result<bool, AlgebraError> {
    Ok(!bridc_regimes(p, r)?.is_empty())
}

/// The unique output of the bounded delay conjoined with relative inertia
/// on the same windows (`mu = m`, `delta = d`).
///
/// The output is a set/reset latch: it is set while `u` has held 1 over the
/// rising window and reset while `u` has held 0 over the falling window.
/// Consistency makes the two enables disjoint, so the latch is never driven
/// both ways at once. Before any switch the output equals the input.
pub fn bridc_det_output<T: TickInt>(u: &Signal<T>, p: &BdcParams<T>) -> Result<Signal<T>, AlgebraError> {
    p.require_cc()?;
    let set = u.window_and(p.dr(), p.mr())?;
    let reset = u.complement().window_and(p.df(), p.mf())?;
    debug_assert!(set.and(&reset).leq(&Signal::constant(false)));

    let initial = u.initial();
    let mut level = initial;
    let mut switches = Vec::new();
    let (mut i, mut j) = (0, 0);
    let (s, r) = (set.switches(), reset.switches());
    while i < s.len() || j < r.len() {
        let t = match (s.get(i), r.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        while s.get(i).is_some_and(|&a| a <= t) {
            i += 1;
        }
        while r.get(j).is_some_and(|&b| b <= t) {
            j += 1;
        }
        let next = if set.value_at(t) {
            true
        } else if reset.value_at(t) {
            false
        } else {
            level
        };
        if next != level {
            switches.push(t);
            level = next;
        }
    }
    Ok(Signal::new(initial, switches)?)
}
