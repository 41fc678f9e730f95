//! Depth-first search over tick bit-vectors.
//!
//! The unknown signal is assigned one tick at a time from `lo` to `hi`.
//! After each assignment every constraint instance whose reads are now fully
//! assigned is evaluated pointwise, directly from the definitions; nothing in
//! here goes through the run-based window operators of [`crate::signal`].

use std::collections::HashSet;

use super::GridAtom;

/// A tick-aligned signal known on every tick, stored densely between its
/// first and last switch and extended by its tails.
#[derive(Debug, Clone)]
pub(crate) struct Dense {
    initial: bool,
    start: i64,
    bits: Vec<bool>,
}

impl Dense {
    pub(crate) fn new(initial: bool, switches: Vec<i64>) -> Self {
        let (Some(&start), Some(&end)) = (switches.first(), switches.last()) else {
            return Dense {
                initial,
                start: 0,
                bits: Vec::new(),
            };
        };
        let mut bits = Vec::with_capacity((end - start + 1) as usize);
        let mut v = initial;
        let mut next = switches.iter().peekable();
        for t in start..=end {
            while next.next_if(|&&s| s <= t).is_some() {
                v = !v;
            }
            bits.push(v);
        }
        Dense { initial, start, bits }
    }

    #[inline]
    pub(crate) fn at(&self, t: i64) -> bool {
        if t < self.start || self.bits.is_empty() {
            return self.initial;
        }
        let k = ((t - self.start) as usize).min(self.bits.len() - 1);
        self.bits[k]
    }
}

/// Which side of an atom the searched signal sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    /// The searched signal is the output; the known signal is the input.
    Output,
    /// The searched signal is the input; the known signal is the output.
    Input,
}

#[derive(Debug, Clone)]
pub(crate) struct Constraint {
    pub atom: GridAtom,
    pub known: Dense,
    pub side: Side,
}

impl Constraint {
    /// Latest tick of the searched signal read by the instance at `t`.
    fn last_read(&self, t: i64) -> i64 {
        match (self.side, self.atom) {
            (Side::Output, GridAtom::Aic { dr, df }) => t + dr.max(df),
            (Side::Output, _) => t,
            (Side::Input, GridAtom::Fdc { d }) => t - d,
            (Side::Input, GridAtom::Bdc { mr, dr, mf, df }) => t - (dr - mr).min(df - mf),
            (Side::Input, GridAtom::Ric { mu_r, dr, mu_f, df }) => t - (dr - mu_r).min(df - mu_f),
            (Side::Input, GridAtom::Aic { .. }) => i64::MIN,
        }
    }

    /// Number of consecutive ticks of the searched signal one instance reads.
    fn width(&self) -> i64 {
        match (self.side, self.atom) {
            (Side::Output, GridAtom::Aic { dr, df }) => dr.max(df) + 2,
            (Side::Output, GridAtom::Ric { .. }) => 2,
            (Side::Output, _) => 1,
            (Side::Input, GridAtom::Bdc { mr, dr, mf, df }) => dr.max(df) - (dr - mr).min(df - mf) + 1,
            (Side::Input, GridAtom::Ric { mu_r, dr, mu_f, df }) => dr.max(df) - (dr - mu_r).min(df - mu_f) + 1,
            (Side::Input, _) => 1,
        }
    }

    /// Evaluates the instance at `t` with `x` the searched signal.
    fn holds(&self, t: i64, x: &impl Fn(i64) -> bool) -> bool {
        let k = |s: i64| self.known.at(s);
        match self.side {
            Side::Output => check(self.atom, t, &k, x),
            Side::Input => check(self.atom, t, x, &k),
        }
    }
}

fn all(lo: i64, hi: i64, f: impl Fn(i64) -> bool) -> bool {
    (lo..=hi).all(f)
}

fn any(lo: i64, hi: i64, f: impl Fn(i64) -> bool) -> bool {
    (lo..=hi).any(f)
}

/// Pointwise truth of one atom at time `t` for input `u` and output `x`.
pub(crate) fn check(atom: GridAtom, t: i64, u: &impl Fn(i64) -> bool, x: &impl Fn(i64) -> bool) -> bool {
    match atom {
        GridAtom::Fdc { d } => x(t) == u(t - d),
        GridAtom::Bdc { mr, dr, mf, df } => {
            let low = all(t - dr, t - dr + mr, u);
            let high = any(t - df, t - df + mf, u);
            (!low || x(t)) && (!x(t) || high)
        }
        GridAtom::Aic { dr, df } => {
            let (before, now) = (x(t - 1), x(t));
            if !before && now {
                all(t, t + dr, x)
            } else if before && !now {
                all(t, t + df, |s| !x(s))
            } else {
                true
            }
        }
        GridAtom::Ric { mu_r, dr, mu_f, df } => {
            let (before, now) = (x(t - 1), x(t));
            if !before && now {
                all(t - dr, t - dr + mu_r, u)
            } else if before && !now {
                all(t - df, t - df + mu_f, |s| !u(s))
            } else {
                true
            }
        }
    }
}

/// A search problem: find bit-vectors on `[lo, hi]` (constant tails) that
/// satisfy every constraint at every `t` in `[check_lo, check_hi]`.
pub(crate) struct Problem {
    pub lo: i64,
    pub hi: i64,
    pub check_lo: i64,
    pub check_hi: i64,
    pub max_switches: Option<usize>,
    pub constraints: Vec<Constraint>,
    /// Bits forced to a value before the search starts.
    pub forced: Vec<Option<bool>>,
    /// `schedule[k]` lists the instances that become decidable once tick
    /// `lo + k` is assigned.
    schedule: Vec<Vec<(usize, i64)>>,
    /// Trailing bits that determine every future check; see [`Problem::search`].
    memory: usize,
}

impl Problem {
    pub(crate) fn new(lo: i64, hi: i64, pad: i64, max_switches: Option<usize>, constraints: Vec<Constraint>) -> Self {
        let n = (hi - lo + 1) as usize;
        let (check_lo, check_hi) = (lo - pad, hi + pad);
        let mut schedule = vec![Vec::new(); n];
        for (ci, c) in constraints.iter().enumerate() {
            for t in check_lo..=check_hi {
                let k = (c.last_read(t).clamp(lo, hi) - lo) as usize;
                schedule[k].push((ci, t));
            }
        }
        let width = constraints.iter().map(Constraint::width).max().unwrap_or(1);
        Problem {
            lo,
            hi,
            check_lo,
            check_hi,
            max_switches,
            constraints,
            forced: vec![None; n],
            schedule,
            memory: (width - 1).max(1) as usize,
        }
    }

    pub(crate) fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    /// Visits every solution in lexicographic order (earliest tick first,
    /// 0 before 1). The visitor returns `false` to stop the search.
    ///
    /// An instance decided at tick `k` reads at most `memory + 1` ticks
    /// ending at `k`, so whether a partial assignment extends to a solution
    /// depends only on `k`, its last `memory` bits and the switch count.
    /// Prefixes found to be dead ends are remembered by that key, which keeps
    /// the search polynomial in the horizon.
    pub(crate) fn search(&self, mut visit: impl FnMut(&[bool]) -> bool) {
        let mut bits = vec![false; self.len()];
        let mut dead = HashSet::new();
        self.dfs(0, 0, &mut bits, &mut dead, &mut visit);
    }

    fn key(&self, k: usize, switches: usize, bits: &[bool]) -> (usize, usize, u128) {
        let from = k.saturating_sub(self.memory);
        let tail = bits[from..k].iter().fold(0u128, |acc, &b| (acc << 1) | u128::from(b));
        (k, switches, tail)
    }

    /// Returns `None` when the visitor asked to stop, otherwise whether any
    /// solution extends the current prefix.
    fn dfs(
        &self,
        k: usize,
        switches: usize,
        bits: &mut Vec<bool>,
        dead: &mut HashSet<(usize, usize, u128)>,
        visit: &mut impl FnMut(&[bool]) -> bool,
    ) -> Option<bool> {
        if k == bits.len() {
            return visit(bits).then_some(true);
        }
        let key = (self.memory <= 128).then(|| self.key(k, switches, bits));
        if key.is_some_and(|key| dead.contains(&key)) {
            return Some(false);
        }
        let mut any = false;
        for value in [false, true] {
            if self.forced[k].is_some_and(|f| f != value) {
                continue;
            }
            let flips = switches + usize::from(k > 0 && bits[k - 1] != value);
            if self.max_switches.is_some_and(|cap| flips > cap) {
                continue;
            }
            bits[k] = value;
            if self.ready_instances_hold(k, &bits[..=k]) {
                any |= self.dfs(k + 1, flips, bits, dead, visit)?;
            }
        }
        if !any {
            if let Some(key) = key {
                dead.insert(key);
            }
        }
        Some(any)
    }

    fn ready_instances_hold(&self, k: usize, prefix: &[bool]) -> bool {
        let lo = self.lo;
        let last = prefix.len() - 1;
        let x = |t: i64| prefix[((t - lo).max(0) as usize).min(last)];
        self.schedule[k]
            .iter()
            .all(|&(ci, t)| self.constraints[ci].holds(t, &x))
    }

    /// Pointwise check of a complete assignment.
    pub(crate) fn accepts(&self, bits: &[bool]) -> bool {
        let lo = self.lo;
        let last = bits.len() - 1;
        let x = |t: i64| bits[((t - lo).max(0) as usize).min(last)];
        self.constraints
            .iter()
            .all(|c| (self.check_lo..=self.check_hi).all(|t| c.holds(t, &x)))
    }
}
