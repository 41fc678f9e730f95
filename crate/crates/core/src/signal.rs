//! Right-continuous, piecewise-constant Boolean signals over integer ticks.
//!
//! A [`Signal`] is stored as its value on `(-inf, first switch)` plus the
//! strictly increasing list of instants at which it flips. Every operation
//! here is exact: results are computed on switch lists, never by sampling.

use std::fmt;

use crate::tick::{self, TickInt, TickOverflow};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignalError {
    #[error("switch times must be strictly increasing (position {index}: {prev} then {next})")]
    NonMonotone { index: usize, prev: String, next: String },
    #[error("window width must be non-negative, got {0}")]
    NegativeWidth(String),
    #[error(transparent)]
    Overflow(#[from] TickOverflow),
}

/// A Boolean signal with finitely many switches.
///
/// Ordering is lexicographic on `(initial, switches)`, which gives solution
/// sets a reproducible iteration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signal<T> {
    initial: bool,
    switches: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Rising,
    Falling,
}

/// A switch of a signal, tagged with the direction it goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge<T> {
    pub at: T,
    pub direction: Direction,
}

impl<T> Edge<T> {
    pub fn rising(at: T) -> Self {
        Edge {
            at,
            direction: Direction::Rising,
        }
    }

    pub fn falling(at: T) -> Self {
        Edge {
            at,
            direction: Direction::Falling,
        }
    }
}

/// A maximal interval `[start, end)` on which a signal is 1; `None` stands
/// for the corresponding infinity.
type Run<T> = (Option<T>, Option<T>);

impl<T: TickInt> Signal<T> {
    pub fn new(initial: bool, switches: Vec<T>) -> Result<Self, SignalError> {
        for (i, w) in switches.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(SignalError::NonMonotone {
                    index: i + 1,
                    prev: w[0].to_string(),
                    next: w[1].to_string(),
                });
            }
        }
        Ok(Signal { initial, switches })
    }

    pub fn constant(value: bool) -> Self {
        Signal {
            initial: value,
            switches: Vec::new(),
        }
    }

    /// 1 on `[start, end)`, 0 elsewhere. An empty interval gives constant 0.
    pub fn pulse(start: T, end: T) -> Self {
        if start < end {
            Signal {
                initial: false,
                switches: vec![start, end],
            }
        } else {
            Self::constant(false)
        }
    }

    pub fn initial(&self) -> bool {
        self.initial
    }

    pub fn switches(&self) -> &[T] {
        &self.switches
    }

    /// Inverse of [`Signal::new`].
    pub fn into_parts(self) -> (bool, Vec<T>) {
        (self.initial, self.switches)
    }

    pub fn is_constant(&self) -> bool {
        self.switches.is_empty()
    }

    /// Value on the right tail, after the last switch.
    pub fn final_value(&self) -> bool {
        self.initial ^ (self.switches.len() % 2 == 1)
    }

    pub fn value_at(&self, t: T) -> bool {
        let flips = self.switches.partition_point(|&s| s <= t);
        self.initial ^ (flips % 2 == 1)
    }

    /// `x(t - 0)`. For tick-aligned signals this is the value at `t - 1`.
    pub fn left_limit(&self, t: T) -> bool {
        let flips = self.switches.partition_point(|&s| s < t);
        self.initial ^ (flips % 2 == 1)
    }

    pub fn edges(&self) -> Vec<Edge<T>> {
        let mut level = self.initial;
        self.switches
            .iter()
            .map(|&at| {
                level = !level;
                if level {
                    Edge::rising(at)
                } else {
                    Edge::falling(at)
                }
            })
            .collect()
    }

    fn runs(&self) -> Vec<Run<T>> {
        let mut runs = Vec::with_capacity(self.switches.len() / 2 + 1);
        let mut start: Option<Option<T>> = if self.initial { Some(None) } else { None };
        for &s in &self.switches {
            match start.take() {
                Some(begin) => runs.push((begin, Some(s))),
                None => start = Some(Some(s)),
            }
        }
        if let Some(begin) = start {
            runs.push((begin, None));
        }
        runs
    }

    /// Rebuilds a signal from 1-runs sorted by start. Touching or
    /// overlapping runs are merged.
    fn from_runs(runs: impl IntoIterator<Item = Run<T>>) -> Self {
        let mut merged: Vec<Run<T>> = Vec::new();
        for (start, end) in runs {
            if let Some(last) = merged.last_mut() {
                let touches = match (last.1, start) {
                    (None, _) | (_, None) => true,
                    (Some(prev_end), Some(s)) => s <= prev_end,
                };
                if touches {
                    last.1 = match (last.1, end) {
                        (Some(a), Some(b)) => Some(a.max(b)),
                        _ => None,
                    };
                    continue;
                }
            }
            merged.push((start, end));
        }
        let initial = matches!(merged.first(), Some((None, _)));
        let mut switches = Vec::with_capacity(merged.len() * 2);
        for (start, end) in merged {
            switches.extend(start);
            switches.extend(end);
        }
        Signal { initial, switches }
    }

    fn check_width(m: T) -> Result<(), SignalError> {
        if m < T::zero() {
            Err(SignalError::NegativeWidth(m.to_string()))
        } else {
            Ok(())
        }
    }

    /// `t -> AND of s(xi) for xi in [t - d, t - d + m]`.
    ///
    /// Each 1-run `[a, b)` erodes to `[a + d, b + d - m)`; runs of `m` ticks
    /// or fewer disappear.
    pub fn window_and(&self, d: T, m: T) -> Result<Self, SignalError> {
        Self::check_width(m)?;
        let fall_shift = tick::sub(d, m)?;
        let mut out = Vec::new();
        for (a, b) in self.runs() {
            let start = a.map(|a| tick::add(a, d)).transpose()?;
            let end = b.map(|b| tick::add(b, fall_shift)).transpose()?;
            if let (Some(s), Some(e)) = (start, end) {
                if e <= s {
                    continue;
                }
            }
            out.push((start, end));
        }
        Ok(Self::from_runs(out))
    }

    /// `t -> OR of s(xi) for xi in [t - d, t - d + m]`.
    ///
    /// Each 1-run `[a, b)` dilates to `[a + d - m, b + d)`.
    pub fn window_or(&self, d: T, m: T) -> Result<Self, SignalError> {
        Self::check_width(m)?;
        let rise_shift = tick::sub(d, m)?;
        let mut out = Vec::new();
        for (a, b) in self.runs() {
            let start = a.map(|a| tick::add(a, rise_shift)).transpose()?;
            let end = b.map(|b| tick::add(b, d)).transpose()?;
            out.push((start, end));
        }
        Ok(Self::from_runs(out))
    }

    /// `t -> AND of s(xi) for xi in [t, t + delta]`.
    pub fn forward_window_and(&self, delta: T) -> Result<Self, SignalError> {
        Self::check_width(delta)?;
        let mut out = Vec::new();
        for (a, b) in self.runs() {
            let end = b.map(|b| tick::sub(b, delta)).transpose()?;
            if let (Some(s), Some(e)) = (a, end) {
                if e <= s {
                    continue;
                }
            }
            out.push((a, end));
        }
        Ok(Self::from_runs(out))
    }

    /// `t -> s(t - d)`.
    pub fn translate(&self, d: T) -> Result<Self, SignalError> {
        let switches = self
            .switches
            .iter()
            .map(|&s| tick::add(s, d))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Signal {
            initial: self.initial,
            switches,
        })
    }

    pub fn complement(&self) -> Self {
        Signal {
            initial: !self.initial,
            switches: self.switches.clone(),
        }
    }

    /// Pointwise combination of two signals through `f`.
    pub fn zip_with(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        let (a, b) = (&self.switches, &other.switches);
        let (mut i, mut j) = (0, 0);
        let (mut va, mut vb) = (self.initial, other.initial);
        let initial = f(va, vb);
        let mut level = initial;
        let mut switches = Vec::new();
        while i < a.len() || j < b.len() {
            let t = match (a.get(i), b.get(j)) {
                (Some(&x), Some(&y)) => x.min(y),
                (Some(&x), None) => x,
                (None, Some(&y)) => y,
                (None, None) => unreachable!(),
            };
            if a.get(i) == Some(&t) {
                va = !va;
                i += 1;
            }
            if b.get(j) == Some(&t) {
                vb = !vb;
                j += 1;
            }
            let v = f(va, vb);
            if v != level {
                switches.push(t);
                level = v;
            }
        }
        Signal { initial, switches }
    }

    pub fn and(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn or(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a || b)
    }

    /// Pointwise `self <= other` over all of time.
    pub fn leq(&self, other: &Self) -> bool {
        let excess = self.zip_with(other, |a, b| a && !b);
        excess.is_constant() && !excess.initial
    }

    /// Keeps the values on `[lo, hi]` and extends them as constant tails.
    pub fn restrict(&self, lo: T, hi: T) -> Self {
        let initial = self.value_at(lo);
        let switches = self.switches.iter().copied().filter(|&s| s > lo && s <= hi).collect();
        Signal { initial, switches }
    }
}

impl<T: TickInt> fmt::Display for Signal<T> {
    /// `initial t1 t2 ...`, the body of a waveform line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(self.initial))?;
        for s in &self.switches {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}
