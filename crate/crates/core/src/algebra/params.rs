//! Parameter tuples for the bounded, absolute-inertial and relative-inertial
//! conditions.
//!
//! Range checks (`0 <= m <= d`, non-negative inertial parameters) are
//! enforced at construction and on deserialization. Consistency of a
//! bounded delay is *not* enforced here; see [`BdcParams::cc_holds`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::tick::TickInt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("{name} must satisfy 0 <= {memory} <= {bound} (got {memory}={m}, {bound}={d})")]
    MemoryRange {
        name: &'static str,
        memory: &'static str,
        bound: &'static str,
        m: String,
        d: String,
    },
    #[error("{name} must be non-negative (got {value})")]
    Negative { name: &'static str, value: String },
}

fn check_memory<T: TickInt>(
    name: &'static str,
    memory: &'static str,
    bound: &'static str,
    m: T,
    d: T,
) -> Result<(), ParamError> {
    if m < T::zero() || m > d {
        Err(ParamError::MemoryRange {
            name,
            memory,
            bound,
            m: m.to_string(),
            d: d.to_string(),
        })
    } else {
        Ok(())
    }
}

fn check_non_negative<T: TickInt>(name: &'static str, v: T) -> Result<(), ParamError> {
    if v < T::zero() {
        Err(ParamError::Negative {
            name,
            value: v.to_string(),
        })
    } else {
        Ok(())
    }
}

/// Bounded delay parameters: rising/falling memories `mr`, `mf` and upper
/// bounds `dr`, `df`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBdc<T>", bound(deserialize = "T: TickInt + Deserialize<'de>"))]
pub struct BdcParams<T> {
    mr: T,
    dr: T,
    mf: T,
    df: T,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBdc<T> {
    mr: T,
    dr: T,
    mf: T,
    df: T,
}

impl<T: TickInt> TryFrom<RawBdc<T>> for BdcParams<T> {
    type Error = ParamError;

    fn try_from(raw: RawBdc<T>) -> Result<Self, ParamError> {
        BdcParams::new(raw.mr, raw.dr, raw.mf, raw.df)
    }
}

impl<T: TickInt> BdcParams<T> {
    pub fn new(mr: T, dr: T, mf: T, df: T) -> Result<Self, ParamError> {
        check_memory("bounded delay", "mr", "dr", mr, dr)?;
        check_memory("bounded delay", "mf", "df", mf, df)?;
        Ok(BdcParams { mr, dr, mf, df })
    }

    /// The memoryless tuple `(0, d, 0, d)`, i.e. a pure delay by `d`.
    pub fn fixed(d: T) -> Result<Self, ParamError> {
        Self::new(T::zero(), d, T::zero(), d)
    }

    pub fn mr(&self) -> T {
        self.mr
    }

    pub fn dr(&self) -> T {
        self.dr
    }

    pub fn mf(&self) -> T {
        self.mf
    }

    pub fn df(&self) -> T {
        self.df
    }

    /// Lower bound of the delay of rising transitions, `df - mf`.
    pub fn rise_lower(&self) -> T {
        self.df - self.mf
    }

    /// Lower bound of the delay of falling transitions, `dr - mr`.
    pub fn fall_lower(&self) -> T {
        self.dr - self.mr
    }
}

impl<T: TickInt> fmt::Display for BdcParams<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(mr={}, dr={}, mf={}, df={})", self.mr, self.dr, self.mf, self.df)
    }
}

/// Absolute inertial parameters: minimum hold times after a rise and a fall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawAic<T>", bound(deserialize = "T: TickInt + Deserialize<'de>"))]
pub struct AicParams<T> {
    delta_r: T,
    delta_f: T,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAic<T> {
    delta_r: T,
    delta_f: T,
}

impl<T: TickInt> TryFrom<RawAic<T>> for AicParams<T> {
    type Error = ParamError;

    fn try_from(raw: RawAic<T>) -> Result<Self, ParamError> {
        AicParams::new(raw.delta_r, raw.delta_f)
    }
}

impl<T: TickInt> AicParams<T> {
    pub fn new(delta_r: T, delta_f: T) -> Result<Self, ParamError> {
        check_non_negative("delta_r", delta_r)?;
        check_non_negative("delta_f", delta_f)?;
        Ok(AicParams { delta_r, delta_f })
    }

    pub fn delta_r(&self) -> T {
        self.delta_r
    }

    pub fn delta_f(&self) -> T {
        self.delta_f
    }
}

impl<T: TickInt> fmt::Display for AicParams<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(delta_r={}, delta_f={})", self.delta_r, self.delta_f)
    }
}

/// Relative inertial parameters. A rise of the output at `t` needs the input
/// at 1 on `[t - delta_r, t - delta_r + mu_r]`; falls are dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRic<T>", bound(deserialize = "T: TickInt + Deserialize<'de>"))]
pub struct RicParams<T> {
    mu_r: T,
    delta_r: T,
    mu_f: T,
    delta_f: T,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRic<T> {
    mu_r: T,
    delta_r: T,
    mu_f: T,
    delta_f: T,
}

impl<T: TickInt> TryFrom<RawRic<T>> for RicParams<T> {
    type Error = ParamError;

    fn try_from(raw: RawRic<T>) -> Result<Self, ParamError> {
        RicParams::new(raw.mu_r, raw.delta_r, raw.mu_f, raw.delta_f)
    }
}

impl<T: TickInt> RicParams<T> {
    pub fn new(mu_r: T, delta_r: T, mu_f: T, delta_f: T) -> Result<Self, ParamError> {
        check_memory("relative inertia", "mu_r", "delta_r", mu_r, delta_r)?;
        check_memory("relative inertia", "mu_f", "delta_f", mu_f, delta_f)?;
        Ok(RicParams {
            mu_r,
            delta_r,
            mu_f,
            delta_f,
        })
    }

    pub fn mu_r(&self) -> T {
        self.mu_r
    }

    pub fn delta_r(&self) -> T {
        self.delta_r
    }

    pub fn mu_f(&self) -> T {
        self.mu_f
    }

    pub fn delta_f(&self) -> T {
        self.delta_f
    }
}

impl<T: TickInt> From<BdcParams<T>> for RicParams<T> {
    /// Reuses the bounded-delay windows as relative-inertia windows
    /// (`mu = m`, `delta = d`).
    fn from(p: BdcParams<T>) -> Self {
        RicParams {
            mu_r: p.mr,
            delta_r: p.dr,
            mu_f: p.mf,
            delta_f: p.df,
        }
    }
}

impl<T: TickInt> fmt::Display for RicParams<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(mu_r={}, delta_r={}, mu_f={}, delta_f={})",
            self.mu_r, self.delta_r, self.mu_f, self.delta_f
        )
    }
}
