//! Exact delay conditions for asynchronous circuits over integer-tick time.
//!
//! - [`signal`]: Boolean step signals and sliding-window operators.
//! - [`algebra`]: bounded, absolute-inertial and relative-inertial delay
//!   conditions, their consistency criteria and parameter algebra.
//! - [`oracle`]: brute-force solution sets over a bounded horizon, and the
//!   property suites built on them.
//! - [`sim`]: gate-level simulation with deterministic delays and envelope
//!   propagation for bounded ones.
//! - [`io`]: waveform text, VCD and run configuration.
//!
//! The core types are generic over the tick integer; the aliases below fix
//! it to `i64`, which is what the simulator, oracle and file formats use.

pub mod algebra;
pub mod io;
pub mod oracle;
pub mod signal;
pub mod sim;
pub mod tick;

pub use tick::TickInt;

/// Time coordinate used throughout the concrete API.
pub type Tick = i64;
pub type Signal = signal::Signal<Tick>;
pub type Edge = signal::Edge<Tick>;
pub type BdcParams = algebra::BdcParams<Tick>;
pub type AicParams = algebra::AicParams<Tick>;
pub type RicParams = algebra::RicParams<Tick>;
pub type Atom = algebra::Atom<Tick>;
pub type CondExpr = algebra::CondExpr<Tick>;
pub type GridConfig = oracle::GridConfig<Tick>;
