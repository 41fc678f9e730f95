//! Gate-level simulation: netlists of truth-table gates whose outputs pass
//! through a delay element, an event-driven simulator for deterministic
//! delays, and min/max envelope propagation for bounded delays.

mod envelope;
mod event;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraError, BdcParams};
use crate::signal::{Signal, SignalError};
use crate::tick::TickOverflow;

pub use envelope::{envelope_propagate, Envelope};
pub use event::simulate;

/// Largest supported gate fan-in.
pub const MAX_FANIN: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("net {0:?} is driven more than once")]
    MultipleDrivers(String),
    #[error("net {0:?} is not driven")]
    Undriven(String),
    #[error("gate {gate:?}: truth table has {got} entries, expected {want}")]
    TableSize { gate: String, got: usize, want: usize },
    #[error("gate {gate:?}: truth table entries must be 0 or 1")]
    TableValue { gate: String },
    #[error("gate {gate:?} has {got} inputs; at most {MAX_FANIN} are supported")]
    Fanin { gate: String, got: usize },
    #[error("gate {gate:?}: {reason}")]
    Delay { gate: String, reason: String },
    #[error("zero-latency cycle through {0:?}")]
    ZeroLatencyCycle(Vec<String>),
    #[error("feedback cycle through {0:?}; envelopes need an acyclic netlist")]
    Cyclic(Vec<String>),
    #[error("no stimulus for primary input {0:?}")]
    MissingStimulus(String),
    #[error("stimulus for unknown input {0:?}")]
    UnknownStimulus(String),
    #[error("the circuit has no steady state for the initial input values")]
    NoSteadyState,
    #[error("empty horizon [{lo}, {hi}]")]
    Horizon { lo: i64, hi: i64 },
    #[error(transparent)]
    Overflow(#[from] TickOverflow),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Delay element on a gate output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DelayModel {
    /// `x(t) = u(t - d)`.
    Fixed { d: i64 },
    /// The deterministic relative-inertial delay with windows `p`.
    #[serde(rename = "bridc")]
    DetBridc(BdcParams<i64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DelayClass {
    Ideal,
    Inertial,
}

pub fn classify_delay(m: &DelayModel) -> DelayClass {
    match m {
        DelayModel::Fixed { .. } => DelayClass::Ideal,
        DelayModel::DetBridc(p) if p.mr() == 0 && p.mf() == 0 => DelayClass::Ideal,
        DelayModel::DetBridc(_) => DelayClass::Inertial,
    }
}

impl DelayModel {
    fn validate(&self) -> Result<(), String> {
        match self {
            DelayModel::Fixed { d } if *d < 0 => Err(format!("negative delay {d}")),
            DelayModel::DetBridc(p) if !p.cc_holds() => Err(format!("{p} violates the consistency condition")),
            _ => Ok(()),
        }
    }

    /// Ticks between an input change and the earliest output tick it can
    /// affect.
    pub fn latency(&self) -> i64 {
        match self {
            DelayModel::Fixed { d } => *d,
            DelayModel::DetBridc(p) => p.fall_lower().min(p.rise_lower()),
        }
    }

    /// The bounded delay whose solution set contains this element's output.
    pub fn as_bdc(&self) -> Result<BdcParams<i64>, AlgebraError> {
        match self {
            DelayModel::Fixed { d } => Ok(BdcParams::fixed(*d)?),
            DelayModel::DetBridc(p) => Ok(*p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gate {
    pub name: String,
    pub inputs: Vec<String>,
    /// Output per input combination; input `i` is bit `i` of the index.
    pub truth_table: Vec<u8>,
    pub delay: DelayModel,
}

impl Gate {
    pub fn eval(&self, bits: impl IntoIterator<Item = bool>) -> bool {
        let index = bits
            .into_iter()
            .enumerate()
            .fold(0usize, |acc, (i, b)| acc | (usize::from(b) << i));
        self.truth_table[index] == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Netlist {
    pub inputs: Vec<String>,
    pub gates: Vec<Gate>,
    pub outputs: Vec<String>,
}

/// A validated netlist with nets numbered: primary inputs first, then gate
/// outputs in declaration order.
#[derive(Debug, Clone)]
pub(crate) struct Compiled<'a> {
    pub netlist: &'a Netlist,
    /// Fan-in nets of each gate.
    pub fanin: Vec<Vec<usize>>,
    /// Gates reading each net.
    pub fanout: Vec<Vec<usize>>,
    /// Gate indices ordered so that zero-latency dependencies come first.
    pub order: Vec<usize>,
    /// Position of each gate in `order`.
    pub rank: Vec<usize>,
    /// Whether every dependency, not just zero-latency ones, is acyclic.
    pub acyclic: bool,
}

impl<'a> Compiled<'a> {
    pub fn inputs(&self) -> usize {
        self.netlist.inputs.len()
    }

    pub fn net_of_gate(&self, g: usize) -> usize {
        self.inputs() + g
    }

    pub fn net_name(&self, net: usize) -> &str {
        let k = self.inputs();
        if net < k {
            &self.netlist.inputs[net]
        } else {
            &self.netlist.gates[net - k].name
        }
    }
}

impl Netlist {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        self.compile().map(|_| ())
    }

    pub(crate) fn compile(&self) -> Result<Compiled<'_>, SimError> {
        let mut index = HashMap::new();
        let names = self.inputs.iter().chain(self.gates.iter().map(|g| &g.name));
        for (i, name) in names.enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(SimError::MultipleDrivers(name.clone()));
            }
        }
        let lookup = |n: &String| {
            index
                .get(n.as_str())
                .copied()
                .ok_or_else(|| SimError::Undriven(n.clone()))
        };
        let mut fanin = Vec::with_capacity(self.gates.len());
        let mut fanout = vec![Vec::new(); index.len()];
        for (gi, g) in self.gates.iter().enumerate() {
            if g.inputs.len() > MAX_FANIN {
                return Err(SimError::Fanin {
                    gate: g.name.clone(),
                    got: g.inputs.len(),
                });
            }
            let want = 1usize << g.inputs.len();
            if g.truth_table.len() != want {
                return Err(SimError::TableSize {
                    gate: g.name.clone(),
                    got: g.truth_table.len(),
                    want,
                });
            }
            if g.truth_table.iter().any(|&b| b > 1) {
                return Err(SimError::TableValue { gate: g.name.clone() });
            }
            g.delay.validate().map_err(|reason| SimError::Delay {
                gate: g.name.clone(),
                reason,
            })?;
            let nets = g.inputs.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
            for &n in &nets {
                if !fanout[n].contains(&gi) {
                    fanout[n].push(gi);
                }
            }
            fanin.push(nets);
        }
        for o in &self.outputs {
            lookup(o)?;
        }
        let k = self.inputs.len();
        let zero = topo(&fanin, k, |g| self.gates[g].delay.latency() == 0)
            .map_err(|cycle| SimError::ZeroLatencyCycle(self.names(&cycle)))?;
        let acyclic = topo(&fanin, k, |_| true).is_ok();
        let mut rank = vec![0; self.gates.len()];
        for (r, &g) in zero.iter().enumerate() {
            rank[g] = r;
        }
        Ok(Compiled {
            netlist: self,
            fanin,
            fanout,
            order: zero,
            rank,
            acyclic,
        })
    }

    fn names(&self, gates: &[usize]) -> Vec<String> {
        gates.iter().map(|&g| self.gates[g].name.clone()).collect()
    }

    /// Gates on some cycle of the full dependency graph, if any.
    pub(crate) fn cycle(&self, c: &Compiled<'_>) -> Vec<String> {
        match topo(&c.fanin, c.inputs(), |_| true) {
            Ok(_) => Vec::new(),
            Err(cycle) => self.names(&cycle),
        }
    }
}

/// Topological order of gates over the edges `driver -> reader` that pass
/// through a reader for which `tight(reader)` holds. Ties go by declaration
/// order. On failure returns the gates left on cycles.
fn topo(fanin: &[Vec<usize>], inputs: usize, tight: impl Fn(usize) -> bool) -> Result<Vec<usize>, Vec<usize>> {
    let n = fanin.len();
    let mut pending = vec![0usize; n];
    let mut readers = vec![Vec::new(); n];
    for (g, nets) in fanin.iter().enumerate() {
        if !tight(g) {
            continue;
        }
        for &net in nets {
            if net >= inputs {
                let driver = net - inputs;
                pending[g] += 1;
                readers[driver].push(g);
            }
        }
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&g| pending[g] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(g) = ready.pop_first() {
        order.push(g);
        for &r in &readers[g] {
            pending[r] -= 1;
            if pending[r] == 0 {
                ready.insert(r);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err((0..n).filter(|&g| pending[g] > 0).collect())
    }
}

/// Checks that the stimuli cover exactly the primary inputs and returns them
/// in net order.
pub(crate) fn stimuli<'s>(
    c: &Compiled<'_>,
    inputs: &'s BTreeMap<String, Signal<i64>>,
) -> Result<Vec<&'s Signal<i64>>, SimError> {
    for name in inputs.keys() {
        if !c.netlist.inputs.contains(name) {
            return Err(SimError::UnknownStimulus(name.clone()));
        }
    }
    c.netlist
        .inputs
        .iter()
        .map(|n| inputs.get(n).ok_or_else(|| SimError::MissingStimulus(n.clone())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn not_gate(delay: DelayModel) -> Netlist {
        Netlist {
            inputs: vec!["a".into()],
            gates: vec![Gate {
                name: "y".into(),
                inputs: vec!["a".into()],
                truth_table: vec![1, 0],
                delay,
            }],
            outputs: vec!["y".into()],
        }
    }

    #[test]
    fn netlist_json_shape() {
        let text = r#"{
            "inputs": ["a", "b"],
            "gates": [
                {"name": "n", "inputs": ["a", "b"], "truth_table": [0, 0, 0, 1], "delay": {"kind": "fixed", "d": 2}},
                {"name": "y", "inputs": ["n"], "truth_table": [1, 0],
                 "delay": {"kind": "bridc", "mr": 1, "dr": 2, "mf": 1, "df": 2}}
            ],
            "outputs": ["y"]
        }"#;
        let n = Netlist::from_json(text).unwrap();
        assert_eq!(n.gates[0].delay, DelayModel::Fixed { d: 2 });
        assert_eq!(
            n.gates[1].delay,
            DelayModel::DetBridc(BdcParams::new(1, 2, 1, 2).unwrap())
        );
        n.validate().unwrap();
        let back: Netlist = serde_json::from_str(&serde_json::to_string(&n).unwrap()).unwrap();
        assert_eq!(back, n);
        assert!(Netlist::from_json(r#"{"inputs":[],"gates":[],"outputs":[],"x":1}"#).is_err());
    }

    #[test]
    fn structural_errors() {
        let mut n = not_gate(DelayModel::Fixed { d: 1 });
        n.gates[0].inputs = vec!["q".into()];
        assert_eq!(n.validate(), Err(SimError::Undriven("q".into())));

        let mut n = not_gate(DelayModel::Fixed { d: 1 });
        n.gates[0].name = "a".into();
        assert_eq!(n.validate(), Err(SimError::MultipleDrivers("a".into())));

        let mut n = not_gate(DelayModel::Fixed { d: 1 });
        n.gates[0].truth_table = vec![1, 0, 1];
        assert!(matches!(n.validate(), Err(SimError::TableSize { want: 2, .. })));

        let n = not_gate(DelayModel::DetBridc(BdcParams::new(0, 3, 0, 2).unwrap()));
        assert!(matches!(n.validate(), Err(SimError::Delay { .. })));

        let mut n = not_gate(DelayModel::Fixed { d: 0 });
        n.gates[0].inputs = vec!["y".into()];
        assert_eq!(n.validate(), Err(SimError::ZeroLatencyCycle(vec!["y".into()])));
    }

    #[test]
    fn feedback_through_latency_is_allowed() {
        let mut n = not_gate(DelayModel::Fixed { d: 1 });
        n.gates[0].inputs = vec!["y".into()];
        let c = n.compile().unwrap();
        assert!(!c.acyclic);
        assert_eq!(n.cycle(&c), vec!["y".to_string()]);
    }

    #[test]
    fn delay_classes() {
        assert_eq!(classify_delay(&DelayModel::Fixed { d: 3 }), DelayClass::Ideal);
        let p = |m, d| DelayModel::DetBridc(BdcParams::new(m, d, m, d).unwrap());
        assert_eq!(classify_delay(&p(1, 2)), DelayClass::Inertial);
        assert_eq!(classify_delay(&p(0, 2)), DelayClass::Ideal);
    }

    #[test]
    fn truth_table_bit_order() {
        let g = Gate {
            name: "g".into(),
            inputs: vec!["a".into(), "b".into()],
            truth_table: vec![0, 1, 0, 0],
            delay: DelayModel::Fixed { d: 0 },
        };
        assert!(g.eval([true, false]));
        assert!(!g.eval([false, true]));
    }
}
