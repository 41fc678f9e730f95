//! Min/max envelopes for netlists whose delays are read as bounded delays.

use std::collections::BTreeMap;

use super::{stimuli, topo, Netlist, SimError};
use crate::signal::Signal;

/// Pointwise bounds on a net: every admissible waveform `x` has
/// `low <= x <= high`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub low: Signal<i64>,
    pub high: Signal<i64>,
}

impl Envelope {
    pub fn exact(s: Signal<i64>) -> Self {
        Envelope {
            low: s.clone(),
            high: s,
        }
    }

    pub fn contains(&self, x: &Signal<i64>) -> bool {
        self.low.leq(x) && x.leq(&self.high)
    }
}

/// Range of a truth table when each input may take any value between its
/// bounds.
fn corner_range(table: &[u8], lows: &[bool], highs: &[bool]) -> (bool, bool) {
    let fixed: usize = lows
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (usize::from(b) << i));
    let free: Vec<usize> = (0..lows.len()).filter(|&i| lows[i] != highs[i]).collect();
    let (mut lo, mut hi) = (true, false);
    for combo in 0..1usize << free.len() {
        let mut index = fixed;
        for (j, &i) in free.iter().enumerate() {
            if combo >> j & 1 == 1 {
                index |= 1 << i;
            }
        }
        let v = table[index] == 1;
        lo &= v;
        hi |= v;
    }
    (lo, hi)
}

fn gate_range(table: &[u8], envs: &[&Envelope]) -> (Signal<i64>, Signal<i64>) {
    let mut times: Vec<i64> = envs
        .iter()
        .flat_map(|e| e.low.switches().iter().chain(e.high.switches()).copied())
        .collect();
    times.sort_unstable();
    times.dedup();
    let sample = |f: &dyn Fn(&Signal<i64>) -> bool| -> (Vec<bool>, Vec<bool>) {
        (
            envs.iter().map(|e| f(&e.low)).collect(),
            envs.iter().map(|e| f(&e.high)).collect(),
        )
    };
    let (l, h) = sample(&|s| s.initial());
    let (lo0, hi0) = corner_range(table, &l, &h);
    let (mut lo_sw, mut hi_sw) = (Vec::new(), Vec::new());
    let (mut lo_v, mut hi_v) = (lo0, hi0);
    for &t in &times {
        let (l, h) = sample(&|s| s.value_at(t));
        let (a, b) = corner_range(table, &l, &h);
        if a != lo_v {
            lo_sw.push(t);
            lo_v = a;
        }
        if b != hi_v {
            hi_sw.push(t);
            hi_v = b;
        }
    }
    (
        Signal::new(lo0, lo_sw).expect("sorted"),
        Signal::new(hi0, hi_sw).expect("sorted"),
    )
}

/// Propagates envelopes through an acyclic netlist, reading each delay
/// element as the bounded delay that contains it. Conservative: exact for a
/// single gate with monotone behaviour, an over-approximation in general.
pub fn envelope_propagate(
    netlist: &Netlist,
    inputs: &BTreeMap<String, Signal<i64>>,
) -> Result<BTreeMap<String, Envelope>, SimError> {
    let c = netlist.compile()?;
    if !c.acyclic {
        return Err(SimError::Cyclic(netlist.cycle(&c)));
    }
    let order = topo(&c.fanin, c.inputs(), |_| true).expect("checked acyclic");
    let stim = stimuli(&c, inputs)?;
    let mut envs: Vec<Option<Envelope>> = stim.iter().map(|s| Some(Envelope::exact((*s).clone()))).collect();
    envs.resize(c.inputs() + netlist.gates.len(), None);
    for g in order {
        let gate = &netlist.gates[g];
        let ins: Vec<&Envelope> = c.fanin[g]
            .iter()
            .map(|&n| envs[n].as_ref().expect("topological order"))
            .collect();
        let (pre_lo, pre_hi) = gate_range(&gate.truth_table, &ins);
        let p = gate.delay.as_bdc()?;
        envs[c.net_of_gate(g)] = Some(Envelope {
            low: p.min_solution(&pre_lo)?,
            high: p.max_solution(&pre_hi)?,
        });
    }
    Ok(envs
        .into_iter()
        .enumerate()
        .map(|(n, e)| (c.net_name(n).to_string(), e.expect("all nets visited")))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BdcParams, CondExpr};
    use crate::oracle::{enumerate_solutions, GridConfig};
    use crate::sim::{simulate, DelayModel, Gate};
    use proptest::prelude::*;

    fn sig(initial: u8, switches: &[i64]) -> Signal<i64> {
        Signal::new(initial == 1, switches.to_vec()).unwrap()
    }

    fn one_gate(inputs: usize, table: Vec<u8>, delay: DelayModel) -> Netlist {
        let names: Vec<String> = (0..inputs).map(|i| format!("i{i}")).collect();
        Netlist {
            inputs: names.clone(),
            gates: vec![Gate {
                name: "y".into(),
                inputs: names,
                truth_table: table,
                delay,
            }],
            outputs: vec!["y".into()],
        }
    }

    fn bridc(mr: i64, dr: i64, mf: i64, df: i64) -> DelayModel {
        DelayModel::DetBridc(BdcParams::new(mr, dr, mf, df).unwrap())
    }

    fn stim(sigs: &[Signal<i64>]) -> BTreeMap<String, Signal<i64>> {
        sigs.iter()
            .enumerate()
            .map(|(i, s)| (format!("i{i}"), s.clone()))
            .collect()
    }

    #[test]
    fn single_wire_gives_canonical_bounds() {
        let n = one_gate(1, vec![0, 1], bridc(1, 3, 1, 3));
        let e = envelope_propagate(&n, &stim(&[sig(0, &[0, 5])])).unwrap();
        assert_eq!(e["y"].low, sig(0, &[3, 7]));
        assert_eq!(e["y"].high, sig(0, &[2, 8]));
    }

    #[test]
    fn deterministic_wire_is_a_translation() {
        let n = one_gate(1, vec![0, 1], bridc(0, 2, 0, 2));
        let u = sig(1, &[1, 4, 9]);
        let e = envelope_propagate(&n, &stim(std::slice::from_ref(&u))).unwrap();
        assert_eq!(e["y"], Envelope::exact(u.translate(2).unwrap()));
    }

    #[test]
    fn and_of_zeros_is_zero() {
        let n = one_gate(2, vec![0, 0, 0, 1], bridc(1, 2, 1, 2));
        let zero = Signal::constant(false);
        let e = envelope_propagate(&n, &stim(&[zero.clone(), zero.clone()])).unwrap();
        assert_eq!(e["y"], Envelope::exact(zero));
    }

    #[test]
    fn feedback_is_rejected() {
        let mut n = one_gate(1, vec![0, 1, 1, 1], DelayModel::Fixed { d: 1 });
        n.gates[0].inputs = vec!["i0".into(), "y".into()];
        let e = envelope_propagate(&n, &stim(&[Signal::constant(false)]));
        assert_eq!(e, Err(SimError::Cyclic(vec!["y".into()])));
    }

    #[test]
    fn corner_enumeration_is_conservative_for_xor() {
        let free = Envelope {
            low: Signal::constant(false),
            high: Signal::constant(true),
        };
        let fixed = Envelope::exact(Signal::constant(true));
        let (lo, hi) = gate_range(&[0, 1, 1, 0], &[&free, &fixed]);
        assert_eq!((lo, hi), (Signal::constant(false), Signal::constant(true)));
        let (lo, hi) = gate_range(&[0, 1, 1, 0], &[&fixed, &fixed]);
        assert_eq!((lo, hi), (Signal::constant(false), Signal::constant(false)));
    }

    fn arb_signal() -> impl Strategy<Value = Signal<i64>> {
        (any::<bool>(), prop::collection::btree_set(1i64..10, 0..4))
            .prop_map(|(i, s)| Signal::new(i, s.into_iter().collect()).unwrap())
    }

    fn arb_bdc() -> impl Strategy<Value = BdcParams<i64>> {
        (0i64..4, 0i64..4, 0i64..4, 0i64..4)
            .prop_map(|(a, b, c, d)| BdcParams::new(a.min(b), a.max(b), c.min(d), c.max(d)).unwrap())
            .prop_filter("consistent", |p| p.cc_holds())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn single_gate_envelope_holds_every_oracle_solution(
            table in prop::collection::vec(0u8..2, 4), p in arb_bdc(), a in arb_signal(), b in arb_signal()
        ) {
            let n = one_gate(2, table.clone(), DelayModel::DetBridc(p));
            let e = envelope_propagate(&n, &stim(&[a.clone(), b.clone()])).unwrap();
            let pre = a.zip_with(&b, |x, y| table[usize::from(x) | usize::from(y) << 1] == 1);
            let g = GridConfig::new(0, 16).unwrap().with_max_switches(4);
            for x in enumerate_solutions(&pre, &CondExpr::bdc(p), &g).unwrap() {
                prop_assert!(e["y"].contains(&x), "{x} outside [{}, {}]", e["y"].low, e["y"].high);
            }
            let sim = simulate(&n, &stim(&[a, b]), -1, 20).unwrap();
            prop_assert!(e["y"].contains(&sim["y"]));
        }

        #[test]
        fn chain_envelopes_bracket_simulation(
            t1 in prop::collection::vec(0u8..2, 4), t2 in prop::collection::vec(0u8..2, 4),
            p in arb_bdc(), q in arb_bdc(), a in arb_signal(), b in arb_signal()
        ) {
            let n = Netlist {
                inputs: vec!["i0".into(), "i1".into()],
                gates: vec![
                    Gate { name: "m".into(), inputs: vec!["i0".into(), "i1".into()], truth_table: t1, delay: DelayModel::DetBridc(p) },
                    Gate { name: "y".into(), inputs: vec!["m".into(), "i0".into()], truth_table: t2, delay: DelayModel::DetBridc(q) },
                ],
                outputs: vec!["y".into()],
            };
            let s = stim(&[a, b]);
            let e = envelope_propagate(&n, &s).unwrap();
            let sim = simulate(&n, &s, -1, 30).unwrap();
            for net in ["m", "y"] {
                prop_assert!(e[net].contains(&sim[net]), "{net}");
            }
        }
    }
}
