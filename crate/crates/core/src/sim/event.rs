//! Event-driven simulation of deterministic delay elements.
//!
//! Every gate has a zero-delay pre-output (its truth table applied to the
//! current input values) and an output obtained by passing the pre-output
//! through its delay element. A change of a pre-output at `s` can only move
//! the element's output at a few fixed offsets from `s`, so those ticks are
//! the only ones scheduled. Within a tick, gates are evaluated in
//! zero-latency topological order.

use std::collections::{BTreeMap, BTreeSet};

use super::{stimuli, Compiled, DelayModel, Netlist, SimError};
use crate::signal::Signal;

/// A waveform built left to right.
#[derive(Debug, Clone)]
struct Wave {
    initial: bool,
    switches: Vec<i64>,
}

impl Wave {
    fn constant(v: bool) -> Self {
        Wave {
            initial: v,
            switches: Vec::new(),
        }
    }

    fn at(&self, t: i64) -> bool {
        let flips = self.switches.partition_point(|&s| s <= t);
        self.initial ^ (flips % 2 == 1)
    }

    fn last(&self) -> bool {
        self.initial ^ (self.switches.len() % 2 == 1)
    }

    /// Whether the wave equals `v` on every tick of `[a, b]`.
    fn holds(&self, a: i64, b: i64, v: bool) -> bool {
        let i = self.switches.partition_point(|&s| s <= a);
        self.at(a) == v && self.switches.get(i).is_none_or(|&s| s > b)
    }

    /// Sets the value from `t` on; `t` is never before the last switch.
    /// Returns whether the value at `t` changed.
    fn set(&mut self, t: i64, v: bool) -> bool {
        if self.last() == v {
            return false;
        }
        if self.switches.last() == Some(&t) {
            self.switches.pop();
        } else {
            self.switches.push(t);
        }
        true
    }

    fn into_signal(self) -> Signal<i64> {
        Signal::new(self.initial, self.switches).expect("built in increasing order")
    }
}

fn delay_output(model: &DelayModel, pre: &Wave, out: &Wave, t: i64) -> bool {
    match model {
        DelayModel::Fixed { d } => pre.at(t.saturating_sub(*d)),
        DelayModel::DetBridc(p) => {
            if out.at(t - 1) {
                let start = t.saturating_sub(p.df());
                !pre.holds(start, start + p.mf(), false)
            } else {
                let start = t.saturating_sub(p.dr());
                pre.holds(start, start + p.mr(), true)
            }
        }
    }
}

/// Offsets after a pre-output change at which the output may move.
fn wake_offsets(model: &DelayModel) -> Vec<i64> {
    match model {
        DelayModel::Fixed { d } => vec![*d],
        DelayModel::DetBridc(p) => vec![p.fall_lower(), p.dr(), p.rise_lower(), p.df()],
    }
}

/// The values every net settles to when the inputs have held their initial
/// values forever. Delay elements pass constants through unchanged.
pub(crate) fn steady_state(c: &Compiled<'_>, initial: &[bool]) -> Result<Vec<bool>, SimError> {
    let gates = &c.netlist.gates;
    let mut v: Vec<bool> = initial
        .iter()
        .copied()
        .chain(std::iter::repeat_n(false, gates.len()))
        .collect();
    for _ in 0..=gates.len() + 1 {
        let mut changed = false;
        for &g in &c.order {
            let out = gates[g].eval(c.fanin[g].iter().map(|&n| v[n]));
            let net = c.net_of_gate(g);
            if v[net] != out {
                v[net] = out;
                changed = true;
            }
        }
        if !changed {
            return Ok(v);
        }
    }
    Err(SimError::NoSteadyState)
}

struct Sim<'c, 'n> {
    c: &'c Compiled<'n>,
    pre: Vec<Wave>,
    nets: Vec<Wave>,
    queue: BTreeMap<i64, BTreeSet<usize>>,
    now: BTreeSet<usize>,
    t: i64,
    hi: i64,
}

impl Sim<'_, '_> {
    fn schedule(&mut self, when: i64, g: usize) {
        if when == self.t {
            self.now.insert(self.c.rank[g]);
        } else if when <= self.hi {
            self.queue.entry(when).or_default().insert(self.c.rank[g]);
        }
    }

    fn refresh_pre(&mut self, g: usize) {
        let gate = &self.c.netlist.gates[g];
        let v = gate.eval(self.c.fanin[g].iter().map(|&n| self.nets[n].last()));
        if self.pre[g].set(self.t, v) {
            for off in wake_offsets(&gate.delay) {
                self.schedule(self.t.saturating_add(off), g);
            }
        }
    }

    fn net_changed(&mut self, net: usize) {
        for i in 0..self.c.fanout[net].len() {
            let reader = self.c.fanout[net][i];
            self.refresh_pre(reader);
        }
    }

    fn fire(&mut self, g: usize) {
        let gate = &self.c.netlist.gates[g];
        let net = self.c.net_of_gate(g);
        let v = delay_output(&gate.delay, &self.pre[g], &self.nets[net], self.t);
        if self.nets[net].set(self.t, v) {
            if matches!(gate.delay, DelayModel::DetBridc(_)) {
                self.schedule(self.t.saturating_add(1), g);
            }
            self.net_changed(net);
        }
    }
}

/// Simulates `netlist` under `inputs` and returns every net restricted to
/// `[lo, hi]`. Gate outputs are keyed by gate name.
pub fn simulate(
    netlist: &Netlist,
    inputs: &BTreeMap<String, Signal<i64>>,
    lo: i64,
    hi: i64,
) -> Result<BTreeMap<String, Signal<i64>>, SimError> {
    if lo > hi {
        return Err(SimError::Horizon { lo, hi });
    }
    let c = netlist.compile()?;
    let stim = stimuli(&c, inputs)?;
    let initial: Vec<bool> = stim.iter().map(|s| s.initial()).collect();
    let steady = steady_state(&c, &initial)?;
    let gates = netlist.gates.len();
    let mut sim = Sim {
        c: &c,
        pre: (0..gates).map(|g| Wave::constant(steady[c.net_of_gate(g)])).collect(),
        nets: steady.iter().map(|&v| Wave::constant(v)).collect(),
        queue: BTreeMap::new(),
        now: BTreeSet::new(),
        t: i64::MIN,
        hi,
    };

    let mut input_events: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (net, s) in stim.iter().enumerate() {
        for &t in s.switches() {
            if t <= hi {
                input_events.entry(t).or_default().push(net);
            }
        }
    }

    loop {
        let next_input = input_events.first_key_value().map(|(&t, _)| t);
        let next_gate = sim.queue.first_key_value().map(|(&t, _)| t);
        let t = match (next_input, next_gate) {
            (None, None) => break,
            (a, b) => a.into_iter().chain(b).min().expect("one is present"),
        };
        sim.t = t;
        sim.now = sim.queue.remove(&t).unwrap_or_default();
        if next_input == Some(t) {
            for net in input_events.remove(&t).expect("present") {
                let v = !sim.nets[net].last();
                sim.nets[net].set(t, v);
                sim.net_changed(net);
            }
        }
        while let Some(r) = sim.now.pop_first() {
            sim.fire(c.order[r]);
        }
    }

    Ok(sim
        .nets
        .into_iter()
        .enumerate()
        .map(|(net, w)| (c.net_name(net).to_string(), w.into_signal().restrict(lo, hi)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{bridc_det_output, BdcParams, RicParams};
    use crate::sim::{tests::not_gate, Gate};
    use proptest::prelude::*;

    fn sig(initial: u8, switches: &[i64]) -> Signal<i64> {
        Signal::new(initial == 1, switches.to_vec()).unwrap()
    }

    fn stim(pairs: &[(&str, Signal<i64>)]) -> BTreeMap<String, Signal<i64>> {
        pairs.iter().map(|(n, s)| (n.to_string(), s.clone())).collect()
    }

    fn bridc(m: i64, d: i64) -> DelayModel {
        DelayModel::DetBridc(BdcParams::new(m, d, m, d).unwrap())
    }

    #[test]
    fn not_gate_with_fixed_delay() {
        let n = not_gate(DelayModel::Fixed { d: 1 });
        let out = simulate(&n, &stim(&[("a", sig(0, &[0, 2]))]), -2, 10).unwrap();
        assert_eq!(out["y"], sig(1, &[1, 3]));
        assert_eq!(out["a"], sig(0, &[0, 2]));
    }

    #[test]
    fn and_gate_with_fixed_delay() {
        let n = Netlist {
            inputs: vec!["a".into(), "b".into()],
            gates: vec![Gate {
                name: "y".into(),
                inputs: vec!["a".into(), "b".into()],
                truth_table: vec![0, 0, 0, 1],
                delay: DelayModel::Fixed { d: 2 },
            }],
            outputs: vec!["y".into()],
        };
        let out = simulate(&n, &stim(&[("a", sig(0, &[0])), ("b", sig(0, &[1]))]), -1, 10).unwrap();
        assert_eq!(out["y"], sig(0, &[3]));
    }

    #[test]
    fn inertial_not_gate_filters_a_short_pulse() {
        let n = not_gate(bridc(1, 2));
        let out = simulate(&n, &stim(&[("a", sig(0, &[0, 1]))]), -2, 10).unwrap();
        assert_eq!(out["y"], Signal::constant(true));
        let out = simulate(&n, &stim(&[("a", sig(0, &[0, 3]))]), -2, 10).unwrap();
        assert_eq!(out["y"], sig(1, &[2, 5]));
    }

    #[test]
    fn ring_oscillator_has_no_steady_state() {
        let mut n = not_gate(DelayModel::Fixed { d: 1 });
        n.gates[0].inputs = vec!["y".into()];
        n.inputs.clear();
        assert_eq!(simulate(&n, &BTreeMap::new(), 0, 5), Err(SimError::NoSteadyState));
    }

    #[test]
    fn stimulus_errors() {
        let n = not_gate(DelayModel::Fixed { d: 1 });
        assert_eq!(
            simulate(&n, &BTreeMap::new(), 0, 5),
            Err(SimError::MissingStimulus("a".into()))
        );
        let s = stim(&[("a", sig(0, &[])), ("z", sig(0, &[]))]);
        assert_eq!(simulate(&n, &s, 0, 5), Err(SimError::UnknownStimulus("z".into())));
        assert!(matches!(
            simulate(&n, &stim(&[("a", sig(0, &[]))]), 5, 0),
            Err(SimError::Horizon { .. })
        ));
    }

    #[test]
    fn latch_with_feedback() {
        // y = s | (y & !r), fed back through one tick.
        let n = Netlist {
            inputs: vec!["s".into(), "r".into()],
            gates: vec![Gate {
                name: "y".into(),
                inputs: vec!["s".into(), "r".into(), "y".into()],
                // index = s | r<<1 | y<<2
                truth_table: vec![0, 1, 0, 1, 1, 1, 0, 1],
                delay: DelayModel::Fixed { d: 1 },
            }],
            outputs: vec!["y".into()],
        };
        let out = simulate(&n, &stim(&[("s", sig(0, &[2, 3])), ("r", sig(0, &[7, 8]))]), 0, 12).unwrap();
        assert_eq!(out["y"], sig(0, &[3, 8]));
    }

    /// Straightforward tick-by-tick evaluation of the same semantics.
    fn reference(
        n: &Netlist,
        inputs: &BTreeMap<String, Signal<i64>>,
        lo: i64,
        hi: i64,
    ) -> BTreeMap<String, Signal<i64>> {
        let c = n.compile().unwrap();
        let stim = stimuli(&c, inputs).unwrap();
        let init: Vec<bool> = stim.iter().map(|s| s.initial()).collect();
        let steady = steady_state(&c, &init).unwrap();
        let start = stim
            .iter()
            .flat_map(|s| s.switches().first().copied())
            .min()
            .unwrap_or(lo)
            .min(lo)
            - 1;
        let k = c.inputs();
        let gates = &n.gates;
        // history[t - start] for t in [start, hi]
        let mut nets: Vec<Vec<bool>> = steady.iter().map(|&v| vec![v]).collect();
        let mut pre: Vec<Vec<bool>> = (0..gates.len()).map(|g| vec![steady[k + g]]).collect();
        let get = |h: &Vec<bool>, t: i64, dflt: bool| -> bool {
            if t < start {
                dflt
            } else {
                h[(t - start) as usize]
            }
        };
        for t in start + 1..=hi {
            for (i, s) in stim.iter().enumerate() {
                nets[i].push(s.value_at(t));
            }
            for g in 0..gates.len() {
                nets[k + g].push(false);
                pre[g].push(false);
            }
            let idx = (t - start) as usize;
            let lat = |g: usize| gates[g].delay.latency();
            let out = |g: usize, pre: &Vec<Vec<bool>>, nets: &Vec<Vec<bool>>| -> bool {
                let p = |s: i64| get(&pre[g], s, steady[k + g]);
                match gates[g].delay {
                    DelayModel::Fixed { d } => p(t - d),
                    DelayModel::DetBridc(q) => {
                        if get(&nets[k + g], t - 1, steady[k + g]) {
                            !(t - q.df()..=t - q.df() + q.mf()).all(|s| !p(s))
                        } else {
                            (t - q.dr()..=t - q.dr() + q.mr()).all(p)
                        }
                    }
                }
            };
            for g in 0..gates.len() {
                if lat(g) > 0 {
                    let v = out(g, &pre, &nets);
                    nets[k + g][idx] = v;
                }
            }
            for &g in &c.order {
                if lat(g) == 0 {
                    pre[g][idx] = gates[g].eval(c.fanin[g].iter().map(|&m| nets[m][idx]));
                    let v = out(g, &pre, &nets);
                    nets[k + g][idx] = v;
                }
            }
            for g in 0..gates.len() {
                if lat(g) > 0 {
                    pre[g][idx] = gates[g].eval(c.fanin[g].iter().map(|&m| nets[m][idx]));
                }
            }
        }
        nets.into_iter()
            .enumerate()
            .map(|(i, h)| {
                let mut sw = Vec::new();
                for j in 1..h.len() {
                    if h[j] != h[j - 1] {
                        sw.push(start + j as i64);
                    }
                }
                let s = Signal::new(h[0], sw).unwrap().restrict(lo, hi);
                (c.net_name(i).to_string(), s)
            })
            .collect()
    }

    fn arb_signal() -> impl Strategy<Value = Signal<i64>> {
        (any::<bool>(), prop::collection::btree_set(0i64..20, 0..5))
            .prop_map(|(i, s)| Signal::new(i, s.into_iter().collect()).unwrap())
    }

    fn arb_delay() -> impl Strategy<Value = DelayModel> {
        prop_oneof![
            (0i64..3).prop_map(|d| DelayModel::Fixed { d }),
            (0i64..4, 0i64..4, 0i64..4, 0i64..4)
                .prop_map(|(a, b, c, d)| BdcParams::new(a.min(b), a.max(b), c.min(d), c.max(d)).unwrap())
                .prop_filter("consistent", |p| p.cc_holds())
                .prop_map(DelayModel::DetBridc),
        ]
    }

    /// Up to five two-input gates over two primary inputs; any gate may read
    /// any net, so feedback appears.
    fn arb_netlist() -> impl Strategy<Value = Netlist> {
        prop::collection::vec(
            (0usize..7, 0usize..7, prop::collection::vec(0u8..2, 4), arb_delay()),
            1..6,
        )
        .prop_map(|specs| {
            let n = specs.len();
            let name = |i: usize| {
                if i < 2 {
                    ["a", "b"][i].to_string()
                } else {
                    format!("g{}", (i - 2) % n)
                }
            };
            Netlist {
                inputs: vec!["a".into(), "b".into()],
                gates: specs
                    .into_iter()
                    .enumerate()
                    .map(|(g, (x, y, table, delay))| Gate {
                        name: format!("g{g}"),
                        inputs: vec![name(x), name(y)],
                        truth_table: table,
                        delay,
                    })
                    .collect(),
                outputs: vec![],
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]

        #[test]
        fn event_driven_matches_tick_reference(n in arb_netlist(), a in arb_signal(), b in arb_signal()) {
            let s = stim(&[("a", a), ("b", b)]);
            match simulate(&n, &s, -3, 30) {
                Ok(got) => prop_assert_eq!(got, reference(&n, &s, -3, 30)),
                Err(SimError::ZeroLatencyCycle(_)) | Err(SimError::NoSteadyState) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }

        #[test]
        fn inertial_gate_output_is_a_bridc_solution(m in 0i64..3, d in 0i64..4, u in arb_signal()) {
            prop_assume!(m <= d);
            let p = BdcParams::new(m, d, m, d).unwrap();
            let n = not_gate(DelayModel::DetBridc(p));
            let out = simulate(&n, &stim(&[("a", u.clone())]), -5, 40).unwrap();
            let pre = u.complement();
            prop_assert_eq!(&out["y"], &bridc_det_output(&pre, &p).unwrap());
            prop_assert!(p.member(&pre, &out["y"]).unwrap());
            prop_assert!(RicParams::from(p).member(&pre, &out["y"]).unwrap());
        }
    }
}
