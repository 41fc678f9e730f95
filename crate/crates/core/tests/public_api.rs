use std::collections::BTreeMap;

use proptest::prelude::*;

use inertia::algebra::{bridc_det_output, CondExpr};
use inertia::io::{emit_vcd, emit_waveforms, parse_waveforms, RunConfig};
use inertia::oracle::{enumerate_solutions, solution_hull};
use inertia::sim::{envelope_propagate, simulate, DelayModel, Netlist};
use inertia::{BdcParams, GridConfig, Signal};

fn signal_strategy() -> impl Strategy<Value = Signal> {
    (any::<bool>(), prop::collection::btree_set(1i64..10, 0..4))
        .prop_map(|(i, s)| Signal::new(i, s.into_iter().collect()).unwrap())
}

fn cc_params() -> impl Strategy<Value = BdcParams> {
    (0i64..=3, 0i64..=3, 0i64..=3, 0i64..=3).prop_filter_map("cc", |(a, b, c, d)| {
        let p = BdcParams::new(a.min(b), a.max(b), c.min(d), c.max(d)).ok()?;
        p.cc_holds().then_some(p)
    })
}

#[test]
fn waveform_file_to_vcd() {
    let w = parse_waveforms("# stimulus\nu 0 0 3\n", 1).unwrap();
    let p = BdcParams::new(1, 2, 1, 2).unwrap();
    let x = bridc_det_output(&w["u"], &p).unwrap();
    let mut out = w.clone();
    out.insert("x".into(), x);
    assert_eq!(emit_waveforms(&out, 1).unwrap(), "u 0 0 3\nx 0 2 5\n");
    let vcd = emit_vcd(&out, &RunConfig::default()).unwrap();
    assert!(vcd.contains("#2\n1\"\n"));
    assert!(vcd.contains("#3\n0!\n"));
}

#[test]
fn netlist_json_round_trip() {
    let text = r#"{"inputs":["a"],"gates":[
        {"name":"g","inputs":["a"],"truth_table":[0,1],"delay":{"kind":"bridc","mr":1,"dr":3,"mf":1,"df":3}}],
        "outputs":["g"]}"#;
    let n = Netlist::from_json(text).unwrap();
    assert!(matches!(n.gates[0].delay, DelayModel::DetBridc(_)));
    let again = Netlist::from_json(&serde_json::to_string(&n).unwrap()).unwrap();
    assert_eq!(n, again);
    assert!(Netlist::from_json(&text.replace("\"outputs\"", "\"extra\":1,\"outputs\"")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_matches_closed_form(p in cc_params(), u in signal_strategy()) {
        let g = GridConfig::new(0, 20).unwrap();
        let (lo, hi) = solution_hull(&u, &CondExpr::bdc(p), &g).unwrap().expect("consistent");
        prop_assert_eq!(lo, p.min_solution(&u).unwrap());
        prop_assert_eq!(hi, p.max_solution(&u).unwrap());
    }

    #[test]
    fn inertial_wire_stays_in_envelope(p in cc_params(), u in signal_strategy()) {
        let net = Netlist::from_json(&format!(
            r#"{{"inputs":["a"],"gates":[{{"name":"g","inputs":["a"],"truth_table":[0,1],
               "delay":{}}}],"outputs":["g"]}}"#,
            serde_json::to_string(&DelayModel::DetBridc(p)).unwrap()
        )).unwrap();
        let stim: BTreeMap<String, Signal> = [("a".to_string(), u.clone())].into();
        let sim = simulate(&net, &stim, -5, 30).unwrap();
        let env = envelope_propagate(&net, &stim).unwrap();
        prop_assert!(env["g"].contains(&sim["g"]));
        let g = GridConfig::new(0, 20).unwrap();
        let sols = enumerate_solutions(&u, &CondExpr::bdc(p), &g).unwrap();
        prop_assert!(sols.iter().any(|x| x.restrict(0, 20) == sim["g"].restrict(0, 20)));
    }
}
