//! Value change dump output.
//!
//! Output is a pure function of the signal map and the config: no date
//! stamp, nets in name order, identifiers assigned in that order. Initial
//! values go in `$dumpvars` ahead of the first timestamp. VCD times cannot
//! be negative, so when some switch is, every time is shifted by the same
//! amount and the shift is recorded in a `$comment`.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{IoError, RunConfig};
use crate::signal::Signal;

/// Short printable identifier for the `i`-th variable.
fn ident(mut i: usize) -> String {
    const FIRST: u8 = b'!';
    const RANGE: usize = (b'~' - b'!' + 1) as usize;
    let mut out = String::new();
    loop {
        out.push((FIRST + (i % RANGE) as u8) as char);
        i /= RANGE;
        if i == 0 {
            return out;
        }
        i -= 1;
    }
}

pub fn emit_vcd(signals: &BTreeMap<String, Signal<i64>>, cfg: &RunConfig) -> Result<String, IoError> {
    let timescale = cfg.vcd_timescale()?;
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "$version inertia $end").expect("string write");
    writeln!(w, "$timescale {timescale} $end").expect("string write");

    let first = signals.values().filter_map(|s| s.switches().first().copied()).min();
    let shift = first.filter(|&t| t < 0).map_or(0, |t| -t);
    if shift != 0 {
        writeln!(w, "$comment times shifted by +{shift} ticks $end").expect("string write");
    }

    writeln!(w, "$scope module top $end").expect("string write");
    let ids: Vec<String> = (0..signals.len()).map(ident).collect();
    for (name, id) in signals.keys().zip(&ids) {
        writeln!(w, "$var wire 1 {id} {name} $end").expect("string write");
    }
    writeln!(w, "$upscope $end").expect("string write");
    writeln!(w, "$enddefinitions $end").expect("string write");

    if !signals.is_empty() {
        writeln!(w, "$dumpvars").expect("string write");
        for (s, id) in signals.values().zip(&ids) {
            writeln!(w, "{}{id}", u8::from(s.initial())).expect("string write");
        }
        writeln!(w, "$end").expect("string write");
    }

    let mut changes: BTreeMap<i64, Vec<(usize, bool)>> = BTreeMap::new();
    for (k, s) in signals.values().enumerate() {
        let mut level = s.initial();
        for &t in s.switches() {
            level = !level;
            changes.entry(t).or_default().push((k, level));
        }
    }
    for (t, list) in changes {
        writeln!(w, "#{}", i128::from(t) + i128::from(shift)).expect("string write");
        for (k, v) in list {
            writeln!(w, "{}{}", u8::from(v), ids[k]).expect("string write");
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, bool, &[i64])]) -> BTreeMap<String, Signal<i64>> {
        pairs
            .iter()
            .map(|(n, i, s)| (n.to_string(), Signal::new(*i, s.to_vec()).unwrap()))
            .collect()
    }

    #[test]
    fn single_pulse() {
        let v = emit_vcd(&map(&[("x", false, &[0, 5])]), &RunConfig::default()).unwrap();
        assert_eq!(
            v,
            "$version inertia $end\n$timescale 1ns $end\n$scope module top $end\n\
             $var wire 1 ! x $end\n$upscope $end\n$enddefinitions $end\n\
             $dumpvars\n0!\n$end\n#0\n1!\n#5\n0!\n"
        );
    }

    #[test]
    fn empty_map_is_header_only() {
        let v = emit_vcd(&BTreeMap::new(), &RunConfig::default()).unwrap();
        assert!(v.ends_with("$enddefinitions $end\n"));
        assert!(!v.contains('#'));
    }

    #[test]
    fn simultaneous_changes_share_a_timestamp() {
        let v = emit_vcd(&map(&[("b", false, &[3]), ("a", true, &[3])]), &RunConfig::default()).unwrap();
        assert!(v.contains("$var wire 1 ! a $end\n$var wire 1 \" b $end"));
        assert!(v.ends_with("#3\n0!\n1\"\n"));
        assert_eq!(v.matches("#3").count(), 1);
    }

    #[test]
    fn negative_times_are_shifted() {
        let v = emit_vcd(&map(&[("x", false, &[-2, 1])]), &RunConfig::default()).unwrap();
        assert!(v.contains("$comment times shifted by +2 ticks $end"));
        assert!(v.ends_with("#0\n1!\n#3\n0!\n"));
    }

    #[test]
    fn identifiers_are_unique() {
        let ids: std::collections::HashSet<String> = (0..20_000).map(ident).collect();
        assert_eq!(ids.len(), 20_000);
        assert_eq!(ident(0), "!");
        assert_eq!(ident(93), "~");
        assert_eq!(ident(94), "!!");
    }
}
