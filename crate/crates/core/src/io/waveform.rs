//! The waveform text format: one signal per line,
//!
//! ```text
//! # comment
//! name initial t1 t2 ... tn
//! ```
//!
//! with `initial` 0 or 1 and strictly increasing switch times. Times may be
//! decimals; they are multiplied by the resolution and must land exactly on
//! a tick.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::IoError;
use crate::signal::Signal;

pub type Waveforms = BTreeMap<String, Signal<i64>>;

/// Exact `text * resolution` as an integer tick.
fn parse_time(text: &str, resolution: u64) -> Result<i64, String> {
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits_ok = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if int.is_empty() && frac.is_empty() || !digits_ok(int) || !digits_ok(frac) || frac.len() > 18 {
        return Err(format!("bad time {text:?}"));
    }
    let scale = 10i128.pow(frac.len() as u32);
    let mantissa: i128 = format!("{int}{frac}")
        .parse()
        .map_err(|_| format!("time {text:?} out of range"))?;
    let scaled = mantissa
        .checked_mul(i128::from(resolution))
        .ok_or_else(|| format!("time {text:?} out of range"))?;
    if scaled % scale != 0 {
        return Err(format!("time {text:?} is not a whole tick at resolution {resolution}"));
    }
    let ticks = scaled / scale;
    let ticks = if neg { -ticks } else { ticks };
    i64::try_from(ticks).map_err(|_| format!("time {text:?} out of range"))
}

pub fn parse_waveforms(text: &str, resolution: u64) -> Result<Waveforms, IoError> {
    let mut out = Waveforms::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |reason: String| IoError::Parse { line, reason };
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut fields = body.split_whitespace();
        let name = fields.next().expect("non-empty line");
        let initial = match fields.next() {
            Some("0") => false,
            Some("1") => true,
            Some(other) => return Err(err(format!("initial value must be 0 or 1, got {other:?}"))),
            None => return Err(err(format!("{name}: missing initial value"))),
        };
        let times = fields
            .map(|f| parse_time(f, resolution))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let signal = Signal::new(initial, times).map_err(|e| err(format!("{name}: {e}")))?;
        if out.insert(name.to_string(), signal).is_some() {
            return Err(err(format!("duplicate signal {name:?}")));
        }
    }
    Ok(out)
}

fn format_time(ticks: i64, resolution: u64) -> Result<String, IoError> {
    let r = i128::from(resolution);
    let t = i128::from(ticks);
    if t % r == 0 {
        return Ok((t / r).to_string());
    }
    let mut scale = 1i128;
    for digits in 1..=18 {
        scale *= 10;
        if (t * scale) % r == 0 {
            let v = t * scale / r;
            let sign = if v < 0 { "-" } else { "" };
            let v = v.abs();
            return Ok(format!("{sign}{}.{:0digits$}", v / scale, v % scale));
        }
    }
    Err(IoError::NotRepresentable { ticks, resolution })
}

/// One line per signal in name order; inverse of [`parse_waveforms`].
pub fn emit_waveforms(w: &Waveforms, resolution: u64) -> Result<String, IoError> {
    let mut out = String::new();
    for (name, s) in w {
        write!(out, "{name} {}", u8::from(s.initial())).expect("string write");
        for &t in s.switches() {
            write!(out, " {}", format_time(t, resolution)?).expect("string write");
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sig(initial: u8, switches: &[i64]) -> Signal<i64> {
        Signal::new(initial == 1, switches.to_vec()).unwrap()
    }

    #[test]
    fn parses_the_basic_form() {
        let w = parse_waveforms("u 0 0 5\n", 1).unwrap();
        assert_eq!(w["u"], sig(0, &[0, 5]));
        let w = parse_waveforms("# stimuli\n\na 1   # held high\nb 0 -3 2 7\n", 1).unwrap();
        assert_eq!(w["a"], Signal::constant(true));
        assert_eq!(w["b"], sig(0, &[-3, 2, 7]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_waveforms("u 0 5 3", 1),
            Err(IoError::Parse { line: 1, .. })
        ));
        assert!(matches!(parse_waveforms("u 0 2 2", 1), Err(IoError::Parse { .. })));
        assert!(matches!(
            parse_waveforms("u 0 1\nu 1", 1),
            Err(IoError::Parse { line: 2, .. })
        ));
        assert!(parse_waveforms("u 2 1", 1).is_err());
        assert!(parse_waveforms("u", 1).is_err());
        assert!(parse_waveforms("u 0 x", 1).is_err());
        assert!(parse_waveforms("u 0 1e3", 1).is_err());
    }

    #[test]
    fn decimal_times_scale_exactly() {
        let w = parse_waveforms("u 0 0.5 1.25 3", 4).unwrap();
        assert_eq!(w["u"], sig(0, &[2, 5, 12]));
        assert!(parse_waveforms("u 0 0.3", 4).is_err());
        assert!(parse_waveforms("u 0 0.5", 1).is_err());
        assert_eq!(parse_waveforms("u 0 -0.5 0.0 .5", 2).unwrap()["u"], sig(0, &[-1, 0, 1]));
    }

    #[test]
    fn emits_in_units() {
        let mut w = Waveforms::new();
        w.insert("x".into(), sig(0, &[2, 5]));
        w.insert("a".into(), sig(1, &[-3]));
        assert_eq!(emit_waveforms(&w, 1).unwrap(), "a 1 -3\nx 0 2 5\n");
        assert_eq!(emit_waveforms(&w, 4).unwrap(), "a 1 -0.75\nx 0 0.5 1.25\n");
        assert!(matches!(emit_waveforms(&w, 3), Err(IoError::NotRepresentable { .. })));
    }

    proptest! {
        #[test]
        fn emit_then_parse_is_identity(
            sigs in prop::collection::btree_map("[a-z][a-z0-9_]{0,5}", (any::<bool>(), prop::collection::btree_set(-1000i64..1000, 0..6)), 0..5),
            res in prop::sample::select(vec![1u64, 2, 4, 5, 8, 10, 1000]),
        ) {
            let w: Waveforms = sigs
                .into_iter()
                .map(|(n, (i, s))| (n, Signal::new(i, s.into_iter().collect()).unwrap()))
                .collect();
            let text = emit_waveforms(&w, res).unwrap();
            prop_assert_eq!(parse_waveforms(&text, res).unwrap(), w);
        }
    }
}
