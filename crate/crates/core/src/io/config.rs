//! Run configuration read from a small TOML file:
//!
//! ```toml
//! time_unit = "1ns"
//! resolution = 1
//! seed = 42
//! ```

use serde::Deserialize;

use super::IoError;

/// Environment variable consulted for the seed when neither the command line
/// nor the config file sets one.
pub const SEED_ENV: &str = "INERTIA_SEED";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    /// VCD time unit, e.g. `1ns`.
    pub time_unit: String,
    /// Ticks per time unit.
    pub resolution: u64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            time_unit: "1ns".into(),
            resolution: 1,
            seed: 0,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    time_unit: Option<String>,
    resolution: Option<u64>,
    seed: Option<u64>,
}

impl RunConfig {
    /// Builds a config from optional file text, with the seed falling back
    /// to `env_seed` and then 0.
    pub fn from_sources(file: Option<&str>, env_seed: Option<&str>) -> Result<Self, IoError> {
        let raw: RawConfig = match file {
            Some(text) => toml::from_str(text).map_err(|e| IoError::Config(e.message().to_string()))?,
            None => RawConfig::default(),
        };
        let seed = match (raw.seed, env_seed) {
            (Some(s), _) => s,
            (None, Some(v)) => v
                .trim()
                .parse()
                .map_err(|_| IoError::Config(format!("{SEED_ENV}={v:?} is not an unsigned integer")))?,
            (None, None) => 0,
        };
        let d = RunConfig::default();
        let cfg = RunConfig {
            time_unit: raw.time_unit.unwrap_or(d.time_unit),
            resolution: raw.resolution.unwrap_or(d.resolution),
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), IoError> {
        if self.resolution < 1 {
            return Err(IoError::Config("resolution must be at least 1".into()));
        }
        self.vcd_timescale().map(|_| ())
    }

    /// The VCD `$timescale` for one tick, i.e. `time_unit / resolution`,
    /// written as 1, 10 or 100 of some unit.
    pub fn vcd_timescale(&self) -> Result<String, IoError> {
        const UNITS: [(&str, u128); 6] = [
            ("s", 1_000_000_000_000_000),
            ("ms", 1_000_000_000_000),
            ("us", 1_000_000_000),
            ("ns", 1_000_000),
            ("ps", 1_000),
            ("fs", 1),
        ];
        let bad = || {
            IoError::Config(format!(
                "time unit {:?} at resolution {} has no VCD timescale",
                self.time_unit, self.resolution
            ))
        };
        let text = self.time_unit.trim();
        let split = text.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?;
        let (num, unit) = text.split_at(split);
        let num: u128 = if num.is_empty() {
            1
        } else {
            num.parse().map_err(|_| bad())?
        };
        let fs = UNITS.iter().find(|(u, _)| *u == unit.trim()).ok_or_else(bad)?.1;
        let total = num.checked_mul(fs).ok_or_else(bad)?;
        let r = u128::from(self.resolution);
        if num == 0 || total % r != 0 {
            return Err(bad());
        }
        let tick = total / r;
        for (u, size) in UNITS {
            for k in [1u128, 10, 100] {
                if tick == k * size {
                    return Ok(format!("{k}{u}"));
                }
            }
        }
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_file_values() {
        assert_eq!(RunConfig::from_sources(None, None).unwrap(), RunConfig::default());
        let c = RunConfig::from_sources(Some("time_unit = \"10ps\"\nresolution = 10\nseed = 9\n"), Some("3")).unwrap();
        assert_eq!(c.time_unit, "10ps");
        assert_eq!(c.resolution, 10);
        assert_eq!(c.seed, 9);
        assert_eq!(c.vcd_timescale().unwrap(), "1ps");
    }

    #[test]
    fn seed_falls_back_to_environment() {
        assert_eq!(
            RunConfig::from_sources(Some("resolution = 10"), Some("17"))
                .unwrap()
                .seed,
            17
        );
        assert!(RunConfig::from_sources(None, Some("x")).is_err());
    }

    #[test]
    fn invalid_configs() {
        assert!(RunConfig::from_sources(Some("resolution = 0"), None).is_err());
        assert!(RunConfig::from_sources(Some("colour = 1"), None).is_err());
        assert!(RunConfig::from_sources(Some("time_unit = \"1ns\"\nresolution = 3"), None).is_err());
        assert!(RunConfig::from_sources(Some("time_unit = \"1 parsec\""), None).is_err());
    }

    #[test]
    fn timescales() {
        let ts = |u: &str, r| {
            RunConfig {
                time_unit: u.into(),
                resolution: r,
                seed: 0,
            }
            .vcd_timescale()
            .unwrap()
        };
        assert_eq!(ts("1ns", 1), "1ns");
        assert_eq!(ts("1ns", 1000), "1ps");
        assert_eq!(ts("1us", 10), "100ns");
        assert_eq!(ts("100ps", 1), "100ps");
        let half = RunConfig {
            time_unit: "1ns".into(),
            resolution: 2,
            seed: 0,
        };
        assert!(half.vcd_timescale().is_err());
    }
}
