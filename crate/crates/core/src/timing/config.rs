//! `key = value` text form of a [`CalibrationProfile`].
//!
//! ```text
//! # recalibrated on my board
//! target = pipelined_pl
//! c_nf = 1
//! c_n = 0.946524064171123
//! c_f = 0
//! c_0 = 1160.2620320855615
//! clock_hz = 250000000
//! ```
//!
//! `target` is required. Missing coefficients default to 0 and `clock_hz` to
//! 250 MHz. Unknown or repeated keys are rejected.

use std::fmt::Write as _;

use super::{CalibrationProfile, Target, DEFAULT_CLOCK_HZ};
use crate::error::{Result, SvmError};

impl CalibrationProfile {
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut target = None;
        let mut values: [Option<f64>; 5] = [None; 5];
        const KEYS: [&str; 5] = ["c_nf", "c_n", "c_f", "c_0", "clock_hz"];

        for (i, raw) in text.lines().enumerate() {
            let line = raw.split_once('#').map_or(raw, |(h, _)| h).trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| SvmError::InvalidProfile(format!("line {}: {msg}", i + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "target" {
                if target.is_some() {
                    return Err(bad("duplicate key `target`".into()));
                }
                target = Some(
                    value
                        .parse::<Target>()
                        .map_err(|_| bad(format!("unknown target `{value}`")))?,
                );
                continue;
            }
            let slot = KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| bad(format!("unknown key `{key}`")))?;
            if values[slot].is_some() {
                return Err(bad(format!("duplicate key `{key}`")));
            }
            let v: f64 = value
                .parse()
                .map_err(|_| bad(format!("invalid number `{value}` for `{key}`")))?;
            values[slot] = Some(v);
        }

        let target = target.ok_or_else(|| SvmError::InvalidProfile("missing `target`".into()))?;
        let profile = CalibrationProfile {
            target,
            c_nf: values[0].unwrap_or(0.0),
            c_n: values[1].unwrap_or(0.0),
            c_f: values[2].unwrap_or(0.0),
            c_0: values[3].unwrap_or(0.0),
            clock_hz: values[4].unwrap_or(DEFAULT_CLOCK_HZ),
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "target = {}", self.target);
        let _ = writeln!(out, "c_nf = {}", self.c_nf);
        let _ = writeln!(out, "c_n = {}", self.c_n);
        let _ = writeln!(out, "c_f = {}", self.c_f);
        let _ = writeln!(out, "c_0 = {}", self.c_0);
        let _ = writeln!(out, "clock_hz = {}", self.clock_hz);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_exactly() {
        for t in Target::ALL {
            let p = CalibrationProfile::default_for(t);
            let back = CalibrationProfile::from_config_str(&p.to_config_string()).unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn missing_keys_take_defaults() {
        let p = CalibrationProfile::from_config_str(
            "target = simplified_stage\nc_f = 2 # per feature\nc_0=10\n",
        )
        .unwrap();
        assert_eq!((p.c_nf, p.c_n, p.c_f, p.c_0), (0.0, 0.0, 2.0, 10.0));
        assert_eq!(p.clock_hz, DEFAULT_CLOCK_HZ);
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        for text in [
            "target = pipelined_pl\nc_x = 1\n",
            "target = fpga\n",
            "c_0 = 5\n",
            "target = pipelined_pl\nc_0 = abc\n",
            "target = pipelined_pl\nc_0 5\n",
            "target = pipelined_pl\nc_0 = 5\nc_0 = 6\n",
            "target = pipelined_pl\nclock_hz = -1\nc_0 = 5\n",
        ] {
            assert!(
                matches!(
                    CalibrationProfile::from_config_str(text),
                    Err(SvmError::InvalidProfile(_))
                ),
                "{text:?}"
            );
        }
    }
}
