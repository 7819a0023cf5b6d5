//! `key = value` configuration files overriding the default caps.

use std::path::Path;

use serde::Deserialize;
use sfc_core::Config;

use crate::{CliError, Result};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Overrides {
    monoid_cap: Option<usize>,
    powerset_cap: Option<usize>,
    powerset2_cap: Option<usize>,
    amt_alphabet_cap: Option<usize>,
    amt_monoid_cap: Option<usize>,
    delay_dmax: Option<usize>,
    trace: Option<bool>,
}

/// Parses a configuration file body. Unset keys keep their defaults.
pub fn parse_config(text: &str) -> Result<Config> {
    let o: Overrides = toml::from_str(text).map_err(|e| CliError::input(format!("bad config: {}", e.message())))?;
    let mut cfg = Config::default();
    let caps = [
        ("monoid_cap", o.monoid_cap, &mut cfg.monoid_cap),
        ("powerset_cap", o.powerset_cap, &mut cfg.powerset_cap),
        ("powerset2_cap", o.powerset2_cap, &mut cfg.powerset2_cap),
        ("amt_alphabet_cap", o.amt_alphabet_cap, &mut cfg.amt_alphabet_cap),
        ("amt_monoid_cap", o.amt_monoid_cap, &mut cfg.amt_monoid_cap),
        ("delay_dmax", o.delay_dmax, &mut cfg.delay_dmax),
    ];
    for (key, value, slot) in caps {
        if let Some(v) = value {
            if v == 0 {
                return Err(CliError::input(format!("bad config: {key} must be positive")));
            }
            *slot = v;
        }
    }
    if let Some(t) = o.trace {
        cfg.trace = t;
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}
