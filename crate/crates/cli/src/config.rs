//! Flat key=value configuration format with dotted section names. Unknown
//! keys are hard errors so typos cannot silently fall back to defaults.

use std::collections::BTreeMap;

use crate::error::CliError;

/// Every key the format accepts. Kept sorted for the error message.
const KNOWN_KEYS: &[&str] = &[
    "hilbert.n_max",
    "horizon.t_end",
    "horizon.unit",
    "initial.coherent",
    "initial.fock",
    "integrator.atol",
    "integrator.dt",
    "integrator.method",
    "integrator.norm_guard",
    "integrator.rtol",
    "integrator.stride",
    "integrator.tail_guard",
    "model",
    "modulation.epsilon",
    "modulation.epsilon_minus",
    "modulation.eta",
    "modulation.fourier_c",
    "modulation.fourier_s",
    "modulation.kind",
    "modulation.order",
    "modulation.resonant_branch",
    "modulation.xi",
    "modulation.xi_adiabatic",
    "modulation.xi_delta0",
    "modulation.xi_fock_n0",
    "modulation.xi_minus",
    "modulation.xi_minus_delta0",
    "output.average",
    "output.average_window",
    "output.populations",
    "rates.gamma",
    "rates.gamma_ph",
    "rates.kappa",
    "sweep.objective",
    "sweep.parameter",
    "sweep.values",
    "system.g0",
    "system.modulated",
    "system.omega",
    "system.omega0",
];

/// Parsed configuration: raw string values keyed by dotted names.
#[derive(Debug, Clone, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    /// Parses `key = value` lines; `#` starts a comment, blank lines are
    /// skipped. Unknown or duplicate keys are errors.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = key.trim().to_string();
            let value = value.trim().trim_matches('"').to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!(
                    "line {}: unknown key '{key}'",
                    lineno + 1
                )));
            }
            if values.insert(key.clone(), value).is_some() {
                return Err(CliError::Config(format!(
                    "line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
        }
        Ok(Config { values })
    }

    /// Overrides a key (sweep machinery); the key must be known.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(CliError::Config(format!("unknown key '{key}'")));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn unset(&mut self, key: &str) {
        self.values.remove(key);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        debug_assert!(KNOWN_KEYS.contains(&key), "accessor for unknown key {key}");
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn has(&self, key: &str) -> bool {
        self.get(key).is_some()
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key)
            .ok_or_else(|| CliError::Config(format!("missing required key '{key}'")))
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| CliError::Config(format!("key '{key}': '{v}' is not a number")))
            })
            .transpose()
    }

    pub fn require_f64(&self, key: &str) -> Result<f64, CliError> {
        self.f64(key)?
            .ok_or_else(|| CliError::Config(format!("missing required key '{key}'")))
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse::<usize>().map_err(|_| {
                    CliError::Config(format!("key '{key}': '{v}' is not a nonnegative integer"))
                })
            })
            .transpose()
    }

    pub fn bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        self.get(key)
            .map(|v| match v {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(CliError::Config(format!(
                    "key '{key}': '{v}' is not a boolean"
                ))),
            })
            .transpose()
    }

    /// Comma-separated float list.
    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| {
                        s.trim().parse::<f64>().map_err(|_| {
                            CliError::Config(format!("key '{key}': '{s}' is not a number"))
                        })
                    })
                    .collect()
            })
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_values_comments_and_quotes() {
        let cfg = Config::parse(
            "# scenario\nsystem.omega = 1.0\nmodulation.kind = \"ajc\" # resonance\n\nhorizon.t_end = 6.0\n",
        )
        .unwrap();
        assert_eq!(cfg.require_f64("system.omega").unwrap(), 1.0);
        assert_eq!(cfg.require("modulation.kind").unwrap(), "ajc");
        assert_eq!(cfg.require_f64("horizon.t_end").unwrap(), 6.0);
    }

    #[test]
    fn rejects_unknown_key() {
        let err = Config::parse("system.omgea = 1.0\n").unwrap_err();
        assert!(err.to_string().contains("unknown key"));
    }

    #[test]
    fn rejects_duplicate_and_malformed() {
        assert!(Config::parse("system.omega = 1\nsystem.omega = 2\n").is_err());
        assert!(Config::parse("system.omega\n").is_err());
    }

    #[test]
    fn typed_accessor_errors() {
        let cfg = Config::parse("system.omega = abc\nhilbert.n_max = -3\n").unwrap();
        assert!(cfg.f64("system.omega").is_err());
        assert!(cfg.usize("hilbert.n_max").is_err());
        assert_eq!(cfg.f64("system.g0").unwrap(), None);
    }

    #[test]
    fn parses_lists() {
        let cfg = Config::parse("sweep.values = 0.95, 1, 1.05\n").unwrap();
        assert_eq!(
            cfg.f64_list("sweep.values").unwrap().unwrap(),
            vec![0.95, 1.0, 1.05]
        );
    }
}
