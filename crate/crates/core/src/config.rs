//! Flat `key=value` configuration parsing.
//!
//! Lines are `key = value` pairs; blank lines and `#` comments are skipped.
//! Consumers `take` the keys they know and then call [`KvConfig::finish`],
//! which rejects anything left over, so unknown keys are always an error.

use crate::error::{Error, Result};
use crate::params::{ModelParams, TimeScaleRegime};
use crate::scalar::Real;
use std::collections::BTreeMap;
use std::str::FromStr;

#[derive(Debug, Clone, Default)]
pub struct KvConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl KvConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if stripped.is_empty() {
                continue;
            }
            let Some((key, value)) = stripped.split_once('=') else {
                return Err(Error::Config {
                    line,
                    msg: format!("expected `key = value`, got `{stripped}`"),
                });
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(Error::Config {
                    line,
                    msg: "empty key or value".into(),
                });
            }
            if entries.insert(key.clone(), (line, value)).is_some() {
                return Err(Error::Config {
                    line,
                    msg: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Self { entries })
    }

    /// Removes and returns the raw value of `key`, if present.
    pub fn take_raw(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key).map(|(_, v)| v)
    }

    /// Removes and parses `key`, if present.
    pub fn take<V: FromStr>(&mut self, key: &str) -> Result<Option<V>> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).map_err(|_| Error::Config {
                line,
                msg: format!("cannot parse value `{v}` for key `{key}`"),
            }),
        }
    }

    /// Like [`Self::take`] but the key must exist.
    pub fn require<V: FromStr>(&mut self, key: &'static str) -> Result<V> {
        self.take(key)?.ok_or(Error::MissingKey(key))
    }

    /// Errors on the first remaining (unknown) key.
    pub fn finish(self) -> Result<()> {
        match self.entries.into_iter().next() {
            None => Ok(()),
            Some((key, _)) => Err(Error::UnknownKey(key)),
        }
    }
}

/// Extracts the model keys `alpha, beta, gamma, D, epsilon, regime,
/// tau/theta` (or `tau_hat/theta_hat`) from `kv`.
pub fn model_from_kv<T: Real>(kv: &mut KvConfig) -> Result<(ModelParams<T>, TimeScaleRegime<T>)> {
    let alpha = T::c(kv.require::<f64>("alpha")?);
    let beta = T::c(kv.require::<f64>("beta")?);
    let gamma = T::c(kv.require::<f64>("gamma")?);
    let d = T::c(kv.require::<f64>("D")?);
    let epsilon = T::c(kv.require::<f64>("epsilon")?);
    let params = ModelParams::new(alpha, beta, gamma, d, epsilon)?;

    let regime_name = kv.take_raw("regime").unwrap_or_else(|| "slow".into());
    let regime = match regime_name.as_str() {
        "order1" => {
            let tau = T::c(kv.require::<f64>("tau")?);
            let theta = T::c(kv.require::<f64>("theta")?);
            TimeScaleRegime::order1(tau, theta)?
        }
        "slow" | "eps2" => {
            let tau_hat = T::c(kv.require::<f64>("tau_hat")?);
            let theta_hat = T::c(kv.require::<f64>("theta_hat")?);
            TimeScaleRegime::order_eps_minus2(tau_hat, theta_hat)?
        }
        other => {
            return Err(Error::Config {
                line: 0,
                msg: format!("unknown regime `{other}` (expected `order1` or `slow`)"),
            })
        }
    };
    Ok((params, regime))
}

/// One-stop loader for configs that contain only model keys.
pub fn load_model<T: Real>(text: &str) -> Result<(ModelParams<T>, TimeScaleRegime<T>)> {
    let mut kv = KvConfig::parse(text)?;
    let out = model_from_kv(&mut kv)?;
    kv.finish()?;
    Ok(out)
}
