//! Plain-text `key = value` configuration files (UTF-8, `#` comments), with
//! typed accessors and loaders for the constants table and spectral-density
//! presets.

use std::collections::BTreeMap;
use std::path::Path;

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::modes::{SpectralDensity, DEFAULT_COUPLING_EXPONENT, DEFAULT_DOS_EXPONENT};
use crate::profile::CouplingProfile;

/// Parsed configuration: keys to raw string values.
#[derive(Debug, Clone, Default)]
pub struct KeyValueConfig {
    entries: BTreeMap<String, String>,
}

impl KeyValueConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(idx) => &raw[..idx],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`, got `{raw}`", lineno + 1))
            })?;
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
            }
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(Error::Config(format!("duplicate key `{key}`")));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Overlay `key=value` override strings (command-line `--set` flags) on
    /// top of file values.
    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<()> {
        for item in overrides {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                Error::Config(format!("override `{item}` is not key=value"))
            })?;
            self.entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(|k| k.as_str())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|v| v.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| Error::Config(format!("key `{key}`: `{v}` is not a number"))),
        }
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        self.get_f64(key)?
            .ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.get_f64(key)?.unwrap_or(default))
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| Error::Config(format!("key `{key}`: `{v}` is not a count"))),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.get_usize(key)?.unwrap_or(default))
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<u64>()
                .map(Some)
                .map_err(|_| Error::Config(format!("key `{key}`: `{v}` is not an integer"))),
        }
    }

    pub fn get_profile(&self, key: &str) -> Result<Option<CouplingProfile>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => CouplingProfile::from_config_string(v).map(Some),
        }
    }

    /// Reject keys outside the allowed set, naming the first offender.
    pub fn check_known_keys(&self, allowed: &[&str]) -> Result<()> {
        for key in self.entries.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown key `{key}`")));
            }
        }
        Ok(())
    }

    /// Constants table with per-key overrides; defaults to CODATA values.
    /// Keys: constants.G, constants.hbar, constants.c, constants.k_B (or
    /// `constants = natural`).
    pub fn constants(&self) -> Result<PhysicalConstants> {
        let mut k = match self.get("constants") {
            Some("natural") => PhysicalConstants::natural(),
            Some("codata") | None => PhysicalConstants::default(),
            Some(other) => {
                return Err(Error::Config(format!(
                    "key `constants`: `{other}` is not `codata` or `natural`"
                )))
            }
        };
        k.g_newton = self.f64_or("constants.G", k.g_newton)?;
        k.hbar = self.f64_or("constants.hbar", k.hbar)?;
        k.c = self.f64_or("constants.c", k.c)?;
        k.k_b = self.f64_or("constants.k_B", k.k_b)?;
        k.validate()?;
        Ok(k)
    }

    /// Spectral-density preset. Keys: sd.prefactor, sd.exponent, sd.cutoff,
    /// sd.dos_exponent.
    pub fn spectral_density(&self) -> Result<SpectralDensity> {
        SpectralDensity::new(
            self.f64_or("sd.prefactor", 1.0)?,
            self.f64_or("sd.exponent", DEFAULT_COUPLING_EXPONENT)?,
            self.require_f64("sd.cutoff")?,
            self.f64_or("sd.dos_exponent", DEFAULT_DOS_EXPONENT)?,
        )
    }

    pub const CONSTANTS_KEYS: [&'static str; 5] =
        ["constants", "constants.G", "constants.hbar", "constants.c", "constants.k_B"];

    pub const SPECTRAL_KEYS: [&'static str; 4] =
        ["sd.prefactor", "sd.exponent", "sd.cutoff", "sd.dos_exponent"];
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basics() {
        let cfg = KeyValueConfig::parse(
            "# comment\n\
             seed = 42\n\
             sd.cutoff = 2.5   # trailing comment\n\
             \n\
             name = free text value\n",
        )
        .unwrap();
        assert_eq!(cfg.get_u64("seed").unwrap(), Some(42));
        assert_eq!(cfg.get_f64("sd.cutoff").unwrap(), Some(2.5));
        assert_eq!(cfg.get("name"), Some("free text value"));
        assert_eq!(cfg.get("missing"), None);
    }

    #[test]
    fn parse_errors() {
        assert!(KeyValueConfig::parse("just a line").is_err());
        assert!(KeyValueConfig::parse("= 3").is_err());
        assert!(KeyValueConfig::parse("a = 1\na = 2").is_err());
        let cfg = KeyValueConfig::parse("x = abc").unwrap();
        assert!(cfg.get_f64("x").is_err());
    }

    #[test]
    fn unknown_key_named() {
        let cfg = KeyValueConfig::parse("seed = 1\nbogus = 2").unwrap();
        let err = cfg.check_known_keys(&["seed"]).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn constants_defaults_and_overrides() {
        let cfg = KeyValueConfig::parse("").unwrap();
        assert_eq!(cfg.constants().unwrap(), PhysicalConstants::default());
        let cfg = KeyValueConfig::parse("constants = natural\nconstants.G = 2.0").unwrap();
        let k = cfg.constants().unwrap();
        assert_eq!(k.g_newton, 2.0);
        assert_eq!(k.hbar, 1.0);
        let bad = KeyValueConfig::parse("constants.c = -3").unwrap();
        assert!(bad.constants().is_err());
    }

    #[test]
    fn spectral_preset() {
        let cfg = KeyValueConfig::parse("sd.cutoff = 4.0\nsd.prefactor = 0.3").unwrap();
        let sd = cfg.spectral_density().unwrap();
        assert_eq!(sd.cutoff, 4.0);
        assert_eq!(sd.prefactor, 0.3);
        assert_eq!(sd.exponent, DEFAULT_COUPLING_EXPONENT);
        let none = KeyValueConfig::parse("").unwrap();
        assert!(none.spectral_density().is_err());
    }

    #[test]
    fn overrides_win() {
        let mut cfg = KeyValueConfig::parse("seed = 1\n").unwrap();
        cfg.apply_overrides(&["seed=7".into(), "extra=3".into()]).unwrap();
        assert_eq!(cfg.get_u64("seed").unwrap(), Some(7));
        assert_eq!(cfg.get("extra"), Some("3"));
        assert!(cfg.apply_overrides(&["notkv".into()]).is_err());
    }

    #[test]
    fn profile_from_config() {
        let cfg = KeyValueConfig::parse("branch1.profile = 0:1:0.5, 1:2:-0.5").unwrap();
        let p = cfg.get_profile("branch1.profile").unwrap().unwrap();
        assert_eq!(p.segments().len(), 2);
    }
}
