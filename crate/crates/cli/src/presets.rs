//! Shipped experiment presets. Each file is frozen at `preset_version = 1`;
//! changing a preset means adding a new name, not editing an old one.

use crate::config::RunConfig;
use crate::CliError;

const PRESETS: &[(&str, &str)] = &[
    ("fig1a", include_str!("../presets/fig1a.toml")),
    ("fig1b", include_str!("../presets/fig1b.toml")),
    ("fig2a", include_str!("../presets/fig2a.toml")),
    ("fig2b", include_str!("../presets/fig2b.toml")),
    ("fig7", include_str!("../presets/fig7.toml")),
    ("fig8", include_str!("../presets/fig8.toml")),
    ("fig10_parallel", include_str!("../presets/fig10_parallel.toml")),
    ("fig10_antiparallel", include_str!("../presets/fig10_antiparallel.toml")),
    ("fig11", include_str!("../presets/fig11.toml")),
];

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

/// Raw TOML of a preset.
pub fn source(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Result<RunConfig, CliError> {
    if source(name).is_none() {
        return Err(CliError::UnknownPreset(name.to_string()));
    }
    let text = format!("preset = {}\n", toml::Value::String(name.to_string()));
    RunConfig::from_toml_str(&text, name).map_err(CliError::Invalid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PRESET_VERSION;

    #[test]
    fn every_preset_is_named_after_itself_and_versioned() {
        for name in names() {
            let cfg = load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(cfg.name, name);
            assert_eq!(cfg.preset_version, Some(PRESET_VERSION));
            assert_eq!(cfg.output.csv.as_deref(), Some(format!("{name}.csv").as_str()));
        }
    }

    #[test]
    fn unknown_preset_is_an_error() {
        assert!(matches!(load("fig99"), Err(CliError::UnknownPreset(_))));
    }
}
