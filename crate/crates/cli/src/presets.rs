//! Scenario presets shipped inside the binary.

pub const NAMES: [&str; 3] = ["figure1", "figure2", "stark"];

const FIGURE1: &str = include_str!("../presets/figure1.json");
const FIGURE2: &str = include_str!("../presets/figure2.json");
const STARK: &str = include_str!("../presets/stark.json");

pub fn source(name: &str) -> Option<&'static str> {
    match name {
        "figure1" => Some(FIGURE1),
        "figure2" => Some(FIGURE2),
        "stark" => Some(STARK),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{LoadedConfig, Overrides};

    #[test]
    fn every_preset_validates() {
        for name in NAMES {
            let loaded = LoadedConfig::from_preset(name, &Overrides::default()).unwrap();
            assert_eq!(loaded.config.name.as_deref(), Some(name));
        }
        assert!(source("figure3").is_none());
    }
}
