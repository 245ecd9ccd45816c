//! Fan and polytope files, with the bundled fixtures as a fallback.

use std::path::Path;

use ellgen::toric::{dual_polytope, Fan, FanFile, Polytope, PolytopeFile, ReflexivePair};

use crate::CliError;

const FIXTURES: &[(&str, &str)] = &[
    ("p1", include_str!("../../../fixtures/p1.json")),
    ("p2", include_str!("../../../fixtures/p2.json")),
    ("p3", include_str!("../../../fixtures/p3.json")),
    ("p1xp1", include_str!("../../../fixtures/p1xp1.json")),
    ("p112", include_str!("../../../fixtures/p112.json")),
    ("p112xp1", include_str!("../../../fixtures/p112xp1.json")),
    ("quartic_k3", include_str!("../../../fixtures/quartic_k3.json")),
    ("quintic", include_str!("../../../fixtures/quintic.json")),
    ("sextic", include_str!("../../../fixtures/sextic.json")),
    ("octic", include_str!("../../../fixtures/octic.json")),
];

pub enum Input {
    Fan(Fan),
    Polytope(ReflexivePair),
}

pub struct Loaded {
    pub input: Input,
    pub label: String,
}

fn stem(arg: &str) -> String {
    Path::new(arg).file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| arg.to_string())
}

/// Reads `arg` as a path, or as the name of a bundled fixture when no such
/// file exists.
pub fn load(arg: &str) -> Result<Loaded, CliError> {
    let label = stem(arg);
    let text = if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| CliError::input(format!("{}: {}", arg, e)))?
    } else {
        FIXTURES
            .iter()
            .find(|(name, _)| *name == label)
            .map(|(_, t)| t.to_string())
            .ok_or_else(|| {
                CliError::input(format!("{}: no such file or bundled fixture ({})", arg, fixture_names().join(", ")))
            })?
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {}", arg, e)))?;
    let input = if value.get("rays").is_some() {
        let f: FanFile = serde_json::from_value(value).map_err(|e| CliError::input(format!("{}: {}", arg, e)))?;
        Input::Fan(Fan::from_file(&f)?)
    } else if value.get("vertices").is_some() {
        let p: PolytopeFile = serde_json::from_value(value).map_err(|e| CliError::input(format!("{}: {}", arg, e)))?;
        Polytope::from_file(&p)?;
        Input::Polytope(dual_polytope(p.vertices)?)
    } else {
        return Err(CliError::input(format!("{}: expected a fan (rays) or a polytope (vertices)", arg)));
    };
    Ok(Loaded { input, label })
}

pub fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|(n, _)| *n).collect()
}
