//! The shipped config files and the documented examples parse.

use std::path::Path;

use neurite_growth::experiment::{load_config, parse_config};
use neurite_growth::model::RateLaw;

fn repo() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
}

#[test]
fn shipped_configs_load() {
    let mut seen = 0;
    for entry in std::fs::read_dir(repo().join("configs")).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let cfg = load_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(cfg.name, path.file_stem().unwrap().to_str().unwrap());
            seen += 1;
        }
    }
    assert!(seen >= 5);
}

#[test]
fn large_alpha_config_overlays_the_emission() {
    let cfg = load_config(&repo().join("configs/experiment-1-large-alpha.toml")).unwrap();
    assert_eq!(cfg.functions.alpha_plus[1], RateLaw::Rising { coef: 1.0, cap: 2.0 });
    assert_eq!(cfg.functions.alpha_minus[0], RateLaw::Hump { coef: 0.1, cap: 2.0 });
}

/// Every ```toml block of the format reference parses on its own or, for
/// fragments, after a preset line.
#[test]
fn documented_examples_parse() {
    let doc = std::fs::read_to_string(repo().join("docs/config.md")).unwrap();
    let mut blocks = 0;
    for block in doc.split("```toml").skip(1) {
        let text = block.split("```").next().unwrap();
        let full = if text.contains("preset") {
            text.to_string()
        } else {
            format!("preset = \"experiment-1\"\n{text}")
        };
        parse_config(&full, "docs").unwrap_or_else(|e| panic!("{e}\n{full}"));
        blocks += 1;
    }
    assert!(blocks >= 3);
}
