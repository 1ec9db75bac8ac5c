//! Samples the coupling functions of every preset against the structural
//! hypotheses and prints the worst offender of each check.

use neurite_growth::model::presets::{setup, Preset};
use neurite_growth::validation::hypothesis_diagnostics;

fn main() {
    for preset in Preset::ALL {
        let s = setup(preset);
        let report = hypothesis_diagnostics(&s.functions, &s.params);
        println!("{}", preset.name());
        for c in &report.checks {
            match &c.worst {
                None => println!("  {:<3} pass", c.id),
                Some(w) => println!("  {:<3} warn  {} at {:?} (off by {:.3e})", c.id, w.property, w.args, w.violation),
            }
        }
    }
}
