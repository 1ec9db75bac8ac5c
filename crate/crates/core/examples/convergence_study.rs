//! The three built-in refinement studies with their observed orders.

use neurite_growth::validation::StudyCase;

fn main() -> neurite_growth::Result<()> {
    let levels = std::env::args().nth(1).map_or(4, |s| s.parse().expect("levels"));
    for case in StudyCase::ALL {
        let study = case.study(levels);
        let (q, expected) = (study.quantity, study.expected_order);
        let report = study.run()?;
        let order = report.order(q).unwrap_or(f64::NAN);
        println!("{:<15} {q:<8} order {order:.3} (expected {expected})", case.name());
    }
    Ok(())
}
