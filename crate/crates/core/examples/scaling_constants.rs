//! Scaled constants of the built-in scale set and the round trip back to
//! physical rates.

use neurite_growth::scaling::{max_density, vesicles_per_micron_growth, PhysicalScales};

fn main() -> neurite_growth::Result<()> {
    let scales = PhysicalScales::paper_2023();
    let p = scales.nondimensionalize()?;
    println!("kappa_v      = {}", p.kappa_v);
    println!("kappa_D      = {}", p.kappa_d);
    println!("kappa_lambda = {}", p.kappa_lambda);
    println!("kappa_som    = {}", p.kappa_som);
    println!("kappa_cone   = {}", p.kappa_cone);
    println!("kappa_L      = {}", p.kappa_l);
    println!("kappa_h      = {}", scales.kappa_h());
    println!("ell_min      = {:?}", p.ell_min);
    println!("Lambda_min   = {}", p.lambda_min);

    let rho = max_density(scales.vesicle_diameter, scales.neurite_diameter, 0.9, 7.0, 3.0);
    println!("rho_max      = {} vesicles/um ({} before rounding)", rho.reported, rho.exact);
    println!(
        "c_h          = {} vesicles/um (geometric estimate {:.2})",
        scales.c_h,
        vesicles_per_micron_growth(scales.vesicle_diameter, scales.neurite_diameter)
    );

    let back = scales.redimensionalize(&p);
    println!("{back:#?}");
    Ok(())
}
