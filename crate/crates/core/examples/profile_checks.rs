//! Which saturation profiles are admissible: decay conditions and convexity
//! of the potential for the p-models, the exponential and the heat equation.

use tempered::convex::{
    check_convexity, check_decay_conditions, make_pmodel_profile, AnisotropyMatrix, Potential, SaturationProfile, DECAY_TOL,
    DECAY_Z_MAX,
};

fn main() -> tempered::Result<()> {
    let mut profiles = Vec::new();
    for p in [1.0, 2.0, 3.0] {
        profiles.push((format!("p = {p}"), make_pmodel_profile(p)?));
    }
    profiles.push(("e^-z".into(), SaturationProfile::exponential()));
    profiles.push(("g = 1".into(), SaturationProfile::constant(1.0)));

    for (name, g) in profiles {
        let d = check_decay_conditions(&g, DECAY_Z_MAX, DECAY_TOL)?;
        // g = 1 has no potential with linear growth to build
        let convex = match Potential::without_decay_check(g, AnisotropyMatrix::identity(2), 1.0) {
            Ok(pot) => check_convexity(&pot, &[0.01, 0.3, 1.0, 2.0, 10.0], 16).passes.to_string(),
            Err(_) => "-".into(),
        };
        println!(
            "{name:<8} basic {:<5} enhanced {:<5} alpha {:<10} convex {:<5} ratio sup {:.4}",
            d.passes_basic,
            d.passes_enhanced,
            d.enhanced_alpha.map(|a| format!("{a:.6}")).unwrap_or_else(|| "-".into()),
            convex,
            d.ratio_bound
        );
        for f in &d.failures {
            println!("         {f}");
        }
    }
    Ok(())
}
