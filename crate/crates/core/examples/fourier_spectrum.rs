//! Fourier spectrum of a tribes measure: Parseval, level weights against the
//! hypercontractive bound, and skews read off the coefficients.
//!
//! `cargo run --example fourier_spectrum`

use skewscope::fourier::{hypercontractive_bound, Spectrum};
use skewscope::generators::Tribes;
use skewscope::Subcube;

fn main() -> skewscope::Result<()> {
    let m = Tribes::new(3, 3)?.explicit()?;
    let spec = Spectrum::of(&m);
    let second_moment = m.density().iter().map(|v| v * v).sum::<f64>() / m.density().len() as f64;
    println!("sum of squared coefficients {:.6}, E[psi^2] {:.6}", spec.total_weight(), second_moment);

    for k in 1..=4 {
        let w = spec.level_weight(k);
        let bound = hypercontractive_bound(m.inorm(), k)?;
        println!("W<={k} = {w:.4}  bound {bound:.2}");
    }

    let c: Subcube = "-**-**-**".parse()?;
    println!("skew of {c}: direct {:.4}, from spectrum {:.4}", m.skew(&c), spec.skew(&c));

    println!("largest coefficients:");
    let mut top = spec.dump(0.05);
    top.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()));
    for (mask, v) in top.iter().take(6) {
        println!("  {mask:09b} {v:+.4}");
    }
    Ok(())
}
