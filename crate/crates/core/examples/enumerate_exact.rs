//! Finds the minimal negatively skewed subcubes of tribes with exact
//! coefficient access. They are exactly the zero-certificates.
//!
//! `cargo run --example enumerate_exact`

use skewscope::enumerate::{fsn, SkewQuery, SpectrumCoeffs};
use skewscope::fourier::Spectrum;
use skewscope::generators::Tribes;
use skewscope::Sign;

fn main() -> skewscope::Result<()> {
    let tribes = Tribes::new(3, 4)?;
    let m = tribes.explicit()?;
    let spec = Spectrum::of(&m);
    let q = SkewQuery::new(3, 1.0, 1.0 / 3.0, Sign::Negative)?;
    let out = fsn(&spec, &SpectrumCoeffs::exact(spec.clone()), &q)?;

    println!("{} subcubes, {} search nodes", out.reports.len(), out.stats.nodes);
    for r in out.reports.iter().take(5) {
        println!("  {r}");
    }
    println!("  ...");
    println!("match the zero-certificates: {}", out.reports.len() == tribes.zero_certificates().len());
    Ok(())
}
