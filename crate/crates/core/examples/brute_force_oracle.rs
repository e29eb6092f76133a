//! Checks the recursive enumerator against an exhaustive scan on random
//! sparse measures.
//!
//! `cargo run --release --example brute_force_oracle`

use skewscope::enumerate::{brute_force_minimal, fsr, SkewQuery, SpectrumCoeffs};
use skewscope::fourier::Spectrum;
use skewscope::generators::random_sparse;
use skewscope::Sign;

fn main() -> skewscope::Result<()> {
    let q = SkewQuery::new(3, 1.0, 0.5, Sign::Positive)?;
    for seed in 0..5 {
        let m = random_sparse(10, 32, seed)?;
        let spec = Spectrum::of(&m);
        let fast = fsr(&spec, &SpectrumCoeffs::exact(spec.clone()), &q)?;
        let slow = brute_force_minimal(&m, &q)?;
        let same = fast.reports.iter().map(|r| r.subcube).eq(slow.iter().map(|r| r.subcube));
        println!(
            "seed {seed}: {} subcubes, {} nodes visited of {} cubes scanned, agree={same}",
            fast.reports.len(),
            fast.stats.nodes,
            skewscope::cube::count_subcubes(10, 3)
        );
    }
    Ok(())
}
