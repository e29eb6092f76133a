//! End to end from samples: the minimal skewed subcubes of a noisy parity,
//! with skews estimated on the sample.
//!
//! `cargo run --release --example enumerate_sampled`

use skewscope::enumerate::{fsn, fsr, SampledSkew, SkewQuery, SpectrumCoeffs};
use skewscope::generators::NoisyParity;
use skewscope::measure::draw_samples;
use skewscope::{CoordSet, Sign};

fn main() -> skewscope::Result<()> {
    let np = NoisyParity::new(12, &CoordSet::from_indices(12, &[0, 3, 7])?, 0.1)?;
    let samples = draw_samples(&np, 20_000, 7)?;
    let source = SampledSkew::union_bound(&samples, 0.05, 4)?;
    let provider = SpectrumCoeffs::empirical(&samples)?;

    for sign in [Sign::Positive, Sign::Negative] {
        let q = SkewQuery::new(4, 0.5, 1.0, sign)?;
        let out = match sign {
            Sign::Positive => fsr(&source, &provider, &q)?,
            Sign::Negative => fsn(&source, &provider, &q)?,
        };
        println!("{sign}: {} subcubes", out.reports.len());
        for r in &out.reports {
            println!("  {} skew={:+.3} +/- {:.3}", r.subcube, r.skew, r.est_error);
        }
    }
    Ok(())
}
