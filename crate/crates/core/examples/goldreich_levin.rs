//! Recovers the heavy coefficients of a planted product density through
//! density queries, and reports the query count against the budget.
//!
//! `cargo run --release --example goldreich_levin`

use skewscope::fourier::Spectrum;
use skewscope::generators::random_planted_product;
use skewscope::heavy::{goldreich_levin, GlParams, GlWeights};
use skewscope::measure::CountingOracle;

fn main() -> skewscope::Result<()> {
    let n = 10;
    let (m, planted) = random_planted_product(n, &[0.9, 0.5, 0.3], 3, 5)?;
    println!("planted factors:");
    for (set, c) in &planted {
        println!("  {set:010b} {c:+.2}");
    }

    let params = GlParams::new(0.4, m.inorm(), 0.05, 5)?;
    let oracle = CountingOracle::new(&m);
    let out = goldreich_levin(n, GlWeights::Queries(&oracle), &params)?.into_result()?;
    println!("queries {} of budget {} ({} bucket estimates)", out.queries, out.budget, out.buckets_estimated);

    let spec = Spectrum::of(&m);
    for e in &out.list.entries {
        println!("  {:010b} estimate {:+.3} true {:+.3}", e.set, e.value, spec.coeff(e.set));
    }
    Ok(())
}
