//! Finds the heavy coefficient of a noisy parity from samples alone, using
//! the fast correlation search and the fresh-sample filter.
//!
//! `cargo run --release --example ffc_search`

use skewscope::generators::NoisyParity;
use skewscope::heavy::{ffc, CorrBackend, FfcParams};
use skewscope::measure::draw_samples;
use skewscope::CoordSet;

fn main() -> skewscope::Result<()> {
    let n = 10;
    let np = NoisyParity::new(n, &CoordSet::from_indices(n, &[0, 3, 6])?, 0.1)?;
    let params = FfcParams::new(n + 1, 4, 0.5, 0.5, 42)?;
    println!("tau={:.4} d={} rounds={} filter samples={}", params.tau, params.d, params.rounds, params.filter_samples());

    let samples = draw_samples(&np, params.d + params.filter_samples(), 42)?;
    let out = ffc(&samples, &params, CorrBackend::Blocked)?;
    println!("search reported {} sets, {} survived the filter", out.raw.len(), out.list.len());
    for e in &out.list.entries {
        println!("  {:011b} {:+.3}", e.set, e.value);
    }
    println!("secret {:011b} found: {}", np.support_set(), out.list.contains(np.support_set()));
    Ok(())
}
