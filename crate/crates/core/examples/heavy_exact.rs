//! Heavy low-degree coefficients of a noisy parity, found exactly.
//!
//! `cargo run --example heavy_exact`

use skewscope::generators::NoisyParity;
use skewscope::heavy::find_heavy_exact;
use skewscope::CoordSet;

fn main() -> skewscope::Result<()> {
    let np = NoisyParity::new(10, &CoordSet::from_indices(10, &[2, 5, 7])?, 0.1)?;
    let m = np.explicit()?;
    let list = find_heavy_exact(&m, 4, 0.5);
    println!("{} sets with |coefficient| >= 0.5 and degree <= 4:", list.len());
    for e in &list.entries {
        println!("  {:011b} {:+.3}", e.set, e.value);
    }
    assert!(list.contains(np.support_set()));
    Ok(())
}
