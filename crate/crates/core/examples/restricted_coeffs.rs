//! Reads the heavy coefficients of a restriction off a global heavy list,
//! and compares with a direct transform of the restricted measure.
//!
//! `cargo run --example restricted_coeffs`

use skewscope::fourier::Spectrum;
use skewscope::generators::random_sparse;
use skewscope::heavy::{deduce_subcube_coeffs, find_heavy_exact, heavy_in_spectrum, preprocess, DeduceAccess};
use skewscope::Subcube;

fn main() -> skewscope::Result<()> {
    let (k, tau) = (4, 0.1);
    let m = random_sparse(10, 32, 3)?;
    let spec = Spectrum::of(&m);
    let graph = preprocess(&heavy_in_spectrum(&spec, k, tau / 4f64.powi(k as i32)));
    println!("graph: {} sets, {} edges", graph.member_count(), graph.edge_count());

    let c = m.support().next().map(|x| Subcube::new(10, 0b1000100001, x & 0b1000100001)).transpose()?.unwrap();
    let deduced = deduce_subcube_coeffs(&graph, &c, tau, DeduceAccess::Exact(&spec))?;
    let r = m.restrict(&c)?;
    let direct = find_heavy_exact(r.measure().expect("cube has mass"), k - c.codim(), tau);

    println!("restriction to {c}: {} deduced, {} by direct transform", deduced.len(), direct.len());
    for e in &deduced.entries {
        println!("  {:010b} {:+.4}", e.set, e.value);
    }
    let mut lifted: Vec<u64> = direct.entries.iter().map(|e| r.lift_set(e.set)).collect();
    lifted.sort_unstable();
    let mut sets = deduced.sets();
    sets.sort_unstable();
    println!("lists agree: {}", lifted == sets);
    Ok(())
}
