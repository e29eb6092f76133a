//! Builds each test-measure family and prints a short profile of it.
//!
//! `cargo run --example generate_measures`

use skewscope::generators::{random_sparse, subcube_uniform, BchSpec, NoisyParity, Tribes};
use skewscope::measure::{write_measure, MeasureFormat};
use skewscope::{CoordSet, ExplicitMeasure, Subcube};

fn profile(name: &str, m: &ExplicitMeasure) {
    println!("{name:<28} n={:<2} support={:<6} inorm={}", m.dim(), m.support().count(), m.inorm());
}

fn main() -> skewscope::Result<()> {
    let cube: Subcube = "+-**+***".parse()?;
    profile("uniform on +-**+***", &subcube_uniform(&cube)?);
    profile("tribes k=3 t=4", &Tribes::new(3, 4)?.explicit()?);

    let secret = CoordSet::from_indices(10, &[1, 4, 8])?;
    profile("noisy parity n=10 eta=0.1", &NoisyParity::new(10, &secret, 0.1)?.explicit()?);

    let bch = BchSpec::new(4, 1)?;
    profile("dual BCH l=4 e=1", &bch.dual_measure()?);
    println!("  weight-4 codewords: {}", bch.count_min_weight_codewords()?);

    let sparse = random_sparse(6, 4, 11)?;
    profile("random sparse n=6", &sparse);
    println!("\nsparse file format:");
    write_measure(std::io::stdout().lock(), &sparse, MeasureFormat::Sparse)?;
    Ok(())
}
