//! Distances to a nest algebra, a digraph algebra and the diagonal masa.

use perturba::algebra::{arveson_distance, expectation, masa_distance, pattern_distance, MasaPartition};
use perturba::harness::parse_pattern;
use perturba::CMatrix;

fn main() -> perturba::Result<()> {
    let x = CMatrix::from_real(3, 3, &[1.0, 0.4, 0.0, 0.2, 1.0, 0.3, 0.05, 0.1, 1.0]);
    println!("to T(1,1,1):   {:.6}", arveson_distance(&x, &"1,1,1".parse()?)?);
    println!("to T(2,1):     {:.6}", arveson_distance(&x, &"2,1".parse()?)?);

    let pattern = parse_pattern("pairs:3:1-2,3-2")?;
    let d = pattern_distance(&x, &pattern)?;
    println!("to the V-shaped digraph algebra: {:.6} ({})", d.value, if d.exact { "exact" } else { "upper bound" });

    let masa = MasaPartition::full_diagonal(3)?;
    let m = masa_distance(&x, &masa)?;
    println!(
        "to the diagonal: between {:.6} and {:.6}; E(x) diagonal =\n{:?}",
        m.commutator_bound / 2.0,
        m.estimate,
        expectation(&x, &masa)?
    );
    Ok(())
}
