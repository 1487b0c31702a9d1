//! Regular stability for a digraph algebra that is not a nest: the spanning
//! tree words and the corrected embedding.

use perturba::algebra::{matrix_unit_residual, normalizer_defect, random_near_identity_embedding, MasaPartition};
use perturba::harness::parse_pattern;
use perturba::regular::{regular_stabilize, tree_words};

fn main() -> perturba::Result<()> {
    let pattern = parse_pattern("pairs:4:1-2,3-2,3-4")?;
    let words = tree_words(&pattern);
    println!("tree edges (0-based): {:?}", words.tree_edges);
    for ((i, j), w) in &words.words {
        println!("  e{}{} = word {w:?}", i + 1, j + 1);
    }

    let m = 3;
    let phi = random_near_identity_embedding(&pattern, m, 5e-3, 11)?;
    let target_masa = MasaPartition::full_diagonal(4 * m)?;
    let (psi, report) = regular_stabilize(
        &phi,
        &MasaPartition::blocks_of(4, m)?,
        &pattern.tensor_diagonal(m)?,
        &target_masa,
    )?;
    println!(
        "defect {:.3e}, moved {:.3e} (bound {:.3e}), residual {:.1e}",
        report.input_defect,
        report.certificate.correction_distance,
        report.certificate.bound_claimed.unwrap_or(f64::NAN),
        matrix_unit_residual(psi.images())
    );
    let worst = psi
        .images()
        .units()
        .map(|(_, f)| normalizer_defect(f, &target_masa))
        .collect::<perturba::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("every unit normalizes the target masa (worst defect {worst:.1e})");
    Ok(())
}
