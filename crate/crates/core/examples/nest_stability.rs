//! Corrects an approximate embedding of T(2,1) ⊗ I₂ into the nest algebra
//! T(4,2) to an exact star-extendible embedding nearby.

use perturba::algebra::{matrix_unit_residual, nest_pattern, random_near_identity_embedding, BlockComposition};
use perturba::stability::stabilize_nest_inclusion;

fn main() -> perturba::Result<()> {
    let source: BlockComposition = "2,1".parse()?;
    let target = source.ampliate(2)?;
    for eps in [1e-2, 1e-3, 1e-4] {
        let phi = random_near_identity_embedding(&nest_pattern(&source), 2, eps, 7)?;
        let (psi, report) = stabilize_nest_inclusion(&phi, &target)?;
        println!(
            "eps {eps:e}: containment defect {:.3e}, ‖φ − ψ‖ = {:.3e}, ψ residual {:.1e}, per-block bounds hold: {}",
            report.input_defect,
            report.distance,
            matrix_unit_residual(psi.images()),
            report.block_bound_holds()
        );
    }
    Ok(())
}
