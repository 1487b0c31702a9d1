//! Rounds an approximate partial isometry and compares ranks of nearby
//! partial isometries.

use perturba::perturb::{check_rank_stability, fix_partial_isometry};
use perturba::CMatrix;

fn main() -> perturba::Result<()> {
    let v = CMatrix::from_real(3, 3, &[0.0, 0.97, 0.0, 1.02, 0.0, 0.03, 0.0, 0.01, 0.12]);
    let (w, cert) = fix_partial_isometry(&v)?;
    println!("w =\n{w:?}");
    println!(
        "defect {:.4e}, moved {:.4e}, residual {:.1e}",
        cert.input_defect, cert.correction_distance, cert.structural_residual
    );

    let swap = CMatrix::from_real(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    println!("‖w − swap‖ = {:.4e}, equal rank: {}", w.dist(&swap), check_rank_stability(&w, &swap)?);
    Ok(())
}
