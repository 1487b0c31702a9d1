//! Moves a partial isometry into a nest algebra: first its range is made
//! block diagonal, then its sub-diagonal blocks are removed.

use perturba::algebra::{arveson_distance, BlockComposition};
use perturba::perturb::{align_block_diagonal_range, block_triangularize};
use perturba::CMatrix;

fn rotation(t: f64) -> CMatrix {
    CMatrix::from_real(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()])
}

fn main() -> perturba::Result<()> {
    let comp: BlockComposition = "1,1".parse()?;
    let v = rotation(0.1);
    let (w, cert) = block_triangularize(&v, &comp)?;
    println!("R(0.1) triangularized to\n{w:?}");
    println!("sub-diagonal defect {:.4e}, moved {:.4e}", arveson_distance(&v, &comp)?, cert.correction_distance);

    let comp: BlockComposition = "1,2".parse()?;
    let mut exact = CMatrix::zeros(3, 3);
    exact[(0, 0)] = 1.0.into();
    exact[(1, 2)] = 1.0.into();
    // Rotation by 0.05 in the plane of the first and last basis vectors.
    let (c, s) = (0.05f64.cos(), 0.05f64.sin());
    let tilt = CMatrix::from_real(3, 3, &[c, 0.0, -s, 0.0, 1.0, 0.0, s, 0.0, c]);
    let v = tilt.matmul(&exact);
    let (aligned, cert) = align_block_diagonal_range(&exact, &comp, &v)?;
    println!("range tilt {:.4e}, aligned residual {:.1e}", cert.stage("range-tilt").unwrap_or(0.0), cert.structural_residual);
    let (t, cert) = block_triangularize(&aligned, &comp)?;
    println!("triangular result moved {:.4e}:\n{t:?}", cert.correction_distance);
    Ok(())
}
