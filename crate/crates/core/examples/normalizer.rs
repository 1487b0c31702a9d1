//! Repairs an approximate normalizer of the diagonal masa, then moves one
//! into a digraph algebra.

use perturba::algebra::{IncidencePattern, MasaPartition};
use perturba::regular::{fix_normalizer, transfer_normalizer};
use perturba::{CMatrix, C64};

fn main() -> perturba::Result<()> {
    let masa = MasaPartition::full_diagonal(3)?;
    let mut v = CMatrix::zeros(3, 3);
    v[(0, 1)] = C64::from_polar(0.98, 0.2);
    v[(1, 2)] = C64::from_polar(1.01, -1.0);
    v[(2, 0)] = C64::new(0.03, 0.01);
    let (w, cert) = fix_normalizer(&v, &IncidencePattern::full(3)?, &masa)?;
    println!("partial permutation with phases:\n{w:?}");
    println!("defect {:.3e}, moved {:.3e}", cert.input_defect, cert.correction_distance);

    v[(1, 0)] = C64::new(0.04, 0.0);
    let upper = IncidencePattern::upper_triangular(3)?;
    let (w, cert) = transfer_normalizer(&v, &upper, &masa)?;
    println!("inside the upper triangular algebra, moved {:.3e}:\n{w:?}", cert.correction_distance);
    Ok(())
}
