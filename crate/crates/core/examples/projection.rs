//! Rounds a nearly idempotent Hermitian matrix to a projection and reads
//! the certificate.

use perturba::perturb::round_to_projection;
use perturba::CMatrix;

fn main() -> perturba::Result<()> {
    let b = CMatrix::from_real(3, 3, &[0.92, 0.05, 0.0, 0.05, 0.07, 0.02, 0.0, 0.02, 1.04]);
    let (p, cert) = round_to_projection(&b)?;
    println!("p =\n{p:?}");
    println!("‖b² − b‖ = {:.4e}", cert.input_defect);
    println!("‖p − b‖  = {:.4e} (bound {:.4e})", cert.correction_distance, cert.bound_claimed.unwrap_or(f64::NAN));
    println!("‖p² − p‖ = {:.1e}", cert.structural_residual);

    match round_to_projection(&CMatrix::from_real_diag(&[0.5])) {
        Err(e) => println!("diag(0.5): {e}"),
        Ok(_) => unreachable!("1/2 has no nearest projection"),
    }
    Ok(())
}
