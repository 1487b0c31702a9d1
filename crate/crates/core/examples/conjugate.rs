//! Builds the unitary carrying one projection onto a nearby one.

use perturba::perturb::conjugating_unitary;
use perturba::CMatrix;

fn main() -> perturba::Result<()> {
    let theta: f64 = 0.3;
    let p = CMatrix::from_real_diag(&[1.0, 0.0]);
    let (c, s) = (theta.cos(), theta.sin());
    let q = CMatrix::from_real(2, 2, &[c * c, c * s, c * s, s * s]);
    let (u, cert) = conjugating_unitary(&p, &q)?;
    println!("u =\n{u:?}");
    println!("‖q − p‖ = {:.4e}", cert.input_defect);
    println!("‖I − u‖ = {:.4e} (bound √2‖q − p‖ = {:.4e})", cert.correction_distance, cert.bound_claimed.unwrap_or(f64::NAN));
    println!("‖u p u* − q‖ = {:.1e}", u.matmul(&p).mul_adjoint(&u).dist(&q));
    Ok(())
}
