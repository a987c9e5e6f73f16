//! Taylor coefficients of the generating functions `g_{ij}^±(z)` and their
//! checks: division against the closed form, the convolution identity and
//! invariance under `τ`.

use qaffine::genfun::{coefficient_table, series_inverse_check, tau_invariance_check};
use qaffine::roots::{RootSystem, Sign};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rs = RootSystem::from_name("D4")?;
    for (i, j) in [(1, 1), (1, 2), (1, 3)] {
        let table = coefficient_table(&rs, i, j, Sign::Plus, 4);
        println!("g+_({i},{j}): {}", serde_json::to_string(&table.coeffs)?);
        println!("  g+ * g- = 1 to order 8: {}", series_inverse_check(&rs, i, j, 8));
        let tau_ok = tau_invariance_check(&rs, i, j).iter().all(|c| c.pass);
        println!("  tau-invariance:         {tau_ok}");
    }
    Ok(())
}
