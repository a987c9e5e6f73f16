//! Root data of the supported simply-laced types: Cartan matrix, the
//! two-parameter pairing `⟨i, j⟩`, the highest root and its bracket word.

use qaffine::roots::{RootSystem, Sign};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "D4".into());
    let rs = RootSystem::from_name(&name)?;
    let n = rs.rank();
    println!("{name}: rank {n}, Coxeter number {}", rs.coxeter_h());
    println!("affine Cartan matrix (nodes 0..={n}):");
    for i in 0..=n {
        let row: Vec<String> = (0..=n).map(|j| format!("{:>3}", rs.cartan(i, j))).collect();
        println!("  {}", row.join(""));
    }
    println!("pairing <i,j>:");
    for i in 0..=n {
        let row: Vec<String> = (0..=n).map(|j| rs.pairing(i, j).render()).collect();
        println!("  {}", row.join("  |  "));
    }
    println!("theta word       = {:?}", rs.theta_word());
    println!(
        "bracket params - = {:?}",
        rs.theta_bracket_parameters(Sign::Minus).iter().map(|q| q.render()).collect::<Vec<_>>()
    );
    println!("constant a       = {}", rs.iso_constant_a());
    Ok(())
}
