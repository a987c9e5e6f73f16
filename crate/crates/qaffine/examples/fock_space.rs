//! The level-one Fock space: enumerating a truncation window and acting
//! with Heisenberg modes.

use std::sync::Arc;

use qaffine::fock::{FockSpace, FockState, LinComb, Truncation};
use qaffine::roots::RootSystem;
use qaffine::scalars::{ExactField, Field};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rs = Arc::new(RootSystem::from_name("A2")?);
    let window = Truncation { max_osc_degree: 2, beta_box: 1 };
    let states = window.enumerate(&rs);
    println!("{} basis states in the window; the first few:", states.len());
    for s in states.iter().take(6) {
        println!("  {}", s.render());
    }

    let fock = FockSpace::new(rs.clone(), ExactField);
    let f = fock.field();
    let vac = LinComb::single(f, FockState::vacuum(rs.rank()), f.one());
    let created = fock.act_heisenberg(1, -1, &vac)?;
    println!("a_1(-1) |0>        = {}", fock.render(&created));
    let back = fock.act_heisenberg(2, 1, &created)?;
    println!("a_2(1) a_1(-1) |0> = {}", fock.render(&back));
    Ok(())
}
