//! Modes of the vertex operators `x_i^±(k)` and of the Cartan fields
//! `ω_i(m)`, `ω'_i(m)` acting on Fock states.

use std::sync::Arc;

use qaffine::fock::FockState;
use qaffine::roots::{RootSystem, Sign};
use qaffine::scalars::ExactField;
use qaffine::vertex::VertexEngine;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rs = Arc::new(RootSystem::from_name("A2")?);
    let engine = VertexEngine::new(rs.clone(), ExactField);
    let vac = FockState::vacuum(rs.rank());
    for k in [-2, -1, 0] {
        let v = engine.x_mode_on_state(1, Sign::Plus, k, &vac);
        println!("x_1^+({k}) |0> = {}", engine.fock().render(&v));
    }
    // ω_i(m) lowers the oscillator degree by m, ω'_i(m) raises it by -m.
    let excited = FockState::new(&[(1, 1)], &[1, 0]);
    for m in [0, 1] {
        let v = engine.psi_mode_on_state(2, m, &excited);
        println!("omega_2({m}) {}  = {}", excited.render(), engine.fock().render(&v));
    }
    for m in [0, -1] {
        let v = engine.phi_mode_on_state(2, m, &excited);
        println!("omega'_2({m}) {} = {}", excited.render(), engine.fock().render(&v));
    }
    Ok(())
}
