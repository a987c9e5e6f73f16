//! On the line `s = r^{-1}` the two-parameter relations collapse to their
//! one-parameter form; off the line they do not.

use std::sync::Arc;

use qaffine::fock::Truncation;
use qaffine::relations::{check_one_parameter_degeneration, Checker, Ranges};
use qaffine::roots::RootSystem;
use qaffine::scalars::{PointField, Rat};
use qaffine::vertex::VertexEngine;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rs = Arc::new(RootSystem::from_name("A2")?);
    for (u, v) in [(Rat::int(2), Rat::new(1, 2)), (Rat::int(2), Rat::new(1, 3))] {
        let field = PointField::new(u.clone(), v.clone())?;
        let mut ch = Checker::new(Arc::new(VertexEngine::new(rs.clone(), field)), Truncation::default());
        let rep = check_one_parameter_degeneration(&mut ch, &Ranges::default());
        println!("r^(1/4) = {u}, s^(1/4) = {v}: {} instances, {} failures", rep.instances.len(), rep.failures());
    }
    Ok(())
}
