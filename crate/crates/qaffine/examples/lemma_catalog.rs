//! The bracket-identity catalog for type D4, evaluated as operators on the
//! Fock space together with the `τ`-image of each entry.

use std::sync::Arc;

use qaffine::bracket::{check_lemma, lemma_catalog, OpBuilder};
use qaffine::fock::Truncation;
use qaffine::relations::Checker;
use qaffine::roots::RootSystem;
use qaffine::scalars::ExactField;
use qaffine::vertex::VertexEngine;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rs = Arc::new(RootSystem::from_name("D4")?);
    let mut ch = Checker::new(
        Arc::new(VertexEngine::new(rs.clone(), ExactField)),
        Truncation { max_osc_degree: 3, beta_box: 3 },
    );
    let mut builder = OpBuilder::new(rs.rank());
    for entry in lemma_catalog(&rs).into_iter().take(6) {
        for e in [entry.tau(), entry] {
            let rep = check_lemma(&mut ch, &mut builder, "lemmas", &e)?;
            println!("{:<28} {:?} on {} states: {}", e.name, rep.status, rep.tested_states, e.expr.render());
        }
    }
    Ok(())
}
