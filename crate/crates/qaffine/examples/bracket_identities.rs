//! Two-parameter brackets `[a, b]_q = ab - q ba` in the free algebra:
//! expanding nests and checking the algebraic identity suite.

use qaffine::bracket::{expand_bracket, identity_suite, BracketExpr, IdentityParams};
use qaffine::scalars::Scalar;

fn main() {
    let e = BracketExpr::bracket(
        BracketExpr::symbol("a"),
        BracketExpr::bracket(BracketExpr::symbol("b"), BracketExpr::symbol("c"), Scalar::r()),
        Scalar::s(),
    );
    println!("{}", e.render());
    for word in expand_bracket(&e).words() {
        let letters: Vec<String> = word.letters.iter().map(|g| g.render()).collect();
        println!("  ({}) {}", word.coeff, letters.join(" "));
    }
    for check in identity_suite(&IdentityParams::default()) {
        println!("{:<22} {}", check.name, if check.pass { "holds" } else { "FAILS" });
    }
}
