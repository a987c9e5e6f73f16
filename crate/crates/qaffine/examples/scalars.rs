//! Exact scalar arithmetic in `Q(r^{1/4}, s^{1/4})`: parsing, rendering,
//! the swap `τ: r ↔ s`, and evaluation at a rational point.

use qaffine::scalars::{Rat, Scalar};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = Scalar::r();
    let s = Scalar::s();
    // The q-number [2] = (r^2 - s^2)/(r - s) reduces to r + s.
    let two = r.pow(2)?.sub(&s.pow(2)?).div(&r.sub(&s))?;
    println!("[2]_(r,s)      = {two}");

    let x: Scalar = "(r^(1/2) - s^(-3/4)) / (1 + r*s)".parse()?;
    println!("x              = {x}");
    println!("tau(x)         = {}", x.tau());
    println!("x * tau(x)     = {}", x.mul(&x.tau()));

    let back: Scalar = x.render().parse()?;
    println!("round trip     = {}", back == x);

    // Quarter powers need fourth roots of the point: r = u^4, s = v^4.
    let value = x.eval_quarter(&Rat::int(2), &Rat::new(1, 3))?;
    println!("x at r=16, s=1/81 = {value}");
    Ok(())
}
