//! The enveloping quantale of the symmetric inverse monoid is the quantale of all binary
//! relations.

use qgk::{envelope, groupoid, invsemi, quantale, FinGroupoid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map_or(Ok(2), |a| a.parse())?;
    let s = invsemi::symmetric_inverse_monoid(n)?;
    println!("I({n}): {} partial bijections, {} idempotents", s.size(), s.idempotents().len());
    let t = std::time::Instant::now();
    let env = envelope::enveloping_quantale(&s)?;
    println!("L∨(I({n})): {} elements in {:.1?}", env.quantale.size(), t.elapsed());
    if n <= 2 {
        let pg = groupoid::powerset_quantale(&FinGroupoid::pair(n))?;
        println!("≅ P({n}×{n}): {}", quantale::quantale_isomorphic(&env.quantale, &pg)?.is_some());
    }
    let eta = envelope::eta(&s)?;
    println!("η injective {}, onto partial units {}", eta.injective, eta.onto_partial_units);
    Ok(())
}
