//! The tensor square of a quantale as bi-ideals, and multiplicativity of `μ*`.

use qgk::tensor::{self, TensorSquare};
use qgk::{corpus, quantale};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, q) in [("fuzzy", corpus::fuzzy_quantale()), ("ordered monoid", corpus::ordered_monoid_quantale())] {
        let t = TensorSquare::new(&q)?;
        println!("{name}: {} elements, stable quantal frame: {}", q.size(), quantale::check_stable_quantal_frame(&q)?.holds);
        println!("  μ ⊣ μ*: {}", tensor::check_adjunction(&q)?.holds);
        for c in q.elements() {
            let pairs: Vec<String> =
                t.mu_star(c).iter().map(|(a, b)| format!("{}⊗{}", q.label(a), q.label(b))).collect();
            println!("  μ*({}) = {{{}}}", q.label(c), pairs.join(", "));
        }
        match tensor::check_multiplicative(&q)? {
            Ok(()) => println!("  multiplicative"),
            Err(w) => {
                let (a, b) = w.missing;
                println!(
                    "  not multiplicative: μ*({}) ⊔ μ*({}) lacks {}⊗{}",
                    q.label(w.c),
                    q.label(w.d),
                    q.label(a),
                    q.label(b)
                );
            }
        }
    }
    Ok(())
}
