//! The enveloping quantale of a five-element complete pseudogroup, its quotient by a
//! congruence, and the distributivity failure in the quotient.

use qgk::{corpus, envelope, quantale};

fn print_table(q: &qgk::FinQuantale) {
    let n = q.size();
    print!("    ");
    for b in 0..n {
        print!("{:>3}", q.label(b));
    }
    println!();
    for a in 0..n {
        print!("{:>3} ", q.label(a));
        for b in 0..n {
            print!("{:>3}", q.label(q.mul(a, b)));
        }
        println!();
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = corpus::three_point_pseudogroup();
    println!("S has {} elements, idempotents {:?}", s.size(), s.idempotents().iter().map(|&i| s.label(i)).collect::<Vec<_>>());

    let l = envelope::downset_quantale(&s)?;
    let lv = envelope::enveloping_quantale(&s)?;
    println!("L(S): {} elements (includes the empty downset)", l.quantale.size());
    println!("L∨(S): {} elements", lv.quantale.size());

    // the same quantale under the conventional names
    let named = corpus::three_point_envelope_table();
    print_table(&named);

    let quot = quantale::quantale_quotient(&named, &corpus::three_point_theta())?.quantale;
    println!("quotient: {} elements, covers:", quot.size());
    for (a, b) in quot.lattice().covers() {
        println!("  {} < {}", quot.label(a), quot.label(b));
    }
    let v = quantale::check_frame(&quot);
    let names: Vec<&str> = v.witness.iter().map(|&i| quot.label(i)).collect();
    println!("frame: {} {names:?}", v.holds);
    let supp = quantale::stable_support(&quot)?;
    println!("inverse quantale: {}", quantale::check_inverse_quantale(&quot, &supp)?.holds);
    Ok(())
}
