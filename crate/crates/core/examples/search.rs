//! Exhaustive search for quantales separating two classes of the hierarchy.
//!
//! `cargo run --release --example search -- inverse-not-frame 5`

use qgk::search::{self, Target};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let targets: Vec<Target> = match args.next() {
        Some(t) => vec![t.parse()?],
        None => Target::ALL.to_vec(),
    };
    let max: usize = args.next().map_or(Ok(4), |a| a.parse())?;
    for t in targets {
        let start = std::time::Instant::now();
        let r = search::search(t, max)?;
        println!("{t}: {} found up to size {max} ({:.1?})", r.found.len(), start.elapsed());
        for q in r.found.iter().take(3) {
            println!("  size {}, covers {:?}, mult {:?}", q.size(), q.lattice().covers(), q.mult_table());
        }
    }
    Ok(())
}
