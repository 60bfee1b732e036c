//! Every topology on a small groupoid, with the five étale conditions and the open-set
//! quantale.

use qgk::topology::{self, EtaleReport};
use qgk::FinGroupoid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, g) in [("Z/2", FinGroupoid::cyclic(2)), ("pair(2)", FinGroupoid::pair(2))] {
        let all = topology::topological_structures(&g)?;
        println!("{name}: {} topologies", all.len());
        for tg in all {
            let r = topology::check_etale_conditions(&tg)?;
            let opens: Vec<String> = tg.opens().iter().map(|&m| g.set_label(m)).collect();
            print!("  {:<40} étale {}", opens.join(" "), r.etale());
            if r.etale() {
                let oq = topology::topology_quantale(&tg)?;
                print!(", O(G) has {} elements", oq.quantale.size());
            }
            println!();
        }
    }
    println!("conditions: {:?}", EtaleReport::NAMES);
    Ok(())
}
