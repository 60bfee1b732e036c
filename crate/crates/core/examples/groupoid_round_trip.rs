//! From a groupoid to its powerset quantale and back, for every groupoid on at most four
//! arrows.

use qgk::{corpus, envelope, groupoid, quantale};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, g) in corpus::groupoid_family()? {
        let pg = groupoid::powerset_quantale(&g)?;
        let back = groupoid::recover_groupoid_from_atoms(&pg)?;
        let gs = groupoid::gsets(&g)?;
        let eps = envelope::epsilon(&pg)?;
        println!(
            "{name:>16}: {} arrows, P(G) {} elements, IQF {}, atoms ≅ G {}, {} G-sets, ε iso {}",
            g.size(),
            pg.size(),
            quantale::check_inverse_quantal_frame(&pg)?.holds,
            groupoid::groupoid_isomorphic(&back, &g)?.is_some(),
            gs.sets.len(),
            eps.is_iso,
        );
    }
    Ok(())
}
