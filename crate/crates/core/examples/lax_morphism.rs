//! Preimage maps of groupoid morphisms are lax, and strict only on some products.

use qgk::{corpus, groupoid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (g, h) = corpus::z2_collapse();
    let r = groupoid::check_lax_morphism(&g, &g, &h)?;
    println!("collapse Z/2 → Z/2: lax {}, unit preserved {}", r.lax.is_ok(), r.unit_preserved);
    if let Some((u, v)) = r.equality_failure {
        println!("  strict at U = {}, V = {}", g.set_label(u), g.set_label(v));
    }

    let family: Vec<_> = corpus::groupoid_family()?.into_iter().filter(|(_, g)| g.size() <= 3).collect();
    for (sn, src) in &family {
        for (tn, tgt) in &family {
            let ms = groupoid::all_morphisms(src, tgt);
            let strict = ms
                .iter()
                .filter(|f| groupoid::check_lax_morphism(src, tgt, f).map(|r| r.equality_failure.is_none()).unwrap_or(false))
                .count();
            if !ms.is_empty() {
                println!("{sn:>10} → {tn:<10} {:>3} morphisms, {strict} strict", ms.len());
            }
        }
    }
    Ok(())
}
