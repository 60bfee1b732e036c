//! Supports on small quantales: a unique but unstable one, and the stable supports of the
//! corpus with their derived identities.

use qgk::{corpus, quantale};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = corpus::unstable_support_quantale();
    let supports = quantale::find_supports_exhaustive(&q)?;
    println!("{} support(s) on the 4-chain 0 < a < e < 1", supports.len());
    for s in &supports {
        let image: Vec<&str> = q.elements().map(|x| q.label(s.apply(x))).collect();
        println!("  ς = {image:?}, stable: {}", s.is_stable());
        let r = quantale::stability_conditions_report(&q, s)?;
        println!("  equivalent stability conditions: {:?}", r.conditions);
    }
    if let Err(e) = quantale::stable_support(&q) {
        println!("  stable_support: {e}");
    }

    let instances = corpus::quantale_instances()?;
    let mut stable = 0;
    let mut supported = 0;
    for (name, q) in &instances {
        let Ok(s) = quantale::candidate_support(q) else { continue };
        supported += 1;
        stable += s.is_stable() as usize;
        let r = quantale::derived_identities_report(q, &s);
        if !r.general_hold() {
            println!("{name}: {:?}", r.failures());
        }
    }
    println!("{} quantales, {supported} supported, {stable} stably", instances.len());
    Ok(())
}
