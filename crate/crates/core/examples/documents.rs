//! Writing a structure as a JSON document, reading it back and reporting on it.

use qgk::report::{self, Structure};
use qgk::{corpus, io};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = Structure::Quantale(corpus::ordered_monoid_quantale());
    let text = io::write_structure(&s);
    print!("{text}");
    let (back, _) = io::read_structure(&text)?;
    print!("{}", report::report(&back)?.to_text());

    match io::read_structure(&text[..text.len() / 3]) {
        Ok(_) => unreachable!(),
        Err(e) => println!("truncated: {e}"),
    }
    Ok(())
}
