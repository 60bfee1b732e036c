//! Finite étale groupoids, inverse semigroups and their quantales.
//!
//! Everything is finite and index-based: a lattice on `n` elements lives on `0..n` with dense
//! order, join and meet tables, and quantales, semigroups and groupoids add tables on top.

pub mod bits;
pub mod cli;
pub mod corpus;
pub mod envelope;
pub mod groupoid;
pub mod io;
pub mod invsemi;
pub mod lattice;
pub mod quantale;
pub mod report;
pub mod search;
pub mod tensor;
pub mod topology;

use serde::Serialize;

pub use groupoid::FinGroupoid;
pub use invsemi::FinInverseSemigroup;
pub use lattice::FinSupLattice;
pub use quantale::FinQuantale;
pub use topology::FinTopGroupoid;

/// Outcome of a property check, with a counterexample when it fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<usize>,
}

impl Verdict {
    pub fn yes() -> Self {
        Verdict { holds: true, witness: Vec::new() }
    }

    pub fn no(witness: Vec<usize>) -> Self {
        Verdict { holds: false, witness }
    }

    pub fn from_bool(holds: bool) -> Self {
        Verdict { holds, witness: Vec::new() }
    }

    pub fn first_failure(items: impl IntoIterator<Item = usize>, ok: impl Fn(usize) -> bool) -> Self {
        match items.into_iter().find(|&x| !ok(x)) {
            None => Verdict::yes(),
            Some(x) => Verdict::no(vec![x]),
        }
    }
}
