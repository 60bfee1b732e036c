//! Hierarchy reports: which classes a structure belongs to, as an ordered list of named
//! yes/no verdicts.

use serde::Serialize;
use thiserror::Error;

use crate::envelope::{self, EnvelopeError};
use crate::groupoid::{self, GroupoidError};
use crate::invsemi::{self, InvSemiError};
use crate::quantale::{self, QuantaleError};
use crate::topology::{self, EtaleReport};
use crate::{lattice, tensor};
use crate::{FinGroupoid, FinInverseSemigroup, FinQuantale, FinSupLattice, FinTopGroupoid};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
    #[error(transparent)]
    InvSemi(#[from] InvSemiError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

/// Any of the structures the library checks.
#[derive(Debug, Clone)]
pub enum Structure {
    Lattice(FinSupLattice),
    Quantale(FinQuantale),
    InvSemi(FinInverseSemigroup),
    Groupoid(FinGroupoid),
    TopGroupoid(FinTopGroupoid),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Lattice(_) => "lattice",
            Structure::Quantale(_) => "quantale",
            Structure::InvSemi(_) => "invsemi",
            Structure::Groupoid(_) => "groupoid",
            Structure::TopGroupoid(_) => "topgroupoid",
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Structure::Lattice(l) => l.size(),
            Structure::Quantale(q) => q.size(),
            Structure::InvSemi(s) => s.size(),
            Structure::Groupoid(g) => g.size(),
            Structure::TopGroupoid(t) => t.groupoid().size(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub kind: &'static str,
    pub size: usize,
    pub checks: Vec<(String, bool)>,
}

impl Report {
    fn new(kind: &'static str, size: usize) -> Self {
        Report { kind, size, checks: Vec::new() }
    }

    fn push(&mut self, name: &str, v: bool) {
        self.checks.push((name.to_string(), v));
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} with {} elements\n", self.kind, self.size);
        for (name, v) in &self.checks {
            out.push_str(&format!("  {name}: {}\n", if *v { "yes" } else { "no" }));
        }
        out
    }
}

pub fn report(s: &Structure) -> Result<Report, ReportError> {
    match s {
        Structure::Lattice(l) => Ok(lattice_report(l)),
        Structure::Quantale(q) => quantale_report(q),
        Structure::InvSemi(s) => invsemi_report(s),
        Structure::Groupoid(g) => groupoid_report(g),
        Structure::TopGroupoid(t) => topgroupoid_report(t),
    }
}

pub fn lattice_report(l: &FinSupLattice) -> Report {
    let mut r = Report::new("lattice", l.size());
    r.push("frame", lattice::check_frame(l).is_ok());
    r
}

/// Position in the hierarchy of supported quantales. Checks that only make sense inside a
/// class are reported only for members of that class.
pub fn quantale_report(q: &FinQuantale) -> Result<Report, ReportError> {
    let mut r = Report::new("quantale", q.size());
    let candidate = quantale::candidate_support(q).ok();
    let supported = candidate.is_some()
        || (q.size() <= quantale::SUPPORT_SEARCH_CAP && !quantale::find_supports_exhaustive(q)?.is_empty());
    r.push("supported", supported);
    let stable = quantale::stable_support(q).ok();
    r.push("stably supported", stable.is_some());
    let frame = quantale::check_frame(q).holds;
    r.push("frame", frame);
    let sqf = quantale::check_stable_quantal_frame(q)?.holds;
    r.push("stable quantal frame", sqf);
    if sqf {
        r.push("multiplicative", tensor::check_multiplicative(q)?.is_ok());
    }
    let inverse = match &stable {
        Some(s) => quantale::check_inverse_quantale(q, s)?.holds,
        None => false,
    };
    r.push("inverse quantale", inverse);
    r.push("inverse quantal frame", quantale::check_inverse_quantal_frame(q)?.holds);
    if sqf {
        r.push("inversion laws", quantale::check_inversion_laws(q)?.laws_hold());
    }
    Ok(r)
}

pub fn invsemi_report(s: &FinInverseSemigroup) -> Result<Report, ReportError> {
    let mut r = Report::new("invsemi", s.size());
    r.push("monoid", s.unit().is_some());
    r.push("has zero", s.zero().is_some());
    let complete = invsemi::check_complete(s)?.holds;
    r.push("complete", complete);
    r.push("infinitely distributive", invsemi::check_infinitely_distributive(s)?.holds);
    r.push("abstract complete pseudogroup", invsemi::is_abstract_complete_pseudogroup(s)?);
    if s.unit().is_some() && complete {
        r.push("η iso", envelope::eta(s)?.is_iso());
    }
    Ok(r)
}

pub fn groupoid_report(g: &FinGroupoid) -> Result<Report, ReportError> {
    let mut r = Report::new("groupoid", g.size());
    r.push("connected", g.components().len() <= 1);
    let pg = groupoid::powerset_quantale(g)?;
    r.push("P(G) inverse quantal frame", quantale::check_inverse_quantal_frame(&pg)?.holds);
    let recovered = groupoid::recover_groupoid_from_atoms(&pg)?;
    r.push("atoms recover G", groupoid::groupoid_isomorphic(&recovered, g)?.is_some());
    let gs = groupoid::gsets(g)?;
    let pu = quantale::partial_units(&pg)?.members;
    // element index of P(G) is the arrow bitmask
    r.push("G-sets are the partial units", gs.sets.iter().map(|&m| m as usize).eq(pu.iter().copied()));
    Ok(r)
}

pub fn topgroupoid_report(t: &FinTopGroupoid) -> Result<Report, ReportError> {
    let mut r = Report::new("topgroupoid", t.groupoid().size());
    let e = topology::check_etale_conditions(t)?;
    push_etale(&mut r, &e);
    Ok(r)
}

fn push_etale(r: &mut Report, e: &EtaleReport) {
    for (name, &v) in EtaleReport::NAMES.iter().zip(&e.conditions) {
        r.push(name, v);
    }
    r.push("étale", e.etale());
    if let Some(c) = e.gset_cover {
        r.push("open G-sets cover", c);
    }
    if let Some(f) = e.frobenius {
        r.push("Frobenius identity", f);
    }
}
