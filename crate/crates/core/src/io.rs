//! JSON documents: one envelope `{"kind": ...}` for every structure.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{self, Mask};
use crate::lattice;
use crate::report::Structure;
use crate::{FinGroupoid, FinInverseSemigroup, FinQuantale, FinSupLattice, FinTopGroupoid};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid {kind}: {message}")]
    Invalid { kind: &'static str, message: String },
}

fn invalid(kind: &'static str) -> impl Fn(String) -> IoError {
    move |message| IoError::Invalid { kind, message }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Body {
    Lattice {
        size: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
        /// Generating pairs `a ≤ b`; serialized as covering pairs.
        order: Vec<(usize, usize)>,
    },
    Quantale {
        size: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
        order: Vec<(usize, usize)>,
        mult: Vec<Vec<usize>>,
        inv: Vec<usize>,
        unit: usize,
    },
    Invsemi {
        size: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
        mult: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unit: Option<usize>,
    },
    Groupoid(GroupoidBody),
    Topgroupoid {
        #[serde(flatten)]
        groupoid: GroupoidBody,
        opens: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidBody {
    pub arrows: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub units: Vec<usize>,
    pub dom: Vec<usize>,
    pub cod: Vec<usize>,
    pub inv: Vec<usize>,
    /// `[x, y, xy]` for every composable pair.
    pub comp: Vec<(usize, usize, usize)>,
}

/// A structure document, with optional expected verdicts for `check`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    #[serde(flatten)]
    pub body: Body,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expect: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<String>,
}

pub fn parse_document(text: &str) -> Result<Document, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

pub fn render_document(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn rows(table: &[usize], n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![];
    }
    table.chunks(n).map(|r| r.to_vec()).collect()
}

fn flatten_square(kind: &'static str, rows: &[Vec<usize>], n: usize) -> Result<Vec<usize>, IoError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(invalid(kind)(format!("multiplication table must be {n}×{n}")));
    }
    if rows.iter().flatten().any(|&x| x >= n) {
        return Err(invalid(kind)("multiplication table entry out of range".into()));
    }
    Ok(rows.concat())
}

fn labels_of(ls: &[String], n: usize) -> Option<Vec<String>> {
    let default = (0..n).all(|i| ls[i] == i.to_string());
    (!default).then(|| ls.to_vec())
}

fn check_labels(kind: &'static str, labels: &Option<Vec<String>>, n: usize) -> Result<(), IoError> {
    match labels {
        Some(l) if l.len() != n => Err(invalid(kind)(format!("{} labels for {n} elements", l.len()))),
        _ => Ok(()),
    }
}

fn lattice_from(kind: &'static str, size: usize, order: &[(usize, usize)]) -> Result<FinSupLattice, IoError> {
    if order.iter().any(|&(a, b)| a >= size || b >= size) {
        return Err(invalid(kind)("order pair out of range".into()));
    }
    lattice::build_lattice(size, order).map_err(|e| invalid(kind)(e.to_string()))
}

fn groupoid_from(kind: &'static str, g: &GroupoidBody) -> Result<FinGroupoid, IoError> {
    check_labels(kind, &g.labels, g.arrows)?;
    let out = FinGroupoid::validate(g.arrows, &g.units, g.dom.clone(), g.cod.clone(), &g.comp, g.inv.clone())
        .map_err(|e| invalid(kind)(e.to_string()))?;
    Ok(match &g.labels {
        Some(l) => out.with_labels(l.clone()),
        None => out,
    })
}

fn groupoid_body(g: &FinGroupoid) -> GroupoidBody {
    let n = g.size();
    GroupoidBody {
        arrows: n,
        labels: labels_of(g.labels(), n),
        units: g.units().to_vec(),
        dom: g.arrows().map(|x| g.dom(x)).collect(),
        cod: g.arrows().map(|x| g.cod(x)).collect(),
        inv: g.arrows().map(|x| g.inv(x)).collect(),
        comp: g.comp_triples(),
    }
}

impl Document {
    pub fn new(body: Body) -> Self {
        Document { body, expect: BTreeMap::new(), origin: None }
    }

    pub fn kind(&self) -> &'static str {
        match self.body {
            Body::Lattice { .. } => "lattice",
            Body::Quantale { .. } => "quantale",
            Body::Invsemi { .. } => "invsemi",
            Body::Groupoid(_) => "groupoid",
            Body::Topgroupoid { .. } => "topgroupoid",
        }
    }

    pub fn from_structure(s: &Structure) -> Self {
        Document::new(match s {
            Structure::Lattice(l) => Body::Lattice { size: l.size(), labels: labels_of(l.labels(), l.size()), order: l.covers() },
            Structure::Quantale(q) => {
                let n = q.size();
                Body::Quantale {
                    size: n,
                    labels: labels_of(q.lattice().labels(), n),
                    order: q.lattice().covers(),
                    mult: rows(q.mult_table(), n),
                    inv: q.inv_table().to_vec(),
                    unit: q.unit(),
                }
            }
            Structure::InvSemi(s) => {
                let n = s.size();
                Body::Invsemi { size: n, labels: labels_of(s.labels(), n), mult: rows(s.mult_table(), n), unit: s.unit() }
            }
            Structure::Groupoid(g) => Body::Groupoid(groupoid_body(g)),
            Structure::TopGroupoid(t) => Body::Topgroupoid {
                groupoid: groupoid_body(t.groupoid()),
                opens: t.opens().iter().map(|&m| bits::ones(m).collect()).collect(),
            },
        })
    }

    pub fn to_structure(&self) -> Result<Structure, IoError> {
        Ok(match &self.body {
            Body::Lattice { size, labels, order } => {
                check_labels("lattice", labels, *size)?;
                let l = lattice_from("lattice", *size, order)?;
                Structure::Lattice(match labels {
                    Some(ls) => l.with_labels(ls.clone()),
                    None => l,
                })
            }
            Body::Quantale { size, labels, order, mult, inv, unit } => {
                let kind = "quantale";
                check_labels(kind, labels, *size)?;
                let l = lattice_from(kind, *size, order)?;
                let mult = flatten_square(kind, mult, *size)?;
                if inv.len() != *size || inv.iter().any(|&x| x >= *size) || *unit >= *size {
                    return Err(invalid(kind)("involution or unit out of range".into()));
                }
                let q = FinQuantale::new(l, mult, inv.clone(), *unit).map_err(|e| invalid(kind)(e.to_string()))?;
                Structure::Quantale(match labels {
                    Some(ls) => q.with_labels(ls.clone()),
                    None => q,
                })
            }
            Body::Invsemi { size, labels, mult, unit } => {
                let kind = "invsemi";
                check_labels(kind, labels, *size)?;
                let mult = flatten_square(kind, mult, *size)?;
                let s = FinInverseSemigroup::validate(*size, mult, *unit).map_err(|e| invalid(kind)(e.to_string()))?;
                Structure::InvSemi(match labels {
                    Some(ls) => s.with_labels(ls.clone()),
                    None => s,
                })
            }
            Body::Groupoid(g) => Structure::Groupoid(groupoid_from("groupoid", g)?),
            Body::Topgroupoid { groupoid, opens } => {
                let kind = "topgroupoid";
                let g = groupoid_from(kind, groupoid)?;
                if opens.iter().flatten().any(|&x| x >= g.size()) {
                    return Err(invalid(kind)("open set mentions an unknown arrow".into()));
                }
                let masks: Vec<Mask> = opens.iter().map(|o| bits::from_iter(o.iter().copied())).collect();
                Structure::TopGroupoid(FinTopGroupoid::validate(g, masks).map_err(|e| invalid(kind)(e.to_string()))?)
            }
        })
    }
}

pub fn read_structure(text: &str) -> Result<(Structure, Document), IoError> {
    let doc = parse_document(text)?;
    Ok((doc.to_structure()?, doc))
}

pub fn write_structure(s: &Structure) -> String {
    render_document(&Document::from_structure(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn fixtures_round_trip() {
        for f in corpus::fixtures() {
            let text = write_structure(&f.structure);
            let (back, _) = read_structure(&text).unwrap();
            assert_eq!(write_structure(&back), text, "{}", f.name);
            match (&f.structure, &back) {
                (Structure::Quantale(a), Structure::Quantale(b)) => assert_eq!(a, b),
                (Structure::InvSemi(a), Structure::InvSemi(b)) => assert_eq!(a, b),
                (Structure::Groupoid(a), Structure::Groupoid(b)) => assert_eq!(a, b),
                (Structure::TopGroupoid(a), Structure::TopGroupoid(b)) => assert_eq!(a, b),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn truncated_input_reports_position() {
        let text = write_structure(&Structure::Quantale(corpus::fuzzy_quantale()));
        let cut = &text[..text.len() / 2];
        match parse_document(cut) {
            Err(IoError::Parse { line, .. }) => assert!(line > 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn expectations_survive() {
        let text = r#"{"kind":"lattice","size":2,"order":[[0,1]],"expect":{"frame":true},"origin":"definition"}"#;
        let doc = parse_document(text).unwrap();
        assert_eq!(doc.expect.get("frame"), Some(&true));
        assert_eq!(parse_document(&render_document(&doc)).unwrap(), doc);
    }

    #[test]
    fn bad_table_is_invalid() {
        let text = r#"{"kind":"quantale","size":2,"order":[[0,1]],"mult":[[0,0]],"inv":[0,1],"unit":1}"#;
        assert!(matches!(read_structure(text), Err(IoError::Invalid { kind: "quantale", .. })));
    }
}
