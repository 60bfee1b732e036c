//! The `qgk` command line: `check`, `build`, `roundtrip`, `search`, `corpus`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::envelope;
use crate::groupoid;
use crate::io::{self, Document};
use crate::quantale;
use crate::report::{self, Structure};
use crate::search::{self, Target};
use crate::topology;
use crate::{corpus, FinQuantale};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qgk", version, about = "Finite quantales, inverse semigroups and étale groupoids")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Size cap for materialized structures (overrides QGK_CAP).
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hierarchy report for a structure file; exit 1 if a declared expectation fails.
    Check { path: PathBuf },
    /// Builds a derived structure.
    Build {
        #[arg(value_enum, ignore_case = true)]
        construction: Construction,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// With GQ: emit the arrow graph in DOT instead of JSON.
        #[arg(long)]
        dot: bool,
        /// With quotient: the congruence classes, as JSON, e.g. `[[0],[1,2]]`.
        #[arg(long)]
        classes: Option<String>,
    },
    /// Runs the round trips applicable to a structure.
    Roundtrip { path: PathBuf },
    /// Searches all quantales up to a size for ones separating two classes.
    Search {
        target: String,
        #[arg(long, default_value_t = 4)]
        max: usize,
    },
    /// Runs the built-in fixtures and invariant suites.
    Corpus {
        #[arg(long)]
        filter: Option<String>,
        /// Flips the first expectation of the named fixture.
        #[arg(long)]
        corrupt: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    /// Downsets of an inverse semigroup.
    #[value(name = "L")]
    L,
    /// Enveloping quantale of a complete pseudogroup.
    #[value(name = "Lvee")]
    Lvee,
    /// Powerset quantale of a groupoid.
    #[value(name = "P")]
    P,
    /// Open-set quantale of a topological groupoid.
    #[value(name = "O")]
    O,
    /// Groupoid of an inverse quantal frame.
    #[value(name = "GQ")]
    Gq,
    /// Inverse monoid of partial units.
    #[value(name = "ipi")]
    Ipi,
    /// Quotient by a congruence.
    #[value(name = "quotient")]
    Quotient,
}

struct Failure {
    code: i32,
    /// Partial output, still written to stdout.
    report: String,
    message: String,
}

impl Failure {
    fn malformed(message: impl ToString) -> Self {
        Failure { code: EXIT_MALFORMED, report: String::new(), message: message.to_string() }
    }

    fn check(message: impl ToString) -> Self {
        Failure { code: EXIT_CHECK_FAILED, report: String::new(), message: message.to_string() }
    }
}

fn load(path: &Path) -> Result<(Structure, Document), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))?;
    io::read_structure(&text).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))
}

fn cap_from_env() -> Option<usize> {
    std::env::var("QGK_CAP").ok().and_then(|v| v.trim().parse().ok())
}

/// Runs the command line with `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let cap = cli.cap.or_else(cap_from_env);
    let result = match &cli.command {
        Command::Check { path } => cmd_check(path, cli.json),
        Command::Build { construction, from, out: dest, dot, classes } => {
            cmd_build(*construction, from, *dot, classes.as_deref(), cap).and_then(|text| match dest {
                Some(p) => std::fs::write(p, &text).map(|_| String::new()).map_err(|e| Failure::malformed(e.to_string())),
                None => Ok(text),
            })
        }
        Command::Roundtrip { path } => cmd_roundtrip(path, cli.json),
        Command::Search { target, max } => cmd_search(target, *max, cap, cli.json),
        Command::Corpus { filter, corrupt } => cmd_corpus(filter.as_deref(), corrupt.as_deref(), cli.json),
    };
    match result {
        Ok(text) => {
            let _ = write!(out, "{text}");
            EXIT_OK
        }
        Err(Failure { code, report, message }) => {
            let _ = write!(out, "{report}");
            let _ = writeln!(err, "qgk: {message}");
            code
        }
    }
}

fn check_failure(report: String, reason: &str) -> Failure {
    Failure { code: EXIT_CHECK_FAILED, report, message: reason.to_string() }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    report: &'a report::Report,
    mismatches: Vec<String>,
}

fn cmd_check(path: &Path, json: bool) -> Result<String, Failure> {
    let (s, doc) = load(path)?;
    let r = report::report(&s).map_err(Failure::check)?;
    let mismatches: Vec<String> = doc
        .expect
        .iter()
        .filter_map(|(k, &want)| match r.get(k) {
            Some(got) if got == want => None,
            got => Some(format!("{k}: expected {want}, got {}", got.map_or("n/a".into(), |g| g.to_string()))),
        })
        .collect();
    let mut text = if json { to_json(&CheckOutput { report: &r, mismatches: mismatches.clone() }) } else { r.to_text() };
    if mismatches.is_empty() {
        return Ok(text);
    }
    if !json {
        for m in &mismatches {
            let _ = writeln!(text, "  MISMATCH {m}");
        }
    }
    Err(check_failure(text, &format!("{} expectation(s) not met", mismatches.len())))
}

fn want_quantale(s: Structure) -> Result<FinQuantale, Failure> {
    match s {
        Structure::Quantale(q) => Ok(q),
        other => Err(Failure::malformed(format!("expected a quantale, found {}", other.kind()))),
    }
}

fn cmd_build(c: Construction, from: &Path, dot: bool, classes: Option<&str>, cap: Option<usize>) -> Result<String, Failure> {
    let (s, _) = load(from)?;
    if dot && c != Construction::Gq {
        return Err(Failure::malformed("--dot only applies to GQ"));
    }
    let built = match (c, s) {
        (Construction::L, Structure::InvSemi(s)) => {
            Structure::Quantale(envelope::downset_quantale(&s).map_err(Failure::check)?.quantale)
        }
        (Construction::Lvee, Structure::InvSemi(s)) => {
            Structure::Quantale(envelope::enveloping_quantale(&s).map_err(Failure::check)?.quantale)
        }
        (Construction::P, Structure::Groupoid(g)) => {
            let cap = cap.unwrap_or(groupoid::POWERSET_CAP);
            Structure::Quantale(groupoid::powerset_quantale_capped(&g, cap).map_err(Failure::check)?)
        }
        (Construction::O, Structure::TopGroupoid(t)) => {
            Structure::Quantale(topology::topology_quantale(&t).map_err(Failure::check)?.quantale)
        }
        (Construction::Gq, s) => {
            let q = want_quantale(s)?;
            let shadow = topology::groupoid_of_quantale(&q).map_err(Failure::check)?;
            if dot {
                return Ok(arrow_graph_dot(shadow.top.groupoid()));
            }
            Structure::TopGroupoid(shadow.top)
        }
        (Construction::Ipi, s) => {
            let q = want_quantale(s)?;
            let supp = quantale::stable_support(&q).map_err(Failure::check)?;
            Structure::InvSemi(quantale::ipi_monoid(&q, &supp).map_err(Failure::check)?.monoid)
        }
        (Construction::Quotient, s) => {
            let q = want_quantale(s)?;
            let classes = classes.ok_or_else(|| Failure::malformed("quotient needs --classes"))?;
            let classes: Vec<Vec<usize>> =
                serde_json::from_str(classes).map_err(|e| Failure::malformed(format!("--classes: {e}")))?;
            Structure::Quantale(quantale::quantale_quotient(&q, &classes).map_err(Failure::check)?.quantale)
        }
        (c, s) => return Err(Failure::malformed(format!("{c:?} cannot be built from a {}", s.kind()))),
    };
    Ok(io::write_structure(&built))
}

/// Objects as nodes, one edge `d(x) → r(x)` per non-unit arrow.
pub fn arrow_graph_dot(g: &crate::FinGroupoid) -> String {
    let mut s = String::from("digraph arrows {\n");
    for &u in g.units() {
        let _ = writeln!(s, "  a{u} [label={:?}];", g.label(u));
    }
    for x in g.arrows().filter(|&x| !g.is_unit(x)) {
        let _ = writeln!(s, "  a{} -> a{} [label={:?}];", g.dom(x), g.cod(x), g.label(x));
    }
    s.push_str("}\n");
    s
}

#[derive(Debug, Serialize)]
struct Trip {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn trip(name: &'static str, passed: bool, detail: impl ToString) -> Trip {
    Trip { name, passed, detail: detail.to_string() }
}

fn quantale_trips(q: &FinQuantale) -> Vec<Trip> {
    let mut trips = Vec::new();
    match quantale::stable_support(q).and_then(|s| quantale::ipi_monoid(q, &s)) {
        Ok(ipi) => match envelope::enveloping_quantale(&ipi.monoid) {
            Ok(env) if env.quantale.size() != q.size() => {
                trips.push(trip("ε", false, format!("size mismatch {} vs {}", env.quantale.size(), q.size())));
            }
            Ok(_) => match envelope::epsilon(q) {
                Ok(r) => trips.push(trip("ε", r.is_iso, if r.is_iso { "iso" } else { "not an iso" })),
                Err(e) => trips.push(trip("ε", false, e)),
            },
            Err(e) => trips.push(trip("ε", false, e)),
        },
        Err(e) => trips.push(trip("ε", false, e)),
    }
    if let Ok(g) = groupoid::recover_groupoid_from_atoms(q) {
        let back = groupoid::powerset_quantale(&g).ok();
        let iso = back.map(|p| quantale::quantale_isomorphic(&p, q).ok().flatten().is_some()).unwrap_or(false);
        trips.push(trip("atoms", iso, format!("{} arrows", g.size())));
    }
    match topology::quantale_round_trip(q) {
        Ok(r) => trips.push(trip(
            "O(G(Q))",
            r.passed(),
            format!("{} arrows, {} opens, pointwise product {}", r.arrows, r.opens, r.pointwise_product),
        )),
        Err(e) => trips.push(trip("O(G(Q))", false, e)),
    }
    trips
}

fn cmd_roundtrip(path: &Path, json: bool) -> Result<String, Failure> {
    let (s, _) = load(path)?;
    let trips = match &s {
        Structure::Quantale(q) => quantale_trips(q),
        Structure::InvSemi(s) => match envelope::eta(s) {
            Ok(r) => vec![trip("η", r.is_iso(), format!("{} elements into {}", s.size(), r.envelope.quantale.size()))],
            Err(e) => vec![trip("η", false, e)],
        },
        Structure::Groupoid(g) => {
            let pg = groupoid::powerset_quantale(g).map_err(Failure::check)?;
            let mut trips = quantale_trips(&pg);
            match report::groupoid_report(g) {
                Ok(r) => trips.extend(r.checks.into_iter().filter(|(k, _)| k != "connected").map(|(k, v)| Trip {
                    name: if k.starts_with("G-sets") { "G-sets" } else { "P(G)" },
                    passed: v,
                    detail: k,
                })),
                Err(e) => trips.push(trip("P(G)", false, e)),
            }
            if let Ok(gs) = groupoid::gsets(g) {
                match envelope::eta(&gs.monoid) {
                    Ok(r) => trips.push(trip("η", r.is_iso(), "G-sets")),
                    Err(e) => trips.push(trip("η", false, e)),
                }
            }
            trips
        }
        Structure::TopGroupoid(t) => match topology::topology_quantale(t) {
            Ok(oq) => quantale_trips(&oq.quantale),
            Err(e) => vec![trip("O(G)", false, e)],
        },
        Structure::Lattice(_) => return Err(Failure::malformed("no round trip for a bare lattice")),
    };
    let text = if json {
        to_json(&trips)
    } else {
        trips.iter().map(|t| format!("{}: {} ({})\n", t.name, if t.passed { "pass" } else { "fail" }, t.detail)).collect()
    };
    let failed = trips.iter().filter(|t| !t.passed).count();
    if failed == 0 {
        Ok(text)
    } else {
        Err(check_failure(text, &format!("{failed} round trip(s) failed")))
    }
}

#[derive(Serialize)]
struct SearchOutput {
    target: String,
    max_size: usize,
    examined: Vec<usize>,
    found: Vec<Document>,
}

fn quantale_text(q: &FinQuantale) -> String {
    let n = q.size();
    let mut s = format!("  size {n}, unit {}, covers {:?}\n", q.label(q.unit()), q.lattice().covers());
    let _ = writeln!(s, "    inv {:?}", q.inv_table());
    for a in 0..n {
        let _ = writeln!(s, "    {:?}", &q.mult_table()[a * n..(a + 1) * n]);
    }
    s
}

fn cmd_search(target: &str, max: usize, cap: Option<usize>, json: bool) -> Result<String, Failure> {
    let t: Target = target.parse().map_err(Failure::malformed)?;
    let r = search::search_capped(t, max, cap.unwrap_or(search::SEARCH_CAP)).map_err(Failure::check)?;
    if json {
        return Ok(to_json(&SearchOutput {
            target: t.name().into(),
            max_size: max,
            examined: r.examined,
            found: r.found.iter().map(|q| Document::from_structure(&Structure::Quantale(q.clone()))).collect(),
        }));
    }
    let mut s = format!("{t} up to size {max}\n");
    for (i, k) in r.examined.iter().enumerate() {
        let _ = writeln!(s, "  size {}: {k} quantales", i + 1);
    }
    let _ = writeln!(s, "found {}", r.found.len());
    for q in &r.found {
        s.push_str(&quantale_text(q));
    }
    Ok(s)
}

fn cmd_corpus(filter: Option<&str>, corrupt: Option<&str>, json: bool) -> Result<String, Failure> {
    let summary = corpus::run_corpus(filter, corrupt).map_err(Failure::malformed)?;
    let text = if json { to_json(&summary) } else { summary.to_text() };
    if summary.all_passed() {
        Ok(text)
    } else {
        Err(check_failure(text, &format!("{} corpus item(s) failed", summary.failed)))
    }
}
