//! Command implementations behind the `verlag` binary. Every command returns
//! an [`Outcome`] so that tests can run it in-process.

use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use verlag_core::presentations::{validate_max, MaxClassPresentation, Presentation, TwoFamily};
use verlag_core::pcgroup::{build_max_class_group, ORACLE_TWO_GROUP_MAX_M, ORDER_CAP};
use verlag_core::transfer::{multiplet_provenance, transfer_multiplet, transfer_multiplet_by_oracle, Multiplet};
use verlag_core::tree::{
    invariants_from_order, parity_classification, predecessor, section_d_type, tree_position, NodeKind, TreeError,
};
use verlag_core::typeclass::{classify, enumerate_orbits, to_csv, to_json, to_text, TypeSet};

#[derive(Debug, Parser)]
#[command(name = "verlag", version, about = "Transfer kernels and transfer types of metabelian p-groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transfer type and orbit label of a presentation given as JSON.
    Type(TypeArgs),
    /// Compare closed forms with the brute-force oracle over a range of groups.
    Verify(VerifyArgs),
    /// Emit the orbit tables for p = 2 or p = 3.
    Orbits(OrbitsArgs),
    /// Tree invariants and section d data of a 3-group of non-maximal class.
    Tree(TreeArgs),
}

#[derive(Debug, Args)]
pub struct TypeArgs {
    /// Presentation JSON; read from stdin when omitted.
    pub presentation: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long = "m-max")]
    pub m_max: u32,
    /// `all`, `k0`, or a comma-separated subset of `D,Q,S` for p = 2.
    #[arg(long, default_value = "all")]
    pub families: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct OrbitsArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, conflicts_with = "total")]
    pub partial: bool,
    #[arg(long)]
    pub total: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NodeKindArg {
    Terminal,
    Internal,
}

#[derive(Debug, Args)]
pub struct TreeArgs {
    /// Low-class presentation JSON; read from stdin when omitted.
    pub presentation: Option<String>,
    #[arg(long = "node-kind", value_enum, default_value = "terminal")]
    pub node_kind: NodeKindArg,
    /// Require the predecessor; fails for groups with rho = 0.
    #[arg(long)]
    pub predecessor: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("scope error: {0}")]
    Scope(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// What a command printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn error(e: CliError) -> Self {
        let body = json!({ "error": e.to_string() });
        Outcome { code: 1, stdout: String::new(), stderr: format!("{body}\n") }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn execute<I, T>(args: I, stdin: impl FnOnce() -> String) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, stdin),
        Err(e) => Outcome {
            code: if e.use_stderr() { 1 } else { 0 },
            stdout: if e.use_stderr() { String::new() } else { e.to_string() },
            stderr: if e.use_stderr() { e.to_string() } else { String::new() },
        },
    }
}

pub fn run(cli: Cli, stdin: impl FnOnce() -> String) -> Outcome {
    match cli.command {
        Command::Type(a) => cmd_type(&a.presentation.unwrap_or_else(stdin)).map_or_else(Outcome::error, Outcome::ok),
        Command::Verify(a) => cmd_verify(&a),
        Command::Orbits(a) => cmd_orbits(&a).map_or_else(Outcome::error, Outcome::ok),
        Command::Tree(a) => {
            let text = a.presentation.clone().unwrap_or_else(stdin);
            cmd_tree(&text, &a).map_or_else(Outcome::error, Outcome::ok)
        }
    }
}

fn parse(text: &str) -> Result<Presentation, CliError> {
    Presentation::from_json(text).map_err(|e| CliError::Input(e.to_string()))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialise") + "\n"
}

pub fn cmd_type(text: &str) -> Result<String, CliError> {
    let pres = parse(text)?;
    let mult = transfer_multiplet(&pres).map_err(|e| CliError::Input(e.to_string()))?;
    let provenance = multiplet_provenance(&pres).map_err(|e| CliError::Input(e.to_string()))?;
    let orbit = classify(&mult, pres.p()).ok().map(|r| {
        json!({
            "label": r.label(),
            "section": r.section,
            "ordinal": r.ordinal,
            "representative": r.representative,
            "realizing": r.realizing.to_string(),
        })
    });
    Ok(pretty(&json!({
        "family": pres.family_name(),
        "presentation": serde_json::from_str::<serde_json::Value>(&pres.to_json()).expect("valid json"),
        "kappa": mult.kappa(),
        "nu": mult.nu(),
        "taussky": mult.taussky(),
        "provenance": provenance,
        "orbit": orbit,
    })))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub presentation: String,
    pub expected: String,
    pub got: String,
}

/// Summary of a verification sweep. `elapsed` is reported on stderr only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub cases_run: usize,
    pub agreements: usize,
    pub disagreements: Vec<Disagreement>,
    /// Presentations whose pc-presentation failed to build, with the reason.
    pub skipped: Vec<(String, String)>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl RunReport {
    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty() && self.agreements == self.cases_run
    }
}

/// Presentations swept by `verify`, sorted by `(m, w, z)`.
pub fn verify_scope(p: u32, m_max: u32, families: &str) -> Result<Vec<MaxClassPresentation>, CliError> {
    let mut out = Vec::new();
    if p == 2 {
        if m_max > ORACLE_TWO_GROUP_MAX_M {
            return Err(CliError::Scope(format!("p = 2 oracle groups stop at m = {ORACLE_TWO_GROUP_MAX_M}")));
        }
        let wanted: Vec<TwoFamily> = match families {
            "all" => vec![TwoFamily::Dihedral, TwoFamily::Quaternion, TwoFamily::Semidihedral],
            list => list
                .split(',')
                .map(|s| match s.trim() {
                    "D" => Ok(TwoFamily::Dihedral),
                    "Q" => Ok(TwoFamily::Quaternion),
                    "S" => Ok(TwoFamily::Semidihedral),
                    other => Err(CliError::Scope(format!("unknown family {other:?} for p = 2"))),
                })
                .collect::<Result<_, _>>()?,
        };
        for m in 3..=m_max {
            for &fam in &wanted {
                if m >= fam.min_index() {
                    out.push(MaxClassPresentation::two_group(fam, m).expect("admissible index"));
                }
            }
        }
    } else {
        if !matches!(families, "all" | "k0") {
            return Err(CliError::Scope(format!(
                "odd p supports only k = 0 oracle groups (families all or k0), got {families:?}"
            )));
        }
        let order = (p as u128).checked_pow(m_max);
        if m_max >= 2 && order.is_none_or(|o| o > ORDER_CAP as u128) {
            return Err(CliError::Scope(format!("{p}^{m_max} exceeds the oracle cap of {ORDER_CAP} elements")));
        }
        for m in 2..=m_max {
            for w in 0..p {
                for z in 0..p {
                    if let Ok(pres) = validate_max(p as i64, m as i64, 0, &[], w as i64, z as i64) {
                        out.push(pres);
                    }
                }
            }
        }
        if m_max >= 2 && out.is_empty() {
            return Err(CliError::Scope(format!("{p} is not a prime")));
        }
    }
    out.sort_by_key(|g| (g.m(), g.w(), g.z()));
    Ok(out)
}

enum CaseResult {
    Agree,
    Disagree(Disagreement),
    Skipped(String, String),
}

fn run_case(pres: &MaxClassPresentation) -> CaseResult {
    let key = Presentation::Max(pres.clone()).to_json();
    let expected = match transfer_multiplet(&Presentation::Max(pres.clone())) {
        Ok(m) => m,
        Err(e) => {
            return CaseResult::Disagree(Disagreement { presentation: key, expected: format!("error: {e}"), got: String::new() })
        }
    };
    let group = match build_max_class_group(pres) {
        Ok(g) => g,
        Err(e) => return CaseResult::Skipped(key, e.to_string()),
    };
    match transfer_multiplet_by_oracle(&group) {
        Ok(got) if got == expected => CaseResult::Agree,
        Ok(got) => CaseResult::Disagree(Disagreement { presentation: key, expected: expected.to_string(), got: got.to_string() }),
        Err(e) => CaseResult::Disagree(Disagreement { presentation: key, expected: expected.to_string(), got: format!("error: {e}") }),
    }
}

/// Runs the sweep on at most `threads` workers; the report does not depend
/// on the thread count.
pub fn sweep(cases: &[MaxClassPresentation], threads: Option<usize>) -> RunReport {
    let start = Instant::now();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().expect("thread pool");
    let results: Vec<CaseResult> = pool.install(|| cases.par_iter().map(run_case).collect());
    let mut report = RunReport { cases_run: 0, agreements: 0, disagreements: vec![], skipped: vec![], elapsed: Duration::ZERO };
    for r in results {
        match r {
            CaseResult::Agree => {
                report.cases_run += 1;
                report.agreements += 1;
            }
            CaseResult::Disagree(d) => {
                report.cases_run += 1;
                report.disagreements.push(d);
            }
            CaseResult::Skipped(k, why) => report.skipped.push((k, why)),
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// `VERLAG_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("VERLAG_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

pub fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let cases = match verify_scope(args.p, args.m_max, &args.families) {
        Ok(c) => c,
        Err(e) => return Outcome::error(e),
    };
    let report = sweep(&cases, thread_cap());
    let code = if report.disagreements.is_empty() { 0 } else { 2 };
    Outcome {
        code,
        stdout: serde_json::to_string_pretty(&report).expect("report serialises") + "\n",
        stderr: format!("elapsed: {:.3}s\n", report.elapsed.as_secs_f64()),
    }
}

pub fn cmd_orbits(args: &OrbitsArgs) -> Result<String, CliError> {
    let set = if args.total { TypeSet::Total } else { TypeSet::Partial };
    let records = enumerate_orbits(args.p, set).map_err(|e| CliError::Scope(e.to_string()))?;
    Ok(match args.format {
        Format::Csv => to_csv(args.p, set, &records),
        Format::Json => to_json(&records),
        Format::Text => to_text(args.p, set, &records),
    })
}

fn multiplet_json(m: &Multiplet) -> serde_json::Value {
    serde_json::to_value(m).expect("multiplet serialises")
}

pub fn cmd_tree(text: &str, args: &TreeArgs) -> Result<String, CliError> {
    let g = match parse(text)? {
        Presentation::Low(g) => g,
        Presentation::Max(_) => return Err(CliError::Input("tree expects a presentation of kind \"low\"".into())),
    };
    let kind = match args.node_kind {
        NodeKindArg::Terminal => NodeKind::Terminal,
        NodeKindArg::Internal => NodeKind::Internal,
    };
    let (e, coclass, class) = invariants_from_order(g.m() as i64, g.n() as i64)?;
    let position = tree_position(&g, kind);
    let [alpha, beta, gamma, delta, _] = g.exponents();
    let section_type = if g.k() == 0 {
        section_d_type(alpha, beta, gamma, delta, position.node_kind).ok()
    } else {
        None
    };
    let pred = match predecessor(&g) {
        Ok(h) => Some(h),
        Err(err) if args.predecessor => return Err(err.into()),
        Err(_) => None,
    };
    let pres = Presentation::Low(g);
    let multiplet = transfer_multiplet(&pres).ok();
    Ok(pretty(&json!({
        "family": pres.family_name(),
        "invariants": { "e": e, "coclass": coclass, "class": class },
        "position": position,
        "section_d_type": section_type.as_ref().map(multiplet_json),
        "parity": parity_classification(g.m(), e),
        "multiplet": multiplet.as_ref().map(multiplet_json),
        "predecessor": pred.map(|h| {
            let h = Presentation::Low(h);
            json!({
                "family": h.family_name(),
                "presentation": serde_json::from_str::<serde_json::Value>(&h.to_json()).expect("valid json"),
            })
        }),
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scope_counts() {
        assert_eq!(verify_scope(2, 8, "all").unwrap().len(), 17);
        assert_eq!(verify_scope(2, 8, "D,Q").unwrap().len(), 12);
        assert_eq!(verify_scope(2, 2, "all").unwrap().len(), 0);
        // m = 2 contributes only the abelian group
        assert_eq!(verify_scope(3, 3, "k0").unwrap().len(), 1 + 9);
        assert!(verify_scope(2, 8, "X").is_err());
        assert!(verify_scope(5, 8, "k0").is_err());
    }

    #[test]
    fn scope_is_sorted() {
        let cases = verify_scope(3, 4, "all").unwrap();
        let keys: Vec<_> = cases.iter().map(|g| (g.m(), g.w(), g.z())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn report_accounting() {
        let r = sweep(&verify_scope(2, 5, "all").unwrap(), Some(1));
        assert_eq!(r.agreements + r.disagreements.len(), r.cases_run);
        assert!(r.is_clean());
    }
}
