//! Subcommand implementations. Each returns the text for stdout and the
//! process exit code, or a [`CliError`] that maps to exit code 2.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use switchctl_core::oracle::{form_i_by_permutation, form_ii_by_permutation};
use switchctl_core::switched::{trial_seed, DEFAULT_BOUND, DEFAULT_ENUMERATION_CAP, DEFAULT_TRIALS};
use switchctl_core::{
    decide, enumerate_controllability_matrix, extract_pair, instantiate_all, kalman_matrix, reachable_subspace_rank,
    Certificate, Criterion, DecideOptions, StructuredPair, SwitchedNetwork, Verdict, Witness,
};
use thiserror::Error;

use crate::document::{DocumentError, NetworkDocument};
use crate::generate::{generate, GenError, GenParams};

pub const EXIT_CONTROLLABLE: i32 = 0;
pub const EXIT_UNCONTROLLABLE: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Analysis(#[from] switchctl_core::Error),
    #[error(transparent)]
    Gen(#[from] GenError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub certify: bool,
    pub seed: u64,
    pub trials: usize,
    pub bound: u64,
    pub json: bool,
    pub enumerate: bool,
    pub cap: u128,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            certify: false,
            seed: 0,
            trials: DEFAULT_TRIALS,
            bound: DEFAULT_BOUND,
            json: false,
            enumerate: false,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Explicit controllability matrix of one draw, reported by `--enumerate`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationReport {
    pub seed: u64,
    pub bound: u64,
    pub columns: usize,
    pub rank: usize,
    pub fixpoint_rank: usize,
    pub zero_rows: Vec<usize>,
}

/// JSON report of `analyze`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalyzeReport {
    pub name: Option<String>,
    pub agents: usize,
    pub leaders: Vec<usize>,
    pub snapshots: usize,
    pub controllable: bool,
    pub criterion: Criterion,
    pub criterion_description: String,
    pub required_rank: usize,
    pub union_components: Vec<Vec<usize>>,
    pub follower_components: Vec<Vec<usize>>,
    pub witness: Option<Witness>,
    pub witness_description: Option<String>,
    pub certificate: Option<Certificate>,
    pub enumeration: Option<EnumerationReport>,
}

fn braces(set: &[usize]) -> String {
    format!("{{{}}}", set.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

fn sets(parts: &[Vec<usize>]) -> String {
    parts.iter().map(|p| braces(p)).collect::<Vec<_>>().join(" ")
}

impl AnalyzeReport {
    fn new(doc: &NetworkDocument, verdict: Verdict, enumeration: Option<EnumerationReport>) -> Self {
        AnalyzeReport {
            name: doc.name.clone(),
            agents: doc.agents,
            leaders: doc.leaders.clone(),
            snapshots: verdict.n_snapshots,
            controllable: verdict.structurally_controllable,
            criterion: verdict.criterion,
            criterion_description: verdict.criterion.describe().to_string(),
            required_rank: verdict.n_states,
            witness_description: verdict.evidence.witness.as_ref().map(ToString::to_string),
            union_components: verdict.evidence.union_components,
            follower_components: verdict.evidence.follower_components,
            witness: verdict.evidence.witness,
            certificate: verdict.certificate,
            enumeration,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let name = self.name.as_deref().unwrap_or("network");
        let _ = writeln!(
            out,
            "{name}: {} agents, leaders {}, {} snapshot{}",
            self.agents,
            braces(&self.leaders),
            self.snapshots,
            if self.snapshots == 1 { "" } else { "s" }
        );
        let _ = writeln!(
            out,
            "verdict: {} (criterion {}: {})",
            if self.controllable { "controllable" } else { "uncontrollable" },
            if self.controllable { "holds" } else { "fails" },
            self.criterion_description
        );
        let _ = writeln!(out, "union components: {}", sets(&self.union_components));
        let _ = writeln!(out, "follower components: {}", sets(&self.follower_components));
        if let Some(w) = &self.witness_description {
            let _ = writeln!(out, "witness: {w}");
        }
        if let Some(c) = &self.certificate {
            let _ = writeln!(
                out,
                "certificate: rank {}/{} {} after {} trial{} (seed {}, weights in [1, {}])",
                c.achieved_rank,
                c.required_rank,
                if c.is_full_rank() { "full" } else { "deficient" },
                c.trials_run,
                if c.trials_run == 1 { "" } else { "s" },
                c.seed,
                c.bound
            );
        }
        if let Some(e) = &self.enumeration {
            let _ = writeln!(
                out,
                "enumerated matrix: {} columns, rank {} (fixpoint rank {}), zero rows {} (seed {})",
                e.columns,
                e.rank,
                e.fixpoint_rank,
                braces(&e.zero_rows),
                e.seed
            );
        }
        out
    }
}

fn network_pairs(network: &SwitchedNetwork) -> Vec<StructuredPair> {
    network.snapshots().iter().map(extract_pair).collect()
}

pub fn analyze_document(doc: &NetworkDocument, opts: &AnalyzeOptions) -> Result<Outcome, CliError> {
    let network = doc.to_network()?;
    let verdict = decide(
        &network,
        &DecideOptions {
            certify: opts.certify,
            seed: opts.seed,
            trials: opts.trials,
            bound: opts.bound,
        },
    )?;

    let enumeration = if opts.enumerate {
        let pairs = network_pairs(&network);
        let seed = verdict.certificate.as_ref().map_or(trial_seed(opts.seed, 0), |c| c.seed);
        let numeric = instantiate_all(&pairs, seed, opts.bound)?;
        let matrix = enumerate_controllability_matrix(&numeric, opts.cap)?.matrix;
        let followers = network.followers();
        Some(EnumerationReport {
            seed,
            bound: opts.bound,
            columns: matrix.cols(),
            rank: matrix.rank(),
            fixpoint_rank: reachable_subspace_rank(&numeric)?,
            zero_rows: (0..matrix.rows())
                .filter(|&r| matrix.row_is_zero(r))
                .map(|r| followers[r])
                .collect(),
        })
    } else {
        None
    };

    let code = if verdict.structurally_controllable {
        EXIT_CONTROLLABLE
    } else {
        EXIT_UNCONTROLLABLE
    };
    let report = AnalyzeReport::new(doc, verdict, enumeration);
    let stdout = if opts.json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        report.to_text()
    };
    Ok(Outcome { stdout, code })
}

pub fn analyze(path: &Path, opts: &AnalyzeOptions) -> Result<Outcome, CliError> {
    analyze_document(&NetworkDocument::read(path)?, opts)
}

#[derive(Debug, Clone)]
pub struct OracleOptions {
    pub cap: u128,
    pub seed: u64,
    pub bound: u64,
    pub json: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            cap: DEFAULT_ENUMERATION_CAP,
            seed: 0,
            bound: DEFAULT_BOUND,
            json: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub check: String,
    pub agree: bool,
    pub detail: String,
}

fn check(out: &mut Vec<OracleCheck>, name: &str, fast: impl ToString, slow: impl ToString, context: &str) {
    let (fast, slow) = (fast.to_string(), slow.to_string());
    let agree = fast == slow;
    let op = if agree { "==" } else { "!=" };
    out.push(OracleCheck {
        check: name.to_string(),
        agree,
        detail: format!("{name} {fast} {op} {} {slow} ({context})", oracle_label(name)),
    });
}

fn oracle_label(name: &str) -> &'static str {
    match name {
        "fixpoint rank" => "enumerated rank",
        "switched rank" => "Kalman rank",
        "form I fast path" | "form II fast path" => "permutation enumeration",
        _ => "oracle",
    }
}

/// Runs every brute-force oracle against its fast path on the document's
/// network.
pub fn oracle_checks(network: &SwitchedNetwork, opts: &OracleOptions) -> Result<Vec<OracleCheck>, CliError> {
    let pairs = network_pairs(network);
    let mut out = Vec::new();

    let draws = [
        ("all weights 1".to_string(), pairs.iter().map(|p| p.constant(1)).collect::<Vec<_>>()),
        (
            format!("seed {}, weights in [1, {}]", opts.seed, opts.bound),
            instantiate_all(&pairs, opts.seed, opts.bound)?,
        ),
    ];
    for (label, numeric) in &draws {
        let enumerated = enumerate_controllability_matrix(numeric, opts.cap)?;
        check(
            &mut out,
            "fixpoint rank",
            reachable_subspace_rank(numeric)?,
            enumerated.matrix.rank(),
            label,
        );
        for (i, single) in numeric.iter().enumerate() {
            check(
                &mut out,
                "switched rank",
                reachable_subspace_rank(std::slice::from_ref(single))?,
                kalman_matrix(single).rank(),
                &format!("subsystem {}, {label}", i + 1),
            );
        }
    }

    let mut structured: Vec<(String, StructuredPair)> = pairs
        .iter()
        .enumerate()
        .map(|(i, p)| (format!("subsystem {}", i + 1), p.clone()))
        .collect();
    structured.push(("summed pattern".to_string(), StructuredPair::sum(&pairs)?));
    for (label, pair) in &structured {
        let fast = pair.form_i_witness().is_some();
        let slow = form_i_by_permutation(pair, opts.cap)?.is_some();
        check(&mut out, "form I fast path", fast, slow, label);
        check(
            &mut out,
            "form II fast path",
            pair.is_form_ii(),
            form_ii_by_permutation(pair, opts.cap)?,
            label,
        );
    }
    Ok(out)
}

pub fn oracle_document(doc: &NetworkDocument, opts: &OracleOptions) -> Result<Outcome, CliError> {
    let network = doc.to_network()?;
    let checks = oracle_checks(&network, opts)?;
    let all_agree = checks.iter().all(|c| c.agree);
    let stdout = if opts.json {
        serde_json::to_string_pretty(&checks).expect("checks serialize") + "\n"
    } else {
        let mut s = String::new();
        for c in &checks {
            let _ = writeln!(s, "{} {}", if c.agree { "ok  " } else { "FAIL" }, c.detail);
        }
        let disagreements = checks.iter().filter(|c| !c.agree).count();
        let _ = writeln!(s, "{} checks, {} disagreements", checks.len(), disagreements);
        s
    };
    Ok(Outcome {
        stdout,
        code: if all_agree { 0 } else { 1 },
    })
}

pub fn oracle(path: &Path, opts: &OracleOptions) -> Result<Outcome, CliError> {
    oracle_document(&NetworkDocument::read(path)?, opts)
}

pub fn gen(params: &GenParams) -> Result<Outcome, CliError> {
    Ok(Outcome {
        stdout: generate(params)?.to_json(),
        code: 0,
    })
}
