//! `flagcontact` command line.
//!
//! Exit codes: 0 success, 1 `NoneExists` under `--expect-exists`, 2 usage or
//! input error, 3 a certification check failed.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::chevalley::{certify_algebra, ChevalleyAlgebra, ContactCertificate, ContactFormMatrix};
use crate::classifier::{classify, classify_all, ContactReport, Verdict};
use crate::error::Error;
use crate::isogr::{run_trials, GrassmannianRecord};
use crate::rootsys::{CartanKind, Root, RootSystem, Weight};

pub const SCHEMA_VERSION: u32 = 1;

/// Residual bound for a Grassmannian audit to count as passing.
pub const GRASSMANNIAN_RESIDUAL_BOUND: f64 = 1e-8;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NONE_EXISTS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CERT_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "flagcontact",
    version,
    about = "Invariant contact structures on ADE flag varieties"
)]
struct Cli {
    /// Emit the JSON report envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Omit timestamps so identical inputs give byte-identical output.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Write the report to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a b2 = 1 flag variety carries an invariant contact structure.
    Classify(ClassifyArgs),
    /// Exact rank certificate for the contact form of the adjoint variety.
    Certify(CertifyArgs),
    /// Numerical audit of the isotropic Grassmannian Gr_B(2, C^2n).
    Grassmannian(GrassmannianArgs),
    /// List positive roots in simple-root and fundamental-weight coordinates.
    Roots(RootsArgs),
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Cartan type such as A3, D5, E8 (case-insensitive).
    #[arg(long = "type", value_name = "KIND", required_unless_present = "all", conflicts_with = "all")]
    kind: Option<CartanKind>,
    /// Classify every ADE kind up to --max-rank.
    #[arg(long)]
    all: bool,
    /// Largest rank listed by --all.
    #[arg(long, value_name = "R", default_value_t = 8)]
    max_rank: usize,
    /// Exit with status 1 if no contact structure exists.
    #[arg(long)]
    expect_exists: bool,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long = "type", value_name = "KIND")]
    kind: CartanKind,
    /// Random basis triples for the Jacobi spot-check.
    #[arg(long, default_value_t = 10_000)]
    jacobi_samples: u64,
    /// Check the Jacobi identity on every basis triple instead of sampling.
    #[arg(long)]
    jacobi_exhaustive: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include the contact form matrix in the JSON payload.
    #[arg(long)]
    dump_matrix: bool,
    #[arg(long)]
    expect_exists: bool,
}

#[derive(Debug, Args)]
struct GrassmannianArgs {
    #[arg(long, value_name = "N")]
    n: usize,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct RootsArgs {
    #[arg(long = "type", value_name = "KIND")]
    kind: CartanKind,
}

/// Versioned wrapper around every JSON payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope<P> {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub input: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at_unix: Option<u64>,
    pub payload: P,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyPayload {
    pub verdict: Verdict,
    pub certificate: Option<ContactCertificate>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<ContactFormMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrassmannianPayload {
    pub expected_dim_t: usize,
    pub expected_dim_e: usize,
    pub residual_bound: f64,
    pub passed: bool,
    pub records: Vec<GrassmannianRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootEntry {
    pub index: usize,
    pub height: i64,
    pub simple: Root,
    pub fundamental: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootsPayload {
    pub kind: CartanKind,
    pub highest: Root,
    pub roots: Vec<RootEntry>,
}

/// Serializes with keys sorted at every level.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    // serde_json::Map is a BTreeMap without the preserve_order feature
    let v = serde_json::to_value(value).expect("report types always serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values always serialize");
    s.push('\n');
    s
}

struct Output {
    text: String,
    code: i32,
}

/// Runs the CLI against the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };

    let result = match &cli.command {
        Command::Classify(a) => run_classify(&cli, a),
        Command::Certify(a) => run_certify(&cli, a),
        Command::Grassmannian(a) => run_grassmannian(&cli, a),
        Command::Roots(a) => Ok(run_roots(&cli, a)),
    };
    let output = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return match e {
                Error::InvalidKind(_) | Error::InvalidN(_) | Error::InvalidNode { .. } => EXIT_USAGE,
                _ => EXIT_CERT_FAILURE,
            };
        }
    };

    let written = match &cli.out {
        Some(path) => std::fs::write(path, &output.text),
        None => out.write_all(output.text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return EXIT_CERT_FAILURE;
    }
    output.code
}

fn envelope<P: Serialize>(
    cli: &Cli,
    command: &str,
    input: serde_json::Value,
    seed: Option<u64>,
    payload: P,
) -> String {
    let generated_at_unix = (!cli.deterministic).then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    to_sorted_json(&ReportEnvelope {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.to_string(),
        input,
        seed,
        generated_at_unix,
        payload,
    })
}

fn alpha(i: usize) -> String {
    format!("α_{}", i + 1)
}

fn node_list(nodes: &[usize]) -> String {
    nodes.iter().map(|&i| alpha(i)).collect::<Vec<_>>().join(", ")
}

fn run_classify(cli: &Cli, a: &ClassifyArgs) -> Result<Output, Error> {
    if a.all {
        let max_rank = a.max_rank;
        let reports = classify_all(max_rank);
        let text = if cli.json {
            envelope(
                cli,
                "classify",
                serde_json::json!({ "all": true, "max_rank": max_rank }),
                None,
                &reports,
            )
        } else {
            classify_table(&reports)
        };
        return Ok(Output { text, code: EXIT_OK });
    }

    let kind = a.kind.expect("clap enforces --type or --all");
    let report = classify(kind);
    let code = if a.expect_exists && report.verdict == Verdict::NoneExists {
        EXIT_NONE_EXISTS
    } else if report.verdict == Verdict::Exists && !(report.identity_checked && report.lambda_invariant) {
        EXIT_CERT_FAILURE
    } else {
        EXIT_OK
    };
    let text = if cli.json {
        envelope(cli, "classify", serde_json::json!({ "kind": kind }), None, &report)
    } else {
        classify_text(&report)
    };
    Ok(Output { text, code })
}

fn classify_text(r: &ContactReport) -> String {
    let mut s = String::new();
    match r.verdict {
        Verdict::NoneExists => {
            let _ = writeln!(
                s,
                "{}: no invariant contact structure exists on any flag variety with b2 = 1",
                r.kind
            );
            let _ = writeln!(
                s,
                "  the highest root is not orthogonal to {} simple roots: {}",
                r.non_orthogonal_nodes.len(),
                node_list(&r.non_orthogonal_nodes)
            );
        }
        Verdict::Exists => {
            let node = r.contact_node.unwrap();
            let dim = r.dim.unwrap();
            let _ = writeln!(s, "{}: invariant contact structure exists on G/P_Λ ≅ P(O_min)", r.kind);
            let _ = writeln!(s, "  contact node        {}", alpha(node));
            let _ = writeln!(s, "  Λ                   {{{}}}", node_list(r.lambda_subset.as_deref().unwrap_or(&[])));
            match r.n {
                Some(n) => {
                    let _ = writeln!(s, "  dim G/P_Λ           {dim} = 2·{n} + 1");
                }
                None => {
                    let _ = writeln!(s, "  dim G/P_Λ           {dim}");
                }
            }
            let _ = writeln!(
                s,
                "  contact line bundle L(λ), λ = {}·ω_{}",
                r.line_bundle_coefficient.unwrap(),
                node + 1
            );
            let _ = writeln!(
                s,
                "  μ_Λ                 {}",
                r.anticanonical_weight.as_ref().unwrap()
            );
            let _ = writeln!(
                s,
                "  (n+1)λ = μ_Λ        {}",
                if r.identity_checked { "holds" } else { "FAILS" }
            );
        }
    }
    s
}

fn classify_table(reports: &[ContactReport]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<5} {:<11} {:<5} {:>4} {:>3} {:>2} {:<9} {}",
        "kind", "verdict", "node", "dim", "n", "k", "identity", "non-orthogonal"
    );
    for r in reports {
        let dash = || "-".to_string();
        let _ = writeln!(
            s,
            "{:<5} {:<11} {:<5} {:>4} {:>3} {:>2} {:<9} {}",
            r.kind.to_string(),
            format!("{:?}", r.verdict),
            r.contact_node.map(|i| format!("a{}", i + 1)).unwrap_or_else(dash),
            r.dim.map(|d| d.to_string()).unwrap_or_else(dash),
            r.n.map(|d| d.to_string()).unwrap_or_else(dash),
            r.line_bundle_coefficient.map(|d| d.to_string()).unwrap_or_else(dash),
            match r.verdict {
                Verdict::Exists if r.identity_checked => "ok",
                Verdict::Exists => "FAIL",
                Verdict::NoneExists => "-",
            },
            r.non_orthogonal_nodes
                .iter()
                .map(|i| format!("a{}", i + 1))
                .collect::<Vec<_>>()
                .join(",")
        );
    }
    s
}

fn run_certify(cli: &Cli, a: &CertifyArgs) -> Result<Output, Error> {
    let alg = ChevalleyAlgebra::for_kind(a.kind)?;
    let report = classify(a.kind);
    let (payload, seed) = if report.verdict == Verdict::NoneExists {
        (
            CertifyPayload {
                verdict: report.verdict,
                certificate: None,
                passed: true,
                matrix: None,
            },
            None,
        )
    } else {
        let (jacobi, seed) = if a.jacobi_exhaustive {
            (alg.jacobi_exhaustive(), None)
        } else {
            (alg.jacobi_sampled(a.jacobi_samples, a.seed), Some(a.seed))
        };
        let (cert, m) = certify_algebra(&alg, jacobi)?;
        (
            CertifyPayload {
                verdict: report.verdict,
                passed: cert.passed(),
                certificate: Some(cert),
                matrix: a.dump_matrix.then_some(m),
            },
            seed,
        )
    };
    let code = if !payload.passed {
        EXIT_CERT_FAILURE
    } else if a.expect_exists && payload.verdict == Verdict::NoneExists {
        EXIT_NONE_EXISTS
    } else {
        EXIT_OK
    };
    let text = if cli.json {
        envelope(cli, "certify", serde_json::json!({ "kind": a.kind }), seed, &payload)
    } else {
        certify_text(a.kind, &payload)
    };
    Ok(Output { text, code })
}

fn certify_text(kind: CartanKind, p: &CertifyPayload) -> String {
    let mut s = String::new();
    let Some(c) = &p.certificate else {
        let _ = writeln!(s, "{kind}: no contact parabolic (more than one simple root pairs with λ); nothing to certify");
        return s;
    };
    let yn = |b: bool| if b { "yes" } else { "NO" };
    let _ = writeln!(s, "{kind}: contact form on (g_-λ)^⊥ / p_Λ");
    let _ = writeln!(s, "  dim G/P_Λ                  {} = 2·{} + 1", c.dim, c.n);
    let _ = writeln!(s, "  matrix size                {}", c.matrix_size);
    let _ = writeln!(s, "  exact rank                 {}", c.rank);
    let _ = writeln!(s, "  nondegenerate              {}", yn(c.nondegenerate));
    let _ = writeln!(s, "  antisymmetric              {}", yn(c.antisymmetric));
    let _ = writeln!(s, "  nonzero iff β_i+β_j = λ    {}", yn(c.pairing_structure));
    let _ = writeln!(s, "  β ↦ λ−β fixed-point free   {}", yn(c.involution_fixed_point_free));
    let _ = writeln!(s, "  Σβ = n·λ                   {}", yn(c.weight_balance));
    let mode = match c.jacobi.mode {
        crate::chevalley::JacobiMode::Exhaustive => "exhaustive".to_string(),
        crate::chevalley::JacobiMode::Sampled { seed } => format!("sampled, seed {seed}"),
    };
    let _ = writeln!(
        s,
        "  {:<26} {} triples, {} violations",
        format!("Jacobi ({mode})"),
        c.jacobi.triples,
        c.jacobi.violations
    );
    let _ = writeln!(s, "  certificate                {}", if p.passed { "PASS" } else { "FAIL" });
    s
}

fn run_grassmannian(cli: &Cli, a: &GrassmannianArgs) -> Result<Output, Error> {
    let records = run_trials(a.n, a.trials, a.seed)?;
    let (et, ee) = (4 * a.n - 7, 4 * a.n - 8);
    let passed = records.iter().all(|r| {
        r.dim_t == et
            && r.dim_e == ee
            && r.contact_rank == ee
            && r.max_residual < GRASSMANNIAN_RESIDUAL_BOUND
    });
    let payload = GrassmannianPayload {
        expected_dim_t: et,
        expected_dim_e: ee,
        residual_bound: GRASSMANNIAN_RESIDUAL_BOUND,
        passed,
        records,
    };
    let text = if cli.json {
        envelope(
            cli,
            "grassmannian",
            serde_json::json!({ "n": a.n, "trials": a.trials }),
            Some(a.seed),
            &payload,
        )
    } else {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "Gr_B(2, C^{}), seed {}: expect dimT = {et}, dimE = contact rank = {ee}",
            2 * a.n,
            a.seed
        );
        let _ = writeln!(
            s,
            "{:>5} {:<7} {:>5} {:>5} {:>5} {:>12}",
            "trial", "point", "dimT", "dimE", "rank", "residual"
        );
        for r in &payload.records {
            let _ = writeln!(
                s,
                "{:>5} {:<7} {:>5} {:>5} {:>5} {:>12.3e}",
                r.trial, r.point, r.dim_t, r.dim_e, r.contact_rank, r.max_residual
            );
        }
        let _ = writeln!(s, "audit {}", if passed { "PASS" } else { "FAIL" });
        s
    };
    Ok(Output {
        text,
        code: if passed { EXIT_OK } else { EXIT_CERT_FAILURE },
    })
}

pub fn roots_payload(kind: CartanKind) -> RootsPayload {
    let rs = RootSystem::new(kind);
    RootsPayload {
        kind,
        highest: rs.highest().clone(),
        roots: rs
            .positive_roots()
            .iter()
            .enumerate()
            .map(|(index, r)| RootEntry {
                index,
                height: r.height(),
                simple: r.clone(),
                fundamental: rs.to_fundamental_basis(r),
            })
            .collect(),
    }
}

fn run_roots(cli: &Cli, a: &RootsArgs) -> Output {
    let payload = roots_payload(a.kind);
    let text = if cli.json {
        envelope(cli, "roots", serde_json::json!({ "kind": a.kind }), None, &payload)
    } else {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{}: {} positive roots, highest {}",
            a.kind,
            payload.roots.len(),
            payload.highest
        );
        let width = 3 * a.kind.rank() + 2;
        let _ = writeln!(
            s,
            "{:>4} {:>6}  {:<width$} {}",
            "idx", "height", "simple roots", "fundamental weights"
        );
        for e in &payload.roots {
            let _ = writeln!(
                s,
                "{:>4} {:>6}  {:<width$} {}",
                e.index,
                e.height,
                e.simple.to_string(),
                e.fundamental
            );
        }
        s
    };
    Output { text, code: EXIT_OK }
}
