use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cubic_brauer::arith::set_factorization_seed;
use cubic_brauer::brauer::{analyze, classify, curve_summary, plane_cubic_mod_p, AnalysisReport};
use cubic_brauer::input::{parse_plane_cubic, parse_surface};
use cubic_brauer::lines::DEFAULT_PRECISION;
use serde_json::json;

/// Reduction type, 27 lines and Brauer group checks for cubic surfaces over Q
/// at a prime p.
#[derive(Parser)]
#[command(name = "cubic-brauer", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the reduction mod p.
    Classify(Common),
    /// Full analysis: lines, Galois action, cohomology, checks and conclusions.
    Analyze(Common),
    /// The 27 lifted lines and their triples.
    Lines(Common),
    /// The Galois action on the Picard lattice and its cohomology.
    Cohomology(Common),
    /// Points, group structure and flexes of a plane cubic in x, y, z.
    Curve(Common),
}

#[derive(Args)]
struct Common {
    /// File holding the form; reads stdin when omitted or "-".
    file: Option<PathBuf>,
    /// The form itself, instead of a file.
    #[arg(short, long, conflicts_with = "file")]
    expr: Option<String>,
    /// A prime p >= 5.
    #[arg(short, long)]
    prime: u64,
    /// Target p-adic precision of the lifted lines.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Human-readable text or a JSON report.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized polynomial factorization. Output does not depend on it.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((output, code)) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(output.as_bytes());
            ExitCode::from(code)
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn read_input(c: &Common) -> Result<String, String> {
    if let Some(e) = &c.expr {
        return Ok(e.clone());
    }
    match &c.file {
        Some(path) if path.as_os_str() != "-" => {
            std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| format!("stdin: {e}"))?;
            Ok(s)
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn run(cli: Cli) -> Result<(String, u8), String> {
    let (Command::Classify(c) | Command::Analyze(c) | Command::Lines(c) | Command::Cohomology(c) | Command::Curve(c)) =
        &cli.command;
    if let Some(seed) = c.seed {
        set_factorization_seed(seed);
    }
    let src = read_input(c)?;
    let err = |e: &dyn std::fmt::Display| e.to_string();

    if let Command::Curve(_) = cli.command {
        let form = parse_plane_cubic(&src).map_err(|e| format!("parse error at {e}"))?;
        let curve = plane_cubic_mod_p(&form, c.prime).map_err(|e| err(&e))?;
        let summary = curve_summary(&curve).map_err(|e| err(&e))?;
        let out = match c.format {
            Format::Text => summary.to_text(),
            Format::Json => to_json(&json!({"schema_version": 1, "curve": summary})),
        };
        return Ok((out, 0));
    }

    let form = parse_surface(&src).map_err(|e| format!("parse error at {e}"))?;
    if let Command::Classify(_) = cli.command {
        let report = classify(&form, c.prime).map_err(|e| err(&e))?;
        let out = match c.format {
            Format::Text => report.to_text(),
            Format::Json => to_json(&report),
        };
        return Ok((out, 0));
    }

    let report = analyze(&form, c.prime, c.precision).map_err(|e| err(&e))?;
    let code = report.exit_code() as u8;
    let out = match (&cli.command, c.format) {
        (Command::Analyze(_), Format::Text) => report.to_text(),
        (Command::Analyze(_), Format::Json) => to_json(&report),
        (Command::Lines(_), fmt) => section(&report, fmt, "lines", &report.lines, lines_text),
        (Command::Cohomology(_), fmt) => section(&report, fmt, "cohomology", &report.cohomology, cohomology_text),
        _ => unreachable!("handled above"),
    };
    Ok((out, code))
}

/// One section of the report, or the reason it is absent.
fn section<T: serde::Serialize>(
    report: &AnalysisReport,
    format: Format,
    key: &str,
    section: &Option<T>,
    text: fn(&T) -> String,
) -> String {
    match (format, section) {
        (Format::Json, _) => to_json(&json!({
            "schema_version": report.schema_version,
            "prime": report.prime,
            "outcome": report.outcome,
            "notes": report.notes,
            key: section,
        })),
        (Format::Text, Some(s)) => text(s),
        (Format::Text, None) => {
            let mut out = format!("no {key} data: outcome {:?}\n", report.outcome);
            for n in &report.notes {
                out.push_str(&format!("note: {n}\n"));
            }
            out
        }
    }
}

fn lines_text(l: &cubic_brauer::brauer::LinesSummary) -> String {
    let mut out = format!(
        "cover model: {}\nbase curve:  {}\nresidue field degree {}, precision {}\n\n",
        l.cover_model, l.base_curve, l.residue_field_degree, l.precision
    );
    for line in &l.lines {
        out.push_str(&format!(
            "{:>4}  flex {}  reduction ({})  residual valuation {}\n",
            line.name,
            line.flex,
            line.reduction.join(", "),
            line.residual_valuation
        ));
    }
    out.push_str("\ntriples:\n");
    for t in &l.triples {
        out.push_str(&format!(
            "  {} over flex {}{}\n",
            t.lines.join(" "),
            t.flex,
            if t.coplanar { "" } else { " (not coplanar)" }
        ));
    }
    out.push_str(&format!("\nsigma: {}\n", l.sigma.join(" ")));
    out
}

fn cohomology_text(h: &cubic_brauer::brauer::CohomologySummary) -> String {
    let inv = |v: &[u64]| {
        if v.is_empty() {
            "0".to_string()
        } else {
            v.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" x ")
        }
    };
    let mut out = format!("action order {}\nmatrix on (L, E1..E6):\n", h.action_order);
    for row in &h.action_matrix {
        out.push_str(&format!("  {row:?}\n"));
    }
    out.push_str(&format!(
        "H^0 rank {} spanned by {:?}\nH^1 = {}\nflex map kernel rank {}, H^0 rank {}, Tate H^0 = {}\n",
        h.h0_rank,
        h.h0_basis,
        inv(&h.h1_invariants),
        h.kernel_rank,
        h.kernel_h0_rank,
        inv(&h.kernel_tate_invariants)
    ));
    out
}
