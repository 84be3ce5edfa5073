use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use subsum_core::classify::{classify_with, ClassifyOptions, DEFAULT_HORIZON, MAX_DIGIT_BASE};
use subsum_core::cn::{build_cn_signed, DEFAULT_CAP};
use subsum_core::greedy::fill;
use subsum_core::oracle::{oracle_cn, oracle_cn_signed, union_diff};
use subsum_core::rational::{format_rational, parse_rational, Rational};
use subsum_core::render::{sweep_csv, sweep_svg, write_bar_chart, SweepConfig};
use subsum_core::spec_format::{load_spec, preset, spec_to_json, PRESETS};
use subsum_core::{Error, IntervalUnion, MergedSpec};

#[derive(Parser)]
#[command(name = "subsums", version, about = "Exact subsum sets of null sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args)]
struct SeqArgs {
    /// Preset name or path to a JSON sequence document.
    #[arg(long)]
    seq: String,
}

#[derive(clap::Args)]
struct CapArgs {
    /// Largest number of distinct subsums kept while building C_n.
    #[arg(long, env = "SUBSUMS_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the subsum set.
    Classify {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        cap: CapArgs,
        /// Number of term/tail comparisons reported.
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        depth: usize,
        #[arg(long, default_value_t = MAX_DIGIT_BASE)]
        max_digit_base: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Build C_n.
    Cn {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        cap: CapArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare C_n with brute-force subset sums.
    Oracle {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        cap: CapArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Greedily pick a subsequence summing towards a target.
    Fill {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, value_parser = rational_arg)]
        target: Rational,
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long, default_value_t = 1000)]
        max_rounds: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Classify a grid of bi-geometric sequences.
    Sweep {
        #[arg(long, default_value_t = 21)]
        resolution: usize,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        depth: usize,
        #[arg(long, default_value_t = MAX_DIGIT_BASE)]
        max_digit_base: u64,
        /// SVG output path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV output path; standard output when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Draw C_n as a bar chart.
    Render {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        cap: CapArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1000)]
        width: u32,
        #[arg(long, default_value_t = 120)]
        height: u32,
    },
    /// List the named sequences.
    Presets {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Compute(String),
    Disagreement,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidSpec(_) | Error::Io(_) => Failure::Usage(e.to_string()),
            e => Failure::Compute(e.to_string()),
        }
    }
}

fn print_text(v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                println!("{k}: {}", v);
            }
        }
        v => println!("{v}"),
    }
}

fn emit(format: Format, v: &Value) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize")),
        Format::Text => print_text(v),
    }
}

fn union_summary(n: usize, u: &IntervalUnion, tail_exact: bool) -> Result<Value, Error> {
    let hull = u.hull()?;
    Ok(json!({
        "depth": n,
        "components": u.components(),
        "total_length": format_rational(&u.total_length()),
        "hull": [format_rational(hull.left()), format_rational(hull.right())],
        "tail_exact": tail_exact,
    }))
}

fn positive_part(spec: &MergedSpec) -> Option<&subsum_core::SequenceSpec> {
    spec.as_single().filter(|s| s.is_positive())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { seq, cap, depth, max_digit_base, format } => {
            let spec = load_spec(&seq.seq)?;
            let opts = ClassifyOptions { horizon: depth, cap: cap.cap, max_digit_base };
            let verdict = classify_with(&spec, &opts)?;
            emit(format, &verdict.to_json(depth));
        }
        Command::Cn { seq, cap, depth, format } => {
            let spec = load_spec(&seq.seq)?;
            let cn = build_cn_signed(&spec, depth, cap.cap)?;
            let mut summary = union_summary(depth, &cn.fattened, cn.tail_exact())?;
            match format {
                Format::Json => {
                    summary["intervals"] = json!(cn.fattened);
                    if let Some(inner) = &cn.inner {
                        summary["inner_intervals"] = json!(inner);
                    }
                    emit(format, &summary);
                }
                Format::Text => {
                    print!("{}", cn.fattened.to_text());
                    println!("# {summary}");
                }
            }
        }
        Command::Oracle { seq, cap, depth, format } => {
            let spec = load_spec(&seq.seq)?;
            let expected = match positive_part(&spec) {
                Some(s) => oracle_cn(s, depth)?,
                None => oracle_cn_signed(&spec, depth)?,
            };
            let actual = build_cn_signed(&spec, depth, cap.cap)?.fattened;
            let diff = union_diff(&expected, &actual);
            let mut summary = union_summary(depth, &expected, true)?;
            summary["agree"] = json!(diff.is_empty());
            match format {
                Format::Json => {
                    summary["intervals"] = json!(expected);
                    summary["diff"] = json!(diff);
                    emit(format, &summary);
                }
                Format::Text => {
                    print!("{}", expected.to_text());
                    println!("# {summary}");
                    if !diff.is_empty() {
                        println!("DIFF");
                        for line in &diff {
                            println!("{line}");
                        }
                    }
                }
            }
            if !diff.is_empty() {
                return Err(Failure::Disagreement);
            }
        }
        Command::Fill { seq, target, eps, max_rounds, format } => {
            let spec = load_spec(&seq.seq)?;
            let spec = positive_part(&spec).ok_or(Error::NotPositive)?;
            let result = fill(spec, &target, &eps, max_rounds)?;
            match format {
                Format::Json => emit(format, &result.to_json()),
                Format::Text => {
                    let runs: Vec<String> = result.runs.iter().map(|(s, e)| format!("{s}..{e}")).collect();
                    let gaps: Vec<String> = result.gaps.iter().map(format_rational).collect();
                    println!("runs: {}", runs.join(" "));
                    println!("gaps: {}", gaps.join(" "));
                    println!("achieved: {}", format_rational(&result.achieved));
                    println!("status: {}", json!(result.status).as_str().unwrap_or_default());
                }
            }
        }
        Command::Sweep { resolution, depth, max_digit_base, out, csv } => {
            let options = ClassifyOptions { horizon: depth, cap: DEFAULT_CAP, max_digit_base };
            let grid = subsum_core::render::sweep(&SweepConfig { resolution, options })?;
            let table = sweep_csv(&grid)?;
            match csv {
                Some(path) => std::fs::write(path, table).map_err(Error::from)?,
                None => print!("{table}"),
            }
            if let Some(path) = out {
                std::fs::write(path, sweep_svg(&grid)).map_err(Error::from)?;
            }
        }
        Command::Render { seq, cap, depth, out, width, height } => {
            let spec = load_spec(&seq.seq)?;
            let cn = build_cn_signed(&spec, depth, cap.cap)?;
            write_bar_chart(&cn.fattened, width, height, &out)?;
            eprintln!("wrote {} components to {}", cn.fattened.components(), out.display());
        }
        Command::Presets { format } => {
            let mut rows = Vec::new();
            for (name, description) in PRESETS {
                let spec = preset(name)?;
                let first: Vec<String> = spec.first_terms(6).iter().map(format_rational).collect();
                rows.push(json!({"name": name, "description": description, "first_terms": first, "spec": spec_to_json(&spec)}));
            }
            match format {
                Format::Json => emit(format, &Value::Array(rows)),
                Format::Text => {
                    for row in &rows {
                        let first: Vec<&str> = row["first_terms"].as_array().unwrap().iter().filter_map(Value::as_str).collect();
                        println!("{:<20} {}  [{}, ...]", row["name"].as_str().unwrap(), row["description"].as_str().unwrap(), first.join(", "));
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Disagreement) => {
            eprintln!("error: C_n disagrees with the brute-force oracle");
            ExitCode::from(3)
        }
    }
}
