use std::net::IpAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use ffdecide_core::entropy::{EntropyModel, Reduction};
use ffdecide_core::payload::{self, GridSpec, Request};
use ffdecide_core::problem::{case_document, TURKIYE_CASE};
use ffdecide_core::report::{self, Format};
use ffdecide_core::robustness::{ModelDominance, DEFAULT_ALPHA_GRID, DEFAULT_DELTA};
use ffdecide_core::{load_problem, Aggregator, Error, ErrorKind, Exec};
use ffdecide_server::Config;
use serde::Serialize;

/// Fermatean fuzzy multi-criteria decision engine.
#[derive(Parser)]
#[command(name = "ffdecide", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank the alternatives of a problem.
    Evaluate {
        #[command(flatten)]
        analysis: Analysis,
        /// Include intermediate matrices in structured output.
        #[arg(long)]
        intermediate: bool,
    },
    /// Objective, subjective and integrated criterion weights.
    Weights {
        #[command(flatten)]
        analysis: Analysis,
    },
    /// Re-rank over a grid of alpha values.
    Sweep {
        #[command(flatten)]
        analysis: Analysis,
        /// `start:stop:step` or a comma-separated list.
        #[arg(long, default_value = DEFAULT_ALPHA_GRID)]
        alpha_grid: String,
    },
    /// Perturb each criterion weight up and down and compare rankings.
    Perturb {
        #[command(flatten)]
        analysis: Analysis,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
    },
    /// Rank under every entropy model and compare with Kendall's tau.
    CompareEntropy {
        #[command(flatten)]
        analysis: Analysis,
    },
    /// Criterion dominance of the objective weights under every entropy model.
    Dominance {
        #[command(flatten)]
        analysis: Analysis,
    },
    /// Print a built-in case document.
    Example {
        #[arg(long, default_value = TURKIYE_CASE)]
        case: String,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        bind: Option<IpAddr>,
        /// Allowed CORS origin; repeat for several, `*` for any.
        #[arg(long = "allow-origin")]
        allow_origin: Vec<String>,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "case"])))]
struct Analysis {
    /// Problem document to read.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Built-in case name.
    #[arg(long)]
    case: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value = "cosine")]
    entropy: EntropyModel,
    #[arg(long, default_value = "mean", value_parser = parse_reduction)]
    reduction: Reduction,
    #[arg(long, default_value = "ffwa")]
    aggregator: Aggregator,
    /// Use the crisp method's labelling of the two reference utilities.
    #[arg(long)]
    standard_marcos: bool,
    #[arg(long, default_value = "table")]
    format: Format,
}

fn parse_reduction(s: &str) -> Result<Reduction, String> {
    match s {
        "mean" => Ok(Reduction::Mean),
        "sum" => Ok(Reduction::Sum),
        other => Err(format!(
            "unknown reduction `{other}` (expected mean or sum)"
        )),
    }
}

enum Failure {
    Engine(Error),
    Input(String),
    Serve(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Engine(e) => match e.kind() {
                ErrorKind::Invalid | ErrorKind::TooLarge => 2,
                ErrorKind::Degenerate => 3,
            },
            Failure::Input(_) => 2,
            Failure::Serve(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Engine(e) => e.to_string(),
            Failure::Input(m) | Failure::Serve(m) => m.clone(),
        }
    }
}

impl Analysis {
    fn request(&self) -> Result<Request, Failure> {
        let mut req = match (&self.input, &self.case) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
                Request::for_problem(&load_problem(&text)?)
            }
            (None, Some(name)) => Request::for_case(name),
            (None, None) => unreachable!("clap requires a source"),
        };
        req.alpha = self.alpha;
        req.entropy_model = self.entropy;
        req.reduction = self.reduction;
        req.aggregator = self.aggregator;
        req.standard_marcos = self.standard_marcos;
        Ok(req)
    }
}

#[derive(Serialize)]
struct DominanceOutput<'a> {
    criteria: Vec<&'a str>,
    dominance: &'a [ModelDominance],
}

fn emit(
    analysis: &Analysis,
    structured: impl FnOnce() -> String,
    doc: impl FnOnce() -> report::ReportDocument,
) -> String {
    let mut out = match analysis.format {
        Format::Structured => structured(),
        other => doc().render(other),
    };
    if !out.ends_with('\n') {
        out.push('\n');
    }
    out
}

fn run(cli: Cli) -> Result<String, Failure> {
    let exec = Exec::default();
    let out = match cli.command {
        Command::Evaluate {
            analysis,
            intermediate,
        } => {
            let mut req = analysis.request()?;
            req.intermediate = intermediate || analysis.format != Format::Structured;
            let resp = payload::evaluate_payload(&req, exec)?;
            emit(
                &analysis,
                || payload::to_json(&resp),
                || report::evaluation_report(&resp),
            )
        }
        Command::Weights { analysis } => {
            let resp = payload::weights_payload(&analysis.request()?, exec)?;
            emit(
                &analysis,
                || payload::to_json(&resp.weights),
                || report::weights_report(&resp),
            )
        }
        Command::Sweep {
            analysis,
            alpha_grid,
        } => {
            let mut req = analysis.request()?;
            req.alpha_grid = Some(GridSpec::Spec(alpha_grid));
            let resp = payload::sweep_payload(&req, exec)?;
            emit(
                &analysis,
                || payload::to_json(&resp),
                || report::sweep_report(&resp),
            )
        }
        Command::Perturb { analysis, delta } => {
            let mut req = analysis.request()?;
            req.delta = Some(delta);
            let resp = payload::perturb_payload(&req, exec)?;
            emit(
                &analysis,
                || payload::to_json(&resp),
                || report::perturbation_report(&resp),
            )
        }
        Command::CompareEntropy { analysis } => {
            let resp = payload::compare_payload(&analysis.request()?, exec)?;
            emit(
                &analysis,
                || payload::to_json(&resp),
                || report::comparison_report(&resp),
            )
        }
        Command::Dominance { analysis } => {
            let resp = payload::compare_payload(&analysis.request()?, exec)?;
            let out = DominanceOutput {
                criteria: resp.criteria.iter().map(|c| c.id.as_str()).collect(),
                dominance: &resp.dominance,
            };
            emit(
                &analysis,
                || payload::to_json(&out),
                || report::dominance_report(&resp),
            )
        }
        Command::Example { case } => case_document(&case)?.to_string(),
        Command::Serve {
            port,
            bind,
            allow_origin,
        } => {
            let mut config = Config::default()
                .with_env()
                .map_err(|e| Failure::Serve(e.to_string()))?;
            if let Some(port) = port {
                config.port = port;
            }
            if let Some(bind) = bind {
                config.bind = bind;
            }
            if !allow_origin.is_empty() {
                config.allowed_origins = allow_origin;
            }
            serve(config)?;
            String::new()
        }
    };
    Ok(out)
}

fn serve(config: Config) -> Result<(), Failure> {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .init();
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| Failure::Serve(e.to_string()))?;
    runtime
        .block_on(ffdecide_server::serve(config))
        .map_err(|e| Failure::Serve(e.to_string()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ffdecide_core::{builtin_case, save_problem};
    use std::path::PathBuf;

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("ffdecide").chain(args.iter().copied()))
    }

    fn stdout(args: &[&str]) -> String {
        match run(parse(args).unwrap()) {
            Ok(out) => out,
            Err(f) => panic!("{args:?}: {}", f.message()),
        }
    }

    fn failure(args: &[&str]) -> Failure {
        run(parse(args).unwrap()).expect_err("command should fail")
    }

    fn code(args: &[&str]) -> i32 {
        match parse(args) {
            Err(e) => e.exit_code(),
            Ok(cli) => run(cli).map_or_else(|f| i32::from(f.code()), |_| 0),
        }
    }

    fn temp_doc(name: &str, text: &str) -> PathBuf {
        let path =
            std::env::temp_dir().join(format!("ffdecide-{}-{name}.json", std::process::id()));
        std::fs::write(&path, text).unwrap();
        path
    }

    #[test]
    fn structured_output_matches_engine_payloads() {
        let base = [
            "--case",
            TURKIYE_CASE,
            "--alpha",
            "0.3",
            "--format",
            "structured",
        ];
        let req = Request {
            alpha: 0.3,
            ..Request::for_case(TURKIYE_CASE)
        };
        let exec = Exec::Sequential;
        let run = |cmd: &str, extra: &[&str]| {
            let mut args = vec![cmd];
            args.extend(base);
            args.extend(extra);
            stdout(&args)
        };

        assert_eq!(
            run("evaluate", &[]),
            payload::to_json(&payload::evaluate_payload(&req, exec).unwrap())
        );
        let full = Request {
            intermediate: true,
            ..req.clone()
        };
        assert_eq!(
            run("evaluate", &["--intermediate"]),
            payload::to_json(&payload::evaluate_payload(&full, exec).unwrap())
        );
        assert_eq!(
            run("weights", &[]),
            payload::to_json(&payload::weights_payload(&req, exec).unwrap().weights)
        );
        let sweep = Request {
            alpha_grid: Some(GridSpec::Spec("0:1:0.5".into())),
            ..req.clone()
        };
        assert_eq!(
            run("sweep", &["--alpha-grid", "0:1:0.5"]),
            payload::to_json(&payload::sweep_payload(&sweep, exec).unwrap())
        );
        let perturb = Request {
            delta: Some(0.25),
            ..req.clone()
        };
        assert_eq!(
            run("perturb", &["--delta", "0.25"]),
            payload::to_json(&payload::perturb_payload(&perturb, exec).unwrap())
        );
        assert_eq!(
            run("compare-entropy", &[]),
            payload::to_json(&payload::compare_payload(&req, exec).unwrap())
        );
        let dominance: serde_json::Value = serde_json::from_str(&run("dominance", &[])).unwrap();
        assert_eq!(dominance["criteria"].as_array().unwrap().len(), 6);
        assert_eq!(dominance["dominance"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn table_and_csv_reports() {
        let table = stdout(&["evaluate", "--case", TURKIYE_CASE]);
        for section in [
            "Criterion weights",
            "Weighted scores",
            "Utilities",
            "Ranking",
        ] {
            assert!(table.contains(section), "missing {section}");
        }
        let csv = stdout(&["evaluate", "--case", TURKIYE_CASE, "--format", "csv"]);
        let scores: Vec<&str> = csv
            .split("# Weighted scores\n")
            .nth(1)
            .unwrap()
            .lines()
            .take_while(|l| !l.is_empty())
            .collect();
        assert_eq!(scores.len(), 8);
        assert_eq!(scores[0], "alternative,A,B,C,D,E,F");

        for cmd in [
            "weights",
            "sweep",
            "perturb",
            "compare-entropy",
            "dominance",
        ] {
            let out = stdout(&[cmd, "--case", TURKIYE_CASE, "--format", "table"]);
            assert!(!out.trim().is_empty(), "{cmd}");
        }
    }

    #[test]
    fn example_round_trips_through_input() {
        let doc = stdout(&["example"]);
        assert_eq!(doc, case_document(TURKIYE_CASE).unwrap());
        let path = temp_doc("example", &doc);
        let from_file = stdout(&[
            "evaluate",
            "--input",
            path.to_str().unwrap(),
            "--format",
            "structured",
        ]);
        let from_case = stdout(&["evaluate", "--case", TURKIYE_CASE, "--format", "structured"]);
        assert_eq!(from_file, from_case);
        std::fs::remove_file(path).unwrap();
    }

    #[test]
    fn validation_errors_exit_with_two() {
        let err = failure(&["evaluate", "--case", TURKIYE_CASE, "--alpha", "1.5"]);
        assert_eq!(err.code(), 2);
        assert!(err.message().contains("alpha"));
        assert_eq!(code(&["evaluate", "--case", "atlantis"]), 2);

        let mut p = builtin_case(TURKIYE_CASE).unwrap();
        p.evaluations[1][3][4] = "XX".into();
        let path = temp_doc("bad-term", &save_problem(&p));
        let err = failure(&["evaluate", "--input", path.to_str().unwrap()]);
        assert_eq!(err.code(), 2);
        assert!(err.message().contains("evaluations[1][3][4]"));
        std::fs::remove_file(path).unwrap();

        let path = temp_doc("malformed", "{\"schema_version\": 1,");
        assert_eq!(code(&["evaluate", "--input", path.to_str().unwrap()]), 2);
        std::fs::remove_file(path).unwrap();

        assert_eq!(
            code(&["evaluate", "--input", "/nonexistent/problem.json"]),
            2
        );
        assert_eq!(
            code(&["perturb", "--case", TURKIYE_CASE, "--delta", "1"]),
            2
        );
        assert_eq!(code(&["evaluate"]), 2);
    }

    #[test]
    fn degenerate_problems_exit_with_three() {
        let mut p = builtin_case(TURKIYE_CASE).unwrap();
        for e in &mut p.evaluations {
            for row in e.iter_mut() {
                row.iter_mut().for_each(|t| *t = "M".into());
            }
        }
        let path = temp_doc("degenerate", &save_problem(&p));
        assert_eq!(code(&["evaluate", "--input", path.to_str().unwrap()]), 3);
        std::fs::remove_file(path).unwrap();
    }

    #[test]
    fn options_reach_the_engine() {
        let parse =
            |args: &[&str]| -> serde_json::Value { serde_json::from_str(&stdout(args)).unwrap() };
        let v = parse(&[
            "evaluate",
            "--case",
            TURKIYE_CASE,
            "--entropy",
            "shannon",
            "--aggregator",
            "ffwg",
            "--reduction",
            "sum",
            "--standard-marcos",
            "--format",
            "structured",
        ]);
        assert_eq!(v["settings"]["entropy_model"], "shannon");
        assert_eq!(v["settings"]["aggregator"], "ffwg");
        assert_eq!(v["settings"]["reduction"], "sum");
        assert_eq!(v["settings"]["standard_marcos"], true);
        assert_eq!(
            code(&["evaluate", "--case", TURKIYE_CASE, "--entropy", "renyi"]),
            2
        );
    }
}
