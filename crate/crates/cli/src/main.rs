use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use pearl::corpus::{self, CorpusEntry};
use pearl::oracle::{correspondence_check_in, FrameClass, Report};
use pearl::pipeline::{order_text, PearlResult};
use pearl::serialize::{expand_leq, tptp_body};
use pearl::{parse_formula, pearl, render, Fo, OutputFormat, PearlOptions, RenderOptions, Syntax};

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_DISAGREE: u8 = 3;

/// Compute first-order frame correspondents of relevance-logic formulas.
#[derive(Parser, Debug)]
#[command(name = "pearl", version)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["input", "file", "corpus"])))]
struct Cli {
    /// Formula in TeX-style notation.
    #[arg(short, long)]
    input: Option<String>,
    /// File holding one formula.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Corpus to run in batch: `bundled-axioms` or a JSON Lines file.
    #[arg(long)]
    corpus: Option<String>,
    /// Input language: `relevance`, `bi` or `ra`.
    #[arg(long, default_value = "relevance", value_parser = parse_syntax)]
    syntax: Syntax,
    /// Output format: `tex`, `tptp`, `prover9`, `spass` or `json`.
    #[arg(long, default_value = "tex", value_parser = parse_format)]
    format: OutputFormat,
    /// Check the correspondent on all frames up to this size.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=3))]
    verify: u8,
    /// Print every rule application.
    #[arg(long)]
    trace: bool,
    /// Write `⪯` through `O` and `R` in sentence formats.
    #[arg(long)]
    expand_leq: bool,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_syntax(s: &str) -> Result<Syntax, String> {
    s.parse()
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse()
}

fn render_fo(cli: &Cli, fo: &Fo, name: &str) -> String {
    let opts = RenderOptions { expand_leq: cli.expand_leq, name: name.to_string(), omit_closure: false };
    render(fo, cli.format, &opts).unwrap_or_else(|e| format!("<{e}>"))
}

fn verify(cli: &Cli, result: &PearlResult) -> Option<Report> {
    let fo = result.fo.as_ref()?;
    if cli.verify == 0 {
        return None;
    }
    let class = FrameClass::from(cli.syntax);
    Some(correspondence_check_in(&result.input, fo, cli.verify as usize, class).expect("size within budget"))
}

fn verify_line(out: &mut String, report: &Report, n: u8) {
    if report.agree {
        let _ = writeln!(out, "verified: agrees on all {} frames with at most {n} worlds", report.frames_checked);
    } else {
        let frame = report.counterexample.as_ref().expect("disagreement has a witness");
        let _ = writeln!(out, "verification FAILED on frame {}", frame.to_json());
    }
}

fn single(cli: &Cli, text: &str) -> (u8, String) {
    let mut out = String::new();
    let phi = match parse_formula(text, cli.syntax) {
        Ok(phi) => phi,
        Err(e) => return (EXIT_PARSE, format!("parse error: {e}\n")),
    };
    let result = pearl(&phi, &PearlOptions::with_syntax(cli.syntax));
    let report = verify(cli, &result);
    let code = match (&result.failure, &report) {
        (Some(_), _) => EXIT_FAILURE,
        (None, Some(r)) if !r.agree => EXIT_DISAGREE,
        _ => 0,
    };
    if cli.format == OutputFormat::Json {
        let mut v = result.to_json();
        if let Some(fo) = &result.fo {
            v["rendered"] = serde_json::Value::String(render_fo(cli, fo, "correspondent"));
        }
        if let Some(r) = &report {
            v["verify"] = serde_json::to_value(r).expect("report serializes");
        }
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
        return (code, out);
    }
    let syn = cli.syntax;
    let list = |v: &[pearl::Inequality]| v.iter().map(|i| i.to_text(syn)).collect::<Vec<_>>().join(", ");
    let _ = writeln!(out, "input: {}", pearl::to_text(&phi, syn).unwrap_or_else(|_| text.to_string()));
    let _ = writeln!(out, "initial inequalities: [{}]", list(&result.preprocess.result));
    for (k, g) in result.goals.iter().enumerate() {
        let _ = writeln!(out, "goal {}:", k + 1);
        let _ = writeln!(out, "  approximation: {}", g.approximated.to_text(syn));
        let _ = writeln!(out, "  elimination order: {}", order_text(&g.order));
        let _ = writeln!(out, "  pure: {}", g.pure.to_text(syn));
        let _ = writeln!(out, "  simplified: {}", g.simplified.to_text(syn));
        if cli.trace {
            let _ = writeln!(out, "  trace:");
            for s in &g.trace.steps {
                let _ = writeln!(out, "    {:<24} {}", s.step.name(), s.result.to_text(syn));
            }
        }
    }
    if let Some(f) = &result.failure {
        let _ = writeln!(out, "elimination failed on goal {}: {}", f.goal + 1, f.reason);
        let _ = writeln!(out, "  stuck: {}", f.stuck.to_text(syn));
        let orders: Vec<String> = f.attempted.iter().map(|o| order_text(o)).collect();
        let _ = writeln!(out, "  attempted: {}", orders.join(" "));
        if cli.trace {
            for s in &f.trace.steps {
                let _ = writeln!(out, "    {:<24} {}", s.step.name(), s.result.to_text(syn));
            }
        }
    }
    if let Some(fo) = &result.fo {
        let _ = writeln!(out, "correspondent: {}", render_fo(cli, fo, "correspondent"));
    }
    if let Some(r) = &report {
        verify_line(&mut out, r, cli.verify);
    }
    (code, out)
}

fn batch(cli: &Cli, entries: &[CorpusEntry]) -> (u8, String) {
    let mut out = String::new();
    let mut code = 0;
    let mut rows = vec![["name".to_string(), "status".into(), "order".into(), "correspondent".into()]];
    for e in entries {
        let phi = match parse_formula(&e.formula, cli.syntax) {
            Ok(phi) => phi,
            Err(err) => {
                code = code.max(EXIT_PARSE);
                rows.push([e.name.clone(), "parse-error".into(), "-".into(), err.to_string()]);
                continue;
            }
        };
        let result = pearl(&phi, &PearlOptions::with_syntax(cli.syntax));
        let Some(fo) = &result.fo else {
            code = code.max(EXIT_FAILURE);
            rows.push([e.name.clone(), "failure".into(), "-".into(), "-".into()]);
            continue;
        };
        let mut status = "ok";
        if let Some(expected) = &e.expected_fo {
            if tptp_body(fo) != *expected && tptp_body(&expand_leq(fo)) != *expected {
                status = "mismatch";
                code = EXIT_DISAGREE;
            }
        }
        if let Some(r) = verify(cli, &result) {
            if !r.agree {
                status = "disagree";
                code = EXIT_DISAGREE;
            }
        }
        rows.push([e.name.clone(), status.into(), order_text(&result.order()), render_fo(cli, fo, &e.name)]);
    }
    let widths: Vec<usize> = (0..3).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    for r in &rows {
        let mut line = String::new();
        for c in 0..3 {
            let _ = write!(line, "{:<w$} | ", r[c], w = widths[c]);
        }
        line.push_str(&r[3]);
        let _ = writeln!(out, "{}", line.trim_end());
    }
    (code, out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, report) = if let Some(text) = &cli.input {
        single(&cli, text)
    } else if let Some(path) = &cli.file {
        match std::fs::read_to_string(path) {
            Ok(text) => single(&cli, text.trim()),
            Err(e) => (EXIT_PARSE, format!("cannot read {}: {e}\n", path.display())),
        }
    } else {
        let source = cli.corpus.as_deref().expect("argument group requires a source");
        match corpus::load(source) {
            Ok(entries) => batch(&cli, &entries),
            Err(e) => (EXIT_PARSE, format!("cannot load corpus: {e}\n")),
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &report) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_PARSE);
            }
        }
        None => print!("{report}"),
    }
    ExitCode::from(code)
}
