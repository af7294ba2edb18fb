use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pencil_monodromy::alexander::{closed_form_generic_linear, closed_form_tame_maximal};
use pencil_monodromy::braid::BraidWord;
use pencil_monodromy::error::{Error, Result};
use pencil_monodromy::monodromy::{
    compute_monodromy, derive_relations_numeric, derive_relations_symbolic, RelationSet,
};
use pencil_monodromy::pipeline::{run_pipeline, selftest, write_strand_csv, OutputFormat, RunConfig, Status};

#[derive(Parser)]
#[command(name = "pencil-monodromy", version, about = "Braid monodromy of linear torus curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    /// Comma-separated, distinct, positive, descending.
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    /// Root residual tolerance of the tracker.
    #[arg(long)]
    tol: Option<f64>,
    /// Segments per small circle.
    #[arg(long)]
    segments: Option<usize>,
    #[arg(long)]
    json: bool,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> RunConfig {
        let mut cfg = RunConfig::new(self.p, self.q);
        cfg.alphas = self.alphas.clone();
        if let Some(t) = self.tol {
            cfg.tracker.residual_tol = t;
        }
        if let Some(s) = self.segments {
            cfg.tracker.circle_pieces = s;
        }
        cfg.format = if self.json { OutputFormat::Json } else { OutputFormat::Table };
        cfg
    }

    fn sink(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(File::create(path)?),
            None => Box::new(io::stdout().lock()),
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Numeric,
    Symbolic,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Formula {
    Generic,
    Tame,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline report.
    Compute(Common),
    /// Run the pipeline and print only the verdicts.
    Verify(Common),
    /// Relators of the numeric or symbolic presentation.
    Relations {
        #[arg(value_enum)]
        source: Source,
        #[command(flatten)]
        common: Common,
    },
    /// Per-loop braid words.
    Braid {
        /// Dump strand positions along every loop as CSV instead.
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form Alexander polynomials.
    Alexander {
        #[arg(long, value_enum, default_value = "generic")]
        formula: Formula,
        #[command(flatten)]
        common: Common,
    },
    /// Pipeline over the standard curve types.
    Selftest {
        #[arg(long)]
        quick: bool,
        #[arg(long, hide = true)]
        inject_bad_order: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn braid_string(b: &BraidWord) -> String {
    if b.is_empty() {
        return "e".into();
    }
    b.letters()
        .iter()
        .map(|&l| if l > 0 { format!("s{l}") } else { format!("s{}^-1", -l) })
        .collect::<Vec<_>>()
        .join(" ")
}

fn relations_text(rs: &RelationSet) -> String {
    let pres = rs.presentation();
    let mut s = format!("generators: {}\n", pres.generators.join(" "));
    for r in &rs.relators {
        s.push_str(&format!("{:<16} {}\n", r.source, pres.word_to_string(&r.word)));
    }
    s
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Compute(c) => {
            let report = run_pipeline(&c.config())?;
            let mut out = c.sink()?;
            if c.json {
                writeln!(out, "{}", report.to_json()?)?;
            } else {
                write!(out, "{}", report.to_table())?;
            }
            Ok(report.passed())
        }
        Command::Verify(c) => {
            let report = run_pipeline(&c.config())?;
            let mut out = c.sink()?;
            if c.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report.verdicts)?)?;
            } else {
                for v in &report.verdicts {
                    let tag = match v.status {
                        Status::Pass => "PASS",
                        Status::Fail => "FAIL",
                        Status::Skipped => "SKIP",
                    };
                    writeln!(out, "{tag} {:<28} {}", v.name, v.reason)?;
                }
            }
            Ok(report.passed())
        }
        Command::Relations { source, common } => {
            let cfg = common.config();
            let spec = cfg.validate()?;
            let rs = match source {
                Source::Numeric => derive_relations_numeric(&compute_monodromy(&spec, &cfg.tracker)?),
                Source::Symbolic => derive_relations_symbolic(spec.p, spec.q),
            };
            let mut out = common.sink()?;
            if common.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&rs)?)?;
            } else {
                write!(out, "{}", relations_text(&rs))?;
            }
            Ok(true)
        }
        Command::Braid { csv, common } => {
            let cfg = common.config();
            let spec = cfg.validate()?;
            let mut out = common.sink()?;
            if csv {
                write_strand_csv(&spec, &cfg.tracker, &mut out)?;
                return Ok(true);
            }
            let m = compute_monodromy(&spec, &cfg.tracker)?;
            if common.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&m)?)?;
            } else {
                for (n, b) in m.braids.iter().enumerate() {
                    writeln!(
                        out,
                        "{n:>2} y={:+.6}{:+.6}i  {}",
                        b.value.y.re,
                        b.value.y.im,
                        braid_string(&b.braid)
                    )?;
                }
            }
            Ok(true)
        }
        Command::Alexander { formula, common } => {
            let cfg = common.config();
            let spec = cfg.validate()?;
            let generic = closed_form_generic_linear(spec.p, spec.q)?;
            let tame = closed_form_tame_maximal(spec.p, spec.q)?;
            let mut out = common.sink()?;
            if common.json {
                let v = match formula {
                    Formula::Generic => json!({ "generic_linear": generic }),
                    Formula::Tame => json!({ "tame_maximal": tame }),
                    Formula::Both => json!({ "generic_linear": generic, "tame_maximal": tame }),
                };
                writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
            } else {
                if formula != Formula::Tame {
                    writeln!(out, "generic-linear: {generic}")?;
                }
                if formula != Formula::Generic {
                    writeln!(out, "tame-maximal:   {tame}")?;
                }
            }
            Ok(true)
        }
        Command::Selftest {
            quick,
            inject_bad_order,
            json,
            out,
        } => {
            let report = selftest(quick, inject_bad_order)?;
            let mut sink: Box<dyn Write> = match &out {
                Some(path) => Box::new(File::create(path)?),
                None => Box::new(io::stdout().lock()),
            };
            if json {
                writeln!(sink, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                write!(sink, "{}", report.summary_table())?;
            }
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e.root(), Error::Invalid(_) | Error::DegenerateSpec(_)) { 2 } else { 3 })
        }
    }
}
