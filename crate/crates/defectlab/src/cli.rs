//! Command-line definitions and dispatch.

use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use defectlab_core::kummer::KummerValueData;
use defectlab_core::segcalc::InitialSegment;
use defectlab_core::OrderedGroup;

use crate::bundled::{self, BUNDLED};
use crate::error::{CliError, Result};
use crate::run::{exit_code, parse_conditions, render, run_kummer, run_spec, Format, Precision, RunConfig};
use crate::specfile::SpecFile;
use crate::{groupcalc, report::Report};

#[derive(Debug, Parser)]
#[command(name = "defectlab", version, about = "Ramification data of degree-p defect extensions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze an extension, an injected ramification jump, or Kummer value data.
    Classify {
        /// Path to a JSON spec.
        spec: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Evaluate a group/segment expression, e.g. `group lemma_sd Q ">0" 2`.
    Group {
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, required = true)]
        words: Vec<String>,
    },
    /// Check the Kummer-side conditions on value data.
    KummerCheck(KummerArgs),
    /// Bundled example specs.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExamplesAction {
    List,
    /// Run one bundled example, or `all`.
    Run {
        name: String,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Solver target: `p^-E` or a positive rational.
    #[arg(long, default_value = "p^-10")]
    pub precision: String,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
    /// Conditions to list, e.g. `bcd`.
    #[arg(long)]
    pub conditions: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct KummerArgs {
    /// JSON value-data file; otherwise give --p, --group and a distance.
    pub file: Option<String>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long, default_value = "1")]
    pub vp: String,
    #[arg(long, default_value = "Q")]
    pub group: String,
    /// `v(η − K)` as an initial-segment literal.
    #[arg(long, allow_hyphen_values = true)]
    pub distance: Option<String>,
    /// `v(a − K^p)`, as a segment of `pΓ`.
    #[arg(long, allow_hyphen_values = true)]
    pub a_distance: Option<String>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
    #[arg(long)]
    pub conditions: Option<String>,
}

impl RunArgs {
    pub fn config(&self) -> Result<RunConfig> {
        Ok(RunConfig {
            precision: Precision::parse(&self.precision)?,
            samples: self.samples,
            seed: self.seed,
            format: self.format.into(),
            conditions: self.conditions.as_deref().map(parse_conditions).transpose()?,
        })
    }
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

/// What a command printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn report(report: &Report, format: Format) -> Outcome {
        let code = exit_code(report);
        let stderr = match code {
            1 => "incoherent report: the computed characterizations disagree\n".into(),
            2 => "inconclusive: the distance cut did not stabilize within precision\n".into(),
            _ => String::new(),
        };
        Outcome {
            stdout: render(report, format),
            stderr,
            code,
        }
    }

    fn text(s: String) -> Outcome {
        Outcome {
            stdout: s,
            stderr: String::new(),
            code: 0,
        }
    }

    fn error(e: &CliError) -> Outcome {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: 1,
        }
    }
}

fn kummer_data(a: &KummerArgs) -> Result<(KummerValueData, Option<String>)> {
    if let Some(path) = &a.file {
        return match SpecFile::read(path)? {
            SpecFile::Kummer(f) => Ok((f.build()?, f.name.clone())),
            _ => Err(CliError::Spec {
                origin: path.clone(),
                message: "not a Kummer value-data file".into(),
            }),
        };
    }
    let p = a.p.ok_or_else(|| CliError::Option("give a file or --p".into()))?;
    let group = Arc::new(OrderedGroup::parse_shorthand(&a.group)?);
    let vp = group.parse_element(&a.vp)?;
    let data = match (&a.distance, &a.a_distance) {
        (Some(d), None) => KummerValueData::new(p, group.clone(), vp, InitialSegment::parse(d, group)?)?,
        (None, Some(s)) => {
            let pg = Arc::new(group.scaled(&defectlab_core::rational::qi(i64::from(p))));
            KummerValueData::from_a_distance(p, group, vp, &InitialSegment::parse(s, pg)?)?
        }
        _ => return Err(CliError::Option("give exactly one of --distance and --a-distance".into())),
    };
    Ok((data, None))
}

fn run_all(cfg: &RunConfig) -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut code = 0;
    for (name, text) in BUNDLED {
        let spec = SpecFile::parse(text, name)?;
        let r = run_spec(&spec, cfg)?;
        code = code.max(exit_code(&r));
        reports.push(r);
    }
    let stdout = match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&reports).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => reports
            .iter()
            .map(|r| render(r, Format::Text))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok(Outcome {
        stdout,
        stderr: String::new(),
        code,
    })
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Classify { spec, run } => {
            let cfg = run.config()?;
            let spec = SpecFile::read(spec)?;
            Ok(Outcome::report(&run_spec(&spec, &cfg)?, cfg.format))
        }
        Command::Group { words } => Ok(Outcome::text(format!("{}\n", groupcalc::evaluate(words)?))),
        Command::KummerCheck(a) => {
            let cfg = RunConfig {
                format: a.format.into(),
                conditions: a.conditions.as_deref().map(parse_conditions).transpose()?,
                ..RunConfig::default()
            };
            let (data, name) = kummer_data(a)?;
            Ok(Outcome::report(&run_kummer(&data, name, &cfg)?, cfg.format))
        }
        Command::Examples { action } => match action {
            ExamplesAction::List => {
                let mut out = String::new();
                for (name, text) in BUNDLED {
                    let spec = SpecFile::parse(text, name)?;
                    out.push_str(&format!("{name:<30} {}\n", spec.description().unwrap_or("")));
                }
                Ok(Outcome::text(out))
            }
            ExamplesAction::Run { name, run } => {
                let cfg = run.config()?;
                if name == "all" {
                    return run_all(&cfg);
                }
                let text = bundled::find(name).ok_or_else(|| CliError::UnknownExample(name.clone()))?;
                let spec = SpecFile::parse(text, name)?;
                Ok(Outcome::report(&run_spec(&spec, &cfg)?, cfg.format))
            }
        },
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    dispatch(cli).unwrap_or_else(|e| Outcome::error(&e))
}
