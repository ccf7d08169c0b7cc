//! Run configuration and the spec-to-report pipeline.

use std::collections::BTreeSet;

use defectlab_core::analysis::{analyze_cut, classify_defect, Analysis, AnalysisConfig};
use defectlab_core::kummer::{check_kummer_conditions, KummerValueData};
use defectlab_core::rational::parse_rational;
use defectlab_core::{SolverConfig, Q};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};
use crate::report::{defect_json, inconclusive_json, kummer_json, render_text, Report};
use crate::specfile::SpecFile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Precision {
    /// `p^{-e}`.
    PPower(u32),
    Rational(Q),
}

impl Precision {
    /// Accepts `p^-10` or a positive rational such as `1/1024`.
    pub fn parse(text: &str) -> Result<Precision> {
        let t = text.trim();
        if let Some(e) = t.strip_prefix("p^-") {
            let e: u32 = e
                .parse()
                .map_err(|_| CliError::Option(format!("bad precision exponent in {t:?}")))?;
            if e == 0 {
                return Err(CliError::Option("precision must be below 1".into()));
            }
            return Ok(Precision::PPower(e));
        }
        let q = parse_rational(t).map_err(|_| CliError::Option(format!("bad precision {t:?}")))?;
        if q <= Q::from_integer(0.into()) {
            return Err(CliError::Option("precision must be positive".into()));
        }
        Ok(Precision::Rational(q))
    }

    pub fn solver(&self, p: u32) -> SolverConfig {
        match self {
            Precision::PPower(e) => SolverConfig::p_power(p, *e),
            Precision::Rational(q) => SolverConfig {
                target: q.clone(),
                ..SolverConfig::p_power(p, 1)
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub precision: Precision,
    pub samples: usize,
    pub seed: u64,
    pub format: Format,
    /// Condition letters to list; all when `None`.
    pub conditions: Option<BTreeSet<char>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: Precision::PPower(10),
            samples: 200,
            seed: 1,
            format: Format::Json,
            conditions: None,
        }
    }
}

pub fn parse_conditions(text: &str) -> Result<BTreeSet<char>> {
    let set: BTreeSet<char> = text.chars().filter(|c| !matches!(c, ',' | ' ')).collect();
    if let Some(c) = set.iter().find(|c| !('b'..='g').contains(*c)) {
        return Err(CliError::Option(format!("unknown condition {c:?}; use letters b to g")));
    }
    Ok(set)
}

pub fn run_kummer(data: &KummerValueData, name: Option<String>, cfg: &RunConfig) -> Result<Report> {
    let r = check_kummer_conditions(data)?;
    Ok(Report::Kummer(Box::new(kummer_json(data, &r, name, cfg.conditions.as_ref())?)))
}

pub fn run_spec(spec: &SpecFile, cfg: &RunConfig) -> Result<Report> {
    let name = spec.name().map(String::from);
    let sel = cfg.conditions.as_ref();
    match spec {
        SpecFile::Extension(f) => {
            let ext = f.build()?;
            let acfg = AnalysisConfig {
                solver: cfg.precision.solver(f.p),
                samples: cfg.samples,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            match classify_defect(&ext, &acfg, &mut rng)? {
                Analysis::Report(r) => Ok(Report::Defect(Box::new(defect_json(&r, name, sel)))),
                Analysis::Inconclusive { lo, hi, distance_values } => Ok(Report::Inconclusive(
                    inconclusive_json(name, f.p, &lo, &hi, &distance_values),
                )),
            }
        }
        SpecFile::Cut(f) => {
            let r = analyze_cut(&f.build()?, f.p)?;
            Ok(Report::Defect(Box::new(defect_json(&r, name, sel))))
        }
        SpecFile::Kummer(f) => run_kummer(&f.build()?, name, cfg),
    }
}

pub fn render(report: &Report, format: Format) -> String {
    let value = serde_json::to_value(report).expect("reports serialize");
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => render_text(&value),
    }
}

/// 0 for a coherent report, 2 for an inconclusive cut, 1 otherwise.
pub fn exit_code(report: &Report) -> i32 {
    if report.is_inconclusive() {
        2
    } else if report.coherent() {
        0
    } else {
        1
    }
}
