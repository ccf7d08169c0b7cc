//! A small command language over value groups and segments.
//!
//! ```text
//! upclose 1 1/2 1/4 over Z[1/2]      -> >=1/4
//! scale_up 2 ">=1" over Z            -> >=2
//! negate ">0"                        -> <0
//! shift (1,0) ">H1" over QxZ         -> >(1)+H1
//! sum ">=1" ">1/2"                   -> >3/2
//! power ">=1" 3                      -> >=3
//! idempotent ">0" 2                  -> true
//! lemma_sd Q ">0" 2                  -> matches Δ={0}
//! is_prime ">H1" over QxZ            -> prime, H=H1
//! strongly_convex 2 over QxZ         -> false
//! component (0,3) over QxZ           -> C=H1 C+={0} slot=Z
//! drvg over Z[1/3]                   -> true
//! ```
//!
//! The group defaults to `Q`.

use std::sync::Arc;

use defectlab_core::segcalc::{lemma_sd_classify, upward_closure, InitialSegment, LemmaSd, PointSet};
use defectlab_core::{FinalSegment, IdealDesc, OrderedGroup};

use crate::error::{CliError, Result};

fn err(msg: impl Into<String>) -> CliError {
    CliError::Expression(msg.into())
}

enum Segment {
    Final(FinalSegment),
    Initial(InitialSegment),
}

fn segment(text: &str, g: &Arc<OrderedGroup>) -> Result<Segment> {
    let t = text.trim();
    if t.starts_with('<') {
        Ok(Segment::Initial(InitialSegment::parse(t, g.clone())?))
    } else {
        Ok(Segment::Final(FinalSegment::parse(t, g.clone())?))
    }
}

fn final_segment(text: &str, g: &Arc<OrderedGroup>) -> Result<FinalSegment> {
    match segment(text, g)? {
        Segment::Final(s) => Ok(s),
        Segment::Initial(_) => Err(err(format!("{text:?} is an initial segment; a final one is needed"))),
    }
}

fn integer(text: &str) -> Result<u64> {
    text.trim()
        .parse()
        .map_err(|_| err(format!("expected a positive integer, got {text:?}")))
}

fn arity(cmd: &str, args: &[String], n: usize) -> Result<()> {
    if args.len() != n {
        return Err(err(format!("{cmd} takes {n} argument(s), got {}", args.len())));
    }
    Ok(())
}

/// Evaluates one command given as separate words.
pub fn evaluate(words: &[String]) -> Result<String> {
    let (cmd, rest) = words.split_first().ok_or_else(|| err("empty expression"))?;
    let mut args: Vec<String> = rest.to_vec();
    let mut group_text = "Q".to_string();
    if let Some(i) = args.iter().position(|w| w == "over") {
        if i + 2 != args.len() {
            return Err(err("`over` must be followed by exactly one group at the end"));
        }
        group_text = args[i + 1].clone();
        args.truncate(i);
    }
    if cmd == "lemma_sd" && args.len() == 3 {
        group_text = args.remove(0);
    }
    let g = Arc::new(OrderedGroup::parse_shorthand(&group_text)?);
    let out = match cmd.as_str() {
        "upclose" => {
            let points = args
                .iter()
                .map(|a| g.parse_element(a))
                .collect::<defectlab_core::Result<Vec<_>>>()?;
            upward_closure(&g, &PointSet::Finite(points))?.to_string()
        }
        "scale_up" | "scale" => {
            arity(cmd, &args, 2)?;
            let n = integer(&args[0])?;
            upward_closure(&g, &PointSet::Scaled(n, final_segment(&args[1], &g)?))?.to_string()
        }
        "negate" => {
            arity(cmd, &args, 1)?;
            match segment(&args[0], &g)? {
                Segment::Final(s) => s.negate().to_string(),
                Segment::Initial(s) => s.negate().to_string(),
            }
        }
        "shift" => {
            arity(cmd, &args, 2)?;
            let x = g.parse_element(&args[0])?;
            match segment(&args[1], &g)? {
                Segment::Final(s) => upward_closure(&g, &PointSet::Shifted(x, s))?.to_string(),
                Segment::Initial(s) => s.shift(&x)?.to_string(),
            }
        }
        "sum" => {
            arity(cmd, &args, 2)?;
            final_segment(&args[0], &g)?.sum(&final_segment(&args[1], &g)?)?.to_string()
        }
        "power" => {
            arity(cmd, &args, 2)?;
            let ideal = IdealDesc::new(final_segment(&args[0], &g)?)?;
            ideal.power(integer(&args[1])?)?.segment().to_string()
        }
        "idempotent" => {
            arity(cmd, &args, 2)?;
            let ideal = IdealDesc::new(final_segment(&args[0], &g)?)?;
            ideal.is_idempotent(integer(&args[1])?)?.to_string()
        }
        "lemma_sd" => {
            arity(cmd, &args, 2)?;
            match lemma_sd_classify(&final_segment(&args[0], &g)?, integer(&args[1])?)? {
                LemmaSd::Matches(h) => format!("matches Δ={}", g.describe_subgroup(h)),
                LemmaSd::Fails => "fails".into(),
            }
        }
        "is_prime" => {
            arity(cmd, &args, 1)?;
            let ideal = IdealDesc::new(final_segment(&args[0], &g)?)?;
            match ideal.is_prime() {
                Some(h) => format!("prime, H={}", g.describe_subgroup(h)),
                None => "not prime".into(),
            }
        }
        "strongly_convex" => {
            arity(cmd, &args, 1)?;
            let j = integer(&args[0])? as usize;
            if j > g.rank() {
                return Err(err(format!("H{j} does not exist in a rank-{} group", g.rank())));
            }
            g.is_strongly_convex(g.subgroup(j)?)?.to_string()
        }
        "component" => {
            arity(cmd, &args, 1)?;
            let x = g.parse_element(&args[0])?;
            let c = g.archimedean_component(&x)?;
            format!(
                "C={} C+={} slot={}",
                g.describe_subgroup(c.smallest_containing),
                g.describe_subgroup(c.largest_excluding),
                c.slot
            )
        }
        "drvg" => {
            arity(cmd, &args, 0)?;
            g.satisfies_drvg().to_string()
        }
        other => return Err(err(format!("unknown command {other:?}"))),
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(s: &[&str]) -> String {
        evaluate(&s.iter().map(|w| w.to_string()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn documented_commands() {
        assert_eq!(run(&["lemma_sd", "Q", ">0", "2"]), "matches Δ={0}");
        assert_eq!(run(&["scale_up", "2", ">=1", "over", "Z"]), ">=2");
        assert_eq!(run(&["negate", ">0"]), "<0");
        assert_eq!(run(&["negate", "<0"]), ">0");
        assert_eq!(run(&["upclose", "1", "1/2", "1/4", "over", "Z[1/2]"]), ">=1/4");
        assert_eq!(run(&["power", ">=1", "3"]), ">=3");
        assert_eq!(run(&["idempotent", ">0", "2"]), "true");
        assert_eq!(run(&["lemma_sd", ">=1", "2"]), "fails");
        assert_eq!(run(&["is_prime", ">H1", "over", "QxZ"]), "prime, H=H1");
        assert_eq!(run(&["strongly_convex", "2", "over", "QxZ"]), "false");
        assert_eq!(run(&["component", "(0,3)", "over", "QxZ"]), "C=H1 C+={0} slot=Z");
        assert_eq!(run(&["drvg", "over", "Z[1/3]"]), "true");
    }

    #[test]
    fn errors() {
        let bad = |s: &[&str]| evaluate(&s.iter().map(|w| w.to_string()).collect::<Vec<_>>()).is_err();
        assert!(bad(&[]));
        assert!(bad(&["frobnicate"]));
        assert!(bad(&["negate"]));
        assert!(bad(&["power", "<1", "2"]));
        assert!(bad(&["scale_up", "x", ">0"]));
    }
}
