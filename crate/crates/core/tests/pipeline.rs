use std::sync::Arc;

use defectlab_core::analysis::{analyze_cut, classify_defect, Analysis, AnalysisConfig};
use defectlab_core::hahn::BaseFieldKind;
use defectlab_core::rational::{q, qpow, qi};
use defectlab_core::{AsExtensionSpec, BaseFieldSpec, FinalSegment, HahnSeries, OrderedGroup, Q, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn run(base: BaseFieldSpec, rhs: &str, samples: usize) -> Box<defectlab_core::DefectReport> {
    let p = base.p;
    let spec = AsExtensionSpec::new(base, HahnSeries::parse(rhs, p).unwrap()).unwrap();
    let cfg = AnalysisConfig {
        samples,
        ..AnalysisConfig::standard(p)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    match classify_defect(&spec, &cfg, &mut rng).unwrap() {
        Analysis::Report(r) => r,
        Analysis::Inconclusive { lo, hi, .. } => panic!("inconclusive in ({lo}, {hi}]"),
    }
}

#[test]
fn abhyankar_all_primes() {
    for p in [2u32, 3, 5] {
        let r = run(BaseFieldSpec::perfect_hull_rational(p).unwrap(), "t^-1", 100);
        assert!(r.coherent(), "p={p}");
        assert_eq!(r.sigma_e.to_string(), ">0");
        assert_eq!(r.verdict, Verdict::Independent(r.group.trivial_subgroup()));
        let f = r.field.as_ref().unwrap();
        for (n, v) in f.distance_values.iter().enumerate() {
            assert_eq!(*v, -qpow(&qi(i64::from(p)), -(n as i64 + 1)), "p={p} N={n}");
        }
        assert!(f.residual_law);
        assert!(f.bracket_width <= qpow(&qi(i64::from(p)), -8));
        assert!(f.trace.tested >= 100);
    }
}

#[test]
fn laurent_and_hahn_bases() {
    let r = run(
        BaseFieldSpec::new(2, BaseFieldKind::PerfectHullLaurent).unwrap(),
        "t^-3 + t^5",
        30,
    );
    assert!(r.coherent());
    assert!(r.verdict.is_independent());
    let g = OrderedGroup::parse_shorthand("Q").unwrap();
    let r = run(BaseFieldSpec::new(3, BaseFieldKind::TruncatedHahn(g)).unwrap(), "t^-1", 30);
    assert!(r.coherent());
    assert_eq!(r.sigma_e.to_string(), ">0");
}

#[test]
fn shifted_rhs_keeps_cut() {
    // a = t^-3 + t^-1: the t^-3 term is absorbed at the first step
    let r = run(BaseFieldSpec::perfect_hull_rational(3).unwrap(), "t^-3 + t^-1", 30);
    assert!(r.coherent());
    assert_eq!(r.field.as_ref().unwrap().distance_values[0], qi(-1));
    assert_eq!(r.field.as_ref().unwrap().beta, Q::from(num_bigint::BigInt::from(0)));
}

#[test]
fn injected_segments() {
    let cases = [
        ("Q", ">=1", 2, false),
        ("Q", ">1/3", 3, false),
        ("Q", ">0", 5, true),
        ("Z", ">=1", 2, false),
        ("Z[1/2]", ">0", 2, true),
        ("QxZ", ">H1", 2, true),
        ("QxZ", ">0", 3, false),
        ("QxZ[1/2]", ">(0,1)", 2, false),
        ("QxZ[1/2]", ">0", 2, true),
    ];
    for (g, s, p, indep) in cases {
        let g = Arc::new(OrderedGroup::parse_shorthand(g).unwrap());
        let r = analyze_cut(&FinalSegment::parse(s, g).unwrap(), p).unwrap();
        assert!(r.coherent(), "{s}");
        assert_eq!(r.verdict.is_independent(), indep, "{s}");
        assert_eq!(r.ledger.omega_zero, indep, "{s}");
    }
}

#[test]
fn trace_ideal_scales() {
    let g = Arc::new(OrderedGroup::rationals());
    let r = analyze_cut(&FinalSegment::parse(">=1", g).unwrap(), 3).unwrap();
    assert_eq!(r.trace_ideal.segment().to_string(), ">=2");
    assert_eq!(r.omega.uv.segment().to_string(), ">=3");
    let _ = q(1, 2);
}
