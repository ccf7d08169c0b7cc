//! Exact computations around degree-`p` defect extensions of valued fields:
//! lexicographic value groups, cuts and valuation ideals, truncated Hahn
//! series over `F_p`, Artin-Schreier root approximation, ramification data,
//! Kähler differential presentations and traces.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod asext;
pub mod conditions;
pub mod error;
pub mod extension;
pub mod hahn;
pub mod kahler;
pub mod kummer;
pub mod ogroup;
pub mod rational;
pub mod segcalc;
pub mod trace;

pub use error::{Error, Result};
pub use hahn::{BaseFieldKind, BaseFieldSpec, HahnSeries, Valuation};
pub use ogroup::{ConvexSubgroup, Divisibility, GroupElement, OrderedGroup, Slot};
pub use rational::Q;
pub use segcalc::{lemma_sd_classify, upward_closure, FinalSegment, IdealDesc, InitialSegment, LemmaSd, PointSet};
pub use analysis::{analyze_cut, classify_defect, Analysis, AnalysisConfig, DefectReport};
pub use asext::{AsExtensionSpec, SolverConfig};
pub use conditions::Verdict;
