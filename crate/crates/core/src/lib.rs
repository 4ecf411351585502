//! Twisted affine Kac-Moody S-matrices, twisted fusion rings and the crossed
//! Verlinde formula for ranks of twisted conformal blocks.
//!
//! ```
//! use tvf_core::{crossed_smatrix, DiagramAutomorphism, FiniteType};
//!
//! let a3: FiniteType = "A3".parse().unwrap();
//! let flip = DiagramAutomorphism::standard(a3, 2).unwrap();
//! let s = crossed_smatrix(a3, &flip, 1).unwrap();
//! assert_eq!(s.dim(), (2, 2));
//! assert!((s.get(1, 1).re + 0.5f64.sqrt()).abs() < 1e-12);
//! ```

pub mod error;
pub mod fusion;
pub mod io;
pub mod lie;
mod linalg;
pub mod smatrix;
pub mod suites;
pub mod twisted;
pub mod verlinde;

pub use error::{Error, Result};
pub use fusion::{
    nearest_lattice_point, twisted_fusion, untwisted_fusion, verify_frobenius, FrobeniusReport,
    FusionTable, Lattice, LatticePoint, RingTag,
};
pub use lie::{
    gram_data, longest_element_dual, weyl_group, weyl_group_with_cap, weyl_vector, FiniteType,
    GramData, Series, Weight, WeylElement, WeylGroup,
};
pub use smatrix::{
    crossed_smatrix, denominator_phase, row_phase, twisted_km_smatrix,
    twisted_km_smatrix_via_transpose, untwisted_smatrix, FormulaTag, NormalizationConstant,
    SMatrixMeta, SMatrixTable,
};
pub use twisted::{
    dual_weight, enumerate_twisted_level_weights, enumerate_untwisted_level_weights, fixed_weights,
    iota, DiagramAutomorphism, TwistedAffineType, WeightList,
};
pub use verlinde::{
    parse_cover_spec, rank, verify_factorization, verify_propagation, CoverSpec, CoverSpecDoc,
    Degeneration, Evaluator, RankResult,
};
