//! Combinatorics of the extended affine Weyl group of `GSp_2g` for comparing
//! Ekedahl-Oort and Kottwitz-Rapoport strata: signed permutations, Bruhat
//! order, the admissible set `Adm(μ)`, parahoric double cosets, final
//! elements and canonical filtration types.

pub mod admissible;
pub mod affine;
pub mod error;
pub mod index_set;
pub mod strata;
pub mod suites;
pub mod weyl;

pub use admissible::{adm_elements, enumerate_adm, AdmBlock, AdmSet, ParahoricType};
pub use affine::{bruhat_leq, BruhatSession, CoweightSim, ExtElement, ReducedWord};
pub use error::{Error, Result};
pub use index_set::IndexSet;
pub use strata::{
    canonical_type, classify_stratum, eo_kr_match, es_from_final, final_from_es, ElementarySequence, FinalType,
    StratumReport, SuperspecialLabels,
};
pub use suites::{run_suite, Suite, SuiteReport};
pub use weyl::{make_context, GroupContext, Root, Side, SignedPermutation, MAX_RANK};
