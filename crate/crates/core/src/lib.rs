//! Projective-line permutation groups, their subgroup censuses, and the
//! enumeration of regular-polytope generator tuples (string C-groups).
//!
//! The crate is organized bottom-up:
//!
//! - [`gf`]: deterministic GF(p^r) arithmetic in a polynomial basis;
//! - [`projgroups`]: the projective line PG(1,q) and generator sets for
//!   the special/general linear groups and their semilinear extensions;
//! - [`engine`]: a generic finite permutation-group engine (closure with
//!   stable element ids, conjugacy, centralizers, the full subgroup
//!   lattice at small orders, structural classification);
//! - [`cgsearch`]: exhaustive, pruned enumeration of string C-group
//!   generator tuples with canonical-form deduplication;
//! - [`census`]: closed-form subgroup counts checked against the
//!   brute-force lattice.

pub mod census;
pub mod cgsearch;
pub mod engine;
pub mod error;
pub mod gf;
pub mod perm;
pub mod projgroups;

pub use census::{CensusReport, CensusRow, Scope};
pub use cgsearch::{
    enumerate_polytopes, Enumeration, GeneratorTuple, PolytopeRecord, SchlafliType,
};
pub use engine::{classify_subgroup, ElementId, FiniteGroup, IsoType, SubgroupSet};
pub use error::{Error, Result};
pub use gf::{make_field, FieldElement, FieldSpec};
pub use perm::Perm;
pub use projgroups::{
    build_group, mobius_perm, semilinear_perm, verify_sharp_3_transitivity, GroupBuild, GroupKind,
    ProjLine,
};
