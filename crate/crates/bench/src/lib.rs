//! Shared setup for the benchmarks.

use polyatlas_core::engine::FiniteGroup;
use polyatlas_core::gf::{factor_prime_power, make_field};
use polyatlas_core::projgroups::{build_group, GroupBuild, GroupKind, ProjLine};

pub const CAP: usize = 1 << 20;

pub fn builder(kind: GroupKind, q: u64) -> GroupBuild {
    let (p, r) = factor_prime_power(q).unwrap();
    let line = ProjLine::new(make_field(p, r).unwrap());
    build_group(&line, kind).unwrap()
}

pub fn closed(kind: GroupKind, q: u64) -> FiniteGroup {
    builder(kind, q).close(CAP).unwrap()
}
