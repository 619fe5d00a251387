//! Enumeration results on the projective-line groups at desk scale.

use polyatlas_core::cgsearch::{enumerate_polytopes, verify_record, Enumeration};
use polyatlas_core::engine::FiniteGroup;
use polyatlas_core::gf::make_field;
use polyatlas_core::projgroups::{build_group, GroupKind, ProjLine};

const CAP: usize = 1 << 20;

fn group_and_dedup(q: u64, kind: GroupKind) -> (FiniteGroup, FiniteGroup) {
    let (p, r) = polyatlas_core::gf::factor_prime_power(q).unwrap();
    let line = ProjLine::new(make_field(p, r).unwrap());
    let g = build_group(&line, kind).unwrap().close(CAP).unwrap();
    let dedup = build_group(&line, GroupKind::PGammaL)
        .unwrap()
        .close(CAP)
        .unwrap();
    (g, dedup)
}

fn run(q: u64, kind: GroupKind, rank: u32) -> Enumeration {
    let (g, dedup) = group_and_dedup(q, kind);
    let e = enumerate_polytopes(&g, &dedup, rank, 0).unwrap();
    for r in &e.records {
        assert!(verify_record(&g, r), "record failed re-verification");
    }
    e
}

#[test]
fn pgl5_rank4_is_exactly_the_simplex() {
    let e = run(5, GroupKind::Pgl, 4);
    assert_eq!(e.iso_count(), 1);
    assert_eq!(e.iso_dual_count(), 1);
    let rec = &e.records[0];
    assert_eq!(rec.schlafli.entries(), &[3, 3, 3]);
    assert!(rec.self_dual);
    assert!(!rec.degenerate);
}

#[test]
fn pgl7_and_pgl9_have_no_rank4_polytopes() {
    assert_eq!(run(7, GroupKind::Pgl, 4).iso_count(), 0);
    assert_eq!(run(9, GroupKind::Pgl, 4).iso_count(), 0);
}

#[test]
fn pgl_rank5_is_empty_for_small_q() {
    for q in [5, 7, 9] {
        assert_eq!(run(q, GroupKind::Pgl, 5).iso_count(), 0, "q = {q}");
    }
}

#[test]
fn l2_11_rank4_contains_the_hendecachoron() {
    // the 11-cell of type {3,5,3}
    let e = run(11, GroupKind::Psl, 4);
    assert!(e.records.iter().any(|r| r.schlafli.entries() == [3, 5, 3]));
}

#[test]
fn rank3_nonempty_for_pgl_q_3_through_9() {
    for q in [3, 4, 5, 7, 8, 9] {
        let e = run(q, GroupKind::Pgl, 3);
        assert!(e.iso_count() > 0, "pgl q={q} should admit polyhedra");
        assert!(
            e.records.iter().all(|r| !r.degenerate),
            "no degenerate records expected for simple-ish groups"
        );
    }
}

#[test]
fn rank3_empty_for_psl_7_and_9() {
    assert_eq!(run(7, GroupKind::Psl, 3).iso_count(), 0);
    assert_eq!(run(9, GroupKind::Psl, 3).iso_count(), 0);
}

#[test]
fn psigmal9_has_rank4_and_rank5_polytopes() {
    assert!(run(9, GroupKind::PSigmaL, 4).iso_count() > 0);
    assert!(run(9, GroupKind::PSigmaL, 5).iso_count() > 0);
}

#[test]
fn rank4_ends_are_odd_for_pgl_kinds() {
    for q in [5, 7, 9, 11, 13] {
        let e = run(q, GroupKind::Pgl, 4);
        for r in &e.records {
            let entries = r.schlafli.entries();
            assert_eq!(entries[0] % 2, 1);
            assert_eq!(entries[2] % 2, 1);
        }
    }
}

/// Independent oracle for the whole pipeline: enumerate rank-3 tuples with
/// no pruning and no precomputed tables, dedup by explicit orbit expansion,
/// and compare against the pruned search.
#[test]
fn pruned_search_agrees_with_unpruned_scan() {
    let (g, dedup) = group_and_dedup(5, GroupKind::Pgl);
    let inv = g.involutions();

    let mut survivors: Vec<Vec<polyatlas_core::ElementId>> = Vec::new();
    for &a in &inv {
        for &b in &inv {
            for &c in &inv {
                let t = polyatlas_core::GeneratorTuple::new(vec![a, b, c]);
                if !polyatlas_core::cgsearch::string_condition(&g, &t) {
                    continue;
                }
                if !g.subgroup_closure(t.ids()).is_whole() {
                    continue;
                }
                if polyatlas_core::cgsearch::intersection_property(&g, &t) {
                    survivors.push(t.ids().to_vec());
                }
            }
        }
    }

    // orbit counting by direct conjugation with every dedup element
    let mut seen: std::collections::HashSet<Vec<polyatlas_core::ElementId>> =
        std::collections::HashSet::new();
    let mut orbits = 0;
    let mut symbols: Vec<Vec<u64>> = Vec::new();
    for t in &survivors {
        if seen.contains(t) {
            continue;
        }
        orbits += 1;
        symbols.push(
            polyatlas_core::cgsearch::schlafli_type(
                &g,
                &polyatlas_core::GeneratorTuple::new(t.clone()),
            )
            .entries()
            .to_vec(),
        );
        for x in dedup.ids() {
            let xp = dedup.perm(x);
            let conj: Vec<_> = t
                .iter()
                .map(|&id| {
                    let image = xp.inverse().compose(&g.perm(id).compose(xp));
                    g.id_of(&image).unwrap()
                })
                .collect();
            seen.insert(conj);
        }
    }
    symbols.sort();

    let e = run(5, GroupKind::Pgl, 3);
    let mut expected: Vec<Vec<u64>> = e
        .records
        .iter()
        .map(|r| r.schlafli.entries().to_vec())
        .collect();
    expected.sort();
    assert_eq!(orbits, e.iso_count());
    assert_eq!(symbols, expected);
}

#[test]
fn worker_count_does_not_change_results() {
    let (g, dedup) = group_and_dedup(5, GroupKind::Pgl);
    let base = enumerate_polytopes(&g, &dedup, 3, 0).unwrap();
    for threads in [1, 3] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let alt = pool
            .install(|| enumerate_polytopes(&g, &dedup, 3, 7 * threads as u64))
            .unwrap();
        assert_eq!(alt.records.len(), base.records.len());
        for (a, b) in alt.records.iter().zip(&base.records) {
            assert_eq!(a.tuple, b.tuple);
            assert_eq!(a.schlafli, b.schlafli);
            assert_eq!(a.orbit_size, b.orbit_size);
            assert_eq!(a.self_dual, b.self_dual);
            assert_eq!(a.dual_canonical, b.dual_canonical);
        }
    }
}

#[test]
fn psigmal25_rank4_atlas() {
    let e = run(25, GroupKind::PSigmaL, 4);
    let mut symbols: Vec<Vec<u64>> = e
        .iso_dual_records()
        .iter()
        .map(|r| r.schlafli.normalized().entries().to_vec())
        .collect();
    symbols.sort();
    let expected: Vec<Vec<u64>> = vec![
        vec![3, 3, 6],
        vec![3, 4, 5],
        vec![3, 5, 3],
        vec![3, 6, 3],
        vec![3, 6, 4],
        vec![3, 6, 5],
        vec![3, 6, 6],
        vec![4, 3, 5],
        vec![4, 3, 6],
        vec![4, 5, 4],
        vec![4, 5, 5],
        vec![4, 6, 4],
        vec![5, 3, 6],
        vec![5, 4, 5],
        vec![5, 5, 6],
        vec![5, 6, 5],
        vec![6, 4, 6],
    ];
    assert_eq!(symbols, expected);
    assert_eq!(e.iso_dual_count(), 17);
}
