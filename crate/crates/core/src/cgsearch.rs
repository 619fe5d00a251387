//! Exhaustive enumeration of string C-group generator tuples.
//!
//! A rank-n tuple (rho_0, ..., rho_{n-1}) of pairwise distinct involutions
//! is kept when non-adjacent generators commute, the tuple generates the
//! whole group, and the intersection property holds. Survivors are then
//! identified up to conjugation by a deduplication group (normally the full
//! semilinear closure, which realizes every automorphism for these groups),
//! and optionally under tuple reversal (duality).
//!
//! The search tree is partitioned at the (rho_0-class, rho_{n-1}) level and
//! the partitions run in parallel; results are sorted after the merge, so
//! the output is identical for any worker count or partition order.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{ElementId, FiniteGroup, RightRows, SubgroupSet};
use crate::error::{Error, Result};

/// Ceiling on involution-pool size times group order for a search (the
/// precomputed multiplication rows grow with this product).
pub const MAX_SEARCH_CELLS: u64 = 1 << 31;

/// An ordered tuple of generator ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorTuple {
    ids: Vec<ElementId>,
}

impl GeneratorTuple {
    pub fn new(ids: Vec<ElementId>) -> GeneratorTuple {
        GeneratorTuple { ids }
    }

    pub fn rank(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[ElementId] {
        &self.ids
    }

    pub fn reversed(&self) -> GeneratorTuple {
        let mut ids = self.ids.clone();
        ids.reverse();
        GeneratorTuple { ids }
    }
}

/// Orders of the adjacent generator products.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SchlafliType {
    entries: Vec<u64>,
}

impl SchlafliType {
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Some entry equals 2, which forces a direct-product group.
    pub fn is_degenerate(&self) -> bool {
        self.entries.contains(&2)
    }

    /// The lexicographic minimum of the symbol and its reversal.
    pub fn normalized(&self) -> SchlafliType {
        let mut rev = self.entries.clone();
        rev.reverse();
        SchlafliType {
            entries: self.entries.clone().min(rev),
        }
    }

    pub fn reversed(&self) -> SchlafliType {
        let mut rev = self.entries.clone();
        rev.reverse();
        SchlafliType { entries: rev }
    }
}

impl std::fmt::Display for SchlafliType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let inner: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", inner.join(","))
    }
}

/// One polytope up to the deduplication action: the canonical generator
/// tuple of its orbit plus derived metadata.
#[derive(Debug, Clone)]
pub struct PolytopeRecord {
    pub tuple: GeneratorTuple,
    pub schlafli: SchlafliType,
    pub group_order: u64,
    pub orbit_size: u64,
    pub self_dual: bool,
    pub degenerate: bool,
    /// Canonical form of the orbit-union-reversed-orbit; the record is the
    /// duality-class representative iff this equals its own tuple.
    pub dual_canonical: GeneratorTuple,
}

impl PolytopeRecord {
    pub fn is_duality_representative(&self) -> bool {
        self.tuple == self.dual_canonical
    }
}

/// Result of an enumeration: records up to isomorphism, sorted by
/// (Schlafli symbol, canonical tuple).
#[derive(Debug)]
pub struct Enumeration {
    pub rank: u32,
    pub group_order: u64,
    pub records: Vec<PolytopeRecord>,
}

impl Enumeration {
    pub fn iso_count(&self) -> usize {
        self.records.len()
    }

    pub fn iso_dual_records(&self) -> Vec<&PolytopeRecord> {
        self.records
            .iter()
            .filter(|r| r.is_duality_representative())
            .collect()
    }

    pub fn iso_dual_count(&self) -> usize {
        self.iso_dual_records().len()
    }
}

/// True iff all entries are involutions, pairwise distinct, and every
/// non-adjacent pair commutes.
pub fn string_condition(g: &FiniteGroup, tuple: &GeneratorTuple) -> bool {
    let ids = tuple.ids();
    for (i, &a) in ids.iter().enumerate() {
        if g.element_order(a) != 2 {
            return false;
        }
        for (j, &b) in ids.iter().enumerate().skip(i + 1) {
            if a == b {
                return false;
            }
            if j - i >= 2 && !g.commutes(a, b) {
                return false;
            }
        }
    }
    true
}

/// Entry-wise orders of adjacent products.
pub fn schlafli_type(g: &FiniteGroup, tuple: &GeneratorTuple) -> SchlafliType {
    let ids = tuple.ids();
    let entries = ids
        .windows(2)
        .map(|w| g.element_order(g.mul(w[0], w[1])))
        .collect();
    SchlafliType { entries }
}

/// The tuple generates the whole group.
pub fn generates(g: &FiniteGroup, tuple: &GeneratorTuple) -> bool {
    g.subgroup_closure(tuple.ids()).is_whole()
}

/// Checks closure(rho_J) meet closure(rho_K) = closure(rho_{J meet K}) over
/// all index subsets, memoizing the 2^n subset closures.
pub fn intersection_property(g: &FiniteGroup, tuple: &GeneratorTuple) -> bool {
    let closures = subset_closures(tuple, |ids| g.subgroup_closure(ids));
    check_intersections(&closures)
}

fn subset_closures<F>(tuple: &GeneratorTuple, mut close: F) -> Vec<SubgroupSet>
where
    F: FnMut(&[ElementId]) -> SubgroupSet,
{
    let n = tuple.rank();
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0..(1u32 << n) {
        let ids: Vec<ElementId> = tuple
            .ids()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &id)| id)
            .collect();
        out.push(close(&ids));
    }
    out
}

fn check_intersections(closures: &[SubgroupSet]) -> bool {
    let full = closures.len() - 1;
    for j in 0..=full {
        for k in j..=full {
            // pairs involving the full set hold trivially
            if j == full || k == full {
                continue;
            }
            let meet = closures[j]
                .intersect(&closures[k])
                .expect("same parent group");
            if meet != closures[j & k] {
                return false;
            }
        }
    }
    true
}

/// Re-runs the defining checks on a finished record, through the generic
/// (non-table) code paths the search itself does not use.
pub fn verify_record(g: &FiniteGroup, record: &PolytopeRecord) -> bool {
    string_condition(g, &record.tuple)
        && generates(g, &record.tuple)
        && intersection_property(g, &record.tuple)
        && schlafli_type(g, &record.tuple) == record.schlafli
}

/// The record of the reversed tuple.
pub fn dual(
    g: &FiniteGroup,
    dedup: &FiniteGroup,
    record: &PolytopeRecord,
) -> Result<PolytopeRecord> {
    let rev = record.tuple.reversed();
    let canon = canonicalize(g, dedup, rev.ids())?;
    Ok(PolytopeRecord {
        schlafli: record.schlafli.reversed(),
        tuple: GeneratorTuple::new(canon.canonical.clone()),
        group_order: record.group_order,
        orbit_size: canon.orbit_size,
        self_dual: canon.is_self_dual(),
        degenerate: record.degenerate,
        dual_canonical: GeneratorTuple::new(canon.dual_canonical()),
    })
}

struct CanonicalData {
    canonical: Vec<ElementId>,
    /// Canonical form of the reversed tuple's orbit: reversal commutes with
    /// conjugation, so it is the least reversed member of this orbit.
    reversed_canonical: Vec<ElementId>,
    orbit_size: u64,
    /// Orbit members restricted to tuples the search could have produced
    /// (first component in the given roots); used to mark survivors seen.
    orbit: Vec<Vec<ElementId>>,
}

impl CanonicalData {
    fn is_self_dual(&self) -> bool {
        self.canonical == self.reversed_canonical
    }

    fn dual_canonical(&self) -> Vec<ElementId> {
        self.canonical.clone().min(self.reversed_canonical.clone())
    }
}

/// Canonical (lex-least) form of the tuple's orbit under component-wise
/// conjugation by every element of the dedup group.
fn canonicalize(g: &FiniteGroup, dedup: &FiniteGroup, ids: &[ElementId]) -> Result<CanonicalData> {
    canonicalize_filtered(g, dedup, ids, None)
}

fn canonicalize_filtered(
    g: &FiniteGroup,
    dedup: &FiniteGroup,
    ids: &[ElementId],
    keep_first: Option<&HashSet<ElementId>>,
) -> Result<CanonicalData> {
    let perms: Vec<_> = ids.iter().map(|&id| g.perm(id).clone()).collect();
    let mut orbit_set: HashSet<Vec<ElementId>> = HashSet::new();
    let mut kept: Vec<Vec<ElementId>> = Vec::new();
    let mut canonical: Option<Vec<ElementId>> = None;
    let mut reversed_canonical: Option<Vec<ElementId>> = None;

    for x in dedup.ids() {
        let xp = dedup.perm(x);
        let xinv = xp.inverse();
        let mut conj = Vec::with_capacity(ids.len());
        for p in &perms {
            let image = xinv.compose(&p.compose(xp));
            let id = g.id_of(&image).ok_or(Error::ActionMismatch)?;
            conj.push(id);
        }
        if orbit_set.insert(conj.clone()) {
            if keep_first.is_some_and(|roots| roots.contains(&conj[0])) {
                kept.push(conj.clone());
            }
            let mut rev = conj.clone();
            rev.reverse();
            if reversed_canonical.as_ref().is_none_or(|c| &rev < c) {
                reversed_canonical = Some(rev);
            }
            if canonical.as_ref().is_none_or(|c| &conj < c) {
                canonical = Some(conj);
            }
        }
    }

    Ok(CanonicalData {
        canonical: canonical.expect("dedup group contains the identity"),
        reversed_canonical: reversed_canonical.expect("non-empty orbit"),
        orbit_size: orbit_set.len() as u64,
        orbit: kept,
    })
}

/// Exhaustive enumeration of rank-n string C-group tuples in `g`, reported
/// up to conjugation by `dedup` (which must contain and normalize `g`).
/// `seed_partition` only permutes the order in which search roots are
/// handed to workers; the result is identical for every value.
pub fn enumerate_polytopes(
    g: &FiniteGroup,
    dedup: &FiniteGroup,
    rank: u32,
    seed_partition: u64,
) -> Result<Enumeration> {
    if !(3..=5).contains(&rank) {
        return Err(Error::RankOutOfRange(rank));
    }
    let n = rank as usize;

    let inv = g.involutions();
    let empty = Enumeration {
        rank,
        group_order: g.order(),
        records: Vec::new(),
    };
    if inv.is_empty() {
        return Ok(empty);
    }
    // the right-multiplication rows take involutions * order * 4 bytes
    let pool_cells = inv.len() as u64 * g.order();
    if pool_cells > MAX_SEARCH_CELLS {
        return Err(Error::SearchTooLarge {
            involutions: inv.len() as u64,
            order: g.order(),
        });
    }

    // involution classes of g under dedup-conjugation; rho_0 runs over the
    // least representative of each class
    let classes = involution_classes_under(g, dedup, &inv)?;
    let reps: HashSet<ElementId> = classes.iter().map(|c| c[0]).collect();

    let pos_of: HashMap<ElementId, usize> =
        inv.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let words = inv.len().div_ceil(64);
    // commuting-involution masks, indexed by position in `inv`
    let mut comm = vec![vec![0u64; words]; inv.len()];
    for i in 0..inv.len() {
        for j in i..inv.len() {
            if g.commutes(inv[i], inv[j]) {
                comm[i][j / 64] |= 1 << (j % 64);
                comm[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    let rows = g.right_mul_rows(&inv);

    // search roots: (rho_0 class rep, commuting rho_{n-1})
    let mut roots: Vec<(usize, usize)> = Vec::new();
    for class in &classes {
        let p0 = pos_of[&class[0]];
        for p_last in iter_bits(&comm[p0]) {
            if p_last != p0 {
                roots.push((p0, p_last));
            }
        }
    }
    if roots.is_empty() {
        return Ok(empty);
    }
    let shift = (seed_partition % roots.len() as u64) as usize;
    roots.rotate_left(shift);

    let ctx = SearchCtx {
        g,
        inv: &inv,
        comm: &comm,
        rows: &rows,
        n,
    };
    let mut survivors: Vec<Vec<ElementId>> = roots
        .par_iter()
        .map(|&(p0, p_last)| ctx.search_root(p0, p_last))
        .reduce(Vec::new, |mut a, mut b| {
            a.append(&mut b);
            a
        });
    survivors.sort();
    survivors.dedup();

    // orbit deduplication
    let mut seen: HashSet<Vec<ElementId>> = HashSet::new();
    let mut records = Vec::new();
    for t in &survivors {
        if seen.contains(t) {
            continue;
        }
        let canon = canonicalize_filtered(g, dedup, t, Some(&reps))?;
        for member in &canon.orbit {
            seen.insert(member.clone());
        }
        let tuple = GeneratorTuple::new(canon.canonical.clone());
        let schlafli = schlafli_type(g, &tuple);
        records.push(PolytopeRecord {
            degenerate: schlafli.is_degenerate(),
            schlafli,
            group_order: g.order(),
            orbit_size: canon.orbit_size,
            self_dual: canon.is_self_dual(),
            dual_canonical: GeneratorTuple::new(canon.dual_canonical()),
            tuple,
        });
    }

    records.sort_by(|a, b| {
        (a.schlafli.entries(), a.tuple.ids()).cmp(&(b.schlafli.entries(), b.tuple.ids()))
    });

    // independent re-verification of everything we are about to return
    for r in &records {
        debug_assert!(verify_record(g, r));
    }

    Ok(Enumeration {
        rank,
        group_order: g.order(),
        records,
    })
}

/// Orbits of g's involutions under conjugation by the dedup group's
/// generators, each sorted, ordered by least member.
pub fn involution_classes_under(
    g: &FiniteGroup,
    dedup: &FiniteGroup,
    inv: &[ElementId],
) -> Result<Vec<Vec<ElementId>>> {
    let mut conj_maps: Vec<HashMap<ElementId, ElementId>> = Vec::new();
    for &d in dedup.generator_ids() {
        let dp = dedup.perm(d);
        let dinv = dp.inverse();
        let mut map = HashMap::new();
        for &x in inv {
            let image = dinv.compose(&g.perm(x).compose(dp));
            let y = g.id_of(&image).ok_or(Error::ActionMismatch)?;
            map.insert(x, y);
        }
        conj_maps.push(map);
    }
    // inner conjugation too: dedup contains g, but its generator set may not
    // generate g's inner automorphisms alone
    let mut assigned: HashSet<ElementId> = HashSet::new();
    let mut classes = Vec::new();
    for &start in inv {
        if assigned.contains(&start) {
            continue;
        }
        let mut class = g.conjugacy_class(start);
        let mut i = 0;
        while i < class.len() {
            let x = class[i];
            for map in &conj_maps {
                let y = map[&x];
                if !class.contains(&y) {
                    let mut extra = g.conjugacy_class(y);
                    class.append(&mut extra);
                }
            }
            i += 1;
        }
        class.sort();
        class.dedup();
        for &x in &class {
            assigned.insert(x);
        }
        classes.push(class);
    }
    classes.sort_by_key(|c| c[0]);
    Ok(classes)
}

struct SearchCtx<'a> {
    g: &'a FiniteGroup,
    inv: &'a [ElementId],
    comm: &'a [Vec<u64>],
    rows: &'a RightRows,
    n: usize,
}

impl SearchCtx<'_> {
    /// Positions are filled outside-in: 0, n-1, 1, n-2, ...; each placement
    /// intersects the commuting masks of the already-placed non-adjacent
    /// slots, so the string condition holds by construction.
    fn search_root(&self, p0: usize, p_last: usize) -> Vec<Vec<ElementId>> {
        let n = self.n;
        let mut order = Vec::with_capacity(n);
        let (mut lo, mut hi) = (0, n - 1);
        while lo <= hi {
            order.push(lo);
            if lo != hi {
                order.push(hi);
            }
            lo += 1;
            hi -= 1;
        }

        let mut slots = vec![usize::MAX; n];
        slots[0] = p0;
        slots[n - 1] = p_last;
        let mut out = Vec::new();
        self.extend(&order, 2, &mut slots, &mut out);
        out
    }

    fn extend(
        &self,
        order: &[usize],
        depth: usize,
        slots: &mut Vec<usize>,
        out: &mut Vec<Vec<ElementId>>,
    ) {
        if depth == order.len() {
            self.finish(slots, out);
            return;
        }
        let slot = order[depth];
        // candidates: commuting with every placed non-adjacent generator
        let words = self.comm[0].len();
        let mut mask = vec![u64::MAX; words];
        let spare = (64 - (self.inv.len() % 64)) % 64;
        if spare > 0 {
            mask[words - 1] = u64::MAX >> spare;
        }
        for (other, &pos) in slots.iter().enumerate() {
            if pos == usize::MAX {
                continue;
            }
            if other.abs_diff(slot) >= 2 {
                for (m, c) in mask.iter_mut().zip(&self.comm[pos]) {
                    *m &= c;
                }
            }
        }
        for cand in iter_bits(&mask) {
            if slots.contains(&cand) {
                continue;
            }
            slots[slot] = cand;
            self.extend(order, depth + 1, slots, out);
            slots[slot] = usize::MAX;
        }
    }

    fn finish(&self, slots: &[usize], out: &mut Vec<Vec<ElementId>>) {
        let ids: Vec<ElementId> = slots.iter().map(|&p| self.inv[p]).collect();
        // generation, then the intersection property
        let closure = self.g.subgroup_closure_rows(&ids, self.rows);
        if !closure.is_whole() {
            return;
        }
        let tuple = GeneratorTuple::new(ids.clone());
        let closures = subset_closures(&tuple, |sub| self.g.subgroup_closure_rows(sub, self.rows));
        if check_intersections(&closures) {
            out.push(ids);
        }
    }
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                None
            } else {
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            }
        })
    })
}
