//! Generic finite permutation-group machinery.
//!
//! A [`FiniteGroup`] is a fully tabulated closure: every element gets an
//! integer id in first-discovery order, and multiplication works by
//! composing stored permutations and looking the product up. There is no
//! stabilizer-chain machinery on purpose; every target here is small enough
//! that the flat table is both simpler and faster, and deterministic ids
//! keep goldens and canonical forms stable.

use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Index of an element in a [`FiniteGroup`] table. Id 0 is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId(pub u32);

impl ElementId {
    pub const IDENTITY: ElementId = ElementId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Orders above which a full Cayley table is refused.
pub const MAX_TABLE_ORDER: u64 = 1 << 14;

/// A closed permutation group with id-indexed elements.
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Perm>,
    ids: HashMap<Perm, u32>,
    inverses: Vec<u32>,
    orders: Vec<u32>,
    seed_ids: Vec<ElementId>,
    table: OnceLock<Vec<u32>>,
}

impl FiniteGroup {
    /// Breadth-first closure of the seed permutations, assigning ids in
    /// first-discovery order. Errors once more than `cap` elements appear.
    pub fn close(seed: &[Perm], cap: usize) -> Result<FiniteGroup> {
        let degree = seed.first().map(|p| p.degree()).unwrap_or(1);
        if seed.iter().any(|p| p.degree() != degree) {
            return Err(Error::DegreeMismatch);
        }
        let mut gens: Vec<Perm> = Vec::new();
        for p in seed {
            if !p.is_identity() && !gens.contains(p) {
                gens.push(p.clone());
            }
        }

        let mut elements = vec![Perm::identity(degree)];
        let mut ids = HashMap::new();
        ids.insert(elements[0].clone(), 0u32);
        let mut i = 0;
        while i < elements.len() {
            for g in &gens {
                let w = elements[i].compose(g);
                if !ids.contains_key(&w) {
                    if elements.len() >= cap {
                        return Err(Error::ClosureCapExceeded(cap));
                    }
                    ids.insert(w.clone(), elements.len() as u32);
                    elements.push(w);
                }
            }
            i += 1;
        }

        let inverses = elements
            .iter()
            .map(|p| ids[&p.inverse()])
            .collect::<Vec<_>>();
        let orders = elements.iter().map(|p| p.order() as u32).collect();
        let seed_ids = gens.iter().map(|p| ElementId(ids[p])).collect();

        Ok(FiniteGroup {
            degree,
            elements,
            ids,
            inverses,
            orders,
            seed_ids,
            table: OnceLock::new(),
        })
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn perm(&self, id: ElementId) -> &Perm {
        &self.elements[id.index()]
    }

    pub fn id_of(&self, p: &Perm) -> Option<ElementId> {
        self.ids.get(p).map(|&i| ElementId(i))
    }

    pub fn ids(&self) -> impl Iterator<Item = ElementId> {
        (0..self.elements.len() as u32).map(ElementId)
    }

    /// Ids of the closure's generators, in seed order.
    pub fn generator_ids(&self) -> &[ElementId] {
        &self.seed_ids
    }

    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        if let Some(t) = self.table.get() {
            return ElementId(t[a.index() * self.elements.len() + b.index()]);
        }
        let p = self.elements[a.index()].compose(&self.elements[b.index()]);
        ElementId(self.ids[&p])
    }

    pub fn inv(&self, a: ElementId) -> ElementId {
        ElementId(self.inverses[a.index()])
    }

    /// a^-1 b a.
    pub fn conj(&self, b: ElementId, a: ElementId) -> ElementId {
        self.mul(self.mul(self.inv(a), b), a)
    }

    /// Least n >= 1 with g^n = 1.
    pub fn element_order(&self, id: ElementId) -> u64 {
        self.orders[id.index()] as u64
    }

    pub fn commutes(&self, a: ElementId, b: ElementId) -> bool {
        let pa = &self.elements[a.index()];
        let pb = &self.elements[b.index()];
        pa.compose(pb) == pb.compose(pa)
    }

    /// Materializes the full multiplication table (refused above 2^14).
    pub fn ensure_table(&self) -> Result<()> {
        if self.order() > MAX_TABLE_ORDER {
            return Err(Error::TableTooLarge(self.order()));
        }
        self.table.get_or_init(|| {
            let n = self.elements.len();
            let mut t = vec![0u32; n * n];
            t.par_chunks_mut(n).enumerate().for_each(|(a, row)| {
                let pa = &self.elements[a];
                for (b, slot) in row.iter_mut().enumerate() {
                    let p = pa.compose(&self.elements[b]);
                    *slot = self.ids[&p];
                }
            });
            t
        });
        Ok(())
    }

    /// All non-identity elements of order 2, ascending by id.
    pub fn involutions(&self) -> Vec<ElementId> {
        self.ids()
            .filter(|&id| self.element_order(id) == 2)
            .collect()
    }

    /// Conjugacy class of an element, as a sorted id list.
    pub fn conjugacy_class(&self, id: ElementId) -> Vec<ElementId> {
        let mut seen = vec![false; self.elements.len()];
        seen[id.index()] = true;
        let mut orbit = vec![id];
        let mut i = 0;
        while i < orbit.len() {
            for &g in &self.seed_ids {
                let y = self.conj(orbit[i], g);
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort();
        orbit
    }

    /// All conjugacy classes, each sorted, ordered by least member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<ElementId>> {
        let mut assigned = vec![false; self.elements.len()];
        let mut classes = Vec::new();
        for id in self.ids() {
            if assigned[id.index()] {
                continue;
            }
            let class = self.conjugacy_class(id);
            for &x in &class {
                assigned[x.index()] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Conjugacy classes of involutions, ordered by least representative.
    pub fn involution_classes(&self) -> Vec<Vec<ElementId>> {
        let mut assigned = vec![false; self.elements.len()];
        let mut classes = Vec::new();
        for id in self.involutions() {
            if assigned[id.index()] {
                continue;
            }
            let class = self.conjugacy_class(id);
            for &x in &class {
                assigned[x.index()] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Elements commuting with the given one.
    pub fn centralizer(&self, id: ElementId) -> SubgroupSet {
        let mut s = SubgroupSet::empty(self.order());
        let target = &self.elements[id.index()];
        for x in self.ids() {
            let px = &self.elements[x.index()];
            if px.compose(target) == target.compose(px) {
                s.insert(x);
            }
        }
        s
    }

    /// Least subgroup containing the given elements. Exits early with the
    /// whole group once the count passes |G|/2 (no proper subgroup can).
    pub fn subgroup_closure(&self, gens: &[ElementId]) -> SubgroupSet {
        let order = self.order();
        let mut set = SubgroupSet::empty(order);
        set.insert(ElementId::IDENTITY);
        let mut frontier: Vec<ElementId> = vec![ElementId::IDENTITY];
        let gens: Vec<ElementId> = {
            let mut v: Vec<ElementId> = gens.to_vec();
            v.retain(|&g| g != ElementId::IDENTITY);
            v.dedup();
            v
        };
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !set.contains(y) {
                    set.insert(y);
                    if u64::from(set.order()) * 2 > order {
                        return SubgroupSet::whole(order);
                    }
                    frontier.push(y);
                }
            }
        }
        debug_assert_eq!(order % u64::from(set.order()), 0, "Lagrange");
        set
    }

    /// Conjugate of a subgroup by an element.
    pub fn conjugate_subgroup(&self, s: &SubgroupSet, a: ElementId) -> SubgroupSet {
        let mut out = SubgroupSet::empty(self.order());
        for x in s.iter_ids() {
            out.insert(self.conj(x, a));
        }
        out
    }

    /// Every subgroup, exactly once, by cyclic seeding plus iterated joins
    /// with cyclic subgroups until fixpoint. Sorted by (order, members).
    pub fn all_subgroups(&self, cap: u64) -> Result<Vec<SubgroupSet>> {
        if self.order() > cap {
            return Err(Error::CensusCapExceeded {
                order: self.order(),
                cap,
            });
        }
        // A table pays for itself immediately here; fall back silently when
        // the (overridable) cap exceeds the table limit.
        let _ = self.ensure_table();

        let mut found: HashMap<SubgroupSet, usize> = HashMap::new();
        let mut subs: Vec<(SubgroupSet, Vec<ElementId>)> = Vec::new();

        let add = |set: SubgroupSet,
                   gens: Vec<ElementId>,
                   subs: &mut Vec<(SubgroupSet, Vec<ElementId>)>,
                   found: &mut HashMap<SubgroupSet, usize>|
         -> bool {
            if found.contains_key(&set) {
                false
            } else {
                found.insert(set.clone(), subs.len());
                subs.push((set, gens));
                true
            }
        };

        let trivial = self.subgroup_closure(&[]);
        add(trivial, vec![], &mut subs, &mut found);

        // distinct cyclic subgroups, by least generator
        let mut cyclic: Vec<(SubgroupSet, ElementId)> = Vec::new();
        for id in self.ids() {
            if id == ElementId::IDENTITY {
                continue;
            }
            let set = self.subgroup_closure(&[id]);
            if !found.contains_key(&set) {
                cyclic.push((set.clone(), id));
                add(set, vec![id], &mut subs, &mut found);
            }
        }

        // join fixpoint: every subgroup is a join of cyclic ones
        let mut next = 0;
        while next < subs.len() {
            let (current, gens) = subs[next].clone();
            for (cyc_set, cyc_gen) in &cyclic {
                if cyc_set.is_subset_of(&current) {
                    continue;
                }
                let mut join_gens = gens.clone();
                join_gens.push(*cyc_gen);
                let join = self.subgroup_closure(&join_gens);
                add(join, join_gens, &mut subs, &mut found);
            }
            next += 1;
        }

        let mut out: Vec<SubgroupSet> = subs.into_iter().map(|(s, _)| s).collect();
        out.sort_by(|a, b| (a.order(), a.words()).cmp(&(b.order(), b.words())));
        Ok(out)
    }

    /// Partition of the given subgroups into conjugation orbits; returns an
    /// orbit label per input index. Inputs must be closed under conjugation.
    pub fn subgroup_conjugacy_partition(&self, subs: &[SubgroupSet]) -> Vec<usize> {
        let index: HashMap<&SubgroupSet, usize> =
            subs.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut label = vec![usize::MAX; subs.len()];
        let mut next_label = 0;
        for start in 0..subs.len() {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next_label;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for &g in &self.seed_ids {
                    let image = self.conjugate_subgroup(&subs[i], g);
                    let j = *index
                        .get(&image)
                        .expect("subgroup list closed under conjugation");
                    if label[j] == usize::MAX {
                        label[j] = next_label;
                        stack.push(j);
                    }
                }
            }
            next_label += 1;
        }
        label
    }

    /// Right-multiplication rows for the given elements: `row(g)[x] = x*g`.
    /// Turns repeated subgroup closures over a fixed generator pool into
    /// pure array walks.
    pub fn right_mul_rows(&self, pool: &[ElementId]) -> RightRows {
        let n = self.elements.len();
        let rows: Vec<Vec<u32>> = pool
            .par_iter()
            .map(|&g| {
                let pg = &self.elements[g.index()];
                (0..n)
                    .map(|x| self.ids[&self.elements[x].compose(pg)])
                    .collect()
            })
            .collect();
        let index = pool.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        RightRows { index, rows }
    }

    /// Subgroup closure over generators restricted to a precomputed pool.
    pub fn subgroup_closure_rows(&self, gens: &[ElementId], rows: &RightRows) -> SubgroupSet {
        let order = self.order();
        let mut set = SubgroupSet::empty(order);
        set.insert(ElementId::IDENTITY);
        let mut frontier = vec![0u32];
        let gen_rows: Vec<&[u32]> = gens.iter().map(|g| rows.row(*g)).collect();
        while let Some(x) = frontier.pop() {
            for row in &gen_rows {
                let y = row[x as usize];
                if !set.contains(ElementId(y)) {
                    set.insert(ElementId(y));
                    if u64::from(set.order()) * 2 > order {
                        return SubgroupSet::whole(order);
                    }
                    frontier.push(y);
                }
            }
        }
        set
    }
}

/// Precomputed right-multiplication rows over a generator pool.
pub struct RightRows {
    index: HashMap<ElementId, usize>,
    rows: Vec<Vec<u32>>,
}

impl RightRows {
    pub fn row(&self, g: ElementId) -> &[u32] {
        &self.rows[self.index[&g]]
    }

    pub fn has(&self, g: ElementId) -> bool {
        self.index.contains_key(&g)
    }
}

/// Subset of a group's elements stored as a bit vector; all constructors
/// keep the identity in and the operations preserve subgroup-ness.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupSet {
    capacity: u64,
    bits: Vec<u64>,
    count: u32,
}

impl SubgroupSet {
    pub fn empty(capacity: u64) -> SubgroupSet {
        SubgroupSet {
            capacity,
            bits: vec![0; capacity.div_ceil(64) as usize],
            count: 0,
        }
    }

    pub fn whole(capacity: u64) -> SubgroupSet {
        let mut s = SubgroupSet::empty(capacity);
        for w in s.bits.iter_mut() {
            *w = u64::MAX;
        }
        let spare = (64 - (capacity % 64)) % 64;
        if spare > 0 {
            let last = s.bits.len() - 1;
            s.bits[last] >>= spare;
        }
        s.count = capacity as u32;
        s
    }

    pub fn insert(&mut self, id: ElementId) {
        let (w, b) = (id.index() / 64, id.index() % 64);
        if self.bits[w] & (1 << b) == 0 {
            self.bits[w] |= 1 << b;
            self.count += 1;
        }
    }

    pub fn contains(&self, id: ElementId) -> bool {
        let (w, b) = (id.index() / 64, id.index() % 64);
        self.bits[w] & (1 << b) != 0
    }

    pub fn order(&self) -> u32 {
        self.count
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn is_whole(&self) -> bool {
        u64::from(self.count) == self.capacity
    }

    pub fn iter_ids(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let b = word.trailing_zeros();
                    word &= word - 1;
                    Some(ElementId((w * 64) as u32 + b))
                }
            })
        })
    }

    /// Lattice meet. The intersection of two subgroups is a subgroup.
    pub fn intersect(&self, other: &SubgroupSet) -> Result<SubgroupSet> {
        if self.capacity != other.capacity {
            return Err(Error::ParentMismatch);
        }
        let bits: Vec<u64> = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| a & b)
            .collect();
        let count = bits.iter().map(|w| w.count_ones()).sum();
        Ok(SubgroupSet {
            capacity: self.capacity,
            bits,
            count,
        })
    }

    pub fn is_subset_of(&self, other: &SubgroupSet) -> bool {
        self.capacity == other.capacity
            && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    fn words(&self) -> &[u64] {
        &self.bits
    }
}

/// Structural tag assigned to a subgroup by [`classify_subgroup`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IsoType {
    Trivial,
    /// Cyclic of the given order.
    Cyclic(u64),
    /// Dihedral of the given (total, even) order; Dihedral(4) is the Klein
    /// four-group.
    Dihedral(u64),
    ElementaryAbelian {
        p: u64,
        s: u32,
    },
    /// Split extension of an elementary abelian p-group of order p^s by a
    /// cyclic group of order h.
    Frobenius {
        p: u64,
        s: u32,
        h: u64,
    },
    A4,
    S4,
    A5,
    Psl(u64),
    Pgl(u64),
    Other(u64),
}

impl IsoType {
    /// Folds alias tags that name the same abstract group onto one
    /// canonical representative, so that tallies line up.
    pub fn normalized(self) -> IsoType {
        match self {
            IsoType::Cyclic(1) => IsoType::Trivial,
            IsoType::ElementaryAbelian { p, s: 1 } => IsoType::Cyclic(p),
            IsoType::ElementaryAbelian { p: 2, s: 2 } => IsoType::Dihedral(4),
            IsoType::Frobenius { p, s: 1, h: 2 } => IsoType::Dihedral(2 * p),
            IsoType::Frobenius { p: 2, s: 2, h: 3 } => IsoType::A4,
            IsoType::Psl(2) | IsoType::Pgl(2) => IsoType::Dihedral(6),
            IsoType::Psl(3) => IsoType::A4,
            IsoType::Pgl(3) => IsoType::S4,
            IsoType::Psl(4) | IsoType::Psl(5) => IsoType::A5,
            // in characteristic 2 the general and special linear groups
            // coincide
            IsoType::Pgl(x) if x % 2 == 0 => IsoType::Psl(x).normalized(),
            other => other,
        }
    }

    /// True when the tag names the projective special linear group for q,
    /// accounting for the small coincidences.
    pub fn is_psl_of(self, q: u64) -> bool {
        let target = match q {
            2 => IsoType::Dihedral(6),
            3 => IsoType::A4,
            4 | 5 => IsoType::A5,
            _ => IsoType::Psl(q),
        };
        self.normalized() == target
    }

    pub fn label(&self) -> String {
        match self {
            IsoType::Trivial => "1".into(),
            IsoType::Cyclic(n) => format!("Z{n}"),
            IsoType::Dihedral(n) => format!("D{n}"),
            IsoType::ElementaryAbelian { p, s } => format!("E{}", p.pow(*s)),
            IsoType::Frobenius { p, s, h } => format!("E{}:Z{h}", p.pow(*s)),
            IsoType::A4 => "A4".into(),
            IsoType::S4 => "S4".into(),
            IsoType::A5 => "A5".into(),
            IsoType::Psl(q) => format!("PSL(2,{q})"),
            IsoType::Pgl(q) => format!("PGL(2,{q})"),
            IsoType::Other(n) => format!("?{n}"),
        }
    }
}

/// Decision tree mapping a subgroup to its structural tag. Checks run in a
/// fixed order (cyclic before dihedral before elementary abelian, profile
/// tests for orders 12/24/60 before the projective matches), so overlapping
/// descriptions resolve deterministically.
pub fn classify_subgroup(g: &FiniteGroup, h: &SubgroupSet) -> IsoType {
    let n = u64::from(h.order());
    if n == 1 {
        return IsoType::Trivial;
    }
    let ids: Vec<ElementId> = h.iter_ids().collect();
    let orders: Vec<u64> = ids.iter().map(|&x| g.element_order(x)).collect();

    if orders.contains(&n) {
        return IsoType::Cyclic(n);
    }

    if n % 2 == 0 && n >= 4 && is_dihedral(g, &ids, &orders, n) {
        return IsoType::Dihedral(n);
    }

    let abelian = is_abelian(g, &ids);
    if abelian {
        let p = orders.iter().copied().find(|&o| o > 1).unwrap();
        if crate::gf::is_prime(p) && orders.iter().all(|&o| o == 1 || o == p) {
            let s = n.ilog(p);
            return IsoType::ElementaryAbelian { p, s };
        }
    }

    if n == 12 && !abelian && !orders.contains(&4) {
        return IsoType::A4;
    }
    if n == 24 && !abelian && orders.contains(&4) && orders.iter().filter(|&&o| o == 2).count() == 9
    {
        return IsoType::S4;
    }
    if n == 60 && is_simple(g, h, &ids) {
        return IsoType::A5;
    }

    if let Some(qp) = psl_order_match(n) {
        if is_simple(g, h, &ids) {
            return IsoType::Psl(qp);
        }
    }
    if let Some(qp) = pgl_order_match(n) {
        let derived = derived_subgroup(g, h);
        if u64::from(derived.order()) * 2 == n {
            let dids: Vec<ElementId> = derived.iter_ids().collect();
            if is_simple(g, &derived, &dids) {
                return IsoType::Pgl(qp);
            }
        }
    }

    // split E_{p^s} : Z_h with normal elementary abelian Sylow p-subgroup
    let mut primes: Vec<u64> = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            primes.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    for p in primes {
        let mut p_part = 1u64;
        let mut m = n;
        while m % p == 0 {
            p_part *= p;
            m /= p;
        }
        let h_ord = n / p_part;
        if h_ord <= 1 {
            continue;
        }
        // all elements of order p, plus the identity
        let kernel: Vec<ElementId> = ids
            .iter()
            .zip(&orders)
            .filter(|&(_, &o)| o == 1 || o == p)
            .map(|(&x, _)| x)
            .collect();
        if kernel.len() as u64 != p_part {
            continue;
        }
        if !is_abelian(g, &kernel) {
            continue;
        }
        let closed = kernel.iter().all(|&a| {
            kernel
                .iter()
                .all(|&b| kernel.binary_search(&g.mul(a, b)).is_ok())
        });
        if !closed {
            continue;
        }
        if orders.contains(&h_ord) {
            let s = p_part.ilog(p);
            return IsoType::Frobenius { p, s, h: h_ord };
        }
    }

    IsoType::Other(n)
}

fn is_abelian(g: &FiniteGroup, ids: &[ElementId]) -> bool {
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            if !g.commutes(a, b) {
                return false;
            }
        }
    }
    true
}

fn is_dihedral(g: &FiniteGroup, ids: &[ElementId], orders: &[u64], n: u64) -> bool {
    let half = n / 2;
    for (i, &x) in ids.iter().enumerate() {
        if orders[i] != half {
            continue;
        }
        // cyclic core <x>, then an inverting involution outside it
        let mut core = vec![ElementId::IDENTITY];
        let mut y = x;
        while y != ElementId::IDENTITY {
            core.push(y);
            y = g.mul(y, x);
        }
        core.sort();
        let xinv = g.inv(x);
        for (j, &t) in ids.iter().enumerate() {
            if orders[j] != 2 || core.binary_search(&t).is_ok() {
                continue;
            }
            if g.mul(t, g.mul(x, t)) == xinv {
                return true;
            }
        }
    }
    false
}

/// Simplicity by brute force: the normal closure of every non-identity
/// element must be the whole subgroup.
fn is_simple(g: &FiniteGroup, h: &SubgroupSet, ids: &[ElementId]) -> bool {
    let n = h.order();
    if n == 1 {
        return false;
    }
    for &x in ids {
        if x == ElementId::IDENTITY {
            continue;
        }
        // class of x under conjugation by members of h
        let mut class = vec![x];
        let mut seen = SubgroupSet::empty(h.capacity());
        seen.insert(x);
        let mut i = 0;
        while i < class.len() {
            for &a in ids {
                let y = g.conj(class[i], a);
                if !seen.contains(y) {
                    seen.insert(y);
                    class.push(y);
                }
            }
            i += 1;
        }
        let closure = g.subgroup_closure(&class);
        if closure.order() != n {
            return false;
        }
    }
    true
}

fn derived_subgroup(g: &FiniteGroup, h: &SubgroupSet) -> SubgroupSet {
    let ids: Vec<ElementId> = h.iter_ids().collect();
    let mut comms: Vec<ElementId> = Vec::new();
    let mut seen = SubgroupSet::empty(h.capacity());
    for &a in &ids {
        for &b in &ids {
            let c = g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b));
            if !seen.contains(c) {
                seen.insert(c);
                comms.push(c);
            }
        }
    }
    g.subgroup_closure(&comms)
}

/// n = q(q^2-1)/gcd(2,q-1) for a prime power q. The halved order is the
/// lower bound for each q, so the scan can stop once it passes n.
fn psl_order_match(n: u64) -> Option<u64> {
    let mut q = 2u64;
    while q * (q * q - 1) / 2 <= n {
        if crate::gf::factor_prime_power(q).is_ok() {
            let d = if q.is_multiple_of(2) { 1 } else { 2 };
            if q * (q * q - 1) / d == n {
                return Some(q);
            }
        }
        q += 1;
    }
    None
}

/// n = q(q^2-1) for a prime power q (odd q; even coincides with psl).
fn pgl_order_match(n: u64) -> Option<u64> {
    let mut q = 3u64;
    while q * (q * q - 1) <= n {
        if crate::gf::factor_prime_power(q).is_ok() && q * (q * q - 1) == n {
            return Some(q);
        }
        q += 1;
    }
    None
}
