//! The projective line PG(1,q) and the permutation groups acting on it.
//!
//! Point 0 is the point at infinity; points 1..=q are the field elements in
//! coefficient-lexicographic order. Every group is handed to the engine as a
//! small generator set of permutations of these q+1 points.

use serde::Serialize;

use crate::engine::FiniteGroup;
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::perm::Perm;

/// The projective line over a fixed field model.
#[derive(Debug, Clone)]
pub struct ProjLine {
    spec: FieldSpec,
}

/// Index of the point at infinity.
pub const INFINITY: usize = 0;

impl ProjLine {
    pub fn new(spec: FieldSpec) -> ProjLine {
        ProjLine { spec }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn num_points(&self) -> usize {
        self.spec.q() as usize + 1
    }

    pub fn point_of(&self, a: &FieldElement) -> usize {
        self.spec.index_of(a) as usize + 1
    }

    pub fn element_at(&self, point: usize) -> FieldElement {
        debug_assert!(point > 0);
        self.spec.element_from_index(point as u64 - 1)
    }
}

/// Which extension of L2(q) inside PGammaL2(q) to construct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GroupKind {
    /// L2(q) = PSL2(q): Moebius maps of square determinant.
    Psl,
    /// PGL2(q): all Moebius maps.
    Pgl,
    /// L2(q) extended by the order-2 field automorphism (square q).
    PSigmaL,
    /// L2(q) extended by c = (non-square diagonal) * (order-2 field
    /// automorphism); sharply 3-transitive, isomorphic to M10 when q = 9.
    PslC,
    /// PGL2(q) extended by all field automorphisms.
    PGammaL,
}

impl GroupKind {
    pub const ALL: [GroupKind; 5] = [
        GroupKind::Psl,
        GroupKind::Pgl,
        GroupKind::PSigmaL,
        GroupKind::PslC,
        GroupKind::PGammaL,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GroupKind::Psl => "psl",
            GroupKind::Pgl => "pgl",
            GroupKind::PSigmaL => "psigmal",
            GroupKind::PslC => "pslc",
            GroupKind::PGammaL => "pgammal",
        }
    }

    pub fn parse(s: &str) -> Option<GroupKind> {
        GroupKind::ALL.iter().copied().find(|k| k.name() == s)
    }
}

/// Sign epsilon with q = epsilon mod 4; defined for odd q only.
pub fn epsilon(q: u64) -> Option<i64> {
    match q % 4 {
        1 => Some(1),
        3 => Some(-1),
        _ => None,
    }
}

/// The permutation of PG(1,q) induced by x -> (ax+b)/(cx+d). Scalar
/// multiples of the matrix induce the same permutation.
pub fn mobius_perm(
    line: &ProjLine,
    a: &FieldElement,
    b: &FieldElement,
    c: &FieldElement,
    d: &FieldElement,
) -> Result<Perm> {
    let f = line.spec();
    let det = f.sub(&f.mul(a, d), &f.mul(b, c));
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let n = line.num_points();
    let mut images = Vec::with_capacity(n);
    // infinity -> a/c (or infinity when c = 0)
    images.push(if c.is_zero() {
        INFINITY as u32
    } else {
        line.point_of(&f.mul(a, &f.inv(c)?)) as u32
    });
    for pt in 1..n {
        let x = line.element_at(pt);
        let denom = f.add(&f.mul(c, &x), d);
        let img = if denom.is_zero() {
            INFINITY
        } else {
            let num = f.add(&f.mul(a, &x), b);
            line.point_of(&f.mul(&num, &f.inv(&denom)?))
        };
        images.push(img as u32);
    }
    Perm::from_images(images)
}

/// The permutation fixing infinity and mapping x -> x^(p^k).
pub fn semilinear_perm(line: &ProjLine, k: u32) -> Result<Perm> {
    let f = line.spec();
    if k >= f.r() {
        return Err(Error::AutomorphismPowerOutOfRange { k, r: f.r() });
    }
    let n = line.num_points();
    let mut images = Vec::with_capacity(n);
    images.push(INFINITY as u32);
    for pt in 1..n {
        let x = line.element_at(pt);
        images.push(line.point_of(&f.frobenius(&x, k)) as u32);
    }
    Perm::from_images(images)
}

/// Generators plus the order the closure must reach.
#[derive(Debug, Clone)]
pub struct GroupBuild {
    pub kind: GroupKind,
    pub q: u64,
    pub p: u64,
    pub r: u32,
    pub generators: Vec<Perm>,
    pub expected_order: u64,
}

impl GroupBuild {
    /// Closes the generators into the full element table.
    pub fn close(&self, cap: usize) -> Result<FiniteGroup> {
        let g = FiniteGroup::close(&self.generators, cap)?;
        debug_assert_eq!(g.order(), self.expected_order);
        Ok(g)
    }
}

/// Constructs the generator set for the requested kind over PG(1,q).
///
/// PSL uses a unit translation, the square of a primitive scaling, and the
/// negated inversion (all of square determinant); PGL swaps in the full
/// primitive scaling and plain inversion. The extensions add the relevant
/// semilinear map, with the c extension twisting it by a non-square scaling.
pub fn build_group(line: &ProjLine, kind: GroupKind) -> Result<GroupBuild> {
    let f = line.spec().clone();
    let (p, r, q) = (f.p(), f.r(), f.q());
    let two = gcd2(q);
    let psl_order = q * (q * q - 1) / two;

    if matches!(kind, GroupKind::PSigmaL | GroupKind::PslC) && r % 2 != 0 {
        return Err(Error::KindConstraint(format!(
            "{} requires an even field exponent (got r = {r})",
            kind.name()
        )));
    }
    if kind == GroupKind::PslC && p == 2 {
        return Err(Error::KindConstraint(
            "pslc requires odd characteristic (no non-squares exist for p = 2)".into(),
        ));
    }

    let one = f.one();
    let zero = f.zero();
    // primitive-ish scaling: any generator of the full multiplicative group;
    // the least element of maximal order is canonical and deterministic
    let g = multiplicative_generator(&f);
    let g2 = f.mul(&g, &g);
    let minus_one = f.neg(&one);

    let translation = mobius_perm(line, &one, &one, &zero, &one)?;
    let scale_g = mobius_perm(line, &g, &zero, &zero, &one)?;
    let scale_g2 = mobius_perm(line, &g2, &zero, &zero, &one)?;
    let inversion = mobius_perm(line, &zero, &one, &one, &zero)?;
    let neg_inversion = mobius_perm(line, &zero, &minus_one, &one, &zero)?;

    let psl_gens = vec![translation.clone(), scale_g2, neg_inversion];
    let pgl_gens = vec![translation, scale_g, inversion];

    let (generators, expected_order) = match kind {
        GroupKind::Psl => (psl_gens, psl_order),
        GroupKind::Pgl => (pgl_gens, q * (q * q - 1)),
        GroupKind::PSigmaL => {
            let mut gens = psl_gens;
            gens.push(semilinear_perm(line, r / 2)?);
            (gens, 2 * psl_order)
        }
        GroupKind::PslC => {
            let nu = f.least_nonsquare().expect("odd characteristic");
            let diag = mobius_perm(line, &nu, &zero, &zero, &one)?;
            let c = diag.compose(&semilinear_perm(line, r / 2)?);
            let mut gens = psl_gens;
            gens.push(c);
            (gens, 2 * psl_order)
        }
        GroupKind::PGammaL => {
            let mut gens = pgl_gens;
            if r > 1 {
                gens.push(semilinear_perm(line, 1)?);
            }
            (gens, r as u64 * q * (q * q - 1))
        }
    };

    Ok(GroupBuild {
        kind,
        q,
        p,
        r,
        generators,
        expected_order,
    })
}

fn gcd2(q: u64) -> u64 {
    if q.is_multiple_of(2) {
        1
    } else {
        2
    }
}

/// Least element of full multiplicative order q-1.
fn multiplicative_generator(f: &FieldSpec) -> FieldElement {
    let target = f.q() - 1;
    for k in 1..f.q() {
        let a = f.element_from_index(k);
        if element_mult_order(f, &a) == target {
            return a;
        }
    }
    unreachable!("a finite field has a primitive element")
}

fn element_mult_order(f: &FieldSpec, a: &FieldElement) -> u64 {
    let mut x = a.clone();
    let mut n = 1;
    let one = f.one();
    while x != one {
        x = f.mul(&x, a);
        n += 1;
    }
    n
}

/// True iff exactly one group element carries each ordered triple of
/// distinct points onto (infinity, 0, 1), i.e. points (0, 1, 2).
pub fn verify_sharp_3_transitivity(group: &FiniteGroup) -> bool {
    let n = group.degree() as u64;
    let triples = n * (n - 1) * (n - 2);
    if group.order() != triples {
        return false;
    }
    // each g sends exactly one triple there: (g^-1(0), g^-1(1), g^-1(2));
    // sharp transitivity = those triples are pairwise distinct
    let mut seen = std::collections::HashSet::with_capacity(group.order() as usize);
    for id in group.ids() {
        let inv = group.perm(group.inv(id));
        if !seen.insert((inv.image(0), inv.image(1), inv.image(2))) {
            return false;
        }
    }
    true
}
