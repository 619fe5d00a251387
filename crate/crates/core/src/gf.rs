//! Arithmetic for GF(p^r) in a polynomial basis.
//!
//! The modulus is pinned to the lexicographically least monic irreducible
//! polynomial of degree `r` over GF(p), with the constant coefficient
//! varying fastest. That makes every element encoding, and everything
//! derived from it downstream (point orders, element ids, report rows),
//! reproducible across runs and platforms.

use serde::Serialize;

use crate::error::{Error, Result};

/// Hard ceiling on field sizes accepted by [`make_field`].
pub const DEFAULT_FIELD_BOUND: u64 = 1 << 20;

/// A concrete model of GF(p^r): the prime, the exponent, and the modulus
/// polynomial. All arithmetic goes through methods on this type; elements
/// themselves carry no back-reference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    p: u64,
    r: u32,
    q: u64,
    /// Monic modulus as coefficients (c0, ..., c_{r-1}, 1).
    modulus: Vec<u64>,
}

/// An element of GF(p^r): residues (c0, ..., c_{r-1}) for the basis
/// 1, t, ..., t^{r-1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits a prime power q into (p, r); errors when q is not one.
pub fn factor_prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut n = q;
            let mut r = 0;
            while n.is_multiple_of(p) {
                n /= p;
                r += 1;
            }
            return if n == 1 {
                Ok((p, r))
            } else {
                Err(Error::NotPrimePower(q))
            };
        }
        p += 1;
    }
    Ok((q, 1))
}

/// Builds the canonical GF(p^r) with the default size bound.
pub fn make_field(p: u64, r: u32) -> Result<FieldSpec> {
    make_field_bounded(p, r, DEFAULT_FIELD_BOUND)
}

/// Builds the canonical GF(p^r), refusing fields larger than `bound`.
pub fn make_field_bounded(p: u64, r: u32, bound: u64) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r < 1 {
        return Err(Error::InvalidExponent);
    }
    let mut q: u128 = 1;
    for _ in 0..r {
        q *= p as u128;
        if q > bound as u128 {
            return Err(Error::FieldBoundExceeded {
                q: q.min(u64::MAX as u128) as u64,
                bound,
            });
        }
    }
    let q = q as u64;
    let modulus = least_irreducible(p, r);
    Ok(FieldSpec { p, r, q, modulus })
}

/// Least monic irreducible of degree r over GF(p), ordering coefficient
/// vectors (c0, ..., c_{r-1}) with c0 fastest.
fn least_irreducible(p: u64, r: u32) -> Vec<u64> {
    let r = r as usize;
    let mut coeffs = vec![0u64; r + 1];
    coeffs[r] = 1;
    loop {
        if poly_is_irreducible(p, &coeffs) {
            return coeffs;
        }
        // increment (c0 varies fastest)
        for c in coeffs.iter_mut().take(r) {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
}

// --- dense polynomial helpers over GF(p); coefficient vecs, no leading-zero trim ---

fn poly_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn poly_deg(v: &[u64]) -> usize {
    let mut d = v.len() - 1;
    while d > 0 && v[d] == 0 {
        d -= 1;
    }
    d
}

fn poly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    out
}

/// Remainder of a modulo the monic polynomial m.
fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let dm = poly_deg(m);
    let mut rem = a.to_vec();
    for d in (dm..rem.len()).rev() {
        let lead = rem[d];
        if lead != 0 && d >= dm {
            let shift = d - dm;
            for i in 0..=dm {
                let sub = (lead * m[i]) % p;
                rem[i + shift] = (rem[i + shift] + p - sub) % p;
            }
        }
    }
    poly_trim(rem)
}

fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = poly_trim(a.to_vec());
    let mut b = poly_trim(b.to_vec());
    while !(b.len() == 1 && b[0] == 0) {
        // reduce a mod b; b must be made monic for poly_rem
        let lead = b[poly_deg(&b)];
        let inv = mod_inverse(lead, p);
        let monic: Vec<u64> = b.iter().map(|&c| (c * inv) % p).collect();
        let r = poly_rem(p, &a, &monic);
        a = b;
        b = r;
    }
    a
}

/// x^e mod m over GF(p), with m monic.
fn poly_powmod(p: u64, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut acc = poly_rem(p, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_rem(p, &poly_mul(p, &result, &acc), m);
        }
        acc = poly_rem(p, &poly_mul(p, &acc, &acc), m);
        e >>= 1;
    }
    result
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p prime, a != 0: a^(p-2)
    let mut result = 1u64;
    let mut acc = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * acc % p;
        }
        acc = acc * acc % p;
        e >>= 1;
    }
    result
}

/// Rabin irreducibility test: f (monic, degree r) is irreducible over GF(p)
/// iff t^(p^r) = t mod f and gcd(t^(p^(r/l)) - t, f) = 1 for every prime l | r.
fn poly_is_irreducible(p: u64, f: &[u64]) -> bool {
    let r = (f.len() - 1) as u32;
    if r == 0 {
        return false;
    }
    // steps[k] = t^(p^k) mod f
    let mut steps = vec![poly_rem(p, &[0, 1], f)];
    for _ in 0..r {
        steps.push(poly_powmod(p, steps.last().unwrap(), p, f));
    }
    if steps[r as usize] != steps[0] {
        return false;
    }
    let mut rem = r;
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= rem {
        if rem.is_multiple_of(d) {
            primes.push(d);
            while rem.is_multiple_of(d) {
                rem /= d;
            }
        }
        d += 1;
    }
    if rem > 1 {
        primes.push(rem);
    }
    for l in primes {
        let k = (r / l) as usize;
        // gcd(t^(p^k) - t, f) must be constant
        let mut diff = steps[k].clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(p, f, &diff);
        if poly_deg(&g) > 0 {
            return false;
        }
    }
    true
}

impl FieldSpec {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.r as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.element_from_index(1)
    }

    /// Generator of the polynomial basis (the class of t); equals 0 when
    /// r = 1 since t is the modulus there.
    pub fn basis_t(&self) -> FieldElement {
        if self.r == 1 {
            self.zero()
        } else {
            self.element_from_index(self.p)
        }
    }

    /// Embeds an integer via the prime subfield.
    pub fn from_integer(&self, n: u64) -> FieldElement {
        self.element_from_index(n % self.p)
    }

    /// Element with index k in coefficient-lexicographic order: the
    /// coefficients are the base-p digits of k, least significant first.
    pub fn element_from_index(&self, k: u64) -> FieldElement {
        debug_assert!(k < self.q);
        let mut coeffs = vec![0u64; self.r as usize];
        let mut k = k;
        for c in coeffs.iter_mut() {
            *c = k % self.p;
            k /= self.p;
        }
        FieldElement { coeffs }
    }

    /// Rank of the element in coefficient-lexicographic order.
    pub fn index_of(&self, a: &FieldElement) -> u64 {
        let mut k = 0u64;
        for &c in a.coeffs.iter().rev() {
            k = k * self.p + c;
        }
        k
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let prod = poly_mul(self.p, &a.coeffs, &b.coeffs);
        let rem = poly_rem(self.p, &prod, &self.modulus);
        self.element_from_poly(rem)
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut result = self.one();
        let mut acc = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &acc);
            }
            acc = self.mul(&acc, &acc);
            e >>= 1;
        }
        result
    }

    /// The field automorphism x -> x^(p^k).
    pub fn frobenius(&self, a: &FieldElement, k: u32) -> FieldElement {
        let mut out = a.clone();
        for _ in 0..k {
            out = self.pow(&out, self.p);
        }
        out
    }

    /// True when the element is a nonzero square.
    pub fn is_square(&self, a: &FieldElement) -> bool {
        if a.is_zero() {
            return false;
        }
        if self.p == 2 {
            return true;
        }
        self.pow(a, (self.q - 1) / 2) == self.one()
    }

    /// Least nonzero non-square in coefficient-lexicographic order; None in
    /// characteristic 2, where every element is a square.
    pub fn least_nonsquare(&self) -> Option<FieldElement> {
        if self.p == 2 {
            return None;
        }
        (1..self.q)
            .map(|k| self.element_from_index(k))
            .find(|a| !self.is_square(a))
    }

    /// Renders an element like `2t+1` for diagnostics.
    pub fn display(&self, a: &FieldElement) -> String {
        let mut parts = Vec::new();
        for (i, &c) in a.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}t^{i}"),
            };
            parts.push(part);
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    fn element_from_poly(&self, mut v: Vec<u64>) -> FieldElement {
        v.resize(self.r as usize, 0);
        FieldElement { coeffs: v }
    }
}
