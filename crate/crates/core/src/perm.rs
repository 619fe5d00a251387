//! Permutations of a fixed finite point set, stored as image vectors.

use serde::Serialize;

use crate::error::{Error, Result};

/// A permutation of the points 0..n. `compose(a, b)` applies `b` first,
/// so perms multiply the way functions do.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    /// Validates that the images form a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || seen[i as usize] {
                return Err(Error::DegreeMismatch);
            }
            seen[i as usize] = true;
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// self o other: applies `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        let images = other
            .images
            .iter()
            .map(|&x| self.images[x as usize])
            .collect();
        Perm { images }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Order as the lcm of cycle lengths.
    pub fn order(&self) -> u64 {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut order: u64 = 1;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            order = lcm(order, len);
        }
        order
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity()
            && self
                .images
                .iter()
                .enumerate()
                .all(|(i, &x)| self.images[x as usize] == i as u32)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
