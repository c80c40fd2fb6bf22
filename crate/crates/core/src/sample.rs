//! Deterministic sampling helpers for the property suites. A seeded
//! [`SplitMix64`] stream keeps the verification runs reproducible without
//! pulling a RNG dependency into the library.

use crate::classify::{enumerate_orthogonal_with_budget, IsotropicMatrix};
use crate::equivalence::Permutation;
use crate::error::Result;
use crate::gf2::{Gf2Matrix, Gf2Vector};

/// SplitMix64: tiny, seedable, and stable across platforms.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound`.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        (self.next_u64() % bound as u64) as usize
    }
}

pub fn random_vector(rng: &mut SplitMix64, len: usize) -> Gf2Vector {
    let mut v = Gf2Vector::zeros(len);
    for i in 0..len {
        if rng.next_u64() & 1 == 1 {
            v.set(i, true);
        }
    }
    v
}

/// Random even-weight vector, excluding zero and all-ones.
pub fn random_even_vector(rng: &mut SplitMix64, len: usize) -> Gf2Vector {
    assert!(len >= 4, "no even vector outside {{0, 1}} exists below length 4");
    loop {
        let mut v = random_vector(rng, len);
        if v.weight() % 2 == 1 {
            let flip = rng.below(len);
            v.set(flip, !v.get(flip));
        }
        if !v.is_zero() && v.weight() != len {
            return v;
        }
    }
}

pub fn random_permutation(rng: &mut SplitMix64, size: usize) -> Permutation {
    let mut images: Vec<usize> = (0..size).collect();
    for i in (1..size).rev() {
        images.swap(i, rng.below(i + 1));
    }
    Permutation::from_images(images).expect("shuffle is a bijection")
}

pub fn random_invertible(rng: &mut SplitMix64, n: usize) -> Gf2Matrix {
    loop {
        let rows: Vec<Gf2Vector> = (0..n).map(|_| random_vector(rng, n)).collect();
        let m = Gf2Matrix::from_rows(rows);
        if m.rank() == n {
            return m;
        }
    }
}

/// Random member of `M_r`: a random stacked `(I_r; P)` moved by a random row
/// permutation and column transform.
pub fn random_isotropic(rng: &mut SplitMix64, r: usize) -> Result<IsotropicMatrix> {
    let orthogonal = enumerate_orthogonal_with_budget(r, r.max(6))?;
    let p = &orthogonal[rng.below(orthogonal.len())];
    let sigma = random_permutation(rng, 2 * r);
    let lambda = random_invertible(rng, r);
    p.stacked().transformed(&sigma, &lambda)
}
