//! Seeded random states of a positive-definite lattice vertex algebra.
//!
//! States are drawn from a small spanning family of each weight space:
//! momentum states `e^delta` with `delta` a sum of mutually orthogonal roots,
//! dressed with random Heisenberg words. Full graded bases are never built.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::rational::Q;
use crate::voa::{FockBasisState, FockElement, LatticeVoa, Letter, Word};

pub struct Sampler<'a> {
    voa: &'a LatticeVoa,
    roots: Vec<LatticeVector>,
}

impl<'a> Sampler<'a> {
    pub fn new(voa: &'a LatticeVoa) -> Result<Self> {
        let roots = voa.lattice().short_vectors(2)?;
        if roots.is_empty() {
            return Err(Error::Unsupported(format!(
                "{} has no roots",
                voa.lattice().name
            )));
        }
        Ok(Sampler { voa, roots })
    }

    pub fn roots(&self) -> &[LatticeVector] {
        &self.roots
    }

    /// A vector of norm `2 * half`, built as a sum of mutually orthogonal roots.
    pub fn momentum<R: Rng>(&self, half: i64, rng: &mut R) -> LatticeVector {
        let lat = self.voa.lattice();
        'outer: loop {
            let mut chosen: Vec<&LatticeVector> = Vec::new();
            for _ in 0..half {
                let mut tries = 0;
                loop {
                    let r = self.roots.choose(rng).unwrap();
                    if chosen.iter().all(|c| lat.dot(c, r) == 0) {
                        chosen.push(r);
                        break;
                    }
                    tries += 1;
                    if tries > 200 {
                        continue 'outer;
                    }
                }
            }
            let mut v = LatticeVector::zero(lat.rank());
            for c in chosen {
                v = v.add(c);
            }
            return v;
        }
    }

    /// A random word of the given level with random internal directions.
    pub fn word<R: Rng>(&self, level: i64, rng: &mut R) -> Word {
        let mut parts = Vec::new();
        let mut rest = level;
        while rest > 0 {
            let p = rng.gen_range(1..=rest);
            parts.push(p);
            rest -= p;
        }
        let mut w = Word::new();
        for p in parts {
            w.push(Letter::new(p, rng.gen_range(0..self.voa.rank())));
        }
        w.sort();
        w
    }

    pub fn basis_state<R: Rng>(&self, weight: i64, rng: &mut R) -> FockBasisState {
        let half = rng.gen_range(0..=weight);
        FockBasisState {
            momentum: if half == 0 {
                LatticeVector::zero(self.voa.rank())
            } else {
                self.momentum(half, rng)
            },
            word: self.word(weight - half, rng),
        }
    }

    /// A small non-zero rational.
    pub fn coefficient<R: Rng>(&self, rng: &mut R) -> Q {
        let mut p = 0;
        while p == 0 {
            p = rng.gen_range(-5i64..=5);
        }
        Q::new(p, rng.gen_range(1..=3))
    }

    /// A random combination of up to `terms` spanning states of the given weight.
    /// Small weight spaces may yield fewer terms.
    pub fn state<R: Rng>(&self, weight: i64, terms: usize, rng: &mut R) -> FockElement {
        let terms = terms.max(1);
        let mut out = FockElement::new();
        let mut tries = 0;
        while out.len() < terms && (out.is_zero() || tries < 20 * terms) {
            let s = self.basis_state(weight, rng);
            out.add_term(s, self.coefficient(rng));
            tries += 1;
        }
        out
    }

    /// A primary state of weight `w >= 1`: `e^delta` or `b(-1) e^gamma` with `(b, gamma) = 0`.
    pub fn primary<R: Rng>(&self, weight: i64, rng: &mut R) -> FockElement {
        if weight >= 2 && rng.gen_bool(0.5) {
            let gamma = self.momentum(weight - 1, rng);
            let data = self.voa.internal_of(&gamma.to_h());
            let free: Vec<usize> = (0..self.voa.rank())
                .filter(|&d| data.pairing[d].is_zero())
                .collect();
            if let Some(&d) = free.choose(rng) {
                let s = FockBasisState::momentum_state(gamma).with_letter(Letter::new(1, d));
                return FockElement::term(s, self.coefficient(rng));
            }
        }
        FockElement::term(
            FockBasisState::momentum_state(self.momentum(weight, rng)),
            self.coefficient(rng),
        )
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::lattice::Lattice;

    #[test]
    fn sampled_states_have_the_requested_weight() {
        let voa = LatticeVoa::new(Lattice::e8x3()).unwrap();
        let s = Sampler::new(&voa).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for w in 0..=3 {
            let v = s.state(w, 3, &mut rng);
            assert_eq!(voa.homogeneous_weight(&v), Some(w));
            if w > 0 {
                let p = s.primary(w, &mut rng);
                assert_eq!(voa.homogeneous_weight(&p), Some(w));
                for n in 1..=w {
                    assert!(voa.virasoro(n, &p).is_zero());
                }
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let voa = LatticeVoa::new(Lattice::e8()).unwrap();
        let s = Sampler::new(&voa).unwrap();
        let a = s.state(3, 4, &mut ChaCha8Rng::seed_from_u64(9));
        let b = s.state(3, 4, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }
}
