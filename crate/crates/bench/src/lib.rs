//! Seeded inputs shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vbracket::lattice::ii11;
use vbracket::sample::Sampler;
use vbracket::{FockElement, Lattice, LatticeVector, LatticeVoa};

pub fn e8x3() -> LatticeVoa {
    LatticeVoa::new(Lattice::e8x3()).expect("built-in lattice")
}

/// A pair of states of weights `1 - alpha^2/2`, `1 - beta^2/2`.
pub fn pair(
    voa: &LatticeVoa,
    alpha: &LatticeVector,
    beta: &LatticeVector,
    seed: u64,
) -> (FockElement, FockElement) {
    let sampler = Sampler::new(voa).expect("sampler");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = sampler.state(1 - ii11::half_norm(alpha), 2, &mut rng);
    let w = sampler.state(1 - ii11::half_norm(beta), 2, &mut rng);
    (v, w)
}

pub fn primaries(voa: &LatticeVoa, seed: u64) -> (FockElement, FockElement) {
    let sampler = Sampler::new(voa).expect("sampler");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (sampler.primary(2, &mut rng), sampler.primary(2, &mut rng))
}
