#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use subsum_core::rational::rat;
use subsum_core::SequenceSpec;

/// Positive summable spec: up to six explicit terms, then a geometric tail.
pub fn random_spec(rng: &mut StdRng) -> SequenceSpec {
    let len = rng.gen_range(0..=6);
    let prefix = (0..len).map(|_| rat(rng.gen_range(1..=20), rng.gen_range(1..=20))).collect();
    let q = rng.gen_range(2..=9);
    let rho = rat(rng.gen_range(1..q), q);
    let a = rat(rng.gen_range(1..=12), rng.gen_range(1..=12));
    SequenceSpec::geometric(a, rho).unwrap().with_prefix(prefix).unwrap()
}

pub fn random_specs(seed: u64, count: usize) -> Vec<SequenceSpec> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count).map(|_| random_spec(&mut rng)).collect()
}
