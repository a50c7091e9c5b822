#![allow(dead_code)]

use matint::instance::{generate_instance, Family};
use matint::matroid::IndependenceOracle;
use matint::ElementId;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random maximal-in-shuffled-order common independent set, built from
/// uncharged lookups, optionally truncated to `keep` elements.
pub fn random_common_set(
    o1: &IndependenceOracle,
    o2: &IndependenceOracle,
    seed: u64,
    keep: Option<usize>,
) -> Vec<ElementId> {
    let mut order: Vec<ElementId> = (0..o1.n()).collect();
    order.shuffle(&mut rng(seed));
    let mut set = Vec::new();
    for v in order {
        set.push(v);
        if !(o1.peek(&set) && o2.peek(&set)) {
            set.pop();
        }
    }
    if let Some(k) = keep {
        set.truncate(k);
    }
    set
}

/// Small instances across all families.
pub fn small_instances(
    sizes: &[usize],
    seeds: u64,
) -> Vec<(String, IndependenceOracle, IndependenceOracle)> {
    let mut out = Vec::new();
    for family in Family::ALL {
        for &n in sizes {
            for seed in 0..seeds {
                let (o1, o2) = generate_instance(family, n, seed)
                    .unwrap()
                    .oracles()
                    .unwrap();
                out.push((format!("{family}/n={n}/seed={seed}"), o1, o2));
            }
        }
    }
    out
}
