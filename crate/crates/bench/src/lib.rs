//! Deterministic inputs for the benchmarks.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use phonodist::autoseg::{random_chain_automaton, TierAutomaton};
use phonodist::phoneme::{Inventory, PhonemeSequence};

/// Random names of `len` letters, first letter capitalised.
pub fn names(count: usize, len: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..len)
                .map(|i| {
                    let c = (b'a' + rng.gen_range(0..26)) as char;
                    if i == 0 {
                        c.to_ascii_uppercase()
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect()
}

/// Random pronunciations of `len` phonemes over `inventory`.
pub fn sequences(
    inventory: &Arc<Inventory>,
    count: usize,
    len: usize,
    seed: u64,
) -> Vec<PhonemeSequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let idx: Vec<usize> = (0..len)
                .map(|_| rng.gen_range(0..inventory.len()))
                .collect();
            PhonemeSequence::from_indices(inventory, &idx)
        })
        .collect()
}

/// `tiers` random chain automata with `states` states over a three-letter
/// alphabet.
pub fn tiers(tiers: usize, states: usize, seed: u64) -> Vec<TierAutomaton> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    (0..tiers)
        .map(|k| {
            random_chain_automaton(&mut rng, format!("t{k}"), states, &alphabet)
                .expect("valid automaton")
        })
        .collect()
}
