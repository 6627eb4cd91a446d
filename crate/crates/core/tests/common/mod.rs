#![allow(dead_code)]

use proptest::prelude::*;
use qtrellis::code::StabilizerCode;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random stabilizer codes on at most `max_n` qubits.
pub fn arb_code(max_n: usize) -> impl Strategy<Value = StabilizerCode> {
    (1..=max_n, any::<u64>()).prop_flat_map(|(n, seed)| {
        (1..=n).prop_map(move |r| {
            StabilizerCode::random(n, r, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
        })
    })
}

pub fn all_syndromes(code: &StabilizerCode) -> Vec<qtrellis::pauli::BinaryVector> {
    let r = code.stab_gens().len();
    (0..1u128 << r)
        .map(|b| qtrellis::pauli::BinaryVector::from_bits(r, b))
        .collect()
}
