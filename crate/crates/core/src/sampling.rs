//! Seeded random samples of states, group elements and sections.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::orbit::GroupElement;
use crate::toda::TodaPhasePoint;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Toda state with `a_i ∈ [0.25, 1]` and `b_i ∈ [−0.5, 0.5]`.
pub fn random_state<R: Rng>(n: usize, rng: &mut R) -> TodaPhasePoint {
    let a = (0..n - 1).map(|_| rng.gen_range(0.25..=1.0)).collect();
    let b = (0..n).map(|_| rng.gen_range(-0.5..=0.5)).collect();
    TodaPhasePoint::new(a, b).expect("sampled state is valid")
}

/// Lower-triangular group element with off-diagonal entries in `[−2, 2]` and
/// diagonal drawn from `[0.25, 2]`, rescaled to determinant one.
pub fn random_group_element<R: Rng>(n: usize, rng: &mut R) -> GroupElement {
    let mut m = nalgebra::DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            m[(i, j)] = rng.gen_range(-2.0..=2.0);
        }
        m[(i, i)] = rng.gen_range(0.25..=2.0);
    }
    GroupElement::normalized(m).expect("sampled group element is valid")
}
