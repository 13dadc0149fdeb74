//! Seeded random presentations for corpora and randomized checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canonical::stage_chain_is_canonical;
use crate::words::{FiniteWord, Stage, Tail, WordPresentation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleShape {
    pub max_prefix: usize,
    pub max_block: usize,
    pub max_cut: usize,
    pub max_spacer: u64,
    /// The stage chain must be certified canonical through this stage.
    pub canonical_through: usize,
}

impl Default for SampleShape {
    fn default() -> Self {
        SampleShape { max_prefix: 2, max_block: 2, max_cut: 4, max_spacer: 3, canonical_through: 2 }
    }
}

/// A stage with `3 <= q <= max_cut` whose spacers are not all equal.
pub fn random_stage<R: Rng>(rng: &mut R, max_cut: usize, max_spacer: u64) -> Stage {
    let cut = rng.gen_range(3..=max_cut.max(3));
    loop {
        let spacers: Vec<u64> = (0..cut - 1).map(|_| rng.gen_range(0..=max_spacer.max(1))).collect();
        let stage = Stage::new(cut, spacers).expect("cut >= 3");
        if !stage.is_simple() {
            return stage;
        }
    }
}

/// Draws periodic-tail presentations from `rng` until one has a certified
/// canonical stage chain.
pub fn random_presentation_with<R: Rng>(rng: &mut R, shape: SampleShape) -> WordPresentation {
    loop {
        let prefix = rng.gen_range(0..=shape.max_prefix);
        let block = rng.gen_range(1..=shape.max_block.max(1));
        let stages: Vec<Stage> =
            (0..prefix + block).map(|_| random_stage(rng, shape.max_cut, shape.max_spacer)).collect();
        let p = WordPresentation::new(FiniteWord::zero(), stages, Tail::Periodic(block)).expect("valid stages");
        if stage_chain_is_canonical(&p, shape.canonical_through, crate::DEFAULT_BUDGET).unwrap_or(false) {
            return p;
        }
    }
}

pub fn random_presentation(seed: u64) -> WordPresentation {
    random_presentation_with(&mut ChaCha8Rng::seed_from_u64(seed), SampleShape::default())
}

/// Keeps the first `keep` stages of `base` and continues with random stages.
///
/// Gives up after `ATTEMPTS` draws, which happens when the kept prefix is
/// itself not canonical.
pub fn random_extension_with<R: Rng>(
    rng: &mut R,
    base: &WordPresentation,
    keep: usize,
    shape: SampleShape,
) -> Option<WordPresentation> {
    const ATTEMPTS: usize = 256;
    let head: Vec<Stage> = (0..keep).map(|i| base.stage(i).expect("base stage").clone()).collect();
    for _ in 0..ATTEMPTS {
        let tail = random_presentation_with(rng, SampleShape { canonical_through: 0, ..shape });
        let block = match tail.tail() {
            Tail::Periodic(k) => k,
            Tail::Finite => unreachable!("sampled tails are periodic"),
        };
        let stages = head.iter().chain(tail.stages()).cloned().collect();
        let p = WordPresentation::new(base.stem().clone(), stages, Tail::Periodic(block)).expect("valid stages");
        if stage_chain_is_canonical(&p, keep + shape.canonical_through, crate::DEFAULT_BUDGET).unwrap_or(false) {
            return Some(p);
        }
    }
    None
}

pub fn random_extension(base: &WordPresentation, keep: usize, seed: u64) -> Option<WordPresentation> {
    random_extension_with(&mut ChaCha8Rng::seed_from_u64(seed), base, keep, SampleShape::default())
}
