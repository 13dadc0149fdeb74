use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::FiniteWord;
use crate::error::{Error, Result};
use crate::rational::{from_big, Rational};

/// One cutting step: `cut` copies separated by `spacers` (length `cut - 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Stage {
    pub cut: usize,
    pub spacers: Vec<u64>,
}

impl Stage {
    pub fn new(cut: usize, spacers: Vec<u64>) -> Result<Self> {
        if cut < 2 {
            return Err(Error::InvalidStage(format!("cut {cut} < 2")));
        }
        if spacers.len() != cut - 1 {
            return Err(Error::InvalidStage(format!("cut {cut} needs {} spacers, got {}", cut - 1, spacers.len())));
        }
        Ok(Stage { cut, spacers })
    }

    pub fn spacer_sum(&self) -> u64 {
        self.spacers.iter().sum()
    }

    pub fn is_simple(&self) -> bool {
        self.spacers.windows(2).all(|w| w[0] == w[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    Finite,
    /// The last `k` stages repeat forever.
    Periodic(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aperiodicity {
    Aperiodic,
    Periodic,
    Undetermined,
}

/// Symbol counts of a stage word, kept as big integers so that they can be
/// tracked far beyond anything that could be materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageStats {
    pub len: BigUint,
    pub ones: BigUint,
    pub zeros: BigUint,
}

impl StageStats {
    pub fn of(word: &FiniteWord) -> Self {
        StageStats {
            len: BigUint::from(word.len()),
            ones: BigUint::from(word.ones()),
            zeros: BigUint::from(word.zeros()),
        }
    }

    pub fn next(&self, stage: &Stage) -> Self {
        let q = BigUint::from(stage.cut);
        let a = BigUint::from(stage.spacer_sum());
        StageStats { len: &self.len * &q + &a, ones: &self.ones * &q + &a, zeros: &self.zeros * &q }
    }

    pub fn rho(&self) -> Rational {
        from_big(&self.ones) / from_big(&self.zeros)
    }

    pub fn len_u64(&self) -> Option<u64> {
        self.len.to_u64()
    }
}

/// An infinite rank-one word given by a stem and a stream of stages.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WordPresentation {
    stem: FiniteWord,
    stages: Vec<Stage>,
    tail: Tail,
}

impl WordPresentation {
    pub fn new(stem: FiniteWord, stages: Vec<Stage>, tail: Tail) -> Result<Self> {
        for s in &stages {
            Stage::new(s.cut, s.spacers.clone())?;
        }
        if let Tail::Periodic(k) = tail {
            if k == 0 || k > stages.len() {
                return Err(Error::InvalidStage(format!(
                    "periodic tail of {k} stages needs 1..={} stages",
                    stages.len()
                )));
            }
        }
        Ok(WordPresentation { stem, stages, tail })
    }

    /// Chacon's word: `v_{n+1} = v_n v_n 1 v_n`.
    pub fn chacon() -> Self {
        WordPresentation {
            stem: FiniteWord::zero(),
            stages: vec![Stage { cut: 3, spacers: vec![0, 1] }],
            tail: Tail::Periodic(1),
        }
    }

    pub fn stem(&self) -> &FiniteWord {
        &self.stem
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.tail, Tail::Periodic(_))
    }

    /// Index of the first stage of the repeating block.
    pub fn tail_start(&self) -> Option<usize> {
        match self.tail {
            Tail::Periodic(k) => Some(self.stages.len() - k),
            Tail::Finite => None,
        }
    }

    /// Stage `n` (the step producing `v_{n+1}` from `v_n`).
    pub fn stage(&self, n: usize) -> Option<&Stage> {
        if n < self.stages.len() {
            return self.stages.get(n);
        }
        match self.tail {
            Tail::Finite => None,
            Tail::Periodic(k) => {
                let start = self.stages.len() - k;
                self.stages.get(start + (n - start) % k)
            }
        }
    }

    /// Largest stage-word index available, `None` when unbounded.
    pub fn horizon(&self) -> Option<usize> {
        match self.tail {
            Tail::Finite => Some(self.stages.len()),
            Tail::Periodic(_) => None,
        }
    }

    pub fn has_stage_word(&self, n: usize) -> bool {
        self.horizon().is_none_or(|h| n <= h)
    }

    /// Counts of `v_0 ..= v_n`.
    pub fn stats(&self, n: usize) -> Result<Vec<StageStats>> {
        if !self.has_stage_word(n) {
            return Err(Error::StageUnavailable(n));
        }
        let mut out = Vec::with_capacity(n + 1);
        out.push(StageStats::of(&self.stem));
        for m in 0..n {
            let next = out[m].next(self.stage(m).expect("checked horizon"));
            out.push(next);
        }
        Ok(out)
    }

    pub fn rho_at(&self, n: usize) -> Result<Rational> {
        Ok(self.stats(n)?[n].rho())
    }

    /// Length of `v_n` without materializing it.
    pub fn length(&self, n: usize) -> Result<BigUint> {
        Ok(self.stats(n)?.pop().expect("nonempty").len)
    }

    /// Materializes `v_n`, refusing anything longer than `budget`.
    pub fn expand(&self, n: usize, budget: u64) -> Result<FiniteWord> {
        let len = self.length(n)?;
        if len > BigUint::from(budget) {
            return Err(Error::BudgetExceeded { budget });
        }
        let mut w = self.stem.clone();
        for m in 0..n {
            w = w.recompose(&self.stage(m).expect("checked horizon").spacers);
        }
        Ok(w)
    }

    /// Every stage word `v_0 ..= v_n`.
    pub fn expand_all(&self, n: usize, budget: u64) -> Result<Vec<FiniteWord>> {
        let len = self.length(n)?;
        if len > BigUint::from(budget) {
            return Err(Error::BudgetExceeded { budget });
        }
        let mut out = vec![self.stem.clone()];
        for m in 0..n {
            let next = out[m].recompose(&self.stage(m).expect("checked horizon").spacers);
            out.push(next);
        }
        Ok(out)
    }

    /// Largest `n` with `lh(v_n) <= budget` (capped at the horizon and at `max`).
    pub fn last_stage_within(&self, budget: u64, max: usize) -> Option<usize> {
        let cap = self.horizon().map_or(max, |h| h.min(max));
        let budget = BigUint::from(budget);
        let mut s = StageStats::of(&self.stem);
        if s.len > budget {
            return None;
        }
        let mut n = 0;
        while n < cap {
            let next = s.next(self.stage(n).expect("within horizon"));
            if next.len > budget {
                break;
            }
            s = next;
            n += 1;
        }
        Some(n)
    }

    /// Stages from index `m` on, re-expressed so the result is a valid stage
    /// list (with the same tail mode) for a presentation whose stage 0 is
    /// this presentation's stage `m`.
    pub fn stages_from(&self, m: usize) -> (Vec<Stage>, Tail) {
        match self.tail {
            Tail::Finite => (self.stages.get(m..).unwrap_or(&[]).to_vec(), Tail::Finite),
            Tail::Periodic(k) => {
                let start = self.stages.len() - k;
                let mut end = self.stages.len().max(m + k);
                end += (k - (end - start) % k) % k;
                let stages = (m..end).map(|i| self.stage(i).expect("periodic").clone()).collect();
                (stages, Tail::Periodic(k))
            }
        }
    }

    /// Exact periodicity decision for periodic tails.
    ///
    /// The infinite word is periodic iff its spacer parameters are eventually
    /// one constant: a period `p` forces, once `lh(v_n) >= 2p`, every gap
    /// between expected copies of `v_n` to be a multiple of `p`, so each
    /// stage is simple and all its 1-runs sit at the same residue, which pins
    /// the constant. With a repeating block this is a finite check. Finite
    /// tails say nothing about the rest of the word.
    pub fn aperiodicity(&self) -> Aperiodicity {
        match self.tail {
            Tail::Finite => Aperiodicity::Undetermined,
            Tail::Periodic(k) => {
                let block = &self.stages[self.stages.len() - k..];
                let first = block[0].spacers[0];
                if block.iter().all(|s| s.spacers.iter().all(|&a| a == first)) {
                    Aperiodicity::Periodic
                } else {
                    Aperiodicity::Aperiodic
                }
            }
        }
    }

    /// `rho_V` for periodic tails (the geometric tail sum), `None` otherwise.
    pub fn rho_limit(&self) -> Option<Rational> {
        let Tail::Periodic(k) = self.tail else {
            return None;
        };
        let start = self.stages.len() - k;
        let stats = self.stats(start).ok()?;
        let mut s = stats[start].clone();
        let base_rho = s.rho();
        let mut block_gain = Rational::zero();
        let mut product = BigUint::from(1u32);
        for st in &self.stages[start..] {
            let next = s.next(st);
            block_gain += next.rho() - s.rho();
            product *= BigUint::from(st.cut);
            s = next;
        }
        // Each block multiplies Z by `product` and scales later increments by
        // its inverse.
        let q = from_big(&product);
        Some(base_rho + block_gain * &q / (q - Rational::from_integer(1.into())))
    }
}
