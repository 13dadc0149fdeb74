//! Cylinder measures of the coded system via occurrence densities.
//!
//! For `lh(v_m) >= lh(alpha) - 1` every occurrence of `alpha` in `v_{m+1}`
//! lies inside one copy of `v_m` or crosses exactly one junction
//! `v_m 1^a v_m`, so `occ_{m+1} = q occ_m + sum_i J(a_i)`. The last and first
//! `lh(alpha) - 1` symbols of `v_m` no longer change from that stage on.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::rational::{from_big, Rational};
use crate::words::{bits_to_string, occurrences_in, Bits, BitsRef, Stage, StageStats, Tail, WordPresentation};
use crate::DEFAULT_BUDGET;

/// `U_{alpha,k}`: points with an occurrence of `alpha` starting at `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderSet {
    word: Bits,
    position: i64,
}

impl CylinderSet {
    pub fn new(word: Bits, position: i64) -> Option<Self> {
        (!word.is_empty()).then_some(CylinderSet { word, position })
    }

    pub fn word(&self) -> &BitsRef {
        &self.word
    }

    pub fn position(&self) -> i64 {
        self.position
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityResult {
    pub mu: Option<Rational>,
    pub mu0: Option<Rational>,
    /// Stage index of `stage_estimates[0]`.
    pub first_stage: usize,
    /// `occ(alpha, v_n) / lh(v_n)`.
    pub stage_estimates: Vec<Rational>,
}

/// Occurrences of `alpha` crossing one junction, given the stable suffix and
/// prefix of the stage words.
struct Junction<'a> {
    alpha: &'a BitsRef,
    suffix: Bits,
    prefix: Bits,
    all_ones: bool,
}

impl Junction<'_> {
    fn count(&self, a: u64) -> BigUint {
        let l = self.alpha.len() as u64;
        let short = a.min(l);
        let mut window = self.suffix.clone();
        window.extend(std::iter::repeat_n(true, short as usize));
        window.extend_from_bitslice(&self.prefix);
        let s = self.suffix.len();
        let inner = occurrences_in(&window, self.alpha, Strategy::Sequential)
            .into_iter()
            .filter(|&i| i + self.alpha.len() > s && i < s + short as usize)
            .count();
        let extra = if self.all_ones && a > l { a - l } else { 0 };
        BigUint::from(inner) + BigUint::from(extra)
    }

    fn stage(&self, occ: &BigUint, stage: &Stage) -> BigUint {
        let q = BigUint::from(stage.cut);
        stage.spacers.iter().fold(occ * q, |acc, &a| acc + self.count(a))
    }
}

/// Occurrence counts of `alpha` in `v_n` for `n` in `first..=last`.
struct Recurrence<'a> {
    junction: Junction<'a>,
    first: usize,
    occ: BigUint,
    stats: StageStats,
}

impl<'a> Recurrence<'a> {
    fn start(p: &WordPresentation, alpha: &'a BitsRef) -> Result<Self> {
        if let Some(h) = p.horizon() {
            if p.length(h)? < BigUint::from(alpha.len()) {
                return Err(Error::WindowTooLong(alpha.len()));
            }
        }
        let need = BigUint::from(alpha.len() - 1);
        let mut first = 0;
        loop {
            if !p.has_stage_word(first) {
                return Err(Error::WindowTooLong(alpha.len()));
            }
            if p.length(first)? >= need {
                break;
            }
            first += 1;
        }
        let word = p.expand(first, DEFAULT_BUDGET)?;
        let bits = word.bits();
        let k = alpha.len() - 1;
        let junction = Junction {
            alpha,
            suffix: bits[bits.len() - k..].to_bitvec(),
            prefix: bits[..k].to_bitvec(),
            all_ones: alpha.all(),
        };
        Ok(Recurrence {
            junction,
            first,
            occ: BigUint::from(word.occurrences(alpha).len()),
            stats: StageStats::of(&word),
        })
    }

    fn advance(&mut self, stage: &Stage) {
        self.occ = self.junction.stage(&self.occ, stage);
        self.stats = self.stats.next(stage);
    }
}

fn density(occ: &BigUint, len: &BigUint) -> Rational {
    from_big(occ) / from_big(len)
}

/// `mu(U_{alpha,k})` and `mu_0(U_{alpha,k})`; both are shift invariant so
/// the position is not used.
pub fn cylinder_measure(p: &WordPresentation, c: &CylinderSet) -> Result<DensityResult> {
    let mut rec = Recurrence::start(p, c.word())?;
    let first = rec.first;
    let block_start = match p.tail() {
        Tail::Periodic(k) => {
            let t = p.tail_start().expect("periodic");
            let mut s = first.max(t);
            s += (k - (s - t) % k) % k;
            Some((s, k))
        }
        Tail::Finite => None,
    };
    let last = match (block_start, p.horizon()) {
        (Some((s, k)), _) => (s + 2 * k).max(first + 6),
        (None, Some(h)) => h,
        (None, None) => unreachable!("finite presentations have a horizon"),
    };

    let mut estimates = Vec::new();
    let mut at_block = None;
    for n in first..=last {
        estimates.push(density(&rec.occ, &rec.stats.len));
        if block_start.is_some_and(|(s, _)| s == n) {
            at_block = Some((rec.occ.clone(), rec.stats.clone()));
        }
        if n < last {
            rec.advance(p.stage(n).expect("stage within range"));
        }
    }

    let (Some((s, k)), Some((occ_t, stats_t))) = (block_start, at_block) else {
        return Ok(DensityResult { mu: None, mu0: None, first_stage: first, stage_estimates: estimates });
    };
    if p.rho_limit().is_none() {
        return Err(Error::DivergentWord);
    }

    // One block maps (occ, len, zeros) to (Q occ + J, Q len + S, Q zeros).
    let mut q_block = BigUint::one();
    let mut j_block = BigUint::zero();
    let mut s_block = BigUint::zero();
    for n in s..s + k {
        let stage = p.stage(n).expect("periodic");
        q_block *= BigUint::from(stage.cut);
        j_block = rec.junction.stage(&j_block, stage);
        s_block = s_block * BigUint::from(stage.cut) + BigUint::from(stage.spacer_sum());
    }
    let qm1 = from_big(&(q_block - 1u32));
    let num = from_big(&occ_t) + from_big(&j_block) / &qm1;
    let mu = &num / (from_big(&stats_t.len) + from_big(&s_block) / &qm1);
    let mu0 = num / from_big(&stats_t.zeros);
    Ok(DensityResult { mu: Some(mu), mu0: Some(mu0), first_stage: first, stage_estimates: estimates })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Windows {
    pub words: BTreeSet<String>,
    pub stabilized: bool,
}

fn window_set(bits: &BitsRef, ell: usize, strategy: Strategy) -> BTreeSet<String> {
    let count = bits.len() + 1 - ell;
    exec::chunked_fold(
        strategy,
        count,
        1 << 14,
        |range| range.map(|i| bits_to_string(&bits[i..i + ell])).collect::<BTreeSet<_>>(),
        |mut a, b| {
            a.extend(b);
            a
        },
    )
}

/// Length-`ell` subwords of `v_n`.
pub fn admissible_windows(p: &WordPresentation, ell: usize, n: usize) -> Result<Windows> {
    admissible_windows_with(p, ell, n, Strategy::default())
}

pub fn admissible_windows_with(p: &WordPresentation, ell: usize, n: usize, strategy: Strategy) -> Result<Windows> {
    if ell == 0 || p.length(n)? < BigUint::from(ell) {
        return Err(Error::WindowTooLong(ell));
    }
    let words = window_set(p.expand(n, DEFAULT_BUDGET)?.bits(), ell, strategy);
    let period = match p.tail() {
        Tail::Periodic(k) => k,
        Tail::Finite => 1,
    };
    let prior_long = n >= 1 && p.length(n - 1)? >= BigUint::from(ell);
    let stabilized = prior_long
        && p.has_stage_word(n + period)
        && p.expand(n + period, DEFAULT_BUDGET).is_ok_and(|w| window_set(w.bits(), ell, strategy) == words);
    Ok(Windows { words, stabilized })
}
