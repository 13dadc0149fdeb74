//! Finite rank-one words and the built-from relation.
//!
//! A word in `F` is a nonempty binary word that starts and ends with `0`.
//! `alpha` is built from `beta` when `alpha = beta 1^a1 beta ... 1^a(q-1) beta`
//! for some `q >= 2`; the decomposition is unique because every expected copy
//! of `beta` starts with `0` and is separated from the next one by a maximal
//! run of `1`s.

mod format;
mod presentation;

use std::fmt;

use bitvec::prelude::*;

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::rational::{ratio, Rational};

pub use format::{parse_presentation, write_presentation};
pub use presentation::{Aperiodicity, Stage, StageStats, Tail, WordPresentation};

pub type Bits = BitVec<u64, Lsb0>;
pub type BitsRef = BitSlice<u64, Lsb0>;

/// A validated word in `F` with cached symbol counts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteWord {
    bits: Bits,
    ones: u64,
}

impl FiniteWord {
    /// The one-letter word `0`.
    pub fn zero() -> Self {
        FiniteWord { bits: bitvec![u64, Lsb0; 0], ones: 0 }
    }

    pub fn from_bits(bits: Bits) -> Result<Self> {
        if bits.is_empty() || bits[0] || bits[bits.len() - 1] {
            return Err(Error::NotInF);
        }
        let ones = bits.count_ones() as u64;
        Ok(FiniteWord { bits, ones })
    }

    pub fn from_slice(bits: &BitsRef) -> Result<Self> {
        Self::from_bits(bits.to_bitvec())
    }

    pub fn bits(&self) -> &BitsRef {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `Y`: number of `1`s.
    pub fn ones(&self) -> u64 {
        self.ones
    }

    /// `Z`: number of `0`s.
    pub fn zeros(&self) -> u64 {
        self.len() as u64 - self.ones
    }

    /// `Y / Z`.
    pub fn rho(&self) -> Rational {
        ratio(self.ones, self.zeros())
    }

    pub fn counts(&self) -> (u64, u64, Rational) {
        (self.ones(), self.zeros(), self.rho())
    }

    pub fn is_prefix_of(&self, other: &FiniteWord) -> bool {
        self.len() <= other.len() && other.bits[..self.len()] == self.bits
    }

    /// `self 1^a1 self ... 1^ak self`, with `k = spacers.len()`.
    pub fn recompose(&self, spacers: &[u64]) -> FiniteWord {
        let extra: u64 = spacers.iter().sum();
        let mut bits = Bits::with_capacity(self.len() * (spacers.len() + 1) + extra as usize);
        bits.extend_from_bitslice(&self.bits);
        for &a in spacers {
            bits.resize(bits.len() + a as usize, true);
            bits.extend_from_bitslice(&self.bits);
        }
        FiniteWord { bits, ones: self.ones * (spacers.len() as u64 + 1) + extra }
    }

    /// Start positions of every occurrence of `pattern` as a subword.
    pub fn occurrences(&self, pattern: &BitsRef) -> Vec<usize> {
        occurrences_in(&self.bits, pattern, Strategy::Sequential)
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bits(f, &self.bits)
    }
}

impl fmt::Debug for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteWord(\"{self}\")")
    }
}

pub(crate) fn write_bits(f: &mut impl fmt::Write, bits: &BitsRef) -> fmt::Result {
    for b in bits {
        f.write_char(if *b { '1' } else { '0' })?;
    }
    Ok(())
}

pub fn bits_to_string(bits: &BitsRef) -> String {
    let mut s = String::with_capacity(bits.len());
    write_bits(&mut s, bits).expect("write to String");
    s
}

/// Parses arbitrary binary text (not required to lie in `F`).
pub fn parse_bits(text: &str) -> Result<Bits> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::BadSymbol(other)),
        })
        .collect()
}

pub fn parse_word(text: &str) -> Result<FiniteWord> {
    FiniteWord::from_bits(parse_bits(text)?)
}

impl std::str::FromStr for FiniteWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_word(s)
    }
}

/// The unique way `alpha` is built from `beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildDecomposition {
    pub base: FiniteWord,
    pub cut: usize,
    pub spacers: Vec<u64>,
    pub simple: bool,
}

impl BuildDecomposition {
    pub fn spacer_sum(&self) -> u64 {
        self.spacers.iter().sum()
    }

    /// Start positions of the `cut` expected copies of the base.
    pub fn expected_positions(&self) -> Vec<usize> {
        let lb = self.base.len();
        let mut pos = 0usize;
        let mut out = Vec::with_capacity(self.cut);
        out.push(0);
        for &a in &self.spacers {
            pos += lb + a as usize;
            out.push(pos);
        }
        out
    }

    pub fn recompose(&self) -> FiniteWord {
        self.base.recompose(&self.spacers)
    }
}

/// Greedy parse of `alpha` over `beta`: copy, maximal 1-run, copy, ...
/// Returns the spacer list, or `None` when there is no such tiling or it has
/// fewer than two copies.
pub fn decompose_bits(alpha: &BitsRef, beta: &BitsRef) -> Option<Vec<u64>> {
    let (la, lb) = (alpha.len(), beta.len());
    if lb == 0 || la <= lb || alpha[..lb] != *beta {
        return None;
    }
    let mut spacers = Vec::new();
    let mut pos = lb;
    while pos < la {
        let run = alpha[pos..].leading_ones();
        pos += run;
        if pos + lb > la || alpha[pos..pos + lb] != *beta {
            return None;
        }
        spacers.push(run as u64);
        pos += lb;
    }
    Some(spacers)
}

pub fn decompose(alpha: &FiniteWord, beta: &FiniteWord) -> Option<BuildDecomposition> {
    let spacers = decompose_bits(&alpha.bits, &beta.bits)?;
    let simple = spacers.windows(2).all(|w| w[0] == w[1]);
    Some(BuildDecomposition { base: beta.clone(), cut: spacers.len() + 1, spacers, simple })
}

pub fn is_built_from(alpha: &FiniteWord, beta: &FiniteWord) -> bool {
    decompose_bits(&alpha.bits, &beta.bits).is_some()
}

/// Expected (decomposition) and unexpected occurrences of `beta` in `alpha`.
pub fn expected_occurrences(alpha: &FiniteWord, beta: &FiniteWord) -> Result<(Vec<usize>, Vec<usize>)> {
    let dec = decompose(alpha, beta).ok_or(Error::NotBuiltFrom)?;
    let expected = dec.expected_positions();
    let unexpected =
        alpha.occurrences(beta.bits()).into_iter().filter(|p| expected.binary_search(p).is_err()).collect();
    Ok((expected, unexpected))
}

/// Every proper prefix `u` in `F` with `w` built from `u`, by increasing length.
pub fn builders(w: &FiniteWord) -> Vec<(FiniteWord, BuildDecomposition)> {
    builders_with(w, Strategy::default())
}

pub fn builders_with(w: &FiniteWord, strategy: Strategy) -> Vec<(FiniteWord, BuildDecomposition)> {
    let bits = w.bits();
    // A builder of length l needs w = u ... u, so 2l <= lh(w).
    let limit = bits.len() / 2;
    // Copies of u carry all zeros of w: q = Z(w) / Z(u) must be whole and
    // q lh(u) <= lh(w).
    let total = w.zeros() as usize;
    let zeros: Vec<usize> = bits[..limit]
        .iter()
        .scan(0, |z, b| {
            *z += usize::from(!*b);
            Some(*z)
        })
        .collect();
    exec::filter_map_range(strategy, limit, |i| {
        let l = i + 1;
        if bits[l - 1] || !total.is_multiple_of(zeros[i]) || (total / zeros[i]) * l > bits.len() {
            return None;
        }
        let spacers = decompose_bits(bits, &bits[..l])?;
        let base = FiniteWord::from_slice(&bits[..l]).ok()?;
        let simple = spacers.windows(2).all(|s| s[0] == s[1]);
        Some((base.clone(), BuildDecomposition { base, cut: spacers.len() + 1, spacers, simple }))
    })
}

pub(crate) fn occurrences_in(text: &BitsRef, pattern: &BitsRef, strategy: Strategy) -> Vec<usize> {
    let (n, m) = (text.len(), pattern.len());
    if m == 0 || m > n {
        return Vec::new();
    }
    exec::chunked_fold(
        strategy,
        n - m + 1,
        1 << 14,
        |range| range.filter(|&i| text[i..i + m] == *pattern).collect::<Vec<_>>(),
        |mut a, b| {
            a.extend(b);
            a
        },
    )
}
