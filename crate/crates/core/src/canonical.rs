//! Canonical generating prefixes with certification, and the ultrametric `d`.
//!
//! Only finitely much of a presented word is ever examined, so each
//! candidate element carries a status. The candidates are the builders of
//! the stage word `v_n` plus `v_n` itself. A witness against `v` is a pair
//! `(u, w)` of candidates with `lh(u) < lh(v) < lh(w)`, `v` and `w` both built
//! from `u` and `w` built simply from `u`.
//!
//! * certified-noncanonical: a witness exists among the candidates;
//! * certified-canonical: no witness, and `v_n` is not built simply from any
//!   `u` that `v` is built simply from, so no longer word can ever witness;
//! * provisional: otherwise.

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::rational::{pow2_neg, Rational};
use crate::words::{builders_with, decompose_bits, FiniteWord, WordPresentation};
use crate::DEFAULT_BUDGET;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    CertifiedCanonical,
    CertifiedNoncanonical,
    Provisional,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::CertifiedCanonical => "certified-canonical",
            Status::CertifiedNoncanonical => "certified-noncanonical",
            Status::Provisional => "provisional",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub word: FiniteWord,
    pub status: Status,
    /// `(u, w)` for noncanonical elements.
    pub witness: Option<(FiniteWord, FiniteWord)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalReport {
    pub elements: Vec<Element>,
    pub stage_examined: usize,
}

impl CanonicalReport {
    pub fn certified(&self) -> impl Iterator<Item = &FiniteWord> {
        self.elements.iter().filter(|e| e.status == Status::CertifiedCanonical).map(|e| &e.word)
    }

    pub fn status_of(&self, w: &FiniteWord) -> Option<Status> {
        self.elements.iter().find(|e| &e.word == w).map(|e| e.status)
    }

    /// The examined stage word (always the last element).
    pub fn frontier(&self) -> &FiniteWord {
        &self.elements.last().expect("report is never empty").word
    }
}

pub fn canonical_report(p: &WordPresentation, n: usize) -> Result<CanonicalReport> {
    canonical_report_with(p, n, DEFAULT_BUDGET, Strategy::default())
}

pub fn canonical_report_with(
    p: &WordPresentation,
    n: usize,
    budget: u64,
    strategy: Strategy,
) -> Result<CanonicalReport> {
    let vn = p.expand(n, budget)?;
    Ok(report_for_word(&vn, n, strategy))
}

/// Report for an already materialized stage word.
pub fn report_for_word(vn: &FiniteWord, stage: usize, strategy: Strategy) -> CanonicalReport {
    let mut words: Vec<FiniteWord> = builders_with(vn, strategy).into_iter().map(|(u, _)| u).collect();
    words.push(vn.clone());
    let k = words.len();

    // simple[i][j] = Some(is_simple) when words[i] is built from words[j], j < i.
    let simple: Vec<Vec<Option<bool>>> = exec::map(strategy, &(0..k).collect::<Vec<_>>(), |&i| {
        (0..i)
            .map(|j| decompose_bits(words[i].bits(), words[j].bits()).map(|s| s.windows(2).all(|w| w[0] == w[1])))
            .collect()
    });

    let elements = (0..k)
        .map(|i| {
            let witness = (0..i).find_map(|j| {
                simple[i][j]?;
                (i + 1..k).find(|&l| simple[l][j] == Some(true)).map(|l| (words[j].clone(), words[l].clone()))
            });
            let status = if witness.is_some() {
                Status::CertifiedNoncanonical
            } else if (0..i).all(|j| simple[i][j] != Some(true) || simple[k - 1][j] == Some(false)) {
                Status::CertifiedCanonical
            } else {
                Status::Provisional
            };
            Element { word: words[i].clone(), status, witness }
        })
        .collect();
    CanonicalReport { elements, stage_examined: stage }
}

/// Whether the stage words `v_0 ..= v_n` are exactly the canonical elements
/// of length at most `lh(v_n)`, certified from the stage-`n + 1` report.
pub fn stage_chain_is_canonical(p: &WordPresentation, n: usize, budget: u64) -> Result<bool> {
    let look = if p.has_stage_word(n + 1) { n + 1 } else { n };
    let stage_words = p.expand_all(look, budget)?;
    let report = report_for_word(&stage_words[look], look, Strategy::default());
    let limit = stage_words[n].len();
    let chain = &stage_words[..=n];
    Ok(report.elements.iter().filter(|e| e.word.len() <= limit).all(|e| {
        let in_chain = chain.contains(&e.word);
        match e.status {
            Status::CertifiedCanonical => in_chain,
            Status::CertifiedNoncanonical => !in_chain,
            // Only the frontier of a finite presentation may stay open.
            Status::Provisional => look == n && e.word == stage_words[n],
        }
    }) && chain.iter().all(|w| report.status_of(w).is_some()))
}

/// `d(A, B)` with exact value when the examined prefixes decide it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceResult {
    pub exact: Option<Rational>,
    pub lower: Rational,
    pub upper: Rational,
}

pub fn distance(pa: &WordPresentation, pb: &WordPresentation, n: usize) -> Result<DistanceResult> {
    distance_with(pa, pb, n, DEFAULT_BUDGET)
}

pub fn distance_with(pa: &WordPresentation, pb: &WordPresentation, n: usize, budget: u64) -> Result<DistanceResult> {
    let ra = canonical_report_with(pa, n, budget, Strategy::default())?;
    let rb = canonical_report_with(pb, n, budget, Strategy::default())?;
    distance_from_reports(&ra, &rb)
}

/// Common canonical elements are prefixes of both words, so they live within
/// the common prefix of the two frontiers.
pub fn distance_from_reports(ra: &CanonicalReport, rb: &CanonicalReport) -> Result<DistanceResult> {
    let (fa, fb) = (ra.frontier().bits(), rb.frontier().bits());
    let common = fa.iter().zip(fb.iter()).take_while(|(x, y)| x == y).count();
    let certified_common = |max_len: usize| {
        ra.certified()
            .filter(|w| w.len() <= max_len && rb.status_of(w) == Some(Status::CertifiedCanonical))
            .map(|w| w.len())
            .max()
            .unwrap_or(1) as u64
    };
    if common == fa.len().min(fb.len()) {
        return Err(Error::IdenticalPrefixUnresolved { upper: pow2_neg(certified_common(common)) });
    }
    let possible = ra
        .elements
        .iter()
        .filter(|e| e.word.len() <= common && e.status != Status::CertifiedNoncanonical)
        .filter(|e| matches!(rb.status_of(&e.word), Some(s) if s != Status::CertifiedNoncanonical))
        .map(|e| e.word.len())
        .max()
        .unwrap_or(1) as u64;
    let certain = certified_common(common);
    let lower = pow2_neg(possible);
    let upper = pow2_neg(certain);
    Ok(DistanceResult { exact: (possible == certain).then(|| upper.clone()), lower, upper })
}
