//! ρ profiles and the basic open sets `O(N, r)` and `U(v, s)` of the code space.
//!
//! `ρ_{V,n}` is read off the presentation's stage words, so operations that
//! depend on the canonical indexing (the covers) first check that the stage
//! chain is certified canonical.

use num_traits::{One, Signed};

use crate::canonical::stage_chain_is_canonical;
use crate::error::{Error, Result};
use crate::rational::{pow2_neg, ratio, Rational};
use crate::words::{decompose, Aperiodicity, FiniteWord, WordPresentation};
use crate::DEFAULT_BUDGET;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoProfile {
    pub per_stage: Vec<Rational>,
    /// `ρ_V`, exact for periodic tails.
    pub limit: Option<Rational>,
    pub lower_bound: Rational,
}

pub fn rho_profile(p: &WordPresentation, n: usize) -> Result<RhoProfile> {
    let per_stage: Vec<Rational> = p.stats(n)?.iter().map(|s| s.rho()).collect();
    let limit = p.rho_limit();
    let lower_bound = limit.clone().unwrap_or_else(|| per_stage[n].clone());
    Ok(RhoProfile { per_stage, limit, lower_bound })
}

/// Three-valued membership answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    True,
    False,
    /// Undecided from the presented stages; `upper = None` means unbounded.
    Unknown {
        lower: Rational,
        upper: Option<Rational>,
    },
}

impl Membership {
    pub fn is_true(&self) -> bool {
        matches!(self, Membership::True)
    }

    fn from_bool(b: bool) -> Self {
        if b {
            Membership::True
        } else {
            Membership::False
        }
    }
}

/// A basic open set of the code space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Neighborhood {
    O { n: usize, r: Rational },
    U { v: FiniteWord, s: Rational },
}

impl Neighborhood {
    pub fn o(n: usize, r: Rational) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::InvalidStage(format!("radius {r} must be positive")));
        }
        Ok(Neighborhood::O { n, r })
    }

    pub fn u(v: FiniteWord, s: Rational) -> Result<Self> {
        if !s.is_positive() || s >= Rational::one() {
            return Err(Error::InvalidStage(format!("s = {s} must lie in (0, 1)")));
        }
        Ok(Neighborhood::U { v, s })
    }

    pub fn contains(&self, p: &WordPresentation) -> Result<Membership> {
        match self {
            Neighborhood::O { n, r } => in_o(p, *n, r),
            Neighborhood::U { v, s } => in_u(p, v, s),
        }
    }
}

/// `V ∈ O(N, r)`: all `ρ_{V,m}`, `m >= N`, within `r` of each other. Since
/// the profile is nondecreasing this is `ρ_V - ρ_{V,N} <= r`.
pub fn in_o(p: &WordPresentation, n: usize, r: &Rational) -> Result<Membership> {
    match p.rho_limit() {
        Some(limit) => Ok(Membership::from_bool(limit - p.rho_at(n)? <= *r)),
        None => {
            let last = p.horizon().expect("finite tail");
            let stats = p.stats(last.max(n))?;
            let gap = stats[last].rho() - stats[n].rho();
            if gap > *r {
                Ok(Membership::False)
            } else {
                Ok(Membership::Unknown { lower: gap, upper: None })
            }
        }
    }
}

/// `L(α, β)`: fraction of `α` outside the expected copies of `β`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllValue {
    pub value: Rational,
    pub finite_stage: bool,
}

pub fn ell_finite(alpha: &FiniteWord, beta: &FiniteWord) -> Result<EllValue> {
    let d = decompose(alpha, beta).ok_or(Error::NotBuiltFrom)?;
    Ok(EllValue { value: ratio(d.spacer_sum(), alpha.len() as u64), finite_stage: true })
}

/// `L(V, v)` or bounds on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllEstimate {
    pub exact: Option<EllValue>,
    pub lower: Rational,
    pub upper: Rational,
}

/// `(ρ_n - ρ_v) / (1 + ρ_n)`: `L(v_n, v)` written through ρ.
fn ell_from_rho(rho_n: &Rational, rho_v: &Rational) -> Rational {
    (rho_n - rho_v) / (Rational::one() + rho_n)
}

/// Smallest stage index whose word is `v` or built from `v`, or `NotBuiltFrom`.
pub fn stage_built_from(p: &WordPresentation, v: &FiniteWord, budget: u64) -> Result<usize> {
    let stats = |n| p.length(n);
    let mut j = 0;
    while stats(j)? < v.len().into() {
        j += 1;
        if !p.has_stage_word(j) {
            return Err(Error::NotBuiltFrom);
        }
    }
    // A few stages of slack for presentations whose stage words straddle v.
    for k in j..j + 4 {
        if !p.has_stage_word(k) {
            break;
        }
        let vk = match p.expand(k, budget) {
            Ok(w) => w,
            Err(Error::BudgetExceeded { .. }) => break,
            Err(e) => return Err(e),
        };
        if !v.is_prefix_of(&vk) {
            return Err(Error::NotBuiltFrom);
        }
        if &vk == v || decompose(&vk, v).is_some() {
            return Ok(k);
        }
    }
    Err(Error::NotBuiltFrom)
}

pub fn ell(p: &WordPresentation, v: &FiniteWord) -> Result<EllEstimate> {
    stage_built_from(p, v, DEFAULT_BUDGET)?;
    let rho_v = v.rho();
    match p.rho_limit() {
        Some(limit) => {
            let value = Rational::one() - (Rational::one() + &rho_v) / (Rational::one() + limit);
            Ok(EllEstimate {
                exact: Some(EllValue { value: value.clone(), finite_stage: false }),
                lower: value.clone(),
                upper: value,
            })
        }
        None => {
            let last = p.horizon().expect("finite tail");
            let lower = ell_from_rho(&p.rho_at(last)?, &rho_v);
            Ok(EllEstimate { exact: None, lower, upper: Rational::one() })
        }
    }
}

/// `V ∈ U(v, s)`: `V` built from `v` and `L(V, v) <= s`.
pub fn in_u(p: &WordPresentation, v: &FiniteWord, s: &Rational) -> Result<Membership> {
    let est = match ell(p, v) {
        Ok(e) => e,
        Err(Error::NotBuiltFrom) => return Ok(Membership::False),
        Err(e) => return Err(e),
    };
    Ok(match est.exact {
        Some(e) => Membership::from_bool(e.value <= *s),
        None if est.lower > *s => Membership::False,
        None => Membership::Unknown { lower: est.lower, upper: Some(est.upper) },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UToOCover {
    pub ball_radius: Rational,
    pub n: usize,
    pub r: Rational,
}

fn check_nondegenerate(p: &WordPresentation) -> Result<()> {
    if p.aperiodicity() == Aperiodicity::Periodic {
        return Err(Error::DegeneratePresentation("spacers are eventually constant".into()));
    }
    Ok(())
}

/// An `O(N, r)`-ball around `p` inside `U(v, s)`.
pub fn u_to_o_cover(p: &WordPresentation, v: &FiniteWord, s: &Rational) -> Result<UToOCover> {
    if !in_u(p, v, s)?.is_true() {
        return Err(Error::NotMember);
    }
    check_nondegenerate(p)?;
    let mut n = 0;
    while p.length(n)? <= v.len().into() {
        n += 1;
    }
    if !stage_chain_is_canonical(p, n, DEFAULT_BUDGET)? {
        return Err(Error::NonCanonicalPresentation(n));
    }
    let rho_n = p.rho_at(n)?;
    let limit = p.rho_limit().expect("membership decided exactly");
    if limit <= rho_n {
        return Err(Error::DegeneratePresentation("no spacers after stage N".into()));
    }
    let one = Rational::one();
    let r = (&one + v.rho()) / (&one - s) - (&one + rho_n);
    if !r.is_positive() {
        return Err(Error::DegeneratePresentation(format!("radius {r} is not positive")));
    }
    Ok(UToOCover { ball_radius: pow2_neg(v.len() as u64), n, r })
}

/// A `U(v, s)` around `p` inside `O(N, r)`, with `v = v_{N+1}`.
pub fn o_to_u_cover(p: &WordPresentation, n: usize, r: &Rational) -> Result<(FiniteWord, Rational)> {
    if !in_o(p, n, r)?.is_true() {
        return Err(Error::NotMember);
    }
    check_nondegenerate(p)?;
    if !stage_chain_is_canonical(p, n + 1, DEFAULT_BUDGET)? {
        return Err(Error::NonCanonicalPresentation(n + 1));
    }
    let v = p.expand(n + 1, DEFAULT_BUDGET)?;
    let one = Rational::one();
    let s = &one - (&one + v.rho()) / (&one + r + p.rho_at(n)?);
    if !s.is_positive() || s >= one {
        return Err(Error::DegeneratePresentation(format!("s = {s} outside (0, 1)")));
    }
    Ok((v, s))
}

/// `L(v_n, v_0)` along the presented stages.
pub fn ell_along(p: &WordPresentation, n: usize) -> Result<Rational> {
    let stats = p.stats(n)?;
    Ok(ell_from_rho(&stats[n].rho(), &stats[0].rho()))
}
