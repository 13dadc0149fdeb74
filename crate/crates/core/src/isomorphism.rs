//! Replacement schemes and the density construction.
//!
//! A replacement scheme `(v, w)` pairs equal-length words such that `V` is
//! built from `v`, `W` from `w`, and both exponent streams
//! `V = v 1^a0 v 1^a1 v ...`, `W = w 1^b0 w 1^b1 w ...` coincide.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::canonical::{distance_with, stage_chain_is_canonical};
use crate::error::{Error, Result};
use crate::rational::{from_big, pow2_neg, ratio, Rational};
use crate::topology::{in_o, stage_built_from};
use crate::words::{builders, decompose, Aperiodicity, FiniteWord, Stage, Tail, WordPresentation};
use crate::DEFAULT_BUDGET;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplacementScheme {
    v: FiniteWord,
    w: FiniteWord,
}

impl ReplacementScheme {
    pub fn new(v: FiniteWord, w: FiniteWord) -> Result<Self> {
        if v.len() != w.len() {
            return Err(Error::SchemeLengthMismatch(v.len(), w.len()));
        }
        Ok(ReplacementScheme { v, w })
    }

    pub fn v(&self) -> &FiniteWord {
        &self.v
    }

    pub fn w(&self) -> &FiniteWord {
        &self.w
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeCheck {
    pub agrees: bool,
    /// Number of exponents compared.
    pub compared: usize,
    /// Agreement proven for the whole infinite stream.
    pub certified_infinite: bool,
}

/// Exponents of the stage-`j + depth` word over the scheme word found at stage `j`.
fn exponent_stream(p: &WordPresentation, base: &FiniteWord, depth: usize) -> Result<(usize, Vec<u64>)> {
    let j = stage_built_from(p, base, DEFAULT_BUDGET)?;
    let target = j + depth;
    if !p.has_stage_word(target) {
        return Err(Error::StageUnavailable(target));
    }
    let word = p.expand(target, DEFAULT_BUDGET)?;
    if &word == base {
        return Ok((j, Vec::new()));
    }
    let dec = decompose(&word, base).ok_or(Error::NotBuiltFrom)?;
    Ok((j, dec.spacers))
}

/// Compares the exponent streams `depth` stages past the stage where each
/// presentation first covers its scheme word.
pub fn scheme_check(
    pv: &WordPresentation,
    pw: &WordPresentation,
    scheme: &ReplacementScheme,
    depth: usize,
) -> Result<bool> {
    Ok(scheme_check_detail(pv, pw, scheme, depth)?.agrees)
}

pub fn scheme_check_detail(
    pv: &WordPresentation,
    pw: &WordPresentation,
    scheme: &ReplacementScheme,
    depth: usize,
) -> Result<SchemeCheck> {
    let (jv, sv) = exponent_stream(pv, &scheme.v, depth)?;
    let (jw, sw) = exponent_stream(pw, &scheme.w, depth)?;
    let compared = sv.len().min(sw.len());
    let agrees = sv[..compared] == sw[..compared];
    let certified_infinite = agrees && same_stage_stream(pv, jv, pw, jw, &scheme.v, &scheme.w);
    Ok(SchemeCheck { agrees, compared, certified_infinite })
}

/// Both presentations reach their scheme word exactly at the given stages and
/// run identical periodic stage streams from there on.
fn same_stage_stream(
    pv: &WordPresentation,
    jv: usize,
    pw: &WordPresentation,
    jw: usize,
    v: &FiniteWord,
    w: &FiniteWord,
) -> bool {
    let (Tail::Periodic(kv), Tail::Periodic(kw)) = (pv.tail(), pw.tail()) else {
        return false;
    };
    let exact = |p: &WordPresentation, j, x: &FiniteWord| p.expand(j, DEFAULT_BUDGET).is_ok_and(|y| &y == x);
    if !exact(pv, jv, v) || !exact(pw, jw, w) {
        return false;
    }
    let span = pv.stages().len().saturating_sub(jv).max(pw.stages().len().saturating_sub(jw)) + kv.lcm(&kw);
    (0..span).all(|t| pv.stage(jv + t) == pw.stage(jw + t))
}

/// Replaces `scheme.v` (the stage-`k` word of `p`) by `scheme.w`.
///
/// The stages below `w` are its chain of builders starting from `0`; the
/// stages above are copied from `p`.
pub fn scheme_apply(p: &WordPresentation, scheme: &ReplacementScheme, k: usize) -> Result<WordPresentation> {
    let vk = p.expand(k, DEFAULT_BUDGET)?;
    if vk != scheme.v {
        return Err(Error::StageMismatch { stage: k });
    }
    if scheme.v == scheme.w {
        return Ok(p.clone());
    }
    let mut stages = builder_chain_stages(&scheme.w);
    let (rest, tail) = p.stages_from(k);
    stages.extend(rest);
    WordPresentation::new(FiniteWord::zero(), stages, tail)
}

fn builder_chain_stages(w: &FiniteWord) -> Vec<Stage> {
    let mut chain = vec![FiniteWord::zero()];
    for (b, _) in builders(w) {
        if decompose(&b, chain.last().expect("nonempty")).is_some() {
            chain.push(b);
        }
    }
    chain.push(w.clone());
    chain
        .windows(2)
        .filter_map(|pair| decompose(&pair[1], &pair[0]))
        .map(|d| Stage { cut: d.cut, spacers: d.spacers })
        .collect()
}

/// Every parameter chosen by the density construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensifyPlan {
    pub n0: usize,
    pub u: FiniteWord,
    pub m0: usize,
    pub v: FiniteWord,
    pub k0: u64,
    pub t0: u64,
    pub c: Rational,
    pub delta: Option<Rational>,
    pub deltas: Vec<Rational>,
    pub big_m0: usize,
    pub big_m1: usize,
    pub r: Rational,
    pub w: FiniteWord,
    /// `d(W, U)`, exact.
    pub distance: Rational,
}

fn require_nondegenerate(p: &WordPresentation, name: &str) -> Result<()> {
    if p.aperiodicity() != Aperiodicity::Aperiodic {
        return Err(Error::DegeneratePresentation(format!("{name} is not certified aperiodic")));
    }
    Ok(())
}

fn floor_ratio(a: &BigUint, b: u64) -> BigUint {
    a / BigUint::from(b)
}

/// Builds `W ≈ V` inside the basic open set
/// `{d(·, U) < epsilon} ∩ O(N_1, r_1) ∩ ... ∩ O(N_p, r_p)` around `U`.
pub fn densify(
    pu: &WordPresentation,
    pv: &WordPresentation,
    epsilon: &Rational,
    constraints: &[(usize, Rational)],
) -> Result<(WordPresentation, DensifyPlan)> {
    require_nondegenerate(pu, "U")?;
    require_nondegenerate(pv, "V")?;
    for (n, r) in constraints {
        if !in_o(pu, *n, r)?.is_true() {
            return Err(Error::ConstraintViolated { n: *n, r: r.clone() });
        }
    }

    let first = constraints.iter().map(|(n, _)| n + 1).max().unwrap_or(0);
    let mut n0 = first;
    while pow2_neg(pu.length(n0)?.to_u64().ok_or(Error::BudgetExceeded { budget: DEFAULT_BUDGET })?) >= *epsilon {
        n0 += 1;
    }
    if !stage_chain_is_canonical(pu, n0, DEFAULT_BUDGET)? {
        return Err(Error::NonCanonicalPresentation(n0));
    }
    let u = pu.expand(n0, DEFAULT_BUDGET)?;
    let lu = u.len() as u64;
    let rho_u_n0 = u.rho();

    let deltas = constraints.iter().map(|(n, r)| Ok(r - &rho_u_n0 + pu.rho_at(*n)?)).collect::<Result<Vec<_>>>()?;
    let delta = deltas.iter().min().cloned();
    if delta.as_ref().is_some_and(|d| !d.is_positive()) {
        return Err(Error::DegeneratePresentation("δ is not positive".into()));
    }

    let copies = |m: usize| -> Result<BigUint> { Ok(floor_ratio(&pv.length(m)?, lu)) };
    let mut big_m0 = 0;
    while pv.length(big_m0)? < BigUint::from(4 * lu) {
        big_m0 += 1;
    }
    let vm0_stats = pv.stats(big_m0)?.pop().expect("nonempty");
    let c = from_big(&vm0_stats.zeros) / from_big(&(copies(big_m0)? - 1u32));

    let mut big_m1 = big_m0;
    let r = match &delta {
        Some(delta) => {
            let half = delta / Rational::from_integer(2.into());
            while ratio(2 * lu, 1) / from_big(&(copies(big_m1)? - 1u32)) >= half {
                big_m1 += 1;
            }
            delta / (Rational::from_integer(4.into()) * &c)
        }
        None => Rational::one(),
    };
    let mut m0 = big_m1;
    while !in_o(pv, m0, &r)?.is_true() {
        m0 += 1;
    }

    let v = pv.expand(m0, DEFAULT_BUDGET)?;
    let k0 = v.len() as u64 / lu - 2;
    let t0 = v.len() as u64 - (k0 + 1) * lu;
    let mut spacers = vec![0u64; k0 as usize - 1];
    spacers.push(t0);
    let w = u.recompose(&spacers);

    let mut stages: Vec<Stage> = (0..n0).map(|i| pu.stage(i).expect("expanded").clone()).collect();
    stages.push(Stage { cut: k0 as usize + 1, spacers });
    let (rest, tail) = pv.stages_from(m0);
    stages.extend(rest);
    let pw = WordPresentation::new(pu.stem().clone(), stages, tail)?;

    let mut plan =
        DensifyPlan { n0, u, m0, v, k0, t0, c, delta, deltas, big_m0, big_m1, r, w, distance: Rational::one() };
    plan.distance = verify_densify(pu, pv, &pw, epsilon, constraints, &plan)?;
    Ok((pw, plan))
}

fn fail(msg: impl Into<String>) -> Error {
    Error::PostconditionFailed(msg.into())
}

/// Re-checks every guarantee of the construction; returns `d(W, U)`.
fn verify_densify(
    pu: &WordPresentation,
    pv: &WordPresentation,
    pw: &WordPresentation,
    epsilon: &Rational,
    constraints: &[(usize, Rational)],
    plan: &DensifyPlan,
) -> Result<Rational> {
    let lu = plan.u.len() as u64;
    if plan.k0 < 2 {
        return Err(fail(format!("k0 = {} < 2", plan.k0)));
    }
    if !(lu <= plan.t0 && plan.t0 < 2 * lu) || plan.w.len() != plan.v.len() {
        return Err(fail("t0 outside [lh(u), 2 lh(u)) or lh(w) != lh(v)"));
    }
    let dec = decompose(&plan.w, &plan.u).ok_or_else(|| fail("w not built from u"))?;
    if dec.simple {
        return Err(fail("w is built simply from u"));
    }
    if builders(&plan.w).iter().any(|(b, _)| b.len() > plan.u.len()) {
        return Err(fail("w is built from a word longer than u"));
    }
    let gain = plan.w.rho() - plan.u.rho();
    if gain != ratio(plan.t0, (plan.k0 + 1) * plan.u.zeros()) {
        return Err(fail("ρ_w - ρ_u differs from t0 / ((k0 + 1) Z(u))"));
    }
    for (n, r) in constraints {
        if plan.w.rho() - pu.rho_at(*n)? > *r {
            return Err(fail(format!("ρ_w exceeds the O({n}, {r}) budget")));
        }
        if !in_o(pw, *n, r)?.is_true() {
            return Err(fail(format!("W not in O({n}, {r})")));
        }
    }
    if !stage_chain_is_canonical(pw, plan.n0 + 1, DEFAULT_BUDGET)? {
        return Err(fail("stage chain of W is not certified canonical"));
    }
    let scheme = ReplacementScheme::new(plan.v.clone(), plan.w.clone())?;
    let check = scheme_check_detail(pv, pw, &scheme, 1)?;
    if !check.agrees || !check.certified_infinite {
        return Err(fail("replacement scheme does not relate V and W"));
    }
    let mut n = plan.n0 + 1;
    let d = loop {
        match distance_with(pw, pu, n, DEFAULT_BUDGET) {
            Ok(d) => break d,
            Err(Error::IdenticalPrefixUnresolved { .. }) => n += 1,
            Err(e) => return Err(e),
        }
    };
    match d.exact {
        Some(d) if d < *epsilon => Ok(d),
        _ => Err(fail("distance to U not certified below epsilon")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn w(s: &str) -> FiniteWord {
        parse_word(s).unwrap()
    }

    fn chacon_with(stage2: Vec<u64>) -> WordPresentation {
        WordPresentation::new(
            FiniteWord::zero(),
            vec![
                Stage::new(3, vec![0, 1]).unwrap(),
                Stage::new(3, stage2).unwrap(),
                Stage::new(3, vec![0, 1]).unwrap(),
            ],
            Tail::Periodic(1),
        )
        .unwrap()
    }

    #[test]
    fn apply_then_check() {
        let p = WordPresentation::chacon();
        let s = ReplacementScheme::new(w("0010"), w("0110")).unwrap();
        let q = scheme_apply(&p, &s, 1).unwrap();
        assert_eq!(q.expand(1, 100).unwrap(), w("0110"));
        assert_eq!(q.stage(1), Some(&Stage::new(3, vec![0, 1]).unwrap()));
        assert!(q.is_periodic());
        let detail = scheme_check_detail(&p, &q, &s, 2).unwrap();
        assert!(detail.agrees && detail.certified_infinite);
        assert_eq!(detail.compared, 8);
    }

    #[test]
    fn identity_scheme() {
        let p = WordPresentation::chacon();
        let s = ReplacementScheme::new(w("0010"), w("0010")).unwrap();
        assert_eq!(scheme_apply(&p, &s, 1).unwrap(), p);
        assert!(scheme_check(&p, &p, &s, 1).unwrap());
        assert!(!scheme_check(&p, &chacon_with(vec![1, 0]), &s, 1).unwrap());
    }

    #[test]
    fn scheme_errors() {
        assert_eq!(ReplacementScheme::new(w("0010"), w("010")), Err(Error::SchemeLengthMismatch(4, 3)));
        let p = WordPresentation::chacon();
        let s = ReplacementScheme::new(w("0110"), w("0010")).unwrap();
        assert_eq!(scheme_apply(&p, &s, 1), Err(Error::StageMismatch { stage: 1 }));
        assert_eq!(scheme_check(&p, &p, &s, 1), Err(Error::NotBuiltFrom));
    }

    fn example_v() -> WordPresentation {
        WordPresentation::new(
            FiniteWord::zero(),
            vec![Stage::new(2, vec![2]).unwrap(), Stage::new(3, vec![1, 2]).unwrap()],
            Tail::Periodic(1),
        )
        .unwrap()
    }

    #[test]
    fn densify_chacon() {
        let pu = WordPresentation::chacon();
        let (pw, plan) = densify(&pu, &example_v(), &pow2_neg(4), &[(1, ratio(1, 6))]).unwrap();
        assert_eq!(plan.n0, 2);
        assert_eq!(plan.distance, pow2_neg(13));
        assert!(plan.k0 >= 2);
        assert!(in_o(&pw, 1, &ratio(1, 6)).unwrap().is_true());
    }

    #[test]
    fn densify_without_constraints() {
        let pu = WordPresentation::chacon();
        let (_, plan) = densify(&pu, &example_v(), &pow2_neg(3), &[]).unwrap();
        // 2^-lh(u_n) < 2^-3 first holds at u_1 = 0010.
        assert_eq!(plan.n0, 1);
        assert_eq!(plan.u, w("0010"));
        assert_eq!(plan.distance, pow2_neg(4));
    }

    #[test]
    fn densify_rejects_violated_constraint() {
        let pu = WordPresentation::chacon();
        let tiny = ratio(1, 1_000_000_000);
        assert_eq!(
            densify(&pu, &example_v(), &pow2_neg(4), &[(1, tiny.clone())]),
            Err(Error::ConstraintViolated { n: 1, r: tiny })
        );
    }
}
