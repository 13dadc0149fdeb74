//! Property suite over the bundled corpus.
//!
//! Every check is a pure function of one corpus word (or of the whole
//! corpus), so the suite fans out over the execution strategy.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::canonical::{canonical_report, distance, stage_chain_is_canonical, Status};
use crate::corpus::{self, CorpusWord};
use crate::exec::{self, Strategy};
use crate::isomorphism::{scheme_check, ReplacementScheme};
use crate::measure::{admissible_windows, cylinder_measure, CylinderSet};
use crate::rational::{int, pow2_neg, ratio, Rational};
use crate::tower::{build_tower, code_orbit, summability_report, tower_set, IntervalSet};
use crate::words::{decompose, parse_bits, Aperiodicity, WordPresentation};
use crate::DEFAULT_BUDGET;

pub const SUITES: [&str; 6] = ["words", "canonical", "topology", "isomorphism", "measure", "tower"];

type CheckResult = std::result::Result<(), String>;

struct Check {
    suite: &'static str,
    name: &'static str,
    run: fn(&WordPresentation) -> CheckResult,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub suite: &'static str,
    pub check: &'static str,
    pub word: &'static str,
    pub result: CheckResult,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub outcomes: Vec<Outcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.result.is_ok()).count()
    }

    pub fn failed(&self) -> usize {
        self.outcomes.len() - self.passed()
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> CheckResult {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: crate::Error) -> String {
    e.to_string()
}

/// Stages whose word has at most `limit` symbols.
fn small_stages(p: &WordPresentation, limit: u32) -> Vec<usize> {
    (0..).take_while(|&n| p.has_stage_word(n) && p.length(n).is_ok_and(|l| l <= BigUint::from(limit))).collect()
}

fn nondegenerate(p: &WordPresentation) -> bool {
    p.aperiodicity() == Aperiodicity::Aperiodic
}

fn words_stage_structure(p: &WordPresentation) -> CheckResult {
    let stages = small_stages(p, 10_000);
    for w in stages.windows(2) {
        let (n, m) = (w[0], w[1]);
        let (vn, vm) = (p.expand(n, DEFAULT_BUDGET).map_err(err)?, p.expand(m, DEFAULT_BUDGET).map_err(err)?);
        let stage = p.stage(n).ok_or("missing stage")?;
        let d = decompose(&vm, &vn).ok_or_else(|| format!("v_{m} not built from v_{n}"))?;
        ensure(d.spacers == stage.spacers, || format!("stage {n} spacers differ"))?;
        let gain = ratio(stage.spacer_sum(), stage.cut as u64 * vn.zeros());
        ensure(vm.rho() == vn.rho() + gain, || format!("rho increment fails at stage {n}"))?;
        ensure(p.rho_at(m).map_err(err)? == vm.rho(), || format!("rho_at({m}) differs from counting"))?;
    }
    Ok(())
}

fn canonical_chain(p: &WordPresentation) -> CheckResult {
    if !nondegenerate(p) || !p.is_periodic() {
        return Ok(());
    }
    ensure(stage_chain_is_canonical(p, 2, DEFAULT_BUDGET).map_err(err)?, || "stage chain not canonical".into())
}

fn canonical_stability(p: &WordPresentation) -> CheckResult {
    let stages = small_stages(p, 2_000);
    for w in stages.windows(2) {
        let (a, b) = (canonical_report(p, w[0]).map_err(err)?, canonical_report(p, w[1]).map_err(err)?);
        for e in a.elements.iter().filter(|e| e.status != Status::Provisional) {
            ensure(b.status_of(&e.word) == Some(e.status), || {
                format!("status of {} changed after stage {}", e.word, w[0])
            })?;
        }
    }
    Ok(())
}

fn topology_rho(p: &WordPresentation) -> CheckResult {
    let rhos =
        (0..8).filter(|&n| p.has_stage_word(n)).map(|n| p.rho_at(n)).collect::<crate::Result<Vec<_>>>().map_err(err)?;
    ensure(rhos.windows(2).all(|w| w[0] <= w[1]), || "rho_{V,n} not monotone".into())?;
    if let Some(limit) = p.rho_limit() {
        ensure(rhos.iter().all(|r| *r <= limit), || "rho_{V,n} exceeds its limit".into())?;
    }
    Ok(())
}

fn isomorphism_identity(p: &WordPresentation) -> CheckResult {
    let v = p.expand(1, DEFAULT_BUDGET).map_err(err)?;
    let scheme = ReplacementScheme::new(v.clone(), v).map_err(err)?;
    let depth = if p.is_periodic() { 2 } else { 1 };
    ensure(scheme_check(p, p, &scheme, depth).map_err(err)?, || "identity scheme rejected".into())
}

fn mu(p: &WordPresentation, w: &str) -> std::result::Result<Option<Rational>, String> {
    let c = CylinderSet::new(parse_bits(w).map_err(err)?, 0).ok_or("empty cylinder")?;
    Ok(cylinder_measure(p, &c).map_err(err)?.mu)
}

fn windows_stage(p: &WordPresentation, ell: usize) -> Option<usize> {
    (1..12).find(|&n| p.has_stage_word(n) && admissible_windows(p, ell, n).is_ok_and(|w| w.stabilized))
}

fn measure_normalization(p: &WordPresentation) -> CheckResult {
    if !p.is_periodic() {
        return Ok(());
    }
    for ell in 1..=4 {
        let n = windows_stage(p, ell).ok_or_else(|| format!("windows of length {ell} never stabilize"))?;
        let words = admissible_windows(p, ell, n).map_err(err)?.words;
        let mut total = Rational::zero();
        for w in &words {
            total += mu(p, w)?.ok_or("missing limit")?;
        }
        ensure(total.is_one(), || format!("length-{ell} measures sum to {total}"))?;
        for w in words.iter().filter(|w| w.len() < 4) {
            let parts = mu(p, &format!("{w}0"))?.zip(mu(p, &format!("{w}1"))?).map(|(a, b)| a + b);
            ensure(parts == mu(p, w)?, || format!("refinement fails for {w}"))?;
        }
    }
    let c = CylinderSet::new(parse_bits("0").map_err(err)?, 0).ok_or("empty")?;
    ensure(cylinder_measure(p, &c).map_err(err)?.mu0 == Some(Rational::one()), || "mu0(U_0) != 1".into())
}

fn tower_base(p: &WordPresentation) -> Option<Rational> {
    (!p.is_periodic()).then(|| ratio(1, 2))
}

fn tower_coding(p: &WordPresentation) -> CheckResult {
    for n in small_stages(p, 10_000) {
        let t = build_tower(p, n, tower_base(p)).map_err(err)?;
        let v = p.expand(n, DEFAULT_BUDGET).map_err(err)?;
        let code = code_orbit(&t, &Rational::zero(), v.len()).map_err(err)?;
        ensure(code == v.to_string(), || format!("coding differs at stage {n}"))?;
        if let Some(limit) = p.rho_limit() {
            let expected = (Rational::one() + v.rho()) / (Rational::one() + limit);
            ensure(t.support().measure() == expected, || format!("support measure wrong at stage {n}"))?;
        }
    }
    Ok(())
}

fn tower_measure_preservation(p: &WordPresentation) -> CheckResult {
    let n = *small_stages(p, 2_000).last().ok_or("no small stage")?;
    let t = build_tower(p, n, tower_base(p)).map_err(err)?;
    let a = IntervalSet::from_intervals(vec![(ratio(1, 7), ratio(2, 5)), (ratio(1, 2), ratio(5, 7))])
        .intersection(&t.domain());
    ensure(t.image(&a).measure() == a.measure(), || "T does not preserve lambda".into())?;
    let levels = tower_set(&t, &(0..t.height()).step_by(2).collect()).map_err(err)?;
    let count = int(levels.indices.len() as u64);
    ensure(levels.measure() == count * t.width(), || "level set measure differs from |S| width".into())
}

fn tower_summability(p: &WordPresentation) -> CheckResult {
    let s = summability_report(p);
    let Some(limit) = p.rho_limit() else {
        return ensure(s.converges.is_none(), || "finite tail reported convergence".into());
    };
    ensure(s.converges == Some(true), || "periodic tail not summable".into())?;
    let bound = s.bound.ok_or("missing bound")?;
    let cap = (Rational::one() + &limit) * (limit - p.rho_at(0).map_err(err)?);
    ensure(s.partial_sums.iter().all(|x| *x <= bound && *x <= cap), || "partial sums exceed bounds".into())
}

const CHECKS: [Check; 9] = [
    Check { suite: "words", name: "stage_structure", run: words_stage_structure },
    Check { suite: "canonical", name: "chain_canonical", run: canonical_chain },
    Check { suite: "canonical", name: "status_stability", run: canonical_stability },
    Check { suite: "topology", name: "rho_monotone", run: topology_rho },
    Check { suite: "isomorphism", name: "identity_scheme", run: isomorphism_identity },
    Check { suite: "measure", name: "normalization_refinement", run: measure_normalization },
    Check { suite: "tower", name: "coding_identity", run: tower_coding },
    Check { suite: "tower", name: "measure_preservation", run: tower_measure_preservation },
    Check { suite: "tower", name: "summability", run: tower_summability },
];

/// Exact pairwise distances on the metric corpus satisfy the strong
/// triangle inequality and never exceed 1/2.
fn ultrametric(words: &[CorpusWord]) -> CheckResult {
    let k = words.len();
    let mut d = vec![vec![Rational::zero(); k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let r = distance(&words[i].presentation, &words[j].presentation, 4).map_err(err)?;
            let x = r.exact.ok_or_else(|| format!("{} / {} not exact", words[i].name, words[j].name))?;
            ensure(x <= pow2_neg(1), || "distance above 1/2".into())?;
            d[i][j] = x.clone();
            d[j][i] = x;
        }
    }
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                ensure(d[a][c] <= (&d[a][b]).max(&d[b][c]).clone(), || "strong triangle inequality fails".into())?;
            }
        }
    }
    Ok(())
}

/// Runs `suite` (one of [`SUITES`] or `all`).
pub fn run_suite(suite: &str, strategy: Strategy) -> Option<VerifyReport> {
    if suite != "all" && !SUITES.contains(&suite) {
        return None;
    }
    let words = corpus::all();
    let jobs: Vec<(&Check, &CorpusWord)> = CHECKS
        .iter()
        .filter(|c| suite == "all" || c.suite == suite)
        .flat_map(|c| words.iter().map(move |w| (c, w)))
        .collect();
    let mut outcomes = exec::map(strategy, &jobs, |(c, w)| Outcome {
        suite: c.suite,
        check: c.name,
        word: w.name,
        result: (c.run)(&w.presentation),
    });
    if suite == "all" || suite == "canonical" {
        outcomes.push(Outcome {
            suite: "canonical",
            check: "ultrametric",
            word: "*",
            result: ultrametric(&corpus::metric()),
        });
    }
    Some(VerifyReport { outcomes })
}
