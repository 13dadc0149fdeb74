//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rankone::canonical::{canonical_report, distance, Status};
use rankone::isomorphism::{densify, scheme_check, ReplacementScheme};
use rankone::measure::{cylinder_measure, CylinderSet};
use rankone::rational::{pow2_neg, ratio};
use rankone::sample::{random_extension_with, random_presentation_with, SampleShape};
use rankone::topology::{ell, ell_along, in_o, in_u, o_to_u_cover, u_to_o_cover};
use rankone::tower::{build_tower, code_orbit, tower_set, weak_distance};
use rankone::words::{decompose, parse_bits};
use rankone::{corpus, FiniteWord, Rational, Stage, Tail, WordPresentation};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random word in F as a string.
fn random_f_word(rng: &mut impl Rng, max_len: usize) -> String {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|i| if i == 0 || i + 1 == len || rng.gen_bool(0.6) { '0' } else { '1' }).collect()
}

fn word(s: &str) -> FiniteWord {
    s.parse().expect("word in F")
}

fn build(beta: &str, spacers: &[u64]) -> String {
    let mut out = beta.to_string();
    for &a in spacers {
        out.push_str(&"1".repeat(a as usize));
        out.push_str(beta);
    }
    out
}

/// Spacer sequence of `alpha` over `beta` by direct string matching.
fn oracle_spacers(alpha: &str, beta: &str) -> Option<Vec<u64>> {
    if alpha.len() <= beta.len() || !alpha.starts_with(beta) {
        return None;
    }
    let mut rest = &alpha[beta.len()..];
    let mut spacers = Vec::new();
    while !rest.is_empty() {
        let ones = rest.len() - rest.trim_start_matches('1').len();
        rest = rest[ones..].strip_prefix(beta)?;
        spacers.push(ones as u64);
    }
    Some(spacers)
}

fn oracle_simple(alpha: &str, beta: &str) -> Option<bool> {
    oracle_spacers(alpha, beta).map(|s| s.windows(2).all(|w| w[0] == w[1]))
}

fn zeros(s: &str) -> u64 {
    s.bytes().filter(|&b| b == b'0').count() as u64
}

fn rho_of(s: &str) -> Rational {
    ratio(s.len() as u64 - zeros(s), zeros(s))
}

fn c1_rho_increment() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(1);
    let mut done = 0;
    while done < 1000 {
        let beta = random_f_word(&mut rng, 60);
        let q = rng.gen_range(2..=12);
        let spacers: Vec<u64> = (1..q).map(|_| rng.gen_range(0..=6)).collect();
        let alpha = build(&beta, &spacers);
        if alpha.len() > 10_000 {
            continue;
        }
        let a: u64 = spacers.iter().sum();
        let expected = rho_of(&beta) + ratio(a, q as u64 * zeros(&beta));
        check(rho_of(&alpha) == expected, || format!("counting oracle disagrees for {beta} {spacers:?}"))?;
        check(word(&alpha).rho() == expected, || format!("library rho wrong for {beta} {spacers:?}"))?;
        let d = decompose(&word(&alpha), &word(&beta)).ok_or("decompose failed")?;
        check(d.spacers == spacers, || "decomposition spacers differ".into())?;
        done += 1;
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!("1000 builds exact, {:.2}s", t.as_secs_f64()))
}

fn c2_simple_build() -> Outcome {
    let mut rng = rng(2);
    let (mut done, mut tried) = (0, 0);
    while done < 500 {
        tried += 1;
        let gamma = random_f_word(&mut rng, 8);
        let spacers = |rng: &mut ChaCha8Rng, a: u64| -> Vec<u64> {
            let q = rng.gen_range(2..=4);
            let uniform = rng.gen_bool(0.7);
            (1..q).map(|_| if uniform { a } else { rng.gen_range(0..=3) }).collect()
        };
        let a = rng.gen_range(0..=3);
        let beta = build(&gamma, &spacers(&mut rng, a));
        let alpha = build(&beta, &spacers(&mut rng, a));
        let (alpha_w, beta_w, gamma_w) = (word(&alpha), word(&beta), word(&gamma));
        let Some(d) = decompose(&alpha_w, &gamma_w) else { return Err("alpha not built from gamma".into()) };
        check(Some(d.simple) == oracle_simple(&alpha, &gamma), || "simplicity differs from oracle".into())?;
        if !d.simple {
            continue;
        }
        let inner = decompose(&beta_w, &gamma_w).ok_or("beta not built from gamma")?;
        let outer = decompose(&alpha_w, &beta_w).ok_or("alpha not built from beta")?;
        check(inner.simple && outer.simple, || format!("lemma fails for {gamma} -> {beta} -> {alpha}"))?;
        done += 1;
    }
    Ok(format!("500 simple chains ({tried} drawn)"))
}

/// Statuses from the corrected definition with witnesses inside `v_n`.
fn oracle_statuses(vn: &str) -> Vec<(String, Status)> {
    let mut elems: Vec<String> = (1..=vn.len() / 2)
        .map(|l| vn[..l].to_string())
        .filter(|u| u.ends_with('0') && oracle_spacers(vn, u).is_some())
        .collect();
    elems.push(vn.to_string());
    let frontier = vn;
    elems
        .iter()
        .map(|v| {
            let builders: Vec<&String> = elems.iter().filter(|u| oracle_spacers(v, u).is_some()).collect();
            let witness =
                builders.iter().any(|u| elems.iter().any(|w| w.len() > v.len() && oracle_simple(w, u) == Some(true)));
            let status = if witness {
                Status::CertifiedNoncanonical
            } else if builders
                .iter()
                .all(|u| oracle_simple(v, u) != Some(true) || oracle_simple(frontier, u) == Some(false))
            {
                Status::CertifiedCanonical
            } else {
                Status::Provisional
            };
            (v.clone(), status)
        })
        .collect()
}

fn c3_canonical_oracle() -> Outcome {
    let mut compared = 0;
    for cw in corpus::all() {
        let p = &cw.presentation;
        for n in (0..).take_while(|&n| p.has_stage_word(n) && p.length(n).is_ok_and(|l| l <= 64u32.into())) {
            let report = canonical_report(p, n).map_err(|e| e.to_string())?;
            let got: Vec<(String, Status)> = report.elements.iter().map(|e| (e.word.to_string(), e.status)).collect();
            let vn = p.expand(n, 1000).map_err(|e| e.to_string())?.to_string();
            check(got == oracle_statuses(&vn), || format!("{} stage {n} differs from oracle", cw.name))?;
            for m in n + 1..=n + 3 {
                if !p.has_stage_word(m) {
                    break;
                }
                let later = canonical_report(p, m).map_err(|e| e.to_string())?;
                for e in report.elements.iter().filter(|e| e.status != Status::Provisional) {
                    check(later.status_of(&e.word) == Some(e.status), || {
                        format!("{}: status of {} changed between stages {n} and {m}", cw.name, e.word)
                    })?;
                }
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} reports match the oracle and stay stable"))
}

fn c4_ultrametric() -> Outcome {
    let words = corpus::metric();
    let k = words.len();
    let mut d = vec![vec![Rational::zero(); k]; k];
    let mut pairs = 0;
    for i in 0..k {
        for j in i + 1..k {
            let r = distance(&words[i].presentation, &words[j].presentation, 4).map_err(|e| e.to_string())?;
            let x = r.exact.ok_or_else(|| format!("{}/{} not exact", words[i].name, words[j].name))?;
            check(x <= ratio(1, 2), || "distance above 1/2".into())?;
            d[i][j] = x.clone();
            d[j][i] = x;
            pairs += 1;
        }
    }
    let mut triples = 0;
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                    check(d[x][z] <= d[x][y].clone().max(d[y][z].clone()), || {
                        "strong triangle inequality fails".into()
                    })?;
                }
                triples += 1;
            }
        }
    }
    check(pairs == 21 && triples == 35, || format!("{pairs} pairs, {triples} triples"))?;
    Ok("21 exact distances, 35 triples".into())
}

fn certified_upto(p: &WordPresentation, stage: usize, len: usize) -> Result<BTreeSet<String>, String> {
    let r = canonical_report(p, stage).map_err(|e| e.to_string())?;
    Ok(r.certified().filter(|w| w.len() <= len).map(|w| w.to_string()).collect())
}

fn c5_agreement() -> Outcome {
    let mut rng = rng(5);
    let shape = SampleShape { canonical_through: 1, ..SampleShape::default() };
    let mut pairs = 0;
    while pairs < 100 {
        let v = random_presentation_with(&mut rng, SampleShape { canonical_through: 3, ..shape });
        let n = rng.gen_range(0..=1);
        let Some(w) = random_extension_with(&mut rng, &v, n + 1, shape) else {
            return Err("no canonical extension".into());
        };
        if w.stage(n + 1) == v.stage(n + 1) {
            continue;
        }
        pairs += 1;
        let len = v.length(n).map_err(|e| e.to_string())?;
        let len = usize::try_from(len).map_err(|e| e.to_string())?;
        let (a, b) = (certified_upto(&v, n + 2, len)?, certified_upto(&w, n + 2, len)?);
        check(a == b && a.len() > n, || format!("certified elements differ: {a:?} vs {b:?}"))?;
    }
    Ok("100 pairs agree through lh(v_n)".into())
}

fn mu(p: &WordPresentation, w: &str) -> Option<Rational> {
    cylinder_measure(p, &CylinderSet::new(parse_bits(w).ok()?, 0)?).ok()?.mu
}

fn c6_chacon() -> Outcome {
    let p = WordPresentation::chacon();
    let rho = p.rho_limit().ok_or("no limit")?;
    check(rho == ratio(1, 2), || format!("rho_V = {rho}"))?;
    let a = rankone::tower::default_base(&p).map_err(|e| e.to_string())?;
    check(a == ratio(2, 3), || format!("a = {a}"))?;
    check(mu(&p, "0") == Some(ratio(2, 3)), || "mu(0)".into())?;
    check(mu(&p, "00") == Some(ratio(1, 3)), || "mu(00)".into())?;
    check(mu(&p, "11") == Some(Rational::zero()), || "mu(11)".into())?;
    let l = ell(&p, &word("0010")).map_err(|e| e.to_string())?;
    check(l.exact.map(|e| e.value) == Some(ratio(1, 9)), || "L(V, v_1)".into())?;
    check(in_o(&p, 1, &ratio(1, 6)).map_err(|e| e.to_string())?.is_true(), || "not in O(1, 1/6)".into())?;
    check(!in_o(&p, 1, &ratio(1, 7)).map_err(|e| e.to_string())?.is_true(), || "in O(1, 1/7)".into())?;
    Ok("all closed forms exact".into())
}

/// Keeps `keep` stages of `p` and appends a random sparse tail: cuts up to
/// 8 and spacers in {0, 1}, so later stages add little to ρ.
fn perturb_tail(rng: &mut ChaCha8Rng, p: &WordPresentation, keep: usize) -> WordPresentation {
    let mut stages: Vec<Stage> = (0..keep).map(|i| p.stage(i).expect("stage").clone()).collect();
    let block = rng.gen_range(1..=2);
    for _ in 0..rng.gen_range(0..=2) + block {
        stages.push(rankone::sample::random_stage(rng, 8, 1));
    }
    WordPresentation::new(p.stem().clone(), stages, Tail::Periodic(block)).expect("valid")
}

fn c7_covers() -> Outcome {
    let mut rng = rng(7);
    let shape = SampleShape { canonical_through: 3, ..SampleShape::default() };
    let (mut u_members, mut o_members) = (0, 0);
    for _ in 0..100 {
        let p = random_presentation_with(&mut rng, shape);
        let j = rng.gen_range(1..=2);
        let v = p.expand(j, 10_000).map_err(|e| e.to_string())?;
        let l = ell(&p, &v).map_err(|e| e.to_string())?.exact.ok_or("no exact L")?.value;
        let s = &l + (Rational::one() - &l) * ratio(rng.gen_range(1..=9), 20);
        let cover = u_to_o_cover(&p, &v, &s).map_err(|e| e.to_string())?;
        check(cover.r > Rational::zero(), || "r <= 0".into())?;
        let mut found = 0;
        for _ in 0..4000 {
            let w = perturb_tail(&mut rng, &p, cover.n);
            if in_o(&w, cover.n, &cover.r).map_err(|e| e.to_string())?.is_true() {
                check(in_u(&w, &v, &s).map_err(|e| e.to_string())?.is_true(), || {
                    "O-ball member outside U(v, s)".into()
                })?;
                found += 1;
                if found == 20 {
                    break;
                }
            }
        }
        check(found == 20, || format!("only {found} O-ball members sampled"))?;
        u_members += found;

        let n = rng.gen_range(0..=1);
        let gap = p.rho_limit().ok_or("no limit")? - p.rho_at(n).map_err(|e| e.to_string())?;
        let r = &gap + &gap * ratio(rng.gen_range(0..=4), 4);
        let (v, s) = o_to_u_cover(&p, n, &r).map_err(|e| e.to_string())?;
        let mut found = 0;
        for _ in 0..4000 {
            let w = perturb_tail(&mut rng, &p, n + 1);
            if in_u(&w, &v, &s).map_err(|e| e.to_string())?.is_true() {
                check(in_o(&w, n, &r).map_err(|e| e.to_string())?.is_true(), || "U member outside O(N, r)".into())?;
                found += 1;
                if found == 20 {
                    break;
                }
            }
        }
        check(found == 20, || format!("only {found} U members sampled"))?;
        o_members += found;
    }
    Ok(format!("{u_members} + {o_members} sampled members, 0 violations"))
}

fn c8_densify() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(8);
    let shape = SampleShape { canonical_through: 3, ..SampleShape::default() };
    for run in 0..50 {
        let pu = random_presentation_with(&mut rng, shape);
        let pv = random_presentation_with(&mut rng, shape);
        let eps = pow2_neg(rng.gen_range(3..=8));
        let limit = pu.rho_limit().ok_or("no limit")?;
        let constraints = (0..rng.gen_range(0..=3))
            .map(|_| {
                let n = rng.gen_range(0..=1);
                let gap = &limit - pu.rho_at(n).expect("stage");
                (n, &gap + &gap * ratio(rng.gen_range(0..=2), 4))
            })
            .collect::<Vec<_>>();
        let (pw, plan) = densify(&pu, &pv, &eps, &constraints).map_err(|e| format!("run {run}: {e}"))?;
        let lu = plan.u.len() as u64;
        check(plan.k0 >= 2 && lu <= plan.t0 && plan.t0 < 2 * lu, || format!("run {run}: k0/t0 window"))?;
        let mut n = plan.n0 + 1;
        let d = loop {
            match distance(&pw, &pu, n) {
                Ok(d) => break d,
                Err(rankone::Error::IdenticalPrefixUnresolved { .. }) => n += 1,
                Err(e) => return Err(e.to_string()),
            }
        };
        check(d.exact.as_ref().is_some_and(|d| *d < eps), || format!("run {run}: distance {d:?}"))?;
        for (n, r) in &constraints {
            check(in_o(&pw, *n, r).map_err(|e| e.to_string())?.is_true(), || {
                format!("run {run}: W not in O({n}, {r})")
            })?;
        }
        let scheme = ReplacementScheme::new(plan.v.clone(), plan.w.clone()).map_err(|e| e.to_string())?;
        check(scheme_check(&pv, &pw, &scheme, 1).map_err(|e| e.to_string())?, || format!("run {run}: scheme"))?;
    }
    Ok(format!("50 runs verified, {:.2}s", start.elapsed().as_secs_f64()))
}

fn c9_coding() -> Outcome {
    let mut stages = 0;
    for cw in corpus::all() {
        let p = &cw.presentation;
        let base = (!p.is_periodic()).then(|| ratio(1, 2));
        for n in (0..).take_while(|&n| p.has_stage_word(n) && p.length(n).is_ok_and(|l| l <= 10_000u32.into())) {
            let t = build_tower(p, n, base.clone()).map_err(|e| e.to_string())?;
            let v = p.expand(n, 10_000).map_err(|e| e.to_string())?;
            let code = code_orbit(&t, &Rational::zero(), v.len()).map_err(|e| e.to_string())?;
            check(code == v.to_string(), || format!("{} stage {n}: coding differs", cw.name))?;
            if let Some(limit) = p.rho_limit() {
                let expected = (Rational::one() + v.rho()) / (Rational::one() + limit);
                check(t.support().measure() == expected, || format!("{} stage {n}: support measure", cw.name))?;
            }
            stages += 1;
        }
    }
    Ok(format!("{stages} towers reproduce their stage words"))
}

fn c10_continuity() -> Outcome {
    let start = Instant::now();
    let chacon = WordPresentation::chacon();
    let limit = chacon.rho_limit().ok_or("no limit")?;
    let mut last_gap: Option<Rational> = None;
    for k in 2..=6 {
        let mut stages: Vec<Stage> = (0..k).map(|i| chacon.stage(i).expect("stage").clone()).collect();
        stages.push(Stage::new(3, vec![1, 2]).map_err(|e| e.to_string())?);
        let vk = WordPresentation::new(FiniteWord::zero(), stages, Tail::Periodic(1)).map_err(|e| e.to_string())?;
        let d = distance(&vk, &chacon, k + 1).map_err(|e| e.to_string())?;
        let lh = chacon.length(k).map_err(|e| e.to_string())?;
        let expected = pow2_neg(u64::try_from(lh).map_err(|e| e.to_string())?);
        check(d.exact == Some(expected), || format!("k = {k}: distance {d:?}"))?;
        let gap = (vk.rho_limit().ok_or("no limit")? - &limit).abs();
        check(last_gap.as_ref().is_none_or(|g| gap < *g), || format!("k = {k}: rho gap not decreasing"))?;
        last_gap = Some(gap);
    }
    let a = ratio(2, 3);
    let reference = build_tower(&chacon, 2, Some(a.clone())).map_err(|e| e.to_string())?;
    let set = tower_set(&reference, &BTreeSet::from([1, 4, 7])).map_err(|e| e.to_string())?;
    let mut bounds = Vec::new();
    for k in 3..=10 {
        let x = &a - pow2_neg(k);
        let t = build_tower(&chacon, 2, Some(x)).map_err(|e| e.to_string())?;
        bounds.push(weak_distance(&t, &reference, &set.intervals).upper);
    }
    check(bounds.windows(2).all(|w| w[1] <= w[0]), || "upper bounds increase".into())?;
    let last = bounds.last().expect("nonempty");
    check(*last < ratio(1, 100), || format!("upper bound {last} at k = 10"))?;
    let t = start.elapsed();
    check(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("distances 2^-lh(v_k) exact, weak bound at k = 10: {last}"))
}

fn c11_divergence() -> Outcome {
    // a_n = 2 lh(v_n) with q = 2 quadruples the length each stage.
    let mut stages = Vec::new();
    let mut h = 1u64;
    for _ in 0..8 {
        stages.push(Stage::new(2, vec![2 * h]).map_err(|e| e.to_string())?);
        h *= 4;
    }
    let p = WordPresentation::new(FiniteWord::zero(), stages, Tail::Finite).map_err(|e| e.to_string())?;
    let n =
        (0..=8).find(|&n| ell_along(&p, n).is_ok_and(|l| l > ratio(9, 10))).ok_or("L(v_n, v_0) stays below 9/10")?;
    let l = ell_along(&p, n).map_err(|e| e.to_string())?;
    Ok(format!("L(v_{n}, v_0) = {l}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("rho increment law", c1_rho_increment),
        ("simple-build lemma", c2_simple_build),
        ("canonicity oracle", c3_canonical_oracle),
        ("ultrametric", c4_ultrametric),
        ("agreement lemma", c5_agreement),
        ("Chacon closed forms", c6_chacon),
        ("cover formulas", c7_covers),
        ("density construction", c8_densify),
        ("coding identity", c9_coding),
        ("continuity of pi", c10_continuity),
        ("divergence", c11_divergence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
