use std::collections::BTreeSet;
use std::path::Path;

use rankone::canonical::{canonical_report, distance};
use rankone::isomorphism::{densify, scheme_apply, scheme_check_detail, ReplacementScheme};
use rankone::measure::{admissible_windows, cylinder_measure, CylinderSet};
use rankone::rational;
use rankone::topology::{ell, in_o, in_u, o_to_u_cover, rho_profile, u_to_o_cover, Membership};
use rankone::tower::{build_tower, code_orbit, summability_report, tower_set, weak_distance};
use rankone::verify::run_suite;
use rankone::words::{parse_bits, parse_presentation, write_presentation};
use rankone::{FiniteWord, Rational, WordPresentation};

use crate::error::{CliError, CliResult};
use crate::output::{opt, Output};
use crate::Command;

fn load(path: &Path) -> CliResult<WordPresentation> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_presentation(&text).map_err(|error| CliError::Lib { context: Some(path.display().to_string()), error })
}

fn rational_arg(name: &str, text: &str) -> CliResult<Rational> {
    rational::parse(text).ok_or_else(|| CliError::Input(format!("--{name}: expected a rational p/q, got {text:?}")))
}

fn word_arg(name: &str, text: &str) -> CliResult<FiniteWord> {
    text.parse().map_err(|error| CliError::Lib { context: Some(format!("--{name}")), error })
}

fn base_arg(name: &str, text: &Option<String>) -> CliResult<Option<Rational>> {
    text.as_deref().map(|t| rational_arg(name, t)).transpose()
}

fn membership(m: &Membership) -> String {
    match m {
        Membership::True => "true".into(),
        Membership::False => "false".into(),
        Membership::Unknown { lower, upper } => format!("unknown lower={lower} upper={}", opt(upper)),
    }
}

/// Output of a failed run: whatever was produced before the error, and the error.
pub type Failure = Box<(Option<Output>, CliError)>;

pub fn run(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Verify { suite } => verify(&suite),
        other => dispatch(other).map_err(|e| Box::new((None, e))),
    }
}

fn dispatch(command: Command) -> CliResult<Output> {
    match command {
        Command::Expand { word, stage, budget } => {
            let p = load(&word)?;
            let v = p.expand(stage, budget)?;
            let mut out = Output::new(vec!["stage", "length", "word"]);
            out.line(v.to_string());
            out.row(vec![stage.to_string(), v.len().to_string(), v.to_string()]);
            Ok(out)
        }
        Command::Canon { word, stage } => {
            let report = canonical_report(&load(&word)?, stage)?;
            let mut out = Output::new(vec!["length", "word", "status", "witness_u", "witness_w"]);
            for e in &report.elements {
                let (u, w) =
                    e.witness.as_ref().map_or((String::new(), String::new()), |(u, w)| (u.to_string(), w.to_string()));
                let witness = if u.is_empty() { String::new() } else { format!(" witness=({u}, {w})") };
                out.line(format!("{} {}{witness}", e.word, e.status.label()));
                out.row(vec![e.word.len().to_string(), e.word.to_string(), e.status.label().into(), u, w]);
            }
            Ok(out)
        }
        Command::Rho { word, stage } => {
            let profile = rho_profile(&load(&word)?, stage)?;
            let mut out = Output::new(vec!["stage", "rho"]);
            for (n, r) in profile.per_stage.iter().enumerate() {
                out.line(format!("rho_{n}={r}"));
                out.row(vec![n.to_string(), r.to_string()]);
            }
            match &profile.limit {
                Some(l) => out.line(format!("limit={l}")),
                None => out.line(format!("limit=none lower_bound={}", profile.lower_bound)),
            }
            out.row(vec!["limit".into(), opt(&profile.limit)]);
            Ok(out)
        }
        Command::Dist { a, b, stage } => {
            let d = distance(&load(&a)?, &load(&b)?, stage)?;
            let mut out = Output::new(vec!["exact", "lower", "upper"]);
            match &d.exact {
                Some(x) => out.line(format!("distance={x}")),
                None => out.line(format!("distance in [{}, {}]", d.lower, d.upper)),
            }
            out.row(vec![opt(&d.exact), d.lower.to_string(), d.upper.to_string()]);
            Ok(out)
        }
        Command::Nbhd { word, n, r, v, s, cover } => nbhd(&load(&word)?, n, r, v, s, cover),
        Command::Ell { word, v } => {
            let e = ell(&load(&word)?, &word_arg("v", &v)?)?;
            let mut out = Output::new(vec!["exact", "lower", "upper"]);
            let exact = e.exact.map(|x| x.value);
            match &exact {
                Some(x) => out.line(format!("L={x}")),
                None => out.line(format!("L in [{}, {}]", e.lower, e.upper)),
            }
            out.row(vec![opt(&exact), e.lower.to_string(), e.upper.to_string()]);
            Ok(out)
        }
        Command::Scheme { a, b, v, w, depth, stage } => {
            let scheme = ReplacementScheme::new(word_arg("v", &v)?, word_arg("w", &w)?)?;
            let pa = load(&a)?;
            match (b, stage) {
                (Some(b), _) => {
                    let c = scheme_check_detail(&pa, &load(&b)?, &scheme, depth)?;
                    let mut out = Output::new(vec!["agrees", "compared", "certified_infinite"]);
                    out.line(format!(
                        "agrees={} compared={} certified_infinite={}",
                        c.agrees, c.compared, c.certified_infinite
                    ));
                    out.row(vec![c.agrees.to_string(), c.compared.to_string(), c.certified_infinite.to_string()]);
                    Ok(out)
                }
                (None, Some(k)) => {
                    let p = scheme_apply(&pa, &scheme, k)?;
                    let text = write_presentation(&p);
                    let mut out = Output::new(vec!["presentation"]);
                    out.text = text.clone();
                    out.row(vec![text]);
                    Ok(out)
                }
                (None, None) => Err(CliError::Input("scheme needs --b (check) or --stage (apply)".into())),
            }
        }
        Command::Densify { u, v, eps, constraints } => {
            let eps = rational_arg("eps", &eps)?;
            let constraints = constraints
                .iter()
                .map(|c| {
                    let bad = || CliError::Input(format!("--constraint: expected N:r, got {c:?}"));
                    let (n, r) = c.split_once(':').ok_or_else(bad)?;
                    Ok((n.parse().map_err(|_| bad())?, rational_arg("constraint", r)?))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let (pw, plan) = densify(&load(&u)?, &load(&v)?, &eps, &constraints)?;
            let fields = [
                ("n0", plan.n0.to_string()),
                ("u", plan.u.to_string()),
                ("M0", plan.big_m0.to_string()),
                ("M1", plan.big_m1.to_string()),
                ("m0", plan.m0.to_string()),
                ("lh_v", plan.v.len().to_string()),
                ("k0", plan.k0.to_string()),
                ("t0", plan.t0.to_string()),
                ("c", plan.c.to_string()),
                ("delta", opt(&plan.delta)),
                ("r", plan.r.to_string()),
                ("lh_w", plan.w.len().to_string()),
                ("distance", plan.distance.to_string()),
            ];
            let mut out = Output::new(vec!["field", "value"]);
            for (k, v) in fields {
                out.line(format!("{k}={v}"));
                out.row(vec![k.into(), v]);
            }
            let text = write_presentation(&pw);
            out.text.push_str(&text);
            out.row(vec!["presentation".into(), text]);
            Ok(out)
        }
        Command::Tower { word, stage, base } => {
            let t = build_tower(&load(&word)?, stage, base_arg("base", &base)?)?;
            let mut out = Output::new(vec!["level_index", "left", "right", "label", "image_offset"]);
            out.text = t.export_table();
            for row in t.rows() {
                let off = row.image_offset.map_or_else(|| "-".to_string(), |o| o.to_string());
                out.row(vec![
                    row.level.to_string(),
                    row.left.to_string(),
                    row.right.to_string(),
                    row.label.to_string(),
                    off,
                ]);
            }
            Ok(out)
        }
        Command::Code { word, stage, steps, point, base } => {
            let t = build_tower(&load(&word)?, stage, base_arg("base", &base)?)?;
            let code = code_orbit(&t, &rational_arg("point", &point)?, steps)?;
            let mut out = Output::new(vec!["code"]);
            out.line(&code);
            out.row(vec![code]);
            Ok(out)
        }
        Command::Measure { word, alpha, position } => {
            let bits = parse_bits(&alpha).map_err(|error| CliError::Lib { context: Some("--alpha".into()), error })?;
            let c =
                CylinderSet::new(bits, position).ok_or_else(|| CliError::Input("--alpha must be nonempty".into()))?;
            let d = cylinder_measure(&load(&word)?, &c)?;
            let mut out = Output::new(vec!["stage", "estimate"]);
            out.line(format!("mu={} mu0={}", opt(&d.mu), opt(&d.mu0)));
            for (i, e) in d.stage_estimates.iter().enumerate() {
                let n = d.first_stage + i;
                out.line(format!("stage_{n}={e}"));
                out.row(vec![n.to_string(), e.to_string()]);
            }
            out.row(vec!["mu".into(), opt(&d.mu)]);
            out.row(vec!["mu0".into(), opt(&d.mu0)]);
            Ok(out)
        }
        Command::Windows { word, length, stage } => {
            let w = admissible_windows(&load(&word)?, length, stage)?;
            let mut out = Output::new(vec!["window"]);
            for x in &w.words {
                out.line(x);
                out.row(vec![x.clone()]);
            }
            out.line(format!("stabilized={}", w.stabilized));
            Ok(out)
        }
        Command::Weakdist { word, other, stage, base_a, base_b, levels } => {
            let pa = load(&word)?;
            let pb = match other {
                Some(path) => load(&path)?,
                None => pa.clone(),
            };
            let ta = build_tower(&pa, stage, base_arg("base-a", &base_a)?)?;
            let tb = build_tower(&pb, stage, base_arg("base-b", &base_b)?)?;
            let indices = levels
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<BTreeSet<_>, _>>()
                .map_err(|_| CliError::Input(format!("--levels: expected comma-separated indices, got {levels:?}")))?;
            let set = tower_set(&ta, &indices)?;
            let d = weak_distance(&ta, &tb, &set.intervals);
            let mut out = Output::new(vec!["set_measure", "lower", "upper"]);
            out.line(format!("set={} measure={}", set.intervals, set.measure()));
            out.line(format!("lower={} upper={}", d.lower, d.upper));
            out.row(vec![set.measure().to_string(), d.lower.to_string(), d.upper.to_string()]);
            Ok(out)
        }
        Command::Summable { word } => {
            let s = summability_report(&load(&word)?);
            let mut out = Output::new(vec!["n", "term", "partial_sum"]);
            for (n, (t, p)) in s.terms.iter().zip(&s.partial_sums).enumerate() {
                out.line(format!("term_{n}={t} sum_{n}={p}"));
                out.row(vec![n.to_string(), t.to_string(), p.to_string()]);
            }
            out.line(format!("converges={} bound={}", opt(&s.converges), opt(&s.bound)));
            Ok(out)
        }
        Command::Verify { .. } => unreachable!("handled in run"),
    }
}

fn nbhd(
    p: &WordPresentation,
    n: Option<usize>,
    r: Option<String>,
    v: Option<String>,
    s: Option<String>,
    cover: bool,
) -> CliResult<Output> {
    let mut out = Output::new(vec!["set", "member", "cover"]);
    match (n, r, v, s) {
        (Some(n), Some(r), None, None) => {
            let r = rational_arg("r", &r)?;
            let m = in_o(p, n, &r)?;
            out.line(format!("O({n}, {r}) member={}", membership(&m)));
            let mut cov = String::new();
            if cover {
                let (v, s) = o_to_u_cover(p, n, &r)?;
                cov = format!("U({v}, {s})");
                out.line(format!("cover {cov}"));
            }
            out.row(vec![format!("O({n}, {r})"), membership(&m), cov]);
        }
        (None, None, Some(v), Some(s)) => {
            let (v, s) = (word_arg("v", &v)?, rational_arg("s", &s)?);
            let m = in_u(p, &v, &s)?;
            out.line(format!("U({v}, {s}) member={}", membership(&m)));
            let mut cov = String::new();
            if cover {
                let c = u_to_o_cover(p, &v, &s)?;
                cov = format!("ball {} O({}, {})", c.ball_radius, c.n, c.r);
                out.line(format!("cover {cov}"));
            }
            out.row(vec![format!("U({v}, {s})"), membership(&m), cov]);
        }
        _ => return Err(CliError::Input("nbhd needs either --n and --r or --v and --s".into())),
    }
    Ok(out)
}

fn verify(suite: &str) -> Result<Output, Failure> {
    let report = run_suite(suite, rankone::exec::Strategy::default())
        .ok_or_else(|| Box::new((None, CliError::Input(format!("unknown suite {suite:?}")))))?;
    let mut out = Output::new(vec!["suite", "check", "word", "result"]);
    for o in &report.outcomes {
        let result = match &o.result {
            Ok(()) => "pass".to_string(),
            Err(e) => format!("FAIL {e}"),
        };
        out.line(format!("{}::{} [{}] {result}", o.suite, o.check, o.word));
        out.row(vec![o.suite.into(), o.check.into(), o.word.into(), result]);
    }
    out.line(format!("passed={} failed={}", report.passed(), report.failed()));
    if report.failed() > 0 {
        let msg = format!("{} checks failed", report.failed());
        return Err(Box::new((Some(out), CliError::Failed(msg))));
    }
    Ok(out)
}
