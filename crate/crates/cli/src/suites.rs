//! Verification sweeps. Each suite maps its parameters to a list of
//! independent cases, runs them on the rayon pool, and keeps the case order
//! fixed by the input ordering so output never depends on the worker count.

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Result};
use modhyp::distances::{
    distinct_distance_count, gap_experiment, general_pm_check, intersection_direct,
    intersection_via_lattice, prime_formula, set_s, sqrt_data, theorem14_eval,
};
use modhyp::geometry::{
    census_summary, check_special_line, no_ordinary_moduli, ordinary_count_for, points_on_line,
    special_line_expected, theorem6_bound, verify_collinearity_bounds, verify_lemma7,
    verify_theorem6, LineKey,
};
use modhyp::hyperbola::{enumerate_points, HyperbolaSpec};
use modhyp::ntcore::{gcd, legendre, prime_powers_in, primes_up_to, PrimePower};
use modhyp::{Int, MAX_MODULUS};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::fixtures::load_table;
use crate::report::{Case, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    OrdinaryModuli,
    PrimeLines,
    SpecialLine,
    Theorem6,
    Lemma7,
    Collinearity,
    PrimeDistance,
    Theorem14,
    Tables,
    GeneralPm,
    Gap,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::OrdinaryModuli,
        Suite::PrimeLines,
        Suite::SpecialLine,
        Suite::Theorem6,
        Suite::Lemma7,
        Suite::Collinearity,
        Suite::PrimeDistance,
        Suite::Theorem14,
        Suite::Tables,
        Suite::GeneralPm,
        Suite::Gap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::OrdinaryModuli => "ordinary-moduli",
            Suite::PrimeLines => "prime-lines",
            Suite::SpecialLine => "special-line",
            Suite::Theorem6 => "theorem6",
            Suite::Lemma7 => "lemma7",
            Suite::Collinearity => "collinearity",
            Suite::PrimeDistance => "prime-distance",
            Suite::Theorem14 => "theorem14",
            Suite::Tables => "tables",
            Suite::GeneralPm => "general-pm",
            Suite::Gap => "gap",
        }
    }
}

impl FromStr for Suite {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| anyhow!("unknown suite {s:?}"))
    }
}

/// Range parameters shared by the suites. Unset fields fall back to
/// per-suite defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SuiteParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Int>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Int>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<Int>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub all_a: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixtures: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 0x6d6f_6468_7970;

pub fn run(suite: Suite, params: &SuiteParams) -> Result<VerificationReport> {
    if let Some(n) = params.n_max {
        if !(2..=MAX_MODULUS).contains(&n) {
            bail!("--n-max must lie in [2, 2^31], got {n}");
        }
    }
    let cases = match suite {
        Suite::OrdinaryModuli => ordinary_moduli(params)?,
        Suite::PrimeLines => prime_lines(params)?,
        Suite::SpecialLine => special_line(params)?,
        Suite::Theorem6 => theorem6(params)?,
        Suite::Lemma7 => lemma7(params)?,
        Suite::Collinearity => collinearity(params)?,
        Suite::PrimeDistance => prime_distance(params)?,
        Suite::Theorem14 => theorem14(params)?,
        Suite::Tables => tables(params)?,
        Suite::GeneralPm => general_pm(params)?,
        Suite::Gap => gap(params)?,
    };
    Ok(VerificationReport::new(suite.name(), serde_json::to_value(params)?, cases))
}

fn collect<T: Sync, F>(items: &[T], f: F) -> Result<Vec<Case>>
where
    F: Fn(&T) -> Result<Case> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

fn ordinary_moduli(params: &SuiteParams) -> Result<Vec<Case>> {
    let n_max = params.n_max.unwrap_or(200);
    let expected: Vec<Int> = [2, 8, 12, 24].into_iter().filter(|&n| n <= n_max).collect();
    let found = no_ordinary_moduli(n_max)?;
    let mut cases = vec![Case::exact(
        json!({"n_max": n_max, "property": "moduli without ordinary lines"}),
        json!(expected),
        json!(found),
    )];
    for n in [3, 4, 6].into_iter().filter(|&n| n <= n_max) {
        cases.push(Case::exact(
            json!({"n": n, "property": "ordinary lines"}),
            json!(1),
            json!(ordinary_count_for(1, n)?),
        ));
    }
    Ok(cases)
}

fn odd_primes(limit: Int) -> Vec<Int> {
    primes_up_to(limit).into_iter().filter(|&p| p > 2).collect()
}

fn prime_list(params: &SuiteParams, default_max: Int) -> Vec<Int> {
    match params.p {
        Some(p) => vec![p],
        None => odd_primes(params.n_max.unwrap_or(default_max)),
    }
}

fn require_odd_prime(p: Int) -> Result<()> {
    if p < 3 || !modhyp::ntcore::is_prime(p) {
        bail!("--p must be an odd prime, got {p}");
    }
    Ok(())
}

fn prime_lines(params: &SuiteParams) -> Result<Vec<Case>> {
    let primes = prime_list(params, 101);
    let mut work = Vec::new();
    for &p in &primes {
        require_odd_prime(p)?;
        match params.a {
            Some(a) => work.push((a, p)),
            None => work.extend((1..p).map(|a| (a, p))),
        }
    }
    collect(&work, |&(a, p)| {
        let s = census_summary(&enumerate_points(HyperbolaSpec::new(a, p)?).points)?;
        Ok(Case::exact(
            json!({"a": a, "p": p}),
            json!({"ordinary": (p - 1) * (p - 2) / 2, "max_collinear": 2}),
            json!({"ordinary": s.ordinary_count(), "max_collinear": s.max_collinear()}),
        ))
    })
}

fn prime_powers_up_to(params: &SuiteParams, lo: Int, default_max: Int) -> Result<Vec<PrimePower>> {
    if let (Some(p), Some(m)) = (params.p, params.m) {
        return Ok(vec![PrimePower::new(p, m)?]);
    }
    let hi = params.n_max.unwrap_or(default_max);
    Ok(prime_powers_in(lo, hi)
        .into_iter()
        .filter(|q| params.p.is_none_or(|p| q.p() == p))
        .filter(|q| params.m.is_none_or(|m| q.m() == m))
        .collect())
}

fn special_line(params: &SuiteParams) -> Result<Vec<Case>> {
    let qs: Vec<PrimePower> = prime_powers_up_to(params, 9, 2500)?
        .into_iter()
        .filter(|q| q.m() >= 2)
        .collect();
    let mut cases = collect(&qs, |q| {
        Ok(Case::exact(
            json!({"n": q.n(), "p": q.p(), "m": q.m(), "line": format!("x + y = {}", q.n() + 2)}),
            json!(special_line_expected(*q)),
            json!(check_special_line(*q)?),
        ))
    })?;
    if qs.iter().any(|q| q.n() == 27) {
        let ps = enumerate_points(HyperbolaSpec::new(1, 27)?);
        let on = points_on_line(&ps, &LineKey::new(1, 1, -38)?);
        cases.push(Case::exact(json!({"n": 27, "line": "x + y = 38"}), json!(4), json!(on)));
    }
    Ok(cases)
}

fn theorem6(params: &SuiteParams) -> Result<Vec<Case>> {
    let qs = prime_powers_up_to(params, 3, 2500)?;
    collect(&qs, |q| {
        let r = verify_theorem6(*q)?;
        let b = theorem6_bound(*q);
        Ok(Case::new(
            json!({"n": q.n(), "p": q.p(), "m": q.m()}),
            json!({
                "c": b.c_constant.to_string(),
                "bound": r.bound.to_string(),
                "ordinary_at_least": r.bound_ceil.to_string(),
                "equality": r.equality_expected,
            }),
            json!({"ordinary": r.ordinary, "equality": r.equality}),
            r.pass(),
        ))
    })
}

fn odd_prime_powers_with_m2(params: &SuiteParams, default_max: Int) -> Result<Vec<PrimePower>> {
    Ok(prime_powers_up_to(params, 3, default_max)?
        .into_iter()
        .filter(|q| q.p() != 2 && q.m() >= 2)
        .collect())
}

fn lemma7(params: &SuiteParams) -> Result<Vec<Case>> {
    let a = params.a.unwrap_or(1);
    let qs = odd_prime_powers_with_m2(params, 1331)?;
    collect(&qs, |q| {
        let r = verify_lemma7(&enumerate_points(HyperbolaSpec::new(a, q.n())?))?;
        let shown: Vec<Value> = r
            .violations
            .iter()
            .take(5)
            .map(|v| json!({"line": [v.line.a, v.line.b, v.line.c], "points": v.points, "property": v.property}))
            .collect();
        Ok(Case::new(
            json!({"a": a, "n": q.n()}),
            json!({"violations": 0}),
            json!({
                "lines": r.lines_checked,
                "rich_lines": r.rich_lines,
                "violations": r.violations.len(),
                "first_violations": shown,
            }),
            r.pass(),
        ))
    })
}

fn collinearity(params: &SuiteParams) -> Result<Vec<Case>> {
    let a = params.a.unwrap_or(1);
    let qs: Vec<PrimePower> = prime_powers_up_to(params, 3, 1331)?
        .into_iter()
        .filter(|q| q.p() != 2)
        .collect();
    collect(&qs, |q| {
        let r = verify_collinearity_bounds(&enumerate_points(HyperbolaSpec::new(a, q.n())?))?;
        let min_class_lines = r.class_line_counts.values().min().copied().unwrap_or(0);
        Ok(Case::new(
            json!({"a": a, "n": q.n()}),
            json!({"max_collinear_at_most": r.bound, "collinear_classes": []}),
            json!({
                "max_collinear": r.max_collinear,
                "collinear_classes": r.collinear_classes,
                "min_class_lines": min_class_lines,
                "class_line_scale": r.class_line_scale.to_string(),
            }),
            r.pass(),
        ))
    })
}

fn prime_distance(params: &SuiteParams) -> Result<Vec<Case>> {
    let mut work = Vec::new();
    for p in prime_list(params, 499) {
        require_odd_prime(p)?;
        let mut avals: Vec<Int> = match params.a {
            Some(a) => vec![a],
            None if params.all_a => (1..p).collect(),
            None => vec![1, 2, 3, 4, p - 1],
        };
        avals.retain(|a| a.rem_euclid(p) != 0);
        avals.sort_unstable();
        avals.dedup();
        work.extend(avals.into_iter().map(|a| (a, p)));
    }
    collect(&work, |&(a, p)| {
        Ok(Case::exact(
            json!({"a": a, "p": p}),
            json!(prime_formula(a, p)?),
            json!(distinct_distance_count(HyperbolaSpec::new(a, p)?)),
        ))
    })
}

/// Units mod `p^2`, either all of them or a seeded sample.
fn units_mod_square(p: Int, params: &SuiteParams, salt: u64) -> Vec<Int> {
    let all: Vec<Int> = (1..p * p).filter(|a| a % p != 0).collect();
    match params.samples {
        Some(k) if !params.all_a && k < all.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed.unwrap_or(DEFAULT_SEED) ^ salt);
            let mut pick: Vec<Int> = all.choose_multiple(&mut rng, k).copied().collect();
            pick.sort_unstable();
            pick
        }
        _ => all,
    }
}

fn theorem14(params: &SuiteParams) -> Result<Vec<Case>> {
    let mut work = Vec::new();
    for p in prime_list(params, 31) {
        require_odd_prime(p)?;
        match params.a {
            Some(a) => work.push((a, p)),
            None => work.extend(units_mod_square(p, params, p as u64).into_iter().map(|a| (a, p))),
        }
    }
    collect(&work, |&(a, p)| {
        Ok(Case::exact(
            json!({"a": a, "p": p}),
            json!(theorem14_eval(a, p)?),
            json!(distinct_distance_count(HyperbolaSpec::new(a, p * p)?)),
        ))
    })
}

fn tables(params: &SuiteParams) -> Result<Vec<Case>> {
    let rows = load_table(params.fixtures.as_deref())?;
    collect(&rows, |r| {
        let n = PrimePower::new(r.p, r.m)?.n();
        Ok(Case::exact(
            json!({"p": r.p, "m": r.m, "a": r.a, "n": n}),
            json!(r.expected_count),
            json!(distinct_distance_count(HyperbolaSpec::new(r.a, n)?)),
        ))
    })
}

fn general_pm(params: &SuiteParams) -> Result<Vec<Case>> {
    let primes = match params.p {
        Some(p) => vec![p],
        None => vec![3, 5, 7],
    };
    let ms = match params.m {
        Some(m) => vec![m],
        None => vec![3, 4],
    };
    let avals = match params.a {
        Some(a) => vec![a],
        None => vec![1, 2, 3, 4],
    };
    let mut work = Vec::new();
    for &p in &primes {
        require_odd_prime(p)?;
        for &m in &ms {
            for &a in &avals {
                if gcd(a, p) == 1 {
                    work.push((a, PrimePower::new(p, m)?));
                }
            }
        }
    }
    collect(&work, |&(a, q)| {
        let r = general_pm_check(a, q)?;
        Ok(Case::new(
            json!({"a": a, "p": q.p(), "m": q.m(), "n": q.n()}),
            json!({
                "b_preimages": 2 * q.p_pow(q.m() - 1),
                "max_fiber_at_most": r.fiber_bound,
                "b_size_at_least": r.b_lower_bound.to_string(),
                "image_excess": r.correction_half.to_string(),
                "image_excess_quarter_form": r.correction_quarter.to_string(),
            }),
            json!({
                "image_size": r.image_size,
                "legendre": [r.chi_a, r.chi_minus_a],
                "b_sizes": [r.b1_size, r.b2_size],
                "b_preimages": [r.b1_preimages, r.b2_preimages],
                "max_fiber": r.max_fiber,
                "image_excess": r.excess.to_string(),
                "nonresidue_case_ok": r.nonresidue_case_ok,
                "half_identity_holds": r.half_identity_holds,
                "quarter_identity_holds": r.quarter_identity_holds,
            }),
            r.pass(),
        ))
    })
}

fn gap(params: &SuiteParams) -> Result<Vec<Case>> {
    let ks: Vec<u32> = match params.k {
        Some(k) => vec![k],
        None => vec![1, 2, 3],
    };
    let mut reports = Vec::new();
    for k in ks {
        reports.push(gap_experiment(k)?);
    }
    collect(&reports, |r| {
        Ok(Case::new(
            json!({"k": r.k, "a": r.a, "p": r.p}),
            json!({"s_size": 1u64 << r.k, "gap": (1i64 << r.k) - 1}),
            json!({
                "s_size": r.s.len(),
                "s": r.s,
                "intersection": r.intersection,
                "gap": r.gap,
                "distinct_count": r.distinct_count,
                "brute_force_count": r.brute_force_count,
            }),
            r.pass(),
        ))
    })
}

/// Agreement of the three intersection counts for every `(a, p)` with
/// `a` a nonzero square mod `p`.
pub fn intersection_cases(p_max: Int) -> Result<Vec<Case>> {
    let mut work = Vec::new();
    for p in odd_primes(p_max) {
        work.extend((1..p * p).filter(|&a| a % p != 0 && legendre(a, p) == 1).map(|a| (a, p)));
    }
    collect(&work, |&(a, p)| {
        let direct = intersection_direct(a, p)?;
        let lattice = intersection_via_lattice(a, p)?;
        let sd = sqrt_data(a, p)?;
        let s = if sd.j_p == Some(0) { Some(set_s(a, p)?.len()) } else { None };
        let pass = lattice.count() == direct && lattice.all_on_diagonal && s.is_none_or(|s| s == direct);
        Ok(Case::new(
            json!({"a": a, "p": p}),
            json!(direct),
            json!({"lattice": lattice.count(), "s": s}),
            pass,
        ))
    })
}
