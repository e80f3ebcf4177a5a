//! Route-agreement battery behind `segrelat verify`.
//!
//! Checks run in a fixed order and the battery stops at the first mismatch,
//! so a failing run always names exactly one broken identity.

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use segrelat::invariants::{
    beta_closed, beta_multiplicity, beta_phi, beta_series, beta_t, principal_specialization,
    rank_alpha_beta, rank_w_t_q, w_series, w_t, w_t_q, whitney_char, QRoute, RankRoute, WRoute,
};
use segrelat::multisym::{dimension, jacobi_trudi_det, phi_t};
use segrelat::perm::{factorial, partitions_of};
use segrelat::poset::{
    boolean_lattice, chain_census, fixture, mobius, segre_power, subspace_lattice, verify_el,
};
use segrelat::qpoly::q_binomial;
use segrelat::symfunc::{e_monomial, h_monomial, schur_to_h};
use segrelat::{Basis, Budget, MultiSymFunc, Partition, QPoly, QRatNF, RankSet};

use crate::render::{json, pairs_latex};
use crate::{CliError, Format, Outcome, Suite};

type Check = Result<(), String>;
type CheckFn = fn(&Params, &Budget) -> Check;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: segrelat::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

struct Params {
    nmax: usize,
    ts: Vec<usize>,
    w_tmax: usize,
    series_order: usize,
    poset_nmax: usize,
}

impl Params {
    fn for_suite(suite: Suite) -> Self {
        match suite {
            Suite::Small => Params {
                nmax: 4,
                ts: vec![2, 3],
                w_tmax: 6,
                series_order: 5,
                poset_nmax: 3,
            },
            Suite::Full => Params {
                nmax: 5,
                ts: vec![2, 3],
                w_tmax: 6,
                series_order: 6,
                poset_nmax: 4,
            },
        }
    }
}

fn brute_affordable(n: usize, t: usize, budget: &Budget) -> bool {
    num_traits::pow(factorial(n), t) <= BigUint::from(budget.tuples)
}

fn w_routes(p: &Params, b: &Budget) -> Check {
    for t in 1..=p.w_tmax {
        for n in 0..=p.nmax + 1 {
            let rec = lib(w_t(n, t, WRoute::Recurrence, b))?;
            let gen = lib(w_t(n, t, WRoute::Genfun, b))?;
            ensure(rec == gen, || {
                format!("w({n},{t}): recurrence {rec} vs genfun {gen}")
            })?;
            if n <= p.nmax {
                let dim = lib(w_t(n, t, WRoute::Dimension, b))?;
                ensure(rec == dim, || {
                    format!("w({n},{t}): recurrence {rec} vs dimension {dim}")
                })?;
            }
            if brute_affordable(n, t, b) {
                let brute = lib(w_t(n, t, WRoute::Brute, b))?;
                ensure(rec == brute, || {
                    format!("w({n},{t}): recurrence {rec} vs brute {brute}")
                })?;
            }
        }
    }
    Ok(())
}

fn beta_routes(p: &Params, _: &Budget) -> Check {
    for &t in &p.ts {
        let series = lib(beta_series(p.series_order, t))?;
        let scalars = lib(w_series(p.series_order, t))?;
        for n in 0..=p.series_order {
            let rec = lib(beta_t(n, t))?;
            ensure(rec == lib(beta_phi(n, t))?, || {
                format!("beta({n},{t}) recurrence vs Φ_t(e_n)")
            })?;
            ensure(rec == lib(beta_closed(n, t))?, || {
                format!("beta({n},{t}) recurrence vs closed sum")
            })?;
            ensure(rec == series[n], || {
                format!("beta({n},{t}) recurrence vs series inversion")
            })?;
            let w = lib(w_t(n, t, WRoute::Recurrence, &Budget::default()))?;
            ensure(dimension(&rec) == w.clone().into(), || {
                format!("dim beta({n},{t}) != w")
            })?;
            ensure(scalars[n] == w, || format!("scalar series at n={n}, t={t}"))?;
        }
    }
    Ok(())
}

fn multiplicities(p: &Params, _: &Budget) -> Check {
    for &t in &p.ts {
        for n in 1..=p.nmax {
            let s = lib(beta_t(n, t))?.to_s();
            let shapes = partitions_of(n);
            let mut keys: Vec<Vec<Partition>> = vec![vec![]];
            for _ in 0..t {
                keys = keys
                    .into_iter()
                    .flat_map(|k| {
                        shapes.iter().map(move |mu| {
                            let mut k = k.clone();
                            k.push(mu.clone());
                            k
                        })
                    })
                    .collect();
            }
            for key in keys {
                let m = lib(beta_multiplicity(n, t, &key))?;
                ensure(m >= BigInt::from(0), || {
                    format!("negative multiplicity at {key:?}")
                })?;
                ensure(s.coeff(&key) == m.clone().into(), || {
                    format!("multiplicity mismatch at {key:?}")
                })?;
            }
        }
    }
    Ok(())
}

fn positivity(p: &Params, _: &Budget) -> Check {
    for &t in &p.ts {
        for n in 0..=p.nmax {
            ensure(lib(beta_t(n, t))?.is_schur_nonnegative(), || {
                format!("beta({n},{t})")
            })?;
            for lambda in partitions_of(n) {
                ensure(
                    lib(phi_t(&h_monomial(&lambda), t))?.is_schur_nonnegative(),
                    || format!("Φ_{t}(h_{lambda})"),
                )?;
                ensure(
                    lib(phi_t(&e_monomial(&lambda), t))?.is_schur_nonnegative(),
                    || format!("Φ_{t}(e_{lambda})"),
                )?;
                if lambda.len() <= 2 {
                    let s = lib(phi_t(&schur_to_h(&lambda), t))?;
                    ensure(s.is_schur_nonnegative(), || format!("Φ_{t}(s_{lambda})"))?;
                }
            }
            for j in RankSet::all(n) {
                let (_, beta) = lib(rank_alpha_beta(n, t, &j, RankRoute::Recurrence))?;
                ensure(beta.is_schur_nonnegative(), || {
                    format!("rank beta({n},{t},{j})")
                })?;
            }
        }
    }
    Ok(())
}

fn rank_routes(p: &Params, _: &Budget) -> Check {
    for &t in &p.ts {
        for n in 1..=p.nmax {
            for j in RankSet::all(n) {
                let results: Vec<(MultiSymFunc, MultiSymFunc)> = RankRoute::ALL
                    .iter()
                    .map(|&r| lib(rank_alpha_beta(n, t, &j, r)))
                    .collect::<Result<_, _>>()?;
                for r in &results[1..] {
                    ensure(r == &results[0], || {
                        format!("rank routes differ at n={n}, t={t}, J={j}")
                    })?;
                }
                let mut sum = MultiSymFunc::zero(Basis::Z, vec![n; t]);
                for u in j.subsets() {
                    sum = lib(sum.try_add(&lib(rank_alpha_beta(n, t, &u, RankRoute::Syt))?.1))?;
                }
                ensure(sum == results[0].0, || {
                    format!("Σ_U β(U) != α(J) at n={n}, t={t}, J={j}")
                })?;
            }
            for k in 1..n {
                let j = lib(RankSet::initial(n, k))?;
                let beta = lib(rank_alpha_beta(n, t, &j, RankRoute::Syt))?.1;
                let hook = lib(phi_t(&schur_to_h(&lib(Partition::hook(n, k))?), t))?;
                ensure(beta == hook, || {
                    format!("consecutive ranks n={n}, t={t}, k={k}")
                })?;
            }
        }
    }
    Ok(())
}

fn q_routes(p: &Params, b: &Budget) -> Check {
    for t in 1..=3 {
        for n in 0..=p.nmax {
            let rec = lib(w_t_q(n, t, QRoute::Recurrence, b))?;
            ensure(rec.has_nonnegative_coeffs(), || {
                format!("W({n},{t}) has a negative coefficient")
            })?;
            let w = lib(w_t(n, t, WRoute::Recurrence, b))?;
            ensure(rec.eval_at_one() == w, || format!("W({n},{t})(1) != w"))?;
            if brute_affordable(n, t, b) {
                ensure(rec == lib(w_t_q(n, t, QRoute::Brute, b))?, || {
                    format!("W({n},{t}) brute")
                })?;
            }
            if t == 1 {
                let expected = QPoly::monomial(BigInt::from(1), n * n.saturating_sub(1) / 2);
                ensure(rec == expected, || format!("W({n},1) is not q^C(n,2)"))?;
            }
        }
    }
    for &t in &p.ts {
        for n in 1..=p.nmax {
            for j in RankSet::all(n) {
                let rec = lib(rank_w_t_q(n, t, &j, QRoute::Recurrence, b))?;
                if brute_affordable(n, t, b) {
                    let brute = lib(rank_w_t_q(n, t, &j, QRoute::Brute, b))?;
                    ensure(rec == brute, || {
                        format!("rank W({n},{t},{j}) brute vs recurrence")
                    })?;
                }
                let dim = dimension(&lib(rank_alpha_beta(n, t, &j, RankRoute::Recurrence))?.1);
                ensure(dim == rec.eval_at_one().into(), || {
                    format!("rank W({n},{t},{j})(1) != dim β(J)")
                })?;
            }
        }
    }
    Ok(())
}

fn specialization(p: &Params, b: &Budget) -> Check {
    for t in 1..=3 {
        for n in 0..=p.nmax.min(4) {
            let ps = lib(principal_specialization(&lib(beta_t(n, t))?))?;
            let w = lib(w_t_q(n, t, QRoute::Recurrence, b))?;
            ensure(ps == QRatNF::new(w, n, t), || format!("ps beta({n},{t})"))?;
            for j in RankSet::all(n) {
                let beta = lib(rank_alpha_beta(n, t, &j, RankRoute::Recurrence))?.1;
                let ps = lib(principal_specialization(&beta))?;
                let rank = lib(rank_w_t_q(n, t, &j, QRoute::Recurrence, b))?;
                ensure(ps.numerator == rank, || {
                    format!("ps rank beta({n},{t},{j})")
                })?;
            }
        }
    }
    // Whitney homology and its two rank-selected summands.
    for n in 1..=p.nmax.min(4) {
        for r in 1..=n {
            let wh = lib(whitney_char(n, 2, r))?;
            let ps = lib(principal_specialization(&wh))?;
            let w_r = lib(w_t_q(r, 2, QRoute::Recurrence, b))?;
            let expected = &lib(q_binomial(n, r))?.pow(2) * &w_r;
            ensure(ps.numerator == expected, || format!("ps WH_{r} of n={n}"))?;
            if r < n {
                let top = lib(RankSet::initial(n, r))?;
                let below = lib(RankSet::initial(n, r - 1))?;
                let sum = &lib(rank_w_t_q(n, 2, &top, QRoute::Recurrence, b))?
                    + &lib(rank_w_t_q(n, 2, &below, QRoute::Recurrence, b))?;
                ensure(ps.numerator == sum, || {
                    format!("WH_{r} of n={n} as two rank selections")
                })?;
            }
        }
        let mut alt = MultiSymFunc::zero(Basis::Z, vec![n; 2]);
        for r in 0..=n {
            let sign = if (n - r + 1) % 2 == 0 { 1 } else { -1 };
            let term = lib(whitney_char(n, 2, r))?.scale(&BigInt::from(sign).into());
            alt = lib(alt.try_add(&term))?;
        }
        ensure(alt.is_zero(), || {
            format!("Whitney alternating sum at n={n}")
        })?;
    }
    Ok(())
}

fn determinants(p: &Params, _: &Budget) -> Check {
    for &t in &p.ts {
        for n in 0..=p.nmax {
            for lambda in partitions_of(n) {
                let phi = lib(phi_t(&schur_to_h(&lambda), t))?;
                let det = lib(jacobi_trudi_det(&lambda, t, |i| MultiSymFunc::z_n(i, t)))?;
                ensure(phi == det, || format!("det(Z) for {lambda}, t={t}"))?;
                let dual = lib(jacobi_trudi_det(&lambda.conjugate(), t, |i| {
                    beta_t(i, t).expect("t >= 1")
                }))?;
                ensure(phi == dual, || format!("det(β) for {lambda}, t={t}"))?;
            }
        }
    }
    Ok(())
}

fn posets(p: &Params, b: &Budget) -> Check {
    for &t in &p.ts {
        for n in 2..=p.poset_nmax {
            if t == 3 && n > 3 {
                continue;
            }
            let pw = lib(segre_power(&lib(boolean_lattice(n, b))?, t, b))?;
            let mu = lib(mobius(&pw, None))?;
            let w = lib(w_t(n, t, WRoute::Recurrence, b))?;
            let signed = if n % 2 == 0 { w } else { -w };
            ensure(BigInt::from(mu) == signed, || format!("μ(B_{n}^({t}))"))?;
            ensure(lib(verify_el(&pw, b))?.pass, || {
                format!("EL on B_{n}^({t})")
            })?;
        }
    }
    let sub = lib(subspace_lattice(3, 2, b))?;
    let census = lib(chain_census(&sub, b))?;
    for w in &census.words {
        let letters: Vec<i64> = w.word.iter().map(|l| l.0[0]).collect();
        let inv = (0..letters.len())
            .flat_map(|i| (i + 1..letters.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| letters[i] > letters[j])
            .count();
        ensure(w.count == 1 << inv, || format!("B_3(2) word {letters:?}"))?;
    }
    let sq = lib(segre_power(&sub, 2, b))?;
    let w = lib(w_t_q(3, 2, QRoute::Recurrence, b))?.eval(&BigInt::from(2));
    ensure(BigInt::from(lib(mobius(&sq, None))?) == -w, || {
        "μ(B_3(2)^(2))".into()
    })?;
    ensure(lib(verify_el(&sq, b))?.pass, || "EL on B_3(2)^(2)".into())?;
    for name in ["repeated-labels", "repeated-labels-square"] {
        ensure(lib(verify_el(&lib(fixture(name))?, b))?.pass, || {
            format!("EL on {name}")
        })?;
    }
    let square = lib(fixture("repeated-labels-square"))?;
    ensure(lib(mobius(&square, None))? == -2, || {
        "μ of the fixture square".into()
    })?;
    ensure(lib(chain_census(&square, b))?.decreasing == 2, || {
        "decreasing chains of the fixture square".into()
    })?;
    Ok(())
}

#[derive(Serialize)]
struct CheckResult {
    name: &'static str,
    pass: bool,
    detail: Option<String>,
}

#[derive(Serialize)]
struct Report {
    suite: &'static str,
    pass: bool,
    checks: Vec<CheckResult>,
}

pub fn run(suite: Suite, fmt: Format, budget: &Budget) -> Result<Outcome, CliError> {
    let params = Params::for_suite(suite);
    let battery: [(&'static str, CheckFn); 9] = [
        ("w routes", w_routes),
        ("beta routes", beta_routes),
        ("irreducible multiplicities", multiplicities),
        ("positivity", positivity),
        ("rank-selection routes", rank_routes),
        ("q-polynomial routes", q_routes),
        ("principal specialization", specialization),
        ("Jacobi-Trudi determinants", determinants),
        ("poset oracle", posets),
    ];
    let mut checks = Vec::new();
    let mut failure = None;
    for (name, check) in battery {
        let result = check(&params, budget);
        let pass = result.is_ok();
        checks.push(CheckResult {
            name,
            pass,
            detail: result.as_ref().err().cloned(),
        });
        if let Err(msg) = result {
            failure = Some(format!("{name}: {msg}"));
            break;
        }
    }
    let report = Report {
        suite: match suite {
            Suite::Small => "small",
            Suite::Full => "full",
        },
        pass: failure.is_none(),
        checks,
    };
    let rows: Vec<(&str, String)> = report
        .checks
        .iter()
        .map(|c| {
            (
                c.name,
                if c.pass {
                    "PASS".into()
                } else {
                    format!("FAIL {}", c.detail.clone().unwrap_or_default())
                },
            )
        })
        .collect();
    let text = match fmt {
        Format::Json => json(&report),
        Format::Csv => {
            let mut out = String::from("check,result\n");
            for (name, result) in &rows {
                out.push_str(&format!("{name},{}\n", crate::render::csv_quote(result)));
            }
            out
        }
        Format::Latex => pairs_latex(&rows),
    };
    Ok(Outcome { text, failure })
}
