//! Invariants of the Segre powers `B_n^(t)` and `B_n^(t)(q)`.
//!
//! Every quantity here can be produced by at least two unrelated routes; the
//! route enums exist so callers (and the verification battery) can compare
//! them.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::budget::Budget;
use crate::error::{invalid, Error, Result};
use crate::multisym::{self, phi_t, Basis, MultiSymFunc};
use crate::perm::{
    binomial, count_tuples_common_ascent, factorial, kostka, partitions_of, syt_count,
    syt_count_with_descents, weighted_tuples_common_ascent, AscentTarget, DescentMatch, Partition,
    RankSet,
};
use crate::qpoly::{q_binomial, q_multinomial, QPoly, QRatNF};
use crate::symfunc::{self, e_coefficient, e_to_h, int, schur_to_h};

fn check_t(t: usize) -> Result<()> {
    if t == 0 {
        invalid("t must be at least 1")
    } else {
        Ok(())
    }
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

thread_local! {
    static BETA: RefCell<HashMap<(usize, usize), MultiSymFunc>> = RefCell::new(HashMap::new());
}

/// `β_n^(t)` from `Σ_{i=0}^n (-1)^i β_i Z_{n-i} = 0` with `β_0 = 1`.
pub fn beta_t(n: usize, t: usize) -> Result<MultiSymFunc> {
    check_t(t)?;
    if let Some(b) = BETA.with(|m| m.borrow().get(&(n, t)).cloned()) {
        return Ok(b);
    }
    let b = if n == 0 {
        MultiSymFunc::one(t)
    } else {
        let mut acc = MultiSymFunc::zero(Basis::Z, vec![n; t]);
        for i in 0..n {
            let term = multisym::multiply(&beta_t(i, t)?, &MultiSymFunc::z_n(n - i, t))?;
            acc = acc.try_add(&term.scale(&int(sign(n - 1 - i))))?;
        }
        acc
    };
    BETA.with(|m| m.borrow_mut().insert((n, t), b.clone()));
    Ok(b)
}

/// `β_n^(t) = Φ_t(e_n)`.
pub fn beta_phi(n: usize, t: usize) -> Result<MultiSymFunc> {
    phi_t(&e_to_h(n), t)
}

/// `β_n^(t) = Σ_λ c_λ Z_λ` with `c_λ = (-1)^{n-ℓ} ℓ! / ∏ m_i!`.
pub fn beta_closed(n: usize, t: usize) -> Result<MultiSymFunc> {
    check_t(t)?;
    let terms = partitions_of(n).into_iter().map(|lambda| {
        let c = BigRational::from_integer(e_coefficient(&lambda));
        (vec![lambda; t], c)
    });
    MultiSymFunc::from_terms(Basis::Z, vec![n; t], terms)
}

/// Multiplicity of the irreducible `⊗_j S^{μ^j}` in the top homology of
/// `B_n^(t)`: `Σ_λ c_λ ∏_j K_{μ^j, λ}`.
pub fn beta_multiplicity(n: usize, t: usize, mus: &[Partition]) -> Result<BigInt> {
    check_t(t)?;
    if mus.len() != t {
        return invalid(format!("expected {t} partitions, got {}", mus.len()));
    }
    if let Some(mu) = mus.iter().find(|mu| mu.weight() != n) {
        return invalid(format!("{mu} is not a partition of {n}"));
    }
    let mut total = BigInt::zero();
    for lambda in partitions_of(n) {
        let mut prod = e_coefficient(&lambda);
        for mu in mus {
            prod *= kostka(mu, &lambda)?;
            if prod.is_zero() {
                break;
            }
        }
        total += prod;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WRoute {
    /// `Σ_{i=0}^n (-1)^i w_i C(n,i)^t = 0`.
    Recurrence,
    /// Count tuples in `S_n^t` with no common ascent.
    Brute,
    /// `Σ_λ (-1)^{n-ℓ} ℓ! ∏ i^{m_i} / z_λ · ∏_j Σ_μ f^μ K_{μλ}`.
    Dimension,
    /// Invert `Σ (-1)^n z^n / n!^t` as a rational power series.
    Genfun,
}

impl WRoute {
    pub const ALL: [WRoute; 4] = [
        WRoute::Recurrence,
        WRoute::Brute,
        WRoute::Dimension,
        WRoute::Genfun,
    ];
}

/// `w_n^(t)`, the number of decreasing maximal chains of `B_n^(t)`.
pub fn w_t(n: usize, t: usize, route: WRoute, budget: &Budget) -> Result<BigInt> {
    check_t(t)?;
    match route {
        WRoute::Recurrence => Ok(w_recurrence(n, t)),
        WRoute::Brute => {
            Ok(count_tuples_common_ascent(n, t, &AscentTarget::NoneCommon, budget)?.into())
        }
        WRoute::Dimension => Ok(w_dimension(n, t)),
        WRoute::Genfun => Ok(w_genfun(n, t).swap_remove(n)),
    }
}

fn w_recurrence(n: usize, t: usize) -> BigInt {
    let mut w: Vec<BigInt> = vec![BigInt::one()];
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for (i, wi) in w.iter().enumerate() {
            let term = wi * BigInt::from(num_traits::pow(binomial(m, i), t));
            acc += term * sign(m - 1 - i);
        }
        w.push(acc);
    }
    w.swap_remove(n)
}

fn w_dimension(n: usize, t: usize) -> BigInt {
    let mut total = BigRational::zero();
    for lambda in partitions_of(n) {
        let ell = lambda.len();
        let weight: BigUint = lambda
            .multiplicities()
            .iter()
            .map(|&(i, m)| num_traits::pow(BigUint::from(i), m))
            .product();
        let scalar = BigRational::new(
            BigInt::from(factorial(ell) * weight) * sign(n - ell),
            BigInt::from(symfunc::z_lambda(&lambda)),
        );
        let per_alphabet: BigUint = partitions_of(n)
            .iter()
            .map(|mu| {
                let k = kostka(mu, &lambda).expect("same weight");
                BigUint::from(syt_count(mu)) * BigUint::from(k)
            })
            .sum();
        total += scalar * BigRational::from_integer(num_traits::pow(per_alphabet, t).into());
    }
    debug_assert!(total.is_integer());
    total.to_integer()
}

/// `w_0, …, w_order` from `1 / Σ (-1)^n z^n / n!^t`, rescaled by `n!^t`.
fn w_genfun(order: usize, t: usize) -> Vec<BigInt> {
    let f: Vec<BigRational> = (0..=order)
        .map(|n| {
            BigRational::new(
                BigInt::from(sign(n)),
                BigInt::from(num_traits::pow(factorial(n), t)),
            )
        })
        .collect();
    let g = invert_series(&f);
    g.into_iter()
        .enumerate()
        .map(|(n, c)| {
            let scaled = c * BigRational::from_integer(num_traits::pow(factorial(n), t).into());
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect()
}

/// Reciprocal of a power series with constant term 1, truncated to the input
/// length.
fn invert_series(f: &[BigRational]) -> Vec<BigRational> {
    let mut g: Vec<BigRational> = Vec::with_capacity(f.len());
    for n in 0..f.len() {
        if n == 0 {
            g.push(BigRational::one() / &f[0]);
            continue;
        }
        let s = (1..=n).fold(BigRational::zero(), |acc, k| acc + &f[k] * &g[n - k]);
        g.push(-s / &f[0]);
    }
    g
}

/// `w_0^(t), …, w_order^(t)` read off the reciprocal generating function.
pub fn w_series(order: usize, t: usize) -> Result<Vec<BigInt>> {
    check_t(t)?;
    Ok(w_genfun(order, t))
}

/// `β_0^(t), …, β_order^(t)` as the graded pieces of
/// `(Σ_n (-1)^n u^n Z_n)^{-1}`.
pub fn beta_series(order: usize, t: usize) -> Result<Vec<MultiSymFunc>> {
    check_t(t)?;
    // Graded ring: degree-n coefficients live in different MultiSymFunc
    // spaces, so the inversion runs on the graded pieces directly.
    let f: Vec<MultiSymFunc> = (0..=order)
        .map(|n| MultiSymFunc::z_n(n, t).scale(&int(sign(n))))
        .collect();
    let mut g: Vec<MultiSymFunc> = vec![MultiSymFunc::one(t)];
    for n in 1..=order {
        let mut s = MultiSymFunc::zero(Basis::Z, vec![n; t]);
        for k in 1..=n {
            s = s.try_add(&multisym::multiply(&f[k], &g[n - k])?)?;
        }
        g.push(s.scale(&int(-1)));
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RankRoute {
    /// Sum `Φ_t(s_λ)` weighted by SYT descent counts.
    Syt,
    /// Remove the largest selected rank and recurse.
    Recurrence,
    /// `α` as a product of `Z`s, `β` by Möbius inversion over subsets.
    InclusionExclusion,
}

impl RankRoute {
    pub const ALL: [RankRoute; 3] = [
        RankRoute::Syt,
        RankRoute::Recurrence,
        RankRoute::InclusionExclusion,
    ];
}

/// Rank-selected characteristics `(α_n^(t)(J), β_n^(t)(J))`.
pub fn rank_alpha_beta(
    n: usize,
    t: usize,
    j: &RankSet,
    route: RankRoute,
) -> Result<(MultiSymFunc, MultiSymFunc)> {
    check_t(t)?;
    if j.ambient() != n {
        return invalid(format!(
            "rank set lives in [{}], not in [{}]",
            j.ambient().saturating_sub(1),
            n.saturating_sub(1)
        ));
    }
    match route {
        RankRoute::Syt => {
            let mut alpha = MultiSymFunc::zero(Basis::Z, vec![n; t]);
            let mut beta = alpha.clone();
            for lambda in partitions_of(n) {
                let contained = syt_count_with_descents(&lambda, j, DescentMatch::Contained)?;
                if contained == 0 {
                    continue;
                }
                let exact = syt_count_with_descents(&lambda, j, DescentMatch::Exact)?;
                let s = phi_t(&schur_to_h(&lambda), t)?;
                alpha = alpha.try_add(&s.scale(&int(contained as i64)))?;
                beta = beta.try_add(&s.scale(&int(exact as i64)))?;
            }
            Ok((alpha, beta))
        }
        RankRoute::Recurrence => {
            let beta = rank_beta_recurrence(n, t, j)?;
            let mut alpha = MultiSymFunc::zero(Basis::Z, vec![n; t]);
            for u in j.subsets() {
                alpha = alpha.try_add(&rank_beta_recurrence(n, t, &u)?)?;
            }
            Ok((alpha, beta))
        }
        RankRoute::InclusionExclusion => {
            let alpha = alpha_composition(n, t, j);
            let mut beta = MultiSymFunc::zero(Basis::Z, vec![n; t]);
            for u in j.subsets() {
                let term = alpha_composition(n, t, &u).scale(&int(sign(j.len() - u.len())));
                beta = beta.try_add(&term)?;
            }
            Ok((alpha, beta))
        }
    }
}

/// `Φ_t(h_{j_1} h_{j_2 - j_1} ⋯ h_{n - j_r})`.
fn alpha_composition(n: usize, t: usize, j: &RankSet) -> MultiSymFunc {
    if n == 0 {
        return MultiSymFunc::one(t);
    }
    let lambda = Partition::from_unsorted(j.composition());
    MultiSymFunc::z_lambda(&lambda, t)
}

/// `β_n(J) = β_{j_r}(J \ j_r) · Z_{n - j_r} - β_n(J \ j_r)`, `β_n(∅) = Z_n`.
fn rank_beta_recurrence(n: usize, t: usize, j: &RankSet) -> Result<MultiSymFunc> {
    let Some(top) = j.largest() else {
        return Ok(MultiSymFunc::z_n(n, t));
    };
    let rest = j.without_max();
    let lower = rank_beta_recurrence(top, t, &rest.with_ambient(top)?)?;
    let lifted = multisym::multiply(&lower, &MultiSymFunc::z_n(n - top, t))?;
    lifted.try_sub(&rank_beta_recurrence(n, t, &rest)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QRoute {
    Recurrence,
    Brute,
}

impl QRoute {
    pub const ALL: [QRoute; 2] = [QRoute::Recurrence, QRoute::Brute];
}

/// `W_n^(t)(q)`, the Möbius polynomial of `B_n^(t)(q)` up to sign.
pub fn w_t_q(n: usize, t: usize, route: QRoute, budget: &Budget) -> Result<QPoly> {
    check_t(t)?;
    match route {
        QRoute::Brute => weighted_tuples_common_ascent(n, t, &AscentTarget::NoneCommon, budget),
        QRoute::Recurrence => {
            let mut w = vec![QPoly::one()];
            for m in 1..=n {
                let mut acc = QPoly::zero();
                for (i, wi) in w.iter().enumerate() {
                    let term = &q_binomial(m, i)?.pow(t) * wi;
                    acc = if sign(m - 1 - i) > 0 {
                        &acc + &term
                    } else {
                        &acc - &term
                    };
                }
                w.push(acc);
            }
            Ok(w.swap_remove(n))
        }
    }
}

/// Rank-selected Betti polynomial `β̃_n^(t)(J)(q)` of `B_n^(t)(q)`.
pub fn rank_w_t_q(
    n: usize,
    t: usize,
    j: &RankSet,
    route: QRoute,
    budget: &Budget,
) -> Result<QPoly> {
    check_t(t)?;
    if j.ambient() != n {
        return invalid(format!(
            "rank set lives in [{}], not in [{}]",
            j.ambient().saturating_sub(1),
            n.saturating_sub(1)
        ));
    }
    match route {
        QRoute::Brute => {
            weighted_tuples_common_ascent(n, t, &AscentTarget::ExactComplement(j.clone()), budget)
        }
        QRoute::Recurrence => rank_w_recurrence(n, t, j),
    }
}

fn rank_w_recurrence(n: usize, t: usize, j: &RankSet) -> Result<QPoly> {
    let Some(top) = j.largest() else {
        return Ok(QPoly::one());
    };
    let rest = j.without_max();
    let lower = rank_w_recurrence(top, t, &rest.with_ambient(top)?)?;
    let lifted = &q_binomial(n, top)?.pow(t) * &lower;
    Ok(&lifted - &rank_w_recurrence(n, t, &rest)?)
}

/// Characteristic of the `r`-th Whitney homology: `β_r^(t) · Z_{n-r}`.
pub fn whitney_char(n: usize, t: usize, r: usize) -> Result<MultiSymFunc> {
    if r > n {
        return invalid(format!("Whitney index {r} exceeds rank {n}"));
    }
    multisym::multiply(&beta_t(r, t)?, &MultiSymFunc::z_n(n - r, t))
}

/// Stable principal specialization `X^j → {1, q, q², …}` of a homogeneous
/// element of degree `(n, …, n)`, over `∏_{i=1}^n (1 - q^i)^t`.
pub fn principal_specialization(f: &MultiSymFunc) -> Result<QRatNF> {
    let n = f.degrees().first().copied().unwrap_or(0);
    if f.degrees().iter().any(|&d| d != n) {
        return invalid(format!(
            "principal specialization needs equal degrees, got {:?}",
            f.degrees()
        ));
    }
    let mut numerator = QPoly::zero();
    for (key, c) in f.to_z().terms() {
        if !c.is_integer() {
            return Err(Error::InvalidArgument(format!(
                "coefficient {c} is not an integer"
            )));
        }
        // ps h_λ = 1/∏_parts (q;q)_p, and (q;q)_n / ∏ (q;q)_p is the q-multinomial.
        let term = key
            .iter()
            .fold(QPoly::constant(c.to_integer()), |acc, lambda| {
                &acc * &q_multinomial(lambda.parts())
            });
        numerator = &numerator + &term;
    }
    Ok(QRatNF::new(numerator, n, f.t()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn beta_routes_agree_small() {
        for t in 1..4 {
            for n in 0..5 {
                let r = beta_t(n, t).unwrap();
                assert_eq!(r, beta_phi(n, t).unwrap(), "n={n} t={t}");
                assert_eq!(r, beta_closed(n, t).unwrap(), "n={n} t={t}");
            }
        }
        assert_eq!(beta_t(1, 3).unwrap(), MultiSymFunc::z_n(1, 3));
        assert!(beta_t(2, 0).is_err());
    }

    #[test]
    fn multiplicity_matches_expansion() {
        let s = beta_t(3, 2).unwrap().to_s();
        for key in [vec![p(&[2, 1]), p(&[1, 1, 1])], vec![p(&[3]), p(&[3])]] {
            assert_eq!(
                BigRational::from_integer(beta_multiplicity(3, 2, &key).unwrap()),
                s.coeff(&key)
            );
        }
        assert!(beta_multiplicity(3, 2, &[p(&[2]), p(&[3])]).is_err());
        assert!(beta_multiplicity(3, 2, &[p(&[3])]).is_err());
    }

    #[test]
    fn w_routes_small() {
        let b = Budget::default();
        for t in 1..4 {
            for n in 0..5 {
                let values: Vec<_> = WRoute::ALL
                    .iter()
                    .map(|&r| w_t(n, t, r, &b).unwrap())
                    .collect();
                assert!(
                    values.windows(2).all(|w| w[0] == w[1]),
                    "n={n} t={t}: {values:?}"
                );
            }
        }
        assert_eq!(w_t(3, 2, WRoute::Recurrence, &b).unwrap(), BigInt::from(19));
    }

    #[test]
    fn brute_route_respects_budget() {
        let tight = Budget {
            tuples: 100,
            ..Budget::default()
        };
        assert!(matches!(
            w_t(4, 2, WRoute::Brute, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn rank_routes_agree_small() {
        for n in 1..5 {
            for j in RankSet::all(n) {
                let results: Vec<_> = RankRoute::ALL
                    .iter()
                    .map(|&r| rank_alpha_beta(n, 2, &j, r).unwrap())
                    .collect();
                for r in &results[1..] {
                    assert_eq!(r, &results[0], "n={n} J={j:?}");
                }
            }
        }
    }

    #[test]
    fn q_routes_small() {
        let b = Budget::default();
        assert_eq!(
            w_t_q(2, 2, QRoute::Recurrence, &b).unwrap(),
            QPoly::from_i64s(&[0, 2, 1])
        );
        assert_eq!(
            w_t_q(3, 1, QRoute::Recurrence, &b).unwrap(),
            QPoly::monomial(BigInt::one(), 3)
        );
        for n in 1..4 {
            for j in RankSet::all(n) {
                let a = rank_w_t_q(n, 2, &j, QRoute::Brute, &b).unwrap();
                let c = rank_w_t_q(n, 2, &j, QRoute::Recurrence, &b).unwrap();
                assert_eq!(a, c, "n={n} J={j:?}");
            }
        }
    }

    #[test]
    fn specialization_of_beta_two() {
        let ps = principal_specialization(&beta_t(2, 2).unwrap()).unwrap();
        assert_eq!(ps.numerator, QPoly::from_i64s(&[0, 2, 1]));
        assert_eq!((ps.n, ps.t), (2, 2));
        let z = principal_specialization(&MultiSymFunc::z_n(3, 2)).unwrap();
        assert_eq!(z.numerator, QPoly::one());
        let half = MultiSymFunc::z_n(2, 2).scale(&BigRational::new(1.into(), 2.into()));
        assert!(principal_specialization(&half).is_err());
    }

    #[test]
    fn whitney_dimension() {
        for r in 0..=4 {
            let d = multisym::dimension(&whitney_char(4, 2, r).unwrap());
            let w = w_t(r, 2, WRoute::Recurrence, &Budget::default()).unwrap();
            let expected = w * BigInt::from(num_traits::pow(binomial(4, r), 2));
            assert_eq!(d, BigRational::from_integer(expected));
        }
        assert!(whitney_char(2, 2, 3).is_err());
    }
}
