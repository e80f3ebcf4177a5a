//! Symmetric functions in one alphabet, stored in the complete homogeneous
//! basis `h_λ`. Schur and elementary expansions are computed on demand.

use std::cell::RefCell;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::perm::{factorial, kostka, partitions_of, Partition};

/// Exact coefficient type used by every symmetric-function container.
pub type Coeff = BigRational;

pub(crate) fn int(v: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(v))
}

/// Homogeneous symmetric function of a fixed degree, as a combination of
/// h-monomials. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SymFunc {
    degree: usize,
    terms: BTreeMap<Partition, Coeff>,
}

impl SymFunc {
    pub fn zero(degree: usize) -> Self {
        SymFunc {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        h_monomial(&Partition::empty())
    }

    /// Builds from `(λ, c)` pairs, merging repeated keys. Every `λ` must have
    /// weight `degree`.
    pub fn from_terms(
        degree: usize,
        terms: impl IntoIterator<Item = (Partition, Coeff)>,
    ) -> Result<Self> {
        let mut f = SymFunc::zero(degree);
        for (lambda, c) in terms {
            if lambda.weight() != degree {
                return invalid(format!("term {lambda} does not have degree {degree}"));
            }
            f.add_term(lambda, c);
        }
        Ok(f)
    }

    fn add_term(&mut self, lambda: Partition, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(lambda) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, lambda: &Partition) -> Coeff {
        self.terms.get(lambda).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn scale(&self, c: &Coeff) -> SymFunc {
        if c.is_zero() {
            return SymFunc::zero(self.degree);
        }
        SymFunc {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    fn combine(&self, rhs: &SymFunc, sign: i64) -> Result<SymFunc> {
        if self.degree != rhs.degree {
            return invalid(format!(
                "cannot add degree {} to degree {}",
                self.degree, rhs.degree
            ));
        }
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v * int(sign));
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &SymFunc) -> Result<SymFunc> {
        self.combine(rhs, 1)
    }

    pub fn try_sub(&self, rhs: &SymFunc) -> Result<SymFunc> {
        self.combine(rhs, -1)
    }

    /// Product; h-monomial keys multiply by concatenating parts.
    pub fn mul(&self, rhs: &SymFunc) -> SymFunc {
        let mut out = SymFunc::zero(self.degree + rhs.degree);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.concat(b), x * y);
            }
        }
        out
    }

    /// Schur coefficients, via the Kostka matrix.
    pub fn to_schur(&self) -> BTreeMap<Partition, Coeff> {
        h_to_schur(self)
    }
}

impl Add for &SymFunc {
    type Output = SymFunc;
    /// Panics on a degree mismatch; use [`SymFunc::try_add`] otherwise.
    fn add(self, rhs: &SymFunc) -> SymFunc {
        self.try_add(rhs).expect("degree mismatch")
    }
}

impl Sub for &SymFunc {
    type Output = SymFunc;
    fn sub(self, rhs: &SymFunc) -> SymFunc {
        self.try_sub(rhs).expect("degree mismatch")
    }
}

impl Neg for &SymFunc {
    type Output = SymFunc;
    fn neg(self) -> SymFunc {
        self.scale(&int(-1))
    }
}

impl Mul for &SymFunc {
    type Output = SymFunc;
    fn mul(self, rhs: &SymFunc) -> SymFunc {
        SymFunc::mul(self, rhs)
    }
}

impl fmt::Display for SymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, self.terms.iter(), "h")
    }
}

impl fmt::Debug for SymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymFunc[deg {}]({self})", self.degree)
    }
}

pub(crate) fn write_combination<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a Partition, &'a Coeff)>,
    basis: &str,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms {
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
        }
        first = false;
        let a = c.abs();
        if !a.is_one() {
            write!(f, "{a}·")?;
        }
        write!(f, "{basis}{k}")?;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    partition: Partition,
    coeff: String,
}

/// Serialized as `[{"partition": [...], "coeff": "p/q"}, ...]` in canonical
/// key order.
impl Serialize for SymFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let records: Vec<TermRecord> = self
            .terms
            .iter()
            .map(|(k, v)| TermRecord {
                partition: k.clone(),
                coeff: v.to_string(),
            })
            .collect();
        records.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymFunc {
    /// The degree is taken from the first term; an empty list is the zero of
    /// degree 0.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let records = Vec::<TermRecord>::deserialize(d)?;
        let degree = records.first().map_or(0, |r| r.partition.weight());
        let terms = records
            .into_iter()
            .map(|r| {
                r.coeff
                    .parse::<Coeff>()
                    .map(|c| (r.partition, c))
                    .map_err(D::Error::custom)
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        SymFunc::from_terms(degree, terms).map_err(D::Error::custom)
    }
}

/// The basis element `h_λ`.
pub fn h_monomial(lambda: &Partition) -> SymFunc {
    let mut f = SymFunc::zero(lambda.weight());
    f.add_term(lambda.clone(), Coeff::one());
    f
}

/// `h_n`, with `h_0 = 1`.
pub fn h(n: usize) -> SymFunc {
    h_monomial(&Partition::row(n))
}

/// Signed coefficient of `h_λ` in `e_n`:
/// `(-1)^{n-ℓ(λ)} ℓ(λ)! / ∏ m_i(λ)!`.
pub fn e_coefficient(lambda: &Partition) -> BigInt {
    let n = lambda.weight();
    let ell = lambda.len();
    let denom: BigUint = lambda
        .multiplicities()
        .iter()
        .map(|&(_, m)| factorial(m))
        .product();
    let magnitude = BigInt::from(factorial(ell) / denom);
    if (n - ell).is_multiple_of(2) {
        magnitude
    } else {
        -magnitude
    }
}

/// `e_n` in the h-basis, from the closed coefficient formula.
pub fn e_to_h(n: usize) -> SymFunc {
    let mut f = SymFunc::zero(n);
    for lambda in partitions_of(n) {
        let c = BigRational::from_integer(e_coefficient(&lambda));
        f.add_term(lambda, c);
    }
    f
}

/// `e_λ = ∏ e_{λ_i}`.
pub fn e_monomial(lambda: &Partition) -> SymFunc {
    lambda
        .parts()
        .iter()
        .fold(SymFunc::one(), |acc, &p| acc.mul(&e_to_h(p)))
}

thread_local! {
    static JACOBI_TRUDI: RefCell<HashMap<Partition, SymFunc>> = RefCell::new(HashMap::new());
    static KOSTKA_COLUMN: RefCell<HashMap<Partition, Vec<(Partition, u64)>>> = RefCell::new(HashMap::new());
}

/// Signed terms of `det(a_{λ_i - i + j})`: one `(sign, indices)` pair per
/// permutation with no negative index. Indices equal to zero are dropped
/// (the entry is the unit).
pub fn jacobi_trudi_terms(lambda: &Partition) -> Vec<(i64, Vec<usize>)> {
    fn go(
        parts: &[usize],
        row: usize,
        used: &mut Vec<bool>,
        sign: i64,
        acc: &mut Vec<usize>,
        out: &mut Vec<(i64, Vec<usize>)>,
    ) {
        let ell = parts.len();
        if row == ell {
            out.push((sign, acc.clone()));
            return;
        }
        for col in 0..ell {
            if used[col] {
                continue;
            }
            let idx = parts[row] as i64 - row as i64 + col as i64;
            if idx < 0 {
                continue;
            }
            // Each earlier row that took a larger column is an inversion.
            let inversions = used[col + 1..].iter().filter(|&&u| u).count();
            let s = if inversions % 2 == 0 { sign } else { -sign };
            used[col] = true;
            let pushed = idx > 0;
            if pushed {
                acc.push(idx as usize);
            }
            go(parts, row + 1, used, s, acc, out);
            if pushed {
                acc.pop();
            }
            used[col] = false;
        }
    }
    let mut out = Vec::new();
    go(
        lambda.parts(),
        0,
        &mut vec![false; lambda.len()],
        1,
        &mut Vec::new(),
        &mut out,
    );
    out
}

/// `s_λ` in the h-basis by the Jacobi–Trudi determinant `det(h_{λ_i-i+j})`.
pub fn schur_to_h(lambda: &Partition) -> SymFunc {
    if let Some(f) = JACOBI_TRUDI.with(|m| m.borrow().get(lambda).cloned()) {
        return f;
    }
    let mut f = SymFunc::zero(lambda.weight());
    for (sign, indices) in jacobi_trudi_terms(lambda) {
        f.add_term(Partition::from_unsorted(indices), int(sign));
    }
    JACOBI_TRUDI.with(|m| m.borrow_mut().insert(lambda.clone(), f.clone()));
    f
}

/// `h_λ = Σ_μ K_{μ,λ} s_μ`, as the nonzero `(μ, K_{μ,λ})` pairs in canonical
/// order.
pub fn kostka_column(lambda: &Partition) -> Vec<(Partition, u64)> {
    if let Some(col) = KOSTKA_COLUMN.with(|m| m.borrow().get(lambda).cloned()) {
        return col;
    }
    let col: Vec<(Partition, u64)> = partitions_of(lambda.weight())
        .into_iter()
        .filter_map(|mu| {
            let k = kostka(&mu, lambda).expect("same weight");
            (k > 0).then_some((mu, k))
        })
        .collect();
    KOSTKA_COLUMN.with(|m| m.borrow_mut().insert(lambda.clone(), col.clone()));
    col
}

/// Schur expansion of `f`.
pub fn h_to_schur(f: &SymFunc) -> BTreeMap<Partition, Coeff> {
    let mut out: BTreeMap<Partition, Coeff> = BTreeMap::new();
    for (lambda, c) in &f.terms {
        for (mu, k) in kostka_column(lambda) {
            *out.entry(mu).or_insert_with(Coeff::zero) += c * int(k as i64);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Inverse of [`h_to_schur`]: the h-expansion of `Σ c_μ s_μ`.
pub fn schur_combination(degree: usize, coeffs: &BTreeMap<Partition, Coeff>) -> Result<SymFunc> {
    let mut f = SymFunc::zero(degree);
    for (mu, c) in coeffs {
        if mu.weight() != degree {
            return invalid(format!("Schur index {mu} does not have degree {degree}"));
        }
        for (lambda, d) in &schur_to_h(mu).terms {
            f.add_term(lambda.clone(), c * d);
        }
    }
    Ok(f)
}

/// Hall inner product, computed from Schur expansions.
pub fn inner_product(f: &SymFunc, g: &SymFunc) -> Result<Coeff> {
    if f.degree != g.degree {
        return invalid(format!(
            "inner product of degree {} with degree {}",
            f.degree, g.degree
        ));
    }
    let fs = h_to_schur(f);
    let gs = h_to_schur(g);
    Ok(fs
        .iter()
        .filter_map(|(k, a)| gs.get(k).map(|b| a * b))
        .fold(Coeff::zero(), |acc, x| acc + x))
}

/// Order of the centralizer of a permutation of cycle type `λ`:
/// `∏ i^{m_i} m_i!`.
pub fn z_lambda(lambda: &Partition) -> BigUint {
    lambda
        .multiplicities()
        .iter()
        .map(|&(i, m)| num_traits::pow(BigUint::from(i), m) * factorial(m))
        .product()
}
