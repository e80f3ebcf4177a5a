//! Symmetric functions in `t` separate alphabets `X^1, …, X^t`.
//!
//! A [`MultiSymFunc`] is stored either in the Z-basis (a product of one
//! h-monomial per alphabet) or in the S-basis (a product of one Schur function
//! per alphabet). Multiplication and `Φ_t` are native to the Z-basis;
//! multiplicities and positivity are read off the S-basis.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::perm::{binomial, syt_count, Partition};
use crate::symfunc::{self, int, Coeff, SymFunc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// `∏_j h_{λ^j}(X^j)`.
    Z,
    /// `∏_j s_{μ^j}(X^j)`.
    S,
}

/// A `t`-tuple of partitions, one per alphabet.
pub type MultiKey = Vec<Partition>;

#[derive(Clone)]
pub struct MultiSymFunc {
    t: usize,
    basis: Basis,
    degrees: Vec<usize>,
    terms: BTreeMap<MultiKey, Coeff>,
}

impl MultiSymFunc {
    pub fn zero(basis: Basis, degrees: Vec<usize>) -> Self {
        MultiSymFunc {
            t: degrees.len(),
            basis,
            degrees,
            terms: BTreeMap::new(),
        }
    }

    /// The unit of the `t`-alphabet ring.
    pub fn one(t: usize) -> Self {
        let mut f = MultiSymFunc::zero(Basis::Z, vec![0; t]);
        f.add_term(vec![Partition::empty(); t], Coeff::one());
        f
    }

    pub fn from_terms(
        basis: Basis,
        degrees: Vec<usize>,
        terms: impl IntoIterator<Item = (MultiKey, Coeff)>,
    ) -> Result<Self> {
        let mut f = MultiSymFunc::zero(basis, degrees);
        for (key, c) in terms {
            f.check_key(&key)?;
            f.add_term(key, c);
        }
        Ok(f)
    }

    /// A single basis element with coefficient 1.
    pub fn monomial(basis: Basis, key: MultiKey) -> Self {
        let degrees = key.iter().map(Partition::weight).collect();
        let mut f = MultiSymFunc::zero(basis, degrees);
        f.add_term(key, Coeff::one());
        f
    }

    /// `Z^{(t)}_λ = ∏_j h_λ(X^j)`.
    pub fn z_lambda(lambda: &Partition, t: usize) -> Self {
        MultiSymFunc::monomial(Basis::Z, vec![lambda.clone(); t])
    }

    /// `Z^{(t)}_n = ∏_j h_n(X^j)`, with `Z_0 = 1`.
    pub fn z_n(n: usize, t: usize) -> Self {
        MultiSymFunc::z_lambda(&Partition::row(n), t)
    }

    fn check_key(&self, key: &MultiKey) -> Result<()> {
        if key.len() != self.t {
            return invalid(format!(
                "key has {} alphabets, expected {}",
                key.len(),
                self.t
            ));
        }
        for (j, (mu, &d)) in key.iter().zip(&self.degrees).enumerate() {
            if mu.weight() != d {
                return invalid(format!("alphabet {j}: {mu} does not have degree {d}"));
            }
        }
        Ok(())
    }

    fn add_term(&mut self, key: MultiKey, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiKey, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &[Partition]) -> Coeff {
        self.terms.get(key).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = MultiSymFunc::zero(self.basis, self.degrees.clone());
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    fn combine(&self, rhs: &MultiSymFunc, sign: i64) -> Result<Self> {
        if self.t != rhs.t || self.degrees != rhs.degrees {
            return invalid(format!(
                "cannot add degrees {:?} to degrees {:?}",
                self.degrees, rhs.degrees
            ));
        }
        let rhs = rhs.to_basis(self.basis);
        let mut out = self.clone();
        for (k, v) in rhs.terms {
            out.add_term(k, v * int(sign));
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &MultiSymFunc) -> Result<Self> {
        self.combine(rhs, 1)
    }

    pub fn try_sub(&self, rhs: &MultiSymFunc) -> Result<Self> {
        self.combine(rhs, -1)
    }

    pub fn to_basis(&self, basis: Basis) -> MultiSymFunc {
        match (self.basis, basis) {
            (a, b) if a == b => self.clone(),
            (Basis::Z, Basis::S) => self.convert(Basis::S, |lambda| {
                symfunc::kostka_column(lambda)
                    .into_iter()
                    .map(|(mu, k)| (mu, int(k as i64)))
                    .collect()
            }),
            _ => self.convert(Basis::Z, |mu| {
                symfunc::schur_to_h(mu)
                    .terms()
                    .map(|(k, c)| (k.clone(), c.clone()))
                    .collect()
            }),
        }
    }

    pub fn to_s(&self) -> MultiSymFunc {
        self.to_basis(Basis::S)
    }

    pub fn to_z(&self) -> MultiSymFunc {
        self.to_basis(Basis::Z)
    }

    /// Applies a one-alphabet change of basis to every tensor factor.
    fn convert(
        &self,
        target: Basis,
        expand: impl Fn(&Partition) -> Vec<(Partition, Coeff)>,
    ) -> MultiSymFunc {
        let mut out = MultiSymFunc::zero(target, self.degrees.clone());
        for (key, c) in &self.terms {
            let mut partial: Vec<(MultiKey, Coeff)> = vec![(Vec::with_capacity(self.t), c.clone())];
            for lambda in key {
                let column = expand(lambda);
                let mut next = Vec::with_capacity(partial.len() * column.len());
                for (prefix, a) in &partial {
                    for (mu, b) in &column {
                        let mut k = prefix.clone();
                        k.push(mu.clone());
                        next.push((k, a * b));
                    }
                }
                partial = next;
            }
            for (k, v) in partial {
                out.add_term(k, v);
            }
        }
        out
    }

    /// True when every S-basis coefficient is nonnegative, i.e. the element
    /// could be the characteristic of a true module.
    pub fn is_schur_nonnegative(&self) -> bool {
        self.to_s().terms.values().all(|c| !c.is_negative())
    }

    /// S-basis keys carrying a negative coefficient.
    pub fn negative_schur_terms(&self) -> Vec<(MultiKey, Coeff)> {
        self.to_s()
            .terms
            .into_iter()
            .filter(|(_, c)| c.is_negative())
            .collect()
    }
}

/// Equality as elements of the ring, regardless of storage basis.
impl PartialEq for MultiSymFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.t != other.t || self.degrees != other.degrees {
            return false;
        }
        if self.basis == other.basis {
            self.terms == other.terms
        } else {
            self.to_z().terms == other.to_z().terms
        }
    }
}

impl Eq for MultiSymFunc {}

impl fmt::Display for MultiSymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.basis {
            Basis::Z => "h",
            Basis::S => "s",
        };
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (key, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{a}·")?;
            }
            for (j, mu) in key.iter().enumerate() {
                if j > 0 {
                    write!(f, "⊗")?;
                }
                write!(f, "{name}{mu}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiSymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MultiSymFunc[{:?}, {:?}]({self})",
            self.basis, self.degrees
        )
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    mus: Vec<Partition>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct JsonMultiSymFunc {
    t: usize,
    basis: Basis,
    degrees: Vec<usize>,
    terms: Vec<JsonTerm>,
}

impl Serialize for MultiSymFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JsonMultiSymFunc {
            t: self.t,
            basis: self.basis,
            degrees: self.degrees.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| JsonTerm {
                    mus: k.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiSymFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = JsonMultiSymFunc::deserialize(d)?;
        if raw.t != raw.degrees.len() {
            return Err(D::Error::custom(format!(
                "t = {} but {} degrees given",
                raw.t,
                raw.degrees.len()
            )));
        }
        let terms = raw
            .terms
            .into_iter()
            .map(|term| {
                term.coeff
                    .parse::<Coeff>()
                    .map(|c| (term.mus, c))
                    .map_err(D::Error::custom)
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        MultiSymFunc::from_terms(raw.basis, raw.degrees, terms).map_err(D::Error::custom)
    }
}

/// The algebra map `Φ_t` sending `h_n` to `Z^{(t)}_n`; each `h_λ` becomes the
/// diagonal Z-key `(λ, …, λ)`.
pub fn phi_t(f: &SymFunc, t: usize) -> Result<MultiSymFunc> {
    if t == 0 {
        return invalid("Φ_t needs t >= 1");
    }
    let mut out = MultiSymFunc::zero(Basis::Z, vec![f.degree(); t]);
    for (lambda, c) in f.terms() {
        out.add_term(vec![lambda.clone(); t], c.clone());
    }
    Ok(out)
}

/// Product in the `t`-alphabet ring: the characteristic of the induction
/// product. Z-keys multiply by per-alphabet concatenation.
pub fn multiply(f: &MultiSymFunc, g: &MultiSymFunc) -> Result<MultiSymFunc> {
    if f.t != g.t {
        return invalid(format!("cannot multiply t = {} by t = {}", f.t, g.t));
    }
    let (f, g) = (f.to_z(), g.to_z());
    let degrees = f
        .degrees
        .iter()
        .zip(&g.degrees)
        .map(|(a, b)| a + b)
        .collect();
    let mut out = MultiSymFunc::zero(Basis::Z, degrees);
    for (a, x) in &f.terms {
        for (b, y) in &g.terms {
            let key = a.iter().zip(b).map(|(p, q)| p.concat(q)).collect();
            out.add_term(key, x * y);
        }
    }
    Ok(out)
}

/// Tensor inner product: Schur tuples are orthonormal.
pub fn inner_product(f: &MultiSymFunc, g: &MultiSymFunc) -> Result<Coeff> {
    if f.t != g.t || f.degrees != g.degrees {
        return invalid(format!(
            "inner product of degrees {:?} with degrees {:?}",
            f.degrees, g.degrees
        ));
    }
    let (fs, gs) = (f.to_s(), g.to_s());
    Ok(fs
        .terms
        .iter()
        .filter_map(|(k, a)| gs.terms.get(k).map(|b| a * b))
        .fold(Coeff::zero(), |acc, x| acc + x))
}

/// Dimension of the (possibly virtual) module with characteristic `f`:
/// `Σ c_μ ∏_j f^{μ^j}`.
pub fn dimension(f: &MultiSymFunc) -> Coeff {
    f.to_s()
        .terms
        .iter()
        .map(|(key, c)| {
            let dim: BigInt = key.iter().map(|mu| BigInt::from(syt_count(mu))).product();
            c * BigRational::from_integer(dim)
        })
        .fold(Coeff::zero(), |acc, x| acc + x)
}

/// `∏_j C(m_j + n_j, m_j)`, the index factor in the dimension of an
/// induction product.
pub fn induction_index(m: &[usize], n: &[usize]) -> BigInt {
    m.iter()
        .zip(n)
        .map(|(&a, &b)| BigInt::from(binomial(a + b, a)))
        .product()
}

/// `det(entry(λ_i - i + j))` over the `t`-alphabet ring, where `entry(0)` is
/// the unit and negative indices give zero.
pub fn jacobi_trudi_det(
    lambda: &Partition,
    t: usize,
    entry: impl Fn(usize) -> MultiSymFunc,
) -> Result<MultiSymFunc> {
    let degrees = vec![lambda.weight(); t];
    let mut total = MultiSymFunc::zero(Basis::Z, degrees);
    for (sign, indices) in symfunc::jacobi_trudi_terms(lambda) {
        let mut term = MultiSymFunc::one(t);
        for i in indices {
            term = multiply(&term, &entry(i))?;
        }
        total = total.try_add(&term.scale(&int(sign)))?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::{e_to_h, h_monomial, schur_to_h};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn phi_of_h_is_z() {
        let lambda = p(&[2, 1]);
        for t in 1..4 {
            assert_eq!(
                phi_t(&h_monomial(&lambda), t).unwrap(),
                MultiSymFunc::z_lambda(&lambda, t)
            );
        }
        assert!(phi_t(&h_monomial(&lambda), 0).is_err());
    }

    #[test]
    fn phi_of_hook_two_alphabets() {
        for n in 2..6 {
            let s = phi_t(&schur_to_h(&p(&[n - 1, 1])), 2).unwrap().to_s();
            let hook = p(&[n - 1, 1]);
            let row = p(&[n]);
            assert_eq!(s.len(), 3);
            assert_eq!(s.coeff(&[hook.clone(), hook.clone()]), int(1));
            assert_eq!(s.coeff(&[hook.clone(), row.clone()]), int(1));
            assert_eq!(s.coeff(&[row.clone(), hook.clone()]), int(1));
            assert_eq!(s.coeff(&[row.clone(), row.clone()]), int(0));
        }
    }

    #[test]
    fn virtual_negative_multiplicities() {
        let s = phi_t(&schur_to_h(&p(&[3, 2, 2])), 2).unwrap().to_s();
        assert_eq!(s.coeff(&[p(&[4, 3]), p(&[6, 1])]), int(-1));
        let s = phi_t(&schur_to_h(&p(&[2, 2, 2, 1])), 2).unwrap().to_s();
        assert_eq!(s.coeff(&[p(&[3, 3, 1]), p(&[5, 1, 1])]), int(-2));
    }

    #[test]
    fn multiply_concatenates() {
        let z1 = MultiSymFunc::z_n(1, 2);
        let prod = multiply(&z1, &z1).unwrap();
        assert_eq!(
            prod,
            MultiSymFunc::monomial(Basis::Z, vec![p(&[1, 1]), p(&[1, 1])])
        );
        assert!(multiply(&z1, &MultiSymFunc::z_n(1, 3)).is_err());
    }

    #[test]
    fn regular_representation_of_s2_times_s3() {
        let x = MultiSymFunc::monomial(Basis::Z, vec![p(&[1]), Partition::empty()]);
        let y = MultiSymFunc::monomial(Basis::Z, vec![Partition::empty(), p(&[1])]);
        let mut reg = MultiSymFunc::one(2);
        for _ in 0..2 {
            reg = multiply(&reg, &x).unwrap();
        }
        for _ in 0..3 {
            reg = multiply(&reg, &y).unwrap();
        }
        let s = reg.to_s();
        let expected = [
            (p(&[2]), p(&[3]), 1),
            (p(&[1, 1]), p(&[3]), 1),
            (p(&[2]), p(&[2, 1]), 2),
            (p(&[1, 1]), p(&[2, 1]), 2),
            (p(&[2]), p(&[1, 1, 1]), 1),
            (p(&[1, 1]), p(&[1, 1, 1]), 1),
        ];
        assert_eq!(s.len(), expected.len());
        for (a, b, c) in expected {
            assert_eq!(s.coeff(&[a, b]), int(c));
        }
        assert_eq!(dimension(&reg), int(12));
    }

    #[test]
    fn inner_product_orthonormal_and_mismatch() {
        let a = MultiSymFunc::monomial(Basis::S, vec![p(&[2, 1]), p(&[3])]);
        let b = MultiSymFunc::monomial(Basis::S, vec![p(&[2, 1]), p(&[2, 1])]);
        assert_eq!(inner_product(&a, &a).unwrap(), int(1));
        assert_eq!(inner_product(&a, &b).unwrap(), int(0));
        assert!(inner_product(&a, &MultiSymFunc::z_n(2, 2)).is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(dimension(&MultiSymFunc::z_n(4, 3)), int(1));
        let beta2 = phi_t(&e_to_h(2), 2).unwrap();
        assert_eq!(dimension(&beta2), int(3));
    }

    #[test]
    fn basis_round_trip() {
        let f = phi_t(&schur_to_h(&p(&[2, 2, 1])), 3).unwrap();
        let back = f.to_s().to_z();
        assert_eq!(back.basis(), Basis::Z);
        assert_eq!(back.terms().count(), f.terms().count());
        assert_eq!(back, f);
    }

    #[test]
    fn json_schema() {
        let f = MultiSymFunc::monomial(Basis::S, vec![p(&[1, 1]), p(&[2])]).scale(&int(-3));
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(
            s,
            r#"{"t":2,"basis":"S","degrees":[2,2],"terms":[{"mus":[[1,1],[2]],"coeff":"-3"}]}"#
        );
        let back: MultiSymFunc = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"t":2,"basis":"S","degrees":[2,2],"terms":[{"mus":[[1],[2]],"coeff":"1"}]}"#;
        assert!(serde_json::from_str::<MultiSymFunc>(bad).is_err());
    }
}
