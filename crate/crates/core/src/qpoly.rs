//! Integer polynomials in `q` and rational functions over `∏ (1-q^i)^t`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};

/// Dense integer polynomial; index `i` holds the coefficient of `q^i`.
/// Trailing zeros are never stored, so the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        QPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        QPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        QPoly::from_coeffs(vec![c])
    }

    /// `c·q^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        QPoly::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn pow(&self, e: usize) -> QPoly {
        let mut acc = QPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `∏_{i=lo}^{hi} (1 - q^i)^t`; the empty product is 1.
    pub fn one_minus_q_product(lo: usize, hi: usize, t: usize) -> QPoly {
        let mut acc = QPoly::one();
        for i in lo.max(1)..=hi {
            let factor = &QPoly::one() - &QPoly::monomial(BigInt::one(), i);
            acc = &acc * &factor.pow(t);
        }
        acc
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::from_coeffs((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QPoly {
            type Output = QPoly;
            fn $m(self, rhs: QPoly) -> QPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{a}q")?,
                (_, true) => write!(f, "q^{k}")?,
                (_, false) => write!(f, "{a}q^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

/// Serialized as an array of decimal strings, lowest degree first.
impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        strings.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        let coeffs = strings
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(QPoly::from_coeffs(coeffs))
    }
}

thread_local! {
    static QBINOM: RefCell<HashMap<(usize, usize), QPoly>> = RefCell::new(HashMap::new());
}

/// Gaussian binomial `[n choose k]_q` by the q-Pascal rule
/// `[n,k] = [n-1,k-1] + q^k [n-1,k]`.
pub fn q_binomial(n: usize, k: usize) -> Result<QPoly> {
    if k > n {
        return invalid(format!("q_binomial needs 0 <= k <= n, got n={n}, k={k}"));
    }
    Ok(q_binomial_unchecked(n, k))
}

fn q_binomial_unchecked(n: usize, k: usize) -> QPoly {
    if k == 0 || k == n {
        return QPoly::one();
    }
    if let Some(p) = QBINOM.with(|m| m.borrow().get(&(n, k)).cloned()) {
        return p;
    }
    let left = q_binomial_unchecked(n - 1, k - 1);
    let right = &QPoly::monomial(BigInt::one(), k) * &q_binomial_unchecked(n - 1, k);
    let p = &left + &right;
    QBINOM.with(|m| m.borrow_mut().insert((n, k), p.clone()));
    p
}

/// q-multinomial `[n; parts]_q` as a product of Gaussian binomials.
pub fn q_multinomial(parts: &[usize]) -> QPoly {
    let mut total = 0;
    let mut acc = QPoly::one();
    for &p in parts {
        total += p;
        acc = &acc * &q_binomial_unchecked(total, p);
    }
    acc
}

/// `numerator / ∏_{i=1}^n (1 - q^i)^t`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QRatNF {
    pub numerator: QPoly,
    pub n: usize,
    pub t: usize,
}

impl QRatNF {
    pub fn new(numerator: QPoly, n: usize, t: usize) -> Self {
        QRatNF { numerator, n, t }
    }

    pub fn denominator(&self) -> QPoly {
        QPoly::one_minus_q_product(1, self.n, self.t)
    }
}

/// Cross-multiplied comparison; no polynomial division happens.
impl PartialEq for QRatNF {
    fn eq(&self, other: &Self) -> bool {
        if self.t == other.t {
            // Only the surplus factors need multiplying in.
            let (lo, hi) = (self.n.min(other.n), self.n.max(other.n));
            let extra = QPoly::one_minus_q_product(lo + 1, hi, self.t);
            if self.n <= other.n {
                &self.numerator * &extra == other.numerator
            } else {
                self.numerator == &other.numerator * &extra
            }
        } else {
            &self.numerator * &other.denominator() == &other.numerator * &self.denominator()
        }
    }
}

impl Eq for QRatNF {}
