//! Partitions, permutations, rank sets and the tableau/permutation statistics
//! every other module builds on.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::budget::Budget;
use crate::error::{invalid, Error, Result};
use crate::qpoly::QPoly;

/// An integer partition: positive parts in weakly decreasing order.
///
/// Partitions are ordered reverse-lexicographically, so among partitions of
/// the same weight `(n)` comes first and `(1^n)` last.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return invalid(format!("partition {parts:?} has a zero part"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return invalid(format!("partition {parts:?} is not weakly decreasing"));
        }
        Ok(Partition { parts })
    }

    /// Sorts the given parts into a partition, dropping zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `(n)`; empty when `n == 0`.
    pub fn row(n: usize) -> Self {
        Partition::from_unsorted(vec![n])
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    /// The hook `(n-k, 1^k)`.
    pub fn hook(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return invalid(format!("hook (n-k,1^k) needs k < n, got n={n}, k={k}"));
        }
        let mut parts = vec![n - k];
        parts.extend(std::iter::repeat_n(1, k));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `i` (0-based), or 0 past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn largest(&self) -> usize {
        self.part(0)
    }

    pub fn conjugate(&self) -> Self {
        let parts = (1..=self.largest())
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count())
            .collect();
        Partition { parts }
    }

    /// `(i, m_i)` for every part size `i` that occurs, in increasing `i`.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in self.parts.iter().rev() {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Union of parts, the index of a product of two h-monomials.
    pub fn concat(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Partition::from_unsorted(parts)
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        other.parts.cmp(&self.parts)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `3,2,1` (parentheses optional). `""`, `()` and `none` give the
/// empty partition.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .trim();
        if s.is_empty() || s == "none" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad partition part `{p}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// All partitions of `n` in canonical (reverse-lexicographic) order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn go(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            prefix.push(p);
            go(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// A subset `J` of `{1, …, n-1}`, the nontrivial ranks of a rank-`n` poset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankSet {
    n: usize,
    elems: Vec<usize>,
}

impl RankSet {
    pub fn new(n: usize, mut elems: Vec<usize>) -> Result<Self> {
        elems.sort_unstable();
        if elems.windows(2).any(|w| w[0] == w[1]) {
            return invalid(format!("rank set {elems:?} has repeated entries"));
        }
        if let Some(&bad) = elems.iter().find(|&&j| j == 0 || j >= n) {
            return invalid(format!(
                "rank {bad} is not a nontrivial rank of a rank-{n} poset"
            ));
        }
        Ok(RankSet { n, elems })
    }

    pub fn empty(n: usize) -> Self {
        RankSet { n, elems: vec![] }
    }

    /// `[n-1]`.
    pub fn full(n: usize) -> Self {
        RankSet {
            n,
            elems: (1..n).collect(),
        }
    }

    /// `{1, …, k}`.
    pub fn initial(n: usize, k: usize) -> Result<Self> {
        RankSet::new(n, (1..=k).collect())
    }

    /// Bit `i-1` set for each element `i`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let elems = (1..n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        RankSet { n, elems }
    }

    /// Every subset of `[n-1]`, ordered by bitmask.
    pub fn all(n: usize) -> impl Iterator<Item = RankSet> {
        let count = 1u64 << n.saturating_sub(1);
        (0..count).map(move |m| RankSet::from_mask(n, m))
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.elems.binary_search(&j).is_ok()
    }

    pub fn mask(&self) -> u64 {
        self.elems.iter().fold(0, |m, &j| m | 1 << (j - 1))
    }

    pub fn complement(&self) -> RankSet {
        let elems = (1..self.n).filter(|&j| !self.contains(j)).collect();
        RankSet { n: self.n, elems }
    }

    pub fn is_subset(&self, other: &RankSet) -> bool {
        self.mask() & !other.mask() == 0
    }

    pub fn largest(&self) -> Option<usize> {
        self.elems.last().copied()
    }

    /// `J \ {max J}`, viewed inside the same ambient rank.
    pub fn without_max(&self) -> RankSet {
        let mut elems = self.elems.clone();
        elems.pop();
        RankSet { n: self.n, elems }
    }

    /// The same set viewed as ranks of a poset of rank `n`.
    pub fn with_ambient(&self, n: usize) -> Result<RankSet> {
        RankSet::new(n, self.elems.clone())
    }

    /// All subsets of this set (each in the same ambient rank).
    pub fn subsets(&self) -> impl Iterator<Item = RankSet> + '_ {
        let k = self.elems.len();
        (0..1u64 << k).map(move |m| RankSet {
            n: self.n,
            elems: (0..k)
                .filter(|i| m >> i & 1 == 1)
                .map(|i| self.elems[i])
                .collect(),
        })
    }

    /// Composition `(j1, j2-j1, …, n-jr)` cut out by the set.
    pub fn composition(&self) -> Vec<usize> {
        let mut prev = 0;
        let mut out = Vec::with_capacity(self.elems.len() + 1);
        for &j in self.elems.iter().chain(std::iter::once(&self.n)) {
            out.push(j - prev);
            prev = j;
        }
        out
    }
}

impl fmt::Display for RankSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, j) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for RankSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}⊆[{}]", self.n.saturating_sub(1))
    }
}

/// A permutation of `[n]` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation {
    word: Vec<usize>,
}

/// Ascent set, descent set and inversion number of a permutation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermStats {
    pub ascents: RankSet,
    pub descents: RankSet,
    pub inversions: usize,
}

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &v in &word {
            if v == 0 || v > n || seen[v] {
                return invalid(format!("{word:?} is not a permutation of 1..{n}"));
            }
            seen[v] = true;
        }
        Ok(Permutation { word })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            word: (1..=n).collect(),
        }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Bit `i-1` set when `σ(i) < σ(i+1)`.
    pub fn ascent_mask(&self) -> u64 {
        self.word
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] < w[1])
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn inversions(&self) -> usize {
        let w = &self.word;
        (0..w.len())
            .map(|i| w[i + 1..].iter().filter(|&&v| v < w[i]).count())
            .sum()
    }

    pub fn stats(&self) -> PermStats {
        let n = self.word.len();
        let ascents = RankSet::from_mask(n, self.ascent_mask());
        PermStats {
            descents: ascents.complement(),
            ascents,
            inversions: self.inversions(),
        }
    }

    /// All of `S_n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut word: Vec<usize> = (1..=n).collect();
        let mut out = vec![Permutation { word: word.clone() }];
        while next_permutation(&mut word) {
            out.push(Permutation { word: word.clone() });
        }
        out
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `3142` (single digits) or `3,1,4,2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let word = if s.contains(',') {
            s.split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::InvalidArgument(format!("bad permutation `{s}`")))?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::InvalidArgument(format!("bad permutation `{s}`")))?
        };
        Permutation::new(word)
    }
}

fn next_permutation(w: &mut [usize]) -> bool {
    if w.len() < 2 {
        return false;
    }
    let mut i = w.len() - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = w.len() - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

pub fn perm_stats(sigma: &Permutation) -> PermStats {
    sigma.stats()
}

thread_local! {
    static KOSTKA: RefCell<HashMap<(Partition, Partition), u64>> = RefCell::new(HashMap::new());
}

/// Kostka number `K_{shape, content}`: semistandard tableaux of the given
/// shape and content.
pub fn kostka(shape: &Partition, content: &Partition) -> Result<u64> {
    if shape.weight() != content.weight() {
        return invalid(format!(
            "kostka: |{shape}| = {} but |{content}| = {}",
            shape.weight(),
            content.weight()
        ));
    }
    Ok(kostka_unchecked(shape, content))
}

/// Fills the largest entry first: it occupies a horizontal strip of the
/// shape, and what remains is a tableau of the smaller shape.
fn kostka_unchecked(shape: &Partition, content: &Partition) -> u64 {
    if content.is_empty() {
        return u64::from(shape.is_empty());
    }
    if shape.len() > content.len() {
        // A column of length > #values cannot be strictly increasing.
        return 0;
    }
    let key = (shape.clone(), content.clone());
    if let Some(v) = KOSTKA.with(|m| m.borrow().get(&key).copied()) {
        return v;
    }
    let strip = *content.parts.last().unwrap();
    let rest = Partition {
        parts: content.parts[..content.len() - 1].to_vec(),
    };
    let mut total = 0u64;
    let mut inner = vec![0usize; shape.len()];
    for_each_horizontal_strip(shape.parts(), strip, 0, &mut inner, &mut |inner| {
        total += kostka_unchecked(&Partition::from_unsorted(inner.to_vec()), &rest);
    });
    KOSTKA.with(|m| m.borrow_mut().insert(key, total));
    total
}

/// Enumerates inner shapes `inner ⊆ outer` with `outer / inner` a horizontal
/// strip of `size` cells.
fn for_each_horizontal_strip(
    outer: &[usize],
    size: usize,
    row: usize,
    inner: &mut [usize],
    f: &mut dyn FnMut(&[usize]),
) {
    if row == outer.len() {
        if size == 0 {
            f(inner);
        }
        return;
    }
    let floor = outer.get(row + 1).copied().unwrap_or(0);
    let max_remove = (outer[row] - floor).min(size);
    for removed in 0..=max_remove {
        inner[row] = outer[row] - removed;
        for_each_horizontal_strip(outer, size - removed, row + 1, inner, f);
    }
}

/// Number of standard Young tableaux of shape `shape`.
pub fn syt_count(shape: &Partition) -> u64 {
    kostka_unchecked(shape, &Partition::column(shape.weight()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DescentMatch {
    /// `Des(τ) = J`.
    Exact,
    /// `Des(τ) ⊆ J`.
    Contained,
}

thread_local! {
    static SYT_DESCENTS: RefCell<HashMap<Partition, HashMap<u64, u64>>> = RefCell::new(HashMap::new());
}

/// Histogram of descent sets (as bitmasks) over all SYT of the shape. Entry
/// `i` is a descent when `i+1` sits in a strictly lower row.
pub fn syt_descent_histogram(shape: &Partition) -> HashMap<u64, u64> {
    if let Some(h) = SYT_DESCENTS.with(|m| m.borrow().get(shape).cloned()) {
        return h;
    }
    fn go(
        shape: &[usize],
        filled: &mut Vec<usize>,
        placed: usize,
        last_row: usize,
        mask: u64,
        hist: &mut HashMap<u64, u64>,
    ) {
        let n: usize = shape.iter().sum();
        if placed == n {
            *hist.entry(mask).or_insert(0) += 1;
            return;
        }
        for r in 0..shape.len() {
            let can = filled[r] < shape[r] && (r == 0 || filled[r - 1] > filled[r]);
            if !can {
                continue;
            }
            let mask = if placed > 0 && r > last_row {
                mask | 1 << (placed - 1)
            } else {
                mask
            };
            filled[r] += 1;
            go(shape, filled, placed + 1, r, mask, hist);
            filled[r] -= 1;
        }
    }
    let mut hist = HashMap::new();
    go(shape.parts(), &mut vec![0; shape.len()], 0, 0, 0, &mut hist);
    SYT_DESCENTS.with(|m| m.borrow_mut().insert(shape.clone(), hist.clone()));
    hist
}

/// Counts SYT of shape `shape` whose descent set equals (or is contained in)
/// `j`.
pub fn syt_count_with_descents(shape: &Partition, j: &RankSet, mode: DescentMatch) -> Result<u64> {
    if shape.weight() != j.ambient() {
        return invalid(format!(
            "shape {shape} has weight {} but the rank set lives in [{}]",
            shape.weight(),
            j.ambient().saturating_sub(1)
        ));
    }
    let target = j.mask();
    let hist = syt_descent_histogram(shape);
    Ok(hist
        .iter()
        .filter(|(&m, _)| match mode {
            DescentMatch::Exact => m == target,
            DescentMatch::Contained => m & !target == 0,
        })
        .map(|(_, &c)| c)
        .sum())
}

/// Which tuples a common-ascent scan keeps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AscentTarget {
    /// Tuples with no common ascent.
    NoneCommon,
    /// Tuples whose common-ascent set is exactly `[n-1] \ J`.
    ExactComplement(RankSet),
}

fn factorial_power(n: usize, t: usize) -> BigUint {
    let f: BigUint = (1..=n).map(BigUint::from).product();
    num_traits::pow(f, t)
}

/// Brute-force scan over `S_n^t`, returning the number of qualifying tuples
/// grouped by total inversion number.
fn common_ascent_histogram(
    n: usize,
    t: usize,
    target: &AscentTarget,
    budget: &Budget,
) -> Result<Vec<u64>> {
    if t == 0 {
        return invalid("t must be at least 1");
    }
    let wanted = match target {
        AscentTarget::NoneCommon => 0,
        AscentTarget::ExactComplement(j) => {
            if j.ambient() != n {
                return invalid(format!(
                    "rank set {j:?} does not live in [{}]",
                    n.saturating_sub(1)
                ));
            }
            j.complement().mask()
        }
    };
    let total = factorial_power(n, t);
    if total > BigUint::from(budget.tuples) {
        return Err(Error::BudgetExceeded {
            what: "tuple enumeration",
            needed: total.to_string(),
            limit: budget.tuples,
            hint: "use the recurrence route instead",
        });
    }
    let perms: Vec<(u64, usize)> = Permutation::all(n)
        .iter()
        .map(|p| (p.ascent_mask(), p.inversions()))
        .collect();
    let full = if n == 0 { 0 } else { (1u64 << (n - 1)) - 1 };
    let max_inv = t * n * n.saturating_sub(1) / 2;
    let mut hist = vec![0u64; max_inv + 1];

    fn scan(
        perms: &[(u64, usize)],
        depth: usize,
        common: u64,
        inv: usize,
        wanted: u64,
        hist: &mut [u64],
    ) {
        if depth == 0 {
            if common == wanted {
                hist[inv] += 1;
            }
            return;
        }
        for &(mask, i) in perms {
            let c = common & mask;
            // Common ascents only shrink; once a wanted ascent is lost the
            // subtree contributes nothing.
            if c & wanted != wanted {
                continue;
            }
            scan(perms, depth - 1, c, inv + i, wanted, hist);
        }
    }
    scan(&perms, t, full, 0, wanted, &mut hist);
    Ok(hist)
}

/// Number of `t`-tuples in `S_n^t` selected by `target`.
pub fn count_tuples_common_ascent(
    n: usize,
    t: usize,
    target: &AscentTarget,
    budget: &Budget,
) -> Result<BigUint> {
    let hist = common_ascent_histogram(n, t, target, budget)?;
    Ok(hist.iter().map(|&c| BigUint::from(c)).sum())
}

/// `Σ ∏ q^{inv(σ_i)}` over the tuples selected by `target`.
pub fn weighted_tuples_common_ascent(
    n: usize,
    t: usize,
    target: &AscentTarget,
    budget: &Budget,
) -> Result<QPoly> {
    let hist = common_ascent_histogram(n, t, target, budget)?;
    Ok(QPoly::from_coeffs(
        hist.into_iter().map(Into::into).collect(),
    ))
}

/// `n!` as an arbitrary-precision integer.
pub fn factorial(n: usize) -> BigUint {
    (1..=n)
        .map(BigUint::from)
        .product::<BigUint>()
        .max(BigUint::one())
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Multinomial `n! / ∏ parts!` for parts summing to `n`.
pub fn multinomial(parts: &[usize]) -> BigUint {
    let mut total = 0;
    let mut acc = BigUint::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p);
    }
    acc
}
