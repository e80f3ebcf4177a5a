//! Explicit finite graded posets with edge labels.
//!
//! These are deliberately naive: elements and covers are materialised, chains
//! are walked one by one, and Möbius numbers come from the defining
//! recursion. Everything the closed formulas claim is checked against them.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{invalid, Error, Result};
use crate::perm::RankSet;
use crate::qpoly::q_binomial;

/// An edge label: an integer tuple ordered componentwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Label(pub Vec<i64>);

impl Label {
    pub fn width(&self) -> usize {
        self.0.len()
    }

    /// Componentwise `≤` with at least one strict inequality.
    pub fn lt(&self, other: &Label) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
            && self.0 != other.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self
            .0
            .iter()
            .map(i64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        if self.0.len() == 1 {
            write!(f, "{body}")
        } else {
            write!(f, "({body})")
        }
    }
}

impl FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Label> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidArgument(format!("bad label `{s}`")))?;
        Ok(Label(parts))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub lower: usize,
    pub upper: usize,
    pub label: Option<Label>,
}

/// A finite bounded graded poset given by its cover relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledPoset {
    ids: Vec<String>,
    ranks: Vec<usize>,
    covers: Vec<Cover>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
    bottom: usize,
    top: usize,
}

impl LabeledPoset {
    /// Validates boundedness and gradedness. `up` and `down` store cover
    /// indices, in the order the covers were given.
    pub fn new(elements: Vec<(String, usize)>, covers: Vec<Cover>) -> Result<Self> {
        if elements.is_empty() {
            return invalid("a poset needs at least one element");
        }
        let mut index = HashMap::with_capacity(elements.len());
        let (ids, ranks): (Vec<String>, Vec<usize>) = elements.into_iter().unzip();
        for (i, id) in ids.iter().enumerate() {
            if id.is_empty() || id.chars().any(char::is_whitespace) {
                return invalid(format!(
                    "element id `{id}` must be nonempty without whitespace"
                ));
            }
            if index.insert(id.clone(), i).is_some() {
                return invalid(format!("duplicate element `{id}`"));
            }
        }
        let len = ids.len();
        let mut up = vec![Vec::new(); len];
        let mut down = vec![Vec::new(); len];
        let mut width = None;
        for (k, c) in covers.iter().enumerate() {
            if c.lower >= len || c.upper >= len {
                return invalid("cover refers to a missing element");
            }
            if ranks[c.upper] != ranks[c.lower] + 1 {
                return invalid(format!(
                    "cover {} < {} does not raise rank by one",
                    ids[c.lower], ids[c.upper]
                ));
            }
            if let Some(l) = &c.label {
                if *width.get_or_insert(l.width()) != l.width() {
                    return invalid("labels of different widths");
                }
            }
            if up[c.lower]
                .iter()
                .any(|&o: &usize| covers[o].upper == c.upper)
            {
                return invalid(format!(
                    "repeated cover {} < {}",
                    ids[c.lower], ids[c.upper]
                ));
            }
            up[c.lower].push(k);
            down[c.upper].push(k);
        }
        let minimal: Vec<usize> = (0..len).filter(|&i| down[i].is_empty()).collect();
        let maximal: Vec<usize> = (0..len).filter(|&i| up[i].is_empty()).collect();
        let (bottom, top) = match (minimal.as_slice(), maximal.as_slice()) {
            (&[b], &[t]) => (b, t),
            _ => return invalid("poset must have a unique minimum and a unique maximum"),
        };
        if ranks[bottom] != 0 {
            return invalid("the minimum must have rank 0");
        }
        Ok(LabeledPoset {
            ids,
            ranks,
            covers,
            up,
            down,
            index,
            bottom,
            top,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn rank_of(&self, i: usize) -> usize {
        self.ranks[i]
    }

    /// Rank of the maximum.
    pub fn rank(&self) -> usize {
        self.ranks[self.top]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn covers(&self) -> &[Cover] {
        &self.covers
    }

    pub fn up_covers(&self, i: usize) -> impl Iterator<Item = &Cover> {
        self.up[i].iter().map(move |&k| &self.covers[k])
    }

    pub fn is_labeled(&self) -> bool {
        self.covers.iter().all(|c| c.label.is_some())
    }

    /// Number of elements of each rank.
    pub fn rank_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.rank() + 1];
        for &r in &self.ranks {
            if r < sizes.len() {
                sizes[r] += 1;
            }
        }
        sizes
    }

    fn layers(&self) -> Vec<Vec<usize>> {
        let mut layers = vec![Vec::new(); self.rank() + 1];
        for (i, &r) in self.ranks.iter().enumerate() {
            layers[r].push(i);
        }
        layers
    }

    fn by_rank(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.ranks[i]);
        order
    }

    /// `below[z]` holds every `w < z` as a bitset.
    fn strict_down_sets(&self) -> Vec<BitSet> {
        let mut below = vec![BitSet::new(self.len()); self.len()];
        for z in self.by_rank() {
            let mut acc = BitSet::new(self.len());
            for &k in &self.down[z] {
                let d = self.covers[k].lower;
                acc.union_with(&below[d]);
                acc.insert(d);
            }
            below[z] = acc;
        }
        below
    }
}

#[derive(Clone, Debug)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(len: usize) -> Self {
        BitSet(vec![0; len.div_ceil(64)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }
}

fn check_elements(count: &BigUint, budget: &Budget) -> Result<()> {
    if *count > BigUint::from(budget.elements) {
        return Err(Error::BudgetExceeded {
            what: "poset element",
            needed: count.to_string(),
            limit: budget.elements,
            hint: "use the closed formulas instead of an explicit poset",
        });
    }
    Ok(())
}

fn subset_id(mask: u32, n: usize) -> String {
    let items: Vec<String> = (1..=n)
        .filter(|i| mask >> (i - 1) & 1 == 1)
        .map(|i| i.to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

/// The subsets of `[n]` ordered by inclusion; the cover `A ⋖ A ∪ {a}` is
/// labelled `a`.
pub fn boolean_lattice(n: usize, budget: &Budget) -> Result<LabeledPoset> {
    if n >= 32 {
        return check_elements(&(BigUint::from(1u32) << n), budget).and(invalid("n too large"));
    }
    check_elements(&BigUint::from(1u64 << n), budget)?;
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let pos: HashMap<u32, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let elements = masks
        .iter()
        .map(|&m| (subset_id(m, n), m.count_ones() as usize))
        .collect();
    let mut covers = Vec::new();
    for &m in &masks {
        for a in 0..n {
            if m >> a & 1 == 0 {
                covers.push(Cover {
                    lower: pos[&m],
                    upper: pos[&(m | 1 << a)],
                    label: Some(Label(vec![a as i64 + 1])),
                });
            }
        }
    }
    LabeledPoset::new(elements, covers)
}

fn is_prime(q: u64) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

/// A subspace of `F_q^n` in reduced row-echelon form.
struct Subspace {
    rows: Vec<Vec<u64>>,
    /// Every vector of the subspace, encoded base `q`.
    vectors: Vec<u64>,
    /// Bitmask of rightmost nonzero coordinates of its nonzero vectors.
    pivots_right: u64,
}

fn encode(v: &[u64], q: u64) -> u64 {
    v.iter().rev().fold(0, |acc, &x| acc * q + x)
}

fn subspace_from_rows(rows: Vec<Vec<u64>>, n: usize, q: u64) -> Subspace {
    let k = rows.len();
    let mut vectors = Vec::with_capacity(q.pow(k as u32) as usize);
    let mut pivots_right = 0u64;
    let mut coeffs = vec![0u64; k];
    loop {
        let mut v = vec![0u64; n];
        for (a, row) in coeffs.iter().zip(&rows) {
            for (x, r) in v.iter_mut().zip(row) {
                *x = (*x + a * r) % q;
            }
        }
        if let Some(c) = v.iter().rposition(|&x| x != 0) {
            pivots_right |= 1 << c;
        }
        vectors.push(encode(&v, q));
        // Odometer over F_q^k.
        let mut i = 0;
        while i < k {
            coeffs[i] += 1;
            if coeffs[i] < q {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
    }
    vectors.sort_unstable();
    Subspace {
        rows,
        vectors,
        pivots_right,
    }
}

fn rref_subspaces(n: usize, k: usize, q: u64) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(k);
    fn choose(
        n: usize,
        k: usize,
        start: usize,
        pivots: &mut Vec<usize>,
        q: u64,
        out: &mut Vec<Vec<Vec<u64>>>,
    ) {
        if pivots.len() == k {
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(i, &p)| {
                    ((p + 1)..n)
                        .filter(|c| !pivots.contains(c))
                        .map(move |c| (i, c))
                })
                .collect();
            let mut values = vec![0u64; free.len()];
            loop {
                let mut rows = vec![vec![0u64; n]; k];
                for (i, &p) in pivots.iter().enumerate() {
                    rows[i][p] = 1;
                }
                for (&(i, c), &v) in free.iter().zip(&values) {
                    rows[i][c] = v;
                }
                out.push(rows);
                let mut j = 0;
                while j < values.len() {
                    values[j] += 1;
                    if values[j] < q {
                        break;
                    }
                    values[j] = 0;
                    j += 1;
                }
                if j == values.len() {
                    break;
                }
            }
            return;
        }
        for p in start..n {
            pivots.push(p);
            choose(n, k, p + 1, pivots, q, out);
            pivots.pop();
        }
    }
    choose(n, k, 0, &mut pivots, q, &mut out);
    out
}

fn subspace_id(rows: &[Vec<u64>], q: u64) -> String {
    let sep = if q <= 10 { "" } else { "." };
    let rows: Vec<String> = rows
        .iter()
        .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(sep))
        .collect();
    format!("<{}>", rows.join(";"))
}

/// Subspaces of `F_q^n` ordered by inclusion. The cover `X ⋖ Y` is labelled by
/// the one coordinate that is the rightmost nonzero entry of some vector of
/// `Y` but of no vector of `X`.
pub fn subspace_lattice(n: usize, q: u64, budget: &Budget) -> Result<LabeledPoset> {
    if !is_prime(q) {
        return invalid(format!("q = {q} is not prime"));
    }
    if n >= 63 {
        return invalid("n too large");
    }
    let qb = num_bigint::BigInt::from(q);
    let count: num_bigint::BigInt = (0..=n)
        .map(|k| q_binomial(n, k).expect("k <= n").eval(&qb))
        .sum();
    check_elements(&count.to_biguint().expect("positive"), budget)?;
    let vectors_needed = BigUint::from(q).pow(n as u32);
    if vectors_needed > BigUint::from(budget.tuples) {
        return Err(Error::BudgetExceeded {
            what: "vector enumeration",
            needed: vectors_needed.to_string(),
            limit: budget.tuples,
            hint: "choose smaller n or q",
        });
    }
    let mut spaces: Vec<(usize, Subspace)> = Vec::new();
    for k in 0..=n {
        for rows in rref_subspaces(n, k, q) {
            spaces.push((k, subspace_from_rows(rows, n, q)));
        }
    }
    let start: Vec<usize> = {
        let mut s = vec![0; n + 2];
        for (k, _) in &spaces {
            s[k + 1] += 1;
        }
        for k in 1..s.len() {
            s[k] += s[k - 1];
        }
        s
    };
    let mut covers = Vec::new();
    for k in 0..n {
        for x in start[k]..start[k + 1] {
            for y in start[k + 1]..start[k + 2] {
                let (sx, sy) = (&spaces[x].1, &spaces[y].1);
                let inside = sx
                    .rows
                    .iter()
                    .all(|r| sy.vectors.binary_search(&encode(r, q)).is_ok());
                if inside {
                    let new = sy.pivots_right & !sx.pivots_right;
                    debug_assert_eq!(new.count_ones(), 1);
                    covers.push(Cover {
                        lower: x,
                        upper: y,
                        label: Some(Label(vec![new.trailing_zeros() as i64 + 1])),
                    });
                }
            }
        }
    }
    let elements = spaces
        .iter()
        .map(|(k, s)| (subspace_id(&s.rows, q), *k))
        .collect();
    LabeledPoset::new(elements, covers)
}

/// The `t`-fold Segre power: equal-rank `t`-tuples, componentwise covers, and
/// tuple labels.
pub fn segre_power(p: &LabeledPoset, t: usize, budget: &Budget) -> Result<LabeledPoset> {
    if t == 0 {
        return invalid("t must be at least 1");
    }
    if t == 1 {
        return Ok(p.clone());
    }
    let layers = p.layers();
    let count: BigUint = layers
        .iter()
        .map(|l| BigUint::from(l.len()).pow(t as u32))
        .sum();
    check_elements(&count, budget)?;

    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut ranks = Vec::new();
    for (r, layer) in layers.iter().enumerate() {
        let mut partial: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..t {
            partial = partial
                .into_iter()
                .flat_map(|pre| {
                    layer.iter().map(move |&x| {
                        let mut v = pre.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        ranks.extend(std::iter::repeat_n(r, partial.len()));
        tuples.extend(partial);
    }
    let pos: HashMap<&[usize], usize> = tuples
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_slice(), i))
        .collect();

    let mut covers = Vec::new();
    for (i, tuple) in tuples.iter().enumerate() {
        let mut partial: Vec<(Vec<usize>, Option<Vec<i64>>)> = vec![(Vec::new(), Some(Vec::new()))];
        for &x in tuple {
            let mut next = Vec::new();
            for (pre, lab) in &partial {
                for c in p.up_covers(x) {
                    let mut v = pre.clone();
                    v.push(c.upper);
                    let l = match (lab, &c.label) {
                        (Some(a), Some(b)) => Some(a.iter().chain(&b.0).copied().collect()),
                        _ => None,
                    };
                    next.push((v, l));
                }
            }
            partial = next;
        }
        for (v, l) in partial {
            covers.push(Cover {
                lower: i,
                upper: pos[v.as_slice()],
                label: l.map(Label),
            });
        }
    }
    let elements = tuples
        .iter()
        .zip(ranks)
        .map(|(v, r)| {
            let ids: Vec<&str> = v.iter().map(|&x| p.id(x)).collect();
            (format!("({})", ids.join(",")), r)
        })
        .collect();
    LabeledPoset::new(elements, covers)
}

/// Names accepted by [`fixture`].
pub const FIXTURES: [&str; 2] = ["repeated-labels", "repeated-labels-square"];

/// Small hand-built posets kept for regression tests.
///
/// `repeated-labels` is a rank-3 poset on `0, a, b, c, d, 1` whose labelling
/// repeats labels along edges yet is still an EL-labelling; its Segre square
/// has Möbius number −2.
pub fn fixture(name: &str) -> Result<LabeledPoset> {
    match name {
        "repeated-labels" => {
            let elements = [("0", 0), ("a", 1), ("b", 1), ("c", 2), ("d", 2), ("1", 3)]
                .iter()
                .map(|&(id, r)| (id.to_string(), r))
                .collect();
            let edges = [
                (0, 1, 1),
                (0, 2, 2),
                (1, 3, 2),
                (1, 4, 3),
                (2, 4, 1),
                (3, 5, 3),
                (4, 5, 2),
            ];
            let covers = edges
                .iter()
                .map(|&(lower, upper, l)| Cover {
                    lower,
                    upper,
                    label: Some(Label(vec![l])),
                })
                .collect();
            LabeledPoset::new(elements, covers)
        }
        "repeated-labels-square" => segre_power(&fixture("repeated-labels")?, 2, &Budget::default()),
        _ => invalid(format!(
            "unknown fixture `{name}`; known: {}",
            FIXTURES.join(", ")
        )),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElWitness {
    pub lower: String,
    pub upper: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElReport {
    pub pass: bool,
    pub intervals_checked: u64,
    pub chains_checked: u64,
    pub witness: Option<ElWitness>,
}

fn is_increasing(word: &[u32], labels: &[Label]) -> bool {
    word.windows(2)
        .all(|w| labels[w[0] as usize].lt(&labels[w[1] as usize]))
}

/// Checks the EL property on every interval `[x, y]` with `x < y`: exactly one
/// strictly increasing maximal chain, and its word strictly precedes every
/// other word lexicographically under the componentwise label order.
pub fn verify_el(p: &LabeledPoset, budget: &Budget) -> Result<ElReport> {
    let mut report = ElReport {
        pass: true,
        intervals_checked: 0,
        chains_checked: 0,
        witness: None,
    };
    let mut table: Vec<Label> = Vec::new();
    let mut interned: HashMap<&Label, u32> = HashMap::new();
    let mut cover_label = Vec::with_capacity(p.covers.len());
    for c in &p.covers {
        let Some(l) = &c.label else {
            report.pass = false;
            report.witness = Some(ElWitness {
                lower: p.id(c.lower).to_string(),
                upper: p.id(c.upper).to_string(),
                reason: "unlabelled cover".into(),
            });
            return Ok(report);
        };
        let id = *interned.entry(l).or_insert_with(|| {
            table.push(l.clone());
            table.len() as u32 - 1
        });
        cover_label.push(id);
    }

    for x in p.by_rank() {
        let mut words: BTreeMap<usize, Vec<Vec<u32>>> = BTreeMap::new();
        let mut produced = 0u64;
        let mut stack: Vec<(usize, Vec<u32>)> = vec![(x, Vec::new())];
        while let Some((z, word)) = stack.pop() {
            for &k in &p.up[z] {
                produced += 1;
                if produced > budget.chains {
                    return Err(Error::BudgetExceeded {
                        what: "chain enumeration",
                        needed: format!("more than {}", budget.chains),
                        limit: budget.chains,
                        hint: "verify a smaller poset",
                    });
                }
                let mut w = word.clone();
                w.push(cover_label[k]);
                let y = p.covers[k].upper;
                words.entry(y).or_default().push(w.clone());
                stack.push((y, w));
            }
        }
        for (y, ws) in words {
            report.intervals_checked += 1;
            report.chains_checked += ws.len() as u64;
            let fail = |reason: String| ElWitness {
                lower: p.id(x).to_string(),
                upper: p.id(y).to_string(),
                reason,
            };
            let increasing: Vec<&Vec<u32>> =
                ws.iter().filter(|w| is_increasing(w, &table)).collect();
            if increasing.len() != 1 {
                report.pass = false;
                report.witness = Some(fail(format!(
                    "{} increasing maximal chains",
                    increasing.len()
                )));
                return Ok(report);
            }
            let first = increasing[0];
            for w in &ws {
                if std::ptr::eq(w, first) {
                    continue;
                }
                let precedes = first
                    .iter()
                    .zip(w.iter())
                    .find(|(a, b)| a != b)
                    .is_some_and(|(&a, &b)| table[a as usize].lt(&table[b as usize]));
                if !precedes {
                    report.pass = false;
                    report.witness = Some(fail(format!(
                        "increasing word {} does not precede {}",
                        render_word(first.iter().map(|&i| &table[i as usize])),
                        render_word(w.iter().map(|&i| &table[i as usize])),
                    )));
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

fn render_word<'a>(labels: impl Iterator<Item = &'a Label>) -> String {
    labels.map(Label::to_string).collect::<Vec<_>>().join(" ")
}

/// Möbius number `μ(x, y)` by the defining recursion; the whole poset when
/// `interval` is `None`.
pub fn mobius(p: &LabeledPoset, interval: Option<(usize, usize)>) -> Result<i128> {
    let (x, y) = interval.unwrap_or((p.bottom, p.top));
    if x >= p.len() || y >= p.len() {
        return invalid("interval endpoint out of range");
    }
    let below = p.strict_down_sets();
    if x != y && !below[y].contains(x) {
        return invalid(format!("{} is not below {}", p.id(x), p.id(y)));
    }
    let members: Vec<usize> = p
        .by_rank()
        .into_iter()
        .filter(|&z| (z == x || below[z].contains(x)) && (z == y || below[y].contains(z)))
        .collect();
    let mut mu: HashMap<usize, i128> = HashMap::with_capacity(members.len());
    for (i, &z) in members.iter().enumerate() {
        let value = if z == x {
            1
        } else {
            -members[..i]
                .iter()
                .filter(|&&w| below[z].contains(w))
                .map(|w| mu[w])
                .sum::<i128>()
        };
        mu.insert(z, value);
    }
    Ok(mu[&y])
}

/// The closed interval `[x, y]` as a poset of its own, labels kept and ranks
/// shifted so that `x` has rank 0.
pub fn interval(p: &LabeledPoset, x: usize, y: usize) -> Result<LabeledPoset> {
    if x >= p.len() || y >= p.len() {
        return invalid("interval endpoint out of range");
    }
    let below = p.strict_down_sets();
    if x != y && !below[y].contains(x) {
        return invalid(format!("{} is not below {}", p.id(x), p.id(y)));
    }
    let inside = |z: usize| (z == x || below[z].contains(x)) && (z == y || below[y].contains(z));
    let mut new_index = HashMap::new();
    let mut elements = Vec::new();
    for z in (0..p.len()).filter(|&z| inside(z)) {
        new_index.insert(z, elements.len());
        elements.push((p.id(z).to_string(), p.ranks[z] - p.ranks[x]));
    }
    let covers = p
        .covers
        .iter()
        .filter(|c| inside(c.lower) && inside(c.upper))
        .map(|c| Cover {
            lower: new_index[&c.lower],
            upper: new_index[&c.upper],
            label: c.label.clone(),
        })
        .collect();
    LabeledPoset::new(elements, covers)
}

/// The rank-selected subposet on ranks `J ∪ {0, rank}`, with ranks renumbered
/// consecutively and no labels.
pub fn rank_select(p: &LabeledPoset, j: &RankSet) -> Result<LabeledPoset> {
    let n = p.rank();
    if j.ambient() != n {
        return invalid(format!("rank set must live in [{}]", n.saturating_sub(1)));
    }
    let mut levels = vec![0];
    levels.extend_from_slice(j.elements());
    if n > 0 {
        levels.push(n);
    }
    let below = p.strict_down_sets();
    let layers = p.layers();
    let mut new_index = HashMap::new();
    let mut elements = Vec::new();
    for (new_rank, &r) in levels.iter().enumerate() {
        for &x in &layers[r] {
            new_index.insert(x, elements.len());
            elements.push((p.id(x).to_string(), new_rank));
        }
    }
    let mut covers = Vec::new();
    for pair in levels.windows(2) {
        for &x in &layers[pair[0]] {
            for &y in &layers[pair[1]] {
                if below[y].contains(x) {
                    covers.push(Cover {
                        lower: new_index[&x],
                        upper: new_index[&y],
                        label: None,
                    });
                }
            }
        }
    }
    LabeledPoset::new(elements, covers)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordCount {
    pub word: Vec<Label>,
    /// Positions `i` in `1..rank` where label `i` is not below label `i+1`.
    pub descents: Vec<usize>,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentTally {
    pub descents: Vec<usize>,
    pub count: u64,
}

/// Maximal chains grouped by label word and by descent set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainCensus {
    pub rank: usize,
    pub total: u64,
    /// Chains with no ascent at all.
    pub decreasing: u64,
    pub words: Vec<WordCount>,
    pub descent_sets: Vec<DescentTally>,
}

impl ChainCensus {
    pub fn count_of(&self, word: &[Label]) -> u64 {
        self.words
            .iter()
            .find(|w| w.word == word)
            .map_or(0, |w| w.count)
    }

    pub fn count_with_descents(&self, descents: &[usize]) -> u64 {
        self.descent_sets
            .iter()
            .find(|d| d.descents == descents)
            .map_or(0, |d| d.count)
    }
}

pub fn descent_positions(word: &[Label]) -> Vec<usize> {
    (1..word.len())
        .filter(|&i| !word[i - 1].lt(&word[i]))
        .collect()
}

/// Walks every maximal chain from the minimum to the maximum.
pub fn chain_census(p: &LabeledPoset, budget: &Budget) -> Result<ChainCensus> {
    if !p.is_labeled() {
        return invalid("chain census needs a fully labelled poset");
    }
    let mut words: BTreeMap<Vec<Label>, u64> = BTreeMap::new();
    let mut total = 0u64;
    let mut stack: Vec<(usize, Vec<Label>)> = vec![(p.bottom, Vec::new())];
    while let Some((z, word)) = stack.pop() {
        if z == p.top {
            total += 1;
            if total > budget.chains {
                return Err(Error::BudgetExceeded {
                    what: "chain enumeration",
                    needed: format!("more than {}", budget.chains),
                    limit: budget.chains,
                    hint: "census a smaller poset",
                });
            }
            *words.entry(word).or_default() += 1;
            continue;
        }
        for c in p.up_covers(z) {
            let mut w = word.clone();
            w.push(c.label.clone().expect("checked labelled"));
            stack.push((c.upper, w));
        }
    }
    let rank = p.rank();
    let all: Vec<usize> = (1..rank).collect();
    let mut tallies: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    let mut decreasing = 0;
    let words: Vec<WordCount> = words
        .into_iter()
        .map(|(word, count)| {
            let descents = descent_positions(&word);
            *tallies.entry(descents.clone()).or_default() += count;
            if descents == all {
                decreasing += count;
            }
            WordCount {
                word,
                descents,
                count,
            }
        })
        .collect();
    Ok(ChainCensus {
        rank,
        total,
        decreasing,
        words,
        descent_sets: tallies
            .into_iter()
            .map(|(descents, count)| DescentTally { descents, count })
            .collect(),
    })
}

pub const FORMAT_HEADER: &str = "poset v1";

impl fmt::Display for LabeledPoset {
    /// The exchange format: a header, `e <id> <rank>` per element and
    /// `c <lower> <upper> [label]` per cover, in stored order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        writeln!(out, "{FORMAT_HEADER}")?;
        for (id, r) in self.ids.iter().zip(&self.ranks) {
            writeln!(out, "e {id} {r}")?;
        }
        for c in &self.covers {
            write!(out, "c {} {}", self.ids[c.lower], self.ids[c.upper])?;
            if let Some(l) = &c.label {
                let body: Vec<String> = l.0.iter().map(i64::to_string).collect();
                write!(out, " {}", body.join(","))?;
            }
            out.push('\n');
        }
        f.write_str(&out)
    }
}

impl FromStr for LabeledPoset {
    type Err = Error;

    fn from_str(text: &str) -> Result<LabeledPoset> {
        let parse_err = |line: usize, msg: String| Error::Parse { line, msg };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        match lines.next() {
            Some((_, h)) if h.trim() == FORMAT_HEADER => {}
            _ => return Err(parse_err(1, format!("expected header `{FORMAT_HEADER}`"))),
        }
        let mut elements: Vec<(String, usize)> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut covers = Vec::new();
        for (no, line) in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["e", id, rank] => {
                    let r = rank
                        .parse()
                        .map_err(|_| parse_err(no, format!("bad rank `{rank}`")))?;
                    if index.insert(id.to_string(), elements.len()).is_some() {
                        return Err(parse_err(no, format!("duplicate element `{id}`")));
                    }
                    elements.push((id.to_string(), r));
                }
                ["c", lo, hi, rest @ ..] if rest.len() <= 1 => {
                    let find = |id: &str| {
                        index
                            .get(id)
                            .copied()
                            .ok_or_else(|| parse_err(no, format!("unknown element `{id}`")))
                    };
                    let label = match rest.first() {
                        Some(l) => Some(
                            l.parse::<Label>()
                                .map_err(|e| parse_err(no, e.to_string()))?,
                        ),
                        None => None,
                    };
                    covers.push(Cover {
                        lower: find(lo)?,
                        upper: find(hi)?,
                        label,
                    });
                }
                _ => return Err(parse_err(no, format!("unrecognised line `{line}`"))),
            }
        }
        LabeledPoset::new(elements, covers)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn label_order() {
        let l = |v: &[i64]| Label(v.to_vec());
        assert!(l(&[1, 2]).lt(&l(&[1, 3])));
        assert!(!l(&[1, 2]).lt(&l(&[1, 2])));
        assert!(!l(&[1, 3]).lt(&l(&[2, 2])));
        assert_eq!(l(&[3]).to_string(), "3");
        assert_eq!(l(&[1, 3]).to_string(), "(1,3)");
        assert_eq!("(1,3)".parse::<Label>().unwrap(), l(&[1, 3]));
    }

    #[test]
    fn boolean_basics() {
        let p = boolean_lattice(2, &b()).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.id(p.bottom()), "{}");
        assert_eq!(p.id(p.top()), "{1,2}");
        assert_eq!(chain_census(&p, &b()).unwrap().total, 2);
        let small = Budget {
            elements: 10,
            ..b()
        };
        assert!(matches!(
            boolean_lattice(4, &small),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn subspace_profile() {
        let p = subspace_lattice(3, 2, &b()).unwrap();
        assert_eq!(p.rank_sizes(), vec![1, 7, 7, 1]);
        assert_eq!(mobius(&p, None).unwrap(), -8);
        assert!(subspace_lattice(2, 4, &b()).is_err());
    }

    #[test]
    fn fixture_behaviour() {
        let p = fixture("repeated-labels").unwrap();
        assert!(verify_el(&p, &b()).unwrap().pass);
        let sq = fixture("repeated-labels-square").unwrap();
        assert!(verify_el(&sq, &b()).unwrap().pass);
        assert_eq!(mobius(&sq, None).unwrap(), -2);
        assert_eq!(chain_census(&sq, &b()).unwrap().decreasing, 2);
        assert!(fixture("nope").is_err());
    }

    #[test]
    fn el_failure_has_witness() {
        // Two chains with identical words: no unique increasing chain.
        let elements = vec![
            ("0".into(), 0),
            ("a".into(), 1),
            ("b".into(), 1),
            ("1".into(), 2),
        ];
        let covers = [(0, 1, 1), (0, 2, 1), (1, 3, 2), (2, 3, 2)]
            .iter()
            .map(|&(lower, upper, l)| Cover {
                lower,
                upper,
                label: Some(Label(vec![l])),
            })
            .collect();
        let p = LabeledPoset::new(elements, covers).unwrap();
        let r = verify_el(&p, &b()).unwrap();
        assert!(!r.pass);
        let w = r.witness.unwrap();
        assert_eq!((w.lower.as_str(), w.upper.as_str()), ("0", "1"));
    }

    #[test]
    fn text_round_trip() {
        let p = fixture("repeated-labels-square").unwrap();
        let text = p.to_string();
        let back: LabeledPoset = text.parse().unwrap();
        assert_eq!(back, p);
        assert_eq!(back.to_string(), text);
        let bad = "poset v1\ne 0 0\nc 0 x 1\n";
        assert!(matches!(
            bad.parse::<LabeledPoset>(),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn rank_selection_of_boolean() {
        let p = boolean_lattice(3, &b()).unwrap();
        let empty = rank_select(&p, &RankSet::empty(3)).unwrap();
        assert_eq!(empty.len(), 2);
        assert_eq!(mobius(&empty, None).unwrap(), -1);
        let full = rank_select(&p, &RankSet::full(3)).unwrap();
        assert_eq!(full.len(), p.len());
        assert_eq!(mobius(&full, None).unwrap(), mobius(&p, None).unwrap());
        // Ranks {1}: 0̂ < three atoms < 1̂.
        let one = rank_select(&p, &RankSet::new(3, vec![1]).unwrap()).unwrap();
        assert_eq!(mobius(&one, None).unwrap(), 2);
    }
}
