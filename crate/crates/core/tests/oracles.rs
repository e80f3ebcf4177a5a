//! Library results checked against naive enumerations written from scratch.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use segrelat::invariants::{rank_w_t_q, w_t, w_t_q, QRoute, WRoute};
use segrelat::perm::{
    count_tuples_common_ascent, kostka, partitions_of, perm_stats, syt_count_with_descents,
    AscentTarget, DescentMatch,
};
use segrelat::poset::{mobius, segre_power, subspace_lattice};
use segrelat::qpoly::q_binomial;
use segrelat::symfunc::{e_to_h, h, h_to_schur, inner_product, schur_to_h};
use segrelat::{Budget, Partition, Permutation, QPoly, RankSet, SymFunc};

fn p(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

/// Partitions of `n` with parts at most `max`, by recursive descent.
fn partitions_oracle(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions_oracle(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[test]
fn partition_enumeration() {
    assert_eq!(partitions_of(0), vec![Partition::empty()]);
    assert_eq!(partitions_oracle(4, 4).len(), 5);
    assert_eq!(partitions_oracle(6, 6).len(), 11);
    for n in 0..=9 {
        let lib: Vec<Vec<usize>> = partitions_of(n)
            .iter()
            .map(|l| l.parts().to_vec())
            .collect();
        let oracle = partitions_oracle(n, n);
        assert_eq!(lib.len(), oracle.len(), "n={n}");
        let a: BTreeSet<_> = lib.iter().collect();
        let b: BTreeSet<_> = oracle.iter().collect();
        assert_eq!(a, b, "n={n}");
        // Reverse-lexicographic: largest sequence first.
        assert!(lib.windows(2).all(|w| w[0] > w[1]), "n={n}");
    }
}

/// Semistandard fillings of `shape` with content `content`, filled cell by
/// cell in reading order with row-weak and column-strict checks.
fn ssyt_oracle(shape: &[usize], content: &[usize]) -> u64 {
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
        .collect();
    let mut grid: Vec<Vec<usize>> = shape.iter().map(|&l| vec![0; l]).collect();
    let mut left = content.to_vec();
    fn go(
        i: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<usize>>,
        left: &mut Vec<usize>,
    ) -> u64 {
        if i == cells.len() {
            return 1;
        }
        let (r, c) = cells[i];
        let mut total = 0;
        for v in 1..=left.len() {
            if left[v - 1] == 0 {
                continue;
            }
            if c > 0 && grid[r][c - 1] > v {
                continue;
            }
            if r > 0 && grid[r - 1][c] >= v {
                continue;
            }
            grid[r][c] = v;
            left[v - 1] -= 1;
            total += go(i + 1, cells, grid, left);
            left[v - 1] += 1;
        }
        grid[r][c] = 0;
        total
    }
    go(0, &cells, &mut grid, &mut left)
}

#[test]
fn kostka_against_fillings() {
    assert_eq!(ssyt_oracle(&[2, 1], &[1, 1, 1]), 2);
    for n in 0..=6 {
        for mu in partitions_of(n) {
            for nu in partitions_of(n) {
                assert_eq!(
                    kostka(&mu, &nu).unwrap(),
                    ssyt_oracle(mu.parts(), nu.parts()),
                    "K({mu},{nu})"
                );
            }
        }
    }
    assert_eq!(kostka(&p(&[1, 1]), &p(&[2])).unwrap(), 0);
    assert!(kostka(&p(&[2]), &p(&[1])).is_err());
}

/// All standard Young tableaux of a shape, as row-of-each-entry vectors.
fn syt_oracle(shape: &[usize]) -> Vec<Vec<usize>> {
    let n: usize = shape.iter().sum();
    let mut out = Vec::new();
    let mut filled = vec![0usize; shape.len()];
    let mut rows = Vec::with_capacity(n);
    fn go(
        shape: &[usize],
        filled: &mut Vec<usize>,
        rows: &mut Vec<usize>,
        n: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if rows.len() == n {
            out.push(rows.clone());
            return;
        }
        for r in 0..shape.len() {
            if filled[r] < shape[r] && (r == 0 || filled[r - 1] > filled[r]) {
                filled[r] += 1;
                rows.push(r);
                go(shape, filled, rows, n, out);
                rows.pop();
                filled[r] -= 1;
            }
        }
    }
    go(shape, &mut filled, &mut rows, n, &mut out);
    out
}

#[test]
fn syt_descent_counts() {
    for n in 1..=7 {
        for lambda in partitions_of(n) {
            let tableaux = syt_oracle(lambda.parts());
            let mut by_set: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
            for t in &tableaux {
                // i is a descent when i+1 sits in a strictly lower row.
                let des: Vec<usize> = (1..n).filter(|&i| t[i] > t[i - 1]).collect();
                *by_set.entry(des).or_default() += 1;
            }
            let mut total = 0;
            for j in RankSet::all(n) {
                let exact = syt_count_with_descents(&lambda, &j, DescentMatch::Exact).unwrap();
                let expected = by_set.get(j.elements()).copied().unwrap_or(0);
                assert_eq!(exact, expected, "{lambda} J={j:?}");
                let contained: u64 = by_set
                    .iter()
                    .filter(|(d, _)| d.iter().all(|x| j.contains(*x)))
                    .map(|(_, c)| c)
                    .sum();
                assert_eq!(
                    syt_count_with_descents(&lambda, &j, DescentMatch::Contained).unwrap(),
                    contained
                );
                total += exact;
            }
            assert_eq!(total, tableaux.len() as u64);
            assert_eq!(
                kostka(&lambda, &Partition::column(n)).unwrap(),
                tableaux.len() as u64
            );
        }
    }
    let j1 = RankSet::new(3, vec![1]).unwrap();
    let j2 = RankSet::new(3, vec![2]).unwrap();
    assert_eq!(
        syt_count_with_descents(&p(&[2, 1]), &j1, DescentMatch::Exact).unwrap(),
        1
    );
    assert_eq!(
        syt_count_with_descents(&p(&[2, 1]), &j2, DescentMatch::Exact).unwrap(),
        1
    );
}

#[test]
fn permutation_statistics() {
    let s = perm_stats(&"3142".parse::<Permutation>().unwrap());
    assert_eq!(s.ascents.elements(), &[2]);
    assert_eq!(s.descents.elements(), &[1, 3]);
    assert_eq!(s.inversions, 3);
    let s = perm_stats(&"4321".parse::<Permutation>().unwrap());
    assert_eq!((s.descents.elements(), s.inversions), (&[1, 2, 3][..], 6));
    assert_eq!(perm_stats(&Permutation::identity(4)).inversions, 0);

    for n in 1..=6 {
        let mut dist = vec![BigInt::zero(); n * (n - 1) / 2 + 1];
        for sigma in Permutation::all(n) {
            let w = sigma.word();
            let inv = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| w[i] > w[j])
                .count();
            assert_eq!(perm_stats(&sigma).inversions, inv);
            dist[inv] += 1;
        }
        let qfact = (1..=n).fold(QPoly::one(), |acc, i| &acc * &QPoly::from_i64s(&vec![1; i]));
        assert_eq!(QPoly::from_coeffs(dist), qfact, "n={n}");
    }
}

/// Tuples of permutations with the given common-ascent set, by nested
/// iteration over `S_n^t`.
fn common_ascent_oracle(n: usize, t: usize, common: &BTreeSet<usize>) -> BTreeMap<usize, u64> {
    let perms = Permutation::all(n);
    let ascents =
        |w: &[usize]| -> BTreeSet<usize> { (1..n).filter(|&i| w[i - 1] < w[i]).collect() };
    let invs = |w: &[usize]| {
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| w[i] > w[j])
            .count()
    };
    let mut out = BTreeMap::new();
    let mut idx = vec![0usize; t];
    loop {
        let mut inter: BTreeSet<usize> = (1..n).collect();
        let mut inv = 0;
        for &i in &idx {
            let w = perms[i].word();
            inter = inter.intersection(&ascents(w)).copied().collect();
            inv += invs(w);
        }
        if &inter == common {
            *out.entry(inv).or_default() += 1;
        }
        let mut k = 0;
        while k < t {
            idx[k] += 1;
            if idx[k] < perms.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == t {
            return out;
        }
    }
}

#[test]
fn common_ascent_counts() {
    let b = Budget::default();
    for (n, t) in [(1, 2), (2, 2), (3, 2), (4, 2), (2, 3), (3, 3)] {
        let mut total = BigUint::zero();
        for j in RankSet::all(n) {
            let common: BTreeSet<usize> = j.complement().elements().iter().copied().collect();
            let oracle = common_ascent_oracle(n, t, &common);
            let target = AscentTarget::ExactComplement(j.clone());
            let count = count_tuples_common_ascent(n, t, &target, &b).unwrap();
            assert_eq!(
                count,
                BigUint::from(oracle.values().sum::<u64>()),
                "n={n} t={t} J={j:?}"
            );
            let poly = rank_w_t_q(n, t, &j, QRoute::Brute, &b).unwrap();
            for (inv, c) in &oracle {
                assert_eq!(poly.coeff(*inv), BigInt::from(*c));
            }
            total += count;
        }
        let fact: BigUint = (1..=n).map(BigUint::from).product();
        assert_eq!(total, num_traits::pow(fact, t));
    }
    for n in 1..=6 {
        let c = count_tuples_common_ascent(n, 1, &AscentTarget::NoneCommon, &b).unwrap();
        assert_eq!(c, BigUint::one());
    }
    assert_eq!(
        w_t_q(2, 2, QRoute::Brute, &b).unwrap(),
        QPoly::from_i64s(&[0, 2, 1])
    );
    assert_eq!(w_t(2, 2, WRoute::Brute, &b).unwrap(), BigInt::from(3));
    assert_eq!(w_t(3, 3, WRoute::Brute, &b).unwrap(), BigInt::from(163));
}

/// `e_n` from `e_n = Σ_{i<n} (-1)^{n-1-i} e_i h_{n-i}`.
fn e_recurrence(n: usize) -> SymFunc {
    let mut e = vec![SymFunc::one()];
    for m in 1..=n {
        let mut acc = SymFunc::zero(m);
        for (i, ei) in e.iter().enumerate() {
            let term = ei.mul(&h(m - i));
            let sign = if (m - 1 - i) % 2 == 0 { 1 } else { -1 };
            acc = acc
                .try_add(&term.scale(&BigRational::from_integer(sign.into())))
                .unwrap();
        }
        e.push(acc);
    }
    e.swap_remove(n)
}

#[test]
fn elementary_closed_form_matches_recurrence() {
    for n in 0..=8 {
        assert_eq!(e_to_h(n), e_recurrence(n), "n={n}");
    }
}

#[test]
fn schur_inner_products_are_kostka() {
    let s21 = schur_to_h(&p(&[2, 1]));
    let h111 = h(1).mul(&h(1)).mul(&h(1));
    assert_eq!(
        inner_product(&s21, &h111).unwrap(),
        BigRational::from_integer(2.into())
    );
    for n in 0..=5 {
        for mu in partitions_of(n) {
            for nu in partitions_of(n) {
                let hnu = nu
                    .parts()
                    .iter()
                    .fold(SymFunc::one(), |acc, &k| acc.mul(&h(k)));
                let ip = inner_product(&schur_to_h(&mu), &hnu).unwrap();
                let k = ssyt_oracle(mu.parts(), nu.parts());
                assert_eq!(ip, BigRational::from_integer(k.into()));
            }
            let back = h_to_schur(&schur_to_h(&mu));
            assert_eq!(back.len(), 1);
            assert!(back[&mu].is_one());
        }
    }
}

/// Two-dimensional subspaces of `F_2^4`, as sets of their four vectors.
#[test]
fn planes_in_f2_4() {
    let mut planes: HashSet<BTreeSet<u8>> = HashSet::new();
    for a in 1u8..16 {
        for b in 1u8..16 {
            if a != b {
                planes.insert([0, a, b, a ^ b].into_iter().collect());
            }
        }
    }
    assert_eq!(planes.len(), 35);
    assert_eq!(
        q_binomial(4, 2).unwrap().eval(&BigInt::from(2)),
        BigInt::from(35)
    );
    let lattice = subspace_lattice(4, 2, &Budget::default()).unwrap();
    assert_eq!(lattice.rank_sizes()[2], 35);
}

#[test]
fn mobius_of_small_subspace_square() {
    let b = Budget::default();
    let sq = segre_power(&subspace_lattice(2, 2, &b).unwrap(), 2, &b).unwrap();
    // Rank 2 poset with 9 middle elements: μ = -(1 + 9·(-1)).
    assert_eq!(sq.rank_sizes(), vec![1, 9, 1]);
    assert_eq!(mobius(&sq, None).unwrap(), 8);
    let w = w_t_q(2, 2, QRoute::Recurrence, &b).unwrap();
    assert_eq!(w.eval(&BigInt::from(2)), BigInt::from(8));
}
