use std::collections::BTreeSet;

use num_bigint::BigInt;

use segrelat::invariants::{rank_w_t_q, w_t, QRoute, WRoute};
use segrelat::perm::RankSet;
use segrelat::poset::{
    boolean_lattice, chain_census, descent_positions, fixture, interval, mobius, rank_select,
    segre_power, subspace_lattice, verify_el, Label, LabeledPoset,
};
use segrelat::{Budget, Permutation};

fn b() -> Budget {
    Budget::default()
}

fn word(labels: &[&[i64]]) -> Vec<Label> {
    labels.iter().map(|l| Label(l.to_vec())).collect()
}

/// `(-1)^{|J|-1} μ(P_J)`.
fn rank_betti(p: &LabeledPoset, j: &RankSet) -> i128 {
    let mu = mobius(&rank_select(p, j).unwrap(), None).unwrap();
    if j.len() % 2 == 1 {
        mu
    } else {
        -mu
    }
}

#[test]
fn boolean_chain_words_are_permutations() {
    let p = boolean_lattice(4, &b()).unwrap();
    let census = chain_census(&p, &b()).unwrap();
    assert_eq!(census.total, 24);
    assert_eq!(census.words.len(), 24);
    for sigma in Permutation::all(4) {
        let w: Vec<Label> = sigma
            .word()
            .iter()
            .map(|&x| Label(vec![x as i64]))
            .collect();
        assert_eq!(census.count_of(&w), 1);
    }
    let b3 = chain_census(&boolean_lattice(3, &b()).unwrap(), &b()).unwrap();
    assert_eq!(b3.decreasing, 1);
    assert_eq!(b3.count_of(&word(&[&[3], &[2], &[1]])), 1);
    assert!(verify_el(&p, &b()).unwrap().pass);
}

#[test]
fn subspace_chain_words_weighted_by_inversions() {
    for (n, q) in [(3, 2u64), (3, 3), (4, 2)] {
        let p = subspace_lattice(n, q, &b()).unwrap();
        let census = chain_census(&p, &b()).unwrap();
        for sigma in Permutation::all(n) {
            let w: Vec<Label> = sigma
                .word()
                .iter()
                .map(|&x| Label(vec![x as i64]))
                .collect();
            assert_eq!(
                census.count_of(&w),
                q.pow(sigma.inversions() as u32),
                "n={n} q={q}"
            );
        }
        assert_eq!(census.words.len(), (1..=n).product::<usize>());
    }
    let p = subspace_lattice(3, 2, &b()).unwrap();
    assert_eq!(chain_census(&p, &b()).unwrap().total, 21);
}

#[test]
fn segre_chains_of_boolean_cube() {
    let p = boolean_lattice(4, &b()).unwrap();
    let cube = segre_power(&p, 3, &b()).unwrap();
    let census = chain_census(&cube, &b()).unwrap();
    let c = word(&[&[1, 3, 3], &[2, 2, 1], &[3, 1, 4], &[4, 4, 2]]);
    let d = word(&[&[1, 3, 3], &[2, 4, 4], &[3, 1, 1], &[4, 2, 2]]);
    assert_eq!(census.count_of(&c), 1);
    assert_eq!(census.count_of(&d), 1);
    // No ascents means every position is a descent.
    assert_eq!(descent_positions(&c), vec![1, 2, 3]);
    assert_eq!(descent_positions(&d), vec![2]);
    assert_eq!(segre_power(&p, 1, &b()).unwrap(), p);
}

#[test]
fn segre_descents_complement_common_ascents() {
    let bool4 = boolean_lattice(4, &b()).unwrap();
    let sub3 = subspace_lattice(3, 2, &b()).unwrap();
    for base in [bool4, sub3] {
        let n = base.rank();
        let base_census = chain_census(&base, &b()).unwrap();
        let sq = segre_power(&base, 2, &b()).unwrap();
        let census = chain_census(&sq, &b()).unwrap();
        assert_eq!(census.total, base_census.total * base_census.total);
        for wc in &census.words {
            let components: Vec<Vec<Label>> = (0..2)
                .map(|j| wc.word.iter().map(|l| Label(vec![l.0[j]])).collect())
                .collect();
            let mut common: BTreeSet<usize> = (1..n).collect();
            for comp in &components {
                let asc: BTreeSet<usize> = (1..n)
                    .filter(|i| !descent_positions(comp).contains(i))
                    .collect();
                common = common.intersection(&asc).copied().collect();
            }
            let expected: Vec<usize> = (1..n).filter(|i| !common.contains(i)).collect();
            assert_eq!(wc.descents, expected);
            let product =
                base_census.count_of(&components[0]) * base_census.count_of(&components[1]);
            assert_eq!(wc.count, product);
        }
    }
}

#[test]
fn layer_sizes_are_powers() {
    let base = subspace_lattice(3, 2, &b()).unwrap();
    for t in 1..=3 {
        let p = segre_power(&base, t, &b()).unwrap();
        let expected: Vec<usize> = base.rank_sizes().iter().map(|s| s.pow(t as u32)).collect();
        assert_eq!(p.rank_sizes(), expected);
    }
}

#[test]
fn chain_counts_match_mobius_of_rank_selections() {
    let posets = vec![
        boolean_lattice(4, &b()).unwrap(),
        segre_power(&boolean_lattice(3, &b()).unwrap(), 2, &b()).unwrap(),
        segre_power(&subspace_lattice(3, 2, &b()).unwrap(), 2, &b()).unwrap(),
        subspace_lattice(3, 3, &b()).unwrap(),
        fixture("repeated-labels-square").unwrap(),
    ];
    for p in &posets {
        let n = p.rank();
        let census = chain_census(p, &b()).unwrap();
        let mu = mobius(p, None).unwrap();
        let sign = if n % 2 == 0 { 1 } else { -1 };
        assert_eq!(census.decreasing as i128, sign * mu);
        for j in RankSet::all(n) {
            assert_eq!(
                census.count_with_descents(j.elements()) as i128,
                rank_betti(p, &j),
                "J={j:?}"
            );
        }
    }
}

#[test]
fn uniform_interval_recurrence() {
    let posets = vec![
        boolean_lattice(4, &b()).unwrap(),
        segre_power(&boolean_lattice(4, &b()).unwrap(), 2, &b()).unwrap(),
        subspace_lattice(4, 2, &b()).unwrap(),
        segre_power(&subspace_lattice(3, 2, &b()).unwrap(), 2, &b()).unwrap(),
    ];
    for p in &posets {
        let n = p.rank();
        let sizes = p.rank_sizes();
        for j in RankSet::all(n) {
            let Some(top) = j.largest() else { continue };
            let rest = j.without_max();
            let x0 = (0..p.len()).find(|&x| p.rank_of(x) == top).unwrap();
            let lower = interval(p, p.bottom(), x0).unwrap();
            let lhs = rank_betti(p, &j) + rank_betti(p, &rest);
            let rhs = sizes[top] as i128 * rank_betti(&lower, &rest.with_ambient(top).unwrap());
            assert_eq!(lhs, rhs, "J={j:?}");
        }
    }
}

#[test]
fn mobius_matches_w() {
    for (n, t) in [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)] {
        let p = segre_power(&boolean_lattice(n, &b()).unwrap(), t, &b()).unwrap();
        let w = w_t(n, t, WRoute::Recurrence, &b()).unwrap();
        let sign: i64 = if n % 2 == 0 { 1 } else { -1 };
        assert_eq!(BigInt::from(mobius(&p, None).unwrap()), w * sign);
        assert_eq!(p.rank_sizes()[1], n.pow(t as u32));
    }
}

#[test]
fn rank_selected_subspace_square() {
    let p = segre_power(&subspace_lattice(3, 2, &b()).unwrap(), 2, &b()).unwrap();
    let j = RankSet::new(3, vec![1]).unwrap();
    let poly = rank_w_t_q(3, 2, &j, QRoute::Recurrence, &b()).unwrap();
    assert_eq!(
        BigInt::from(rank_betti(&p, &j)),
        poly.eval(&BigInt::from(2))
    );
    assert!(verify_el(&p, &b()).unwrap().pass);
    let empty = rank_select(&p, &RankSet::empty(3)).unwrap();
    assert_eq!(mobius(&empty, None).unwrap(), -1);
}

#[test]
fn text_format_round_trip() {
    for p in [
        boolean_lattice(3, &b()).unwrap(),
        subspace_lattice(2, 3, &b()).unwrap(),
        fixture("repeated-labels").unwrap(),
        rank_select(
            &boolean_lattice(3, &b()).unwrap(),
            &RankSet::new(3, vec![2]).unwrap(),
        )
        .unwrap(),
    ] {
        let text = p.to_string();
        let back: LabeledPoset = text.parse().unwrap();
        assert_eq!(back.to_string(), text);
        assert_eq!(back, p);
    }
}

#[test]
fn budgets_are_enforced() {
    let tight = Budget { chains: 10, ..b() };
    let p = boolean_lattice(4, &b()).unwrap();
    assert!(chain_census(&p, &tight).is_err());
    assert!(verify_el(&p, &tight).is_err());
    let small = Budget {
        elements: 100,
        ..b()
    };
    assert!(segre_power(&p, 3, &small).is_err());
}
