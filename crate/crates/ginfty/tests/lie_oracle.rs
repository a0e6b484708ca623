use ginfty::freealg::{GCtx, StructureMode, TruncationConfig};
use ginfty::graded::{BasisElement, GradedSpace};
use ginfty::linalg;
use ginfty::scalar::Scalar;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

fn space_of_ferms(ferms: &[i64]) -> Arc<GradedSpace> {
    let basis = ferms
        .iter()
        .enumerate()
        .map(|(i, &f)| BasisElement {
            id: format!("v{}", i),
            ferm: f,
            weight: 0,
            charge: 0,
        })
        .collect();
    Arc::new(GradedSpace::new(basis).unwrap())
}

fn ctx_for(ferms: &[i64], max_len: usize) -> GCtx {
    let cfg = TruncationConfig {
        max_len,
        max_weight: 0,
        charge_min: 0,
        charge_max: 0,
        mode: StructureMode::Gerstenhaber,
    };
    GCtx::build(space_of_ferms(ferms), &cfg).unwrap()
}

/// Expand the left-normed bracket word over the given letters in the tensor
/// algebra, independently of the library's internals. deg[i] is the sign
/// degree of letter i.
fn brute_realize(word: &[usize], deg: &[i64]) -> BTreeMap<Vec<usize>, Scalar> {
    let mut acc: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
    acc.insert(vec![word[0]], Scalar::one());
    let mut acc_deg = deg[word[0]];
    for &a in &word[1..] {
        let mut next: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        for (w, c) in &acc {
            let mut left = w.clone();
            left.push(a);
            let e = next.entry(left).or_insert_with(Scalar::zero);
            *e += c.clone();
            let mut right = vec![a];
            right.extend_from_slice(w);
            let sign = -Scalar::neg_one_pow(acc_deg * deg[a]);
            let e = next.entry(right).or_insert_with(Scalar::zero);
            *e += c.clone() * sign;
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
        acc_deg += deg[a];
    }
    acc
}

/// Rank of the span of all length-p left-normed words, by dense elimination
/// over the full tensor component.
fn brute_lie_dim(ferms: &[i64], p: usize) -> usize {
    let n = ferms.len();
    let deg: Vec<i64> = ferms.iter().map(|f| 1 - f).collect();
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..p {
        words = words
            .into_iter()
            .flat_map(|w| {
                (0..n).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    let mut col_index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let realized: Vec<BTreeMap<Vec<usize>, Scalar>> = words
        .iter()
        .map(|w| brute_realize(w, &deg))
        .collect();
    for r in &realized {
        for k in r.keys() {
            let next = col_index.len();
            col_index.entry(k.clone()).or_insert(next);
        }
    }
    let cols = col_index.len();
    let mat: Vec<Vec<Scalar>> = realized
        .iter()
        .map(|r| {
            let mut row = vec![Scalar::zero(); cols];
            for (k, c) in r {
                row[col_index[k]] = c.clone();
            }
            row
        })
        .collect();
    linalg::rank(mat)
}

#[test]
fn frozen_dims_single_letters() {
    // one even-ferm letter has odd sign degree: nonzero self bracket
    let odd_letter = ctx_for(&[0], 4);
    assert_eq!(
        (1..=4).map(|p| odd_letter.lie_word_count(p)).collect::<Vec<_>>(),
        vec![1, 1, 0, 0]
    );
    // ferm-1 basis vector: even letter, all brackets vanish
    let even_letter = ctx_for(&[1], 4);
    assert_eq!(
        (1..=4).map(|p| even_letter.lie_word_count(p)).collect::<Vec<_>>(),
        vec![1, 0, 0, 0]
    );
}

#[test]
fn frozen_dims_pairs() {
    // two even letters (sign degree 0): the classical Witt numbers 2,1,2,3
    let two_even = ctx_for(&[1, 1], 4);
    assert_eq!(
        (1..=4).map(|p| two_even.lie_word_count(p)).collect::<Vec<_>>(),
        vec![2, 1, 2, 3]
    );
    // two odd letters: symmetric square in length 2
    let two_odd = ctx_for(&[0, 0], 4);
    assert_eq!(
        (1..=4).map(|p| two_odd.lie_word_count(p)).collect::<Vec<_>>(),
        vec![2, 3, 2, 3]
    );
    // one of each
    let mixed = ctx_for(&[1, 0], 4);
    assert_eq!(
        (1..=4).map(|p| mixed.lie_word_count(p)).collect::<Vec<_>>(),
        vec![2, 2, 2, 4]
    );
}

#[test]
fn frozen_dims_three_even() {
    let ctx = ctx_for(&[1, 1, 1], 4);
    assert_eq!(
        (1..=4).map(|p| ctx.lie_word_count(p)).collect::<Vec<_>>(),
        vec![3, 3, 8, 18]
    );
}

#[test]
fn random_alphabets_match_brute_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x11ED);
    for round in 0..12 {
        let n = rng.gen_range(1..=4);
        let ferms: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=2)).collect();
        let max_p = 4;
        let ctx = ctx_for(&ferms, max_p);
        for p in 1..=max_p {
            assert_eq!(
                ctx.lie_word_count(p),
                brute_lie_dim(&ferms, p),
                "round {} ferms {:?} p {}",
                round,
                ferms,
                p
            );
        }
    }
}
