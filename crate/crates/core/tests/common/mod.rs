use std::collections::BTreeMap;

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::Rng;

use semiflex::lie::{Gen, GradedLieAlgebra};
use semiflex::linalg::{q, Q};
use semiflex::pbw::PbwOrder;

/// Straightens by rewriting a randomly chosen out-of-order adjacent pair,
/// with no memoization.
pub fn straighten_random(alg: &GradedLieAlgebra, order: &PbwOrder, word: Vec<Gen>, rng: &mut StdRng) -> BTreeMap<Vec<Gen>, Q> {
    let bad: Vec<usize> = (0..word.len().saturating_sub(1)).filter(|&i| order.rank(word[i]) > order.rank(word[i + 1])).collect();
    let mut out = BTreeMap::new();
    if bad.is_empty() {
        out.insert(word, q(1));
        return out;
    }
    let i = bad[rng.gen_range(0..bad.len())];
    let mut swapped = word.clone();
    swapped.swap(i, i + 1);
    let mut acc = |part: BTreeMap<Vec<Gen>, Q>, c: &Q| {
        for (w, v) in part {
            let e = out.entry(w).or_insert_with(Q::zero);
            *e += c * v;
        }
    };
    acc(straighten_random(alg, order, swapped, rng), &q(1));
    for (k, c) in alg.bracket_gens(word[i], word[i + 1]).unwrap() {
        let mut w = word[..i].to_vec();
        w.push(*k);
        w.extend_from_slice(&word[i + 2..]);
        acc(straighten_random(alg, order, w, rng), c);
    }
    out.retain(|_, v| !v.is_zero());
    out
}
