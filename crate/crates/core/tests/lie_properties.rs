use proptest::prelude::*;

use semiflex::lie::{abelian, affine_sl2, loop_nilpotent_a, GradedLieAlgebra, Selector};
use semiflex::linalg::{q, SparseVec};

fn algebras() -> Vec<GradedLieAlgebra> {
    vec![affine_sl2(10), abelian(10), loop_nilpotent_a(10)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn brackets_are_weight_additive_and_antisymmetric(which in 0usize..3, i in 0usize..1000, j in 0usize..1000) {
        let g = &algebras()[which];
        let small = g.gens_in_degrees(-5, 5);
        let (x, y) = (small[i % small.len()], small[j % small.len()]);
        let xy = g.bracket(&g.gen_element(x), &g.gen_element(y)).unwrap();
        let yx = g.bracket(&g.gen_element(y), &g.gen_element(x)).unwrap();
        for k in xy.keys() {
            prop_assert_eq!(g.weight(*k), &(g.weight(x) + g.weight(y)));
        }
        let mut sum: SparseVec = xy.clone();
        semiflex::linalg::axpy(&mut sum, &q(1), &yx);
        prop_assert!(sum.is_empty());
    }
}

#[test]
fn splitting_is_closed_and_beta_is_homogeneous() {
    for g in algebras() {
        let (plus, minus) = g.split_semiinfinite().unwrap();
        for part in [&plus, &minus] {
            for x in part.members() {
                for y in part.members() {
                    if let Ok(terms) = g.bracket_gens(x, y) {
                        assert!(terms.iter().all(|(k, _)| part.contains(*k)));
                    }
                }
            }
        }
        for x in 0..g.dim() {
            if g.degree(x) != 0 {
                assert_eq!(g.beta(x), &q(0));
            }
        }
    }
}

#[test]
fn a_and_abar_span_every_degree() {
    let g = affine_sl2(10);
    let a = g.subalgebra(&Selector::A).unwrap();
    let abar = g.subalgebra(&Selector::ABar).unwrap();
    assert!(a.intersect(&abar).is_empty());
    assert_eq!(a.len() + abar.len(), g.dim());
    for n in -10..=10 {
        let comp = g.graded_component(n);
        assert_eq!(comp.iter().filter(|&&x| a.contains(x) || abar.contains(x)).count(), comp.len());
    }
}

#[test]
fn jacobi_exhaustive_on_wide_window() {
    let g = affine_sl2(8);
    let report = g.check_jacobi(-6, 6);
    assert!(report.passed());
    assert!(report.triples_checked > 1000);
}
