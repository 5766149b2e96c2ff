use std::sync::Arc;

use proptest::prelude::*;

use semiflex::forms::semiinf_cohomology;
use semiflex::induction::{coinduced, find_isomorphism, induced, s_ind, universal_semijective, wakimoto};
use semiflex::lie::{affine_sl2, GradedLieAlgebra, Selector, SubalgebraSpec, Weight};
use semiflex::linalg::qr;
use semiflex::modules::{coverma, trivial, verma, Lambda, WeightModule};

fn part(g: &GradedLieAlgebra, sel: Selector, name: &str) -> Arc<GradedLieAlgebra> {
    Arc::new(g.restrict(&g.subalgebra(&sel).unwrap(), name).unwrap())
}

fn over(g: &GradedLieAlgebra, h: &SubalgebraSpec, name: &str) -> Arc<GradedLieAlgebra> {
    Arc::new(g.restrict(h, name).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn wakimoto_for_random_lambda(h in -6i64..6, hd in 1i64..4, k in -6i64..6, kd in 1i64..4, d in -3i64..3) {
        let g = Arc::new(affine_sl2(6));
        let lam = Lambda::affine(&g, qr(h, hd), qr(k, kd), qr(d, 1)).unwrap();
        let w = wakimoto(&g, &lam, 3).unwrap().module;
        prop_assert_eq!(w.character(3), verma(&g, &lam, 3).unwrap().character(3));
        prop_assert!(w.check_representation().passed());
        prop_assert!(w.check_raising_bound());
        let a = part(&g, Selector::A, "a");
        let t = semiinf_cohomology(&w.restrict_to(&a).unwrap(), 3, None).unwrap();
        prop_assert_eq!(t.nonzero(), vec![(Weight(vec![0, 0]), 0, 1)]);
        prop_assert!(t.euler_consistent());
    }
}

#[test]
fn purely_negative_algebra_gives_classical_induction() {
    let g = affine_sl2(8);
    let neg = part(&g, Selector::GBelowZero, "g<0");
    let zero = SubalgebraSpec::new("0", []);
    let us = universal_semijective(&neg, 3).unwrap().left_module();
    let u = induced(&neg, &zero, &trivial(&over(&neg, &zero, "0")), 3).unwrap();
    assert!(find_isomorphism(&us, &u, 3).unwrap().is_some());

    let h = neg.subalgebra(&Selector::LoopNMinus).unwrap();
    let halg = over(&neg, &h, "h");
    let inputs: Vec<WeightModule> = vec![trivial(&halg), verma(&halg, &Lambda::zero(), 3).unwrap()];
    for m in &inputs {
        let s = s_ind(&neg, &h, m, 3).unwrap().module;
        let c = induced(&neg, &h, m, 3).unwrap();
        assert!(s.check_representation().passed());
        assert!(c.check_representation().passed());
        assert_eq!(s.character(3), c.character(3), "{}", m.name());
        assert!(find_isomorphism(&s, &c, 3).unwrap().is_some(), "{}", m.name());
    }
}

#[test]
fn purely_positive_algebra_gives_coinduction() {
    let g = affine_sl2(8);
    let pos = part(&g, Selector::GPlus, "g+");
    let zero = SubalgebraSpec::new("0", []);
    let us = universal_semijective(&pos, 3).unwrap().left_module();
    let dual = coinduced(&pos, &zero, &trivial(&over(&pos, &zero, "0")), 3).unwrap();
    assert!(find_isomorphism(&us, &dual, 3).unwrap().is_some());

    let h = pos.subalgebra(&Selector::A).unwrap();
    let halg = over(&pos, &h, "a+");
    let inputs: Vec<WeightModule> = vec![trivial(&halg), coverma(&halg, &Lambda::zero(), 3).unwrap()];
    for m in &inputs {
        let s = s_ind(&pos, &h, m, 3).unwrap().module;
        let c = coinduced(&pos, &h, m, 3).unwrap();
        assert!(s.check_representation().passed());
        assert!(c.check_representation().passed());
        assert!(find_isomorphism(&s, &c, 3).unwrap().is_some(), "{}", m.name());
    }
}

#[test]
fn classical_shapiro_for_a_positive_algebra() {
    use semiflex::cohomology::ce_cohomology;
    let g = affine_sl2(8);
    let pos = part(&g, Selector::GPlus, "g+");
    let h = pos.subalgebra(&Selector::A).unwrap();
    let halg = over(&pos, &h, "a+");
    let m = trivial(&halg);
    let c = coinduced(&pos, &h, &m, 3).unwrap();
    let whole = pos.subalgebra(&Selector::GPlus).unwrap();
    let small = halg.subalgebra(&Selector::GPlus).unwrap();
    let lhs = ce_cohomology(&whole, &c, 3, None).unwrap();
    let rhs = ce_cohomology(&small, &m, 3, None).unwrap();
    assert_eq!(lhs.nonzero(), rhs.nonzero());
    assert_eq!(semiinf_cohomology(&c, 3, None).unwrap().nonzero(), lhs.nonzero());
    assert!(lhs.nonzero().len() > 1);
}
