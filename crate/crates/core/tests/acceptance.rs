mod common;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use semiflex::cohomology::{ce_cohomology, ce_homology, CohomologyTable};
use semiflex::forms::{semiinf_cells, semiinf_cohomology, SemiInfiniteComplex};
use semiflex::induction::{
    check_prop_iso, check_prop_iso1, check_shapiro, check_universal_property, coinduced, find_isomorphism, induced,
    s_ind, semiregular_series, universal_semijective, wakimoto,
};
use semiflex::lie::{affine_sl2, builtin, Gen, GradedLieAlgebra, Selector, SubalgebraSpec, Weight};
use semiflex::linalg::q;
use semiflex::modules::{coverma, product_formula_character, trivial, verma, Lambda, WeightModule};
use semiflex::pbw::{Pbw, PbwOrder};

type Outcome = Result<String, String>;
type Criterion = fn(&mut Ledger) -> Outcome;

#[derive(Default)]
struct Ledger {
    modules: Vec<WeightModule>,
    tables: Vec<(String, CohomologyTable)>,
}

impl Ledger {
    fn module(&mut self, m: &WeightModule) {
        self.modules.push(m.clone());
    }

    fn table(&mut self, name: &str, t: &CohomologyTable) {
        self.tables.push((name.into(), t.clone()));
    }
}

fn ok(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: semiflex::error::Error) -> String {
    e.to_string()
}

fn part(g: &GradedLieAlgebra, sel: Selector, name: &str) -> Arc<GradedLieAlgebra> {
    Arc::new(g.restrict(&g.subalgebra(&sel).unwrap(), name).unwrap())
}

fn lam(g: &GradedLieAlgebra) -> Lambda {
    Lambda::affine(g, q(0), q(1), q(0)).unwrap()
}

fn only_top(t: &CohomologyTable) -> bool {
    t.nonzero() == vec![(Weight(vec![0, 0]), 0, 1)]
}

fn characters(led: &mut Ledger) -> Outcome {
    let g = Arc::new(affine_sl2(12));
    let l = lam(&g);
    let v = verma(&g, &l, 6).map_err(err)?;
    let dual = coverma(&g, &l, 6).map_err(err)?;
    let w = wakimoto(&g, &l, 6).map_err(err)?.module;
    let formula = product_formula_character(&g, 6);
    let chv = v.character(6);
    ok(chv == formula, "ch V differs from the product formula")?;
    ok(dual.character(6) == formula, "ch V* differs from the product formula")?;
    ok(w.character(6) == formula, "ch W differs from the product formula")?;
    let spots = [(vec![0, 0], 1), (vec![0, -1], 2), (vec![-1, -1], 3)];
    for (c, want) in spots {
        let got = chv.coefficient(&Weight(c.clone()));
        ok(got == want, format!("coefficient at {c:?} is {got}, expected {want}"))?;
    }
    for m in [&v, &dual, &w] {
        led.module(m);
    }
    Ok(format!("{} weights agree, spot values 1, 2, 3", formula.coefficients.len()))
}

fn anomaly(led: &mut Ledger) -> Outcome {
    let g = Arc::new(affine_sl2(8));
    let a = part(&g, Selector::A, "a");
    let wa = wakimoto(&g, &lam(&g), 4).map_err(err)?.module.restrict_to(&a).map_err(err)?;
    let chi = Lambda::from_values(&a, []).map_err(err)?;
    let us = universal_semijective(&a, 4).map_err(err)?.left_module().twisted(&chi).map_err(err)?;
    let mut cells = 0;
    for m in [&wa, &us] {
        led.module(m);
        for cell in semiinf_cells(m, 4).map_err(err)? {
            let c = SemiInfiniteComplex::new(m, &cell).map_err(err)?;
            for n in c.ghost_range() {
                ok(c.d_squared(n).map_err(err)?.is_zero(), format!("d∘d ≠ 0 on {} at {cell}, ghost {n}", m.name()))?;
                cells += 1;
            }
        }
    }
    Ok(format!("d∘d = 0 on {cells} cells"))
}

fn wakimoto_cohomology(led: &mut Ledger) -> Outcome {
    let g = Arc::new(affine_sl2(8));
    let a = part(&g, Selector::A, "a");
    let wa = wakimoto(&g, &lam(&g), 4).map_err(err)?.module.restrict_to(&a).map_err(err)?;
    let t = semiinf_cohomology(&wa, 4, None).map_err(err)?;
    led.table("H(a, W)", &t);
    ok(only_top(&t), format!("nonzero cells {:?}", t.nonzero()))?;
    Ok(format!("H = C at (λ, 0) over {} cells", t.rows.len()))
}

fn shapiro(led: &mut Ledger) -> Outcome {
    let g = Arc::new(affine_sl2(8));
    let a = part(&g, Selector::A, "a");
    let h = a.subalgebra(&Selector::LoopNMinus).map_err(err)?;
    let ha = Arc::new(a.restrict(&h, "h").map_err(err)?);
    let m = trivial(&ha);
    let r = check_shapiro(&a, &h, &m, 3, None).map_err(err)?;
    led.table("H(h, M)", &r.subalgebra_side);
    led.table("H(a, S-ind M)", &r.induced_side);
    led.module(&s_ind(&a, &h, &m, 3).map_err(err)?.module);
    ok(r.passed(), format!("mismatches {:?}", r.mismatches))?;
    Ok(format!("{} cells agree", r.subalgebra_side.rows.len().max(r.induced_side.rows.len())))
}

fn characterizations(led: &mut Ledger) -> Outcome {
    let g = Arc::new(affine_sl2(8));
    let l = lam(&g);
    let plus = g.subalgebra(&Selector::GPlus).map_err(err)?;
    let below = g.subalgebra(&Selector::GBelowZero).map_err(err)?;
    let dual = coverma(&g, &l, 4).map_err(err)?;
    let v = verma(&g, &l, 4).map_err(err)?;
    let coh = ce_cohomology(&plus, &dual, 4, Some(0..=2)).map_err(err)?;
    let hom = ce_homology(&below, &v, 4, Some(0..=2)).map_err(err)?;
    led.table("H(g+, V*)", &coh);
    led.table("H(g<0, V)", &hom);
    led.module(&dual);
    led.module(&v);
    ok(only_top(&coh), format!("H(g+, V*) nonzero at {:?}", coh.nonzero()))?;
    ok(only_top(&hom), format!("H(g<0, V) nonzero at {:?}", hom.nonzero()))?;
    Ok("both concentrated at (λ, 0)".into())
}

fn us_structure(led: &mut Ledger) -> Outcome {
    let g = affine_sl2(8);
    let a = part(&g, Selector::A, "a");
    let iso = check_prop_iso(&a, 3).map_err(err)?;
    let iso1 = check_prop_iso1(&a, 3).map_err(err)?;
    ok(iso.passed(), format!("first model: {:?} {:?}", iso.dim_mismatches, iso.failures))?;
    ok(iso1.passed(), format!("second model: {:?} {:?}", iso1.dim_mismatches, iso1.failures))?;
    let model = universal_semijective(&a, 3).map_err(err)?;
    let series = semiregular_series(&a, 3);
    for (w, d) in &series {
        ok(model.left_module().dim(w) as u64 == *d, format!("US dimension at {w}"))?;
    }
    let bi = model.check_bimodule();
    ok(bi.passed(), format!("bimodule failures {:?}", bi.failures))?;
    led.module(&model.left_module());
    led.module(&model.right_module());

    let zero = SubalgebraSpec::new("0", []);
    let neg = part(&g, Selector::GBelowZero, "g<0");
    let pos = part(&g, Selector::GPlus, "g+");
    let cases: [(&Arc<GradedLieAlgebra>, Selector, bool); 2] =
        [(&neg, Selector::LoopNMinus, true), (&pos, Selector::A, false)];
    let mut compared = 0;
    for (alg, sel, negative) in cases {
        let classical = |h: &SubalgebraSpec, m: &WeightModule| {
            if negative {
                induced(alg, h, m, 3)
            } else {
                coinduced(alg, h, m, 3)
            }
        };
        let z = Arc::new(alg.restrict(&zero, "0").map_err(err)?);
        let us = universal_semijective(alg, 3).map_err(err)?.left_module();
        let c = classical(&zero, &trivial(&z)).map_err(err)?;
        ok(us.character(3) == c.character(3), format!("US of {} has the wrong dimensions", alg.name()))?;
        ok(find_isomorphism(&us, &c, 3).map_err(err)?.is_some(), format!("US of {} is not the classical module", alg.name()))?;
        led.module(&us);
        led.module(&c);
        let h = alg.subalgebra(&sel).map_err(err)?;
        let ha = Arc::new(alg.restrict(&h, "h").map_err(err)?);
        let inputs = if negative {
            vec![trivial(&ha), verma(&ha, &Lambda::zero(), 3).map_err(err)?]
        } else {
            vec![trivial(&ha), coverma(&ha, &Lambda::zero(), 3).map_err(err)?]
        };
        for m in &inputs {
            let s = s_ind(alg, &h, m, 3).map_err(err)?.module;
            let c = classical(&h, m).map_err(err)?;
            ok(s.character(3) == c.character(3), format!("S-ind {} over {} has the wrong dimensions", m.name(), alg.name()))?;
            ok(find_isomorphism(&s, &c, 3).map_err(err)?.is_some(), format!("S-ind {} over {} differs", m.name(), alg.name()))?;
            led.module(&s);
            led.module(&c);
            compared += 1;
        }
    }
    Ok(format!(
        "{} weights, {} samples, bimodule on {} pairs, {} degenerate inductions",
        iso.weights_checked + iso1.weights_checked,
        iso.samples_checked + iso1.samples_checked,
        bi.pairs_checked,
        compared
    ))
}

fn universal(led: &mut Ledger) -> Outcome {
    let g = affine_sl2(8);
    let a = part(&g, Selector::A, "a");
    for n in [trivial(&a), verma(&a, &Lambda::zero(), 3).map_err(err)?] {
        let r = check_universal_property(&a, &n, 3).map_err(err)?;
        ok(r.passed(), format!("{}: {:?}, isomorphic = {}", n.name(), r.dim_mismatches, r.isomorphic))?;
        led.module(&n);
    }
    Ok("trivial and V over a".into())
}

fn infrastructure(led: &mut Ledger) -> Outcome {
    let g = affine_sl2(24);
    let gens = g.gens_in_degrees(-4, 4);
    let a = g.subalgebra(&Selector::A).unwrap();
    let abar = g.subalgebra(&Selector::ABar).unwrap();
    let orders = [PbwOrder::canonical(&g), PbwOrder::reversed(&g), PbwOrder::blocks(&g, &[&a, &abar])];
    let mut rng = StdRng::seed_from_u64(7);
    let word = |rng: &mut StdRng, n: usize| -> Vec<Gen> { (0..rng.gen_range(0..=n)).map(|_| gens[rng.gen_range(0..gens.len())]).collect() };
    for i in 0..1000 {
        let order = &orders[i % 3];
        let pbw = Pbw::new(&g, order.clone());
        let w = word(&mut rng, 5);
        let fast: BTreeMap<Vec<Gen>, _> =
            pbw.normal_order(&w).map_err(err)?.terms().iter().map(|(m, c)| (m.gens().to_vec(), c.clone())).collect();
        ok(fast == common::straighten_random(&g, order, w.clone(), &mut rng), format!("confluence fails on {w:?}"))?;
        let el = |rng: &mut StdRng| pbw.normal_order(&word(rng, 3)).unwrap();
        let (x, y, z) = (el(&mut rng), el(&mut rng), el(&mut rng));
        let left = pbw.multiply(&pbw.multiply(&x, &y).map_err(err)?, &z).map_err(err)?;
        let right = pbw.multiply(&x, &pbw.multiply(&y, &z).map_err(err)?).map_err(err)?;
        ok(left == right, "associativity fails")?;
    }
    let mut pairs = 0;
    for m in &led.modules {
        let r = m.check_representation();
        ok(r.passed(), format!("commutator oracle fails on {}: {:?}", m.name(), r.failures.first()))?;
        pairs += r.pairs_checked;
    }
    for (name, t) in &led.tables {
        ok(t.euler_consistent(), format!("Euler characteristics disagree for {name}"))?;
    }
    for name in ["affine_sl2", "abelian", "subalgebra_a"] {
        let alg = builtin(name, 6).map_err(err)?;
        let r = alg.check_jacobi(-6, 6);
        ok(r.passed(), format!("Jacobi fails on {name}"))?;
    }
    Ok(format!(
        "1000 words, commutators on {} modules ({pairs} pairs), {} tables, Jacobi on 3 algebras",
        led.modules.len(),
        led.tables.len()
    ))
}

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("character identity", characters),
        ("anomaly cancellation", anomaly),
        ("Wakimoto cohomology", wakimoto_cohomology),
        ("semi-infinite Shapiro lemma", shapiro),
        ("cohomological characterizations", characterizations),
        ("US structure", us_structure),
        ("universal property", universal),
        ("infrastructure", infrastructure),
    ];
    let mut led = Ledger::default();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&mut led);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS [{secs:.1}s] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.1}s] {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
