use proptest::prelude::*;

use semiflex::forms::{FormElement, SemiInfiniteMonomial, Slots};
use semiflex::lie::loop_nilpotent_a;
use semiflex::linalg::q;

fn form(m: SemiInfiniteMonomial) -> FormElement {
    let mut f = FormElement::new();
    f.insert(m, q(1));
    f
}

fn add(a: &FormElement, b: &FormElement) -> FormElement {
    let mut out = a.clone();
    for (m, c) in b {
        *out.entry(m.clone()).or_insert_with(|| q(0)) += c;
    }
    out.retain(|_, v| *v != q(0));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn clifford_relations(bits in 0u32..(1 << 12), i in 0usize..12, j in 0usize..12) {
        let g = loop_nilpotent_a(6);
        let s = Slots::new(&g);
        let gens = g.gens_in_degrees(-4, 4);
        let (plus, minus): (Vec<_>, Vec<_>) = gens.iter().partition(|&&x| g.degree(x) > 0);
        let mut mono = SemiInfiniteMonomial::default();
        for (k, &x) in plus.iter().enumerate() {
            if bits & (1 << k) != 0 {
                mono.added.push(x);
            }
        }
        for (k, &x) in minus.iter().enumerate() {
            if bits & (1 << (k + 6)) != 0 {
                mono.removed.push(x);
            }
        }
        mono.added.sort();
        mono.removed.sort();
        let f = form(mono);
        let (x, y) = (gens[i % gens.len()], gens[j % gens.len()]);
        // ι(x*)ε(y) + ε(y)ι(x*) = δ_xy
        let anti = add(&s.contract(x, &s.wedge(y, &f)), &s.wedge(y, &s.contract(x, &f)));
        prop_assert_eq!(anti, if x == y { f.clone() } else { FormElement::new() });
        // ε(x)ε(y) = -ε(y)ε(x), ι(x*)ι(y*) = -ι(y*)ι(x*)
        prop_assert!(add(&s.wedge(x, &s.wedge(y, &f)), &s.wedge(y, &s.wedge(x, &f))).is_empty());
        prop_assert!(add(&s.contract(x, &s.contract(y, &f)), &s.contract(y, &s.contract(x, &f))).is_empty());
    }
}
