//! Weight modules in category O₀, stored weight space by weight space.
//!
//! Weights of a module are recorded as offsets from its top weight λ, so
//! they live in the root lattice of the algebra even when λ itself is not
//! integral. A module materialized to depth `D` holds every weight space
//! with `-D <= ℓ(offset) <= 0`.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{Gen, GradedLieAlgebra, LoopGen, Selector, Weight};
use crate::linalg::{add_entry, axpy, SparseMatrix, SparseVec, Q};
use crate::pbw::{enumerate_pbw_up_to, Pbw, PbwMonomial, PbwOrder};

/// Depth used for modules whose weight spaces are all materialized.
pub const COMPLETE: i64 = i64::MAX / 4;

/// A character of the degree-zero part, given by its values on basis elements.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Lambda {
    values: BTreeMap<Gen, Q>,
}

impl Lambda {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_values(alg: &GradedLieAlgebra, values: impl IntoIterator<Item = (Gen, Q)>) -> Result<Self> {
        let values: BTreeMap<Gen, Q> = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        for &g in values.keys() {
            if alg.degree(g) != 0 {
                return Err(Error::Input(format!("λ is only defined on degree 0, not on {}", alg.label(g))));
            }
        }
        let lam = Lambda { values };
        let zero = alg.graded_component(0);
        for &x in &zero {
            for &y in &zero {
                let br = alg.bracket_gens(x, y)?;
                let v: Q = br.iter().map(|(k, c)| c * lam.value(*k)).sum();
                if !v.is_zero() {
                    return Err(Error::Input(format!(
                        "λ is not a character: λ([{}, {}]) ≠ 0",
                        alg.label(x),
                        alg.label(y)
                    )));
                }
            }
        }
        Ok(lam)
    }

    /// Values `λ(1⊗h)`, `λ(K)`, `λ(d)` for affine `sl2`.
    pub fn affine(alg: &GradedLieAlgebra, h: Q, k: Q, d: Q) -> Result<Self> {
        Self::from_values(
            alg,
            [(alg.loop_element(LoopGen::H(0))?, h), (alg.loop_element(LoopGen::K)?, k), (alg.loop_element(LoopGen::D)?, d)],
        )
    }

    pub fn from_labels(alg: &GradedLieAlgebra, values: &[(String, Q)]) -> Result<Self> {
        let pairs = values.iter().map(|(l, v)| Ok((alg.by_label(l)?, v.clone()))).collect::<Result<Vec<_>>>()?;
        Self::from_values(alg, pairs)
    }

    pub fn value(&self, g: Gen) -> Q {
        self.values.get(&g).cloned().unwrap_or_else(Q::zero)
    }

    pub fn values(&self) -> &BTreeMap<Gen, Q> {
        &self.values
    }

    /// `λ` applied to a product of degree-zero factors (zero if any factor has
    /// nonzero degree).
    pub fn on_word(&self, alg: &GradedLieAlgebra, word: &[Gen]) -> Q {
        let mut c = Q::one();
        for &g in word {
            if alg.degree(g) != 0 {
                return Q::zero();
            }
            c *= self.value(g);
            if c.is_zero() {
                break;
            }
        }
        c
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpace {
    pub labels: Vec<String>,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// A module bounded above, with one sparse matrix per (generator, weight).
#[derive(Clone, Debug)]
pub struct WeightModule {
    name: String,
    alg: Arc<GradedLieAlgebra>,
    lambda: Lambda,
    depth: i64,
    spaces: BTreeMap<Weight, WeightSpace>,
    actions: HashMap<(Gen, Weight), SparseMatrix>,
}

#[derive(Clone, Debug, Default)]
pub struct RepresentationReport {
    pub pairs_checked: usize,
    pub failures: Vec<(String, String, Weight)>,
}

impl RepresentationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl WeightModule {
    pub fn new(name: impl Into<String>, alg: Arc<GradedLieAlgebra>, lambda: Lambda, depth: i64) -> Self {
        WeightModule { name: name.into(), alg, lambda, depth, spaces: BTreeMap::new(), actions: HashMap::new() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &Arc<GradedLieAlgebra> {
        &self.alg
    }

    pub fn lambda(&self) -> &Lambda {
        &self.lambda
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn insert_space(&mut self, offset: Weight, labels: Vec<String>) {
        if labels.is_empty() {
            self.spaces.remove(&offset);
        } else {
            self.spaces.insert(offset, WeightSpace { labels });
        }
    }

    /// Sets the matrix of `x` on the weight space at `offset`; zero matrices are not stored.
    pub fn set_action(&mut self, x: Gen, offset: Weight, m: SparseMatrix) {
        if m.is_zero() {
            self.actions.remove(&(x, offset));
        } else {
            self.actions.insert((x, offset), m);
        }
    }

    pub fn weights(&self) -> impl Iterator<Item = &Weight> {
        self.spaces.keys()
    }

    pub fn spaces(&self) -> &BTreeMap<Weight, WeightSpace> {
        &self.spaces
    }

    pub fn is_materialized(&self, offset: &Weight) -> bool {
        self.alg.degree_of(offset) >= -self.depth
    }

    pub fn dim(&self, offset: &Weight) -> usize {
        self.spaces.get(offset).map_or(0, |s| s.dim())
    }

    pub fn checked_dim(&self, offset: &Weight) -> Result<usize> {
        if !self.is_materialized(offset) {
            return Err(Error::DepthExceeded {
                weight: offset.clone(),
                needed: -self.alg.degree_of(offset),
                depth: self.depth,
            });
        }
        Ok(self.dim(offset))
    }

    pub fn labels(&self, offset: &Weight) -> &[String] {
        self.spaces.get(offset).map_or(&[], |s| &s.labels)
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.values().map(|s| s.dim()).sum()
    }

    /// Matrix of `x` from the space at `offset` to the space at `offset + wt(x)`.
    pub fn action(&self, x: Gen, offset: &Weight) -> Result<Cow<'_, SparseMatrix>> {
        let src = self.checked_dim(offset)?;
        let target = offset + self.alg.weight(x);
        let tgt = if self.alg.degree_of(&target) > 0 { 0 } else { self.checked_dim(&target)? };
        Ok(match self.actions.get(&(x, offset.clone())) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(SparseMatrix::zeros(tgt, src)),
        })
    }

    pub fn apply(&self, x: Gen, offset: &Weight, v: &SparseVec) -> Result<SparseVec> {
        Ok(self.action(x, offset)?.apply(v))
    }

    /// Matrix of an algebra element homogeneous of weight `wt`.
    pub fn action_of_element(&self, x: &SparseVec, wt: &Weight, offset: &Weight) -> Result<SparseMatrix> {
        let mut out: Option<SparseMatrix> = None;
        for (&g, c) in x {
            let m = self.action(g, offset)?;
            match out.as_mut() {
                None => {
                    let mut acc = SparseMatrix::zeros(m.nrows(), m.ncols());
                    acc.add_matrix(&m, c);
                    out = Some(acc);
                }
                Some(acc) => acc.add_matrix(&m, c),
            }
        }
        let target = offset + wt;
        Ok(out.unwrap_or_else(|| SparseMatrix::zeros(self.dim(&target), self.dim(offset))))
    }

    pub fn character(&self, depth: i64) -> Character {
        let coefficients = self
            .spaces
            .iter()
            .filter(|(w, _)| -self.alg.degree_of(w) <= depth)
            .map(|(w, s)| (w.clone(), s.dim() as u64))
            .collect();
        Character { depth: depth.min(self.depth), coefficients }
    }

    /// Checks `[A_x, A_y] = A_[x,y]` for every pair of generators whose
    /// products stay inside the materialized weight spaces.
    pub fn check_representation(&self) -> RepresentationReport {
        self.check_representation_on(&self.active_gens())
    }

    pub fn check_representation_on(&self, gens: &[Gen]) -> RepresentationReport {
        let alg = &self.alg;
        let mut report = RepresentationReport::default();
        for (a, &x) in gens.iter().enumerate() {
            for &y in &gens[a..] {
                let Ok(br) = alg.bracket_gens(x, y) else { continue };
                let br: SparseVec = br.iter().cloned().collect();
                for w in self.spaces.keys() {
                    let target = &(w + alg.weight(x)) + alg.weight(y);
                    if alg.degree_of(&target) < -self.depth {
                        continue;
                    }
                    let wx = w + alg.weight(x);
                    let wy = w + alg.weight(y);
                    let check = || -> Result<bool> {
                        let xy = self.action(x, &wy)?.mul(&*self.action(y, w)?);
                        let yx = self.action(y, &wx)?.mul(&*self.action(x, w)?);
                        let lhs = xy.sub(&yx);
                        let rhs = self.action_of_element(&br, &(alg.weight(x) + alg.weight(y)), w)?;
                        Ok(lhs.sub(&rhs).is_zero())
                    };
                    match check() {
                        Ok(true) => report.pairs_checked += 1,
                        Ok(false) => report.failures.push((alg.label(x).into(), alg.label(y).into(), w.clone())),
                        Err(_) => {}
                    }
                }
            }
        }
        report
    }

    /// Generators that can act nontrivially inside the materialized range.
    pub fn active_gens(&self) -> Vec<Gen> {
        let d = self.depth.min(self.alg.window().1.max(-self.alg.window().0));
        self.alg.gens_in_degrees(-d, d)
    }

    /// Checks that positive-degree generators kill the top weight space.
    pub fn check_raising_bound(&self) -> bool {
        let top = Weight::zero(self.alg.rank());
        self.active_gens()
            .into_iter()
            .filter(|&x| self.alg.degree(x) > 0)
            .all(|x| self.action(x, &top).map(|m| m.is_zero()).unwrap_or(false))
    }

    /// The same vector spaces regarded as a module over a subalgebra, matched by labels.
    pub fn restrict_to(&self, sub: &Arc<GradedLieAlgebra>) -> Result<WeightModule> {
        if sub.rank() != self.alg.rank() {
            return Err(Error::AlgebraMismatch(sub.name().into(), self.alg.name().into()));
        }
        let map: Vec<Gen> = (0..sub.dim()).map(|g| self.alg.by_label(sub.label(g))).collect::<Result<_>>()?;
        let lambda = Lambda {
            values: map.iter().enumerate().filter_map(|(g, &p)| {
                let v = self.lambda.value(p);
                (!v.is_zero() && sub.degree(g) == 0).then_some((g, v))
            }).collect(),
        };
        let mut out = WeightModule::new(format!("{}|{}", self.name, sub.name()), sub.clone(), lambda, self.depth);
        out.spaces = self.spaces.clone();
        for ((x, w), m) in &self.actions {
            if let Some(g) = map.iter().position(|p| p == x) {
                out.actions.insert((g, w.clone()), m.clone());
            }
        }
        Ok(out)
    }

    /// `M ⊗ C_χ` for a character `χ` of the whole algebra.
    pub fn twisted(&self, chi: &Lambda) -> Result<WeightModule> {
        let chi = Lambda::from_values(&self.alg, chi.values.clone())?;
        let (lo, hi) = self.alg.window();
        for x in self.alg.gens_in_degrees(lo, hi) {
            for y in self.alg.gens_in_degrees(lo, hi) {
                if !(self.alg.weight(x) + self.alg.weight(y)).is_zero() {
                    continue;
                }
                let v: Q = self.alg.bracket_gens(x, y)?.iter().map(|(k, c)| c * chi.value(*k)).sum();
                if !v.is_zero() {
                    return Err(Error::Input(format!(
                        "χ does not vanish on [{}, {}]",
                        self.alg.label(x),
                        self.alg.label(y)
                    )));
                }
            }
        }
        let mut lambda = self.lambda.clone();
        for (&g, v) in &chi.values {
            *lambda.values.entry(g).or_insert_with(Q::zero) += v;
        }
        lambda.values.retain(|_, v| !v.is_zero());
        let mut out = WeightModule::new(format!("{}⊗C_χ", self.name), self.alg.clone(), lambda, self.depth);
        out.spaces = self.spaces.clone();
        out.actions = self.actions.clone();
        for (&g, v) in &chi.values {
            if !self.alg.weight(g).is_zero() {
                continue;
            }
            for (w, sp) in &self.spaces {
                let mut m = out.actions.remove(&(g, w.clone())).unwrap_or_else(|| SparseMatrix::zeros(sp.dim(), sp.dim()));
                for i in 0..sp.dim() {
                    m.add(i, i, v.clone());
                }
                out.set_action(g, w.clone(), m);
            }
        }
        Ok(out)
    }

    /// Direct sum `self ⊕ other` over the same algebra.
    pub fn direct_sum(&self, other: &WeightModule) -> Result<WeightModule> {
        if !Arc::ptr_eq(&self.alg, &other.alg) && self.alg.name() != other.alg.name() {
            return Err(Error::AlgebraMismatch(self.alg.name().into(), other.alg.name().into()));
        }
        let mut out = WeightModule::new(
            format!("{}⊕{}", self.name, other.name),
            self.alg.clone(),
            self.lambda.clone(),
            self.depth.min(other.depth),
        );
        let mut weights: Vec<Weight> = self.spaces.keys().chain(other.spaces.keys()).cloned().collect();
        weights.sort();
        weights.dedup();
        for w in &weights {
            let mut labels: Vec<String> = self.labels(w).iter().map(|l| format!("({l},0)")).collect();
            labels.extend(other.labels(w).iter().map(|l| format!("(0,{l})")));
            out.insert_space(w.clone(), labels);
        }
        let gens: Vec<Gen> = self.active_gens();
        for &x in &gens {
            for w in &weights {
                let (Ok(a), Ok(b)) = (self.action(x, w), other.action(x, w)) else { continue };
                let (ar, ac) = (a.nrows(), a.ncols());
                let mut m = SparseMatrix::zeros(ar + b.nrows(), ac + b.ncols());
                for (i, row) in a.rows().iter().enumerate() {
                    for (j, v) in row {
                        m.add(i, *j, v.clone());
                    }
                }
                for (i, row) in b.rows().iter().enumerate() {
                    for (j, v) in row {
                        m.add(ar + i, ac + j, v.clone());
                    }
                }
                out.set_action(x, w.clone(), m);
            }
        }
        Ok(out)
    }
}

/// One-dimensional module `C_λ` at offset 0 (the trivial module when λ = 0).
pub fn one_dimensional(alg: &Arc<GradedLieAlgebra>, lambda: Lambda) -> WeightModule {
    let mut m = WeightModule::new("C_λ", alg.clone(), lambda, COMPLETE);
    let top = Weight::zero(alg.rank());
    m.insert_space(top.clone(), vec!["1".into()]);
    for (&g, v) in m.lambda.values.clone().iter() {
        if alg.weight(g).is_zero() {
            m.set_action(g, top.clone(), SparseMatrix::scalar(1, v));
        }
    }
    m
}

pub fn trivial(alg: &Arc<GradedLieAlgebra>) -> WeightModule {
    let mut m = one_dimensional(alg, Lambda::zero());
    m.name = "trivial".into();
    m
}

fn check_depth(alg: &GradedLieAlgebra, depth: i64) -> Result<()> {
    let (lo, hi) = alg.window();
    if depth > hi || -depth < lo {
        return Err(Error::InsufficientWindow { weight: Weight::zero(alg.rank()), needed: depth, lo, hi });
    }
    Ok(())
}

/// Verma module `Ind_{g>=0}^{g} C_λ`, with basis the PBW monomials of
/// `U(g<0)` applied to `v_λ`.
pub fn verma(alg: &Arc<GradedLieAlgebra>, lambda: &Lambda, depth: i64) -> Result<WeightModule> {
    check_depth(alg, depth)?;
    let below = alg.subalgebra(&Selector::GBelowZero)?;
    let order = PbwOrder::reversed(alg);
    let basis = enumerate_pbw_up_to(alg, &below, depth, &order)?;
    let index: HashMap<&PbwMonomial, usize> =
        basis.values().flat_map(|v| v.iter().enumerate().map(|(i, m)| (m, i))).collect();
    let mut module = WeightModule::new("V(λ)", alg.clone(), lambda.clone(), depth);
    for (w, ms) in &basis {
        module.insert_space(w.clone(), ms.iter().map(|m| m.display(alg)).collect());
    }
    let pbw = Pbw::new(alg, order);
    for x in alg.gens_in_degrees(-depth, depth) {
        for (w, ms) in &basis {
            let target = w + alg.weight(x);
            let tdeg = alg.degree_of(&target);
            if tdeg > 0 || tdeg < -depth {
                continue;
            }
            let tdim = basis.get(&target).map_or(0, |v| v.len());
            let mut mat = SparseMatrix::zeros(tdim, ms.len());
            for (j, m) in ms.iter().enumerate() {
                let mut word = vec![x];
                word.extend_from_slice(m.gens());
                for (p, c) in pbw.normal_order(&word)?.terms() {
                    let (neg, rest) = p.split_prefix(|g| alg.degree(g) < 0);
                    let s = lambda.on_word(alg, rest.gens());
                    if s.is_zero() {
                        continue;
                    }
                    let i = index[&neg];
                    mat.add(i, j, c * s);
                }
            }
            module.set_action(x, w.clone(), mat);
        }
    }
    Ok(module)
}

/// Contragredient Verma module `Hom_{g-}(U(g), C_λ)`: the basis vector `p*`
/// is the functional dual to the PBW monomial `p` of `U(g+)` in the
/// factorization `U(g) = U(g-) ⊗ U(g+)`, and `(x φ)(u) = φ(u x)`.
pub fn coverma(alg: &Arc<GradedLieAlgebra>, lambda: &Lambda, depth: i64) -> Result<WeightModule> {
    check_depth(alg, depth)?;
    let plus = alg.subalgebra(&Selector::GPlus)?;
    let order = PbwOrder::reversed(alg);
    let by_weight = enumerate_pbw_up_to(alg, &plus, depth, &order)?;
    // module offset of p* is -wt(p)
    let basis: BTreeMap<Weight, Vec<PbwMonomial>> = by_weight.into_iter().map(|(w, v)| (-&w, v)).collect();
    let index: HashMap<&PbwMonomial, usize> =
        basis.values().flat_map(|v| v.iter().enumerate().map(|(i, m)| (m, i))).collect();
    let mut module = WeightModule::new("V*(λ)", alg.clone(), lambda.clone(), depth);
    for (w, ms) in &basis {
        module.insert_space(w.clone(), ms.iter().map(|m| format!("({})*", m.display(alg))).collect());
    }
    let pbw = Pbw::new(alg, order);
    for x in alg.gens_in_degrees(-depth, depth) {
        for (w, ms) in &basis {
            let target = w + alg.weight(x);
            let tdeg = alg.degree_of(&target);
            if tdeg > 0 || tdeg < -depth {
                continue;
            }
            let Some(tbasis) = basis.get(&target) else { continue };
            let mut mat = SparseMatrix::zeros(tbasis.len(), ms.len());
            for (i, p) in tbasis.iter().enumerate() {
                let mut word = p.gens().to_vec();
                word.push(x);
                for (t, c) in pbw.normal_order(&word)?.terms() {
                    let (low, high) = t.split_prefix(|g| alg.degree(g) <= 0);
                    let s = lambda.on_word(alg, low.gens());
                    if s.is_zero() {
                        continue;
                    }
                    if let Some(&j) = index.get(&high) {
                        if ms.get(j) == Some(&high) {
                            mat.add(i, j, c * s);
                        }
                    }
                }
            }
            module.set_action(x, w.clone(), mat);
        }
    }
    Ok(module)
}

/// Truncated formal character, keyed by offsets from the top weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Character {
    pub depth: i64,
    pub coefficients: BTreeMap<Weight, u64>,
}

impl Character {
    pub fn coefficient(&self, offset: &Weight) -> u64 {
        self.coefficients.get(offset).copied().unwrap_or(0)
    }

    /// Drops zero coefficients and those deeper than `depth`.
    pub fn truncated(&self, alg: &GradedLieAlgebra, depth: i64) -> Character {
        Character {
            depth,
            coefficients: self
                .coefficients
                .iter()
                .filter(|(w, c)| **c > 0 && -alg.degree_of(w) <= depth)
                .map(|(w, c)| (w.clone(), *c))
                .collect(),
        }
    }
}

/// Positive roots with multiplicities, up to degree `depth`.
///
/// For affine `sl2` these are `α + nδ` (n ≥ 0), `-α + nδ` (n ≥ 1) and `nδ`
/// (n ≥ 1), each of multiplicity one; otherwise the weights of the
/// positive-degree basis elements, counted with multiplicity.
pub fn positive_roots(alg: &GradedLieAlgebra, depth: i64) -> Vec<(Weight, u64)> {
    if alg.loop_gen(0).is_some() && alg.rank() == 2 && alg.name() == "affine_sl2" {
        let mut roots = Vec::new();
        for n in 0..=depth {
            for (a, min_n) in [(1, 0), (-1, 1), (0, 1)] {
                let w = Weight(vec![a, n]);
                if n >= min_n && alg.degree_of(&w) <= depth && alg.degree_of(&w) > 0 {
                    roots.push((w, 1));
                }
            }
        }
        roots.sort();
        return roots;
    }
    let mut counts: BTreeMap<Weight, u64> = BTreeMap::new();
    for g in 0..alg.dim() {
        let d = alg.degree(g);
        if d > 0 && d <= depth {
            *counts.entry(alg.weight(g).clone()).or_default() += 1;
        }
    }
    counts.into_iter().collect()
}

/// `∏_{α>0} (1 - e^{-α})^{-mult α}` expanded to depth `D`, as offsets from λ.
pub fn product_formula_character(alg: &GradedLieAlgebra, depth: i64) -> Character {
    let mut series: BTreeMap<Weight, u64> = BTreeMap::new();
    series.insert(Weight::zero(alg.rank()), 1);
    for (root, mult) in positive_roots(alg, depth) {
        for _ in 0..mult {
            // multiply by 1/(1 - e^{-root}), one degree level at a time
            for level in 0..=depth {
                let row: Vec<(Weight, u64)> =
                    series.iter().filter(|(w, _)| -alg.degree_of(w) == level).map(|(w, c)| (w.clone(), *c)).collect();
                for (w, c) in row {
                    let shifted = &w - &root;
                    if -alg.degree_of(&shifted) <= depth {
                        *series.entry(shifted).or_default() += c;
                    }
                }
            }
        }
    }
    Character { depth, coefficients: series }
}

/// The `i`-th standard basis vector.
pub fn basis_vector(i: usize) -> SparseVec {
    let mut v = SparseVec::new();
    add_entry(&mut v, i, Q::one());
    v
}

/// `Σ c_i A_{x_i}` applied to `v`.
pub fn apply_element(module: &WeightModule, x: &SparseVec, offset: &Weight, v: &SparseVec) -> Result<SparseVec> {
    let mut out = SparseVec::new();
    for (&g, c) in x {
        let part = module.apply(g, offset, v)?;
        axpy(&mut out, c, &part);
    }
    Ok(out)
}
