//! Graded Lie algebras with a semi-infinite structure.
//!
//! An algebra is materialized on a window of degrees. Basis elements are
//! addressed by [`Gen`], their position in the canonical order: degree
//! descending, then weight coordinates, then index within the weight space.
//! With this order every positive-degree element precedes every element of
//! degree `<= 0`, so canonical PBW monomials are already factored as
//! `U(g+) ⊗ U(g-)`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{add_entry, axpy, q, SparseVec, Q};

/// A weight in root-lattice coordinates (plus the δ coordinate for loop algebras).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scaled(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|c| c * k).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        assert_eq!(self.0.len(), rhs.0.len(), "weight rank mismatch");
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        assert_eq!(self.0.len(), rhs.0.len(), "weight rank mismatch");
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingData {
    pub rank: usize,
    pub degree_functional: Vec<i64>,
}

impl GradingData {
    pub fn degree(&self, w: &Weight) -> i64 {
        self.degree_functional.iter().zip(&w.0).map(|(a, b)| a * b).sum()
    }
}

/// Window bound of algebras given by their full (finite) basis.
pub const COMPLETE_WINDOW: i64 = i64::MAX / 4;

/// Position of a basis element in the canonical order of its algebra.
pub type Gen = usize;

/// A linear combination of basis elements.
pub type Element = SparseVec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub weight: Weight,
    pub index: usize,
    pub label: String,
    pub degree: i64,
}

/// Loop-algebra description of an affine `sl2` basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LoopGen {
    E(i64),
    H(i64),
    F(i64),
    K,
    D,
}

impl LoopGen {
    fn label(&self) -> String {
        match *self {
            LoopGen::E(n) => loop_label(n, "e"),
            LoopGen::H(n) => loop_label(n, "h"),
            LoopGen::F(n) => loop_label(n, "f"),
            LoopGen::K => "K".into(),
            LoopGen::D => "d".into(),
        }
    }

    fn weight(&self) -> Weight {
        match *self {
            LoopGen::E(n) => Weight(vec![1, n]),
            LoopGen::H(n) => Weight(vec![0, n]),
            LoopGen::F(n) => Weight(vec![-1, n]),
            LoopGen::K | LoopGen::D => Weight(vec![0, 0]),
        }
    }

    fn index(&self) -> usize {
        match self {
            LoopGen::K => 1,
            LoopGen::D => 2,
            _ => 0,
        }
    }
}

fn loop_label(n: i64, x: &str) -> String {
    match n {
        0 => format!("1⊗{x}"),
        1 => format!("z⊗{x}"),
        _ => format!("z^{n}⊗{x}"),
    }
}

/// A subalgebra given by a set of basis elements of its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubalgebraSpec {
    pub name: String,
    members: BTreeSet<Gen>,
}

impl SubalgebraSpec {
    pub fn new(name: impl Into<String>, members: impl IntoIterator<Item = Gen>) -> Self {
        SubalgebraSpec { name: name.into(), members: members.into_iter().collect() }
    }

    pub fn contains(&self, g: Gen) -> bool {
        self.members.contains(&g)
    }

    pub fn members(&self) -> impl Iterator<Item = Gen> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn intersect(&self, other: &SubalgebraSpec) -> SubalgebraSpec {
        SubalgebraSpec {
            name: format!("{}∩{}", self.name, other.name),
            members: self.members.intersection(&other.members).copied().collect(),
        }
    }
}

/// Named subalgebras understood by [`GradedLieAlgebra::subalgebra`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selector {
    /// `C[z,z^-1]⊗n- ⊕ zC[z]⊗t`
    A,
    /// `C[z,z^-1]⊗n+ ⊕ C[z^-1]⊗t ⊕ CK ⊕ Cd`
    ABar,
    /// `C[z,z^-1]⊗n-`
    LoopNMinus,
    GPlus,
    GMinus,
    /// Strictly negative degrees.
    GBelowZero,
    Custom(Vec<String>),
}

impl std::str::FromStr for Selector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "a" => Selector::A,
            "abar" => Selector::ABar,
            "loop-nminus" | "loop_nminus" => Selector::LoopNMinus,
            "gplus" => Selector::GPlus,
            "gminus" => Selector::GMinus,
            "g_below_zero" | "g-below-zero" => Selector::GBelowZero,
            other => {
                if let Some(list) = other.strip_prefix("custom:") {
                    Selector::Custom(list.split(',').map(|s| s.trim().to_string()).collect())
                } else {
                    return Err(Error::UnknownSelector(other.to_string()));
                }
            }
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct JacobiReport {
    pub triples_checked: usize,
    pub antisymmetry_failures: Vec<(String, String)>,
    pub jacobi_failures: Vec<(String, String, String)>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.antisymmetry_failures.is_empty() && self.jacobi_failures.is_empty()
    }
}

/// A Z-graded, weight-graded Lie algebra with finite-dimensional graded
/// pieces, materialized on a window of degrees, together with its
/// semi-infinite structure (splitting by the sign of the degree, and β).
#[derive(Clone, Debug)]
pub struct GradedLieAlgebra {
    name: String,
    grading: GradingData,
    basis: Vec<BasisElement>,
    lookup: HashMap<(Weight, usize), Gen>,
    labels: HashMap<String, Gen>,
    brackets: HashMap<(Gen, Gen), Vec<(Gen, Q)>>,
    overflow: HashSet<(Gen, Gen)>,
    central: Vec<bool>,
    beta: Vec<Q>,
    window: (i64, i64),
    loop_gens: Option<Vec<LoopGen>>,
}

/// Raw description used to assemble an algebra; indices refer to `elements`.
pub struct AlgebraParts {
    pub name: String,
    pub grading: GradingData,
    pub elements: Vec<(String, Weight, usize)>,
    pub brackets: Vec<(usize, usize, Vec<(usize, Q)>)>,
    pub overflow: Vec<(usize, usize)>,
    pub beta: Vec<Q>,
    pub window: Option<(i64, i64)>,
    pub loop_gens: Option<Vec<LoopGen>>,
}

impl GradedLieAlgebra {
    /// Assembles an algebra, sorting the basis into canonical order. Bracket
    /// entries are taken as given; missing pairs are zero.
    pub fn from_parts(parts: AlgebraParts) -> Result<Self> {
        let AlgebraParts { name, grading, elements, brackets, overflow, beta, window, loop_gens } = parts;
        let n = elements.len();
        if beta.len() != n {
            return Err(Error::Input(format!("beta has {} entries for {} basis elements", beta.len(), n)));
        }
        for (label, w, _) in &elements {
            if w.rank() != grading.rank {
                return Err(Error::Input(format!("weight of {label} has rank {} (expected {})", w.rank(), grading.rank)));
            }
        }
        let degrees: Vec<i64> = elements.iter().map(|(_, w, _)| grading.degree(w)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            (-degrees[a], &elements[a].1, elements[a].2).cmp(&(-degrees[b], &elements[b].1, elements[b].2))
        });
        let mut pos = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let basis: Vec<BasisElement> = order
            .iter()
            .map(|&old| BasisElement {
                weight: elements[old].1.clone(),
                index: elements[old].2,
                label: elements[old].0.clone(),
                degree: degrees[old],
            })
            .collect();
        let mut lookup = HashMap::new();
        let mut labels = HashMap::new();
        for (g, b) in basis.iter().enumerate() {
            if lookup.insert((b.weight.clone(), b.index), g).is_some() {
                return Err(Error::Input(format!("duplicate basis element at weight {} index {}", b.weight, b.index)));
            }
            if labels.insert(b.label.clone(), g).is_some() {
                return Err(Error::Input(format!("duplicate label {}", b.label)));
            }
        }
        let mut table: HashMap<(Gen, Gen), Vec<(Gen, Q)>> = HashMap::new();
        for (i, j, terms) in brackets {
            if i >= n || j >= n || terms.iter().any(|(k, _)| *k >= n) {
                return Err(Error::Input(format!("bracket entry ({i},{j}) references a missing basis element")));
            }
            let mut acc = SparseVec::new();
            for (k, c) in terms {
                add_entry(&mut acc, pos[k], c);
            }
            if !acc.is_empty() {
                table.insert((pos[i], pos[j]), acc.into_iter().collect());
            }
        }
        let overflow: HashSet<(Gen, Gen)> = overflow.into_iter().map(|(i, j)| (pos[i], pos[j])).collect();
        let mut central = vec![true; n];
        for &(i, j) in table.keys().chain(overflow.iter()) {
            central[i] = false;
            central[j] = false;
        }
        let beta: Vec<Q> = order.iter().map(|&old| beta[old].clone()).collect();
        for (g, b) in basis.iter().enumerate() {
            if b.degree != 0 && !beta[g].is_zero() {
                return Err(Error::BetaOutsideDegreeZero(b.label.clone()));
            }
        }
        let window = window.unwrap_or((-COMPLETE_WINDOW, COMPLETE_WINDOW));
        let loop_gens = loop_gens.map(|lg| order.iter().map(|&old| lg[old]).collect());
        Ok(GradedLieAlgebra { name, grading, basis, lookup, labels, brackets: table, overflow, central, beta, window, loop_gens })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn grading(&self) -> &GradingData {
        &self.grading
    }

    pub fn rank(&self) -> usize {
        self.grading.rank
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn element(&self, g: Gen) -> &BasisElement {
        &self.basis[g]
    }

    pub fn label(&self, g: Gen) -> &str {
        &self.basis[g].label
    }

    pub fn weight(&self, g: Gen) -> &Weight {
        &self.basis[g].weight
    }

    pub fn degree(&self, g: Gen) -> i64 {
        self.basis[g].degree
    }

    pub fn degree_of(&self, w: &Weight) -> i64 {
        self.grading.degree(w)
    }

    pub fn is_central(&self, g: Gen) -> bool {
        self.central[g]
    }

    pub fn is_positive(&self, g: Gen) -> bool {
        self.basis[g].degree > 0
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    pub fn loop_gen(&self, g: Gen) -> Option<LoopGen> {
        self.loop_gens.as_ref().map(|lg| lg[g])
    }

    pub fn find(&self, weight: &Weight, index: usize) -> Option<Gen> {
        self.lookup.get(&(weight.clone(), index)).copied()
    }

    pub fn by_label(&self, label: &str) -> Result<Gen> {
        self.labels.get(label).copied().ok_or_else(|| Error::NotMaterialized(label.to_string()))
    }

    /// Finds an affine basis element by its loop description.
    pub fn loop_element(&self, lg: LoopGen) -> Result<Gen> {
        self.find(&lg.weight(), lg.index())
            .filter(|&g| self.loop_gen(g) == Some(lg))
            .ok_or_else(|| Error::NotMaterialized(lg.label()))
    }

    /// Basis elements of degree `n`.
    pub fn graded_component(&self, n: i64) -> Vec<Gen> {
        (0..self.dim()).filter(|&g| self.basis[g].degree == n).collect()
    }

    pub fn gens_in_degrees(&self, lo: i64, hi: i64) -> Vec<Gen> {
        (0..self.dim()).filter(|&g| (lo..=hi).contains(&self.basis[g].degree)).collect()
    }

    pub fn beta(&self, g: Gen) -> &Q {
        &self.beta[g]
    }

    /// The functional β on the degree-zero basis.
    pub fn beta_functional(&self) -> Vec<(Gen, Q)> {
        self.graded_component(0).into_iter().map(|g| (g, self.beta[g].clone())).collect()
    }

    /// `[x_i, x_j]` on basis elements.
    pub fn bracket_gens(&self, i: Gen, j: Gen) -> Result<&[(Gen, Q)]> {
        if let Some(t) = self.brackets.get(&(i, j)) {
            return Ok(t);
        }
        if self.overflow.contains(&(i, j)) {
            return Err(Error::WindowOverflow { left: self.label(i).into(), right: self.label(j).into() });
        }
        Ok(&[])
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        let mut out = SparseVec::new();
        for (&i, a) in x {
            if i >= self.dim() {
                return Err(Error::NotMaterialized(format!("#{i}")));
            }
            for (&j, b) in y {
                if j >= self.dim() {
                    return Err(Error::NotMaterialized(format!("#{j}")));
                }
                let c = a * b;
                for (k, s) in self.bracket_gens(i, j)? {
                    add_entry(&mut out, *k, &c * s);
                }
            }
        }
        Ok(out)
    }

    pub fn gen_element(&self, g: Gen) -> Element {
        let mut e = SparseVec::new();
        e.insert(g, Q::one());
        e
    }

    /// Exhaustive antisymmetry and Jacobi check on basis triples with degrees
    /// in `[lo, hi]` whose intermediate brackets stay materialized.
    pub fn check_jacobi(&self, lo: i64, hi: i64) -> JacobiReport {
        let gens = self.gens_in_degrees(lo, hi);
        let mut report = JacobiReport::default();
        for (a, &i) in gens.iter().enumerate() {
            for &j in &gens[a..] {
                let (Ok(x), Ok(y)) = (self.bracket_gens(i, j), self.bracket_gens(j, i)) else { continue };
                let mut sum: SparseVec = x.iter().cloned().collect();
                for (k, c) in y {
                    add_entry(&mut sum, *k, c.clone());
                }
                if !sum.is_empty() {
                    report.antisymmetry_failures.push((self.label(i).into(), self.label(j).into()));
                }
            }
        }
        for (a, &i) in gens.iter().enumerate() {
            for (b, &j) in gens.iter().enumerate().skip(a + 1) {
                for &k in &gens[b + 1..] {
                    if let Some(total) = self.jacobiator(i, j, k) {
                        report.triples_checked += 1;
                        if !total.is_empty() {
                            report.jacobi_failures.push((
                                self.label(i).into(),
                                self.label(j).into(),
                                self.label(k).into(),
                            ));
                        }
                    }
                }
            }
        }
        report
    }

    fn jacobiator(&self, i: Gen, j: Gen, k: Gen) -> Option<Element> {
        let (x, y, z) = (self.gen_element(i), self.gen_element(j), self.gen_element(k));
        let mut total = SparseVec::new();
        for (p, r, s) in [(&x, &y, &z), (&y, &z, &x), (&z, &x, &y)] {
            let inner = self.bracket(p, r).ok()?;
            let outer = self.bracket(&inner, s).ok()?;
            axpy(&mut total, &Q::one(), &outer);
        }
        Some(total)
    }

    /// Splitting `g = g+ ⊕ g-` by the sign of the degree.
    pub fn split_semiinfinite(&self) -> Result<(SubalgebraSpec, SubalgebraSpec)> {
        let plus = SubalgebraSpec::new("g+", (0..self.dim()).filter(|&g| self.degree(g) > 0));
        let minus = SubalgebraSpec::new("g-", (0..self.dim()).filter(|&g| self.degree(g) <= 0));
        self.check_closed(&plus)?;
        self.check_closed(&minus)?;
        Ok((plus, minus))
    }

    pub fn check_closed(&self, sub: &SubalgebraSpec) -> Result<()> {
        for i in sub.members() {
            for j in sub.members() {
                let Ok(terms) = self.bracket_gens(i, j) else { continue };
                if let Some((k, _)) = terms.iter().find(|(k, _)| !sub.contains(*k)) {
                    return Err(Error::NotClosed {
                        name: sub.name.clone(),
                        left: self.label(i).into(),
                        right: self.label(j).into(),
                        outside: self.label(*k).into(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn subalgebra(&self, selector: &Selector) -> Result<SubalgebraSpec> {
        let by_loop = |name: &str, f: &dyn Fn(LoopGen) -> bool| -> Result<SubalgebraSpec> {
            let lg = self
                .loop_gens
                .as_ref()
                .ok_or_else(|| Error::Precondition(format!("selector `{name}` needs an affine sl2 algebra")))?;
            Ok(SubalgebraSpec::new(name, (0..self.dim()).filter(|&g| f(lg[g]))))
        };
        let sub = match selector {
            Selector::A => by_loop("a", &|lg| matches!(lg, LoopGen::F(_)) || matches!(lg, LoopGen::H(n) if n >= 1))?,
            Selector::ABar => by_loop("abar", &|lg| {
                matches!(lg, LoopGen::E(_) | LoopGen::K | LoopGen::D) || matches!(lg, LoopGen::H(n) if n <= 0)
            })?,
            Selector::LoopNMinus => by_loop("loop-nminus", &|lg| matches!(lg, LoopGen::F(_)))?,
            Selector::GPlus => SubalgebraSpec::new("gplus", (0..self.dim()).filter(|&g| self.degree(g) > 0)),
            Selector::GMinus => SubalgebraSpec::new("gminus", (0..self.dim()).filter(|&g| self.degree(g) <= 0)),
            Selector::GBelowZero => {
                SubalgebraSpec::new("g_below_zero", (0..self.dim()).filter(|&g| self.degree(g) < 0))
            }
            Selector::Custom(labels) => {
                let members = labels.iter().map(|l| self.by_label(l)).collect::<Result<Vec<_>>>()?;
                SubalgebraSpec::new("custom", members)
            }
        };
        self.check_closed(&sub)?;
        Ok(sub)
    }

    /// The subalgebra as an algebra in its own right, with the inherited
    /// grading, splitting and β.
    pub fn restrict(&self, sub: &SubalgebraSpec, name: impl Into<String>) -> Result<GradedLieAlgebra> {
        self.check_closed(sub)?;
        let members: Vec<Gen> = sub.members().collect();
        let local: HashMap<Gen, usize> = members.iter().enumerate().map(|(a, &g)| (g, a)).collect();
        let elements =
            members.iter().map(|&g| (self.label(g).to_string(), self.weight(g).clone(), self.basis[g].index)).collect();
        let mut brackets = Vec::new();
        let mut overflow = Vec::new();
        for (a, &i) in members.iter().enumerate() {
            for (b, &j) in members.iter().enumerate() {
                match self.bracket_gens(i, j) {
                    Ok(terms) if !terms.is_empty() => {
                        brackets.push((a, b, terms.iter().map(|(k, c)| (local[k], c.clone())).collect()))
                    }
                    Ok(_) => {}
                    Err(_) => overflow.push((a, b)),
                }
            }
        }
        GradedLieAlgebra::from_parts(AlgebraParts {
            name: name.into(),
            grading: self.grading.clone(),
            elements,
            brackets,
            overflow,
            beta: members.iter().map(|&g| self.beta[g].clone()).collect(),
            window: Some(self.window),
            loop_gens: self.loop_gens.as_ref().map(|lg| members.iter().map(|&g| lg[g]).collect()),
        })
    }

    /// Copy of the algebra with the structure constant `c(i,j)_k` shifted by
    /// `delta` (and `c(j,i)_k` by `-delta`).
    pub fn perturbed(&self, i: Gen, j: Gen, k: Gen, delta: Q) -> GradedLieAlgebra {
        let mut out = self.clone();
        for (a, b, d) in [(i, j, delta.clone()), (j, i, -delta)] {
            let mut acc: SparseVec = out.brackets.remove(&(a, b)).unwrap_or_default().into_iter().collect();
            add_entry(&mut acc, k, d);
            if !acc.is_empty() {
                out.brackets.insert((a, b), acc.into_iter().collect());
            }
        }
        out.central[i] = false;
        out.central[j] = false;
        out
    }

    /// Copy of the algebra with `β(g)` replaced.
    pub fn with_beta(&self, g: Gen, value: Q) -> Result<GradedLieAlgebra> {
        if self.degree(g) != 0 && !value.is_zero() {
            return Err(Error::BetaOutsideDegreeZero(self.label(g).to_string()));
        }
        let mut out = self.clone();
        out.beta[g] = value;
        Ok(out)
    }

    /// Serializable description of the algebra. Built-in algebras with a
    /// finite window are written by name.
    pub fn to_file(&self) -> AlgebraFile {
        if !self.overflow.is_empty() && builtin(&self.name, 1).is_ok() && self.window.0 == -self.window.1 {
            return AlgebraFile {
                builtin: Some(self.name.clone()),
                window: Some(self.window.1),
                grading: None,
                basis: vec![],
                brackets: vec![],
                beta: vec![],
            };
        }
        let mut brackets: Vec<BracketEntry> = self
            .brackets
            .iter()
            .filter(|((i, j), _)| i < j)
            .map(|(&(i, j), terms)| BracketEntry {
                i,
                j,
                terms: terms.iter().map(|(k, c)| Term { k: *k, num: c.numer().to_string(), den: c.denom().to_string() }).collect(),
            })
            .collect();
        brackets.sort_by_key(|b| (b.i, b.j));
        AlgebraFile {
            builtin: None,
            window: None,
            grading: Some(self.grading.clone()),
            basis: self
                .basis
                .iter()
                .map(|b| BasisEntry { label: b.label.clone(), weight: b.weight.0.clone(), index: b.index })
                .collect(),
            brackets,
            beta: self
                .basis
                .iter()
                .zip(&self.beta)
                .filter(|(_, c)| !c.is_zero())
                .map(|(b, c)| BetaEntry { label: b.label.clone(), num: c.numer().to_string(), den: c.denom().to_string() })
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Built-in algebras

/// Affine `sl2` = `C[z,z^-1]⊗sl2 ⊕ CK ⊕ Cd` on the degree window `[-window, window]`.
///
/// Weights are `(α, δ)` coordinates and the degree is `α + 2δ`, so
/// `deg z^n⊗e = 2n+1`, `deg z^n⊗h = 2n`, `deg z^n⊗f = 2n-1`.
pub fn affine_sl2(window: i64) -> GradedLieAlgebra {
    let mut gens = Vec::new();
    for n in -window..=window {
        for lg in [LoopGen::E(n), LoopGen::H(n), LoopGen::F(n)] {
            let deg = degree_of_loop(lg);
            if deg.abs() <= window {
                gens.push(lg);
            }
        }
    }
    gens.push(LoopGen::K);
    gens.push(LoopGen::D);
    gens.sort_by_key(|lg| (degree_of_loop(*lg), lg.weight(), lg.index()));
    gens.dedup();
    let pos: HashMap<LoopGen, usize> = gens.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let mut brackets = Vec::new();
    let mut overflow = Vec::new();
    for (i, &x) in gens.iter().enumerate() {
        for (j, &y) in gens.iter().enumerate() {
            let terms = affine_bracket(x, y);
            if terms.is_empty() {
                continue;
            }
            let mut mapped = Vec::new();
            let mut outside = false;
            for (lg, c) in terms {
                match pos.get(&lg) {
                    Some(&k) => mapped.push((k, q(c))),
                    None => outside = true,
                }
            }
            if outside {
                overflow.push((i, j));
            } else {
                brackets.push((i, j, mapped));
            }
        }
    }
    let beta = gens
        .iter()
        .map(|lg| match lg {
            // β(K) = 2h^∨ with h^∨ = 2, β|t = 2ρ with ρ(h) = 1, β(d) = 1.
            LoopGen::K => q(4),
            LoopGen::H(0) => q(2),
            LoopGen::D => q(1),
            _ => q(0),
        })
        .collect();
    GradedLieAlgebra::from_parts(AlgebraParts {
        name: "affine_sl2".into(),
        grading: GradingData { rank: 2, degree_functional: vec![1, 2] },
        elements: gens.iter().map(|lg| (lg.label(), lg.weight(), lg.index())).collect(),
        brackets,
        overflow,
        beta,
        window: Some((-window, window)),
        loop_gens: Some(gens),
    })
    .expect("affine sl2 constructor produces a consistent algebra")
}

fn degree_of_loop(lg: LoopGen) -> i64 {
    let w = lg.weight();
    w.0[0] + 2 * w.0[1]
}

/// `[z^m x, z^n y] = z^{m+n}[x,y] + m δ_{m+n,0} <x,y> K`, `[d, z^n x] = n z^n x`.
fn affine_bracket(x: LoopGen, y: LoopGen) -> Vec<(LoopGen, i64)> {
    use LoopGen::*;
    match (x, y) {
        (K, _) | (_, K) | (D, D) => vec![],
        (D, E(n)) | (D, H(n)) | (D, F(n)) => {
            if n == 0 {
                vec![]
            } else {
                vec![(y, n)]
            }
        }
        (_, D) => affine_bracket(D, x).into_iter().map(|(g, c)| (g, -c)).collect(),
        (E(m), F(n)) => with_cocycle(vec![(H(m + n), 1)], m, n, 1),
        (F(m), E(n)) => with_cocycle(vec![(H(m + n), -1)], m, n, 1),
        (H(m), E(n)) => vec![(E(m + n), 2)],
        (E(m), H(n)) => vec![(E(m + n), -2)],
        (H(m), F(n)) => vec![(F(m + n), -2)],
        (F(m), H(n)) => vec![(F(m + n), 2)],
        (H(m), H(n)) => with_cocycle(vec![], m, n, 2),
        (E(_), E(_)) | (F(_), F(_)) => vec![],
    }
}

fn with_cocycle(mut terms: Vec<(LoopGen, i64)>, m: i64, n: i64, form: i64) -> Vec<(LoopGen, i64)> {
    if m + n == 0 && m != 0 {
        terms.push((LoopGen::K, m * form));
    }
    terms
}

/// Abelian algebra with basis `x_n`, `n ≠ 0`, `deg x_n = n`, `|n| <= window`, and β = 0.
pub fn abelian(window: i64) -> GradedLieAlgebra {
    let elements = (-window..=window).filter(|&n| n != 0).map(|n| (format!("x{n}"), Weight(vec![n]), 0)).collect::<Vec<_>>();
    let len = elements.len();
    GradedLieAlgebra::from_parts(AlgebraParts {
        name: "abelian".into(),
        grading: GradingData { rank: 1, degree_functional: vec![1] },
        elements,
        brackets: vec![],
        overflow: vec![],
        beta: vec![q(0); len],
        window: Some((-window, window)),
        loop_gens: None,
    })
    .expect("abelian constructor is consistent")
}

/// The subalgebra `a = (C[z,z^-1]⊗n-) ⊕ (zC[z]⊗t)` of affine `sl2`, with β = 0.
pub fn loop_nilpotent_a(window: i64) -> GradedLieAlgebra {
    let g = affine_sl2(window);
    let a = g.subalgebra(&Selector::A).expect("a is closed");
    g.restrict(&a, "subalgebra_a").expect("a restricts")
}

/// Built-in algebra by name.
pub fn builtin(name: &str, window: i64) -> Result<GradedLieAlgebra> {
    match name {
        "affine_sl2" => Ok(affine_sl2(window)),
        "abelian" => Ok(abelian(window)),
        "subalgebra_a" | "a" | "loop-nilpotent-a" => Ok(loop_nilpotent_a(window)),
        other => Err(Error::Input(format!("unknown built-in algebra `{other}`"))),
    }
}

// ---------------------------------------------------------------------------
// Definition files

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<GradingData>,
    #[serde(default)]
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default)]
    pub beta: Vec<BetaEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BasisEntry {
    pub label: String,
    pub weight: Vec<i64>,
    #[serde(default)]
    pub index: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Term {
    pub k: usize,
    #[serde(with = "int_string")]
    pub num: String,
    #[serde(default = "one_string", with = "int_string")]
    pub den: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BetaEntry {
    pub label: String,
    #[serde(with = "int_string")]
    pub num: String,
    #[serde(default = "one_string", with = "int_string")]
    pub den: String,
}

fn one_string() -> String {
    "1".into()
}

/// Integers may be written as JSON numbers or strings (for big values).
mod int_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &str, s: S) -> Result<S::Ok, S::Error> {
        match v.parse::<i64>() {
            Ok(n) => s.serialize_i64(n),
            Err(_) => s.serialize_str(v),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<String, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Int(n) => n.to_string(),
            Raw::Str(s) => s,
        })
    }
}

fn parse_q(num: &str, den: &str) -> Result<Q> {
    let n: num_bigint::BigInt = num.trim().parse().map_err(|_| Error::Input(format!("bad integer `{num}`")))?;
    let d: num_bigint::BigInt = den.trim().parse().map_err(|_| Error::Input(format!("bad integer `{den}`")))?;
    if d.is_zero() {
        return Err(Error::Input("zero denominator".into()));
    }
    Ok(Q::new(n, d))
}

impl AlgebraFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("algebra file: {e}")))
    }

    pub fn build(&self) -> Result<GradedLieAlgebra> {
        if let Some(name) = &self.builtin {
            return builtin(name, self.window.unwrap_or(12));
        }
        let grading = self.grading.clone().ok_or_else(|| Error::Input("algebra file needs `grading`".into()))?;
        if grading.degree_functional.len() != grading.rank || grading.rank == 0 {
            return Err(Error::Input("degree_functional must have length rank > 0".into()));
        }
        let elements: Vec<(String, Weight, usize)> =
            self.basis.iter().map(|b| (b.label.clone(), Weight(b.weight.clone()), b.index)).collect();
        let mut table: BTreeMap<(usize, usize), Vec<(usize, Q)>> = BTreeMap::new();
        for entry in &self.brackets {
            let terms = entry.terms.iter().map(|t| Ok((t.k, parse_q(&t.num, &t.den)?))).collect::<Result<Vec<_>>>()?;
            if entry.i == entry.j && !terms.is_empty() {
                return Err(Error::Input(format!("bracket of element {} with itself must vanish", entry.i)));
            }
            let neg = terms.iter().map(|(k, c)| (*k, -c.clone())).collect();
            table.insert((entry.i, entry.j), terms);
            table.entry((entry.j, entry.i)).or_insert(neg);
        }
        let mut beta = vec![q(0); elements.len()];
        for b in &self.beta {
            let pos = elements
                .iter()
                .position(|(l, _, _)| l == &b.label)
                .ok_or_else(|| Error::Input(format!("beta entry for unknown label {}", b.label)))?;
            beta[pos] = parse_q(&b.num, &b.den)?;
        }
        GradedLieAlgebra::from_parts(AlgebraParts {
            name: "custom".into(),
            grading,
            elements,
            brackets: table.into_iter().map(|((i, j), t)| (i, j, t)).collect(),
            overflow: vec![],
            beta,
            window: None,
            loop_gens: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn el(g: &GradedLieAlgebra, lg: LoopGen) -> Element {
        g.gen_element(g.loop_element(lg).unwrap())
    }

    #[test]
    fn sl2_brackets() {
        let g = affine_sl2(6);
        let h0 = el(&g, LoopGen::H(0));
        assert_eq!(g.bracket(&el(&g, LoopGen::E(0)), &el(&g, LoopGen::F(0))).unwrap(), h0);
        let mut hk = h0.clone();
        hk.insert(g.loop_element(LoopGen::K).unwrap(), q(1));
        assert_eq!(g.bracket(&el(&g, LoopGen::E(1)), &el(&g, LoopGen::F(-1))).unwrap(), hk);
        let f2 = el(&g, LoopGen::F(2));
        let expected: Element = f2.iter().map(|(k, v)| (*k, v * q(2))).collect();
        assert_eq!(g.bracket(&el(&g, LoopGen::D), &f2).unwrap(), expected);
    }

    #[test]
    fn degrees_and_components() {
        let g = affine_sl2(6);
        let zero: Vec<&str> = g.graded_component(0).iter().map(|&x| g.label(x)).collect();
        assert_eq!(zero, vec!["1⊗h", "K", "d"]);
        for n in -6..=6i64 {
            let expected = match n {
                0 => 3,
                n if n % 2 == 0 => 1,
                _ => 2,
            };
            assert_eq!(g.graded_component(n).len(), expected, "degree {n}");
        }
        let one: Vec<&str> = g.graded_component(1).iter().map(|&x| g.label(x)).collect();
        assert_eq!(one, vec!["z⊗f", "1⊗e"]);
        assert!(g.is_positive(g.loop_element(LoopGen::F(1)).unwrap()));
        assert!(g.is_central(g.loop_element(LoopGen::K).unwrap()));
        assert!(!g.is_central(g.loop_element(LoopGen::D).unwrap()));
    }

    #[test]
    fn jacobi_on_shipped_algebras() {
        for alg in [affine_sl2(8), abelian(8), loop_nilpotent_a(8)] {
            let r = alg.check_jacobi(-6, 6);
            assert!(r.passed(), "{}: {:?}", alg.name(), r);
            assert!(alg.name() == "abelian" || r.triples_checked > 50);
        }
    }

    #[test]
    fn perturbed_constant_is_detected() {
        let g = affine_sl2(6);
        let (e, f) = (g.loop_element(LoopGen::E(0)).unwrap(), g.loop_element(LoopGen::F(0)).unwrap());
        let bad = g.perturbed(e, f, g.loop_element(LoopGen::K).unwrap(), q(1));
        let r = bad.check_jacobi(-6, 6);
        assert!(!r.passed());
        assert!(r.jacobi_failures.iter().any(|(a, b, c)| [a, b, c].iter().any(|l| l.as_str() == "1⊗e")));
    }

    #[test]
    fn test_algebras() {
        let ab = abelian(5);
        let (x1, xm1) = (ab.by_label("x1").unwrap(), ab.by_label("x-1").unwrap());
        assert!(ab.bracket_gens(x1, xm1).unwrap().is_empty());
        let a = loop_nilpotent_a(8);
        assert!(a.graded_component(0).is_empty());
        let zh = a.gen_element(a.loop_element(LoopGen::H(1)).unwrap());
        let f0 = a.gen_element(a.loop_element(LoopGen::F(0)).unwrap());
        let zf: Element = a.gen_element(a.loop_element(LoopGen::F(1)).unwrap()).into_keys().map(|k| (k, q(-2))).collect();
        assert_eq!(a.bracket(&zh, &f0).unwrap(), zf);
        assert!(a.beta_functional().is_empty());
    }

    #[test]
    fn splittings_and_selectors() {
        let g = affine_sl2(6);
        let (plus, minus) = g.split_semiinfinite().unwrap();
        assert_eq!(plus.len() + minus.len(), g.dim());
        for x in plus.members() {
            let lg = g.loop_gen(x).unwrap();
            // n+ ⊕ zC[z]⊗g
            assert!(matches!(lg, LoopGen::E(0)) || matches!(lg, LoopGen::E(n) | LoopGen::H(n) | LoopGen::F(n) if n >= 1));
        }
        let a = g.subalgebra(&Selector::A).unwrap();
        let abar = g.subalgebra(&Selector::ABar).unwrap();
        for n in -6..=6 {
            let comp = g.graded_component(n);
            let (ca, cb) = (comp.iter().filter(|&&x| a.contains(x)).count(), comp.iter().filter(|&&x| abar.contains(x)).count());
            assert_eq!(ca + cb, comp.len(), "degree {n}");
        }
        let abar_plus = abar.intersect(&plus);
        for x in abar_plus.members() {
            assert!(matches!(g.loop_gen(x).unwrap(), LoopGen::E(n) if n >= 0));
        }
        let ab = abelian(4);
        let below = ab.subalgebra(&Selector::GBelowZero).unwrap();
        let labels: Vec<&str> = below.members().map(|x| ab.label(x)).collect();
        assert_eq!(labels, vec!["x-1", "x-2", "x-3", "x-4"]);
        assert!(matches!(ab.subalgebra(&Selector::A), Err(Error::Precondition(_))));
        assert!(matches!("bogus".parse::<Selector>(), Err(Error::UnknownSelector(_))));
    }

    #[test]
    fn beta_values() {
        let g = affine_sl2(4);
        let val = |lg| g.beta(g.loop_element(lg).unwrap()).clone();
        assert_eq!(val(LoopGen::D), q(1));
        assert_eq!(val(LoopGen::H(0)), q(2));
        assert_eq!(val(LoopGen::K), q(4));
        for x in 0..g.dim() {
            if g.degree(x) != 0 {
                assert!(g.beta(x).is_zero());
            }
        }
    }

    #[test]
    fn file_round_trip_and_errors() {
        let a = loop_nilpotent_a(5);
        let text = serde_json::to_string(&a.to_file()).unwrap();
        let back = AlgebraFile::from_json(&text).unwrap().build().unwrap();
        assert_eq!(back.dim(), a.dim());
        assert!(back.check_jacobi(-5, 5).passed());
        let text = r#"{"grading":{"rank":1,"degree_functional":[1]},"basis":[{"label":"x","weight":[1]},{"label":"y","weight":[-1]},{"label":"c","weight":[0]}],
            "brackets":[{"i":0,"j":1,"terms":[{"k":2,"num":1}]}],"beta":[{"label":"c","num":1,"den":2}]}"#;
        let heis = AlgebraFile::from_json(text).unwrap().build().unwrap();
        assert!(heis.check_jacobi(-1, 1).passed());
        assert!(heis.is_central(heis.by_label("c").unwrap()));
        let again = AlgebraFile::from_json(&serde_json::to_string(&heis.to_file()).unwrap()).unwrap().build().unwrap();
        assert_eq!(again.to_file(), heis.to_file());
        let bad = r#"{"grading":{"rank":1,"degree_functional":[1]},"basis":[{"label":"x","weight":[0]}],"beta":[{"label":"y","num":1}]}"#;
        assert!(AlgebraFile::from_json(bad).unwrap().build().is_err());
        let off = r#"{"grading":{"rank":1,"degree_functional":[1]},"basis":[{"label":"x","weight":[1]}],"beta":[{"label":"x","num":1}]}"#;
        assert!(matches!(AlgebraFile::from_json(off).unwrap().build(), Err(Error::BetaOutsideDegreeZero(_))));
    }
}
