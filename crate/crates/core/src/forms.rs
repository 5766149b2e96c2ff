//! Semi-infinite forms and the standard semi-infinite complex.
//!
//! A semi-infinite monomial is recorded relative to the vacuum ω₀, which
//! occupies every slot of `g-` and no slot of `g+`: `added` lists the
//! occupied slots of `g+`, `removed` the empty slots of `g-`. Slots are
//! ordered by the canonical basis order, so all of `g+` precedes all of `g-`
//! and every slot has finitely many occupied slots before it.

use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;

use num_traits::Zero;
use rayon::prelude::*;

use crate::cohomology::{wedge_monomials, wedge_weight, CohomologyTable};
use crate::error::{Error, Result};
use crate::lie::{Gen, GradedLieAlgebra, Weight};
use crate::linalg::{QuotientBasis, SparseMatrix, SparseVec, Q};
use crate::modules::WeightModule;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SemiInfiniteMonomial {
    pub added: Vec<Gen>,
    pub removed: Vec<Gen>,
}

impl SemiInfiniteMonomial {
    pub fn ghost(&self) -> i64 {
        self.added.len() as i64 - self.removed.len() as i64
    }

    pub fn weight(&self, alg: &GradedLieAlgebra) -> Weight {
        &wedge_weight(alg, &self.added) - &wedge_weight(alg, &self.removed)
    }

    pub fn display(&self, alg: &GradedLieAlgebra) -> String {
        let a: Vec<&str> = self.added.iter().map(|&g| alg.label(g)).collect();
        let r: Vec<&str> = self.removed.iter().map(|&g| alg.label(g)).collect();
        format!("[+{{{}}} -{{{}}}]", a.join(","), r.join(","))
    }
}

pub type FormElement = BTreeMap<SemiInfiniteMonomial, Q>;

pub fn vacuum() -> SemiInfiniteMonomial {
    SemiInfiniteMonomial::default()
}

/// Slot bookkeeping for one algebra.
pub struct Slots<'a> {
    alg: &'a GradedLieAlgebra,
    first_minus: usize,
}

impl<'a> Slots<'a> {
    pub fn new(alg: &'a GradedLieAlgebra) -> Self {
        let first_minus = (0..alg.dim()).take_while(|&g| alg.degree(g) > 0).count();
        debug_assert!((first_minus..alg.dim()).all(|g| alg.degree(g) <= 0));
        Slots { alg, first_minus }
    }

    pub fn algebra(&self) -> &'a GradedLieAlgebra {
        self.alg
    }

    fn is_plus(&self, x: Gen) -> bool {
        x < self.first_minus
    }

    /// Number of occupied slots strictly before `x`.
    fn before(&self, m: &SemiInfiniteMonomial, x: Gen) -> usize {
        if self.is_plus(x) {
            m.added.partition_point(|&a| a < x)
        } else {
            m.added.len() + (x - self.first_minus) - m.removed.partition_point(|&r| r < x)
        }
    }

    pub fn is_occupied(&self, m: &SemiInfiniteMonomial, x: Gen) -> bool {
        if self.is_plus(x) {
            m.added.binary_search(&x).is_ok()
        } else {
            m.removed.binary_search(&x).is_err()
        }
    }

    /// `x ∧ m`, with the sign of moving `x` into its slot.
    pub fn wedge_mono(&self, x: Gen, m: &SemiInfiniteMonomial) -> Option<(SemiInfiniteMonomial, i64)> {
        let s = sign(self.before(m, x));
        let mut out = m.clone();
        if self.is_plus(x) {
            let pos = m.added.binary_search(&x).err()?;
            out.added.insert(pos, x);
        } else {
            let pos = m.removed.binary_search(&x).ok()?;
            out.removed.remove(pos);
        }
        Some((out, s))
    }

    /// `ι(x*) m`.
    pub fn contract_mono(&self, x: Gen, m: &SemiInfiniteMonomial) -> Option<(SemiInfiniteMonomial, i64)> {
        let s = sign(self.before(m, x));
        let mut out = m.clone();
        if self.is_plus(x) {
            let pos = m.added.binary_search(&x).ok()?;
            out.added.remove(pos);
        } else {
            let pos = m.removed.binary_search(&x).err()?;
            out.removed.insert(pos, x);
        }
        Some((out, s))
    }

    pub fn wedge(&self, x: Gen, f: &FormElement) -> FormElement {
        self.apply(f, |m| self.wedge_mono(x, m))
    }

    pub fn contract(&self, x: Gen, f: &FormElement) -> FormElement {
        self.apply(f, |m| self.contract_mono(x, m))
    }

    fn apply(&self, f: &FormElement, op: impl Fn(&SemiInfiniteMonomial) -> Option<(SemiInfiniteMonomial, i64)>) -> FormElement {
        let mut out = FormElement::new();
        for (m, c) in f {
            if let Some((n, s)) = op(m) {
                let e = out.entry(n).or_insert_with(Q::zero);
                *e += c * Q::from_integer(s.into());
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All monomials with `ℓ(relative weight) <= bound`, grouped by ghost degree.
/// Requires the window to contain degrees `[-bound, bound]`.
pub fn forms_up_to(alg: &GradedLieAlgebra, bound: i64) -> Result<BTreeMap<i64, Vec<SemiInfiniteMonomial>>> {
    let (lo, hi) = alg.window();
    if bound > hi || -bound < lo {
        return Err(Error::InsufficientWindow { weight: Weight::zero(alg.rank()), needed: bound, lo, hi });
    }
    let plus: Vec<Gen> = (0..alg.dim()).filter(|&g| alg.degree(g) > 0).collect();
    let minus: Vec<Gen> = (0..alg.dim()).filter(|&g| alg.degree(g) <= 0).collect();
    let adds: Vec<Vec<Gen>> = wedge_monomials(alg, &plus, bound, plus.len()).into_iter().flatten().collect();
    let rems: Vec<Vec<Gen>> = wedge_monomials(alg, &minus, bound, minus.len()).into_iter().flatten().collect();
    let ell = |s: &[Gen]| s.iter().map(|&g| alg.degree(g).abs()).sum::<i64>();
    let mut out: BTreeMap<i64, Vec<SemiInfiniteMonomial>> = BTreeMap::new();
    for a in &adds {
        let la = ell(a);
        for r in &rems {
            if la + ell(r) <= bound {
                let m = SemiInfiniteMonomial { added: a.clone(), removed: r.clone() };
                out.entry(m.ghost()).or_default().push(m);
            }
        }
    }
    for v in out.values_mut() {
        v.sort();
    }
    Ok(out)
}

/// Monomials of relative weight `mu` and ghost degree `n`.
pub fn enumerate_forms(alg: &GradedLieAlgebra, mu: &Weight, n: i64) -> Result<Vec<SemiInfiniteMonomial>> {
    let bound = alg.degree_of(mu);
    if bound < 0 {
        return Ok(vec![]);
    }
    let all = forms_up_to(alg, bound)?;
    Ok(all.get(&n).map_or_else(Vec::new, |v| v.iter().filter(|m| &m.weight(alg) == mu).cloned().collect()))
}

/// `Hom(Λ^{∞/2+n}, M)` at total weight `w`: blocks `(form, module offset, base index)`.
struct Piece {
    blocks: Vec<(SemiInfiniteMonomial, Weight, usize)>,
    lookup: HashMap<SemiInfiniteMonomial, usize>,
    dim: usize,
}

impl Piece {
    fn new(alg: &GradedLieAlgebra, module: &WeightModule, w: &Weight, forms: &[SemiInfiniteMonomial]) -> Result<Piece> {
        let mut blocks = Vec::new();
        let mut lookup = HashMap::new();
        let mut dim = 0;
        for f in forms {
            let off = &f.weight(alg) + w;
            if alg.degree_of(&off) > 0 {
                continue;
            }
            let d = module.checked_dim(&off)?;
            if d == 0 {
                continue;
            }
            lookup.insert(f.clone(), blocks.len());
            blocks.push((f.clone(), off, dim));
            dim += d;
        }
        Ok(Piece { blocks, lookup, dim })
    }

    fn base(&self, f: &SemiInfiniteMonomial) -> Option<(usize, &Weight)> {
        self.lookup.get(f).map(|&b| (self.blocks[b].2, &self.blocks[b].1))
    }
}

/// The semi-infinite complex of `M` at one total weight.
pub struct SemiInfiniteComplex<'a> {
    slots: Slots<'a>,
    module: &'a WeightModule,
    weight: Weight,
    bound: i64,
    forms: BTreeMap<i64, Vec<SemiInfiniteMonomial>>,
}

impl<'a> SemiInfiniteComplex<'a> {
    pub fn new(module: &'a WeightModule, w: &Weight) -> Result<Self> {
        let alg: &GradedLieAlgebra = module.algebra();
        let bound = -alg.degree_of(w);
        if bound < 0 {
            return Err(Error::Input(format!("total weight {w} lies above the top of the module")));
        }
        module.checked_dim(w)?;
        let (lo, hi) = alg.window();
        if 2 * bound > -lo || bound > hi {
            return Err(Error::InsufficientWindow { weight: w.clone(), needed: 2 * bound, lo, hi });
        }
        for g in 0..alg.dim() {
            if !alg.beta(g).is_zero() && !alg.weight(g).is_zero() {
                return Err(Error::Input(format!("β is nonzero on {}, which has nonzero weight", alg.label(g))));
            }
        }
        let forms = forms_up_to(alg, bound)?;
        Ok(SemiInfiniteComplex { slots: Slots::new(alg), module, weight: w.clone(), bound, forms })
    }

    pub fn ghost_range(&self) -> RangeInclusive<i64> {
        let lo = self.forms.keys().next().copied().unwrap_or(0);
        let hi = self.forms.keys().last().copied().unwrap_or(0);
        lo..=hi
    }

    fn piece(&self, n: i64) -> Result<Piece> {
        let alg = self.slots.algebra();
        let empty = Vec::new();
        Piece::new(alg, self.module, &self.weight, self.forms.get(&n).unwrap_or(&empty))
    }

    pub fn dim(&self, n: i64) -> Result<usize> {
        Ok(self.piece(n)?.dim)
    }

    /// Labels of the cochain basis at ghost degree `n`.
    pub fn basis_labels(&self, n: i64) -> Result<Vec<String>> {
        let alg = self.slots.algebra();
        let p = self.piece(n)?;
        let mut out = Vec::new();
        for (f, off, _) in &p.blocks {
            for l in self.module.labels(off) {
                out.push(format!("{}⊗{}", f.display(alg), l));
            }
        }
        Ok(out)
    }

    /// Matrix of `d: C^n → C^{n+1}`.
    pub fn differential(&self, n: i64) -> Result<SparseMatrix> {
        self.differential_between(&self.piece(n)?, &self.piece(n + 1)?)
    }

    fn differential_between(&self, src: &Piece, tgt: &Piece) -> Result<SparseMatrix> {
        let alg = self.slots.algebra();
        let b = self.bound;
        let mut d = SparseMatrix::zeros(tgt.dim, src.dim);
        let minus_tail: Vec<Gen> = (self.slots.first_minus..alg.dim()).filter(|&g| alg.degree(g) >= -2 * b).collect();
        for (t, toff, tbase) in &tgt.blocks {
            let tdim = self.module.dim(toff);
            let ell_t = alg.degree_of(toff);
            let occupied: Vec<Gen> = t
                .added
                .iter()
                .copied()
                .chain(minus_tail.iter().copied().filter(|&g| t.removed.binary_search(&g).is_err()))
                .collect();
            // (x + β(x)) φ(ι(x*) ω)
            for &x in &occupied {
                if !self.slots.is_plus(x) && alg.degree(x) < ell_t {
                    continue;
                }
                let Some((s, sg)) = self.slots.contract_mono(x, t) else { continue };
                let Some((sbase, soff)) = src.base(&s) else { continue };
                let sgq = Q::from_integer(sg.into());
                let a = self.module.action(x, soff)?;
                for (r, row) in a.rows().iter().enumerate() {
                    for (c, v) in row {
                        d.add(tbase + r, sbase + c, &sgq * v);
                    }
                }
                let mut beta = alg.beta(x).clone();
                if !self.slots.is_plus(x) && alg.weight(x).is_zero() {
                    beta += self.hole_trace(x, &s)?;
                }
                if !beta.is_zero() {
                    for i in 0..tdim {
                        d.add(tbase + i, sbase + i, &sgq * &beta);
                    }
                }
            }
            // φ(:[x,y] ∧ ι(x*) ι(y*) ω:)
            for (i, &x) in occupied.iter().enumerate() {
                for &y in &occupied[i + 1..] {
                    let dsum = alg.degree(x) + alg.degree(y);
                    if dsum < -b {
                        continue;
                    }
                    let br = alg.bracket_gens(x, y)?;
                    if br.is_empty() {
                        continue;
                    }
                    let Some((t1, s1)) = self.slots.contract_mono(y, t) else { continue };
                    let Some((t2, s2)) = self.slots.contract_mono(x, &t1) else { continue };
                    for (e, c) in br {
                        if dsum <= 0 && (*e == x || *e == y) {
                            continue;
                        }
                        let Some((s, s3)) = self.slots.wedge_mono(*e, &t2) else { continue };
                        let Some((sbase, _)) = src.base(&s) else { continue };
                        let coef = c * Q::from_integer((s1 * s2 * s3).into());
                        for k in 0..tdim {
                            d.add(tbase + k, sbase + k, coef.clone());
                        }
                    }
                }
            }
        }
        Ok(d)
    }

    /// `Σ [x, y]_y` over the empty `g-` slots `y` of `m` other than `x`: what
    /// normal ordering moves off the occupied slots.
    fn hole_trace(&self, x: Gen, m: &SemiInfiniteMonomial) -> Result<Q> {
        let alg = self.slots.algebra();
        let mut t = Q::zero();
        for &y in &m.removed {
            if y == x {
                continue;
            }
            for (k, c) in alg.bracket_gens(x, y)? {
                if *k == y {
                    t += c;
                }
            }
        }
        Ok(t)
    }

    /// Cohomology dimensions over `range` (default: every ghost degree
    /// with nonzero cochains), after checking `d∘d = 0` on it.
    pub fn cohomology(&self, range: Option<RangeInclusive<i64>>) -> Result<CohomologyTable> {
        let range = range.unwrap_or_else(|| self.ghost_range());
        let (lo, hi) = (*range.start(), *range.end());
        let pieces: Vec<Piece> = (lo - 1..=hi + 1).map(|n| self.piece(n)).collect::<Result<_>>()?;
        let mut diffs = Vec::new();
        for k in 0..pieces.len() - 1 {
            diffs.push(self.differential_between(&pieces[k], &pieces[k + 1])?);
        }
        for k in 0..diffs.len() - 1 {
            let dd = diffs[k + 1].mul(&diffs[k]);
            if !dd.is_zero() {
                return Err(Error::Anomaly { weight: self.weight.clone(), ghost: lo - 1 + k as i64, nonzero: dd.nnz() });
            }
        }
        let ranks: Vec<usize> = diffs.iter().map(|m| m.rank()).collect();
        let mut t = CohomologyTable::default();
        for (k, n) in (lo..=hi).enumerate() {
            let c = pieces[k + 1].dim;
            if c > 0 {
                t.complex.insert((self.weight.clone(), n), c);
                t.rows.insert((self.weight.clone(), n), c - ranks[k] - ranks[k + 1]);
            }
        }
        t.bounded.insert(self.weight.clone(), pieces[0].dim == 0 && pieces[pieces.len() - 1].dim == 0);
        Ok(t)
    }

    /// `d∘d: C^n → C^{n+2}`.
    pub fn d_squared(&self, n: i64) -> Result<SparseMatrix> {
        Ok(self.differential(n + 1)?.mul(&self.differential(n)?))
    }
}

/// Total weights `w` with `-depth <= ℓ(w)` at which the complex is nonzero.
pub fn semiinf_cells(module: &WeightModule, depth: i64) -> Result<Vec<Weight>> {
    let alg: &GradedLieAlgebra = module.algebra();
    let forms = forms_up_to(alg, depth)?;
    let mut mus: Vec<Weight> = forms.values().flatten().map(|f| f.weight(alg)).collect();
    mus.sort();
    mus.dedup();
    let mut cells = Vec::new();
    for nu in module.weights() {
        for mu in &mus {
            let w = nu - mu;
            if alg.degree_of(&w) >= -depth {
                cells.push(w);
            }
        }
    }
    cells.sort();
    cells.dedup();
    Ok(cells)
}

/// `H^{∞/2+•}(g, M)` at every total weight within `depth` of the top.
pub fn semiinf_cohomology(module: &WeightModule, depth: i64, ghosts: Option<RangeInclusive<i64>>) -> Result<CohomologyTable> {
    let cells = semiinf_cells(module, depth)?;
    semiinf_cohomology_at(module, &cells, ghosts)
}

pub fn semiinf_cohomology_at(module: &WeightModule, cells: &[Weight], ghosts: Option<RangeInclusive<i64>>) -> Result<CohomologyTable> {
    let results: Vec<Result<CohomologyTable>> = cells
        .par_iter()
        .map(|w| SemiInfiniteComplex::new(module, w)?.cohomology(ghosts.clone()))
        .collect();
    let mut table = CohomologyTable::default();
    for r in results {
        table.merge(r?);
    }
    Ok(table)
}

/// Basis of the semi-invariants `(M ⊗ L_β)^{g+}_{g-}` at one weight: the
/// image of the `g+`-invariants in the `g-`-coinvariants.
#[derive(Clone, Debug)]
pub struct SemiInvariants {
    pub weight: Weight,
    pub dim: usize,
    pub representatives: Vec<SparseVec>,
}

pub fn semiinvariants_at(module: &WeightModule, w: &Weight) -> Result<SemiInvariants> {
    let alg: &GradedLieAlgebra = module.algebra();
    let n = module.checked_dim(w)?;
    let ell = alg.degree_of(w);
    let (lo, hi) = alg.window();
    if -ell > hi || ell < lo {
        return Err(Error::InsufficientWindow { weight: w.clone(), needed: -ell, lo, hi });
    }
    // coinvariant relations: (y + β(y)) M_{w - wt y}, y ∈ g-
    let mut relations = Vec::new();
    for y in 0..alg.dim() {
        let dy = alg.degree(y);
        if dy > 0 || dy < ell {
            continue;
        }
        let src = w - alg.weight(y);
        if alg.degree_of(&src) > 0 {
            continue;
        }
        let a = module.action(y, &src)?;
        let beta = alg.beta(y);
        for c in 0..module.dim(&src) {
            let mut col = a.column(c);
            if !beta.is_zero() {
                crate::linalg::add_entry(&mut col, c, beta.clone());
            }
            relations.push(col);
        }
    }
    // g+-invariants: common kernel of the raising actions
    let mut stacked = SparseMatrix::zeros(0, n);
    for x in 0..alg.dim() {
        let dx = alg.degree(x);
        if dx <= 0 || dx > -ell {
            continue;
        }
        stacked = stacked.vstack(&*module.action(x, w)?);
    }
    let invariants = if stacked.nrows() == 0 { (0..n).map(crate::modules::basis_vector).collect() } else { stacked.kernel() };
    let q = QuotientBasis::new(&relations, &invariants);
    Ok(SemiInvariants { weight: w.clone(), dim: q.dim(), representatives: q.reps().to_vec() })
}

pub fn semiinvariants(module: &WeightModule, depth: i64) -> Result<Vec<SemiInvariants>> {
    let alg: &GradedLieAlgebra = module.algebra();
    let weights: Vec<Weight> = module.weights().filter(|w| alg.degree_of(w) >= -depth).cloned().collect();
    weights.par_iter().map(|w| semiinvariants_at(module, w)).collect()
}
