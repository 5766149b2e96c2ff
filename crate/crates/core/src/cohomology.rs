//! Chevalley–Eilenberg cohomology of positively graded subalgebras and
//! homology of negatively graded ones, weight by weight.

use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{Gen, GradedLieAlgebra, SubalgebraSpec, Weight};
use crate::linalg::{SparseMatrix, Q};
use crate::modules::WeightModule;

/// Dimensions of (co)homology per (weight, degree), with the dimensions of
/// the underlying complex.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CohomologyTable {
    pub rows: BTreeMap<(Weight, i64), usize>,
    pub complex: BTreeMap<(Weight, i64), usize>,
    /// Weights whose complex vanishes outside the computed degree range.
    pub bounded: BTreeMap<Weight, bool>,
}

impl CohomologyTable {
    pub fn get(&self, w: &Weight, i: i64) -> usize {
        self.rows.get(&(w.clone(), i)).copied().unwrap_or(0)
    }

    pub fn nonzero(&self) -> Vec<(Weight, i64, usize)> {
        self.rows.iter().filter(|(_, d)| **d > 0).map(|((w, i), d)| (w.clone(), *i, *d)).collect()
    }

    pub fn weights(&self) -> Vec<Weight> {
        self.bounded.keys().cloned().collect()
    }

    pub fn euler_complex(&self, w: &Weight) -> i64 {
        self.complex.iter().filter(|((v, _), _)| v == w).map(|((_, i), d)| sign(*i) * *d as i64).sum()
    }

    pub fn euler_cohomology(&self, w: &Weight) -> i64 {
        self.rows.iter().filter(|((v, _), _)| v == w).map(|((_, i), d)| sign(*i) * *d as i64).sum()
    }

    /// Euler characteristics agree at every weight whose complex is bounded
    /// by the computed range.
    pub fn euler_consistent(&self) -> bool {
        self.bounded.iter().filter(|(_, b)| **b).all(|(w, _)| self.euler_complex(w) == self.euler_cohomology(w))
    }

    pub fn merge(&mut self, other: CohomologyTable) {
        self.rows.extend(other.rows);
        self.complex.extend(other.complex);
        self.bounded.extend(other.bounded);
    }
}

fn sign(i: i64) -> i64 {
    if i.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Sorted subsets of `gens` (increasing in canonical order) with
/// `|total degree| <= bound`, grouped by size.
pub fn wedge_monomials(alg: &GradedLieAlgebra, gens: &[Gen], bound: i64, max_size: usize) -> Vec<Vec<Vec<Gen>>> {
    let mut gens: Vec<Gen> = gens.iter().copied().filter(|&g| alg.degree(g).abs() <= bound).collect();
    gens.sort_unstable();
    let mut out = vec![Vec::new(); max_size + 1];
    let mut cur = Vec::new();
    fn rec(alg: &GradedLieAlgebra, gens: &[Gen], start: usize, left: i64, max: usize, cur: &mut Vec<Gen>, out: &mut Vec<Vec<Vec<Gen>>>) {
        out[cur.len()].push(cur.clone());
        if cur.len() == max {
            return;
        }
        for i in start..gens.len() {
            let d = alg.degree(gens[i]).abs();
            if d <= left {
                cur.push(gens[i]);
                rec(alg, gens, i + 1, left - d, max, cur, out);
                cur.pop();
            }
        }
    }
    rec(alg, &gens, 0, bound, max_size, &mut cur, &mut out);
    out
}

pub fn wedge_weight(alg: &GradedLieAlgebra, s: &[Gen]) -> Weight {
    s.iter().fold(Weight::zero(alg.rank()), |w, &g| &w + alg.weight(g))
}

/// Inserts `e` into the sorted list `rest`; returns the sorted list and the
/// sign of `e ∧ rest` relative to it, or `None` if `e` already occurs.
pub fn insert_sorted(rest: &[Gen], e: Gen) -> Option<(Vec<Gen>, i64)> {
    match rest.binary_search(&e) {
        Ok(_) => None,
        Err(pos) => {
            let mut v = rest.to_vec();
            v.insert(pos, e);
            Some((v, sign(pos as i64)))
        }
    }
}

/// Basis of one graded piece of a complex `⊕_S Λ_S ⊗ M_{μ(S)}`.
struct Piece {
    blocks: Vec<(Vec<Gen>, Weight, usize)>,
    lookup: HashMap<Vec<Gen>, usize>,
    dim: usize,
}

impl Piece {
    fn new(module: &WeightModule, subsets: impl Iterator<Item = (Vec<Gen>, Weight)>) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut lookup = HashMap::new();
        let mut dim = 0;
        for (s, mw) in subsets {
            let d = module.checked_dim(&mw)?;
            if d == 0 {
                continue;
            }
            lookup.insert(s.clone(), blocks.len());
            blocks.push((s, mw, dim));
            dim += d;
        }
        Ok(Piece { blocks, lookup, dim })
    }

    fn base(&self, s: &[Gen]) -> Option<(usize, &Weight)> {
        self.lookup.get(s).map(|&b| (self.blocks[b].2, &self.blocks[b].1))
    }
}

fn check_cell(alg: &GradedLieAlgebra, module: &WeightModule, w: &Weight, positive: bool) -> Result<i64> {
    let bound = -alg.degree_of(w);
    let (lo, hi) = alg.window();
    if (positive && bound > hi) || (!positive && -bound < lo) {
        return Err(Error::InsufficientWindow { weight: w.clone(), needed: bound, lo, hi });
    }
    module.checked_dim(w)?;
    Ok(bound)
}

fn max_wedge_size(alg: &GradedLieAlgebra, gens: &[Gen], bound: i64) -> usize {
    let mut degs: Vec<i64> = gens.iter().map(|&g| alg.degree(g).abs()).filter(|&d| d <= bound).collect();
    degs.sort_unstable();
    let mut total = 0;
    let mut n = 0;
    for d in degs {
        if total + d > bound {
            break;
        }
        total += d;
        n += 1;
    }
    n
}

/// `H^•(n, M)` at the weights in `cells`.
pub fn ce_cohomology_at(
    npart: &SubalgebraSpec,
    module: &WeightModule,
    cells: &[Weight],
    degrees: Option<RangeInclusive<i64>>,
) -> Result<CohomologyTable> {
    let alg = module.algebra().clone();
    let gens: Vec<Gen> = npart.members().collect();
    if gens.iter().any(|&g| alg.degree(g) <= 0) {
        return Err(Error::Precondition(format!("{} must be concentrated in positive degrees", npart.name)));
    }
    let results: Vec<Result<CohomologyTable>> = cells
        .par_iter()
        .map(|w| {
            let bound = check_cell(&alg, module, w, true)?;
            let top = max_wedge_size(&alg, &gens, bound) as i64;
            let range = degrees.clone().unwrap_or(0..=top);
            let subsets = wedge_monomials(&alg, &gens, bound, (*range.end()).clamp(0, top) as usize + 1);
            let piece = |i: i64| -> Result<Piece> {
                if i < 0 || i as usize >= subsets.len() {
                    return Piece::new(module, std::iter::empty());
                }
                Piece::new(module, subsets[i as usize].iter().map(|s| (s.clone(), &wedge_weight(&alg, s) + w)).filter(|(_, mw)| alg.degree_of(mw) <= 0))
            };
            let (lo, hi) = (*range.start(), *range.end());
            let pieces: Vec<Piece> = (lo - 1..=hi + 1).map(piece).collect::<Result<_>>()?;
            let mut ranks = Vec::new();
            for k in 0..pieces.len() - 1 {
                ranks.push(ce_differential(&alg, module, &pieces[k], &pieces[k + 1])?.rank());
            }
            let mut t = CohomologyTable::default();
            for (k, i) in (lo..=hi).enumerate() {
                let c = pieces[k + 1].dim;
                let h = c - ranks[k + 1] - ranks[k];
                if c > 0 {
                    t.complex.insert((w.clone(), i), c);
                    t.rows.insert((w.clone(), i), h);
                }
            }
            t.bounded.insert(w.clone(), pieces[0].dim == 0 && pieces[pieces.len() - 1].dim == 0);
            Ok(t)
        })
        .collect();
    let mut table = CohomologyTable::default();
    for r in results {
        table.merge(r?);
    }
    Ok(table)
}

/// Matrix of `d: C^i → C^{i+1}`,
/// `(dφ)(x_0,…,x_i) = Σ (-1)^j x_j φ(…x̂_j…) + Σ_{j<k} (-1)^{j+k} φ([x_j,x_k], …x̂_j…x̂_k…)`.
fn ce_differential(alg: &GradedLieAlgebra, module: &WeightModule, src: &Piece, tgt: &Piece) -> Result<SparseMatrix> {
    let mut d = SparseMatrix::zeros(tgt.dim, src.dim);
    for (t, tw, tbase) in &tgt.blocks {
        for j in 0..t.len() {
            let mut s = t.clone();
            let x = s.remove(j);
            let Some((sbase, sw)) = src.base(&s) else { continue };
            let a = module.action(x, sw)?;
            let sg = Q::from_integer(sign(j as i64).into());
            for (r, row) in a.rows().iter().enumerate() {
                for (c, v) in row {
                    d.add(tbase + r, sbase + c, &sg * v);
                }
            }
        }
        for j in 0..t.len() {
            for k in j + 1..t.len() {
                let mut rest = t.clone();
                rest.remove(k);
                rest.remove(j);
                for (e, c) in alg.bracket_gens(t[j], t[k])? {
                    let Some((s, sg)) = insert_sorted(&rest, *e) else { continue };
                    let Some((sbase, _)) = src.base(&s) else { continue };
                    let coef = c * Q::from_integer((sg * sign((j + k) as i64)).into());
                    for b in 0..module.dim(tw) {
                        d.add(tbase + b, sbase + b, coef.clone());
                    }
                }
            }
        }
    }
    Ok(d)
}

/// Weights `w` with `-depth <= ℓ(w) <= 0` at which `Hom(Λ n, M)` is nonzero.
pub fn cohomology_cells(npart: &SubalgebraSpec, module: &WeightModule, depth: i64) -> Vec<Weight> {
    let alg = module.algebra();
    let gens: Vec<Gen> = npart.members().collect();
    let subsets = wedge_monomials(alg, &gens, depth, 64);
    let mut cells: Vec<Weight> = Vec::new();
    for nu in module.weights() {
        for s in subsets.iter().flatten() {
            let w = nu - &wedge_weight(alg, s);
            if alg.degree_of(&w) >= -depth {
                cells.push(w);
            }
        }
    }
    cells.sort();
    cells.dedup();
    cells
}

pub fn ce_cohomology(npart: &SubalgebraSpec, module: &WeightModule, depth: i64, degrees: Option<RangeInclusive<i64>>) -> Result<CohomologyTable> {
    ce_cohomology_at(npart, module, &cohomology_cells(npart, module, depth), degrees)
}

/// `H_•(n, M)` for `n` concentrated in negative degrees, at the weights in `cells`.
pub fn ce_homology_at(
    negpart: &SubalgebraSpec,
    module: &WeightModule,
    cells: &[Weight],
    degrees: Option<RangeInclusive<i64>>,
) -> Result<CohomologyTable> {
    let alg = module.algebra().clone();
    let gens: Vec<Gen> = negpart.members().collect();
    if gens.iter().any(|&g| alg.degree(g) >= 0) {
        return Err(Error::Precondition(format!("{} must be concentrated in negative degrees", negpart.name)));
    }
    let results: Vec<Result<CohomologyTable>> = cells
        .par_iter()
        .map(|w| {
            let bound = check_cell(&alg, module, w, false)?;
            let top = max_wedge_size(&alg, &gens, bound) as i64;
            let range = degrees.clone().unwrap_or(0..=top);
            let subsets = wedge_monomials(&alg, &gens, bound, (*range.end()).clamp(0, top) as usize + 1);
            let piece = |i: i64| -> Result<Piece> {
                if i < 0 || i as usize >= subsets.len() {
                    return Piece::new(module, std::iter::empty());
                }
                Piece::new(module, subsets[i as usize].iter().map(|s| (s.clone(), w - &wedge_weight(&alg, s))).filter(|(_, mw)| alg.degree_of(mw) <= 0))
            };
            let (lo, hi) = (*range.start(), *range.end());
            let pieces: Vec<Piece> = (lo - 1..=hi + 1).map(piece).collect::<Result<_>>()?;
            let mut ranks = Vec::new();
            for k in 0..pieces.len() - 1 {
                ranks.push(ce_boundary(&alg, module, &pieces[k + 1], &pieces[k])?.rank());
            }
            let mut t = CohomologyTable::default();
            for (k, i) in (lo..=hi).enumerate() {
                let c = pieces[k + 1].dim;
                if c > 0 {
                    t.complex.insert((w.clone(), i), c);
                    t.rows.insert((w.clone(), i), c - ranks[k] - ranks[k + 1]);
                }
            }
            t.bounded.insert(w.clone(), pieces[0].dim == 0 && pieces[pieces.len() - 1].dim == 0);
            Ok(t)
        })
        .collect();
    let mut table = CohomologyTable::default();
    for r in results {
        table.merge(r?);
    }
    Ok(table)
}

/// Matrix of `∂: C_i → C_{i-1}`,
/// `∂(x_1∧…∧x_i⊗m) = Σ (-1)^j …x̂_j…⊗x_j m + Σ_{j<k} (-1)^{j+k} [x_j,x_k]∧…x̂_j…x̂_k…⊗m`.
fn ce_boundary(alg: &GradedLieAlgebra, module: &WeightModule, src: &Piece, tgt: &Piece) -> Result<SparseMatrix> {
    let mut d = SparseMatrix::zeros(tgt.dim, src.dim);
    for (s, sw, sbase) in &src.blocks {
        for j in 0..s.len() {
            let mut t = s.clone();
            let x = t.remove(j);
            let Some((tbase, _)) = tgt.base(&t) else { continue };
            let a = module.action(x, sw)?;
            let sg = Q::from_integer(sign(j as i64 + 1).into());
            for (r, row) in a.rows().iter().enumerate() {
                for (c, v) in row {
                    d.add(tbase + r, sbase + c, &sg * v);
                }
            }
        }
        for j in 0..s.len() {
            for k in j + 1..s.len() {
                let mut rest = s.clone();
                rest.remove(k);
                rest.remove(j);
                for (e, c) in alg.bracket_gens(s[j], s[k])? {
                    let Some((t, sg)) = insert_sorted(&rest, *e) else { continue };
                    let Some((tbase, _)) = tgt.base(&t) else { continue };
                    let coef = c * Q::from_integer((sg * sign((j + k) as i64)).into());
                    for b in 0..module.dim(sw) {
                        d.add(tbase + b, sbase + b, coef.clone());
                    }
                }
            }
        }
    }
    Ok(d)
}

/// Weights `w` with `-depth <= ℓ(w)` at which `Λ n ⊗ M` is nonzero.
pub fn homology_cells(negpart: &SubalgebraSpec, module: &WeightModule, depth: i64) -> Vec<Weight> {
    let alg = module.algebra();
    let gens: Vec<Gen> = negpart.members().collect();
    let subsets = wedge_monomials(alg, &gens, depth, 64);
    let mut cells: Vec<Weight> = Vec::new();
    for nu in module.weights() {
        for s in subsets.iter().flatten() {
            let w = nu + &wedge_weight(alg, s);
            if alg.degree_of(&w) >= -depth {
                cells.push(w);
            }
        }
    }
    cells.sort();
    cells.dedup();
    cells
}

pub fn ce_homology(negpart: &SubalgebraSpec, module: &WeightModule, depth: i64, degrees: Option<RangeInclusive<i64>>) -> Result<CohomologyTable> {
    ce_homology_at(negpart, module, &homology_cells(negpart, module, depth), degrees)
}
