//! Exact sparse linear algebra over the rationals.
//!
//! Matrices are stored row-major with one ordered map per row. Ranks of
//! the large boundary matrices are computed by fraction-free elimination on
//! primitive integer rows; kernels, spans and quotient coordinates go
//! through an incremental rational echelon form.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

/// Sparse vector: column index to nonzero value.
pub type SparseVec = BTreeMap<usize, Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Adds `c * src` into `dst`, dropping entries that cancel.
pub fn axpy(dst: &mut SparseVec, c: &Q, src: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (&k, v) in src {
        add_entry(dst, k, c * v);
    }
}

pub fn add_entry(dst: &mut SparseVec, k: usize, v: Q) {
    if v.is_zero() {
        return;
    }
    match dst.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(v);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += v;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub fn scale(v: &SparseVec, c: &Q) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(&k, x)| (k, x * c)).collect()
}

#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{}", self.nrows, self.ncols)?;
        for (i, row) in self.rows.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            write!(f, "  row {i}:")?;
            for (j, v) in row {
                write!(f, " ({j}: {v})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, rows: vec![SparseVec::new(); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].insert(i, Q::one());
        }
        m
    }

    pub fn scalar(n: usize, c: &Q) -> Self {
        let mut m = Self::zeros(n, n);
        if !c.is_zero() {
            for i in 0..n {
                m.rows[i].insert(i, c.clone());
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given sparse vectors.
    pub fn from_columns(nrows: usize, cols: &[SparseVec]) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (&i, v) in col {
                m.add(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_rows(ncols: usize, rows: Vec<SparseVec>) -> Self {
        SparseMatrix { nrows: rows.len(), ncols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn add(&mut self, i: usize, j: usize, v: Q) {
        assert!(i < self.nrows && j < self.ncols, "index ({i},{j}) out of {}x{}", self.nrows, self.ncols);
        add_entry(&mut self.rows[i], j, v);
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.rows[i].get(&j).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, v) in row {
                t.rows[j].insert(i, v.clone());
            }
        }
        t
    }

    /// Column `j` as a sparse vector indexed by row.
    pub fn column(&self, j: usize) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(v) = row.get(&j) {
                out.insert(i, v.clone());
            }
        }
        out
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        let mut cols = vec![SparseVec::new(); self.ncols];
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, v) in row {
                cols[j].insert(i, v.clone());
            }
        }
        cols
    }

    /// Matrix-vector product `A x`.
    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = Q::zero();
            for (j, v) in row {
                if let Some(xj) = x.get(j) {
                    acc += v * xj;
                }
            }
            if !acc.is_zero() {
                out.insert(i, acc);
            }
        }
        out
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let mut out = SparseMatrix::zeros(self.nrows, other.ncols);
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = SparseVec::new();
            for (k, v) in row {
                axpy(&mut acc, v, &other.rows[*k]);
            }
            out.rows[i] = acc;
        }
        out
    }

    pub fn add_matrix(&mut self, other: &SparseMatrix, c: &Q) {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        for (dst, src) in self.rows.iter_mut().zip(&other.rows) {
            axpy(dst, c, src);
        }
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = self.clone();
        out.add_matrix(other, &-Q::one());
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.ncols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        SparseMatrix { nrows: self.nrows + other.nrows, ncols: self.ncols, rows }
    }

    /// Rank by fraction-free elimination over the integers.
    pub fn rank(&self) -> usize {
        fraction_free_rank(&self.rows)
    }

    /// Basis of the null space `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut ech = Echelon::new();
        for row in &self.rows {
            ech.insert(row.clone(), SparseVec::new());
        }
        ech.null_space(self.ncols)
    }
}

/// Clears denominators and divides by the content, giving a primitive
/// integer row with positive leading entry.
fn primitive_row(row: &SparseVec) -> BTreeMap<usize, BigInt> {
    let mut lcm = BigInt::one();
    for v in row.values() {
        lcm = lcm.lcm(v.denom());
    }
    let mut out: BTreeMap<usize, BigInt> =
        row.iter().map(|(&k, v)| (k, v.numer() * (&lcm / v.denom()))).collect();
    normalize_int_row(&mut out);
    out
}

fn normalize_int_row(row: &mut BTreeMap<usize, BigInt>) {
    let mut g = BigInt::zero();
    for v in row.values() {
        g = g.gcd(v);
    }
    if g.is_zero() {
        return;
    }
    if row.values().next().map(|v| v.is_negative()).unwrap_or(false) {
        g = -g;
    }
    if !g.is_one() {
        for v in row.values_mut() {
            *v = &*v / &g;
        }
    }
}

fn fraction_free_rank(rows: &[SparseVec]) -> usize {
    let mut work: Vec<BTreeMap<usize, BigInt>> =
        rows.iter().filter(|r| !r.is_empty()).map(primitive_row).collect();
    let mut rank = 0;
    while !work.is_empty() {
        // Pivot column: smallest leading column; pivot row: smallest magnitude there.
        let col = work.iter().filter_map(|r| r.keys().next().copied()).min().unwrap();
        let mut best: Option<usize> = None;
        for (i, r) in work.iter().enumerate() {
            if r.keys().next() == Some(&col) {
                let better = match best {
                    None => true,
                    Some(b) => {
                        let (a, c) = (r[&col].abs(), work[b][&col].abs());
                        a < c || (a == c && r.len() < work[b].len())
                    }
                };
                if better {
                    best = Some(i);
                }
            }
        }
        let pivot = work.swap_remove(best.unwrap());
        let p = pivot[&col].clone();
        rank += 1;
        let mut next = Vec::with_capacity(work.len());
        for mut r in work.into_iter() {
            if let Some(c) = r.get(&col).cloned() {
                // r <- (p/g) r - (c/g) pivot
                let g = p.gcd(&c);
                let (pm, cm) = (&p / &g, &c / &g);
                for v in r.values_mut() {
                    *v *= &pm;
                }
                for (k, v) in &pivot {
                    let e = r.entry(*k).or_insert_with(BigInt::zero);
                    *e -= &cm * v;
                }
                r.retain(|_, v| !v.is_zero());
                normalize_int_row(&mut r);
            }
            if !r.is_empty() {
                next.push(r);
            }
        }
        work = next;
    }
    rank
}

/// Incremental echelon basis of a subspace. Every stored row carries a tag
/// vector recording how it is expressed in caller-chosen coordinates, which
/// gives quotient coordinates when the spanning rows of a subspace to be
/// factored out are inserted with empty tags.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, usize>,
    rows: Vec<(SparseVec, SparseVec)>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows. Returns the remainder and the
    /// accumulated tag of the subtracted rows, so that
    /// `v = remainder + sum(coeff * row)` and the tag is `sum(coeff * tag)`.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut v = v.clone();
        let mut tag = SparseVec::new();
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).find(|(k, _)| self.pivots.contains_key(k)).map(|(k, c)| (*k, c.clone()));
            let Some((col, c)) = next else { break };
            let (row, rtag) = &self.rows[self.pivots[&col]];
            axpy(&mut v, &-c.clone(), row);
            axpy(&mut tag, &c, rtag);
            cursor = col + 1;
        }
        (v, tag)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Inserts `v` with tag `tag`; returns false if `v` was already in the span.
    pub fn insert(&mut self, v: SparseVec, tag: SparseVec) -> bool {
        let (mut rem, sub) = self.reduce(&v);
        if rem.is_empty() {
            return false;
        }
        let mut tag = tag;
        axpy(&mut tag, &-Q::one(), &sub);
        let (&col, lead) = rem.iter().next().unwrap();
        let inv = lead.recip();
        rem = scale(&rem, &inv);
        tag = scale(&tag, &inv);
        self.pivots.insert(col, self.rows.len());
        self.rows.push((rem, tag));
        true
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Null space of the matrix whose rows were inserted, for `ncols` columns.
    pub fn null_space(&self, ncols: usize) -> Vec<SparseVec> {
        // Bring to reduced row echelon form.
        let mut reduced: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&col, &idx) in self.pivots.iter().rev() {
            let mut row = self.rows[idx].0.clone();
            let targets: Vec<(usize, Q)> = row
                .iter()
                .filter(|(k, _)| **k != col && reduced.contains_key(k))
                .map(|(k, v)| (*k, v.clone()))
                .collect();
            for (k, c) in targets {
                axpy(&mut row, &-c, &reduced[&k]);
            }
            reduced.insert(col, row);
        }
        let mut basis = Vec::new();
        for free in 0..ncols {
            if reduced.contains_key(&free) {
                continue;
            }
            let mut v = SparseVec::new();
            v.insert(free, Q::one());
            for (&col, row) in &reduced {
                if let Some(c) = row.get(&free) {
                    v.insert(col, -c.clone());
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Coordinates on a quotient `I / (I ∩ B)` for subspaces `I`, `B` of a
/// common ambient space.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    ech: Echelon,
    reps: Vec<SparseVec>,
}

impl QuotientBasis {
    /// `b` spans the subspace factored out; `candidates` span `I`.
    pub fn new(b: &[SparseVec], candidates: &[SparseVec]) -> Self {
        let mut ech = Echelon::new();
        for v in b {
            ech.insert(v.clone(), SparseVec::new());
        }
        let mut reps = Vec::new();
        for v in candidates {
            let mut tag = SparseVec::new();
            tag.insert(reps.len(), Q::one());
            if ech.insert(v.clone(), tag) {
                reps.push(v.clone());
            }
        }
        QuotientBasis { ech, reps }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Chosen representatives of the quotient basis.
    pub fn reps(&self) -> &[SparseVec] {
        &self.reps
    }

    /// Coordinates of `v` modulo `B`, or `None` if `v` is not in `I + B`.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        let (rem, tag) = self.ech.reduce(v);
        rem.is_empty().then_some(tag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(k, x)| (k, q(x))).filter(|(_, x)| !x.is_zero()).collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        let m = SparseMatrix::from_rows(3, vec![v(&[(0, 1), (1, 2)]), v(&[(0, 2), (1, 4)]), v(&[(2, 3)])]);
        assert_eq!(m.rank(), 2);
        assert_eq!(SparseMatrix::zeros(4, 5).rank(), 0);
        assert_eq!(SparseMatrix::identity(6).rank(), 6);
        let mut h = SparseMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                h.add(i, j, qr(1, (i + j + 1) as i64));
            }
        }
        assert_eq!(h.rank(), 3);
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = SparseMatrix::from_rows(4, vec![v(&[(0, 1), (1, -1)]), v(&[(1, 2), (3, 1)])]);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for x in &k {
            assert!(m.apply(x).is_empty());
        }
    }

    #[test]
    fn quotient_coordinates() {
        // I = span(e0, e1), B = span(e0 + e2)
        let qb = QuotientBasis::new(&[v(&[(0, 1), (2, 1)])], &[v(&[(0, 1)]), v(&[(1, 1)]), v(&[(0, 1), (1, 1)])]);
        assert_eq!(qb.dim(), 2);
        let c = qb.coordinates(&v(&[(1, 3), (2, -1)])).unwrap();
        // e1*3 - e2 = 3 e1 + e0 - (e0 + e2)
        assert_eq!(c, v(&[(0, 1), (1, 3)]));
        assert!(qb.coordinates(&v(&[(3, 1)])).is_none());
    }

    #[test]
    fn fraction_free_matches_rational_echelon() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let (r, c) = (rng.gen_range(1..8), rng.gen_range(1..8));
            let rows: Vec<SparseVec> = (0..r)
                .map(|_| {
                    let mut row = SparseVec::new();
                    for j in 0..c {
                        if rng.gen_bool(0.5) {
                            add_entry(&mut row, j, qr(rng.gen_range(-3..4), rng.gen_range(1..4)));
                        }
                    }
                    row
                })
                .collect();
            let mut ech = Echelon::new();
            for row in &rows {
                ech.insert(row.clone(), SparseVec::new());
            }
            let m = SparseMatrix::from_rows(c, rows);
            assert_eq!(m.rank(), ech.rank());
            assert_eq!(m.kernel().len(), c - ech.rank());
        }
    }
}
