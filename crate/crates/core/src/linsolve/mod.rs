//! Sparse exact linear algebra.
//!
//! Matrices are generic over [`Field`], so the same elimination code runs over
//! exact `Q(s)` coefficients, over `Q` after specialization, and over `F_p`.

mod eliminate;
mod market;

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::Rng;

use crate::coeff::{random_fp, CoeffError, Field, Fp, FromScalar, SamplePoint, Scalar};

pub use eliminate::{kernel_basis, lead_pivots, rank, LeadEchelon};
pub use market::{read_matrix_market, MarketEntry};

/// Row-major sparse matrix. Rows are sorted by column and hold no zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<F = Scalar> {
    ncols: usize,
    rows: Vec<Vec<(usize, F)>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn from_dense(rows: &[Vec<F>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::new(0, ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged dense matrix");
            m.push_row(r.iter().cloned().enumerate());
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::new(0, n);
        for i in 0..n {
            m.push_row([(i, F::one())]);
        }
        m
    }

    /// Append a row given as `(col, value)` pairs in any order; repeated
    /// columns are summed and zeros dropped.
    pub fn push_row<I: IntoIterator<Item = (usize, F)>>(&mut self, entries: I) {
        let row = normalize_row(entries, self.ncols);
        self.rows.push(row);
    }

    /// Append a row that is already sorted and zero-free.
    pub fn push_sorted_row(&mut self, row: Vec<(usize, F)>) {
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(row.iter().all(|(c, v)| *c < self.ncols && !v.is_zero()));
        self.rows.push(row);
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        assert!(c < self.ncols, "column {c} out of range");
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(i) if v.is_zero() => {
                row.remove(i);
            }
            Ok(i) => row[i].1 = v,
            Err(_) if v.is_zero() => {}
            Err(i) => row.insert(i, (c, v)),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        let row = &self.rows[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(i) => row[i].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, F)] {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[Vec<(usize, F)>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<(usize, F)>> {
        self.rows
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.ncols);
        self.rows
            .iter()
            .map(|row| {
                let mut acc = F::zero();
                for (c, a) in row {
                    acc.add_mul_assign(a, &v[*c]);
                }
                acc
            })
            .collect()
    }

    pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<SparseMatrix<G>, E> {
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut out = Vec::with_capacity(row.len());
            for (c, v) in row {
                let g = f(v)?;
                if !g.is_zero() {
                    out.push((*c, g));
                }
            }
            rows.push(out);
        }
        Ok(SparseMatrix { ncols: self.ncols, rows })
    }
}

impl SparseMatrix<Scalar> {
    /// Image under a coefficient specialization.
    pub fn specialize<G: FromScalar>(&self, ctx: &G::Context) -> Result<SparseMatrix<G>, CoeffError> {
        self.try_map(|x| G::from_scalar(x, ctx))
    }
}

pub(crate) fn normalize_row<F: Field, I: IntoIterator<Item = (usize, F)>>(entries: I, ncols: usize) -> Vec<(usize, F)> {
    let mut acc: BTreeMap<usize, F> = BTreeMap::new();
    for (c, v) in entries {
        assert!(c < ncols, "column {c} out of range ({ncols} columns)");
        acc.entry(c).and_modify(|x| x.add_assign(&v)).or_insert(v);
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Rank over `Q(s)` by exact elimination.
pub fn rank_exact(m: &SparseMatrix<Scalar>) -> usize {
    rank(m)
}

/// Rank of the specialization at a sample point.
pub fn rank_at(m: &SparseMatrix<Scalar>, p: &SamplePoint) -> Result<usize, CoeffError> {
    rank_at_value(m, p.value())
}

/// Rank of the specialization `s -> s0` for any rational `s0`.
pub fn rank_at_value(m: &SparseMatrix<Scalar>, s0: &BigRational) -> Result<usize, CoeffError> {
    Ok(rank(&m.specialize::<BigRational>(s0)?))
}

/// Rank of the specialization `s -> s0` in `F_p`.
pub fn rank_mod(m: &SparseMatrix<Scalar>, s0: Fp) -> Result<usize, CoeffError> {
    Ok(rank(&m.specialize::<Fp>(&s0)?))
}

/// Outcome of a sampled rank computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledRank {
    pub rank: usize,
    pub per_sample: Vec<usize>,
    /// True when the sampled rank was confirmed by exact elimination or is
    /// already maximal, so it equals the exact rank.
    pub exact: bool,
}

/// The strategy ladder: modular ranks at `samples` random points, then exact
/// elimination only when the best sample is rank-deficient and `confirm` is set.
///
/// Points where an entry has a pole are skipped and redrawn.
pub fn sampled_rank<R: Rng>(m: &SparseMatrix<Scalar>, samples: usize, confirm: bool, rng: &mut R) -> SampledRank {
    let mut per_sample = Vec::with_capacity(samples);
    let mut attempts = 0;
    while per_sample.len() < samples.max(1) {
        attempts += 1;
        assert!(attempts < 100 * samples.max(1), "no pole-free sample point found");
        if let Ok(r) = rank_mod(m, random_fp(rng)) {
            per_sample.push(r);
        }
    }
    let best = per_sample.iter().copied().max().unwrap_or(0);
    let full = best == m.nrows().min(m.ncols());
    if full || !confirm {
        return SampledRank { rank: best, per_sample, exact: full };
    }
    let r = rank_exact(m);
    SampledRank { rank: r, per_sample, exact: true }
}
