use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use rayon::prelude::*;

use super::SparseMatrix;
use crate::coeff::Field;

type Row<F> = Vec<(usize, F)>;

/// Row groups at least this large are updated in parallel.
const PAR_THRESHOLD: usize = 32;

/// `dst - f * src` for sorted sparse rows.
pub(crate) fn sub_scaled<F: Field>(dst: &[(usize, F)], f: &F, src: &[(usize, F)]) -> Row<F> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        if j == src.len() || (i < dst.len() && dst[i].0 < src[j].0) {
            out.push(dst[i].clone());
            i += 1;
        } else if i == dst.len() || src[j].0 < dst[i].0 {
            out.push((src[j].0, f.mul(&src[j].1).neg()));
            j += 1;
        } else {
            let mut v = dst[i].1.clone();
            v.add_mul_assign(&f.neg(), &src[j].1);
            if !v.is_zero() {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn entry<F: Field>(row: &[(usize, F)], c: usize) -> Option<&F> {
    row.binary_search_by_key(&c, |e| e.0).ok().map(|i| &row[i].1)
}

fn map_maybe_par<T: Send, U: Send>(items: Vec<T>, f: impl Fn(T) -> U + Sync + Send) -> Vec<U> {
    if items.len() >= PAR_THRESHOLD {
        items.into_par_iter().map(f).collect()
    } else {
        items.into_iter().map(f).collect()
    }
}

/// Rank by Gaussian elimination with Markowitz pivoting: the sparsest column
/// first, then the shortest row in it, ties broken by coefficient complexity.
pub fn rank<F: Field>(m: &SparseMatrix<F>) -> usize {
    let ncols = m.ncols();
    let mut rows: Vec<Option<Row<F>>> = m.rows().iter().map(|r| if r.is_empty() { None } else { Some(r.clone()) }).collect();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r.iter().flatten() {
            col_rows[*c].push(i);
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..ncols).filter(|&c| !col_rows[c].is_empty()).map(|c| Reverse((col_rows[c].len(), c))).collect();
    let mut rank = 0;
    while let Some(Reverse((key, c))) = heap.pop() {
        let mut live: Vec<usize> = col_rows[c].iter().copied().filter(|&i| rows[i].as_deref().is_some_and(|r| entry(r, c).is_some())).collect();
        live.sort_unstable();
        live.dedup();
        if live.is_empty() {
            col_rows[c].clear();
            continue;
        }
        if live.len() > key {
            heap.push(Reverse((live.len(), c)));
            col_rows[c] = live;
            continue;
        }
        col_rows[c].clear();
        let &p = live
            .iter()
            .min_by_key(|&&i| {
                let r = rows[i].as_deref().unwrap();
                (r.len(), entry(r, c).unwrap().complexity())
            })
            .unwrap();
        let prow = rows[p].take().unwrap();
        let pinv = entry(&prow, c).unwrap().inv().expect("stored zero");
        rank += 1;
        let others: Vec<(usize, Row<F>)> = live.iter().filter(|&&i| i != p).map(|&i| (i, rows[i].take().unwrap())).collect();
        let updated = map_maybe_par(others, |(i, old)| {
            let f = entry(&old, c).unwrap().mul(&pinv);
            let new = sub_scaled(&old, &f, &prow);
            let fresh: Vec<usize> = new.iter().map(|e| e.0).filter(|&k| entry(&old, k).is_none()).collect();
            (i, new, fresh)
        });
        for (i, new, fresh) in updated {
            for k in fresh {
                col_rows[k].push(i);
                heap.push(Reverse((col_rows[k].len(), k)));
            }
            if !new.is_empty() {
                rows[i] = Some(new);
            }
        }
    }
    rank
}

/// Incremental echelon basis keyed by leading (smallest) column.
///
/// The set of leading columns depends only on the row span, which is what
/// makes it usable for filtered quotients: order columns so that the
/// filtration is a prefix-closed condition on the leading column.
#[derive(Clone, Debug)]
pub struct LeadEchelon<F> {
    pivots: BTreeMap<usize, Row<F>>,
}

impl<F: Field> Default for LeadEchelon<F> {
    fn default() -> Self {
        LeadEchelon { pivots: BTreeMap::new() }
    }
}

impl<F: Field> LeadEchelon<F> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduce `row` against the basis; if something survives it becomes a new
    /// basis row and its leading column is returned.
    pub fn insert(&mut self, mut row: Row<F>) -> Option<usize> {
        loop {
            let (c, a) = row.first()?.clone();
            match self.pivots.get(&c) {
                Some(p) => row = sub_scaled(&row, &a, p),
                None => {
                    let inv = a.inv().expect("stored zero");
                    for e in row.iter_mut() {
                        e.1 = e.1.mul(&inv);
                    }
                    self.pivots.insert(c, row);
                    return Some(c);
                }
            }
        }
    }

    /// Lead-reduce `row`; zero means it lies in the span.
    pub fn reduce(&self, mut row: Row<F>) -> Row<F> {
        let mut out = Vec::new();
        while let Some((c, a)) = row.first().cloned() {
            match self.pivots.get(&c) {
                Some(p) => row = sub_scaled(&row, &a, p),
                None => {
                    out.push(row.remove(0));
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn contains_pivot(&self, c: usize) -> bool {
        self.pivots.contains_key(&c)
    }

    /// Fully reduced row echelon form: pivot column to row, where each row has
    /// a 1 at its pivot and zeros at every other pivot column.
    pub fn into_reduced(self) -> BTreeMap<usize, Row<F>> {
        let mut done: BTreeMap<usize, Row<F>> = BTreeMap::new();
        for (c, mut row) in self.pivots.into_iter().rev() {
            // Eliminate later pivots from the tail; they are already reduced.
            let mut k = 1;
            while k < row.len() {
                let col = row[k].0;
                if let Some(p) = done.get(&col) {
                    let f = row[k].1.clone();
                    row = sub_scaled(&row, &f, p);
                } else {
                    k += 1;
                }
            }
            done.insert(c, row);
        }
        done
    }
}

/// Leading columns of an echelon basis of the row span, in increasing order.
///
/// Rows are processed column by column; within a column the shortest row is
/// the pivot and is discarded once its column is cleared, since no later row
/// can have an earlier lead.
pub fn lead_pivots<F: Field>(rows: impl IntoIterator<Item = Row<F>>) -> Vec<usize> {
    let mut buckets: BTreeMap<usize, Vec<Row<F>>> = BTreeMap::new();
    for r in rows {
        if let Some(&(c, _)) = r.first() {
            buckets.entry(c).or_default().push(r);
        }
    }
    let mut pivots = Vec::new();
    while let Some((c, mut group)) = buckets.pop_first() {
        pivots.push(c);
        let pi = (0..group.len()).min_by_key(|&i| (group[i].len(), group[i][0].1.complexity())).unwrap();
        let p = group.swap_remove(pi);
        let inv = p[0].1.inv().expect("stored zero");
        let reduced = map_maybe_par(group, |r| {
            let f = r[0].1.mul(&inv);
            sub_scaled(&r, &f, &p)
        });
        for r in reduced {
            if let Some(&(c2, _)) = r.first() {
                buckets.entry(c2).or_default().push(r);
            }
        }
    }
    pivots
}

/// Basis of the right kernel `{v : m v = 0}`, one vector per non-pivot column.
pub fn kernel_basis<F: Field>(m: &SparseMatrix<F>) -> Vec<Vec<F>> {
    let mut ech = LeadEchelon::new();
    for r in m.rows() {
        ech.insert(r.clone());
    }
    let reduced = ech.into_reduced();
    let mut basis = Vec::new();
    for free in (0..m.ncols()).filter(|c| !reduced.contains_key(c)) {
        let mut v = vec![F::zero(); m.ncols()];
        v[free] = F::one();
        for (&pc, row) in &reduced {
            if let Some(a) = entry(row, free) {
                v[pc] = a.neg();
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Fp, Scalar};
    use proptest::prelude::*;

    fn dense_rank(rows: &[Vec<i64>]) -> usize {
        // Plain Gaussian elimination over F_p, as an oracle.
        let mut a: Vec<Vec<Fp>> = rows.iter().map(|r| r.iter().map(|&x| Fp::from_i64(x)).collect()).collect();
        let ncols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..ncols {
            let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(rank, p);
            let inv = a[rank][c].inv().unwrap();
            let pivot = a[rank].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != rank && !row[c].is_zero() {
                    let f = row[c].mul(&inv);
                    for (x, p) in row.iter_mut().zip(&pivot) {
                        *x = x.sub(&p.mul(&f));
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn to_sparse(rows: &[Vec<i64>]) -> SparseMatrix<Fp> {
        SparseMatrix::from_dense(&rows.iter().map(|r| r.iter().map(|&x| Fp::from_i64(x)).collect()).collect::<Vec<_>>())
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..9, 1usize..9).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0i64), 1 => -3i64..4], c), r))
    }

    proptest! {
        #[test]
        fn markowitz_rank_matches_dense(rows in arb_matrix()) {
            prop_assert_eq!(rank(&to_sparse(&rows)), dense_rank(&rows));
        }

        #[test]
        fn lead_pivots_count_is_rank(rows in arb_matrix()) {
            let m = to_sparse(&rows);
            prop_assert_eq!(lead_pivots(m.rows().to_vec()).len(), dense_rank(&rows));
        }

        #[test]
        fn lead_pivots_match_incremental(rows in arb_matrix()) {
            let m = to_sparse(&rows);
            let mut ech = LeadEchelon::new();
            for r in m.rows() {
                ech.insert(r.clone());
            }
            prop_assert_eq!(lead_pivots(m.rows().to_vec()), ech.pivot_columns().collect::<Vec<_>>());
        }

        #[test]
        fn kernel_vectors_are_annihilated(rows in arb_matrix()) {
            let m = to_sparse(&rows);
            let ker = kernel_basis(&m);
            prop_assert_eq!(ker.len(), m.ncols() - dense_rank(&rows));
            for v in &ker {
                prop_assert!(m.mul_vec(v).iter().all(Field::is_zero));
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let z = SparseMatrix::<Scalar>::new(2, 4);
        assert_eq!(kernel_basis(&z).len(), 4);
        assert!(kernel_basis(&SparseMatrix::<Scalar>::identity(3)).is_empty());
        let q: Scalar = "q".parse().unwrap();
        let m = SparseMatrix::from_dense(&[vec![Scalar::one(), q.clone()]]);
        assert_eq!(kernel_basis(&m), vec![vec![q.neg(), Scalar::one()]]);
    }

    #[test]
    fn reduce_detects_span_membership() {
        let m = to_sparse(&[vec![1, 2, 0], vec![0, 1, 1]]);
        let mut ech = LeadEchelon::new();
        for r in m.rows() {
            ech.insert(r.clone());
        }
        let inside = to_sparse(&[vec![2, 5, 1]]).rows()[0].clone();
        let outside = to_sparse(&[vec![0, 0, 1]]).rows()[0].clone();
        assert!(ech.reduce(inside).is_empty());
        assert!(!ech.reduce(outside).is_empty());
    }
}
