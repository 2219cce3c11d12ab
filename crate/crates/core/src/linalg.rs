//! Exact dense linear algebra over a [`Field`].
//!
//! Plain Gaussian elimination with the first nonzero pivot: over an exact
//! field there is no numerical pivoting to do, and choosing the first pivot
//! keeps every result deterministic.

use rand::RngCore;

use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    data: Vec<K::Elem>,
}

impl<K: Field> Mat<K> {
    pub fn zeros(field: K, rows: usize, cols: usize) -> Self {
        Mat {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: K, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: K, rows: Vec<Vec<K::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat {
            field,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn field(&self) -> K {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<K::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let k = self.field;
        let mut out = Self::zeros(k, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if k.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let mut acc = out.get(i, j).clone();
                    k.mul_add(&mut acc, a, other.get(l, j));
                    out.set(i, j, acc);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[K::Elem]) -> Vec<K::Elem> {
        assert_eq!(self.cols, v.len());
        let k = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = k.zero();
                for j in 0..self.cols {
                    k.mul_add(&mut acc, self.get(i, j), &v[j]);
                }
                acc
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let k = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !k.is_zero(self.get(i, c))) else {
                continue;
            };
            // swap rows r, pr
            if pr != r {
                for j in 0..self.cols {
                    self.data
                        .swap(r * self.cols + j, pr * self.cols + j);
                }
            }
            let inv = k.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = k.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || k.is_zero(self.get(i, c)) {
                    continue;
                }
                let factor = self.get(i, c).clone();
                for j in c..self.cols {
                    let v = k.sub(self.get(i, j), &k.mul(&factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right null space in the canonical rref parametrization
    /// (one vector per free column, that free coordinate set to 1).
    pub fn nullspace(&self) -> Vec<Vec<K::Elem>> {
        let k = self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut vec = vec![k.zero(); self.cols];
            vec[free] = k.one();
            for (r, &c) in pivots.iter().enumerate() {
                if c < free {
                    vec[c] = k.neg(m.get(r, free));
                }
            }
            basis.push(vec);
        }
        basis
    }

    /// One solution of `self * x = rhs`, or `None` when inconsistent.
    pub fn solve(&self, rhs: &[K::Elem]) -> Option<Vec<K::Elem>> {
        assert_eq!(rhs.len(), self.rows);
        let k = self.field;
        let mut aug = Self::zeros(k, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, rhs[i].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // a pivot in the augmented column
        }
        let mut x = vec![k.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let k = self.field;
        let n = self.rows;
        let mut aug = Self::zeros(k, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, k.one());
        }
        let pivots = aug.rref();
        if pivots.len() < n {
            return None;
        }
        let mut inv = Self::zeros(k, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn random_invertible(field: K, n: usize, rng: &mut dyn RngCore, height: u32) -> Self {
        loop {
            let mut m = Self::zeros(field, n, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, field.random_elem(rng, height));
                }
            }
            if m.rank() == n {
                return m;
            }
        }
    }
}

/// Rank of the span of a family of vectors.
pub fn rank_of_span<K: Field>(field: K, vectors: &[Vec<K::Elem>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Mat::from_rows(field, vectors.to_vec()).rank()
}

/// Is `v` in the span of `vectors`?
pub fn in_span<K: Field>(field: K, vectors: &[Vec<K::Elem>], v: &[K::Elem]) -> bool {
    if v.iter().all(|c| field.is_zero(c)) {
        return true;
    }
    if vectors.is_empty() {
        return false;
    }
    let r = rank_of_span(field, vectors);
    let mut all = vectors.to_vec();
    all.push(v.to_vec());
    rank_of_span(field, &all) == r
}

/// Do two families of vectors span the same subspace?
pub fn same_span<K: Field>(field: K, a: &[Vec<K::Elem>], b: &[Vec<K::Elem>]) -> bool {
    let ra = rank_of_span(field, a);
    let rb = rank_of_span(field, b);
    if ra != rb {
        return false;
    }
    let mut all = a.to_vec();
    all.extend(b.iter().cloned());
    rank_of_span(field, &all) == ra
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn mat_q(rows: &[&[i64]]) -> Mat<Rationals> {
        let q = Rationals;
        Mat::from_rows(
            q,
            rows.iter()
                .map(|r| r.iter().map(|&v| q.from_i64(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_rref() {
        let m = mat_q(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(mat_q(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(Mat::identity(Rationals, 4).rank(), 4);
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let m = mat_q(&[&[1, 2, 3, 4], &[0, 1, 1, 1]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        let q = Rationals;
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(|c| q.is_zero(c)));
        }
        assert_eq!(rank_of_span(q, &ns), 2);
    }

    #[test]
    fn solve_and_inverse() {
        let m = mat_q(&[&[2, 1], &[1, 1]]);
        let q = Rationals;
        let x = m.solve(&[q.from_i64(3), q.from_i64(2)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![q.from_i64(3), q.from_i64(2)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), Mat::identity(q, 2));
        // inconsistent system
        let s = mat_q(&[&[1, 1], &[1, 1]]);
        assert!(s.solve(&[q.from_i64(0), q.from_i64(1)]).is_none());
    }

    #[test]
    fn span_utilities() {
        let f5 = PrimeField::new(5).unwrap();
        let a = vec![vec![1u64, 0, 2], vec![0, 1, 3]];
        let b = vec![vec![1, 1, 0], vec![1, 4, 4]];
        assert!(same_span(f5, &a, &b));
        assert!(in_span(f5, &a, &[2, 3, 3])); // 2*(1,0,2)+3*(0,1,3)=(2,3,13)=(2,3,3)
        assert!(!in_span(f5, &a, &[0, 0, 1]));
    }
}
