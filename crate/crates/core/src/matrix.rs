//! Exact dense matrices and a sparse row-echelon engine.
//!
//! Subspaces are always given by a matrix whose columns form a basis.

use std::fmt;

use crate::field::{Field, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>, // row-major
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Matrix {
        assert_eq!(data.len(), rows * cols);
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_i64(field: Field, rows: usize, cols: usize, vals: &[i64]) -> Matrix {
        assert_eq!(vals.len(), rows * cols);
        Matrix::from_rows(
            field,
            rows,
            cols,
            vals.iter().map(|&v| field.from_i64(v)).collect(),
        )
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = v.clone();
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "shape mismatch {:?} * {:?}",
            self.shape(),
            rhs.shape()
        );
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        let t = a * b;
                        out[(r, c)] += &t;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![self.field.zero(); self.rows];
        for (r, o) in out.iter_mut().enumerate() {
            for (k, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let a = &self[(r, k)];
                if !a.is_zero() {
                    *o += &(a * x);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape());
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Matrix::from_rows(self.field, self.rows, self.cols, data)
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape());
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Matrix::from_rows(self.field, self.rows, self.cols, data)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * s).collect();
        Matrix::from_rows(self.field, self.rows, self.cols, data)
    }

    /// `[self | rhs]`
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..rhs.cols {
                out[(r, self.cols + c)] = rhs[(r, c)].clone();
            }
        }
        out
    }

    /// `[self ; rhs]`
    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols);
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Matrix::from_rows(self.field, self.rows + rhs.rows, self.cols, data)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out[(r, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend(self.row(r).iter().cloned());
        }
        Matrix::from_rows(self.field, rows.len(), self.cols, data)
    }

    pub fn block(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out[(r, c)] = self[(r0 + r, c0 + c)].clone();
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self[(r0 + r, c0 + c)] = b[(r, c)].clone();
            }
        }
    }

    fn sparse_rows(&self) -> Vec<SparseRow> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect()
    }

    pub fn echelon(&self) -> Echelon {
        Echelon::from_rows(self.field, self.cols, self.sparse_rows())
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of the right null space, as columns.
    pub fn kernel(&self) -> Matrix {
        let basis = self.echelon().nullspace();
        Matrix::from_columns(self.field, self.cols, &basis)
    }

    /// A basis of the column space (subset of the columns, as columns).
    pub fn column_space(&self) -> Matrix {
        let pivots = self.transpose_free_pivots();
        self.select_columns(&pivots)
    }

    /// Indices of columns forming a basis of the column space (greedy left-to-right).
    pub fn independent_columns(&self) -> Vec<usize> {
        self.transpose_free_pivots()
    }

    fn transpose_free_pivots(&self) -> Vec<usize> {
        // pivot columns of the row echelon form are the greedy independent columns
        self.echelon().pivots()
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut rows = self.sparse_rows();
        for (row, v) in rows.iter_mut().zip(b) {
            if !v.is_zero() {
                row.push((self.cols, v.clone()));
            }
        }
        let ech = Echelon::from_rows(self.field, self.cols + 1, rows);
        if ech.pivots().contains(&self.cols) {
            return None;
        }
        Some(ech.particular_solution(self.cols))
    }

    /// Solves `self * X = B` column by column.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(b.rows, self.rows);
        let mut cols = Vec::with_capacity(b.cols);
        for c in 0..b.cols {
            cols.push(self.solve(&b.column(c))?);
        }
        Some(Matrix::from_columns(self.field, self.cols, &cols))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        if self.rows == 0 {
            return Some(self.clone());
        }
        let inv = self.solve_matrix(&Matrix::identity(self.field, self.rows))?;
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn pow(&self, e: usize) -> Matrix {
        assert!(self.is_square());
        let mut out = Matrix::identity(self.field, self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

pub type SparseRow = Vec<(usize, Scalar)>;

/// Reduced row echelon form kept in sparse rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    ncols: usize,
    /// (pivot column, row with leading 1 at that column), sorted by pivot column
    rows: Vec<(usize, SparseRow)>,
}

fn axpy(target: &SparseRow, coeff: &Scalar, src: &SparseRow) -> SparseRow {
    // target - coeff * src
    let mut out = Vec::with_capacity(target.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < src.len() {
        let ti = target.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let sj = src.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ti < sj {
            out.push(target[i].clone());
            i += 1;
        } else if sj < ti {
            out.push((sj, -(coeff * &src[j].1)));
            j += 1;
        } else {
            let v = &target[i].1 - &(coeff * &src[j].1);
            if !v.is_zero() {
                out.push((ti, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl Echelon {
    pub fn new(field: Field, ncols: usize) -> Echelon {
        Echelon {
            field,
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(field: Field, ncols: usize, rows: Vec<SparseRow>) -> Echelon {
        let mut e = Echelon::new(field, ncols);
        for r in rows {
            e.insert(r);
        }
        e.back_substitute();
        e
    }

    /// Reduces `row` against the current pivots (forward only).
    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut k = 0;
        while k < row.len() {
            let col = row[k].0;
            match self.rows.binary_search_by_key(&col, |(c, _)| *c) {
                Ok(idx) => {
                    let coeff = row[k].1.clone();
                    row = axpy(&row, &coeff, &self.rows[idx].1);
                    // entries before col are unchanged; resume at the same position
                }
                Err(_) => k += 1,
            }
        }
        row
    }

    /// Inserts a row; returns true if it increased the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        let Some((col, lead)) = row.first().cloned() else {
            return false;
        };
        let inv = lead.inv();
        let row: SparseRow = row.into_iter().map(|(c, v)| (c, &v * &inv)).collect();
        let pos = self.rows.partition_point(|(c, _)| *c < col);
        self.rows.insert(pos, (col, row));
        true
    }

    /// Brings the stored rows into fully reduced form.
    pub fn back_substitute(&mut self) {
        for i in (0..self.rows.len()).rev() {
            let (col, ref pivot_row) = self.rows[i];
            let pivot_row = pivot_row.clone();
            for j in 0..i {
                let hit = self.rows[j]
                    .1
                    .binary_search_by_key(&col, |(c, _)| *c)
                    .ok()
                    .map(|k| self.rows[j].1[k].1.clone());
                if let Some(coeff) = hit {
                    let updated = axpy(&self.rows[j].1, &coeff, &pivot_row);
                    self.rows[j].1 = updated;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(c, _)| *c).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &(usize, SparseRow)> {
        self.rows.iter()
    }

    /// Whether `row` lies in the row space.
    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Basis of `{x : R x = 0}`; requires fully reduced rows.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let pivots = self.pivots();
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![self.field.zero(); self.ncols];
            v[free] = self.field.one();
            for (pc, row) in &self.rows {
                if let Ok(k) = row.binary_search_by_key(&free, |(c, _)| *c) {
                    v[*pc] = -&row[k].1;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solution with free variables set to zero for the augmented column `aug`.
    fn particular_solution(&self, aug: usize) -> Vec<Scalar> {
        let mut x = vec![self.field.zero(); aug];
        for (pc, row) in &self.rows {
            if let Ok(k) = row.binary_search_by_key(&aug, |(c, _)| *c) {
                x[*pc] = row[k].1.clone();
            }
        }
        x
    }
}

/// Operations on subspaces of `K^n` given by column bases.
pub mod subspace {
    use super::*;

    /// Basis (columns) of the span of the given columns.
    pub fn span(field: Field, n: usize, vectors: &[Vec<Scalar>]) -> Matrix {
        let m = Matrix::from_columns(field, n, vectors);
        m.column_space()
    }

    pub fn dim(m: &Matrix) -> usize {
        m.rank()
    }

    pub fn sum(a: &Matrix, b: &Matrix) -> Matrix {
        a.hstack(b).column_space()
    }

    pub fn contains(basis: &Matrix, v: &[Scalar]) -> bool {
        basis.solve(v).is_some()
    }

    pub fn contains_all(basis: &Matrix, other: &Matrix) -> bool {
        (0..other.cols()).all(|c| contains(basis, &other.column(c)))
    }

    /// Basis of `A ∩ B` for column bases `A`, `B` (both assumed independent).
    pub fn intersection(a: &Matrix, b: &Matrix) -> Matrix {
        let n = a.rows();
        if a.cols() == 0 || b.cols() == 0 {
            return Matrix::zeros(a.field(), n, 0);
        }
        let k = a.hstack(&b.scale(&-a.field().one())).kernel();
        let coeffs = k.block(0, a.cols(), 0, k.cols());
        a.mul(&coeffs).column_space()
    }

    /// Standard basis vectors completing `basis` to all of `K^n`; returns their indices.
    pub fn complement_indices(basis: &Matrix) -> Vec<usize> {
        let n = basis.rows();
        let field = basis.field();
        let mut e = Echelon::new(field, n);
        for c in 0..basis.cols() {
            let row: SparseRow = basis
                .column(c)
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect();
            e.insert(row);
        }
        let mut out = Vec::new();
        for i in 0..n {
            if e.insert(vec![(i, field.one())]) {
                out.push(i);
            }
        }
        out
    }

    /// Columns of the identity at the given indices.
    pub fn unit_columns(field: Field, n: usize, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(field, n, idx.len());
        for (j, &i) in idx.iter().enumerate() {
            m[(i, j)] = field.one();
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn kernel_and_rank() {
        let m = Matrix::from_i64(q(), 2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_and_inverse() {
        let m = Matrix::from_i64(q(), 2, 2, &[2, 1, 1, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(q(), 2));
        let singular = Matrix::from_i64(q(), 2, 2, &[1, 1, 1, 1]);
        assert!(singular.inverse().is_none());
        let b = vec![q().from_i64(1), q().from_i64(2)];
        assert!(singular.solve(&b).is_none());
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn intersection_of_planes() {
        // span(e1,e2) ∩ span(e2,e3) = span(e2)
        let a = Matrix::from_i64(q(), 3, 2, &[1, 0, 0, 1, 0, 0]);
        let b = Matrix::from_i64(q(), 3, 2, &[0, 0, 1, 0, 0, 1]);
        let i = subspace::intersection(&a, &b);
        assert_eq!(i.cols(), 1);
        assert!(i[(0, 0)].is_zero() && !i[(1, 0)].is_zero() && i[(2, 0)].is_zero());
        assert_eq!(subspace::complement_indices(&a), vec![2]);
    }

    #[test]
    fn prime_field_rank_differs() {
        // det = 2, singular mod 2
        let m = |f| Matrix::from_i64(f, 2, 2, &[1, 1, 1, 3]);
        assert_eq!(m(q()).rank(), 2);
        assert_eq!(m(Field::Prime(2)).rank(), 1);
    }

    proptest! {
        #[test]
        fn rank_nullity(vals in prop::collection::vec(-3i64..4, 12), cols in 1usize..5) {
            let rows = 12 / cols;
            let m = Matrix::from_i64(q(), rows, cols, &vals[..rows * cols]);
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.cols(), cols);
            prop_assert!(m.mul(&k).is_zero());
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
