//! Dense exact linear algebra over a cyclotomic field.
//!
//! Row reduction always pivots on the least column index and, inside a
//! column, on the first row with a nonzero entry, so every derived basis is
//! reproducible.

use std::fmt;

use crate::scalar::{Field, Scalar};

pub type Vector = Vec<Scalar>;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{} over {}]", self.rows, self.cols, self.field.name())?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &Field, cols: usize, rows: Vec<Vector>) -> Matrix {
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (r, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            for (c, v) in row.into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    pub fn from_columns(field: &Field, rows: usize, columns: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged matrix columns");
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn from_i64(field: &Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            field,
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_int(x)).collect())
                .collect(),
        )
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + &(a * b);
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        self.rref_tracked(None)
    }

    fn rref_tracked(&mut self, mut track: Option<&mut Matrix>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(p, r);
            if let Some(t) = track.as_deref_mut() {
                t.swap_rows(p, r);
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            self.scale_row(r, &inv);
            if let Some(t) = track.as_deref_mut() {
                t.scale_row(r, &inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                self.axpy_row(i, r, &f);
                if let Some(t) = track.as_deref_mut() {
                    t.axpy_row(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: &Scalar) {
        for c in 0..self.cols {
            let i = r * self.cols + c;
            if !self.data[i].is_zero() {
                self.data[i] = &self.data[i] * s;
            }
        }
    }

    /// row[i] -= f * row[src]
    fn axpy_row(&mut self, i: usize, src: usize, f: &Scalar) {
        for c in 0..self.cols {
            let s = &self.data[src * self.cols + c];
            if s.is_zero() {
                continue;
            }
            let d = f * s;
            self.data[i * self.cols + c] -= &d;
        }
    }

    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_space(&self) -> (Vec<Vector>, Vec<usize>) {
        let (m, pivots) = self.rref();
        let rows = (0..pivots.len()).map(|r| m.row(r).to_vec()).collect();
        (rows, pivots)
    }

    /// Canonical basis of the column space (RREF rows of the transpose).
    pub fn column_space(&self) -> (Vec<Vector>, Vec<usize>) {
        self.transpose().row_space()
    }

    /// Kernel basis, itself brought to reduced row echelon form.
    pub fn kernel(&self) -> Vec<Vector> {
        let (m, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.get(r, free);
            }
            basis.push(v);
        }
        if basis.is_empty() {
            return basis;
        }
        Matrix::from_rows(&self.field, self.cols, basis).row_space().0
    }

    /// A solution of `self * x = b` with every free variable set to zero,
    /// or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug = Matrix::zeros(&self.field, self.rows, self.cols + 1);
        for (r, br) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, br.clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return self.field.zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if !f.is_zero() {
                    m.axpy_row(i, c, &f);
                }
            }
        }
        det
    }
}

/// Expresses vectors in terms of a fixed list of (possibly dependent-free)
/// spanning vectors, reporting membership exactly.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    field: Field,
    dim: usize,
    count: usize,
    reduced: Matrix,
    pivots: Vec<usize>,
    /// `reduced = transform * original_rows`
    transform: Matrix,
}

impl SpanSolver {
    /// `vectors` must be linearly independent.
    pub fn new(field: &Field, dim: usize, vectors: &[Vector]) -> SpanSolver {
        let count = vectors.len();
        let mut reduced = Matrix::from_rows(field, dim, vectors.to_vec());
        let mut transform = Matrix::identity(field, count);
        let pivots = reduced.rref_tracked(Some(&mut transform));
        assert_eq!(pivots.len(), count, "spanning vectors are dependent");
        SpanSolver {
            field: field.clone(),
            dim,
            count,
            reduced,
            pivots,
            transform,
        }
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Coefficients `c` with `v = sum c_i vectors[i]`, if `v` is in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut residual = v.to_vec();
        let mut along = Vec::with_capacity(self.count);
        for (r, &p) in self.pivots.iter().enumerate() {
            let f = residual[p].clone();
            if !f.is_zero() {
                for (c, x) in residual.iter_mut().enumerate() {
                    let s = self.reduced.get(r, c);
                    if !s.is_zero() {
                        *x -= &(&f * s);
                    }
                }
            }
            along.push(f);
        }
        if residual.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut out = vec![self.field.zero(); self.count];
        for (r, f) in along.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let t = self.transform.get(r, j);
                if !t.is_zero() {
                    *o += &(f * t);
                }
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn rank_and_kernel() {
        let m = Matrix::from_i64(&q(), &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Matrix::from_i64(&q(), &[&[1, 1], &[1, 1]]);
        let f = q();
        let x = m.solve(&[f.from_int(2), f.from_int(2)]).unwrap();
        assert_eq!(x, vec![f.from_int(2), f.zero()]);
        assert!(m.solve(&[f.from_int(1), f.from_int(2)]).is_none());
    }

    #[test]
    fn determinant_matches_hand_value() {
        let m = Matrix::from_i64(&q(), &[&[0, 2, 1], &[1, 0, 0], &[3, 1, 1]]);
        // expand along row 2: -1 * (2*1 - 1*1) = -1
        assert_eq!(m.determinant(), q().from_int(-1));
    }

    #[test]
    fn span_solver_recovers_coefficients() {
        let f = q();
        let v1 = vec![f.from_int(1), f.from_int(1), f.zero()];
        let v2 = vec![f.zero(), f.from_int(1), f.from_int(1)];
        let s = SpanSolver::new(&f, 3, &[v1.clone(), v2.clone()]);
        let target: Vector = v1
            .iter()
            .zip(&v2)
            .map(|(a, b)| &a.scale(&crate::scalar::rational(3, 1)) - b)
            .collect();
        assert_eq!(s.coordinates(&target).unwrap(), vec![f.from_int(3), f.from_int(-1)]);
        assert!(s.coordinates(&[f.one(), f.zero(), f.zero()]).is_none());
    }

    #[test]
    fn cyclotomic_entries() {
        let f = Field::cyclotomic(3).unwrap();
        let z = f.zeta_pow(1);
        let m = Matrix::from_rows(&f, 2, vec![vec![f.one(), z.clone()], vec![z.clone(), &z * &z]]);
        assert_eq!(m.rank(), 1);
        assert!(m.determinant().is_zero());
    }
}
