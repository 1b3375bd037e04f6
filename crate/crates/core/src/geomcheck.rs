//! Linear-algebra checks on a Lie algebra: integrability of almost complex
//! structures, symplectic forms, the compatibility tensor and tameness.

use crate::cdga::{Cdga, LieAlgebraPresentation};
use crate::error::{Error, Result};
use crate::gca::{Algebra, Element};
use crate::linalg::{Matrix, Vector};
use crate::scalar::{Field, Rational, Scalar};

/// `J` on the Lie algebra basis; column `j` is `J(X_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostComplexStructure {
    matrix: Matrix,
}

impl AlmostComplexStructure {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::Dimension(format!("J is {}x{}", matrix.rows(), matrix.cols())));
        }
        let field = matrix.field().clone();
        let minus_id = Matrix::identity(&field, matrix.rows()).scale(&field.from_int(-1));
        if matrix.mul(&matrix) != minus_id {
            return Err(Error::NotAlmostComplex);
        }
        Ok(AlmostComplexStructure { matrix })
    }

    /// `images[j]` lists `(i, c)` with `J(X_j) = sum c X_i`.
    pub fn from_images(field: &Field, n: usize, images: &[Vec<(usize, i64)>]) -> Result<Self> {
        let mut m = Matrix::zeros(field, n, n);
        for (j, img) in images.iter().enumerate() {
            for &(i, c) in img {
                m.set(i, j, field.from_int(c));
            }
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        self.matrix.apply(v)
    }
}

/// Antisymmetric matrix `omega(X_i, X_j)`, with `x_i x_j (X_i, X_j) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoForm {
    matrix: Matrix,
}

impl TwoForm {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::Dimension(format!("form is {}x{}", matrix.rows(), matrix.cols())));
        }
        let minus_t = matrix.transpose().scale(&matrix.field().from_int(-1));
        if matrix != minus_t {
            return Err(Error::NotAntisymmetric);
        }
        Ok(TwoForm { matrix })
    }

    /// Reads a degree-2 element of an exterior algebra on degree-1 generators.
    pub fn from_element(a: &Element) -> Result<Self> {
        let alg = a.algebra();
        if alg.generators().iter().any(|g| g.degree != 1) {
            return Err(Error::InvalidAlgebra("two-forms need degree-1 generators".into()));
        }
        if !a.is_zero() && !a.has_degree(2) {
            return Err(Error::Degree {
                expected: 2,
                context: a.to_string(),
            });
        }
        let n = alg.num_generators();
        let field = alg.field();
        let mut m = Matrix::zeros(field, n, n);
        for (mono, c) in a.terms() {
            let (i, j) = (mono.indices()[0], mono.indices()[1]);
            m.set(i, j, c.clone());
            m.set(j, i, -c);
        }
        Ok(TwoForm { matrix: m })
    }

    pub fn to_element(&self, alg: &Algebra) -> Result<Element> {
        let n = self.matrix.rows();
        if alg.num_generators() != n {
            return Err(Error::Dimension(format!(
                "{n}x{n} form on {} generators",
                alg.num_generators()
            )));
        }
        let mut out = alg.zero();
        for i in 0..n {
            for j in i + 1..n {
                let c = self.matrix.get(i, j);
                if !c.is_zero() {
                    out = &out + &alg.word_indices(&[i, j])?.scale(c);
                }
            }
        }
        Ok(out)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn eval(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let mv = self.matrix.apply(v);
        let mut acc = self.matrix.field().zero();
        for (a, b) in u.iter().zip(&mv) {
            acc += &(a * b);
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub struct NijenhuisReport {
    /// `N_J(X_i, X_j)` for `i < j`.
    pub table: Vec<((usize, usize), Vector)>,
    pub integrable: bool,
}

/// `N_J(X, Y) = [X,Y] + J[JX,Y] + J[X,JY] - [JX,JY]`.
pub fn nijenhuis_tensor(l: &LieAlgebraPresentation, j: &AlmostComplexStructure, x: &[Scalar], y: &[Scalar]) -> Vector {
    let jx = j.apply(x);
    let jy = j.apply(y);
    let a = l.bracket(x, y);
    let b = j.apply(&l.bracket(&jx, y));
    let c = j.apply(&l.bracket(x, &jy));
    let d = l.bracket(&jx, &jy);
    a.iter()
        .zip(&b)
        .zip(&c)
        .zip(&d)
        .map(|(((a, b), c), d)| &(&(a + b) + c) - d)
        .collect()
}

pub fn nijenhuis(l: &LieAlgebraPresentation, j: &AlmostComplexStructure) -> Result<NijenhuisReport> {
    let n = l.dimension();
    if j.dim() != n {
        return Err(Error::Dimension(format!(
            "J is {}x{} on a {n}-dimensional algebra",
            j.dim(),
            j.dim()
        )));
    }
    let field = l.field();
    let unit = |i: usize| {
        let mut v = vec![field.zero(); n];
        v[i] = field.one();
        v
    };
    let mut table = Vec::new();
    let mut integrable = true;
    for a in 0..n {
        for b in a + 1..n {
            let v = nijenhuis_tensor(l, j, &unit(a), &unit(b));
            integrable &= v.iter().all(Scalar::is_zero);
            table.push(((a, b), v));
        }
    }
    Ok(NijenhuisReport { table, integrable })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticReport {
    pub closed: bool,
    pub nondegenerate: bool,
}

/// Closedness, and nondegeneracy both as `omega^n != 0` and as full rank.
pub fn symplectic_check(c: &Cdga, omega: &Element, n: u32) -> Result<SymplecticReport> {
    let dim = c.algebra().num_generators();
    if 2 * n as usize != dim {
        return Err(Error::Dimension(format!(
            "2n = {} but the algebra has {dim} generators",
            2 * n
        )));
    }
    let form = TwoForm::from_element(omega)?;
    let closed = c.d(omega).is_zero();
    let by_power = !omega.pow(n).is_zero();
    let by_rank = !form.matrix().determinant().is_zero();
    if by_power != by_rank {
        return Err(Error::Internal(format!(
            "omega^n nonzero = {by_power} but full rank = {by_rank}"
        )));
    }
    Ok(SymplecticReport {
        closed,
        nondegenerate: by_power,
    })
}

/// Matrix of `g(X_i, X_j) = omega(X_i, J X_j)`.
pub fn compatibility_matrix(omega: &TwoForm, j: &AlmostComplexStructure) -> Result<Matrix> {
    if omega.matrix().rows() != j.dim() {
        return Err(Error::Dimension("form and J differ in size".into()));
    }
    Ok(omega.matrix().mul(j.matrix()))
}

#[derive(Clone, Debug)]
pub struct CompatibilityReport {
    pub g: Matrix,
    pub symmetric: bool,
    /// `None` when entries are not rational.
    pub positive_definite: Option<bool>,
    pub riemannian: bool,
}

pub fn compatibility_form(omega: &TwoForm, j: &AlmostComplexStructure) -> Result<CompatibilityReport> {
    let g = compatibility_matrix(omega, j)?;
    let symmetric = g == g.transpose();
    let positive_definite = rational_matrix(&symmetric_part(&g)).map(|s| ldl_first_nonpositive(&s).is_none());
    let riemannian = symmetric && positive_definite == Some(true);
    Ok(CompatibilityReport {
        g,
        symmetric,
        positive_definite,
        riemannian,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameReport {
    pub tame: bool,
    /// Vector `v` with `omega(v, J v) <= 0` when not tame.
    pub witness: Option<Vec<Rational>>,
    pub witness_value: Option<Rational>,
}

/// Positive definiteness of the symmetric part of `g` by exact `LDL^T`.
pub fn tame_check(omega: &TwoForm, j: &AlmostComplexStructure) -> Result<TameReport> {
    let g = compatibility_matrix(omega, j)?;
    let s = rational_matrix(&symmetric_part(&g)).ok_or(Error::NotRational)?;
    match ldl_first_nonpositive(&s) {
        None => Ok(TameReport {
            tame: true,
            witness: None,
            witness_value: None,
        }),
        Some(v) => {
            let value = quadratic(&s, &v);
            Ok(TameReport {
                tame: false,
                witness: Some(v),
                witness_value: Some(value),
            })
        }
    }
}

fn symmetric_part(g: &Matrix) -> Matrix {
    let half = g.field().from_rational(crate::scalar::rational(1, 2));
    g.add(&g.transpose()).scale(&half)
}

fn rational_matrix(m: &Matrix) -> Option<Vec<Vec<Rational>>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|c| c.as_rational().cloned()).collect())
        .collect()
}

fn quadratic(s: &[Vec<Rational>], v: &[Rational]) -> Rational {
    let mut acc = Rational::from_integer(0.into());
    for (i, row) in s.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            acc += x * &v[i] * &v[j];
        }
    }
    acc
}

/// Runs `S = L D L^T` without pivoting; at the first pivot `D_k <= 0`
/// returns `L^{-T} e_k`, for which `v^T S v = D_k`.
fn ldl_first_nonpositive(s: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = s.len();
    let zero = || Rational::from_integer(0.into());
    let one = || Rational::from_integer(1.into());
    let mut l = vec![vec![zero(); n]; n];
    let mut d = vec![zero(); n];
    for k in 0..n {
        let mut dk = s[k][k].clone();
        for m in 0..k {
            dk -= &l[k][m] * &l[k][m] * &d[m];
        }
        l[k][k] = one();
        if dk <= zero() {
            // back-substitute L^T v = e_k on the leading k+1 block
            let mut v = vec![zero(); n];
            v[k] = one();
            for i in (0..k).rev() {
                let mut acc = zero();
                for m in i + 1..=k {
                    acc += &l[m][i] * &v[m];
                }
                v[i] = -acc;
            }
            return Some(v);
        }
        d[k] = dk;
        for i in k + 1..n {
            let mut x = s[i][k].clone();
            for m in 0..k {
                x -= &l[i][m] * &l[k][m] * &d[m];
            }
            l[i][k] = x / &d[k];
        }
    }
    None
}
