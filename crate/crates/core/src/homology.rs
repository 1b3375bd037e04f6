//! Cochain complexes of finite CDGAs and their cohomology: cocycles,
//! coboundaries, deterministic cohomology bases, cup products and
//! Lefschetz maps.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::cdga::{Cdga, SubCdga};
use crate::error::{Error, Result};
use crate::gca::{Algebra, Element, Monomial};
use crate::linalg::{Matrix, SpanSolver, Vector};
use crate::scalar::{Field, Scalar};

/// One degree of the cochain complex: a basis and the matrix of `d` into the
/// next degree (columns are images of basis vectors).
#[derive(Clone, Debug)]
pub struct DegreeComplexSlice {
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    basis: Vec<Element>,
    solver: Option<SpanSolver>,
    d_matrix: Matrix,
}

impl DegreeComplexSlice {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn basis(&self) -> &[Element] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn d_matrix(&self) -> &Matrix {
        &self.d_matrix
    }

    fn monomial_coords(&self, field: &Field, e: &Element) -> Option<Vector> {
        let mut v = vec![field.zero(); self.monomials.len()];
        for (m, c) in e.terms() {
            v[*self.index.get(m)?] = c.clone();
        }
        Some(v)
    }

    fn coords(&self, field: &Field, e: &Element) -> Option<Vector> {
        let v = self.monomial_coords(field, e)?;
        match &self.solver {
            None => Some(v),
            Some(s) => s.coordinates(&v),
        }
    }

    fn element(&self, algebra: &Algebra, coords: &[Scalar]) -> Element {
        let mut out = algebra.zero();
        for (b, c) in self.basis.iter().zip(coords) {
            if !c.is_zero() {
                out = &out + &b.scale(c);
            }
        }
        out
    }
}

/// Cohomology class with a closed representative and coordinates in the
/// deterministic basis of `H^degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClass {
    pub degree: u32,
    pub representative: Element,
    pub coords: Vector,
}

impl CohClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }
}

#[derive(Debug)]
struct CohomologyData {
    cycles: Vec<Vector>,
    boundary_rows: Vec<Vector>,
    boundary_pivots: Vec<usize>,
    reps: Vec<Vector>,
    rep_pivots: Vec<usize>,
}

/// Betti numbers together with the odd-degree parity report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiReport {
    pub betti: Vec<usize>,
    /// Odd degrees `k` with `b_k` odd.
    pub odd_degrees_with_odd_betti: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct LefschetzReport {
    pub p: u32,
    pub n: u32,
    /// Columns are images of the `H^p` basis in the `H^{2n-p}` basis.
    pub matrix: Matrix,
    pub rank: usize,
    pub isomorphism: bool,
    pub images: Vec<CohClass>,
}

/// Finite cochain complex of a CDGA or of a sub-CDGA, with cohomology
/// computed lazily per degree.
#[derive(Debug)]
pub struct CochainSpace {
    cdga: Cdga,
    sub: Option<SubCdga>,
    top: u32,
    /// Degrees `0..=top + 1`; the last slice is only a codomain.
    slices: Vec<DegreeComplexSlice>,
    cohomology: Vec<OnceLock<CohomologyData>>,
}

impl CochainSpace {
    /// Full complex; a capped algebra keeps `d` on degree `cap` landing in
    /// degree `cap + 1`, so cohomology is that of the untruncated algebra.
    pub fn full(cdga: &Cdga) -> Result<CochainSpace> {
        let alg = cdga.algebra();
        let top = cdga.top_degree()?;
        let mut levels = Vec::new();
        for k in 0..=top + 1 {
            let monomials = alg.basis(k)?;
            let basis = monomials.iter().map(|m| alg.monomial(m.clone())).collect();
            levels.push((monomials, basis, None));
        }
        Self::assemble(cdga, None, top, levels)
    }

    pub fn sub(sub: &SubCdga) -> Result<CochainSpace> {
        let cdga = sub.ambient();
        let alg = cdga.algebra();
        let top = sub.top_degree();
        let mut levels = Vec::new();
        for k in 0..=top + 1 {
            let monomials = alg.basis(k)?;
            let basis: Vec<Element> = sub.basis(k).to_vec();
            let vecs: Vec<Vector> = basis
                .iter()
                .map(|b| b.coordinates(&monomials).ok_or(Error::NotInSubspace(k)))
                .collect::<Result<_>>()?;
            let solver = SpanSolver::new(alg.field(), monomials.len(), &vecs);
            levels.push((monomials, basis, Some(solver)));
        }
        Self::assemble(cdga, Some(sub.clone()), top, levels)
    }

    fn assemble(
        cdga: &Cdga,
        sub: Option<SubCdga>,
        top: u32,
        levels: Vec<(Vec<Monomial>, Vec<Element>, Option<SpanSolver>)>,
    ) -> Result<CochainSpace> {
        let field = cdga.field().clone();
        let mut slices: Vec<DegreeComplexSlice> = levels
            .into_iter()
            .enumerate()
            .map(|(k, (monomials, basis, solver))| {
                let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
                DegreeComplexSlice {
                    degree: k as u32,
                    d_matrix: Matrix::zeros(&field, 0, basis.len()),
                    monomials,
                    index,
                    basis,
                    solver,
                }
            })
            .collect();
        for k in 0..=top as usize {
            let columns: Vec<Vector> = slices[k]
                .basis
                .iter()
                .map(|b| {
                    let db = cdga.d(b);
                    slices[k + 1]
                        .coords(&field, &db)
                        .ok_or_else(|| Error::Internal(format!("d({b}) leaves the subcomplex in degree {}", k + 1)))
                })
                .collect::<Result<_>>()?;
            slices[k].d_matrix = Matrix::from_columns(&field, slices[k + 1].dim(), &columns);
        }
        let cohomology = (0..=top).map(|_| OnceLock::new()).collect();
        Ok(CochainSpace {
            cdga: cdga.clone(),
            sub,
            top,
            slices,
            cohomology,
        })
    }

    pub fn cdga(&self) -> &Cdga {
        &self.cdga
    }

    pub fn algebra(&self) -> &Algebra {
        self.cdga.algebra()
    }

    pub fn field(&self) -> &Field {
        self.cdga.field()
    }

    pub fn sub_cdga(&self) -> Option<&SubCdga> {
        self.sub.as_ref()
    }

    pub fn top_degree(&self) -> u32 {
        self.top
    }

    fn check_degree(&self, k: u32) -> Result<()> {
        if k > self.top {
            return Err(Error::DegreeOutOfRange {
                degree: k,
                top: self.top,
            });
        }
        Ok(())
    }

    pub fn slice(&self, k: u32) -> Result<&DegreeComplexSlice> {
        self.check_degree(k)?;
        Ok(&self.slices[k as usize])
    }

    pub fn dim(&self, k: u32) -> usize {
        self.slices.get(k as usize).map_or(0, DegreeComplexSlice::dim)
    }

    /// Coordinates of a degree-`k` element in the slice basis.
    pub fn coords(&self, k: u32, e: &Element) -> Result<Vector> {
        self.check_degree(k)?;
        if !e.is_zero() && !e.has_degree(k) {
            return Err(Error::Degree {
                expected: k,
                context: e.to_string(),
            });
        }
        self.slices[k as usize]
            .coords(self.field(), e)
            .ok_or(Error::NotInSubspace(k))
    }

    pub fn element(&self, k: u32, coords: &[Scalar]) -> Element {
        self.slices[k as usize].element(self.algebra(), coords)
    }

    pub fn contains(&self, e: &Element) -> bool {
        match e.homogeneous_degree() {
            None => e.is_zero(),
            Some(k) => k <= self.top && self.slices[k as usize].coords(self.field(), e).is_some(),
        }
    }

    fn data(&self, k: u32) -> &CohomologyData {
        self.cohomology[k as usize].get_or_init(|| {
            let field = self.field();
            let n = self.dim(k);
            let cycles = self.slices[k as usize].d_matrix.kernel();
            let (boundary_rows, boundary_pivots) = if k == 0 {
                (Vec::new(), Vec::new())
            } else {
                self.slices[k as usize - 1].d_matrix.column_space()
            };
            let reduced: Vec<Vector> = cycles
                .iter()
                .map(|z| reduce(z, &boundary_rows, &boundary_pivots))
                .collect();
            let (reps, rep_pivots) = if n == 0 {
                (Vec::new(), Vec::new())
            } else {
                Matrix::from_rows(field, n, reduced).row_space()
            };
            CohomologyData {
                cycles,
                boundary_rows,
                boundary_pivots,
                reps,
                rep_pivots,
            }
        })
    }

    /// Closed elements of degree `k` as coordinate vectors (RREF basis).
    pub fn cycles(&self, k: u32) -> Result<&[Vector]> {
        self.check_degree(k)?;
        Ok(&self.data(k).cycles)
    }

    /// Echelon basis of the coboundaries in degree `k`.
    pub fn boundaries(&self, k: u32) -> Result<&[Vector]> {
        self.check_degree(k)?;
        Ok(&self.data(k).boundary_rows)
    }

    pub fn cohomology_dim(&self, k: u32) -> Result<usize> {
        self.check_degree(k)?;
        Ok(self.data(k).reps.len())
    }

    pub fn cohomology_basis(&self, k: u32) -> Result<Vec<CohClass>> {
        self.check_degree(k)?;
        let data = self.data(k);
        let field = self.field();
        Ok(data
            .reps
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut coords = vec![field.zero(); data.reps.len()];
                coords[i] = field.one();
                CohClass {
                    degree: k,
                    representative: self.element(k, r),
                    coords,
                }
            })
            .collect())
    }

    pub fn betti(&self) -> BettiReport {
        let betti: Vec<usize> = (0..=self.top).map(|k| self.data(k).reps.len()).collect();
        let odd_degrees_with_odd_betti = betti
            .iter()
            .enumerate()
            .filter(|(k, b)| k % 2 == 1 && *b % 2 == 1)
            .map(|(k, _)| k as u32)
            .collect();
        BettiReport {
            betti,
            odd_degrees_with_odd_betti,
        }
    }

    pub fn zero_class(&self, k: u32) -> Result<CohClass> {
        self.check_degree(k)?;
        Ok(CohClass {
            degree: k,
            representative: self.algebra().zero(),
            coords: vec![self.field().zero(); self.data(k).reps.len()],
        })
    }

    /// Coordinates of a closed coordinate vector in the cohomology basis.
    fn class_coords(&self, k: u32, v: &[Scalar]) -> Result<Vector> {
        let data = self.data(k);
        let mut z = reduce(v, &data.boundary_rows, &data.boundary_pivots);
        let mut out = Vec::with_capacity(data.reps.len());
        for (r, &p) in data.reps.iter().zip(&data.rep_pivots) {
            let c = z[p].clone();
            if !c.is_zero() {
                for (zi, ri) in z.iter_mut().zip(r) {
                    if !ri.is_zero() {
                        *zi -= &(&c * ri);
                    }
                }
            }
            out.push(c);
        }
        if z.iter().any(|x| !x.is_zero()) {
            return Err(Error::Internal(format!(
                "closed vector in degree {k} not reduced by H basis"
            )));
        }
        Ok(out)
    }

    /// Class of a closed element of degree `k` (the zero element is allowed).
    pub fn class_in(&self, k: u32, a: &Element) -> Result<CohClass> {
        let v = self.coords(k, a)?;
        let da = self.cdga.d(a);
        if !da.is_zero() {
            return Err(Error::NotClosed(da.to_string()));
        }
        Ok(CohClass {
            degree: k,
            representative: a.clone(),
            coords: self.class_coords(k, &v)?,
        })
    }

    /// Class of a nonzero homogeneous closed element.
    pub fn class_of(&self, a: &Element) -> Result<CohClass> {
        let k = a.homogeneous_degree().ok_or_else(|| Error::Degree {
            expected: 0,
            context: format!("class_of needs a nonzero homogeneous element, got {a}"),
        })?;
        self.class_in(k, a)
    }

    /// Class with the given coordinates, represented by the basis combination.
    pub fn class_from_coords(&self, k: u32, coords: Vector) -> Result<CohClass> {
        self.check_degree(k)?;
        let data = self.data(k);
        if coords.len() != data.reps.len() {
            return Err(Error::Dimension(format!(
                "{} coordinates for H^{k} of dim {}",
                coords.len(),
                data.reps.len()
            )));
        }
        let mut v = vec![self.field().zero(); self.dim(k)];
        for (c, r) in coords.iter().zip(&data.reps) {
            for (vi, ri) in v.iter_mut().zip(r) {
                *vi += &(c * ri);
            }
        }
        Ok(CohClass {
            degree: k,
            representative: self.element(k, &v),
            coords,
        })
    }

    /// Cup product; products beyond the top degree must vanish.
    pub fn cup(&self, a: &CohClass, b: &CohClass) -> Result<CohClass> {
        let prod = a.representative.wedge(&b.representative)?;
        let k = a.degree + b.degree;
        if k > self.top {
            if prod.is_zero() {
                return Ok(CohClass {
                    degree: k,
                    representative: prod,
                    coords: Vec::new(),
                });
            }
            return Err(Error::DegreeOutOfRange {
                degree: k,
                top: self.top,
            });
        }
        self.class_in(k, &prod)
    }

    pub fn is_exact(&self, k: u32, a: &Element) -> Result<bool> {
        Ok(self.solve_exact(k, a, 0)?.is_some())
    }

    /// A primitive `y` with `d y = target` (target of degree `k`). Seed 0
    /// gives the least-index particular solution; seed `s >= 1` adds the
    /// `(s - 1)`-th closed basis vector of degree `k - 1`, cyclically.
    pub fn solve_exact(&self, k: u32, target: &Element, seed: u64) -> Result<Option<Element>> {
        let v = self.coords(k, target)?;
        if k == 0 {
            return Ok(target.is_zero().then(|| self.algebra().zero()));
        }
        let dm = &self.slices[k as usize - 1].d_matrix;
        let Some(mut y) = dm.solve(&v) else {
            return Ok(None);
        };
        if seed > 0 {
            let cycles = &self.data(k - 1).cycles;
            if !cycles.is_empty() {
                let z = &cycles[((seed - 1) % cycles.len() as u64) as usize];
                for (yi, zi) in y.iter_mut().zip(z) {
                    *yi += zi;
                }
            }
        }
        Ok(Some(self.element(k - 1, &y)))
    }

    /// Matrix of `a -> [omega]^{n-p} a` from `H^p` to `H^{2n-p}`.
    pub fn lefschetz(&self, omega: &CohClass, p: u32, n: u32) -> Result<LefschetzReport> {
        if omega.degree != 2 {
            return Err(Error::Degree {
                expected: 2,
                context: "Lefschetz class must have degree 2".into(),
            });
        }
        if 2 * n != self.top || p > n {
            return Err(Error::Dimension(format!(
                "need 2n = top degree {} and p <= n (n={n}, p={p})",
                self.top
            )));
        }
        let mut power = self.class_in(0, &self.algebra().one())?;
        for _ in 0..n - p {
            power = self.cup(&power, omega)?;
        }
        let images: Vec<CohClass> = self
            .cohomology_basis(p)?
            .iter()
            .map(|h| self.cup(&power, h))
            .collect::<Result<_>>()?;
        let target_dim = self.cohomology_dim(2 * n - p)?;
        let columns: Vec<Vector> = images.iter().map(|c| c.coords.clone()).collect();
        let matrix = Matrix::from_columns(self.field(), target_dim, &columns);
        let rank = matrix.rank();
        let isomorphism = rank == images.len() && rank == target_dim;
        Ok(LefschetzReport {
            p,
            n,
            matrix,
            rank,
            isomorphism,
            images,
        })
    }
}

/// Reduces `v` against echelon rows with the given pivots.
fn reduce(v: &[Scalar], rows: &[Vector], pivots: &[usize]) -> Vector {
    let mut out = v.to_vec();
    for (r, &p) in rows.iter().zip(pivots) {
        let c = out[p].clone();
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(r) {
            if !x.is_zero() {
                *o -= &(&c * x);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::LieAlgebraPresentation;

    fn kt() -> Cdga {
        let q = Field::rationals();
        LieAlgebraPresentation::new(&q, 4, &[(0, 1, vec![(2, q.from_int(-1))])])
            .unwrap()
            .chevalley_eilenberg_default()
            .unwrap()
    }

    #[test]
    fn kt_betti_and_h1() {
        let c = kt();
        let s = CochainSpace::full(&c).unwrap();
        let b = s.betti();
        assert_eq!(b.betti, vec![1, 3, 4, 3, 1]);
        assert_eq!(b.odd_degrees_with_odd_betti, vec![1, 3]);
        let a = c.algebra();
        let reps: Vec<Element> = s
            .cohomology_basis(1)
            .unwrap()
            .into_iter()
            .map(|c| c.representative)
            .collect();
        assert_eq!(
            reps,
            vec![a.named("x1").unwrap(), a.named("x2").unwrap(), a.named("x4").unwrap()]
        );
        let h0 = s.cohomology_basis(0).unwrap();
        assert_eq!(h0[0].representative, a.one());
        assert!(matches!(
            s.cohomology_basis(5),
            Err(Error::DegreeOutOfRange { degree: 5, top: 4 })
        ));
    }

    #[test]
    fn class_of_closed_and_exact() {
        let c = kt();
        let s = CochainSpace::full(&c).unwrap();
        let a = c.algebra();
        let x13 = s.class_of(&a.word(&["x1", "x3"]).unwrap()).unwrap();
        assert!(!x13.is_zero());
        let exact = s.class_of(&a.word(&["x1", "x2", "x4"]).unwrap()).unwrap();
        assert!(exact.is_zero());
        assert!(matches!(s.class_of(&a.named("x3").unwrap()), Err(Error::NotClosed(_))));
        let y = s
            .solve_exact(3, &a.word(&["x1", "x2", "x4"]).unwrap(), 0)
            .unwrap()
            .unwrap();
        assert_eq!(c.d(&y), a.word(&["x1", "x2", "x4"]).unwrap());
        for seed in 1..5 {
            let y = s
                .solve_exact(3, &a.word(&["x1", "x2", "x4"]).unwrap(), seed)
                .unwrap()
                .unwrap();
            assert_eq!(c.d(&y), a.word(&["x1", "x2", "x4"]).unwrap());
        }
    }

    #[test]
    fn kt_cup_and_lefschetz() {
        let c = kt();
        let s = CochainSpace::full(&c).unwrap();
        let a = c.algebra();
        let x1 = s.class_of(&a.named("x1").unwrap()).unwrap();
        let x2 = s.class_of(&a.named("x2").unwrap()).unwrap();
        assert!(s.cup(&x1, &x2).unwrap().is_zero());
        let one = s.class_of(&a.one()).unwrap();
        assert_eq!(s.cup(&one, &x1).unwrap().coords, x1.coords);
        let omega = &a.word(&["x1", "x4"]).unwrap() + &a.word(&["x2", "x3"]).unwrap();
        let w = s.class_of(&omega).unwrap();
        let l = s.lefschetz(&w, 1, 2).unwrap();
        assert!(l.images[1].is_zero());
        assert!(l.rank < 3);
        assert!(!l.isomorphism);
    }

    #[test]
    fn torus_lefschetz_is_iso() {
        let q = Field::rationals();
        let c = LieAlgebraPresentation::new(&q, 4, &[])
            .unwrap()
            .chevalley_eilenberg_default()
            .unwrap();
        let s = CochainSpace::full(&c).unwrap();
        assert_eq!(s.betti().betti, vec![1, 4, 6, 4, 1]);
        let a = c.algebra();
        let omega = &a.word(&["x1", "x2"]).unwrap() + &a.word(&["x3", "x4"]).unwrap();
        let l = s.lefschetz(&s.class_of(&omega).unwrap(), 1, 2).unwrap();
        assert_eq!(l.rank, 4);
        assert!(l.isomorphism);
    }

    #[test]
    fn capped_even_generator() {
        let q = Field::rationals();
        let alg = Algebra::new(q, [("x", 2), ("y", 3)], Some(8)).unwrap();
        let x = alg.named("x").unwrap();
        let c = Cdga::from_named(alg.clone(), &[("y", x.pow(2))]).unwrap();
        let s = CochainSpace::full(&c).unwrap();
        // H = Q[x]/(x^2): 1 and x
        assert_eq!(s.betti().betti, vec![1, 0, 1, 0, 0, 0, 0, 0, 0]);
    }
}
