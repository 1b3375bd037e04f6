//! Triple and higher Massey products: defining systems, values,
//! indeterminacy of triple products, and witness certification.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::formality::{self, CnSplit};
use crate::gca::Element;
use crate::homology::{CochainSpace, CohClass};
use crate::linalg::{Matrix, Vector};

/// Entries `alpha_{i,j}`, 1-indexed, for `1 <= i <= j <= t`, `(i, j) != (1, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningSystem {
    pub t: usize,
    pub alpha: BTreeMap<(usize, usize), Element>,
}

fn sign(degree: u32) -> i64 {
    if degree.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl DefiningSystem {
    pub fn get(&self, i: usize, j: usize) -> &Element {
        &self.alpha[&(i, j)]
    }

    /// Degree of `alpha_{i,j}` given the class degrees.
    fn degree_of(degrees: &[u32], i: usize, j: usize) -> u32 {
        degrees[i - 1..j].iter().sum::<u32>() - (j - i) as u32
    }

    /// `sum_{k=i}^{j-1} (-1)^{|alpha_{i,k}|} alpha_{i,k} alpha_{k+1,j}`.
    pub fn defining_sum(&self, space: &CochainSpace, degrees: &[u32], i: usize, j: usize) -> Element {
        let field = space.field();
        let mut out = space.algebra().zero();
        for k in i..j {
            let left = self.get(i, k);
            let s = sign(Self::degree_of(degrees, i, k));
            let term = left * self.get(k + 1, j);
            out = &out + &term.scale(&field.from_int(s));
        }
        out
    }

    /// Checks `d alpha_{i,j}` against the defining sums and `alpha_{i,i}`
    /// against the classes.
    pub fn validate(&self, space: &CochainSpace, classes: &[CohClass]) -> Result<()> {
        let degrees: Vec<u32> = classes.iter().map(|c| c.degree).collect();
        for (i, a) in classes.iter().enumerate() {
            let rep = self.get(i + 1, i + 1);
            if space.class_in(a.degree, rep)?.coords != a.coords {
                return Err(Error::MasseyUndefined(format!(
                    "alpha_({0},{0}) does not represent a_{0}",
                    i + 1
                )));
            }
        }
        for (&(i, j), a) in &self.alpha {
            if i == j {
                continue;
            }
            let target = self.defining_sum(space, &degrees, i, j);
            if space.cdga().d(a) != target {
                return Err(Error::MasseyUndefined(format!(
                    "d alpha_({i},{j}) differs from its defining sum"
                )));
            }
        }
        Ok(())
    }

    /// The cocycle `sum_{k=1}^{t-1} (-1)^{|alpha_{1,k}|} alpha_{1,k} alpha_{k+1,t}`.
    pub fn value_cocycle(&self, space: &CochainSpace, degrees: &[u32]) -> Element {
        self.defining_sum(space, degrees, 1, self.t)
    }
}

#[derive(Clone, Debug)]
pub enum Indeterminacy {
    /// Spanning coordinate vectors in the cohomology basis (triples).
    Subspace(Vec<Vector>),
    /// Values obtained from the sampled defining systems (higher products).
    Samples(Vec<CohClass>),
}

#[derive(Clone, Debug)]
pub struct MasseyResult {
    pub classes: Vec<CohClass>,
    pub value: CohClass,
    pub system: DefiningSystem,
    pub indeterminacy: Indeterminacy,
    /// Triples only: value outside the indeterminacy.
    pub nontrivial: Option<bool>,
}

fn undefined_name(i: usize, j: usize) -> String {
    let names: Vec<String> = (i..=j).map(|k| format!("a{k}")).collect();
    format!("<{}>", names.join(","))
}

/// Classical triple product `[xi gamma + (-1)^{|a|+1} alpha eta]` with
/// `d xi = alpha beta` and `d eta = beta gamma`.
pub fn triple_massey(space: &CochainSpace, a: &CohClass, b: &CohClass, c: &CohClass) -> Result<MasseyResult> {
    let field = space.field();
    for (x, y, name) in [(a, b, "a.b"), (b, c, "b.c")] {
        if !space.cup(x, y)?.is_zero() {
            return Err(Error::MasseyUndefined(format!("product not defined: {name} != 0")));
        }
    }
    let (alpha, beta, gamma) = (&a.representative, &b.representative, &c.representative);
    let ab = alpha * beta;
    let bc = beta * gamma;
    let internal = |what: &str| Error::Internal(format!("{what} is zero in cohomology but not exact"));
    let xi = space
        .solve_exact(a.degree + b.degree, &ab, 0)?
        .ok_or_else(|| internal("a.b"))?;
    let eta = space
        .solve_exact(b.degree + c.degree, &bc, 0)?
        .ok_or_else(|| internal("b.c"))?;
    let value_degree = a.degree + b.degree + c.degree - 1;
    let cocycle = &(&xi * gamma) + &(alpha * &eta).scale(&field.from_int(sign(a.degree + 1)));
    let value = space.class_in(value_degree, &cocycle)?;

    let mut span = Vec::new();
    if b.degree + c.degree >= 1 && b.degree + c.degree - 1 <= space.top_degree() {
        for h in space.cohomology_basis(b.degree + c.degree - 1)? {
            span.push(space.cup(a, &h)?.coords);
        }
    }
    if a.degree + b.degree >= 1 && a.degree + b.degree - 1 <= space.top_degree() {
        for h in space.cohomology_basis(a.degree + b.degree - 1)? {
            span.push(space.cup(&h, c)?.coords);
        }
    }
    let dim = space.cohomology_dim(value_degree)?;
    let (basis, _) = Matrix::from_rows(field, dim, span).row_space();
    let rank_with = Matrix::from_rows(
        field,
        dim,
        basis.iter().cloned().chain([value.coords.clone()]).collect(),
    )
    .rank();
    let nontrivial = rank_with > basis.len();

    let mut alpha_map = BTreeMap::new();
    alpha_map.insert((1, 1), alpha.clone());
    alpha_map.insert((2, 2), beta.clone());
    alpha_map.insert((3, 3), gamma.clone());
    // general-convention entries: d alpha_12 = (-1)^{|a|} alpha beta
    alpha_map.insert((1, 2), xi.scale(&field.from_int(sign(a.degree))));
    alpha_map.insert((2, 3), eta.scale(&field.from_int(sign(b.degree))));
    Ok(MasseyResult {
        classes: vec![a.clone(), b.clone(), c.clone()],
        value,
        system: DefiningSystem { t: 3, alpha: alpha_map },
        indeterminacy: Indeterminacy::Subspace(basis),
        nontrivial: Some(nontrivial),
    })
}

/// One defining system for `<a_1, ..., a_t>`, solving entries by increasing
/// `j - i`; `seed` selects the affine offset of every solve.
pub fn higher_massey(space: &CochainSpace, classes: &[CohClass], seed: u64) -> Result<MasseyResult> {
    let t = classes.len();
    if t < 3 {
        return Err(Error::MasseyUndefined(format!("need at least 3 classes, got {t}")));
    }
    let degrees: Vec<u32> = classes.iter().map(|c| c.degree).collect();
    let mut system = DefiningSystem {
        t,
        alpha: BTreeMap::new(),
    };
    for (i, c) in classes.iter().enumerate() {
        system.alpha.insert((i + 1, i + 1), c.representative.clone());
    }
    for len in 1..t {
        for i in 1..=t - len {
            let j = i + len;
            if (i, j) == (1, t) {
                continue;
            }
            let target = system.defining_sum(space, &degrees, i, j);
            let k = DefiningSystem::degree_of(&degrees, i, j) + 1;
            let solved = if k > space.top_degree() {
                target.is_zero().then(|| space.algebra().zero())
            } else {
                space.solve_exact(k, &target, seed)?
            };
            let entry = solved.ok_or_else(|| {
                Error::MasseyUndefined(format!("{} is not defined and trivial", undefined_name(i, j)))
            })?;
            system.alpha.insert((i, j), entry);
        }
    }
    let value_degree = degrees.iter().sum::<u32>() + 2 - t as u32;
    let value = space.class_in(value_degree, &system.value_cocycle(space, &degrees))?;
    Ok(MasseyResult {
        classes: classes.to_vec(),
        indeterminacy: Indeterminacy::Samples(vec![value.clone()]),
        value,
        system,
        nontrivial: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    CertifiedNonzero,
    NotCertified,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::CertifiedNonzero => "certified nonzero",
            Verdict::NotCertified => "not certified",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    /// Pairing of the stored value first, then seeds `1..=samples`.
    pub pairings: Vec<CohClass>,
    pub seeds: Vec<u64>,
    pub verdict: Verdict,
}

/// Pairs the value with `w` for the stored system and for systems built
/// with seeds `1..=samples`; nonzero and identical pairings certify the
/// product.
pub fn witness_certify(
    space: &CochainSpace,
    result: &MasseyResult,
    w: &CohClass,
    samples: u64,
) -> Result<WitnessReport> {
    let top = space.top_degree();
    if result.value.degree + w.degree != top {
        return Err(Error::Degree {
            expected: top - w.degree.min(top),
            context: format!(
                "value degree {} plus witness degree {} must equal {top}",
                result.value.degree, w.degree
            ),
        });
    }
    let mut pairings = vec![space.cup(&result.value, w)?];
    let mut seeds = vec![0];
    for s in 1..=samples {
        let r = higher_massey(space, &result.classes, s)?;
        pairings.push(space.cup(&r.value, w)?);
        seeds.push(s);
    }
    let first = &pairings[0].coords;
    let verdict = if pairings.iter().any(|p| &p.coords != first) {
        Verdict::Inconclusive
    } else if pairings[0].is_zero() {
        Verdict::NotCertified
    } else {
        Verdict::CertifiedNonzero
    };
    Ok(WitnessReport {
        pairings,
        seeds,
        verdict,
    })
}

/// Defining system for a triple or quadruple product whose value lies in
/// `I(N)`, following the `beta + eta` decomposition; the value is checked
/// to be exact.
pub fn formal_trivialization(space: &CochainSpace, split: &CnSplit, classes: &[CohClass]) -> Result<DefiningSystem> {
    if space.sub_cdga().is_some() {
        return Err(Error::NoFormalSplit(
            "needs the full complex of a minimal algebra".into(),
        ));
    }
    if let Some(w) = formality::witness_in(split, space, None)? {
        return Err(Error::NoFormalSplit(w.to_string()));
    }
    let t = classes.len();
    if !(3..=4).contains(&t) {
        return Err(Error::MasseyUndefined(format!(
            "formal trivialization covers t = 3, 4, got {t}"
        )));
    }
    let base = higher_massey(space, classes, 0)?;
    let degrees: Vec<u32> = classes.iter().map(|c| c.degree).collect();
    let mut system = base.system.clone();
    for i in 1..t {
        if (i, i + 1) != (1, t) {
            let (_, eta) = split.decompose(system.get(i, i + 1))?;
            system.alpha.insert((i, i + 1), eta);
        }
    }
    if t == 4 {
        for (i, j) in [(1, 3), (2, 4)] {
            let target = system.defining_sum(space, &degrees, i, j);
            let k = DefiningSystem::degree_of(&degrees, i, j) + 1;
            let y = space
                .solve_exact(k, &target, 0)?
                .ok_or_else(|| Error::NoFormalSplit(format!("closed element {target} of I(N) is not exact")))?;
            let (_, psi) = split.decompose(&y)?;
            system.alpha.insert((i, j), psi);
        }
    }
    system.validate(space, classes)?;
    let value = system.value_cocycle(space, &degrees);
    let value_degree = degrees.iter().sum::<u32>() + 2 - t as u32;
    if value_degree <= space.top_degree() && !space.is_exact(value_degree, &value)? {
        return Err(Error::NoFormalSplit(value.to_string()));
    }
    Ok(system)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::{Cdga, LieAlgebraPresentation};
    use crate::formality::cn_split;
    use crate::gca::Algebra;
    use crate::scalar::Field;

    fn kt() -> Cdga {
        let q = Field::rationals();
        LieAlgebraPresentation::new(&q, 4, &[(0, 1, vec![(2, q.from_int(-1))])])
            .unwrap()
            .chevalley_eilenberg_default()
            .unwrap()
    }

    #[test]
    fn kt_triple() {
        let c = kt();
        let s = CochainSpace::full(&c).unwrap();
        let a = c.algebra();
        let x1 = s.class_of(&a.named("x1").unwrap()).unwrap();
        let x2 = s.class_of(&a.named("x2").unwrap()).unwrap();
        let r = triple_massey(&s, &x1, &x1, &x2).unwrap();
        assert_eq!(r.value.representative, a.word(&["x1", "x3"]).unwrap());
        assert_eq!(r.nontrivial, Some(true));
        r.system.validate(&s, &r.classes).unwrap();
        // the general formula agrees for odd middle degree
        let h = higher_massey(&s, &[x1.clone(), x1.clone(), x2.clone()], 0).unwrap();
        assert_eq!(h.value.coords, r.value.coords);
        let x4 = s.class_of(&a.named("x4").unwrap()).unwrap();
        assert!(matches!(
            triple_massey(&s, &x1, &x2, &x4),
            Err(Error::MasseyUndefined(_))
        ));
        assert!(matches!(
            higher_massey(&s, &[x1.clone(), x2.clone(), x4.clone()], 0),
            Err(Error::MasseyUndefined(m)) if m.contains("<a2,a3>")
        ));
    }

    #[test]
    fn kt_formal_trivialization_fails() {
        let c = kt();
        let s = CochainSpace::full(&c).unwrap();
        let split = cn_split(&c).unwrap();
        let a = c.algebra();
        let x1 = s.class_of(&a.named("x1").unwrap()).unwrap();
        let x2 = s.class_of(&a.named("x2").unwrap()).unwrap();
        assert!(matches!(
            formal_trivialization(&s, &split, &[x1.clone(), x1, x2]),
            Err(Error::NoFormalSplit(_))
        ));
    }

    #[test]
    fn sphere_model_trivialization() {
        let alg = Algebra::new(Field::rationals(), [("x", 2), ("y", 3)], Some(10)).unwrap();
        let c = Cdga::from_named(alg.clone(), &[("y", alg.named("x").unwrap().pow(2))]).unwrap();
        let s = CochainSpace::full(&c).unwrap();
        let split = cn_split(&c).unwrap();
        let x = s.class_of(&alg.named("x").unwrap()).unwrap();
        let sys = formal_trivialization(&s, &split, &[x.clone(), x.clone(), x.clone()]).unwrap();
        assert_eq!(sys.get(1, 2), &alg.named("y").unwrap());
        let sys4 = formal_trivialization(&s, &split, &[x.clone(), x.clone(), x.clone(), x.clone()]).unwrap();
        sys4.validate(&s, &[x.clone(), x.clone(), x.clone(), x]).unwrap();
    }

    #[test]
    fn torus_products_trivial() {
        let q = Field::rationals();
        let c = LieAlgebraPresentation::new(&q, 4, &[])
            .unwrap()
            .chevalley_eilenberg_default()
            .unwrap();
        let s = CochainSpace::full(&c).unwrap();
        let a = c.algebra();
        let x1 = s.class_of(&a.named("x1").unwrap()).unwrap();
        let x2 = s.class_of(&a.named("x2").unwrap()).unwrap();
        let r = triple_massey(&s, &x1, &x1, &x1).unwrap();
        assert_eq!(r.nontrivial, Some(false));
        assert!(matches!(
            triple_massey(&s, &x1, &x1, &x2),
            Err(Error::MasseyUndefined(_))
        ));
        let q4 = higher_massey(&s, &[x1.clone(), x1.clone(), x1.clone(), x1.clone()], 0).unwrap();
        assert!(q4.value.is_zero());
        let w = s.class_of(&a.word(&["x3", "x4"]).unwrap()).unwrap();
        let rep = witness_certify(&s, &q4, &w, 3).unwrap();
        assert_eq!(rep.verdict, Verdict::NotCertified);
    }
}
