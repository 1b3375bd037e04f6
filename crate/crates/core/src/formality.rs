//! Minimality checks, the canonical `C + N` split of the generating space,
//! and the search for closed, non-exact elements of the ideal `I(N)`.

use serde::Serialize;

use crate::cdga::Cdga;
use crate::error::{Error, Result};
use crate::gca::{Algebra, Element};
use crate::homology::CochainSpace;
use crate::linalg::{Matrix, SpanSolver, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub minimal: bool,
    /// Generator indices in an order with `d x_j` in `Lambda(x_i : i before j)`.
    pub order: Option<Vec<usize>>,
    pub reason: Option<String>,
}

/// No linear part in `d`, and a generator order making `d` strictly
/// lower-triangular.
pub fn minimality_check(c: &Cdga) -> MinimalityReport {
    let alg = c.algebra();
    for (g, dx) in alg.generators().iter().zip(c.differential()) {
        if dx.terms().keys().any(|m| m.indices().len() == 1) {
            return MinimalityReport {
                minimal: false,
                order: None,
                reason: Some(format!("d({}) = {} has a linear part", g.name, dx)),
            };
        }
    }
    let n = alg.num_generators();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&i| {
            !placed[i]
                && c.differential()[i]
                    .terms()
                    .keys()
                    .all(|m| m.indices().iter().all(|&j| placed[j]))
        });
        match next {
            Some(i) => {
                placed[i] = true;
                order.push(i);
            }
            None => {
                let stuck: Vec<&str> = (0..n)
                    .filter(|&i| !placed[i])
                    .map(|i| alg.generators()[i].name.as_str())
                    .collect();
                return MinimalityReport {
                    minimal: false,
                    order: None,
                    reason: Some(format!("no triangular order for {}", stuck.join(", "))),
                };
            }
        }
    }
    MinimalityReport {
        minimal: true,
        order: Some(order),
        reason: None,
    }
}

/// `V = C + N` with `d = 0` on `C` and `d` injective on `N`.
#[derive(Clone, Debug)]
pub struct CnSplit {
    cdga: Cdga,
    /// Linear combinations of generators, ascending degree.
    c: Vec<Element>,
    n: Vec<Element>,
    /// Adapted generators: per degree, the `C` part then the `N` part.
    adapted: Vec<(Element, bool)>,
    shadow: Algebra,
}

impl CnSplit {
    pub fn c(&self) -> &[Element] {
        &self.c
    }

    pub fn n(&self) -> &[Element] {
        &self.n
    }

    pub fn cdga(&self) -> &Cdga {
        &self.cdga
    }

    /// Adapted-basis monomials of degree `k`, paired with whether they lie
    /// in `I(N)`.
    fn adapted_monomials(&self, k: u32) -> Result<Vec<(Element, bool)>> {
        let images: Vec<Element> = self.adapted.iter().map(|(e, _)| e.clone()).collect();
        self.shadow
            .basis(k)?
            .into_iter()
            .map(|m| {
                let in_ideal = m.indices().iter().any(|&i| self.adapted[i].1);
                let e = self.shadow.monomial(m).substitute(&images, self.cdga.algebra())?;
                Ok((e, in_ideal))
            })
            .collect()
    }

    /// Spanning set of `I(N)` in degree `k` (linearly independent).
    pub fn ideal_basis(&self, k: u32) -> Result<Vec<Element>> {
        Ok(self
            .adapted_monomials(k)?
            .into_iter()
            .filter_map(|(e, inside)| inside.then_some(e))
            .collect())
    }

    /// Splits a homogeneous element as `beta + eta` with `beta` in `Lambda C`
    /// and `eta` in `I(N)`.
    pub fn decompose(&self, a: &Element) -> Result<(Element, Element)> {
        let alg = self.cdga.algebra();
        let Some(k) = a.homogeneous_degree() else {
            return Ok((a.clone(), alg.zero()));
        };
        let adapted = self.adapted_monomials(k)?;
        let monos = alg.basis(k)?;
        let vecs: Vec<Vector> = adapted
            .iter()
            .map(|(e, _)| e.coordinates(&monos).expect("degree-k monomials"))
            .collect();
        let solver = SpanSolver::new(alg.field(), monos.len(), &vecs);
        let coeffs = a
            .coordinates(&monos)
            .and_then(|v| solver.coordinates(&v))
            .ok_or_else(|| Error::Internal("adapted monomials do not span".into()))?;
        let (mut beta, mut eta) = (alg.zero(), alg.zero());
        for ((e, inside), c) in adapted.iter().zip(&coeffs) {
            if c.is_zero() {
                continue;
            }
            if *inside {
                eta = &eta + &e.scale(c);
            } else {
                beta = &beta + &e.scale(c);
            }
        }
        Ok((beta, eta))
    }
}

/// Canonical split: per generator degree, `C` is the echelon basis of
/// `ker d` and `N` the unit vectors off its pivot columns.
pub fn cn_split(c: &Cdga) -> Result<CnSplit> {
    let report = minimality_check(c);
    if !report.minimal {
        return Err(Error::NotMinimal(report.reason.unwrap_or_default()));
    }
    let alg = c.algebra();
    let field = alg.field();
    let mut degrees: Vec<u32> = alg.generators().iter().map(|g| g.degree).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let (mut cs, mut ns, mut adapted) = (Vec::new(), Vec::new(), Vec::new());
    let mut shadow_gens = Vec::new();
    for k in degrees {
        let idx: Vec<usize> = (0..alg.num_generators())
            .filter(|&i| alg.generators()[i].degree == k)
            .collect();
        let target = alg.basis(k + 1)?;
        let columns: Vec<Vector> = idx
            .iter()
            .map(|&i| c.differential()[i].coordinates(&target).expect("d has degree k + 1"))
            .collect();
        let dm = Matrix::from_columns(field, target.len(), &columns);
        let kernel = dm.kernel();
        let pivots: Vec<usize> = kernel
            .iter()
            .map(|v| v.iter().position(|x| !x.is_zero()).expect("nonzero kernel vector"))
            .collect();
        let to_element = |v: &[crate::scalar::Scalar]| {
            let mut e = alg.zero();
            for (&i, x) in idx.iter().zip(v) {
                if !x.is_zero() {
                    e = &e + &alg.generator(i).scale(x);
                }
            }
            e
        };
        let n_vecs: Vec<Vector> = (0..idx.len())
            .filter(|p| !pivots.contains(p))
            .map(|p| {
                let mut v = vec![field.zero(); idx.len()];
                v[p] = field.one();
                v
            })
            .collect();
        let images: Vec<Vector> = n_vecs.iter().map(|v| dm.apply(v)).collect();
        if Matrix::from_rows(field, target.len(), images).rank() != n_vecs.len() {
            return Err(Error::Internal(format!("d not injective on N in degree {k}")));
        }
        for v in &kernel {
            let e = to_element(v);
            cs.push(e.clone());
            adapted.push((e, false));
            shadow_gens.push((format!("c{}", shadow_gens.len()), k));
        }
        for v in &n_vecs {
            let e = to_element(v);
            ns.push(e.clone());
            adapted.push((e, true));
            shadow_gens.push((format!("n{}", shadow_gens.len()), k));
        }
    }
    let shadow = Algebra::new(field.clone(), shadow_gens, alg.cap())?;
    Ok(CnSplit {
        cdga: c.clone(),
        c: cs,
        n: ns,
        adapted,
        shadow,
    })
}

/// First closed, non-exact element of `I(N)` in degrees `1..=up_to`
/// (default: top degree), searching degrees in increasing order.
pub fn nonformality_witness(c: &Cdga, up_to: Option<u32>) -> Result<Option<Element>> {
    let split = cn_split(c)?;
    let space = CochainSpace::full(c)?;
    witness_in(&split, &space, up_to)
}

pub(crate) fn witness_in(split: &CnSplit, space: &CochainSpace, up_to: Option<u32>) -> Result<Option<Element>> {
    let top = space.top_degree();
    let limit = up_to.unwrap_or(top).min(top);
    let alg = space.algebra();
    for k in 1..=limit {
        let basis = split.ideal_basis(k)?;
        if basis.is_empty() {
            continue;
        }
        let target = alg.basis(k + 1)?;
        let columns: Vec<Vector> = basis
            .iter()
            .map(|b| space.cdga().d(b).coordinates(&target).expect("degree k + 1"))
            .collect();
        let dm = Matrix::from_columns(alg.field(), target.len(), &columns);
        for v in dm.kernel() {
            let mut z = alg.zero();
            for (b, x) in basis.iter().zip(&v) {
                if !x.is_zero() {
                    z = &z + &b.scale(x);
                }
            }
            if !space.is_exact(k, &z)? {
                return Ok(Some(z));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct FormalityReport {
    pub minimality: MinimalityReport,
    pub split: Option<CnSplit>,
    pub witness: Option<Element>,
    pub searched_up_to: u32,
}

impl FormalityReport {
    pub fn verdict(&self) -> &'static str {
        match (&self.split, &self.witness) {
            (None, _) => "not minimal",
            (Some(_), Some(_)) => "non-formal",
            (Some(_), None) => "criterion satisfied for canonical split",
        }
    }
}

pub fn formality_report(c: &Cdga, up_to: Option<u32>) -> Result<FormalityReport> {
    let minimality = minimality_check(c);
    let top = c.top_degree()?;
    let searched_up_to = up_to.unwrap_or(top).min(top);
    if !minimality.minimal {
        return Ok(FormalityReport {
            minimality,
            split: None,
            witness: None,
            searched_up_to,
        });
    }
    let split = cn_split(c)?;
    let space = CochainSpace::full(c)?;
    let witness = witness_in(&split, &space, Some(searched_up_to))?;
    Ok(FormalityReport {
        minimality,
        split: Some(split),
        witness,
        searched_up_to,
    })
}
