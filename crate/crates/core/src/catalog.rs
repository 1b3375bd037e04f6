//! Built-in models: the Kodaira–Thurston nilmanifold, tori, the complex
//! Heisenberg nilmanifold with its order-3 action, and related objects.

use crate::cdga::{invariant_subcdga, Cdga, GroupAction, LieAlgebraPresentation, SubCdga};
use crate::error::{Error, Result};
use crate::gca::Element;
use crate::geomcheck::AlmostComplexStructure;
use crate::homology::CochainSpace;
use crate::lattice::{CoordSpec, LatticeModel, Twist};
use crate::scalar::Field;

/// Generator names of the 8-dimensional complex model.
pub const HEISENBERG_NAMES: [&str; 8] = ["mu", "nu", "theta", "eta", "mubar", "nubar", "thetabar", "etabar"];

/// Powers of `zeta_3` by which the action scales each generator.
pub const Z3_EXPONENTS: [i64; 8] = [1, 1, 2, 1, 2, 2, 1, 2];

/// Field used for every computation on the complex model.
pub fn field12() -> Field {
    Field::cyclotomic(12).expect("order 12 is valid")
}

/// `[X1, X2] = -X3`.
pub fn kt_lie() -> LieAlgebraPresentation {
    let q = Field::rationals();
    LieAlgebraPresentation::new(&q, 4, &[(0, 1, vec![(2, q.from_int(-1))])]).expect("valid constants")
}

pub fn kt() -> Cdga {
    kt_lie().chevalley_eilenberg_default().expect("Jacobi holds")
}

/// `x1 x4 + x2 x3`.
pub fn omega_kt(c: &Cdga) -> Element {
    let a = c.algebra();
    &a.word(&["x1", "x4"]).expect("generators") + &a.word(&["x2", "x3"]).expect("generators")
}

/// `X1 -> X2 -> -X1`, `X3 -> X4 -> -X3`.
pub fn j_kt() -> AlmostComplexStructure {
    AlmostComplexStructure::from_images(
        &Field::rationals(),
        4,
        &[vec![(1, 1)], vec![(0, -1)], vec![(3, 1)], vec![(2, -1)]],
    )
    .expect("J^2 = -1")
}

/// `X1 -> X3 -> -X1`, `X2 -> X4 -> -X2`; not integrable.
pub fn j_kt_prime() -> AlmostComplexStructure {
    AlmostComplexStructure::from_images(
        &Field::rationals(),
        4,
        &[vec![(2, 1)], vec![(3, 1)], vec![(0, -1)], vec![(1, -1)]],
    )
    .expect("J^2 = -1")
}

pub fn torus_lie(n: usize) -> LieAlgebraPresentation {
    LieAlgebraPresentation::new(&Field::rationals(), n, &[]).expect("abelian")
}

pub fn torus(n: usize) -> Cdga {
    torus_lie(n).chevalley_eilenberg_default().expect("abelian")
}

/// `x1 x2 + x3 x4 + ...` on the `2m`-torus.
pub fn omega_torus(c: &Cdga) -> Element {
    let a = c.algebra();
    let mut w = a.zero();
    for i in (0..a.num_generators() / 2 * 2).step_by(2) {
        w = &w + &a.word_indices(&[i, i + 1]).expect("generators");
    }
    w
}

/// `[Z1, Z2] = -Z3` and its conjugate, over `Q(zeta_12)`.
pub fn heisenberg_c_lie() -> LieAlgebraPresentation {
    let f = field12();
    LieAlgebraPresentation::new(
        &f,
        8,
        &[(0, 1, vec![(2, f.from_int(-1))]), (4, 5, vec![(6, f.from_int(-1))])],
    )
    .expect("valid constants")
}

/// `d theta = mu nu`, `d thetabar = mubar nubar`, with conjugation.
pub fn heisenberg_c() -> Cdga {
    heisenberg_c_lie()
        .chevalley_eilenberg(&HEISENBERG_NAMES)
        .and_then(|c| {
            c.with_named_conjugation(&[
                ("mu", "mubar"),
                ("nu", "nubar"),
                ("theta", "thetabar"),
                ("eta", "etabar"),
            ])
        })
        .expect("valid model")
}

pub fn z3_action(c: &Cdga) -> Result<GroupAction> {
    GroupAction::diagonal(c, 3, &Z3_EXPONENTS)
}

/// `i mu mubar + nu theta + nubar thetabar + i eta etabar`.
pub fn omega_m(c: &Cdga) -> Result<Element> {
    let a = c.algebra();
    let i = c.field().imaginary_unit()?;
    Ok(
        &(&(&a.word(&["mu", "mubar"])?.scale(&i) + &a.word(&["nu", "theta"])?) + &a.word(&["nubar", "thetabar"])?)
            + &a.word(&["eta", "etabar"])?.scale(&i),
    )
}

pub fn invariant_a(c: &Cdga) -> Result<SubCdga> {
    invariant_subcdga(c, &z3_action(c)?)
}

/// `(u1, u2, u3, u4)` with exponents `(1, 1, 2, 1)` and the Heisenberg
/// correction `a2 * u1` on `u3`.
pub fn lattice_m() -> LatticeModel {
    let plain = |e| CoordSpec {
        exponent: e,
        twist: None,
    };
    LatticeModel {
        coords: vec![
            plain(1),
            plain(1),
            CoordSpec {
                exponent: 2,
                twist: Some(Twist { by: 1, times: 0 }),
            },
            plain(1),
        ],
    }
}

/// A named bundle of related objects.
#[derive(Clone, Debug)]
pub struct Model {
    pub name: String,
    pub cdga: Cdga,
    pub lie: Option<LieAlgebraPresentation>,
    pub action: Option<GroupAction>,
    pub omega: Option<Element>,
    pub j: Option<AlmostComplexStructure>,
    pub sub: Option<SubCdga>,
    pub lattice: Option<LatticeModel>,
}

pub const MODEL_NAMES: [&str; 9] = [
    "kt",
    "omega_kt",
    "torus2n",
    "torus<N>",
    "heisenberg_c",
    "z3_action",
    "omega_m",
    "invariant_A",
    "lattice_m",
];

impl Model {
    /// A model carrying only its CDGA.
    pub fn bare(name: &str, cdga: Cdga) -> Model {
        Model {
            name: name.to_string(),
            cdga,
            lie: None,
            action: None,
            omega: None,
            j: None,
            sub: None,
            lattice: None,
        }
    }

    /// Cochain space of the sub-CDGA when there is one, else of the CDGA.
    pub fn space(&self) -> Result<CochainSpace> {
        match &self.sub {
            Some(sub) => CochainSpace::sub(sub),
            None => CochainSpace::full(&self.cdga),
        }
    }
}

pub fn lookup(name: &str) -> Result<Model> {
    let bundle = Model::bare;
    match name {
        "kt" | "omega_kt" => {
            let c = kt();
            let omega = omega_kt(&c);
            Ok(Model {
                lie: Some(kt_lie()),
                omega: Some(omega),
                j: Some(j_kt()),
                ..bundle(name, c)
            })
        }
        "heisenberg_c" | "z3_action" | "omega_m" | "invariant_A" | "lattice_m" => {
            let c = heisenberg_c();
            let action = z3_action(&c)?;
            let sub = if name == "invariant_A" {
                Some(invariant_subcdga(&c, &action)?)
            } else {
                None
            };
            Ok(Model {
                lie: Some(heisenberg_c_lie()),
                omega: Some(omega_m(&c)?),
                action: Some(action),
                sub,
                lattice: Some(lattice_m()),
                ..bundle(name, c)
            })
        }
        _ => {
            let n = match name {
                "torus" | "torus2n" => Some(4),
                _ => name.strip_prefix("torus").and_then(|s| s.parse::<usize>().ok()),
            };
            match n {
                Some(n) if n > 0 => {
                    let c = torus(n);
                    let omega = (n % 2 == 0).then(|| omega_torus(&c));
                    Ok(Model {
                        lie: Some(torus_lie(n)),
                        omega,
                        ..bundle(name, c)
                    })
                }
                _ => Err(Error::UnknownModel(name.to_string())),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        for name in [
            "kt",
            "omega_kt",
            "torus2n",
            "torus6",
            "heisenberg_c",
            "z3_action",
            "omega_m",
            "lattice_m",
        ] {
            lookup(name).unwrap();
        }
        assert!(matches!(lookup("nope"), Err(Error::UnknownModel(_))));
        assert!(matches!(lookup("torus0"), Err(Error::UnknownModel(_))));
    }

    #[test]
    fn action_images() {
        let c = heisenberg_c();
        let act = z3_action(&c).unwrap();
        let f = c.field();
        let z = f.root_of_unity(3, 1).unwrap();
        let a = c.algebra();
        assert_eq!(act.images()[0], a.named("mu").unwrap().scale(&z));
        assert_eq!(act.images()[4], a.named("mubar").unwrap().scale(&z.conj()));
        // conjugate exponents come from conjugating the scalars
        for k in 0..4 {
            assert_eq!(
                f.root_of_unity(3, Z3_EXPONENTS[k]).unwrap().conj(),
                f.root_of_unity(3, Z3_EXPONENTS[k + 4]).unwrap()
            );
        }
    }

    #[test]
    fn omega_m_properties() {
        let c = heisenberg_c();
        let w = omega_m(&c).unwrap();
        assert!(c.reality_check(&w).unwrap());
        assert!(c.d(&w).is_zero());
        assert_eq!(z3_action(&c).unwrap().apply(&w), w);
        assert!(!w.pow(4).is_zero());
    }
}
