//! Fixed points of a cyclic order-3 action on a quotient of `C^m` by a
//! (possibly Heisenberg-twisted) lattice built from `Gamma = Z + Z zeta_3`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Field, Rational, Scalar};

/// The left action of a lattice element `a` on coordinate `k` adds
/// `a_by * u_times` on top of `a_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Twist {
    pub by: usize,
    #[serde(default)]
    pub times: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordSpec {
    /// The action multiplies this coordinate by `zeta^exponent`.
    pub exponent: i64,
    pub twist: Option<Twist>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeModel {
    pub coords: Vec<CoordSpec>,
}

/// Lattice translates `a + b zeta` with `a, b` in `offset + [-radius, radius]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub radius: i64,
    pub offset: (i64, i64),
}

impl Default for Window {
    fn default() -> Self {
        Window {
            radius: 2,
            offset: (0, 0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointReport {
    pub total: u64,
    /// Solutions per untwisted coordinate.
    pub per_coordinate: Vec<usize>,
    /// Solutions of each twisted coordinate per base point.
    pub per_fiber: Vec<usize>,
}

type Point = (Rational, Rational);

struct Ctx {
    field: Field,
    window: Window,
}

impl Ctx {
    fn point(&self, p: &Point) -> Scalar {
        self.field
            .from_coeffs(vec![p.0.clone(), p.1.clone()])
            .expect("degree-2 field")
    }

    fn reduce(&self, x: &Scalar) -> Point {
        let fract = |r: &Rational| r - r.floor();
        (fract(&x.coeffs()[0]), fract(&x.coeffs()[1]))
    }

    /// `(zeta^e - 1) u` in `shift + Gamma`, modulo `Gamma`.
    fn solve(&self, e: i64, shift: &Scalar) -> Result<BTreeSet<Point>> {
        let factor = &self.field.zeta_pow(e) - &self.field.one();
        let inv = factor.inv().expect("nontrivial exponent");
        let norm = norm(&factor);
        let w = self.window;
        let mut out = BTreeSet::new();
        for a in w.offset.0 - w.radius..=w.offset.0 + w.radius {
            for b in w.offset.1 - w.radius..=w.offset.1 + w.radius {
                let g = &self.field.from_int(a) + &self.field.zeta_pow(1).scale(&Rational::from_integer(b.into()));
                out.insert(self.reduce(&(&(&g + shift) * &inv)));
            }
        }
        if out.len() as u64 != norm {
            return Err(Error::Window(format!(
                "found {} of {norm} classes with radius {}",
                out.len(),
                w.radius
            )));
        }
        Ok(out)
    }
}

/// `|N(x)|` for `x` in `Q(zeta_3)`, as an integer.
fn norm(x: &Scalar) -> u64 {
    use num::{Signed, ToPrimitive};
    let n = (x * &x.conj()).as_rational().expect("norm is rational").clone();
    n.abs().to_integer().to_u64().expect("small norm")
}

pub fn count_fixed_points(model: &LatticeModel, window: Window) -> Result<FixedPointReport> {
    if model.coords.is_empty() {
        return Err(Error::Dimension("lattice model has no coordinates".into()));
    }
    for (k, c) in model.coords.iter().enumerate() {
        if c.exponent.rem_euclid(3) == 0 {
            return Err(Error::WholeSpaceFixed(k as u32));
        }
        if let Some(t) = c.twist {
            for idx in [t.by, t.times] {
                if idx >= model.coords.len() || idx == k || model.coords[idx].twist.is_some() {
                    return Err(Error::Parse(format!(
                        "coordinate {k}: twist must reference an untwisted coordinate"
                    )));
                }
            }
        }
    }
    let ctx = Ctx {
        field: Field::cyclotomic(3)?,
        window,
    };
    let zero = ctx.field.zero();
    let base: Vec<usize> = (0..model.coords.len())
        .filter(|&k| model.coords[k].twist.is_none())
        .collect();
    let sols: Vec<Vec<Point>> = base
        .iter()
        .map(|&k| {
            ctx.solve(model.coords[k].exponent, &zero)
                .map(|s| s.into_iter().collect())
        })
        .collect::<Result<_>>()?;
    let per_coordinate: Vec<usize> = sols.iter().map(Vec::len).collect();

    let mut total = 0u64;
    let mut per_fiber = Vec::new();
    let mut choice = vec![0usize; base.len()];
    loop {
        let value = |k: usize| -> Scalar {
            let pos = base.iter().position(|&b| b == k).expect("untwisted");
            ctx.point(&sols[pos][choice[pos]])
        };
        let mut count = 1u64;
        for (k, c) in model.coords.iter().enumerate() {
            let Some(t) = c.twist else { continue };
            let e_by = model.coords[t.by].exponent;
            let a_by = &(&ctx.field.zeta_pow(e_by) - &ctx.field.one()) * &value(t.by);
            let shift = &a_by * &value(t.times);
            let n = ctx.solve(model.coords[k].exponent, &shift)?.len();
            per_fiber.push(n);
            count *= n as u64;
        }
        total += count;
        // odometer over the untwisted solutions
        let mut i = 0;
        while i < choice.len() {
            choice[i] += 1;
            if choice[i] < sols[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            break;
        }
    }
    per_fiber.sort_unstable();
    per_fiber.dedup();
    Ok(FixedPointReport {
        total,
        per_coordinate,
        per_fiber,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heisenberg() -> LatticeModel {
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

    #[test]
    fn eighty_one() {
        let r = count_fixed_points(&heisenberg(), Window::default()).unwrap();
        assert_eq!(r.total, 81);
        assert_eq!(r.per_coordinate, vec![3, 3, 3]);
        assert_eq!(r.per_fiber, vec![3]);
    }

    #[test]
    fn single_coordinate() {
        let m = LatticeModel {
            coords: vec![CoordSpec {
                exponent: 1,
                twist: None,
            }],
        };
        assert_eq!(count_fixed_points(&m, Window::default()).unwrap().total, 3);
        let m2 = LatticeModel {
            coords: vec![CoordSpec {
                exponent: 2,
                twist: None,
            }],
        };
        assert_eq!(count_fixed_points(&m2, Window::default()).unwrap().total, 3);
    }

    #[test]
    fn window_translation_invariance() {
        for offset in [(0, 0), (5, -3), (-7, 11)] {
            let w = Window { radius: 2, offset };
            assert_eq!(count_fixed_points(&heisenberg(), w).unwrap().total, 81);
        }
    }

    #[test]
    fn degenerate_inputs() {
        let m = LatticeModel {
            coords: vec![CoordSpec {
                exponent: 3,
                twist: None,
            }],
        };
        assert!(matches!(
            count_fixed_points(&m, Window::default()),
            Err(Error::WholeSpaceFixed(0))
        ));
        let tiny = Window {
            radius: 0,
            offset: (0, 0),
        };
        assert!(matches!(count_fixed_points(&heisenberg(), tiny), Err(Error::Window(_))));
    }

    #[test]
    fn json_shape() {
        let text = r#"{"coords":[{"exponent":1,"twist":null},{"exponent":1,"twist":null},{"exponent":2,"twist":{"by":1}},{"exponent":1,"twist":null}]}"#;
        let m: LatticeModel = serde_json::from_str(text).unwrap();
        assert_eq!(m, heisenberg());
    }
}
