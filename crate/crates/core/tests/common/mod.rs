//! Strategies and property bodies shared by the property suite and the
//! acceptance target.

#![allow(dead_code)]

use cdga_lab::catalog;
use cdga_lab::cdga::{Cdga, GroupAction, LieAlgebraPresentation};
use cdga_lab::gca::{Algebra, Element};
use cdga_lab::homology::CochainSpace;
use cdga_lab::massey::{higher_massey, triple_massey};
use cdga_lab::scalar::{rational, Field};
use cdga_lab::Error;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 200;

/// Rational coefficients as `(numerator, denominator)` pairs.
pub type Coeffs = Vec<(i64, i64)>;

pub fn config() -> Config {
    Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    }
}

/// Small rationals, zero about a third of the time.
pub fn coeff() -> impl Strategy<Value = (i64, i64)> {
    prop_oneof![Just((0, 1)), (-4i64..=4, 1i64..=3)]
}

pub fn coeffs(len: usize) -> impl Strategy<Value = Coeffs> {
    prop::collection::vec(coeff(), len)
}

/// Combination of the degree-`k` basis with coefficients taken cyclically.
pub fn combination(alg: &Algebra, k: u32, cs: &[(i64, i64)]) -> Element {
    let basis = alg.basis(k).unwrap();
    let field = alg.field();
    let mut out = alg.zero();
    for (i, m) in basis.into_iter().enumerate() {
        let (n, d) = cs[i % cs.len()];
        out = &out + &alg.monomial(m).scale(&field.from_rational(rational(n, d)));
    }
    out
}

/// Exterior generators `a, b, c` in degree 1, `e` in degree 3 and an even
/// `y` in degree 2, truncated above degree 8.
pub fn mixed_algebra() -> Algebra {
    Algebra::new(
        Field::rationals(),
        [("a", 1), ("b", 1), ("c", 1), ("y", 2), ("e", 3)],
        Some(8),
    )
    .unwrap()
}

fn sign(k: u32) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn wedge_sign_law(ka: u32, kb: u32, ca: &[(i64, i64)], cb: &[(i64, i64)]) -> Result<(), TestCaseError> {
    let alg = mixed_algebra();
    let a = combination(&alg, ka, ca);
    let b = combination(&alg, kb, cb);
    let ab = a.wedge(&b).unwrap();
    let ba = b.wedge(&a).unwrap();
    prop_assert_eq!(&ab, &ba.scale(&alg.field().from_int(sign(ka * kb))));
    if ka % 2 == 1 {
        prop_assert!(a.wedge(&a).unwrap().is_zero());
    }
    Ok(())
}

/// Strategy for `wedge_sign_law`.
pub fn wedge_inputs() -> impl Strategy<Value = (u32, u32, Coeffs, Coeffs)> {
    (0u32..=4, 0u32..=4, coeffs(7), coeffs(5))
}

/// `d^2 = 0` and the Leibniz rule on the named catalog models.
pub fn d_squared_and_leibniz(
    model: usize,
    ka: u32,
    kb: u32,
    ca: &[(i64, i64)],
    cb: &[(i64, i64)],
) -> Result<(), TestCaseError> {
    let c: Cdga = match model % 3 {
        0 => catalog::kt(),
        1 => catalog::heisenberg_c(),
        _ => sphere_model(),
    };
    let alg = c.algebra();
    let top = c.top_degree().unwrap();
    let (ka, kb) = (ka.min(top), kb.min(top));
    let a = combination(alg, ka, ca);
    let b = combination(alg, kb, cb);
    prop_assert!(c.d(&c.d(&a)).is_zero());
    let lhs = c.d(&a.wedge(&b).unwrap());
    let rhs = &c.d(&a).wedge(&b).unwrap() + &a.wedge(&c.d(&b)).unwrap().scale(&alg.field().from_int(sign(ka)));
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn d_inputs() -> impl Strategy<Value = (usize, u32, u32, Coeffs, Coeffs)> {
    (0usize..3, 0u32..=4, 0u32..=3, coeffs(11), coeffs(7))
}

/// `x` in degree 2, `y` in degree 3 with `d y = x^2`, truncated at 10.
pub fn sphere_model() -> Cdga {
    let alg = Algebra::new(Field::rationals(), [("x", 2), ("y", 3)], Some(10)).unwrap();
    let x2 = alg.named("x").unwrap().pow(2);
    Cdga::from_named(alg, &[("y", x2)]).unwrap()
}

/// Random antisymmetric constants in dimension 4: the Jacobi identity holds
/// exactly when the Chevalley–Eilenberg differential squares to zero.
pub fn jacobi_iff_d_squared(entries: &[i64]) -> Result<(), TestCaseError> {
    let q = Field::rationals();
    let n = 4;
    let mut table = Vec::new();
    let mut it = entries.iter().copied();
    for i in 0..n {
        for j in i + 1..n {
            let coeffs: Vec<(usize, _)> = (0..n)
                .filter_map(|k| {
                    let c = it.next().unwrap_or(0);
                    (c != 0).then(|| (k, q.from_int(c)))
                })
                .collect();
            table.push((i, j, coeffs));
        }
    }
    let lie = LieAlgebraPresentation::new(&q, n, &table).unwrap();
    let jacobi = lie.jacobi_violation().is_none();
    match lie.chevalley_eilenberg_default() {
        Ok(c) => {
            prop_assert!(jacobi);
            for x in 0..n {
                prop_assert!(c.d(&c.d(&c.algebra().generator(x))).is_zero());
            }
        }
        Err(Error::Jacobi { .. }) => prop_assert!(!jacobi),
        Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
    }
    Ok(())
}

/// Sparse constants in `{-1, 0, 1}`, mostly zero so that both outcomes occur.
pub fn lie_inputs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![6 => Just(0i64), 1 => Just(1), 1 => Just(-1)], 24)
}

/// Cup products do not depend on representatives: on KT, shifting closed
/// `a, b` by coboundaries leaves `[a][b] = [a b]` unchanged.
pub fn cup_independence(
    ka: u32,
    kb: u32,
    za: &[(i64, i64)],
    zb: &[(i64, i64)],
    ua: &[(i64, i64)],
) -> Result<(), TestCaseError> {
    let c = catalog::kt();
    let space = CochainSpace::full(&c).unwrap();
    let closed = |k: u32, cs: &[(i64, i64)]| -> Element {
        let cycles = space.cycles(k).unwrap();
        let mut coords = vec![space.field().zero(); space.dim(k)];
        for (i, z) in cycles.iter().enumerate() {
            let (n, d) = cs[i % cs.len()];
            let s = space.field().from_rational(rational(n, d));
            for (x, y) in coords.iter_mut().zip(z) {
                *x += &(y * &s);
            }
        }
        space.element(k, &coords)
    };
    let a = closed(ka, za);
    let b = closed(kb, zb);
    prop_assert!(c.d(&a).is_zero());
    let shift = if ka >= 1 {
        c.d(&combination(c.algebra(), ka - 1, ua))
    } else {
        c.algebra().zero()
    };
    let a2 = &a + &shift;
    let (ca, cb) = (space.class_in(ka, &a).unwrap(), space.class_in(kb, &b).unwrap());
    prop_assert_eq!(&space.class_in(ka, &a2).unwrap().coords, &ca.coords);
    let prod = space.cup(&ca, &cb).unwrap();
    prop_assert_eq!(
        &prod.coords,
        &space.class_in(ka + kb, &a2.wedge(&b).unwrap()).unwrap().coords
    );
    Ok(())
}

pub fn cup_inputs() -> impl Strategy<Value = (u32, u32, Coeffs, Coeffs, Coeffs)> {
    (0u32..=2, 0u32..=2, coeffs(5), coeffs(5), coeffs(4))
}

/// Triples `<a, b, c>` from `span([x1], [x2])` on KT are always defined;
/// every defining-system entry has degree `sum |a_k| - (j - i)` and the
/// value lies in degree `sum - 1`. Higher products are checked whenever
/// they are defined.
pub fn massey_bookkeeping(cs: &[(i64, i64)], seed: u64, quad: bool) -> Result<(), TestCaseError> {
    let c = catalog::kt();
    let space = CochainSpace::full(&c).unwrap();
    let alg = c.algebra();
    let f = space.field();
    let class = |p: (i64, i64), q: (i64, i64)| {
        let e = &alg.named("x1").unwrap().scale(&f.from_rational(rational(p.0, p.1)))
            + &alg.named("x2").unwrap().scale(&f.from_rational(rational(q.0, q.1)));
        space.class_in(1, &e).unwrap()
    };
    let t = if quad { 4 } else { 3 };
    let classes: Vec<_> = (0..t).map(|k| class(cs[2 * k], cs[2 * k + 1])).collect();
    let result = if quad {
        match higher_massey(&space, &classes, seed) {
            Ok(r) => r,
            Err(Error::MasseyUndefined(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    } else if seed == 0 {
        triple_massey(&space, &classes[0], &classes[1], &classes[2]).map_err(|e| TestCaseError::fail(e.to_string()))?
    } else {
        higher_massey(&space, &classes, seed).map_err(|e| TestCaseError::fail(e.to_string()))?
    };
    let degrees: Vec<u32> = classes.iter().map(|c| c.degree).collect();
    for (&(i, j), a) in &result.system.alpha {
        let want: u32 = degrees[i - 1..j].iter().sum::<u32>() - (j - i) as u32;
        prop_assert!(
            a.is_zero() || a.has_degree(want),
            "alpha_({},{}) = {} not of degree {}",
            i,
            j,
            a,
            want
        );
    }
    prop_assert_eq!(result.value.degree, degrees.iter().sum::<u32>() - (t as u32 - 2));
    result
        .system
        .validate(&space, &classes)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    Ok(())
}

pub fn massey_inputs() -> impl Strategy<Value = (Coeffs, u64, bool)> {
    (coeffs(8), 0u64..4, any::<bool>())
}

/// The averaging projector of the order-3 action is idempotent, lands in
/// the invariants and commutes with `d`.
pub fn projector_idempotent(k: u32, cs: &[(i64, i64)]) -> Result<(), TestCaseError> {
    thread_local! {
        static MODEL: (Cdga, GroupAction) = {
            let c = catalog::heisenberg_c();
            let a = catalog::z3_action(&c).unwrap();
            (c, a)
        };
    }
    MODEL.with(|(c, act)| {
        let a = combination(c.algebra(), k, cs);
        let p = act.average(&a);
        prop_assert_eq!(&act.average(&p), &p);
        prop_assert_eq!(&act.apply(&p), &p);
        prop_assert_eq!(act.average(&c.d(&a)), c.d(&p));
        Ok(())
    })
}

pub fn projector_inputs() -> impl Strategy<Value = (u32, Coeffs)> {
    (0u32..=3, coeffs(13))
}

/// Runs one property with the shared configuration; used where the
/// `proptest!` macro is not.
pub fn run_property<S, F>(strategy: S, test: F) -> Result<(), String>
where
    S: Strategy,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    let mut runner = TestRunner::new(config());
    runner.run(&strategy, test).map_err(|e| e.to_string())
}
