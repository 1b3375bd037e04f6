//! Floating-point verification of an equivariant isotopy in `SO(4)` and
//! `SO(8)`: the coordinate change `Theta`, the path from the identity to
//! it, a smoothing reparametrization, and the local diffeomorphism `f`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub type RealMatrix = DMatrix<f64>;

fn mat4(rows: [[f64; 4]; 4]) -> RealMatrix {
    RealMatrix::from_fn(4, 4, |i, j| rows[i][j])
}

/// `max |a_ij|`.
pub fn max_abs(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn distance(a: &RealMatrix, b: &RealMatrix) -> f64 {
    max_abs(&(a - b))
}

/// Matrix exponential by scaling and squaring with the degree-13 Padé
/// approximant.
pub fn expm(a: &RealMatrix) -> RealMatrix {
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    const THETA13: f64 = 5.371920351148152;
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = if norm1 > THETA13 {
        (norm1 / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a / 2f64.powi(s);
    let id = RealMatrix::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * B[13] + &a4 * B[11] + &a2 * B[9]) + &a6 * B[7] + &a4 * B[5] + &a2 * B[3] + &id * B[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * B[12] + &a4 * B[10] + &a2 * B[8]) + &a6 * B[6] + &a4 * B[4] + &a2 * B[2] + &id * B[0];
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).expect("Pade denominator is invertible");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SoCheck {
    pub orthogonality_defect: f64,
    pub determinant: f64,
    pub member: bool,
}

/// `max |A^T A - I| <= tol` and `det A > 0`.
pub fn so_check(a: &RealMatrix, tol: f64) -> SoCheck {
    let n = a.nrows();
    let defect = distance(&(a.transpose() * a), &RealMatrix::identity(n, n));
    let det = a.determinant();
    SoCheck {
        orthogonality_defect: defect,
        determinant: det,
        member: a.is_square() && defect <= tol && det > 0.0,
    }
}

/// The 4x4 target `theta`.
pub fn theta() -> RealMatrix {
    let r = FRAC_1_SQRT_2;
    mat4([[r, 0., 0., r], [0., r, r, 0.], [0., r, -r, 0.], [r, 0., 0., -r]])
}

pub fn theta_prime() -> RealMatrix {
    let r = FRAC_1_SQRT_2;
    mat4([[r, 0., 0., -r], [0., r, -r, 0.], [0., r, r, 0.], [r, 0., 0., r]])
}

pub fn q_matrix() -> RealMatrix {
    mat4([[0., 0., 0., -1.], [0., 0., -1., 0.], [0., 1., 0., 0.], [1., 0., 0., 0.]])
}

pub fn p_matrix() -> RealMatrix {
    mat4([[0., 0., 0., 1.], [0., 0., 1., 0.], [0., 1., 0., 0.], [1., 0., 0., 0.]])
}

fn rotation(angle: f64) -> [[f64; 2]; 2] {
    let (s, c) = angle.sin_cos();
    [[c, -s], [s, c]]
}

/// Order-3 action on `(s2, t2, s3, t3)`: rotation by `zeta` then by `zeta^2`.
pub fn upsilon() -> RealMatrix {
    let a = rotation(2.0 * PI / 3.0);
    let b = rotation(-2.0 * PI / 3.0);
    mat4([
        [a[0][0], a[0][1], 0., 0.],
        [a[1][0], a[1][1], 0., 0.],
        [0., 0., b[0][0], b[0][1]],
        [0., 0., b[1][0], b[1][1]],
    ])
}

/// Action on all eight real coordinates.
pub fn upsilon8() -> RealMatrix {
    let mut m = embed_so4_to_so8(&upsilon());
    let r = rotation(2.0 * PI / 3.0);
    for off in [0, 6] {
        for i in 0..2 {
            for j in 0..2 {
                m[(off + i, off + j)] = r[i][j];
            }
        }
    }
    m
}

/// The 8x8 coordinate-change matrix.
pub fn theta8() -> RealMatrix {
    let r = FRAC_1_SQRT_2;
    let mut m = RealMatrix::identity(8, 8);
    let block = [[r, 0., 0., r], [0., r, r, 0.], [0., r, -r, 0.], [r, 0., 0., -r]];
    for i in 0..4 {
        for j in 0..4 {
            m[(2 + i, 2 + j)] = block[i][j];
        }
    }
    m
}

pub fn p1(s: f64) -> RealMatrix {
    let (sn, c) = (FRAC_PI_2 * s).sin_cos();
    mat4([[0., 0., sn, c], [0., 0., c, -sn], [sn, c, 0., 0.], [c, -sn, 0., 0.]])
}

pub fn p2(s: f64) -> RealMatrix {
    let (sn, c) = (FRAC_PI_2 * s).sin_cos();
    mat4([[sn, 0., c, 0.], [0., sn, 0., -c], [c, 0., -sn, 0.], [0., -c, 0., -sn]])
}

pub fn p3(s: f64) -> RealMatrix {
    let (sn, c) = (PI * s).sin_cos();
    mat4([[1., 0., 0., 0.], [0., 1., 0., 0.], [0., 0., -c, sn], [0., 0., -sn, -c]])
}

/// `P1 * P2 * P3`, each piece on a third of `[0, 1]`.
pub fn p_path(s: f64) -> RealMatrix {
    if s <= 1.0 / 3.0 {
        p1(3.0 * s)
    } else if s <= 2.0 / 3.0 {
        p2(3.0 * s - 1.0)
    } else {
        p3(3.0 * s - 2.0)
    }
}

/// `exp(s Q)` for `s` in `[0, pi/4]`.
pub fn gamma(s: f64) -> RealMatrix {
    expm(&(q_matrix() * s))
}

type Evaluator = Arc<dyn Fn(f64) -> RealMatrix + Send + Sync>;

/// Matrix-valued path on `[0, 1]` with the parameters where pieces meet.
#[derive(Clone)]
pub struct MatrixPath {
    evaluator: Evaluator,
    junctions: Vec<f64>,
}

impl fmt::Debug for MatrixPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixPath")
            .field("junctions", &self.junctions)
            .finish()
    }
}

impl MatrixPath {
    pub fn new(evaluator: impl Fn(f64) -> RealMatrix + Send + Sync + 'static, junctions: Vec<f64>) -> Self {
        MatrixPath {
            evaluator: Arc::new(evaluator),
            junctions,
        }
    }

    pub fn constant(m: RealMatrix) -> Self {
        MatrixPath::new(move |_| m.clone(), Vec::new())
    }

    pub fn at(&self, t: f64) -> RealMatrix {
        (self.evaluator)(t.clamp(0.0, 1.0))
    }

    pub fn junctions(&self) -> &[f64] {
        &self.junctions
    }

    /// `t -> embed(self(t))`.
    pub fn embedded(&self) -> MatrixPath {
        let inner = self.clone();
        MatrixPath::new(move |t| embed_so4_to_so8(&inner.at(t)), self.junctions.clone())
    }
}

/// `Psi = gamma * theta(.)`: `gamma` on `[0, 1/2]`, then `P(1 - s) theta'`.
pub fn build_equivariant_path() -> MatrixPath {
    let tp = theta_prime();
    MatrixPath::new(
        move |t| {
            if t <= 0.5 {
                gamma(FRAC_PI_4 * 2.0 * t)
            } else {
                let s = 2.0 * t - 1.0;
                p_path(1.0 - s) * &tp
            }
        },
        vec![0.5, 2.0 / 3.0, 5.0 / 6.0],
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EquivarianceScan {
    pub max_defect: f64,
    pub worst_t: f64,
    pub pass: bool,
}

/// `max_t |A(t) U - U A(t)|` over `samples + 1` equally spaced points.
pub fn equivariance_scan(path: &MatrixPath, u: &RealMatrix, samples: usize, tol: f64) -> EquivarianceScan {
    let mut max_defect: f64 = 0.0;
    let mut worst_t = 0.0;
    for k in 0..=samples {
        let t = k as f64 / samples.max(1) as f64;
        let a = path.at(t);
        let d = distance(&(&a * u), &(u * &a));
        if d > max_defect {
            max_defect = d;
            worst_t = t;
        }
    }
    EquivarianceScan {
        max_defect,
        worst_t,
        pass: max_defect <= tol,
    }
}

/// Smooth cutoff: 0 on `(-inf, 0]`, 1 on `[1, inf)`.
pub fn rho(x: f64) -> f64 {
    let b = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        b(x) / (b(x) + b(1.0 - x))
    }
}

/// Monotone `h: [0,1] -> [0,1]` constant (`= s_i`) on `(t_i - eps, t_i + eps)`
/// and smooth in between.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothingProfile {
    /// `(t_i, s_i)` pairs.
    pub plateaus: Vec<(f64, f64)>,
    pub epsilon: f64,
}

impl SmoothingProfile {
    /// Plateaus centered on the junctions themselves (`t_i = s_i`).
    pub fn for_junctions(junctions: &[f64], epsilon: f64) -> Self {
        SmoothingProfile {
            plateaus: junctions.iter().map(|&s| (s, s)).collect(),
            epsilon,
        }
    }

    /// Knots `(t, h(t))` bounding the plateaus, including the endpoints.
    fn knots(&self) -> Vec<(f64, f64)> {
        let mut k = vec![(0.0, 0.0)];
        for &(t, s) in &self.plateaus {
            k.push((t - self.epsilon, s));
            k.push((t + self.epsilon, s));
        }
        k.push((1.0, 1.0));
        k
    }

    pub fn h(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let k = self.knots();
        for w in k.windows(2) {
            let ((t0, s0), (t1, s1)) = (w[0], w[1]);
            if t <= t1 {
                if s0 == s1 || t1 <= t0 {
                    return s0;
                }
                return s0 + (s1 - s0) * rho((t - t0) / (t1 - t0));
            }
        }
        1.0
    }

    fn validate(&self) -> Result<()> {
        let k = self.knots();
        if k.windows(2).any(|w| w[1].0 < w[0].0 || w[1].1 < w[0].1) || self.epsilon <= 0.0 {
            return Err(Error::Dimension(
                "smoothing plateaus overlap or are out of order".into(),
            ));
        }
        Ok(())
    }
}

/// `Theta_t = Psi(h(t))`; every junction of `Psi` must be a plateau value.
pub fn smooth_reparam(path: &MatrixPath, profile: &SmoothingProfile) -> Result<MatrixPath> {
    profile.validate()?;
    for &s in path.junctions() {
        if !profile.plateaus.iter().any(|&(_, v)| (v - s).abs() < 1e-12) {
            return Err(Error::PlateauMisaligned(s));
        }
    }
    let inner = path.clone();
    let profile = profile.clone();
    Ok(MatrixPath::new(move |t| inner.at(profile.h(t)), Vec::new()))
}

/// Places a 4x4 block on `(s2, t2, s3, t3)` of `R^8`.
pub fn embed_so4_to_so8(a: &RealMatrix) -> RealMatrix {
    assert_eq!(a.shape(), (4, 4), "embed needs a 4x4 matrix");
    let mut m = RealMatrix::identity(8, 8);
    m.view_mut((2, 2), (4, 4)).copy_from(a);
    m
}

/// `x` outside radius `2 delta / 3`, `Theta x` inside `delta / 3`, and
/// `Theta_t x` with `t = rho((2 delta / 3 - |x|) 3 / delta)` on the shell.
pub fn local_diffeo_f(x: &DVector<f64>, delta: f64, path8: &MatrixPath) -> DVector<f64> {
    let r = x.norm();
    if r >= 2.0 * delta / 3.0 {
        x.clone()
    } else if r <= delta / 3.0 {
        path8.at(1.0) * x
    } else {
        let t = rho((2.0 * delta / 3.0 - r) * 3.0 / delta);
        path8.at(t) * x
    }
}

/// `w1 = u1`, `w2 = (u2 + i conj(u3)) / sqrt 2`, `w3 = (i conj(u2) - u3) / sqrt 2`,
/// `w4 = u4`, on real coordinates `(x1, y1, ..., x4, y4)`.
pub fn coord_change_theta(u: &DVector<f64>) -> DVector<f64> {
    assert_eq!(u.len(), 8, "expects a point of R^8");
    let z = |k: usize| Complex64::new(u[2 * k], u[2 * k + 1]);
    let i = Complex64::i();
    let w = [
        z(0),
        (z(1) + i * z(2).conj()) * FRAC_1_SQRT_2,
        (i * z(1).conj() - z(2)) * FRAC_1_SQRT_2,
        z(3),
    ];
    DVector::from_iterator(8, w.iter().flat_map(|c| [c.re, c.im]))
}

pub fn coord_change_matrix() -> RealMatrix {
    let mut m = RealMatrix::zeros(8, 8);
    for j in 0..8 {
        let mut e = DVector::zeros(8);
        e[j] = 1.0;
        m.set_column(j, &coord_change_theta(&e));
    }
    m
}

/// Two-sided sampled Hausdorff distance between the images of two paths.
pub fn hausdorff_images(a: &MatrixPath, b: &MatrixPath, profile: &SmoothingProfile, samples: usize) -> f64 {
    // a = Psi, b = Psi o h; for Psi(s) find t with h(t) = s by bisection,
    // for b(t) search Psi near h(t) by golden section on a bracket.
    let mut worst: f64 = 0.0;
    for k in 0..=samples {
        let s = k as f64 / samples as f64;
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if profile.h(mid) < s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        worst = worst.max(distance(&a.at(s), &b.at(hi)));
    }
    let grid: Vec<f64> = (0..=samples).map(|k| k as f64 / samples as f64).collect();
    let on_grid: Vec<RealMatrix> = grid.iter().map(|&s| a.at(s)).collect();
    let step = 1.0 / samples as f64;
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for &t in &grid {
        let target = b.at(t);
        // the max-abs distance has flat stretches, so search with Frobenius
        let f = |s: f64| (a.at(s) - &target).norm();
        let best = (0..on_grid.len())
            .min_by(|&x, &y| {
                (&on_grid[x] - &target)
                    .norm()
                    .total_cmp(&(&on_grid[y] - &target).norm())
            })
            .expect("non-empty grid");
        let best = grid[best];
        let (mut lo, mut hi) = ((best - 2.0 * step).max(0.0), (best + 2.0 * step).min(1.0));
        let (mut m1, mut m2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        let (mut f1, mut f2) = (f(m1), f(m2));
        while hi - lo > 1e-13 {
            if f1 < f2 {
                hi = m2;
                m2 = m1;
                f2 = f1;
                m1 = hi - g * (hi - lo);
                f1 = f(m1);
            } else {
                lo = m1;
                m1 = m2;
                f1 = f2;
                m2 = lo + g * (hi - lo);
                f2 = f(m2);
            }
        }
        worst = worst.max(distance(&a.at(0.5 * (lo + hi)), &target));
    }
    worst
}

/// One-sided difference quotients `|A(t +- h) - A(t)| / h` at each point.
pub fn junction_derivatives(path: &MatrixPath, points: &[f64], step: f64) -> Vec<(f64, f64, f64)> {
    points
        .iter()
        .map(|&t| {
            let a = path.at(t);
            let left = distance(&a, &path.at(t - step)) / step;
            let right = distance(&path.at(t + step), &a) / step;
            (t, left, right)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SoMembership {
    pub theta8: SoCheck,
    pub upsilon: SoCheck,
    pub upsilon8: SoCheck,
    pub upsilon_cubed_error: f64,
    pub path_max_defect: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EndpointErrors {
    pub psi_0: f64,
    pub psi_1: f64,
    pub smoothed_0: f64,
    pub smoothed_1: f64,
    pub embedded_1: f64,
    pub expm_theta_prime: f64,
    pub p_path_0: f64,
    pub p_path_1: f64,
    pub theta_factorization: f64,
    pub coord_change_matrix: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct JunctionReport {
    pub t: f64,
    pub left: f64,
    pub right: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsotopyReport {
    pub so_membership: SoMembership,
    pub equivariance_max: f64,
    pub equivariance_pass: bool,
    pub endpoint_errors: EndpointErrors,
    pub junction_derivatives: Vec<JunctionReport>,
    pub junction_pass: bool,
    pub image_hausdorff: f64,
    pub shell_continuity: f64,
    pub shell_pass: bool,
    pub pass: bool,
}

/// Runs every check with the default tolerances: `1e-12` for matrix
/// identities, `1e-10` for equivariance and orthogonality along paths,
/// `1e-6` for junction derivatives, `1e-9` for images and `1e-8` for shells.
pub fn isotopy_verify(samples: usize, shell_samples: usize, seed: u64) -> Result<IsotopyReport> {
    let psi = build_equivariant_path();
    let profile = SmoothingProfile::for_junctions(psi.junctions(), 0.05);
    let smooth = smooth_reparam(&psi, &profile)?;
    let path8 = smooth.embedded();
    let id4 = RealMatrix::identity(4, 4);
    let u = upsilon();
    let u8 = upsilon8();

    let mut path_max_defect: f64 = 0.0;
    for k in 0..=samples {
        let t = k as f64 / samples as f64;
        for m in [psi.at(t), smooth.at(t), path8.at(t)] {
            let c = so_check(&m, 1e-10);
            path_max_defect = path_max_defect.max(c.orthogonality_defect);
            if c.determinant <= 0.0 {
                path_max_defect = f64::INFINITY;
            }
        }
    }
    let so = SoMembership {
        theta8: so_check(&theta8(), 1e-12),
        upsilon: so_check(&u, 1e-12),
        upsilon8: so_check(&u8, 1e-12),
        upsilon_cubed_error: distance(&(&u * &u * &u), &id4),
        path_max_defect,
        pass: false,
    };
    let so = SoMembership {
        pass: so.theta8.member
            && so.upsilon.member
            && so.upsilon8.member
            && so.upsilon_cubed_error <= 1e-12
            && so.path_max_defect <= 1e-10,
        ..so
    };

    let eq = [
        equivariance_scan(&psi, &u, samples, 1e-10),
        equivariance_scan(&smooth, &u, samples, 1e-10),
        equivariance_scan(&path8, &u8, samples, 1e-10),
    ];
    let equivariance_max = eq.iter().map(|e| e.max_defect).fold(0.0, f64::max);

    let ends = EndpointErrors {
        psi_0: distance(&psi.at(0.0), &id4),
        psi_1: distance(&psi.at(1.0), &theta()),
        smoothed_0: distance(&smooth.at(0.0), &id4),
        smoothed_1: distance(&smooth.at(1.0), &theta()),
        embedded_1: distance(&path8.at(1.0), &theta8()),
        expm_theta_prime: distance(&expm(&(q_matrix() * FRAC_PI_4)), &theta_prime()),
        p_path_0: distance(&p_path(0.0), &p_matrix()),
        p_path_1: distance(&p_path(1.0), &id4),
        theta_factorization: distance(&(p_matrix() * theta_prime()), &theta()),
        coord_change_matrix: distance(&coord_change_matrix(), &theta8()),
        pass: false,
    };
    let ends = EndpointErrors {
        pass: [
            ends.psi_0,
            ends.psi_1,
            ends.smoothed_0,
            ends.smoothed_1,
            ends.embedded_1,
            ends.expm_theta_prime,
            ends.p_path_0,
            ends.p_path_1,
            ends.theta_factorization,
            ends.coord_change_matrix,
        ]
        .iter()
        .all(|&e| e <= 1e-12),
        ..ends
    };

    let plateau_centers: Vec<f64> = profile.plateaus.iter().map(|p| p.0).collect();
    let junctions: Vec<JunctionReport> = junction_derivatives(&smooth, &plateau_centers, 1e-4)
        .into_iter()
        .map(|(t, left, right)| JunctionReport { t, left, right })
        .collect();
    let junction_pass = junctions.iter().all(|j| j.left <= 1e-6 && j.right <= 1e-6);

    let image_hausdorff = hausdorff_images(&psi, &smooth, &profile, samples.min(400));

    let shell_continuity = shell_jump(&path8, 1.0, shell_samples, seed);
    let shell_pass = shell_continuity <= 1e-8;

    let pass =
        so.pass && eq.iter().all(|e| e.pass) && ends.pass && junction_pass && image_hausdorff <= 1e-9 && shell_pass;
    Ok(IsotopyReport {
        so_membership: so,
        equivariance_max,
        equivariance_pass: eq.iter().all(|e| e.pass),
        endpoint_errors: ends,
        junction_derivatives: junctions,
        junction_pass,
        image_hausdorff,
        shell_continuity,
        shell_pass,
        pass,
    })
}

/// Largest jump of `f` across the shells `|x| = delta/3` and `2 delta/3`:
/// each branch formula is evaluated on its own side at the shell radius.
pub fn shell_jump(path8: &MatrixPath, delta: f64, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // branch formulas on each side of the inner and outer shells
    let inner = [(delta / 3.0, path8.at(1.0), path8.at(rho(1.0)))];
    let outer = [(2.0 * delta / 3.0, path8.at(rho(0.0)), RealMatrix::identity(8, 8))];
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let dir = DVector::from_fn(8, |_, _| rng.gen_range(-1.0..1.0));
        let n = dir.norm();
        if n < 1e-9 {
            continue;
        }
        let dir = dir / n;
        for (radius, below, above) in inner.iter().chain(&outer) {
            let x = &dir * *radius;
            let lhs: DVector<f64> = below * &x;
            let rhs: DVector<f64> = above * &x;
            worst = worst.max((lhs - rhs).amax());
            let f_in = local_diffeo_f(&(&dir * (radius * (1.0 - 1e-12))), delta, path8);
            let f_out = local_diffeo_f(&(&dir * (radius * (1.0 + 1e-12))), delta, path8);
            worst = worst.max((f_in - f_out).amax());
        }
    }
    worst
}
