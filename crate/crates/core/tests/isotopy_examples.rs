use cdga_lab::isotopy::*;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn constant_identity_path_is_equivariant() {
    let id = MatrixPath::constant(RealMatrix::identity(4, 4));
    assert!(equivariance_scan(&id, &upsilon(), 100, 1e-10).pass);
}

#[test]
fn plain_rotation_path_is_not_equivariant() {
    // rotation in the (s2, s3) plane mixes the two eigenspaces of the action
    let path = MatrixPath::new(
        |t| {
            let (s, c) = (t * std::f64::consts::FRAC_PI_2).sin_cos();
            let mut m = RealMatrix::identity(4, 4);
            m[(0, 0)] = c;
            m[(0, 2)] = -s;
            m[(2, 0)] = s;
            m[(2, 2)] = c;
            m
        },
        vec![],
    );
    let u = upsilon();
    let mid = path.at(0.5);
    assert!(distance(&(&mid * &u), &(&u * &mid)) > 1e-3);
    assert!(!equivariance_scan(&path, &u, 100, 1e-10).pass);
}

#[test]
fn path_stays_in_so4() {
    let psi = build_equivariant_path();
    for k in 0..=1000 {
        let t = k as f64 / 1000.0;
        assert!(so_check(&psi.at(t), 1e-10).member, "t = {t}");
    }
    assert!(distance(&p_path(0.0), &p_matrix()) <= 1e-12);
    assert!(distance(&p_path(1.0), &RealMatrix::identity(4, 4)) <= 1e-12);
}

#[test]
fn smoothing_preserves_endpoints() {
    let psi = build_equivariant_path();
    let profile = SmoothingProfile::for_junctions(psi.junctions(), 0.05);
    let smooth = smooth_reparam(&psi, &profile).unwrap();
    assert!(distance(&smooth.at(0.0), &RealMatrix::identity(4, 4)) <= 1e-12);
    assert!(distance(&smooth.at(1.0), &theta()) <= 1e-12);
    assert!(hausdorff_images(&psi, &smooth, &profile, 200) <= 1e-9);
    for (_, left, right) in junction_derivatives(&smooth, psi.junctions(), 1e-4) {
        assert!(left <= 1e-6 && right <= 1e-6);
    }
}

#[test]
fn local_diffeo_branches() {
    let psi = build_equivariant_path();
    let profile = SmoothingProfile::for_junctions(psi.junctions(), 0.05);
    let path8 = smooth_reparam(&psi, &profile).unwrap().embedded();
    let delta = 0.3;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let dir = DVector::from_fn(8, |_, _| rng.gen_range(-1.0..1.0)).normalize();
        let outside = &dir * delta;
        assert_eq!(local_diffeo_f(&outside, delta, &path8), outside);
        let inside = &dir * (delta / 4.0);
        let want = theta8() * &inside;
        assert!((local_diffeo_f(&inside, delta, &path8) - want).amax() <= 1e-12);
    }
    assert!(shell_jump(&path8, delta, 2000, 5) <= 1e-8);
}

#[test]
fn coordinate_change_is_an_isometry() {
    assert_eq!(coord_change_theta(&DVector::zeros(8)), DVector::zeros(8));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let u = DVector::from_fn(8, |_, _| rng.gen_range(-5.0..5.0));
        let w = coord_change_theta(&u);
        assert!((w.norm() - u.norm()).abs() <= 1e-12 * u.norm().max(1.0));
        assert!((theta8() * &u - &w).amax() <= 1e-12);
    }
}

#[test]
fn embedding_preserves_orthogonality() {
    let psi = build_equivariant_path();
    for k in 0..=20 {
        let a = psi.at(k as f64 / 20.0);
        assert!(so_check(&embed_so4_to_so8(&a), 1e-10).member);
        assert!(
            distance(
                &(embed_so4_to_so8(&a) * upsilon8()),
                &(upsilon8() * embed_so4_to_so8(&a))
            ) <= 1e-10
        );
    }
}
