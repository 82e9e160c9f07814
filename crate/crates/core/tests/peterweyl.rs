use std::f64::consts::PI;

use lgha_core::groups::{orthogonality_defect, random_so4};
use lgha_core::peterweyl::*;
use lgha_core::quadrature::{so4_quadrature, u2_quadrature, EulerAngles, DEFAULT_SO4_BUDGET};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn h(twice: u32) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn binom(n: i64, k: i64) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn jacobi(n: i64, a: i64, b: i64, x: f64) -> f64 {
    (0..=n)
        .map(|s| {
            binom(n + a, n - s)
                * binom(n + b, s)
                * ((x - 1.0) / 2.0).powi(s as i32)
                * ((x + 1.0) / 2.0).powi((n - s) as i32)
        })
        .sum()
}

/// Closed form through Jacobi polynomials, with all quantities doubled to
/// stay in integers.
fn small_d_oracle(twice_j: i64, twice_mp: i64, twice_m: i64, beta: f64) -> f64 {
    let (j2, mp2, m2) = (twice_j, twice_mp, twice_m);
    let cands = [(j2 + m2, 0), (j2 - m2, 1), (j2 + mp2, 2), (j2 - mp2, 3)];
    let (k2, case) = cands.iter().copied().min_by_key(|c| c.0).unwrap();
    let k = k2 / 2;
    let (a, lambda) = match case {
        0 => ((mp2 - m2) / 2, (mp2 - m2) / 2),
        1 => ((m2 - mp2) / 2, 0),
        2 => ((m2 - mp2) / 2, 0),
        _ => ((mp2 - m2) / 2, (mp2 - m2) / 2),
    };
    let b = (j2 - k2) - a;
    let sign = if lambda % 2 == 0 { 1.0 } else { -1.0 };
    sign * (binom(j2 - k, k + a) / binom(k + b, b)).sqrt()
        * (beta / 2.0).sin().powi(a as i32)
        * (beta / 2.0).cos().powi(b as i32)
        * jacobi(k, a, b, beta.cos())
}

fn cmax(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn small_d_matches_jacobi_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for twice_j in 0..=6u32 {
        for _ in 0..20 {
            let beta = rng.random_range(0.0..PI);
            let d = wigner_small_d(h(twice_j), beta);
            for a in 0..=twice_j as i64 {
                for b in 0..=twice_j as i64 {
                    let want = small_d_oracle(
                        twice_j as i64,
                        twice_j as i64 - 2 * a,
                        twice_j as i64 - 2 * b,
                        beta,
                    );
                    let got = d[(a as usize, b as usize)];
                    assert!(
                        (got - want).abs() < 1e-12,
                        "j={twice_j}/2 a={a} b={b}: {got} vs {want}"
                    );
                }
            }
        }
    }
}

#[test]
fn identity_and_trivial_spin() {
    for t in 0..=6 {
        let d = wigner_d_matrix(h(t), 0.0, 0.0, 0.0);
        assert!(cmax(&(d - DMatrix::identity(t as usize + 1, t as usize + 1))) < 1e-15);
    }
    assert_eq!(
        wigner_d_matrix(HalfInt::ZERO, 1.0, 2.0, 3.0)[(0, 0)],
        Complex64::new(1.0, 0.0)
    );
}

#[test]
fn euler_form_agrees_with_direct_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let e = EulerAngles::new(
            rng.random_range(0.0..4.0 * PI),
            rng.random_range(0.0..PI),
            rng.random_range(0.0..4.0 * PI),
        );
        let u = Su2::from_euler(&e);
        for t in 0..=4 {
            let a = wigner_d_matrix(h(t), e.alpha, e.beta, e.gamma);
            let b = su2_rep(h(t), &u);
            assert!(cmax(&(a - b)) < 1e-12);
        }
        let back = Su2::from_euler(&u.to_euler());
        assert!((back.a - u.a).norm() < 1e-12 && (back.b - u.b).norm() < 1e-12);
    }
}

fn random_su2<R: Rng>(rng: &mut R) -> Su2 {
    let mut x = [0.0f64; 4];
    for v in x.iter_mut() {
        *v = rng.sample(rand_distr::StandardNormal);
    }
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    Su2::from_coords(x.map(|v| v / n))
}

#[test]
fn homomorphism_and_unitarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let (u, v) = (random_su2(&mut rng), random_su2(&mut rng));
        for t in 0..=4 {
            let du = su2_rep(h(t), &u);
            let dv = su2_rep(h(t), &v);
            let duv = su2_rep(h(t), &(u * v));
            assert!(cmax(&(&du * &dv - duv)) < 1e-12);
            let n = t as usize + 1;
            assert!(cmax(&(du.adjoint() * &du - DMatrix::identity(n, n))) < 1e-12);
        }
    }
}

#[test]
fn so4_matrix_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..200 {
        let r = random_so4(&mut rng);
        let k = So4Element::from_matrix(r.entries()).unwrap();
        assert!((k.matrix() - r.entries()).amax() < 1e-12);
        assert!(orthogonality_defect(&k.matrix()) < 1e-12);
    }
    let a = So4Element::new(random_su2(&mut rng), random_su2(&mut rng));
    let b = So4Element::new(random_su2(&mut rng), random_su2(&mut rng));
    assert!(((a * b).matrix() - a.matrix() * b.matrix()).amax() < 1e-12);
}

#[test]
fn parity_rule() {
    assert!(matches!(
        So4Label::new(h(1), h(0)),
        Err(PeterWeylError::ParityViolation { .. })
    ));
    assert_eq!(so4_labels(h(4)).len(), 13);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let x = So4Element::new(random_su2(&mut rng), random_su2(&mut rng));
    let minus = So4Element::new(x.left.neg(), x.right.neg());
    let labels = so4_labels(h(4));
    for (a, b) in So4::reps(&labels, &x)
        .iter()
        .zip(So4::reps(&labels, &minus))
    {
        assert!(cmax(&(a - b)) < 1e-12);
    }
}

#[test]
fn rep_sample_is_unitary() {
    let quad = so4_quadrature(h(2), DEFAULT_SO4_BUDGET).unwrap();
    let s = RepSample::new(So4Label::new(h(1), h(1)).unwrap(), &quad);
    assert!(s.unitarity_defect() < 1e-10);
    let i = s.len() / 3;
    let direct = So4::reps(&[s.label], &s.element(i)).remove(0);
    assert!(cmax(&(direct - s.matrix(i))) < 1e-14);
}

#[test]
fn transform_of_constant() {
    let quad = so4_quadrature(h(4), DEFAULT_SO4_BUDGET).unwrap();
    let t = so4_transform(|_| Complex64::new(1.0, 0.0), &quad);
    for (l, m) in t.iter() {
        let want = if *l == So4Label::TRIVIAL { 1.0 } else { 0.0 };
        let mut expect = DMatrix::zeros(l.dim(), l.dim());
        if want != 0.0 {
            expect[(0, 0)] = Complex64::new(1.0, 0.0);
        }
        assert!(cmax(&(m - expect)) < 1e-12, "{l}");
    }
}

#[test]
fn schur_orthogonality_matrix_coefficients() {
    let quad = so4_quadrature(h(2), DEFAULT_SO4_BUDGET).unwrap();
    for label in so4_labels(h(2)) {
        let d = label.dim();
        for (m, n) in [(0, 0), (d - 1, 0), (d / 2, d - 1)] {
            let f = BandLimited::matrix_coefficient(label, m, n);
            let t = so4_transform(|x| f.eval::<So4>(x), &quad);
            let mut expect = DMatrix::zeros(d, d);
            expect[(n, m)] = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
            let mut want = CompactSpectrum::new();
            want.insert(label, expect);
            assert!(t.max_abs_diff(&want) < 1e-12, "{label} ({m},{n})");
        }
    }
}

#[test]
fn factorized_transform_matches_direct_sum() {
    let quad = so4_quadrature(h(2), DEFAULT_SO4_BUDGET).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let labels = so4_labels(h(2));
    let f = BandLimited::random(&mut rng, &labels);
    let fast = so4_transform(|x| f.eval::<So4>(x), &quad);
    let slow = transform_direct::<So4, _>(|x| f.eval::<So4>(x), &so4_nodes(&quad), &labels);
    assert!(fast.max_abs_diff(&slow) < 1e-11);
}

#[test]
fn inversion_and_plancherel_band_limited() {
    let quad = so4_quadrature(h(4), DEFAULT_SO4_BUDGET).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let labels = so4_labels(h(4));
    let f = BandLimited::random(&mut rng, &labels);
    let t = so4_transform(|x| f.eval::<So4>(x), &quad);
    assert!(t.max_abs_diff(&f.coeffs) < 1e-10);
    for _ in 0..20 {
        let x = So4Element::new(random_su2(&mut rng), random_su2(&mut rng));
        assert!((compact_inverse::<So4>(&t, &x) - f.eval::<So4>(&x)).norm() < 1e-10);
    }
    let at_identity: Complex64 = t.iter().map(|(l, m)| m.trace() * l.dim() as f64).sum();
    assert!((at_identity - f.eval::<So4>(&So4Element::IDENTITY)).norm() < 1e-10);
    let p = so4_plancherel_check(|x| f.eval::<So4>(x), &quad);
    assert!(p.rel_err < 1e-10, "{p:?}");
}

#[test]
fn convolution_reverses_order() {
    let quad = so4_quadrature(h(2), DEFAULT_SO4_BUDGET).unwrap();
    let nodes = so4_nodes(&quad);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let labels = so4_labels(h(2));
    let f = BandLimited::random(&mut rng, &labels);
    let g = BandLimited::random(&mut rng, &labels);
    let gf = g.coeffs.product(&f.coeffs);
    let fg = f.coeffs.product(&g.coeffs);
    let mut wrong_order_err: f64 = 0.0;
    for _ in 0..3 {
        let x = So4Element::new(random_su2(&mut rng), random_su2(&mut rng));
        let conv = convolve_at::<So4, _, _>(|y| f.eval::<So4>(y), |y| g.eval::<So4>(y), &nodes, &x);
        assert!((conv - compact_inverse::<So4>(&gf, &x)).norm() < 1e-9 * conv.norm().max(1.0));
        wrong_order_err = wrong_order_err.max((conv - compact_inverse::<So4>(&fg, &x)).norm());
    }
    assert!(wrong_order_err > 1e-3);
}

#[test]
fn u2_transform_inversion_and_plancherel() {
    let quad = u2_quadrature(2, usize::MAX).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let labels = u2_labels(2);
    let f = BandLimited::random(&mut rng, &labels);
    let t = u2_transform(|x| f.eval::<U2>(x), &quad);
    assert!(t.max_abs_diff(&f.coeffs) < 1e-10);
    let p = u2_plancherel_check(|x| f.eval::<U2>(x), &quad);
    assert!(p.rel_err < 1e-10);
    let x = U2Element::new(0.7, random_su2(&mut rng));
    let back = U2Element::from_real_matrix(&x.real_matrix()).unwrap();
    assert!((f.eval::<U2>(&back) - f.eval::<U2>(&x)).norm() < 1e-10);
}

#[test]
fn spectrum_json_shape() {
    let mut s = CompactSpectrum::new();
    s.insert(So4Label::new(h(1), h(1)).unwrap(), DMatrix::identity(4, 4));
    let v = s.to_json();
    assert_eq!(v["(1/2,1/2)"].as_array().unwrap().len(), 16);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_is_linear(seed in any::<u64>(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let quad = so4_quadrature(h(2), DEFAULT_SO4_BUDGET).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let labels = so4_labels(h(2));
        let f = BandLimited::random(&mut rng, &labels);
        let g = BandLimited::random(&mut rng, &labels);
        let (ca, cb) = (Complex64::new(a, 0.5), Complex64::new(b, -0.25));
        let lhs = so4_transform(|x| f.eval::<So4>(x) * ca + g.eval::<So4>(x) * cb, &quad);
        let rhs = f.coeffs.linear_combination(ca, &g.coeffs, cb);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12 * 10.0);
    }

    #[test]
    fn wigner_unitary_everywhere(al in 0.0f64..12.6, be in 0.0f64..3.15, ga in 0.0f64..12.6, t in 0u32..7) {
        let d = wigner_d_matrix(h(t), al, be, ga);
        let n = t as usize + 1;
        prop_assert!(cmax(&(d.adjoint() * &d - DMatrix::identity(n, n))) < 1e-12);
    }
}

#[test]
fn sampled_transform_matches_closure_form() {
    let quad = so4_quadrature(h(2), DEFAULT_SO4_BUDGET).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let f = BandLimited::random(&mut rng, &so4_labels(h(2)));
    let values: Vec<Complex64> = so4_nodes(&quad)
        .iter()
        .map(|(x, _)| f.eval::<So4>(x))
        .collect();
    let sampled = so4_transform_sampled(&values, &quad).unwrap();
    let direct = so4_transform(|x| f.eval::<So4>(x), &quad);
    assert_eq!(sampled.max_abs_diff(&direct), 0.0);
    assert!(matches!(
        so4_transform_sampled(&values[1..], &quad),
        Err(PeterWeylError::SampleCount { .. })
    ));
}
