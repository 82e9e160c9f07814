use std::f64::consts::PI;

use lgha_core::groups::{LLaw, LPoint9, NilPoint6};
use lgha_core::nilfourier::*;
use lgha_core::quadrature::{dft_inverse, DEFAULT_GRID_BUDGET};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_l<R: Rng>(rng: &mut R, s: f64) -> LPoint9 {
    LPoint9::from_array(std::array::from_fn(|_| rng.random_range(-s..s)))
}

fn wide_gaussian() -> GaussPoly {
    GaussPoly {
        mu: [0.2, -0.1, 0.3, 0.0, -0.2, 0.1],
        sigma: [1.5, 1.3, 1.4, 1.6, 1.2, 1.5],
        terms: vec![
            (Complex64::new(1.0, 0.0), [0; 6]),
            (Complex64::new(0.2, -0.1), [1, 0, 0, 1, 0, 0]),
        ],
    }
}

#[test]
fn rho2_matches_closed_form() {
    assert_eq!(rho2(2.0, 3.0, [1.0, 1.0, 5.0]), [11.0, 16.0, 5.0]);
    assert_eq!(
        rho1(2.0, [1.0, 1.0, 5.0, 1.0, 3.0]),
        [3.0, 1.0, 5.0, 7.0, 3.0]
    );
}

#[test]
fn lift_at_trivial_parameters_is_f() {
    let g = wide_gaussian();
    let lifted = lift_to_l(|p: &NilPoint6| g.eval(p));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let p = LPoint9 {
            x3: 0.0,
            x2: 0.0,
            t3: 0.0,
            t2: 0.0,
            x1: 0.0,
            t1: 0.0,
            ..random_l(&mut rng, 2.0)
        };
        let want = g.eval(&NilPoint6::new(0.0, 0.0, 0.0, p.x4, p.x5, p.x6));
        assert_eq!(lifted.eval(&p), want);
        // On the embedded copy of N the lift is f itself.
        let n = NilPoint6::from_array(std::array::from_fn(|_| rng.random_range(-2.0..2.0)));
        assert_eq!(lifted.eval(&LPoint9::from_nil(&n)), g.eval(&n));
    }
}

#[test]
fn lift_is_invariant() {
    let g = wide_gaussian();
    let lifted = lift_to_l(|p: &NilPoint6| g.eval(p));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let p = random_l(&mut rng, 1.5);
        let (h, r, k) = (
            rng.random_range(-1.5..1.5),
            rng.random_range(-1.5..1.5),
            rng.random_range(-1.5..1.5),
        );
        let a = lifted.eval(&p);
        let b = lifted.eval(&invariance_shift(&p, h, r, k));
        assert!((a - b).norm() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn near_delta_is_approximate_identity() {
    let f = wide_gaussian();
    let eps = 0.05;
    let delta = GaussPoly::gaussian([0.0; 6], [eps; 6]);
    let norm = delta.envelope_mass();
    let grid = envelope_grid([0.0; 6], [eps; 6], 6.0, 10, DEFAULT_GRID_BUDGET).unwrap();
    let at = NilPoint6::new(0.3, -0.2, 0.5, 0.1, 0.4, -0.3);
    let v = convolve_n(
        |x: &NilPoint6| delta.eval(x) / norm,
        |x: &NilPoint6| f.eval(x),
        &at,
        &ConvMethod::Grid(grid),
        Substitution::Direct,
    )
    .unwrap();
    let want = f.eval(&at);
    assert!((v.value - want).norm() / want.norm() < 1e-2);
}

#[test]
fn gaussian_convolution_grid_agrees_with_monte_carlo() {
    let phi = GaussPoly::gaussian([0.1, 0.0, -0.1, 0.2, 0.0, 0.1], [0.7; 6]);
    let f = GaussPoly::gaussian([0.0; 6], [1.1; 6]);
    let at = NilPoint6::new(0.2, 0.1, -0.1, 0.3, 0.0, 0.2);
    let grid = envelope_grid(phi.mu, phi.sigma, 6.5, 12, DEFAULT_GRID_BUDGET).unwrap();
    let g = convolve_n(
        |x: &NilPoint6| phi.eval(x),
        |x: &NilPoint6| f.eval(x),
        &at,
        &ConvMethod::Grid(grid),
        Substitution::Direct,
    )
    .unwrap();
    let mc = ConvMethod::MonteCarlo {
        sampler: envelope_sampler(phi.mu, phi.sigma, 1.2).unwrap(),
        n: 200_000,
        seed: 3,
    };
    let m = convolve_n(
        |x: &NilPoint6| phi.eval(x),
        |x: &NilPoint6| f.eval(x),
        &at,
        &mc,
        Substitution::Direct,
    )
    .unwrap();
    let s = m.stderr.unwrap();
    assert!(
        (g.value - m.value).norm() < 3.0 * s,
        "grid {} mc {} ± {s}",
        g.value,
        m.value
    );
    // Both substitutions describe the same integral; the inverted one
    // integrates over k = g⁻¹, which sits around μ⁻¹.
    let centre = lgha_core::groups::nil_inv(&NilPoint6::from_array(phi.mu)).to_array();
    let mc_inv = ConvMethod::MonteCarlo {
        sampler: envelope_sampler(centre, phi.sigma, 1.3).unwrap(),
        n: 200_000,
        seed: 3,
    };
    let mi = convolve_n(
        |x: &NilPoint6| phi.eval(x),
        |x: &NilPoint6| f.eval(x),
        &at,
        &mc_inv,
        Substitution::Inverted,
    )
    .unwrap();
    assert!((mi.value - g.value).norm() < 3.0 * mi.stderr.unwrap());
}

fn analytic_factor_ft(mu: f64, sigma: f64, k: u8, xi: f64) -> Complex64 {
    let a = sigma * (2.0 * PI).sqrt() * (-0.5 * sigma * sigma * xi * xi).exp();
    let poly = match k {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -sigma * sigma * xi),
        2 => Complex64::new(sigma * sigma - sigma.powi(4) * xi * xi, 0.0),
        _ => unreachable!(),
    };
    Complex64::from_polar(a, -xi * mu) * poly
}

#[test]
fn separable_transform_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..5 {
        let g = GaussPoly::random(&mut rng, (0.5, 2.0), 1.5);
        let axes = separable_axes(&[&g], 10.0, 512).unwrap();
        let s = fourier_separable(&g, &axes).unwrap();
        let mut scale: f64 = 0.0;
        let mut err: f64 = 0.0;
        for _ in 0..200 {
            let idx: [usize; 6] = std::array::from_fn(|a| 256 + rng.random_range(0..40) - 20 + a);
            let got = s.value_at(&idx);
            let want: Complex64 = g
                .terms
                .iter()
                .map(|(c, k)| {
                    c * (0..6)
                        .map(|a| {
                            let xi = s.freq[a].nodes()[idx[a]];
                            analytic_factor_ft(g.mu[a], g.sigma[a], k[a], xi)
                        })
                        .product::<Complex64>()
                })
                .sum();
            scale = scale.max(want.norm());
            err = err.max((got - want).norm());
        }
        assert!(err / scale < 1e-8, "rel {}", err / scale);
    }
}

fn small_grid() -> lgha_core::quadrature::GridSpec {
    box_grid([-5.0; 6], [5.0; 6], 8, DEFAULT_GRID_BUDGET).unwrap()
}

#[test]
fn dense_transform_is_linear_and_invertible() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let grid = small_grid();
    let f = TestFn::Separable(GaussPoly::random(&mut rng, (0.8, 1.5), 1.0));
    let g = TestFn::skew_bump();
    let (a, b) = (Complex64::new(0.3, -1.2), Complex64::new(-0.7, 0.4));
    let ff = sample_n(&f, &grid);
    let gf = sample_n(&g, &grid);
    let comb = ff.zip_with(&gf, |x, y| a * x + b * y).unwrap();
    let lhs = fourier_n(&comb).unwrap();
    let rhs = fourier_n(&ff)
        .unwrap()
        .field
        .zip_with(&fourier_n(&gf).unwrap().field, |x, y| a * x + b * y)
        .unwrap();
    assert!(lhs.field.max_abs_diff(&rhs) < 1e-12 * rhs.max_abs().max(1.0));
    let back = dft_inverse(&fourier_n(&gf).unwrap()).unwrap();
    assert!(back.max_abs_diff(&gf) < 1e-12);
}

#[test]
fn real_function_has_hermitian_spectrum() {
    let grid = small_grid();
    let s = fourier_n(&sample_n(&TestFn::skew_bump(), &grid)).unwrap();
    let n = 8;
    let mut idx = [0usize; 6];
    for i in 0..s.field.grid().len() {
        s.field.grid().unravel(i, &mut idx);
        if idx.iter().any(|&k| k == 0) {
            continue;
        }
        let j = idx.iter().fold(0usize, |acc, &k| acc * n + (n - k));
        let (a, b) = (s.field.values()[i], s.field.values()[j]);
        assert!((a - b.conj()).norm() < 1e-12);
    }
}

#[test]
fn plancherel_zero_function() {
    let zero = TestFn::dense("zero", |_| Complex64::new(0.0, 0.0));
    let cfg = PlancherelConfig {
        count: 6,
        ..Default::default()
    };
    let p = plancherel_n_check(&zero, &cfg).unwrap();
    assert_eq!((p.lhs, p.rhs, p.rel_err), (0.0, 0.0, 0.0));
}

#[test]
fn plancherel_separable_gaussian_closed_form() {
    let sigma = [0.6, 0.9, 1.3, 2.0, 0.5, 1.1];
    let g = GaussPoly::gaussian([0.5, -1.0, 0.0, 1.5, -0.3, 0.2], sigma);
    let p = plancherel_n_check(&TestFn::Separable(g), &PlancherelConfig::default()).unwrap();
    let exact = PI.powi(3) * sigma.iter().product::<f64>();
    assert!((p.lhs - exact).abs() / exact < 1e-8);
    assert!(p.rel_err < 1e-8);
}

#[test]
fn plancherel_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10 {
        let g = GaussPoly::random(&mut rng, (0.5, 2.0), 2.0);
        let p = plancherel_n_check(&TestFn::Separable(g), &PlancherelConfig::default()).unwrap();
        assert!(p.rel_err < 1e-8);
    }
}

#[test]
fn plancherel_non_separable_grid_and_fallback() {
    let f = TestFn::skew_bump();
    let cfg = PlancherelConfig {
        count: 10,
        ..Default::default()
    };
    let p = plancherel_n_check(&f, &cfg).unwrap();
    assert_eq!(p.method, PlancherelMethod::Grid);
    assert!(p.rel_err < 1e-6);
    let tight = PlancherelConfig {
        budget: 9usize.pow(6),
        mc_samples: 100_000,
        seed: 7,
        ..cfg
    };
    let q = plancherel_n_check(&f, &tight).unwrap();
    assert_eq!(q.method, PlancherelMethod::MonteCarlo);
    assert!((q.lhs - q.rhs).abs() < 3.0 * q.stderr.unwrap(), "{q:?}");
}

#[test]
fn bilinear_identity_reduces_to_plancherel() {
    let g = GaussPoly::gaussian([0.0; 6], [0.9, 1.0, 1.1, 0.8, 1.2, 1.0]);
    let b = bilinear_identity_check(
        &g,
        &g,
        BilinearMethod::Grid {
            count: 16,
            budget: DEFAULT_GRID_BUDGET,
        },
    )
    .unwrap();
    let axes = separable_axes(&[&g], 10.0, 512).unwrap();
    let p = plancherel_n_separable(&g, &axes).unwrap();
    assert!(b.rel_err < 1e-6);
    assert!((b.rhs.re - p.lhs).abs() / p.lhs < 1e-10);
}

#[test]
fn bilinear_identity_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..2 {
        let f = GaussPoly::random(&mut rng, (0.7, 1.2), 1.0);
        let phi = GaussPoly::random(&mut rng, (0.7, 1.2), 1.0);
        let b = bilinear_identity_check(
            &f,
            &phi,
            BilinearMethod::Grid {
                count: 16,
                budget: DEFAULT_GRID_BUDGET,
            },
        )
        .unwrap();
        assert!(b.rel_err < 1e-6, "{b:?}");
        let m = bilinear_identity_check(
            &f,
            &phi,
            BilinearMethod::MonteCarlo {
                n: 100_000,
                seed: 9,
            },
        )
        .unwrap();
        assert!(m.z_score().unwrap() < 3.0, "{m:?}");
    }
}

#[test]
fn convolution_equality_needs_the_twisted_law() {
    let u = GaussPoly::gaussian([0.0; 6], [0.6; 6]);
    let f = wide_gaussian();
    let lifted = lift_to_l(|p: &NilPoint6| f.eval(p));
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let pts: Vec<LPoint9> = (0..10).map(|_| random_l(&mut rng, 0.8)).collect();
    let twisted = convolution_equality_check(&u, &lifted, &pts, LLaw::Twisted, 20_000, 11).unwrap();
    for p in &twisted {
        assert!(p.rel_err < 1e-12, "{p:?}");
    }
    let displayed =
        convolution_equality_check(&u, &lifted, &pts, LLaw::Displayed, 20_000, 11).unwrap();
    let worst = displayed.iter().map(|p| p.rel_err).fold(0.0, f64::max);
    assert!(
        worst > 2e-2,
        "displayed law unexpectedly satisfies the identity: {worst}"
    );
}

#[test]
fn triple_convolution_is_associative() {
    let phi = GaussPoly::gaussian([0.1; 6], [0.6; 6]);
    let psi = GaussPoly::gaussian([-0.1; 6], [0.5; 6]);
    let f = wide_gaussian();
    let at = NilPoint6::new(0.2, -0.1, 0.3, 0.1, 0.0, 0.2);
    let c = associativity_check(
        (&|x: &NilPoint6| phi.eval(x), &phi),
        (&|x: &NilPoint6| psi.eval(x), &psi),
        &|x: &NilPoint6| f.eval(x),
        &at,
        50_000,
        12,
    )
    .unwrap();
    assert!(c.rel_err < 1e-4, "{c:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn invariance_holds_for_random_shifts(
        p in prop::array::uniform9(-2.0f64..2.0),
        h in -2.0f64..2.0, r in -2.0f64..2.0, k in -2.0f64..2.0,
    ) {
        let g = wide_gaussian();
        let lifted = lift_to_l(|q: &NilPoint6| g.eval(q));
        let p = LPoint9::from_array(p);
        let a = lift_args(&p);
        let b = lift_args(&invariance_shift(&p, h, r, k));
        prop_assert!(a.max_abs_diff(&b) < 1e-12 * (1.0 + a.to_array().iter().map(|v| v.abs()).fold(0.0, f64::max)));
        prop_assert!((lifted.eval(&p) - lifted.eval(&invariance_shift(&p, h, r, k))).norm() < 1e-12);
    }
}
