use lgha_core::quadrature::*;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn dft_round_trip_is_exact_to_rounding() {
    let grid = GridSpec::new(
        vec![
            Axis::uniform_box("a", -4.0, 4.0, 32).unwrap(),
            Axis::uniform_box("b", -3.0, 5.0, 24).unwrap(),
            Axis::gauss_legendre("c", -1.0, 1.0, 5).unwrap(),
        ],
        DEFAULT_GRID_BUDGET,
    )
    .unwrap();
    let f = SampledField::from_fn(grid, |p| {
        c((p[0] * p[1]).sin() + p[2], p[0].cos() * p[2] * p[2])
    });
    let s = dft_forward(&f, &[0, 1]).unwrap();
    let back = dft_inverse(&s).unwrap();
    assert_eq!(back.grid(), f.grid());
    assert!(back.max_abs_diff(&f) <= 1e-12);
    assert!(dft_forward(&f, &[2]).is_err());
}

#[test]
fn gaussian_transform_matches_closed_form() {
    // ∫ e^{−x²/2} e^{−iξx} dx = √(2π) e^{−ξ²/2}, per axis.
    let grid = GridSpec::cube(2, -12.0, 12.0, 64, DEFAULT_GRID_BUDGET).unwrap();
    let f = SampledField::from_fn(grid, |p| c((-(p[0] * p[0] + p[1] * p[1]) / 2.0).exp(), 0.0));
    let s = dft_forward(&f, &[0, 1]).unwrap();
    let tables = s.field.grid().node_tables();
    let mut xi = [0.0; 2];
    let mut worst: f64 = 0.0;
    for (i, v) in s.field.values().iter().enumerate() {
        tables.point(i, &mut xi);
        let exact = 2.0 * PI * (-(xi[0] * xi[0] + xi[1] * xi[1]) / 2.0).exp();
        worst = worst.max((v - exact).norm());
        if i % 97 == 0 {
            assert!((transform_at(&f, &xi).unwrap() - v).norm() < 1e-12);
        }
    }
    assert!(worst < 1e-12, "{worst}");
    // Off-grid frequency, shifted Gaussian: e^{−iξa} phase.
    let g = SampledField::from_fn(
        GridSpec::cube(1, -12.0, 14.0, 80, DEFAULT_GRID_BUDGET).unwrap(),
        |p| c((-(p[0] - 1.0).powi(2) / 2.0).exp(), 0.0),
    );
    let v = transform_at(&g, &[0.37]).unwrap();
    let exact = Complex64::from_polar((2.0 * PI).sqrt() * (-0.37f64 * 0.37 / 2.0).exp(), -0.37);
    assert!((v - exact).norm() < 1e-12);
}

#[test]
fn gauss_legendre_is_exact_to_degree_2n_minus_1() {
    for n in 1..=20 {
        let (x, w) = gauss_legendre(n);
        for deg in 0..2 * n {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            let exact = if deg % 2 == 1 {
                0.0
            } else {
                2.0 / (deg as f64 + 1.0)
            };
            assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}: {q} vs {exact}");
        }
    }
}

#[test]
fn gauss_hermite_integrates_gaussian_moments() {
    // ∫ x^{2k} e^{−x²} dx = Γ(k + 1/2).
    let (x, w) = gauss_hermite(16);
    let mut gamma = PI.sqrt();
    for k in 0..16 {
        let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(2 * k)).sum();
        assert!((q - gamma).abs() / gamma < 1e-10, "k={k}");
        gamma *= k as f64 + 0.5;
    }
}

#[test]
fn monte_carlo_is_within_its_standard_error_and_thread_independent() {
    // ∫ e^{−|x|²} cos(x₀) dx over ℝ³ = π^{3/2} e^{−1/4}.
    let exact = PI.powf(1.5) * (-0.25f64).exp();
    let sampler = GaussianSampler::isotropic(vec![0.0; 3], 0.8).unwrap();
    let f = |x: &[f64]| {
        c(
            (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp() * x[0].cos(),
            0.0,
        )
    };
    let est = monte_carlo(f, &sampler, 200_000, 17).unwrap();
    let z = (est.estimate.re - exact).abs() / est.stderr;
    assert!(z < 4.0, "z = {z}");
    assert!(est.estimate.im == 0.0);

    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let multi = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = single.install(|| monte_carlo(f, &sampler, 50_000, 3).unwrap());
    let b = multi.install(|| monte_carlo(f, &sampler, 50_000, 3).unwrap());
    assert_eq!(a.estimate, b.estimate);
    assert_eq!(a.stderr, b.stderr);
    assert!(matches!(
        monte_carlo(f, &sampler, 10, 3),
        Err(QuadError::TooFewSamples { n: 10 })
    ));
}

#[test]
fn budgets_and_bad_axes_are_rejected() {
    assert!(matches!(
        GridSpec::cube(3, 0.0, 1.0, 300, 1_000_000),
        Err(QuadError::BudgetExceeded {
            requested: 27_000_000,
            budget: 1_000_000
        })
    ));
    assert!(Axis::uniform_box("x", 1.0, 0.0, 8).is_err());
    assert!(Axis::uniform_box("x", 0.0, 1.0, 1).is_err());
    assert!(GaussianSampler::new(
        vec![0.0; 2],
        nalgebra::DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])
    )
    .is_err());
}

#[test]
fn field_binary_round_trip() {
    let grid = GridSpec::cube(2, -1.0, 1.0, 6, DEFAULT_GRID_BUDGET).unwrap();
    let f = SampledField::from_fn(grid, |p| c(p[0], p[1] * p[0]));
    let mut buf = Vec::new();
    f.write_binary(&mut buf).unwrap();
    let back = SampledField::read_binary(std::io::Cursor::new(buf.clone())).unwrap();
    assert_eq!(back, f);
    assert!(SampledField::read_binary(std::io::Cursor::new(&buf[..buf.len() - 3])).is_err());
}

#[test]
fn haar_rules_have_unit_mass() {
    // Haar total mass is 1 on both rules.
    let quad = so4_quadrature(HalfInt::from_int(1), DEFAULT_SO4_BUDGET).unwrap();
    let total: f64 = (0..quad.len()).map(|i| quad.node(i).2).sum();
    assert!((total - 1.0).abs() < 1e-12);
    let u2 = u2_quadrature(2, DEFAULT_SO4_BUDGET).unwrap();
    let total: f64 = (0..u2.len()).map(|i| u2.node(i).2).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairwise_sum_is_order_stable(v in prop::collection::vec(-1e3f64..1e3, 1..20_000)) {
        let naive: f64 = v.iter().sum();
        let p = pairwise_sum_f64(&v);
        prop_assert!((p - naive).abs() <= 1e-9 * v.iter().map(|x| x.abs()).sum::<f64>().max(1.0));
        // Within one block the two trees coincide.
        if v.len() <= BLOCK {
            prop_assert_eq!(p, indexed_sum_f64(v.len(), |i| v[i]));
        }
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        prop_assert_eq!(single.install(|| indexed_sum_f64(v.len(), |i| v[i])), indexed_sum_f64(v.len(), |i| v[i]));
    }

    #[test]
    fn dft_is_linear_and_round_trips(a in prop::collection::vec(-1.0f64..1.0, 16), b in prop::collection::vec(-1.0f64..1.0, 16), s in -2.0f64..2.0) {
        let grid = GridSpec::new(vec![Axis::uniform_box("x", -2.0, 3.0, 16).unwrap()], 1000).unwrap();
        let fa = SampledField::new(grid.clone(), a.iter().map(|&x| c(x, 0.0)).collect()).unwrap();
        let fb = SampledField::new(grid.clone(), b.iter().map(|&x| c(0.0, x)).collect()).unwrap();
        let sum = fa.zip_with(&fb, |u, v| u * s + v).unwrap();
        let (ta, tb, ts) = (dft_forward(&fa, &[0]).unwrap(), dft_forward(&fb, &[0]).unwrap(), dft_forward(&sum, &[0]).unwrap());
        let lin = ta.field.zip_with(&tb.field, |u, v| u * s + v).unwrap();
        prop_assert!(lin.max_abs_diff(&ts.field) < 1e-12);
        prop_assert!(dft_inverse(&ts).unwrap().max_abs_diff(&sum) < 1e-12);
    }
}
