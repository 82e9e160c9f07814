use lgha_core::groups::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn random_nil<R: Rng>(rng: &mut R) -> NilPoint6 {
    NilPoint6::from_array(std::array::from_fn(|_| rng.random_range(-2.0..2.0)))
}

fn random_heis<R: Rng>(rng: &mut R) -> HeisPoint3 {
    HeisPoint3::new(
        rng.random_range(-2.0..2.0),
        rng.random_range(-2.0..2.0),
        rng.random_range(-2.0..2.0),
    )
}

#[test]
fn unipotent_law_matches_matrix_product() {
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let (p, q) = (random_nil(&mut rng), random_nil(&mut rng));
        let via_matrix = NilPoint6::from_matrix(&(p.to_matrix() * q.to_matrix()));
        assert!(nil_mul(&p, &q).max_abs_diff(&via_matrix) <= 1e-12);
        let inv = NilPoint6::from_matrix(&p.to_matrix().try_inverse().unwrap());
        assert!(nil_inv(&p).max_abs_diff(&inv) <= 1e-12);
    }
}

#[test]
fn heisenberg_law_matches_matrix_product() {
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let (p, q) = (random_heis(&mut rng), random_heis(&mut rng));
        let m = p.to_matrix() * q.to_matrix();
        assert!(heis_mul(&p, &q).max_abs_diff(&HeisPoint3::from_matrix(&m)) <= 1e-12);
        // The product keeps the realization pattern.
        assert!((HeisPoint3::from_matrix(&m).to_matrix() - m).amax() <= 1e-12);
        assert!(heis_mul(&p, &heis_inv(&p)).max_abs_diff(&HeisPoint3::IDENTITY) < 1e-12);
    }
}

#[test]
fn nilpotent_symplectic_points_embed_symplectically() {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    for _ in 0..200 {
        let p = SpNPoint4::from_array(std::array::from_fn(|_| rng.random_range(-2.0..2.0)));
        let q = SpNPoint4::from_array(std::array::from_fn(|_| rng.random_range(-2.0..2.0)));
        assert!(spn_embed(&p).is_ok());
        assert!(symplectic_defect(&p.to_matrix()) < 1e-12);
        assert!(has_spn_pattern(&(p.to_matrix() * q.to_matrix()), 1e-12));
        let back = SpNPoint4::from_matrix(&spn_mul(&p, &q).to_matrix());
        assert_eq!(back, spn_mul(&p, &q));
    }
}

#[test]
fn quotient_reference_agrees_on_four_of_six_slots() {
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let mut worst = [0.0f64; 6];
    for _ in 0..1000 {
        let (y, xp) = (random_nil(&mut rng), random_nil(&mut rng));
        let exact = nil_mul(&nil_inv(&y), &xp).to_array();
        let shown = nil_quotient_reference(&y, &xp).to_array();
        for k in 0..6 {
            worst[k] = worst[k].max((exact[k] - shown[k]).abs());
        }
    }
    for k in [0, 1, 2, 5] {
        assert!(worst[k] <= 1e-12, "slot {}: {}", k + 1, worst[k]);
    }
    assert!(worst[3] > 1e-1 && worst[4] > 1e-1, "{worst:?}");
}

#[test]
fn l_group_laws() {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    for law in [LLaw::Displayed, LLaw::Twisted] {
        for _ in 0..1000 {
            let [p, q, r]: [LPoint9; 3] = std::array::from_fn(|_| {
                LPoint9::from_array(std::array::from_fn(|_| rng.random_range(-2.0..2.0)))
            });
            let left = l_mul_with(law, &l_mul_with(law, &p, &q), &r);
            let right = l_mul_with(law, &p, &l_mul_with(law, &q, &r));
            assert!(left.max_abs_diff(&right) < 1e-12, "{law:?}");
            assert!(
                l_mul_with(law, &p, &l_inv_with(law, &p)).max_abs_diff(&LPoint9::IDENTITY) < 1e-12
            );
            assert!(
                l_mul_with(law, &l_inv_with(law, &p), &p).max_abs_diff(&LPoint9::IDENTITY) < 1e-12
            );
        }
    }
    // N sits in L as a subgroup.
    for _ in 0..100 {
        let (a, b) = (random_nil(&mut rng), random_nil(&mut rng));
        let prod = l_mul(&LPoint9::from_nil(&a), &LPoint9::from_nil(&b));
        assert!(prod.nil_part().max_abs_diff(&nil_mul(&a, &b)) < 1e-12);
    }
}

#[test]
fn iwasawa_reconstructs_sl4_and_sp4() {
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    for _ in 0..1000 {
        let g = random_sl4(&mut rng, 0.5);
        let f = iwasawa_decompose(&g).unwrap();
        assert!((f.product() - g.entries()).amax() <= 1e-10);
        assert!(orthogonality_defect(f.k.entries()) <= 1e-10);
        assert_eq!(f.n.tag(), GroupTag::UpperUnipotent);

        let s = random_sp4(&mut rng, 0.5);
        let f = iwasawa_decompose(&s).unwrap();
        assert!((f.product() - s.entries()).amax() <= 1e-10);
        for m in [&f.k, &f.a, &f.n] {
            assert!(symplectic_defect(m.entries()) <= 1e-10);
        }
        assert_eq!(f.n.tag(), GroupTag::SpUnipotent);
    }
}

#[test]
fn iwasawa_is_unique_on_its_own_factors() {
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    for _ in 0..100 {
        let k = random_so4(&mut rng);
        let log_a = [
            rng.random_range(-0.5..0.5),
            rng.random_range(-0.5..0.5),
            rng.random_range(-0.5..0.5),
        ];
        let n = random_nil(&mut rng);
        let g = k.entries() * diag_from_log(&log_a) * n.to_matrix();
        let f = iwasawa_decompose(&MatrixElement::new(g, GroupTag::Sl4).unwrap()).unwrap();
        assert!((f.k.entries() - k.entries()).amax() < 1e-10);
        assert!(NilPoint6::from_matrix(f.n.entries()).max_abs_diff(&n) < 1e-10);
        for i in 0..3 {
            assert!((f.log_a[i] - log_a[i]).abs() < 1e-10);
        }
    }
}

#[test]
fn construction_rejects_invalid_matrices() {
    let mut m = nalgebra::Matrix4::<f64>::identity();
    m[(0, 0)] = 2.0;
    assert!(matches!(
        MatrixElement::new(m, GroupTag::Sl4),
        Err(GroupError::InvariantViolation { .. })
    ));
    assert!(MatrixElement::new(m, GroupTag::Sp4).is_err());
    let singular = nalgebra::Matrix4::<f64>::zeros();
    assert!(matches!(
        mgs_qr(&singular),
        Err(GroupError::NearSingular { .. })
    ));
    let n = NilPoint6::new(1.0, 2.0, 3.0, 4.0, 5.0, 6.0).embed();
    assert!(matches!(
        iwasawa_decompose(&n),
        Err(GroupError::UnsupportedTag(GroupTag::UpperUnipotent))
    ));
}

#[test]
fn matrix_json_round_trip() {
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let g = random_sl4(&mut rng, 0.3);
    let back = MatrixElement::from_json(&g.to_json(), GroupTag::Sl4).unwrap();
    assert_eq!(back, g);
    assert!(MatrixElement::from_json("[[1,2],[3]]", GroupTag::Sl4).is_err());
}

#[test]
fn modulus_is_the_conjugation_jacobian() {
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let h = 1e-5;
    for _ in 0..100 {
        let t = [
            rng.random_range(-0.5..0.5),
            rng.random_range(-0.5..0.5),
            rng.random_range(-0.5..0.5),
        ];
        let n = random_nil(&mut rng).to_array();
        let mut jac = nalgebra::Matrix6::<f64>::zeros();
        for j in 0..6 {
            let (mut a, mut b) = (n, n);
            a[j] += h;
            b[j] -= h;
            let (fa, fb) = (
                conjugate_by_a(&t, &NilPoint6::from_array(a)).to_array(),
                conjugate_by_a(&t, &NilPoint6::from_array(b)).to_array(),
            );
            for i in 0..6 {
                jac[(i, j)] = (fa[i] - fb[i]) / (2.0 * h);
            }
        }
        let d = diag_from_log(&t);
        let mut prod = 1.0;
        for i in 0..4 {
            for j in i + 1..4 {
                prod *= d[(i, i)] / d[(j, j)];
            }
        }
        let m = modulus_factor(&t);
        assert!((m - prod).abs() / prod < 1e-12);
        assert!((jac.determinant() - m).abs() / m < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn unipotent_law_is_associative(a in prop::array::uniform6(-3.0f64..3.0), b in prop::array::uniform6(-3.0f64..3.0), c in prop::array::uniform6(-3.0f64..3.0)) {
        let (p, q, r) = (NilPoint6::from_array(a), NilPoint6::from_array(b), NilPoint6::from_array(c));
        let lhs = nil_mul(&nil_mul(&p, &q), &r);
        let rhs = nil_mul(&p, &nil_mul(&q, &r));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-11);
        prop_assert!(nil_mul(&p, &nil_inv(&p)).max_abs_diff(&NilPoint6::IDENTITY) < 1e-11);
    }

    #[test]
    fn heisenberg_law_is_associative(a in prop::array::uniform3(-3.0f64..3.0), b in prop::array::uniform3(-3.0f64..3.0), c in prop::array::uniform3(-3.0f64..3.0)) {
        let [p, q, r] = [a, b, c].map(|v| HeisPoint3::new(v[0], v[1], v[2]));
        prop_assert!(heis_mul(&heis_mul(&p, &q), &r).max_abs_diff(&heis_mul(&p, &heis_mul(&q, &r))) < 1e-11);
    }
}
