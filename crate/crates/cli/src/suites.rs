//! The verification suites. Each one runs a module's battery with the
//! configured seed and budgets and appends [`Check`] rows; rows are tagged
//! with the acceptance criterion they belong to and timed per criterion.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use lgha_core::diffops::{self as ops, CoordMap, JetFunction, OpExpr, PolyDiffOp, PolyVectorField};
use lgha_core::groups::*;
use lgha_core::kna::{self, EuclidFactor, SeparableKna, Sl4Kna, Sp4Kna};
use lgha_core::nilfourier::{
    self as nf, BilinearMethod, PlancherelConfig, PlancherelMethod, TestFn,
};
use lgha_core::peterweyl::{
    self as pw, BandLimited, HalfInt, IrrepLabel, So4, So4Element, So4Label, U2Label,
};
use lgha_core::quadrature::{self as quad, Axis, GridSpec, SampledField};

use crate::config::SuiteConfig;
use crate::report::{Check, Report, Summary};
use crate::CliError;

/// Suites in the order `all` runs them.
pub const SUITES: &[(&str, &str)] = &[
    (
        "groups",
        "group laws against matrices, Iwasawa factors, modulus",
    ),
    (
        "nil-plancherel",
        "Plancherel, bilinear identity and L-convolution on N",
    ),
    ("so4", "Peter-Weyl transform on SO(4) at band-limit 2"),
    (
        "sl4-plancherel",
        "KNA Plancherel on SL(4), nested spot checks, lift invariance",
    ),
    (
        "sp4-plancherel",
        "KNA Plancherel on SP(4), nested spot checks, lift invariance",
    ),
    (
        "semidirect-plancherel",
        "Plancherel on R^4 x SL(4) and its lifts",
    ),
    (
        "operator-identities",
        "displayed operator identities and the mutation control",
    ),
    (
        "hormander",
        "Heisenberg brackets, bracket rank, fourth-order example",
    ),
    ("solvers", "spectral CR solves and the conjugated solvers"),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).chain(["all"]).collect()
}

/// Runs `suite` (one of [`suite_names`]) under `cfg`. `cfg.suite` is
/// ignored in favour of the argument and echoed as given.
pub fn run(suite: &str, cfg: &SuiteConfig) -> Result<Report, CliError> {
    let cfg = SuiteConfig {
        suite: suite.to_string(),
        ..cfg.clone()
    };
    cfg.validate()?;
    let start = Instant::now();
    let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true);
    let mut ctx = Ctx {
        cfg: &cfg,
        suite: "",
        criterion: None,
        checks: Vec::new(),
        timings: BTreeMap::new(),
    };
    for (name, _) in SUITES {
        if suite == "all" || suite == *name {
            ctx.suite = name;
            dispatch(name, &mut ctx)?;
        }
    }
    let passed = ctx.checks.iter().filter(|c| c.pass).count();
    let failed = ctx.checks.len() - passed;
    Ok(Report {
        suite: suite.to_string(),
        timestamp,
        seed: cfg.seed,
        config: cfg.clone(),
        summary: Summary {
            passed,
            failed,
            wall_time_s: start.elapsed().as_secs_f64(),
        },
        checks: ctx.checks,
        timings: ctx.timings,
    })
}

fn dispatch(name: &str, ctx: &mut Ctx) -> Result<(), CliError> {
    match name {
        "groups" => groups(ctx),
        "nil-plancherel" => nil_plancherel(ctx),
        "so4" => so4(ctx),
        "sl4-plancherel" => sl4_plancherel(ctx),
        "sp4-plancherel" => sp4_plancherel(ctx),
        "semidirect-plancherel" => semidirect_plancherel(ctx),
        "operator-identities" => operator_identities(ctx),
        "hormander" => hormander(ctx),
        "solvers" => solvers(ctx),
        other => Err(CliError::Config(format!("unknown suite {other:?}"))),
    }
}

struct Ctx<'a> {
    cfg: &'a SuiteConfig,
    suite: &'static str,
    criterion: Option<u8>,
    checks: Vec<Check>,
    timings: BTreeMap<u8, f64>,
}

impl Ctx<'_> {
    fn push(&mut self, mut c: Check) {
        c.name = format!("{}/{}", self.suite, c.name);
        c.criterion = self.criterion;
        self.checks.push(c);
    }

    /// Runs `f` with its rows tagged `n` and its time charged to `n`.
    fn criterion<F>(&mut self, n: u8, f: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut Self) -> Result<(), CliError>,
    {
        let t = Instant::now();
        self.criterion = Some(n);
        let r = f(self);
        self.criterion = None;
        *self.timings.entry(n).or_default() += t.elapsed().as_secs_f64();
        r
    }

    fn tol(&self, key: &str) -> f64 {
        self.cfg.tol(key)
    }

    /// A seed for the stream labelled `tag`, derived from the config seed.
    fn seed(&self, tag: u64) -> u64 {
        // splitmix64 finalizer
        let mut z = self.cfg.seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn rng(&self, tag: u64) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(self.seed(tag))
    }

    fn mc(&self, n: usize) -> usize {
        n.min(self.cfg.budgets.max_mc_samples)
    }

    fn grid_budget(&self) -> usize {
        self.cfg.budgets.max_grid_points
    }

    fn require_grid(&self, what: &str, points: usize) -> Result<(), CliError> {
        if points > self.grid_budget() {
            return Err(CliError::Budget(format!(
                "{what} needs {points} grid points, budget is {}",
                self.grid_budget()
            )));
        }
        Ok(())
    }
}

/// A worst relative error reported on its own.
fn worst_rel(name: &str, anchor: &str, rel_err: f64, tol: f64) -> Check {
    Check::rel_given(name, anchor, rel_err, 0.0, rel_err, tol)
}

// ------------------------------------------------------------------ groups

fn random_nil<R: Rng>(rng: &mut R) -> NilPoint6 {
    NilPoint6::from_array(std::array::from_fn(|_| rng.random_range(-2.0..2.0)))
}

fn groups(ctx: &mut Ctx) -> Result<(), CliError> {
    ctx.criterion(1, |ctx| {
        let mut rng = ctx.rng(1);
        let (mut mul, mut inv, mut scale) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..1000 {
            let (p, q) = (random_nil(&mut rng), random_nil(&mut rng));
            let m = p.to_matrix() * q.to_matrix();
            mul = mul.max(nil_mul(&p, &q).max_abs_diff(&NilPoint6::from_matrix(&m)));
            let mi = p
                .to_matrix()
                .try_inverse()
                .ok_or_else(|| CliError::Compute("singular".into()))?;
            inv = inv.max(nil_inv(&p).max_abs_diff(&NilPoint6::from_matrix(&mi)));
            scale = scale.max(m.amax());
        }
        let tol = ctx.tol("group-law");
        ctx.push(
            Check::max_abs(
                "nil-law-vs-matrix",
                "unipotent group law in coordinates",
                mul,
                scale,
                tol,
            )
            .with_note("1000 pairs"),
        );
        ctx.push(
            Check::max_abs(
                "nil-inverse-vs-matrix",
                "unipotent group inverse in coordinates",
                inv,
                scale,
                tol,
            )
            .with_note("1000 points"),
        );

        let heis = |rng: &mut ChaCha20Rng| {
            HeisPoint3::new(
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            )
        };
        let (mut mul, mut inv, mut scale) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..1000 {
            let (p, q) = (heis(&mut rng), heis(&mut rng));
            let m = p.to_matrix() * q.to_matrix();
            mul = mul.max(heis_mul(&p, &q).max_abs_diff(&HeisPoint3::from_matrix(&m)));
            let mi = p
                .to_matrix()
                .try_inverse()
                .ok_or_else(|| CliError::Compute("singular".into()))?;
            inv = inv.max(heis_inv(&p).max_abs_diff(&HeisPoint3::from_matrix(&mi)));
            scale = scale.max(m.amax());
        }
        ctx.push(
            Check::max_abs(
                "heisenberg-law-vs-matrix",
                "nilpotent symplectic group law (z,y,x)",
                mul,
                scale,
                tol,
            )
            .with_note("1000 pairs"),
        );
        ctx.push(
            Check::max_abs(
                "heisenberg-inverse-vs-matrix",
                "nilpotent symplectic group inverse",
                inv,
                scale,
                tol,
            )
            .with_note("1000 points"),
        );
        Ok(())
    })?;

    ctx.criterion(2, |ctx| {
        let mut rng = ctx.rng(2);
        let mut worst = [0.0f64; 6];
        let mut scale = 0.0f64;
        for _ in 0..1000 {
            let (y, xp) = (random_nil(&mut rng), random_nil(&mut rng));
            let exact = nil_mul(&nil_inv(&y), &xp).to_array();
            let shown = nil_quotient_reference(&y, &xp).to_array();
            for k in 0..6 {
                worst[k] = worst[k].max((exact[k] - shown[k]).abs());
                scale = scale.max(exact[k].abs());
            }
        }
        let tol = ctx.tol("quotient-formula");
        for (k, w) in worst.iter().enumerate() {
            ctx.push(
                Check::max_abs(
                    &format!("quotient-formula-slot-{}", k + 1),
                    "printed expansion of Y^-1 X' in N",
                    *w,
                    scale,
                    tol,
                )
                .with_note("1000 pairs against nil_mul(nil_inv(Y), X')"),
            );
        }
        Ok(())
    })?;

    ctx.criterion(3, |ctx| {
        let mut rng = ctx.rng(3);
        let (mut sl_rec, mut sl_orth, mut sp_rec) = (0.0f64, 0.0f64, 0.0f64);
        let mut sp_sym = [0.0f64; 3];
        for _ in 0..1000 {
            let g = random_sl4(&mut rng, 0.5);
            let f = iwasawa_decompose(&g)?;
            sl_rec = sl_rec.max((f.product() - g.entries()).amax());
            sl_orth = sl_orth.max(orthogonality_defect(f.k.entries()));
            let s = random_sp4(&mut rng, 0.5);
            let f = iwasawa_decompose(&s)?;
            sp_rec = sp_rec.max((f.product() - s.entries()).amax());
            for (w, m) in sp_sym.iter_mut().zip([&f.k, &f.a, &f.n]) {
                *w = w.max(symplectic_defect(m.entries()));
            }
        }
        let tol = ctx.tol("iwasawa");
        let anchor = "Iwasawa decomposition g = kan";
        ctx.push(
            Check::max_abs("sl4-reconstruction", anchor, sl_rec, 1.0, tol)
                .with_note("1000 samples"),
        );
        ctx.push(Check::max_abs(
            "sl4-k-orthogonal",
            anchor,
            sl_orth,
            1.0,
            tol,
        ));
        ctx.push(
            Check::max_abs("sp4-reconstruction", anchor, sp_rec, 1.0, tol)
                .with_note("1000 samples"),
        );
        for (name, w) in ["sp4-k-symplectic", "sp4-a-symplectic", "sp4-n-symplectic"]
            .iter()
            .zip(sp_sym)
        {
            ctx.push(Check::max_abs(
                name,
                "symplectic Iwasawa factors",
                w,
                1.0,
                tol,
            ));
        }
        Ok(())
    })?;

    ctx.criterion(4, |ctx| {
        let tol = ctx.tol("modulus");
        let anchor = "modulus of n -> a n a^-1 is prod a_i/a_j";
        let sl = kna::conjugation_jacobian_check::<Sl4Kna>(100, ctx.seed(4))?;
        ctx.push(
            worst_rel("sl4-conjugation-jacobian", anchor, sl, tol)
                .with_note("finite-difference Jacobian, 100 samples"),
        );
        let sp = kna::conjugation_jacobian_check::<Sp4Kna>(100, ctx.seed(5))?;
        ctx.push(
            worst_rel("sp4-conjugation-jacobian", anchor, sp, tol)
                .with_note("finite-difference Jacobian, 100 samples"),
        );
        Ok(())
    })?;

    let mut rng = ctx.rng(6);
    for law in [LLaw::Displayed, LLaw::Twisted] {
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let [p, q, r]: [LPoint9; 3] = std::array::from_fn(|_| {
                LPoint9::from_array(std::array::from_fn(|_| rng.random_range(-2.0..2.0)))
            });
            let a = l_mul_with(law, &l_mul_with(law, &p, &q), &r);
            let b = l_mul_with(law, &p, &l_mul_with(law, &q, &r));
            worst = worst.max(a.max_abs_diff(&b));
            worst = worst
                .max(l_mul_with(law, &p, &l_inv_with(law, &p)).max_abs_diff(&LPoint9::IDENTITY));
        }
        let name = format!("l-law-{}-associative", format!("{law:?}").to_lowercase());
        let tol = ctx.tol("group-law");
        ctx.push(
            Check::max_abs(&name, "auxiliary group L", worst, 1.0, 1e3 * tol)
                .with_note("1000 triples"),
        );
    }
    Ok(())
}

// ------------------------------------------------------------ nil-plancherel

fn wide_gaussian() -> nf::GaussPoly {
    nf::GaussPoly {
        mu: [0.2, -0.1, 0.3, 0.0, -0.2, 0.1],
        sigma: [1.5, 1.3, 1.4, 1.6, 1.2, 1.5],
        terms: vec![
            (Complex64::new(1.0, 0.0), [0; 6]),
            (Complex64::new(0.2, -0.1), [1, 0, 0, 1, 0, 0]),
        ],
    }
}

fn nil_plancherel(ctx: &mut Ctx) -> Result<(), CliError> {
    ctx.criterion(5, |ctx| {
        let anchor = "Plancherel formula on N";
        let base = PlancherelConfig {
            budget: ctx.grid_budget(),
            mc_samples: ctx.mc(200_000),
            seed: ctx.seed(10),
            ..PlancherelConfig::default()
        };
        let tol = ctx.tol("nil-plancherel-separable");
        let sigma = [0.6, 0.9, 1.3, 2.0, 0.5, 1.1];
        let g = nf::GaussPoly::gaussian([0.5, -1.0, 0.0, 1.5, -0.3, 0.2], sigma);
        let p = nf::plancherel_n_check(&TestFn::Separable(g), &base)?;
        let exact = PI.powi(3) * sigma.iter().product::<f64>();
        ctx.push(Check::rel(
            "gaussian-norm-closed-form",
            anchor,
            p.lhs,
            exact,
            tol,
        ));
        ctx.push(Check::rel_given(
            "gaussian-plancherel",
            anchor,
            p.lhs,
            p.rhs,
            p.rel_err,
            tol,
        ));

        let mut rng = ctx.rng(11);
        for i in 0..10 {
            let g = nf::GaussPoly::random(&mut rng, (0.5, 2.0), 2.0);
            let p = nf::plancherel_n_check(&TestFn::Separable(g), &base)?;
            ctx.push(Check::rel_given(
                &format!("separable-corpus-{i}"),
                anchor,
                p.lhs,
                p.rhs,
                p.rel_err,
                tol,
            ));
        }

        let p = nf::plancherel_n_check(&TestFn::skew_bump(), &base)?;
        let c = match p.method {
            PlancherelMethod::MonteCarlo => Check::stderrs(
                "skew-bump",
                anchor,
                p.lhs,
                p.rhs,
                p.stderr.unwrap_or(f64::NAN),
                ctx.tol("mc-stderrs"),
            )
            .with_note(format!(
                "{}^6 grid over budget: norm side by Monte Carlo ({} samples)",
                base.count, base.mc_samples
            )),
            _ => Check::rel_given(
                "skew-bump",
                anchor,
                p.lhs,
                p.rhs,
                p.rel_err,
                ctx.tol("nil-plancherel-grid"),
            )
            .with_note(format!("{}^6 grid", base.count)),
        };
        ctx.push(c);
        Ok(())
    })?;

    ctx.criterion(6, |ctx| {
        let anchor = "bilinear identity (phi-check * f)(0) = (2pi)^-6 <Ff, Fphi>";
        let mut rng = ctx.rng(12);
        let mut pairs = vec![{
            let g = nf::GaussPoly::gaussian([0.0; 6], [0.9, 1.0, 1.1, 0.8, 1.2, 1.0]);
            (g.clone(), g)
        }];
        for _ in 0..2 {
            pairs.push((
                nf::GaussPoly::random(&mut rng, (0.7, 1.2), 1.0),
                nf::GaussPoly::random(&mut rng, (0.7, 1.2), 1.0),
            ));
        }
        let count = 16usize;
        let n_mc = ctx.mc(1_000_000);
        for (i, (f, phi)) in pairs.iter().enumerate() {
            if count.pow(6) <= ctx.grid_budget() {
                let b = nf::bilinear_identity_check(
                    f,
                    phi,
                    BilinearMethod::Grid {
                        count,
                        budget: ctx.grid_budget(),
                    },
                )?;
                ctx.push(
                    Check::rel_given(
                        &format!("grid-{i}"),
                        anchor,
                        b.lhs,
                        b.rhs,
                        b.rel_err,
                        ctx.tol("bilinear-grid"),
                    )
                    .with_note("16^6 grid"),
                );
            } else {
                let b = nf::bilinear_identity_check(
                    f,
                    phi,
                    BilinearMethod::MonteCarlo {
                        n: n_mc,
                        seed: ctx.seed(13 + i as u64),
                    },
                )?;
                ctx.push(
                    Check::stderrs(
                        &format!("grid-{i}"),
                        anchor,
                        b.lhs,
                        b.rhs,
                        b.stderr.unwrap_or(f64::NAN),
                        ctx.tol("mc-stderrs"),
                    )
                    .with_note(format!(
                        "16^6 grid over budget: Monte Carlo with {n_mc} samples"
                    )),
                );
            }
            let m = nf::bilinear_identity_check(
                f,
                phi,
                BilinearMethod::MonteCarlo {
                    n: n_mc,
                    seed: ctx.seed(20 + i as u64),
                },
            )?;
            ctx.push(
                Check::stderrs(
                    &format!("mc-{i}"),
                    anchor,
                    m.lhs,
                    m.rhs,
                    m.stderr.unwrap_or(f64::NAN),
                    ctx.tol("mc-stderrs"),
                )
                .with_note(format!("{n_mc} samples")),
            );
        }
        Ok(())
    })?;

    ctx.criterion(7, |ctx| {
        let anchor = "u * F = u *_c F on L";
        let u = nf::GaussPoly::gaussian([0.0; 6], [0.6; 6]);
        let f = wide_gaussian();
        let lifted = nf::lift_to_l(|p: &NilPoint6| f.eval(p));
        let mut rng = ctx.rng(30);
        let pts: Vec<LPoint9> = (0..10)
            .map(|_| LPoint9::from_array(std::array::from_fn(|_| rng.random_range(-0.8..0.8))))
            .collect();
        let n = ctx.mc(20_000);
        for (law, name) in [
            (LLaw::Displayed, "displayed-law"),
            (LLaw::Twisted, "twisted-law-companion"),
        ] {
            let res = nf::convolution_equality_check(&u, &lifted, &pts, law, n, ctx.seed(31))?;
            let worst = res
                .iter()
                .max_by(|a, b| a.rel_err.total_cmp(&b.rel_err))
                .ok_or_else(|| CliError::Compute("no points".into()))?;
            ctx.push(
                Check::rel_given(
                    name,
                    anchor,
                    worst.lhs,
                    worst.rhs,
                    worst.rel_err,
                    ctx.tol("convolution-equality"),
                )
                .with_note(format!("worst of {} L-points, {n} samples each", res.len())),
            );
        }
        Ok(())
    })
}

// ------------------------------------------------------------------- so4

fn random_so4_element<R: Rng>(rng: &mut R) -> Result<So4Element, CliError> {
    Ok(So4Element::from_matrix(random_so4(rng).entries())?)
}

fn so4(ctx: &mut Ctx) -> Result<(), CliError> {
    ctx.criterion(8, |ctx| {
        let band = HalfInt::from_int(2);
        if ctx.cfg.so4_bandlimit_twice() < band.twice() {
            return Err(CliError::Budget(format!(
                "SO(4) band-limit 2 requested, budget is {}",
                ctx.cfg.budgets.max_so4_bandlimit
            )));
        }
        let q = quad::so4_quadrature(band, quad::DEFAULT_SO4_BUDGET)?;
        let labels = pw::so4_labels(band);

        // Sample each matrix coefficient from per-factor SU(2) representations,
        // γ(p, q) = D^{j1}(p) ⊗ D^{j2}(q); spot-checked against `eval` below.
        let nodes = pw::so4_nodes(&q);
        let m_su2 = (nodes.len() as f64).sqrt().round() as usize;
        let left: Vec<_> = (0..m_su2)
            .map(|a| pw::su2_reps_upto(band, &nodes[a * m_su2].0.left))
            .collect();
        let right: Vec<_> = (0..m_su2)
            .map(|b| pw::su2_reps_upto(band, &nodes[b].0.right))
            .collect();
        let mut worst = 0.0f64;
        let mut count = 0;
        for label in &labels {
            let d = label.dim();
            let (t1, t2) = (label.j1.twice() as usize, label.j2.twice() as usize);
            let d2 = t2 + 1;
            for (m, n) in [(0, 0), (d - 1, 0), (d / 2, d - 1), (d - 1, d - 1)] {
                let norm = (d as f64).sqrt();
                let values: Vec<Complex64> = (0..nodes.len())
                    .map(|i| {
                        let (a, b) = (i / m_su2, i % m_su2);
                        left[a][t1][(m / d2, n / d2)] * right[b][t2][(m % d2, n % d2)] * norm
                    })
                    .collect();
                let f = BandLimited::matrix_coefficient(*label, m, n);
                for i in (0..nodes.len()).step_by(nodes.len() / 16) {
                    worst = worst.max((f.eval::<So4>(&nodes[i].0) - values[i]).norm());
                }
                let t = pw::so4_transform_sampled(&values, &q)?;
                // γ_mn transforms to e_nm / √d in the d-dimensional block.
                let mut block = nalgebra::DMatrix::zeros(d, d);
                block[(n, m)] = Complex64::new(1.0 / norm, 0.0);
                let mut want = pw::CompactSpectrum::new();
                want.insert(*label, block);
                worst = worst.max(t.max_abs_diff(&want));
                count += 1;
            }
        }
        ctx.push(
            Check::max_abs(
                "schur-orthogonality",
                "Schur orthogonality of SO(4) matrix coefficients",
                worst,
                1.0,
                ctx.tol("schur"),
            )
            .with_note(format!("{count} matrix coefficients, band-limit 2")),
        );

        let mut rng = ctx.rng(40);
        let f = BandLimited::random(&mut rng, &labels);
        let values: Vec<Complex64> = nodes.iter().map(|(x, _)| f.eval::<So4>(x)).collect();
        let t = pw::so4_transform_sampled(&values, &q)?;
        let mut err = t.max_abs_diff(&f.coeffs);
        let mut scale = 0.0f64;
        for _ in 0..50 {
            let x = random_so4_element(&mut rng)?;
            let v = f.eval::<So4>(&x);
            err = err.max((pw::compact_inverse::<So4>(&t, &x) - v).norm());
            scale = scale.max(v.norm());
        }
        ctx.push(
            Check::max_abs(
                "inversion",
                "Peter-Weyl inversion on SO(4)",
                err,
                scale,
                ctx.tol("peter-weyl-inversion"),
            )
            .with_note("coefficients and 50 random points"),
        );
        let terms: Vec<f64> = values
            .iter()
            .zip(&nodes)
            .map(|(v, (_, w))| v.norm_sqr() * w)
            .collect();
        let lhs = quad::pairwise_sum_f64(&terms);
        ctx.push(Check::rel(
            "plancherel",
            "Peter-Weyl Plancherel on SO(4)",
            lhs,
            t.energy(),
            ctx.tol("peter-weyl-plancherel"),
        ));
        Ok(())
    })
}

// --------------------------------------------------------- kna plancherel

fn trivial_so4() -> BandLimited<So4Label> {
    BandLimited::matrix_coefficient(So4Label::TRIVIAL, 0, 0)
}

fn gaussian_sl4(rng: &mut ChaCha20Rng) -> Result<SeparableKna<Sl4Kna>, CliError> {
    let v = EuclidFactor::gaussian(
        (0..6).map(|_| rng.random_range(-0.5..0.5)).collect(),
        (0..6).map(|_| rng.random_range(0.3..0.8)).collect(),
    );
    let w = EuclidFactor::gaussian(
        (0..3).map(|_| rng.random_range(-0.3..0.3)).collect(),
        (0..3).map(|_| rng.random_range(0.2..0.5)).collect(),
    );
    Ok(SeparableKna::new(trivial_so4(), v, w)?)
}

fn invariance(ctx: &mut Ctx, name: &str, anchor: &str, r: &kna::InvarianceReport) {
    ctx.push(
        Check::max_abs(
            name,
            anchor,
            r.max_abs,
            r.max_value,
            ctx.tol("lift-invariance"),
        )
        .with_note(format!(
            "{} samples, max |value| {:.3e}",
            r.samples, r.max_value
        )),
    );
}

fn sl4_plancherel(ctx: &mut Ctx) -> Result<(), CliError> {
    let grid = kna::KnaGrid::default();
    ctx.criterion(9, |ctx| {
        let anchor = "Plancherel formula on SL(4) in KNA coordinates";
        let tol = ctx.tol("kna-plancherel");
        let mut rng = ctx.rng(50);
        for i in 0..5 {
            let v = EuclidFactor::random(&mut rng, 6, (0.3, 1.0), 1.0);
            let w = EuclidFactor::random(&mut rng, 3, (0.2, 0.6), 0.5);
            let f = SeparableKna::<Sl4Kna>::new(trivial_so4(), v, w)?;
            let c = kna::plancherel_sl4_check(&f, HalfInt::HALF, &grid)?;
            ctx.push(Check::rel_given(
                &format!("separable-{i}"),
                anchor,
                c.lhs,
                c.rhs,
                c.rel_err,
                tol,
            ));
        }
        let v = EuclidFactor::random(&mut rng, 6, (0.3, 1.0), 1.0);
        let w = EuclidFactor::random(&mut rng, 3, (0.2, 0.6), 0.5);
        let half = So4Label::new(HalfInt::HALF, HalfInt::HALF)?;
        let f = SeparableKna::<Sl4Kna>::new(BandLimited::matrix_coefficient(half, 1, 2), v, w)?;
        let c = kna::plancherel_sl4_check(&f, HalfInt::from_int(1), &grid)?;
        ctx.push(Check::rel_given(
            "half-half-coefficient",
            anchor,
            c.lhs,
            c.rhs,
            c.rel_err,
            tol,
        ));

        let band = HalfInt::HALF;
        let mut f = gaussian_sl4(&mut rng)?;
        f.u = BandLimited::random(&mut rng, &pw::so4_labels(band));
        let points = kna::random_spectral_points(&mut rng, &f, band, 5, 0.1);
        for (i, s) in kna::nested_spot_check(&f, band, &points, 3, &grid)?
            .iter()
            .enumerate()
        {
            ctx.push(
                worst_rel(
                    &format!("nested-spot-{i}"),
                    "factorized vs nested SL(4) transform",
                    s.rel_err,
                    ctx.tol("nested-spot"),
                )
                .with_note(format!("label {}", s.label)),
            );
        }
        Ok(())
    })?;

    ctx.criterion(10, |ctx| {
        let mut rng = ctx.rng(51);
        let mut f = gaussian_sl4(&mut rng)?;
        f.u = BandLimited::random(&mut rng, &pw::so4_labels(HalfInt::from_int(1)));
        let r = kna::upsilon_invariance_check(&f, 1000, ctx.seed(52))?;
        invariance(
            ctx,
            "upsilon-invariance",
            "right K-invariance of the lift to G x K",
            &r,
        );
        let r = kna::upsilon_restriction_check(&f, 1000, ctx.seed(53))?;
        invariance(
            ctx,
            "upsilon-restriction",
            "lift to G x K restricts to f",
            &r,
        );
        Ok(())
    })
}

fn sp4_plancherel(ctx: &mut Ctx) -> Result<(), CliError> {
    let grid = kna::KnaGrid::default();
    ctx.criterion(9, |ctx| {
        let anchor = "Plancherel formula on SP(4) in KNA coordinates";
        let tol = ctx.tol("kna-plancherel");
        let mut rng = ctx.rng(60);
        let v = EuclidFactor::random(&mut rng, 4, (0.3, 1.0), 1.0);
        let w = EuclidFactor::random(&mut rng, 2, (0.2, 0.6), 0.5);
        let trivial = BandLimited::matrix_coefficient(U2Label::new(0, 0)?, 0, 0);
        let f = SeparableKna::<Sp4Kna>::new(trivial, v.clone(), w.clone())?;
        let c = kna::sp4_restrict_check(&f, 1, &grid)?;
        ctx.push(Check::rel_given(
            "trivial-label",
            anchor,
            c.lhs,
            c.rhs,
            c.rel_err,
            tol,
        ));
        let u = BandLimited::random(&mut rng, &pw::u2_labels(1));
        let f = SeparableKna::<Sp4Kna>::new(u, v, w)?;
        let c = kna::sp4_restrict_check(&f, 1, &grid)?;
        ctx.push(Check::rel_given(
            "charged-labels",
            anchor,
            c.lhs,
            c.rhs,
            c.rel_err,
            tol,
        ));

        let v = EuclidFactor::gaussian(vec![0.2, -0.1, 0.3, 0.0], vec![0.5, 0.6, 0.4, 0.7]);
        let w = EuclidFactor::gaussian(vec![0.1, -0.2], vec![0.3, 0.4]);
        let u = BandLimited::random(&mut rng, &pw::u2_labels(1));
        let f = SeparableKna::<Sp4Kna>::new(u, v, w)?;
        let points = kna::random_spectral_points(&mut rng, &f, 1, 5, 0.1);
        for (i, s) in kna::nested_spot_check(&f, 1, &points, 3, &grid)?
            .iter()
            .enumerate()
        {
            ctx.push(
                worst_rel(
                    &format!("nested-spot-{i}"),
                    "factorized vs nested SP(4) transform",
                    s.rel_err,
                    ctx.tol("nested-spot"),
                )
                .with_note(format!("label {}", s.label)),
            );
        }
        Ok(())
    })?;

    ctx.criterion(10, |ctx| {
        let mut rng = ctx.rng(61);
        let u = BandLimited::random(&mut rng, &pw::u2_labels(1));
        let g = SeparableKna::<Sp4Kna>::new(
            u,
            EuclidFactor::gaussian(vec![0.0; 4], vec![1.0; 4]),
            EuclidFactor::gaussian(vec![0.0; 2], vec![0.5; 2]),
        )?;
        let r = kna::upsilon_invariance_check(&g, 1000, ctx.seed(62))?;
        invariance(
            ctx,
            "upsilon-invariance",
            "right K-invariance of the lift to G x K",
            &r,
        );
        Ok(())
    })
}

fn semidirect_plancherel(ctx: &mut Ctx) -> Result<(), CliError> {
    let grid = kna::KnaGrid::default();
    ctx.criterion(9, |ctx| {
        let mut rng = ctx.rng(70);
        for i in 0..3 {
            let f = gaussian_sl4(&mut rng)?.with_translation(EuclidFactor::random(
                &mut rng,
                4,
                (0.5, 1.5),
                1.0,
            ))?;
            let c = kna::plancherel_p_check(&f, HalfInt::HALF, &grid)?;
            ctx.push(Check::rel_given(
                &format!("separable-{i}"),
                "Plancherel formula on R^4 x SL(4)",
                c.lhs,
                c.rhs,
                c.rel_err,
                ctx.tol("kna-plancherel"),
            ));
        }
        Ok(())
    })?;

    let w = kna::semidirect_law_check(1000, ctx.seed(71))?;
    ctx.push(Check::max_abs(
        "affine-law-vs-matrix",
        "semidirect product law as 5x5 affine matrices",
        w,
        1.0,
        ctx.tol("affine-law"),
    ));

    ctx.criterion(10, |ctx| {
        let mut rng = ctx.rng(72);
        let mut f = gaussian_sl4(&mut rng)?;
        f.u = BandLimited::random(&mut rng, &pw::so4_labels(HalfInt::from_int(1)));
        let p = f.with_translation(EuclidFactor::gaussian(vec![0.0; 4], vec![1.5; 4]))?;
        let r = kna::q_lift_invariance_check(&p, 1000, ctx.seed(73))?;
        invariance(ctx, "q-lift-invariance", "invariance of the lift to Q", &r);
        let r = kna::h_lift_reduction_check(&p, 1000, ctx.seed(74))?;
        invariance(ctx, "h-lift-reduction", "lift to H reduces to f", &r);
        Ok(())
    })
}

// ------------------------------------------------------ operator identities

fn operator_identities(ctx: &mut Ctx) -> Result<(), CliError> {
    let corpus = ops::standard_corpus(ctx.seed(80));
    let points = ops::random_points(ctx.seed(81), 100);
    let tol = ctx.tol("operator-identity");
    ctx.criterion(11, |ctx| {
        for id in ops::displayed_identities() {
            let r = id.verify(&corpus, &points)?;
            ctx.push(
                Check::max_abs(
                    &r.name,
                    &r.anchor,
                    r.discrepancy.max_abs,
                    r.discrepancy.max_value,
                    tol,
                )
                .with_note(format!(
                    "{} = {}; {} samples",
                    r.lhs, r.rhs, r.discrepancy.samples
                )),
            );
        }
        let base = ops::mutation_baseline().verify(&corpus, &points)?;
        ctx.push(Check::max_abs(
            &base.name,
            &base.anchor,
            base.discrepancy.max_abs,
            base.discrepancy.max_value,
            tol,
        ));
        let m = ops::mutation_control().verify(&corpus, &points)?;
        ctx.push(
            Check::exceeds(
                "mutation-detected",
                &m.anchor,
                m.discrepancy.max_abs,
                m.discrepancy.max_value,
                tol,
            )
            .with_note("a perturbed coefficient must break the identity"),
        );
        Ok(())
    })?;
    for (id, exact) in ops::pushforward_companions() {
        let r = id.verify(&corpus, &points)?;
        ctx.push(
            Check::max_abs(
                &r.name,
                &r.anchor,
                r.discrepancy.max_abs,
                r.discrepancy.max_value,
                tol,
            )
            .with_note(format!("exact pushforward: {exact}")),
        );
    }
    Ok(())
}

// -------------------------------------------------------------- hormander

fn hormander(ctx: &mut Ctx) -> Result<(), CliError> {
    ctx.criterion(12, |ctx| {
        let anchor = "Heisenberg bracket [X,Y] = 2Z";
        let (x, y, z) = (
            PolyVectorField::heis_x(),
            PolyVectorField::heis_y(),
            PolyVectorField::heis_z(),
        );
        ctx.push(Check::exact(
            "bracket-xy",
            anchor,
            ops::lie_bracket(&x, &y) == z.scale(2),
        ));
        ctx.push(Check::exact(
            "bracket-z-central",
            anchor,
            ops::lie_bracket(&z, &x).is_zero() && ops::lie_bracket(&z, &y).is_zero(),
        ));
        let (xo, yo) = (x.to_op(), y.to_op());
        let comm = &xo.compose(&yo)? - &yo.compose(&xo)?;
        ctx.push(Check::exact(
            "bracket-as-operators",
            anchor,
            comm == z.scale(2).to_op(),
        ));
        let pts = ops::random_points(ctx.seed(90), 100);
        let fields = [x, y];
        let ranks: Vec<usize> = pts
            .iter()
            .map(|p| ops::hormander_rank(&fields, p, 2))
            .collect();
        let min = ranks.iter().copied().min().unwrap_or(0);
        ctx.push(
            Check::exact(
                "rank-3",
                "Hormander bracket condition",
                ranks.iter().all(|&r| r == 3),
            )
            .with_note(format!(
                "min rank {min} over {} points at bracket depth 2",
                pts.len()
            )),
        );
        Ok(())
    })?;

    let h = ops::hormander_example_ops();
    ctx.push(Check::exact(
        "q4-order",
        "fourth-order example Q(x,D)",
        h.q4.order() == 4,
    ));
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for p in ops::random_points(ctx.seed(91), 20) {
        let xi = [p[1] + 0.3, p[2] - 0.7, p[0] * 2.0];
        let (s1, s2) = (
            h.p.principal_symbol(&p, &xi),
            h.p_bar.principal_symbol(&p, &xi),
        );
        let s4 = h.q4.principal_symbol(&p, &xi);
        worst = worst.max((s4 - s1 * s2 * s2 * s1).norm());
        scale = scale.max(s4.norm());
    }
    ctx.push(Check::max_abs(
        "q4-principal-symbol",
        "principal symbol of Q(x,D) is that of P P-bar P-bar P",
        worst,
        scale,
        ctx.tol("principal-symbol") * scale.max(1.0),
    ));
    Ok(())
}

// ---------------------------------------------------------------- solvers

fn axis_grid(specs: &[(&str, usize, f64)]) -> Result<GridSpec, CliError> {
    let axes = specs
        .iter()
        .map(|&(n, c, half)| Axis::uniform_box(n, -half, half, c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GridSpec::new(axes, usize::MAX)?)
}

/// `(a·x + b·y)·exp(−(z − z0)²/(2sz²) − (x² + y²)/(2s²))`: odd in `(x, y)`,
/// hence orthogonal to the kernel of the planar CR operators.
fn odd_bump(a: Complex64, b: Complex64, z0: f64, sz: f64, s: f64) -> ops::GaussPoly {
    ops::GaussPoly {
        gauss: ops::Gaussian {
            center: [z0, 0.0, 0.0],
            width: [sz, s, s],
            k: [0.0; 3],
        },
        terms: vec![(a, [0, 0, 1]), (b, [0, 1, 0])],
    }
}

fn sample(grid: &GridSpec, f: &dyn JetFunction) -> SampledField {
    let dim = grid.dim();
    SampledField::from_fn(grid.clone(), |q| {
        let p = if dim == 2 {
            [0.0, q[0], q[1]]
        } else {
            [q[0], q[1], q[2]]
        };
        f.value(&p)
    })
}

fn rel_l2(a: &SampledField, b: &SampledField) -> Result<f64, CliError> {
    let d = a.zip_with(b, |u, v| u - v)?;
    Ok((d.norm_sqr() / b.norm_sqr()).sqrt())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn solvers(ctx: &mut Ctx) -> Result<(), CliError> {
    let setup = ops::ConjugatedSetup::default();
    let strict = ops::ConjugatedSetup {
        compatibility: ops::Compatibility::Strict,
        ..setup.clone()
    };
    let window = setup.window_grid()?;
    let hq = OpExpr::new()
        .pull(CoordMap::hbar())
        .op("Q", PolyDiffOp::cauchy_riemann())
        .pull(CoordMap::hbar());
    let lewy_h: Arc<dyn JetFunction> = Arc::new(odd_bump(c(1.0, 0.0), c(0.0, 1.0), 0.3, 1.0, 0.5));
    let four_h: Arc<dyn JetFunction> = Arc::new(odd_bump(c(0.0, 1.0), c(1.0, 0.0), -0.2, 1.0, 0.5));
    let generic = ops::Gaussian {
        center: [0.2, 0.1, -0.1],
        width: [1.0, 0.5, 0.5],
        k: [0.0; 3],
    };
    let mut generic_sol = None;

    ctx.criterion(13, |ctx| {
        let tol = ctx.tol("cr-solve");
        let h = Arc::new(odd_bump(c(1.0, 0.5), c(-0.3, 1.0), 0.0, 1.0, 0.6));
        let grids = [
            ("2d", axis_grid(&[("y", 64, 6.0), ("x", 64, 6.0)])?),
            (
                "3d",
                axis_grid(&[("z", 16, 4.0), ("y", 64, 6.0), ("x", 64, 6.0)])?,
            ),
        ];
        let cases = [
            ("q", PolyDiffOp::cauchy_riemann()),
            ("r-star", PolyDiffOp::cr_rotated_star()),
            ("laplacian-xy", PolyDiffOp::laplacian_xy()),
        ];
        for (name, op) in cases {
            let g_fn = ops::Applied::new(OpExpr::new().op("A", op.clone()), h.clone());
            for (gname, grid) in &grids {
                ctx.require_grid("cr_solve", grid.len())?;
                let g = sample(grid, &g_fn);
                let sol = ops::cr_solve(&g, &op)?;
                let err = rel_l2(&sol.f, &sample(grid, h.as_ref()))?;
                let res = rel_l2(&ops::spectral_apply(&op, &sol.f)?, &g)?;
                ctx.push(
                    worst_rel(
                        &format!("cr-solve-{name}-{gname}"),
                        "spectral solve of a constant-coefficient operator",
                        err,
                        tol,
                    )
                    .with_note(format!("{op}; relative residual {res:.3e}")),
                );
            }
        }

        ctx.require_grid("conjugated solve", setup.counts.iter().product())?;
        let anchor = "L f = g solved as f = hbar Q^-1 hbar g";
        let g = ops::Applied::new(OpExpr::new().op("L", PolyDiffOp::lewy()), lewy_h.clone());
        let sol = ops::lewy_solve(&g, &setup)?;
        ctx.push(
            worst_rel(
                "lewy-manufactured",
                anchor,
                sol.error_against(lewy_h.as_ref(), &window),
                ctx.tol("lewy-solve"),
            )
            .with_note(format!("g = L h; residual against L {:.3e}", sol.residual)),
        );

        let sol = ops::lewy_solve(&generic, &setup)?;
        ctx.push(
            worst_rel(
                "lewy-generic-residual",
                anchor,
                sol.residual,
                ctx.tol("generic-residual"),
            )
            .with_note(format!(
                "Gaussian RHS, kernel component removed ({:.3e} of the norm)",
                sol.compensated
            )),
        );
        generic_sol = Some(sol);

        let q4 = OpExpr::new().op("Q(x,D)", PolyDiffOp::hormander_q4());
        let g = ops::Applied::new(q4, four_h.clone());
        let sol = ops::hormander_solve(&g, &setup)?;
        ctx.push(
            worst_rel(
                "four-stage-manufactured",
                "Q(x,D) f = g solved through four spectral stages",
                sol.error_against(four_h.as_ref(), &window),
                ctx.tol("four-stage-solve"),
            )
            .with_note(format!(
                "g = Q(x,D) h; residual against Q(x,D) {:.3e}",
                sol.residual
            )),
        );
        Ok(())
    })?;

    // Companions: the same solvers on right-hand sides built from the
    // conjugated products they actually invert.
    let g = ops::Applied::new(hq.clone(), lewy_h.clone());
    let sol = ops::lewy_solve(&g, &strict)?;
    let res = sol.residual_against(&hq, &g, &window)?;
    ctx.push(
        worst_rel(
            "lewy-companion",
            "the Lewy solve on g = hbar Q hbar h",
            sol.error_against(lewy_h.as_ref(), &window),
            ctx.tol("lewy-solve"),
        )
        .with_note(format!("residual against hbar Q hbar {res:.3e}")),
    );
    if let Some(sol) = generic_sol {
        let res = sol.residual_against(&hq, &generic, &window)?;
        ctx.push(worst_rel(
            "lewy-generic-companion",
            "the generic Lewy solve against hbar Q hbar",
            res,
            ctx.tol("generic-residual"),
        ));
    }
    let (r, rs) = (PolyDiffOp::cr_rotated(), PolyDiffOp::cr_rotated_star());
    let chain = OpExpr::new()
        .pull(CoordMap::hbar())
        .op("R", r.clone())
        .op("R*", rs.clone())
        .op("R*", rs)
        .op("R", r)
        .pull(CoordMap::hbar());
    let g = ops::Applied::new(chain.clone(), four_h.clone());
    let sol = ops::hormander_solve(&g, &strict)?;
    let res = sol.residual_against(&chain, &g, &window)?;
    ctx.push(
        worst_rel(
            "four-stage-companion",
            "the four-stage solve on g = hbar R R* R* R hbar h",
            sol.error_against(four_h.as_ref(), &window),
            ctx.tol("four-stage-solve"),
        )
        .with_note(format!("residual against the chain {res:.3e}")),
    );
    Ok(())
}
