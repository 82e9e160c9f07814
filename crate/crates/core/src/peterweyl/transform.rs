use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::quadrature::{pairwise_sum, EulerQuadSO4, HalfInt, Su2Quad, U2Quad};

use super::elements::{So4Element, Su2, U2Element};
use super::labels::{so4_labels, u2_labels, IrrepLabel, So4Label, U2Label};
use super::wigner::su2_reps_upto;
use super::PeterWeylError;

type CMat = DMatrix<Complex64>;

/// A compact group with a concrete model of its irreducible representations.
pub trait CompactGroup {
    type Element: Copy + Send + Sync;
    type Label: IrrepLabel;

    /// `γ(x)` for each label, in the order given.
    fn reps(labels: &[Self::Label], x: &Self::Element) -> Vec<CMat>;

    fn inverse(x: &Self::Element) -> Self::Element;

    fn mul(x: &Self::Element, y: &Self::Element) -> Self::Element;
}

pub struct So4;

impl CompactGroup for So4 {
    type Element = So4Element;
    type Label = So4Label;

    fn reps(labels: &[So4Label], x: &So4Element) -> Vec<CMat> {
        let max = labels
            .iter()
            .map(|l| l.j1.max(l.j2))
            .max()
            .unwrap_or(HalfInt::ZERO);
        let left = su2_reps_upto(max, &x.left);
        let right = su2_reps_upto(max, &x.right);
        labels
            .iter()
            .map(|l| left[l.j1.twice() as usize].kronecker(&right[l.j2.twice() as usize]))
            .collect()
    }

    fn inverse(x: &So4Element) -> So4Element {
        x.inverse()
    }

    fn mul(x: &So4Element, y: &So4Element) -> So4Element {
        *x * *y
    }
}

pub struct U2;

impl CompactGroup for U2 {
    type Element = U2Element;
    type Label = U2Label;

    /// `e^{i(m1+m2)φ}·D^{(m1−m2)/2}(V)`.
    fn reps(labels: &[U2Label], x: &U2Element) -> Vec<CMat> {
        let max = labels
            .iter()
            .map(|l| l.spin())
            .max()
            .unwrap_or(HalfInt::ZERO);
        let d = su2_reps_upto(max, &x.v);
        labels
            .iter()
            .map(|l| {
                &d[l.spin().twice() as usize]
                    * Complex64::from_polar(1.0, l.charge() as f64 * x.phase)
            })
            .collect()
    }

    fn inverse(x: &U2Element) -> U2Element {
        x.inverse()
    }

    fn mul(x: &U2Element, y: &U2Element) -> U2Element {
        *x * *y
    }
}

/// Transform values `Tf(γ)` over a finite set of labels.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactSpectrum<L: IrrepLabel> {
    entries: BTreeMap<L, CMat>,
}

impl<L: IrrepLabel> Default for CompactSpectrum<L> {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }
}

impl<L: IrrepLabel> CompactSpectrum<L> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, label: L, m: CMat) {
        debug_assert_eq!(m.nrows(), label.dim());
        self.entries.insert(label, m);
    }

    pub fn get(&self, label: &L) -> Option<&CMat> {
        self.entries.get(label)
    }

    pub fn labels(&self) -> Vec<L> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, &CMat)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ_γ d_γ ‖M_γ‖²_HS`, the spectral side of the Plancherel formula.
    pub fn energy(&self) -> f64 {
        let terms: Vec<Complex64> = self
            .entries
            .iter()
            .map(|(l, m)| Complex64::new(l.dim() as f64 * m.norm_squared(), 0.0))
            .collect();
        pairwise_sum(&terms).re
    }

    /// Largest entrywise difference; a label missing on one side counts as a
    /// zero matrix there.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (l, m) in &self.entries {
            let d = match other.entries.get(l) {
                Some(o) => (m - o).map(|z| z.norm()).max(),
                None => m.map(|z| z.norm()).max(),
            };
            worst = worst.max(d);
        }
        for (l, o) in &other.entries {
            if !self.entries.contains_key(l) {
                worst = worst.max(o.map(|z| z.norm()).max());
            }
        }
        worst
    }

    /// Labelwise matrix product `self(γ)·other(γ)` over common labels.
    pub fn product(&self, other: &Self) -> Self {
        let entries = self
            .entries
            .iter()
            .filter_map(|(l, m)| other.entries.get(l).map(|o| (*l, m * o)))
            .collect();
        Self { entries }
    }

    pub fn linear_combination(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        let mut out = self.clone();
        for m in out.entries.values_mut() {
            *m *= a;
        }
        for (l, o) in &other.entries {
            let e = out
                .entries
                .entry(*l)
                .or_insert_with(|| CMat::zeros(o.nrows(), o.ncols()));
            *e += o * b;
        }
        out
    }

    /// `{"(j1,j2)": [[re, im], …]}` with row-major matrices.
    pub fn to_json(&self) -> serde_json::Value {
        let map = self
            .entries
            .iter()
            .map(|(l, m)| {
                let flat: Vec<[f64; 2]> = (0..m.nrows())
                    .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
                    .map(|(i, j)| [m[(i, j)].re, m[(i, j)].im])
                    .collect();
                (l.to_string(), serde_json::json!(flat))
            })
            .collect::<serde_json::Map<_, _>>();
        serde_json::Value::Object(map)
    }
}

/// `f(x) = Σ_γ d_γ tr[Tf(γ)·γ(x)]`.
pub fn compact_inverse<G: CompactGroup>(
    spectrum: &CompactSpectrum<G::Label>,
    x: &G::Element,
) -> Complex64 {
    let labels = spectrum.labels();
    let reps = G::reps(&labels, x);
    let terms: Vec<Complex64> = labels
        .iter()
        .zip(&reps)
        .map(|(l, r)| {
            // tr[C·R] = Σ C_ab R_ba without forming the product.
            let c = &spectrum.entries[l];
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..c.nrows() {
                for b in 0..c.ncols() {
                    acc += c[(a, b)] * r[(b, a)];
                }
            }
            acc * l.dim() as f64
        })
        .collect();
    pairwise_sum(&terms)
}

/// `Tf(γ) = Σ w·f(x)·γ(x⁻¹)` over an explicit node list.
pub fn transform_direct<G, F>(
    f: F,
    nodes: &[(G::Element, f64)],
    labels: &[G::Label],
) -> CompactSpectrum<G::Label>
where
    G: CompactGroup,
    F: Fn(&G::Element) -> Complex64 + Sync,
{
    let blocks: Vec<Vec<CMat>> = nodes
        .par_chunks(256)
        .map(|chunk| {
            let mut acc: Vec<CMat> = labels
                .iter()
                .map(|l| CMat::zeros(l.dim(), l.dim()))
                .collect();
            for (x, w) in chunk {
                let fx = f(x) * *w;
                let reps = G::reps(labels, &G::inverse(x));
                for (a, r) in acc.iter_mut().zip(reps) {
                    *a += r * fx;
                }
            }
            acc
        })
        .collect();
    let mut out = CompactSpectrum::new();
    for (k, l) in labels.iter().enumerate() {
        let mut m = CMat::zeros(l.dim(), l.dim());
        for b in &blocks {
            m += &b[k];
        }
        out.insert(*l, m);
    }
    out
}

fn su2_nodes(q: &Su2Quad) -> Vec<(Su2, f64)> {
    (0..q.len())
        .map(|i| {
            let (e, w) = q.node(i);
            (Su2::from_euler(&e), w)
        })
        .collect()
}

/// All nodes of the SO(4) rule as group elements.
pub fn so4_nodes(quad: &EulerQuadSO4) -> Vec<(So4Element, f64)> {
    let f = su2_nodes(&quad.factor);
    f.iter()
        .flat_map(|(l, wl)| {
            f.iter()
                .map(move |(r, wr)| (So4Element::new(*l, *r), wl * wr))
        })
        .collect()
}

pub fn u2_nodes(quad: &U2Quad) -> Vec<(U2Element, f64)> {
    (0..quad.len())
        .map(|i| {
            let (phi, e, w) = quad.node(i);
            (U2Element::new(phi, Su2::from_euler(&e)), w)
        })
        .collect()
}

/// The SO(4) transform for all labels with `j1, j2 ≤ J` (the rule's
/// band-limit). See [`so4_transform_sampled`].
pub fn so4_transform<F>(f: F, quad: &EulerQuadSO4) -> CompactSpectrum<So4Label>
where
    F: Fn(&So4Element) -> Complex64 + Sync,
{
    let values: Vec<Complex64> = so4_nodes(quad).par_iter().map(|(x, _)| f(x)).collect();
    so4_transform_sampled(&values, quad).expect("one sample per node")
}

/// The SO(4) transform from samples taken in [`so4_nodes`] order,
/// accumulated one SU(2) factor at a time:
/// `Tf = Σ_a w_a D^{j1}(p_a)† ⊗ Σ_b w_b f(p_a, q_b) D^{j2}(q_b)†`.
pub fn so4_transform_sampled(
    values: &[Complex64],
    quad: &EulerQuadSO4,
) -> Result<CompactSpectrum<So4Label>, PeterWeylError> {
    let j = quad.bandlimit;
    let nodes = su2_nodes(&quad.factor);
    let m = nodes.len();
    if values.len() != m * m {
        return Err(PeterWeylError::SampleCount {
            got: values.len(),
            want: m * m,
        });
    }
    let adj: Vec<Vec<CMat>> = nodes
        .par_iter()
        .map(|(u, _)| su2_reps_upto(j, &u.adjoint()))
        .collect();
    let nspins = j.dim();
    // inner[a][t] = Σ_b w_b f(p_a, q_b) D^{t/2}(q_b)†
    let inner: Vec<Vec<CMat>> = values
        .par_chunks(m)
        .map(|row| {
            let mut acc: Vec<CMat> = (0..nspins).map(|t| CMat::zeros(t + 1, t + 1)).collect();
            for ((v, (_, wq)), dq) in row.iter().zip(&nodes).zip(&adj) {
                let v = v * *wq;
                for (a, d) in acc.iter_mut().zip(dq) {
                    *a += d * v;
                }
            }
            acc
        })
        .collect();
    let mut out = CompactSpectrum::new();
    for label in so4_labels(j) {
        let (t1, t2) = (label.j1.twice() as usize, label.j2.twice() as usize);
        let mut m = CMat::zeros(label.dim(), label.dim());
        for (((_, wp), dp), g) in nodes.iter().zip(&adj).zip(&inner) {
            m += (&dp[t1] * Complex64::new(*wp, 0.0)).kronecker(&g[t2]);
        }
        out.insert(label, m);
    }
    Ok(out)
}

pub fn u2_transform<F>(f: F, quad: &U2Quad) -> CompactSpectrum<U2Label>
where
    F: Fn(&U2Element) -> Complex64 + Sync,
{
    transform_direct::<U2, _>(f, &u2_nodes(quad), &u2_labels(quad.m_max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlancherelCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

impl PlancherelCheck {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            rel_err: (lhs - rhs).abs() / lhs.abs().max(f64::MIN_POSITIVE),
        }
    }
}

fn mean_square<E, F>(f: &F, nodes: &[(E, f64)]) -> f64
where
    E: Sync,
    F: Fn(&E) -> Complex64 + Sync,
{
    let terms: Vec<Complex64> = nodes
        .par_iter()
        .map(|(x, w)| Complex64::new(f(x).norm_sqr() * w, 0.0))
        .collect();
    pairwise_sum(&terms).re
}

/// `∫_K |f|² dk` against `Σ d_γ ‖Tf(γ)‖²_HS`; exact for band-limited `f`.
pub fn so4_plancherel_check<F>(f: F, quad: &EulerQuadSO4) -> PlancherelCheck
where
    F: Fn(&So4Element) -> Complex64 + Sync,
{
    let rhs = so4_transform(&f, quad).energy();
    let lhs = mean_square(&f, &so4_nodes(quad));
    PlancherelCheck::new(lhs, rhs)
}

pub fn u2_plancherel_check<F>(f: F, quad: &U2Quad) -> PlancherelCheck
where
    F: Fn(&U2Element) -> Complex64 + Sync,
{
    let rhs = u2_transform(&f, quad).energy();
    let lhs = mean_square(&f, &u2_nodes(quad));
    PlancherelCheck::new(lhs, rhs)
}

/// A function given by finitely many Fourier coefficients:
/// `f(x) = Σ_γ d_γ tr[C_γ γ(x)]`, so that `Tf = C`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandLimited<L: IrrepLabel> {
    pub coeffs: CompactSpectrum<L>,
}

impl<L: IrrepLabel> BandLimited<L> {
    pub fn new(coeffs: CompactSpectrum<L>) -> Self {
        Self { coeffs }
    }

    /// Independent standard complex Gaussian coefficients on every label.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, labels: &[L]) -> Self {
        let mut coeffs = CompactSpectrum::new();
        for l in labels {
            let d = l.dim();
            let m = CMat::from_fn(d, d, |_, _| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            });
            coeffs.insert(*l, m);
        }
        Self { coeffs }
    }

    /// The normalized matrix coefficient `√d_γ·γ_{mn}`.
    pub fn matrix_coefficient(label: L, m: usize, n: usize) -> Self {
        let d = label.dim();
        let mut c = CMat::zeros(d, d);
        // tr[C γ] = Σ C_ba γ_ab, so C_nm picks γ_mn.
        c[(n, m)] = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        let mut coeffs = CompactSpectrum::new();
        coeffs.insert(label, c);
        Self { coeffs }
    }

    pub fn eval<G: CompactGroup<Label = L>>(&self, x: &G::Element) -> Complex64 {
        compact_inverse::<G>(&self.coeffs, x)
    }

    /// `Σ d_γ ‖C_γ‖²_HS`.
    pub fn energy(&self) -> f64 {
        self.coeffs.energy()
    }
}

/// `(f ∗ g)(x) = ∫ f(y) g(y⁻¹x) dy` by the given rule (exact when both are
/// band-limited within the rule's level).
pub fn convolve_at<G, F1, F2>(
    f: F1,
    g: F2,
    nodes: &[(G::Element, f64)],
    x: &G::Element,
) -> Complex64
where
    G: CompactGroup,
    F1: Fn(&G::Element) -> Complex64 + Sync,
    F2: Fn(&G::Element) -> Complex64 + Sync,
{
    let terms: Vec<Complex64> = nodes
        .par_iter()
        .map(|(y, w)| f(y) * g(&G::mul(&G::inverse(y), x)) * *w)
        .collect();
    pairwise_sum(&terms)
}

/// Representation matrices of one SO(4) label on every node of a rule. The
/// per-factor SU(2) matrices are stored and combined on demand, since the
/// full table at `J = 2` would need gigabytes.
#[derive(Debug, Clone)]
pub struct RepSample {
    pub label: So4Label,
    left: Vec<CMat>,
    right: Vec<CMat>,
    nodes: Vec<Su2>,
}

impl RepSample {
    pub fn new(label: So4Label, quad: &EulerQuadSO4) -> Self {
        let nodes: Vec<Su2> = su2_nodes(&quad.factor)
            .into_iter()
            .map(|(u, _)| u)
            .collect();
        let left = nodes
            .par_iter()
            .map(|u| super::wigner::su2_rep(label.j1, u))
            .collect();
        let right = nodes
            .par_iter()
            .map(|u| super::wigner::su2_rep(label.j2, u))
            .collect();
        Self {
            label,
            left,
            right,
            nodes,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len() * self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn element(&self, i: usize) -> So4Element {
        let m = self.nodes.len();
        So4Element::new(self.nodes[i / m], self.nodes[i % m])
    }

    pub fn matrix(&self, i: usize) -> CMat {
        let m = self.nodes.len();
        self.left[i / m].kronecker(&self.right[i % m])
    }

    /// Max over nodes of `‖γ†γ − I‖`; the Kronecker factors are checked
    /// separately, which bounds the product.
    pub fn unitarity_defect(&self) -> f64 {
        self.left
            .iter()
            .chain(&self.right)
            .map(|m| {
                let d = m.nrows();
                (m.adjoint() * m - CMat::identity(d, d))
                    .map(|z| z.norm())
                    .max()
            })
            .fold(0.0, f64::max)
    }
}
