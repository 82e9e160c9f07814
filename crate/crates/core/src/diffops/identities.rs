//! The conjugation identities of the operator calculus, each checked exactly
//! as displayed, plus exact-pushforward companions and a mutation control.

use super::coordmap::CoordMap;
use super::expr::{NamedIdentity, OpExpr};
use super::op::PolyDiffOp;

fn op(name: &str, o: PolyDiffOp) -> OpExpr {
    OpExpr::new().op(name, o)
}

fn at_flip_x(e: OpExpr) -> OpExpr {
    let mut out = OpExpr::new().pull(CoordMap::flip_x());
    for s in e.steps() {
        out = match s {
            super::expr::Step::Op { name, op } => out.op(name, op.clone()),
            super::expr::Step::Pull(m) => out.pull(m.clone()),
        };
    }
    out
}

fn hbar_conj(ops: &[(&str, PolyDiffOp)]) -> OpExpr {
    let mut e = OpExpr::new().pull(CoordMap::hbar());
    for (n, o) in ops {
        e = e.op(n, o.clone());
    }
    e.pull(CoordMap::hbar())
}

/// Every displayed conjugation identity, as printed. Where a display
/// evaluates both sides at `(z, y, −x)`, both sides carry that
/// precomposition.
pub fn displayed_identities() -> Vec<NamedIdentity> {
    use PolyDiffOp as D;
    let hbar_q = hbar_conj(&[("Q", D::cauchy_riemann())]);
    vec![
        NamedIdentity::new(
            "lewy-conjugate-cr",
            "Lewy operator as ħ-conjugate of Cauchy-Riemann",
            at_flip_x(op("L", D::lewy())),
            at_flip_x(hbar_q),
        ),
        NamedIdentity::new(
            "lewy-square",
            "L L* as ħ-conjugate of the planar Laplacian",
            at_flip_x(op("L", D::lewy()).op("L*", D::lewy_star())),
            at_flip_x(hbar_conj(&[("Δxy", D::laplacian_xy())])),
        ),
        NamedIdentity::new(
            "cr-product-conjugate",
            "ħ Q Q* ħ = ħ Δ ħ",
            at_flip_x(hbar_conj(&[
                ("Q", D::cauchy_riemann()),
                ("Q*", D::cauchy_riemann_star()),
            ])),
            at_flip_x(hbar_conj(&[("Δxy", D::laplacian_xy())])),
        ),
        NamedIdentity::new(
            "gamma-conjugate-cr",
            "Γ(∂x+i∂y)Γ⁻¹ expansion",
            OpExpr::new()
                .pull(CoordMap::gamma())
                .op("Q*", D::cauchy_riemann_star())
                .pull(CoordMap::gamma_inv()),
            op("y∂z+∂x+i∂y+ix∂z", D::gamma_cr_form()),
        ),
        NamedIdentity::new(
            "gamma-conjugate-laplacian",
            "ΓΔΓ⁻¹ expansion",
            OpExpr::new()
                .pull(CoordMap::gamma())
                .op("Δ", D::laplacian())
                .pull(CoordMap::gamma_inv()),
            op("ΓΔΓ⁻¹ display", D::gamma_laplacian_form()),
        ),
        NamedIdentity::new(
            "tau-laplacian-lambda",
            "τΔΛ = Δh1 at (z,−y,x)",
            OpExpr::new()
                .pull(CoordMap::tau())
                .op("Δ", D::laplacian())
                .pull(CoordMap::lambda()),
            OpExpr::new()
                .pull(CoordMap::flip_y())
                .op("Δh1", D::delta_h1()),
        ),
        NamedIdentity::new(
            "pi-laplacian-lambda",
            "πΔΛ = Δh2 at (z,y,−x)",
            OpExpr::new()
                .pull(CoordMap::pi())
                .op("Δ", D::laplacian())
                .pull(CoordMap::lambda()),
            OpExpr::new()
                .pull(CoordMap::flip_x())
                .op("Δh2", D::delta_h2()),
        ),
        NamedIdentity::new(
            "hbar-dx-expansion",
            "ħ(−i∂x)ħ expansion",
            at_flip_x(hbar_conj(&[(
                "−i∂x",
                "(-1*i)*dx".parse().expect("literal"),
            )])),
            at_flip_x(op("−i∂x−2iy∂z", D::hbar_dx_form())),
        ),
        NamedIdentity::new(
            "hbar-dy-expansion",
            "ħ∂yħ expansion",
            at_flip_x(hbar_conj(&[("∂y", "dy".parse().expect("literal"))])),
            at_flip_x(op("∂y−2x∂z", D::hbar_dy_form())),
        ),
        NamedIdentity::new(
            "p-conjugate-r",
            "P(x,D) = ħRħ",
            at_flip_x(op("P", D::hormander_p())),
            at_flip_x(hbar_conj(&[("R", D::cr_rotated())])),
        ),
        NamedIdentity::new(
            "pbar-conjugate-rstar",
            "conj P(x,D) = ħR*ħ",
            at_flip_x(op("P̄", D::hormander_p_bar())),
            at_flip_x(hbar_conj(&[("R*", D::cr_rotated_star())])),
        ),
        NamedIdentity::new(
            "pbar-p-product",
            "P̄P = ħR*Rħ",
            at_flip_x(op("P̄", D::hormander_p_bar()).op("P", D::hormander_p())),
            at_flip_x(hbar_conj(&[
                ("R*", D::cr_rotated_star()),
                ("R", D::cr_rotated()),
            ])),
        ),
        NamedIdentity::new(
            "p-pbar-product",
            "PP̄ = ħRR*ħ",
            at_flip_x(op("P", D::hormander_p()).op("P̄", D::hormander_p_bar())),
            at_flip_x(hbar_conj(&[
                ("R", D::cr_rotated()),
                ("R*", D::cr_rotated_star()),
            ])),
        ),
        NamedIdentity::new(
            "q4-conjugate-product",
            "Q(x,D) = PP̄P̄P = ħRR*R*Rħ",
            at_flip_x(op("Q(x,D)", D::hormander_q4())),
            at_flip_x(hbar_conj(&[
                ("R", D::cr_rotated()),
                ("R*", D::cr_rotated_star()),
                ("R*", D::cr_rotated_star()),
                ("R", D::cr_rotated()),
            ])),
        ),
    ]
}

/// Other placements of the `(z, y, −x)` reparametrization in the Lewy
/// identity: on neither side, on the argument of one side only, or on the
/// value of one side only.
pub fn lewy_readings() -> Vec<NamedIdentity> {
    use PolyDiffOp as D;
    let hq = || hbar_conj(&[("Q", D::cauchy_riemann())]);
    let l = || op("L", D::lewy());
    let arg_l = l().pull(CoordMap::flip_x());
    let arg_hq = hq().pull(CoordMap::flip_x());
    vec![
        NamedIdentity::new("lewy-plain", "L = ħQħ", l(), hq()),
        NamedIdentity::new(
            "lewy-value-flipped",
            "(Lf)(z,y,−x) = (ħQħf)(z,y,x)",
            at_flip_x(l()),
            hq(),
        ),
        NamedIdentity::new(
            "lewy-argument-flipped",
            "L(f∘σ) = (ħQħf)∘σ",
            arg_l,
            at_flip_x(hq()),
        ),
        NamedIdentity::new(
            "lewy-argument-flipped-rhs",
            "(Lf)∘σ = ħQħ(f∘σ)",
            at_flip_x(l()),
            arg_hq,
        ),
    ]
}

/// Each conjugation chain against its exact polynomial pushforward.
pub fn pushforward_companions() -> Vec<(NamedIdentity, PolyDiffOp)> {
    use PolyDiffOp as D;
    let chains: Vec<(&str, OpExpr)> = vec![
        ("ħQħ", hbar_conj(&[("Q", D::cauchy_riemann())])),
        ("ħQ*ħ", hbar_conj(&[("Q*", D::cauchy_riemann_star())])),
        ("ħΔxyħ", hbar_conj(&[("Δxy", D::laplacian_xy())])),
        ("ħRħ", hbar_conj(&[("R", D::cr_rotated())])),
        ("ħR*ħ", hbar_conj(&[("R*", D::cr_rotated_star())])),
        (
            "ħRR*R*Rħ",
            hbar_conj(&[
                ("R", D::cr_rotated()),
                ("R*", D::cr_rotated_star()),
                ("R*", D::cr_rotated_star()),
                ("R", D::cr_rotated()),
            ]),
        ),
        (
            "ΓΔΓ⁻¹",
            OpExpr::new()
                .pull(CoordMap::gamma())
                .op("Δ", D::laplacian())
                .pull(CoordMap::gamma_inv()),
        ),
        (
            "τΔΛ",
            OpExpr::new()
                .pull(CoordMap::tau())
                .op("Δ", D::laplacian())
                .pull(CoordMap::lambda()),
        ),
    ];
    chains
        .into_iter()
        .map(|(name, chain)| {
            let (map, b) = chain.normal_form().expect("second- or fourth-order chains");
            let mut rhs = OpExpr::new();
            if !map.is_identity() {
                rhs = rhs.pull(map);
            }
            let rhs = rhs.op(&b.to_string(), b.clone());
            (
                NamedIdentity::new(
                    &format!("{name}-pushforward"),
                    "exact conjugate by pushforward",
                    chain,
                    rhs,
                ),
                b,
            )
        })
        .collect()
}

/// `ħQħ = −∂x − i∂y − 2y∂z − 2ix∂z`, the exact conjugate, written out.
pub fn hbar_q_hbar_expanded() -> PolyDiffOp {
    "(-1)*dx + (-1*i)*dy + (-2*y)*dz + (-2*i*x)*dz"
        .parse()
        .expect("literal")
}

/// The expanded conjugate against the chain `ħQħ`: a passing identity whose
/// `2y` coefficient the mutation control perturbs.
pub fn mutation_baseline() -> NamedIdentity {
    NamedIdentity::new(
        "hbar-q-hbar-expanded",
        "exact ħ-conjugate of Cauchy-Riemann",
        op("−∂x−i∂y−2y∂z−2ix∂z", hbar_q_hbar_expanded()),
        hbar_conj(&[("Q", PolyDiffOp::cauchy_riemann())]),
    )
}

/// [`mutation_baseline`] with `2y∂z` replaced by `2.1y∂z`; must fail.
pub fn mutation_control() -> NamedIdentity {
    let mutated: PolyDiffOp = "(-1)*dx + (-1*i)*dy + (-21/10*y)*dz + (-2*i*x)*dz"
        .parse()
        .expect("literal");
    NamedIdentity::new(
        "mutation-2y-to-2.1y",
        "sensitivity control",
        op("−∂x−i∂y−2.1y∂z−2ix∂z", mutated),
        hbar_conj(&[("Q", PolyDiffOp::cauchy_riemann())]),
    )
}
