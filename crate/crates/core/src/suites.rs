//! Named verification suites over the built-in group registry.

use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::ConcreteStarAlgebra;
use crate::convolution::{ConvFunctional, ConvolutionAlgebra};
use crate::corep::{
    corep_direct_sum, verify_corepresentation, verify_coaction, Coaction, Corepresentation, CovariantPair,
};
use crate::crossed::{
    biduality_check, crossed_product_hopf, full_crossed_product, full_crossed_product_conjugated,
    integrated_form, model_isomorphism, obstruction_probe, sampled_covariant_pairs, verify_crossed_product,
    verify_dual, dual_hopf,
};
use crate::error::{Error, Result};
use crate::groups::{Cocycle, FiniteGroup};
use crate::hopf::{verify_coassociativity, Side, verify_hopf_axioms_tol, twisted_delta_defect, HopfAlgebra};
use crate::multunitary::{from_covariant_pair, joint_leg_dim, kac_takesaki, leg_algebras, pentagon_check, pentagon_fuzz};
use crate::tensor::{identity, matrix_unit, random_matrix, CMatrix};

pub const SUITES: [&str; 8] = [
    "hopf-axioms",
    "corep",
    "convolution",
    "crossed-product",
    "dual",
    "biduality",
    "pentagon",
    "counterexample-twisted",
];

pub const DEFAULT_SEED: u64 = 20;

/// Built-in groups of order at most 8, in registry order.
pub fn registry() -> Vec<FiniteGroup> {
    let c = |n| FiniteGroup::cyclic(n).expect("positive order");
    let z2 = c(2);
    vec![
        FiniteGroup::trivial(),
        z2.clone(),
        c(3),
        c(4),
        FiniteGroup::direct_product(&z2, &z2),
        c(5),
        c(6),
        FiniteGroup::symmetric3(),
        c(7),
        c(8),
        FiniteGroup::direct_product(&z2, &c(4)),
        FiniteGroup::direct_product(&FiniteGroup::direct_product(&z2, &z2), &z2),
        FiniteGroup::dihedral4(),
        FiniteGroup::quaternion(),
    ]
}

pub fn registry_group(name: &str) -> Option<FiniteGroup> {
    registry().into_iter().find(|g| g.name() == name)
}

/// Registry listing, one group per line followed by one suite per line.
pub fn list_registry() -> String {
    let mut out = String::from("groups:\n");
    for g in registry() {
        out.push_str(&format!("  {:<10} order {}\n", g.name(), g.order()));
    }
    out.push_str("suites:\n");
    for s in SUITES {
        out.push_str(&format!("  {s}\n"));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: Option<f64>,
    pub tol: f64,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn residual(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            residual: Some(residual),
            tol,
            pass: residual <= tol,
            detail: String::new(),
        }
    }

    pub fn flag(name: impl Into<String>, pass: bool, tol: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            residual: None,
            tol,
            pass,
            detail: detail.into(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    fn error(name: impl Into<String>, tol: f64, e: &Error) -> Self {
        Self::flag(name, false, tol, format!("error: {e}"))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub group: String,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub elapsed_ms: f64,
}

impl CheckReport {
    /// Fixed-width table, one line per check.
    pub fn table(&self) -> String {
        let mut out = format!("suite {} on {} (seed {})\n", self.suite, self.group, self.seed);
        for c in &self.checks {
            let r = c.residual.map_or("-".to_string(), |r| format!("{r:.3e}"));
            out.push_str(&format!(
                "  [{}] {:<56} {:>10} tol {:.0e} {}\n",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                r,
                c.tol,
                c.detail
            ));
        }
        out.push_str(&format!("{}\n", if self.pass { "PASS" } else { "FAIL" }));
        out
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub tol: f64,
    pub seed: u64,
    pub cocycle: Option<Cocycle>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            seed: DEFAULT_SEED,
            cocycle: None,
        }
    }
}

pub fn run_suite(name: &str, group: &FiniteGroup, opts: &SuiteOptions) -> Result<CheckReport> {
    let start = Instant::now();
    let checks = match name {
        "hopf-axioms" => hopf_axioms_suite(group, opts),
        "corep" => corep_suite(group, opts),
        "convolution" => convolution_suite(group, opts),
        "crossed-product" => crossed_suite(group, opts),
        "dual" => dual_suite(group, opts),
        "biduality" => biduality_suite(group, opts),
        "pentagon" => pentagon_suite(group, opts),
        "counterexample-twisted" => twisted_suite(group, opts)?,
        other => return Err(Error::Unsupported(format!("unknown suite {other:?}"))),
    };
    Ok(CheckReport {
        suite: name.to_string(),
        group: group.name().to_string(),
        seed: opts.seed,
        pass: checks.iter().all(|c| c.pass),
        checks,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn both_models(g: &FiniteGroup) -> [(String, Arc<HopfAlgebra>); 2] {
    [
        (format!("C({})", g.name()), HopfAlgebra::function_algebra(g)),
        (format!("C*({})", g.name()), HopfAlgebra::group_algebra(g)),
    ]
}

fn hopf_axioms_suite(g: &FiniteGroup, o: &SuiteOptions) -> Vec<Check> {
    let tol = o.tol;
    let mut out = Vec::new();
    for (label, h) in both_models(g) {
        let r = verify_hopf_axioms_tol(&h, tol);
        out.push(Check::residual(format!("{label}: Δ multiplicative"), r.star_hom.multiplicative_residual, tol));
        out.push(Check::residual(format!("{label}: Δ *-preserving"), r.star_hom.adjoint_residual, tol));
        out.push(Check::residual(format!("{label}: Δ unital"), r.star_hom.unital_residual, tol));
        out.push(Check::flag(
            format!("{label}: Δ injective"),
            r.star_hom.injective,
            tol,
            format!("rank {} of {}", r.star_hom.rank, h.dim()),
        ));
        out.push(Check::residual(format!("{label}: Δ(S) ⊂ S⊗S"), r.range_residual, tol));
        out.push(Check::residual(format!("{label}: coassociativity"), r.coassociativity, tol));
        for s in [r.right, r.left] {
            out.push(Check::flag(
                format!("{label}: {}-simplifiable", side_name(s.side)),
                s.holds,
                tol,
                format!("rank {} of {}, containment {:.3e}", s.rank, s.target_dim, s.containment_residual),
            ));
        }
    }
    out
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Right => "right",
        Side::Left => "left",
    }
}

fn corep_suite(g: &FiniteGroup, o: &SuiteOptions) -> Vec<Check> {
    let tol = o.tol;
    let mut out = Vec::new();
    let corep_checks = |out: &mut Vec<Check>, name: String, c: &Corepresentation| {
        let r = verify_corepresentation(c);
        out.push(Check::residual(format!("{name}: unitary"), r.unitary_residual, tol));
        out.push(Check::residual(format!("{name}: (id⊗Δ)V = V₁₂V₁₃"), r.corep_residual, tol));
        out.push(Check::residual(format!("{name}: legs in S"), r.legs_residual, tol));
    };
    for (label, h) in both_models(g) {
        let u = Corepresentation::universal(&h).expect("built-ins are universal");
        corep_checks(&mut out, format!("{label}: designated"), &u);
        match corep_direct_sum(&u, &Corepresentation::trivial(h.clone(), 2)) {
            Ok(d) => corep_checks(&mut out, format!("{label}: designated ⊕ trivial"), &d),
            Err(e) => out.push(Check::error(format!("{label}: direct sum"), tol, &e)),
        }
    }
    let x = full_crossed_product(&Arc::new(Coaction::translation(g)));
    match x.and_then(|x| crossed_product_hopf(&x)) {
        Ok(ch) => {
            out.push(Check::residual("C(G)⋊G: Δ well defined", ch.well_definedness, tol));
            out.push(Check::residual("C(G)⋊G: coassociativity", verify_coassociativity(&ch.hopf), tol));
            let w = Corepresentation::universal(&HopfAlgebra::group_algebra(g)).expect("built-in");
            match ch.transport(&w) {
                Ok(t) => corep_checks(&mut out, "C(G)⋊G: transported (id⊗k_G)(W)".into(), &t),
                Err(e) => out.push(Check::error("C(G)⋊G: transported (id⊗k_G)(W)", tol, &e)),
            }
        }
        Err(e) => out.push(Check::error("C(G)⋊G Hopf structure", tol, &e)),
    }
    out
}

fn functional_basis(conv: &ConvolutionAlgebra) -> Vec<ConvFunctional> {
    (0..conv.dim_a0()).map(|l| conv.basis_functional(l)).collect()
}

fn convolution_suite(g: &FiniteGroup, o: &SuiteOptions) -> Vec<Check> {
    let tol = o.tol;
    let n = g.order();
    let mut out = Vec::new();
    let cg = HopfAlgebra::function_algebra(g);
    let conv = match ConvolutionAlgebra::new(&cg) {
        Ok(c) => c,
        Err(e) => return vec![Check::error("A(C(G))", tol, &e)],
    };
    let eps = |s| conv.from_matrix(&matrix_unit(n, s, s));
    let mut worst: f64 = 0.0;
    for s in g.elements() {
        for t in g.elements() {
            worst = match conv.star(&eps(s), &eps(t)) {
                Ok(p) => worst.max(conv.distance(&p, &eps(g.mul(s, t)))),
                Err(_) => f64::INFINITY,
            };
        }
    }
    out.push(Check::residual("C(G): ε_s⋆ε_t = ε_st", worst, 1e-12));
    out.push(Check::flag(
        "C(G): M = {0}",
        conv.dim_ideal() == 0,
        tol,
        format!("dim M = {}", conv.dim_ideal()),
    ));

    let ga = HopfAlgebra::group_algebra(g);
    let gconv = match ConvolutionAlgebra::new(&ga) {
        Ok(c) => c,
        Err(e) => return vec![Check::error("A(C*(G))", tol, &e)],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let points: Vec<CMatrix> = g.elements().map(|s| g.lambda(s)).collect();
    let a = random_matrix(n, 1, &mut rng);
    let b = random_matrix(n, 1, &mut rng);
    let pointwise = (|| -> Result<f64> {
        let f = gconv.from_values(&points, a.as_slice(), 1e-9)?;
        let h = gconv.from_values(&points, b.as_slice(), 1e-9)?;
        let p = gconv.star(&f, &h)?;
        Ok(g.elements()
            .map(|s| (gconv.eval(&p, &points[s]) - a[s] * b[s]).norm())
            .fold(0.0, f64::max))
    })();
    match pointwise {
        Ok(r) => out.push(Check::residual("C*(G): product is pointwise", r, tol)),
        Err(e) => out.push(Check::error("C*(G): product is pointwise", tol, &e)),
    }
    out.push(Check::flag(
        "C*(G): M = {0}",
        gconv.dim_ideal() == 0,
        tol,
        format!("dim M = {}", gconv.dim_ideal()),
    ));

    for (label, c) in [("C(G)", &conv), ("C*(G)", &gconv)] {
        let laws = (|| -> Result<(f64, f64, f64)> {
            let basis = functional_basis(c);
            let (mut assoc, mut invol, mut anti): (f64, f64, f64) = (0.0, 0.0, 0.0);
            for f in &basis {
                let fs = c.involution(f, tol)?;
                invol = invol.max(c.distance(&c.involution(&fs, tol)?, f));
                for h in &basis {
                    let fh = c.star(f, h)?;
                    let lhs = c.involution(&fh, tol)?;
                    let rhs = c.star(&c.involution(h, tol)?, &fs)?;
                    anti = anti.max(c.distance(&lhs, &rhs));
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(o.seed ^ 0x5eed);
            for _ in 0..4 {
                let mut pick = || {
                    let v = random_matrix(c.dim_a0(), 1, &mut rng);
                    c.from_coords(v.as_slice())
                };
                let (f, h, k) = (pick()?, pick()?, pick()?);
                let l = c.star(&c.star(&f, &h)?, &k)?;
                let r = c.star(&f, &c.star(&h, &k)?)?;
                assoc = assoc.max(c.distance(&l, &r));
            }
            Ok((assoc, invol, anti))
        })();
        match laws {
            Ok((assoc, invol, anti)) => {
                out.push(Check::residual(format!("{label}: associativity"), assoc, 1e-10));
                out.push(Check::residual(format!("{label}: f** = f"), invol, 1e-10));
                out.push(Check::residual(format!("{label}: (f⋆g)* = g*⋆f*"), anti, 1e-10));
            }
            Err(e) => out.push(Check::error(format!("{label}: algebra laws"), tol, &e)),
        }
    }

    let triv = HopfAlgebra::trivial(ConcreteStarAlgebra::full(2));
    match ConvolutionAlgebra::new(&triv) {
        Ok(c) => out.push(Check::flag(
            "trivial Hopf M2: dim A(S) = 1",
            c.dim_a() == 1,
            tol,
            format!("dim A₀ = {}, dim M = {}", c.dim_a0(), c.dim_ideal()),
        )),
        Err(e) => out.push(Check::error("trivial Hopf M2", tol, &e)),
    }
    out
}

/// Classical action systems: translation on `C(G)`, trivial actions on `ℂ`
/// and `M₂`, and conjugation on `C*(G)`.
pub fn classical_systems(g: &FiniteGroup) -> Result<Vec<(String, Arc<Coaction>)>> {
    let n = g.order();
    let ones = |m: usize| vec![identity(m); n];
    let cga = HopfAlgebra::group_algebra(g).algebra().clone();
    let lambdas: Vec<CMatrix> = g.elements().map(|s| g.lambda(s)).collect();
    Ok(vec![
        ("translation on C(G)".into(), Arc::new(Coaction::translation(g))),
        (
            "trivial on ℂ".into(),
            Arc::new(Coaction::from_unitary_action(Arc::new(ConcreteStarAlgebra::scalars(1)), g, &ones(1), 1e-10)?),
        ),
        (
            "trivial on M2".into(),
            Arc::new(Coaction::from_unitary_action(Arc::new(ConcreteStarAlgebra::full(2)), g, &ones(2), 1e-10)?),
        ),
        (
            "conjugation on C*(G)".into(),
            Arc::new(Coaction::from_unitary_action(cga, g, &lambdas, 1e-10)?),
        ),
    ])
}

fn crossed_suite(g: &FiniteGroup, o: &SuiteOptions) -> Vec<Check> {
    let tol = o.tol;
    let n = g.order();
    let systems = match classical_systems(g) {
        Ok(s) => s,
        Err(e) => return vec![Check::error("classical systems", tol, &e)],
    };
    let mut out = Vec::new();
    for (k, (label, sys)) in systems.into_iter().enumerate() {
        let cr = verify_coaction(&sys, tol);
        out.push(Check::flag(format!("{label}: coaction"), cr.passes(tol), tol, ""));
        let x = match full_crossed_product(&sys) {
            Ok(x) => x,
            Err(e) => {
                out.push(Check::error(format!("{label}: crossed product"), tol, &e));
                continue;
            }
        };
        let want = sys.algebra().dim() * n;
        out.push(Check::flag(
            format!("{label}: dim = dim A·|G|"),
            x.dim() == want,
            tol,
            format!("{} vs {want}", x.dim()),
        ));
        if k == 0 {
            let sizes = x.algebra().wedderburn().map(|w| w.sizes());
            out.push(Check::flag(
                format!("{label}: ≅ M_|G|"),
                matches!(&sizes, Ok(s) if s == &vec![n]),
                tol,
                format!("{sizes:?}"),
            ));
        }
        let r = verify_crossed_product(&x, tol);
        out.push(Check::flag(format!("{label}: (j_A, u_S) covariant"), r.carrier.passes(tol), tol, ""));
        out.push(Check::flag(format!("{label}: span condition"), r.span_condition, tol, format!("rank {}", r.span_rank)));
        if let Some(pm) = r.phi_mult_residual {
            out.push(Check::residual(format!("{label}: slices multiply by ⋆"), pm, 1e-10));
        }
        if let Some(adj) = r.adjoint_residual {
            out.push(Check::residual(format!("{label}: adjoint law"), adj, 1e-10));
        }
        match sampled_covariant_pairs(&x, 6) {
            Ok(pairs) => {
                let mut worst: f64 = 0.0;
                let mut failed = None;
                for (pname, p) in &pairs {
                    match integrated_form(&x, p, tol) {
                        Ok(f) => worst = worst.max(f.worst()),
                        Err(e) => {
                            failed.get_or_insert(format!("{pname}: {e}"));
                        }
                    }
                }
                let mut c = Check::residual(format!("{label}: integrated forms factor"), worst, tol)
                    .with_detail(format!("{} pairs", pairs.len()));
                if let Some(f) = failed {
                    c.pass = false;
                    c.detail = f;
                }
                out.push(c);
            }
            Err(e) => out.push(Check::error(format!("{label}: sampled pairs"), tol, &e)),
        }
        let m = x.carrier().dim();
        let mut perm: Vec<usize> = (0..m).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(o.seed.wrapping_add(k as u64)));
        let p = CMatrix::from_fn(m, m, |i, j| if perm[j] == i { 1.0.into() } else { 0.0.into() });
        match full_crossed_product_conjugated(&sys, Some(&p)).and_then(|x2| model_isomorphism(&x, &x2)) {
            Ok(r) => out.push(
                Check::residual(format!("{label}: uniqueness"), r.worst(), tol)
                    .with_detail(if r.passes(tol) { "" } else { "not bijective" }),
            ),
            Err(e) => out.push(Check::error(format!("{label}: uniqueness"), tol, &e)),
        }
    }
    out
}

fn dual_suite(g: &FiniteGroup, o: &SuiteOptions) -> Vec<Check> {
    let tol = o.tol;
    let mut out = Vec::new();
    for (label, h) in both_models(g) {
        let d = match dual_hopf(&h) {
            Ok(d) => d,
            Err(e) => {
                out.push(Check::error(format!("dual({label})"), tol, &e));
                continue;
            }
        };
        let r = verify_dual(&d);
        out.push(Check::flag(
            format!("dual({label}): ψ onto, dim = |G|"),
            r.psi_surjective && r.dim_hat == g.order() && r.dim_a == g.order(),
            tol,
            format!("dim {}", r.dim_hat),
        ));
        let ax = &r.hat_axioms;
        out.push(Check::residual(format!("dual({label}): Δ multiplicative"), ax.star_hom.worst(), tol));
        out.push(Check::residual(format!("dual({label}): coassociativity"), ax.coassociativity, tol));
        out.push(Check::flag(format!("dual({label}): bisimplifiable"), ax.right.holds && ax.left.holds, tol, ""));
        out.push(Check::residual(format!("dual({label}): Δ on ψ(f) from w_S"), r.hat_coact_residual, tol));
        out.push(Check::residual(format!("dual({label}): (Δ⊗id)w_S = w₁₃w₂₃"), r.delta_s_hat_residual, tol));
        out.push(Check::residual(format!("dual({label}): v_S corepresentation"), r.v_s_corep.worst(), tol));
        out.push(Check::residual(format!("dual({label}): w_S corepresentation"), r.w_s_corep.worst(), tol));
        out.push(Check::residual(format!("dual({label}): (id⊗f)(w_S) = ψ(f)"), r.can_unitary_residual, tol));
        let target = if label.starts_with("C(") { "C*(G)" } else { "C(G)" };
        let src = if label.starts_with("C(") { "C(G)" } else { "C*(G)" };
        match &r.canonical_iso {
            Some(iso) => out.push(
                Check::residual(format!("dual({src}) ≅ {target}"), iso.worst(), tol)
                    .with_detail(if iso.passes(tol) { "" } else { "not bijective" }),
            ),
            None => out.push(Check::flag(format!("dual({src}) ≅ {target}"), false, tol, "no identification")),
        }
    }
    out
}

fn biduality_suite(g: &FiniteGroup, o: &SuiteOptions) -> Vec<Check> {
    let tol = o.tol;
    let mut out = Vec::new();
    for (label, h) in both_models(g) {
        let r = biduality_check(&h, tol);
        if let Some(why) = &r.refused {
            out.push(Check::flag(format!("{label}: biduality"), false, tol, why.clone()));
            continue;
        }
        out.push(Check::residual(
            format!("{label}: (id⊗ε_x)(v_S) = x"),
            r.epsilon_residual.unwrap_or(f64::INFINITY),
            tol,
        ));
        out.push(Check::flag(format!("{label}: slices of v_S span S"), r.span_condition == Some(true), tol, ""));
        match &r.double_dual {
            Some(iso) => out.push(
                Check::residual(format!("{label}: double dual ≅ S"), iso.worst(), tol)
                    .with_detail(if iso.passes(tol) { "" } else { "not bijective" }),
            ),
            None => out.push(Check::flag(format!("{label}: double dual ≅ S"), false, tol, "not built")),
        }
    }
    let triv = biduality_check(&HopfAlgebra::trivial(ConcreteStarAlgebra::full(2)), tol);
    out.push(Check::flag(
        "trivial Hopf M2: refused",
        triv.refused.is_some(),
        tol,
        triv.refused.unwrap_or_default(),
    ));
    let ga = HopfAlgebra::group_algebra(g);
    match obstruction_probe(&ga) {
        Ok(p) => {
            // recorded only; failure is expected for non-abelian G
            let c = Check::flag(
                "C*(G): (ι, (μ⊗id)v_S) covariance probe",
                true,
                tol,
                format!("covariance residual {:.3e}", p.covariance_residual),
            );
            out.push(c);
        }
        Err(e) => out.push(Check::error("C*(G): covariance probe", tol, &e)),
    }
    out
}

fn pentagon_suite(g: &FiniteGroup, o: &SuiteOptions) -> Vec<Check> {
    let n = g.order();
    let mut out = Vec::new();
    let w = kac_takesaki(g);
    let r = pentagon_check(&w);
    out.push(Check::residual("Kac–Takesaki: unitary", r.unitary_residual, 1e-12));
    out.push(Check::residual("Kac–Takesaki: pentagon", r.pentagon_residual, 1e-12));
    match leg_algebras(&w) {
        Ok((a, b)) => out.push(Check::flag(
            "Kac–Takesaki: leg dims (|G|, |G|)",
            a.dim() == n && b.dim() == n,
            o.tol,
            format!("({}, {})", a.dim(), b.dim()),
        )),
        Err(e) => out.push(Check::error("Kac–Takesaki: legs", o.tol, &e)),
    }
    match joint_leg_dim(&w) {
        Ok(d) => out.push(Check::flag(
            "Kac–Takesaki: legs generate M_|G|",
            d == n * n,
            o.tol,
            format!("dim {d}"),
        )),
        Err(e) => out.push(Check::error("Kac–Takesaki: joint legs", o.tol, &e)),
    }
    for (label, h) in both_models(g) {
        let v = CovariantPair::regular(&h).and_then(|p| from_covariant_pair(&p));
        match v {
            Ok(v) => out.push(Check::residual(
                format!("{label}: (id⊗μ)(V) pentagon"),
                pentagon_check(&v).pentagon_residual,
                1e-10,
            )),
            Err(e) => out.push(Check::error(format!("{label}: regular pair"), o.tol, &e)),
        }
    }
    let fuzz = pentagon_fuzz(2, 16, o.seed);
    let far = fuzz.iter().filter(|&&r| r >= 1e-1).count();
    out.push(Check::flag(
        "random 4x4 unitaries (sampling only)",
        true,
        o.tol,
        format!("{far} of {} have pentagon residual ≥ 1e-1", fuzz.len()),
    ));
    out
}

fn twisted_suite(g: &FiniteGroup, o: &SuiteOptions) -> Result<Vec<Check>> {
    let cocycle = match &o.cocycle {
        Some(u) => u.clone(),
        None => {
            let p = Cocycle::pauli();
            if p.group().table() == g.table() {
                p
            } else {
                Cocycle::trivial(g.clone())
            }
        }
    };
    let mut out = Vec::new();
    let defect = twisted_delta_defect(g, &cocycle)?;
    if cocycle.is_trivial(1e-12) {
        out.push(Check::residual("trivial cocycle: Δ multiplicative", defect, 1e-12));
    } else {
        out.push(Check::flag(
            "twisted Δ fails to be a homomorphism",
            defect >= 1.0,
            o.tol,
            format!("defect {defect:.6}"),
        ));
    }
    let plain = twisted_delta_defect(g, &Cocycle::trivial(g.clone()))?;
    out.push(Check::residual("untwisted control", plain, 1e-12));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique_and_small() {
        let names: Vec<String> = registry().iter().map(|g| g.name().to_string()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        assert!(registry().iter().all(|g| g.order() <= 8));
        assert!(registry_group("Z2xZ2").is_some());
        assert!(list_registry().contains("counterexample-twisted"));
    }

    #[test]
    fn suites_pass_on_z2() {
        let g = registry_group("Z2").unwrap();
        for s in SUITES {
            let r = run_suite(s, &g, &SuiteOptions::default()).unwrap();
            assert!(r.pass, "{}", r.table());
        }
    }

    #[test]
    fn twisted_suite_detects_pauli() {
        let g = registry_group("Z2xZ2").unwrap();
        let r = run_suite("counterexample-twisted", &g, &SuiteOptions::default()).unwrap();
        assert!(r.pass);
        assert!(r.checks[0].detail.contains("2.000000"));
    }

    #[test]
    fn unknown_suite() {
        let g = registry_group("Z2").unwrap();
        assert!(run_suite("nope", &g, &SuiteOptions::default()).is_err());
    }
}
