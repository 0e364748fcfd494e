//! Full crossed products in the induced-representation model, integrated
//! forms, the dual Hopf algebra `Ŝ = ℂ ⋊ S`, and biduality checks.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{check_star_hom, AlgLinearMap, ConcreteStarAlgebra, StarHomReport};
use crate::convolution::{ConvFunctional, ConvolutionAlgebra};
use crate::corep::{
    corep_from_function_rep, identity_rep, induce, irreducible_reps, pair_direct_sum,
    verify_corepresentation, verify_covariant, Coaction, CoactionKind, CorepReport,
    Corepresentation, CovariantPair, CovariantReport,
};
use crate::error::{invalid, Error, Result};
use crate::groups::FiniteGroup;
use crate::hopf::{verify_hopf_axioms, HopfAlgebra, HopfAxiomsReport, HopfKind, RegularData};
use crate::tensor::{
    flip_sigma, frobenius, identity, kron, leg13_leg23, leg13_leg23_slice, map_left_leg,
    map_right_leg, matrix_unit, least_squares, residual, slice_right_raw, span_equal, span_rank,
    trace_pairing, zeros, CMatrix, C64,
};

/// `A ⋊_δ S` realized inside `Ind π` for the identity inclusion `π` of `A`.
#[derive(Clone, Debug)]
pub struct CrossedProduct {
    system: Arc<Coaction>,
    carrier: CovariantPair,
    algebra: Arc<ConcreteStarAlgebra>,
    spanning: Vec<CMatrix>,
    /// `(i, j)` for `j_A(a_i)·(id ⊗ f_j)(u_S)`, `f_j = tr(b_j* ·)`.
    span_index: Vec<(usize, usize)>,
}

impl CrossedProduct {
    pub fn system(&self) -> &Arc<Coaction> {
        &self.system
    }

    pub fn carrier(&self) -> &CovariantPair {
        &self.carrier
    }

    pub fn algebra(&self) -> &Arc<ConcreteStarAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `j_A: A → B`.
    pub fn j_a(&self) -> &AlgLinearMap {
        &self.carrier.pi
    }

    /// `u_S ∈ B ⊗ S`.
    pub fn u_s(&self) -> &Corepresentation {
        &self.carrier.corep
    }

    pub fn spanning(&self) -> &[CMatrix] {
        &self.spanning
    }

    /// Trace-pairing matrices of a functional basis of `S`.
    pub fn s_functionals(&self) -> Vec<CMatrix> {
        self.system.hopf().algebra().basis().iter().map(|b| b.adjoint()).collect()
    }

    /// `(id ⊗ f)(u_S)`.
    pub fn slice_u(&self, f: &CMatrix) -> CMatrix {
        self.u_s().slice(f)
    }

    /// `k_G(s) = (id ⊗ ε_s)(u_S)` for coactions of `C(G)`.
    pub fn k_g(&self, s: usize) -> Result<CMatrix> {
        match self.system.hopf().kind() {
            HopfKind::Functions(g) if s < g.order() => Ok(self.slice_u(&matrix_unit(g.order(), s, s))),
            _ => Err(Error::Unsupported("k_G needs a coaction of a built-in C(G)".into())),
        }
    }
}

/// Builds `A ⋊_δ S` from `Ind ι`, `ι` the identity inclusion of `A`.
pub fn full_crossed_product(system: &Arc<Coaction>) -> Result<CrossedProduct> {
    full_crossed_product_conjugated(system, None)
}

/// Same, with the carrier conjugated by a unitary on `H ⊗ H_S`; used to
/// build independent models of one system.
pub fn full_crossed_product_conjugated(system: &Arc<Coaction>, conjugate: Option<&CMatrix>) -> Result<CrossedProduct> {
    let report = crate::corep::verify_coaction(system, 1e-9);
    if !report.nondegenerate {
        return Err(invalid("coaction is degenerate"));
    }
    let mut carrier = induce(system, &identity_rep(system.algebra()))?;
    if let Some(u) = conjugate {
        let n = system.hopf().ambient();
        let pi = carrier.pi.then(u.nrows(), |x| u * x * u.adjoint())?;
        let ue = kron(u, &identity(n));
        let v = &ue * carrier.corep.matrix() * ue.adjoint();
        carrier = CovariantPair::new(system.clone(), pi, carrier.corep.with_matrix(v))?;
    }
    let dim_b = carrier.dim();
    let mut spanning = Vec::new();
    let mut span_index = Vec::new();
    let fs: Vec<CMatrix> = system.hopf().algebra().basis().iter().map(|b| b.adjoint()).collect();
    let slices: Vec<CMatrix> = fs.iter().map(|f| carrier.corep.slice(f)).collect();
    for (i, ja) in carrier.pi.images().iter().enumerate() {
        for (j, sl) in slices.iter().enumerate() {
            spanning.push(ja * sl);
            span_index.push((i, j));
        }
    }
    let label = format!("{}⋊{}", system.algebra().label(), system.hopf().label());
    let algebra = Arc::new(ConcreteStarAlgebra::generated(&label, dim_b, &spanning)?);
    Ok(CrossedProduct {
        system: system.clone(),
        carrier,
        algebra,
        spanning,
        span_index,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossedReport {
    pub carrier: CovariantReport,
    pub j_a: StarHomReport,
    /// Largest distance of a slice of `u_S` from `B`.
    pub legs_residual: f64,
    pub span_rank: usize,
    pub dim: usize,
    /// `B = span{j_A(a)(id ⊗ f)(u_S)}`.
    pub span_condition: bool,
    /// `max ‖(id⊗f_S)(u_S)* − (id⊗f*_S)(u_S)‖` over a basis of `A(S)`.
    pub adjoint_residual: Option<f64>,
    /// `max ‖(id⊗f_S)(u_S)(id⊗g_S)(u_S) − (id⊗(f⋆g)_S)(u_S)‖`.
    pub phi_mult_residual: Option<f64>,
}

impl CrossedReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.carrier.passes(tol)
            && self.j_a.is_star_hom(tol)
            && self.j_a.injective
            && self.legs_residual <= tol
            && self.span_condition
            && self.adjoint_residual.is_none_or(|r| r <= tol)
            && self.phi_mult_residual.is_none_or(|r| r <= tol)
    }
}

pub fn verify_crossed_product(x: &CrossedProduct, tol: f64) -> CrossedReport {
    let fs = x.s_functionals();
    let legs = fs
        .iter()
        .map(|f| x.algebra.distance(&x.slice_u(f)))
        .fold(0.0, f64::max);
    let span_condition = span_equal(&x.spanning, x.algebra.basis(), tol);
    let (mut adjoint, mut phi_mult) = (None, None);
    if let Ok(conv) = ConvolutionAlgebra::new(x.system.hopf()) {
        let basis: Vec<ConvFunctional> = (0..conv.dim_a0()).map(|l| conv.basis_functional(l)).collect();
        let slice = |f: &ConvFunctional| x.slice_u(&conv.s_matrix(f));
        let mut pm: f64 = 0.0;
        for f in &basis {
            for g in &basis {
                if let Ok(fg) = conv.star(f, g) {
                    pm = pm.max(residual(&(slice(f) * slice(g)), &slice(&fg)));
                } else {
                    pm = f64::INFINITY;
                }
            }
        }
        phi_mult = Some(pm);
        if conv.is_coinvolutive(tol) {
            let adj = basis
                .iter()
                .map(|f| match conv.involution(f, tol) {
                    Ok(fs) => residual(&slice(f).adjoint(), &slice(&fs)),
                    Err(_) => f64::INFINITY,
                })
                .fold(0.0, f64::max);
            adjoint = Some(adj);
        }
    }
    CrossedReport {
        carrier: verify_covariant(&x.carrier),
        j_a: check_star_hom(x.j_a()),
        legs_residual: legs,
        span_rank: span_rank(&x.spanning, 1e-9),
        dim: x.dim(),
        span_condition,
        adjoint_residual: adjoint,
        phi_mult_residual: phi_mult,
    }
}

/// `π × W` together with its diagnostics.
#[derive(Clone, Debug)]
pub struct IntegratedForm {
    pub map: AlgLinearMap,
    pub well_definedness: f64,
    pub star_hom: StarHomReport,
    /// `max_a ‖(π×W)(j_A(a)) − π(a)‖`.
    pub factor_pi: f64,
    /// `‖((π×W) ⊗ id)(u_S) − W‖`.
    pub factor_corep: f64,
}

impl IntegratedForm {
    pub fn worst(&self) -> f64 {
        self.well_definedness
            .max(self.star_hom.worst())
            .max(self.factor_pi)
            .max(self.factor_corep)
    }
}

/// The map `j_A(a)(id⊗f)(u_S) ↦ π(a)(id⊗f)(W)`, fitted by least squares.
/// Fails with a universality error when the assignment is not well defined.
pub fn integrated_form(x: &CrossedProduct, pair: &CovariantPair, tol: f64) -> Result<IntegratedForm> {
    if !Arc::ptr_eq(&pair.coaction, &x.system) {
        return Err(invalid("covariant pair belongs to a different system"));
    }
    let fs = x.s_functionals();
    let w_slices: Vec<CMatrix> = fs.iter().map(|f| pair.corep.slice(f)).collect();
    let ys: Vec<CMatrix> = x
        .span_index
        .iter()
        .map(|&(i, j)| &pair.pi.images()[i] * &w_slices[j])
        .collect();
    let k = pair.dim();
    let (map, res) = AlgLinearMap::fit(x.algebra.clone(), k, &x.spanning, &ys)?;
    let scale = ys.iter().map(frobenius).fold(1.0, f64::max);
    if res > tol * scale {
        return Err(Error::Universality(format!(
            "integrated form is not well defined (residual {res:.3e})"
        )));
    }
    let factor_pi = x
        .j_a()
        .images()
        .iter()
        .zip(pair.pi.images())
        .map(|(ja, p)| residual(&map.apply(ja), p))
        .fold(0.0, f64::max);
    let n = x.system.hopf().ambient();
    let pushed = map_left_leg(x.u_s().matrix(), x.carrier.dim(), n, |b| map.apply(b));
    let factor_corep = residual(&pushed, pair.corep.matrix());
    Ok(IntegratedForm {
        star_hom: check_star_hom(&map),
        map,
        well_definedness: res,
        factor_pi,
        factor_corep,
    })
}

/// Covariant pairs built from representations at hand: induced irreducibles
/// (and sums of them) up to `max_dim`, spatial pairs for unitary actions,
/// one-dimensional pairs for trivial systems over `C[G]`, and the carrier.
pub fn sampled_covariant_pairs(x: &CrossedProduct, max_dim: usize) -> Result<Vec<(String, CovariantPair)>> {
    let sys = &x.system;
    let mut out: Vec<(String, CovariantPair)> = Vec::new();
    let irreps = irreducible_reps(sys.algebra())?;
    let induced: Vec<CovariantPair> = irreps.iter().map(|p| induce(sys, p)).collect::<Result<_>>()?;
    for (i, p) in induced.iter().enumerate() {
        if p.dim() <= max_dim {
            out.push((format!("Ind irrep {i}"), p.clone()));
        }
        for (j, q) in induced.iter().enumerate().skip(i) {
            if p.dim() + q.dim() <= max_dim {
                out.push((format!("Ind irrep {i} ⊕ Ind irrep {j}"), pair_direct_sum(p, q)?));
            }
        }
    }
    if let CoactionKind::Action {
        group,
        unitaries: Some(us),
        ..
    } = sys.kind()
    {
        let n = group.order();
        let na = sys.algebra().ambient();
        let mut v = zeros(na * n, na * n);
        for s in group.elements() {
            v += kron(&us[s], &matrix_unit(n, s, s));
        }
        let corep = Corepresentation::new(sys.hopf().clone(), na, v)?;
        out.push(("spatial".into(), CovariantPair::new(sys.clone(), identity_rep(sys.algebra()), corep)?));
    }
    if let (CoactionKind::Trivial, HopfKind::GroupAlgebra(g)) = (sys.kind(), sys.hopf().kind()) {
        if sys.algebra().dim() == 1 {
            for s in g.elements() {
                let projections: Vec<CMatrix> = g
                    .elements()
                    .map(|t| if t == s { identity(1) } else { zeros(1, 1) })
                    .collect();
                let corep = corep_from_function_rep(sys.hopf(), &projections, 1e-12)?;
                let pi = AlgLinearMap::from_fn(sys.algebra().clone(), 1, |a| {
                    CMatrix::from_element(1, 1, a[(0, 0)])
                })?;
                out.push((format!("character at {s}"), CovariantPair::new(sys.clone(), pi, corep)?));
            }
        }
    }
    out.push(("carrier".into(), x.carrier.clone()));
    Ok(out)
}

/// Comparison of two models of one system through the integrated form.
#[derive(Clone, Debug, Serialize)]
pub struct ModelIsoReport {
    pub well_definedness: f64,
    pub star_hom: StarHomReport,
    pub surjective: bool,
    pub j_a_residual: f64,
    pub u_s_residual: f64,
}

impl ModelIsoReport {
    pub fn worst(&self) -> f64 {
        self.well_definedness
            .max(self.star_hom.worst())
            .max(self.j_a_residual)
            .max(self.u_s_residual)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.worst() <= tol && self.star_hom.injective && self.surjective
    }
}

/// The *-isomorphism `B₁ → B₂` matching `j_A` and `u_S`. The two systems
/// must coact on the same span with the same `S`.
pub fn model_isomorphism(x1: &CrossedProduct, x2: &CrossedProduct) -> Result<ModelIsoReport> {
    let (s1, s2) = (x1.system.hopf(), x2.system.hopf());
    if s1.ambient() != s2.ambient() || !span_equal(s1.algebra().basis(), s2.algebra().basis(), 1e-9) {
        return Err(invalid("models use different Hopf algebras"));
    }
    let fs = x1.s_functionals();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let a_basis = x1.system.algebra().basis();
    for a in a_basis {
        let (j1, j2) = (x1.j_a().apply(a), x2.j_a().apply(a));
        for f in &fs {
            xs.push(&j1 * x1.slice_u(f));
            ys.push(&j2 * x2.slice_u(f));
        }
    }
    let m = x2.carrier.dim();
    let (map, res) = AlgLinearMap::fit(x1.algebra.clone(), m, &xs, &ys)?;
    let j_a_residual = a_basis
        .iter()
        .map(|a| residual(&map.apply(&x1.j_a().apply(a)), &x2.j_a().apply(a)))
        .fold(0.0, f64::max);
    let n = s1.ambient();
    let pushed = map_left_leg(x1.u_s().matrix(), x1.carrier.dim(), n, |b| map.apply(b));
    let images_in_b2 = map.images().iter().all(|y| x2.algebra.contains(y, 1e-9));
    Ok(ModelIsoReport {
        well_definedness: res,
        star_hom: check_star_hom(&map),
        surjective: images_in_b2 && span_rank(map.images(), 1e-9) == x2.dim(),
        j_a_residual,
        u_s_residual: residual(&pushed, x2.u_s().matrix()),
    })
}

/// *-isomorphism and comultiplication-intertwining defects of `φ: H₁ → H₂`.
#[derive(Clone, Debug, Serialize)]
pub struct HopfIsoReport {
    pub star_hom: StarHomReport,
    pub range_residual: f64,
    pub surjective: bool,
    pub intertwining_residual: f64,
}

impl HopfIsoReport {
    pub fn worst(&self) -> f64 {
        self.star_hom
            .worst()
            .max(self.range_residual)
            .max(self.intertwining_residual)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.worst() <= tol && self.star_hom.injective && self.surjective
    }
}

pub fn verify_hopf_isomorphism(phi: &AlgLinearMap, h1: &HopfAlgebra, h2: &HopfAlgebra) -> HopfIsoReport {
    let (n1, m) = (h1.ambient(), h2.ambient());
    let range = phi
        .images()
        .iter()
        .map(|y| h2.algebra().distance(y))
        .fold(0.0, f64::max);
    let intertwining = h1
        .algebra()
        .basis()
        .iter()
        .map(|x| {
            let dx = h1.comultiply(x);
            let right = map_right_leg(&dx, n1, n1, |b| phi.apply(b));
            let both = map_left_leg(&right, n1, m, |b| phi.apply(b));
            residual(&both, &h2.comultiply(&phi.apply(x)))
        })
        .fold(0.0, f64::max);
    HopfIsoReport {
        star_hom: check_star_hom(phi),
        range_residual: range,
        surjective: span_rank(phi.images(), 1e-9) == h2.dim(),
        intertwining_residual: intertwining,
    }
}

/// `Ŝ = ℂ ⋊ S` with its comultiplication and canonical unitaries.
#[derive(Debug)]
pub struct DualHopf {
    base: Arc<HopfAlgebra>,
    conv: ConvolutionAlgebra,
    crossed: CrossedProduct,
    hat: Arc<HopfAlgebra>,
    /// `ψ(e_l)` for the basis functionals of `A₀(S)`.
    psi_images: Vec<CMatrix>,
    /// `Δ_Ŝ(ψ(e_l))` computed from `(w_S)₁₃(w_S)₂₃`.
    hat_coact_images: Vec<CMatrix>,
    hat_coact_residual: f64,
    canonical: Option<(Arc<HopfAlgebra>, AlgLinearMap)>,
}

impl DualHopf {
    pub fn base(&self) -> &Arc<HopfAlgebra> {
        &self.base
    }

    pub fn hat(&self) -> &Arc<HopfAlgebra> {
        &self.hat
    }

    pub fn convolution(&self) -> &ConvolutionAlgebra {
        &self.conv
    }

    pub fn crossed(&self) -> &CrossedProduct {
        &self.crossed
    }

    /// `w_S ∈ Ŝ ⊗ S`.
    pub fn w_s(&self) -> &CMatrix {
        self.crossed.u_s().matrix()
    }

    /// `v_S = Σ(w_S) ∈ S ⊗ Ŝ`.
    pub fn v_s(&self) -> CMatrix {
        flip_sigma(self.w_s(), self.hat.ambient(), self.base.ambient()).expect("square by construction")
    }

    /// `ψ(f) = (id ⊗ f_S)(w_S)`.
    pub fn psi(&self, f: &ConvFunctional) -> CMatrix {
        self.crossed.slice_u(&self.conv.s_matrix(f))
    }

    /// The built-in Hopf algebra `Ŝ` is identified with, and the identifying map.
    pub fn canonical(&self) -> Option<(&Arc<HopfAlgebra>, &AlgLinearMap)> {
        self.canonical.as_ref().map(|(h, m)| (h, m))
    }

    /// The functional `ε_x` on `Ŝ` with `ε_x(ψ(f)) = f_S(x)`, as a
    /// trace-pairing matrix.
    pub fn epsilon(&self, x: &CMatrix) -> Result<CMatrix> {
        let hat_alg = self.hat.algebra();
        let (d, dh) = (self.psi_images.len(), hat_alg.dim());
        // rows of p: coordinates of ψ(e_l) in the basis of Ŝ
        let mut p = zeros(d, dh);
        for (l, y) in self.psi_images.iter().enumerate() {
            for (k, v) in hat_alg.coords(y).into_iter().enumerate() {
                p[(l, k)] = v;
            }
        }
        // basis element k of Ŝ is Σ_l c[l, k] ψ(e_l)
        let (c, res) = least_squares(&p.transpose(), &identity(dh));
        if res > 1e-8 {
            return Err(invalid("ψ does not map onto Ŝ"));
        }
        let vals: Vec<C64> = (0..d)
            .map(|l| trace_pairing(&self.conv.s_matrix(&self.conv.basis_functional(l)), x))
            .collect();
        let h = hat_alg.ambient();
        let mut e = zeros(h, h);
        for (k, y) in hat_alg.basis().iter().enumerate() {
            let ek: C64 = (0..d).map(|l| c[(l, k)] * vals[l]).sum();
            e += y.adjoint() * ek;
        }
        Ok(e)
    }
}

/// `Ŝ` for a nondegenerate co-involutive `S`.
pub fn dual_hopf(s: &Arc<HopfAlgebra>) -> Result<DualHopf> {
    let conv = ConvolutionAlgebra::new(s)?;
    if !conv.is_nondegenerate() {
        return Err(Error::Unsupported(format!("{} is degenerate", s.label())));
    }
    if !conv.is_coinvolutive(1e-9) {
        return Err(Error::Unsupported(format!("{} is not co-involutive", s.label())));
    }
    let scalars = Arc::new(ConcreteStarAlgebra::scalars(1));
    let system = Arc::new(Coaction::trivial(scalars, s.clone()));
    let crossed = full_crossed_product(&system)?;
    let hat_alg = Arc::new((**crossed.algebra()).clone().relabel(&format!("dual({})", s.label())));
    let crossed = CrossedProduct {
        algebra: hat_alg.clone(),
        ..crossed
    };
    let h = hat_alg.ambient();
    let n = s.ambient();
    let w = crossed.u_s().matrix().clone();
    let basis: Vec<ConvFunctional> = (0..conv.dim_a0()).map(|l| conv.basis_functional(l)).collect();
    let psi_images: Vec<CMatrix> = basis.iter().map(|f| crossed.slice_u(&conv.s_matrix(f))).collect();
    let hat_coact_images: Vec<CMatrix> = basis
        .iter()
        .map(|f| leg13_leg23_slice(&w, &conv.s_matrix(f), h, n))
        .collect();
    let (delta, res) = AlgLinearMap::fit(hat_alg.clone(), h * h, &psi_images, &hat_coact_images)?;
    let hat0 = HopfAlgebra::new_unchecked(
        hat_alg.label(),
        HopfKind::Custom,
        hat_alg.clone(),
        delta,
        None,
        None,
    )?;
    let canonical = canonical_identification(s, &conv, &hat0, &psi_images)?;
    let hat = match &canonical {
        Some((target, phi)) => transport_structures(&hat0, target, phi)?,
        None => hat0,
    };
    Ok(DualHopf {
        base: s.clone(),
        conv,
        crossed,
        hat: Arc::new(hat),
        psi_images,
        hat_coact_images,
        hat_coact_residual: res,
        canonical,
    })
}

/// For built-ins: `ψ(ε_s) ↦ λ(s)` onto `C[G]` for `S = C(G)`, and
/// `ψ(f_s) ↦ E_ss` onto `C(G)` for `S = C[G]` where `f_s(λ(t)) = [s = t]`.
fn canonical_identification(
    s: &Arc<HopfAlgebra>,
    conv: &ConvolutionAlgebra,
    hat: &HopfAlgebra,
    _psi_images: &[CMatrix],
) -> Result<Option<(Arc<HopfAlgebra>, AlgLinearMap)>> {
    let psi = |f: &ConvFunctional| -> CMatrix {
        let reg = s.regular().expect("checked by ConvolutionAlgebra::new");
        slice_right_raw(&reg.v, &conv.s_matrix(f), reg.hdim(), s.ambient())
    };
    let (target, pairs): (Arc<HopfAlgebra>, Vec<(CMatrix, CMatrix)>) = match s.kind() {
        HopfKind::Functions(g) => {
            let target = HopfAlgebra::group_algebra(g);
            let n = g.order();
            let pairs = g
                .elements()
                .map(|t| (psi(&conv.from_matrix(&matrix_unit(n, t, t))), g.lambda(t)))
                .collect();
            (target, pairs)
        }
        HopfKind::GroupAlgebra(g) => {
            let target = HopfAlgebra::function_algebra(g);
            let n = g.order();
            let points: Vec<CMatrix> = g.elements().map(|t| g.lambda(t)).collect();
            let mut pairs = Vec::new();
            for t in g.elements() {
                let vals: Vec<C64> = g.elements().map(|r| C64::from(if r == t { 1.0 } else { 0.0 })).collect();
                let f = conv.from_values(&points, &vals, 1e-9)?;
                pairs.push((psi(&f), matrix_unit(n, t, t)));
            }
            (target, pairs)
        }
        _ => return Ok(None),
    };
    let (xs, ys): (Vec<CMatrix>, Vec<CMatrix>) = pairs.into_iter().unzip();
    let (phi, res) = AlgLinearMap::fit(hat.algebra().clone(), target.ambient(), &xs, &ys)?;
    if res > 1e-8 {
        return Err(invalid("canonical identification is not well defined"));
    }
    Ok(Some((target, phi)))
}

/// Pulls the regular pair and universal corepresentation of `target` back
/// along the isomorphism `φ: hat → target`.
fn transport_structures(hat: &HopfAlgebra, target: &Arc<HopfAlgebra>, phi: &AlgLinearMap) -> Result<HopfAlgebra> {
    let (inv, res) = AlgLinearMap::fit(target.algebra().clone(), hat.ambient(), phi.images(), hat.algebra().basis())?;
    if res > 1e-8 {
        return Err(invalid("canonical identification is not invertible"));
    }
    let nt = target.ambient();
    let reg = target.regular().expect("built-ins carry a regular pair");
    let mu = AlgLinearMap::from_fn(hat.algebra().clone(), reg.hdim(), |x| reg.mu.apply(&phi.apply(x)))?;
    let v = map_right_leg(&reg.v, reg.hdim(), nt, |b| inv.apply(b));
    let (k, u) = target.universal().expect("built-ins carry a universal corepresentation");
    let uu = map_right_leg(u, k, nt, |b| inv.apply(b));
    hat.with_structures(Some(RegularData { mu, v }), Some((k, uu)))
}

#[derive(Clone, Debug, Serialize)]
pub struct DualReport {
    pub dim_hat: usize,
    pub dim_a: usize,
    /// `ψ` maps onto `Ŝ`.
    pub psi_surjective: bool,
    pub hat_axioms: HopfAxiomsReport,
    /// Well-definedness of `Δ_Ŝ` on `ψ(f)` plus membership in `Ŝ ⊗ Ŝ`.
    pub hat_coact_residual: f64,
    /// `‖(Δ_Ŝ ⊗ id)(w_S) − (w_S)₁₃(w_S)₂₃‖`.
    pub delta_s_hat_residual: f64,
    /// `v_S` as a corepresentation of `Ŝ`.
    pub v_s_corep: CorepReport,
    /// `max ‖(id⊗f_S)(w_S) − ψ(f)‖` against the independently computed `ψ`.
    pub can_unitary_residual: f64,
    pub w_s_corep: CorepReport,
    pub canonical_iso: Option<HopfIsoReport>,
}

impl DualReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.psi_surjective
            && self.hat_axioms.star_hom.is_star_hom(tol)
            && self.hat_axioms.star_hom.injective
            && self.hat_axioms.coassociativity <= tol
            && self.hat_coact_residual <= tol
            && self.delta_s_hat_residual <= tol
            && self.v_s_corep.passes(tol)
            && self.w_s_corep.passes(tol)
            && self.can_unitary_residual <= tol
            && self.canonical_iso.as_ref().is_none_or(|r| r.passes(tol))
    }
}

pub fn verify_dual(d: &DualHopf) -> DualReport {
    let (h, n) = (d.hat.ambient(), d.base.ambient());
    let hat_sq = d.hat.tensor_square();
    let membership = d
        .hat_coact_images
        .iter()
        .map(|y| hat_sq.distance(y))
        .fold(0.0, f64::max);
    let w = d.w_s();
    let lhs = map_left_leg(w, h, n, |b| d.hat.comultiply(b));
    let delta_s_hat = residual(&lhs, &leg13_leg23(w, h, n));
    let hat_arc = d.hat.clone();
    let v_s = Corepresentation::new(hat_arc, n, d.v_s()).expect("shape");
    let w_s = d.crossed.u_s().clone();
    let reg = d.base.regular().expect("dual requires a regular pair");
    let can = (0..d.conv.dim_a0())
        .map(|l| {
            let f = d.conv.basis_functional(l);
            let direct = slice_right_raw(&reg.v, &d.conv.s_matrix(&f), reg.hdim(), n);
            residual(&d.psi_images[l], &direct)
        })
        .fold(0.0, f64::max);
    DualReport {
        dim_hat: d.hat.dim(),
        dim_a: d.conv.dim_a(),
        psi_surjective: span_rank(&d.psi_images, 1e-9) == d.hat.dim(),
        hat_axioms: verify_hopf_axioms(&d.hat),
        hat_coact_residual: d.hat_coact_residual.max(membership),
        delta_s_hat_residual: delta_s_hat,
        v_s_corep: verify_corepresentation(&v_s),
        can_unitary_residual: can,
        w_s_corep: verify_corepresentation(&w_s),
        canonical_iso: d.canonical.as_ref().map(|(t, phi)| verify_hopf_isomorphism(phi, &d.hat, t)),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BidualityReport {
    pub refused: Option<String>,
    /// `max_x ‖(id ⊗ ε_x)(v_S) − x‖` over a basis of `S`.
    pub epsilon_residual: Option<f64>,
    /// `span{(id ⊗ g)(v_S)} = S`.
    pub span_condition: Option<bool>,
    /// `θ: S → (Ŝ)^, θ(x) = (id ⊗ ε_x)(V_Ŝ)`, checked as a Hopf isomorphism.
    pub double_dual: Option<HopfIsoReport>,
}

impl BidualityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.refused.is_none()
            && self.epsilon_residual.is_some_and(|r| r <= tol)
            && self.span_condition == Some(true)
            && self.double_dual.as_ref().is_some_and(|r| r.passes(tol))
    }
}

pub fn biduality_check(s: &Arc<HopfAlgebra>, tol: f64) -> BidualityReport {
    let refused = |msg: String| BidualityReport {
        refused: Some(msg),
        epsilon_residual: None,
        span_condition: None,
        double_dual: None,
    };
    let d = match dual_hopf(s) {
        Ok(d) => d,
        Err(e) => return refused(e.to_string()),
    };
    let (n, h) = (s.ambient(), d.hat.ambient());
    let v = d.v_s();
    let mut eps_res: f64 = 0.0;
    for x in s.algebra().basis() {
        match d.epsilon(x) {
            Ok(e) => eps_res = eps_res.max(residual(&slice_right_raw(&v, &e, n, h), x)),
            Err(e) => return refused(e.to_string()),
        }
    }
    let slices: Vec<CMatrix> = (0..h)
        .flat_map(|i| (0..h).map(move |j| (i, j)))
        .map(|(i, j)| slice_right_raw(&v, &matrix_unit(h, j, i), n, h))
        .collect();
    let span_ok = span_equal(&slices, s.algebra().basis(), tol);
    let double = match dual_hopf(&d.hat) {
        Ok(dd) => {
            let reg = d.hat.regular().expect("transported for built-ins");
            let theta = AlgLinearMap::from_fn(s.algebra().clone(), dd.hat.ambient(), |x| {
                let e = d.epsilon(x).expect("checked above");
                slice_right_raw(&reg.v, &e, reg.hdim(), h)
            });
            theta.ok().map(|t| verify_hopf_isomorphism(&t, s, &dd.hat))
        }
        Err(_) => None,
    };
    BidualityReport {
        refused: None,
        epsilon_residual: Some(eps_res),
        span_condition: Some(span_ok),
        double_dual: double,
    }
}

/// Covariance test of `(ι, (μ_S ⊗ id)(v_S))` for `(Ŝ, Ŝ, Δ_Ŝ)`.
#[derive(Clone, Debug, Serialize)]
pub struct ObstructionProbe {
    pub covariance_residual: f64,
    pub corep: CorepReport,
}

pub fn obstruction_probe(s: &Arc<HopfAlgebra>) -> Result<ObstructionProbe> {
    let d = dual_hopf(s)?;
    let reg = s.regular().ok_or_else(|| Error::Unsupported("no regular pair".into()))?;
    let (n, h) = (s.ambient(), d.hat.ambient());
    let v = map_left_leg(&d.v_s(), n, h, |b| reg.mu.apply(b));
    let k = reg.hdim();
    let id_h = identity(h);
    let cov = d
        .hat
        .algebra()
        .basis()
        .iter()
        .map(|x| {
            let lhs = d.hat.comultiply(x);
            let rhs = &v * kron(x, &id_h) * v.adjoint();
            residual(&lhs, &rhs)
        })
        .fold(0.0, f64::max);
    let corep = Corepresentation::new(d.hat.clone(), k, v)?;
    Ok(ObstructionProbe {
        covariance_residual: cov,
        corep: verify_corepresentation(&corep),
    })
}

/// `A ⋊_α G` with `Δ(k_A(a)k_G(s)) = k_A(a)k_G(s) ⊗ k_G(s)`, realized on the
/// minimal faithful representation of the crossed product.
#[derive(Debug)]
pub struct CrossedHopf {
    pub hopf: Arc<HopfAlgebra>,
    pub group: FiniteGroup,
    pub k_a: AlgLinearMap,
    pub k_g: Vec<CMatrix>,
    /// `λ(s) ↦ k_G(s)` on `C[G]`.
    pub k_g_map: AlgLinearMap,
    pub well_definedness: f64,
}

/// Largest reduced size accepted by [`crossed_product_hopf`]; triple tensors
/// of this size stay below 512 dimensions.
pub const MAX_CROSSED_HOPF_SIZE: usize = 8;

pub fn crossed_product_hopf(x: &CrossedProduct) -> Result<CrossedHopf> {
    let group = match x.system.kind() {
        CoactionKind::Action { group, .. } => group.clone(),
        _ => return Err(Error::Unsupported("crossed-product Hopf structure needs a group action".into())),
    };
    let w = x.algebra.wedderburn()?;
    let r: usize = w.sizes().iter().sum();
    if r > MAX_CROSSED_HOPF_SIZE {
        return Err(Error::Unsupported(format!(
            "reduced crossed product has size {r}, limit is {MAX_CROSSED_HOPF_SIZE}"
        )));
    }
    let reduce = |y: &CMatrix| -> CMatrix {
        let comps = w.components(y);
        let mut out = zeros(r, r);
        let mut o = 0;
        for c in comps {
            let k = c.nrows();
            out.view_mut((o, o), (k, k)).copy_from(&c);
            o += k;
        }
        out
    };
    let red_span: Vec<CMatrix> = x.algebra.basis().iter().map(reduce).collect();
    let label = format!("{}⋊{}", x.system.algebra().label(), group.name());
    let red = Arc::new(ConcreteStarAlgebra::from_spanning(&label, r, &red_span, 1e-8)?);
    let k_a = x.j_a().then(r, reduce)?;
    let k_g: Vec<CMatrix> = group
        .elements()
        .map(|s| x.k_g(s).map(|k| reduce(&k)))
        .collect::<Result<_>>()?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for a in k_a.images() {
        for k in &k_g {
            let y = a * k;
            ys.push(kron(&y, k));
            xs.push(y);
        }
    }
    let (delta, res) = AlgLinearMap::fit(red.clone(), r * r, &xs, &ys)?;
    let k_a = AlgLinearMap::new(x.system.algebra().clone(), r, k_a.images().to_vec())?;
    let cg = HopfAlgebra::group_algebra(&group);
    let lambdas: Vec<CMatrix> = group.elements().map(|s| group.lambda(s)).collect();
    let (k_g_map, _) = AlgLinearMap::fit(cg.algebra().clone(), r, &lambdas, &k_g)?;
    let hopf = HopfAlgebra::new_unchecked(&label, HopfKind::Custom, red, delta, None, None)?;
    Ok(CrossedHopf {
        hopf: Arc::new(hopf),
        group,
        k_a,
        k_g,
        k_g_map,
        well_definedness: res,
    })
}

impl CrossedHopf {
    /// `(id ⊗ k_G)(W)` for a corepresentation `W` of `C[G]`.
    pub fn transport(&self, w: &Corepresentation) -> Result<Corepresentation> {
        let n = self.group.order();
        if w.hopf().ambient() != n || !matches!(w.hopf().kind(), HopfKind::GroupAlgebra(_)) {
            return Err(invalid("transport needs a corepresentation of the built-in C[G]"));
        }
        let v = map_right_leg(w.matrix(), w.repdim(), n, |b| self.k_g_map.apply(b));
        Corepresentation::new(self.hopf.clone(), w.repdim(), v)
    }

    /// Distance of the legs of `v` from `M_k ⊗ span k_G(G)`; zero for
    /// transported corepresentations.
    pub fn transported_image_distance(&self, v: &Corepresentation) -> f64 {
        let span = ConcreteStarAlgebra::generated("k_G", self.hopf.ambient(), &self.k_g)
            .expect("square generators");
        crate::tensor::left_blocks(v.matrix(), v.repdim(), self.hopf.ambient())
            .iter()
            .map(|b| span.distance(b))
            .fold(0.0, f64::max)
    }

    /// Transports every corepresentation `Σ P_s ⊗ λ(s)` whose projections are
    /// coordinate projections of `C^k`, `k ≤ max_dim`, and reports each.
    /// No claim is made that these exhaust the corepresentations.
    pub fn search_transported(&self, max_dim: usize) -> Result<Vec<(Vec<usize>, CorepReport)>> {
        let cg = HopfAlgebra::group_algebra(&self.group);
        let n = self.group.order();
        let mut out = Vec::new();
        for k in 1..=max_dim {
            let total = n.pow(k as u32);
            for code in 0..total {
                let mut labels = Vec::with_capacity(k);
                let mut c = code;
                for _ in 0..k {
                    labels.push(c % n);
                    c /= n;
                }
                let projections: Vec<CMatrix> = self
                    .group
                    .elements()
                    .map(|s| {
                        let mut p = zeros(k, k);
                        for (i, &l) in labels.iter().enumerate() {
                            if l == s {
                                p[(i, i)] = C64::from(1.0);
                            }
                        }
                        p
                    })
                    .collect();
                let w = corep_from_function_rep(&cg, &projections, 1e-12)?;
                let t = self.transport(&w)?;
                out.push((labels, verify_corepresentation(&t)));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::verify_coassociativity;

    fn z2() -> FiniteGroup {
        FiniteGroup::cyclic(2).unwrap()
    }

    #[test]
    fn classical_crossed_product_is_full_matrix_algebra() {
        for g in [z2(), FiniteGroup::cyclic(3).unwrap(), FiniteGroup::symmetric3()] {
            let sys = Arc::new(Coaction::translation(&g));
            let x = full_crossed_product(&sys).unwrap();
            let n = g.order();
            assert_eq!(x.dim(), n * n);
            assert_eq!(x.algebra().wedderburn().unwrap().sizes(), vec![n]);
            let r = verify_crossed_product(&x, 1e-10);
            assert!(r.passes(1e-10), "{r:?}");
        }
    }

    #[test]
    fn trivial_system_gives_dual() {
        let cg = HopfAlgebra::group_algebra(&z2());
        let sys = Arc::new(Coaction::trivial(Arc::new(ConcreteStarAlgebra::scalars(1)), cg));
        let x = full_crossed_product(&sys).unwrap();
        assert_eq!(x.dim(), 2);
        assert!(x.algebra().is_commutative(1e-12));
    }

    #[test]
    fn integrated_forms() {
        let g = z2();
        let sys = Arc::new(Coaction::translation(&g));
        let x = full_crossed_product(&sys).unwrap();
        let own = integrated_form(&x, x.carrier(), 1e-9).unwrap();
        assert!(own.worst() < 1e-10);
        for b in x.algebra().basis() {
            assert!(residual(&own.map.apply(b), b) < 1e-10);
        }
        for (name, p) in sampled_covariant_pairs(&x, 6).unwrap() {
            assert!(verify_covariant(&p).passes(1e-10), "{name}");
            let f = integrated_form(&x, &p, 1e-9).unwrap();
            assert!(f.worst() < 1e-9, "{name}: {f:?}");
        }
        // no one-dimensional covariant pair exists
        let h = sys.hopf().clone();
        let evals: Vec<AlgLinearMap> = irreducible_reps(sys.algebra()).unwrap();
        for pi in &evals {
            for sign in [1.0, -1.0] {
                let u = [identity(1), identity(1) * C64::from(sign)];
                let w = crate::corep::corep_from_group_rep(&h, &u, 1e-12).unwrap();
                let p = CovariantPair::new(sys.clone(), pi.clone(), w).unwrap();
                let cov = verify_covariant(&p).passes(1e-9);
                let int = integrated_form(&x, &p, 1e-9);
                assert!(!cov);
                assert!(int.is_err() || int.unwrap().worst() > 1e-6);
            }
        }
    }

    #[test]
    fn character_pairs_for_trivial_system() {
        let g = FiniteGroup::cyclic(3).unwrap();
        let sys = Arc::new(Coaction::trivial(
            Arc::new(ConcreteStarAlgebra::scalars(1)),
            HopfAlgebra::group_algebra(&g),
        ));
        let x = full_crossed_product(&sys).unwrap();
        let pairs = sampled_covariant_pairs(&x, 6).unwrap();
        assert!(pairs.iter().filter(|(n, _)| n.starts_with("character")).count() == 3);
        for (_, p) in pairs {
            assert!(integrated_form(&x, &p, 1e-9).unwrap().worst() < 1e-10);
        }
    }

    #[test]
    fn uniqueness_between_models() {
        let g = FiniteGroup::symmetric3();
        let sys = Arc::new(Coaction::translation(&g));
        let x1 = full_crossed_product(&sys).unwrap();
        let n = x1.carrier().dim();
        let perm = CMatrix::from_fn(n, n, |i, j| C64::from(if (j + 7) % n == i { 1.0 } else { 0.0 }));
        let x2 = full_crossed_product_conjugated(&sys, Some(&perm)).unwrap();
        let r = model_isomorphism(&x1, &x2).unwrap();
        assert!(r.passes(1e-9), "{r:?}");
    }

    #[test]
    fn duals_of_built_ins() {
        for g in [z2(), FiniteGroup::cyclic(4).unwrap(), FiniteGroup::symmetric3()] {
            for s in [HopfAlgebra::function_algebra(&g), HopfAlgebra::group_algebra(&g)] {
                let d = dual_hopf(&s).unwrap();
                let r = verify_dual(&d);
                assert_eq!(r.dim_hat, g.order());
                assert!(r.passes(1e-9), "{}: {r:?}", s.label());
                assert!(r.canonical_iso.is_some());
            }
        }
    }

    #[test]
    fn wrong_identification_fails() {
        let g = FiniteGroup::symmetric3();
        let s = HopfAlgebra::function_algebra(&g);
        let d = dual_hopf(&s).unwrap();
        let target = HopfAlgebra::group_algebra(&g);
        let xs: Vec<CMatrix> = g
            .elements()
            .map(|t| d.psi(&d.convolution().from_matrix(&matrix_unit(6, t, t))))
            .collect();
        let ys: Vec<CMatrix> = g.elements().map(|t| g.lambda(g.inv(t))).collect();
        let (phi, _) = AlgLinearMap::fit(d.hat().algebra().clone(), 6, &xs, &ys).unwrap();
        let r = verify_hopf_isomorphism(&phi, d.hat(), &target);
        assert!(r.star_hom.multiplicative_residual >= 1e-2);
    }

    #[test]
    fn biduality() {
        for g in [z2(), FiniteGroup::symmetric3()] {
            for s in [HopfAlgebra::function_algebra(&g), HopfAlgebra::group_algebra(&g)] {
                let r = biduality_check(&s, 1e-9);
                assert!(r.passes(1e-9), "{}: {r:?}", s.label());
            }
        }
        let r = biduality_check(&HopfAlgebra::trivial(ConcreteStarAlgebra::full(2)), 1e-9);
        assert!(r.refused.is_some());
    }

    #[test]
    fn obstruction_probe_on_s3() {
        let p = obstruction_probe(&HopfAlgebra::group_algebra(&FiniteGroup::symmetric3())).unwrap();
        assert!(p.covariance_residual >= 1e-2);
    }

    #[test]
    fn crossed_product_hopf_structures() {
        let g = z2();
        let x = full_crossed_product(&Arc::new(Coaction::translation(&g))).unwrap();
        let ch = crossed_product_hopf(&x).unwrap();
        assert_eq!(ch.hopf.ambient(), 2);
        assert_eq!(ch.hopf.dim(), 4);
        assert!(ch.well_definedness < 1e-10);
        assert!(verify_coassociativity(&ch.hopf) < 1e-10);
        assert!(crate::hopf::verify_simplifiable(&ch.hopf, crate::hopf::Side::Right, 1e-9).holds);
        let w = Corepresentation::universal(&HopfAlgebra::group_algebra(&g)).unwrap();
        let t = ch.transport(&w).unwrap();
        assert!(verify_corepresentation(&t).passes(1e-10));
        assert!(ch.transported_image_distance(&t) < 1e-10);
        let found = ch.search_transported(2).unwrap();
        assert_eq!(found.len(), 2 + 4);
        assert!(found.iter().all(|(_, r)| r.passes(1e-10)));

        // the trivial action on C recovers C[G]
        let c = Arc::new(ConcreteStarAlgebra::scalars(1));
        let sys = Arc::new(Coaction::from_unitary_action(c, &g, &[identity(1), identity(1)], 1e-12).unwrap());
        let x = full_crossed_product(&sys).unwrap();
        let ch = crossed_product_hopf(&x).unwrap();
        let cg = HopfAlgebra::group_algebra(&g);
        let (phi, _) = AlgLinearMap::fit(ch.hopf.algebra().clone(), 2, &ch.k_g, &[g.lambda(0), g.lambda(1)]).unwrap();
        assert!(verify_hopf_isomorphism(&phi, &ch.hopf, &cg).passes(1e-10));
    }
}
