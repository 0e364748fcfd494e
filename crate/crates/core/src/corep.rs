//! Corepresentations, coactions and covariant pairs.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{check_star_hom, AlgLinearMap, ConcreteStarAlgebra, StarHomReport};
use crate::error::{invalid, Error, Result};
use crate::groups::FiniteGroup;
use crate::hopf::{HopfAlgebra, HopfKind};
use crate::tensor::{
    identity, kron, leg12_leg13, left_blocks, map_left_leg, map_right_leg, matrix_unit,
    null_space, random_matrix, residual, slice_right_raw, span_rank, unitarity_residual, zeros,
    CMatrix, C64,
};

/// A unitary `V ∈ M_k ⊗ S` with `(id ⊗ Δ)(V) = V₁₂V₁₃`.
#[derive(Clone, Debug)]
pub struct Corepresentation {
    hopf: Arc<HopfAlgebra>,
    repdim: usize,
    v: CMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorepReport {
    pub unitary_residual: f64,
    pub corep_residual: f64,
    /// Largest distance of a left block `V_ij` from `S`.
    pub legs_residual: f64,
    pub legs_in_s: bool,
}

impl CorepReport {
    pub fn worst(&self) -> f64 {
        self.unitary_residual
            .max(self.corep_residual)
            .max(self.legs_residual)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.worst() <= tol
    }
}

impl Corepresentation {
    /// Wraps `v` without checking the corepresentation identity.
    pub fn new(hopf: Arc<HopfAlgebra>, repdim: usize, v: CMatrix) -> Result<Self> {
        let n = hopf.ambient();
        if repdim == 0 || v.nrows() != repdim * n || v.ncols() != repdim * n {
            return Err(Error::Shape(format!(
                "corepresentation of repdim {repdim} over M_{n} must be {0}x{0}",
                repdim * n
            )));
        }
        Ok(Self { hopf, repdim, v })
    }

    /// Like [`new`](Self::new) but rejects anything failing the verifier.
    pub fn checked(hopf: Arc<HopfAlgebra>, repdim: usize, v: CMatrix, tol: f64) -> Result<Self> {
        let c = Self::new(hopf, repdim, v)?;
        let r = verify_corepresentation(&c);
        if !r.passes(tol) {
            return Err(invalid(format!("not a corepresentation: {r:?}")));
        }
        Ok(c)
    }

    /// `1 ⊗ 1` on `C^k`.
    pub fn trivial(hopf: Arc<HopfAlgebra>, repdim: usize) -> Self {
        let n = hopf.ambient();
        Self {
            hopf,
            repdim,
            v: identity(repdim * n),
        }
    }

    /// The designated universal corepresentation of `S`.
    pub fn universal(hopf: &Arc<HopfAlgebra>) -> Result<Self> {
        let (k, v) = hopf
            .universal()
            .ok_or_else(|| Error::Unsupported(format!("{} has no universal corepresentation", hopf.label())))?;
        Self::new(hopf.clone(), k, v.clone())
    }

    /// The corepresentation half of the regular pair.
    pub fn regular(hopf: &Arc<HopfAlgebra>) -> Result<Self> {
        let r = hopf
            .regular()
            .ok_or_else(|| Error::Unsupported(format!("{} has no regular pair", hopf.label())))?;
        Self::new(hopf.clone(), r.hdim(), r.v.clone())
    }

    pub fn hopf(&self) -> &Arc<HopfAlgebra> {
        &self.hopf
    }

    pub fn repdim(&self) -> usize {
        self.repdim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.v
    }

    /// `(id ⊗ f)(V)` for `f = tr(F ·)` on `M_n`.
    pub fn slice(&self, f: &CMatrix) -> CMatrix {
        slice_right_raw(&self.v, f, self.repdim, self.hopf.ambient())
    }

    /// Copy with a replaced matrix; for mutation tests.
    pub fn with_matrix(&self, v: CMatrix) -> Self {
        Self { v, ..self.clone() }
    }
}

pub fn verify_corepresentation(c: &Corepresentation) -> CorepReport {
    let h = c.hopf();
    let (k, n) = (c.repdim, h.ambient());
    let lhs = h.delta_on_right_leg(&c.v, k);
    let rhs = leg12_leg13(&c.v, k, n);
    let legs = left_blocks(&c.v, k, n)
        .iter()
        .map(|b| h.algebra().distance(b))
        .fold(0.0, f64::max);
    CorepReport {
        unitary_residual: unitarity_residual(&c.v),
        corep_residual: residual(&lhs, &rhs),
        legs_residual: legs,
        legs_in_s: legs <= crate::tensor::DEFAULT_TOL,
    }
}

fn require_group(h: &HopfAlgebra, functions: bool) -> Result<&FiniteGroup> {
    match (h.kind(), functions) {
        (HopfKind::Functions(g), true) | (HopfKind::GroupAlgebra(g), false) => Ok(g),
        _ => Err(Error::Unsupported(format!(
            "{} is not a built-in {} algebra",
            h.label(),
            if functions { "function" } else { "group" }
        ))),
    }
}

/// `(U ⊗ id)(v_G) = Σ_s U(s) ⊗ E_ss` for a unitary representation `U` of `G`.
pub fn corep_from_group_rep(hopf: &Arc<HopfAlgebra>, u: &[CMatrix], tol: f64) -> Result<Corepresentation> {
    let g = require_group(hopf, true)?;
    if u.len() != g.order() {
        return Err(invalid("one matrix per group element is required"));
    }
    let k = u[0].nrows();
    for s in g.elements() {
        if u[s].shape() != (k, k) || unitarity_residual(&u[s]) > tol {
            return Err(invalid(format!("U({s}) is not a {k}x{k} unitary")));
        }
        for t in g.elements() {
            if residual(&(&u[s] * &u[t]), &u[g.mul(s, t)]) > tol {
                return Err(invalid(format!("U is not multiplicative at ({s}, {t})")));
            }
        }
    }
    let n = g.order();
    let mut v = zeros(k * n, k * n);
    for s in g.elements() {
        v += kron(&u[s], &matrix_unit(n, s, s));
    }
    Corepresentation::new(hopf.clone(), k, v)
}

/// `(μ ⊗ id)(w_G) = Σ_s P_s ⊗ λ(s)` for a projection family `{P_s}`
/// representing `C(G)`.
pub fn corep_from_function_rep(
    hopf: &Arc<HopfAlgebra>,
    projections: &[CMatrix],
    tol: f64,
) -> Result<Corepresentation> {
    let g = require_group(hopf, false)?;
    if projections.len() != g.order() {
        return Err(invalid("one projection per group element is required"));
    }
    let k = projections[0].nrows();
    let mut total = zeros(k, k);
    for (s, p) in projections.iter().enumerate() {
        if p.shape() != (k, k) {
            return Err(invalid("projections must share one size"));
        }
        if residual(&(p * p), p) > tol || residual(&p.adjoint(), p) > tol {
            return Err(invalid(format!("P_{s} is not an orthogonal projection")));
        }
        for q in &projections[s + 1..] {
            if crate::tensor::frobenius(&(p * q)) > tol {
                return Err(invalid("projections are not mutually orthogonal"));
            }
        }
        total += p;
    }
    if residual(&total, &identity(k)) > tol {
        return Err(invalid("projections do not sum to the identity"));
    }
    let mut v = zeros(k * g.order(), k * g.order());
    for s in g.elements() {
        v += kron(&projections[s], &g.lambda(s));
    }
    Corepresentation::new(hopf.clone(), k, v)
}

/// `V₁ ⊕ V₂` in the `M_k` leg.
pub fn corep_direct_sum(a: &Corepresentation, b: &Corepresentation) -> Result<Corepresentation> {
    if !Arc::ptr_eq(&a.hopf, &b.hopf) {
        return Err(invalid("direct sum of corepresentations of different Hopf algebras"));
    }
    let n = a.hopf.ambient();
    let (ka, kb) = (a.repdim, b.repdim);
    let mut v = zeros((ka + kb) * n, (ka + kb) * n);
    v.view_mut((0, 0), (ka * n, ka * n)).copy_from(&a.v);
    v.view_mut((ka * n, ka * n), (kb * n, kb * n)).copy_from(&b.v);
    Corepresentation::new(a.hopf.clone(), ka + kb, v)
}

/// A unitary `U` with `V₁ = (U ⊗ 1) V₂ (U* ⊗ 1)`, if one exists.
pub fn unitarily_equivalent(a: &Corepresentation, b: &Corepresentation, tol: f64, seed: u64) -> Option<CMatrix> {
    intertwining_unitary(&a.v, &b.v, a.repdim, a.hopf.ambient(), tol, seed)
}

/// Solves `(X ⊗ 1)V₂ = V₁(X ⊗ 1)` and returns the polar part of a generic
/// solution when it conjugates `V₂` onto `V₁`.
pub fn intertwining_unitary(v1: &CMatrix, v2: &CMatrix, k: usize, n: usize, tol: f64, seed: u64) -> Option<CMatrix> {
    if v1.shape() != v2.shape() || v1.nrows() != k * n {
        return None;
    }
    let id = identity(n);
    let size = k * n;
    let mut system = zeros(size * size, k * k);
    for i in 0..k {
        for j in 0..k {
            let e = kron(&matrix_unit(k, i, j), &id);
            let col = &e * v2 - v1 * &e;
            for (r, val) in col.iter().enumerate() {
                system[(r, i * k + j)] = *val;
            }
        }
    }
    let kernel = null_space(&system, 1e-9);
    if kernel.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = random_matrix(kernel.len(), 1, &mut rng);
    let mut x = zeros(k, k);
    for (vec, c) in kernel.iter().zip(coeffs.iter()) {
        x += CMatrix::from_iterator(k, k, vec.iter().copied()).transpose() * *c;
    }
    let svd = x.svd(true, true);
    let u = svd.u.as_ref()? * svd.v_t.as_ref()?;
    let ue = kron(&u, &id);
    if residual(&(&ue * v2 * ue.adjoint()), v1) <= tol && unitarity_residual(&u) <= tol {
        Some(u)
    } else {
        None
    }
}

/// Which construction produced a coaction.
#[derive(Clone, Debug)]
pub enum CoactionKind {
    Trivial,
    /// `δ = Δ_S` on `A = S`.
    Comultiplication,
    /// `δ(a) = Σ_s α_s(a) ⊗ E_ss` from an action of `G`.
    Action {
        group: FiniteGroup,
        automorphisms: Vec<AlgLinearMap>,
        /// Implementing unitaries `α_s = Ad u_s`, when known.
        unitaries: Option<Vec<CMatrix>>,
    },
    Custom,
}

/// An injective *-homomorphism `δ: A → A ⊗ S` with
/// `(δ ⊗ id)∘δ = (id ⊗ Δ)∘δ`.
#[derive(Clone, Debug)]
pub struct Coaction {
    algebra: Arc<ConcreteStarAlgebra>,
    hopf: Arc<HopfAlgebra>,
    delta: AlgLinearMap,
    kind: CoactionKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoactionReport {
    pub star_hom: StarHomReport,
    pub range_residual: f64,
    pub coaction_residual: f64,
    pub nondegenerate_rank: usize,
    pub target_dim: usize,
    pub nondegenerate: bool,
}

impl CoactionReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.star_hom.is_star_hom(tol)
            && self.star_hom.injective
            && self.range_residual <= tol
            && self.coaction_residual <= tol
            && self.nondegenerate
    }
}

impl Coaction {
    pub fn new_unchecked(
        algebra: Arc<ConcreteStarAlgebra>,
        hopf: Arc<HopfAlgebra>,
        delta: AlgLinearMap,
        kind: CoactionKind,
    ) -> Result<Self> {
        if !Arc::ptr_eq(delta.domain(), &algebra) || delta.codomain_dim() != algebra.ambient() * hopf.ambient() {
            return Err(Error::Shape("coaction must map A into M_{nA}⊗M_{nS}".into()));
        }
        Ok(Self {
            algebra,
            hopf,
            delta,
            kind,
        })
    }

    pub fn new(algebra: Arc<ConcreteStarAlgebra>, hopf: Arc<HopfAlgebra>, delta: AlgLinearMap, tol: f64) -> Result<Self> {
        Self::validated(Self::new_unchecked(algebra, hopf, delta, CoactionKind::Custom)?, tol)
    }

    fn validated(c: Self, tol: f64) -> Result<Self> {
        let r = verify_coaction(&c, tol);
        if !r.passes(tol) {
            return Err(invalid(format!("not a coaction: {r:?}")));
        }
        Ok(c)
    }

    /// `δ(a) = a ⊗ 1`.
    pub fn trivial(algebra: Arc<ConcreteStarAlgebra>, hopf: Arc<HopfAlgebra>) -> Self {
        let id = identity(hopf.ambient());
        let m = algebra.ambient() * hopf.ambient();
        let delta = AlgLinearMap::from_fn(algebra.clone(), m, |a| kron(a, &id)).expect("shapes");
        Self::new_unchecked(algebra, hopf, delta, CoactionKind::Trivial).expect("shapes")
    }

    /// `Δ_S` as a coaction of `S` on itself.
    pub fn comultiplication(hopf: &Arc<HopfAlgebra>) -> Self {
        Self::new_unchecked(
            hopf.algebra().clone(),
            hopf.clone(),
            hopf.delta().clone(),
            CoactionKind::Comultiplication,
        )
        .expect("shapes")
    }

    /// `δ(a) = Σ_s α_s(a) ⊗ E_ss` as a coaction of `C(G)`.
    pub fn from_action(
        algebra: Arc<ConcreteStarAlgebra>,
        group: &FiniteGroup,
        automorphisms: Vec<AlgLinearMap>,
        tol: f64,
    ) -> Result<Self> {
        Self::action_with_unitaries(algebra, group, automorphisms, None, tol)
    }

    fn action_with_unitaries(
        algebra: Arc<ConcreteStarAlgebra>,
        group: &FiniteGroup,
        automorphisms: Vec<AlgLinearMap>,
        unitaries: Option<Vec<CMatrix>>,
        tol: f64,
    ) -> Result<Self> {
        if automorphisms.len() != group.order() {
            return Err(invalid("one automorphism per group element is required"));
        }
        for (s, a) in automorphisms.iter().enumerate() {
            if !Arc::ptr_eq(a.domain(), &algebra) || a.codomain_dim() != algebra.ambient() {
                return Err(invalid(format!("α_{s} does not act on A")));
            }
            let r = check_star_hom(a);
            if !r.is_star_hom(tol) || !r.injective {
                return Err(invalid(format!("α_{s} is not a *-automorphism: {r:?}")));
            }
            if a.images().iter().any(|x| !algebra.contains(x, tol)) {
                return Err(invalid(format!("α_{s} leaves A")));
            }
        }
        for s in group.elements() {
            for t in group.elements() {
                let composite = automorphisms[s].then(algebra.ambient(), |x| automorphisms[t].apply(x))?;
                // composite = α_t ∘ α_s must equal α_{ts}
                if composite.distance(&automorphisms[group.mul(t, s)]) > tol {
                    return Err(invalid(format!("α is not a homomorphism at ({t}, {s})")));
                }
            }
        }
        let hopf = HopfAlgebra::function_algebra(group);
        let n = group.order();
        let m = algebra.ambient() * n;
        let delta = AlgLinearMap::from_fn(algebra.clone(), m, |a| {
            let mut acc = zeros(m, m);
            for s in group.elements() {
                acc += kron(&automorphisms[s].apply(a), &matrix_unit(n, s, s));
            }
            acc
        })?;
        let kind = CoactionKind::Action {
            group: group.clone(),
            automorphisms,
            unitaries,
        };
        Self::validated(Self::new_unchecked(algebra, hopf, delta, kind)?, tol)
    }

    /// Action by inner automorphisms `α_s = Ad u_s` for unitaries normalizing `A`.
    pub fn from_unitary_action(
        algebra: Arc<ConcreteStarAlgebra>,
        group: &FiniteGroup,
        unitaries: &[CMatrix],
        tol: f64,
    ) -> Result<Self> {
        let m = algebra.ambient();
        let autos = unitaries
            .iter()
            .map(|u| AlgLinearMap::from_fn(algebra.clone(), m, |a| u * a * u.adjoint()))
            .collect::<Result<Vec<_>>>()?;
        Self::action_with_unitaries(algebra, group, autos, Some(unitaries.to_vec()), tol)
    }

    /// `G` acting on `C(G)` by right translation, `α_s(f)(t) = f(ts)`.
    pub fn translation(group: &FiniteGroup) -> Self {
        let alg = Arc::new(ConcreteStarAlgebra::diagonal(group.order()).relabel(&format!("C({})", group.name())));
        let unitaries: Vec<CMatrix> = group.elements().map(|s| group.rho(s)).collect();
        Self::from_unitary_action(alg, group, &unitaries, 1e-10).expect("translation is an action")
    }

    /// Coaction of `C[G]` from a grading: `δ(x) = x ⊗ λ(g)` on each homogeneous `x`.
    pub fn from_grading(
        algebra: Arc<ConcreteStarAlgebra>,
        hopf: &Arc<HopfAlgebra>,
        homogeneous: &[(CMatrix, usize)],
        tol: f64,
    ) -> Result<Self> {
        let g = require_group(hopf, false)?;
        let m = algebra.ambient() * g.order();
        let xs: Vec<CMatrix> = homogeneous.iter().map(|(x, _)| x.clone()).collect();
        let ys: Vec<CMatrix> = homogeneous.iter().map(|(x, s)| kron(x, &g.lambda(*s))).collect();
        let (delta, res) = AlgLinearMap::fit(algebra.clone(), m, &xs, &ys)?;
        if res > tol {
            return Err(invalid("grading is inconsistent"));
        }
        Self::new(algebra, hopf.clone(), delta, tol)
    }

    pub fn algebra(&self) -> &Arc<ConcreteStarAlgebra> {
        &self.algebra
    }

    pub fn hopf(&self) -> &Arc<HopfAlgebra> {
        &self.hopf
    }

    pub fn delta(&self) -> &AlgLinearMap {
        &self.delta
    }

    pub fn kind(&self) -> &CoactionKind {
        &self.kind
    }

    pub fn with_delta(&self, delta: AlgLinearMap) -> Self {
        Self {
            delta,
            kind: CoactionKind::Custom,
            ..self.clone()
        }
    }
}

pub fn verify_coaction(c: &Coaction, tol: f64) -> CoactionReport {
    let (na, ns) = (c.algebra.ambient(), c.hopf.ambient());
    let target = ConcreteStarAlgebra::tensor(&c.algebra, c.hopf.algebra());
    let range = c
        .delta
        .images()
        .iter()
        .map(|d| target.distance(d))
        .fold(0.0, f64::max);
    let coaction = c
        .algebra
        .basis()
        .iter()
        .map(|a| {
            let da = c.delta.apply(a);
            let left = map_left_leg(&da, na, ns, |b| c.delta.apply(b));
            let right = map_right_leg(&da, na, ns, |b| c.hopf.comultiply(b));
            residual(&left, &right)
        })
        .fold(0.0, f64::max);
    let id = identity(na);
    let mut products = Vec::with_capacity(c.algebra.dim() * c.hopf.dim());
    for img in c.delta.images() {
        for s in c.hopf.algebra().basis() {
            products.push(img * kron(&id, s));
        }
    }
    let rank = span_rank(&products, 1e-9);
    CoactionReport {
        star_hom: check_star_hom(&c.delta),
        range_residual: range,
        coaction_residual: coaction,
        nondegenerate_rank: rank,
        target_dim: target.dim(),
        nondegenerate: rank == target.dim() && range <= tol,
    }
}

/// A representation `π` of `A` and a corepresentation `V` on the same space
/// with `(π ⊗ id)δ(a) = V(π(a) ⊗ 1)V*`.
#[derive(Clone, Debug)]
pub struct CovariantPair {
    pub coaction: Arc<Coaction>,
    pub pi: AlgLinearMap,
    pub corep: Corepresentation,
}

#[derive(Clone, Debug, Serialize)]
pub struct CovariantReport {
    pub pi: StarHomReport,
    pub corep: CorepReport,
    pub covariance_residual: f64,
    pub rank_pi: usize,
    pub rank_pi_delta: usize,
    pub kernels_agree: bool,
}

impl CovariantReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.pi.is_star_hom(tol) && self.corep.passes(tol) && self.covariance_residual <= tol && self.kernels_agree
    }
}

impl CovariantPair {
    pub fn new(coaction: Arc<Coaction>, pi: AlgLinearMap, corep: Corepresentation) -> Result<Self> {
        if !Arc::ptr_eq(pi.domain(), coaction.algebra()) {
            return Err(Error::Shape("π must be defined on the coacted algebra".into()));
        }
        if !Arc::ptr_eq(corep.hopf(), coaction.hopf()) || corep.repdim() != pi.codomain_dim() {
            return Err(Error::Shape("corepresentation does not match π and S".into()));
        }
        Ok(Self { coaction, pi, corep })
    }

    pub fn checked(coaction: Arc<Coaction>, pi: AlgLinearMap, corep: Corepresentation, tol: f64) -> Result<Self> {
        let p = Self::new(coaction, pi, corep)?;
        let r = verify_covariant(&p);
        if !r.passes(tol) {
            return Err(invalid(format!("pair is not covariant: {r:?}")));
        }
        Ok(p)
    }

    /// The designated regular pair `(μ_S, V_S)` of `S` for `Δ_S`.
    pub fn regular(hopf: &Arc<HopfAlgebra>) -> Result<Self> {
        let r = hopf
            .regular()
            .ok_or_else(|| Error::Unsupported(format!("{} has no regular pair", hopf.label())))?;
        let coaction = Arc::new(Coaction::comultiplication(hopf));
        let corep = Corepresentation::new(hopf.clone(), r.hdim(), r.v.clone())?;
        Self::new(coaction, r.mu.clone(), corep)
    }

    pub fn dim(&self) -> usize {
        self.pi.codomain_dim()
    }

    /// `(π ⊗ id)(δ(a))`.
    pub fn pi_delta(&self, a: &CMatrix) -> CMatrix {
        let da = self.coaction.delta().apply(a);
        map_left_leg(&da, self.coaction.algebra().ambient(), self.coaction.hopf().ambient(), |b| {
            self.pi.apply(b)
        })
    }

    pub fn with_corep(&self, corep: Corepresentation) -> Self {
        Self { corep, ..self.clone() }
    }
}

pub fn verify_covariant(p: &CovariantPair) -> CovariantReport {
    let n = p.coaction.hopf().ambient();
    let id = identity(n);
    let v = p.corep.matrix();
    let basis = p.coaction.algebra().basis();
    let mut cov: f64 = 0.0;
    let mut composite = Vec::with_capacity(basis.len());
    for (i, a) in basis.iter().enumerate() {
        let lhs = p.pi_delta(a);
        let rhs = v * kron(&p.pi.images()[i], &id) * v.adjoint();
        cov = cov.max(residual(&lhs, &rhs));
        composite.push(lhs);
    }
    let rank_pi = span_rank(p.pi.images(), 1e-9);
    let rank_pi_delta = span_rank(&composite, 1e-9);
    // kernels agree iff both maps and the stacked map share one rank
    let stacked: Vec<CMatrix> = p
        .pi
        .images()
        .iter()
        .zip(&composite)
        .map(|(x, y)| {
            let mut m = zeros(x.nrows() + y.nrows(), x.ncols() + y.ncols());
            m.view_mut((0, 0), x.shape()).copy_from(x);
            m.view_mut(x.shape(), y.shape()).copy_from(y);
            m
        })
        .collect();
    let rank_joint = span_rank(&stacked, 1e-9);
    CovariantReport {
        pi: check_star_hom(&p.pi),
        corep: verify_corepresentation(&p.corep),
        covariance_residual: cov,
        rank_pi,
        rank_pi_delta,
        kernels_agree: rank_pi == rank_pi_delta && rank_pi == rank_joint,
    }
}

/// Identity inclusion of a concrete algebra as a representation.
pub fn identity_rep(a: &Arc<ConcreteStarAlgebra>) -> AlgLinearMap {
    AlgLinearMap::identity(a.clone())
}

/// `π₁ ⊕ π₂`.
pub fn rep_direct_sum(a: &AlgLinearMap, b: &AlgLinearMap) -> Result<AlgLinearMap> {
    if !Arc::ptr_eq(a.domain(), b.domain()) {
        return Err(invalid("direct sum of representations of different algebras"));
    }
    let (ka, kb) = (a.codomain_dim(), b.codomain_dim());
    let images = a
        .images()
        .iter()
        .zip(b.images())
        .map(|(x, y)| {
            let mut m = zeros(ka + kb, ka + kb);
            m.view_mut((0, 0), (ka, ka)).copy_from(x);
            m.view_mut((ka, ka), (kb, kb)).copy_from(y);
            m
        })
        .collect();
    AlgLinearMap::new(a.domain().clone(), ka + kb, images)
}

/// `Ind π = ((π ⊗ μ_S)∘δ, 1 ⊗ V_S)` on `C^k ⊗ H_S`.
pub fn induce(coaction: &Arc<Coaction>, pi: &AlgLinearMap) -> Result<CovariantPair> {
    let hopf = coaction.hopf();
    let reg = hopf
        .regular()
        .ok_or_else(|| Error::Unsupported(format!("{} has no regular pair", hopf.label())))?;
    if !Arc::ptr_eq(pi.domain(), coaction.algebra()) {
        return Err(Error::Shape("π must be defined on the coacted algebra".into()));
    }
    let (na, ns) = (coaction.algebra().ambient(), hopf.ambient());
    let (k, h) = (pi.codomain_dim(), reg.hdim());
    let ind = coaction.delta().then(k * h, |da| {
        let left = map_left_leg(da, na, ns, |b| pi.apply(b));
        map_right_leg(&left, k, ns, |b| reg.mu.apply(b))
    })?;
    let v = kron(&identity(k), &reg.v);
    let corep = Corepresentation::new(hopf.clone(), k * h, v)?;
    CovariantPair::new(coaction.clone(), ind, corep)
}

/// Direct sum of two covariant pairs for the same coaction.
pub fn pair_direct_sum(a: &CovariantPair, b: &CovariantPair) -> Result<CovariantPair> {
    if !Arc::ptr_eq(&a.coaction, &b.coaction) {
        return Err(invalid("direct sum of pairs for different coactions"));
    }
    CovariantPair::new(
        a.coaction.clone(),
        rep_direct_sum(&a.pi, &b.pi)?,
        corep_direct_sum(&a.corep, &b.corep)?,
    )
}

/// Irreducible representations of `A` read off its block decomposition.
pub fn irreducible_reps(a: &Arc<ConcreteStarAlgebra>) -> Result<Vec<AlgLinearMap>> {
    let w = a.wedderburn()?;
    (0..w.blocks.len())
        .map(|i| {
            let size = w.blocks[i].size;
            AlgLinearMap::from_fn(a.clone(), size, |x| w.components(x).swap_remove(i))
        })
        .collect()
}

/// `(id ⊗ f)(V)` for each entry functional `f` on the `S` leg; the linear
/// span of these is the slice space of `V`.
pub fn slices(c: &Corepresentation) -> Vec<CMatrix> {
    let n = c.hopf().ambient();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(c.slice(&matrix_unit(n, j, i)));
        }
    }
    out
}

/// Scalar helper used where a functional is given by a coefficient list over
/// a frame of `S`: returns `Σ_l c_l b_l*` as a trace-pairing matrix.
pub fn functional_matrix(frame: &[CMatrix], coeffs: &[C64]) -> CMatrix {
    let n = frame[0].nrows();
    let mut f = zeros(n, n);
    for (b, c) in frame.iter().zip(coeffs) {
        f += b.adjoint() * *c;
    }
    f
}
