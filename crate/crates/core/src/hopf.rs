//! Hopf C*-algebra structures on concrete algebras.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{check_star_hom, AlgLinearMap, ConcreteStarAlgebra, StarHomReport};
use crate::error::{invalid, Error, Result};
use crate::groups::{Cocycle, FiniteGroup};
use crate::tensor::{
    identity, kron, map_left_leg, map_right_leg, matrix_unit, op_norm, residual, span_rank,
    zeros, CMatrix,
};

/// Which construction produced a Hopf algebra.
#[derive(Clone, Debug)]
pub enum HopfKind {
    /// `C(G)` on the diagonal of `M_|G|`.
    Functions(FiniteGroup),
    /// `C[G]` as the span of the left regular representation.
    GroupAlgebra(FiniteGroup),
    /// `a ↦ a ⊗ 1`.
    Trivial,
    Custom,
}

/// A representation `μ` of `S` on `C^h` with a corepresentation `V ∈ M_h ⊗ S`
/// forming a covariant pair for the comultiplication.
#[derive(Clone, Debug)]
pub struct RegularData {
    pub mu: AlgLinearMap,
    pub v: CMatrix,
}

impl RegularData {
    pub fn hdim(&self) -> usize {
        self.mu.codomain_dim()
    }
}

/// A concrete algebra `S` with a comultiplication `Δ: S → S ⊗ S`.
#[derive(Clone)]
pub struct HopfAlgebra {
    label: String,
    kind: HopfKind,
    algebra: Arc<ConcreteStarAlgebra>,
    delta: AlgLinearMap,
    regular: Option<RegularData>,
    universal: Option<(usize, CMatrix)>,
}

impl fmt::Debug for HopfAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HopfAlgebra({}, dim {})", self.label, self.dim())
    }
}

/// `w_G = Σ_s E_ss ⊗ λ(s)`.
pub fn w_g(g: &FiniteGroup) -> CMatrix {
    let n = g.order();
    let mut w = zeros(n * n, n * n);
    for s in g.elements() {
        w += kron(&matrix_unit(n, s, s), &g.lambda(s));
    }
    w
}

/// `v_G = Σ_s λ(s) ⊗ E_ss`, the flip of `w_G`.
pub fn v_g(g: &FiniteGroup) -> CMatrix {
    let n = g.order();
    let mut v = zeros(n * n, n * n);
    for s in g.elements() {
        v += kron(&g.lambda(s), &matrix_unit(n, s, s));
    }
    v
}

impl HopfAlgebra {
    /// Validated constructor: `Δ` must be an injective unital *-homomorphism
    /// into `S ⊗ S` and coassociative.
    pub fn new(
        label: &str,
        algebra: Arc<ConcreteStarAlgebra>,
        delta: AlgLinearMap,
        regular: Option<RegularData>,
        universal: Option<(usize, CMatrix)>,
        tol: f64,
    ) -> Result<Self> {
        let h = Self::new_unchecked(label, HopfKind::Custom, algebra, delta, regular, universal)?;
        let report = verify_hopf_axioms(&h);
        if !report.star_hom.is_star_hom(tol) || !report.star_hom.injective {
            return Err(invalid(format!(
                "{label}: comultiplication is not an injective *-homomorphism ({:?})",
                report.star_hom
            )));
        }
        if report.range_residual > tol {
            return Err(invalid(format!(
                "{label}: comultiplication leaves S⊗S (residual {:.3e})",
                report.range_residual
            )));
        }
        if report.coassociativity > tol {
            return Err(invalid(format!(
                "{label}: not coassociative (residual {:.3e})",
                report.coassociativity
            )));
        }
        Ok(h)
    }

    /// Assembles the structure without checking axioms; verifiers then
    /// report what fails. Only shapes are validated.
    pub fn new_unchecked(
        label: &str,
        kind: HopfKind,
        algebra: Arc<ConcreteStarAlgebra>,
        delta: AlgLinearMap,
        regular: Option<RegularData>,
        universal: Option<(usize, CMatrix)>,
    ) -> Result<Self> {
        let n = algebra.ambient();
        if delta.codomain_dim() != n * n || !Arc::ptr_eq(delta.domain(), &algebra) {
            return Err(Error::Shape(format!("{label}: Δ must map S into M_{n}⊗M_{n}")));
        }
        if let Some(r) = &regular {
            let h = r.hdim();
            if !Arc::ptr_eq(r.mu.domain(), &algebra) || r.v.nrows() != h * n || r.v.ncols() != h * n {
                return Err(Error::Shape(format!("{label}: regular pair has inconsistent shapes")));
            }
        }
        if let Some((k, v)) = &universal {
            if v.nrows() != k * n || v.ncols() != k * n {
                return Err(Error::Shape(format!("{label}: universal corepresentation has wrong shape")));
            }
        }
        Ok(Self {
            label: label.to_string(),
            kind,
            algebra,
            delta,
            regular,
            universal,
        })
    }

    /// `C[G] = span{λ(s)}` with `Δλ(s) = λ(s) ⊗ λ(s)`.
    pub fn group_algebra(g: &FiniteGroup) -> Arc<Self> {
        let n = g.order();
        let lambdas: Vec<CMatrix> = g.elements().map(|s| g.lambda(s)).collect();
        let alg = Arc::new(
            ConcreteStarAlgebra::from_spanning(&format!("C[{}]", g.name()), n, &lambdas, 1e-10)
                .expect("regular representation spans a *-algebra"),
        );
        let images: Vec<CMatrix> = lambdas.iter().map(|l| kron(l, l)).collect();
        let (delta, res) = AlgLinearMap::fit(alg.clone(), n * n, &lambdas, &images).expect("shapes");
        debug_assert!(res < 1e-10);
        let w = w_g(g);
        let mu = AlgLinearMap::identity(alg.clone());
        let h = Self::new_unchecked(
            &format!("C[{}]", g.name()),
            HopfKind::GroupAlgebra(g.clone()),
            alg,
            delta,
            Some(RegularData { mu, v: w.clone() }),
            Some((n, w)),
        )
        .expect("shapes agree");
        Arc::new(h)
    }

    /// `C(G)` on the diagonal with `Δ(E_ss) = Σ_{uv=s} E_uu ⊗ E_vv`.
    ///
    /// The regular pair is the multiplication representation with
    /// `V = Σ_s ρ(s) ⊗ E_ss`; with `Δ f(s,t) = f(st)` the right regular
    /// representation is the one that makes the pair covariant.
    pub fn function_algebra(g: &FiniteGroup) -> Arc<Self> {
        let n = g.order();
        let alg = Arc::new(ConcreteStarAlgebra::diagonal(n).relabel(&format!("C({})", g.name())));
        let units: Vec<CMatrix> = g.elements().map(|s| matrix_unit(n, s, s)).collect();
        let images: Vec<CMatrix> = g
            .elements()
            .map(|s| {
                let mut acc = zeros(n * n, n * n);
                for u in g.elements() {
                    let v = g.mul(g.inv(u), s);
                    acc += kron(&units[u], &units[v]);
                }
                acc
            })
            .collect();
        let (delta, res) = AlgLinearMap::fit(alg.clone(), n * n, &units, &images).expect("shapes");
        debug_assert!(res < 1e-10);
        let mut v = zeros(n * n, n * n);
        for s in g.elements() {
            v += kron(&g.rho(s), &units[s]);
        }
        let mu = AlgLinearMap::identity(alg.clone());
        let h = Self::new_unchecked(
            &format!("C({})", g.name()),
            HopfKind::Functions(g.clone()),
            alg,
            delta,
            Some(RegularData { mu, v: v.clone() }),
            Some((n, v)),
        )
        .expect("shapes agree");
        Arc::new(h)
    }

    /// `Δ(a) = a ⊗ 1`. The only corepresentation is `1 ⊗ 1`.
    pub fn trivial(algebra: ConcreteStarAlgebra) -> Arc<Self> {
        let n = algebra.ambient();
        let label = format!("trivial({})", algebra.label());
        let alg = Arc::new(algebra);
        let id = identity(n);
        let delta = AlgLinearMap::from_fn(alg.clone(), n * n, |a| kron(a, &id)).expect("shapes");
        let mu = AlgLinearMap::identity(alg.clone());
        let h = Self::new_unchecked(
            &label,
            HopfKind::Trivial,
            alg,
            delta,
            Some(RegularData {
                mu,
                v: identity(n * n),
            }),
            Some((1, identity(n))),
        )
        .expect("shapes agree");
        Arc::new(h)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &HopfKind {
        &self.kind
    }

    pub fn algebra(&self) -> &Arc<ConcreteStarAlgebra> {
        &self.algebra
    }

    pub fn delta(&self) -> &AlgLinearMap {
        &self.delta
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Ambient size `n` of `S ⊂ M_n`.
    pub fn ambient(&self) -> usize {
        self.algebra.ambient()
    }

    pub fn regular(&self) -> Option<&RegularData> {
        self.regular.as_ref()
    }

    pub fn universal(&self) -> Option<(usize, &CMatrix)> {
        self.universal.as_ref().map(|(k, v)| (*k, v))
    }

    pub fn group(&self) -> Option<&FiniteGroup> {
        match &self.kind {
            HopfKind::Functions(g) | HopfKind::GroupAlgebra(g) => Some(g),
            _ => None,
        }
    }

    pub fn comultiply(&self, x: &CMatrix) -> CMatrix {
        self.delta.apply(x)
    }

    /// Same structure with a different comultiplication; for mutation tests.
    pub fn with_delta(&self, delta: AlgLinearMap) -> Self {
        Self {
            delta,
            kind: HopfKind::Custom,
            ..self.clone()
        }
    }

    pub fn with_structures(&self, regular: Option<RegularData>, universal: Option<(usize, CMatrix)>) -> Result<Self> {
        Self::new_unchecked(
            &self.label,
            self.kind.clone(),
            self.algebra.clone(),
            self.delta.clone(),
            regular,
            universal,
        )
    }

    pub fn relabel(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    /// `S ⊗ S` as a concrete algebra.
    pub fn tensor_square(&self) -> ConcreteStarAlgebra {
        ConcreteStarAlgebra::tensor(&self.algebra, &self.algebra)
    }

    /// `(id ⊗ Δ)(X)` for `X ∈ M_k ⊗ S`.
    pub fn delta_on_right_leg(&self, x: &CMatrix, k: usize) -> CMatrix {
        map_right_leg(x, k, self.ambient(), |b| self.comultiply(b))
    }
}

/// `max_x ‖(Δ⊗id)Δx − (id⊗Δ)Δx‖` over the basis.
pub fn verify_coassociativity(h: &HopfAlgebra) -> f64 {
    let n = h.ambient();
    h.algebra()
        .basis()
        .iter()
        .map(|x| {
            let dx = h.comultiply(x);
            let left = map_left_leg(&dx, n, n, |b| h.comultiply(b));
            let right = map_right_leg(&dx, n, n, |b| h.comultiply(b));
            residual(&left, &right)
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `span Δ(S)(1 ⊗ S) = S ⊗ S`.
    Right,
    /// `span Δ(S)(S ⊗ 1) = S ⊗ S`.
    Left,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimplifiableReport {
    pub side: Side,
    pub rank: usize,
    pub target_dim: usize,
    /// Largest distance of a spanning product from `S ⊗ S`.
    pub containment_residual: f64,
    pub holds: bool,
}

pub fn verify_simplifiable(h: &HopfAlgebra, side: Side, tol: f64) -> SimplifiableReport {
    let n = h.ambient();
    let id = identity(n);
    let ss = h.tensor_square();
    let mut products = Vec::with_capacity(h.dim() * h.dim());
    for x in h.algebra().basis() {
        let dx = h.comultiply(x);
        for y in h.algebra().basis() {
            let factor = match side {
                Side::Right => kron(&id, y),
                Side::Left => kron(y, &id),
            };
            products.push(&dx * factor);
        }
    }
    let containment = products.iter().map(|p| ss.distance(p)).fold(0.0, f64::max);
    let rank = span_rank(&products, 1e-9);
    let target_dim = ss.dim();
    SimplifiableReport {
        side,
        rank,
        target_dim,
        containment_residual: containment,
        holds: rank == target_dim && containment <= tol,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HopfAxiomsReport {
    pub star_hom: StarHomReport,
    /// Largest distance of `Δ(x)` from `S ⊗ S` over the basis.
    pub range_residual: f64,
    pub coassociativity: f64,
    pub right: SimplifiableReport,
    pub left: SimplifiableReport,
}

pub fn verify_hopf_axioms(h: &HopfAlgebra) -> HopfAxiomsReport {
    verify_hopf_axioms_tol(h, crate::tensor::DEFAULT_TOL)
}

pub fn verify_hopf_axioms_tol(h: &HopfAlgebra, tol: f64) -> HopfAxiomsReport {
    let ss = h.tensor_square();
    let range = h
        .delta()
        .images()
        .iter()
        .map(|d| ss.distance(d))
        .fold(0.0, f64::max);
    HopfAxiomsReport {
        star_hom: check_star_hom(h.delta()),
        range_residual: range,
        coassociativity: verify_coassociativity(h),
        right: verify_simplifiable(h, Side::Right, tol),
        left: verify_simplifiable(h, Side::Left, tol),
    }
}

/// `λ_u(s) ↦ λ_u(s) ⊗ λ_u(s)` extended linearly to `C*(G, u)`.
pub fn twisted_delta(u: &Cocycle) -> AlgLinearMap {
    let g = u.group();
    let n = g.order();
    let reps: Vec<CMatrix> = g.elements().map(|s| u.twisted_regular_rep(s)).collect();
    // λ_u(s) has support pattern of λ(s), so these are linearly independent
    let span: Vec<CMatrix> = reps.clone();
    let alg = Arc::new(
        ConcreteStarAlgebra::from_spanning("C*(G,u)", n, &span, 1e-10)
            .expect("twisted group algebra is a *-algebra"),
    );
    let images: Vec<CMatrix> = reps.iter().map(|r| kron(r, r)).collect();
    AlgLinearMap::fit(alg, n * n, &reps, &images).expect("shapes").0
}

/// `max_{s,t} ‖Δ(λ_u(s)λ_u(t)) − Δλ_u(s)Δλ_u(t)‖` in operator norm for the
/// naive comultiplication of [`twisted_delta`].
pub fn twisted_delta_defect(g: &FiniteGroup, u: &Cocycle) -> Result<f64> {
    if u.group().table() != g.table() {
        return Err(invalid("cocycle belongs to a different group"));
    }
    let delta = twisted_delta(u);
    let reps: Vec<CMatrix> = g.elements().map(|s| u.twisted_regular_rep(s)).collect();
    let mut worst: f64 = 0.0;
    for s in g.elements() {
        let ds = delta.apply(&reps[s]);
        for t in g.elements() {
            let lhs = delta.apply(&(&reps[s] * &reps[t]));
            let rhs = &ds * delta.apply(&reps[t]);
            worst = worst.max(op_norm(&(lhs - rhs)));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{c64, flip_sigma};

    fn groups() -> Vec<FiniteGroup> {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        vec![
            z2.clone(),
            FiniteGroup::cyclic(3).unwrap(),
            FiniteGroup::cyclic(4).unwrap(),
            FiniteGroup::direct_product(&z2, &z2),
            FiniteGroup::symmetric3(),
        ]
    }

    #[test]
    fn trivial_comultiplication() {
        let h = HopfAlgebra::trivial(ConcreteStarAlgebra::full(2));
        assert_eq!(verify_coassociativity(&h), 0.0);
        assert!(verify_simplifiable(&h, Side::Right, 1e-9).holds);
        assert!(!verify_simplifiable(&h, Side::Left, 1e-9).holds);
    }

    #[test]
    fn group_algebra_structure() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let h = HopfAlgebra::group_algebra(&z2);
        let d = h.comultiply(&z2.lambda(1));
        assert!(residual(&d, &kron(&z2.lambda(1), &z2.lambda(1))) < 1e-12);
        assert_eq!(verify_coassociativity(&h), 0.0);
        for g in groups() {
            let h = HopfAlgebra::group_algebra(&g);
            assert_eq!(h.dim(), g.order());
            assert_eq!(h.algebra().is_commutative(1e-12), g.is_abelian());
            let r = verify_hopf_axioms(&h);
            assert!(r.star_hom.worst() < 1e-10 && r.star_hom.injective);
            assert!(r.coassociativity < 1e-10);
            assert!(r.right.holds && r.left.holds);
        }
    }

    #[test]
    fn function_algebra_structure() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let h = HopfAlgebra::function_algebra(&z2);
        let e = |s| matrix_unit(2, s, s);
        let expected = kron(&e(0), &e(1)) + kron(&e(1), &e(0));
        assert!(residual(&h.comultiply(&e(1)), &expected) < 1e-12);
        for g in groups() {
            let h = HopfAlgebra::function_algebra(&g);
            assert_eq!(h.dim(), g.order());
            let r = verify_hopf_axioms(&h);
            assert!(r.star_hom.worst() < 1e-10 && r.star_hom.injective);
            assert!(r.coassociativity < 1e-10);
            assert!(r.right.holds && r.left.holds);
        }
    }

    #[test]
    fn flip_of_w_is_v() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(flip_sigma(&w_g(&z2), 2, 2).unwrap(), v_g(&z2));
    }

    #[test]
    fn mutated_delta_is_detected() {
        let h = HopfAlgebra::group_algebra(&FiniteGroup::cyclic(3).unwrap());
        let bump = matrix_unit(9, 0, 4) * c64(1e-3, 0.0);
        let bad = h.with_delta(h.delta().with_image(1, &h.delta().images()[1] + bump));
        assert!(verify_coassociativity(&bad) >= 1e-4);
        assert!(HopfAlgebra::new(
            "bad",
            bad.algebra().clone(),
            bad.delta().clone(),
            None,
            None,
            1e-9
        )
        .is_err());
    }

    #[test]
    fn twisted_defects() {
        let k = FiniteGroup::direct_product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(2).unwrap());
        let d = twisted_delta_defect(&k, &Cocycle::pauli()).unwrap();
        assert!((d - 2.0).abs() < 1e-9);
        let d = twisted_delta_defect(&k, &Cocycle::trivial(k.clone())).unwrap();
        assert!(d < 1e-12);
        assert!(twisted_delta_defect(&FiniteGroup::cyclic(4).unwrap(), &Cocycle::pauli()).is_err());
        let r = check_star_hom(&twisted_delta(&Cocycle::pauli()));
        assert!(r.multiplicative_residual >= 1.0);
    }
}
