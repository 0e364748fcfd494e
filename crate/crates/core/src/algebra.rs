//! Concrete *-algebras: unital, *-closed subspaces of `M_n`.
//!
//! Such an algebra is its own multiplier algebra, so nondegenerate
//! extensions and strict topologies never show up.

use std::fmt;
use std::sync::{Arc, OnceLock};

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, shape, Error, Result};
use crate::tensor::{
    c64, frobenius, hermitian_part, identity, kron, least_squares, matrix_unit, null_space,
    random_matrix, residual, span_equal, span_rank, zeros, CMatrix, OrthoFrame, C64, ZERO,
};

/// Seed used by the cached Wedderburn decomposition.
pub const WEDDERBURN_SEED: u64 = 0x5eed_1234;

/// Relative rank threshold used when orthonormalizing spanning sets.
const RANK_TOL: f64 = 1e-10;

/// A unital *-closed subspace of `M_n` with a Frobenius-orthonormal basis.
pub struct ConcreteStarAlgebra {
    label: String,
    frame: OrthoFrame,
    wedderburn: OnceLock<std::result::Result<Wedderburn, String>>,
}

impl Clone for ConcreteStarAlgebra {
    fn clone(&self) -> Self {
        Self {
            label: self.label.clone(),
            frame: self.frame.clone(),
            wedderburn: OnceLock::new(),
        }
    }
}

impl fmt::Debug for ConcreteStarAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ConcreteStarAlgebra({}, dim {} in M_{})",
            self.label,
            self.dim(),
            self.ambient()
        )
    }
}

impl ConcreteStarAlgebra {
    /// The span of `spanning`, validated to be a unital *-algebra.
    pub fn from_spanning(label: &str, n: usize, spanning: &[CMatrix], tol: f64) -> Result<Self> {
        if spanning.iter().any(|x| x.shape() != (n, n)) {
            return Err(shape(format!("spanning set must consist of {n}x{n} matrices")));
        }
        let frame = OrthoFrame::from_spanning(n, n, spanning, RANK_TOL);
        let alg = Self::from_frame(label, frame);
        if !alg.contains(&identity(n), tol) {
            return Err(invalid(format!("{label}: identity is not in the span")));
        }
        let report = alg.closure_residuals();
        if report.0 > tol || report.1 > tol {
            return Err(invalid(format!(
                "{label}: span not closed (product residual {:.3e}, adjoint residual {:.3e})",
                report.0, report.1
            )));
        }
        Ok(alg)
    }

    fn from_frame(label: &str, frame: OrthoFrame) -> Self {
        Self {
            label: label.to_string(),
            frame,
            wedderburn: OnceLock::new(),
        }
    }

    /// Smallest unital *-algebra containing `gens`.
    pub fn generated(label: &str, n: usize, gens: &[CMatrix]) -> Result<Self> {
        if gens.iter().any(|x| x.shape() != (n, n)) {
            return Err(shape(format!("generators must be {n}x{n}")));
        }
        let mut frame = OrthoFrame::new(n, n);
        frame.try_push(&identity(n), RANK_TOL);
        for g in gens {
            frame.try_push(g, RANK_TOL);
            frame.try_push(&g.adjoint(), RANK_TOL);
        }
        let full = n * n;
        let mut i = 0;
        while i < frame.len() && frame.len() < full {
            let bi = frame.vectors()[i].clone();
            frame.try_push(&bi.adjoint(), RANK_TOL);
            let mut j = 0;
            while j <= i && frame.len() < full {
                let bj = frame.vectors()[j].clone();
                frame.try_push(&(&bi * &bj), RANK_TOL);
                frame.try_push(&(&bj * &bi), RANK_TOL);
                j += 1;
            }
            i += 1;
        }
        if frame.len() == full {
            return Ok(Self::full(n).relabel(label));
        }
        Ok(Self::from_frame(label, frame))
    }

    pub fn full(n: usize) -> Self {
        let units: Vec<CMatrix> = (0..n)
            .flat_map(|i| (0..n).map(move |j| matrix_unit(n, i, j)))
            .collect();
        Self::from_frame(&format!("M{n}"), OrthoFrame::from_spanning(n, n, &units, RANK_TOL))
    }

    pub fn scalars(n: usize) -> Self {
        Self::from_frame("C", OrthoFrame::from_spanning(n, n, &[identity(n)], RANK_TOL))
    }

    pub fn diagonal(n: usize) -> Self {
        let units: Vec<CMatrix> = (0..n).map(|i| matrix_unit(n, i, i)).collect();
        Self::from_frame(&format!("D{n}"), OrthoFrame::from_spanning(n, n, &units, RANK_TOL))
    }

    /// Minimal tensor product; basis is all `kron(a_i, b_j)`.
    pub fn tensor(a: &Self, b: &Self) -> Self {
        let n = a.ambient() * b.ambient();
        let mut frame = OrthoFrame::new(n, n);
        let mut vectors = Vec::with_capacity(a.dim() * b.dim());
        for x in a.basis() {
            for y in b.basis() {
                vectors.push(kron(x, y));
            }
        }
        // products of orthonormal frames are orthonormal
        for v in &vectors {
            frame.try_push(v, RANK_TOL);
        }
        Self::from_frame(&format!("{}⊗{}", a.label, b.label), frame)
    }

    pub fn relabel(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ambient(&self) -> usize {
        self.frame.shape().0
    }

    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    /// Frobenius-orthonormal basis.
    pub fn basis(&self) -> &[CMatrix] {
        self.frame.vectors()
    }

    pub fn coords(&self, x: &CMatrix) -> Vec<C64> {
        self.frame.coords(x)
    }

    pub fn element(&self, coords: &[C64]) -> CMatrix {
        self.frame.combine(coords)
    }

    pub fn project(&self, x: &CMatrix) -> CMatrix {
        self.element(&self.coords(x))
    }

    /// Distance from `x` to the algebra.
    pub fn distance(&self, x: &CMatrix) -> f64 {
        self.frame.distance(x)
    }

    /// Membership up to `tol · max(1, ‖x‖)`.
    pub fn contains(&self, x: &CMatrix, tol: f64) -> bool {
        self.distance(x) <= tol * frobenius(x).max(1.0)
    }

    /// Worst product and adjoint distances over basis pairs.
    pub fn closure_residuals(&self) -> (f64, f64) {
        let b = self.basis();
        let mut prod: f64 = 0.0;
        let mut adj: f64 = 0.0;
        for x in b {
            adj = adj.max(self.distance(&x.adjoint()));
            for y in b {
                prod = prod.max(self.distance(&(x * y)));
            }
        }
        (prod, adj)
    }

    pub fn same_span(&self, other: &Self, tol: f64) -> bool {
        self.ambient() == other.ambient()
            && self.dim() == other.dim()
            && span_equal(self.basis(), other.basis(), tol)
    }

    pub fn is_commutative(&self, tol: f64) -> bool {
        let b = self.basis();
        b.iter()
            .all(|x| b.iter().all(|y| residual(&(x * y), &(y * x)) <= tol))
    }

    /// Hermitian spanning set: real combinations of it are exactly the
    /// self-adjoint elements.
    pub fn hermitian_spanning(&self) -> Vec<CMatrix> {
        let mut out = Vec::with_capacity(2 * self.dim());
        let i = c64(0.0, 1.0);
        for b in self.basis() {
            out.push(hermitian_part(b));
            out.push(hermitian_part(&(b * -i)));
        }
        out
    }

    fn random_hermitian_element(&self, rng: &mut ChaCha8Rng) -> CMatrix {
        let n = self.ambient();
        let coeffs = random_matrix(1, 2 * self.dim(), rng);
        let mut acc = zeros(n, n);
        for (h, c) in self.hermitian_spanning().iter().zip(coeffs.iter()) {
            acc += h * c64(c.re, 0.0);
        }
        acc
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> CMatrix {
        let coeffs = random_matrix(1, self.dim(), rng);
        self.element(coeffs.as_slice())
    }

    /// Basis of the center, computed as the commutant of two generic elements
    /// inside the algebra and then checked against the whole basis.
    pub fn center(&self, rng: &mut ChaCha8Rng) -> Result<Vec<CMatrix>> {
        let n = self.ambient();
        let d = self.dim();
        let probes = [self.random_element(rng), self.random_element(rng)];
        let mut system = zeros(2 * n * n, d);
        for (l, b) in self.basis().iter().enumerate() {
            for (p, r) in probes.iter().enumerate() {
                let c = b * r - r * b;
                for (k, v) in c.iter().enumerate() {
                    system[(p * n * n + k, l)] = *v;
                }
            }
        }
        let kernel = null_space(&system, 1e-9);
        let center: Vec<CMatrix> = kernel.iter().map(|v| self.element(v.as_slice())).collect();
        for z in &center {
            for b in self.basis() {
                if residual(&(z * b), &(b * z)) > 1e-7 {
                    return Err(Error::NumericalDegeneracy(
                        "generic probes did not generate the algebra".into(),
                    ));
                }
            }
        }
        Ok(center)
    }

    /// Block decomposition with the default seed, computed once.
    pub fn wedderburn(&self) -> Result<&Wedderburn> {
        self.wedderburn
            .get_or_init(|| self.wedderburn_with_seed(WEDDERBURN_SEED).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| Error::NumericalDegeneracy(e.clone()))
    }

    /// Block decomposition driven by `seed`; retries with derived seeds when a
    /// random element turns out to be degenerate.
    pub fn wedderburn_with_seed(&self, seed: u64) -> Result<Wedderburn> {
        let mut last = None;
        for attempt in 0..6u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9)));
            match Wedderburn::compute(self, &mut rng) {
                Ok(w) => return Ok(w),
                Err(e) => last = Some(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }
}

/// One simple summand `M_size`, repeated `multiplicity` times on the
/// ambient space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub size: usize,
    pub multiplicity: usize,
    pub offset: usize,
}

/// `U* A U = ⊕ (I_{m_i} ⊗ M_{n_i})`.
#[derive(Clone, Debug)]
pub struct Wedderburn {
    pub blocks: Vec<Block>,
    pub unitary: CMatrix,
}

/// Groups sorted eigenvalues into clusters whose neighbours differ by at most `gap`.
fn cluster(values: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for idx in order {
        if values[idx] - prev > gap || out.is_empty() {
            out.push(Vec::new());
        }
        out.last_mut().expect("nonempty").push(idx);
        prev = values[idx];
    }
    out
}

fn spectral_subspaces(h: &CMatrix, basis: &CMatrix) -> Vec<CMatrix> {
    let compressed = hermitian_part(&(basis.adjoint() * h * basis));
    let eig = compressed.symmetric_eigen();
    let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    cluster(&vals, 1e-7 * scale)
        .into_iter()
        .map(|idxs| {
            let cols: Vec<DVector<C64>> = idxs.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
            basis * CMatrix::from_columns(&cols)
        })
        .collect()
}

impl Wedderburn {
    fn compute(alg: &ConcreteStarAlgebra, rng: &mut ChaCha8Rng) -> Result<Self> {
        let n = alg.ambient();
        let center = alg.center(rng)?;
        let center_alg = ConcreteStarAlgebra::from_frame(
            "center",
            OrthoFrame::from_spanning(n, n, &center, RANK_TOL),
        );
        let z = center_alg.random_hermitian_element(rng);
        let isotypic = spectral_subspaces(&z, &identity(n));
        if isotypic.len() != center.len() {
            return Err(Error::NumericalDegeneracy(format!(
                "central element separated {} components for a {}-dimensional center",
                isotypic.len(),
                center.len()
            )));
        }
        let h = alg.random_hermitian_element(rng);
        let a = alg.random_element(rng);
        let mut blocks = Vec::new();
        let mut columns: Vec<DVector<C64>> = Vec::with_capacity(n);
        let mut parts: Vec<(usize, usize, Vec<DVector<C64>>)> = Vec::new();
        for q in &isotypic {
            let eigenspaces = spectral_subspaces(&h, q);
            let size = eigenspaces.len();
            let mult = eigenspaces[0].ncols();
            if eigenspaces.iter().any(|e| e.ncols() != mult) {
                return Err(Error::NumericalDegeneracy("uneven eigenspaces in a component".into()));
            }
            // align every eigenspace with the first through a partial isometry of A
            let first = &eigenspaces[0];
            let mut aligned: Vec<CMatrix> = vec![first.clone()];
            for e in &eigenspaces[1..] {
                let mapped = e * (e.adjoint() * &a * first);
                let mut cols = Vec::with_capacity(mult);
                for r in 0..mult {
                    let v = mapped.column(r).into_owned();
                    let norm = v.norm();
                    if norm < 1e-8 {
                        return Err(Error::NumericalDegeneracy("generic element misses a block".into()));
                    }
                    cols.push(v / C64::from(norm));
                }
                aligned.push(CMatrix::from_columns(&cols));
            }
            let mut vecs = Vec::with_capacity(size * mult);
            for r in 0..mult {
                for e in &aligned {
                    vecs.push(e.column(r).into_owned());
                }
            }
            parts.push((size, mult, vecs));
        }
        // smaller blocks first; the sort is stable so ties keep spectral order
        parts.sort_by_key(|p| p.0);
        let mut offset = 0;
        for (size, multiplicity, vecs) in parts {
            blocks.push(Block {
                size,
                multiplicity,
                offset,
            });
            offset += size * multiplicity;
            columns.extend(vecs);
        }
        let unitary = CMatrix::from_columns(&columns);
        let w = Self { blocks, unitary };
        let dim: usize = w.blocks.iter().map(|b| b.size * b.size).sum();
        if dim != alg.dim() {
            return Err(Error::NumericalDegeneracy(format!(
                "block sizes give dimension {dim}, algebra has {}",
                alg.dim()
            )));
        }
        let defect = w.block_defect(alg);
        if defect > 1e-8 {
            return Err(Error::NumericalDegeneracy(format!(
                "conjugated basis is not block diagonal (defect {defect:.3e})"
            )));
        }
        Ok(w)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.size).collect()
    }

    /// The `M_{n_i}` components of `x`, read from the first copy of each block.
    pub fn components(&self, x: &CMatrix) -> Vec<CMatrix> {
        let y = self.unitary.adjoint() * x * &self.unitary;
        self.blocks
            .iter()
            .map(|b| y.view((b.offset, b.offset), (b.size, b.size)).into_owned())
            .collect()
    }

    /// Largest deviation of `U* b U` from `⊕ I_m ⊗ y` over the basis,
    /// together with the unitarity defect of `U`.
    pub fn block_defect(&self, alg: &ConcreteStarAlgebra) -> f64 {
        let n = alg.ambient();
        let mut worst = crate::tensor::unitarity_residual(&self.unitary);
        for b in alg.basis() {
            let y = self.unitary.adjoint() * b * &self.unitary;
            let mut model = zeros(n, n);
            for blk in &self.blocks {
                let comp = y.view((blk.offset, blk.offset), (blk.size, blk.size)).into_owned();
                model
                    .view_mut((blk.offset, blk.offset), (blk.size * blk.multiplicity, blk.size * blk.multiplicity))
                    .copy_from(&kron(&identity(blk.multiplicity), &comp));
            }
            worst = worst.max(residual(&y, &model));
        }
        worst
    }

    /// `sup |tr(F x)|` over the unit ball of the algebra.
    pub fn dual_norm(&self, f: &CMatrix) -> f64 {
        let g = self.unitary.adjoint() * f * &self.unitary;
        self.blocks
            .iter()
            .map(|b| {
                let mut reduced = zeros(b.size, b.size);
                for r in 0..b.multiplicity {
                    let o = b.offset + r * b.size;
                    reduced += g.view((o, o), (b.size, b.size));
                }
                crate::tensor::trace_norm(&reduced)
            })
            .sum()
    }
}

/// A linear map on a concrete algebra, stored by its values on the
/// orthonormal basis.
#[derive(Clone, Debug)]
pub struct AlgLinearMap {
    domain: Arc<ConcreteStarAlgebra>,
    codomain_dim: usize,
    images: Vec<CMatrix>,
}

impl AlgLinearMap {
    pub fn new(domain: Arc<ConcreteStarAlgebra>, codomain_dim: usize, images: Vec<CMatrix>) -> Result<Self> {
        if images.len() != domain.dim() {
            return Err(shape(format!(
                "{} images for a {}-dimensional domain",
                images.len(),
                domain.dim()
            )));
        }
        if images.iter().any(|m| m.shape() != (codomain_dim, codomain_dim)) {
            return Err(shape(format!("images must be {codomain_dim}x{codomain_dim}")));
        }
        Ok(Self {
            domain,
            codomain_dim,
            images,
        })
    }

    /// Evaluates `f` on each basis element. `f` must be linear.
    pub fn from_fn<F>(domain: Arc<ConcreteStarAlgebra>, codomain_dim: usize, f: F) -> Result<Self>
    where
        F: Fn(&CMatrix) -> CMatrix,
    {
        let images = domain.basis().iter().map(f).collect();
        Self::new(domain, codomain_dim, images)
    }

    pub fn identity(domain: Arc<ConcreteStarAlgebra>) -> Self {
        let n = domain.ambient();
        Self::from_fn(domain, n, |x| x.clone()).expect("shapes agree")
    }

    /// Least-squares linear map with `x_k ↦ y_k`. Returns the map and the
    /// residual `max_k ‖φ(x_k) − y_k‖` measuring well-definedness.
    pub fn fit(
        domain: Arc<ConcreteStarAlgebra>,
        codomain_dim: usize,
        xs: &[CMatrix],
        ys: &[CMatrix],
    ) -> Result<(Self, f64)> {
        if xs.len() != ys.len() || xs.is_empty() {
            return Err(shape("fit needs equally many nonempty inputs and outputs"));
        }
        let d = domain.dim();
        let m2 = codomain_dim * codomain_dim;
        let k = xs.len();
        let mut coords = zeros(k, d);
        let mut targets = zeros(k, m2);
        for (row, (x, y)) in xs.iter().zip(ys).enumerate() {
            if y.shape() != (codomain_dim, codomain_dim) {
                return Err(shape("fit target has the wrong shape"));
            }
            for (l, c) in domain.coords(x).into_iter().enumerate() {
                coords[(row, l)] = c;
            }
            for (idx, v) in y.iter().enumerate() {
                targets[(row, idx)] = *v;
            }
        }
        let (sol, _) = least_squares(&coords, &targets);
        let images: Vec<CMatrix> = (0..d)
            .map(|l| CMatrix::from_iterator(codomain_dim, codomain_dim, sol.row(l).iter().copied()))
            .collect();
        let map = Self::new(domain, codomain_dim, images)?;
        let res = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| residual(&map.apply(x), y))
            .fold(0.0, f64::max);
        Ok((map, res))
    }

    pub fn domain(&self) -> &Arc<ConcreteStarAlgebra> {
        &self.domain
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    /// Applies the map to the projection of `x` onto the domain.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        self.apply_coords(&self.domain.coords(x))
    }

    pub fn apply_coords(&self, coords: &[C64]) -> CMatrix {
        let mut acc = zeros(self.codomain_dim, self.codomain_dim);
        for (img, &c) in self.images.iter().zip(coords) {
            if c != ZERO {
                acc += img * c;
            }
        }
        acc
    }

    /// Like [`apply`](Self::apply) but rejects inputs outside the domain.
    pub fn apply_checked(&self, x: &CMatrix, tol: f64) -> Result<CMatrix> {
        if !self.domain.contains(x, tol) {
            return Err(invalid(format!("element lies outside {}", self.domain.label())));
        }
        Ok(self.apply(x))
    }

    /// `g ∘ self` for a linear `g`.
    pub fn then<F>(&self, codomain_dim: usize, g: F) -> Result<Self>
    where
        F: Fn(&CMatrix) -> CMatrix,
    {
        let images = self.images.iter().map(g).collect();
        Self::new(self.domain.clone(), codomain_dim, images)
    }

    /// Copy with one basis image replaced; used by mutation tests.
    pub fn with_image(&self, index: usize, image: CMatrix) -> Self {
        let mut out = self.clone();
        out.images[index] = image;
        out
    }

    /// Largest `‖self(b) − other(b)‖` over the basis of the shared domain.
    pub fn distance(&self, other: &Self) -> f64 {
        self.domain
            .basis()
            .iter()
            .map(|b| residual(&self.apply(b), &other.apply(b)))
            .fold(0.0, f64::max)
    }
}

/// Homomorphism defects of a linear map, maximized over basis pairs.
#[derive(Clone, Debug, Serialize)]
pub struct StarHomReport {
    pub multiplicative_residual: f64,
    pub adjoint_residual: f64,
    pub unital_residual: f64,
    pub rank: usize,
    pub injective: bool,
}

impl StarHomReport {
    pub fn worst(&self) -> f64 {
        self.multiplicative_residual
            .max(self.adjoint_residual)
            .max(self.unital_residual)
    }

    pub fn is_star_hom(&self, tol: f64) -> bool {
        self.worst() <= tol
    }
}

pub fn check_star_hom(phi: &AlgLinearMap) -> StarHomReport {
    let dom = phi.domain();
    let basis = dom.basis();
    let mut mult: f64 = 0.0;
    let mut adj: f64 = 0.0;
    for (i, x) in basis.iter().enumerate() {
        let px = &phi.images[i];
        adj = adj.max(residual(&phi.apply(&x.adjoint()), &px.adjoint()));
        for (j, y) in basis.iter().enumerate() {
            let lhs = phi.apply(&(x * y));
            mult = mult.max(residual(&lhs, &(px * &phi.images[j])));
        }
    }
    let unital = residual(&phi.apply(&identity(dom.ambient())), &identity(phi.codomain_dim));
    let rank = span_rank(&phi.images, 1e-9);
    StarHomReport {
        multiplicative_residual: mult,
        adjoint_residual: adj,
        unital_residual: unital,
        rank,
        injective: rank == dom.dim(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;
    use crate::tensor::{random_unitary, real_matrix};

    fn group_span(g: &FiniteGroup) -> ConcreteStarAlgebra {
        let gens: Vec<CMatrix> = g.elements().map(|s| g.lambda(s)).collect();
        ConcreteStarAlgebra::from_spanning("C[G]", g.order(), &gens, 1e-10).unwrap()
    }

    #[test]
    fn generated_examples() {
        let a = ConcreteStarAlgebra::generated("a", 2, &[identity(2)]).unwrap();
        assert_eq!(a.dim(), 1);
        let nil = real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(ConcreteStarAlgebra::generated("b", 2, &[nil]).unwrap().dim(), 4);
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let c = ConcreteStarAlgebra::generated("c", 3, &[z3.lambda(1)]).unwrap();
        assert_eq!(c.dim(), 3);
        assert!(c.is_commutative(1e-12));
    }

    #[test]
    fn generated_is_idempotent() {
        let s3 = FiniteGroup::symmetric3();
        let a = ConcreteStarAlgebra::generated("a", 6, &[s3.lambda(1), s3.lambda(2)]).unwrap();
        assert_eq!(a.dim(), 6);
        let b = ConcreteStarAlgebra::generated("b", 6, a.basis()).unwrap();
        assert!(a.same_span(&b, 1e-9));
    }

    #[test]
    fn membership() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let a = group_span(&z2);
        assert!(a.basis().iter().all(|b| a.contains(b, 1e-12)));
        assert!(a.contains(&(z2.lambda(0) + z2.lambda(1)), 1e-12));
        let d = ConcreteStarAlgebra::diagonal(2);
        assert!(!d.contains(&matrix_unit(2, 0, 1), 1e-9));
    }

    #[test]
    fn span_validation() {
        assert!(ConcreteStarAlgebra::from_spanning("x", 2, &[matrix_unit(2, 0, 0)], 1e-9).is_err());
        let nil = real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(ConcreteStarAlgebra::from_spanning("x", 2, &[identity(2), nil], 1e-9).is_err());
    }

    #[test]
    fn tensor_products() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let s = ConcreteStarAlgebra::scalars(1);
        let b = group_span(&z2);
        assert_eq!(ConcreteStarAlgebra::tensor(&s, &b).dim(), 2);
        let ab = ConcreteStarAlgebra::tensor(&ConcreteStarAlgebra::diagonal(2), &b);
        assert_eq!(ab.dim(), 4);
        assert_eq!(ab.ambient(), 4);
        let c = ConcreteStarAlgebra::full(2);
        let left = ConcreteStarAlgebra::tensor(&ConcreteStarAlgebra::tensor(&b, &c), &b);
        let right = ConcreteStarAlgebra::tensor(&b, &ConcreteStarAlgebra::tensor(&c, &b));
        assert!(left.same_span(&right, 1e-10));
    }

    #[test]
    fn star_hom_checks() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let a = Arc::new(group_span(&z2));
        let id = AlgLinearMap::identity(a.clone());
        let r = check_star_hom(&id);
        assert!(r.worst() < 1e-12 && r.injective);
        let delta = AlgLinearMap::from_fn(a.clone(), 4, |x| {
            // x = c0·I + c1·λ(g) is read off its first column
            let (c0, c1) = (x[(0, 0)], x[(1, 0)]);
            kron(&z2.lambda(0), &z2.lambda(0)) * c0 + kron(&z2.lambda(1), &z2.lambda(1)) * c1
        })
        .unwrap();
        let r = check_star_hom(&delta);
        assert!(r.worst() < 1e-12 && r.injective, "{r:?}");
        let bad = delta.with_image(0, &delta.images()[0] + matrix_unit(4, 0, 1) * c64(1e-3, 0.0));
        assert!(check_star_hom(&bad).worst() >= 1e-4);
    }

    #[test]
    fn fit_recovers_map() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let a = Arc::new(group_span(&z3));
        let xs: Vec<CMatrix> = z3.elements().map(|s| z3.lambda(s)).collect();
        let ys: Vec<CMatrix> = z3.elements().map(|s| z3.rho(s)).collect();
        let (map, res) = AlgLinearMap::fit(a, 3, &xs, &ys).unwrap();
        assert!(res < 1e-10);
        assert!(residual(&map.apply(&(z3.lambda(1) * z3.lambda(1))), &z3.rho(2)) < 1e-10);
    }

    #[test]
    fn wedderburn_examples() {
        let m2 = ConcreteStarAlgebra::full(2);
        assert_eq!(m2.wedderburn().unwrap().sizes(), vec![2]);
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(group_span(&z2).wedderburn().unwrap().sizes(), vec![1, 1]);
        let s3 = group_span(&FiniteGroup::symmetric3());
        let w = s3.wedderburn().unwrap();
        assert_eq!(w.sizes(), vec![1, 1, 2]);
        assert_eq!(w.blocks[2].multiplicity, 2);
        assert!(w.block_defect(&s3) < 1e-8);
    }

    #[test]
    fn wedderburn_of_conjugated_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = random_unitary(6, &mut rng);
        let g = FiniteGroup::dihedral4();
        // D4 regular rep compressed is 8-dim; use S3 here for a conjugated copy
        let s3 = FiniteGroup::symmetric3();
        let gens: Vec<CMatrix> = s3.elements().map(|s| &u * s3.lambda(s) * u.adjoint()).collect();
        let a = ConcreteStarAlgebra::from_spanning("x", 6, &gens, 1e-9).unwrap();
        let w = a.wedderburn_with_seed(11).unwrap();
        assert_eq!(w.sizes(), vec![1, 1, 2]);
        assert!(w.block_defect(&a) < 1e-8);
        let d4 = group_span(&g).wedderburn().unwrap().sizes();
        assert_eq!(d4, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn dual_norms_on_small_algebras() {
        let d = ConcreteStarAlgebra::diagonal(2);
        let w = d.wedderburn().unwrap();
        assert!((w.dual_norm(&identity(2)) - 2.0).abs() < 1e-10);
        assert!((w.dual_norm(&matrix_unit(2, 1, 1)) - 1.0).abs() < 1e-10);
        let m2 = ConcreteStarAlgebra::full(2);
        // trace on M2 has norm 2, a state has norm 1
        assert!((m2.wedderburn().unwrap().dual_norm(&identity(2)) - 2.0).abs() < 1e-10);
        assert!((m2.wedderburn().unwrap().dual_norm(&matrix_unit(2, 0, 0)) - 1.0).abs() < 1e-10);
    }
}
