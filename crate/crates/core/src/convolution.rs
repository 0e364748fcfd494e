//! The convolution algebra of functionals on `μ_S(S)`.
//!
//! A functional is stored by its values on the orthonormal basis `c_l` of
//! `μ_S(S)`; its trace-pairing matrix is `F = Σ φ_l c_l*`. The product is
//! transported through `Δ`, the ideal `M` is the kernel of
//! `f ↦ (id ⊗ f_S)(W)` on the designated universal corepresentation `W`,
//! and `A(S) = A₀(S)/M`.

use std::sync::Arc;

use nalgebra::DVector;

use crate::algebra::ConcreteStarAlgebra;
use crate::corep::Corepresentation;
use crate::error::{invalid, Error, Result};
use crate::hopf::HopfAlgebra;
use crate::tensor::{kron, least_squares, null_space, residual, trace_pairing, zeros, CMatrix, C64, ZERO};

/// An element of `A₀(S)`.
#[derive(Clone, Debug)]
pub struct ConvFunctional {
    hopf: Arc<HopfAlgebra>,
    coords: DVector<C64>,
}

impl ConvFunctional {
    pub fn coords(&self) -> &DVector<C64> {
        &self.coords
    }

    pub fn hopf(&self) -> &Arc<HopfAlgebra> {
        &self.hopf
    }
}

/// `A₀(S)` together with the data needed for `M`, involution and norms.
#[derive(Debug)]
pub struct ConvolutionAlgebra {
    hopf: Arc<HopfAlgebra>,
    image: Arc<ConcreteStarAlgebra>,
    /// Coordinates of `μ_S(b_i)` in the frame of the image, one column per `b_i`.
    mu_coords: CMatrix,
    /// Solves `φ · mu_coords = v` for functionals given on `S`.
    mu_pinv: CMatrix,
    universal: Corepresentation,
    /// `T e_l = (id ⊗ (e_l)_S)(W)`, flattened as columns.
    slice_matrix: CMatrix,
    kernel: Vec<DVector<C64>>,
}

impl ConvolutionAlgebra {
    pub fn new(hopf: &Arc<HopfAlgebra>) -> Result<Self> {
        let reg = hopf
            .regular()
            .ok_or_else(|| Error::Unsupported(format!("{} has no regular pair", hopf.label())))?;
        let universal = Corepresentation::universal(hopf)?;
        let h = reg.hdim();
        let image = Arc::new(ConcreteStarAlgebra::generated("μ(S)", h, reg.mu.images())?);
        let d_mu = image.dim();
        let d_s = hopf.dim();
        let mut mu_coords = zeros(d_mu, d_s);
        for (i, img) in reg.mu.images().iter().enumerate() {
            for (l, c) in image.coords(img).into_iter().enumerate() {
                mu_coords[(l, i)] = c;
            }
        }
        let mu_pinv = mu_coords
            .clone()
            .pseudo_inverse(1e-10)
            .map_err(|e| Error::NumericalDegeneracy(e.to_string()))?;
        let mut conv = Self {
            hopf: hopf.clone(),
            image,
            mu_coords,
            mu_pinv,
            universal,
            slice_matrix: zeros(0, 0),
            kernel: Vec::new(),
        };
        let k = conv.universal.repdim();
        let mut t = zeros(k * k, d_mu);
        for l in 0..d_mu {
            let e = conv.basis_functional(l);
            let s = conv.slice(&e, &conv.universal);
            for (r, v) in s.iter().enumerate() {
                t[(r, l)] = *v;
            }
        }
        conv.kernel = null_space(&t, 1e-9);
        conv.slice_matrix = t;
        Ok(conv)
    }

    pub fn hopf(&self) -> &Arc<HopfAlgebra> {
        &self.hopf
    }

    /// `μ_S(S)` as a concrete algebra.
    pub fn image(&self) -> &Arc<ConcreteStarAlgebra> {
        &self.image
    }

    /// `dim A₀(S)`.
    pub fn dim_a0(&self) -> usize {
        self.image.dim()
    }

    /// `dim M`.
    pub fn dim_ideal(&self) -> usize {
        self.kernel.len()
    }

    /// `dim A(S) = dim A₀(S) − dim M`.
    pub fn dim_a(&self) -> usize {
        self.dim_a0() - self.dim_ideal()
    }

    /// Basis of `M` as functionals.
    pub fn ideal_basis(&self) -> Vec<ConvFunctional> {
        self.kernel.iter().map(|v| self.wrap(v.clone())).collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.kernel.is_empty()
    }

    fn wrap(&self, coords: DVector<C64>) -> ConvFunctional {
        ConvFunctional {
            hopf: self.hopf.clone(),
            coords,
        }
    }

    fn check(&self, f: &ConvFunctional) -> Result<()> {
        if !Arc::ptr_eq(&f.hopf, &self.hopf) {
            return Err(invalid("functional belongs to a different Hopf algebra"));
        }
        Ok(())
    }

    pub fn zero(&self) -> ConvFunctional {
        self.wrap(DVector::zeros(self.dim_a0()))
    }

    /// The dual basis element: value 1 on `c_l`, 0 on the rest of the frame.
    pub fn basis_functional(&self, l: usize) -> ConvFunctional {
        let mut v = DVector::zeros(self.dim_a0());
        v[l] = C64::from(1.0);
        self.wrap(v)
    }

    pub fn from_coords(&self, coords: &[C64]) -> Result<ConvFunctional> {
        if coords.len() != self.dim_a0() {
            return Err(invalid(format!("expected {} coordinates", self.dim_a0())));
        }
        Ok(self.wrap(DVector::from_column_slice(coords)))
    }

    /// `x ↦ tr(F x)` restricted to `μ_S(S)`.
    pub fn from_matrix(&self, f: &CMatrix) -> ConvFunctional {
        let coords = self.image.basis().iter().map(|c| trace_pairing(f, c)).collect::<Vec<_>>();
        self.wrap(DVector::from_vec(coords))
    }

    /// The functional on `μ_S(S)` taking `values[k]` at `points[k]`.
    pub fn from_values(&self, points: &[CMatrix], values: &[C64], tol: f64) -> Result<ConvFunctional> {
        let d = self.dim_a0();
        let mut a = zeros(points.len(), d);
        for (k, p) in points.iter().enumerate() {
            for (l, c) in self.image.coords(p).into_iter().enumerate() {
                a[(k, l)] = c;
            }
        }
        let b = CMatrix::from_column_slice(values.len(), 1, values);
        let (sol, res) = least_squares(&a, &b);
        if res > tol {
            return Err(invalid(format!("values are inconsistent on μ(S) (residual {res:.3e})")));
        }
        Ok(self.wrap(DVector::from_column_slice(sol.as_slice())))
    }

    /// The functional `f` with `f_S = tr(F_S ·)` on `S`; requires `f_S` to
    /// vanish on `ker μ_S`.
    pub fn from_s_matrix(&self, fs: &CMatrix, tol: f64) -> Result<ConvFunctional> {
        let vals: Vec<C64> = self.hopf.algebra().basis().iter().map(|b| trace_pairing(fs, b)).collect();
        self.from_s_values(&vals, tol)
    }

    fn from_s_values(&self, vals: &[C64], tol: f64) -> Result<ConvFunctional> {
        let row = CMatrix::from_row_slice(1, vals.len(), vals);
        let phi = &row * &self.mu_pinv;
        let back = &phi * &self.mu_coords;
        if residual(&back, &row) > tol * (1.0 + row.norm()) {
            return Err(invalid("functional does not factor through μ_S"));
        }
        Ok(self.wrap(DVector::from_row_slice(phi.as_slice())))
    }

    /// Trace-pairing matrix of `f` on the space of `μ_S(S)`.
    pub fn matrix(&self, f: &ConvFunctional) -> CMatrix {
        let h = self.image.ambient();
        let mut m = zeros(h, h);
        for (c, phi) in self.image.basis().iter().zip(f.coords.iter()) {
            if *phi != ZERO {
                m += c.adjoint() * *phi;
            }
        }
        m
    }

    /// `f(x)` for `x ∈ μ_S(S)`.
    pub fn eval(&self, f: &ConvFunctional, x: &CMatrix) -> C64 {
        self.image
            .coords(x)
            .into_iter()
            .zip(f.coords.iter())
            .map(|(c, phi)| c * phi)
            .sum()
    }

    /// Values `f_S(b_i)` on the basis of `S`.
    pub fn s_values(&self, f: &ConvFunctional) -> Vec<C64> {
        (0..self.hopf.dim())
            .map(|i| (0..self.dim_a0()).map(|l| f.coords[l] * self.mu_coords[(l, i)]).sum())
            .collect()
    }

    /// `f_S = f ∘ μ_S` as a trace-pairing matrix on `M_n`.
    pub fn s_matrix(&self, f: &ConvFunctional) -> CMatrix {
        let n = self.hopf.ambient();
        let mut m = zeros(n, n);
        for (b, v) in self.hopf.algebra().basis().iter().zip(self.s_values(f)) {
            if v != ZERO {
                m += b.adjoint() * v;
            }
        }
        m
    }

    /// `(id ⊗ f_S)(W)`.
    pub fn slice(&self, f: &ConvFunctional, w: &Corepresentation) -> CMatrix {
        w.slice(&self.s_matrix(f))
    }

    /// `(id ⊗ f_S)` of the universal corepresentation.
    pub fn universal_slice(&self, f: &ConvFunctional) -> CMatrix {
        self.slice(f, &self.universal)
    }

    pub fn universal(&self) -> &Corepresentation {
        &self.universal
    }

    /// `(f ⋆ g)(μ_S(x)) = (f_S ⊗ g_S)(Δx)`.
    pub fn star(&self, f: &ConvFunctional, g: &ConvFunctional) -> Result<ConvFunctional> {
        self.check(f)?;
        self.check(g)?;
        let fg = kron(&self.s_matrix(f), &self.s_matrix(g));
        let vals: Vec<C64> = self
            .hopf
            .delta()
            .images()
            .iter()
            .map(|d| trace_pairing(&fg, d))
            .collect();
        self.from_s_values(&vals, 1e-8)
    }

    pub fn add(&self, f: &ConvFunctional, g: &ConvFunctional) -> ConvFunctional {
        self.wrap(&f.coords + &g.coords)
    }

    pub fn scale(&self, f: &ConvFunctional, c: C64) -> ConvFunctional {
        self.wrap(&f.coords * c)
    }

    /// Coordinate distance; for functionals in `A₀(S)`.
    pub fn distance(&self, f: &ConvFunctional, g: &ConvFunctional) -> f64 {
        (&f.coords - &g.coords).norm()
    }

    /// Distance between the classes of `f` and `g` in `A(S)`.
    pub fn quotient_distance(&self, f: &ConvFunctional, g: &ConvFunctional) -> f64 {
        residual(&self.universal_slice(f), &self.universal_slice(g))
    }

    pub fn in_degeneracy_ideal(&self, f: &ConvFunctional, tol: f64) -> bool {
        crate::tensor::frobenius(&self.universal_slice(f)) <= tol
    }

    /// The unique (modulo `M`, minimal-norm) `f*` with
    /// `(id ⊗ f*_S)(W) = ((id ⊗ f_S)(W))*`.
    pub fn involution(&self, f: &ConvFunctional, tol: f64) -> Result<ConvFunctional> {
        self.check(f)?;
        let target = self.universal_slice(f).adjoint();
        let b = CMatrix::from_column_slice(target.len(), 1, target.as_slice());
        let (sol, res) = least_squares(&self.slice_matrix, &b);
        if res > tol * (1.0 + target.norm()) {
            return Err(Error::NotCoinvolutive(format!(
                "no functional reproduces the adjoint slice (residual {res:.3e})"
            )));
        }
        Ok(self.wrap(DVector::from_column_slice(sol.as_slice())))
    }

    /// True iff every basis functional admits an involution.
    pub fn is_coinvolutive(&self, tol: f64) -> bool {
        (0..self.dim_a0()).all(|l| self.involution(&self.basis_functional(l), tol).is_ok())
    }

    /// `sup{|f(μ_S(x))| : ‖x‖ ≤ 1}` via the block decomposition of `μ_S(S)`.
    pub fn norm(&self, f: &ConvFunctional) -> Result<f64> {
        let w = self.image.wedderburn()?;
        Ok(w.dual_norm(&self.matrix(f)))
    }

    /// `(f·x)_S(y) = f_S(xy)`.
    pub fn module_action(&self, f: &ConvFunctional, x: &CMatrix, tol: f64) -> Result<ConvFunctional> {
        self.check(f)?;
        if !self.hopf.algebra().contains(x, tol) {
            return Err(invalid("module action by an element outside S"));
        }
        let fs = self.s_matrix(f);
        let vals: Vec<C64> = self
            .hopf
            .algebra()
            .basis()
            .iter()
            .map(|y| trace_pairing(&fs, &(x * y)))
            .collect();
        self.from_s_values(&vals, 1e-8)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;
    use crate::hopf::HopfKind;
    use crate::tensor::{c64, identity, matrix_unit, random_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn point_mass(conv: &ConvolutionAlgebra, n: usize, s: usize) -> ConvFunctional {
        conv.from_matrix(&matrix_unit(n, s, s))
    }

    fn random_functional(conv: &ConvolutionAlgebra, rng: &mut ChaCha8Rng) -> ConvFunctional {
        let v = random_matrix(conv.dim_a0(), 1, rng);
        conv.from_coords(v.as_slice()).unwrap()
    }

    #[test]
    fn point_masses_multiply_like_the_group() {
        let g = FiniteGroup::symmetric3();
        let h = HopfAlgebra::function_algebra(&g);
        let conv = ConvolutionAlgebra::new(&h).unwrap();
        for s in g.elements() {
            for t in g.elements() {
                let p = conv.star(&point_mass(&conv, 6, s), &point_mass(&conv, 6, t)).unwrap();
                assert!(conv.distance(&p, &point_mass(&conv, 6, g.mul(s, t))) < 1e-12);
            }
            let inv = conv.involution(&point_mass(&conv, 6, s), 1e-9).unwrap();
            assert!(conv.distance(&inv, &point_mass(&conv, 6, g.inv(s))) < 1e-10);
        }
    }

    #[test]
    fn group_algebra_product_is_pointwise() {
        let g = FiniteGroup::symmetric3();
        let h = HopfAlgebra::group_algebra(&g);
        let conv = ConvolutionAlgebra::new(&h).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let points: Vec<CMatrix> = g.elements().map(|s| g.lambda(s)).collect();
        let a = random_matrix(6, 1, &mut rng);
        let b = random_matrix(6, 1, &mut rng);
        let f = conv.from_values(&points, a.as_slice(), 1e-10).unwrap();
        let gg = conv.from_values(&points, b.as_slice(), 1e-10).unwrap();
        let p = conv.star(&f, &gg).unwrap();
        let fs = conv.involution(&f, 1e-9).unwrap();
        for s in g.elements() {
            assert!((conv.eval(&p, &points[s]) - a[s] * b[s]).norm() < 1e-12);
            assert!((conv.eval(&fs, &points[s]) - a[s].conj()).norm() < 1e-10);
        }
    }

    #[test]
    fn algebra_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = FiniteGroup::symmetric3();
        for h in [HopfAlgebra::group_algebra(&g), HopfAlgebra::function_algebra(&g)] {
            let conv = ConvolutionAlgebra::new(&h).unwrap();
            assert!(conv.is_nondegenerate());
            assert!(conv.is_coinvolutive(1e-9));
            for _ in 0..5 {
                let (f, gg, k) = (
                    random_functional(&conv, &mut rng),
                    random_functional(&conv, &mut rng),
                    random_functional(&conv, &mut rng),
                );
                let l = conv.star(&conv.star(&f, &gg).unwrap(), &k).unwrap();
                let r = conv.star(&f, &conv.star(&gg, &k).unwrap()).unwrap();
                assert!(conv.distance(&l, &r) < 1e-10);
                let fss = conv.involution(&conv.involution(&f, 1e-9).unwrap(), 1e-9).unwrap();
                assert!(conv.distance(&fss, &f) < 1e-10);
                let lhs = conv.involution(&conv.star(&f, &gg).unwrap(), 1e-9).unwrap();
                let rhs = conv
                    .star(&conv.involution(&gg, 1e-9).unwrap(), &conv.involution(&f, 1e-9).unwrap())
                    .unwrap();
                assert!(conv.distance(&lhs, &rhs) < 1e-10);
                // multiplicativity of slices
                let w = conv.universal();
                let prod = conv.slice(&f, w) * conv.slice(&gg, w);
                assert!(residual(&conv.slice(&conv.star(&f, &gg).unwrap(), w), &prod) < 1e-10);
                let nf = conv.norm(&f).unwrap();
                let ng = conv.norm(&gg).unwrap();
                assert!(conv.norm(&conv.star(&f, &gg).unwrap()).unwrap() <= nf * ng + 1e-10);
            }
        }
    }

    #[test]
    fn trivial_hopf_is_degenerate() {
        let h = HopfAlgebra::trivial(ConcreteStarAlgebra::full(2));
        let conv = ConvolutionAlgebra::new(&h).unwrap();
        assert!(!conv.is_nondegenerate());
        assert_eq!(conv.dim_a0(), 4);
        assert_eq!(conv.dim_a(), 1);
        assert!(conv.is_coinvolutive(1e-9));
        let f = conv.from_matrix(&(matrix_unit(2, 0, 0) - matrix_unit(2, 1, 1)));
        assert!(conv.in_degeneracy_ideal(&f, 1e-12));
        assert!(conv.in_degeneracy_ideal(&conv.zero(), 0.0));
        let g = conv.from_matrix(&matrix_unit(2, 0, 1));
        // M is a two-sided ideal
        for m in conv.ideal_basis() {
            assert!(conv.in_degeneracy_ideal(&conv.star(&m, &g).unwrap(), 1e-10));
            assert!(conv.in_degeneracy_ideal(&conv.star(&g, &m).unwrap(), 1e-10));
        }
    }

    #[test]
    fn function_algebra_has_no_ideal() {
        let h = HopfAlgebra::function_algebra(&FiniteGroup::cyclic(2).unwrap());
        let conv = ConvolutionAlgebra::new(&h).unwrap();
        assert!(!conv.in_degeneracy_ideal(&point_mass(&conv, 2, 1), 1e-9));
        assert_eq!(conv.dim_ideal(), 0);
    }

    #[test]
    fn norms() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let conv = ConvolutionAlgebra::new(&HopfAlgebra::function_algebra(&g)).unwrap();
        assert!((conv.norm(&point_mass(&conv, 2, 1)).unwrap() - 1.0).abs() < 1e-10);
        let sum = conv.from_matrix(&identity(2));
        assert!((conv.norm(&sum).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn module_action_laws() {
        let g = FiniteGroup::cyclic(3).unwrap();
        let h = HopfAlgebra::function_algebra(&g);
        let conv = ConvolutionAlgebra::new(&h).unwrap();
        for s in g.elements() {
            for t in g.elements() {
                let fx = conv.module_action(&point_mass(&conv, 3, s), &matrix_unit(3, t, t), 1e-9).unwrap();
                let expected = if s == t { point_mass(&conv, 3, s) } else { conv.zero() };
                assert!(conv.distance(&fx, &expected) < 1e-12);
            }
        }
        let s3 = HopfAlgebra::group_algebra(&FiniteGroup::symmetric3());
        let conv = ConvolutionAlgebra::new(&s3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = random_functional(&conv, &mut rng);
        let x = s3.algebra().element(random_matrix(6, 1, &mut rng).as_slice());
        let y = s3.algebra().element(random_matrix(6, 1, &mut rng).as_slice());
        let one = conv.module_action(&f, &identity(6), 1e-9).unwrap();
        assert!(conv.distance(&one, &f) < 1e-12);
        let lhs = conv.module_action(&conv.module_action(&f, &x, 1e-9).unwrap(), &y, 1e-9).unwrap();
        let rhs = conv.module_action(&f, &(&x * &y), 1e-9).unwrap();
        assert!(conv.distance(&lhs, &rhs) < 1e-10);
        let nfx = conv.norm(&conv.module_action(&f, &x, 1e-9).unwrap()).unwrap();
        assert!(nfx <= conv.norm(&f).unwrap() * crate::tensor::op_norm(&x) + 1e-10);
        assert!(conv.module_action(&f, &matrix_unit(6, 0, 1), 1e-9).is_err());
    }

    #[test]
    fn non_star_closed_slices_are_not_coinvolutive() {
        let g = FiniteGroup::cyclic(3).unwrap();
        let base = HopfAlgebra::function_algebra(&g);
        let w3 = c64(-0.5, 3f64.sqrt() / 2.0);
        let u = crate::tensor::diag(&[c64(1.0, 0.0), w3, w3 * w3]);
        let e = |s| matrix_unit(3, s, s);
        let w = kron(&identity(3), &e(0)) + kron(&u, &e(1)) + kron(&u, &e(2));
        let reg = base.regular().cloned();
        let custom = Arc::new(
            HopfAlgebra::new_unchecked(
                "synthetic",
                HopfKind::Custom,
                base.algebra().clone(),
                base.delta().clone(),
                reg,
                Some((3, w)),
            )
            .unwrap(),
        );
        let conv = ConvolutionAlgebra::new(&custom).unwrap();
        assert!(!conv.is_coinvolutive(1e-9));
        let err = conv.involution(&point_mass(&conv, 3, 1), 1e-9).unwrap_err();
        assert!(matches!(err, Error::NotCoinvolutive(_)));
        // the structures are required
        let bare = Arc::new(base.with_structures(None, None).unwrap());
        assert!(ConvolutionAlgebra::new(&bare).is_err());
    }
}
