//! Dense complex-matrix calculus.
//!
//! Every operator in the crate is a dense `CMatrix`. Tensor products are
//! Kronecker products with the left factor as the slow index, so an element
//! of `M_a ⊗ M_b` is an `(a·b) × (a·b)` matrix whose row index is `i·b + j`.
//! Leg numbers in [`leg_embed`] are 1-based to match `X₁₃` notation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{shape, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Default absolute tolerance for residual comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

/// The matrix unit `E_ij` in `M_n`.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = zeros(n, n);
    m[(i, j)] = ONE;
    m
}

/// Builds a matrix from real row slices.
pub fn real_matrix(rows: &[&[f64]]) -> CMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    CMatrix::from_fn(r, c, |i, j| c64(rows[i][j], 0.0))
}

pub fn diag(entries: &[C64]) -> CMatrix {
    let n = entries.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
}

pub fn frobenius(x: &CMatrix) -> f64 {
    x.norm()
}

/// Frobenius distance; infinite when the shapes differ.
pub fn residual(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Frobenius inner product `tr(a* b)`.
pub fn inner(a: &CMatrix, b: &CMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `tr(f · x)` without forming the product.
pub fn trace_pairing(f: &CMatrix, x: &CMatrix) -> C64 {
    let n = f.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..f.ncols() {
            acc += f[(i, j)] * x[(j, i)];
        }
    }
    acc
}

pub fn is_square(x: &CMatrix) -> bool {
    x.nrows() == x.ncols()
}

pub fn kron(x: &CMatrix, y: &CMatrix) -> CMatrix {
    x.kronecker(y)
}

pub fn kron_all(factors: &[&CMatrix]) -> CMatrix {
    let mut acc = identity(1);
    for f in factors {
        acc = kron(&acc, f);
    }
    acc
}

/// `‖X X* − I‖ + ‖X* X − I‖` style unitarity defect (max of the two).
pub fn unitarity_residual(x: &CMatrix) -> f64 {
    if !is_square(x) {
        return f64::INFINITY;
    }
    let id = identity(x.nrows());
    let a = residual(&(x * x.adjoint()), &id);
    let b = residual(&(x.adjoint() * x), &id);
    a.max(b)
}

/// Dimensions of the tensor factors of an ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorShape(Vec<usize>);

impl TensorShape {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(shape("tensor factors must be positive and non-empty"));
        }
        Ok(Self(factors))
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.iter().product()
    }

    fn digits(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.0.len()];
        for (slot, &d) in out.iter_mut().zip(&self.0).rev() {
            *slot = idx % d;
            idx /= d;
        }
        out
    }

    fn index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.0)
            .fold(0, |acc, (&x, &d)| acc * d + x)
    }
}

/// `X` acting on the listed (1-based) legs, identity elsewhere.
///
/// The order of `legs` is the order of `X`'s own tensor factors, so
/// `leg_embed(V, (2,2,2), [1,3])` is `V₁₃`.
pub fn leg_embed(x: &CMatrix, shape: &TensorShape, legs: &[usize]) -> Result<CMatrix> {
    let factors = shape.factors();
    if legs.is_empty() {
        return Err(self::shape("leg list is empty"));
    }
    let mut seen = vec![false; factors.len()];
    for &l in legs {
        if l == 0 || l > factors.len() || seen[l - 1] {
            return Err(self::shape(format!(
                "leg {l} invalid for a {}-factor shape",
                factors.len()
            )));
        }
        seen[l - 1] = true;
    }
    let sub = TensorShape(legs.iter().map(|&l| factors[l - 1]).collect());
    let sub_dim = sub.dim();
    if x.nrows() != sub_dim || x.ncols() != sub_dim {
        return Err(self::shape(format!(
            "operator is {}x{}, selected legs have dimension {sub_dim}",
            x.nrows(),
            x.ncols()
        )));
    }
    let n = shape.dim();
    let mut out = zeros(n, n);
    for row in 0..n {
        let rd = shape.digits(row);
        let xr = sub.index(&legs.iter().map(|&l| rd[l - 1]).collect::<Vec<_>>());
        let mut cd = rd.clone();
        for xc in 0..sub_dim {
            let sd = sub.digits(xc);
            for (k, &l) in legs.iter().enumerate() {
                cd[l - 1] = sd[k];
            }
            let v = x[(xr, xc)];
            if v != ZERO {
                out[(row, shape.index(&cd))] = v;
            }
        }
    }
    Ok(out)
}

fn check_bipartite(x: &CMatrix, a: usize, b: usize) -> Result<()> {
    if x.nrows() != a * b || x.ncols() != a * b {
        return Err(shape(format!(
            "expected {0}x{0} operator on {a}⊗{b}, got {1}x{2}",
            a * b,
            x.nrows(),
            x.ncols()
        )));
    }
    Ok(())
}

/// The flip `Σ: M_a ⊗ M_b → M_b ⊗ M_a`.
pub fn flip_sigma(x: &CMatrix, a: usize, b: usize) -> Result<CMatrix> {
    check_bipartite(x, a, b)?;
    let n = a * b;
    Ok(CMatrix::from_fn(n, n, |r, c| {
        let (j, i) = (r / a, r % a);
        let (l, k) = (c / a, c % a);
        x[(i * b + j, k * b + l)]
    }))
}

/// The permutation matrix implementing `e_i ⊗ f_j ↦ f_j ⊗ e_i`.
pub fn swap_matrix(a: usize, b: usize) -> CMatrix {
    let n = a * b;
    let mut p = zeros(n, n);
    for i in 0..a {
        for j in 0..b {
            p[(j * a + i, i * b + j)] = ONE;
        }
    }
    p
}

/// A linear functional `X ↦ tr(F·X)` on `M_dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional {
    rep: CMatrix,
}

impl Functional {
    pub fn new(rep: CMatrix) -> Result<Self> {
        if !is_square(&rep) {
            return Err(shape("functional representing matrix must be square"));
        }
        Ok(Self { rep })
    }

    /// `X ↦ X_ij`.
    pub fn entry(dim: usize, i: usize, j: usize) -> Self {
        Self {
            rep: matrix_unit(dim, j, i),
        }
    }

    pub fn dim(&self) -> usize {
        self.rep.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rep
    }

    pub fn eval(&self, x: &CMatrix) -> C64 {
        trace_pairing(&self.rep, x)
    }

    /// All `dim²` entry functionals; they span the dual of `M_dim`.
    pub fn entry_basis(dim: usize) -> Vec<Self> {
        (0..dim)
            .flat_map(|i| (0..dim).map(move |j| Self::entry(dim, i, j)))
            .collect()
    }
}

/// `(id ⊗ f)(X)` for `X ∈ M_a ⊗ M_b`.
pub fn slice_right(x: &CMatrix, f: &Functional, a: usize, b: usize) -> Result<CMatrix> {
    check_bipartite(x, a, b)?;
    if f.dim() != b {
        return Err(shape(format!("functional on M_{} sliced against M_{b}", f.dim())));
    }
    Ok(slice_right_raw(x, f.matrix(), a, b))
}

pub(crate) fn slice_right_raw(x: &CMatrix, f: &CMatrix, a: usize, b: usize) -> CMatrix {
    CMatrix::from_fn(a, a, |i, k| {
        let mut acc = ZERO;
        for j in 0..b {
            for l in 0..b {
                let fv = f[(l, j)];
                if fv != ZERO {
                    acc += x[(i * b + j, k * b + l)] * fv;
                }
            }
        }
        acc
    })
}

/// `(f ⊗ id)(X)` for `X ∈ M_a ⊗ M_b`.
pub fn slice_left(x: &CMatrix, f: &Functional, a: usize, b: usize) -> Result<CMatrix> {
    check_bipartite(x, a, b)?;
    if f.dim() != a {
        return Err(shape(format!("functional on M_{} sliced against M_{a}", f.dim())));
    }
    Ok(slice_left_raw(x, f.matrix(), a, b))
}

pub(crate) fn slice_left_raw(x: &CMatrix, f: &CMatrix, a: usize, b: usize) -> CMatrix {
    CMatrix::from_fn(b, b, |j, l| {
        let mut acc = ZERO;
        for i in 0..a {
            for k in 0..a {
                let fv = f[(k, i)];
                if fv != ZERO {
                    acc += x[(i * b + j, k * b + l)] * fv;
                }
            }
        }
        acc
    })
}

/// Largest singular value.
pub fn op_norm(x: &CMatrix) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    x.clone().singular_values().max()
}

/// Sum of singular values.
pub fn trace_norm(x: &CMatrix) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    x.clone().singular_values().sum()
}

/// Blocks `X_ij ∈ M_b` with `X = Σ E_ij ⊗ X_ij`, indexed `i·a + j`.
pub fn left_blocks(x: &CMatrix, a: usize, b: usize) -> Vec<CMatrix> {
    debug_assert_eq!(x.nrows(), a * b);
    let mut out = Vec::with_capacity(a * a);
    for i in 0..a {
        for j in 0..a {
            out.push(x.view((i * b, j * b), (b, b)).into_owned());
        }
    }
    out
}

/// Blocks `Z_pq ∈ M_a` with `X = Σ Z_pq ⊗ E_pq`, indexed `p·b + q`.
pub fn right_blocks(x: &CMatrix, a: usize, b: usize) -> Vec<CMatrix> {
    debug_assert_eq!(x.nrows(), a * b);
    let mut out = Vec::with_capacity(b * b);
    for p in 0..b {
        for q in 0..b {
            out.push(CMatrix::from_fn(a, a, |i, k| x[(i * b + p, k * b + q)]));
        }
    }
    out
}

/// Inverse of [`left_blocks`]; blocks may have any common square size.
pub fn from_left_blocks(blocks: &[CMatrix], a: usize) -> CMatrix {
    let b = blocks[0].nrows();
    let mut out = zeros(a * b, a * b);
    for i in 0..a {
        for j in 0..a {
            out.view_mut((i * b, j * b), (b, b))
                .copy_from(&blocks[i * a + j]);
        }
    }
    out
}

/// Inverse of [`right_blocks`]; blocks may have any common square size.
pub fn from_right_blocks(blocks: &[CMatrix], b: usize) -> CMatrix {
    let a = blocks[0].nrows();
    let n = a * b;
    let mut out = zeros(n, n);
    for p in 0..b {
        for q in 0..b {
            let z = &blocks[p * b + q];
            for i in 0..a {
                for k in 0..a {
                    out[(i * b + p, k * b + q)] = z[(i, k)];
                }
            }
        }
    }
    out
}

/// `(id ⊗ φ)(X)` for a linear `φ` on the right leg.
pub fn map_right_leg<F>(x: &CMatrix, a: usize, b: usize, phi: F) -> CMatrix
where
    F: Fn(&CMatrix) -> CMatrix,
{
    let blocks: Vec<CMatrix> = left_blocks(x, a, b).iter().map(phi).collect();
    from_left_blocks(&blocks, a)
}

/// `(φ ⊗ id)(X)` for a linear `φ` on the left leg.
pub fn map_left_leg<F>(x: &CMatrix, a: usize, b: usize, phi: F) -> CMatrix
where
    F: Fn(&CMatrix) -> CMatrix,
{
    let blocks: Vec<CMatrix> = right_blocks(x, a, b).iter().map(phi).collect();
    from_right_blocks(&blocks, b)
}

/// `V₁₂V₁₃` for `V ∈ M_k ⊗ M_n`, computed blockwise.
pub fn leg12_leg13(v: &CMatrix, k: usize, n: usize) -> CMatrix {
    let blocks = left_blocks(v, k, n);
    let mut out = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let mut acc = zeros(n * n, n * n);
            for l in 0..k {
                acc += kron(&blocks[i * k + l], &blocks[l * k + j]);
            }
            out.push(acc);
        }
    }
    from_left_blocks(&out, k)
}

/// `w₁₃w₂₃` for `w ∈ M_k ⊗ M_n`, computed blockwise.
pub fn leg13_leg23(w: &CMatrix, k: usize, n: usize) -> CMatrix {
    let z = right_blocks(w, k, n);
    let mut out = Vec::with_capacity(n * n);
    for p in 0..n {
        for s in 0..n {
            let mut acc = zeros(k * k, k * k);
            for q in 0..n {
                acc += kron(&z[p * n + q], &z[q * n + s]);
            }
            out.push(acc);
        }
    }
    from_right_blocks(&out, n)
}

/// `(id ⊗ id ⊗ f)(w₁₃w₂₃)` without materializing the triple tensor.
pub fn leg13_leg23_slice(w: &CMatrix, f: &CMatrix, k: usize, n: usize) -> CMatrix {
    let z = right_blocks(w, k, n);
    let mut acc = zeros(k * k, k * k);
    for p in 0..n {
        for s in 0..n {
            let fv = f[(s, p)];
            if fv == ZERO {
                continue;
            }
            for q in 0..n {
                acc += kron(&z[p * n + q], &z[q * n + s]) * fv;
            }
        }
    }
    acc
}

/// An orthonormal frame (Frobenius inner product) of equally shaped matrices.
#[derive(Clone, Debug)]
pub struct OrthoFrame {
    rows: usize,
    cols: usize,
    vectors: Vec<CMatrix>,
}

impl OrthoFrame {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            vectors: Vec::new(),
        }
    }

    /// Orthonormalizes `items`, dropping vectors already in the span.
    /// `tol` is relative to each vector's norm.
    pub fn from_spanning<'a, I>(rows: usize, cols: usize, items: I, tol: f64) -> Self
    where
        I: IntoIterator<Item = &'a CMatrix>,
    {
        let mut frame = Self::new(rows, cols);
        for x in items {
            frame.try_push(x, tol);
        }
        frame
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[CMatrix] {
        &self.vectors
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn coords(&self, x: &CMatrix) -> Vec<C64> {
        self.vectors.iter().map(|b| inner(b, x)).collect()
    }

    pub fn combine(&self, coords: &[C64]) -> CMatrix {
        let mut acc = zeros(self.rows, self.cols);
        for (b, &c) in self.vectors.iter().zip(coords) {
            if c != ZERO {
                acc += b * c;
            }
        }
        acc
    }

    /// Component of `x` orthogonal to the frame.
    pub fn orthogonal_part(&self, x: &CMatrix) -> CMatrix {
        let mut r = x.clone();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in &self.vectors {
                let c = inner(b, &r);
                if c != ZERO {
                    r -= b * c;
                }
            }
        }
        r
    }

    pub fn distance(&self, x: &CMatrix) -> f64 {
        if x.shape() != (self.rows, self.cols) {
            return f64::INFINITY;
        }
        frobenius(&self.orthogonal_part(x))
    }

    /// Adds `x` if it leaves the span by more than `tol·‖x‖`.
    pub fn try_push(&mut self, x: &CMatrix, tol: f64) -> bool {
        assert_eq!(x.shape(), (self.rows, self.cols), "frame shape mismatch");
        let norm = frobenius(x);
        if norm == 0.0 {
            return false;
        }
        let r = self.orthogonal_part(x);
        let rn = frobenius(&r);
        if rn <= tol * norm.max(1.0) {
            return false;
        }
        self.vectors.push(r / C64::from(rn));
        true
    }
}

/// True iff the two spans coincide: each nonzero vector of one side, normalized,
/// lies within `tol` of the other side's span.
pub fn span_equal(b1: &[CMatrix], b2: &[CMatrix], tol: f64) -> bool {
    let shape = match b1.first().or(b2.first()) {
        Some(m) => m.shape(),
        None => return true,
    };
    if b1.iter().chain(b2).any(|m| m.shape() != shape) {
        return false;
    }
    let rank_tol = 1e-10;
    let f1 = OrthoFrame::from_spanning(shape.0, shape.1, b1, rank_tol);
    let f2 = OrthoFrame::from_spanning(shape.0, shape.1, b2, rank_tol);
    let inside = |frame: &OrthoFrame, vs: &[CMatrix]| {
        vs.iter().all(|v| {
            let n = frobenius(v);
            n <= tol || frame.distance(&(v / C64::from(n))) <= tol
        })
    };
    inside(&f1, b2) && inside(&f2, b1)
}

/// Numerical rank of a list of equally shaped matrices.
pub fn span_rank(vs: &[CMatrix], tol: f64) -> usize {
    match vs.first() {
        Some(m) => OrthoFrame::from_spanning(m.nrows(), m.ncols(), vs, tol).len(),
        None => 0,
    }
}

/// Orthonormal basis of the null space of `a` (as column vectors).
pub fn null_space(a: &CMatrix, tol: f64) -> Vec<nalgebra::DVector<C64>> {
    let (m, n) = a.shape();
    if n == 0 {
        return Vec::new();
    }
    let padded = if m < n {
        let mut p = zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let scale = svd.singular_values.max().max(1.0);
    let mut out = Vec::new();
    for (idx, s) in svd.singular_values.iter().enumerate() {
        if *s <= tol * scale {
            out.push(vt.row(idx).adjoint());
        }
    }
    out
}

/// Minimum-norm least-squares solution of `a · x = b` and its residual
/// `‖a·x − b‖` (Frobenius, over all right-hand sides).
pub fn least_squares(a: &CMatrix, b: &CMatrix) -> (CMatrix, f64) {
    let svd = a.clone().svd(true, true);
    let scale = svd.singular_values.max().max(1e-300);
    let x = svd
        .solve(b, scale * 1e-11)
        .expect("svd computed with both factors");
    let res = residual(&(a * &x), b);
    (x, res)
}

/// Gaussian complex matrix with unit-variance entries.
pub fn random_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    use rand_distr_like::standard_normal;
    CMatrix::from_fn(rows, cols, |_, _| {
        c64(standard_normal(rng), standard_normal(rng)) * (0.5f64).sqrt()
    })
}

/// Haar-ish random unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let g = random_matrix(n, n, rng);
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases: Vec<C64> = (0..n)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                ONE
            }
        })
        .collect();
    q * diag(&phases)
}

/// Random Hermitian matrix.
pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let g = random_matrix(n, n, rng);
    (&g + g.adjoint()) * c64(0.5, 0.0)
}

mod rand_distr_like {
    use rand::Rng;

    /// Box–Muller standard normal sample.
    pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

/// Hermitian part `(x + x*)/2`.
pub fn hermitian_part(x: &CMatrix) -> CMatrix {
    (x + x.adjoint()) * c64(0.5, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    fn pauli_x() -> CMatrix {
        real_matrix(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    #[test]
    fn kron_of_identities_is_identity() {
        assert_eq!(kron(&identity(2), &identity(3)), identity(6));
    }

    #[test]
    fn kron_swaps_blocks() {
        let k = kron(&pauli_x(), &identity(2));
        let expected = real_matrix(&[
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
        ]);
        assert_eq!(k, expected);
    }

    #[test]
    fn kron_mixed_product() {
        let mut r = rng();
        for _ in 0..100 {
            let (x, xp, y, yp) = (
                random_matrix(2, 2, &mut r),
                random_matrix(2, 2, &mut r),
                random_matrix(2, 2, &mut r),
                random_matrix(2, 2, &mut r),
            );
            let lhs = kron(&x, &y) * kron(&xp, &yp);
            // brute-force entrywise product of the two Kronecker expansions
            let xx = &x * &xp;
            let yy = &y * &yp;
            let rhs = CMatrix::from_fn(4, 4, |r, c| xx[(r / 2, c / 2)] * yy[(r % 2, c % 2)]);
            assert!(residual(&lhs, &rhs) < 1e-12);
        }
    }

    #[test]
    fn leg_embed_contiguous_is_kron() {
        let mut r = rng();
        let v = random_matrix(4, 4, &mut r);
        let s = TensorShape::new(vec![2, 2, 2]).unwrap();
        let e = leg_embed(&v, &s, &[1, 2]).unwrap();
        assert!(residual(&e, &kron(&v, &identity(2))) < 1e-14);
    }

    #[test]
    fn leg_embed_13_is_swap_conjugate() {
        let mut r = rng();
        let v = random_matrix(4, 4, &mut r);
        let s = TensorShape::new(vec![2, 2, 2]).unwrap();
        let e = leg_embed(&v, &s, &[1, 3]).unwrap();
        // swap of factors 2 and 3
        let p = kron(&identity(2), &swap_matrix(2, 2));
        let oracle = &p * kron(&v, &identity(2)) * p.adjoint();
        assert!(residual(&e, &oracle) < 1e-14);
    }

    #[test]
    fn leg_embed_identity_and_errors() {
        let s = TensorShape::new(vec![2, 3, 2]).unwrap();
        let e = leg_embed(&identity(4), &s, &[3, 1]).unwrap();
        assert_eq!(e, identity(12));
        assert!(leg_embed(&identity(4), &s, &[1, 2]).is_err());
        assert!(leg_embed(&identity(4), &s, &[1, 4]).is_err());
        assert!(TensorShape::new(vec![2, 0]).is_err());
    }

    #[test]
    fn disjoint_legs_commute() {
        let mut r = rng();
        let s = TensorShape::new(vec![2, 2, 3]).unwrap();
        let x = leg_embed(&random_matrix(4, 4, &mut r), &s, &[1, 2]).unwrap();
        let y = leg_embed(&random_matrix(3, 3, &mut r), &s, &[3]).unwrap();
        assert!(residual(&(&x * &y), &(&y * &x)) < 1e-12);
    }

    #[test]
    fn flip_on_elementary_tensors() {
        let mut r = rng();
        let a = random_matrix(2, 2, &mut r);
        let b = random_matrix(3, 3, &mut r);
        let f = flip_sigma(&kron(&a, &b), 2, 3).unwrap();
        assert!(residual(&f, &kron(&b, &a)) < 1e-14);
        let back = flip_sigma(&f, 3, 2).unwrap();
        assert_eq!(back, kron(&a, &b));
        assert!(flip_sigma(&a, 3, 2).is_err());
    }

    #[test]
    fn flip_matches_swap_conjugation() {
        let mut r = rng();
        let x = random_matrix(6, 6, &mut r);
        let p = swap_matrix(2, 3);
        let oracle = &p * &x * p.adjoint();
        assert!(residual(&flip_sigma(&x, 2, 3).unwrap(), &oracle) < 1e-14);
    }

    #[test]
    fn slice_on_elementary_tensors() {
        let mut r = rng();
        let a = random_matrix(2, 2, &mut r);
        let b = random_matrix(3, 3, &mut r);
        let f = Functional::new(random_matrix(3, 3, &mut r)).unwrap();
        let s = slice_right(&kron(&a, &b), &f, 2, 3).unwrap();
        assert!(residual(&s, &(&a * f.eval(&b))) < 1e-12);

        let g = Functional::new(random_matrix(2, 2, &mut r)).unwrap();
        let s = slice_left(&kron(&a, &b), &g, 2, 3).unwrap();
        assert!(residual(&s, &(&b * g.eval(&a))) < 1e-12);

        let s = slice_right(&identity(6), &f, 2, 3).unwrap();
        assert!(residual(&s, &(identity(2) * f.eval(&identity(3)))) < 1e-12);
    }

    #[test]
    fn slice_two_routes_agree() {
        // block contraction vs trace formula
        let mut r = rng();
        let x = random_matrix(6, 6, &mut r);
        let f = Functional::new(random_matrix(3, 3, &mut r)).unwrap();
        let s = slice_right(&x, &f, 2, 3).unwrap();
        let blocks = left_blocks(&x, 2, 3);
        let via_blocks = CMatrix::from_fn(2, 2, |i, j| f.eval(&blocks[i * 2 + j]));
        assert!(residual(&s, &via_blocks) < 1e-12);
    }

    #[test]
    fn slices_separate_points() {
        let mut r = rng();
        let x = random_matrix(6, 6, &mut r);
        let any_nonzero = Functional::entry_basis(3)
            .iter()
            .any(|f| frobenius(&slice_right(&x, f, 2, 3).unwrap()) > 1e-6);
        assert!(any_nonzero);
        let all_zero = Functional::entry_basis(3)
            .iter()
            .all(|f| frobenius(&slice_right(&zeros(6, 6), f, 2, 3).unwrap()) == 0.0);
        assert!(all_zero);
    }

    #[test]
    fn op_norm_examples() {
        assert!((op_norm(&identity(5)) - 1.0).abs() < 1e-12);
        let d = diag(&[c64(3.0, 0.0), c64(0.0, -4.0)]);
        assert!((op_norm(&d) - 4.0).abs() < 1e-12);
        let mut r = rng();
        let x = random_matrix(4, 4, &mut r);
        let u = random_unitary(4, &mut r);
        assert!(unitarity_residual(&u) < 1e-12);
        assert!((op_norm(&(&u * &x * u.adjoint())) - op_norm(&x)).abs() < 1e-10);
    }

    #[test]
    fn span_equal_examples() {
        let x = pauli_x();
        let two = identity(2) * c64(2.0, 0.0);
        assert!(span_equal(&[identity(2), x.clone()], &[identity(2), &x + &two], 1e-9));
        assert!(!span_equal(
            &[matrix_unit(2, 0, 0)],
            &[matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)],
            1e-9
        ));
    }

    #[test]
    fn blockwise_leg_products_match_dense() {
        let mut r = rng();
        let v = random_matrix(6, 6, &mut r);
        let s = TensorShape::new(vec![2, 3, 3]).unwrap();
        let dense = leg_embed(&v, &s, &[1, 2]).unwrap() * leg_embed(&v, &s, &[1, 3]).unwrap();
        assert!(residual(&leg12_leg13(&v, 2, 3), &dense) < 1e-12);

        let s = TensorShape::new(vec![2, 2, 3]).unwrap();
        let dense = leg_embed(&v, &s, &[1, 3]).unwrap() * leg_embed(&v, &s, &[2, 3]).unwrap();
        assert!(residual(&leg13_leg23(&v, 2, 3), &dense) < 1e-12);

        let f = random_matrix(3, 3, &mut r);
        let sliced = slice_right_raw(&dense, &f, 4, 3);
        assert!(residual(&leg13_leg23_slice(&v, &f, 2, 3), &sliced) < 1e-12);
    }

    #[test]
    fn leg_maps_round_trip() {
        let mut r = rng();
        let x = random_matrix(6, 6, &mut r);
        assert_eq!(map_right_leg(&x, 2, 3, |b| b.clone()), x);
        assert_eq!(map_left_leg(&x, 2, 3, |b| b.clone()), x);
    }

    #[test]
    fn null_space_and_least_squares() {
        let a = real_matrix(&[&[1.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let ns = null_space(&a, 1e-12);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        assert!((v[0] + v[1]).norm() < 1e-12 && v[2].norm() < 1e-12);

        let b = real_matrix(&[&[2.0], &[3.0]]);
        let (x, res) = least_squares(&a, &b);
        assert!(res < 1e-12);
        assert!(residual(&(&a * &x), &b) < 1e-12);
    }
}
