//! Multiplicative unitaries: the pentagon identity, Kac–Takesaki operators
//! and leg algebras.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::ConcreteStarAlgebra;
use crate::corep::{CoactionKind, CovariantPair};
use crate::error::{shape, Error, Result};
use crate::groups::FiniteGroup;
use crate::hopf::w_g;
use crate::tensor::{
    identity, kron, left_blocks, leg_embed, map_right_leg, random_unitary, residual, right_blocks,
    unitarity_residual, CMatrix, TensorShape,
};

#[derive(Clone, Debug)]
pub struct MultiplicativeUnitary {
    hdim: usize,
    v: CMatrix,
}

impl MultiplicativeUnitary {
    /// Wraps `v` on `C^k ⊗ C^k` without checking the pentagon identity.
    pub fn new(hdim: usize, v: CMatrix) -> Result<Self> {
        if v.shape() != (hdim * hdim, hdim * hdim) {
            return Err(shape(format!(
                "operator is {}x{}, expected {1}x{1}",
                v.nrows(),
                hdim * hdim
            )));
        }
        Ok(Self { hdim, v })
    }

    /// Wraps `v` and rejects it unless it is unitary and pentagonal to `tol`.
    pub fn checked(hdim: usize, v: CMatrix, tol: f64) -> Result<Self> {
        let m = Self::new(hdim, v)?;
        let u = unitarity_residual(&m.v);
        let p = pentagon_residual(&m);
        if u > tol || p > tol {
            return Err(Error::Validation(format!(
                "not a multiplicative unitary (unitarity {u:.3e}, pentagon {p:.3e})"
            )));
        }
        Ok(m)
    }

    pub fn hdim(&self) -> usize {
        self.hdim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.v
    }
}

/// `‖V₁₂V₁₃V₂₃ − V₂₃V₁₂‖` on `C^k ⊗ C^k ⊗ C^k`.
pub fn pentagon_residual(v: &MultiplicativeUnitary) -> f64 {
    let k = v.hdim;
    let shape3 = TensorShape::new(vec![k, k, k]).expect("nonzero factors");
    let id = identity(k);
    let v12 = kron(&v.v, &id);
    let v23 = kron(&id, &v.v);
    let v13 = leg_embed(&v.v, &shape3, &[1, 3]).expect("legs are valid");
    residual(&(&v12 * &v13 * &v23), &(&v23 * &v12))
}

#[derive(Clone, Debug, Serialize)]
pub struct PentagonReport {
    pub unitary_residual: f64,
    pub pentagon_residual: f64,
}

impl PentagonReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.unitary_residual <= tol && self.pentagon_residual <= tol
    }
}

pub fn pentagon_check(v: &MultiplicativeUnitary) -> PentagonReport {
    PentagonReport {
        unitary_residual: unitarity_residual(&v.v),
        pentagon_residual: pentagon_residual(v),
    }
}

/// `W(δ_s ⊗ δ_t) = δ_s ⊗ δ_{st}`, i.e. `Σ_s E_ss ⊗ λ(s)`.
pub fn kac_takesaki(g: &FiniteGroup) -> MultiplicativeUnitary {
    MultiplicativeUnitary {
        hdim: g.order(),
        v: w_g(g),
    }
}

/// `A(V) = span{(f ⊗ id)(V)}` and `Â(V) = span{(id ⊗ f)(V)}`, each closed
/// into a *-algebra.
pub fn leg_algebras(v: &MultiplicativeUnitary) -> Result<(ConcreteStarAlgebra, ConcreteStarAlgebra)> {
    let k = v.hdim;
    let left = ConcreteStarAlgebra::generated("A(V)", k, &left_blocks(&v.v, k, k))?;
    let right = ConcreteStarAlgebra::generated("Â(V)", k, &right_blocks(&v.v, k, k))?;
    Ok((left, right))
}

/// Dimension of the algebra generated by both legs together.
pub fn joint_leg_dim(v: &MultiplicativeUnitary) -> Result<usize> {
    let k = v.hdim;
    let mut gens = left_blocks(&v.v, k, k);
    gens.extend(right_blocks(&v.v, k, k));
    Ok(ConcreteStarAlgebra::generated("A(V)∨Â(V)", k, &gens)?.dim())
}

/// `(id ⊗ π)(V)` for a covariant pair `(π, V)` of the comultiplication
/// coaction of `S`.
pub fn from_covariant_pair(p: &CovariantPair) -> Result<MultiplicativeUnitary> {
    if !matches!(p.coaction.kind(), CoactionKind::Comultiplication) {
        return Err(Error::Unsupported(
            "covariant pair must be over the comultiplication coaction".into(),
        ));
    }
    let k = p.dim();
    let n = p.coaction.hopf().ambient();
    let w = map_right_leg(p.corep.matrix(), k, n, |b| p.pi.apply(b));
    MultiplicativeUnitary::new(k, w)
}

/// Pentagon residuals of random `k²×k²` unitaries. Sampling evidence only.
pub fn pentagon_fuzz(k: usize, samples: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let v = MultiplicativeUnitary {
                hdim: k,
                v: random_unitary(k * k, &mut rng),
            };
            pentagon_residual(&v)
        })
        .collect()
}
