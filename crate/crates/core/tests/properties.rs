use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hopf_core::algebra::{check_star_hom, AlgLinearMap, ConcreteStarAlgebra};
use hopf_core::convolution::ConvolutionAlgebra;
use hopf_core::corep::{corep_from_group_rep, verify_corepresentation};
use hopf_core::crossed::{dual_hopf, verify_dual};
use hopf_core::groups::{Cocycle, FiniteGroup};
use hopf_core::hopf::{twisted_delta_defect, HopfAlgebra};
use hopf_core::multunitary::{kac_takesaki, pentagon_residual, MultiplicativeUnitary};
use hopf_core::tensor::{
    c64, flip_sigma, identity, kron, leg_embed, matrix_unit, random_matrix, random_unitary, residual,
    slice_right, swap_matrix, trace_pairing, zeros, CMatrix, Functional, TensorShape,
};

fn small_group(i: usize) -> FiniteGroup {
    let z2 = FiniteGroup::cyclic(2).unwrap();
    match i % 6 {
        0 => z2,
        1 => FiniteGroup::cyclic(3).unwrap(),
        2 => FiniteGroup::cyclic(4).unwrap(),
        3 => FiniteGroup::direct_product(&z2, &z2),
        4 => FiniteGroup::cyclic(5).unwrap(),
        _ => FiniteGroup::symmetric3(),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `U (M_a ⊕ M_b) U*` inside `M_{a+b}`.
fn conjugated_blocks(a: usize, b: usize, u: &CMatrix) -> ConcreteStarAlgebra {
    let n = a + b;
    let mut span = Vec::new();
    for (off, k) in [(0, a), (a, b)] {
        for i in 0..k {
            for j in 0..k {
                let e = matrix_unit(n, off + i, off + j);
                span.push(u * e * u.adjoint());
            }
        }
    }
    ConcreteStarAlgebra::from_spanning("blocks", n, &span, 1e-9).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kron_mixed_product(seed in any::<u64>(), a in 1usize..4, b in 1usize..4) {
        let mut r = rng(seed);
        let (x, y) = (random_matrix(a, a, &mut r), random_matrix(a, a, &mut r));
        let (z, w) = (random_matrix(b, b, &mut r), random_matrix(b, b, &mut r));
        let lhs = kron(&x, &z) * kron(&y, &w);
        prop_assert!(residual(&lhs, &kron(&(&x * &y), &(&z * &w))) < 1e-10);
    }

    #[test]
    fn flip_matches_swap_conjugation(seed in any::<u64>(), a in 1usize..4, b in 1usize..4) {
        let mut r = rng(seed);
        let x = random_matrix(a * b, a * b, &mut r);
        let f = flip_sigma(&x, a, b).unwrap();
        let s = swap_matrix(a, b);
        prop_assert!(residual(&f, &(&s * &x * s.transpose())) < 1e-12);
        prop_assert!(residual(&flip_sigma(&f, b, a).unwrap(), &x) == 0.0);
    }

    #[test]
    fn leg13_through_swaps(seed in any::<u64>(), k in 1usize..4) {
        let mut r = rng(seed);
        let v = random_matrix(k * k, k * k, &mut r);
        let shape = TensorShape::new(vec![k, k, k]).unwrap();
        let v13 = leg_embed(&v, &shape, &[1, 3]).unwrap();
        let s23 = kron(&identity(k), &swap_matrix(k, k));
        let via_swaps = &s23 * kron(&v, &identity(k)) * &s23;
        prop_assert!(residual(&v13, &via_swaps) < 1e-12);
    }

    #[test]
    fn slice_of_product_tensor(seed in any::<u64>(), a in 1usize..4, b in 1usize..4) {
        let mut r = rng(seed);
        let x = random_matrix(a, a, &mut r);
        let y = random_matrix(b, b, &mut r);
        let f = Functional::new(random_matrix(b, b, &mut r)).unwrap();
        let s = slice_right(&kron(&x, &y), &f, a, b).unwrap();
        prop_assert!(residual(&s, &(&x * trace_pairing(f.matrix(), &y))) < 1e-10);
    }

    #[test]
    fn wedderburn_recovers_blocks(seed in any::<u64>(), a in 1usize..3, b in 1usize..3) {
        let u = random_unitary(a + b, &mut rng(seed));
        let alg = conjugated_blocks(a, b, &u);
        let w = alg.wedderburn().unwrap();
        let mut want = vec![a, b];
        want.sort();
        prop_assert_eq!(w.sizes(), want);
        prop_assert!(w.block_defect(&alg) < 1e-8);
    }

    #[test]
    fn inner_automorphisms_are_star_homs(seed in any::<u64>(), a in 1usize..3, b in 1usize..3) {
        let mut r = rng(seed);
        let alg = Arc::new(conjugated_blocks(a, b, &random_unitary(a + b, &mut r)));
        let v = random_unitary(a + b, &mut r);
        let ad = AlgLinearMap::from_fn(alg, a + b, |x| &v * x * v.adjoint()).unwrap();
        let rep = check_star_hom(&ad);
        prop_assert!(rep.is_star_hom(1e-10));
        prop_assert!(rep.injective);
    }

    #[test]
    fn point_masses_convolve(gi in 0usize..6, s in 0usize..6, t in 0usize..6) {
        let g = small_group(gi);
        let (s, t) = (s % g.order(), t % g.order());
        let n = g.order();
        let conv = ConvolutionAlgebra::new(&HopfAlgebra::function_algebra(&g)).unwrap();
        let eps = |x| conv.from_matrix(&matrix_unit(n, x, x));
        let p = conv.star(&eps(s), &eps(t)).unwrap();
        prop_assert!(conv.distance(&p, &eps(g.mul(s, t))) < 1e-12);
    }

    #[test]
    fn conjugated_regular_reps_are_corepresentations(gi in 0usize..6, seed in any::<u64>()) {
        let g = small_group(gi);
        let n = g.order();
        let w = random_unitary(n, &mut rng(seed));
        let us: Vec<CMatrix> = g.elements().map(|s| &w * g.lambda(s) * w.adjoint()).collect();
        let c = corep_from_group_rep(&HopfAlgebra::function_algebra(&g), &us, 1e-9).unwrap();
        prop_assert!(verify_corepresentation(&c).passes(1e-10));
    }

    #[test]
    fn pentagon_is_conjugation_invariant(gi in 0usize..6, seed in any::<u64>()) {
        let g = small_group(gi);
        let n = g.order();
        let u = random_unitary(n, &mut rng(seed));
        let uu = kron(&u, &u);
        let w = kac_takesaki(&g);
        let conj = MultiplicativeUnitary::new(n, &uu * w.matrix() * uu.adjoint()).unwrap();
        prop_assert!(pentagon_residual(&conj) < 1e-10);
    }

    #[test]
    fn naive_twist_defect_matches_values(seed in any::<u64>()) {
        // coboundary u(s,t) = b(s)b(t)/b(st) on Z2×Z2 with b(e) = 1
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let g = FiniteGroup::direct_product(&z2, &z2);
        let mut r = rng(seed);
        let phases = random_matrix(4, 1, &mut r);
        let b: Vec<_> = (0..4)
            .map(|i| if i == 0 { c64(1.0, 0.0) } else { phases[i] / phases[i].norm() })
            .collect();
        let values: Vec<Vec<_>> = (0..4)
            .map(|s| (0..4).map(|t| b[s] * b[t] / b[g.mul(s, t)]).collect())
            .collect();
        let u = Cocycle::new(g.clone(), values).unwrap();
        let oracle = (0..4)
            .flat_map(|s| (0..4).map(move |t| (s, t)))
            .map(|(s, t)| {
                let v = u.value(s, t);
                (v - v * v).norm()
            })
            .fold(0.0, f64::max);
        prop_assert!((twisted_delta_defect(&g, &u).unwrap() - oracle).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn duals_have_group_order(gi in 0usize..6, functions in any::<bool>()) {
        let g = small_group(gi);
        let s = if functions { HopfAlgebra::function_algebra(&g) } else { HopfAlgebra::group_algebra(&g) };
        let d = dual_hopf(&s).unwrap();
        let r = verify_dual(&d);
        prop_assert_eq!(r.dim_hat, g.order());
        prop_assert!(r.passes(1e-9));
    }
}

#[test]
fn zero_functional_slices_to_zero() {
    let x = kron(&identity(2), &identity(3));
    let f = Functional::new(zeros(3, 3)).unwrap();
    assert_eq!(slice_right(&x, &f, 2, 3).unwrap(), zeros(2, 2));
}
