//! Property tests for the binding algebra and the core utilities.

use num_complex::Complex64;
use proptest::prelude::*;

use vsa::binding::{
    circular_convolve, hadamard_bind, lcc_bind, lcc_bind_dense, lcc_inverse, lcc_unbind,
};
use vsa::core::{
    block_code_entropy_bits, log2_binomial, superpose, BlockCodeVector, BlockKind, DenseKind,
    DenseVector,
};

const TOL: f64 = 1e-9;

fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Textbook O(N^2) circular convolution used as an oracle for the FFT path.
fn convolve_direct(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| (0..n).map(|i| x[(k + n - i) % n] * y[i]).sum())
        .collect()
}

fn block_code_strategy(k: usize, lb: usize) -> impl Strategy<Value = BlockCodeVector> {
    proptest::collection::vec((0..lb, 0.0f64..std::f64::consts::TAU), k).prop_map(move |hot| {
        BlockCodeVector::new(
            lb,
            BlockKind::Phasor,
            hot.into_iter().map(|(i, phase)| (i, Complex64::from_polar(1.0, phase))).collect(),
        )
        .unwrap()
    })
}

fn binary_block_code_strategy(k: usize, lb: usize) -> impl Strategy<Value = BlockCodeVector> {
    proptest::collection::vec(0..lb, k).prop_map(move |hot| {
        BlockCodeVector::new(
            lb,
            BlockKind::Binary,
            hot.into_iter().map(|i| (i, Complex64::new(1.0, 0.0))).collect(),
        )
        .unwrap()
    })
}

fn bipolar_strategy(n: usize) -> impl Strategy<Value = DenseVector> {
    proptest::collection::vec(proptest::bool::ANY, n).prop_map(|bits| {
        DenseVector::new(
            DenseKind::Bipolar,
            bits.into_iter()
                .map(|b| Complex64::new(if b { 1.0 } else { -1.0 }, 0.0))
                .collect(),
        )
        .unwrap()
    })
}

fn phases_close(a: &BlockCodeVector, b: &BlockCodeVector) -> bool {
    a.hot.len() == b.hot.len()
        && a.hot
            .iter()
            .zip(&b.hot)
            .all(|(&(ia, pa), &(ib, pb))| ia == ib && (pa - pb).norm() < TOL)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blockwise_binding_is_commutative(
        a in block_code_strategy(8, 16),
        b in block_code_strategy(8, 16),
    ) {
        let ab = lcc_bind(&a, &b).unwrap();
        let ba = lcc_bind(&b, &a).unwrap();
        prop_assert!(phases_close(&ab, &ba));
    }

    #[test]
    fn blockwise_binding_is_associative(
        a in block_code_strategy(8, 16),
        b in block_code_strategy(8, 16),
        c in block_code_strategy(8, 16),
    ) {
        let left = lcc_bind(&lcc_bind(&a, &b).unwrap(), &c).unwrap();
        let right = lcc_bind(&a, &lcc_bind(&b, &c).unwrap()).unwrap();
        prop_assert!(phases_close(&left, &right));
    }

    #[test]
    fn blockwise_binding_identity_and_inverse(a in block_code_strategy(8, 16)) {
        let id = BlockCodeVector::identity(128, 8, BlockKind::Phasor).unwrap();
        let via_id = lcc_bind(&a, &id).unwrap();
        prop_assert!(phases_close(&via_id, &a));

        let inv = lcc_inverse(&a).unwrap();
        let to_id = lcc_bind(&a, &inv).unwrap();
        prop_assert!(phases_close(&to_id, &id));
    }

    #[test]
    fn blockwise_unbind_of_bind_is_exact_for_binary_codes(
        a in binary_block_code_strategy(8, 16),
        b in binary_block_code_strategy(8, 16),
    ) {
        let c = lcc_bind(&a, &b).unwrap();
        // Binary hot phases are exactly 1.0, so recovery is bit-exact.
        prop_assert_eq!(lcc_unbind(&c, &a).unwrap(), b);
    }

    #[test]
    fn blockwise_binding_distributes_over_superposition(
        a1 in block_code_strategy(4, 8),
        a2 in block_code_strategy(4, 8),
        b in block_code_strategy(4, 8),
    ) {
        let sum = superpose([&a1.to_dense()[..], &a2.to_dense()[..]]).unwrap();
        let bound_sum = lcc_bind_dense(&sum.components, &b.to_dense(), 4).unwrap();
        let sum_of_bound = superpose([
            &lcc_bind(&a1, &b).unwrap().to_dense()[..],
            &lcc_bind(&a2, &b).unwrap().to_dense()[..],
        ])
        .unwrap();
        prop_assert!(max_abs_diff(&bound_sum, &sum_of_bound.components) < TOL);
    }

    #[test]
    fn elementwise_binding_laws_hold_exactly(
        x in bipolar_strategy(32),
        y in bipolar_strategy(32),
        z in bipolar_strategy(32),
    ) {
        // Self-inverse.
        prop_assert_eq!(&hadamard_bind(&hadamard_bind(&x, &y).unwrap(), &y).unwrap(), &x);
        // Commutative.
        prop_assert_eq!(hadamard_bind(&x, &y).unwrap(), hadamard_bind(&y, &x).unwrap());
        // Associative.
        prop_assert_eq!(
            hadamard_bind(&hadamard_bind(&x, &y).unwrap(), &z).unwrap(),
            hadamard_bind(&x, &hadamard_bind(&y, &z).unwrap()).unwrap()
        );
        // Distributes over superposition (exact +/-1 arithmetic).
        let sum = superpose([&x.components[..], &y.components[..]]).unwrap();
        let bound: Vec<Complex64> =
            sum.components.iter().zip(&z.components).map(|(a, b)| a * b).collect();
        let other = superpose([
            &hadamard_bind(&x, &z).unwrap().components[..],
            &hadamard_bind(&y, &z).unwrap().components[..],
        ])
        .unwrap();
        prop_assert_eq!(bound, other.components);
    }

    #[test]
    fn fft_convolution_matches_direct_sum(
        xr in proptest::collection::vec(-1.0f64..1.0, 48),
        yr in proptest::collection::vec(-1.0f64..1.0, 48),
    ) {
        let x: Vec<Complex64> = xr.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        let y: Vec<Complex64> = yr.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        let fast = circular_convolve(&x, &y).unwrap();
        let slow = convolve_direct(&x, &y);
        prop_assert!(max_abs_diff(&fast, &slow) < TOL);
    }

    #[test]
    fn convolution_with_the_unit_impulse_is_identity(
        xr in proptest::collection::vec(-1.0f64..1.0, 32),
    ) {
        let x: Vec<Complex64> = xr.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        let mut delta = vec![Complex64::ZERO; 32];
        delta[0] = Complex64::new(1.0, 0.0);
        let out = circular_convolve(&x, &delta).unwrap();
        prop_assert!(max_abs_diff(&out, &x) < TOL);
    }

    #[test]
    fn superposition_is_order_independent(
        x in bipolar_strategy(24),
        y in bipolar_strategy(24),
        z in bipolar_strategy(24),
    ) {
        let abc = superpose([&x.components[..], &y.components[..], &z.components[..]]).unwrap();
        let cba = superpose([&z.components[..], &y.components[..], &x.components[..]]).unwrap();
        prop_assert_eq!(abc.components, cba.components);
    }

    #[test]
    fn block_code_dense_round_trip_is_identity(a in block_code_strategy(8, 16)) {
        let back = BlockCodeVector::from_dense(8, BlockKind::Phasor, &a.to_dense()).unwrap();
        prop_assert!(phases_close(&back, &a));
    }
}

#[test]
fn block_code_entropy_matches_the_closed_form() {
    assert!((block_code_entropy_bits(128, 16) - 48.0).abs() < 1e-12);
    assert!(block_code_entropy_bits(128, 16) <= log2_binomial(128, 16));
    // K blocks of size N/K carry K*log2(N/K) bits.
    assert!((block_code_entropy_bits(1024, 64) - 64.0 * 4.0).abs() < 1e-12);
}
