//! Algebraic properties of the dense linear-algebra layer.

use molspin::qlinalg::{eigh, expm_hermitian, trace_distance, ComplexMatrix};
use molspin::{CMatrix, C64};
use proptest::prelude::*;

fn hermitian(dim: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), dim * dim).prop_map(move |v| {
        let g = CMatrix::from_vec(v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap();
        g.hermitian_part()
    })
}

fn state() -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16).prop_map(|v| {
        let g = CMatrix::from_vec(v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap();
        let rho = &g * &g.adjoint();
        let tr = rho.trace().re.max(1e-12);
        rho.scale_real(1.0 / tr)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eigh_reconstructs(h in hermitian(4)) {
        let e = eigh(&h).unwrap();
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let v = &e.eigenvectors;
        let gram = &v.adjoint() * v;
        prop_assert!((&gram - &ComplexMatrix::identity(4)).max_abs() < 1e-12);
        let rebuilt = e.map_spectrum(|x| x);
        prop_assert!((&rebuilt - &h).max_abs() < 1e-10 * h.max_abs().max(1e-300));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn trace_distance_is_a_metric(a in state(), b in state(), c in state()) {
        let ab = trace_distance(&a, &b).unwrap();
        let ba = trace_distance(&b, &a).unwrap();
        let bc = trace_distance(&b, &c).unwrap();
        let ac = trace_distance(&a, &c).unwrap();
        prop_assert!((ab - ba).abs() < 1e-14);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert!(trace_distance(&a, &a).unwrap() < 1e-12);
    }

    #[test]
    fn expm_is_a_one_parameter_group(h in hermitian(4), s in -0.5f64..0.5, t in -0.5f64..0.5) {
        let lhs = &expm_hermitian(&h, s).unwrap() * &expm_hermitian(&h, t).unwrap();
        let rhs = expm_hermitian(&h, s + t).unwrap();
        prop_assert!((&lhs - &rhs).max_abs() < 1e-10 * rhs.max_abs().max(1.0));
    }
}
