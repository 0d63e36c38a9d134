//! Property tests over the structural invariants.

use nalgebra::DVector;
use num_complex::Complex;
use proptest::prelude::*;

use cvclone::cloner::{fidelity_pair, ClonerAncilla};
use cvclone::fock::{
    coherent_state, displacement, expm_action, make_quadratures, FockOperator, FockSpaceDesc,
    FockVector,
};
use cvclone::gauss::{weighted_single_clone_operator, WeightPair};
use cvclone::spectral::power_iteration;

type C64 = Complex<f64>;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Builders stay Hermitian and the displacement reproduces the
    /// coherent state, across amplitudes up to |alpha| = 2.
    #[test]
    fn displacement_matches_coherent_state(re in -1.4f64..1.4, im in -1.4f64..1.4) {
        let space = FockSpaceDesc::new(1, 30).unwrap();
        let alpha = C64::new(re, im);
        let d = displacement(alpha, space, 0).unwrap();
        let displaced = d.apply(&FockVector::vacuum(space)).unwrap();
        let (coh, _) = coherent_state(alpha, space).unwrap();
        let fid = coh.dot(&displaced).unwrap().norm_sqr();
        prop_assert!(fid >= 1.0 - 1e-8, "fidelity {fid} at alpha {alpha}");

        let (q, p) = make_quadratures::<f64>(space, 0).unwrap();
        prop_assert!(q.hermiticity_deviation() <= 1e-12);
        prop_assert!(p.hermiticity_deviation() <= 1e-12);
    }

    /// Anti-Hermitian exponential action preserves the norm to within a
    /// small multiple of the requested tolerance.
    #[test]
    fn expm_preserves_norm(re in -0.9f64..0.9, im in -0.9f64..0.9, scale in 0.1f64..2.0) {
        let space = FockSpaceDesc::new(1, 16).unwrap();
        let (q, p) = make_quadratures::<f64>(space, 0).unwrap();
        // i(a q + b p) is anti-Hermitian for real a, b
        let gen = FockOperator::from_matrix(
            space,
            q.matrix() * C64::new(0.0, re * scale) + p.matrix() * C64::new(0.0, im * scale),
        )
        .unwrap();
        let (state, _) = coherent_state(C64::new(0.4, -0.3), space).unwrap();
        let tol = 1e-11;
        let out = expm_action(&gen, &state, tol).unwrap();
        prop_assert!((out.norm() - state.norm()).abs() <= 10.0 * tol);
    }

    /// Every ancilla produces fidelities in [0, 1], and the weighted
    /// objective is invariant under joint weight rescaling.
    #[test]
    fn fidelities_bounded_and_scale_invariant(
        seed_re in -0.8f64..0.8,
        seed_im in -0.8f64..0.8,
        l1 in 0.05f64..1.0,
        l2 in 0.05f64..1.0,
        c in 0.2f64..5.0,
    ) {
        let space = FockSpaceDesc::new(2, 10).unwrap();
        let dim = space.total_dim();
        let mut amps = DVector::<C64>::zeros(dim);
        for i in 0..dim {
            let phase = (i as f64) * seed_re + seed_im;
            amps[i] = C64::new(phase.cos(), phase.sin()) * C64::new(0.9f64.powi(i as i32), 0.0);
        }
        let psi = FockVector::from_amplitudes(space, amps).unwrap().normalized();
        let anc = ClonerAncilla::custom(psi).unwrap();
        let (f1, f2) = fidelity_pair(&anc).unwrap();
        prop_assert!((0.0..=1.0).contains(&f1));
        prop_assert!((0.0..=1.0).contains(&f2));

        let w = WeightPair::new(l1, l2).unwrap();
        let f = weighted_single_clone_operator(&w, space).unwrap();
        let fs = weighted_single_clone_operator(&w.scaled(c).unwrap(), space).unwrap();
        let start = FockVector::vacuum(space);
        let a = power_iteration(&f, &start, 1e-10, 100_000).unwrap();
        let b = power_iteration(&fs, &start, 1e-10, 100_000).unwrap();
        prop_assert!((b.eigenvalue - c * a.eigenvalue).abs() < 1e-7 * c.max(1.0));
    }
}
