//! Direct Fock-space simulation of the cloning circuit.
//!
//! Three modes: the input signal (mode 0), the amplifier idler `b1`
//! (mode 1) and the second beam-splitter port `b2` (mode 2). The gain-2
//! optical parametric amplifier squeezes `(0, 1)`, the balanced splitter
//! mixes `(2, 0)`; clone 1 then emerges on mode 2 and clone 2 on mode 0,
//! realizing the canonical transformation
//!
//! ```text
//! a_clone1 = a_in + (b1† + b2)/sqrt(2)
//! a_clone2 = a_in + (b1† - b2)/sqrt(2)
//! ```
//!
//! Generators are applied as matrix-free exponential actions on state
//! vectors; full three-mode matrices are never materialized. Closed-form
//! Fock matrix elements of the squeezer and splitter survive only in the
//! test suite, as oracles.

use crate::cloner::ClonerAncilla;
use crate::conventions::DEFAULT_TAIL_BUDGET;
use crate::fock::{
    coherent_state, expm_action_op, FockOperator, FockSpaceDesc, FockVector, LadderGenerator,
};
use crate::gauss::{weighted_single_clone_operator, WeightPair};
use crate::scalar::{Cplx, Real};
use crate::spectral::dense_spectrum;
use crate::{Error, Result};

/// Parameters of the three-mode cloning circuit.
#[derive(Clone, Copy, Debug)]
pub struct CircuitSpec<T: Real> {
    /// Squeeze parameter of the amplifier; intensity gain `cosh^2 r`.
    pub squeeze_r: T,
    /// Beam-splitter angle; `pi/4` is the balanced case.
    pub bs_angle: T,
    /// Displacement of the input signal.
    pub input_alpha: Cplx<T>,
}

impl<T: Real> CircuitSpec<T> {
    /// The gain-2 amplifier + balanced splitter with vacuum signal input:
    /// `r = arccosh(sqrt 2)`.
    pub fn gain2() -> Self {
        Self {
            squeeze_r: T::of(2.0).sqrt().acosh(),
            bs_angle: T::pi() / T::of(4.0),
            input_alpha: Cplx::new(T::zero(), T::zero()),
        }
    }

    pub fn gain2_displaced(alpha: Cplx<T>) -> Self {
        Self {
            input_alpha: alpha,
            ..Self::gain2()
        }
    }

    pub fn gain(&self) -> T {
        let c = self.squeeze_r.cosh();
        c * c
    }

    pub fn validate(&self) -> Result<()> {
        if self.squeeze_r < T::zero() {
            return Err(Error::param("squeeze parameter must be nonnegative"));
        }
        Ok(())
    }
}

/// Two-mode squeezer `exp(r (a† b† - a b))` acting on `(mode_a, mode_b)` of
/// `v`. From the two-mode vacuum this populates `|n, n>` with amplitudes
/// `tanh(r)^n / cosh(r)`. An optional top-level tail budget turns silent
/// truncation damage into a cutoff-too-small error.
pub fn two_mode_squeezer<T: Real>(
    r: T,
    modes: (usize, usize),
    v: &FockVector<T>,
    tol: T,
    tail_budget: Option<T>,
) -> Result<FockVector<T>> {
    if r < T::zero() {
        return Err(Error::param("squeeze parameter must be nonnegative"));
    }
    let gen = LadderGenerator::two_mode_squeeze(v.space(), modes.0, modes.1, r)?;
    let out = FockVector::from_amplitudes(v.space(), expm_action_op(&gen, v.amplitudes(), tol)?)?;
    if let Some(budget) = tail_budget {
        let mass = out.top_level_mass();
        if mass > budget {
            return Err(Error::TailMass {
                mass: mass.as_f64(),
                budget: budget.as_f64(),
            });
        }
    }
    Ok(out)
}

/// Beam splitter `exp(theta (a† b - a b†))` on `(mode_a, mode_b)` of `v`.
/// Conserves total photon number exactly.
pub fn beam_splitter<T: Real>(
    theta: T,
    modes: (usize, usize),
    v: &FockVector<T>,
    tol: T,
) -> Result<FockVector<T>> {
    let gen = LadderGenerator::beam_splitter(v.space(), modes.0, modes.1, theta)?;
    FockVector::from_amplitudes(v.space(), expm_action_op(&gen, v.amplitudes(), tol)?)
}

/// Amplifier followed by the balanced splitter, on a three-mode vector.
pub fn apply_circuit<T: Real>(
    spec: &CircuitSpec<T>,
    v: &FockVector<T>,
    tol: T,
) -> Result<FockVector<T>> {
    spec.validate()?;
    if v.space().modes() != 3 {
        return Err(Error::ModeCountUnsupported {
            modes: v.space().modes(),
        });
    }
    let squeezed = two_mode_squeezer(spec.squeeze_r, (0, 1), v, tol, None)?;
    beam_splitter(spec.bs_angle, (2, 0), &squeezed, tol)
}

/// Fidelities extracted from one circuit run.
#[derive(Clone, Copy, Debug)]
pub struct ClonerRun<T: Real> {
    pub f1: T,
    pub f2: T,
    pub f_joint: T,
    /// Top-level tail mass of the output state.
    pub tail_mass: T,
}

/// Run the cloner on `|alpha>_in ⊗ |psi>_{b1 b2}` and measure both
/// single-clone fidelities against `|alpha>` and the joint fidelity against
/// `|alpha, alpha>`, by reduced expectations (no density matrices).
pub fn run_cloner<T: Real>(
    ancilla: &ClonerAncilla<T>,
    alpha: Cplx<T>,
    cutoff: usize,
) -> Result<ClonerRun<T>> {
    run_cloner_with(
        ancilla,
        alpha,
        cutoff,
        T::of(1e-12),
        T::of(DEFAULT_TAIL_BUDGET),
    )
}

/// [`run_cloner`] with explicit exponential-action tolerance and tail
/// budget. Deliberately under-resolved studies (covariance decay across
/// cutoffs) pass a loose budget; production runs keep the default.
pub fn run_cloner_with<T: Real>(
    ancilla: &ClonerAncilla<T>,
    alpha: Cplx<T>,
    cutoff: usize,
    tol: T,
    tail_budget: T,
) -> Result<ClonerRun<T>> {
    let psi = ancilla.state();
    if psi.space().cutoff() != cutoff || psi.space().modes() != 2 {
        return Err(Error::SpaceMismatch);
    }
    let space1 = FockSpaceDesc::new(1, cutoff)?;
    let (coh, _deficit) = coherent_state(alpha, space1)?;
    let input = coh.tensor(psi)?;
    let spec = CircuitSpec::gain2_displaced(alpha);
    let out = apply_circuit(&spec, &input, tol)?;

    let tail_mass = out.top_level_mass();
    if tail_mass > tail_budget {
        return Err(Error::TailMass {
            mass: tail_mass.as_f64(),
            budget: tail_budget.as_f64(),
        });
    }

    // clone 1 = mode 2, clone 2 = mode 0
    let f1 = out.contract_mode(2, &coh)?.norm().powi(2);
    let f2 = out.contract_mode(0, &coh)?.norm().powi(2);
    let f_joint = out
        .contract_mode(2, &coh)?
        .contract_mode(0, &coh)?
        .norm()
        .powi(2);
    Ok(ClonerRun {
        f1,
        f2,
        f_joint,
        tail_mass,
    })
}

/// Maximum single-clone fidelity deviation across displacements,
/// `max_alpha |f_i(alpha) - f_i(0)|`. Exact covariance holds untruncated;
/// at finite cutoff the deviation is dominated by truncation error and must
/// shrink as the cutoff grows.
pub fn covariance_check<T: Real>(
    ancilla: &ClonerAncilla<T>,
    alphas: &[Cplx<T>],
    cutoff: usize,
) -> Result<T> {
    let tol = T::of(1e-12);
    // no tail gate: this probe deliberately visits under-resolved cutoffs
    let budget = T::one();
    let base = run_cloner_with(
        ancilla,
        Cplx::new(T::zero(), T::zero()),
        cutoff,
        tol,
        budget,
    )?;
    let mut dev = T::zero();
    for &alpha in alphas {
        let run = run_cloner_with(ancilla, alpha, cutoff, tol, budget)?;
        dev = dev.max((run.f1 - base.f1).abs());
        dev = dev.max((run.f2 - base.f2).abs());
    }
    Ok(dev)
}

/// Materialize the balanced beam splitter on a two-mode space by exponential
/// action on every basis column.
pub fn beam_splitter_unitary<T: Real>(space: FockSpaceDesc) -> Result<FockOperator<T>> {
    if space.modes() != 2 {
        return Err(Error::ModeCountUnsupported {
            modes: space.modes(),
        });
    }
    let theta = T::pi() / T::of(4.0);
    let gen = LadderGenerator::beam_splitter(space, 0, 1, theta)?;
    let dim = space.total_dim();
    let tol = T::of(1e-14);
    let mut mat = nalgebra::DMatrix::<Cplx<T>>::zeros(dim, dim);
    let mut basis = nalgebra::DVector::<Cplx<T>>::zeros(dim);
    for j in 0..dim {
        basis.fill(Cplx::new(T::zero(), T::zero()));
        basis[j] = Cplx::new(T::one(), T::zero());
        let col = expm_action_op(&gen, &basis, tol)?;
        mat.set_column(j, &col);
    }
    FockOperator::from_matrix(space, mat)
}

/// Sup distance between the top-`k` spectra of the weighted operator and of
/// its beam-splitter conjugate, materialized on the same truncated space.
///
/// The two forms are exactly unitarily equivalent there, so any distance
/// beyond rounding exposes a defect in the exponential action or in the
/// operator assembly.
pub fn equivalence_check<T: Real>(w: &WeightPair<T>, cutoff: usize, k: usize) -> Result<T> {
    let space = FockSpaceDesc::new(2, cutoff)?;
    let f = weighted_single_clone_operator(w, space)?;
    let bs = beam_splitter_unitary::<T>(space)?;
    let rotated = f.conjugate_by(&bs)?.hermitized();
    let spec_a = dense_spectrum(&f)?;
    let spec_b = dense_spectrum(&rotated)?;
    let mut dist = T::zero();
    for i in 0..k.min(spec_a.len()) {
        dist = dist.max((spec_a[i] - spec_b[i]).abs());
    }
    Ok(dist)
}
