//! Phase-space and truncation conventions.
//!
//! Every number produced by this crate depends on the choices below; they are
//! fixed here once and referenced everywhere else.
//!
//! # Quadratures
//!
//! `hbar = 1` and
//!
//! ```text
//! Q = (a + a†)/sqrt(2),    P = (a - a†)/(i sqrt(2)),    [Q, P] = i.
//! ```
//!
//! The vacuum variance is `<0|Q^2|0> = 1/2`, so a coherent state has
//! covariance matrix `1` and characteristic function `exp(-|xi|^2/4)` up to
//! the displacement phase.
//!
//! # Mode ordering
//!
//! Big-endian: mode 0 is the slowest index. A basis state `|n0, n1, ...>` of
//! a space with per-mode dimension `d` sits at flat index
//! `n0 * d^(m-1) + n1 * d^(m-2) + ...`. `tensor(A, B)` places `A` on the
//! lower mode indices, which is the plain Kronecker product.
//!
//! # Generator signs
//!
//! * Two-mode squeezer on modes `(s, i)`: `S(r) = exp(r (as† ai† - as ai))`,
//!   so `S† as S = as cosh r + ai† sinh r`. Intensity gain `cosh^2 r`; the
//!   gain-2 amplifier uses `r = arccosh(sqrt 2)`.
//! * Beam splitter on modes `(x, y)`: `B(t) = exp(t (ax† ay - ax ay†))`, so
//!   `B† ax B = ax cos t + ay sin t` and `B|1,0> = cos t |1,0> - sin t |0,1>`.
//!   `t = pi/4` is the balanced case.
//! * In the cloning circuit (input mode 0, idler/ancilla mode 1, second
//!   beam-splitter port mode 2) the squeezer acts on `(0, 1)` and the
//!   balanced splitter on `(2, 0)`; clone 1 then emerges on mode 2 and
//!   clone 2 on mode 0, reproducing the canonical transformation
//!   `a_clone = a_in + (b1† ± b2)/sqrt(2)` without stray phases.
//!
//! # Truncation
//!
//! The cutoff is the largest photon number kept per mode (inclusive), so the
//! per-mode dimension is `cutoff + 1`. Ladder-algebra identities hold exactly
//! below the top level; every consumer of near-edge amplitudes must check a
//! tail-mass diagnostic instead of trusting them.

/// Default per-mode cutoff for two-mode eigenproblems.
pub const DEFAULT_TWO_MODE_CUTOFF: usize = 24;

/// Default per-mode cutoff for three-mode circuit runs.
pub const DEFAULT_THREE_MODE_CUTOFF: usize = 14;

/// Default residual tolerance of the power iteration.
pub const DEFAULT_POWER_TOL: f64 = 1e-10;

/// Default iteration budget of the power iteration.
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Entrywise tolerance for Hermiticity checks on observables.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Entrywise tolerance for the anti-Hermiticity precondition of `expm_action`.
pub const ANTI_HERMITICITY_TOL: f64 = 1e-10;

/// Pre-normalization deficit above which a coherent-state preparation is
/// flagged as truncation-limited.
pub const COHERENT_DEFICIT_WARN: f64 = 1e-6;

/// Strict top-level tail-mass budget: circuit runs at the recommended
/// cutoffs with vacuum-like ancillas stay below this.
pub const STRICT_TAIL_BUDGET: f64 = 1e-4;

/// Default tail-mass budget for `run_cloner`; generous enough for the
/// optimal ancilla at the default three-mode cutoff while still rejecting
/// under-resolved configurations.
pub const DEFAULT_TAIL_BUDGET: f64 = 1e-2;

/// Reported eigenvalues must move by less than this when the cutoff grows
/// by [`STABILITY_CUTOFF_STEP`], otherwise they are flagged as unstable.
pub const STABILITY_EIG_TOL: f64 = 1e-4;

/// Cutoff increment used by the truncation-stability probe.
pub const STABILITY_CUTOFF_STEP: usize = 4;

/// Spectral-gap threshold below which a dominant eigenpair is flagged as
/// degenerate rather than rejected.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// Dimension guard for the dense eigensolver oracle.
pub const DENSE_DIM_LIMIT: usize = 4096;
