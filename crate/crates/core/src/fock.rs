//! Truncated Fock-space linear algebra.
//!
//! Everything downstream is dense linear algebra over states and operators on
//! a small number of bosonic modes, each truncated at a per-mode photon-number
//! cutoff. Values are immutable after construction and safe to share across
//! threads.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::conventions::{ANTI_HERMITICITY_TOL, COHERENT_DEFICIT_WARN};
use crate::scalar::{cmod, re, Cplx, Real};
use crate::{Error, Result};

/// Shape of a truncated multi-mode Fock space.
///
/// `cutoff` is the largest photon number kept per mode (inclusive), so each
/// mode carries `cutoff + 1` levels and the total dimension is
/// `(cutoff + 1)^mode_count`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FockSpaceDesc {
    modes: usize,
    cutoff: usize,
}

impl FockSpaceDesc {
    pub fn new(modes: usize, cutoff: usize) -> Result<Self> {
        if !(1..=3).contains(&modes) {
            return Err(Error::ModeCountUnsupported { modes });
        }
        if cutoff == 0 {
            return Err(Error::CutoffTooSmall);
        }
        Ok(Self { modes, cutoff })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim_per_mode(&self) -> usize {
        self.cutoff + 1
    }

    pub fn total_dim(&self) -> usize {
        self.dim_per_mode().pow(self.modes as u32)
    }

    /// Stride of a mode in the flat index (mode 0 is the slowest index).
    pub fn stride(&self, mode: usize) -> usize {
        self.dim_per_mode().pow((self.modes - 1 - mode) as u32)
    }

    /// Occupancy of `mode` in the basis state with flat index `index`.
    pub fn occupancy(&self, index: usize, mode: usize) -> usize {
        (index / self.stride(mode)) % self.dim_per_mode()
    }

    /// Flat index of the basis state `|occ[0], occ[1], ...>`.
    pub fn basis_index(&self, occ: &[usize]) -> Result<usize> {
        if occ.len() != self.modes {
            return Err(Error::SpaceMismatch);
        }
        let mut idx = 0;
        for (mode, &n) in occ.iter().enumerate() {
            if n > self.cutoff {
                return Err(Error::OccupancyOutOfRange {
                    occupancy: n,
                    cutoff: self.cutoff,
                });
            }
            idx += n * self.stride(mode);
        }
        Ok(idx)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.modes {
            return Err(Error::ModeOutOfRange {
                mode,
                modes: self.modes,
            });
        }
        Ok(())
    }

    /// Space with one mode removed (for partial contractions).
    fn drop_mode(&self) -> Result<Self> {
        FockSpaceDesc::new(self.modes - 1, self.cutoff)
    }
}

/// Dense operator on a truncated Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator<T: Real> {
    space: FockSpaceDesc,
    mat: DMatrix<Cplx<T>>,
}

impl<T: Real> FockOperator<T> {
    pub fn from_matrix(space: FockSpaceDesc, mat: DMatrix<Cplx<T>>) -> Result<Self> {
        if mat.nrows() != space.total_dim() || mat.ncols() != space.total_dim() {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self { space, mat })
    }

    pub fn identity(space: FockSpaceDesc) -> Self {
        let d = space.total_dim();
        Self {
            space,
            mat: DMatrix::identity(d, d),
        }
    }

    pub fn zeros(space: FockSpaceDesc) -> Self {
        let d = space.total_dim();
        Self {
            space,
            mat: DMatrix::zeros(d, d),
        }
    }

    pub fn space(&self) -> FockSpaceDesc {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Cplx<T>> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Cplx<T>> {
        self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> Cplx<T> {
        self.mat[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space,
            mat: self.mat.adjoint(),
        }
    }

    pub fn scale(&self, factor: T) -> Self {
        Self {
            space: self.space,
            mat: &self.mat * re(factor),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self {
            space: self.space,
            mat: &self.mat + &other.mat,
        })
    }

    /// Operator product `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self {
            space: self.space,
            mat: &self.mat * &other.mat,
        })
    }

    /// Conjugation `u† * self * u`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        if self.space != u.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self {
            space: self.space,
            mat: u.mat.adjoint() * &self.mat * &u.mat,
        })
    }

    pub fn apply(&self, v: &FockVector<T>) -> Result<FockVector<T>> {
        if self.space != v.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(FockVector {
            space: v.space,
            vec: &self.mat * &v.vec,
        })
    }

    /// `<v| self |v>`.
    pub fn expectation_value(&self, v: &FockVector<T>) -> Result<Cplx<T>> {
        if self.space != v.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(v.vec.dotc(&(&self.mat * &v.vec)))
    }

    /// Real part of `<v| self |v>`; the right notion for observables.
    pub fn expectation(&self, v: &FockVector<T>) -> Result<T> {
        Ok(self.expectation_value(v)?.re)
    }

    /// Largest entrywise deviation from Hermiticity, `max |A - A†|`.
    pub fn hermiticity_deviation(&self) -> T {
        let adj = self.mat.adjoint();
        let mut dev = T::zero();
        for (a, b) in self.mat.iter().zip(adj.iter()) {
            dev = dev.max(cmod(a - b));
        }
        dev
    }

    pub fn ensure_hermitian(&self, tol: T) -> Result<()> {
        let dev = self.hermiticity_deviation();
        if dev > tol {
            return Err(Error::NotHermitian {
                deviation: dev.as_f64(),
            });
        }
        Ok(())
    }

    /// Replace the matrix by its Hermitian part `(A + A†)/2`.
    pub fn hermitized(&self) -> Self {
        let mat = (&self.mat + self.mat.adjoint()) * re(T::of(0.5));
        Self {
            space: self.space,
            mat,
        }
    }
}

/// Kronecker/tensor product; the first factor occupies the lower mode
/// indices. Cutoffs must agree.
pub fn tensor<T: Real>(a: &FockOperator<T>, b: &FockOperator<T>) -> Result<FockOperator<T>> {
    if a.space.cutoff != b.space.cutoff {
        return Err(Error::SpaceMismatch);
    }
    let space = FockSpaceDesc::new(a.space.modes + b.space.modes, a.space.cutoff)?;
    Ok(FockOperator {
        space,
        mat: a.mat.kronecker(&b.mat),
    })
}

/// State vector on a truncated Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector<T: Real> {
    space: FockSpaceDesc,
    vec: DVector<Cplx<T>>,
}

impl<T: Real> FockVector<T> {
    pub fn from_amplitudes(space: FockSpaceDesc, vec: DVector<Cplx<T>>) -> Result<Self> {
        if vec.len() != space.total_dim() {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self { space, vec })
    }

    pub fn vacuum(space: FockSpaceDesc) -> Self {
        let mut vec = DVector::zeros(space.total_dim());
        vec[0] = re(T::one());
        Self { space, vec }
    }

    pub fn basis_state(space: FockSpaceDesc, occ: &[usize]) -> Result<Self> {
        let idx = space.basis_index(occ)?;
        let mut vec = DVector::zeros(space.total_dim());
        vec[idx] = re(T::one());
        Ok(Self { space, vec })
    }

    pub fn space(&self) -> FockSpaceDesc {
        self.space
    }

    pub fn amplitudes(&self) -> &DVector<Cplx<T>> {
        &self.vec
    }

    pub fn amplitude(&self, index: usize) -> Cplx<T> {
        self.vec[index]
    }

    pub fn norm(&self) -> T {
        self.vec.norm()
    }

    /// `<self|other>` with the left argument conjugated.
    pub fn dot(&self, other: &Self) -> Result<Cplx<T>> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.vec.dotc(&other.vec))
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self {
            space: self.space,
            vec: &self.vec / re(n),
        }
    }

    pub fn ensure_normalized(&self, tol: T) -> Result<()> {
        let dev = (self.norm() - T::one()).abs();
        if dev > tol {
            return Err(Error::NotNormalized {
                deviation: dev.as_f64(),
            });
        }
        Ok(())
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.space.cutoff != other.space.cutoff {
            return Err(Error::SpaceMismatch);
        }
        let space = FockSpaceDesc::new(self.space.modes + other.space.modes, self.space.cutoff)?;
        Ok(Self {
            space,
            vec: self.vec.kronecker(&other.vec),
        })
    }

    /// Contract one mode against a single-mode bra: returns
    /// `(<bra| on `mode`) ⊗ 1 |self>` on the remaining modes.
    pub fn contract_mode(&self, mode: usize, bra: &FockVector<T>) -> Result<Self> {
        self.space.check_mode(mode)?;
        if bra.space.modes != 1 || bra.space.cutoff != self.space.cutoff {
            return Err(Error::SpaceMismatch);
        }
        let reduced = self.space.drop_mode()?;
        let d = self.space.dim_per_mode();
        let stride = self.space.stride(mode);
        let block = stride * d;
        let mut out = DVector::zeros(reduced.total_dim());
        for (i, amp) in self.vec.iter().enumerate() {
            let n = (i / stride) % d;
            let r = (i / block) * stride + i % stride;
            out[r] += bra.vec[n].conj() * amp;
        }
        Ok(Self {
            space: reduced,
            vec: out,
        })
    }

    /// Probability mass on basis states where some mode sits at the top
    /// truncation level. The standard under-resolution diagnostic.
    pub fn top_level_mass(&self) -> T {
        let cutoff = self.space.cutoff;
        let mut mass = T::zero();
        for (i, amp) in self.vec.iter().enumerate() {
            let edge = (0..self.space.modes).any(|m| self.space.occupancy(i, m) == cutoff);
            if edge {
                mass += amp.norm_sqr();
            }
        }
        mass
    }

    /// Probability mass outside the basis states selected by `keep`.
    pub fn leakage_outside(&self, keep: impl Fn(usize) -> bool) -> T {
        let mut mass = T::zero();
        for (i, amp) in self.vec.iter().enumerate() {
            if !keep(i) {
                mass += amp.norm_sqr();
            }
        }
        mass
    }
}

/// Annihilation operator embedded on `mode`: `<n-1|a|n> = sqrt(n)`, identity
/// on the other modes.
pub fn make_annihilation<T: Real>(space: FockSpaceDesc, mode: usize) -> Result<FockOperator<T>> {
    space.check_mode(mode)?;
    let d = space.dim_per_mode();
    let mut a = DMatrix::<Cplx<T>>::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = re(T::of(n as f64).sqrt());
    }
    embed_single_mode(space, mode, &a)
}

/// Creation operator on `mode` (adjoint of [`make_annihilation`]).
pub fn make_creation<T: Real>(space: FockSpaceDesc, mode: usize) -> Result<FockOperator<T>> {
    Ok(make_annihilation(space, mode)?.adjoint())
}

/// Number operator `a† a` on `mode`.
pub fn make_number<T: Real>(space: FockSpaceDesc, mode: usize) -> Result<FockOperator<T>> {
    space.check_mode(mode)?;
    let d = space.dim_per_mode();
    let mut n_op = DMatrix::<Cplx<T>>::zeros(d, d);
    for n in 0..d {
        n_op[(n, n)] = re(T::of(n as f64));
    }
    embed_single_mode(space, mode, &n_op)
}

/// Quadratures `Q = (a + a†)/sqrt(2)` and `P = i(a† - a)/sqrt(2)` on `mode`,
/// so that `[Q, P] = i` away from the truncation edge and the vacuum variance
/// is 1/2.
pub fn make_quadratures<T: Real>(
    space: FockSpaceDesc,
    mode: usize,
) -> Result<(FockOperator<T>, FockOperator<T>)> {
    space.check_mode(mode)?;
    let d = space.dim_per_mode();
    let inv_sqrt2 = T::one() / T::of(2.0).sqrt();
    let mut q = DMatrix::<Cplx<T>>::zeros(d, d);
    let mut p = DMatrix::<Cplx<T>>::zeros(d, d);
    for n in 1..d {
        let s = T::of(n as f64).sqrt() * inv_sqrt2;
        q[(n - 1, n)] = re(s);
        q[(n, n - 1)] = re(s);
        // i(a† - a)/sqrt(2): upper diagonal -i s, lower diagonal +i s
        p[(n - 1, n)] = Complex::new(T::zero(), -s);
        p[(n, n - 1)] = Complex::new(T::zero(), s);
    }
    Ok((
        embed_single_mode(space, mode, &q)?,
        embed_single_mode(space, mode, &p)?,
    ))
}

/// Place a single-mode matrix on `mode` of a multi-mode space, identity
/// elsewhere.
pub fn embed_single_mode<T: Real>(
    space: FockSpaceDesc,
    mode: usize,
    single: &DMatrix<Cplx<T>>,
) -> Result<FockOperator<T>> {
    space.check_mode(mode)?;
    let d = space.dim_per_mode();
    if single.nrows() != d || single.ncols() != d {
        return Err(Error::SpaceMismatch);
    }
    let mut mat = single.clone();
    for m in 0..space.modes {
        if m < mode {
            let eye = DMatrix::<Cplx<T>>::identity(d, d);
            mat = eye.kronecker(&mat);
        } else if m > mode {
            let eye = DMatrix::<Cplx<T>>::identity(d, d);
            mat = mat.kronecker(&eye);
        }
    }
    FockOperator::from_matrix(space, mat)
}

/// Coherent state `|alpha>` on a single-mode space.
///
/// Amplitudes are the Poissonian `exp(-|alpha|^2/2) alpha^n / sqrt(n!)`,
/// renormalized over the truncated space. Returns the state together with the
/// pre-normalization deficit `1 - sum |c_n|^2`; a deficit above
/// [`COHERENT_DEFICIT_WARN`] means the cutoff is too small for this
/// amplitude (rule of thumb: `|alpha|^2 <~ cutoff/4`).
pub fn coherent_state<T: Real>(alpha: Cplx<T>, space: FockSpaceDesc) -> Result<(FockVector<T>, T)> {
    if space.modes != 1 {
        return Err(Error::ModeCountUnsupported { modes: space.modes });
    }
    let d = space.dim_per_mode();
    let mut vec = DVector::<Cplx<T>>::zeros(d);
    let norm_sq = alpha.norm_sqr();
    let mut c = re::<T>((-norm_sq / T::of(2.0)).exp());
    vec[0] = c;
    for n in 1..d {
        c = c * alpha / re(T::of(n as f64).sqrt());
        vec[n] = c;
    }
    let mass: T = vec
        .iter()
        .map(|z| z.norm_sqr())
        .fold(T::zero(), |a, b| a + b);
    let deficit = T::one() - mass;
    let state = FockVector {
        space,
        vec: &vec / re(mass.sqrt()),
    };
    Ok((state, deficit))
}

/// Whether a coherent-state preparation deficit warrants a truncation
/// warning.
pub fn coherent_truncation_warning<T: Real>(deficit: T) -> bool {
    deficit > T::of(COHERENT_DEFICIT_WARN)
}

/// Displacement operator `D(alpha) = exp(alpha a† - conj(alpha) a)` on
/// `mode`, materialized column by column through the exponential action.
/// Unitary up to truncation; `D(alpha)|0>` matches [`coherent_state`].
pub fn displacement<T: Real>(
    alpha: Cplx<T>,
    space: FockSpaceDesc,
    mode: usize,
) -> Result<FockOperator<T>> {
    space.check_mode(mode)?;
    let gen = LadderGenerator::displacement(space, mode, alpha)?;
    let dim = space.total_dim();
    let tol = T::of(1e-14);
    let mut mat = DMatrix::<Cplx<T>>::zeros(dim, dim);
    let mut basis = DVector::<Cplx<T>>::zeros(dim);
    for j in 0..dim {
        basis.fill(Complex::new(T::zero(), T::zero()));
        basis[j] = re(T::one());
        let col = expm_action_op(&gen, &basis, tol)?;
        mat.set_column(j, &col);
    }
    FockOperator::from_matrix(space, mat)
}

/// Ladder direction of a generator factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Raise,
    Lower,
}

#[derive(Clone, Debug)]
struct LadderTerm<T: Real> {
    coeff: Cplx<T>,
    /// Factors in operator order; the right-most factor acts first.
    factors: Vec<(usize, Ladder)>,
}

/// Sparse multi-mode ladder polynomial `sum_k coeff_k * prod_j L_{k,j}`,
/// applied matrix-free. This is how circuit generators act on three-mode
/// vectors without ever materializing a full matrix.
#[derive(Clone, Debug)]
pub struct LadderGenerator<T: Real> {
    space: FockSpaceDesc,
    terms: Vec<LadderTerm<T>>,
}

impl<T: Real> LadderGenerator<T> {
    fn new(space: FockSpaceDesc, terms: Vec<LadderTerm<T>>) -> Result<Self> {
        for t in &terms {
            for &(mode, _) in &t.factors {
                space.check_mode(mode)?;
            }
        }
        Ok(Self { space, terms })
    }

    /// `r (a† b† - a b)` on modes `(m_a, m_b)`: the two-mode squeezer
    /// generator.
    pub fn two_mode_squeeze(space: FockSpaceDesc, m_a: usize, m_b: usize, r: T) -> Result<Self> {
        Self::new(
            space,
            vec![
                LadderTerm {
                    coeff: re(r),
                    factors: vec![(m_a, Ladder::Raise), (m_b, Ladder::Raise)],
                },
                LadderTerm {
                    coeff: re(-r),
                    factors: vec![(m_a, Ladder::Lower), (m_b, Ladder::Lower)],
                },
            ],
        )
    }

    /// `theta (a† b - a b†)` on modes `(m_a, m_b)`: the beam-splitter
    /// generator.
    pub fn beam_splitter(space: FockSpaceDesc, m_a: usize, m_b: usize, theta: T) -> Result<Self> {
        Self::new(
            space,
            vec![
                LadderTerm {
                    coeff: re(theta),
                    factors: vec![(m_a, Ladder::Raise), (m_b, Ladder::Lower)],
                },
                LadderTerm {
                    coeff: re(-theta),
                    factors: vec![(m_a, Ladder::Lower), (m_b, Ladder::Raise)],
                },
            ],
        )
    }

    /// `alpha a† - conj(alpha) a` on `mode`: the displacement generator.
    pub fn displacement(space: FockSpaceDesc, mode: usize, alpha: Cplx<T>) -> Result<Self> {
        Self::new(
            space,
            vec![
                LadderTerm {
                    coeff: alpha,
                    factors: vec![(mode, Ladder::Raise)],
                },
                LadderTerm {
                    coeff: -alpha.conj(),
                    factors: vec![(mode, Ladder::Lower)],
                },
            ],
        )
    }

    /// `i theta N` on `mode`: the number-phase generator.
    pub fn number_phase(space: FockSpaceDesc, mode: usize, theta: T) -> Result<Self> {
        Self::new(
            space,
            vec![LadderTerm {
                coeff: Complex::new(T::zero(), theta),
                factors: vec![(mode, Ladder::Raise), (mode, Ladder::Lower)],
            }],
        )
    }
}

/// Matrix-free linear operator interface for the exponential action.
pub trait LinearOp<T: Real> {
    fn dim(&self) -> usize;

    /// `y += self * x`.
    fn apply_add(&self, x: &DVector<Cplx<T>>, y: &mut DVector<Cplx<T>>);

    /// Upper bound on an operator norm, used to pick the scaling depth of
    /// the exponential action.
    fn norm_upper_bound(&self) -> T;
}

impl<T: Real> LinearOp<T> for FockOperator<T> {
    fn dim(&self) -> usize {
        self.mat.nrows()
    }

    fn apply_add(&self, x: &DVector<Cplx<T>>, y: &mut DVector<Cplx<T>>) {
        y.gemv(re(T::one()), &self.mat, x, re(T::one()));
    }

    fn norm_upper_bound(&self) -> T {
        // max absolute column sum (the induced 1-norm)
        let mut best = T::zero();
        for j in 0..self.mat.ncols() {
            let s = self
                .mat
                .column(j)
                .iter()
                .map(|z| cmod(*z))
                .fold(T::zero(), |a, b| a + b);
            best = best.max(s);
        }
        best
    }
}

impl<T: Real> LinearOp<T> for LadderGenerator<T> {
    fn dim(&self) -> usize {
        self.space.total_dim()
    }

    fn apply_add(&self, x: &DVector<Cplx<T>>, y: &mut DVector<Cplx<T>>) {
        let space = self.space;
        let d = space.dim_per_mode();
        for term in &self.terms {
            for (i, amp) in x.iter().enumerate() {
                if amp.norm_sqr() == T::zero() {
                    continue;
                }
                let mut weight = T::one();
                let mut target = i;
                let mut dead = false;
                for &(mode, ladder) in term.factors.iter().rev() {
                    let stride = space.stride(mode);
                    let n = (target / stride) % d;
                    match ladder {
                        Ladder::Lower => {
                            if n == 0 {
                                dead = true;
                                break;
                            }
                            weight *= T::of(n as f64).sqrt();
                            target -= stride;
                        }
                        Ladder::Raise => {
                            if n + 1 >= d {
                                dead = true;
                                break;
                            }
                            weight *= T::of((n + 1) as f64).sqrt();
                            target += stride;
                        }
                    }
                }
                if !dead {
                    y[target] += term.coeff * re::<T>(weight) * amp;
                }
            }
        }
    }

    fn norm_upper_bound(&self) -> T {
        let d = T::of(self.space.dim_per_mode() as f64);
        self.terms
            .iter()
            .map(|t| cmod(t.coeff) * d.sqrt().powi(t.factors.len() as i32))
            .fold(T::zero(), |a, b| a + b)
    }
}

const EXPM_MAX_TERMS: usize = 64;
const EXPM_MAX_SCALING: u32 = 32;

/// `exp(op) v` for an arbitrary [`LinearOp`], by segmented Taylor summation:
/// `exp(op) = (exp(op/m))^m` with `m` a power of two chosen from the norm
/// bound, each segment summed until the term norm drops below the tolerance.
pub fn expm_action_op<T: Real, O: LinearOp<T>>(
    op: &O,
    v: &DVector<Cplx<T>>,
    tol: T,
) -> Result<DVector<Cplx<T>>> {
    let nb = op.norm_upper_bound();
    let mut s: u32 = 0;
    while (T::of(2.0)).powi(s as i32) < nb && s < EXPM_MAX_SCALING {
        s += 1;
    }
    let m = 1usize << s;
    let inv_m = T::one() / T::of(m as f64);
    let scale = v.norm().max(T::one());
    let seg_tol = (tol * scale / T::of(m as f64)).max(T::of(1e-300));

    let mut current = v.clone();
    let mut term = DVector::<Cplx<T>>::zeros(v.len());
    for _ in 0..m {
        let mut acc = current.clone();
        term.copy_from(&current);
        let mut converged = false;
        let mut last_norm = T::zero();
        for k in 1..=EXPM_MAX_TERMS {
            let mut next = DVector::<Cplx<T>>::zeros(v.len());
            op.apply_add(&term, &mut next);
            next *= re::<T>(inv_m / T::of(k as f64));
            acc += &next;
            last_norm = next.norm();
            term = next;
            if last_norm <= seg_tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::ExpmDidNotConverge {
                residual: (last_norm / scale).as_f64(),
            });
        }
        current = acc;
    }
    Ok(current)
}

/// `exp(G) v` for an anti-Hermitian generator `G` given as a dense operator.
///
/// The anti-Hermiticity precondition is validated entrywise; norm is
/// preserved up to a small multiple of `tol`.
pub fn expm_action<T: Real>(
    generator: &FockOperator<T>,
    v: &FockVector<T>,
    tol: T,
) -> Result<FockVector<T>> {
    if generator.space != v.space {
        return Err(Error::SpaceMismatch);
    }
    let adj = generator.mat.adjoint();
    let mut dev = T::zero();
    for (a, b) in generator.mat.iter().zip(adj.iter()) {
        dev = dev.max(cmod(a + b));
    }
    if dev > T::of(ANTI_HERMITICITY_TOL) {
        return Err(Error::NotAntiHermitian {
            deviation: dev.as_f64(),
        });
    }
    let vec = expm_action_op(generator, &v.vec, tol)?;
    Ok(FockVector {
        space: v.space,
        vec,
    })
}
