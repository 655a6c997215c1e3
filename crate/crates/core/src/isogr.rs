//! The isotropic Grassmannian `Gr_B(2, ℂ^{2n})` of 2-planes `V ⊆ V^⊥` for the
//! complex-bilinear form `B(x, y) = Σ x_k y_k`, with its `SO_{2n}`-invariant
//! contact distribution `E = Hom(F, F^⊥/F)` inside `T = Hom(F, ℂ^{2n}/F) ∩ T_{Gr_B}`.
//!
//! A tangent vector at `V` is a map `φ: V → ℂ^{2n}/V`, stored by its images of
//! the two frame columns. Quotient classes are represented by their component
//! Hermitian-orthogonal to `V`; this is only a computational section, and every
//! quantity computed here (membership, `θ`, ranks) is independent of it because
//! `B` vanishes on `V × V`.
//!
//! The contact form is `θ(φ) = B(φ(v_1), v_2)`, the coefficient of the skew form
//! `(v, w) ↦ B(φ(v), w)` against the frame's volume covector; its kernel is `E`.

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

/// Isotropy tolerance for unit-normalized frames.
pub const TAU_ISO: f64 = 1e-9;
/// Tangent-membership and `θ`-vanishing tolerance.
pub const TAU_TAN: f64 = 1e-9;
/// Singular values below this fraction of the largest one count as zero.
pub const RANK_RTOL: f64 = 1e-6;
/// Minimum relative smallest singular value of a frame.
pub const TAU_RANK: f64 = 1e-6;

/// Group elements used per point when measuring invariance.
pub const INVARIANCE_TRIALS: usize = 25;

fn c(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Number of singular values above `RANK_RTOL` times the largest.
pub fn numerical_rank(m: &CMat) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_RTOL * top).count()
}

/// A point of `Gr_B(2, ℂ^{2n})` given by a `2n × 2` frame of full rank.
#[derive(Debug, Clone, PartialEq)]
pub struct IsotropicPoint {
    n: usize,
    frame: CMat,
}

impl IsotropicPoint {
    /// Validates isotropy (relative to the frame's scale) and full rank.
    pub fn new(n: usize, frame: CMat) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidN(n));
        }
        if frame.shape() != (2 * n, 2) {
            return Err(Error::InvalidFrame(format!(
                "expected a {}x2 frame, got {}x{}",
                2 * n,
                frame.nrows(),
                frame.ncols()
            )));
        }
        let sv = frame.clone().svd(false, false).singular_values;
        let (hi, lo) = (sv.max(), sv.min());
        if hi == 0.0 || lo < TAU_RANK * hi {
            return Err(Error::InvalidFrame(format!(
                "frame is rank deficient (singular values {hi:e}, {lo:e})"
            )));
        }
        let p = IsotropicPoint { n, frame };
        let res = p.isotropy_residual() / (hi * hi);
        if res > TAU_ISO {
            return Err(Error::InvalidFrame(format!(
                "frame is not isotropic (relative residual {res:e})"
            )));
        }
        Ok(p)
    }

    /// `W = span{e_1 + i e_2, e_3 + i e_4}`.
    pub fn base(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidN(n));
        }
        let mut f = CMat::zeros(2 * n, 2);
        f[(0, 0)] = c(1.0);
        f[(1, 0)] = Complex::i();
        f[(2, 1)] = c(1.0);
        f[(3, 1)] = Complex::i();
        Self::new(n, f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn frame(&self) -> &CMat {
        &self.frame
    }

    /// Max entry of the `B`-Gram matrix `FᵀF`.
    pub fn isotropy_residual(&self) -> f64 {
        max_abs(&(self.frame.transpose() * &self.frame))
    }

    /// Same plane with a Hermitian-orthonormal frame.
    pub fn normalized(&self) -> Self {
        let q = self.frame.clone().qr().q();
        IsotropicPoint {
            n: self.n,
            frame: q,
        }
    }

    /// `g·V`, keeping the frame `g·F`.
    pub fn act(&self, g: &CMat) -> Result<Self> {
        Self::new(self.n, g * &self.frame)
    }

    /// Orthogonal projector onto the Hermitian complement of `V`.
    fn quotient_projector(&self) -> CMat {
        let q = self.frame.clone().qr().q();
        CMat::identity(2 * self.n, 2 * self.n) - &q * q.adjoint()
    }
}

/// A tangent vector `φ: V → ℂ^{2n}/V`, stored as the canonical lifts of the
/// images of the frame columns.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    phi: CMat,
}

impl TangentVector {
    pub fn phi(&self) -> &CMat {
        &self.phi
    }

    fn flat(&self) -> Vec<C64> {
        self.phi.iter().cloned().collect()
    }
}

/// Reduces an arbitrary lift `φ` (a `2n × 2` matrix) to the canonical representative.
pub fn tangent_from_lift(p: &IsotropicPoint, lift: &CMat) -> TangentVector {
    TangentVector {
        phi: p.quotient_projector() * lift,
    }
}

fn check_antisymmetric(p: &IsotropicPoint, xi: &CMat) -> Result<()> {
    let d = 2 * p.n();
    if xi.shape() != (d, d) {
        return Err(Error::InvalidFrame(format!(
            "expected a {d}x{d} Lie algebra element, got {}x{}",
            xi.nrows(),
            xi.ncols()
        )));
    }
    let res = max_abs(&(xi + xi.transpose()));
    if res > TAU_ISO * max_abs(xi).max(1.0) {
        return Err(Error::NotAntisymmetric(res));
    }
    Ok(())
}

/// Differential of the orbit map: `φ(v) = ξ·v mod V`.
pub fn so_action_tangent(p: &IsotropicPoint, xi: &CMat) -> Result<TangentVector> {
    check_antisymmetric(p, xi)?;
    Ok(tangent_from_lift(p, &(xi * p.frame())))
}

/// Max entry of `(v, w) ↦ B(φ(v), w) + B(v, φ(w))` on the frame; vanishes
/// exactly on `T_{Gr_B}`.
pub fn membership_residual(p: &IsotropicPoint, t: &TangentVector) -> f64 {
    let m = t.phi.transpose() * p.frame();
    max_abs(&(&m + m.transpose()))
}

/// `θ(φ) = B(φ(v_1), v_2)`.
pub fn theta(p: &IsotropicPoint, t: &TangentVector) -> C64 {
    let f = p.frame();
    (0..f.nrows()).map(|k| t.phi[(k, 0)] * f[(k, 1)]).sum()
}

/// `θ` through the `∧²` pairing: `(B(φ v_1, v_2) − B(φ v_2, v_1)) / 2`.
pub fn theta_wedge(p: &IsotropicPoint, t: &TangentVector) -> C64 {
    let m = t.phi.transpose() * p.frame();
    (m[(0, 1)] - m[(1, 0)]) * 0.5
}

/// `φ(V) ⊆ V^⊥`, i.e. the whole form `B(φ(·), ·)` vanishes.
pub fn in_contact_distribution(p: &IsotropicPoint, t: &TangentVector) -> bool {
    max_abs(&(t.phi.transpose() * p.frame())) <= TAU_TAN
}

/// Random element of `so_{2n}(ℂ)`: i.i.d. complex normal entries (real and
/// imaginary parts of variance 1/2), antisymmetrized and scaled by `1/(2n)`.
pub fn random_so(n: usize, rng: &mut impl Rng) -> CMat {
    let d = 2 * n;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let a = CMat::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(re * s, im * s)
    });
    (&a - a.transpose()) * c(0.5 / d as f64)
}

/// Matrix exponential by scaling and squaring around a truncated Taylor series.
pub fn expm(x: &CMat) -> CMat {
    let d = x.nrows();
    let norm = x.norm();
    let mut squarings = 0;
    let mut scaled = x.clone();
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as i32;
        scaled = x * c(0.5f64.powi(squarings));
    }
    let mut sum = CMat::identity(d, d);
    let mut term = CMat::identity(d, d);
    for k in 1..=30 {
        term = &term * &scaled * c(1.0 / k as f64);
        sum += &term;
        if term.norm() < f64::EPSILON * sum.norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Block rotation `R(θ_1) ⊕ … ⊕ R(θ_n)` from the compact maximal torus.
pub fn block_rotation(angles: &[f64]) -> CMat {
    let d = 2 * angles.len();
    let mut g = CMat::zeros(d, d);
    for (k, &t) in angles.iter().enumerate() {
        let (s, co) = t.sin_cos();
        g[(2 * k, 2 * k)] = c(co);
        g[(2 * k, 2 * k + 1)] = c(-s);
        g[(2 * k + 1, 2 * k)] = c(s);
        g[(2 * k + 1, 2 * k + 1)] = c(co);
    }
    g
}

/// Random group element `exp(ξ)` with `ξ` from [`random_so`].
pub fn random_group_element(n: usize, rng: &mut impl Rng) -> CMat {
    expm(&random_so(n, rng))
}

/// A random point of `Gr_B(2, ℂ^{2n})`: the base point moved by a product of
/// three random group elements, with a Hermitian-orthonormal frame.
pub fn random_point(n: usize, rng: &mut impl Rng) -> Result<IsotropicPoint> {
    let mut g = CMat::identity(2 * n, 2 * n);
    for _ in 0..3 {
        g = random_group_element(n, rng) * g;
    }
    Ok(IsotropicPoint::base(n)?.act(&g)?.normalized())
}

fn stack(columns: &[Vec<C64>]) -> CMat {
    let rows = columns.first().map_or(0, Vec::len);
    CMat::from_fn(rows, columns.len(), |i, j| columns[j][i])
}

/// Algebra elements whose orbit tangents form bases of `T` and of `E` at a point.
#[derive(Debug, Clone)]
pub struct OrbitBasis {
    /// `ξ_1..ξ_d` with `d = dim T`.
    pub tangent: Vec<CMat>,
    /// `d − 1` (or `d` if `θ` vanished) combinations of the above lying in the
    /// stabilizer-extended preimage of `E`.
    pub contact: Vec<CMat>,
    pub dim_e: usize,
    /// Largest membership residual seen while sampling.
    pub max_membership_residual: f64,
}

/// Samples `samples` random algebra elements, greedily keeping those whose
/// tangents raise the numerical rank, then splits off the kernel of `θ`.
pub fn orbit_basis(p: &IsotropicPoint, samples: usize, rng: &mut impl Rng) -> Result<OrbitBasis> {
    let n = p.n();
    if samples < 4 * n {
        return Err(Error::InsufficientSamples(format!(
            "{samples} samples requested, need at least {}",
            4 * n
        )));
    }
    let mut xis = Vec::new();
    let mut cols: Vec<Vec<C64>> = Vec::new();
    let mut max_res: f64 = 0.0;
    let mut grew_at_last = false;
    for s in 0..samples {
        let xi = random_so(n, rng);
        let t = so_action_tangent(p, &xi)?;
        max_res = max_res.max(membership_residual(p, &t));
        cols.push(t.flat());
        let rank = numerical_rank(&stack(&cols));
        if rank > xis.len() {
            xis.push(xi);
            grew_at_last = s + 1 == samples;
        } else {
            cols.pop();
        }
    }
    if grew_at_last {
        return Err(Error::InsufficientSamples(format!(
            "tangent rank still growing after {samples} samples"
        )));
    }

    let thetas: Vec<C64> = xis
        .iter()
        .map(|xi| so_action_tangent(p, xi).map(|t| theta(p, &t)))
        .collect::<Result<_>>()?;
    let (pivot, top) = thetas
        .iter()
        .enumerate()
        .map(|(i, z)| (i, z.norm()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });

    let contact: Vec<CMat> = if top <= TAU_TAN {
        xis.clone()
    } else {
        (0..xis.len())
            .filter(|&k| k != pivot)
            .map(|k| &xis[k] - &xis[pivot] * (thetas[k] / thetas[pivot]))
            .collect()
    };
    let contact_cols: Vec<Vec<C64>> = contact
        .iter()
        .map(|xi| so_action_tangent(p, xi).map(|t| t.flat()))
        .collect::<Result<_>>()?;
    let dim_e = numerical_rank(&stack(&contact_cols));

    Ok(OrbitBasis {
        tangent: xis,
        contact,
        dim_e,
        max_membership_residual: max_res,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionAudit {
    pub dim_t: usize,
    pub dim_e: usize,
}

/// Numerical dimensions of the orbit-map image `T` and of `E = T ∩ ker θ`.
pub fn dimension_audit(p: &IsotropicPoint, samples: usize, seed: u64) -> Result<DimensionAudit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = orbit_basis(p, samples, &mut rng)?;
    Ok(DimensionAudit {
        dim_t: b.tangent.len(),
        dim_e: b.dim_e,
    })
}

fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// `Ω[i][j] = f(tangent of [ξ_i, ξ_j])` over the given algebra elements.
pub fn bracket_form(
    p: &IsotropicPoint,
    xis: &[CMat],
    functional: impl Fn(&TangentVector) -> C64,
) -> Result<CMat> {
    let k = xis.len();
    let mut omega = CMat::zeros(k, k);
    for i in 0..k {
        for j in (i + 1)..k {
            let t = so_action_tangent(p, &commutator(&xis[i], &xis[j]))?;
            let v = functional(&t);
            omega[(i, j)] = v;
            omega[(j, i)] = -v;
        }
    }
    Ok(omega)
}

/// Default sample count for basis extraction at rank `n`.
pub fn default_samples(n: usize) -> usize {
    4 * n + 8
}

fn contact_rank_with(p: &IsotropicPoint, basis: &OrbitBasis) -> Result<usize> {
    if basis.dim_e != basis.contact.len() {
        return Err(Error::BasisNotFound(format!(
            "{} candidate vectors span only {} dimensions",
            basis.contact.len(),
            basis.dim_e
        )));
    }
    let omega = bracket_form(p, &basis.contact, |t| theta(p, t))?;
    Ok(numerical_rank(&omega))
}

/// Numerical rank of the bracket form `θ([ξ_i, ξ_j])` on a basis of `E`.
pub fn contact_rank(p: &IsotropicPoint, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = orbit_basis(p, default_samples(p.n()), &mut rng)
        .map_err(|e| Error::BasisNotFound(e.to_string()))?;
    contact_rank_with(p, &basis)
}

/// Pushes `t` at `p` forward by `g` and returns the largest of: isotropy of
/// `g·V`, tangent membership of `g∘φ∘g⁻¹`, and (when `t ∈ E`) `|θ|` at `g·V`.
pub fn push_forward_residual(p: &IsotropicPoint, t: &TangentVector, g: &CMat) -> Result<f64> {
    let q = p.act(g)?;
    let moved = tangent_from_lift(&q, &(g * t.phi()));
    let mut res = q.isotropy_residual().max(membership_residual(&q, &moved));
    if in_contact_distribution(p, t) {
        res = res.max(theta(&q, &moved).norm());
    }
    Ok(res)
}

/// Largest residual over `trials` random group elements acting on a basis of `E` at `p`.
pub fn invariance_residual(p: &IsotropicPoint, trials: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = orbit_basis(p, default_samples(p.n()), &mut rng)?;
    invariance_residual_with(p, &basis, trials, &mut rng)
}

fn invariance_residual_with(
    p: &IsotropicPoint,
    basis: &OrbitBasis,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<f64> {
    let vectors: Vec<TangentVector> = basis
        .contact
        .iter()
        .map(|xi| so_action_tangent(p, xi))
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let g = random_group_element(p.n(), rng);
        for t in &vectors {
            worst = worst.max(push_forward_residual(p, t, &g)?);
        }
    }
    Ok(worst)
}

/// Per-point audit record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrassmannianRecord {
    pub n: usize,
    pub seed: u64,
    pub trial: usize,
    /// `"base"` or `"random"`.
    pub point: String,
    #[serde(rename = "dimT")]
    pub dim_t: usize,
    #[serde(rename = "dimE")]
    pub dim_e: usize,
    pub contact_rank: usize,
    pub max_residual: f64,
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Audits one point: dimensions, contact rank, and the worst membership or
/// invariance residual over [`INVARIANCE_TRIALS`] random group elements.
pub fn audit_point(
    p: &IsotropicPoint,
    rng: &mut impl Rng,
) -> Result<(DimensionAudit, usize, f64)> {
    let basis = orbit_basis(p, default_samples(p.n()), rng)?;
    let rank = contact_rank_with(p, &basis)?;
    let inv = invariance_residual_with(p, &basis, INVARIANCE_TRIALS, rng)?;
    let audit = DimensionAudit {
        dim_t: basis.tangent.len(),
        dim_e: basis.dim_e,
    };
    Ok((audit, rank, inv.max(basis.max_membership_residual)))
}

/// Trial 0 audits the base point; trials `1..trials` audit random points.
/// Each trial draws from its own stream of the seeded generator.
pub fn run_trials(n: usize, trials: usize, seed: u64) -> Result<Vec<GrassmannianRecord>> {
    let base = IsotropicPoint::base(n)?;
    (0..trials.max(1))
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let (p, kind) = if trial == 0 {
                (base.clone(), "base")
            } else {
                (random_point(n, &mut rng)?, "random")
            };
            let (audit, rank, res) = audit_point(&p, &mut rng)?;
            Ok(GrassmannianRecord {
                n,
                seed,
                trial,
                point: kind.to_string(),
                dim_t: audit.dim_t,
                dim_e: audit.dim_e,
                contact_rank: rank,
                max_residual: res,
            })
        })
        .collect()
}
