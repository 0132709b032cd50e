//! The spectral change of variables ν(λ).
//!
//! For a real transport coefficient `a`, ν(λ) is the unique root of
//!
//! ```text
//! ν³ − aν = λ³
//! ```
//!
//! with ν(λ) = λ + (a/3)λ⁻¹ + O(λ⁻²) as λ → ∞. Outside a safe radius `R`
//! the three roots of the cubic are well separated and Newton iteration from
//! the two-term asymptotic seed converges to the principal branch. The map
//! preserves both half-planes and the real axis, and satisfies the
//! conjugation symmetry ν(λ̄) = conj(ν(λ)).
//!
//! Writing α = e^{2πi/3}, the three points ν(λ), ν(αλ), ν(α²λ) are exactly
//! the three roots of the same cubic (because (αλ)³ = λ³), which yields the
//! Vieta-type summation identities checked by [`vieta_residual`]. These
//! identities drive all the cancellation arguments behind the solution
//! formulae, so they double as the primary correctness oracle for the map.

use num_complex::Complex64;

use crate::{Error, Result, C64};

/// Primitive cube root of unity α = e^{2πi/3}.
pub const ALPHA: C64 = Complex64 {
    re: -0.5,
    im: 0.866_025_403_784_438_6,
};

/// α² = e^{−2πi/3}.
pub const ALPHA2: C64 = Complex64 {
    re: -0.5,
    im: -0.866_025_403_784_438_6,
};

/// Returns α^j for j ∈ {0, 1, 2} (j is reduced mod 3).
pub fn alpha_pow(j: u32) -> C64 {
    match j % 3 {
        0 => C64::new(1.0, 0.0),
        1 => ALPHA,
        _ => ALPHA2,
    }
}

/// Safe radius for the transport coefficient `a`: outside `|λ| ≥ R` the
/// principal root is isolated and Newton from the asymptotic seed converges.
///
/// The formula `R = max(2, 3·√(|a|+1))` keeps `λ³` well clear of the critical
/// values ±2(a/3)^{3/2} of ν³ − aν where two branches collide; it is
/// validated by a circle-sweep test before use.
pub fn min_radius(a: f64) -> f64 {
    2.0_f64.max(3.0 * (a.abs() + 1.0).sqrt())
}

/// The spectral map for one edge, carrying its transport coefficient and
/// safe radius.
///
/// # Examples
///
/// ```
/// use lkdv_graph::nu_map::NuMap;
/// use num_complex::Complex64;
///
/// let map = NuMap::new(3.0);
/// let lam = Complex64::new(10.0, 0.0);
/// let nu = map.nu(lam).unwrap();
/// // ν ≈ λ + a/(3λ) for large λ.
/// assert!((nu - (lam + 3.0 / (3.0 * lam))).norm() < 0.01);
/// // Exact cubic residual.
/// assert!((nu * nu * nu - 3.0 * nu - lam * lam * lam).norm() < 1e-9);
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuMap {
    a: f64,
    r: f64,
}

impl NuMap {
    /// Builds the map for transport coefficient `a` with `R = min_radius(a)`.
    pub fn new(a: f64) -> Self {
        NuMap {
            a,
            r: min_radius(a),
        }
    }

    /// Builds the map with an explicitly enlarged safe radius.
    ///
    /// Returns an error if `r` is below `min_radius(a)`.
    pub fn with_radius(a: f64, r: f64) -> Result<Self> {
        if r < min_radius(a) {
            return Err(Error::Domain(format!(
                "radius {r} below minimum {} for a = {a}",
                min_radius(a)
            )));
        }
        Ok(NuMap { a, r })
    }

    /// The transport coefficient a.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// The safe radius R.
    pub fn radius(&self) -> f64 {
        self.r
    }

    fn check_domain(&self, lam: C64) -> Result<()> {
        if lam.norm() <= self.r {
            return Err(Error::Domain(format!(
                "|λ| = {} inside protected disc of radius {}",
                lam.norm(),
                self.r
            )));
        }
        Ok(())
    }

    /// Evaluates ν(λ) by Newton iteration on p(ν) = ν³ − aν − λ³ seeded at
    /// the two-term asymptotic λ + a/(3λ).
    pub fn nu(&self, lam: C64) -> Result<C64> {
        self.check_domain(lam)?;
        let lam3 = lam * lam * lam;
        let a = C64::new(self.a, 0.0);
        let mut nu = lam + a / (3.0 * lam);
        for _ in 0..50 {
            let p = nu * nu * nu - a * nu - lam3;
            let dp = 3.0 * nu * nu - a;
            let step = p / dp;
            nu -= step;
            if step.norm() <= 1e-15 * nu.norm().max(1e-300) {
                return Ok(nu);
            }
        }
        // Accept if the final residual is already at the contract level;
        // otherwise report non-convergence (signals the radius is too small).
        let res = (nu * nu * nu - a * nu - lam3).norm();
        if res <= 1e-13 * lam.norm().powi(3).max(1.0) {
            Ok(nu)
        } else {
            Err(Error::Convergence(format!(
                "Newton failed for ν at λ = {lam} (residual {res:.3e})"
            )))
        }
    }

    /// Evaluates ν′(λ) = 3λ² / (3ν(λ)² − a), the implicit derivative of the
    /// defining cubic; ν′(λ) = 1 + O(λ⁻²).
    pub fn nu_prime(&self, lam: C64) -> Result<C64> {
        let nu = self.nu(lam)?;
        let denom = 3.0 * nu * nu - C64::new(self.a, 0.0);
        if denom.norm() < 1e-12 {
            return Err(Error::Singular(format!(
                "3ν² − a vanished at λ = {lam}; radius contract violated"
            )));
        }
        Ok(3.0 * lam * lam / denom)
    }

    /// Evaluates both ν and ν′ with a single Newton solve.
    pub fn nu_and_prime(&self, lam: C64) -> Result<(C64, C64)> {
        let nu = self.nu(lam)?;
        let denom = 3.0 * nu * nu - C64::new(self.a, 0.0);
        if denom.norm() < 1e-12 {
            return Err(Error::Singular(format!(
                "3ν² − a vanished at λ = {lam}; radius contract violated"
            )));
        }
        Ok((nu, 3.0 * lam * lam / denom))
    }

    /// Evaluates the inverse map: the cube root λ of μ³ − aμ nearest μ, so
    /// that `nu(nu_inverse(μ)) = μ`.
    ///
    /// Requires `|μ| > R·1.6` so the image of the inverse stays in `|λ| > R`.
    pub fn nu_inverse(&self, mu: C64) -> Result<C64> {
        if mu.norm() <= self.r * 1.6 {
            return Err(Error::Domain(format!(
                "|μ| = {} must exceed R·(1 + 0.6) = {}",
                mu.norm(),
                self.r * 1.6
            )));
        }
        let w = mu * mu * mu - self.a * mu;
        // Principal cube root, then select the branch nearest μ.
        let root = w.powf(1.0 / 3.0);
        let mut best = root;
        let mut best_dist = (root - mu).norm();
        for j in 1..3 {
            let cand = root * alpha_pow(j);
            let d = (cand - mu).norm();
            if d < best_dist {
                best = cand;
                best_dist = d;
            }
        }
        Ok(best)
    }
}

/// Residual of the ν summation identities at λ.
///
/// Family 1 (k ∈ {0, 1, 2, 3}):
///
/// ```text
/// Σ_{j=0}^{2} α^j ν(α^jλ)^k ν′(α^jλ)  =  { 0   for k ∈ {0, 1, 3}
///                                        { 3λ² for k = 2
/// ```
///
/// Family 2 (k ∈ {0, 1, 2}):
///
/// ```text
/// Σ_{j=0}^{2} α^j ν(α^jλ)^k (a − ν(α^jλ)²) ν′(α^jλ)  =  { −3λ² for k = 0
///                                                       { 0    for k ∈ {1, 2}
/// ```
///
/// Returns the (complex) difference LHS − RHS; its magnitude should sit at
/// round-off scale relative to max(1, |λ|²).
///
/// # Evaluation strategy
///
/// Substituting ν′(α^jλ) = 3(α^jλ)²/(3ν² − a) and α^{3j} = 1 turns every
/// sum into 3λ² · Σ_j ν_j^k / P_j (with P_j = 3ν_j² − a), optionally with
/// the extra factor (a − ν_j²). In these forms the summands are O(λ^{k−2}),
/// so the cancellation down to the right-hand side costs no λ-powers of
/// precision — except for family 2, k = 2, whose summands are O(λ²) while
/// the sum vanishes. There a naive sum has a round-off floor ~ u·|λ|⁴ that
/// swamps any λ²-relative threshold at large |λ|. For that single case we
/// apply the exact polynomial division
///
/// ```text
/// ν²(a − ν²)/P = −ν²/3 + 2a/9 + (2a²/9)/P
/// ```
///
/// together with Σ_j ν_j² = 2a (Newton's identity for the shared cubic),
/// which collapses the residual to (2a²λ²/3) · Σ_j 1/P_j — an expression
/// with the same roots-sensitivity pattern as the k = 0 case and summands
/// of size O(λ⁻²).
pub fn vieta_residual(map: &NuMap, lam: C64, k: u32, family: u8) -> Result<C64> {
    map.check_domain(lam)?;
    match (family, k) {
        (1, 0..=3) | (2, 0..=2) => {}
        _ => {
            return Err(Error::Domain(format!(
                "identity family {family} has no exponent k = {k}"
            )))
        }
    }
    let a = C64::new(map.a(), 0.0);
    let lam2 = lam * lam;
    // ν_j and P_j = 3ν_j² − a for the three rotations.
    let mut nus = [C64::new(0.0, 0.0); 3];
    let mut ps = [C64::new(0.0, 0.0); 3];
    for j in 0..3 {
        let nu = map.nu(alpha_pow(j as u32) * lam)?;
        let p = 3.0 * nu * nu - a;
        if p.norm() < 1e-12 {
            return Err(Error::Singular(format!(
                "3ν² − a vanished at rotation {j} of λ = {lam}"
            )));
        }
        nus[j] = nu;
        ps[j] = p;
    }
    let s = |k: u32| -> C64 {
        (0..3).map(|j| nus[j].powu(k) / ps[j]).sum()
    };
    let res = match (family, k) {
        (1, 2) => 3.0 * lam2 * (s(2) - 1.0),
        (1, _) => 3.0 * lam2 * s(k),
        (2, 0) => 3.0 * lam2 * (a * s(0) - (s(2) - 1.0)),
        (2, 1) => 3.0 * lam2 * (a * s(1) - s(3)),
        _ => (2.0 / 3.0) * a * a * lam2 * s(0),
    };
    Ok(res)
}
