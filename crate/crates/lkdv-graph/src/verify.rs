//! Cross-validation batteries for the contour solver.
//!
//! Four suites, all reporting through [`VerificationReport`]:
//!
//! * [`run_identity_suite`] — algebraic symmetries of the spectral map
//!   ν(λ) over a cross product of transport coefficients and λ samples,
//!   plus a deliberately corrupted variant ([`run_identity_suite_corrupted`])
//!   acting as a negative control.
//! * [`run_deformation_suite`] — pairs of independent quadrature routes for
//!   the same integral: the Fourier-type term on differently dipped axis
//!   contours, each Cramer-ratio term of the sector integral on the plain,
//!   rotated and half-rotated sector boundaries, and the φ/ψ split of a
//!   transform (boundary-term sum on an offset contour, remainder on the
//!   plain sector boundary) against the single-contour route.
//! * [`run_problem_suite`] — residual reports for a solved configuration:
//!   vertex coupling relations, recovery of prescribed boundary histories,
//!   initial-condition recovery at small time, reality of the field, a
//!   finite-difference residual of the PDE itself, and (loop/source) the
//!   closed-form determinant cross-check.
//! * [`check_global_relation`] — the consistency relation tying the spatial
//!   transform of the *computed* solution at the spectral point ν_e(λ) to
//!   the initial-data transform and the solved boundary transforms. Every
//!   term is produced by an independent quadrature.
//!
//! A check passes iff `metric ≤ threshold`. Checks that could not be
//! executed are recorded (with the error in `detail`) rather than dropped,
//! so a report always accounts for everything that was attempted.

use std::fmt::Write as _;

use crate::contours::{
    boundary_d, boundary_d_offset, boundary_d_rotated, integrate, real_axis_shifted,
    ContourConfig, Path, Quadrature,
};
use crate::nu_map::{alpha_pow, min_radius, vieta_residual, NuMap};
use crate::pw_data::{PiecewisePoly, Side};
use crate::solver::{
    data_integrand_term, solve_grid, vertex_values, SolveRequest, VertexEnd, VertexValue,
};
use crate::spectral_system::{
    assemble, expanded_delta_crosscheck, wellposedness_check, DefectKind, DefectProblem,
    EdgeData, EdgeLabel, VertexCoupling,
};
use crate::{Error, Result, C64};

/// Outcome of a single check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    /// Executed and `metric ≤ threshold`.
    Pass,
    /// Executed and `metric > threshold`, or the check could not run.
    Fail,
    /// Not applicable to the configuration under test.
    Skipped,
}

/// One named check: the measured metric and the threshold it was held to.
#[derive(Debug, Clone)]
pub struct Check {
    /// Stable identifier (no commas; safe for the CSV serialization).
    pub name: String,
    /// Pass/fail/skipped.
    pub status: CheckStatus,
    /// Measured value (finite for every executed check).
    pub metric: f64,
    /// Acceptance bound; pass iff `metric ≤ threshold`.
    pub threshold: f64,
    /// Free-form context: sample point, error estimates, failure cause.
    pub detail: String,
}

impl Check {
    /// An executed check; the status is derived from metric vs threshold.
    fn executed(name: String, metric: f64, threshold: f64, detail: String) -> Check {
        let status = if metric.is_finite() && metric <= threshold {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        let metric = if metric.is_finite() { metric } else { f64::MAX };
        Check {
            name,
            status,
            metric,
            threshold,
            detail,
        }
    }

    /// A check that could not run; recorded as a failure with the cause.
    fn errored(name: String, threshold: f64, err: &Error) -> Check {
        Check {
            name,
            status: CheckStatus::Fail,
            metric: f64::MAX,
            threshold,
            detail: format!("error: {err}"),
        }
    }

    /// A check that does not apply to the configuration.
    fn skipped(name: String, detail: String) -> Check {
        Check {
            name,
            status: CheckStatus::Skipped,
            metric: 0.0,
            threshold: 0.0,
            detail,
        }
    }
}

/// A flat list of checks produced by one suite run.
#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    /// The checks, in execution order.
    pub checks: Vec<Check>,
}

impl VerificationReport {
    /// Appends one check.
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Appends every check of another report.
    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    /// True iff no check failed (skipped checks do not count as failures).
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    /// The failed checks.
    pub fn failures(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .collect()
    }

    /// Line-oriented human-readable rendering, one check per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "SKIP",
            };
            let _ = writeln!(
                out,
                "{status} {:<52} metric {:>12.5e}  threshold {:>9.3e}  {}",
                c.name, c.metric, c.threshold, c.detail
            );
        }
        out
    }

    /// Machine-readable CSV: `name,metric,threshold,status`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,metric,threshold,status\n");
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "fail",
                CheckStatus::Skipped => "skipped",
            };
            let _ = writeln!(out, "{},{:e},{:e},{status}", c.name, c.metric, c.threshold);
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Identity suite
// ---------------------------------------------------------------------------

/// Transport coefficients exercised by the default identity run.
pub fn default_identity_a_values() -> Vec<f64> {
    vec![-5.0, 0.0, 0.3, 4.0]
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_f64(state: &mut u64) -> f64 {
    (splitmix64(state) >> 11) as f64 / (1u64 << 53) as f64
}

/// Deterministic λ samples with |λ| ∈ [2R, 50R] and uniform argument, where
/// R is the largest protected radius over `a_values`. The same seed always
/// yields the same samples.
pub fn default_lambda_samples(a_values: &[f64], count: usize, seed: u64) -> Vec<C64> {
    let r = a_values
        .iter()
        .fold(2.0f64, |m, &a| m.max(min_radius(a)));
    let mut state = seed ^ 0x1234_5678_9ABC_DEF0;
    (0..count)
        .map(|_| {
            let radius = 2.0 * r * (1.0 + 24.0 * unit_f64(&mut state));
            let theta = std::f64::consts::TAU * unit_f64(&mut state) - std::f64::consts::PI;
            C64::from_polar(radius, theta)
        })
        .collect()
}

/// All (family, exponent) pairs of the root symmetries.
const VIETA_CASES: [(u8, u32); 7] = [(1, 0), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1), (2, 2)];

/// Runs the root-symmetry residuals over `a_values × lambda_samples`.
///
/// One check per (coefficient, family, exponent) triple; its metric is the
/// worst residual over all λ samples, scaled by max(1, |λ|²). Requires
/// every sample to satisfy |λ| > 2·R(a) for each coefficient; samples from
/// [`default_lambda_samples`] do by construction.
pub fn run_identity_suite(a_values: &[f64], lambda_samples: &[C64]) -> VerificationReport {
    let mut rep = VerificationReport::default();
    for &a in a_values {
        let map = NuMap::new(a);
        for &(family, k) in &VIETA_CASES {
            let name = format!("vieta-f{family}-k{k}[a={a}]");
            let mut worst = 0.0f64;
            let mut worst_lam = C64::new(0.0, 0.0);
            let mut err: Option<Error> = None;
            for &lam in lambda_samples {
                match vieta_residual(&map, lam, k, family) {
                    Ok(res) => {
                        let scaled = res.norm() / lam.norm_sqr().max(1.0);
                        if scaled > worst {
                            worst = scaled;
                            worst_lam = lam;
                        }
                    }
                    Err(e) => {
                        err.get_or_insert(e);
                    }
                }
            }
            rep.push(match err {
                Some(e) => Check::errored(name, 1e-10, &e),
                None => Check::executed(
                    name,
                    worst,
                    1e-10,
                    format!("{} samples, worst at λ = {worst_lam:.4}", lambda_samples.len()),
                ),
            });
        }
    }
    rep
}

/// Negative control: evaluates the same residuals with the three roots
/// drawn from a map whose coefficient is off by `da`, plugged into the
/// identities for the *nominal* coefficient.
///
/// The family-1 sums hold for any coefficient, so those checks still pass;
/// the family-2 sum at exponent 2 picks up a term 3·da·λ² and must fail,
/// demonstrating the suite's sensitivity.
pub fn run_identity_suite_corrupted(
    a_values: &[f64],
    lambda_samples: &[C64],
    da: f64,
) -> VerificationReport {
    let mut rep = VerificationReport::default();
    for &a in a_values {
        let map = NuMap::new(a + da);
        for &(family, k) in &VIETA_CASES {
            let name = format!("vieta-corrupted-f{family}-k{k}[a={a}]");
            let mut worst = 0.0f64;
            let mut err: Option<Error> = None;
            for &lam in lambda_samples {
                let res = (|| -> Result<C64> {
                    let mut lhs = C64::new(0.0, 0.0);
                    for j in 0..3u32 {
                        let (nu, np) = map.nu_and_prime(alpha_pow(j) * lam)?;
                        let factor = match family {
                            1 => nu.powu(k),
                            _ => nu.powu(k) * (a - nu * nu),
                        };
                        lhs += alpha_pow(j) * factor * np;
                    }
                    let lam2 = 3.0 * lam * lam;
                    let rhs = match (family, k) {
                        (1, 2) => lam2,
                        (2, 0) => -lam2,
                        _ => C64::new(0.0, 0.0),
                    };
                    Ok(lhs - rhs)
                })();
                match res {
                    Ok(r) => worst = worst.max(r.norm() / lam.norm_sqr().max(1.0)),
                    Err(e) => {
                        err.get_or_insert(e);
                    }
                }
            }
            rep.push(match err {
                Some(e) => Check::errored(name, 1e-10, &e),
                None => Check::executed(
                    name,
                    worst,
                    1e-10,
                    format!("roots perturbed by da = {da:e}"),
                ),
            });
        }
    }
    rep
}

// ---------------------------------------------------------------------------
// Deformation suite
// ---------------------------------------------------------------------------

/// Runs [`integrate`] with a fallible integrand, preserving the first
/// integrand error over the generic quadrature failure it provokes.
fn quad<F: FnMut(C64) -> Result<C64>>(
    path: &Path,
    cfg: &ContourConfig,
    mut f: F,
) -> Result<Quadrature> {
    let mut stored: Option<Error> = None;
    let res = integrate(
        path,
        |lam| match f(lam) {
            Ok(v) => v,
            Err(e) => {
                stored.get_or_insert(e);
                C64::new(f64::NAN, f64::NAN)
            }
        },
        cfg,
    );
    match res {
        Ok(q) => Ok(q),
        Err(e) => Err(stored.unwrap_or(e)),
    }
}

/// C² window: 1 below `lo`, 0 above `hi`, smootherstep descent between.
fn window(r: f64, lo: f64, hi: f64) -> f64 {
    if r <= lo {
        1.0
    } else if r >= hi {
        0.0
    } else {
        let s = (hi - r) / (hi - lo);
        s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)
    }
}

/// The Fourier-type integrand e^{iλx − i(λ³−aλ)t}·Û(λ).
fn axis_integrand(u: &PiecewisePoly, a: f64, x: f64, t: f64, lam: C64) -> Result<C64> {
    let ft = u.fourier_transform(lam)?;
    let phase = (C64::i() * (lam * x - (lam * lam * lam - a * lam) * t)).exp();
    Ok(phase * ft)
}

/// Integrates the Fourier-type term on the dipped-axis contour.
fn axis_term(
    u: &PiecewisePoly,
    a: f64,
    x: f64,
    t: f64,
    cfg: &ContourConfig,
) -> Result<Quadrature> {
    let path = real_axis_shifted(cfg, a, t);
    quad(&path, cfg, |lam| axis_integrand(u, a, x, t, lam))
}

/// One φ/ψ split comparison: the single-contour route (full transform on
/// the rotated sector boundary) against the two-contour route (remainder ψ
/// on the plain sector boundary, boundary sum φ on the offset contour).
///
/// The probe integral is the incoming-edge shape of the sector integrands:
/// e^{−iλ³t}·(iν(λ))^k·e^{iν(λ)x}·α·ν′(αλ)·Û(ν(αλ)), with the transform at
/// the first rotated argument, where it decays in the relevant directions.
/// The ψ route is smoothly windowed to zero over the outer half of its
/// truncation range so the purely oscillatory tail is summed in the
/// Abel sense rather than chopped.
#[allow(clippy::too_many_arguments)]
fn split_check(
    rep: &mut VerificationReport,
    u: &PiecewisePoly,
    a: f64,
    x: f64,
    k: u32,
    t: f64,
    cfg: &ContourConfig,
    lmax: f64,
    name: &str,
) {
    let map = NuMap::new(a);
    let base = |lam: C64| -> Result<(C64, C64)> {
        let nu0 = map.nu(lam)?;
        let (nu1, np1) = map.nu_and_prime(alpha_pow(1) * lam)?;
        let pref = (-C64::i() * lam * lam * lam * t).exp()
            * (C64::i() * nu0).powu(k)
            * (C64::i() * nu0 * x).exp()
            * alpha_pow(1)
            * np1;
        Ok((pref, nu1))
    };
    let run = || -> Result<(f64, String)> {
        let single = quad(&boundary_d_rotated(cfg, t), cfg, |lam| {
            let (b, nu1) = base(lam)?;
            Ok(b * u.fourier_transform(nu1)?)
        })?;
        let ocfg = ContourConfig {
            lambda_max: lmax,
            ..*cfg
        };
        let lo = 0.5 * lmax;
        let psi = quad(&boundary_d(&ocfg), &ocfg, |lam| {
            let (b, nu1) = base(lam)?;
            let s = u.ft_split(nu1, 4)?;
            Ok(window(lam.norm(), lo, lmax) * b * s.psi)
        })?;
        let phi = quad(&boundary_d_offset(cfg, t), cfg, |lam| {
            let (b, nu1) = base(lam)?;
            let s = u.ft_split(nu1, 4)?;
            Ok(b * s.phi)
        })?;
        let metric = (single.value - psi.value - phi.value).norm();
        let detail = format!(
            "err_est single {:.2e}, psi {:.2e}, phi {:.2e}",
            single.err_est, psi.err_est, phi.err_est
        );
        Ok((metric, detail))
    };
    let threshold = 10.0 * cfg.quad_tol;
    rep.push(match run() {
        Ok((metric, detail)) => Check::executed(name.to_string(), metric, threshold, detail),
        Err(e) => Check::errored(name.to_string(), threshold, &e),
    });
}

/// Cross-checks each contour deformation used by the solver by computing
/// the same integral along independent routes.
///
/// Checks, all at fixed sample points documented in their names:
///
/// 1. Fourier-type term on the dipped axis with dip ε vs ε/2, at
///    (x, t) = (−1, 0.1) and (−1, 1); plus the plain real axis vs the
///    dipped one at t = 5·10⁻⁵, where the plain route is still resolvable.
/// 2. Each Cramer-ratio term of the incoming-edge sector integral at
///    (x, t) = (−1, 0.1): rotated boundary with δ vs δ/2, and the plain
///    (unrotated) boundary vs the rotated one. At x = −1 the factor
///    e^{iνx} decays exponentially along the unrotated rays, which makes
///    the plain route convergent.
/// 3. The φ/ψ split routes: at (x, k, t) = (−1, 0, 0.1) and — the vertex
///    limit — (0, 2, 10⁻³), the latter at a relaxed tolerance of 10⁻⁷
///    because its ψ remainder only decays algebraically.
/// 4. The full incoming-edge solution at (−1/2, 10⁻³) with the arc radius
///    r vs 2r; see [`radius_doubling_check`].
///
/// Route-pair disagreements are held to 10× the quadrature tolerance in
/// force for that check.
pub fn run_deformation_suite(
    p: &DefectProblem,
    data: &EdgeData,
    cfg: &ContourConfig,
) -> Result<VerificationReport> {
    wellposedness_check(p)?;
    cfg.validate()?;
    let mut rep = VerificationReport::default();
    let a_in = p.edge_in().a;
    let u_in = data.incoming;

    // (1) dip-depth invariance of the Fourier-type term.
    for &t in &[0.1, 1.0] {
        let name = format!("axis-dip-halved[x=-1,t={t}]");
        let result = (|| -> Result<(f64, String)> {
            let q1 = axis_term(u_in, a_in, -1.0, t, cfg)?;
            let half = ContourConfig {
                eps: 0.5 * cfg.eps,
                ..*cfg
            };
            let q2 = axis_term(u_in, a_in, -1.0, t, &half)?;
            Ok((
                (q1.value - q2.value).norm(),
                format!("err_est {:.2e} / {:.2e}", q1.err_est, q2.err_est),
            ))
        })();
        rep.push(match result {
            Ok((m, d)) => Check::executed(name, m, 10.0 * cfg.quad_tol, d),
            Err(e) => Check::errored(name, 10.0 * cfg.quad_tol, &e),
        });
    }
    {
        let t = 5e-5;
        let name = "axis-plain-vs-dipped[x=-1,t=5e-5]".to_string();
        let pcfg = ContourConfig {
            quad_tol: cfg.quad_tol.max(1e-7),
            lambda_max: 500.0,
            ..*cfg
        };
        let result = (|| -> Result<(f64, String)> {
            let plain_path = real_axis_shifted(&pcfg, a_in, 0.0);
            let qa = quad(&plain_path, &pcfg, |lam| {
                axis_integrand(u_in, a_in, -1.0, t, lam)
            })?;
            let dcfg = ContourConfig {
                lambda_max: 0.0,
                ..pcfg
            };
            let qb = axis_term(u_in, a_in, -1.0, t, &dcfg)?;
            Ok((
                (qa.value - qb.value).norm(),
                format!(
                    "plain truncated at |λ| = 500; err_est {:.2e} / {:.2e}",
                    qa.err_est, qb.err_est
                ),
            ))
        })();
        rep.push(match result {
            Ok((m, d)) => Check::executed(name, m, 10.0 * pcfg.quad_tol, d),
            Err(e) => Check::errored(name, 10.0 * pcfg.quad_tol, &e),
        });
    }

    // (2) per-ratio-term sector-boundary checks at (x, t) = (−1, 0.1).
    let t = 0.1;
    let n_terms = match p.kind() {
        DefectKind::Mismatch => 3,
        _ => 6,
    };
    for term in 0..n_terms {
        let f = |lam: C64| -> Result<C64> {
            let v = data_integrand_term(p, data, EdgeLabel::Incoming, -1.0, 0, t, lam, Some(term))?;
            Ok((-C64::i() * lam * lam * lam * t).exp() * v)
        };
        let result = (|| -> Result<(Quadrature, Quadrature, Quadrature)> {
            let rot = quad(&boundary_d_rotated(cfg, t), cfg, f)?;
            let hcfg = ContourConfig {
                delta: 0.5 * cfg.delta,
                ..*cfg
            };
            let rot_half = quad(&boundary_d_rotated(&hcfg, t), &hcfg, f)?;
            let ucfg = ContourConfig {
                lambda_max: (20.0 * cfg.r).max(cfg.lambda_max),
                ..*cfg
            };
            let unrot = quad(&boundary_d(&ucfg), &ucfg, f)?;
            Ok((rot, rot_half, unrot))
        })();
        let thr = 10.0 * cfg.quad_tol;
        match result {
            Ok((rot, rot_half, unrot)) => {
                rep.push(Check::executed(
                    format!("sector-term{term}-rotation-halved[x=-1,t=0.1]"),
                    (rot.value - rot_half.value).norm(),
                    thr,
                    format!("err_est {:.2e} / {:.2e}", rot.err_est, rot_half.err_est),
                ));
                rep.push(Check::executed(
                    format!("sector-term{term}-plain-vs-rotated[x=-1,t=0.1]"),
                    (unrot.value - rot.value).norm(),
                    thr,
                    format!("err_est {:.2e} / {:.2e}", unrot.err_est, rot.err_est),
                ));
            }
            Err(e) => {
                rep.push(Check::errored(
                    format!("sector-term{term}-rotation-halved[x=-1,t=0.1]"),
                    thr,
                    &e,
                ));
                rep.push(Check::errored(
                    format!("sector-term{term}-plain-vs-rotated[x=-1,t=0.1]"),
                    thr,
                    &e,
                ));
            }
        }
    }

    // (3) split routes.
    split_check(
        &mut rep,
        u_in,
        a_in,
        -1.0,
        0,
        0.1,
        cfg,
        20.0 * cfg.r,
        "split-route[x=-1,k=0,t=0.1]",
    );
    let scfg = ContourConfig {
        quad_tol: cfg.quad_tol.max(1e-7),
        ..*cfg
    };
    split_check(
        &mut rep,
        u_in,
        a_in,
        0.0,
        2,
        1e-3,
        &scfg,
        180.0,
        "split-route-vertex[x=0,k=2,t=1e-3]",
    );

    // (4) arc-radius stability.
    rep.push(radius_doubling_check(p, data, cfg, 1e-3));
    Ok(rep)
}

/// Compares the incoming-edge solution at x = −1/2 computed with the
/// configured arc radius against the same point computed with the radius
/// doubled.
///
/// The two routes differ by the residues of the spectral-determinant zeros
/// in the annular sector between the arcs. A zero close to the inner arc
/// contributes a spurious discrete mode that satisfies the coupling
/// conditions and the equation — so the residual checks stay blind to it —
/// while shifting the solution by an O(1) amount; the remedy is a larger
/// arc radius. For configurations with a bond the zeros continue outward
/// indefinitely with rapidly decaying residues, so the two radii can never
/// agree to quadrature accuracy; the disagreement, relative to the solution
/// size, is instead held to max(10 × quadrature tolerance, 10⁻³), which
/// separates a neglected far tail from an enclosed near zero. Keep
/// `t · (2r)³` moderate: the check solves on the doubled arc, which is
/// exponentially ill-conditioned for forced problems when that product is
/// large.
pub fn radius_doubling_check(
    p: &DefectProblem,
    data: &EdgeData,
    cfg: &ContourConfig,
    t: f64,
) -> Check {
    let name = format!("arc-radius-doubled[x=-0.5,t={t}]");
    let thr = (10.0 * cfg.quad_tol).max(1e-3);
    let result = (|| -> Result<(f64, String)> {
        let solve_at = |c: &ContourConfig| -> Result<C64> {
            let req = SolveRequest {
                problem: p,
                data: *data,
                contour: *c,
                edge: EdgeLabel::Incoming,
                points: vec![(-0.5, t)],
                deriv: 0,
            };
            Ok(solve_grid(&req)?.values[0])
        };
        let narrow = solve_at(cfg)?;
        let wide_cfg = ContourConfig {
            r: 2.0 * cfg.r,
            ..*cfg
        };
        let wide = solve_at(&wide_cfg)?;
        Ok((
            (narrow - wide).norm() / narrow.norm().max(1.0),
            format!(
                "u = {:.6e} at r = {}, {:.6e} at r = {}",
                narrow.norm(),
                cfg.r,
                wide.norm(),
                wide_cfg.r
            ),
        ))
    })();
    match result {
        Ok((m, d)) => Check::executed(name, m, thr, d),
        Err(e) => Check::errored(name, thr, &e),
    }
}

// ---------------------------------------------------------------------------
// Problem suite
// ---------------------------------------------------------------------------

fn trace_of(vals: &[VertexValue], edge: EdgeLabel, end: VertexEnd) -> C64 {
    vals.iter()
        .find(|v| v.edge == edge && v.end == end)
        .map(|v| v.value)
        .unwrap_or_else(|| C64::new(0.0, 0.0))
}

/// The vertex-coupling and boundary-history residual checks at one time.
fn vertex_checks(
    p: &DefectProblem,
    data: &EdgeData,
    cfg: &ContourConfig,
    t: f64,
) -> Result<Vec<Check>> {
    let k_max = match p.kind() {
        DefectKind::Mismatch | DefectKind::Sink => 2,
        _ => 1,
    };
    let mut traces = Vec::new();
    for k in 0..=k_max {
        traces.push(vertex_values(p, data, cfg, t, k)?);
    }
    let get = |k: usize, edge: EdgeLabel, end: VertexEnd| trace_of(&traces[k], edge, end);
    // (description, lhs, rhs) pairs; the residual is |lhs − rhs| scaled by
    // max(1, |lhs|, |rhs|).
    let mut pairs: Vec<(String, C64, C64)> = Vec::new();
    let mut history: Vec<(String, C64, C64)> = Vec::new();
    use EdgeLabel::{Bond, Incoming, Outgoing};
    use VertexEnd::{Far, Vertex};
    match p.coupling() {
        VertexCoupling::Mismatch { out_w } => {
            for (k, w) in out_w.iter().enumerate() {
                pairs.push((
                    format!("out(k={k})"),
                    get(k, Outgoing, Vertex),
                    w * get(k, Incoming, Vertex),
                ));
            }
        }
        VertexCoupling::Loop {
            near_w,
            far_w,
            out_w,
        } => {
            for k in 0..2usize {
                let uin = get(k, Incoming, Vertex);
                pairs.push((format!("out(k={k})"), get(k, Outgoing, Vertex), out_w[k] * uin));
                pairs.push((format!("bond0(k={k})"), get(k, Bond, Vertex), near_w[k] * uin));
                pairs.push((format!("bondEta(k={k})"), get(k, Bond, Far), far_w[k] * uin));
            }
        }
        VertexCoupling::Source {
            far_w,
            out_w,
            forcing,
        } => {
            for k in 0..2usize {
                let uin = get(k, Incoming, Vertex);
                pairs.push((format!("out(k={k})"), get(k, Outgoing, Vertex), out_w[k] * uin));
                pairs.push((format!("bondEta(k={k})"), get(k, Bond, Far), far_w[k] * uin));
                let h = forcing[k].evaluate(t, Side::Left)?;
                history.push((
                    format!("bond0(k={k})"),
                    get(k, Bond, Vertex),
                    C64::new(h, 0.0),
                ));
            }
        }
        VertexCoupling::Sink {
            near_w,
            out_w,
            forcing,
        } => {
            for k in 0..2usize {
                let uin = get(k, Incoming, Vertex);
                pairs.push((format!("out(k={k})"), get(k, Outgoing, Vertex), out_w[k] * uin));
                pairs.push((format!("bond0(k={k})"), get(k, Bond, Vertex), near_w[k] * uin));
            }
            pairs.push((
                "flux(k=2)".to_string(),
                get(2, Incoming, Vertex),
                out_w[2] * get(2, Outgoing, Vertex) + near_w[2] * get(2, Bond, Vertex),
            ));
            let h = forcing.evaluate(t, Side::Left)?;
            history.push(("bondEta(k=0)".to_string(), get(0, Bond, Far), C64::new(h, 0.0)));
        }
    }
    let reduce = |list: &[(String, C64, C64)]| -> (f64, String) {
        let mut worst = 0.0f64;
        let mut at = String::new();
        for (label, lhs, rhs) in list {
            let scale = lhs.norm().max(rhs.norm()).max(1.0);
            let r = (lhs - rhs).norm() / scale;
            if r >= worst {
                worst = r;
                at = label.clone();
            }
        }
        (worst, at)
    };
    let threshold = match p.kind() {
        DefectKind::Mismatch | DefectKind::Loop => 1e-4,
        // Forced traces go through interior extrapolation; coarser target.
        _ => 1e-3,
    };
    let mut out = Vec::new();
    let (metric, at) = reduce(&pairs);
    out.push(Check::executed(
        format!("vertex-conditions[t={t}]"),
        metric,
        threshold,
        format!("worst pair: {at}"),
    ));
    if !history.is_empty() {
        let (metric, at) = reduce(&history);
        out.push(Check::executed(
            format!("boundary-recovery[t={t}]"),
            metric,
            1e-3,
            format!("worst pair: {at}"),
        ));
    }
    Ok(out)
}

fn reality_check(
    p: &DefectProblem,
    data: &EdgeData,
    cfg: &ContourConfig,
    t: f64,
) -> Result<(f64, String)> {
    let mut worst = 0.0f64;
    let mut edges = vec![
        (EdgeLabel::Incoming, vec![-0.8, -0.35]),
        (EdgeLabel::Outgoing, vec![0.3, 0.75]),
    ];
    if let Some(eta) = p.eta() {
        edges.push((EdgeLabel::Bond, vec![0.35 * eta, 0.6 * eta]));
    }
    for (edge, xs) in edges {
        let req = SolveRequest {
            problem: p,
            data: *data,
            contour: *cfg,
            edge,
            points: xs.iter().map(|&x| (x, t)).collect(),
            deriv: 0,
        };
        let field = solve_grid(&req)?;
        worst = worst.max(field.imag_max);
    }
    Ok((worst, format!("sup |Im u| over sample points, t = {t}")))
}

/// Initial-condition recovery at a small positive time, at piece midpoints
/// kept at least 0.1 away from every breakpoint.
fn ic_recovery_check(
    p: &DefectProblem,
    data: &EdgeData,
    cfg: &ContourConfig,
) -> Result<Option<(f64, String)>> {
    let t = 1e-4;
    let mut worst = 0.0f64;
    let mut tested = 0usize;
    let mut edges = vec![(EdgeLabel::Incoming, data.incoming), (EdgeLabel::Outgoing, data.outgoing)];
    if let Some(b) = data.bond {
        edges.push((EdgeLabel::Bond, b));
    }
    for (edge, u) in edges {
        if u.coeffs().iter().all(|c| c.iter().all(|&v| v == 0.0)) {
            continue;
        }
        let breaks = u.breaks();
        let mut points = Vec::new();
        for w in breaks.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            if breaks.iter().all(|&b| (mid - b).abs() >= 0.1) {
                points.push(mid);
            }
        }
        if points.is_empty() {
            continue;
        }
        let req = SolveRequest {
            problem: p,
            data: *data,
            contour: *cfg,
            edge,
            points: points.iter().map(|&x| (x, t)).collect(),
            deriv: 0,
        };
        let field = solve_grid(&req)?;
        for (x, v) in points.iter().zip(field.values.iter()) {
            let side = if *x <= 0.0 { Side::Left } else { Side::Right };
            let datum = u.evaluate(*x, side)?;
            worst = worst.max((*v - datum).norm());
            tested += 1;
        }
    }
    if tested == 0 {
        return Ok(None);
    }
    Ok(Some((
        worst,
        format!("t = {t:e}, {tested} midpoints ≥ 0.1 from breakpoints"),
    )))
}

/// Central-difference residual of u_t = u_xxx + a·u_x at one interior point
/// of the incoming lead, with u_x and u_xx taken from the solver directly
/// and u_xxx / u_t by second-order differencing on top of them, Richardson-
/// extrapolated over a step halving to cancel the leading truncation term.
fn pde_residual_check(
    p: &DefectProblem,
    data: &EdgeData,
    cfg: &ContourConfig,
    t0: f64,
) -> Result<(f64, String)> {
    let x0 = -0.45;
    // Central differencing amplifies per-point quadrature noise by 1/(2·dt)
    // (resp. 1/(2·h)), so widen the stencil when the tolerance is loose.
    let (dt, h) = if cfg.quad_tol > 1e-6 {
        (0.02f64.min(0.45 * t0), 0.05)
    } else {
        (1e-3f64.min(0.45 * t0), 0.02)
    };
    let a = p.edge_in().a;
    let solve_at = |points: Vec<(f64, f64)>, deriv: u8| -> Result<Vec<C64>> {
        let req = SolveRequest {
            problem: p,
            data: *data,
            contour: *cfg,
            edge: EdgeLabel::Incoming,
            points,
            deriv,
        };
        Ok(solve_grid(&req)?.values)
    };
    let u_t_at = |step: f64| -> Result<C64> {
        let pair = solve_at(vec![(x0, t0 - step), (x0, t0 + step)], 0)?;
        Ok((pair[1] - pair[0]) / (2.0 * step))
    };
    let u_xxx_at = |step: f64| -> Result<C64> {
        let pair = solve_at(vec![(x0 - step, t0), (x0 + step, t0)], 2)?;
        Ok((pair[1] - pair[0]) / (2.0 * step))
    };
    let u_x = solve_at(vec![(x0, t0)], 1)?[0];
    let u_t = (u_t_at(0.5 * dt)? * 4.0 - u_t_at(dt)?) / 3.0;
    let u_xxx = (u_xxx_at(0.5 * h)? * 4.0 - u_xxx_at(h)?) / 3.0;
    let residual = (u_t - u_xxx - a * u_x).norm();
    let scale = (u_xxx.norm() + (a * u_x).norm()).max(1.0);
    Ok((
        residual / scale,
        format!("(x, t) = ({x0}, {t0}), dt = {dt:e}, h = {h:e}"),
    ))
}

/// Residual battery for a solved configuration at the given times.
///
/// Per time: the vertex coupling relations (and, for forced problems, the
/// recovery of the prescribed boundary histories) from one-sided traces,
/// and reality of the field at interior sample points. Once per run: the
/// recovery of the initial data at t = 10⁻⁴, a finite-difference residual
/// of the PDE at the first usable time, and — loop and source only — the
/// closed-form determinant cross-check at three spectral nodes. Failures
/// are recorded in the report, never raised.
pub fn run_problem_suite(
    p: &DefectProblem,
    data: &EdgeData,
    cfg: &ContourConfig,
    times: &[f64],
) -> VerificationReport {
    let mut rep = VerificationReport::default();
    if let Err(e) = wellposedness_check(p) {
        rep.push(Check::errored("wellposedness".to_string(), 0.0, &e));
        return rep;
    }
    for &t in times {
        match vertex_checks(p, data, cfg, t) {
            Ok(list) => {
                for c in list {
                    rep.push(c);
                }
            }
            Err(e) => rep.push(Check::errored(format!("vertex-conditions[t={t}]"), 1e-3, &e)),
        }
        // Quadrature noise alone can push |Im u| up to 100·quad_tol.
        let reality_thr = (100.0 * cfg.quad_tol).max(1e-5);
        rep.push(match reality_check(p, data, cfg, t) {
            Ok((m, d)) => Check::executed(format!("reality[t={t}]"), m, reality_thr, d),
            Err(e) => Check::errored(format!("reality[t={t}]"), reality_thr, &e),
        });
    }
    rep.push(match ic_recovery_check(p, data, cfg) {
        Ok(Some((m, d))) => Check::executed("ic-recovery".to_string(), m, 1e-2, d),
        Ok(None) => Check::skipped(
            "ic-recovery".to_string(),
            "no piece midpoint is ≥ 0.1 from every breakpoint".to_string(),
        ),
        Err(e) => Check::errored("ic-recovery".to_string(), 1e-2, &e),
    });
    let t0 = times
        .iter()
        .copied()
        .find(|&t| t >= 5e-3)
        .unwrap_or(0.014);
    rep.push(match pde_residual_check(p, data, cfg, t0) {
        Ok((m, d)) => Check::executed(format!("pde-fd-residual[t={t0}]"), m, 1e-2, d),
        Err(e) => Check::errored(format!("pde-fd-residual[t={t0}]"), 1e-2, &e),
    });
    if matches!(p.kind(), DefectKind::Loop | DefectKind::Source) {
        let t = times.first().copied().unwrap_or(0.1);
        let result = (|| -> Result<f64> {
            let mut worst = 0.0f64;
            for &scale in &[1.1, 1.9, 3.1] {
                let lam = C64::from_polar(scale * p.r_max(), -std::f64::consts::FRAC_PI_2);
                worst = worst.max(expanded_delta_crosscheck(p, lam, data, t)?);
            }
            Ok(worst)
        })();
        rep.push(match result {
            Ok(m) => Check::executed(
                "expanded-determinants".to_string(),
                m,
                1e-9,
                format!("3 nodes on arg λ = −π/2, t = {t}"),
            ),
            Err(e) => Check::errored("expanded-determinants".to_string(), 1e-9, &e),
        });
    }
    rep
}

// ---------------------------------------------------------------------------
// Transform-side consistency relation
// ---------------------------------------------------------------------------

/// A linear combination together with the magnitude of its largest
/// summand, which is the natural scale against which its round-off and
/// cancellation must be judged.
#[derive(Clone, Copy)]
struct Combo {
    value: C64,
    scale: f64,
}

fn combo(terms: &[C64]) -> Combo {
    Combo {
        value: terms.iter().sum(),
        scale: terms.iter().map(|v| v.norm()).fold(0.0f64, f64::max),
    }
}

/// The boundary-transform combinations F_e(λ; 0, t) and F_e(λ; η, t) of
/// every edge, rebuilt from the solved Cramer ratios (and, for forced
/// problems, the prescribed temporal transforms).
struct Combos {
    f_in: Combo,
    f_out: Combo,
    f_bond: Option<(Combo, Combo)>,
}

fn boundary_combos(p: &DefectProblem, lam: C64, t: f64, r: &[C64]) -> Result<Combos> {
    let a_in = C64::new(p.edge_in().a, 0.0);
    let a_out = C64::new(p.edge_out().a, 0.0);
    let nu_in = NuMap::new(p.edge_in().a).nu(lam)?;
    let nu_out = NuMap::new(p.edge_out().a).nu(lam)?;
    let bond = match p.edge_bond() {
        Some(b) => Some((C64::new(b.a, 0.0), NuMap::new(b.a).nu(lam)?)),
        None => None,
    };
    let q_in = a_in - nu_in * nu_in;
    let q_out = a_out - nu_out * nu_out;
    Ok(match p.coupling() {
        VertexCoupling::Mismatch { out_w } => Combos {
            f_in: combo(&[r[0], nu_in * r[1], q_in * r[2]]),
            f_out: combo(&[
                out_w[2] * r[0],
                out_w[1] * nu_out * r[1],
                out_w[0] * q_out * r[2],
            ]),
            f_bond: None,
        },
        VertexCoupling::Loop {
            near_w,
            far_w,
            out_w,
        } => {
            let (a_b, nu_b) = bond.unwrap();
            let q = a_b - nu_b * nu_b;
            Combos {
                f_in: combo(&[r[0], nu_in * r[4], q_in * r[5]]),
                f_out: combo(&[-r[1], out_w[1] * nu_out * r[4], out_w[0] * q_out * r[5]]),
                f_bond: Some((
                    combo(&[-r[2], near_w[1] * nu_b * r[4], near_w[0] * q * r[5]]),
                    combo(&[r[3], far_w[1] * nu_b * r[4], far_w[0] * q * r[5]]),
                )),
            }
        }
        VertexCoupling::Source {
            far_w,
            out_w,
            forcing,
        } => {
            let (a_b, nu_b) = bond.unwrap();
            let q = a_b - nu_b * nu_b;
            let h0 = forcing[0].temporal_transform(lam, t)?;
            let h1 = forcing[1].temporal_transform(lam, t)?;
            Combos {
                f_in: combo(&[r[0], nu_in * r[4], q_in * r[5]]),
                f_out: combo(&[-r[1], out_w[1] * nu_out * r[4], out_w[0] * q_out * r[5]]),
                f_bond: Some((
                    combo(&[-r[2], C64::i() * nu_b * h1, q * h0]),
                    combo(&[r[3], far_w[1] * nu_b * r[4], far_w[0] * q * r[5]]),
                )),
            }
        }
        VertexCoupling::Sink {
            near_w,
            out_w,
            forcing,
        } => {
            let (a_b, nu_b) = bond.unwrap();
            let q = a_b - nu_b * nu_b;
            let h = forcing.temporal_transform(lam, t)?;
            Combos {
                f_in: combo(&[
                    out_w[2] * r[0],
                    near_w[2] * r[1],
                    nu_in * r[2],
                    q_in * r[3],
                ]),
                f_out: combo(&[r[0], out_w[1] * nu_out * r[2], out_w[0] * q_out * r[3]]),
                f_bond: Some((
                    combo(&[r[1], near_w[1] * nu_b * r[2], near_w[0] * q * r[3]]),
                    combo(&[r[4], nu_b * r[5], q * h]),
                )),
            }
        }
    })
}

/// Sampled field on one edge with composite-Simpson weights, ready to be
/// turned into a transform value at any spectral argument.
struct EdgeSamples {
    xs: Vec<f64>,
    ws: Vec<f64>,
    us: Vec<C64>,
    /// Sup of |u| at the two outermost nodes (leads only; 0 for the bond).
    tail_sup: f64,
    /// Length of the truncated interval (leads only).
    span: f64,
}

impl EdgeSamples {
    fn transform(&self, nu: C64) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for ((&x, &w), &u) in self.xs.iter().zip(self.ws.iter()).zip(self.us.iter()) {
            s += w * (-C64::i() * nu * x).exp() * u;
        }
        s
    }
}

fn simpson_weights(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    // n even; n+1 nodes.
    let h = (b - a) / n as f64;
    let xs: Vec<f64> = (0..=n).map(|i| a + i as f64 * h).collect();
    let ws: Vec<f64> = (0..=n)
        .map(|i| {
            let c = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * h / 3.0
        })
        .collect();
    (xs, ws)
}

fn edge_samples(
    p: &DefectProblem,
    data: &EdgeData,
    cfg: &ContourConfig,
    t: f64,
    edge: EdgeLabel,
) -> Result<EdgeSamples> {
    let (lo, hi, span) = match edge {
        EdgeLabel::Bond => {
            let eta = p.eta().ok_or_else(|| {
                Error::Config("the problem has no bond edge".into())
            })?;
            (0.0, eta, 0.0)
        }
        EdgeLabel::Incoming => {
            let ext = -data.incoming.breaks().first().copied().unwrap_or(-1.0);
            // Crude group-velocity allowance for dispersive spreading.
            let reach = ext + 2.0 + 300.0 * t;
            (-reach, 0.0, reach)
        }
        EdgeLabel::Outgoing => {
            let ext = data.outgoing.upper();
            let reach = ext + 2.0 + 300.0 * t;
            (0.0, reach, reach)
        }
    };
    let n = match edge {
        EdgeLabel::Bond => 128,
        _ => {
            let mut n = ((hi - lo) / 0.025).ceil() as usize;
            if n % 2 == 1 {
                n += 1;
            }
            n.clamp(64, 1200)
        }
    };
    let (xs, ws) = simpson_weights(lo, hi, n);
    let req = SolveRequest {
        problem: p,
        data: *data,
        contour: *cfg,
        edge,
        points: xs.iter().map(|&x| (x, t)).collect(),
        deriv: 0,
    };
    let us = solve_grid(&req)?.values;
    let tail_sup = match edge {
        EdgeLabel::Bond => 0.0,
        EdgeLabel::Incoming => us[0].norm().max(us[1].norm()),
        EdgeLabel::Outgoing => us[n].norm().max(us[n - 1].norm()),
    };
    Ok(EdgeSamples {
        xs,
        ws,
        us,
        tail_sup,
        span,
    })
}

/// The consistency relation on one explicit edge; see
/// [`check_global_relation`] for the default edge selection and the term
/// accounting.
pub fn check_global_relation_edge(
    p: &DefectProblem,
    data: &EdgeData,
    cfg: &ContourConfig,
    t: f64,
    edge: EdgeLabel,
    lambda_samples: &[C64],
) -> Result<VerificationReport> {
    wellposedness_check(p)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time t = {t} must be nonnegative")));
    }
    let threshold = 1e-3;
    for &lam in lambda_samples {
        if lam.norm() <= p.r_max() {
            return Err(Error::Domain(format!(
                "|λ| = {} must exceed the protected radius {}",
                lam.norm(),
                p.r_max()
            )));
        }
        match edge {
            EdgeLabel::Incoming if lam.im < -1e-12 => {
                return Err(Error::Domain(
                    "incoming-edge samples must lie in the closed upper half-plane".into(),
                ))
            }
            EdgeLabel::Outgoing if lam.im > 1e-12 => {
                return Err(Error::Domain(
                    "outgoing-edge samples must lie in the closed lower half-plane".into(),
                ))
            }
            _ => {}
        }
    }
    let samples = edge_samples(p, data, cfg, t, edge)?;
    // Lead transforms are truncated where the field has decayed. The
    // dispersive tail only decays algebraically in space, but û enters the
    // relation multiplied by e^{iλ³t}, so the per-λ contribution of the
    // discarded tail is the phase-damped bound below; it must stay well
    // under the acceptance threshold relative to the participating terms.
    let trunc_bound = if edge == EdgeLabel::Bond {
        0.0
    } else {
        samples.tail_sup.max(1e-8) * samples.span
    };
    let (a_e, u0) = match edge {
        EdgeLabel::Incoming => (p.edge_in().a, data.incoming),
        EdgeLabel::Outgoing => (p.edge_out().a, data.outgoing),
        EdgeLabel::Bond => (
            p.edge_bond().unwrap().a,
            data.bond.ok_or_else(|| Error::Config("missing bond data".into()))?,
        ),
    };
    let map = NuMap::new(a_e);
    let mut rep = VerificationReport::default();
    for &lam in lambda_samples {
        let name = format!("global-relation[{edge:?},λ={lam:.3},t={t}]");
        let result = (|| -> Result<(f64, String)> {
            let nu = map.nu(lam)?;
            let phase = (C64::i() * lam * lam * lam * t).exp();
            let u_hat = samples.transform(nu);
            let cap_u = u0.fourier_transform(nu)?;
            let mut terms = vec![phase * u_hat, -cap_u];
            let mut scale = 0.0f64;
            // At t = 0 every temporal transform vanishes identically and the
            // relation degenerates to û(ν; 0) = Û(ν).
            if t > 0.0 {
                // The solved ratios depend on λ only through λ³, so any of
                // the three rotations α^j λ represents the same unknowns —
                // but the system's derivation is only valid when the
                // assembly point sits in the lower spectral sector. Pick
                // the rotation closest to arg λ = −π/2.
                let lam_sys = (0..3u32)
                    .map(|j| alpha_pow(j) * lam)
                    .min_by(|a, b| {
                        let d = |v: &C64| (C64::i() * v).arg().abs();
                        d(a).total_cmp(&d(b))
                    })
                    .unwrap();
                let ratios = assemble(p, lam_sys, data, t)?.solution();
                let combos = boundary_combos(p, lam, t, &ratios)?;
                match edge {
                    EdgeLabel::Incoming => {
                        terms.push(-combos.f_in.value);
                        scale = combos.f_in.scale;
                    }
                    EdgeLabel::Outgoing => {
                        terms.push(combos.f_out.value);
                        scale = combos.f_out.scale;
                    }
                    EdgeLabel::Bond => {
                        let (f0, f_eta) = combos.f_bond.unwrap();
                        let eta = p.eta().unwrap();
                        let damp = (-C64::i() * nu * eta).exp();
                        terms.push(f0.value);
                        terms.push(-damp * f_eta.value);
                        scale = f0.scale.max(damp.norm() * f_eta.scale);
                    }
                }
            }
            let residual: C64 = terms.iter().sum();
            let largest = terms
                .iter()
                .map(|v| v.norm())
                .fold(scale, f64::max);
            let trunc = phase.norm() * trunc_bound;
            if trunc > 0.1 * threshold * largest.max(1e-13) {
                return Err(Error::TruncationUnsound(format!(
                    "phase-damped lead tail bound {trunc:.3e} is not negligible \
                     against the largest term {largest:.3e} (|u| at the cut is {:.3e})",
                    samples.tail_sup
                )));
            }
            let metric = if largest > 1e-13 {
                residual.norm() / largest
            } else {
                residual.norm()
            };
            Ok((
                metric,
                format!("largest term {largest:.3e}, {} field samples", samples.xs.len()),
            ))
        })();
        rep.push(match result {
            Ok((m, d)) => Check::executed(name, m, threshold, d),
            Err(e) => Check::errored(name, threshold, &e),
        });
    }
    Ok(rep)
}

/// Consistency between the computed field and its solved boundary
/// transforms at spectral nodes λ.
///
/// For each λ the relation compares e^{iλ³t}·û_e(ν_e(λ); t) — with û the
/// transform of the *computed* field, integrated by composite Simpson over
/// the edge — against the initial-data transform Û_e(ν_e(λ)) and the
/// boundary combinations rebuilt from the solved Cramer ratios. The
/// residual is reported relative to the largest participating term,
/// threshold 10⁻³.
///
/// The default edge is the bond when the problem has one (compact, exactly
/// integrable); for the mismatch configuration the incoming lead is used,
/// with its transform truncated where the field has decayed below 10⁻⁸ and
/// the tail bound checked (see [`Error::TruncationUnsound`]). Explicit
/// edge selection — including the opt-in lead checks for bonded problems —
/// goes through [`check_global_relation_edge`].
///
/// Meaningful λ samples lie where e^{iλ³t} does not grow: the solved
/// ratios are time-independent stand-ins for the true boundary transforms,
/// accurate exactly where the discarded e^{iλ³t}-weighted terms are
/// negligible. For the bond that is the sector arg λ ∈ (−2π/3, −π/3); for
/// the incoming lead its mirror (π/3, 2π/3) intersected with the upper
/// half-plane requirement is (0, π/3) rotated — in practice arg λ ≈ π/6.
pub fn check_global_relation(
    p: &DefectProblem,
    data: &EdgeData,
    cfg: &ContourConfig,
    t: f64,
    lambda_samples: &[C64],
) -> Result<VerificationReport> {
    let edge = if p.edge_bond().is_some() {
        EdgeLabel::Bond
    } else {
        EdgeLabel::Incoming
    };
    check_global_relation_edge(p, data, cfg, t, edge, lambda_samples)
}
