//! Evaluation of the solution formulae at points (x, t).
//!
//! On each edge the solution is a sum of contour integrals,
//!
//! 2π u_e(x,t) = ∫_ℝ e^{iλx − i(λ³−a_eλ)t} Û_e(λ) dλ − ∫_{∂D} (⋯) dλ,
//!
//! where the ∂D integrand combines exponentials e^{iν_e(α^jλ)x} with
//! coupling-weighted combinations of the Cramer ratios δ_k/Δ of the vertex
//! system. Spatial derivatives insert (iλ)^k (resp. (iν)^k) beside each
//! exponential. The real-axis term is integrated on the contour whose outer
//! arms dip below the axis (Gaussian decay for t > 0); the initial-data
//! part of the ∂D term is integrated on the outward-rotated sector boundary
//! (cubic-exponential decay e^{−r³t·sin 3δ}).
//!
//! Boundary forcing (source and sink problems) is handled separately: its
//! temporal transforms h(λ; t) grow exactly where e^{−iλ³t} decays, so the
//! forcing contribution is assembled in retarded form — every transform
//! pre-multiplied by e^{−iλ³t}, which is finite everywhere — and integrated
//! on the *unrotated* sector boundary, where the retarded integrand is
//! bounded and falls off algebraically. Its leading O(1/λ) part is equal
//! and opposite on the two rays, so truncating both at a common radius
//! cancels it exactly and leaves an O(1/r*) truncation error; the forcing
//! route therefore uses a manual truncation radius and suits modest
//! tolerances (~1e−4) rather than the 1e−9 achievable for pure
//! initial-value runs.
//!
//! Vertex traces are computed by evaluating at x = 0 (or x = η) directly on
//! the deformed contours, which their decay justifies for t > 0.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use crate::contours::{
    boundary_d, boundary_d_rotated, integrate, real_axis_shifted, ContourConfig, Path, Quadrature,
};
use crate::nu_map::{alpha_pow, NuMap};
use crate::pw_data::{PiecewisePoly, Side};
use crate::spectral_system::{
    assemble_parts, wellposedness_check, DefectProblem, EdgeData, EdgeLabel, VertexCoupling,
    YParts,
};
use crate::{Error, Result, C64};

/// Truncation radius for the algebraically-decaying forcing contribution
/// when the caller leaves `lambda_max` automatic.
const FORCING_LAMBDA_MAX: f64 = 1.2e4;

/// Smooth truncation window for the forcing contribution: 1 up to a third
/// of the truncation radius, then a C² descent (smootherstep) to 0. A hard
/// cutoff at Λ leaves each oscillatory O(1/λ) tail an O(1/(xΛ)) error; the
/// smooth window integrates those tails in the Abel-summation sense and
/// suppresses the truncation error by two further powers of 1/(x·ΔΛ).
fn forcing_window(r: f64, lambda_max: f64) -> f64 {
    let lo = lambda_max / 3.0;
    if r <= lo {
        1.0
    } else if r >= lambda_max {
        0.0
    } else {
        let s = (lambda_max - r) / (lambda_max - lo);
        s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)
    }
}

/// A request to evaluate one edge's solution at a set of points.
#[derive(Debug, Clone)]
pub struct SolveRequest<'a> {
    /// The defect configuration.
    pub problem: &'a DefectProblem,
    /// Initial data for every edge of the configuration.
    pub data: EdgeData<'a>,
    /// Contour geometry and quadrature parameters.
    pub contour: ContourConfig,
    /// Which edge to evaluate on.
    pub edge: EdgeLabel,
    /// Evaluation points (x, t) with x on the edge and t ≥ 0.
    pub points: Vec<(f64, f64)>,
    /// Spatial derivative order: 0, 1 or 2.
    pub deriv: u8,
}

/// The values of u_e (or a spatial derivative) over a set of points.
#[derive(Debug, Clone)]
pub struct SolutionField {
    /// Value per requested point.
    pub values: Vec<C64>,
    /// Largest |Im| over the points; for real data and real coupling
    /// coefficients this is quadrature noise, ≤ 100·`quad_tol`.
    pub imag_max: f64,
    /// Per-point quadrature error estimates (absolute).
    pub error_est: Vec<f64>,
}

/// Which end of an edge a boundary trace belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexEnd {
    /// The defect vertex, x → 0∓.
    Vertex,
    /// The far end of the bond, x → η⁻.
    Far,
}

/// One one-sided boundary trace ∂_x^k u_e at an edge end.
#[derive(Debug, Clone, Copy)]
pub struct VertexValue {
    /// The edge the trace belongs to.
    pub edge: EdgeLabel,
    /// Which end of the edge.
    pub end: VertexEnd,
    /// The computed trace value.
    pub value: C64,
    /// Absolute quadrature error estimate.
    pub error_est: f64,
}

/// ν(α^jλ) and ν′(α^jλ) for j = 0, 1, 2 on one edge.
#[derive(Debug, Clone, Copy)]
struct EdgeNu {
    nu: [C64; 3],
    nup: [C64; 3],
}

/// The spectral maps of every edge at one node λ.
#[derive(Debug, Clone, Copy)]
struct NuSet {
    inc: EdgeNu,
    out: EdgeNu,
    bond: Option<EdgeNu>,
}

fn edge_nu(a: f64, lam: C64) -> Result<EdgeNu> {
    let map = NuMap::new(a);
    let mut nu = [C64::new(0.0, 0.0); 3];
    let mut nup = [C64::new(0.0, 0.0); 3];
    for j in 0..3u32 {
        let (n, np) = map.nu_and_prime(alpha_pow(j) * lam)?;
        nu[j as usize] = n;
        nup[j as usize] = np;
    }
    Ok(EdgeNu { nu, nup })
}

fn nu_set(p: &DefectProblem, lam: C64) -> Result<NuSet> {
    Ok(NuSet {
        inc: edge_nu(p.edge_in().a, lam)?,
        out: edge_nu(p.edge_out().a, lam)?,
        bond: match p.edge_bond() {
            Some(b) => Some(edge_nu(b.a, lam)?),
            None => None,
        },
    })
}

/// Cached per-node quantities at one λ: the initial-data Cramer ratios and
/// (separately, since they live on a different contour) the retarded
/// forcing ratios with the retarded temporal transforms.
struct DataNode {
    nus: NuSet,
    ratios: Vec<C64>,
}

struct ForcingNode {
    nus: NuSet,
    ratios: Vec<C64>,
    h: [C64; 2],
}

type Key = (u64, u64);

fn key_of(lam: C64) -> Key {
    (lam.re.to_bits(), lam.im.to_bits())
}

/// Per-t cache of node values, shared across x on the same contour (the
/// integrand's x-dependence enters only through the e^{iνx} factors).
#[derive(Default)]
struct NodeCache {
    data: RwLock<HashMap<Key, Arc<DataNode>>>,
    forcing: RwLock<HashMap<Key, Arc<ForcingNode>>>,
}

fn data_node(
    p: &DefectProblem,
    data: &EdgeData,
    t: f64,
    cache: &NodeCache,
    lam: C64,
) -> Result<Arc<DataNode>> {
    let key = key_of(lam);
    if let Some(n) = cache.data.read().unwrap().get(&key) {
        return Ok(n.clone());
    }
    let nus = nu_set(p, lam)?;
    let sys = assemble_parts(p, lam, data, t, YParts::DataOnly)?;
    let node = Arc::new(DataNode {
        nus,
        ratios: sys.solution(),
    });
    cache.data.write().unwrap().insert(key, node.clone());
    Ok(node)
}

fn forcing_node(
    p: &DefectProblem,
    data: &EdgeData,
    t: f64,
    cache: &NodeCache,
    lam: C64,
) -> Result<Arc<ForcingNode>> {
    let key = key_of(lam);
    if let Some(n) = cache.forcing.read().unwrap().get(&key) {
        return Ok(n.clone());
    }
    let nus = nu_set(p, lam)?;
    let sys = assemble_parts(p, lam, data, t, YParts::ForcingRetarded)?;
    let zero = C64::new(0.0, 0.0);
    let h = match p.coupling() {
        VertexCoupling::Source { forcing, .. } => [
            forcing[0].temporal_transform_retarded(lam, t)?,
            forcing[1].temporal_transform_retarded(lam, t)?,
        ],
        VertexCoupling::Sink { forcing, .. } => {
            [forcing.temporal_transform_retarded(lam, t)?, zero]
        }
        _ => [zero, zero],
    };
    let node = Arc::new(ForcingNode {
        nus,
        ratios: sys.solution(),
        h,
    });
    cache.forcing.write().unwrap().insert(key, node.clone());
    Ok(node)
}

fn ipow(nu: C64, d: u8) -> C64 {
    (C64::i() * nu).powu(d as u32)
}

/// e^{iνx'}·(iν)^d·ν′·c — the single-rotation (j = 0) contribution.
fn inc_term(nu: C64, nup: C64, c: C64, xs: f64, d: u8) -> C64 {
    (C64::i() * nu * xs).exp() * ipow(nu, d) * nup * c
}

/// Σ_{j=1,2} α^j·ν′(α^jλ)·e^{iν(α^jλ)x}·(iν(α^jλ))^d·c_j.
fn out_sum(e: &EdgeNu, x: f64, d: u8, c: impl Fn(usize, C64) -> C64) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for j in [1usize, 2usize] {
        let nu = e.nu[j];
        s += alpha_pow(j as u32) * e.nup[j] * (C64::i() * nu * x).exp() * ipow(nu, d) * c(j, nu);
    }
    s
}

/// The ∂D integrand for one edge, *without* the overall e^{−iλ³t} factor.
///
/// With `h = None` it evaluates the initial-data combination on the ratio
/// vector `r` (the caller multiplies by e^{−iλ³t}); with `h = Some(·)` it
/// evaluates the retarded forcing combination, whose ratios and transforms
/// already carry that factor.
fn d_integrand(
    p: &DefectProblem,
    edge: EdgeLabel,
    x: f64,
    d: u8,
    nus: &NuSet,
    r: &[C64],
    h: Option<[C64; 2]>,
) -> C64 {
    let a_in = C64::new(p.edge_in().a, 0.0);
    let a_out = C64::new(p.edge_out().a, 0.0);
    match (p.coupling(), edge) {
        (VertexCoupling::Mismatch { .. }, EdgeLabel::Incoming) => {
            let nu = nus.inc.nu[0];
            let c = r[0] + nu * r[1] + (a_in - nu * nu) * r[2];
            inc_term(nu, nus.inc.nup[0], c, x, d)
        }
        (VertexCoupling::Mismatch { out_w }, EdgeLabel::Outgoing) => {
            out_sum(&nus.out, x, d, |_, nu| {
                out_w[2] * r[0] + out_w[1] * nu * r[1] + out_w[0] * (a_out - nu * nu) * r[2]
            })
        }
        (
            VertexCoupling::Loop { .. } | VertexCoupling::Source { .. },
            EdgeLabel::Incoming,
        ) => {
            let nu = nus.inc.nu[0];
            let c = r[0] + nu * r[4] + (a_in - nu * nu) * r[5];
            inc_term(nu, nus.inc.nup[0], c, x, d)
        }
        (
            VertexCoupling::Loop { out_w, .. } | VertexCoupling::Source { out_w, .. },
            EdgeLabel::Outgoing,
        ) => out_sum(&nus.out, x, d, |_, nu| {
            -r[1] + out_w[1] * nu * r[4] + out_w[0] * (a_out - nu * nu) * r[5]
        }),
        (VertexCoupling::Loop { near_w, far_w, .. }, EdgeLabel::Bond) => {
            let bond = p.edge_bond().unwrap();
            let a_b = C64::new(bond.a, 0.0);
            let eta = bond.eta.unwrap();
            let e = nus.bond.as_ref().unwrap();
            let outgoing = out_sum(e, x, d, |_, nu| {
                -r[2] + near_w[1] * nu * r[4] + near_w[0] * (a_b - nu * nu) * r[5]
            });
            let nu0 = e.nu[0];
            let c0 = r[3] + far_w[1] * nu0 * r[4] + far_w[0] * (a_b - nu0 * nu0) * r[5];
            outgoing + inc_term(nu0, e.nup[0], c0, x - eta, d)
        }
        (VertexCoupling::Source { far_w, .. }, EdgeLabel::Bond) => {
            let bond = p.edge_bond().unwrap();
            let a_b = C64::new(bond.a, 0.0);
            let eta = bond.eta.unwrap();
            let e = nus.bond.as_ref().unwrap();
            let outgoing = out_sum(e, x, d, |_, nu| {
                let mut c = -r[2];
                if let Some(hv) = h {
                    c += C64::i() * nu * hv[1] + (a_b - nu * nu) * hv[0];
                }
                c
            });
            let nu0 = e.nu[0];
            let c0 = r[3] + far_w[1] * nu0 * r[4] + far_w[0] * (a_b - nu0 * nu0) * r[5];
            outgoing + inc_term(nu0, e.nup[0], c0, x - eta, d)
        }
        (VertexCoupling::Sink { near_w, out_w, .. }, EdgeLabel::Incoming) => {
            let nu = nus.inc.nu[0];
            let c = out_w[2] * r[0] + near_w[2] * r[1] + nu * r[2] + (a_in - nu * nu) * r[3];
            inc_term(nu, nus.inc.nup[0], c, x, d)
        }
        (VertexCoupling::Sink { out_w, .. }, EdgeLabel::Outgoing) => {
            out_sum(&nus.out, x, d, |_, nu| {
                r[0] + out_w[1] * nu * r[2] + out_w[0] * (a_out - nu * nu) * r[3]
            })
        }
        (VertexCoupling::Sink { near_w, .. }, EdgeLabel::Bond) => {
            let bond = p.edge_bond().unwrap();
            let a_b = C64::new(bond.a, 0.0);
            let eta = bond.eta.unwrap();
            let e = nus.bond.as_ref().unwrap();
            let outgoing = out_sum(e, x, d, |_, nu| {
                r[1] + near_w[1] * nu * r[2] + near_w[0] * (a_b - nu * nu) * r[3]
            });
            let nu0 = e.nu[0];
            let mut c0 = r[4] + nu0 * r[5];
            if let Some(hv) = h {
                c0 += (a_b - nu0 * nu0) * hv[0];
            }
            outgoing + inc_term(nu0, e.nup[0], c0, x - eta, d)
        }
        (_, EdgeLabel::Bond) => unreachable!("bond evaluation on a bondless problem"),
    }
}

/// Evaluates the initial-data ∂D integrand for one edge at a single node λ,
/// optionally keeping only the contribution of one Cramer ratio (`keep`)
/// with every other ratio zeroed. The overall e^{−iλ³t} factor is *not*
/// applied. Used by the contour-deformation cross-checks, which integrate
/// the same term along differently deformed contours.
pub(crate) fn data_integrand_term(
    p: &DefectProblem,
    data: &EdgeData,
    edge: EdgeLabel,
    x: f64,
    d: u8,
    t: f64,
    lam: C64,
    keep: Option<usize>,
) -> Result<C64> {
    let nus = nu_set(p, lam)?;
    let sys = assemble_parts(p, lam, data, t, YParts::DataOnly)?;
    let mut r = sys.solution();
    if let Some(k) = keep {
        for (i, v) in r.iter_mut().enumerate() {
            if i != k {
                *v = C64::new(0.0, 0.0);
            }
        }
    }
    Ok(d_integrand(p, edge, x, d, &nus, &r, None))
}

/// Runs [`integrate`] with a fallible integrand: any error raised at a
/// quadrature node is stored and returned in place of the (less specific)
/// quadrature failure it causes. Errors raised only at truncation probes
/// beyond the integrated range are ignored when the quadrature succeeds.
fn run_quad(
    path: &Path,
    cfg: &ContourConfig,
    mut f: impl FnMut(C64) -> Result<C64>,
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

fn poly_is_zero(p: &PiecewisePoly) -> bool {
    p.coeffs().iter().all(|c| c.iter().all(|&v| v == 0.0))
}

fn has_forcing(p: &DefectProblem) -> bool {
    match p.coupling() {
        VertexCoupling::Source { forcing, .. } => !forcing.iter().all(poly_is_zero),
        VertexCoupling::Sink { forcing, .. } => !poly_is_zero(forcing),
        _ => false,
    }
}

fn edge_of<'a>(req: &SolveRequest<'a>) -> Result<(f64, &'a PiecewisePoly, Option<f64>)> {
    match req.edge {
        EdgeLabel::Incoming => Ok((req.problem.edge_in().a, req.data.incoming, None)),
        EdgeLabel::Outgoing => Ok((req.problem.edge_out().a, req.data.outgoing, None)),
        EdgeLabel::Bond => {
            let b = req
                .problem
                .edge_bond()
                .ok_or_else(|| Error::Config("the problem has no bond edge".into()))?;
            let poly = req
                .data
                .bond
                .ok_or_else(|| Error::Config("the problem has a bond but no bond data".into()))?;
            Ok((b.a, poly, b.eta))
        }
    }
}

fn check_point(edge: EdgeLabel, x: f64, t: f64, eta: Option<f64>) -> Result<()> {
    if !(x.is_finite() && t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!(
            "evaluation point (x, t) = ({x}, {t}) must be finite with t ≥ 0"
        )));
    }
    let on_edge = match edge {
        EdgeLabel::Incoming => x <= 0.0,
        EdgeLabel::Outgoing => x >= 0.0,
        EdgeLabel::Bond => (0.0..=eta.unwrap()).contains(&x),
    };
    if on_edge {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} lies off the {edge:?} edge")))
    }
}

fn validate_request(req: &SolveRequest) -> Result<()> {
    wellposedness_check(req.problem)?;
    req.contour.validate()?;
    if req.deriv > 2 {
        return Err(Error::Config(format!(
            "derivative order {} not supported (0, 1, 2)",
            req.deriv
        )));
    }
    if req.contour.r <= req.problem.r_max() {
        return Err(Error::Config(format!(
            "contour radius {} must exceed the protected disc radius {}",
            req.contour.r,
            req.problem.r_max()
        )));
    }
    Ok(())
}

/// Evaluates one point, using `cache` for the λ-node quantities.
fn eval_point(req: &SolveRequest, x: f64, t: f64, cache: &NodeCache) -> Result<(C64, f64)> {
    let p = req.problem;
    let d = req.deriv;
    let (a_e, poly, eta) = edge_of(req)?;
    check_point(req.edge, x, t, eta)?;

    if t == 0.0 {
        let side = match req.edge {
            EdgeLabel::Incoming => Side::Left,
            EdgeLabel::Outgoing => Side::Right,
            EdgeLabel::Bond => {
                if x >= eta.unwrap() {
                    Side::Left
                } else {
                    Side::Right
                }
            }
        };
        let v = poly.derivative(d as usize).evaluate(x, side)?;
        return Ok((C64::new(v, 0.0), 0.0));
    }

    // Fourier-type term along the (dipped) real axis.
    let axis_path = real_axis_shifted(&req.contour, a_e, t);
    let axis = run_quad(&axis_path, &req.contour, |lam| {
        let ft = poly.fourier_transform(lam)?;
        let phase = (C64::i() * (lam * x - (lam * lam * lam - a_e * lam) * t)).exp();
        Ok(phase * ipow(lam, d) * ft)
    })?;

    // Initial-data part of the ∂D term, on the rotated sector boundary.
    let d_path = boundary_d_rotated(&req.contour, t);
    let d_data = run_quad(&d_path, &req.contour, |lam| {
        let n = data_node(p, &req.data, t, cache, lam)?;
        let phase = (-C64::i() * lam * lam * lam * t).exp();
        Ok(phase * d_integrand(p, req.edge, x, d, &n.nus, &n.ratios, None))
    })?;

    // Retarded forcing part, on the unrotated sector boundary with a
    // common manual truncation radius on both rays.
    let d_frc = if has_forcing(p) {
        let mut fcfg = req.contour;
        if fcfg.lambda_max <= 0.0 {
            fcfg.lambda_max = FORCING_LAMBDA_MAX;
        }
        let lmax = fcfg.lambda_max;
        run_quad(&boundary_d(&fcfg), &fcfg, |lam| {
            let n = forcing_node(p, &req.data, t, cache, lam)?;
            let w = forcing_window(lam.norm(), lmax);
            Ok(w * d_integrand(p, req.edge, x, d, &n.nus, &n.ratios, Some(n.h)))
        })?
    } else {
        Quadrature {
            value: C64::new(0.0, 0.0),
            err_est: 0.0,
        }
    };

    let two_pi = std::f64::consts::TAU;
    let value = (axis.value - d_data.value - d_frc.value) / two_pi;
    let err = (axis.err_est + d_data.err_est + d_frc.err_est) / two_pi;
    Ok((value, err))
}

/// Evaluates the solution (or a spatial derivative) at a single point.
///
/// The request must carry exactly one point. See [`solve_grid`] for the
/// integral decomposition being evaluated.
///
/// # Examples
///
/// ```
/// use lkdv_graph::contours::ContourConfig;
/// use lkdv_graph::pw_data::{DomainKind, PiecewisePoly};
/// use lkdv_graph::solver::{solve_point, SolveRequest};
/// use lkdv_graph::spectral_system::{DefectProblem, EdgeData, EdgeLabel};
/// use num_complex::Complex64 as C;
///
/// let p = DefectProblem::mismatch(
///     0.0,
///     0.0,
///     [C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 0.0)],
/// )
/// .unwrap();
/// // Tent-shaped datum on the incoming lead, nothing on the outgoing one.
/// let u_in = PiecewisePoly::new(
///     DomainKind::IncomingLead,
///     vec![-1.0, -0.5, 0.0],
///     vec![vec![0.0, 2.0], vec![1.0, -2.0]],
/// )
/// .unwrap();
/// let u_out = PiecewisePoly::zero(DomainKind::OutgoingLead);
/// let mut contour = ContourConfig::new(1.1 * p.r_max());
/// contour.quad_tol = 1e-6;
/// let req = SolveRequest {
///     problem: &p,
///     data: EdgeData { incoming: &u_in, outgoing: &u_out, bond: None },
///     contour,
///     edge: EdgeLabel::Incoming,
///     points: vec![(-0.5, 0.01)],
///     deriv: 0,
/// };
/// let u = solve_point(&req).unwrap();
/// assert!(u.im.abs() < 1e-4);
/// assert!((u.re - 1.0).abs() < 0.5); // still close to the initial peak
/// ```
pub fn solve_point(req: &SolveRequest) -> Result<C64> {
    if req.points.len() != 1 {
        return Err(Error::Config(format!(
            "solve_point expects exactly one point, got {}",
            req.points.len()
        )));
    }
    validate_request(req)?;
    let (x, t) = req.points[0];
    let cache = NodeCache::default();
    Ok(eval_point(req, x, t, &cache)?.0)
}

/// Evaluates the solution over all requested points, in parallel, sharing
/// per-t caches of the λ-node quantities across points on the same contour.
pub fn solve_grid(req: &SolveRequest) -> Result<SolutionField> {
    validate_request(req)?;
    let mut caches: HashMap<u64, Arc<NodeCache>> = HashMap::new();
    for &(_, t) in &req.points {
        caches
            .entry(t.to_bits())
            .or_insert_with(|| Arc::new(NodeCache::default()));
    }
    let results: Vec<Result<(C64, f64)>> = req
        .points
        .par_iter()
        .map(|&(x, t)| eval_point(req, x, t, &caches[&t.to_bits()]))
        .collect();
    let mut values = Vec::with_capacity(results.len());
    let mut error_est = Vec::with_capacity(results.len());
    let mut imag_max = 0.0f64;
    for r in results {
        let (v, e) = r?;
        imag_max = imag_max.max(v.im.abs());
        values.push(v);
        error_est.push(e);
    }
    Ok(SolutionField {
        values,
        imag_max,
        error_est,
    })
}

/// One-sided boundary traces ∂_x^k u_e at the edge ends.
///
/// Returns the traces at x → 0⁻ (incoming lead), x → 0⁺ (outgoing lead)
/// and, when the problem has a bond, at both x → 0⁺ and x → η⁻ on it.
/// Requires t > 0; for forced problems t must not be a breakpoint of a
/// forcing history.
///
/// For unforced problems the traces are evaluated by setting x to the
/// endpoint directly on the deformed contours. With boundary forcing the
/// integrand has an O(1/λ) tail whose contour integral, evaluated exactly
/// at an endpoint, returns the mean of the interior limit and the formula's
/// analytic continuation past the edge — a half-jump, not the trace. Those
/// traces are instead computed at three interior offsets ε, ε/2, ε/4 and
/// extrapolated to the endpoint (second-order Richardson), which evaluates
/// the genuine one-sided limit.
pub fn vertex_values(
    p: &DefectProblem,
    data: &EdgeData,
    contour: &ContourConfig,
    t: f64,
    k: u8,
) -> Result<Vec<VertexValue>> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "vertex traces require t > 0, got {t}"
        )));
    }
    let mut forcing_breaks: Vec<f64> = Vec::new();
    match p.coupling() {
        VertexCoupling::Source { forcing, .. } => {
            for h in forcing {
                forcing_breaks.extend_from_slice(h.breaks());
            }
        }
        VertexCoupling::Sink { forcing, .. } => forcing_breaks.extend_from_slice(forcing.breaks()),
        _ => {}
    }
    if forcing_breaks.iter().any(|&b| (t - b).abs() < 1e-12) {
        return Err(Error::Domain(format!(
            "t = {t} is a breakpoint of a forcing history"
        )));
    }

    // (edge, end, endpoint, inward direction)
    let mut rows: Vec<(EdgeLabel, VertexEnd, f64, f64)> = vec![
        (EdgeLabel::Incoming, VertexEnd::Vertex, 0.0, -1.0),
        (EdgeLabel::Outgoing, VertexEnd::Vertex, 0.0, 1.0),
    ];
    if let Some(eta) = p.eta() {
        rows.push((EdgeLabel::Bond, VertexEnd::Vertex, 0.0, 1.0));
        rows.push((EdgeLabel::Bond, VertexEnd::Far, eta, -1.0));
    }
    let eps0 = 0.05 * p.eta().unwrap_or(1.0).min(1.0);

    let cache = NodeCache::default();
    let mut out = Vec::with_capacity(rows.len());
    for (edge, end, x0, dir) in rows {
        let req = SolveRequest {
            problem: p,
            data: *data,
            contour: *contour,
            edge,
            points: vec![(x0, t)],
            deriv: k,
        };
        validate_request(&req)?;
        let (value, error_est) = if has_forcing(p) {
            let mut u = [C64::new(0.0, 0.0); 3];
            let mut e = [0.0f64; 3];
            for (i, scale) in [1.0, 0.5, 0.25].iter().enumerate() {
                let x = x0 + dir * eps0 * scale;
                let (v, err) = eval_point(&req, x, t, &cache)?;
                u[i] = v;
                e[i] = err;
            }
            // Quadratic fit in the offset: the limit and, as an error
            // estimate, its gap to the linear extrapolant plus the
            // weight-amplified quadrature errors.
            let limit = (u[0] - 6.0 * u[1] + 8.0 * u[2]) / 3.0;
            let linear = 2.0 * u[2] - u[1];
            let err = (e[0] + 6.0 * e[1] + 8.0 * e[2]) / 3.0 + (limit - linear).norm();
            (limit, err)
        } else {
            eval_point(&req, x0, t, &cache)?
        };
        out.push(VertexValue {
            edge,
            end,
            value,
            error_est,
        });
    }
    Ok(out)
}
