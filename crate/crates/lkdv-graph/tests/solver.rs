//! End-to-end behaviour of the point/grid solvers: consistency between the
//! two entry points, reality of real-data solutions, tolerance
//! monotonicity, recovery of initial data as t → 0⁺, recovery of
//! prescribed boundary histories, and propagation of vertex coupling
//! across the defect.

use lkdv_graph::contours::ContourConfig;
use lkdv_graph::pw_data::{DomainKind, PiecewisePoly};
use lkdv_graph::solver::{solve_grid, solve_point, vertex_values, SolveRequest, VertexEnd};
use lkdv_graph::spectral_system::{DefectProblem, EdgeData, EdgeLabel};
use lkdv_graph::{Error, C64};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// C¹ bump 16·x²(1+x)² supported on [−1, 0]; peak value 1 at x = −1/2 and
/// zero slope at both endpoints, so dispersive tails from the support
/// boundary stay small at short times.
fn bump_incoming() -> PiecewisePoly {
    PiecewisePoly::new(
        DomainKind::IncomingLead,
        vec![-1.0, 0.0],
        vec![vec![0.0, 0.0, 16.0, -32.0, 16.0]],
    )
    .unwrap()
}

fn zero_out() -> PiecewisePoly {
    PiecewisePoly::zero(DomainKind::OutgoingLead)
}

fn zero_in() -> PiecewisePoly {
    PiecewisePoly::zero(DomainKind::IncomingLead)
}

fn zero_bond() -> PiecewisePoly {
    PiecewisePoly::zero(DomainKind::Bond)
}

/// The mismatch example configuration: coefficients (2.2, 2.0, 1.1).
fn mismatch_example() -> DefectProblem {
    DefectProblem::mismatch(0.0, 0.0, [c(2.2), c(2.0), c(1.1)]).unwrap()
}

/// The loop example configuration: (b₀,b₁,β₀,β₁,B₀,B₁) = (0.6,0.7,0.8,2.1,0.2,3.0), η=1.
fn loop_example() -> DefectProblem {
    DefectProblem::loop_defect(
        0.0,
        0.0,
        0.0,
        1.0,
        [c(0.6), c(0.7)],
        [c(0.8), c(2.1)],
        [c(0.2), c(3.0)],
    )
    .unwrap()
}

fn contour_for(p: &DefectProblem, quad_tol: f64) -> ContourConfig {
    let mut cfg = ContourConfig::new(1.05 * p.r_max());
    cfg.quad_tol = quad_tol;
    cfg
}

#[test]
fn grid_of_one_matches_solve_point() {
    let p = mismatch_example();
    let u_in = bump_incoming();
    let u_out = zero_out();
    let req = SolveRequest {
        problem: &p,
        data: EdgeData {
            incoming: &u_in,
            outgoing: &u_out,
            bond: None,
        },
        contour: contour_for(&p, 1e-8),
        edge: EdgeLabel::Incoming,
        points: vec![(-0.4, 0.05)],
        deriv: 0,
    };
    let single = solve_point(&req).unwrap();
    let grid = solve_grid(&req).unwrap();
    assert_eq!(grid.values.len(), 1);
    assert!((grid.values[0] - single).norm() < 1e-12);
    assert!(grid.error_est[0] < 1e-7);
}

#[test]
fn reality_and_tolerance_monotonicity() {
    let p = mismatch_example();
    let u_in = bump_incoming();
    let u_out = zero_out();
    let points: Vec<(f64, f64)> = [-2.0, -0.7, -0.2]
        .iter()
        .map(|&x| (x, 0.014))
        .collect();
    let mut req = SolveRequest {
        problem: &p,
        data: EdgeData {
            incoming: &u_in,
            outgoing: &u_out,
            bond: None,
        },
        contour: contour_for(&p, 1e-8),
        edge: EdgeLabel::Incoming,
        points,
        deriv: 0,
    };
    let coarse = solve_grid(&req).unwrap();
    assert!(coarse.imag_max <= 100.0 * 1e-8, "imag_max = {:.3e}", coarse.imag_max);
    req.contour.quad_tol = 1e-9;
    let fine = solve_grid(&req).unwrap();
    for (a, b) in coarse.values.iter().zip(fine.values.iter()) {
        assert!((a - b).norm() <= 1e-7, "coarse/fine gap {:.3e}", (a - b).norm());
    }
}

#[test]
fn t_zero_short_circuits_to_data() {
    let p = mismatch_example();
    let u_in = bump_incoming();
    let u_out = zero_out();
    let req = SolveRequest {
        problem: &p,
        data: EdgeData {
            incoming: &u_in,
            outgoing: &u_out,
            bond: None,
        },
        contour: contour_for(&p, 1e-8),
        edge: EdgeLabel::Incoming,
        points: vec![(-0.5, 0.0), (-0.25, 0.0)],
        deriv: 0,
    };
    let field = solve_grid(&req).unwrap();
    assert!((field.values[0] - c(1.0)).norm() < 1e-12);
    assert!((field.values[1] - c(0.5625)).norm() < 1e-12);
    // First derivative: 32x(1+x)(1+2x) vanishes at x = −1/2.
    let dreq = SolveRequest {
        deriv: 1,
        points: vec![(-0.5, 0.0)],
        ..req
    };
    assert!(solve_point(&dreq).unwrap().norm() < 1e-15);
}

#[test]
fn initial_condition_recovery_small_t() {
    let p = mismatch_example();
    let u_in = bump_incoming();
    let u_out = zero_out();
    let data = EdgeData {
        incoming: &u_in,
        outgoing: &u_out,
        bond: None,
    };
    let req = SolveRequest {
        problem: &p,
        data,
        contour: contour_for(&p, 1e-6),
        edge: EdgeLabel::Incoming,
        points: vec![(-0.5, 1e-4), (-0.7, 1e-4)],
        deriv: 0,
    };
    let field = solve_grid(&req).unwrap();
    let exact = [1.0, 0.7056];
    for (v, e) in field.values.iter().zip(exact.iter()) {
        assert!(
            (v.re - e).abs() <= 1e-2,
            "recovered {:.6} vs datum {:.6}",
            v.re,
            e
        );
    }
    // Outgoing lead held zero data; shortly after t = 0 it is still small.
    let out_req = SolveRequest {
        edge: EdgeLabel::Outgoing,
        points: vec![(0.5, 1e-4)],
        ..req
    };
    assert!(solve_point(&out_req).unwrap().norm() <= 1e-2);
}

#[test]
fn loop_energy_crosses_the_defect() {
    let p = loop_example();
    let u_in = bump_incoming();
    let u_out = zero_out();
    let u_bond = zero_bond();
    // The arc must clear this configuration's determinant zero near
    // |λ| ≈ 5; radius doubling (see the verification suite) confirms 6.3.
    let mut contour = ContourConfig::new(6.3);
    contour.quad_tol = 1e-8;
    let req = SolveRequest {
        problem: &p,
        data: EdgeData {
            incoming: &u_in,
            outgoing: &u_out,
            bond: Some(&u_bond),
        },
        contour,
        edge: EdgeLabel::Outgoing,
        points: vec![(1.0, 0.014)],
        deriv: 0,
    };
    let field = solve_grid(&req).unwrap();
    let u = field.values[0];
    assert!(
        u.norm() > 10.0 * field.error_est[0],
        "|u₊(1, 0.014)| = {:.3e} vs error {:.3e}",
        u.norm(),
        field.error_est[0]
    );
    assert!(field.imag_max <= 1e-6);
}

#[test]
fn mismatch_vertex_ratio_matches_coupling() {
    let p = mismatch_example();
    let u_in = bump_incoming();
    let u_out = zero_out();
    let data = EdgeData {
        incoming: &u_in,
        outgoing: &u_out,
        bond: None,
    };
    let cfg = contour_for(&p, 1e-9);
    for k in [0u8, 1u8] {
        let rows = vertex_values(&p, &data, &cfg, 0.014, k).unwrap();
        let minus = rows
            .iter()
            .find(|r| r.edge == EdgeLabel::Incoming)
            .unwrap()
            .value;
        let plus = rows
            .iter()
            .find(|r| r.edge == EdgeLabel::Outgoing)
            .unwrap()
            .value;
        let b_k = [2.2, 2.0][k as usize];
        let rel = (plus / minus - c(b_k)).norm() / b_k;
        assert!(
            rel <= 1e-4,
            "k = {k}: ratio {:.8} vs B_{k} = {b_k}, rel err {rel:.3e}",
            (plus / minus).re
        );
    }
}

#[test]
fn sink_recovers_prescribed_far_trace() {
    let h = PiecewisePoly::new(DomainKind::TimeInterval, vec![0.0, 1.0], vec![vec![0.0, 1.0]])
        .unwrap();
    let p = DefectProblem::sink(
        0.0,
        0.0,
        0.0,
        1.0,
        [c(0.6), c(0.7), c(1.1)],
        [c(0.2), c(3.0), c(1.0)],
        h,
    )
    .unwrap();
    let u_in = zero_in();
    let u_out = zero_out();
    let u_bond = zero_bond();
    let data = EdgeData {
        incoming: &u_in,
        outgoing: &u_out,
        bond: Some(&u_bond),
    };
    let cfg = contour_for(&p, 1e-4);
    let rows = vertex_values(&p, &data, &cfg, 0.4, 0).unwrap();
    let far = rows
        .iter()
        .find(|r| r.edge == EdgeLabel::Bond && r.end == VertexEnd::Far)
        .unwrap()
        .value;
    assert!(
        (far - c(0.4)).norm() <= 1e-3,
        "u₀(η⁻, 0.4) = {far:?}, expected 0.4"
    );
}

#[test]
fn source_recovers_prescribed_vertex_traces() {
    let h0 = PiecewisePoly::new(DomainKind::TimeInterval, vec![0.0, 1.0], vec![vec![0.0, 1.0]])
        .unwrap();
    let h1 = PiecewisePoly::new(DomainKind::TimeInterval, vec![0.0, 1.0], vec![vec![0.0, 0.3]])
        .unwrap();
    let p = DefectProblem::source(
        0.0,
        0.0,
        0.0,
        1.0,
        [c(0.8), c(2.1)],
        [c(0.2), c(3.0)],
        h0,
        h1,
    )
    .unwrap();
    let u_in = zero_in();
    let u_out = zero_out();
    let u_bond = zero_bond();
    let data = EdgeData {
        incoming: &u_in,
        outgoing: &u_out,
        bond: Some(&u_bond),
    };
    let cfg = contour_for(&p, 1e-4);
    let t = 0.4;
    for (k, expect) in [(0u8, t), (1u8, 0.3 * t)] {
        let rows = vertex_values(&p, &data, &cfg, t, k).unwrap();
        let near = rows
            .iter()
            .find(|r| r.edge == EdgeLabel::Bond && r.end == VertexEnd::Vertex)
            .unwrap()
            .value;
        assert!(
            (near - c(expect)).norm() <= 1e-3,
            "∂_x^{k} u₀(0⁺, {t}) = {near:?}, expected {expect}"
        );
    }
}

#[test]
fn request_validation_errors() {
    let p = mismatch_example();
    let u_in = bump_incoming();
    let u_out = zero_out();
    let data = EdgeData {
        incoming: &u_in,
        outgoing: &u_out,
        bond: None,
    };
    let base = SolveRequest {
        problem: &p,
        data,
        contour: contour_for(&p, 1e-8),
        edge: EdgeLabel::Incoming,
        points: vec![(-0.5, 0.05)],
        deriv: 0,
    };

    // x off the incoming lead.
    let off = SolveRequest {
        points: vec![(0.5, 0.05)],
        ..base.clone()
    };
    assert!(matches!(solve_point(&off), Err(Error::Domain(_))));

    // Unsupported derivative order.
    let d3 = SolveRequest {
        deriv: 3,
        ..base.clone()
    };
    assert!(matches!(solve_point(&d3), Err(Error::Config(_))));

    // Bond edge requested on a bondless problem.
    let bondless = SolveRequest {
        edge: EdgeLabel::Bond,
        ..base.clone()
    };
    assert!(matches!(solve_point(&bondless), Err(Error::Config(_))));

    // Contour radius inside the protected disc.
    let mut small = base.clone();
    small.contour.r = 0.5 * p.r_max();
    assert!(matches!(solve_point(&small), Err(Error::Config(_))));

    // solve_point demands exactly one point.
    let two = SolveRequest {
        points: vec![(-0.5, 0.05), (-0.6, 0.05)],
        ..base
    };
    assert!(matches!(solve_point(&two), Err(Error::Config(_))));
}
