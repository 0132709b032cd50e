//! Cross-checks of the two reference solvers: frozen Airy values, the
//! spectral/convolution agreement triangle, conservation and refinement
//! properties, and the aliasing guard.

use lkdv_graph::contours::ContourConfig;
use lkdv_graph::oracle::{airy_convolution, airy_fn, whole_line_solve, LineGrid};
use lkdv_graph::pw_data::{DomainKind, PiecewisePoly};
use lkdv_graph::solver::{solve_point, SolveRequest};
use lkdv_graph::spectral_system::{DefectProblem, EdgeData, EdgeLabel};
use lkdv_graph::{Error, C64};

/// C² bump of peak 1 at x = −1/2 built from two quintic (smootherstep)
/// pieces on [−1, 0]; its transform decays like λ⁻⁴, keeping the
/// effective bandwidth small.
fn smooth_bump() -> PiecewisePoly {
    PiecewisePoly::new(
        DomainKind::IncomingLead,
        vec![-1.0, -0.5, 0.0],
        vec![
            vec![0.0, 0.0, 0.0, 80.0, -240.0, 192.0],
            vec![1.0, 0.0, 0.0, -80.0, 240.0, -192.0],
        ],
    )
    .unwrap()
}

fn zero_out() -> PiecewisePoly {
    PiecewisePoly::zero(DomainKind::OutgoingLead)
}

/// Snaps a target x to the nearest grid node.
fn node_at(grid: &LineGrid, x: f64) -> (usize, f64) {
    let dx = grid.spacing();
    let j = ((x + grid.half_width()) / dx).round() as usize;
    (j, -grid.half_width() + j as f64 * dx)
}

#[test]
fn airy_reference_values() {
    // Independent reference values, frozen once.
    let table: &[(f64, f64)] = &[
        (0.0, 0.3550280538878172),
        (0.5, 0.23169360648083343),
        (1.0, 0.13529241631288147),
        (2.0, 0.03492413042327436),
        (3.5, 0.0025840987869896357),
        (5.0, 0.00010834442813607433),
        (7.0, 7.492128863997157e-07),
        (8.0, 4.6922076160992236e-08),
        (12.0, 1.393184688875363e-13),
        (-0.5, 0.4757280916105395),
        (-1.0, 0.5355608832923522),
        (-2.5, -0.11232506769296623),
        (-5.0, 0.3507610090241142),
        (-7.0, 0.1842808352505062),
        (-9.0, -0.022133721547341126),
        (-12.0, -0.06655517505437264),
        (-20.0, -0.17640612707798434),
    ];
    for &(z, want) in table {
        let got = airy_fn(z);
        assert!(
            (got - want).abs() <= 5e-10,
            "Ai({z}) = {got:e}, want {want:e}"
        );
    }
}

#[test]
fn airy_asymmetry_of_the_two_sides() {
    // Decaying (right) side is positive and tiny; oscillating (left) side
    // changes sign.
    assert!(airy_fn(10.0) > 0.0 && airy_fn(10.0) < 1e-9);
    assert!(airy_fn(-1.0) > 0.0 && airy_fn(-2.5) < 0.0 && airy_fn(-5.0) > 0.0);
}

#[test]
fn grid_and_input_validation() {
    assert!(matches!(LineGrid::new(0.0, 4096), Err(Error::Config(_))));
    assert!(matches!(LineGrid::new(10.0, 4095), Err(Error::Config(_))));
    assert!(matches!(LineGrid::new(10.0, 6000), Err(Error::Config(_))));
    let grid = LineGrid::new(1.5, 4096).unwrap();
    // Support [−1, 0] is not strictly inside [−0.75, 0.75].
    assert!(matches!(
        whole_line_solve(&smooth_bump(), &zero_out(), 0.0, &grid, 0.1),
        Err(Error::Config(_))
    ));
    let grid = LineGrid::new(32.0, 4096).unwrap();
    assert!(matches!(
        whole_line_solve(&smooth_bump(), &zero_out(), 0.0, &grid, -0.1),
        Err(Error::Domain(_))
    ));
    // Wrong kinds.
    assert!(matches!(
        whole_line_solve(&zero_out(), &zero_out(), 0.0, &grid, 0.0),
        Err(Error::Config(_))
    ));
}

#[test]
fn t_zero_is_the_sampling_identity() {
    let grid = LineGrid::new(32.0, 1 << 14).unwrap();
    let u = smooth_bump();
    let sol = whole_line_solve(&u, &zero_out(), 0.3, &grid, 0.0).unwrap();
    let (j, x) = node_at(&grid, -0.5);
    assert_eq!(x, -0.5);
    assert!((sol.values[j] - 1.0).abs() < 1e-10);
    let (j, x) = node_at(&grid, -0.75);
    assert_eq!(x, -0.75);
    // p(2·0.25) = 6/32 − 15/16 + 10/8 scaled: evaluate the quintic.
    let s = 0.25f64;
    let want = 80.0 * s.powi(3) - 240.0 * s.powi(4) + 192.0 * s.powi(5);
    assert!((sol.values[j] - want).abs() < 1e-10);
}

#[test]
fn mass_is_conserved() {
    let grid = LineGrid::new(400.0, 1 << 17).unwrap();
    let u = smooth_bump();
    let m0: f64 = whole_line_solve(&u, &zero_out(), 0.4, &grid, 0.0)
        .unwrap()
        .values
        .iter()
        .sum();
    let m1: f64 = whole_line_solve(&u, &zero_out(), 0.4, &grid, 1e-3)
        .unwrap()
        .values
        .iter()
        .sum();
    assert!(
        ((m1 - m0) * grid.spacing()).abs() <= 1e-8,
        "mass drift {:.3e}",
        ((m1 - m0) * grid.spacing()).abs()
    );
}

#[test]
fn grid_refinement_is_converged() {
    let u = smooth_bump();
    let coarse_grid = LineGrid::new(400.0, 1 << 18).unwrap();
    let fine_grid = LineGrid::new(400.0, 1 << 19).unwrap();
    let coarse = whole_line_solve(&u, &zero_out(), 0.0, &coarse_grid, 1e-3).unwrap();
    let fine = whole_line_solve(&u, &zero_out(), 0.0, &fine_grid, 1e-3).unwrap();
    let mut sup = 0.0f64;
    for j in 0..coarse_grid.len() {
        sup = sup.max((coarse.values[j] - fine.values[2 * j]).abs());
    }
    assert!(sup <= 1e-8, "refinement gap {sup:.3e}");
}

#[test]
fn spectral_matches_airy_convolution() {
    let u = smooth_bump();
    let grid = LineGrid::new(800.0, 1 << 20).unwrap();
    let t = 0.002;
    let sol = whole_line_solve(&u, &zero_out(), 0.0, &grid, t).unwrap();
    let mut sup = 0.0f64;
    for target in [-1.6, -1.1, -0.8, -0.5, -0.2, 0.1, 0.4, 0.8] {
        let (j, x) = node_at(&grid, target);
        let conv = airy_convolution(&u, x, t).unwrap();
        sup = sup.max((sol.values[j] - conv).abs());
    }
    assert!(sup <= 1e-6, "spectral vs convolution sup gap {sup:.3e}");
}

#[test]
fn narrow_bump_approximates_the_kernel() {
    // Quadratic bump of unit mass on [−w, 0]: c·s·(w−s), c = 6/w³.
    let w = 0.02;
    let c = 6.0 / (w * w * w);
    let u = PiecewisePoly::new(
        DomainKind::IncomingLead,
        vec![-w, 0.0],
        vec![vec![0.0, c * w, -c]],
    )
    .unwrap();
    let t = 0.05f64;
    let s3 = (3.0 * t).cbrt();
    for x in [-1.5, -0.4, 0.3, 1.0] {
        let conv = airy_convolution(&u, x, t).unwrap();
        let kernel = airy_fn(-(x + w / 2.0) / s3) / s3;
        assert!(
            (conv - kernel).abs() <= 1e-3,
            "x = {x}: convolution {conv:.6} vs kernel {kernel:.6}"
        );
    }
}

#[test]
fn aliasing_guard_trips_at_large_time() {
    let grid = LineGrid::new(100.0, 1 << 14).unwrap();
    assert!(matches!(
        whole_line_solve(&smooth_bump(), &zero_out(), 0.0, &grid, 0.1),
        Err(Error::AliasingRisk(_))
    ));
}

#[test]
fn contour_solver_closes_the_triangle() {
    // Identity coupling with equal coefficients is a defect-free line, so
    // the contour solution must agree with the whole-line reference.
    let one = C64::new(1.0, 0.0);
    let p = DefectProblem::mismatch(0.0, 0.0, [one, one, one]).unwrap();
    let u_in = smooth_bump();
    let u_out = zero_out();
    let grid = LineGrid::new(800.0, 1 << 20).unwrap();
    let t = 0.002;
    let sol = whole_line_solve(&u_in, &u_out, 0.0, &grid, t).unwrap();
    let mut cfg = ContourConfig::new(1.05 * p.r_max());
    cfg.quad_tol = 1e-7;
    for (edge, target) in [
        (EdgeLabel::Incoming, -0.6),
        (EdgeLabel::Incoming, -0.25),
        (EdgeLabel::Outgoing, 0.3),
    ] {
        let (j, x) = node_at(&grid, target);
        let req = SolveRequest {
            problem: &p,
            data: EdgeData {
                incoming: &u_in,
                outgoing: &u_out,
                bond: None,
            },
            contour: cfg,
            edge,
            points: vec![(x, t)],
            deriv: 0,
        };
        let utm = solve_point(&req).unwrap();
        assert!(
            (utm.re - sol.values[j]).abs() <= 1e-4 && utm.im.abs() <= 1e-6,
            "x = {x}: contour {:.8} vs reference {:.8}",
            utm.re,
            sol.values[j]
        );
    }
}
