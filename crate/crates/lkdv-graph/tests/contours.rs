//! Tests for contour geometry and the adaptive quadrature engine.

use lkdv_graph::contours::{
    boundary_d, boundary_d_offset, boundary_d_rotated, delta_zero_guard, integrate,
    real_axis_shifted, ContourConfig, Decay, Path, Segment,
};
use lkdv_graph::{Error, C64};
use std::f64::consts::{FRAC_PI_3, PI};

fn cfg(r: f64) -> ContourConfig {
    ContourConfig::new(r)
}

#[test]
fn config_validation() {
    assert!(cfg(2.0).validate().is_ok());
    assert!(ContourConfig { delta: 0.6, ..cfg(2.0) }.validate().is_err()); // ≥ π/6
    assert!(ContourConfig { eps: 0.6, ..cfg(2.0) }.validate().is_err()); // ≥ 1/√3
    assert!(ContourConfig { r: 0.0, ..cfg(2.0) }.validate().is_err());
    assert!(ContourConfig { quad_tol: 0.0, ..cfg(2.0) }.validate().is_err());
}

#[test]
fn sector_geometry() {
    let p = boundary_d(&cfg(2.0));
    // Arc endpoints at 2e^{−2πi/3} and 2e^{−iπ/3}.
    match p.segments[1] {
        Segment::Arc { radius, theta0, theta1, .. } => {
            assert!((radius - 2.0).abs() < 1e-15);
            assert!((theta0 + FRAC_PI_3).abs() < 1e-15);
            assert!((theta1 + 2.0 * FRAC_PI_3).abs() < 1e-15);
        }
        _ => panic!("expected arc"),
    }
    // On both rays Re(iλ³) = 0; at the sector midline it is −r³.
    for th in [-2.0 * FRAC_PI_3, -FRAC_PI_3] {
        let lam = C64::from_polar(5.0, th);
        let v = (C64::i() * lam * lam * lam).re;
        assert!(v.abs() < 1e-12);
    }
    let lam = C64::from_polar(3.0, -PI / 2.0);
    assert!(((C64::i() * lam * lam * lam).re + 27.0).abs() < 1e-12);
}

#[test]
fn rotated_ray_decay_rate() {
    // δ = π/36, t = 0.1, r = 10: |e^{−iλ³t}| = e^{−r³ t sin 3δ} = e^{−100·sin(π/12)}.
    let c = cfg(2.0);
    let p = boundary_d_rotated(&c, 0.1);
    let th_out = -FRAC_PI_3 + c.delta;
    let lam = C64::from_polar(10.0, th_out);
    let mag = (-C64::i() * lam * lam * lam * 0.1).exp().norm();
    let expect = (-100.0 * (PI / 12.0).sin()).exp();
    assert!((mag / expect - 1.0).abs() < 1e-10);
    // Tag carries the same rate.
    match p.segments[2] {
        Segment::Ray { decay: Decay::Cubic { rate }, .. } => {
            assert!((rate - 0.1 * (3.0 * c.delta).sin()).abs() < 1e-15);
        }
        _ => panic!("expected cubic-decay ray"),
    }
}

#[test]
fn shifted_axis_geometry() {
    // a = 0, ε = 0.25 → B = 1.05·(0.25/√3) + 1.
    let c = cfg(2.0);
    let p = real_axis_shifted(&c, 0.0, 1.0);
    let b = 1.05 * (0.25 / 3.0_f64.sqrt()) + 1.0;
    match p.segments[0] {
        Segment::Ray { base, .. } => {
            assert!((base.re + b).abs() < 1e-12 && (base.im + 0.25).abs() < 1e-15);
        }
        _ => panic!("expected ray"),
    }
    // Exponent bound on the arm: z = 5, y = 0.25, a = 0, t = 1, x = 0; the
    // decaying factor on the dipped arms is e^{−iλ³t}.
    let lam = C64::new(5.0, -0.25);
    let mag = (-C64::i() * lam * lam * lam).exp().norm();
    let expect = (-0.25_f64 * (3.0 * 25.0 - 0.0625)).exp();
    assert!((mag / expect - 1.0).abs() < 1e-10);
    // t = 0 degenerates to the plain axis.
    let p0 = real_axis_shifted(&c, 0.0, 0.0);
    match p0.segments[0] {
        Segment::Ray { base, .. } => assert_eq!(base.im, 0.0),
        _ => panic!("expected ray"),
    }
}

#[test]
fn residue_on_unit_circle() {
    // ∮ dλ/λ = 2πi.
    let p = Path {
        segments: vec![Segment::Arc {
            center: C64::new(0.0, 0.0),
            radius: 1.0,
            theta0: 0.0,
            theta1: 2.0 * PI,
        }],
    };
    let q = integrate(&p, |lam| 1.0 / lam, &cfg(2.0)).unwrap();
    assert!((q.value - C64::new(0.0, 2.0 * PI)).norm() < 1e-12);
}

#[test]
fn closed_loop_of_constant_is_zero() {
    // Triangle + arc mix, closed: ∮ 1 dλ = 0.
    let a = C64::new(1.0, 0.0);
    let b = C64::new(0.0, 1.0);
    let p = Path {
        segments: vec![
            Segment::Arc {
                center: C64::new(0.0, 0.0),
                radius: 1.0,
                theta0: 0.0,
                theta1: PI / 2.0,
            },
            Segment::Line { start: b, end: C64::new(-0.5, -0.5) },
            Segment::Line { start: C64::new(-0.5, -0.5), end: a },
        ],
    };
    let q = integrate(&p, |_| C64::new(1.0, 0.0), &cfg(2.0)).unwrap();
    assert!(q.value.norm() < 1e-13);
}

#[test]
fn gaussian_over_shifted_axis() {
    // ∫ e^{−λ²} dλ = √π, evaluated on the dipped contour (the integrand is
    // entire and Gaussian-decaying, so the dip changes nothing).
    let c = cfg(2.0);
    let p = real_axis_shifted(&c, 0.0, 1.0);
    let q = integrate(&p, |lam| (-lam * lam).exp(), &c).unwrap();
    assert!(
        (q.value - PI.sqrt()).norm() < 1e-9,
        "got {} (err est {})",
        q.value,
        q.err_est
    );
    assert!(q.err_est < 1e-8);
}

#[test]
fn shifted_axis_matches_plain_axis_reference() {
    // ∫ e^{−iλ³t} e^{−λ²} dλ with t = 1: dipped contour vs plain-axis
    // truncated reference (the Gaussian factor makes truncation at |λ| = 8
    // conservative to ~e^{−64}).
    let c = cfg(2.0);
    let f = |lam: C64| (-C64::i() * lam * lam * lam).exp() * (-lam * lam).exp();
    let shifted = integrate(&real_axis_shifted(&c, 0.0, 1.0), f, &c).unwrap();
    let plain_cfg = ContourConfig { lambda_max: 8.0, ..c };
    let plain = integrate(&real_axis_shifted(&plain_cfg, 0.0, 0.0), f, &plain_cfg).unwrap();
    assert!(
        (shifted.value - plain.value).norm() < 1e-9,
        "shifted {} vs plain {}",
        shifted.value,
        plain.value
    );
}

#[test]
fn deformation_invariance_rotated_vs_offset() {
    // e^{−iλ³t}/λ² is analytic between the rotated and offset realizations
    // of the sector boundary and decays on both, so the integrals agree.
    let t = 0.5;
    let c = cfg(2.0);
    let f = |lam: C64| (-C64::i() * lam * lam * lam * t).exp() / (lam * lam);
    let rot = integrate(&boundary_d_rotated(&c, t), f, &c).unwrap();
    let off = integrate(&boundary_d_offset(&c, t), f, &c).unwrap();
    assert!(
        (rot.value - off.value).norm() < 10.0 * c.quad_tol,
        "rotated {} vs offset {}",
        rot.value,
        off.value
    );
    // And against a second rotation angle.
    let c2 = ContourConfig { delta: PI / 60.0, ..c };
    let rot2 = integrate(&boundary_d_rotated(&c2, t), f, &c2).unwrap();
    assert!((rot.value - rot2.value).norm() < 10.0 * c.quad_tol);
}

#[test]
fn closed_sector_cauchy_check() {
    // ∂D and its rotated version, truncated at Λ and closed by arcs of
    // radius Λ, bound a region where e^{−iλ³t}/λ² is analytic: the closed
    // integral vanishes.
    let t = 1.0;
    let c = cfg(2.0);
    let lam_max = 6.0;
    let th_in = -2.0 * FRAC_PI_3;
    let th_out = -FRAC_PI_3;
    let d = c.delta;
    let at = |r: f64, th: f64| C64::from_polar(r, th);
    let p = Path {
        segments: vec![
            // Plain sector boundary, inward ray truncated at Λ.
            Segment::Line { start: at(lam_max, th_in), end: at(c.r, th_in) },
            Segment::Arc { center: C64::new(0.0, 0.0), radius: c.r, theta0: th_in, theta1: th_out },
            Segment::Line { start: at(c.r, th_out), end: at(lam_max, th_out) },
            // Close over to the rotated outgoing ray.
            Segment::Arc { center: C64::new(0.0, 0.0), radius: lam_max, theta0: th_out, theta1: th_out + d },
            // Rotated boundary, reversed.
            Segment::Line { start: at(lam_max, th_out + d), end: at(c.r, th_out + d) },
            Segment::Arc { center: C64::new(0.0, 0.0), radius: c.r, theta0: th_out + d, theta1: th_in - d },
            Segment::Line { start: at(c.r, th_in - d), end: at(lam_max, th_in - d) },
            // Close back to the plain incoming ray.
            Segment::Arc { center: C64::new(0.0, 0.0), radius: lam_max, theta0: th_in - d, theta1: th_in },
        ],
    };
    let f = |lam: C64| (-C64::i() * lam * lam * lam * t).exp() / (lam * lam);
    let q = integrate(&p, f, &c).unwrap();
    assert!(q.value.norm() < 10.0 * c.quad_tol, "closed integral {}", q.value);
}

#[test]
fn tolerance_monotonicity_and_truncation_soundness() {
    let t = 0.5;
    let c = cfg(2.0);
    let f = |lam: C64| (-C64::i() * lam * lam * lam * t).exp() / (lam * lam);
    let q1 = integrate(&boundary_d_rotated(&c, t), f, &c).unwrap();
    let c_fine = ContourConfig { quad_tol: c.quad_tol / 2.0, ..c };
    let q2 = integrate(&boundary_d_rotated(&c_fine, t), f, &c_fine).unwrap();
    assert!((q1.value - q2.value).norm() <= q1.err_est.max(1e-15));
    // Forcing a larger truncation radius moves the result by less than the
    // reported estimate (which includes the tail bound).
    let c_far = ContourConfig { lambda_max: 200.0, ..c };
    let q3 = integrate(&boundary_d_rotated(&c_far, t), f, &c_far).unwrap();
    assert!((q1.value - q3.value).norm() <= q1.err_est.max(1e-15));
}

#[test]
fn oscillatory_ray_needs_lambda_max() {
    let c = cfg(2.0);
    let p = boundary_d(&c);
    let err = integrate(&p, |lam| 1.0 / (lam * lam), &c);
    assert!(matches!(err, Err(Error::Config(_))));
}

#[test]
fn power_decay_retag() {
    // 1/λ⁴ on the plain sector boundary, retagged as power decay so the
    // tail bound is explicit. The antiderivative −λ^{−3}/3 vanishes at both
    // ray ends, so the exact integral is 0.
    let c = ContourConfig { quad_tol: 1e-6, ..cfg(2.0) };
    let p = boundary_d(&c).with_ray_decay(Decay::Power { k: 4 });
    let q = integrate(&p, |lam| 1.0 / (lam * lam * lam * lam), &c).unwrap();
    assert!(q.value.norm() <= q.err_est + 1e-8, "value {} err {}", q.value, q.err_est);
}

#[test]
fn tolerance_not_met_on_singular_integrand() {
    // Pole sitting on the path: the engine must give up loudly.
    let c = cfg(2.0);
    let p = Path {
        segments: vec![Segment::Line {
            start: C64::new(-1.0, 0.0),
            end: C64::new(1.0, 0.0),
        }],
    };
    let r = integrate(&p, |lam| 1.0 / lam, &c);
    assert!(matches!(r, Err(Error::ToleranceNotMet { .. })));
}

#[test]
fn zero_guard_passes_and_trips() {
    let c = cfg(2.0);
    let p = boundary_d_rotated(&c, 0.1);
    // Healthy determinant ~ λ³.
    let ok = delta_zero_guard(
        &p,
        &c,
        |lam| (lam * lam * lam, lam.norm().powi(3)),
        1e-6,
    );
    assert!(ok.is_ok());
    // Determinant with a zero right on the outgoing ray; with leading
    // magnitude ~|λ| a floor ratio of 0.1 flags any node within ~|λ|/10.
    let zero_at = C64::from_polar(7.0, -FRAC_PI_3 + c.delta);
    let trip = delta_zero_guard(
        &p,
        &c,
        move |lam| (lam - zero_at, lam.norm().max(1.0)),
        0.1,
    );
    match trip {
        Err(Error::GuardTripped { lambda }) => {
            assert!((lambda - zero_at).norm() < 1.0, "tripped at {lambda}");
        }
        other => panic!("expected guard trip, got {other:?}"),
    }
}
