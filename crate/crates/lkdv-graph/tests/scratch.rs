//! Temporary probe (not part of the suite).

use lkdv_graph::oracle::{whole_line_solve, LineGrid};
use lkdv_graph::pw_data::{DomainKind, PiecewisePoly};

fn c4_bump() -> PiecewisePoly {
    // Degree-9 smootherstep rise/fall: C4 at all three breakpoints.
    PiecewisePoly::new(
        DomainKind::IncomingLead,
        vec![-1.0, -0.5, 0.0],
        vec![
            vec![0.0, 0.0, 0.0, 0.0, 0.0, 4032.0, -26880.0, 69120.0, -80640.0, 35840.0],
            vec![1.0, 0.0, 0.0, 0.0, 0.0, -4032.0, 26880.0, -69120.0, 80640.0, -35840.0],
        ],
    )
    .unwrap()
}

#[test]
#[ignore]
fn probe_bandwidth() {
    let u = c4_bump();
    let zero = PiecewisePoly::zero(DomainKind::OutgoingLead);
    let grid = LineGrid::new(400.0, 1 << 17).unwrap();
    let sol = whole_line_solve(&u, &zero, 0.0, &grid, 0.0).unwrap();
    println!("lambda_eff = {}, spread at t=0.2: {}", sol.lambda_eff, 3.0 * sol.lambda_eff.powi(2) * 0.2);
    // value sanity at x=-0.5 (peak) and x=-0.75 (S9(0.5)=0.5)
    let dx = grid.spacing();
    let j = ((-0.5 + grid.half_width()) / dx).round() as usize;
    println!("u(-0.5) = {}", sol.values[j]);
}
