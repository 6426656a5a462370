//! Linear-programming feasibility queries.

use microlp::{ComparisonOp, OptimizationDirection, Problem};

/// Whether `point` is a convex combination of `vertices`, allowing `tol`
/// slack per coordinate.
pub fn in_convex_hull(point: &[f64], vertices: &[&[f64]], tol: f64) -> bool {
    if vertices.is_empty() {
        return false;
    }
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let weights: Vec<_> = vertices
        .iter()
        .map(|_| problem.add_var(0.0, (0.0, f64::INFINITY)))
        .collect();
    problem.add_constraint(
        weights.iter().map(|&w| (w, 1.0)).collect::<Vec<_>>(),
        ComparisonOp::Eq,
        1.0,
    );
    for (coord, &target) in point.iter().enumerate() {
        let expr: Vec<_> = weights
            .iter()
            .zip(vertices)
            .map(|(&w, v)| (w, v[coord]))
            .collect();
        problem.add_constraint(expr.clone(), ComparisonOp::Le, target + tol);
        problem.add_constraint(expr, ComparisonOp::Ge, target - tol);
    }
    problem.solve().is_ok()
}

/// Effects `r_i in [0,1]^K` with `sum_i r_i <= 1` entrywise and
/// `r_i . p_j = delta_ij`, if any exist.
pub fn distinguishing_effects(states: &[&[f64]]) -> Option<Vec<Vec<f64>>> {
    let m = states.len();
    let k = states.first()?.len();
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<Vec<_>> = (0..m)
        .map(|_| (0..k).map(|_| problem.add_var(0.0, (0.0, 1.0))).collect())
        .collect();
    for coord in 0..k {
        let expr: Vec<_> = vars.iter().map(|row| (row[coord], 1.0)).collect();
        problem.add_constraint(expr, ComparisonOp::Le, 1.0);
    }
    for (i, row) in vars.iter().enumerate() {
        for (j, state) in states.iter().enumerate() {
            let expr: Vec<_> = row
                .iter()
                .zip(state.iter())
                .map(|(&v, &p)| (v, p))
                .collect();
            let target = if i == j { 1.0 } else { 0.0 };
            problem.add_constraint(expr, ComparisonOp::Eq, target);
        }
    }
    let solution = problem.solve().ok()?.into_solution().ok()?;
    Some(
        vars.iter()
            .map(|row| {
                row.iter()
                    .map(|&v| solution.var_value(v).clamp(0.0, 1.0))
                    .collect()
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_membership() {
        let verts: Vec<&[f64]> = vec![&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]];
        assert!(in_convex_hull(&[0.25, 0.5], &verts, 1e-12));
        assert!(in_convex_hull(&[0.5, 0.5], &verts, 1e-12));
        assert!(!in_convex_hull(&[0.6, 0.5], &verts, 1e-12));
        assert!(!in_convex_hull(&[-0.1, 0.5], &verts, 1e-12));
    }

    #[test]
    fn basis_states_are_distinguishable_but_mixtures_are_not() {
        let e = distinguishing_effects(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert_eq!(e.len(), 2);
        assert!(distinguishing_effects(&[&[1.0, 0.0], &[0.5, 0.5]]).is_none());
    }
}
