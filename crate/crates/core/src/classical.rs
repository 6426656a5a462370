//! Classical ball-in-boxes theory: `K = N`, simplex state space,
//! permutations as reversible dynamics.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lp;
use crate::model::{
    check_weight, EffectVector, StateVector, TheoryModel, TransformMatrix, Validity,
};

/// Largest `N` for which the `N!` permutations are enumerated.
pub const MAX_ENUMERATED_BOXES: usize = 8;

pub fn classical_model(n: usize) -> Result<TheoryModel> {
    TheoryModel::classical(n)
}

/// Effect of looking in box `index` (0-based) out of `boxes`.
pub fn look_in_box(boxes: usize, index: usize) -> Result<EffectVector> {
    if index >= boxes {
        return Err(Error::domain(format!(
            "box {index} out of range for {boxes} boxes"
        )));
    }
    let mut r = vec![0.0; boxes];
    r[index] = 1.0;
    Ok(EffectVector::new(r))
}

/// Measure `r1` with probability `lambda`, otherwise `r2`.
pub fn coin_mix_effect(r1: &EffectVector, r2: &EffectVector, lambda: f64) -> Result<EffectVector> {
    Error::check_len(r1.len(), r2.len())?;
    check_weight(lambda)?;
    Ok(EffectVector::new(
        r1.iter()
            .zip(r2.iter())
            .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
            .collect(),
    ))
}

/// The `N` coordinate basis vectors followed by the null state.
pub fn simplex_vertices(n: usize) -> Vec<StateVector> {
    let mut verts: Vec<StateVector> = (0..n)
        .map(|i| {
            let mut p = vec![0.0; n];
            p[i] = 1.0;
            StateVector::new(p)
        })
        .collect();
    verts.push(StateVector::null(n));
    verts
}

/// Membership in the sub-normalized simplex decided by linear programming
/// over its vertices rather than the closed-form inequalities.
pub fn in_state_set_lp(p: &StateVector, tol: f64) -> bool {
    let verts = simplex_vertices(p.len());
    let refs: Vec<&[f64]> = verts.iter().map(|v| v.as_slice()).collect();
    lp::in_convex_hull(p, &refs, tol)
}

/// Indices of the points that are not convex combinations of the others.
/// Exact duplicates are collapsed onto their first occurrence.
pub fn extreme_points(points: &[StateVector], tol: f64) -> Vec<usize> {
    let mut extreme = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if points[..i].iter().any(|q| q == p) {
            continue;
        }
        let others: Vec<&[f64]> = points
            .iter()
            .filter(|q| *q != p)
            .map(|q| q.as_slice())
            .collect();
        if !lp::in_convex_hull(p, &others, tol) {
            extreme.push(i);
        }
    }
    extreme
}

/// Entries non-negative, column sums at most one.
pub(crate) fn substochastic_validity(z: &TransformMatrix, tol: f64) -> Validity {
    let m = z.matrix();
    if let Some(x) = m.iter().find(|x| !x.is_finite() || **x < -tol) {
        return Validity::invalid(format!("entry {x} is negative"));
    }
    for (j, col) in m.column_iter().enumerate() {
        let sum: f64 = col.iter().sum();
        if sum > 1.0 + tol {
            return Validity::invalid(format!("column {j} sums to {sum} > 1"));
        }
    }
    Validity::Valid
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                extend(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Matrix sending box `i` to box `sigma[i]`.
pub fn permutation_matrix(sigma: &[usize]) -> TransformMatrix {
    let n = sigma.len();
    let mut m = DMatrix::zeros(n, n);
    for (i, &j) in sigma.iter().enumerate() {
        m[(j, i)] = 1.0;
    }
    TransformMatrix::from_matrix(m)
}

fn check_enumerable(n: usize) -> Result<()> {
    if n > MAX_ENUMERATED_BOXES {
        Err(Error::Resource(format!(
            "{n}! permutations exceeds the enumeration limit (N <= {MAX_ENUMERATED_BOXES})"
        )))
    } else {
        Ok(())
    }
}

/// The `N!` permutation matrices, which are exactly the reversible
/// substochastic maps.
pub fn classical_reversible_transforms(n: usize) -> Result<Vec<TransformMatrix>> {
    if n == 0 {
        return Err(Error::domain("need at least one box"));
    }
    check_enumerable(n)?;
    Ok(permutations(n)
        .iter()
        .map(|s| permutation_matrix(s))
        .collect())
}

/// Minimum Frobenius distance between distinct reversible transformations.
///
/// The distance is invariant under left multiplication by a permutation, so
/// the minimum over pairs equals the minimum of `||P - I||` over
/// non-identity `P`.
pub fn classical_discreteness_gap(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(
            "a single box has no distinct reversible maps",
        ));
    }
    let all = classical_reversible_transforms(n)?;
    let id = TransformMatrix::identity(n);
    Ok(all
        .iter()
        .map(|z| z.frobenius_distance(&id))
        .filter(|&d| d > 0.0)
        .fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::probability;

    #[test]
    fn model_examples() {
        let m = classical_model(3).unwrap();
        assert_eq!(m.k(), 3);
        let third = StateVector::new(vec![1.0 / 3.0; 3]);
        assert!(m.validate_state(&third).unwrap().is_valid());
        assert!(!m
            .validate_state(&StateVector::new(vec![0.5; 3]))
            .unwrap()
            .is_valid());
        let one = classical_model(1).unwrap();
        assert!(one
            .validate_state(&StateVector::new(vec![0.4]))
            .unwrap()
            .is_valid());
        assert!(!one
            .validate_state(&StateVector::new(vec![1.2]))
            .unwrap()
            .is_valid());
        assert!(classical_model(0).is_err());
    }

    #[test]
    fn bit_vertices() {
        let v = simplex_vertices(2);
        assert_eq!(v[0].as_slice(), &[1.0, 0.0]);
        assert_eq!(v[1].as_slice(), &[0.0, 1.0]);
        assert_eq!(v[2].as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn look_in_box_examples() {
        assert_eq!(look_in_box(4, 0).unwrap().as_slice(), &[1.0, 0.0, 0.0, 0.0]);
        let p = StateVector::new(vec![0.0, 1.0, 0.0]);
        assert_eq!(probability(&look_in_box(3, 1).unwrap(), &p).unwrap(), 1.0);
        let q = StateVector::new(vec![0.25, 0.75]);
        assert_eq!(probability(&look_in_box(2, 0).unwrap(), &q).unwrap(), 0.25);
        assert!(look_in_box(2, 2).is_err());
    }

    #[test]
    fn coin_mix_examples() {
        let r1 = look_in_box(2, 0).unwrap();
        let r2 = look_in_box(2, 1).unwrap();
        let half = coin_mix_effect(&r1, &r2, 0.5).unwrap();
        assert_eq!(half.as_slice(), &[0.5, 0.5]);
        assert_eq!(coin_mix_effect(&r1, &r2, 1.0).unwrap(), r1);
        let q = StateVector::new(vec![0.25, 0.75]);
        assert_eq!(probability(&half, &q).unwrap(), 0.5);
        assert!(coin_mix_effect(&r1, &r2, 2.0).is_err());
        assert!(classical_model(2)
            .unwrap()
            .validate_effect(&half)
            .unwrap()
            .is_valid());
    }

    #[test]
    fn reversible_counts() {
        assert_eq!(classical_reversible_transforms(2).unwrap().len(), 2);
        assert_eq!(classical_reversible_transforms(3).unwrap().len(), 6);
        assert!(matches!(
            classical_reversible_transforms(9),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn permutations_preserve_extreme_states() {
        let m = classical_model(3).unwrap();
        for z in classical_reversible_transforms(3).unwrap() {
            assert!(m.is_reversible(&z).unwrap());
            for v in simplex_vertices(3) {
                assert!(m.validate_state(&z.apply(&v).unwrap()).unwrap().is_valid());
            }
        }
    }

    #[test]
    fn non_permutation_stochastic_maps_are_not_reversible() {
        let m = classical_model(2).unwrap();
        let mixing = TransformMatrix::from_row_major(2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(m.validate_transform(&mixing).unwrap().is_valid());
        assert!(!m.is_reversible(&mixing).unwrap());
        let leaky = TransformMatrix::from_row_major(2, &[0.9, 0.0, 0.0, 1.0]).unwrap();
        assert!(!m.is_reversible(&leaky).unwrap());
        let over = TransformMatrix::from_row_major(2, &[1.0, 0.0, 0.5, 1.0]).unwrap();
        assert!(!m.validate_transform(&over).unwrap().is_valid());
    }

    /// Independent oracle: `||P_a - P_b||_F^2` is twice the number of boxes
    /// on which the two permutations disagree.
    fn brute_force_gap(n: usize) -> f64 {
        let perms = permutations(n);
        let mut best = usize::MAX;
        for (i, a) in perms.iter().enumerate() {
            for b in &perms[i + 1..] {
                let moved = a.iter().zip(b).filter(|(x, y)| x != y).count();
                best = best.min(moved);
            }
        }
        ((2 * best) as f64).sqrt()
    }

    #[test]
    fn discreteness_gap_matches_brute_force() {
        for n in 2..=4 {
            let oracle = brute_force_gap(n);
            assert_eq!(oracle, 2.0);
            assert_eq!(classical_discreteness_gap(n).unwrap(), oracle);
        }
        assert!(matches!(
            classical_discreteness_gap(1),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            classical_discreteness_gap(9),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn lp_and_closed_form_agree_on_membership() {
        let m = classical_model(3).unwrap();
        let mut rng = crate::random::rng(31);
        use rand::Rng;
        for _ in 0..200 {
            let p = StateVector::new((0..3).map(|_| rng.random_range(-0.2..0.8)).collect());
            let closed = m.validate_state(&p).unwrap().is_valid();
            assert_eq!(closed, in_state_set_lp(&p, 1e-12), "{p:?}");
        }
    }

    #[test]
    fn extreme_point_census() {
        let mut rng = crate::random::rng(32);
        for n in 2..=3 {
            let m = classical_model(n).unwrap();
            let mut points = simplex_vertices(n);
            for _ in 0..20 {
                let p = m.sample_mixed_state(&mut rng);
                let scale: f64 = rand::Rng::random(&mut rng);
                points.push(crate::model::mix(&p, &m.null_state(), scale).unwrap());
                points.push(p);
            }
            let ext = extreme_points(&points, 1e-12);
            assert_eq!(ext, (0..=n).collect::<Vec<_>>());
        }
    }
}
