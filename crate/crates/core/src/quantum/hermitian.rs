//! Real coordinates for Hermitian operators.
//!
//! An `n x n` Hermitian matrix `X` has `n^2` real coordinates: the diagonal
//! `X[a][a]` for `a = 0..n`, followed by `Re X[a][b]` and `Im X[a][b]` for
//! each pair `a < b` in lexicographic order. The matching operator basis is
//! `E_aa`, `E_ab + E_ba` and `i E_ab - i E_ba`.

use nalgebra::DVector;

use crate::linalg::{CMatrix, C64, I, ZERO};

/// Pairs `(a, b)` with `a < b`, lexicographic.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
}

/// Coordinates of a Hermitian matrix. Only the upper triangle is read.
pub fn coords(m: &CMatrix) -> DVector<f64> {
    let n = m.nrows();
    let mut h = Vec::with_capacity(n * n);
    h.extend((0..n).map(|a| m[(a, a)].re));
    for (a, b) in pairs(n) {
        h.push(m[(a, b)].re);
        h.push(m[(a, b)].im);
    }
    DVector::from_vec(h)
}

/// Inverse of [`coords`].
pub fn from_coords(n: usize, h: &[f64]) -> CMatrix {
    debug_assert_eq!(h.len(), n * n);
    let mut m = CMatrix::from_element(n, n, ZERO);
    for a in 0..n {
        m[(a, a)] = C64::new(h[a], 0.0);
    }
    for (idx, (a, b)) in pairs(n).enumerate() {
        let z = C64::new(h[n + 2 * idx], h[n + 2 * idx + 1]);
        m[(a, b)] = z;
        m[(b, a)] = z.conj();
    }
    m
}

/// `tr(X B_j)` for every basis operator `B_j`; real when `X` is Hermitian.
pub fn trace_against_basis(x: &CMatrix) -> DVector<f64> {
    let n = x.nrows();
    let mut t = Vec::with_capacity(n * n);
    t.extend((0..n).map(|a| x[(a, a)].re));
    for (a, b) in pairs(n) {
        t.push((x[(b, a)] + x[(a, b)]).re);
        t.push((I * x[(b, a)] - I * x[(a, b)]).re);
    }
    DVector::from_vec(t)
}

/// `tr(B_j B_j)`: 1 on the diagonal coordinates, 2 on pair coordinates.
pub fn basis_norms(n: usize) -> impl Iterator<Item = f64> {
    (0..n * n).map(move |j| if j < n { 1.0 } else { 2.0 })
}

/// The `j`-th basis operator.
pub fn basis_operator(n: usize, j: usize) -> CMatrix {
    let mut h = vec![0.0; n * n];
    h[j] = 1.0;
    if j < n {
        return from_coords(n, &h);
    }
    let (a, b) = pairs(n).nth((j - n) / 2).expect("pair index in range");
    let mut m = CMatrix::from_element(n, n, ZERO);
    if (j - n).is_multiple_of(2) {
        m[(a, b)] = C64::new(1.0, 0.0);
        m[(b, a)] = C64::new(1.0, 0.0);
    } else {
        m[(a, b)] = I;
        m[(b, a)] = -I;
    }
    m
}

/// Operator with the given traces against the basis (dual of [`trace_against_basis`]).
pub fn from_basis_traces(n: usize, traces: &[f64]) -> CMatrix {
    let scaled: Vec<f64> = traces
        .iter()
        .zip(basis_norms(n))
        .map(|(t, g)| t / g)
        .collect();
    from_coords(n, &scaled)
}
