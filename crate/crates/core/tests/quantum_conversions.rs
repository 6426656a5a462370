use fiducial::linalg::{basis_ket, frobenius, projector, real, trace_product, CMatrix, C64};
use fiducial::quantum::qubit::qubit_rho_from_p;
use fiducial::quantum::{DensityOperator, FiducialFrame, OffDiagonalFormula, QuantumChannel};
use fiducial::random::{haar_ket, haar_unitary, random_density, rng};
use fiducial::{Error, StateVector, TheoryModel, TransformMatrix};

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn roundtrip_random_density_matrices() {
    for n in [2, 3] {
        let f = FiducialFrame::standard(n).unwrap();
        let mut r = rng(1000 + n as u64);
        for _ in 0..1000 {
            let rho = random_density(n, &mut r);
            let back = f.p_to_rho(&f.rho_to_p(&rho).unwrap()).unwrap();
            assert!(back.validity.is_valid());
            assert!(frobenius(&(back.rho - &rho)) <= 1e-12);
        }
    }
}

#[test]
fn generic_reconstruction_matches_closed_form_qubit() {
    let f = FiducialFrame::standard(2).unwrap();
    let mut r = rng(7);
    for _ in 0..100 {
        let p = f.rho_to_p(&random_density(2, &mut r)).unwrap();
        let generic = f.p_to_rho(&p).unwrap().rho;
        let closed = qubit_rho_from_p(&p, OffDiagonalFormula::Corrected).unwrap();
        assert!(frobenius(&(generic - closed)) <= 1e-12);
    }
}

#[test]
fn identity_channel_gives_identity_matrix() {
    for n in 1..=4 {
        let f = FiducialFrame::standard(n).unwrap();
        let z = f.channel_to_z(&QuantumChannel::identity(n)).unwrap();
        assert!((z.matrix() - TransformMatrix::identity(n * n).matrix()).amax() <= 1e-12);
    }
}

#[test]
fn x_gate_swaps_basis_states() {
    let f = FiducialFrame::standard(2).unwrap();
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let x = CMatrix::from_row_slice(2, 2, &[zero, one, one, zero]);
    let z = f
        .channel_to_z(&QuantumChannel::unitary(&x).unwrap())
        .unwrap();
    let out = z
        .apply(&StateVector::new(vec![1.0, 0.0, 0.5, 0.5]))
        .unwrap();
    assert!(close(&out, &[0.0, 1.0, 0.5, 0.5], 1e-12), "{out:?}");
}

#[test]
fn full_depolarization_equalizes_diagonal() {
    let f = FiducialFrame::standard(2).unwrap();
    let z = f
        .channel_to_z(&QuantumChannel::fully_depolarizing(2))
        .unwrap();
    let mut r = rng(8);
    for _ in 0..20 {
        let p = f.rho_to_p(&random_density(2, &mut r).scale(0.7)).unwrap();
        let q = z.apply(&p).unwrap();
        let half = (p[0] + p[1]) / 2.0;
        assert!((q[0] - half).abs() <= 1e-12 && (q[1] - half).abs() <= 1e-12);
    }
}

#[test]
fn channel_to_z_rejects_bad_maps() {
    let f = FiducialFrame::standard(2).unwrap();
    match f.channel_to_z(&QuantumChannel::transpose(2)) {
        Err(Error::CompletePositivity { min_eigenvalue }) => {
            assert!((min_eigenvalue + 0.5).abs() < 1e-12)
        }
        other => panic!("{other:?}"),
    }
    let amplify = QuantumChannel::from_kraus(&[CMatrix::identity(2, 2) * real(1.1)]).unwrap();
    assert!(matches!(
        f.channel_to_z(&amplify),
        Err(Error::NotAllowed(_))
    ));
}

#[test]
fn transform_membership() {
    let f = FiducialFrame::standard(2).unwrap();
    let mut r = rng(9);
    let u = haar_unitary(2, &mut r);
    let kraus = [u.scale(0.6), haar_unitary(2, &mut r).scale(0.8)];
    let z = f
        .channel_to_z(&QuantumChannel::from_kraus(&kraus).unwrap())
        .unwrap();
    assert!(f.is_valid_transform(&z).is_valid());
    let doubled = TransformMatrix::from_matrix(TransformMatrix::identity(4).matrix() * 2.0);
    assert!(!f.is_valid_transform(&doubled).is_valid());
    let transpose = f.superoperator_to_z(&QuantumChannel::transpose(2));
    assert!(!f.is_valid_transform(&transpose).is_valid());
    // transpose flips the y coordinate of the ball: p_y+ -> 1 - p_y+
    let y_plus = StateVector::new(vec![0.5, 0.5, 0.5, 1.0]);
    assert!(close(
        &transpose.apply(&y_plus).unwrap(),
        &[0.5, 0.5, 0.5, 0.0],
        1e-12
    ));
}

#[test]
fn z_superoperator_roundtrip() {
    let f = FiducialFrame::standard(3).unwrap();
    let mut r = rng(10);
    let ch = QuantumChannel::from_kraus(&[
        haar_unitary(3, &mut r).scale(0.5),
        haar_unitary(3, &mut r).scale(0.5),
    ])
    .unwrap();
    let z = f.channel_to_z(&ch).unwrap();
    let back = f.z_to_superoperator(&z).unwrap();
    assert!(frobenius(&(back.choi() - ch.choi())) <= 1e-10);
}

#[test]
fn channel_functoriality() {
    for n in [2, 3] {
        let f = FiducialFrame::standard(n).unwrap();
        let mut r = rng(20 + n as u64);
        for _ in 0..10 {
            let a = QuantumChannel::from_kraus(&[
                haar_unitary(n, &mut r).scale(0.6),
                haar_unitary(n, &mut r).scale(0.8),
            ])
            .unwrap();
            let b = QuantumChannel::unitary(&haar_unitary(n, &mut r)).unwrap();
            let zab = f.channel_to_z(&a.compose(&b).unwrap()).unwrap();
            let product = f
                .channel_to_z(&a)
                .unwrap()
                .compose(&f.channel_to_z(&b).unwrap())
                .unwrap();
            assert!((zab.matrix() - product.matrix()).amax() <= 1e-10);
        }
    }
}

#[test]
fn channel_z_matches_direct_application() {
    let f = FiducialFrame::standard(3).unwrap();
    let mut r = rng(30);
    let u = haar_unitary(3, &mut r);
    let ch = QuantumChannel::unitary(&u).unwrap();
    let z = f.channel_to_z(&ch).unwrap();
    for _ in 0..20 {
        let rho = random_density(3, &mut r);
        let lhs = z.apply(&f.rho_to_p(&rho).unwrap()).unwrap();
        let rhs = f.rho_to_p(&ch.apply(&rho)).unwrap();
        assert!(close(&lhs, &rhs, 1e-12));
    }
    let model = TheoryModel::quantum(3).unwrap();
    assert!(model.maps_states_into_states(&z, 50, &mut r).unwrap());
    assert!(model.is_reversible(&z).unwrap());
}

#[test]
fn composite_frame_trace_formula() {
    let q = TheoryModel::quantum(2).unwrap();
    let comp =
        fiducial::composition::compose_models(&q, &TheoryModel::quantum(3).unwrap()).unwrap();
    let f = comp.model().frame().unwrap();
    let mut r = rng(40);
    for _ in 0..20 {
        // entangled states included
        let psi = haar_ket(6, &mut r);
        let rho = projector(&psi);
        let a = fiducial::random::random_effect_operator(6, &mut r);
        let (eff, _) = f.operator_to_effect(&a).unwrap();
        let via = fiducial::probability(&eff, &f.rho_to_p(&rho).unwrap()).unwrap();
        assert!((via - trace_product(&a, &rho).re).abs() <= 1e-12);
    }
}

#[test]
fn pure_density_operator_helpers() {
    let rho = DensityOperator::pure(&basis_ket(2, 1)).unwrap();
    assert!(rho.is_pure(1e-12));
    assert_eq!(rho.trace(), 1.0);
}
