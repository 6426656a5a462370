//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p fiducial-cli --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use fiducial::axioms::{
    canonical_pure_family, default_probes, max_distinguishable, verify_affinity, verify_power_law,
    AffinityOutcome, PowerLawEntry, Probe,
};
use fiducial::classical::{
    classical_discreteness_gap, extreme_points, look_in_box, simplex_vertices,
};
use fiducial::composition::{compose_models, separable_span_dim, span_rank};
use fiducial::linalg::{basis_ket, frobenius, projector, trace_product, CVector, C64};
use fiducial::measurement::{
    convergence_ratio, lueders_instrument, make_instrument, simulate_frequencies,
};
use fiducial::quantum::{
    ball_center_distance, qubit_ball_coords, qubit_rho_from_p, unitary_path, DensityOperator,
    OffDiagonalFormula,
};
use fiducial::random::{self, derive_seed};
use fiducial::{is_pure, probability, StateVector, TheoryModel, TransformMatrix};
use fiducial_cli::figures::triangle_rows;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn qubit() -> TheoryModel {
    TheoryModel::quantum(2).unwrap()
}

fn ket(entries: &[(f64, f64)]) -> CVector {
    CVector::from_iterator(
        entries.len(),
        entries.iter().map(|&(re, im)| C64::new(re, im)),
    )
}

fn roundtrip() -> Outcome {
    let m = qubit();
    let frame = m.frame().unwrap();
    let mut rng = random::rng(1);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let rho = random::random_density(2, &mut rng);
        let back = frame
            .p_to_rho(&frame.rho_to_p(&rho).map_err(e)?)
            .map_err(e)?;
        worst = worst.max(frobenius(&(&back.rho - &rho)));
    }
    ensure(worst <= 1e-12, || format!("roundtrip error {worst:e}"))?;
    let h = 0.5f64.sqrt();
    let pauli = [
        ket(&[(1.0, 0.0), (0.0, 0.0)]),
        ket(&[(0.0, 0.0), (1.0, 0.0)]),
        ket(&[(h, 0.0), (h, 0.0)]),
        ket(&[(h, 0.0), (-h, 0.0)]),
        ket(&[(h, 0.0), (0.0, h)]),
        ket(&[(h, 0.0), (0.0, -h)]),
    ];
    let mut pauli_worst = 0.0_f64;
    for k in &pauli {
        let rho = projector(k);
        let back =
            qubit_rho_from_p(&frame.ket_to_p(k), OffDiagonalFormula::Corrected).map_err(e)?;
        pauli_worst = pauli_worst.max(frobenius(&(&back - &rho)));
    }
    ensure(pauli_worst <= 1e-12, || {
        format!("Pauli eigenstate error {pauli_worst:e}")
    })?;
    Ok(format!(
        "1000 states max {worst:.1e}; six Pauli eigenstates max {pauli_worst:.1e}"
    ))
}

fn rank_n_squared() -> Outcome {
    let mut rng = random::rng(2);
    let mut seen = Vec::new();
    for n in 2..=5 {
        let m = TheoryModel::quantum(n).map_err(e)?;
        let frame = m.frame().unwrap();
        let rows: Vec<Vec<f64>> = (0..5 * n * n)
            .map(|_| {
                frame
                    .rho_to_p(&random::random_density(n, &mut rng))
                    .map(|p| p.into_inner())
            })
            .collect::<Result<_, _>>()
            .map_err(e)?;
        let rank = span_rank(&rows, 1e-8);
        ensure(rank == n * n, || format!("N={n}: rank {rank}"))?;
        seen.push(format!("N={n}:{rank}"));
    }
    Ok(seen.join(" "))
}

fn classical_extremes() -> Outcome {
    let mut rng = random::rng(3);
    for n in 2..=6 {
        let m = TheoryModel::classical(n).map_err(e)?;
        ensure(m.k() == n, || format!("K={} for N={n}", m.k()))?;
        let vertices = simplex_vertices(n);
        ensure(vertices.len() == n + 1, || {
            format!("{} vertices for N={n}", vertices.len())
        })?;
        for (i, v) in vertices.iter().enumerate() {
            ensure(m.validate_state(v).map_err(e)?.is_valid(), || {
                format!("vertex {i} invalid")
            })?;
            if i < n {
                ensure(is_pure(&m, v).map_err(e)?, || format!("box {i} not pure"))?;
            } else {
                ensure(v.is_null(0.0), || "last vertex is not null".into())?;
            }
        }
        if n <= 3 {
            let mut points = vertices.clone();
            for _ in 0..20 {
                let w = random::simplex_point(n + 1, &mut rng);
                points.push(StateVector::new(w[..n].to_vec()));
            }
            let found = extreme_points(&points, 1e-9);
            let expected: Vec<usize> = (0..=n).collect();
            ensure(found == expected, || {
                format!("N={n}: LP extreme points {found:?}")
            })?;
        }
    }
    let rows = triangle_rows(11).map_err(e)?;
    let corners: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.kind == "vertex")
        .map(|r| (r.p1, r.p2))
        .collect();
    ensure(corners == [(1.0, 0.0), (0.0, 1.0), (0.0, 0.0)], || {
        format!("triangle corners {corners:?}")
    })?;
    for r in rows.iter().filter(|r| r.kind == "grid") {
        ensure(r.valid == (r.p1 + r.p2 <= 1.0 + 1e-12), || {
            format!("grid point ({}, {})", r.p1, r.p2)
        })?;
    }
    Ok("N=2..6 simplex vertices; LP census on N=2,3; triangle data exact".into())
}

fn ball() -> Outcome {
    let m = qubit();
    let frame = m.frame().unwrap();
    let mut rng = random::rng(4);
    let mut pure_dev = 0.0_f64;
    let mut mixed_max = 0.0_f64;
    for _ in 0..1000 {
        let d = ball_center_distance(qubit_ball_coords(&m.sample_pure_state(&mut rng)).map_err(e)?);
        pure_dev = pure_dev.max((d - 0.5).abs());
        let p = frame
            .rho_to_p(&random::random_density(2, &mut rng))
            .map_err(e)?;
        mixed_max = mixed_max.max(ball_center_distance(qubit_ball_coords(&p).map_err(e)?));
    }
    ensure(pure_dev <= 1e-9, || format!("pure deviation {pure_dev:e}"))?;
    ensure(mixed_max < 0.5, || {
        format!("mixed state at distance {mixed_max}")
    })?;
    let mut valid_outside = 0;
    for _ in 0..10_000 {
        let [x, y, z]: [f64; 3] = rng.random();
        let p = StateVector::new(vec![z, 1.0 - z, x, y]);
        if m.validate_state(&p).map_err(e)?.is_valid()
            && ball_center_distance([x, y, z]) > 0.5 + 1e-9
        {
            valid_outside += 1;
        }
    }
    ensure(valid_outside == 0, || {
        format!("{valid_outside} valid points outside the ball")
    })?;
    Ok(format!(
        "pure |d-1/2| max {pure_dev:.1e}; mixed max d {mixed_max:.4}; no valid point outside"
    ))
}

fn trace_formula() -> Outcome {
    let mut rng = random::rng(5);
    let mut worst = 0.0_f64;
    for n in [2, 3] {
        let m = TheoryModel::quantum(n).map_err(e)?;
        let frame = m.frame().unwrap();
        for _ in 0..1000 {
            let a = random::random_effect_operator(n, &mut rng);
            let rho = random::random_density(n, &mut rng);
            let (r, validity) = frame.operator_to_effect(&a).map_err(e)?;
            ensure(validity.is_valid(), || {
                "sampled effect flagged invalid".into()
            })?;
            let p = frame.rho_to_p(&rho).map_err(e)?;
            worst = worst.max((probability(&r, &p).map_err(e)? - trace_product(&a, &rho).re).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max error {worst:e}"))?;
    Ok(format!("2000 pairs, max |r.p - tr(A rho)| = {worst:.1e}"))
}

fn composition() -> Outcome {
    let cases = [
        (TheoryModel::quantum(2), TheoryModel::quantum(2), 16),
        (TheoryModel::quantum(2), TheoryModel::quantum(3), 36),
        (TheoryModel::classical(2), TheoryModel::classical(3), 6),
    ];
    let mut seen = Vec::new();
    for (i, (a, b, want)) in cases.into_iter().enumerate() {
        let (a, b) = (a.map_err(e)?, b.map_err(e)?);
        let joint = compose_models(&a, &b).map_err(e)?;
        let k = joint.model().k();
        let mut rng = random::rng(60 + i as u64);
        let rows: Vec<Vec<f64>> = (0..2 * want)
            .map(|_| {
                let (pa, pb) = (
                    a.sample_mixed_state(&mut rng),
                    b.sample_mixed_state(&mut rng),
                );
                joint.product_state(&pa, &pb).map(|p| p.into_inner())
            })
            .collect::<Result<_, _>>()
            .map_err(e)?;
        let rank = span_rank(&rows, 1e-8);
        let sep = separable_span_dim(&a, &b, 2 * want + 10, 70 + i as u64).map_err(e)?;
        ensure(k == want && rank == want && sep == want, || {
            format!("case {i}: K {k}, rank {rank}, separable {sep}")
        })?;
        seen.push(want.to_string());
    }
    Ok(format!("composite ranks {}", seen.join(", ")))
}

fn distinguishability() -> Outcome {
    let mut models = Vec::new();
    for n in 1..=6 {
        models.push(TheoryModel::classical(n).map_err(e)?);
    }
    for n in 1..=4 {
        models.push(TheoryModel::quantum(n).map_err(e)?);
    }
    for m in &models {
        let cert = max_distinguishable(m, &canonical_pure_family(m)).map_err(e)?;
        ensure(cert.size == m.n() && cert.verify(m).map_err(e)?, || {
            format!("{:?}: found {}", m.descriptor(), cert.size)
        })?;
    }
    let m = qubit();
    let frame = m.frame().unwrap();
    let h = 0.5f64.sqrt();
    let triple: Vec<StateVector> = [basis_ket(2, 0), basis_ket(2, 1), ket(&[(h, 0.0), (h, 0.0)])]
        .iter()
        .map(|k| frame.ket_to_p(k))
        .collect();
    let cert = max_distinguishable(&m, &triple).map_err(e)?;
    ensure(cert.size == 2, || {
        format!("qubit triple gave {}", cert.size)
    })?;
    Ok("classical N=1..6 and quantum N=1..4 give N; qubit triple gives 2".into())
}

fn power_law() -> Outcome {
    let table = |quantum: bool| -> Result<Vec<PowerLawEntry>, String> {
        (1..=6)
            .map(|n| {
                let m = if quantum {
                    TheoryModel::quantum(n)
                } else {
                    TheoryModel::classical(n)
                };
                m.map(|m| PowerLawEntry {
                    n: n as u64,
                    k: m.k() as u64,
                })
                .map_err(e)
            })
            .collect()
    };
    let q = verify_power_law(&table(true)?).map_err(e)?;
    let c = verify_power_law(&table(false)?).map_err(e)?;
    ensure(q.is_consistent() && q.r == Some(2), || {
        format!("quantum table: {q:?}")
    })?;
    ensure(c.is_consistent() && c.r == Some(1), || {
        format!("classical table: {c:?}")
    })?;
    let mut rng = random::rng(8);
    let mut rejected = 0;
    for t in 0..50 {
        let mut rows = table(t % 2 == 0)?;
        let i = rng.random_range(0..rows.len());
        let delta = rng.random_range(1..=5u64);
        rows[i].k = if rng.random::<bool>() || rows[i].k <= delta {
            rows[i].k + delta
        } else {
            rows[i].k - delta
        };
        if !verify_power_law(&rows).map_err(e)?.is_consistent() {
            rejected += 1;
        }
    }
    ensure(rejected == 50, || {
        format!("only {rejected}/50 perturbed tables rejected")
    })?;
    Ok("consistent(2) quantum, consistent(1) classical, 50/50 perturbed rejected".into())
}

fn continuity() -> Outcome {
    let m = qubit();
    let frame = m.frame().unwrap();
    let mut rng = random::rng(9);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for _ in 0..20 {
        let a = DensityOperator::pure(&random::haar_ket(2, &mut rng)).map_err(e)?;
        let b = DensityOperator::pure(&random::haar_ket(2, &mut rng)).map_err(e)?;
        let mut gaps = [0.0; 2];
        for (slot, steps) in [100, 1000].into_iter().enumerate() {
            let states = unitary_path(frame, &a, &b, steps).map_err(e)?;
            for p in &states {
                ensure(is_pure(&m, p).map_err(e)?, || {
                    "mixed state on a path".into()
                })?;
            }
            gaps[slot] = states
                .windows(2)
                .map(|w| {
                    w[0].iter()
                        .zip(w[1].iter())
                        .map(|(x, y)| (x - y).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
        }
        let ratio = gaps[0] / gaps[1];
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    ensure(lo >= 5.0 && hi <= 20.0, || {
        format!("gap ratios span [{lo}, {hi}]")
    })?;
    for n in 2..=4 {
        let gap = classical_discreteness_gap(n).map_err(e)?;
        ensure(gap == 2.0, || format!("N={n}: gap {gap}"))?;
    }
    Ok(format!(
        "20 pure paths, gap ratio in [{lo:.3}, {hi:.3}]; classical gap 2.0 for N=2,3,4"
    ))
}

fn update_rule() -> Outcome {
    let m = qubit();
    let frame = m.frame().unwrap();
    let instr = lueders_instrument(
        &m,
        &[
            ("z+", projector(&basis_ket(2, 0))),
            ("z-", projector(&basis_ket(2, 1))),
        ],
    )
    .map_err(e)?;
    let h = 0.5f64.sqrt();
    let plus = frame.ket_to_p(&ket(&[(h, 0.0), (h, 0.0)]));
    let (post, prob) = instr.apply_update(&plus, "z+").map_err(e)?;
    let want = [0.5, 0.0, 0.25, 0.25];
    let err = post
        .iter()
        .zip(want)
        .map(|(a, b)| (a - b).abs())
        .fold((prob - 0.5).abs(), f64::max);
    ensure(err <= 1e-12, || {
        format!("probability {prob}, post-state {post:?}")
    })?;
    let total = TransformMatrix::sum(instr.outcomes().iter().map(|o| &o.transform)).unwrap();
    ensure(m.validate_transform(&total).map_err(e)?.is_valid(), || {
        "sum of Z_l rejected".into()
    })?;
    for n in 2..=6 {
        let c = TheoryModel::classical(n).map_err(e)?;
        let outcomes = (0..n)
            .map(|i| {
                let r = look_in_box(n, i).map_err(e)?;
                let z = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&r));
                Ok((format!("box{i}"), TransformMatrix::from_matrix(z)))
            })
            .collect::<Result<Vec<_>, String>>()?;
        make_instrument(&c, outcomes).map_err(|err| format!("look-in-box N={n}: {err}"))?;
    }
    Ok(format!(
        "P = 1/2 and post-state within {err:.1e}; sum allowed; look-in-box accepted"
    ))
}

fn frequencies() -> Outcome {
    let m = qubit();
    let frame = m.frame().unwrap();
    let instr = lueders_instrument(
        &m,
        &[
            ("z+", projector(&basis_ket(2, 0))),
            ("z-", projector(&basis_ket(2, 1))),
        ],
    )
    .map_err(e)?;
    let h = 0.5f64.sqrt();
    let plus = frame.ket_to_p(&ket(&[(h, 0.0), (h, 0.0)]));
    let report = simulate_frequencies(&instr, &plus, 1_000_000, 11).map_err(e)?;
    ensure(report.max_deviation <= 0.002, || {
        format!("max deviation {}", report.max_deviation)
    })?;
    let seeds: Vec<u64> = (0..20).map(|i| derive_seed(11, i)).collect();
    let ratio = convergence_ratio(&instr, &plus, 1000, 100, &seeds).map_err(e)?;
    ensure((5.0..=20.0).contains(&ratio), || format!("ratio {ratio}"))?;
    Ok(format!(
        "n=1e6 max deviation {:.1e}; ratio {ratio:.2}",
        report.max_deviation
    ))
}

fn affinity() -> Outcome {
    let mut rng = random::rng(12);
    let mut worst = 0.0_f64;
    for m in [
        TheoryModel::classical(3).map_err(e)?,
        qubit(),
        TheoryModel::quantum(3).map_err(e)?,
    ] {
        let planted = m.sample_effect(&mut rng);
        let probes = default_probes(&m, 10, &mut rng);
        match verify_affinity(|p| probability(&planted, p).unwrap(), &probes, 1e-9) {
            AffinityOutcome::Affine {
                effect: Some(r), ..
            } => {
                let err = r
                    .iter()
                    .zip(planted.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                worst = worst.max(err);
            }
            other => return Err(format!("{:?}: {other:?}", m.descriptor())),
        }
    }
    ensure(worst <= 1e-10, || format!("recovery error {worst:e}"))?;
    let bit = TheoryModel::classical(2).map_err(e)?;
    let u = bit.unit_effect();
    let probe = Probe {
        a: StateVector::new(vec![1.0, 0.0]),
        b: bit.null_state(),
        lambda: 0.5,
    };
    match verify_affinity(|p| probability(&u, p).unwrap().powi(2), &[probe], 1e-12) {
        AffinityOutcome::Violation { lhs, rhs, .. } if lhs == 0.25 && rhs == 0.5 => {}
        other => return Err(format!("quadratic rule: {other:?}")),
    }
    Ok(format!(
        "planted effects recovered within {worst:.1e}; quadratic witness 1/4 vs 1/2"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("qubit roundtrip", roundtrip),
        ("K = N^2 rank", rank_n_squared),
        ("classical K = N and extreme points", classical_extremes),
        ("ball geometry", ball),
        ("trace-formula equivalence", trace_formula),
        ("composition multiplicativity", composition),
        ("distinguishability dimension", distinguishability),
        ("power law", power_law),
        ("continuity vs discreteness", continuity),
        ("update rule", update_rule),
        ("frequency convergence", frequencies),
        ("affinity", affinity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(msg) => println!("PASS {:>2} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
