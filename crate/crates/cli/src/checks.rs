//! The built-in verification checks and their registry.

use fiducial::axioms::{
    canonical_pure_family, continuity_witness, default_probes, max_distinguishable,
    verify_affinity, verify_power_law, AffinityOutcome, ContinuityWitness, PowerLawEntry, Probe,
};
use fiducial::classical::{
    classical_discreteness_gap, extreme_points, look_in_box, simplex_vertices,
};
use fiducial::composition::{compose_models, separable_span_dim, span_rank};
use fiducial::linalg::{
    basis_ket, frobenius, projector, real, trace_product, CMatrix, CVector, C64,
};
use fiducial::measurement::{
    convergence_ratio, lueders_instrument, make_instrument, simulate_frequencies,
};
use fiducial::quantum::{
    ball_center_distance, qubit_ball_coords, qubit_rho_from_p, FiducialFrame, OffDiagonalFormula,
    BALL_RADIUS,
};
use fiducial::random::{self, derive_seed};
use fiducial::{
    is_pure, probability, StateVector, TheoryKind, TheoryModel, Tolerances, TransformMatrix,
};
use rand::Rng;
use serde_json::{json, Value};

use crate::config::CheckName;
use crate::figures::triangle_rows;

/// Everything a check may read.
pub struct CheckContext<'a> {
    pub theories: &'a [TheoryModel],
    pub seed: u64,
    pub samples: usize,
    /// Pass threshold for this run (default or overridden).
    pub tolerance: f64,
    pub tolerances: Tolerances,
}

impl CheckContext<'_> {
    fn of_kind(&self, kind: TheoryKind) -> impl Iterator<Item = &TheoryModel> {
        self.theories.iter().filter(move |m| m.kind() == kind)
    }

    fn qubit(&self) -> TheoryModel {
        TheoryModel::quantum(2)
            .expect("qubit model")
            .with_tolerances(self.tolerances)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub passed: bool,
    pub measured: f64,
    pub detail: String,
    /// Evidence for a failure; the runner fills in a default when absent.
    pub witness: Option<Value>,
}

impl CheckOutcome {
    fn at_most(
        measured: f64,
        tolerance: f64,
        detail: impl Into<String>,
        witness: Option<Value>,
    ) -> Self {
        let passed = measured <= tolerance;
        Self {
            passed,
            measured,
            detail: detail.into(),
            witness: if passed { None } else { witness },
        }
    }
}

pub type CheckFn = fn(&CheckContext) -> fiducial::Result<CheckOutcome>;

pub struct CheckSpec {
    pub name: CheckName,
    /// The claim the check reproduces.
    pub anchor: &'static str,
    pub tolerance: f64,
    pub run: CheckFn,
}

pub static REGISTRY: [CheckSpec; 13] = [
    CheckSpec {
        name: CheckName::Affinity,
        anchor: "probabilities are affine under mixing, hence linear r.p; a quadratic rule breaks mixing",
        tolerance: 1e-10,
        run: affinity,
    },
    CheckSpec {
        name: CheckName::BallGeometry,
        anchor: "normalized qubit states form a ball of radius 1/2 centred in the unit cube of (p_x+, p_y+, p_z+); pure states on its surface",
        tolerance: 1e-9,
        run: ball_geometry,
    },
    CheckSpec {
        name: CheckName::ClassicalExtremePoints,
        anchor: "classical states fill the simplex spanned by the N boxes and the null state (triangle for the bit); K = N",
        tolerance: 0.0,
        run: classical_extreme_points,
    },
    CheckSpec {
        name: CheckName::Composition,
        anchor: "composite systems satisfy N = N_A N_B and K = K_A K_B",
        tolerance: 0.0,
        run: composition,
    },
    CheckSpec {
        name: CheckName::Continuity,
        anchor: "pure quantum states are joined by continuous reversible paths",
        tolerance: 1e-9,
        run: continuity,
    },
    CheckSpec {
        name: CheckName::DiscretenessGap,
        anchor: "classical reversible transformations are permutations, isolated from the identity",
        tolerance: 0.0,
        run: discreteness_gap,
    },
    CheckSpec {
        name: CheckName::Distinguishability,
        anchor: "N is the largest number of states one measurement distinguishes perfectly",
        tolerance: 0.0,
        run: distinguishability,
    },
    CheckSpec {
        name: CheckName::FrameRank,
        anchor: "states span a space of dimension K: K = N^2 quantum, K = N classical",
        tolerance: 1e-8,
        run: frame_rank,
    },
    CheckSpec {
        name: CheckName::FrequencyConvergence,
        anchor: "relative frequencies converge to the outcome probabilities as the ensemble grows",
        tolerance: 0.002,
        run: frequency_convergence,
    },
    CheckSpec {
        name: CheckName::Instruments,
        anchor: "measurement update p -> Z_l p with outcome probability u.Z_l p; sum of Z_l is an allowed transformation",
        tolerance: 1e-12,
        run: instruments,
    },
    CheckSpec {
        name: CheckName::PowerLaw,
        anchor: "K(N) multiplicative and increasing forces K = N^r; simplest nontrivial theories have r = 1 and r = 2",
        tolerance: 0.0,
        run: power_law,
    },
    CheckSpec {
        name: CheckName::Roundtrip,
        anchor: "density operator and fiducial probability vector determine each other; qubit reconstruction from p",
        tolerance: 1e-12,
        run: roundtrip,
    },
    CheckSpec {
        name: CheckName::TraceFormula,
        anchor: "outcome probabilities r.p agree with the trace rule tr(A rho)",
        tolerance: 1e-12,
        run: trace_formula,
    },
];

pub fn spec(name: CheckName) -> &'static CheckSpec {
    REGISTRY
        .iter()
        .find(|s| s.name == name)
        .expect("every check is registered")
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn affinity(ctx: &CheckContext) -> fiducial::Result<CheckOutcome> {
    let mut rng = random::rng(ctx.seed);
    let mut worst = 0.0_f64;
    let mut failures = Vec::new();
    for model in ctx.theories {
        let planted = model.sample_effect(&mut rng);
        let probes = default_probes(model, 10, &mut rng);
        match verify_affinity(
            |p| probability(&planted, p).unwrap_or(f64::NAN),
            &probes,
            1e-9,
        ) {
            AffinityOutcome::Affine {
                effect: Some(e), ..
            } => {
                let err = max_abs_diff(&e, &planted);
                worst = worst.max(err);
                if err > ctx.tolerance {
                    failures.push(json!({"model": model.descriptor(), "recovery_error": err}));
                }
            }
            other => {
                worst = f64::INFINITY;
                failures.push(json!({"model": model.descriptor(), "outcome": other}));
            }
        }
    }

    // (r.p)^2 on a box mixed half-and-half with the null state.
    let bit = TheoryModel::classical(2)?;
    let r = bit.unit_effect();
    let probe = Probe {
        a: StateVector::new(vec![1.0, 0.0]),
        b: bit.null_state(),
        lambda: 0.5,
    };
    let quadratic = verify_affinity(
        |p| probability(&r, p).map(|x| x * x).unwrap_or(f64::NAN),
        &[probe],
        1e-12,
    );
    let witness_ok = matches!(quadratic, AffinityOutcome::Violation { lhs, rhs, .. } if lhs == 0.25 && rhs == 0.5);
    if !witness_ok {
        failures.push(json!({"quadratic_counterexample": quadratic}));
    }
    let passed = failures.is_empty();
    Ok(CheckOutcome {
        passed,
        measured: worst,
        detail: format!(
            "{} planted effects recovered; quadratic rule gives 1/4 vs 1/2",
            ctx.theories.len()
        ),
        witness: (!passed).then(|| json!(failures)),
    })
}

fn ball_geometry(ctx: &CheckContext) -> fiducial::Result<CheckOutcome> {
    let qubit = ctx.qubit();
    let frame = qubit.frame().expect("quantum");
    let mut rng = random::rng(ctx.seed);
    let mut pure_dev = 0.0_f64;
    let mut failures = Vec::new();
    for _ in 0..ctx.samples {
        let c = qubit_ball_coords(&qubit.sample_pure_state(&mut rng))?;
        pure_dev = pure_dev.max((ball_center_distance(c) - BALL_RADIUS).abs());

        let mixed = frame.rho_to_p(&random::random_density(2, &mut rng))?;
        let d = ball_center_distance(qubit_ball_coords(&mixed)?);
        if d >= BALL_RADIUS && failures.len() < 5 {
            failures.push(json!({"mixed_state": mixed, "distance": d}));
        }

        // A random point of the cube: valid exactly when inside the ball.
        let [x, y, z]: [f64; 3] = rng.random();
        let p = StateVector::new(vec![z, 1.0 - z, x, y]);
        let d = ball_center_distance([x, y, z]);
        let valid = qubit.validate_state(&p)?.is_valid();
        let inconsistent = (valid && d > BALL_RADIUS + ctx.tolerance)
            || (!valid && d < BALL_RADIUS - ctx.tolerance);
        if inconsistent && failures.len() < 5 {
            failures.push(json!({"cube_point": [x, y, z], "distance": d, "valid": valid}));
        }
    }
    let mut out = CheckOutcome::at_most(
        pure_dev,
        ctx.tolerance,
        format!("{} pure, mixed and cube samples", ctx.samples),
        Some(json!({"max_pure_deviation": pure_dev})),
    );
    if !failures.is_empty() {
        out.passed = false;
        out.witness = Some(json!(failures));
    }
    Ok(out)
}

fn classical_extreme_points(ctx: &CheckContext) -> fiducial::Result<CheckOutcome> {
    let mut rng = random::rng(ctx.seed);
    let mut mismatches = Vec::new();
    for model in ctx.of_kind(TheoryKind::Classical) {
        let n = model.n();
        if model.k() != n {
            mismatches.push(json!({"n": n, "k": model.k()}));
        }
        let vertices = simplex_vertices(n);
        for v in &vertices {
            let pure = !v.is_null(0.0) && is_pure(model, v)?;
            if !model.validate_state(v)?.is_valid() || (pure == v.is_null(0.0)) {
                mismatches.push(json!({"n": n, "vertex": v}));
            }
        }
        // Interior points are valid and never extreme.
        let mut points = vertices.clone();
        for _ in 0..3 * n {
            let weights = random::simplex_point(n + 1, &mut rng);
            let p: Vec<f64> = (0..n).map(|i| weights[i]).collect();
            points.push(StateVector::new(p));
        }
        if n <= 3 {
            let found = extreme_points(&points, ctx.tolerances.eigenvalue);
            let expected: Vec<usize> = (0..vertices.len()).collect();
            if found != expected {
                mismatches.push(json!({"n": n, "extreme_points": found, "expected": expected}));
            }
        }
        for p in &points[vertices.len()..] {
            if !model.validate_state(p)?.is_valid() || is_pure(model, p)? {
                mismatches.push(json!({"n": n, "interior_point": p}));
            }
        }
    }
    let rows = triangle_rows(2).map_err(|e| fiducial::Error::Internal(e.to_string()))?;
    let corners: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.kind == "vertex")
        .map(|r| (r.p1, r.p2))
        .collect();
    if corners != [(1.0, 0.0), (0.0, 1.0), (0.0, 0.0)] {
        mismatches.push(json!({"triangle_vertices": corners}));
    }
    let count = mismatches.len() as f64;
    Ok(CheckOutcome::at_most(
        count,
        ctx.tolerance,
        "simplex vertices, LP census for N <= 3, triangle data",
        Some(json!(mismatches)),
    ))
}

/// Composites larger than this fiducial dimension are skipped.
const COMPOSITION_MAX_K: usize = 64;

fn composition(ctx: &CheckContext) -> fiducial::Result<CheckOutcome> {
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for (i, a) in ctx.theories.iter().enumerate() {
        for b in &ctx.theories[i..] {
            let expected = a.k() * b.k();
            if a.kind() != b.kind() || expected > COMPOSITION_MAX_K {
                continue;
            }
            checked += 1;
            let joint = compose_models(a, b)?;
            let span = separable_span_dim(a, b, 2 * expected + 10, derive_seed(ctx.seed, checked))?;
            let n_ok = joint.model().n() == a.n() * b.n();
            if !n_ok || joint.model().k() != expected || span != expected {
                mismatches.push(json!({
                    "a": a.descriptor(), "b": b.descriptor(),
                    "k": joint.model().k(), "span": span, "expected": expected,
                }));
            }
        }
    }
    let count = mismatches.len() as f64;
    Ok(CheckOutcome::at_most(
        count,
        ctx.tolerance,
        format!("{checked} same-kind pairs"),
        Some(json!(mismatches)),
    ))
}

fn continuity(ctx: &CheckContext) -> fiducial::Result<CheckOutcome> {
    const PAIRS: usize = 20;
    let qubit = ctx.qubit();
    let mut rng = random::rng(ctx.seed);
    let mut sphere_dev = 0.0_f64;
    let mut failures = Vec::new();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for _ in 0..PAIRS {
        let from = qubit.sample_pure_state(&mut rng);
        let to = qubit.sample_pure_state(&mut rng);
        let mut gaps = [0.0; 2];
        for (slot, steps) in [100, 1000].into_iter().enumerate() {
            let ContinuityWitness::Path { states } = continuity_witness(&qubit, &from, &to, steps)?
            else {
                unreachable!("quantum models always give paths")
            };
            for p in &states {
                sphere_dev = sphere_dev
                    .max((ball_center_distance(qubit_ball_coords(p)?) - BALL_RADIUS).abs());
            }
            gaps[slot] = states
                .windows(2)
                .map(|w| max_abs_diff(&w[0], &w[1]))
                .fold(0.0, f64::max);
        }
        let ratio = gaps[0] / gaps[1];
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        if !(5.0..=20.0).contains(&ratio) {
            failures.push(json!({"from": from, "to": to, "ratio": ratio}));
        }
    }
    for model in ctx.of_kind(TheoryKind::Classical) {
        let a = simplex_vertices(model.n())[0].clone();
        let b = simplex_vertices(model.n())[1].clone();
        match continuity_witness(model, &a, &b, 100)? {
            ContinuityWitness::Obstruction { gap } if gap > 0.0 => {}
            other => failures.push(json!({"model": model.descriptor(), "witness": other})),
        }
    }
    let mut out = CheckOutcome::at_most(
        sphere_dev,
        ctx.tolerance,
        format!("{PAIRS} qubit paths; gap ratio 100->1000 steps in [{lo:.3}, {hi:.3}]"),
        Some(json!({"max_sphere_deviation": sphere_dev})),
    );
    if !failures.is_empty() {
        out.passed = false;
        out.witness = Some(json!(failures));
    }
    Ok(out)
}

/// Largest N whose permutation group is enumerated.
const GAP_MAX_N: usize = 8;

fn discreteness_gap(ctx: &CheckContext) -> fiducial::Result<CheckOutcome> {
    let mut ns: Vec<usize> = ctx
        .of_kind(TheoryKind::Classical)
        .map(|m| m.n())
        .filter(|&n| n <= GAP_MAX_N)
        .collect();
    ns.extend([2, 3, 4]);
    ns.sort_unstable();
    ns.dedup();
    let mut worst = 0.0_f64;
    let mut gaps = Vec::new();
    for n in ns {
        let gap = classical_discreteness_gap(n)?;
        worst = worst.max((gap - 2.0).abs());
        gaps.push(json!({"n": n, "gap": gap}));
    }
    Ok(CheckOutcome::at_most(
        worst,
        ctx.tolerance,
        format!("{} values of N", gaps.len()),
        Some(json!(gaps)),
    ))
}

fn distinguishability(ctx: &CheckContext) -> fiducial::Result<CheckOutcome> {
    let mut mismatches = Vec::new();
    for model in ctx.theories {
        let cert = max_distinguishable(model, &canonical_pure_family(model))?;
        if cert.size != model.n() || !cert.verify(model)? {
            mismatches.push(json!({"model": model.descriptor(), "size": cert.size}));
        }
    }
    let qubit = ctx.qubit();
    let frame = qubit.frame().expect("quantum");
    let plus = CVector::from_vec(vec![real(0.5f64.sqrt()), real(0.5f64.sqrt())]);
    let triple: Vec<StateVector> = [basis_ket(2, 0), basis_ket(2, 1), plus]
        .iter()
        .map(|k| frame.ket_to_p(k))
        .collect();
    let cert = max_distinguishable(&qubit, &triple)?;
    if cert.size != 2 || !cert.verify(&qubit)? {
        mismatches.push(json!({"qubit_triple": cert.size}));
    }
    let count = mismatches.len() as f64;
    Ok(CheckOutcome::at_most(
        count,
        ctx.tolerance,
        format!(
            "{} canonical families and the qubit triple",
            ctx.theories.len()
        ),
        Some(json!(mismatches)),
    ))
}

fn frame_rank(ctx: &CheckContext) -> fiducial::Result<CheckOutcome> {
    let mut rng = random::rng(ctx.seed);
    let mut mismatches = Vec::new();
    let mut ranks = Vec::new();
    for model in ctx.theories {
        let count = 5 * model.k();
        let rows: Vec<Vec<f64>> = (0..count)
            .map(|_| model.sample_mixed_state(&mut rng).into_inner())
            .collect();
        let rank = span_rank(&rows, ctx.tolerance);
        let expected = model.kind().degrees_of_freedom(model.n());
        ranks.push(format!("{}={rank}", model.k()));
        if rank != expected || model.k() != expected {
            mismatches
                .push(json!({"model": model.descriptor(), "rank": rank, "expected": expected}));
        }
    }
    Ok(CheckOutcome {
        passed: mismatches.is_empty(),
        measured: mismatches.len() as f64,
        detail: format!("K=rank: {}", ranks.join(", ")),
        witness: (!mismatches.is_empty()).then(|| json!(mismatches)),
    })
}

fn z_instrument(qubit: &TheoryModel) -> fiducial::Result<fiducial::measurement::Instrument> {
    lueders_instrument(
        qubit,
        &[
            ("z+", projector(&basis_ket(2, 0))),
            ("z-", projector(&basis_ket(2, 1))),
        ],
    )
}

fn plus_state(frame: &FiducialFrame) -> StateVector {
    let h = 0.5f64.sqrt();
    frame.ket_to_p(&CVector::from_vec(vec![real(h), real(h)]))
}

fn frequency_convergence(ctx: &CheckContext) -> fiducial::Result<CheckOutcome> {
    const TRIALS: u64 = 1_000_000;
    let qubit = ctx.qubit();
    let instr = z_instrument(&qubit)?;
    let p = plus_state(qubit.frame().expect("quantum"));
    let report = simulate_frequencies(&instr, &p, TRIALS, ctx.seed)?;
    let seeds: Vec<u64> = (0..20).map(|i| derive_seed(ctx.seed, 100 + i)).collect();
    let ratio = convergence_ratio(&instr, &p, 1000, 100, &seeds)?;
    let mut out = CheckOutcome::at_most(
        report.max_deviation,
        ctx.tolerance,
        format!("n={TRIALS}; deviation ratio 1e3->1e5 trials over 20 seeds = {ratio:.3}"),
        Some(json!({"counts": report.counts, "max_deviation": report.max_deviation})),
    );
    if !(5.0..=20.0).contains(&ratio) {
        out.passed = false;
        out.witness = Some(json!({"ratio": ratio, "seeds": seeds}));
    }
    Ok(out)
}

fn instruments(ctx: &CheckContext) -> fiducial::Result<CheckOutcome> {
    let qubit = ctx.qubit();
    let instr = z_instrument(&qubit)?;
    let p = plus_state(qubit.frame().expect("quantum"));
    let (post, prob) = instr.apply_update(&p, "z+")?;
    let err = (prob - 0.5)
        .abs()
        .max(max_abs_diff(&post, &[0.5, 0.0, 0.25, 0.25]));
    let mut failures = Vec::new();
    if !instr.is_complete() {
        failures.push(json!("Lueders z instrument is not complete"));
    }
    for model in ctx.of_kind(TheoryKind::Classical) {
        let n = model.n();
        let outcomes: Vec<(String, TransformMatrix)> = (0..n)
            .map(|i| {
                let r = look_in_box(n, i)?;
                Ok((format!("box{i}"), diagonal(&r)?))
            })
            .collect::<fiducial::Result<_>>()?;
        if let Err(e) = make_instrument(model, outcomes) {
            failures.push(json!({"model": model.descriptor(), "error": e.to_string()}));
        }
    }
    let mut out = CheckOutcome::at_most(
        err,
        ctx.tolerance,
        format!("P(z+ | +) = {prob}; post-state {:?}", post.as_slice()),
        Some(json!({"probability": prob, "post_state": post})),
    );
    if !failures.is_empty() {
        out.passed = false;
        out.witness = Some(json!(failures));
    }
    Ok(out)
}

fn diagonal(r: &[f64]) -> fiducial::Result<TransformMatrix> {
    let n = r.len();
    let entries: Vec<f64> = (0..n * n)
        .map(|i| if i % (n + 1) == 0 { r[i / n] } else { 0.0 })
        .collect();
    TransformMatrix::from_row_major(n, &entries)
}

fn table(kind: TheoryKind) -> Vec<PowerLawEntry> {
    (1..=6u64)
        .map(|n| {
            let model = match kind {
                TheoryKind::Classical => TheoryModel::classical(n as usize),
                _ => TheoryModel::quantum(n as usize),
            };
            PowerLawEntry {
                n,
                k: model.expect("small model").k() as u64,
            }
        })
        .collect()
}

fn power_law(ctx: &CheckContext) -> fiducial::Result<CheckOutcome> {
    let mut failures = Vec::new();
    for (kind, r) in [(TheoryKind::Quantum, 2), (TheoryKind::Classical, 1)] {
        let result = verify_power_law(&table(kind))?;
        if !result.is_consistent() || result.r != Some(r) {
            failures.push(json!({"kind": kind, "result": result}));
        }
    }
    let mut rng = random::rng(ctx.seed);
    let mut accepted = 0;
    for t in 0..50 {
        let kind = if t % 2 == 0 {
            TheoryKind::Quantum
        } else {
            TheoryKind::Classical
        };
        let mut rows = table(kind);
        let row = rng.random_range(0..rows.len());
        let delta = rng.random_range(1..=3) as i64 * if rng.random::<bool>() { 1 } else { -1 };
        let k = (rows[row].k as i64 + delta).max(0) as u64;
        rows[row].k = if k == rows[row].k { k + 1 } else { k };
        if verify_power_law(&rows)?.is_consistent() {
            accepted += 1;
            failures.push(json!({"accepted_perturbed_table": rows}));
        }
    }
    let mut out = CheckOutcome::at_most(
        accepted as f64,
        ctx.tolerance,
        "quantum r=2, classical r=1; 50 perturbed tables",
        None,
    );
    if !failures.is_empty() {
        out.passed = false;
        out.witness = Some(json!(failures));
    }
    Ok(out)
}

fn roundtrip(ctx: &CheckContext) -> fiducial::Result<CheckOutcome> {
    let mut rng = random::rng(ctx.seed);
    let mut worst = 0.0_f64;
    let mut witness = Value::Null;
    for model in ctx.of_kind(TheoryKind::Quantum) {
        let frame = model.frame().expect("quantum");
        for _ in 0..ctx.samples {
            let rho = random::random_density(model.n(), &mut rng);
            let back = frame.p_to_rho(&frame.rho_to_p(&rho)?)?;
            let err = frobenius(&(&back.rho - &rho));
            if err > worst || !back.validity.is_valid() {
                worst = if back.validity.is_valid() {
                    err
                } else {
                    f64::INFINITY
                };
                witness = json!({"model": model.descriptor(), "error": err});
            }
        }
    }
    // The six Pauli eigenstates through the closed-form qubit reconstruction.
    let qubit = ctx.qubit();
    let frame = qubit.frame().expect("quantum");
    let h = 0.5f64.sqrt();
    let kets = [
        vec![real(1.0), real(0.0)],
        vec![real(0.0), real(1.0)],
        vec![real(h), real(h)],
        vec![real(h), real(-h)],
        vec![real(h), C64::new(0.0, h)],
        vec![real(h), C64::new(0.0, -h)],
    ];
    for ket in kets {
        let rho: CMatrix = projector(&CVector::from_vec(ket));
        let back = qubit_rho_from_p(&frame.rho_to_p(&rho)?, OffDiagonalFormula::Corrected)?;
        let err = frobenius(&(&back - &rho));
        if err > worst {
            worst = err;
            witness = json!({"pauli_eigenstate_error": err});
        }
    }
    Ok(CheckOutcome::at_most(
        worst,
        ctx.tolerance,
        format!("{} random states per quantum model", ctx.samples),
        Some(witness),
    ))
}

fn trace_formula(ctx: &CheckContext) -> fiducial::Result<CheckOutcome> {
    let mut rng = random::rng(ctx.seed);
    let mut worst = 0.0_f64;
    let mut witness = Value::Null;
    for model in ctx.of_kind(TheoryKind::Quantum) {
        let frame = model.frame().expect("quantum");
        for _ in 0..ctx.samples {
            let a = random::random_effect_operator(model.n(), &mut rng);
            let rho = random::random_density(model.n(), &mut rng);
            let (r, _) = frame.operator_to_effect(&a)?;
            let p = frame.rho_to_p(&rho)?;
            let err = (probability(&r, &p)? - trace_product(&a, &rho).re).abs();
            if err > worst {
                worst = err;
                witness = json!({"model": model.descriptor(), "error": err});
            }
        }
    }
    Ok(CheckOutcome::at_most(
        worst,
        ctx.tolerance,
        format!("{} pairs per quantum model", ctx.samples),
        Some(witness),
    ))
}
