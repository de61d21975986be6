//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use swc_cli::{
    cmd_bound_entanglement, cmd_distill, cmd_mppt, cmd_threshold, tailored_value, DistillSource,
    LiftState, TauChoice, ThresholdRecipe,
};
use swc_core::conic::{
    decomposable_oracle, distill_test_default, optimize_tau, werner_boundary, werner_projection,
    SolveStatus, TauScheme,
};
use swc_core::linalg::{expect, kron, min_eigenvalue, partial_transpose, Operator, SubsystemShape};
use swc_core::swc::{
    bisep_swc, contract, effective_tau_moment, effective_tau_operator, locally_bound_recipe,
    npt_recipe, three_copy_witness,
};
use swc_core::symmetric_group::{young_projector, YoungLabel};
use swc_core::zoo::{
    self, haar_unitary, isotropic, ChaCha8Rng, random_density, random_hermitian, seeded_rng, FamilyKind,
    FamilyQuery, FamilySpec,
};
use swc_core::Result;

type Criterion = fn() -> Result<Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn threshold(kind: ThresholdRecipe, d: usize) -> Result<f64> {
    let family = FamilySpec::new(FamilyKind::Isotropic, d)?;
    Ok(cmd_threshold(&family, &kind, (0.0, 1.0), 1e-4)?
        .value("threshold")
        .expect("threshold recorded"))
}

fn three_copy_thresholds() -> Result<Outcome> {
    let reference = [(3, 0.727), (4, 0.674), (5, 0.630), (6, 0.594)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (d, target) in reference {
        let start = Instant::now();
        let t = threshold(ThresholdRecipe::ThreeCopy, d)?;
        let elapsed = start.elapsed();
        let ok = within(t, target, 0.002);
        pass &= ok;
        parts.push(format!("d={d} {t:.4} (ref {target})"));
        if d == 6 {
            let fast = elapsed < Duration::from_secs(60);
            pass &= fast;
            parts.push(format!("d=6 moment path {elapsed:.2?}"));
        }
    }
    outcome(pass, parts.join(", "))
}

fn tailored_thresholds() -> Result<Outcome> {
    let reference = [(3, 0.319), (4, 0.262), (5, 0.222), (6, 0.193)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (d, target) in reference {
        let t = threshold(ThresholdRecipe::Tailored(None), d)?;
        let ok = within(t, target, 0.002);
        let rho = isotropic(t, d)?;
        let bell_value = tailored_value(&rho, &zoo::bell(d)?)?;
        let e = effective_tau_moment(&three_copy_witness(), &[&rho, &rho])?;
        let sol = optimize_tau(&e, &TauScheme::Decomposable(vec![vec![0], vec![1]]))?;
        let improves = sol.status != SolveStatus::InfeasibleOrFailed && sol.value <= bell_value + 1e-7;
        pass &= ok && improves;
        parts.push(format!(
            "d={d} {t:.4} (ref {target}) decomposable {:.3e} <= bell {:.3e}",
            sol.value, bell_value
        ));
    }
    outcome(pass, parts.join(", "))
}

fn locally_bound_minima() -> Result<Outcome> {
    let timed = |tau: TauChoice| -> Result<(f64, Duration, Option<f64>)> {
        let start = Instant::now();
        let r = cmd_bound_entanglement(tau)?;
        Ok((r.value("minimum").expect("minimum"), start.elapsed(), r.value("ebits")))
    };
    let (bell, t_bell, _) = timed(TauChoice::Bell)?;
    let (phis, t_phis, ebits) = timed(TauChoice::PhiS(0.9999))?;
    let ebits = ebits.unwrap_or(f64::NAN);
    let limit = Duration::from_secs(600);
    let checks = [
        within(bell, -2.76e-4, 1e-5),
        within(phis, -6.051e-5, 2e-6),
        within(ebits, 0.00147, 1e-4),
        t_bell < limit && t_phis < limit,
    ];
    outcome(
        checks.iter().all(|&c| c),
        format!(
            "bell {bell:.4e} (ref -2.76e-4) [{}], phi_s {phis:.4e} (ref -6.051e-5) [{}], ebits {ebits:.5} [{}], times {t_bell:.1?}/{t_phis:.1?} [{}]",
            tag(checks[0]),
            tag(checks[1]),
            tag(checks[2]),
            tag(checks[3])
        ),
    )
}

fn tag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "off"
    }
}

fn mppt_lifts() -> Result<Outcome> {
    let cases = [
        (3, LiftState::Ghz),
        (4, LiftState::Ghz),
        (3, LiftState::W),
        (3, LiftState::Haar(0)),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (l, m) in cases {
        let r = cmd_mppt(l, m)?;
        let v = r.value("minimum").expect("minimum");
        pass &= v < -1e-6 && r.passed();
        parts.push(format!("l={l} {m:?} {v:.3e}"));
    }
    outcome(pass, parts.join(", "))
}

fn npt_oracle() -> Result<Outcome> {
    let mut rng = seeded_rng(90);
    let mut worst = 0.0f64;
    let mut misclassified = 0;
    let (mut npt, mut ppt) = (0, 0);
    for d in [2usize, 3] {
        let recipe = npt_recipe(d)?;
        let mixed = Operator::identity(SubsystemShape::new(vec![d, d])?).scale(1.0 / (d * d) as f64);
        for i in 0..100 {
            let raw = random_density(&[d, d], &mut rng)?;
            let q = i as f64 / 100.0;
            let rho = &raw.scale(1.0 - q) + &mixed.scale(q);
            let e = effective_tau_operator(&recipe, &rho)?;
            let sol = optimize_tau(&e, &TauScheme::StateOnly)?;
            let oracle = min_eigenvalue(&partial_transpose(&rho, &[1])?)?;
            worst = worst.max((sol.value - oracle).abs());
            let is_npt = oracle < -1e-9;
            if is_npt {
                npt += 1;
            } else {
                ppt += 1;
            }
            if (sol.value < -1e-9) != is_npt {
                misclassified += 1;
            }
        }
    }
    outcome(
        worst <= 1e-8 && misclassified == 0,
        format!("max |sdp - oracle| {worst:.2e}, {npt} NPT / {ppt} PPT samples, {misclassified} misclassified"),
    )
}

fn werner_boundary_check() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for d in 3..=6 {
        let query: FamilyQuery = format!("werner:d={d}").parse()?;
        let r = cmd_distill(&DistillSource::Family(query), 2, 1, 0)?;
        let b = r.value("boundary 0");
        let p0 = werner_boundary(d);
        let ok = b.is_some_and(|b| (b - p0).abs() <= 0.01) && r.value("boundary 1").is_none();
        let orientation = r.diagnostics.iter().find(|n| n.starts_with("detected")).cloned().unwrap_or_default();
        let mut worst_residual = 0.0f64;
        let mut min_factor = f64::INFINITY;
        for i in 0..=10 {
            let proj = werner_projection(i as f64 / 10.0, d)?;
            worst_residual = worst_residual.max(proj.residual);
            min_factor = min_factor.min(proj.factor);
        }
        let fit = worst_residual <= 1e-10 && min_factor > 0.0;
        pass &= ok && fit;
        parts.push(format!(
            "d={d} boundary {:.3} vs p0 {p0:.4} ({orientation}), factor >= {min_factor:.4}, residual {worst_residual:.1e}",
            b.unwrap_or(f64::NAN)
        ));
    }
    outcome(pass, parts.join("; "))
}

fn projector_algebra() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for d in 2..=4usize {
        let shape = SubsystemShape::uniform(d, 3)?;
        let id = Operator::identity(shape);
        let p3 = young_projector(YoungLabel::Symmetric, d)?;
        let p21 = young_projector(YoungLabel::Standard, d)?;
        let p111 = young_projector(YoungLabel::Antisymmetric, d)?;
        let df = d as f64;
        let checks = [
            (&p3 * &p3).max_abs_diff(&p3),
            (&p111 * &p111).max_abs_diff(&p111),
            (&p21 * &p21).max_abs_diff(&p21.scale(0.5)),
            (&(&p3 + &p21.scale(2.0)) + &p111).max_abs_diff(&id),
            (p3.trace().re - df * (df + 1.0) * (df + 2.0) / 6.0).abs(),
            (p111.trace().re - df * (df - 1.0) * (df - 2.0) / 6.0).abs(),
            (p21.trace().re - df * (df * df - 1.0) / 3.0).abs(),
        ];
        worst = checks.iter().fold(worst, |a, &b| a.max(b));
    }
    outcome(worst <= 1e-12, format!("max deviation {worst:.2e} over d = 2, 3, 4"))
}

fn random_product(dims: &[usize], rng: &mut ChaCha8Rng) -> Result<Operator> {
    let parts: Vec<Operator> = dims
        .iter()
        .map(|&d| random_density(&[d], rng))
        .collect::<Result<_>>()?;
    let refs: Vec<&Operator> = parts.iter().collect();
    kron(&refs)
}

fn soundness_sampling() -> Result<Outcome> {
    const SAMPLES: usize = 1000;
    let mut rng = seeded_rng(91);
    let mut parts = Vec::new();
    let mut pass = true;

    // four-qutrit locally-bound witness
    let w4 = contract(&locally_bound_recipe(3)?, &zoo::bell(3)?)?;
    let mut worst = f64::INFINITY;
    for _ in 0..SAMPLES {
        worst = worst.min(expect(&w4, &random_product(&[3; 4], &mut rng)?)?.re);
    }
    pass &= worst >= -1e-9;
    parts.push(format!("locally-bound min {worst:.3e}"));

    // tailored three-copy witness with the bell connector
    let tailored = contract(&three_copy_witness().to_recipe(3, 3)?, &zoo::bell(3)?)?;
    let mut worst = f64::INFINITY;
    for _ in 0..SAMPLES {
        worst = worst.min(expect(&tailored, &random_product(&[3; 4], &mut rng)?)?.re);
    }
    pass &= worst >= -1e-9;
    parts.push(format!("tailored three-copy min {worst:.3e}"));

    // six-qubit contraction of two decomposable witnesses P + Q^{T_last}
    let decomposable = |rng: &mut ChaCha8Rng| -> Result<Operator> {
        let p = random_density(&[2; 4], rng)?;
        let q = random_density(&[2; 4], rng)?;
        Ok(&p + &partial_transpose(&q, &[3])?)
    };
    let w = decomposable(&mut rng)?;
    let v = decomposable(&mut rng)?;
    let tau = random_density(&[2, 2], &mut rng)?;
    let six = bisep_swc(&w, &v, &tau)?;
    let split_mixture = |rng: &mut ChaCha8Rng| -> Result<Operator> {
        let mut acc: Option<Operator> = None;
        for _ in 0..3 {
            let term = kron(&[&random_density(&[2], rng)?, &random_density(&[2, 2], rng)?])?.scale(1.0 / 3.0);
            acc = Some(match acc {
                None => term,
                Some(a) => &a + &term,
            });
        }
        Ok(acc.expect("three terms"))
    };
    let mut worst = f64::INFINITY;
    for _ in 0..SAMPLES {
        let state = kron(&[&split_mixture(&mut rng)?, &split_mixture(&mut rng)?])?;
        worst = worst.min(expect(&six, &state)?.re);
    }
    pass &= worst >= -1e-9;
    parts.push(format!("six-party min {worst:.3e}"));
    outcome(pass, format!("{SAMPLES} samples each: {}", parts.join(", ")))
}

fn unitary_invariance() -> Result<Outcome> {
    let mut rng = seeded_rng(92);
    let d = 3;
    let factors = three_copy_witness();
    let scheme = TauScheme::Decomposable(vec![vec![0], vec![1]]);
    let mut worst = 0.0f64;
    let mut worst_transfer = 0.0f64;
    let mut values = Vec::new();
    for i in 0..4 {
        let noise = random_density(&[d, d], &mut rng)?;
        let q = 0.25 * i as f64;
        let rho = &isotropic(0.8, d)?.scale(1.0 - q) + &noise.scale(q);
        let local = haar_unitary(d, &mut rng).kronecker(&haar_unitary(d, &mut rng));
        let rotated = rho.with_matrix(&local * rho.matrix() * local.adjoint());
        let e = effective_tau_moment(&factors, &[&rho, &rho])?;
        let e_rot = effective_tau_moment(&factors, &[&rotated, &rotated])?;
        let a = optimize_tau(&e, &scheme)?;
        let b = optimize_tau(&e_rot, &scheme)?;
        worst = worst.max((a.value - b.value).abs());
        values.push(format!("{:.3e}", a.value));
        let moved = a.optimizer.with_matrix(&local * a.optimizer.matrix() * local.adjoint());
        worst_transfer = worst_transfer.max((expect(&e_rot, &moved)?.re - b.value).abs());
    }
    outcome(
        worst <= 1e-7 && worst_transfer <= 1e-7,
        format!(
            "minima [{}], max value difference {worst:.2e}, conjugated optimizer gap {worst_transfer:.2e}",
            values.join(", ")
        ),
    )
}

fn sdp_self_validation() -> Result<Outcome> {
    let mut rng = seeded_rng(93);
    let subsets = vec![vec![0], vec![1]];
    let mut worst = 0.0f64;
    let mut failures = 0;
    for dims in [[2usize, 2], [3, 3]] {
        for i in 0..100 {
            let e = random_hermitian(&dims, i % 2 == 0, &mut rng)?;
            let sol = optimize_tau(&e, &TauScheme::Decomposable(subsets.clone()))?;
            if sol.status != SolveStatus::Optimal {
                failures += 1;
            }
            worst = worst.max((sol.value - decomposable_oracle(&e, &subsets)?).abs());
        }
    }
    let mut distill_worst = 0.0f64;
    for _ in 0..50 {
        let rho = random_density(&[3, 3], &mut rng)?;
        let r = distill_test_default(&rho)?;
        distill_worst = distill_worst.max((r.value - r.sdp_value).abs());
    }
    outcome(
        worst <= 1e-7 && distill_worst <= 1e-8 && failures == 0,
        format!(
            "decomposable vs oracle {worst:.2e} over 200 instances ({failures} not optimal), distill eigen vs SDP {distill_worst:.2e}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("three-copy isotropic thresholds", three_copy_thresholds),
        ("tailored isotropic thresholds", tailored_thresholds),
        ("locally-bound four-qutrit minima", locally_bound_minima),
        ("multipartite PPT lifts", mppt_lifts),
        ("transposition recipe equals PPT test", npt_oracle),
        ("Werner distillability boundary", werner_boundary_check),
        ("projector algebra", projector_algebra),
        ("separable-state soundness", soundness_sampling),
        ("local-unitary invariance", unitary_invariance),
        ("SDP self-validation", sdp_self_validation),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name} ({:.1?}): {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
