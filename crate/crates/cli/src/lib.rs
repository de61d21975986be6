//! Commands behind the `swc` binary. Each returns a [`Report`] that can be
//! printed as a table, JSON or CSV; checks recorded in a report decide the
//! process exit code.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use swc_core::conic::{
    self, all_bipartitions, distill_test_with, min_over_constrained_states, optimize_tau,
    ConeSolution, SolveStatus, TauScheme,
};
use swc_core::linalg::{expect, min_eigenvalue, Operator};
use swc_core::swc::{
    self, copies_in_recipe_order, effective_tau_operator, evaluate_moment, three_copy_witness,
    LiftMode, RecipeFile,
};
use swc_core::symmetric_group::{pair_projectors, young_projector, YoungLabel};
use swc_core::zoo::{self, FamilyKind, FamilyQuery, FamilySpec};
use swc_core::{Error, Result};

/// One labeled number in a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Measurement {
    pub label: String,
    pub value: f64,
}

/// A named pass/fail condition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub results: Vec<Measurement>,
    pub tolerances: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            ..Self::default()
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.inputs.insert(
            key.to_string(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
        self
    }

    pub fn result(&mut self, label: impl Into<String>, value: f64) -> &mut Self {
        self.results.push(Measurement {
            label: label.into(),
            value,
        });
        self
    }

    pub fn tolerance(&mut self, key: &str, value: f64) -> &mut Self {
        self.tolerances.insert(key.to_string(), value);
        self
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.diagnostics.push(text.into());
        self
    }

    /// Records solver diagnostics and a check that the solve succeeded.
    pub fn solver(&mut self, label: &str, sol: &ConeSolution) -> &mut Self {
        self.note(format!(
            "{label}: status {:?}, gap {:.3e}, violation {:.3e}, dual residual {:.3e}, {} iterations ({})",
            sol.status, sol.duality_gap, sol.violation, sol.dual_infeasibility, sol.iterations, sol.message
        ));
        self.check(
            format!("{label} solved"),
            sol.status != SolveStatus::InfeasibleOrFailed,
            format!("{:?}", sol.status),
        )
    }

    pub fn value(&self, label: &str) -> Option<f64> {
        self.results.iter().find(|m| m.label == label).map(|m| m.value)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(["kind", "label", "value"]).map_err(io)?;
        for m in &self.results {
            w.write_record(["result", &m.label, &format!("{:.12e}", m.value)]).map_err(io)?;
        }
        for c in &self.checks {
            w.write_record(["check", &c.name, if c.pass { "pass" } else { "fail" }]).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8_lossy(&bytes).into_owned())
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {} ==", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "  {k} = {v}");
        }
        let width = self.results.iter().map(|m| m.label.len()).max().unwrap_or(0);
        for m in &self.results {
            let _ = writeln!(out, "  {:<width$}  {:>+.6e}", m.label, m.value);
        }
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  [{}] {} {}",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        for d in &self.diagnostics {
            let _ = writeln!(out, "  # {d}");
        }
        out
    }
}

/// Result of a bisection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bisection {
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
    pub evaluations: usize,
}

/// Bisection for a single sign change of `f` on `[lo, hi]`.
pub fn bisect(mut f: impl FnMut(f64) -> Result<f64>, lo: f64, hi: f64, tol: f64) -> Result<Bisection> {
    if lo.is_nan() || hi.is_nan() || tol.is_nan() || lo >= hi || tol <= 0.0 {
        return Err(Error::Argument(format!("invalid bracket [{lo}, {hi}] or tolerance {tol}")));
    }
    let (mut lo, mut hi) = (lo, hi);
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    let mut evaluations = 2;
    if f_lo == 0.0 {
        return Ok(Bisection { root: lo, lo, hi: lo, evaluations });
    }
    if f_hi == 0.0 {
        return Ok(Bisection { root: hi, lo: hi, hi, evaluations });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracketing { lo, hi, f_lo, f_hi });
    }
    let lo_sign = f_lo.signum();
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        evaluations += 1;
        if fm == 0.0 {
            return Ok(Bisection { root: mid, lo: mid, hi: mid, evaluations });
        }
        if fm.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Bisection {
        root: 0.5 * (lo + hi),
        lo,
        hi,
        evaluations,
    })
}

/// What is evaluated along a family during a threshold search.
#[derive(Clone, Debug)]
pub enum ThresholdRecipe {
    /// `tr(W rho^{(x)3})` for the three-copy permutation witness.
    ThreeCopy,
    /// The same witness with the third copy replaced by a fixed connector (default: bell state).
    Tailored(Option<Operator>),
    /// A dense recipe file evaluated on copies of the family state.
    File(PathBuf),
}

impl ThresholdRecipe {
    pub fn parse(text: &str) -> Self {
        match text {
            "three-copy" | "three_copy" => ThresholdRecipe::ThreeCopy,
            "tailored" => ThresholdRecipe::Tailored(None),
            path => ThresholdRecipe::File(PathBuf::from(path)),
        }
    }

    fn name(&self) -> String {
        match self {
            ThresholdRecipe::ThreeCopy => "three-copy".into(),
            ThresholdRecipe::Tailored(_) => "tailored".into(),
            ThresholdRecipe::File(p) => p.display().to_string(),
        }
    }
}

/// `tr(W rho^{(x)3})` for the three-copy witness, via permutation moments.
pub fn three_copy_value(rho: &Operator) -> Result<f64> {
    evaluate_moment(&three_copy_witness(), &[rho, rho], rho)
}

/// Three-copy witness with the third copy replaced by `tau`.
pub fn tailored_value(rho: &Operator, tau: &Operator) -> Result<f64> {
    evaluate_moment(&three_copy_witness(), &[rho, rho], tau)
}

fn file_evaluator(path: &Path) -> Result<impl Fn(&Operator) -> Result<f64>> {
    let (file, base) = RecipeFile::load(path)?;
    let recipe = file.recipe(&base)?;
    let tau = file
        .tau(&base)?
        .ok_or_else(|| Error::Argument("threshold recipes need a tau entry".into()))?;
    let arities: Vec<usize> = recipe.factors().iter().map(|f| f.dims().len() - 1).collect();
    if arities.len() != 2 || arities[0] != arities[1] {
        return Err(Error::Argument(
            "threshold recipe files need two factors of equal arity (A copies, B copies)".into(),
        ));
    }
    let copies = arities[0];
    Ok(move |rho: &Operator| {
        let state = copies_in_recipe_order(rho, copies)?;
        Ok(expect(&effective_tau_operator(&recipe, &state)?, &tau)?.re)
    })
}

/// Bisection on a one-parameter family for the sign change of the recipe's value.
pub fn cmd_threshold(family: &FamilySpec, recipe: &ThresholdRecipe, bracket: (f64, f64), tol: f64) -> Result<Report> {
    let mut report = Report::new("threshold");
    report
        .input("family", family.kind.to_string())
        .input("d", family.d)
        .input("recipe", recipe.name())
        .input("bracket", [bracket.0, bracket.1])
        .tolerance("bisection", tol);
    let state = |p: f64| family.state(p);
    let found = match recipe {
        ThresholdRecipe::ThreeCopy => bisect(|p| three_copy_value(&state(p)?), bracket.0, bracket.1, tol)?,
        ThresholdRecipe::Tailored(tau) => {
            let tau = match tau {
                Some(t) => t.clone(),
                None => zoo::bell(family.d)?,
            };
            bisect(|p| tailored_value(&state(p)?, &tau), bracket.0, bracket.1, tol)?
        }
        ThresholdRecipe::File(path) => {
            let eval = file_evaluator(path)?;
            bisect(|p| eval(&state(p)?), bracket.0, bracket.1, tol)?
        }
    };
    report
        .result("threshold", found.root)
        .result("bracket_lo", found.lo)
        .result("bracket_hi", found.hi)
        .note(format!("{} evaluations", found.evaluations));
    Ok(report)
}

/// Threshold of a single sign change of `f` on `[lo, hi]`, as a report.
pub fn cmd_threshold_fn(f: impl FnMut(f64) -> Result<f64>, lo: f64, hi: f64, tol: f64) -> Result<Report> {
    let found = bisect(f, lo, hi, tol)?;
    let mut report = Report::new("threshold");
    report
        .input("bracket", [lo, hi])
        .tolerance("bisection", tol)
        .result("threshold", found.root)
        .result("bracket_lo", found.lo)
        .result("bracket_hi", found.hi);
    Ok(report)
}

/// Isotropic detection thresholds per `d`: three-copy witness, tailored witness, and `1/(d+1)`.
pub fn cmd_table1(ds: &[usize], tol: f64) -> Result<Report> {
    if tol < 1e-6 {
        return Err(Error::Argument(format!("tolerance {tol} below 1e-6")));
    }
    let mut report = Report::new("table1");
    report.input("d", ds).tolerance("bisection", tol);
    for &d in ds {
        if !(3..=6).contains(&d) {
            return Err(Error::Argument(format!("d = {d} outside 3..=6")));
        }
        let family = FamilySpec::new(FamilyKind::Isotropic, d)?;
        let row1 = cmd_threshold(&family, &ThresholdRecipe::ThreeCopy, (0.0, 1.0), tol)?
            .value("threshold")
            .expect("threshold recorded");
        let row2 = cmd_threshold(&family, &ThresholdRecipe::Tailored(None), (0.0, 1.0), tol)?
            .value("threshold")
            .expect("threshold recorded");
        let row3 = 1.0 / (d as f64 + 1.0);
        report
            .result(format!("d={d} three-copy"), row1)
            .result(format!("d={d} tailored"), row2)
            .result(format!("d={d} entangled above"), row3)
            .check(
                format!("d={d} ordering"),
                row1 > row2 && row2 > row3,
                format!("{row1:.4} > {row2:.4} > {row3:.4}"),
            );
    }
    Ok(report)
}

/// Connector for the four-party locally-bound witness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TauChoice {
    Bell,
    PhiS(f64),
}

impl std::str::FromStr for TauChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "bell" {
            return Ok(TauChoice::Bell);
        }
        let value = s
            .strip_prefix("phi_s:")
            .or_else(|| s.strip_prefix("phi_s="))
            .ok_or_else(|| Error::Argument(format!("expected bell or phi_s:<s>, got {s:?}")))?;
        let s: f64 = value
            .parse()
            .map_err(|_| Error::Argument(format!("bad phi_s parameter {value:?}")))?;
        Ok(TauChoice::PhiS(s))
    }
}

/// The four-qutrit witness built from the three-party witness and the antisymmetrizer.
pub fn locally_bound_witness(tau: TauChoice) -> Result<Operator> {
    let tau = match tau {
        TauChoice::Bell => zoo::bell(3)?,
        TauChoice::PhiS(s) => {
            if !(s > 0.0 && s <= 1.0) {
                return Err(Error::Argument(format!("s = {s} outside (0, 1]")));
            }
            zoo::phi_s(s, 3)?
        }
    };
    swc::contract(&swc::locally_bound_recipe(3)?, &tau)
}

/// Minimum of the locally-bound witness over states with every single-party partial transpose PSD.
pub fn cmd_bound_entanglement(tau: TauChoice) -> Result<Report> {
    let mut report = Report::new("bound-entanglement");
    report.input("tau", tau);
    let w = locally_bound_witness(tau)?;
    let singles: Vec<Vec<usize>> = (0..4).map(|p| vec![p]).collect();
    let sol = min_over_constrained_states(&w, &singles)?;
    report.result("minimum", sol.value).solver("single-party PPT minimum", &sol);
    let product_tau = matches!(tau, TauChoice::PhiS(s) if s == 1.0);
    if let TauChoice::PhiS(s) = tau {
        report.result("ebits", zoo::entanglement_entropy(s)?);
    }
    if product_tau {
        report.check("no detection with product connector", sol.value >= -1e-9, format!("{:.3e}", sol.value));
    } else {
        report.check("detects", sol.value < conic::VERDICT_TOL, format!("{:.3e}", sol.value));
    }
    Ok(report)
}

/// Second operator of the multipartite lift.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftState {
    Ghz,
    W,
    Haar(u64),
}

impl std::str::FromStr for LiftState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ghz" => Ok(LiftState::Ghz),
            "w" => Ok(LiftState::W),
            _ => {
                let seed = s
                    .strip_prefix("haar:")
                    .or_else(|| s.strip_prefix("haar="))
                    .unwrap_or(if s == "haar" { "0" } else { "" });
                seed.parse()
                    .map(LiftState::Haar)
                    .map_err(|_| Error::Argument(format!("expected ghz, w or haar:<seed>, got {s:?}")))
            }
        }
    }
}

/// Lift of the three-qubit indecomposable witness, minimized over states PPT across every bipartition.
pub fn cmd_mppt(l: usize, m: LiftState) -> Result<Report> {
    if !(3..=4).contains(&l) {
        return Err(Error::Argument(format!("l = {l} outside 3..=4")));
    }
    let mut report = Report::new("mppt");
    report.input("l", l).input("m", m);
    let state = match m {
        LiftState::Ghz => zoo::ghz(l, 2)?,
        LiftState::W => zoo::w_state(l)?,
        LiftState::Haar(seed) => zoo::haar_random_state(&vec![2; l], seed)?,
    };
    let w = zoo::kye_witness(zoo::KYE_DEFAULT, zoo::KYE_DEFAULT)?;
    let lifted = swc::mppt_lift(&w, &state, LiftMode::PhiPlus)?;
    let parties = lifted.dims().len();
    let cuts = all_bipartitions(parties);
    report.input("bipartitions", cuts.len());
    let sol = min_over_constrained_states(&lifted, &cuts)?;
    report
        .result("minimum", sol.value)
        .solver("all-bipartition PPT minimum", &sol)
        .check("negative minimum", sol.value < -1e-6, format!("{:.3e}", sol.value));
    Ok(report)
}

/// Input of a distillability run.
#[derive(Clone, Debug)]
pub enum DistillSource {
    /// Sweep a family over a parameter grid, or evaluate a single point if the query fixes it.
    Family(FamilyQuery),
    State(PathBuf),
    /// Haar-random pure two-qudit states of local dimension `d`.
    Random { d: usize },
}

fn local_projector(d: usize, k: usize) -> Result<Operator> {
    match k {
        2 => Ok(pair_projectors(d)?.1),
        3 => Ok(young_projector(YoungLabel::Standard, d)?.scale(2.0)),
        _ => Err(Error::Argument(format!("k = {k} not supported (2 or 3)"))),
    }
}

/// Default projectors: antisymmetric pair for `k = 2`, standard isotypic for `k = 3`.
fn distill_one(rho: &Operator, k: usize) -> Result<conic::DistillResult> {
    let (d_a, d_b) = match rho.dims() {
        [a, b] => (*a, *b),
        _ => return Err(Error::Argument("distillability needs a two-party state".into())),
    };
    let side = (d_a * d_b).pow(k as u32);
    if k == 3 && side > swc::DENSE_SIDE_LIMIT {
        return Err(Error::Resource(format!("k = 3 dense path needs side {side}")));
    }
    distill_test_with(
        rho,
        k,
        &local_projector(d_a, k)?,
        &local_projector(d_b, k)?,
        &zoo::diagonal_projector(d_a, 2)?,
        &zoo::diagonal_projector(d_b, 2)?,
    )
}

pub const GRID_STEP: f64 = 0.01;

/// Distillability test over a family grid, a state file, or random pure states.
pub fn cmd_distill(source: &DistillSource, k: usize, samples: usize, seed: u64) -> Result<Report> {
    if !(2..=3).contains(&k) {
        return Err(Error::Argument(format!("k = {k} outside 2..=3")));
    }
    if samples == 0 {
        return Err(Error::Argument("sample count must be >= 1".into()));
    }
    let mut report = Report::new("distill");
    report.input("k", k).tolerance("verdict", conic::VERDICT_TOL).tolerance("cross-check", 1e-8);
    let mut worst_mismatch = 0.0f64;
    match source {
        DistillSource::Family(query) => {
            report.input("family", query.family.kind.to_string()).input("d", query.family.d);
            if let Some(p) = query.param {
                let res = distill_one(&query.state()?, k)?;
                worst_mismatch = (res.value - res.sdp_value).abs();
                report.input("param", p).result("value", res.value).result("detected", res.verdict as u8 as f64);
            } else {
                let steps = (1.0 / GRID_STEP).round() as usize;
                let mut verdicts = Vec::with_capacity(steps + 1);
                for i in 0..=steps {
                    let p = i as f64 * GRID_STEP;
                    let res = distill_one(&query.family.state(p)?, k)?;
                    worst_mismatch = worst_mismatch.max((res.value - res.sdp_value).abs());
                    report.result(format!("p={p:.2}"), res.value);
                    verdicts.push((p, res.verdict));
                }
                let flips: Vec<f64> = verdicts
                    .windows(2)
                    .filter(|w| w[0].1 != w[1].1)
                    .map(|w| 0.5 * (w[0].0 + w[1].0))
                    .collect();
                for (i, b) in flips.iter().enumerate() {
                    report.result(format!("boundary {i}"), *b);
                }
                if let [b] = flips.as_slice() {
                    let below = verdicts.first().map(|v| v.1).unwrap_or(false);
                    report.note(format!(
                        "detected for p {} {b:.3}",
                        if below { "below" } else { "above" }
                    ));
                    if query.family.kind == FamilyKind::Werner {
                        let p0 = conic::werner_boundary(query.family.d);
                        report.result("p0", p0).check(
                            "boundary at p0",
                            (b - p0).abs() <= GRID_STEP,
                            format!("{b:.3} vs {p0:.4}"),
                        );
                    }
                }
            }
        }
        DistillSource::State(path) => {
            report.input("state", path.display().to_string());
            let rho = Operator::load(path)?;
            let res = distill_one(&rho, k)?;
            worst_mismatch = (res.value - res.sdp_value).abs();
            report.result("value", res.value).result("detected", res.verdict as u8 as f64);
        }
        DistillSource::Random { d } => {
            report.input("d", d).input("samples", samples).input("seed", seed);
            let mut rng = zoo::seeded_rng(seed);
            let mut detected = 0usize;
            for _ in 0..samples {
                let rho = zoo::haar_state_from(&[*d, *d], &mut rng)?;
                let res = distill_one(&rho, k)?;
                worst_mismatch = worst_mismatch.max((res.value - res.sdp_value).abs());
                detected += res.verdict as usize;
            }
            let fraction = detected as f64 / samples as f64;
            report
                .result("detected fraction", fraction)
                .check("majority detected", fraction > 0.5, format!("{fraction:.3}"));
        }
    }
    report.result("max |eigen - sdp|", worst_mismatch).check(
        "eigenvalue and SDP paths agree",
        worst_mismatch <= 1e-8,
        format!("{worst_mismatch:.2e}"),
    );
    Ok(report)
}

/// Evaluates a state file against a recipe file: the fixed-connector value
/// (if the recipe has one) and the tailored minima over the connector.
pub fn cmd_eval(recipe_path: &Path, state_path: &Path) -> Result<Report> {
    let mut report = Report::new("eval");
    report
        .input("recipe", recipe_path.display().to_string())
        .input("state", state_path.display().to_string());
    let (file, base) = RecipeFile::load(recipe_path)?;
    let recipe = file.recipe(&base)?;
    let rho = Operator::load(state_path)?;
    let e = effective_tau_operator(&recipe, &rho)?;
    if let Some(tau) = file.tau(&base)? {
        report.result("value", expect(&e, &tau)?.re);
    }
    let state_only = optimize_tau(&e, &TauScheme::StateOnly)?;
    report
        .result("min over states", state_only.value)
        .result("min eigenvalue of effective operator", min_eigenvalue(&e)?)
        .solver("state-only", &state_only);
    let singles: Vec<Vec<usize>> = (0..e.dims().len()).map(|p| vec![p]).collect();
    let decomposable = optimize_tau(&e, &TauScheme::Decomposable(singles))?;
    report
        .result("min over decomposable", decomposable.value)
        .solver("decomposable", &decomposable);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_finds_linear_root() {
        let b = bisect(|p| Ok(p - 1.0 / 3.0), 0.0, 1.0, 1e-4).unwrap();
        assert!((b.root - 1.0 / 3.0).abs() <= 1e-4);
        assert!(b.hi - b.lo <= 1e-4);
    }

    #[test]
    fn bisection_reports_missing_sign_change() {
        match bisect(|p| Ok(p + 1.0), 0.0, 1.0, 1e-4) {
            Err(Error::Bracketing { f_lo, f_hi, .. }) => {
                assert_eq!(f_lo, 1.0);
                assert_eq!(f_hi, 2.0);
            }
            other => panic!("expected bracketing error, got {other:?}"),
        }
    }

    #[test]
    fn report_serialization_is_deterministic() {
        let build = || {
            let mut r = Report::new("x");
            r.input("d", 3).result("a", 0.5).check("c", true, "fine");
            r
        };
        assert_eq!(build().to_json().unwrap(), build().to_json().unwrap());
        let csv = build().to_csv().unwrap();
        assert!(csv.starts_with("kind,label,value"));
        assert!(csv.contains("check,c,pass"));
    }

    #[test]
    fn parses_choices() {
        assert_eq!("bell".parse::<TauChoice>().unwrap(), TauChoice::Bell);
        assert_eq!("phi_s:0.9999".parse::<TauChoice>().unwrap(), TauChoice::PhiS(0.9999));
        assert!("nope".parse::<TauChoice>().is_err());
        assert_eq!("haar:7".parse::<LiftState>().unwrap(), LiftState::Haar(7));
        assert_eq!("haar".parse::<LiftState>().unwrap(), LiftState::Haar(0));
        assert_eq!("w".parse::<LiftState>().unwrap(), LiftState::W);
    }

    #[test]
    fn table1_rejects_bad_inputs() {
        assert!(cmd_table1(&[2], 1e-4).is_err());
        assert!(cmd_table1(&[3], 1e-9).is_err());
    }

    #[test]
    fn three_copy_signs() {
        let mixed = zoo::isotropic(0.0, 3).unwrap();
        assert!(three_copy_value(&mixed).unwrap() > 0.0);
        assert!(three_copy_value(&zoo::bell(3).unwrap()).unwrap() < 0.0);
    }
}
