//! Conic programs over Hermitian operators: tailoring the connector over
//! states or decomposable witnesses, minimizing a witness over
//! PPT-constrained states, and the two-qubit distillability test.

mod solver;

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::linalg::{
    kron_power, min_eigenvalue, partial_transpose, CMatrix, Operator, SubsystemShape, C64,
    HERMITIAN_TOL,
};
use crate::swc::{copies_in_recipe_order, effective_tau_operator, SwcRecipe};
use crate::symmetric_group::pair_projectors;
use solver::{Entry, Lmi, Options};

/// Duality-gap bound for [`SolveStatus::Optimal`].
pub const GAP_TOL: f64 = 1e-8;
/// Constraint-violation bound for [`SolveStatus::Optimal`].
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Values below this count as a detection.
pub const VERDICT_TOL: f64 = -1e-9;

/// Cone a block variable is restricted to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cone {
    Psd,
    /// The partial transpose over these parties is PSD.
    Ppt(Vec<usize>),
}

/// One Hermitian variable, lying in the intersection of its cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeBlock {
    pub cones: Vec<Cone>,
}

impl ConeBlock {
    pub fn new(cones: Vec<Cone>) -> Self {
        Self { cones }
    }
}

/// Minimize `tr(objective tau)` over `tau = sum of blocks`, `tr tau = 1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeProgram {
    pub objective: Operator,
    pub blocks: Vec<ConeBlock>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    NearOptimal,
    InfeasibleOrFailed,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeSolution {
    pub value: f64,
    /// The decision operator `tau`.
    pub optimizer: Operator,
    /// Individual block variables, summing to `optimizer`.
    pub blocks: Vec<Operator>,
    pub duality_gap: f64,
    /// Largest cone or trace violation of the returned blocks.
    pub violation: f64,
    pub dual_infeasibility: f64,
    pub status: SolveStatus,
    pub iterations: usize,
    pub message: String,
}

impl ConeSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

impl ConeProgram {
    pub fn new(objective: Operator, blocks: Vec<ConeBlock>) -> Result<Self> {
        let program = Self { objective, blocks };
        program.validate()?;
        Ok(program)
    }

    pub fn validate(&self) -> Result<()> {
        let dev = self.objective.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::Contract(format!("objective is not Hermitian (deviation {dev:e})")));
        }
        if self.blocks.is_empty() {
            return arg("a cone program needs at least one block");
        }
        let parties = self.objective.dims().len();
        for (t, block) in self.blocks.iter().enumerate() {
            if block.cones.is_empty() {
                return arg(format!("block {t} has no cone"));
            }
            for cone in &block.cones {
                if let Cone::Ppt(s) = cone {
                    if let Some(&p) = s.iter().find(|&&p| p >= parties) {
                        return arg(format!("block {t}: party {p} out of range for {parties} parties"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let program: Self = serde_json::from_str(text)?;
        program.validate()?;
        Ok(program)
    }
}

/// Position permutation of a matrix unit `|r><c|` under partial transposition.
fn transpose_index(dims: &[usize], subset: &[usize], r: usize, c: usize) -> (usize, usize) {
    if subset.is_empty() {
        return (r, c);
    }
    let mut stride = 1;
    let (mut r2, mut c2) = (r, c);
    for p in (0..dims.len()).rev() {
        if subset.contains(&p) {
            let dr = (r / stride) % dims[p];
            let dc = (c / stride) % dims[p];
            r2 = r2 - dr * stride + dc * stride;
            c2 = c2 - dc * stride + dr * stride;
        }
        stride *= dims[p];
    }
    (r2, c2)
}

#[derive(Clone, Copy)]
enum Basis {
    Diag(usize),
    Sym(usize, usize),
    Asym(usize, usize),
}

impl Basis {
    fn entries(self) -> Vec<(usize, usize, C64)> {
        let s = FRAC_1_SQRT_2;
        match self {
            Basis::Diag(a) => vec![(a, a, C64::new(1.0, 0.0))],
            Basis::Sym(a, b) => vec![(a, b, C64::new(s, 0.0)), (b, a, C64::new(s, 0.0))],
            Basis::Asym(a, b) => vec![(a, b, C64::new(0.0, s)), (b, a, C64::new(0.0, -s))],
        }
    }
}

struct Lowered {
    lmi: Lmi,
    y0: Vec<f64>,
    /// Per variable: owning block variable and basis element.
    vars: Vec<(usize, Basis)>,
    eliminated: (usize, Basis),
    constant: f64,
}

fn basis_for(n: usize, complex: bool) -> Vec<Basis> {
    let mut out: Vec<Basis> = (0..n).map(Basis::Diag).collect();
    for a in 0..n {
        for b in a + 1..n {
            out.push(Basis::Sym(a, b));
            if complex {
                out.push(Basis::Asym(a, b));
            }
        }
    }
    out
}

fn embed(entries: &[(usize, usize, C64)], n: usize, complex: bool) -> Vec<Entry> {
    let mut out = Vec::new();
    for &(r, c, z) in entries {
        if !complex {
            out.push(Entry { r, c, v: z.re });
            continue;
        }
        if z.re != 0.0 {
            out.push(Entry { r, c, v: z.re });
            out.push(Entry { r: r + n, c: c + n, v: z.re });
        }
        if z.im != 0.0 {
            out.push(Entry { r, c: c + n, v: -z.im });
            out.push(Entry { r: r + n, c, v: z.im });
        }
    }
    out
}

fn lower(program: &ConeProgram, complex: bool) -> Lowered {
    let e = &program.objective;
    let dims = e.dims().to_vec();
    let n = e.side();
    let blocks = program.blocks.len();
    let basis = basis_for(n, complex);
    let block_n = if complex { 2 * n } else { n };

    // LMI block index of every (variable block, cone) pair
    let mut lmi_blocks: Vec<Vec<usize>> = Vec::with_capacity(blocks);
    let mut count = 0;
    for b in &program.blocks {
        lmi_blocks.push((count..count + b.cones.len()).collect());
        count += b.cones.len();
    }

    let image = |t: usize, el: Basis| -> Vec<(usize, Vec<Entry>)> {
        let raw = el.entries();
        program.blocks[t]
            .cones
            .iter()
            .zip(&lmi_blocks[t])
            .map(|(cone, &lb)| {
                let moved: Vec<(usize, usize, C64)> = match cone {
                    Cone::Psd => raw.clone(),
                    Cone::Ppt(s) => raw
                        .iter()
                        .map(|&(r, c, z)| {
                            let (r2, c2) = transpose_index(&dims, s, r, c);
                            (r2, c2, z)
                        })
                        .collect(),
                };
                (lb, embed(&moved, n, complex))
            })
            .collect()
    };
    let cost = |el: Basis| -> f64 {
        el.entries()
            .iter()
            .map(|&(r, c, z)| (e.get(c, r) * z).re)
            .sum()
    };

    let eliminated = (0usize, Basis::Diag(0));
    let elim_image = image(0, eliminated.1);
    let elim_cost = cost(eliminated.1);
    let start = 1.0 / (n * blocks) as f64;

    let mut lmi = Lmi {
        block_dims: vec![block_n; count],
        c: Vec::new(),
        f0: vec![Vec::new(); count],
        f: Vec::new(),
    };
    // Z = F_elim + sum_k y_k (F_k - [diag] F_elim), so F_0 = -F_elim
    for (lb, entries) in &elim_image {
        lmi.f0[*lb] = entries.iter().map(|en| Entry { v: -en.v, ..*en }).collect();
    }
    let mut vars = Vec::new();
    let mut y0 = Vec::new();
    for t in 0..blocks {
        for &el in &basis {
            if t == 0 && matches!(el, Basis::Diag(0)) {
                continue;
            }
            let mut parts = image(t, el);
            let mut c = cost(el);
            if let Basis::Diag(_) = el {
                for (lb, entries) in &elim_image {
                    let neg = entries.iter().map(|en| Entry { v: -en.v, ..*en });
                    match parts.iter_mut().find(|(b, _)| b == lb) {
                        Some((_, list)) => list.extend(neg),
                        None => parts.push((*lb, neg.collect())),
                    }
                }
                c -= elim_cost;
                y0.push(start);
            } else {
                y0.push(0.0);
            }
            parts.sort_by_key(|(b, _)| *b);
            lmi.f.push(parts);
            lmi.c.push(c);
            vars.push((t, el));
        }
    }
    Lowered {
        lmi,
        y0,
        vars,
        eliminated,
        constant: elim_cost,
    }
}

fn reconstruct(program: &ConeProgram, lowered: &Lowered, y: &[f64]) -> Vec<Operator> {
    let n = program.objective.side();
    let mut mats = vec![CMatrix::zeros(n, n); program.blocks.len()];
    let mut diag_sum = 0.0;
    for (&(t, el), &yk) in lowered.vars.iter().zip(y) {
        if let Basis::Diag(_) = el {
            diag_sum += yk;
        }
        for (r, c, z) in el.entries() {
            mats[t][(r, c)] += z * yk;
        }
    }
    let (t0, el0) = lowered.eliminated;
    for (r, c, z) in el0.entries() {
        mats[t0][(r, c)] += z * (1.0 - diag_sum);
    }
    mats.into_iter()
        .map(|m| Operator::new(program.objective.shape().clone(), m).expect("shape matches objective"))
        .collect()
}

fn violation(program: &ConeProgram, blocks: &[Operator], tau: &Operator) -> Result<f64> {
    let mut worst = (tau.trace().re - 1.0).abs();
    for (b, spec) in blocks.iter().zip(&program.blocks) {
        let herm = b.hermitian_part();
        for cone in &spec.cones {
            let lam = match cone {
                Cone::Psd => min_eigenvalue(&herm)?,
                Cone::Ppt(s) => min_eigenvalue(&partial_transpose(&herm, s)?)?,
            };
            worst = worst.max(-lam);
        }
    }
    Ok(worst)
}

/// Solves a cone program with the interior-point method.
pub fn solve(program: &ConeProgram) -> Result<ConeSolution> {
    program.validate()?;
    let e = &program.objective;
    let complex = e.max_imag() > 0.0;
    let lowered = lower(program, complex);
    let sol = solver::solve(&lowered.lmi, &lowered.y0, Options::default());
    let blocks = reconstruct(program, &lowered, &sol.y);
    let mut tau = blocks[0].clone();
    for b in &blocks[1..] {
        tau = tau.try_add(b)?;
    }
    let value = crate::linalg::expect(e, &tau)?.re;
    let gap = (sol.primal_obj - sol.dual_obj).abs();
    let viol = violation(program, &blocks, &tau)?.max(0.0);
    let dinf = sol.dual_infeasibility;
    let status = if gap <= GAP_TOL && viol <= FEASIBILITY_TOL && dinf <= FEASIBILITY_TOL {
        SolveStatus::Optimal
    } else if gap <= 1e-5 * (1.0 + value.abs()) && viol <= 1e-6 && dinf <= 1e-6 {
        SolveStatus::NearOptimal
    } else {
        SolveStatus::InfeasibleOrFailed
    };
    debug_assert!((sol.primal_obj + lowered.constant - value).abs() <= 1e-8 * (1.0 + value.abs()));
    Ok(ConeSolution {
        value,
        optimizer: tau,
        blocks,
        duality_gap: gap,
        violation: viol,
        dual_infeasibility: dinf,
        status,
        iterations: sol.iterations,
        message: sol.message,
    })
}

/// Feasible set for the connector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauScheme {
    /// Density operators.
    StateOnly,
    /// `X + sum_S X_S` with `X` PSD and each `X_S` PSD after partial transposition over `S`.
    Decomposable(Vec<Vec<usize>>),
}

/// Minimizes `tr(E tau)` over the chosen connector set.
pub fn optimize_tau(e: &Operator, scheme: &TauScheme) -> Result<ConeSolution> {
    let mut blocks = vec![ConeBlock::new(vec![Cone::Psd])];
    if let TauScheme::Decomposable(subsets) = scheme {
        let parties = e.dims().len();
        for s in subsets {
            if s.iter().any(|&p| p >= parties) {
                return arg(format!("subset {s:?} out of range for {parties} parties"));
            }
            blocks.push(ConeBlock::new(vec![Cone::Ppt(s.clone())]));
        }
    }
    solve(&ConeProgram::new(e.clone(), blocks)?)
}

/// `min over S in {{}} + subsets of min_eigenvalue(E^{T_S})`, the closed form of the decomposable scheme.
pub fn decomposable_oracle(e: &Operator, subsets: &[Vec<usize>]) -> Result<f64> {
    let mut best = min_eigenvalue(e)?;
    for s in subsets {
        best = best.min(min_eigenvalue(&partial_transpose(e, s)?)?);
    }
    Ok(best)
}

/// Minimizes `tr(W rho)` over states whose partial transposes over every listed subset are PSD.
pub fn min_over_constrained_states(w: &Operator, ppt_subsets: &[Vec<usize>]) -> Result<ConeSolution> {
    let mut cones = vec![Cone::Psd];
    cones.extend(ppt_subsets.iter().cloned().map(Cone::Ppt));
    solve(&ConeProgram::new(w.clone(), vec![ConeBlock::new(cones)])?)
}

/// One representative of every bipartition of `parties` parties (subsets containing party 0 excluded).
pub fn all_bipartitions(parties: usize) -> Vec<Vec<usize>> {
    (1u64..(1u64 << parties))
        .filter(|mask| mask & 1 == 0)
        .map(|mask| (0..parties).filter(|p| mask >> p & 1 == 1).collect())
        .collect()
}

/// Result of the two-qubit distillability test.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistillResult {
    /// `min_eigenvalue(theta^{T_A})`.
    pub value: f64,
    /// The same minimum from the cone program over `tau^{T_A}` PSD.
    pub sdp_value: f64,
    pub sdp_status: SolveStatus,
    pub verdict: bool,
    /// The projected operator on the compressed two-qubit slots.
    pub theta: Operator,
}

/// Orthonormal basis of the range of a projector, as columns.
fn range_isometry(pi: &Operator) -> Result<CMatrix> {
    let (values, vectors) = crate::linalg::eigh(pi)?;
    let cols: Vec<usize> = (0..values.len()).filter(|&i| values[i] > 0.5).collect();
    if cols.is_empty() {
        return arg("local projector has empty range");
    }
    Ok(CMatrix::from_fn(pi.side(), cols.len(), |r, j| vectors[(r, cols[j])]))
}

fn projected_factor(p: &Operator, pi: &Operator, k: usize) -> Result<Operator> {
    let power = kron_power(pi, k)?;
    if p.dims() != power.dims() {
        return arg(format!(
            "projector shape {} does not match {k} copies of {}",
            p.shape(),
            pi.shape()
        ));
    }
    let r = p.compose(&power)?;
    let dev = r.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return arg(format!(
            "projector does not commute with the local projector power (deviation {dev:e})"
        ));
    }
    Ok(r.hermitian_part())
}

/// The operator `theta` on the compressed slots with
/// `tr[(P_A Pi^k) (x) (P_B Pi^k) . rho^{(x) k-1} (x) tau] = tr(theta tau)`.
pub fn distill_theta(
    rho: &Operator,
    k: usize,
    p_a: &Operator,
    p_b: &Operator,
    pi_a: &Operator,
    pi_b: &Operator,
) -> Result<Operator> {
    if rho.dims().len() != 2 {
        return arg("distillability needs a two-party state");
    }
    if k < 2 {
        return arg("need k >= 2 (at least one copy)");
    }
    if pi_a.dims() != [rho.dims()[0]] || pi_b.dims() != [rho.dims()[1]] {
        return arg("local projectors must act on the state's local dimensions");
    }
    let recipe = SwcRecipe::new(vec![projected_factor(p_a, pi_a, k)?, projected_factor(p_b, pi_b, k)?])?;
    let copies = copies_in_recipe_order(rho, k - 1)?;
    let e = effective_tau_operator(&recipe, &copies)?;
    let va = range_isometry(pi_a)?;
    let vb = range_isometry(pi_b)?;
    let v = va.kronecker(&vb);
    let compressed = v.adjoint() * e.matrix() * &v;
    Operator::new(SubsystemShape::new(vec![va.ncols(), vb.ncols()])?, compressed)
}

/// Distillability test with explicit local projectors on each side.
pub fn distill_test_with(
    rho: &Operator,
    k: usize,
    p_a: &Operator,
    p_b: &Operator,
    pi_a: &Operator,
    pi_b: &Operator,
) -> Result<DistillResult> {
    let theta = distill_theta(rho, k, p_a, p_b, pi_a, pi_b)?.hermitian_part();
    let value = min_eigenvalue(&partial_transpose(&theta, &[0])?)?;
    let sdp = solve(&ConeProgram::new(
        theta.clone(),
        vec![ConeBlock::new(vec![Cone::Ppt(vec![0])])],
    )?)?;
    Ok(DistillResult {
        value,
        sdp_value: sdp.value,
        sdp_status: sdp.status,
        verdict: value < VERDICT_TOL,
        theta,
    })
}

/// Distillability test with the same local projector `pi` on both sides.
pub fn distill_test(rho: &Operator, k: usize, p_a: &Operator, p_b: &Operator, pi: &Operator) -> Result<DistillResult> {
    distill_test_with(rho, k, p_a, p_b, pi, pi)
}

/// Two-copy test with the antisymmetric projector on both sides and `Pi = diag(1, 1, 0, ..)`.
pub fn distill_test_default(rho: &Operator) -> Result<DistillResult> {
    let (d_a, d_b) = match rho.dims() {
        [a, b] => (*a, *b),
        _ => return arg("distillability needs a two-party state"),
    };
    let anti = |d: usize| pair_projectors(d).map(|(_, a, _)| a);
    distill_test_with(
        rho,
        2,
        &anti(d_a)?,
        &anti(d_b)?,
        &crate::zoo::diagonal_projector(d_a, 2)?,
        &crate::zoo::diagonal_projector(d_b, 2)?,
    )
}

/// Werner state projected to two qubits, and its fit to the two-qubit Werner form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WernerProjection {
    pub theta: Operator,
    /// `p P_{2,0} / d_s + (1 - p) P_{1,1} / d_a` on two qubits, with `d_s`, `d_a` from dimension `d`.
    pub target: Operator,
    /// Positive factor with `theta = factor * target`.
    pub factor: f64,
    pub residual: f64,
}

pub fn werner_projection(p: f64, d: usize) -> Result<WernerProjection> {
    let rho = crate::zoo::werner(p, d)?;
    let (_, anti, _) = pair_projectors(d)?;
    let pi = crate::zoo::diagonal_projector(d, 2)?;
    let theta = distill_theta(&rho, 2, &anti, &anti, &pi, &pi)?;
    let (sym2, anti2, _) = pair_projectors(2)?;
    let df = d as f64;
    let ds = df * (df + 1.0) / 2.0;
    let da = df * (df - 1.0) / 2.0;
    let target = &sym2.scale(p / ds) + &anti2.scale((1.0 - p) / da);
    let num: C64 = theta.matrix().iter().zip(target.matrix().iter()).map(|(a, b)| a * b.conj()).sum();
    let den: f64 = target.matrix().iter().map(|b| b.norm_sqr()).sum();
    let factor = num.re / den;
    let residual = theta.max_abs_diff(&target.scale(factor));
    if factor <= 0.0 {
        return Err(Error::Contract(format!("projection factor {factor} is not positive")));
    }
    Ok(WernerProjection {
        theta,
        target,
        factor,
        residual,
    })
}

/// Boundary `p0 = (d + 1) / (4 d - 2)` where the Werner projection pairs to zero with the swap.
pub fn werner_boundary(d: usize) -> f64 {
    let df = d as f64;
    (df + 1.0) / (4.0 * df - 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expect, kron};
    use crate::symmetric_group::swap;
    use crate::zoo::{random_density, random_hermitian, seeded_rng};
    use approx::assert_abs_diff_eq;

    #[test]
    fn transpose_index_matches_partial_transpose() {
        let dims = [2, 3];
        let shape = SubsystemShape::new(dims.to_vec()).unwrap();
        for r in 0..6 {
            for c in 0..6 {
                let mut m = CMatrix::zeros(6, 6);
                m[(r, c)] = C64::new(1.0, 0.0);
                let op = Operator::new(shape.clone(), m).unwrap();
                for s in [vec![0], vec![1], vec![0, 1]] {
                    let pt = partial_transpose(&op, &s).unwrap();
                    let (r2, c2) = transpose_index(&dims, &s, r, c);
                    assert_eq!(pt.get(r2, c2).re, 1.0);
                }
            }
        }
    }

    #[test]
    fn state_only_equals_min_eigenvalue() {
        let mut rng = seeded_rng(21);
        for (dims, real) in [(vec![2, 2], true), (vec![2, 2], false), (vec![2, 3], false), (vec![4, 4], true)] {
            let e = random_hermitian(&dims, real, &mut rng).unwrap();
            let sol = optimize_tau(&e, &TauScheme::StateOnly).unwrap();
            assert!(sol.is_optimal(), "{dims:?} {sol:?}");
            assert_abs_diff_eq!(sol.value, min_eigenvalue(&e).unwrap(), epsilon = 1e-7);
            assert_abs_diff_eq!(expect(&e, &sol.optimizer).unwrap().re, sol.value, epsilon = 1e-8);
        }
    }

    #[test]
    fn decomposable_matches_extreme_ray_oracle() {
        let mut rng = seeded_rng(22);
        let subsets = vec![vec![0], vec![1]];
        for dims in [vec![2, 2], vec![3, 3]] {
            for real in [true, false] {
                let e = random_hermitian(&dims, real, &mut rng).unwrap();
                let sol = optimize_tau(&e, &TauScheme::Decomposable(subsets.clone())).unwrap();
                assert!(sol.is_optimal(), "{sol:?}");
                assert_abs_diff_eq!(sol.value, decomposable_oracle(&e, &subsets).unwrap(), epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn ppt_states_against_swap() {
        let sol = min_over_constrained_states(&swap(2).unwrap(), &[vec![1]]).unwrap();
        assert!(sol.is_optimal());
        assert_abs_diff_eq!(sol.value, 0.0, epsilon = 1e-8);
        // without the PPT constraint the singlet reaches -1
        let free = min_over_constrained_states(&swap(2).unwrap(), &[]).unwrap();
        assert_abs_diff_eq!(free.value, -1.0, epsilon = 1e-8);
    }

    #[test]
    fn psd_objective_is_nonnegative_and_constraints_only_raise() {
        let mut rng = seeded_rng(23);
        let w = random_density(&[2, 2], &mut rng).unwrap();
        let sol = min_over_constrained_states(&w, &[vec![0]]).unwrap();
        assert!(sol.value >= -1e-9);
        let e = random_hermitian(&[2, 2, 2], true, &mut rng).unwrap();
        let loose = min_over_constrained_states(&e, &[vec![0]]).unwrap();
        let tight = min_over_constrained_states(&e, &[vec![0], vec![1], vec![2]]).unwrap();
        assert!(tight.value >= loose.value - 1e-8);
    }

    #[test]
    fn program_json_round_trip_and_validation() {
        let program = ConeProgram::new(
            swap(2).unwrap(),
            vec![ConeBlock::new(vec![Cone::Psd, Cone::Ppt(vec![0])])],
        )
        .unwrap();
        let back = ConeProgram::from_json(&program.to_json().unwrap()).unwrap();
        assert_eq!(back.blocks, program.blocks);
        assert!(ConeProgram::new(swap(2).unwrap(), vec![ConeBlock::new(vec![Cone::Ppt(vec![2])])]).is_err());
        assert!(ConeProgram::new(swap(2).unwrap(), vec![]).is_err());
    }

    #[test]
    fn bipartition_counts() {
        assert_eq!(all_bipartitions(4).len(), 7);
        assert_eq!(all_bipartitions(5).len(), 15);
    }

    #[test]
    fn singlet_projection_from_antisymmetric_werner() {
        let rho = crate::zoo::werner(0.0, 3).unwrap();
        let res = distill_test_default(&rho).unwrap();
        assert!(res.verdict);
        assert_abs_diff_eq!(res.value, res.sdp_value, epsilon = 1e-8);
        // theta is proportional to the singlet: PT spectrum {1/2, 1/2, 1/2, -1/2} times a positive scale
        let scale = res.theta.trace().re;
        assert!(scale > 0.0);
        let spectrum = crate::linalg::eigenvalues(&partial_transpose(&res.theta, &[0]).unwrap()).unwrap();
        let expected = [-0.5, 0.5, 0.5, 0.5];
        for (l, e) in spectrum.iter().zip(expected) {
            assert_abs_diff_eq!(*l / scale, e, epsilon = 1e-10);
        }
    }

    #[test]
    fn bell_detected_product_not() {
        assert!(distill_test_default(&crate::zoo::bell(3).unwrap()).unwrap().verdict);
        let mut rng = seeded_rng(24);
        let a = random_density(&[3], &mut rng).unwrap();
        let b = random_density(&[3], &mut rng).unwrap();
        let prod = kron(&[&a, &b]).unwrap();
        let res = distill_test_default(&prod).unwrap();
        assert!(!res.verdict);
        assert!(res.value >= -1e-9);
        assert_abs_diff_eq!(res.value, res.sdp_value, epsilon = 1e-8);
    }

    #[test]
    fn non_commuting_projector_rejected() {
        let rho = crate::zoo::bell(3).unwrap();
        let mut rng = seeded_rng(25);
        let u = crate::zoo::haar_unitary(9, &mut rng);
        let (_, anti, _) = pair_projectors(3).unwrap();
        let rotated = anti.with_matrix(&u * anti.matrix() * u.adjoint());
        let pi = crate::zoo::diagonal_projector(3, 2).unwrap();
        assert!(matches!(distill_test(&rho, 2, &rotated, &anti, &pi), Err(Error::Argument(_))));
    }

    #[test]
    fn werner_projection_fits_and_changes_sign_at_boundary() {
        for d in 3..=5 {
            for p in [0.0, 0.3, 0.7, 1.0] {
                let proj = werner_projection(p, d).unwrap();
                assert!(proj.factor > 0.0);
                assert!(proj.residual <= 1e-10, "d={d} p={p} residual {}", proj.residual);
            }
            let p0 = werner_boundary(d);
            let sw = swap(2).unwrap();
            let at = |p: f64| expect(&sw, &werner_projection(p, d).unwrap().target).unwrap().re;
            assert_abs_diff_eq!(at(p0), 0.0, epsilon = 1e-12);
            assert!(at(p0 - 0.05) < 0.0 && at(p0 + 0.05) > 0.0);
        }
        assert_abs_diff_eq!(werner_boundary(3), 0.4, epsilon = 1e-15);
    }
}
