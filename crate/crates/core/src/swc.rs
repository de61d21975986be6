//! State-witness contraction.
//!
//! A recipe is an ordered list of factors `R_1, .., R_n`, each a state or
//! witness on `k_j` parties. The last party of every factor is a slot; the
//! slots together carry a connector `tau`, and
//!
//! ```text
//! W_tau = tr_slots[(R_1 (x) .. (x) R_n) (1 (x) tau)]
//! ```
//!
//! acts on the remaining `kappa = sum_j (k_j - 1)` parties, ordered factor by
//! factor. If every `R_j` is block-positive on products of its first `k_j - 1`
//! parties and `tau` is block-positive, `W_tau` is non-negative on fully
//! separable states.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::linalg::{
    kron_power, CMatrix, Operator, SubsystemShape, C64, HERMITIAN_TOL, ZERO,
};
use crate::symmetric_group::{
    bilateral_effective, bilateral_moment, swap, GroupAlgebraElement, YoungLabel,
};
use crate::zoo;

/// Largest uncontracted Hilbert-space side the dense path will build.
pub const DENSE_SIDE_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct SwcRecipe {
    factors: Vec<Operator>,
}

impl SwcRecipe {
    pub fn new(factors: Vec<Operator>) -> Result<Self> {
        if factors.is_empty() {
            return arg("a recipe needs at least one factor");
        }
        for (j, f) in factors.iter().enumerate() {
            if f.dims().is_empty() {
                return arg(format!("factor {j} has no parties"));
            }
            let dev = f.hermitian_deviation();
            if dev > HERMITIAN_TOL {
                return Err(Error::Contract(format!(
                    "factor {j} is not Hermitian (deviation {dev:e})"
                )));
            }
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[Operator] {
        &self.factors
    }

    /// Local dimensions of the contracted (last) party of each factor.
    pub fn tau_slot_dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| *f.dims().last().unwrap()).collect()
    }

    /// Local dimensions of the retained parties, factor by factor.
    pub fn retained_dims(&self) -> Vec<usize> {
        self.factors
            .iter()
            .flat_map(|f| f.dims()[..f.dims().len() - 1].iter().copied())
            .collect()
    }

    /// Number of retained parties.
    pub fn kappa(&self) -> usize {
        self.factors.iter().map(|f| f.dims().len() - 1).sum()
    }

    fn uncontracted_side(&self) -> usize {
        self.factors.iter().map(|f| f.side()).product()
    }

    fn check_size(&self) -> Result<()> {
        let side = self.uncontracted_side();
        if side > DENSE_SIDE_LIMIT {
            return Err(Error::Resource(format!(
                "uncontracted side {side} exceeds {DENSE_SIDE_LIMIT}; use evaluate_moment for permutation factors"
            )));
        }
        Ok(())
    }

    fn blocks(&self) -> Vec<FactorBlock<'_>> {
        self.factors
            .iter()
            .map(|f| {
                let t = *f.dims().last().unwrap();
                FactorBlock {
                    mat: f.matrix(),
                    kept: f.side() / t,
                    summed: t,
                    slot_first: false,
                }
            })
            .collect()
    }
}

/// A factor viewed as a map between its retained and slot indices.
struct FactorBlock<'a> {
    mat: &'a CMatrix,
    kept: usize,
    summed: usize,
    /// When set, the kept index is the factor's slot and the summed index its retained parties.
    slot_first: bool,
}

impl FactorBlock<'_> {
    fn entry(&self, i: usize, x: usize, j: usize, y: usize) -> C64 {
        if self.slot_first {
            // kept = slot (t), summed = retained (r)
            self.mat[(x * self.kept + i, y * self.kept + j)]
        } else {
            self.mat[(i * self.summed + x, j * self.summed + y)]
        }
    }
}

/// `out[I, J] = sum_{x, y} seed[y, x] prod_j R_j[(i_j, x_j), (j_j, y_j)]`,
/// contracting one factor at a time.
fn sequential_contract(blocks: &[FactorBlock<'_>], seed: &CMatrix) -> CMatrix {
    // Layout of g: [row_done][col_done][y_rest][x_rest]
    let mut done = 1usize;
    let mut rest: usize = blocks.iter().map(|b| b.summed).product();
    debug_assert_eq!(seed.nrows(), rest);
    let mut g: Vec<C64> = Vec::with_capacity(rest * rest);
    for y in 0..rest {
        for x in 0..rest {
            g.push(seed[(y, x)]);
        }
    }
    for b in blocks {
        let (r, t) = (b.kept, b.summed);
        let next_rest = rest / t;
        let next_done = done * r;
        let mut out = vec![ZERO; next_done * next_done * next_rest * next_rest];
        let mut local = vec![ZERO; t * t];
        for rd in 0..done {
            for cd in 0..done {
                for yr in 0..next_rest {
                    for xr in 0..next_rest {
                        for yj in 0..t {
                            for xj in 0..t {
                                let y = yj * next_rest + yr;
                                let x = xj * next_rest + xr;
                                local[yj * t + xj] = g[((rd * done + cd) * rest + y) * rest + x];
                            }
                        }
                        if local.iter().all(|z| *z == ZERO) {
                            continue;
                        }
                        for i in 0..r {
                            for jj in 0..r {
                                let mut acc = ZERO;
                                for yj in 0..t {
                                    for xj in 0..t {
                                        let s = local[yj * t + xj];
                                        if s != ZERO {
                                            acc += b.entry(i, xj, jj, yj) * s;
                                        }
                                    }
                                }
                                let row = rd * r + i;
                                let col = cd * r + jj;
                                out[((row * next_done + col) * next_rest + yr) * next_rest + xr] = acc;
                            }
                        }
                    }
                }
            }
        }
        g = out;
        done = next_done;
        rest = next_rest;
    }
    CMatrix::from_fn(done, done, |i, j| g[i * done + j])
}

/// `W_tau` on the retained parties.
pub fn contract(recipe: &SwcRecipe, tau: &Operator) -> Result<Operator> {
    let slots = recipe.tau_slot_dims();
    if tau.dims() != slots.as_slice() {
        return arg(format!(
            "tau has shape {} but the recipe slots are {slots:?}",
            tau.shape()
        ));
    }
    recipe.check_size()?;
    let mat = sequential_contract(&recipe.blocks(), tau.matrix());
    Operator::new(SubsystemShape::new(recipe.retained_dims())?, mat)
}

/// The operator `E` on the slots with `tr(W_tau rho) = tr(E tau)` for every `tau`.
pub fn effective_tau_operator(recipe: &SwcRecipe, rho: &Operator) -> Result<Operator> {
    let retained = recipe.retained_dims();
    if rho.dims() != retained.as_slice() {
        return arg(format!(
            "state has shape {} but the recipe retains {retained:?}",
            rho.shape()
        ));
    }
    recipe.check_size()?;
    let blocks: Vec<FactorBlock<'_>> = recipe
        .blocks()
        .into_iter()
        .map(|b| FactorBlock {
            mat: b.mat,
            kept: b.summed,
            summed: b.kept,
            slot_first: true,
        })
        .collect();
    let mat = sequential_contract(&blocks, rho.matrix());
    Operator::new(SubsystemShape::new(recipe.tau_slot_dims())?, mat)
}

/// `k` copies of a two-party state, reordered to `(A_1 .. A_k, B_1 .. B_k)`.
pub fn copies_in_recipe_order(rho: &Operator, copies: usize) -> Result<Operator> {
    if rho.dims().len() != 2 {
        return arg("copies_in_recipe_order expects a two-party state");
    }
    if copies == 0 {
        return arg("need at least one copy");
    }
    let joint = kron_power(rho, copies)?;
    let order: Vec<usize> = (0..copies).map(|c| 2 * c).chain((0..copies).map(|c| 2 * c + 1)).collect();
    joint.permute_parties(&order)
}

/// A pair of group-algebra elements acting on the A copies and the B copies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BilateralFactors {
    pub a: GroupAlgebraElement,
    pub b: GroupAlgebraElement,
}

impl BilateralFactors {
    pub fn new(a: GroupAlgebraElement, b: GroupAlgebraElement) -> Result<Self> {
        if a.degree() != b.degree() {
            return arg("bilateral factors must share their degree");
        }
        if a.degree() < 2 {
            return arg("bilateral factors need degree >= 2");
        }
        Ok(Self { a, b })
    }

    pub fn copies(&self) -> usize {
        self.a.degree()
    }

    /// The dense recipe `(A on A_1..A_k, B on B_1..B_k)`.
    pub fn to_recipe(&self, d_a: usize, d_b: usize) -> Result<SwcRecipe> {
        SwcRecipe::new(vec![self.a.realize(d_a)?, self.b.realize(d_b)?])
    }
}

/// `(1 - 6 P_{1^3})` on the A copies and `P_{1^3}` on the B copies.
pub fn three_copy_witness() -> BilateralFactors {
    let anti = crate::symmetric_group::young_element(YoungLabel::Antisymmetric);
    let a = GroupAlgebraElement::identity(3)
        .add(&anti.scale(-6.0))
        .expect("same degree");
    BilateralFactors::new(a, anti).expect("degree 3")
}

fn check_moment_slots(factors: &BilateralFactors, slots: &[&Operator]) -> Result<()> {
    if slots.len() + 1 != factors.copies() {
        return arg(format!(
            "{} slots given for a {}-copy witness",
            slots.len(),
            factors.copies()
        ));
    }
    Ok(())
}

/// `tr[W (slots (x) tau)]` for a bilateral permutation witness, summing
/// cycle-wise contractions; never builds the `(d_A d_B)^k` operator.
pub fn evaluate_moment(factors: &BilateralFactors, slots: &[&Operator], tau: &Operator) -> Result<f64> {
    check_moment_slots(factors, slots)?;
    let mut all: Vec<&Operator> = slots.to_vec();
    all.push(tau);
    let mut acc = ZERO;
    for (ca, pa) in factors.a.terms() {
        for (cb, pb) in factors.b.terms() {
            acc += bilateral_moment(pa, pb, &all)? * (ca * cb);
        }
    }
    Ok(acc.re)
}

/// Moment-path counterpart of [`effective_tau_operator`] for bilateral witnesses.
pub fn effective_tau_moment(factors: &BilateralFactors, slots: &[&Operator]) -> Result<Operator> {
    check_moment_slots(factors, slots)?;
    let mut acc: Option<Operator> = None;
    for (ca, pa) in factors.a.terms() {
        for (cb, pb) in factors.b.terms() {
            let term = bilateral_effective(pa, pb, slots)?.scale(ca * cb);
            acc = Some(match acc {
                None => term,
                Some(prev) => prev.try_add(&term)?,
            });
        }
    }
    Ok(acc.expect("factors have at least one term"))
}

/// Connector used by [`mppt_lift`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftMode {
    /// Unnormalized maximally entangled connector `d |phi+><phi+|`.
    PhiPlus,
    /// Swap connector `eta_d(12)`.
    Swap,
}

/// Contract the last party of `w` with the last party of `m`.
pub fn mppt_lift(w: &Operator, m: &Operator, mode: LiftMode) -> Result<Operator> {
    let d = *w.dims().last().ok_or_else(|| Error::Argument("empty witness".into()))?;
    if m.dims().last() != Some(&d) {
        return arg(format!(
            "witness slot dimension {d} does not match {}",
            m.shape()
        ));
    }
    let tau = match mode {
        LiftMode::PhiPlus => zoo::max_ent_unnormalized(d)?,
        LiftMode::Swap => swap(d)?,
    };
    contract(&SwcRecipe::new(vec![w.clone(), m.clone()])?, &tau)
}

/// Six-party contraction of two four-party witnesses through a two-party `tau`.
pub fn bisep_swc(w: &Operator, v: &Operator, tau: &Operator) -> Result<Operator> {
    if w.dims().len() != 4 || v.dims().len() != 4 {
        return arg("bisep_swc needs two four-party operators");
    }
    contract(&SwcRecipe::new(vec![w.clone(), v.clone()])?, tau)
}

/// `(Lambda^dag (x) id)(SWAP_d)` from the Choi matrix `sum_ij |i><j| (x) Lambda(|i><j|)`.
pub fn map_lifted_factor(choi: &Operator, d: usize) -> Result<Operator> {
    if choi.dims() != [d, d] {
        return arg(format!("Choi matrix shape {} is not [{d}, {d}]", choi.shape()));
    }
    let c = choi.matrix();
    // out[(j, b), (i, a)] = C[(i, b), (j, a)]
    Ok(Operator::from_fn(choi.shape().clone(), |row, col| {
        let (j, b) = (row / d, row % d);
        let (i, a) = (col / d, col % d);
        c[(i * d + b, j * d + a)]
    }))
}

/// Choi matrix `sum_ij |i><j| (x) Lambda(|i><j|)` of a linear map on `d x d` matrices.
pub fn choi_matrix(d: usize, map: impl Fn(&CMatrix) -> CMatrix) -> Result<Operator> {
    let mut out = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let mut unit = CMatrix::zeros(d, d);
            unit[(i, j)] = C64::new(1.0, 0.0);
            let image = map(&unit);
            for p in 0..d {
                for q in 0..d {
                    out[(i * d + p, j * d + q)] = image[(p, q)];
                }
            }
        }
    }
    Operator::new(SubsystemShape::new(vec![d, d])?, out)
}

/// Recipe `(SWAP on A_1 A_2, B-factor on B_1 B_2)`; with the unnormalized
/// maximally entangled B-factor its effective operator is `rho^{T_B}`.
pub fn npt_recipe(d: usize) -> Result<SwcRecipe> {
    SwcRecipe::new(vec![swap(d)?, zoo::max_ent_unnormalized(d)?])
}

/// Recipe `(SWAP, (Lambda^dag (x) id)(SWAP))` detecting states with `(Lambda (x) id)(rho)` not PSD.
pub fn positive_map_recipe(choi: &Operator, d: usize) -> Result<SwcRecipe> {
    SwcRecipe::new(vec![swap(d)?, map_lifted_factor(choi, d)?])
}

/// Recipe of the locally-bound construction: `W_3 = P_{2,1}/4 - P_{1^3}` on A, `P_{1^3}` on B.
pub fn locally_bound_recipe(d: usize) -> Result<SwcRecipe> {
    let anti = crate::symmetric_group::young_projector(YoungLabel::Antisymmetric, d)?;
    SwcRecipe::new(vec![zoo::deco_witness3(d)?, anti])
}

/// One factor of a recipe file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorRef {
    /// A named operator, e.g. `"deco_witness3:d=3"`.
    Zoo(String),
    /// An operator file in the JSON operator format, relative to the recipe file.
    File(PathBuf),
    Inline(Operator),
}

impl FactorRef {
    pub fn resolve(&self, base: &Path) -> Result<Operator> {
        match self {
            FactorRef::Zoo(name) => zoo::named_operator(name),
            FactorRef::File(path) => Operator::load(&base.join(path)),
            FactorRef::Inline(op) => Ok(op.clone()),
        }
    }
}

/// Recipe file: factors, an optional connector, and the evaluation path.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecipeFile {
    pub factors: Vec<FactorRef>,
    #[serde(default)]
    pub tau: Option<FactorRef>,
    #[serde(default)]
    pub moment: bool,
}

impl RecipeFile {
    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path)?;
        let file: RecipeFile = serde_json::from_str(&text)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((file, base))
    }

    pub fn recipe(&self, base: &Path) -> Result<SwcRecipe> {
        SwcRecipe::new(
            self.factors
                .iter()
                .map(|f| f.resolve(base))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn tau(&self, base: &Path) -> Result<Option<Operator>> {
        self.tau.as_ref().map(|t| t.resolve(base)).transpose()
    }
}
