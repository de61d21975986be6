//! Dense operators on multi-party Hilbert spaces.
//!
//! Every operator carries the list of local dimensions of its tensor factors.
//! Indices are big-endian: party 0 is the slowest-varying digit of a basis
//! index, so the basis ket `|i_0 i_1 ... i_{m-1}>` sits at
//! `sum_p i_p * prod_{q>p} d_q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Default tolerance for positive-semidefiniteness checks.
pub const PSD_TOL: f64 = 1e-9;
/// Tolerance on `|A - A^dag|` accepted by spectral routines.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Deviation below which a constructed operator is flagged Hermitian.
pub const HERMITIAN_HINT_TOL: f64 = 1e-12;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Local dimensions of the tensor factors of a Hilbert space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SubsystemShape(Vec<usize>);

impl SubsystemShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.contains(&0) {
            return arg(format!("subsystem dimensions must be positive, got {dims:?}"));
        }
        Ok(Self(dims))
    }

    /// `parties` copies of the local dimension `d`.
    pub fn uniform(d: usize, parties: usize) -> Result<Self> {
        Self::new(vec![d; parties])
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn parties(&self) -> usize {
        self.0.len()
    }

    /// Matrix side length, the product of the local dimensions.
    pub fn side(&self) -> usize {
        self.0.iter().product()
    }

    pub fn concat(&self, other: &SubsystemShape) -> SubsystemShape {
        let mut dims = self.0.clone();
        dims.extend_from_slice(&other.0);
        SubsystemShape(dims)
    }

    /// Shape restricted to the listed parties, in the given order.
    pub fn select(&self, parties: &[usize]) -> SubsystemShape {
        SubsystemShape(parties.iter().map(|&p| self.0[p]).collect())
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.0.len()];
        for p in (0..self.0.len().saturating_sub(1)).rev() {
            strides[p] = strides[p + 1] * self.0[p + 1];
        }
        strides
    }

    /// Linear offsets of all basis states of `parties`, enumerated big-endian
    /// over those parties, embedded in the full index space.
    pub(crate) fn offsets(&self, parties: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut out = vec![0usize];
        for &p in parties {
            let mut next = Vec::with_capacity(out.len() * self.0[p]);
            for &base in &out {
                for digit in 0..self.0[p] {
                    next.push(base + digit * strides[p]);
                }
            }
            out = next;
        }
        out
    }

    pub(crate) fn check_subset(&self, subset: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.0.len()];
        for &p in subset {
            if p >= self.0.len() {
                return arg(format!(
                    "subsystem index {p} out of range for {} parties",
                    self.0.len()
                ));
            }
            if seen[p] {
                return arg(format!("subsystem index {p} repeated"));
            }
            seen[p] = true;
        }
        Ok(())
    }

    fn complement(&self, subset: &[usize]) -> Vec<usize> {
        (0..self.0.len()).filter(|p| !subset.contains(p)).collect()
    }
}

impl TryFrom<Vec<usize>> for SubsystemShape {
    type Error = Error;
    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<SubsystemShape> for Vec<usize> {
    fn from(shape: SubsystemShape) -> Self {
        shape.0
    }
}

impl fmt::Display for SubsystemShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A dense complex square matrix annotated with its tensor factorization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorJson", into = "OperatorJson")]
pub struct Operator {
    shape: SubsystemShape,
    mat: CMatrix,
    hermitian: bool,
}

impl Operator {
    pub fn new(shape: SubsystemShape, mat: CMatrix) -> Result<Self> {
        let side = shape.side();
        if mat.nrows() != side || mat.ncols() != side {
            return arg(format!(
                "matrix is {}x{} but shape {shape} needs side {side}",
                mat.nrows(),
                mat.ncols()
            ));
        }
        let hermitian = hermitian_deviation(&mat) <= HERMITIAN_HINT_TOL;
        Ok(Self {
            shape,
            mat,
            hermitian,
        })
    }

    pub fn from_fn(shape: SubsystemShape, f: impl FnMut(usize, usize) -> C64) -> Self {
        let side = shape.side();
        let mat = CMatrix::from_fn(side, side, f);
        Self::new(shape, mat).expect("side matches by construction")
    }

    pub fn from_real_fn(shape: SubsystemShape, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_fn(shape, |i, j| C64::new(f(i, j), 0.0))
    }

    pub fn identity(shape: SubsystemShape) -> Self {
        let side = shape.side();
        Self::new(shape, CMatrix::identity(side, side)).expect("identity has the right side")
    }

    pub fn zeros(shape: SubsystemShape) -> Self {
        let side = shape.side();
        Self::new(shape, CMatrix::zeros(side, side)).expect("zero matrix has the right side")
    }

    /// Rank-one operator `|v><v|`.
    pub fn projector(shape: SubsystemShape, ket: &[C64]) -> Result<Self> {
        if ket.len() != shape.side() {
            return arg(format!(
                "ket of length {} does not match shape {shape}",
                ket.len()
            ));
        }
        Ok(Self::from_fn(shape, |i, j| ket[i] * ket[j].conj()))
    }

    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn dims(&self) -> &[usize] {
        self.shape.dims()
    }

    pub fn side(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    /// True when the entries were Hermitian to within 1e-12 at construction.
    pub fn hermitian_hint(&self) -> bool {
        self.hermitian
    }

    pub fn hermitian_deviation(&self) -> f64 {
        hermitian_deviation(&self.mat)
    }

    /// Largest absolute imaginary part of any entry.
    pub fn max_imag(&self) -> f64 {
        self.mat.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn dagger(&self) -> Self {
        self.with_matrix(self.mat.adjoint())
    }

    pub fn transpose(&self) -> Self {
        self.with_matrix(self.mat.transpose())
    }

    pub fn conj(&self) -> Self {
        self.with_matrix(self.mat.map(|z| z.conj()))
    }

    /// `(A + A^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        self.with_matrix((&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        self.with_matrix(&self.mat * C64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        self.with_matrix(&self.mat * s)
    }

    /// Same shape, new entries.
    pub fn with_matrix(&self, mat: CMatrix) -> Self {
        Self::new(self.shape.clone(), mat).expect("shape preserved")
    }

    /// Relabel the tensor factors without touching the entries; the side must match.
    pub fn reshaped(&self, shape: SubsystemShape) -> Result<Self> {
        Self::new(shape, self.mat.clone())
    }

    /// Operator product; both factors must share the same shape.
    pub fn compose(&self, other: &Operator) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(self.with_matrix(&self.mat * &other.mat))
    }

    pub fn try_add(&self, other: &Operator) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(self.with_matrix(&self.mat + &other.mat))
    }

    pub fn try_sub(&self, other: &Operator) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(self.with_matrix(&self.mat - &other.mat))
    }

    /// Maximum entrywise distance to another operator of the same side.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.side(), other.side(), "sides differ");
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Reorder the tensor factors: party `p` of the result is party `order[p]` of `self`.
    pub fn permute_parties(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.shape.parties() {
            return arg(format!(
                "party order {order:?} does not cover {} parties",
                self.shape.parties()
            ));
        }
        self.shape.check_subset(order)?;
        let new_shape = self.shape.select(order);
        let map = self.shape.offsets(order);
        let mat = CMatrix::from_fn(map.len(), map.len(), |a, b| self.mat[(map[a], map[b])]);
        Operator::new(new_shape, mat)
    }

    fn require_same_shape(&self, other: &Operator) -> Result<()> {
        if self.shape != other.shape {
            return arg(format!(
                "shape mismatch: {} vs {}",
                self.shape, other.shape
            ));
        }
        Ok(())
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.try_add(rhs).expect("operator shapes must match")
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.try_sub(rhs).expect("operator shapes must match")
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.compose(rhs).expect("operator shapes must match")
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self.scale(rhs)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(-1.0)
    }
}

fn hermitian_deviation(mat: &CMatrix) -> f64 {
    let n = mat.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Tensor product in list order.
pub fn kron(factors: &[&Operator]) -> Result<Operator> {
    let (first, rest) = match factors.split_first() {
        Some(split) => split,
        None => return arg("kron of an empty list"),
    };
    let mut shape = first.shape.clone();
    let mut mat = first.mat.clone();
    for f in rest {
        shape = shape.concat(&f.shape);
        mat = mat.kronecker(&f.mat);
    }
    Operator::new(shape, mat)
}

/// `op^{otimes n}`.
pub fn kron_power(op: &Operator, n: usize) -> Result<Operator> {
    kron(&vec![op; n])
}

/// Whether a partial-trace subset lists the parties to keep or to drop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceMode {
    Keep,
    Drop,
}

/// Partial trace. With [`TraceMode::Keep`] the retained parties appear in
/// their original relative order.
pub fn partial_trace(op: &Operator, subset: &[usize], mode: TraceMode) -> Result<Operator> {
    op.shape.check_subset(subset)?;
    let (keep, drop) = match mode {
        TraceMode::Keep => {
            let mut keep = subset.to_vec();
            keep.sort_unstable();
            (keep.clone(), op.shape.complement(&keep))
        }
        TraceMode::Drop => (op.shape.complement(subset), subset.to_vec()),
    };
    let keep_off = op.shape.offsets(&keep);
    let drop_off = op.shape.offsets(&drop);
    let mat = CMatrix::from_fn(keep_off.len(), keep_off.len(), |i, j| {
        drop_off
            .iter()
            .map(|&t| op.mat[(keep_off[i] + t, keep_off[j] + t)])
            .sum()
    });
    Operator::new(op.shape.select(&keep), mat)
}

/// Transpose of the tensor factors listed in `subset`.
pub fn partial_transpose(op: &Operator, subset: &[usize]) -> Result<Operator> {
    op.shape.check_subset(subset)?;
    if subset.is_empty() {
        return Ok(op.clone());
    }
    let rest = op.shape.complement(subset);
    let s_off = op.shape.offsets(subset);
    let n_off = op.shape.offsets(&rest);
    let side = op.side();
    let mut mat = CMatrix::zeros(side, side);
    for &si in &s_off {
        for &sj in &s_off {
            for &ni in &n_off {
                for &nj in &n_off {
                    mat[(si + ni, sj + nj)] = op.mat[(sj + ni, si + nj)];
                }
            }
        }
    }
    Operator::new(op.shape.clone(), mat)
}

fn require_hermitian(op: &Operator) -> Result<()> {
    let dev = op.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::Contract(format!(
            "operator is not Hermitian (deviation {dev:e})"
        )));
    }
    Ok(())
}

/// Ascending eigenvalues of the Hermitian part; errors if `op` is not Hermitian within 1e-10.
pub fn eigenvalues(op: &Operator) -> Result<Vec<f64>> {
    require_hermitian(op)?;
    Ok(hermitian_eigenvalues(&op.hermitian_part().mat))
}

pub(crate) fn hermitian_eigenvalues(mat: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = if mat.iter().all(|z| z.im == 0.0) {
        mat.map(|z| z.re).symmetric_eigenvalues().iter().copied().collect()
    } else {
        mat.clone().symmetric_eigenvalues().iter().copied().collect()
    };
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn min_eigenvalue(op: &Operator) -> Result<f64> {
    Ok(eigenvalues(op)?[0])
}

pub fn is_psd(op: &Operator, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(op)? >= -tol)
}

/// Hermitian eigendecomposition: ascending eigenvalues and matching column eigenvectors.
pub fn eigh(op: &Operator) -> Result<(Vec<f64>, CMatrix)> {
    require_hermitian(op)?;
    let eig = op.hermitian_part().mat.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(op.side(), op.side(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// `tr(A rho)`.
pub fn expect(a: &Operator, rho: &Operator) -> Result<C64> {
    if a.side() != rho.side() || a.dims() != rho.dims() {
        return arg(format!(
            "expectation shape mismatch: {} vs {}",
            a.shape, rho.shape
        ));
    }
    Ok(trace_product(&a.mat, &rho.mat))
}

/// `tr(A B)` without forming the product.
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Wire format: `{"dims": [...], "re": [[...]], "im": [[...]]}`, row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl TryFrom<OperatorJson> for Operator {
    type Error = Error;

    fn try_from(json: OperatorJson) -> Result<Self> {
        let shape = SubsystemShape::new(json.dims)?;
        let side = shape.side();
        let rows_ok = |rows: &Vec<Vec<f64>>| rows.len() == side && rows.iter().all(|r| r.len() == side);
        if !rows_ok(&json.re) || !rows_ok(&json.im) {
            return arg(format!(
                "operator file entries must be {side}x{side} for dims {shape}"
            ));
        }
        Ok(Operator::from_fn(shape, |i, j| {
            C64::new(json.re[i][j], json.im[i][j])
        }))
    }
}

impl From<Operator> for OperatorJson {
    fn from(op: Operator) -> Self {
        let side = op.side();
        let rows = |f: fn(&C64) -> f64| {
            (0..side)
                .map(|i| (0..side).map(|j| f(&op.mat[(i, j)])).collect())
                .collect()
        };
        OperatorJson {
            dims: op.dims().to_vec(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}

impl Operator {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}
