//! Permutation operators on `(C^d)^{otimes k}` and the group-algebra elements
//! built from them: Young projectors for three parties, the two-party
//! symmetrizer and antisymmetrizer, and bilateral permutation moments.

mod moment;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::linalg::{CMatrix, Operator, SubsystemShape, ONE};

pub use moment::{bilateral_effective, bilateral_moment};

/// A permutation of `{0, .., k-1}` stored in one-line form: `images[i] = pi(i)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return arg(format!("{images:?} is not a bijection"));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            images: (0..k).collect(),
        }
    }

    /// Transposition of the zero-based points `a` and `b`.
    pub fn transposition(k: usize, a: usize, b: usize) -> Result<Self> {
        if a >= k || b >= k {
            return arg(format!("transposition ({a} {b}) outside degree {k}"));
        }
        let mut images: Vec<usize> = (0..k).collect();
        images.swap(a, b);
        Ok(Self { images })
    }

    /// Parse cycle notation with one-based points: `"(123)(45)"`, `"(1,2,10)"`, `"(id)"`.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "(id)" || compact == "id" || compact == "()" {
            return Ok(Self { images });
        }
        let mut rest = compact.as_str();
        let mut used = vec![false; degree];
        while !rest.is_empty() {
            let body_end = match (rest.strip_prefix('('), rest.find(')')) {
                (Some(_), Some(end)) => end,
                _ => return arg(format!("malformed cycle notation {text:?}")),
            };
            let body = &rest[1..body_end];
            let points: Vec<usize> = if body.contains(',') {
                body.split(',')
                    .map(|p| p.parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::Argument(format!("bad cycle {body:?}: {e}")))?
            } else {
                body.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|v| v as usize)
                            .ok_or_else(|| Error::Argument(format!("bad cycle point {c:?} in {text:?}")))
                    })
                    .collect::<Result<_>>()?
            };
            for (idx, &p) in points.iter().enumerate() {
                if p == 0 || p > degree {
                    return arg(format!("cycle point {p} outside 1..={degree}"));
                }
                if used[p - 1] {
                    return arg(format!("point {p} appears twice in {text:?}"));
                }
                used[p - 1] = true;
                let next = points[(idx + 1) % points.len()];
                images[p - 1] = next - 1;
            }
            rest = &rest[body_end + 1..];
        }
        Self::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `(self o other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return arg("composing permutations of different degree");
        }
        Ok(Self {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &p) in self.images.iter().enumerate() {
            images[p] = i;
        }
        Self { images }
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j);
                j = self.images[j];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn sign(&self) -> f64 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// All permutations of degree `k` in lexicographic one-line order.
    pub fn all(k: usize) -> Vec<Permutation> {
        fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation {
                    images: prefix.clone(),
                });
                return;
            }
            for x in 0..used.len() {
                if !used[x] {
                    used[x] = true;
                    prefix.push(x);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[x] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; k], &mut out);
        out
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(images: Vec<usize>) -> Result<Self> {
        Self::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nontrivial: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if nontrivial.is_empty() {
            return write!(f, "(id)");
        }
        let sep = if self.degree() > 9 { "," } else { "" };
        for cycle in nontrivial {
            let pts: Vec<String> = cycle.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(sep))?;
        }
        Ok(())
    }
}

/// `eta_d(pi)`: moves the tensor factor at position `i` to position `pi(i)`,
/// i.e. `eta(pi)|v_1..v_k> = |v_{pi^-1(1)} .. v_{pi^-1(k)}>`.
pub fn perm_operator(pi: &Permutation, d: usize) -> Result<Operator> {
    if d == 0 {
        return arg("local dimension must be positive");
    }
    let k = pi.degree();
    let shape = SubsystemShape::uniform(d, k)?;
    let side = shape.side();
    let mut mat = CMatrix::zeros(side, side);
    let mut digits = vec![0usize; k];
    let mut out = vec![0usize; k];
    for col in 0..side {
        let mut c = col;
        for p in (0..k).rev() {
            digits[p] = c % d;
            c /= d;
        }
        for i in 0..k {
            out[pi.apply(i)] = digits[i];
        }
        let row = out.iter().fold(0, |acc, &x| acc * d + x);
        mat[(row, col)] = ONE;
    }
    Operator::new(shape, mat)
}

/// Real linear combination of permutations of a fixed degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupAlgebraElement {
    degree: usize,
    terms: Vec<(f64, Permutation)>,
}

impl GroupAlgebraElement {
    pub fn new(degree: usize, terms: Vec<(f64, Permutation)>) -> Result<Self> {
        if let Some((_, p)) = terms.iter().find(|(_, p)| p.degree() != degree) {
            return arg(format!("permutation {p} is not of degree {degree}"));
        }
        Ok(Self { degree, terms }.simplified())
    }

    pub fn identity(degree: usize) -> Self {
        Self {
            degree,
            terms: vec![(1.0, Permutation::identity(degree))],
        }
    }

    /// `(1/k!) sum_pi sgn(pi) pi`.
    pub fn antisymmetrizer(degree: usize) -> Self {
        let perms = Permutation::all(degree);
        let norm = perms.len() as f64;
        Self {
            degree,
            terms: perms.into_iter().map(|p| (p.sign() / norm, p)).collect(),
        }
    }

    /// `(1/k!) sum_pi pi`.
    pub fn symmetrizer(degree: usize) -> Self {
        let perms = Permutation::all(degree);
        let norm = perms.len() as f64;
        Self {
            degree,
            terms: perms.into_iter().map(|p| (1.0 / norm, p)).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[(f64, Permutation)] {
        &self.terms
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(c, p)| (c * s, p.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return arg("adding group-algebra elements of different degree");
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self {
            degree: self.degree,
            terms,
        }
        .simplified())
    }

    /// Convolution product, matching `realize(a) * realize(b)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return arg("multiplying group-algebra elements of different degree");
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                terms.push((a * b, p.compose(q)?));
            }
        }
        Ok(Self {
            degree: self.degree,
            terms,
        }
        .simplified())
    }

    /// `sum_pi c_pi eta_d(pi)` as a dense operator.
    pub fn realize(&self, d: usize) -> Result<Operator> {
        let shape = SubsystemShape::uniform(d, self.degree)?;
        let side = shape.side();
        let mut mat = CMatrix::zeros(side, side);
        for (c, p) in &self.terms {
            let eta = perm_operator(p, d)?;
            mat += eta.matrix() * crate::linalg::C64::new(*c, 0.0);
        }
        Operator::new(shape, mat)
    }

    fn simplified(self) -> Self {
        let mut merged: BTreeMap<Permutation, f64> = BTreeMap::new();
        for (c, p) in self.terms {
            *merged.entry(p).or_insert(0.0) += c;
        }
        Self {
            degree: self.degree,
            terms: merged
                .into_iter()
                .filter(|(_, c)| *c != 0.0)
                .map(|(p, c)| (c, p))
                .collect(),
        }
    }
}

/// Labels of the three-party Young projectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum YoungLabel {
    /// Partition (3): symmetric.
    Symmetric,
    /// Partition (2,1): standard.
    Standard,
    /// Partition (1,1,1): antisymmetric.
    Antisymmetric,
}

impl FromStr for YoungLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "3" | "(3)" | "3,0,0" => Ok(Self::Symmetric),
            "21" | "2,1" | "(2,1)" | "2,1,0" => Ok(Self::Standard),
            "111" | "1,1,1" | "1^3" | "(1,1,1)" => Ok(Self::Antisymmetric),
            other => arg(format!("unknown Young label {other:?}")),
        }
    }
}

/// Group-algebra element of the three-party Young projector `label`.
///
/// The standard element `(2 id - (123) - (132)) / 6` is kept with this
/// normalization, so it squares to half of itself.
pub fn young_element(label: YoungLabel) -> GroupAlgebraElement {
    let k = 3;
    let c3 = Permutation::parse_cycles("(123)", k).expect("valid cycle");
    let c3i = Permutation::parse_cycles("(132)", k).expect("valid cycle");
    match label {
        YoungLabel::Symmetric => GroupAlgebraElement::symmetrizer(k),
        YoungLabel::Antisymmetric => GroupAlgebraElement::antisymmetrizer(k),
        YoungLabel::Standard => GroupAlgebraElement::new(
            k,
            vec![
                (2.0 / 6.0, Permutation::identity(k)),
                (-1.0 / 6.0, c3),
                (-1.0 / 6.0, c3i),
            ],
        )
        .expect("degree 3 terms"),
    }
}

pub fn young_projector(label: YoungLabel, d: usize) -> Result<Operator> {
    young_element(label).realize(d)
}

/// Two-party symmetrizer `P_{2,0}`, antisymmetrizer `P_{1,1}` and the swap.
pub fn pair_projectors(d: usize) -> Result<(Operator, Operator, Operator)> {
    if d < 2 {
        return arg("pair projectors need d >= 2");
    }
    let sym = GroupAlgebraElement::symmetrizer(2).realize(d)?;
    let anti = GroupAlgebraElement::antisymmetrizer(2).realize(d)?;
    let swap = perm_operator(&Permutation::transposition(2, 0, 1)?, d)?;
    Ok((sym, anti, swap))
}

/// `eta_d(12)` on two parties.
pub fn swap(d: usize) -> Result<Operator> {
    perm_operator(&Permutation::transposition(2, 0, 1)?, d)
}

/// Sum of the coefficients weighted by `d^{cycles}`: the trace of the realized element.
pub fn element_trace(elem: &GroupAlgebraElement, d: usize) -> f64 {
    elem.terms()
        .iter()
        .map(|(c, p)| c * (d as f64).powi(p.cycle_count() as i32))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigenvalues, kron_power, C64, ZERO};
    use approx::assert_abs_diff_eq;

    fn basis_ket(d: usize, digits: &[usize]) -> Vec<C64> {
        let idx = digits.iter().fold(0, |acc, &x| acc * d + x);
        let mut v = vec![ZERO; d.pow(digits.len() as u32)];
        v[idx] = ONE;
        v
    }

    fn apply(op: &Operator, v: &[C64]) -> Vec<C64> {
        (0..op.side())
            .map(|i| (0..op.side()).map(|j| op.get(i, j) * v[j]).sum())
            .collect()
    }

    #[test]
    fn cycle_notation_round_trip() {
        let p = Permutation::parse_cycles("(123)(45)", 5).unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 4, 3]);
        assert_eq!(p.to_string(), "(123)(45)");
        assert_eq!(Permutation::parse_cycles("(id)", 3).unwrap(), Permutation::identity(3));
        assert_eq!(Permutation::parse_cycles("(1,2)", 2).unwrap().to_string(), "(12)");
        assert!(Permutation::parse_cycles("(14)", 3).is_err());
        assert!(Permutation::parse_cycles("(121)", 3).is_err());
        assert!(Permutation::parse_cycles("12", 3).is_err());
    }

    #[test]
    fn swap_moves_basis_kets() {
        let eta = perm_operator(&Permutation::parse_cycles("(12)", 2).unwrap(), 2).unwrap();
        assert_eq!(apply(&eta, &basis_ket(2, &[0, 1])), basis_ket(2, &[1, 0]));
    }

    #[test]
    fn three_cycle_shifts_factors() {
        let eta = perm_operator(&Permutation::parse_cycles("(123)", 3).unwrap(), 3).unwrap();
        for v in Permutation::all(3) {
            let digits = v.images();
            let image = apply(&eta, &basis_ket(3, digits));
            assert_eq!(image, basis_ket(3, &[digits[2], digits[0], digits[1]]));
        }
    }

    #[test]
    fn trace_counts_cycles() {
        let c = Permutation::parse_cycles("(123)", 3).unwrap();
        assert_abs_diff_eq!(perm_operator(&c, 3).unwrap().trace().re, 3.0);
        for p in Permutation::all(3) {
            let tr = perm_operator(&p, 2).unwrap().trace().re;
            assert_abs_diff_eq!(tr, 2f64.powi(p.cycle_count() as i32));
        }
    }

    #[test]
    fn representation_is_homomorphism() {
        for k in [3, 4] {
            let perms = Permutation::all(k);
            for (i, p) in perms.iter().enumerate().step_by(5) {
                for q in perms.iter().skip(i % 3).step_by(7) {
                    let lhs = &perm_operator(p, 2).unwrap() * &perm_operator(q, 2).unwrap();
                    let rhs = perm_operator(&p.compose(q).unwrap(), 2).unwrap();
                    assert!(lhs.max_abs_diff(&rhs) < 1e-14);
                    let dag = perm_operator(p, 2).unwrap().dagger();
                    assert!(dag.max_abs_diff(&perm_operator(&p.inverse(), 2).unwrap()) < 1e-14);
                }
            }
        }
    }

    #[test]
    fn young_projectors_resolve_identity() {
        for d in 2..=4 {
            let p3 = young_projector(YoungLabel::Symmetric, d).unwrap();
            let p21 = young_projector(YoungLabel::Standard, d).unwrap();
            let p111 = young_projector(YoungLabel::Antisymmetric, d).unwrap();
            let sum = &(&p3 + &p21.scale(2.0)) + &p111;
            assert!(sum.max_abs_diff(&Operator::identity(sum.shape().clone())) < 1e-14);
            assert!((&p3 * &p3).max_abs_diff(&p3) < 1e-14);
            assert!((&p111 * &p111).max_abs_diff(&p111) < 1e-14);
            assert!((&p21 * &p21).max_abs_diff(&p21.scale(0.5)) < 1e-14);
            let df = d as f64;
            assert_abs_diff_eq!(p21.trace().re, df * (df * df - 1.0) / 3.0, epsilon = 1e-12);
            let binom = df * (df - 1.0) * (df - 2.0) / 6.0;
            assert_abs_diff_eq!(p111.trace().re, binom, epsilon = 1e-12);
        }
    }

    #[test]
    fn antisymmetrizer_rank() {
        for (d, rank) in [(3, 1), (4, 4)] {
            let ev = eigenvalues(&young_projector(YoungLabel::Antisymmetric, d).unwrap()).unwrap();
            assert_eq!(ev.iter().filter(|&&x| x > 0.5).count(), rank);
            assert_abs_diff_eq!(ev[0], 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn unknown_young_label() {
        assert!("42".parse::<YoungLabel>().is_err());
        assert_eq!("1^3".parse::<YoungLabel>().unwrap(), YoungLabel::Antisymmetric);
    }

    #[test]
    fn pair_projector_traces() {
        for d in 2..=6 {
            let (sym, anti, swap) = pair_projectors(d).unwrap();
            let df = d as f64;
            assert_abs_diff_eq!(sym.trace().re, df * (df + 1.0) / 2.0);
            assert_abs_diff_eq!(anti.trace().re, df * (df - 1.0) / 2.0);
            let id = Operator::identity(swap.shape().clone());
            assert!((&swap * &swap).max_abs_diff(&id) < 1e-15);
            assert!((&sym + &anti).max_abs_diff(&id) < 1e-15);
            assert!((&anti * &anti).max_abs_diff(&anti) < 1e-15);
        }
        assert!(pair_projectors(1).is_err());
    }

    #[test]
    fn young_projectors_commute_with_local_projector_power() {
        let d = 3;
        let pi = Operator::from_real_fn(SubsystemShape::uniform(d, 1).unwrap(), |i, j| {
            if i == j && i < 2 {
                1.0
            } else {
                0.0
            }
        });
        let pik = kron_power(&pi, 3).unwrap();
        for label in [YoungLabel::Symmetric, YoungLabel::Standard, YoungLabel::Antisymmetric] {
            let p = young_projector(label, d).unwrap();
            assert!((&p * &pik).max_abs_diff(&(&pik * &p)) < 1e-14);
        }
    }

    #[test]
    fn element_product_matches_operator_product() {
        let a = young_element(YoungLabel::Standard);
        let b = GroupAlgebraElement::antisymmetrizer(3).add(&GroupAlgebraElement::identity(3)).unwrap();
        let lhs = a.mul(&b).unwrap().realize(2).unwrap();
        let rhs = &a.realize(2).unwrap() * &b.realize(2).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        assert_abs_diff_eq!(element_trace(&a, 3), a.realize(3).unwrap().trace().re, epsilon = 1e-12);
    }
}
