//! Bilateral permutation moments `tr[(eta(pi)_A (x) eta(sigma)_B)(X_1 (x) .. (x) X_k)]`
//! evaluated as a tensor network over the slots, never forming the
//! `(d_A d_B)^k`-dimensional operator.
//!
//! Each two-party slot `X_i` is a four-leg tensor `(row_A, row_B, col_A, col_B)`.
//! The permutation pair wires the legs together: the A-row of slot `i` is the
//! same index as the A-column of slot `pi(i)`, and likewise for B with `sigma`.
//! Slots are merged left to right; shared wires are summed at each merge.

use crate::error::{arg, Result};
use crate::linalg::{CMatrix, Operator, SubsystemShape, C64, ZERO};

use super::Permutation;

#[derive(Clone, Debug)]
struct Tensor {
    labels: Vec<usize>,
    dims: Vec<usize>,
    data: Vec<C64>,
}

impl Tensor {
    fn scalar(value: C64) -> Self {
        Self {
            labels: Vec::new(),
            dims: Vec::new(),
            data: vec![value],
        }
    }

    fn strides(dims: &[usize]) -> Vec<usize> {
        let mut s = vec![1; dims.len()];
        for p in (0..dims.len().saturating_sub(1)).rev() {
            s[p] = s[p + 1] * dims[p + 1];
        }
        s
    }

    /// Offsets (in this tensor's layout) of every joint value of `legs`, big-endian.
    fn offsets(dims: &[usize], strides: &[usize], legs: &[usize]) -> Vec<usize> {
        let mut out = vec![0usize];
        for &l in legs {
            let mut next = Vec::with_capacity(out.len() * dims[l]);
            for &base in &out {
                for v in 0..dims[l] {
                    next.push(base + v * strides[l]);
                }
            }
            out = next;
        }
        out
    }

    /// Sum over the diagonal of every label that occurs twice.
    fn trace_repeated(self) -> Self {
        let mut pairs = Vec::new();
        let mut free = Vec::new();
        for (i, l) in self.labels.iter().enumerate() {
            match self.labels[..i].iter().position(|m| m == l) {
                Some(j) => pairs.push((j, i)),
                None => free.push(i),
            }
        }
        if pairs.is_empty() {
            return self;
        }
        let free: Vec<usize> = free
            .into_iter()
            .filter(|i| !pairs.iter().any(|&(a, _)| a == *i))
            .collect();
        let strides = Self::strides(&self.dims);
        let free_off = Self::offsets(&self.dims, &strides, &free);
        // A traced pair contributes stride_a + stride_b per diagonal value.
        let mut diag_off = vec![0usize];
        for &(a, b) in &pairs {
            let mut next = Vec::with_capacity(diag_off.len() * self.dims[a]);
            for &base in &diag_off {
                for v in 0..self.dims[a] {
                    next.push(base + v * (strides[a] + strides[b]));
                }
            }
            diag_off = next;
        }
        let data = free_off
            .iter()
            .map(|&f| diag_off.iter().map(|&t| self.data[f + t]).sum())
            .collect();
        Self {
            labels: free.iter().map(|&i| self.labels[i]).collect(),
            dims: free.iter().map(|&i| self.dims[i]).collect(),
            data,
        }
    }

    /// Contract over all labels shared with `other`; free legs of `self` come first.
    fn contract(&self, other: &Tensor) -> Tensor {
        let shared: Vec<(usize, usize)> = self
            .labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| other.labels.iter().position(|m| m == l).map(|j| (i, j)))
            .collect();
        let a_free: Vec<usize> = (0..self.labels.len())
            .filter(|i| !shared.iter().any(|&(a, _)| a == *i))
            .collect();
        let b_free: Vec<usize> = (0..other.labels.len())
            .filter(|j| !shared.iter().any(|&(_, b)| b == *j))
            .collect();
        let a_str = Self::strides(&self.dims);
        let b_str = Self::strides(&other.dims);
        let a_sh: Vec<usize> = shared.iter().map(|&(a, _)| a).collect();
        let b_sh: Vec<usize> = shared.iter().map(|&(_, b)| b).collect();
        let a_sh_off = Self::offsets(&self.dims, &a_str, &a_sh);
        let b_sh_off = Self::offsets(&other.dims, &b_str, &b_sh);
        let a_free_off = Self::offsets(&self.dims, &a_str, &a_free);
        let b_free_off = Self::offsets(&other.dims, &b_str, &b_free);

        let mut data = Vec::with_capacity(a_free_off.len() * b_free_off.len());
        for &fa in &a_free_off {
            for &fb in &b_free_off {
                let mut acc = ZERO;
                for (&sa, &sb) in a_sh_off.iter().zip(&b_sh_off) {
                    acc += self.data[fa + sa] * other.data[fb + sb];
                }
                data.push(acc);
            }
        }
        let mut labels: Vec<usize> = a_free.iter().map(|&i| self.labels[i]).collect();
        labels.extend(b_free.iter().map(|&j| other.labels[j]));
        let mut dims: Vec<usize> = a_free.iter().map(|&i| self.dims[i]).collect();
        dims.extend(b_free.iter().map(|&j| other.dims[j]));
        Tensor { labels, dims, data }
    }

    fn lookup(&self, assignment: &[(usize, usize)]) -> C64 {
        let strides = Self::strides(&self.dims);
        let mut idx = 0;
        for (p, l) in self.labels.iter().enumerate() {
            let v = assignment
                .iter()
                .find(|(lab, _)| lab == l)
                .map(|&(_, v)| v)
                .expect("every open leg is assigned");
            idx += v * strides[p];
        }
        self.data[idx]
    }
}

struct Wiring {
    pi_inv: Permutation,
    sigma_inv: Permutation,
    k: usize,
    d_a: usize,
    d_b: usize,
}

impl Wiring {
    fn new(pi: &Permutation, sigma: &Permutation, d_a: usize, d_b: usize) -> Result<Self> {
        if pi.degree() != sigma.degree() {
            return arg("bilateral permutations must share their degree");
        }
        Ok(Self {
            pi_inv: pi.inverse(),
            sigma_inv: sigma.inverse(),
            k: pi.degree(),
            d_a,
            d_b,
        })
    }

    /// Wire labels of slot `i` in leg order (row_A, row_B, col_A, col_B).
    fn legs(&self, i: usize) -> [usize; 4] {
        [
            i,
            self.k + i,
            self.pi_inv.apply(i),
            self.k + self.sigma_inv.apply(i),
        ]
    }

    fn slot_tensor(&self, i: usize, op: &Operator) -> Tensor {
        let (da, db) = (self.d_a, self.d_b);
        let mut data = Vec::with_capacity(op.side() * op.side());
        for ra in 0..da {
            for rb in 0..db {
                for ca in 0..da {
                    for cb in 0..db {
                        data.push(op.get(ra * db + rb, ca * db + cb));
                    }
                }
            }
        }
        Tensor {
            labels: self.legs(i).to_vec(),
            dims: vec![da, db, da, db],
            data,
        }
        .trace_repeated()
    }

    /// Contract every present slot left to right; `None` slots stay open.
    fn network(&self, slots: &[Option<&Operator>]) -> Tensor {
        let mut acc: Option<Tensor> = None;
        for (i, slot) in slots.iter().enumerate() {
            if let Some(op) = slot {
                let t = self.slot_tensor(i, op);
                acc = Some(match acc {
                    None => t,
                    Some(prev) => prev.contract(&t),
                });
            }
        }
        acc.unwrap_or_else(|| Tensor::scalar(C64::new(1.0, 0.0)))
    }
}

fn check_slots(slots: &[&Operator], k: usize) -> Result<(usize, usize)> {
    let first = match slots.first() {
        Some(s) => s,
        None => return arg("bilateral moment needs at least one slot"),
    };
    if slots.len() != k {
        return arg(format!(
            "{} slots given for permutations of degree {k}",
            slots.len()
        ));
    }
    if first.dims().len() != 2 {
        return arg(format!("slots must be two-party operators, got {}", first.shape()));
    }
    if slots.iter().any(|s| s.dims() != first.dims()) {
        return arg("all slots must share the same two-party shape");
    }
    Ok((first.dims()[0], first.dims()[1]))
}

/// `tr[(eta(pi)_A (x) eta(sigma)_B) . (X_1 (x) .. (x) X_k)]` with `X_i` on `[d_A, d_B]`.
pub fn bilateral_moment(pi: &Permutation, sigma: &Permutation, slots: &[&Operator]) -> Result<C64> {
    let (d_a, d_b) = check_slots(slots, pi.degree())?;
    let wiring = Wiring::new(pi, sigma, d_a, d_b)?;
    let present: Vec<Option<&Operator>> = slots.iter().map(|s| Some(*s)).collect();
    let t = wiring.network(&present);
    debug_assert!(t.labels.is_empty());
    Ok(t.data[0])
}

/// The operator `E` on the last slot with
/// `tr(E tau) = bilateral_moment(pi, sigma, [X_1, .., X_{k-1}, tau])` for every `tau`.
pub fn bilateral_effective(
    pi: &Permutation,
    sigma: &Permutation,
    slots: &[&Operator],
) -> Result<Operator> {
    let k = pi.degree();
    if slots.len() + 1 != k {
        return arg(format!(
            "{} fixed slots given for permutations of degree {k}",
            slots.len()
        ));
    }
    let (d_a, d_b) = match slots.first() {
        Some(_) => check_slots(slots, k - 1)?,
        None => return arg("bilateral_effective needs at least one fixed slot"),
    };
    let wiring = Wiring::new(pi, sigma, d_a, d_b)?;
    let mut present: Vec<Option<&Operator>> = slots.iter().map(|s| Some(*s)).collect();
    present.push(None);
    let t = wiring.network(&present);

    let open = k - 1;
    let [row_a, row_b, col_a, col_b] = wiring.legs(open);
    let side = d_a * d_b;
    let mut mat = CMatrix::zeros(side, side);
    for ra in 0..d_a {
        for rb in 0..d_b {
            for ca in 0..d_a {
                for cb in 0..d_b {
                    // A wire running from the open slot back into itself is a delta.
                    if row_a == col_a && ra != ca {
                        continue;
                    }
                    if row_b == col_b && rb != cb {
                        continue;
                    }
                    let assignment = [(row_a, ra), (row_b, rb), (col_a, ca), (col_b, cb)];
                    // tr(E tau) = sum T[r, c] tau[r, c]  =>  E[c, r] = T[r, c]
                    mat[(ca * d_b + cb, ra * d_b + rb)] = t.lookup(&assignment);
                }
            }
        }
    }
    Operator::new(SubsystemShape::new(vec![d_a, d_b])?, mat)
}
