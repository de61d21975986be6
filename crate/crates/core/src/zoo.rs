//! Named states and witnesses, plus the random samplers used to probe them.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::linalg::{kron, CMatrix, Operator, SubsystemShape, C64, ONE, ZERO};
use crate::symmetric_group::{pair_projectors, young_projector, YoungLabel};

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return arg(format!("{name} = {p} outside [0, 1]"));
    }
    Ok(())
}

fn two_party(d: usize) -> Result<SubsystemShape> {
    SubsystemShape::new(vec![d, d])
}

/// Normalized maximally entangled state `|phi+> = sum_i |ii> / sqrt(d)`.
pub fn bell(d: usize) -> Result<Operator> {
    Ok(max_ent_unnormalized(d)?.scale(1.0 / d as f64))
}

/// `d |phi+><phi+| = sum_{ij} |ii><jj|`, trace `d`.
pub fn max_ent_unnormalized(d: usize) -> Result<Operator> {
    if d < 2 {
        return arg("maximally entangled state needs d >= 2");
    }
    Ok(Operator::from_real_fn(two_party(d)?, |r, c| {
        if r % (d + 1) == 0 && c % (d + 1) == 0 {
            1.0
        } else {
            0.0
        }
    }))
}

/// `sqrt(s)|00> + sqrt(1-s)|11>` embedded in `C^d (x) C^d`.
pub fn phi_s(s: f64, d_embed: usize) -> Result<Operator> {
    check_prob("s", s)?;
    if d_embed < 2 {
        return arg("phi_s needs an embedding dimension >= 2");
    }
    let mut ket = vec![ZERO; d_embed * d_embed];
    ket[0] = C64::new(s.sqrt(), 0.0);
    ket[d_embed + 1] = C64::new((1.0 - s).sqrt(), 0.0);
    Operator::projector(two_party(d_embed)?, &ket)
}

/// Entanglement entropy of `phi_s` in bits (binary entropy of `s`).
pub fn entanglement_entropy(s: f64) -> Result<f64> {
    check_prob("s", s)?;
    let h = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    Ok(h(s) + h(1.0 - s))
}

/// Unnormalized GHZ projector `|GHZ><GHZ|` with `|GHZ> = sum_t |t>^{(x) l}`; trace `d`.
pub fn ghz(l: usize, d: usize) -> Result<Operator> {
    if l < 2 || d < 2 {
        return arg("GHZ state needs l >= 2 and d >= 2");
    }
    let shape = SubsystemShape::uniform(d, l)?;
    let side = shape.side();
    // |t..t> sits at t * (d^l - 1) / (d - 1)
    let step = (side - 1) / (d - 1);
    Ok(Operator::from_real_fn(shape, |r, c| {
        if r % step == 0 && c % step == 0 {
            1.0
        } else {
            0.0
        }
    }))
}

/// Normalized `n`-qubit W state projector.
pub fn w_state(n: usize) -> Result<Operator> {
    if n < 3 {
        return arg("W state needs n >= 3");
    }
    let shape = SubsystemShape::uniform(2, n)?;
    let mut ket = vec![ZERO; shape.side()];
    let amp = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    for q in 0..n {
        ket[1 << (n - 1 - q)] = amp;
    }
    Operator::projector(shape, &ket)
}

/// Bell state mixed with white noise: `p |phi+><phi+| + (1 - p) 1/d^2`.
pub fn isotropic(p: f64, d: usize) -> Result<Operator> {
    check_prob("p", p)?;
    let b = bell(d)?;
    let noise = Operator::identity(two_party(d)?).scale((1.0 - p) / (d * d) as f64);
    Ok(&b.scale(p) + &noise)
}

/// `p P_sym / d_s + (1 - p) P_anti / d_a`.
pub fn werner(p: f64, d: usize) -> Result<Operator> {
    check_prob("p", p)?;
    let (sym, anti, _) = pair_projectors(d)?;
    let df = d as f64;
    let ds = df * (df + 1.0) / 2.0;
    let da = df * (df - 1.0) / 2.0;
    Ok(&sym.scale(p / ds) + &anti.scale((1.0 - p) / da))
}

/// Three-party witness `P_std / 4 - P_{1^3}` on `(C^d)^{(x)3}`, where `P_std` is
/// the idempotent projector onto the standard isotypic component, i.e. twice
/// the group-algebra element labeled `21`. Non-negative on product states by
/// Schur's immanant inequality.
pub fn deco_witness3(d: usize) -> Result<Operator> {
    if d < 3 {
        return Err(Error::Degenerate(format!(
            "the antisymmetric projector vanishes for d = {d} < 3"
        )));
    }
    let standard = young_projector(YoungLabel::Standard, d)?;
    let anti = young_projector(YoungLabel::Antisymmetric, d)?;
    Ok(&standard.scale(0.5) - &anti)
}

/// Default split of `ab = 8`.
pub const KYE_DEFAULT: f64 = 2.0 * std::f64::consts::SQRT_2;

/// The three-qubit indecomposable witness with parameters `a b = 8`.
pub fn kye_witness(a: f64, b: f64) -> Result<Operator> {
    if a <= 0.0 || b <= 0.0 || (a * b - 8.0).abs() > 1e-12 * 8.0 {
        return arg(format!("Kye witness needs a, b > 0 with ab = 8, got a = {a}, b = {b}"));
    }
    let mut m = CMatrix::zeros(8, 8);
    let mut set = |i: usize, j: usize, v: f64| {
        m[(i, j)] = C64::new(v, 0.0);
        m[(j, i)] = C64::new(v, 0.0);
    };
    set(0, 7, 1.0);
    set(1, 6, 1.0);
    set(2, 5, -1.0);
    set(3, 4, 1.0);
    set(3, 3, a);
    set(4, 4, b);
    Operator::new(SubsystemShape::uniform(2, 3)?, m)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_c64(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed unit vector in `C^dim`.
pub fn haar_ket(dim: usize, rng: &mut impl Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// Haar-random pure state on `dims`, deterministic in `seed`.
pub fn haar_random_state(dims: &[usize], seed: u64) -> Result<Operator> {
    let mut rng = seeded_rng(seed);
    haar_state_from(dims, &mut rng)
}

/// Haar-random pure state drawn from a caller-owned generator.
pub fn haar_state_from(dims: &[usize], rng: &mut impl Rng) -> Result<Operator> {
    let shape = SubsystemShape::new(dims.to_vec())?;
    let ket = haar_ket(shape.side(), rng);
    Operator::projector(shape, &ket)
}

/// Haar-random unitary via Gram-Schmidt on a complex Ginibre matrix.
pub fn haar_unitary(d: usize, rng: &mut impl Rng) -> CMatrix {
    let mut u = CMatrix::from_fn(d, d, |_, _| gaussian_c64(rng));
    for j in 0..d {
        for i in 0..j {
            let proj: C64 = (0..d).map(|r| u[(r, i)].conj() * u[(r, j)]).sum();
            for r in 0..d {
                let sub = proj * u[(r, i)];
                u[(r, j)] -= sub;
            }
        }
        let norm = (0..d).map(|r| u[(r, j)].norm_sqr()).sum::<f64>().sqrt();
        for r in 0..d {
            u[(r, j)] /= norm;
        }
    }
    u
}

/// Mixed state `G G^dag / tr` with a square complex Ginibre `G`.
pub fn random_density(dims: &[usize], rng: &mut impl Rng) -> Result<Operator> {
    let shape = SubsystemShape::new(dims.to_vec())?;
    let n = shape.side();
    let g = CMatrix::from_fn(n, n, |_, _| gaussian_c64(rng));
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    Operator::new(shape, rho / tr)
}

/// Product of independent random single-party states; pure factors when `pure`.
pub fn random_product_state(dims: &[usize], pure: bool, rng: &mut impl Rng) -> Result<Operator> {
    let factors = dims
        .iter()
        .map(|&d| {
            if pure {
                haar_state_from(&[d], rng)
            } else {
                random_density(&[d], rng)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    kron(&factors.iter().collect::<Vec<_>>())
}

/// Random Hermitian matrix with Gaussian entries (GUE up to scale); real symmetric when `real`.
pub fn random_hermitian(dims: &[usize], real: bool, rng: &mut impl Rng) -> Result<Operator> {
    let shape = SubsystemShape::new(dims.to_vec())?;
    let n = shape.side();
    let g = CMatrix::from_fn(n, n, |_, _| {
        if real {
            C64::new(rng.sample(StandardNormal), 0.0)
        } else {
            gaussian_c64(rng)
        }
    });
    Operator::new(shape, (&g + g.adjoint()) * C64::new(0.5, 0.0))
}

/// Computational-basis projector onto the first `rank` levels of `C^d`.
pub fn diagonal_projector(d: usize, rank: usize) -> Result<Operator> {
    if rank > d {
        return arg(format!("rank {rank} exceeds dimension {d}"));
    }
    Ok(Operator::from_fn(SubsystemShape::new(vec![d])?, |i, j| {
        if i == j && i < rank {
            ONE
        } else {
            ZERO
        }
    }))
}

/// One-parameter state families used by threshold searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Isotropic,
    Werner,
    PhiS,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Isotropic => "isotropic",
            FamilyKind::Werner => "werner",
            FamilyKind::PhiS => "phi_s",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub d: usize,
    pub range: (f64, f64),
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, d: usize) -> Result<Self> {
        if d < 2 {
            return arg("family dimension must be >= 2");
        }
        Ok(Self {
            kind,
            d,
            range: (0.0, 1.0),
        })
    }

    pub fn state(&self, param: f64) -> Result<Operator> {
        if param < self.range.0 || param > self.range.1 {
            return arg(format!(
                "parameter {param} outside [{}, {}]",
                self.range.0, self.range.1
            ));
        }
        match self.kind {
            FamilyKind::Isotropic => isotropic(param, self.d),
            FamilyKind::Werner => werner(param, self.d),
            FamilyKind::PhiS => phi_s(param, self.d),
        }
    }
}

/// A family together with an optional parameter value, parsed from
/// strings such as `"isotropic:d=3,p=0.5"` or `"phi_s:d=3,s=0.9999"`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyQuery {
    pub family: FamilySpec,
    pub param: Option<f64>,
}

impl FamilyQuery {
    pub fn state(&self) -> Result<Operator> {
        match self.param {
            Some(p) => self.family.state(p),
            None => arg(format!("family {} needs a parameter value", self.family.kind)),
        }
    }
}

impl FromStr for FamilyQuery {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let kind = match name.trim() {
            "isotropic" | "iso" => FamilyKind::Isotropic,
            "werner" => FamilyKind::Werner,
            "phi_s" | "phis" => FamilyKind::PhiS,
            other => return arg(format!("unknown family {other:?}")),
        };
        let mut d = None;
        let mut param = None;
        for kv in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Argument(format!("expected key=value, got {kv:?}")))?;
            match k.trim() {
                "d" => {
                    d = Some(v.trim().parse::<usize>().map_err(|e| {
                        Error::Argument(format!("bad dimension {v:?}: {e}"))
                    })?)
                }
                "p" | "s" => {
                    param = Some(v.trim().parse::<f64>().map_err(|e| {
                        Error::Argument(format!("bad parameter {v:?}: {e}"))
                    })?)
                }
                other => return arg(format!("unknown family key {other:?}")),
            }
        }
        let d = d.unwrap_or(match kind {
            FamilyKind::PhiS => 2,
            _ => 3,
        });
        Ok(FamilyQuery {
            family: FamilySpec::new(kind, d)?,
            param,
        })
    }
}

fn parse_params(rest: &str) -> Result<Vec<(String, String)>> {
    rest.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::Argument(format!("expected key=value, got {kv:?}")))
        })
        .collect()
}

fn param<T: FromStr>(params: &[(String, String)], key: &str, default: Option<T>) -> Result<T> {
    match params.iter().find(|(k, _)| k == key) {
        Some((_, v)) => v
            .parse::<T>()
            .map_err(|_| Error::Argument(format!("bad value {v:?} for {key}"))),
        None => default.ok_or_else(|| Error::Argument(format!("missing parameter {key}"))),
    }
}

/// Operator by name, e.g. `"bell:d=3"`, `"young:label=21,d=3"`, `"ghz:l=4,d=2"`,
/// `"kye:a=2,b=4"`, `"haar:d=2,n=2,seed=7"`.
pub fn named_operator(spec: &str) -> Result<Operator> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let params = parse_params(rest)?;
    let d = || param::<usize>(&params, "d", None);
    match name.trim() {
        "bell" => bell(d()?),
        "max_ent" | "phi" => max_ent_unnormalized(d()?),
        "swap" => crate::symmetric_group::swap(d()?),
        "phi_s" => phi_s(param(&params, "s", None)?, param(&params, "d", Some(2))?),
        "ghz" => ghz(param(&params, "l", None)?, param(&params, "d", Some(2))?),
        "w" => w_state(param(&params, "n", None)?),
        "isotropic" => isotropic(param(&params, "p", None)?, d()?),
        "werner" => werner(param(&params, "p", None)?, d()?),
        "deco_witness3" => deco_witness3(d()?),
        "kye" => kye_witness(
            param(&params, "a", Some(KYE_DEFAULT))?,
            param(&params, "b", Some(KYE_DEFAULT))?,
        ),
        "young" => {
            let label: YoungLabel = param::<String>(&params, "label", None)?.parse()?;
            young_projector(label, d()?)
        }
        "sym2" => Ok(pair_projectors(d()?)?.0),
        "anti2" => Ok(pair_projectors(d()?)?.1),
        "haar" => {
            let n = param(&params, "n", Some(2usize))?;
            haar_random_state(&vec![d()?; n], param(&params, "seed", Some(0u64))?)
        }
        other => arg(format!("unknown operator name {other:?}")),
    }
}
