//! Expectations of products of falling powers of cycle counts over uniform random
//! permutations.
//!
//! For `p = (p_1, .., p_n)` the quantity of interest is
//! `E(prod_k c_k^(p_k falling))`, where `c_k(sigma)` counts the `k`-cycles of `sigma` and
//! `sigma` is uniform on `S_n`. Two exact methods are provided, one enumerating `S_n` and one
//! weighting cycle types by class size, plus a seeded Monte Carlo estimator for large `n`.

use std::io::Write;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::permutation::{factorial, falling_power, falling_power_u128, CycleType, Permutations};
use crate::scalar::{format_rational, serde_rational};
use crate::{Error, Limits, PVector, Permutation, Rational, Result, Scalar};

/// Permutations per parallel work unit in exhaustive enumeration.
const ENUMERATION_BLOCK: usize = 5040;

/// Samples per Monte Carlo block; each block has its own derived seed.
pub const MONTE_CARLO_BLOCK: u64 = 4096;

/// `prod_k falling_power(c_k, p_k)` for a vector of cycle counts (`counts[k]` = `c_k`).
fn falling_product(counts: &[usize], p: &PVector) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for k in 1..=p.degree() {
        let pk = p.get(k);
        if pk == 0 {
            continue;
        }
        let ck = counts.get(k).copied().unwrap_or(0);
        acc *= falling_power(ck as u64, pk as u64);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

fn falling_product_u128(counts: &[usize], p: &PVector) -> Option<u128> {
    let mut acc = 1u128;
    for k in 1..=p.degree() {
        let pk = p.get(k);
        if pk == 0 {
            continue;
        }
        let ck = counts.get(k).copied().unwrap_or(0);
        acc = acc.checked_mul(falling_power_u128(ck as u64, pk as u64)?)?;
        if acc == 0 {
            break;
        }
    }
    Some(acc)
}

/// `sum_{sigma in S_n} prod_k falling_power(c_k(sigma), p_k)`.
pub fn brute_force_sum(n: usize, p: &PVector, limits: &Limits) -> Result<BigUint> {
    p.check_degree(n)?;
    limits.check_enumeration(n)?;
    let total = crate::permutation::factorial_usize(n).expect("n within cap");
    let blocks = total.div_ceil(ENUMERATION_BLOCK);
    let sum = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut block_sum = BigUint::zero();
            let mut small = 0u128;
            for sigma in Permutations::rank_range(n, b * ENUMERATION_BLOCK, (b + 1) * ENUMERATION_BLOCK) {
                let counts = sigma.cycle_counts();
                match falling_product_u128(&counts, p).and_then(|v| small.checked_add(v)) {
                    Some(s) => small = s,
                    None => block_sum += falling_product(&counts, p),
                }
            }
            block_sum + BigUint::from(small)
        })
        .reduce(BigUint::zero, |a, b| a + b);
    Ok(sum)
}

/// `(1/n!) sum_{sigma in S_n} prod_k falling_power(c_k(sigma), p_k)` by enumerating `S_n`.
pub fn expected_product_brute<S: Scalar>(n: usize, p: &PVector, limits: &Limits) -> Result<S> {
    let sum = brute_force_sum(n, p, limits)?;
    Ok(S::from_ratio(&sum, &factorial(n as u64)))
}

/// The same expectation as a sum over cycle types `lambda` of
/// `(1/z_lambda) prod_k falling_power(m_k(lambda), p_k)`.
pub fn expected_product_by_type<S: Scalar>(n: usize, p: &PVector, limits: &Limits) -> Result<S> {
    p.check_degree(n)?;
    limits.check_partition(n)?;
    let mut total = S::zero();
    for lambda in CycleType::all_of_degree(n) {
        let counts: Vec<usize> = (0..=n).map(|k| lambda.count(k)).collect();
        let weight = falling_product(&counts, p);
        if weight.is_zero() {
            continue;
        }
        total = total + S::from_ratio(&weight, &lambda.centralizer_order());
    }
    Ok(total)
}

/// Closed form: `prod_k 1/k^{p_k}` when `|p| <= n`, else `0`.
pub fn cll_rhs<S: Scalar>(n: usize, p: &PVector) -> S {
    if p.weight() > n {
        return S::zero();
    }
    let mut den = BigUint::from(1u32);
    for k in 1..=p.degree() {
        den *= num_traits::pow(BigUint::from(k), p.get(k));
    }
    S::recip_of(&den)
}

/// `1 + 1/2 + .. + 1/n`, the expected number of cycles.
pub fn expected_total_cycles(n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Precondition("expected_total_cycles needs n >= 1".into()));
    }
    Ok((1..=n as u64).fold(Rational::zero(), |acc, k| acc + Rational::new(1.into(), k.into())))
}

/// The `p`-th factorial moment of a Poisson law with mean `mu`, namely `mu^p`.
pub fn poisson_factorial_moment<S: Scalar>(mu: &S, p: u32) -> S {
    mu.pow_u32(p)
}

/// How a [`MomentReport`] was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Brute,
    CycleType,
    MonteCarlo,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Method::Brute),
            "cycle_type" | "cycle-type" | "type" => Ok(Method::CycleType),
            "monte_carlo" | "monte-carlo" | "montecarlo" => Ok(Method::MonteCarlo),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

/// Method selection for [`verify_cll`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentMethod {
    Brute,
    CycleType,
    MonteCarlo { samples: u64, seed: u64 },
}

/// One evaluation of `E(prod_k c_k^(p_k falling))` against its closed form.
///
/// Exact methods fill `lhs` and `equal`; Monte Carlo fills `estimate`, `standard_error`,
/// `z_score`, `samples` and `seed`. `rhs` is always the closed form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub n: usize,
    pub p: PVector,
    pub method: Method,
    #[serde(with = "serde_rational::option", default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Rational>,
    #[serde(with = "serde_rational")]
    pub rhs: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equal: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standard_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_score: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl MomentReport {
    fn exact(n: usize, p: PVector, method: Method, lhs: Rational, rhs: Rational) -> Self {
        MomentReport {
            n,
            p,
            method,
            equal: Some(lhs == rhs),
            lhs: Some(lhs),
            rhs,
            estimate: None,
            standard_error: None,
            z_score: None,
            samples: None,
            seed: None,
        }
    }

    /// Exact methods: `lhs == rhs`. Monte Carlo: `|z| <= threshold`.
    pub fn passes(&self, z_threshold: f64) -> bool {
        match (self.equal, self.z_score, self.estimate) {
            (Some(eq), _, _) => eq,
            (None, Some(z), _) => z.abs() <= z_threshold,
            // zero standard error: the estimate must hit the target exactly
            (None, None, Some(est)) => est == Scalar::to_f64(&self.rhs),
            _ => false,
        }
    }
}

/// Runs one method on `(n, p)` and compares with [`cll_rhs`].
pub fn verify_cll(n: usize, p: &PVector, method: MomentMethod, limits: &Limits) -> Result<MomentReport> {
    let rhs = cll_rhs::<Rational>(n, p);
    match method {
        MomentMethod::Brute => {
            let lhs = expected_product_brute::<Rational>(n, p, limits)?;
            Ok(MomentReport::exact(n, p.clone(), Method::Brute, lhs, rhs))
        }
        MomentMethod::CycleType => {
            let lhs = expected_product_by_type::<Rational>(n, p, limits)?;
            Ok(MomentReport::exact(n, p.clone(), Method::CycleType, lhs, rhs))
        }
        MomentMethod::MonteCarlo { samples, seed } => monte_carlo_moment(n, p, samples, seed),
    }
}

/// [`verify_cll`] over every `p` of degree `n` with entries `<= max_entry` and weight
/// `<= max_weight`.
pub fn sweep_cll(
    n: usize,
    max_entry: usize,
    max_weight: usize,
    method: MomentMethod,
    limits: &Limits,
) -> Result<Vec<MomentReport>> {
    PVector::all_bounded(n, max_entry, max_weight)
        .iter()
        .map(|p| verify_cll(n, p, method, limits))
        .collect()
}

/// Checks `E(c_j c_k) = E(c_j) E(c_k)` exactly; requires `j != k` and `j + k <= n`.
///
/// The report's `lhs` is `E(c_j c_k)` and `rhs` is `E(c_j) E(c_k)`.
pub fn uncorrelated_check(n: usize, j: usize, k: usize, limits: &Limits) -> Result<MomentReport> {
    if j == 0 || k == 0 || j == k || j + k > n {
        return Err(Error::Precondition(format!(
            "uncorrelatedness needs distinct j, k >= 1 with j + k <= n; got n={n}, j={j}, k={k}"
        )));
    }
    let mut pjk = PVector::zero(n);
    let mut entries = pjk.entries().to_vec();
    entries[j - 1] = 1;
    entries[k - 1] = 1;
    pjk = PVector::new(entries);
    let joint = expected_product_by_type::<Rational>(n, &pjk, limits)?;
    let ej = expected_product_by_type::<Rational>(n, &PVector::unit(n, j, 1)?, limits)?;
    let ek = expected_product_by_type::<Rational>(n, &PVector::unit(n, k, 1)?, limits)?;
    Ok(MomentReport::exact(n, pjk, Method::CycleType, joint, ej * ek))
}

/// A uniform random permutation of degree `n`: decreasing-index Fisher-Yates on the identity.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        images.swap(i, j);
    }
    Permutation::new(images).expect("shuffle of identity is a bijection")
}

/// Generator for Monte Carlo block `block` under `seed`: ChaCha8 seeded from
/// `seed + block * 0x9E3779B97F4A7C15` (wrapping).
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(block.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Sample mean and standard error of `prod_k falling_power(c_k, p_k)` over `samples`
/// uniform permutations.
///
/// Samples are drawn in blocks of [`MONTE_CARLO_BLOCK`], block `b` using [`block_rng`]; the
/// result depends only on `(n, p, samples, seed)`.
pub fn monte_carlo_moment(n: usize, p: &PVector, samples: u64, seed: u64) -> Result<MomentReport> {
    p.check_degree(n)?;
    if samples < 2 {
        return Err(Error::Precondition("Monte Carlo needs at least 2 samples".into()));
    }
    let blocks = samples.div_ceil(MONTE_CARLO_BLOCK);
    let partials: Vec<(f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b);
            let count = MONTE_CARLO_BLOCK.min(samples - b * MONTE_CARLO_BLOCK);
            let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
            for _ in 0..count {
                let counts = random_permutation(n, &mut rng).cycle_counts();
                let x = match falling_product_u128(&counts, p) {
                    Some(v) => v as f64,
                    None => falling_product(&counts, p).to_f64().unwrap_or(f64::INFINITY),
                };
                sum += x;
                sum_sq += x * x;
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = partials.iter().fold((0.0, 0.0), |(s, q), &(bs, bq)| (s + bs, q + bq));
    let count = samples as f64;
    let mean = sum / count;
    let variance = ((sum_sq - count * mean * mean) / (count - 1.0)).max(0.0);
    let standard_error = (variance / count).sqrt();
    let rhs = cll_rhs::<Rational>(n, p);
    let target = Scalar::to_f64(&rhs);
    let z_score = (standard_error > 0.0).then(|| (mean - target) / standard_error);
    Ok(MomentReport {
        n,
        p: p.clone(),
        method: Method::MonteCarlo,
        lhs: None,
        rhs,
        equal: None,
        estimate: Some(mean),
        standard_error: Some(standard_error),
        z_score,
        samples: Some(samples),
        seed: Some(seed),
    })
}

/// Writes reports as CSV with a header row; rationals as `num/den`.
pub fn write_csv<W: Write>(reports: &[MomentReport], writer: W) -> Result<()> {
    let io_err = |e: csv::Error| Error::Parse(e.to_string());
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "n",
        "p",
        "method",
        "lhs",
        "rhs",
        "equal",
        "estimate",
        "standard_error",
        "z_score",
        "samples",
        "seed",
    ])
    .map_err(io_err)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in reports {
        let p: Vec<String> = r.p.entries().iter().map(|e| e.to_string()).collect();
        let method = serde_json::to_value(r.method)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        w.write_record([
            r.n.to_string(),
            p.join(","),
            method,
            opt(r.lhs.as_ref().map(format_rational)),
            format_rational(&r.rhs),
            opt(r.equal.map(|b| b.to_string())),
            opt(r.estimate.map(|v| v.to_string())),
            opt(r.standard_error.map(|v| v.to_string())),
            opt(r.z_score.map(|v| v.to_string())),
            opt(r.samples.map(|v| v.to_string())),
            opt(r.seed.map(|v| v.to_string())),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(())
}
