//! Permutations of `{0, .., n-1}` and the combinatorics of their cycles.
//!
//! Composition follows function composition: `(s * t)(x) = s(t(x))`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::{Error, Limits, Result};

/// A bijection of `{0, .., n-1}`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {v} out of range for degree {n}"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("image {v} repeated")));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds the permutation whose nontrivial cycles are `cycles`; other points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Cycle]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            let e = cycle.entries();
            for (i, &a) in e.iter().enumerate() {
                if a >= n {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle point {a} out of range for degree {n}"
                    )));
                }
                if std::mem::replace(&mut touched[a], true) {
                    return Err(Error::InvalidPermutation(format!("point {a} appears in two cycles")));
                }
                images[a] = e[(i + 1) % e.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        self.check_degree(other)?;
        Ok(Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v] = i;
        }
        Permutation { images }
    }

    /// `tau * self * tau^-1`.
    pub fn conjugate_by(&self, tau: &Permutation) -> Result<Permutation> {
        self.check_degree(tau)?;
        let mut images = vec![0; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[tau.images[x]] = tau.images[y];
        }
        Ok(Permutation { images })
    }

    fn check_degree(&self, other: &Permutation) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(())
    }

    /// Disjoint cycles in canonical form (minimum first), sorted by minimum, fixed points
    /// included.
    pub fn cycle_decomposition(&self) -> Vec<Cycle> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut entries = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                entries.push(x);
                x = self.images[x];
            }
            // `start` is the smallest unseen point, hence the minimum of its cycle.
            cycles.push(Cycle { entries });
        }
        cycles
    }

    /// `counts[k]` is the number of `k`-cycles; `counts.len() == n + 1`.
    pub fn cycle_counts(&self) -> Vec<usize> {
        let n = self.degree();
        let mut counts = vec![0; n + 1];
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.images[x];
            }
            counts[len] += 1;
        }
        counts
    }

    /// Number of `k`-cycles, `1 <= k <= n`.
    pub fn cycle_count(&self, k: usize) -> Result<usize> {
        let n = self.degree();
        if k == 0 || k > n {
            return Err(Error::CycleLengthOutOfRange { k, n });
        }
        Ok(self.cycle_counts()[k])
    }

    pub fn cycle_type(&self) -> CycleType {
        let counts = self.cycle_counts();
        CycleType {
            multiplicities: counts[1..].to_vec(),
        }
    }

    /// Position of `self` in the lexicographic order of image arrays of `S_n`.
    pub fn lex_rank(&self) -> usize {
        let n = self.degree();
        let mut used = vec![false; n];
        let mut rank = 0usize;
        for (i, &v) in self.images.iter().enumerate() {
            let smaller_unused = used[..v].iter().filter(|u| !**u).count();
            rank = rank * (n - i) + smaller_unused;
            used[v] = true;
        }
        rank
    }

    /// Inverse of [`Permutation::lex_rank`]; `rank < n!`.
    pub fn from_lex_rank(n: usize, mut rank: usize) -> Permutation {
        let mut digits = vec![0usize; n];
        for i in (0..n).rev() {
            let base = n - i;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut pool: Vec<usize> = (0..n).collect();
        let images = digits.into_iter().map(|d| pool.remove(d)).collect();
        Permutation { images }
    }

    /// Advances to the lexicographic successor; returns `false` at the last permutation.
    fn advance(&mut self) -> bool {
        let a = &mut self.images;
        let n = a.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && a[i - 1] >= a[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while a[j] <= a[i - 1] {
            j -= 1;
        }
        a.swap(i - 1, j);
        a[i..].reverse();
        true
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycle_decomposition().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A cycle in canonical form: distinct entries, minimum first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Cycle {
    entries: Vec<usize>,
}

impl Cycle {
    /// Canonicalises by rotating the minimum to the front.
    pub fn new(mut entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidPermutation("empty cycle".into()));
        }
        let mut sorted = entries.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPermutation(format!("cycle {entries:?} repeats a point")));
        }
        let min_pos = (0..entries.len()).min_by_key(|&i| entries[i]).unwrap_or(0);
        entries.rotate_left(min_pos);
        Ok(Cycle { entries })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Image of this cycle under the relabelling `tau`, re-canonicalised.
    pub fn relabel(&self, tau: &Permutation) -> Cycle {
        let mut entries: Vec<usize> = self.entries.iter().map(|&a| tau.apply(a)).collect();
        let min_pos = (0..entries.len()).min_by_key(|&i| entries[i]).unwrap_or(0);
        entries.rotate_left(min_pos);
        Cycle { entries }
    }
}

impl TryFrom<Vec<usize>> for Cycle {
    type Error = Error;

    fn try_from(entries: Vec<usize>) -> Result<Self> {
        Cycle::new(entries)
    }
}

impl From<Cycle> for Vec<usize> {
    fn from(c: Cycle) -> Self {
        c.entries
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// Cycle-length multiplicities: `multiplicities[k - 1]` is the number of `k`-cycles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct CycleType {
    multiplicities: Vec<usize>,
}

impl CycleType {
    /// The degree is the length of `multiplicities`, which must satisfy
    /// `sum_k k * m_k = n`.
    pub fn new(multiplicities: Vec<usize>) -> Result<Self> {
        let n = multiplicities.len();
        let total: usize = multiplicities.iter().enumerate().map(|(i, m)| (i + 1) * m).sum();
        if total != n {
            return Err(Error::Precondition(format!(
                "cycle type {multiplicities:?} covers {total} points, expected {n}"
            )));
        }
        Ok(CycleType { multiplicities })
    }

    pub fn degree(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Number of `k`-cycles (zero when `k` is out of range).
    pub fn count(&self, k: usize) -> usize {
        if k == 0 {
            return 0;
        }
        self.multiplicities.get(k - 1).copied().unwrap_or(0)
    }

    /// Parts of the partition in weakly decreasing order.
    pub fn parts(&self) -> Vec<usize> {
        let mut parts = Vec::new();
        for k in (1..=self.degree()).rev() {
            parts.extend(std::iter::repeat_n(k, self.count(k)));
        }
        parts
    }

    /// `z = prod_k k^{m_k} m_k!`, the order of the centraliser of any permutation of this
    /// type.
    pub fn centralizer_order(&self) -> BigUint {
        let mut z = BigUint::one();
        for (i, &m) in self.multiplicities.iter().enumerate() {
            let k = BigUint::from(i + 1);
            z *= num_traits::pow(k, m) * factorial(m as u64);
        }
        z
    }

    /// All cycle types of degree `n`, ordered by decreasing partitions in reverse
    /// lexicographic order (`(n)` first, `(1, .., 1)` last).
    pub fn all_of_degree(n: usize) -> Vec<CycleType> {
        let mut out = Vec::new();
        let mut parts = Vec::new();
        partitions_rec(n, n, &mut parts, &mut out);
        out
    }

    /// Canonical representative: the permutation whose cycles are consecutive runs of
    /// points, longest cycles first.
    pub fn representative(&self) -> Permutation {
        let mut images = Vec::with_capacity(self.degree());
        let mut start = 0;
        for len in self.parts() {
            for i in 0..len {
                images.push(start + (i + 1) % len);
            }
            start += len;
        }
        Permutation { images }
    }
}

fn partitions_rec(remaining: usize, max_part: usize, parts: &mut Vec<usize>, out: &mut Vec<CycleType>) {
    if remaining == 0 {
        let n: usize = parts.iter().sum();
        let mut m = vec![0; n];
        for &p in parts.iter() {
            m[p - 1] += 1;
        }
        out.push(CycleType { multiplicities: m });
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        parts.push(part);
        partitions_rec(remaining - part, part, parts, out);
        parts.pop();
    }
}

impl TryFrom<Vec<usize>> for CycleType {
    type Error = Error;

    fn try_from(m: Vec<usize>) -> Result<Self> {
        CycleType::new(m)
    }
}

impl From<CycleType> for Vec<usize> {
    fn from(c: CycleType) -> Self {
        c.multiplicities
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts().iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Multiplicities `(p_1, .., p_n)` of requested cycles of each length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PVector {
    entries: Vec<usize>,
}

impl PVector {
    pub fn new(entries: Vec<usize>) -> Self {
        PVector { entries }
    }

    pub fn zero(n: usize) -> Self {
        PVector { entries: vec![0; n] }
    }

    /// `p * e_k` in degree `n`.
    pub fn unit(n: usize, k: usize, p: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::CycleLengthOutOfRange { k, n });
        }
        let mut v = PVector::zero(n);
        v.entries[k - 1] = p;
        Ok(v)
    }

    /// Parses a comma-separated list such as `"0,1,0"`. The empty string is the length-0
    /// vector.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(PVector::zero(0));
        }
        text.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad p-vector entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(PVector::new)
    }

    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// `p_k`, zero when `k` is out of range.
    pub fn get(&self, k: usize) -> usize {
        if k == 0 {
            return 0;
        }
        self.entries.get(k - 1).copied().unwrap_or(0)
    }

    /// `|p| = p_1 + 2 p_2 + .. + n p_n`.
    pub fn weight(&self) -> usize {
        self.entries.iter().enumerate().map(|(i, &p)| (i + 1) * p).sum()
    }

    pub fn check_degree(&self, n: usize) -> Result<()> {
        if self.degree() != n {
            return Err(Error::DegreeMismatch {
                left: n,
                right: self.degree(),
            });
        }
        Ok(())
    }

    /// Every vector of degree `n` with entries `<= max_entry` and weight `<= max_weight`,
    /// in lexicographic order.
    pub fn all_bounded(n: usize, max_entry: usize, max_weight: usize) -> Vec<PVector> {
        let mut out = Vec::new();
        let mut cur = vec![0; n];
        bounded_rec(0, 0, max_entry, max_weight, &mut cur, &mut out);
        out
    }
}

fn bounded_rec(
    pos: usize,
    weight: usize,
    max_entry: usize,
    max_weight: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<PVector>,
) {
    if pos == cur.len() {
        out.push(PVector::new(cur.clone()));
        return;
    }
    let k = pos + 1;
    for p in 0..=max_entry {
        let w = weight + k * p;
        if w > max_weight {
            break;
        }
        cur[pos] = p;
        bounded_rec(pos + 1, w, max_entry, max_weight, cur, out);
    }
    cur[pos] = 0;
}

impl fmt::Display for PVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All permutations of degree `n` in lexicographic order of image arrays, optionally
/// restricted to a half-open range of lexicographic ranks.
#[derive(Clone, Debug)]
pub struct Permutations {
    next: Option<Permutation>,
    remaining: usize,
}

impl Permutations {
    /// Ranks `start..end` (clamped to `n!`).
    pub fn rank_range(n: usize, start: usize, end: usize) -> Self {
        let total = factorial_usize(n).unwrap_or(usize::MAX);
        let end = end.min(total);
        if start >= end {
            return Permutations {
                next: None,
                remaining: 0,
            };
        }
        Permutations {
            next: Some(Permutation::from_lex_rank(n, start)),
            remaining: end - start,
        }
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.remaining == 0 {
            return None;
        }
        let current = self.next.take()?;
        self.remaining -= 1;
        if self.remaining > 0 {
            let mut succ = current.clone();
            if succ.advance() {
                self.next = Some(succ);
            } else {
                self.remaining = 0;
            }
        }
        Some(current)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for Permutations {}

/// Every permutation of `{0, .., n-1}` exactly once, lexicographically.
pub fn enumerate_permutations(n: usize, limits: &Limits) -> Result<Permutations> {
    limits.check_enumeration(n)?;
    Ok(Permutations::rank_range(n, 0, usize::MAX))
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub(crate) fn factorial_usize(n: usize) -> Option<usize> {
    (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k))
}

/// `x (x-1) .. (x-p+1)`; `1` for `p = 0` and `0` for `p > x`.
pub fn falling_power(x: u64, p: u64) -> BigUint {
    if p > x {
        return BigUint::ZERO;
    }
    ((x - p + 1)..=x).fold(BigUint::one(), |acc, v| acc * v)
}

/// [`falling_power`] in machine integers; `None` on overflow.
pub fn falling_power_u128(x: u64, p: u64) -> Option<u128> {
    if p > x {
        return Some(0);
    }
    ((x - p + 1)..=x).try_fold(1u128, |acc, v| acc.checked_mul(u128::from(v)))
}

/// Number of permutations of degree `n` with cycle type `lambda`: `n! / z_lambda`.
pub fn count_with_cycle_type(lambda: &CycleType) -> BigUint {
    factorial(lambda.degree() as u64) / lambda.centralizer_order()
}

/// Largest degree for which [`CycleTupleChoice::code`] is injective.
pub const MAX_CODED_DEGREE: usize = 25;

/// For each `k` with `p_k > 0`, an ordered tuple of distinct canonical `k`-cycles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleTupleChoice {
    tuples: BTreeMap<usize, Vec<Cycle>>,
}

impl CycleTupleChoice {
    pub fn new(tuples: BTreeMap<usize, Vec<Cycle>>) -> Self {
        CycleTupleChoice {
            tuples: tuples.into_iter().filter(|(_, v)| !v.is_empty()).collect(),
        }
    }

    pub fn tuples(&self) -> &BTreeMap<usize, Vec<Cycle>> {
        &self.tuples
    }

    pub fn cycles(&self) -> impl Iterator<Item = &Cycle> {
        self.tuples.values().flatten()
    }

    pub fn relabel(&self, tau: &Permutation) -> CycleTupleChoice {
        CycleTupleChoice {
            tuples: self
                .tuples
                .iter()
                .map(|(&k, cs)| (k, cs.iter().map(|c| c.relabel(tau)).collect()))
                .collect(),
        }
    }

    /// The chosen cycles in order, five bits per point. For a fixed `p` and degree at most
    /// [`MAX_CODED_DEGREE`], two choices are equal iff their codes are.
    pub fn code(&self) -> u128 {
        self.code_under(|a| a)
    }

    /// `self.relabel(tau).code()` without building the relabelled choice.
    pub fn relabel_code(&self, tau: &Permutation) -> u128 {
        self.code_under(|a| tau.apply(a))
    }

    fn code_under(&self, f: impl Fn(usize) -> usize) -> u128 {
        let mut code = 0u128;
        let mut buf = [0usize; MAX_CODED_DEGREE];
        for c in self.cycles() {
            let len = c.len();
            for (slot, &a) in buf.iter_mut().zip(&c.entries) {
                *slot = f(a);
            }
            let start = (0..len).min_by_key(|&i| buf[i]).unwrap_or(0);
            for i in 0..len {
                code = (code << 5) | buf[(start + i) % len] as u128;
            }
        }
        code
    }

    /// Whether every chosen cycle is a cycle of `sigma` of its stated length and the cycles
    /// within each tuple are distinct.
    pub fn is_valid_for(&self, sigma: &Permutation) -> bool {
        let cycles = sigma.cycle_decomposition();
        self.tuples.iter().all(|(&k, cs)| {
            let mut sorted = cs.clone();
            sorted.sort();
            sorted.dedup();
            sorted.len() == cs.len() && cs.iter().all(|c| c.len() == k && cycles.contains(c))
        })
    }
}

/// Every choice of an ordered `p_k`-tuple of distinct `k`-cycles of `sigma`, for all `k`.
///
/// The count is `prod_k falling_power(c_k(sigma), p_k)`. Order: lexicographic in the
/// positions of the chosen cycles within the canonical decomposition, smallest `k` first.
pub fn list_cycle_tuples(sigma: &Permutation, p: &PVector) -> Result<Vec<CycleTupleChoice>> {
    p.check_degree(sigma.degree())?;
    let decomposition = sigma.cycle_decomposition();
    let mut per_length: Vec<(usize, Vec<Vec<Cycle>>)> = Vec::new();
    for k in 1..=p.degree() {
        let pk = p.get(k);
        if pk == 0 {
            continue;
        }
        let of_len: Vec<&Cycle> = decomposition.iter().filter(|c| c.len() == k).collect();
        let arrangements = arrangements(&of_len, pk);
        if arrangements.is_empty() {
            return Ok(Vec::new());
        }
        per_length.push((k, arrangements));
    }

    let mut out = vec![BTreeMap::new()];
    for (k, options) in per_length {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for partial in &out {
            for opt in &options {
                let mut m: BTreeMap<usize, Vec<Cycle>> = partial.clone();
                m.insert(k, opt.clone());
                next.push(m);
            }
        }
        out = next;
    }
    Ok(out.into_iter().map(|tuples| CycleTupleChoice { tuples }).collect())
}

/// Ordered `r`-tuples of distinct items.
fn arrangements(items: &[&Cycle], r: usize) -> Vec<Vec<Cycle>> {
    fn rec(items: &[&Cycle], r: usize, used: &mut Vec<bool>, cur: &mut Vec<Cycle>, out: &mut Vec<Vec<Cycle>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in 0..items.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            cur.push(items[i].clone());
            rec(items, r, used, cur, out);
            cur.pop();
            used[i] = false;
        }
    }
    let mut out = Vec::new();
    if r > items.len() {
        return out;
    }
    rec(items, r, &mut vec![false; items.len()], &mut Vec::new(), &mut out);
    out
}
