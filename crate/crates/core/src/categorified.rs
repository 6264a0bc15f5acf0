//! The groupoid of permutations decorated with ordered tuples of distinct cycles.
//!
//! For `p = (p_1, .., p_n)`, an element of `Q_p` is a permutation `sigma` of `{0, .., n-1}`
//! together with, for each `k`, an ordered `p_k`-tuple of distinct `k`-cycles of `sigma`.
//! `S_n` acts on `Q_p` by conjugating `sigma` and relabelling the chosen cycles, and the
//! groupoid `C_p` of such decorated `n`-element sets is modelled by `Q_p // S_n`. Its
//! skeleton is compared against `Perm_{n-|p|} x prod_k B(Z/k)^{p_k}`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cycle_stats::brute_force_sum;
use crate::groupoid::{
    cardinality_via_outdegrees, delooping, orbit_decomposition, perm_groupoid_skeleton, skeletons_equivalent,
    weak_quotient_from_orbits, Label, Orbit, ValidationMode,
};
use crate::permutation::{enumerate_permutations, factorial, list_cycle_tuples, CycleTupleChoice};
use crate::scalar::serde_rational;
use crate::{FiniteGroup, GroupAction, GroupoidSkeleton, Limits, PVector, Permutation, Rational, Result};

/// A permutation with a chosen ordered tuple of distinct `k`-cycles for each `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DecoratedPermutation {
    pub sigma: Permutation,
    pub choice: CycleTupleChoice,
}

impl DecoratedPermutation {
    pub fn is_valid(&self) -> bool {
        self.choice.is_valid_for(&self.sigma)
    }
}

/// `tau . (sigma, cycles) = (tau sigma tau^-1, tau(cycles))`.
pub fn q_action(tau: &Permutation, d: &DecoratedPermutation) -> Result<DecoratedPermutation> {
    Ok(DecoratedPermutation {
        sigma: d.sigma.conjugate_by(tau)?,
        choice: d.choice.relabel(tau),
    })
}

/// The finite set `Q_p` with an index for lookups.
#[derive(Clone, Debug)]
pub struct DecoratedSet {
    n: usize,
    p: PVector,
    elements: Vec<DecoratedPermutation>,
    index: HashMap<DecoratedPermutation, usize>,
}

impl DecoratedSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> &PVector {
        &self.p
    }

    pub fn elements(&self) -> &[DecoratedPermutation] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, d: &DecoratedPermutation) -> Option<usize> {
        self.index.get(d).copied()
    }
}

/// Every decorated permutation, ordered by `sigma` (lexicographic) and then by choice as
/// listed by [`list_cycle_tuples`].
pub fn build_q(n: usize, p: &PVector, limits: &Limits) -> Result<DecoratedSet> {
    p.check_degree(n)?;
    let mut elements = Vec::new();
    if p.weight() <= n {
        for sigma in enumerate_permutations(n, limits)? {
            for choice in list_cycle_tuples(&sigma, p)? {
                elements.push(DecoratedPermutation {
                    sigma: sigma.clone(),
                    choice,
                });
            }
        }
    } else {
        limits.check_enumeration(n)?;
    }
    let index = elements.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
    Ok(DecoratedSet {
        n,
        p: p.clone(),
        elements,
        index,
    })
}

/// `S_n` acting on `Q_p` by [`q_action`], validated.
pub fn q_group_action(q: &DecoratedSet, limits: &Limits) -> Result<GroupAction> {
    let group = FiniteGroup::symmetric(q.n())?;
    let perms: Vec<Permutation> = enumerate_permutations(q.n(), limits)?.collect();
    // q_action without allocating: conjugate sigma in the group table, relabel the choice as
    // a packed code and find it among the decorations of the conjugate
    let ranks: Vec<usize> = q.elements.iter().map(|d| d.sigma.lex_rank()).collect();
    let codes: Vec<u128> = q.elements.iter().map(|d| d.choice.code()).collect();
    let mut offsets = vec![0; perms.len() + 1];
    for &r in &ranks {
        offsets[r + 1] += 1;
    }
    for i in 0..perms.len() {
        offsets[i + 1] += offsets[i];
    }
    let g2 = group.clone();
    GroupAction::from_fn(
        group,
        q.len(),
        |g, s| {
            let target = g2.conjugate_index(ranks[s], g.0);
            let code = q.elements[s].choice.relabel_code(&perms[g.0]);
            let range = offsets[target]..offsets[target + 1];
            range.start
                + codes[range]
                    .iter()
                    .position(|&c| c == code)
                    .expect("Q is closed under the action")
        },
        limits,
    )
}

/// Skeleton of `C_p`, computed as the weak quotient `Q_p // S_n`.
pub fn c_groupoid_skeleton(n: usize, p: &PVector, limits: &Limits) -> Result<GroupoidSkeleton> {
    let q = build_q(n, p, limits)?;
    let action = q_group_action(&q, limits)?;
    Ok(weak_quotient_from_orbits(&orbit_decomposition(&action)))
}

/// Skeleton of `Perm_{n-|p|} x prod_k B(Z/k)^{p_k}`; empty when `|p| > n`.
pub fn categorified_rhs_skeleton(n: usize, p: &PVector, limits: &Limits) -> Result<GroupoidSkeleton> {
    p.check_degree(n)?;
    let mut rhs = perm_groupoid_skeleton(n as i64 - p.weight() as i64, limits)?;
    for k in 1..=n {
        let pk = p.get(k);
        if pk == 0 {
            continue;
        }
        let zk = FiniteGroup::cyclic(k)?;
        let bz = delooping(&zk, Some(Label::Group(zk.name())));
        rhs = rhs.product(&bz.power(pk));
    }
    Ok(rhs)
}

/// Result of comparing `Q_p // S_n` against `Perm_{n-|p|} x prod_k B(Z/k)^{p_k}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategorifiedReport {
    pub n: usize,
    pub p: PVector,
    pub lhs_skeleton: GroupoidSkeleton,
    pub rhs_skeleton: GroupoidSkeleton,
    /// Automorphism-order multisets agree.
    pub equivalent: bool,
    #[serde(with = "serde_rational")]
    pub lhs_card: Rational,
    #[serde(with = "serde_rational")]
    pub rhs_card: Rational,
    /// `|Q_p // S_n|` again, from the out-degree formula.
    #[serde(with = "serde_rational")]
    pub outdegree_card: Rational,
    /// `|Q_p| / n!` equals the enumerated expectation of `prod_k c_k^(p_k falling)`.
    pub bridge_check: bool,
    pub q_size: usize,
    #[serde(with = "serde_rational")]
    pub expectation: Rational,
    pub orbits: Vec<Orbit>,
    pub orbit_stabilizer: bool,
    pub action_validation: ValidationMode,
}

impl CategorifiedReport {
    pub fn passed(&self) -> bool {
        self.equivalent
            && self.lhs_card == self.rhs_card
            && self.outdegree_card == self.lhs_card
            && self.bridge_check
            && self.orbit_stabilizer
    }
}

/// Builds both sides and every cross-check for one `(n, p)`.
pub fn verify_categorified(n: usize, p: &PVector, limits: &Limits) -> Result<CategorifiedReport> {
    let q = build_q(n, p, limits)?;
    let action = q_group_action(&q, limits)?;
    let orbits = orbit_decomposition(&action);
    let lhs_skeleton = weak_quotient_from_orbits(&orbits);
    let rhs_skeleton = categorified_rhs_skeleton(n, p, limits)?;

    let n_fact = factorial(n as u64);
    let bridge = Rational::new((q.len() as u64).into(), n_fact.clone().into());
    let sum = brute_force_sum(n, p, limits)?;
    let expectation = Rational::new(sum.into(), n_fact.into());
    let group_order = action.group().order();

    Ok(CategorifiedReport {
        n,
        p: p.clone(),
        equivalent: skeletons_equivalent(&lhs_skeleton, &rhs_skeleton),
        lhs_card: lhs_skeleton.cardinality_exact(),
        outdegree_card: cardinality_via_outdegrees(&action),
        rhs_card: rhs_skeleton.cardinality_exact(),
        bridge_check: bridge == expectation,
        q_size: q.len(),
        expectation,
        orbit_stabilizer: orbits.iter().all(|o| o.size * o.stabilizer_order == group_order),
        orbits,
        action_validation: action.validation(),
        lhs_skeleton,
        rhs_skeleton,
    })
}

/// [`verify_categorified`] for every `p` with entries `<= max_entry` and weight
/// `<= max_weight`.
pub fn sweep_categorified(
    n: usize,
    max_entry: usize,
    max_weight: usize,
    limits: &Limits,
) -> Result<Vec<CategorifiedReport>> {
    PVector::all_bounded(n, max_entry, max_weight)
        .iter()
        .map(|p| verify_categorified(n, p, limits))
        .collect()
}
