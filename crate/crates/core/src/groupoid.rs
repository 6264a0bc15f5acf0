//! Finite groupoids up to equivalence, group actions and action groupoids.
//!
//! A finite groupoid is equivalent to a coproduct of one-object groupoids `B(G_i)`, and its
//! cardinality is `sum_i 1 / |G_i|`. [`GroupoidSkeleton`] keeps exactly the data that
//! cardinality depends on: the multiset of automorphism-group orders, one per isomorphism
//! class of objects, each with an optional label recording which group it was.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::permutation::CycleType;
use crate::scalar::serde_biguint;
use crate::{Error, FiniteGroup, GroupElement, Limits, Rational, Result, Scalar};

/// What a skeleton component stands for.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    /// Conjugacy class of `S_n` given by its parts, largest first.
    Partition(Vec<usize>),
    /// A named group, e.g. `Z/3`.
    Group(String),
    /// Orbit of an action, by its smallest carrier index.
    Orbit(usize),
    /// Component of a product groupoid.
    Product(Vec<Label>),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Partition(parts) => {
                let parts: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            Label::Group(name) => write!(f, "B({name})"),
            Label::Orbit(rep) => write!(f, "orbit[{rep}]"),
            Label::Product(items) => {
                let items: Vec<String> = items.iter().map(|l| l.to_string()).collect();
                write!(f, "{}", items.join(" x "))
            }
        }
    }
}

fn pair_labels(a: &Option<Label>, b: &Option<Label>) -> Option<Label> {
    let flatten = |l: &Label, out: &mut Vec<Label>| match l {
        Label::Product(items) => out.extend(items.iter().cloned()),
        other => out.push(other.clone()),
    };
    let mut items = Vec::new();
    for l in [a, b].into_iter().flatten() {
        flatten(l, &mut items);
    }
    match items.len() {
        0 => None,
        1 => items.pop(),
        _ => Some(Label::Product(items)),
    }
}

/// One isomorphism class of objects: `B(G_i)` with `|G_i| = aut_order`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    #[serde(with = "serde_biguint")]
    pub aut_order: BigUint,
    #[serde(default)]
    pub label: Option<Label>,
}

impl Component {
    pub fn new(aut_order: impl Into<BigUint>, label: Option<Label>) -> Self {
        Component {
            aut_order: aut_order.into(),
            label,
        }
    }
}

/// A finite groupoid presented as `sum_i B(G_i)`. The empty skeleton is the empty groupoid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidSkeleton {
    components: Vec<Component>,
}

impl GroupoidSkeleton {
    pub fn empty() -> Self {
        GroupoidSkeleton::default()
    }

    /// Rejects components with `aut_order == 0`.
    pub fn new(components: Vec<Component>) -> Result<Self> {
        if components.iter().any(|c| c.aut_order.is_zero()) {
            return Err(Error::Precondition("automorphism group orders must be positive".into()));
        }
        Ok(GroupoidSkeleton { components })
    }

    /// Unlabelled components with the given orders.
    pub fn from_orders(orders: &[u64]) -> Result<Self> {
        GroupoidSkeleton::new(orders.iter().map(|&o| Component::new(o, None)).collect())
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// The automorphism orders as a sorted multiset.
    pub fn aut_orders(&self) -> Vec<BigUint> {
        let mut orders: Vec<BigUint> = self.components.iter().map(|c| c.aut_order.clone()).collect();
        orders.sort();
        orders
    }

    /// `sum_i 1 / aut_order_i`, zero for the empty groupoid.
    pub fn cardinality<S: Scalar>(&self) -> S {
        self.components
            .iter()
            .fold(S::zero(), |acc, c| acc + S::recip_of(&c.aut_order))
    }

    pub fn cardinality_exact(&self) -> Rational {
        self.cardinality::<Rational>()
    }

    /// The sum `self + other`.
    pub fn coproduct(&self, other: &GroupoidSkeleton) -> GroupoidSkeleton {
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        GroupoidSkeleton { components }
    }

    /// `self x other`, using `B(G) x B(H) = B(G x H)` on each pair of components.
    pub fn product(&self, other: &GroupoidSkeleton) -> GroupoidSkeleton {
        let mut components = Vec::with_capacity(self.len() * other.len());
        for a in &self.components {
            for b in &other.components {
                components.push(Component {
                    aut_order: &a.aut_order * &b.aut_order,
                    label: pair_labels(&a.label, &b.label),
                });
            }
        }
        GroupoidSkeleton { components }
    }

    /// The `p`-fold product; `p = 0` gives the terminal groupoid `{1}`.
    pub fn power(&self, p: usize) -> GroupoidSkeleton {
        (0..p).fold(GroupoidSkeleton::terminal(), |acc, _| acc.product(self))
    }

    /// One object with trivial automorphisms.
    pub fn terminal() -> GroupoidSkeleton {
        GroupoidSkeleton {
            components: vec![Component::new(1u32, None)],
        }
    }

    /// Same components with labels dropped.
    pub fn unlabeled(&self) -> GroupoidSkeleton {
        GroupoidSkeleton {
            components: self
                .components
                .iter()
                .map(|c| Component::new(c.aut_order.clone(), None))
                .collect(),
        }
    }
}

impl fmt::Display for GroupoidSkeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| match &c.label {
                Some(l) => format!("{l}:{}", c.aut_order),
                None => c.aut_order.to_string(),
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `B(G)`: one object whose automorphism group is `G`.
pub fn delooping(group: &FiniteGroup, label: Option<Label>) -> GroupoidSkeleton {
    GroupoidSkeleton {
        components: vec![Component::new(group.order(), label)],
    }
}

/// Equality of automorphism-order multisets.
///
/// This is necessary for equivalence and is all the cardinality sees; it cannot tell apart
/// non-isomorphic groups of equal order. Use [`skeletons_equivalent_strict`] to also compare
/// labels.
pub fn skeletons_equivalent(a: &GroupoidSkeleton, b: &GroupoidSkeleton) -> bool {
    a.aut_orders() == b.aut_orders()
}

/// Equality of `(aut_order, label)` multisets.
pub fn skeletons_equivalent_strict(a: &GroupoidSkeleton, b: &GroupoidSkeleton) -> bool {
    let key = |s: &GroupoidSkeleton| {
        let mut v: Vec<(BigUint, Option<Label>)> = s
            .components
            .iter()
            .map(|c| (c.aut_order.clone(), c.label.clone()))
            .collect();
        v.sort();
        v
    };
    key(a) == key(b)
}

/// Skeleton of `Perm_n`, the groupoid of `n`-element sets with a permutation.
///
/// One component per partition of `n`, labelled by it, with automorphism order the
/// centraliser order `z`. Negative `n` gives the empty groupoid.
pub fn perm_groupoid_skeleton(n: i64, limits: &Limits) -> Result<GroupoidSkeleton> {
    if n < 0 {
        return Ok(GroupoidSkeleton::empty());
    }
    let n = n as usize;
    limits.check_partition(n)?;
    Ok(GroupoidSkeleton {
        components: CycleType::all_of_degree(n)
            .into_iter()
            .map(|t| Component::new(t.centralizer_order(), Some(Label::Partition(t.parts()))))
            .collect(),
    })
}

/// How the action laws were checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ValidationMode {
    Exhaustive {
        checks: u64,
    },
    /// The composition law was checked for every first factor against each of `generators`
    /// group generators as second factor. Together with the identity law this implies it on
    /// the whole `population`.
    Generators {
        checks: u64,
        generators: usize,
        population: u64,
    },
    /// Only `checks` of the `population` law instances were tested.
    Sampled {
        checks: u64,
        population: u64,
    },
}

impl ValidationMode {
    pub fn is_exhaustive(&self) -> bool {
        matches!(self, ValidationMode::Exhaustive { .. })
    }

    /// Exhaustive or generator-reduced: the laws are proved, not sampled.
    pub fn is_complete(&self) -> bool {
        !matches!(self, ValidationMode::Sampled { .. })
    }
}

/// Seed of the generator drawing law instances when validation is sampled.
pub(crate) const SAMPLING_SEED: u64 = 0x5eed_0fa1_1a55;

/// A finite group acting on `{0, .., carrier_len - 1}` from the left.
#[derive(Clone, Debug)]
pub struct GroupAction {
    group: FiniteGroup,
    carrier_len: usize,
    /// `table[g * carrier_len + s] = g . s`
    table: Vec<u32>,
    validation: ValidationMode,
}

impl GroupAction {
    /// Tabulates `act` and validates the identity and compatibility laws.
    pub fn from_fn<F>(group: FiniteGroup, carrier_len: usize, act: F, limits: &Limits) -> Result<Self>
    where
        F: Fn(GroupElement, usize) -> usize + Sync,
    {
        if carrier_len > u32::MAX as usize {
            return Err(Error::CapExceeded {
                what: "carrier size",
                value: carrier_len as u64,
                cap: u64::from(u32::MAX),
            });
        }
        let table: Vec<u32> = (0..group.order())
            .into_par_iter()
            .flat_map_iter(|g| {
                let act = &act;
                (0..carrier_len).map(move |s| act(GroupElement(g), s) as u32)
            })
            .collect();
        Self::from_table(group, carrier_len, table, limits)
    }

    /// `table[g * carrier_len + s]` is the image of `s` under `g`.
    pub fn from_table(group: FiniteGroup, carrier_len: usize, table: Vec<u32>, limits: &Limits) -> Result<Self> {
        if table.len() != group.order() * carrier_len {
            return Err(Error::InvalidAction(format!(
                "table has {} entries, expected {}",
                table.len(),
                group.order() * carrier_len
            )));
        }
        if let Some(pos) = table.iter().position(|&t| t as usize >= carrier_len) {
            return Err(Error::InvalidAction(format!(
                "element {} sends {} outside the carrier",
                pos / carrier_len,
                pos % carrier_len
            )));
        }
        let mut action = GroupAction {
            group,
            carrier_len,
            table,
            validation: ValidationMode::Exhaustive { checks: 0 },
        };
        action.validation = action.validate(limits)?;
        Ok(action)
    }

    /// `G` acting on its own elements by conjugation, `g . s = g s g^-1`.
    pub fn conjugation(group: &FiniteGroup, limits: &Limits) -> Result<Self> {
        let g2 = group.clone();
        GroupAction::from_fn(
            group.clone(),
            group.order(),
            move |g, s| g2.conjugate_index(s, g.0),
            limits,
        )
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn carrier_len(&self) -> usize {
        self.carrier_len
    }

    pub fn validation(&self) -> ValidationMode {
        self.validation
    }

    pub fn act(&self, g: GroupElement, s: usize) -> usize {
        self.table[g.0 * self.carrier_len + s] as usize
    }

    /// Checks `e . s = s` for every `s`, then `g . (h . s) = (g h) . s` on all triples. Above
    /// `max_validation_checks` triples `h` runs over a generating set only, and if that is
    /// still too many a seeded sample is drawn.
    fn validate(&self, limits: &Limits) -> Result<ValidationMode> {
        let m = self.carrier_len;
        let e = self.group.identity();
        if let Some(s) = (0..m).find(|&s| self.act(e, s) != s) {
            return Err(Error::InvalidAction(format!(
                "identity moves {s} to {}",
                self.act(e, s)
            )));
        }
        let order = self.group.order() as u64;
        let population = order * order * m as u64;
        let check = |g: usize, h: usize, s: usize| -> Result<()> {
            let (g, h) = (GroupElement(g), GroupElement(h));
            let lhs = self.act(g, self.act(h, s));
            let rhs = self.act(self.group.mul(g, h), s);
            if lhs != rhs {
                return Err(Error::InvalidAction(format!(
                    "compatibility fails at (g, h, s) = ({g}, {h}, {s}): g.(h.s) = {lhs}, (gh).s = {rhs}"
                )));
            }
            Ok(())
        };
        if population <= limits.max_validation_checks {
            let n = self.group.order();
            let sweep = |g: usize| -> Result<()> {
                for h in 0..n {
                    for s in 0..m {
                        check(g, h, s)?;
                    }
                }
                Ok(())
            };
            if (0..n).into_par_iter().try_for_each(sweep).is_err() {
                // report the lexicographically first failure
                (0..n).try_for_each(sweep)?;
            }
            return Ok(ValidationMode::Exhaustive { checks: population });
        }
        let gens = self.group.generators();
        let reduced = order * gens.len() as u64 * m as u64;
        if reduced <= limits.max_validation_checks {
            // g.(s.x) = (gs).x for generators s extends to all h by induction on word length
            let sweep = |g: usize| -> Result<()> {
                for s in &gens {
                    for x in 0..m {
                        check(g, s.0, x)?;
                    }
                }
                Ok(())
            };
            let n = self.group.order();
            if (0..n).into_par_iter().try_for_each(sweep).is_err() {
                (0..n).try_for_each(sweep)?;
            }
            Ok(ValidationMode::Generators {
                checks: reduced,
                generators: gens.len(),
                population,
            })
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
            let n = self.group.order();
            for _ in 0..limits.max_validation_checks {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..m))?;
            }
            Ok(ValidationMode::Sampled {
                checks: limits.max_validation_checks,
                population,
            })
        }
    }
}

/// An orbit of an action, with the stabiliser of its representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    /// Smallest carrier index in the orbit.
    pub representative: usize,
    pub size: usize,
    pub stabilizer_order: usize,
}

/// Orbits in order of their representatives.
pub fn orbit_decomposition(action: &GroupAction) -> Vec<Orbit> {
    let m = action.carrier_len();
    let group = action.group();
    let mut seen = vec![false; m];
    let mut orbits = Vec::new();
    for s in 0..m {
        if seen[s] {
            continue;
        }
        let mut size = 0;
        let mut stabilizer_order = 0;
        for g in group.elements() {
            let t = action.act(g, s);
            if t == s {
                stabilizer_order += 1;
            }
            if !seen[t] {
                seen[t] = true;
                size += 1;
            }
        }
        orbits.push(Orbit {
            representative: s,
            size,
            stabilizer_order,
        });
    }
    orbits
}

/// Skeleton of the action groupoid `S // G`: one component per orbit, with the stabiliser
/// of the orbit representative as automorphism group.
pub fn weak_quotient(action: &GroupAction) -> GroupoidSkeleton {
    weak_quotient_from_orbits(&orbit_decomposition(action))
}

pub fn weak_quotient_from_orbits(orbits: &[Orbit]) -> GroupoidSkeleton {
    GroupoidSkeleton {
        components: orbits
            .iter()
            .map(|o| Component::new(o.stabilizer_order, None))
            .collect(),
    }
}

/// `sum_s 1 / |out(s)|` over the objects of `S // G`, counting the morphisms out of each
/// object by target.
pub fn cardinality_via_outdegrees<S: Scalar>(action: &GroupAction) -> S {
    let m = action.carrier_len();
    let mut hom_counts = vec![0u64; m];
    let mut total = S::zero();
    for s in 0..m {
        // each g is one morphism s -> g.s
        hom_counts.iter_mut().for_each(|c| *c = 0);
        for g in action.group().elements() {
            hom_counts[action.act(g, s)] += 1;
        }
        let out_degree: u64 = hom_counts.iter().sum();
        total = total + S::one() / S::from_u64(out_degree);
    }
    total
}

/// `|S| / |G|`.
pub fn action_ratio(action: &GroupAction) -> Rational {
    Rational::new(
        (action.carrier_len() as u64).into(),
        (action.group().order() as u64).into(),
    )
}

/// Whether `stabilizer_order * orbit_size == |G|` for every orbit.
pub fn orbit_stabilizer_holds(orbits: &[Orbit], group_order: usize) -> bool {
    orbits.iter().all(|o| o.stabilizer_order * o.size == group_order)
}
