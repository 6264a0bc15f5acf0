//! Conjugation-equivariant structures `F: G // G -> FinSet` and their category of elements.
//!
//! A functor is given extensionally: a finite fiber `F(g)` for every `g`, and for every
//! `h` and `g` a bijection `F(h): F(g) -> F(h g h^-1)`. Its category of elements has objects
//! `(g, x)` with `x` in `F(g)` and one morphism `(g, x) -> (h g h^-1, F(h)(x))` per `h`, so it
//! is the action groupoid of `G` acting on those pairs. The expected fiber size over uniform
//! `g` equals the cardinality of that groupoid.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::group::CayleySpec;
use crate::groupoid::{
    cardinality_via_outdegrees, orbit_decomposition, weak_quotient_from_orbits, Component, Orbit, ValidationMode,
    SAMPLING_SEED,
};
use crate::permutation::{enumerate_permutations, list_cycle_tuples, CycleTupleChoice};
use crate::scalar::serde_rational;
use crate::{
    Error, FiniteGroup, GroupAction, GroupElement, GroupoidSkeleton, Limits, PVector, Rational, Result, Scalar,
};

/// An object `(g, x)` of the category of elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElementsObject {
    pub g: GroupElement,
    pub x: usize,
}

/// Extensional functor `G // G -> FinSet`.
#[derive(Clone, Debug)]
pub struct EquivariantFunctor {
    group: FiniteGroup,
    fiber_sizes: Vec<usize>,
    /// `offsets[g]` is the first flat index of `F(g)`; `offsets[order]` is the total.
    offsets: Vec<usize>,
    /// `transports[h][offsets[g] + x]` is `F(h)(x)` as an index into `F(h g h^-1)`.
    transports: Vec<Vec<u32>>,
    labels: Option<Vec<String>>,
}

impl EquivariantFunctor {
    /// Builds from nested arrays `transports[h][g][x]`, checking shapes only: one fiber per
    /// element, each transport an injective map `F(g) -> F(h g h^-1)`. Functor laws are
    /// checked by [`validate_functor`].
    pub fn new(group: FiniteGroup, fiber_sizes: Vec<usize>, transports: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let order = group.order();
        if fiber_sizes.len() != order {
            return Err(Error::InvalidFunctor(format!(
                "{} fibers given for a group of order {order}",
                fiber_sizes.len()
            )));
        }
        if transports.len() != order {
            return Err(Error::InvalidFunctor(format!(
                "transports given for {} of {order} group elements",
                transports.len()
            )));
        }
        let offsets = offsets_of(&fiber_sizes);
        let mut flat = Vec::with_capacity(order);
        for (h, per_g) in transports.into_iter().enumerate() {
            if per_g.len() != order {
                return Err(Error::InvalidFunctor(format!(
                    "transport of h={h} covers {} of {order} fibers",
                    per_g.len()
                )));
            }
            let mut row = Vec::with_capacity(offsets[order]);
            for (g, map) in per_g.into_iter().enumerate() {
                let target = group.conjugate_index(g, h);
                check_injection(&map, fiber_sizes[g], fiber_sizes[target], h, g)?;
                row.extend(map.into_iter().map(|v| v as u32));
            }
            flat.push(row);
        }
        Ok(EquivariantFunctor {
            group,
            fiber_sizes,
            offsets,
            transports: flat,
            labels: None,
        })
    }

    /// Builds from closures: `fiber_size(g)` and `transport(h, g, x)`.
    pub fn from_fn<S, T>(group: FiniteGroup, fiber_size: S, transport: T) -> Result<Self>
    where
        S: Fn(GroupElement) -> usize,
        T: Fn(GroupElement, GroupElement, usize) -> usize + Sync,
    {
        let order = group.order();
        let fiber_sizes: Vec<usize> = group.elements().map(fiber_size).collect();
        let offsets = offsets_of(&fiber_sizes);
        let rows: Vec<Vec<u32>> = (0..order)
            .into_par_iter()
            .map(|h| {
                let mut row = Vec::with_capacity(offsets[order]);
                for (g, &size) in fiber_sizes.iter().enumerate() {
                    for x in 0..size {
                        row.push(transport(GroupElement(h), GroupElement(g), x) as u32);
                    }
                }
                row
            })
            .collect();
        for (h, row) in rows.iter().enumerate() {
            for g in 0..order {
                let map: Vec<usize> = row[offsets[g]..offsets[g + 1]].iter().map(|&v| v as usize).collect();
                let target = group.conjugate_index(g, h);
                check_injection(&map, fiber_sizes[g], fiber_sizes[target], h, g)?;
            }
        }
        Ok(EquivariantFunctor {
            group,
            fiber_sizes,
            offsets,
            transports: rows,
            labels: None,
        })
    }

    /// Runs [`validate_functor`] and fails with the first violation.
    pub fn validated(self, limits: &Limits) -> Result<Self> {
        let report = validate_functor(&self, limits);
        match report.violation {
            Some(v) => Err(Error::InvalidFunctor(v.to_string())),
            None => Ok(self),
        }
    }

    /// Attaches one human-readable label per object, in flat order.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.total_size() {
            return Err(Error::InvalidFunctor(format!(
                "{} labels for {} fiber elements",
                labels.len(),
                self.total_size()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn fiber_size(&self, g: GroupElement) -> usize {
        self.fiber_sizes[g.0]
    }

    pub fn fiber_sizes(&self) -> &[usize] {
        &self.fiber_sizes
    }

    /// `sum_g |F(g)|`.
    pub fn total_size(&self) -> usize {
        self.offsets[self.group.order()]
    }

    /// `F(h)(x)` for `x` in `F(g)`, as an index into `F(h g h^-1)`.
    pub fn transport(&self, h: GroupElement, g: GroupElement, x: usize) -> usize {
        self.transports[h.0][self.offsets[g.0] + x] as usize
    }

    pub fn label(&self, obj: ElementsObject) -> Option<&str> {
        self.labels.as_ref().map(|l| l[self.offsets[obj.g.0] + obj.x].as_str())
    }

    fn flat_index(&self, g: usize, x: usize) -> usize {
        self.offsets[g] + x
    }
}

fn offsets_of(sizes: &[usize]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    offsets.push(0);
    for &s in sizes {
        acc += s;
        offsets.push(acc);
    }
    offsets
}

fn check_injection(map: &[usize], source: usize, target: usize, h: usize, g: usize) -> Result<()> {
    if map.len() != source {
        return Err(Error::InvalidFunctor(format!(
            "transport (h={h}, g={g}) has {} entries, fiber has {source}",
            map.len()
        )));
    }
    let mut seen = vec![false; target];
    for &v in map {
        if v >= target || std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidFunctor(format!(
                "transport (h={h}, g={g}) is not injective into a fiber of size {target}"
            )));
        }
    }
    Ok(())
}

/// A failed functor law, with its witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum FunctorViolation {
    /// `|F(g)| != |F(h g h^-1)|`.
    FiberSize { h: usize, g: usize },
    /// `F(e)` moves `x` in `F(g)`.
    Identity { g: usize, x: usize },
    /// `F(h2)(F(h1)(x)) != F(h2 h1)(x)` for `x` in `F(g)`.
    Composition { h2: usize, h1: usize, g: usize, x: usize },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorViolation::FiberSize { h, g } => {
                write!(f, "fiber size not conjugation invariant at (h, g) = ({h}, {g})")
            }
            FunctorViolation::Identity { g, x } => {
                write!(f, "identity transport moves element {x} of F({g})")
            }
            FunctorViolation::Composition { h2, h1, g, x } => write!(
                f,
                "functoriality fails at triple (h2, h1, g) = ({h2}, {h1}, {g}) on element {x}"
            ),
        }
    }
}

/// Outcome of [`validate_functor`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorValidation {
    pub valid: bool,
    pub mode: ValidationMode,
    pub violation: Option<FunctorViolation>,
}

/// Checks fiber-size invariance, `F(e) = id` and `F(h2) F(h1) = F(h2 h1)`.
///
/// Composition is checked on every `(h2, h1, g, x)` when there are at most
/// `limits.max_validation_checks` of them, otherwise with `h1` restricted to a generating set
/// (which suffices, as for group actions), and on a seeded sample if even that is too many.
/// Outside sampling the reported violation is the one with the lowest `h2`.
pub fn validate_functor(f: &EquivariantFunctor, limits: &Limits) -> FunctorValidation {
    let group = &f.group;
    let order = group.order();
    let fail = |mode, v| FunctorValidation {
        valid: false,
        mode,
        violation: Some(v),
    };
    let first = ValidationMode::Exhaustive { checks: 0 };

    for h in 0..order {
        for g in 0..order {
            if f.fiber_sizes[g] != f.fiber_sizes[group.conjugate_index(g, h)] {
                return fail(first, FunctorViolation::FiberSize { h, g });
            }
        }
    }
    let e = group.identity();
    for g in group.elements() {
        for x in 0..f.fiber_sizes[g.0] {
            if f.transport(e, g, x) != x {
                return fail(first, FunctorViolation::Identity { g: g.0, x });
            }
        }
    }

    let check = |h2: usize, h1: usize, g: usize, x: usize| -> Option<FunctorViolation> {
        let g1 = group.conjugate_index(g, h1);
        let y = f.transports[h1][f.flat_index(g, x)] as usize;
        let lhs = f.transports[h2][f.flat_index(g1, y)];
        let h21 = group.mul_index(h2, h1);
        let rhs = f.transports[h21][f.flat_index(g, x)];
        (lhs != rhs).then_some(FunctorViolation::Composition { h2, h1, g, x })
    };
    let total = f.total_size() as u64;
    let population = (order as u64) * (order as u64) * total;
    let all: Vec<usize> = (0..order).collect();
    let gens: Vec<usize> = group.generators().into_iter().map(|g| g.0).collect();
    let reduced = (order as u64) * (gens.len() as u64) * total;
    let (second, mode) = if population <= limits.max_validation_checks {
        (all, Some(ValidationMode::Exhaustive { checks: population }))
    } else if reduced <= limits.max_validation_checks {
        let mode = ValidationMode::Generators {
            checks: reduced,
            generators: gens.len(),
            population,
        };
        (gens, Some(mode))
    } else {
        (Vec::new(), None)
    };
    if let Some(mode) = mode {
        // lowest h2 with a failure, then its first failing (h1, g, x)
        let violation = (0..order)
            .into_par_iter()
            .filter_map(|h2| {
                for &h1 in &second {
                    for g in 0..order {
                        for x in 0..f.fiber_sizes[g] {
                            if let Some(v) = check(h2, h1, g, x) {
                                return Some(v);
                            }
                        }
                    }
                }
                None
            })
            .min_by_key(|v| match v {
                FunctorViolation::Composition { h2, .. } => *h2,
                _ => usize::MAX,
            });
        match violation {
            Some(v) => fail(mode, v),
            None => FunctorValidation {
                valid: true,
                mode,
                violation: None,
            },
        }
    } else {
        let mode = ValidationMode::Sampled {
            checks: limits.max_validation_checks,
            population,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
        for _ in 0..limits.max_validation_checks {
            let flat = rng.gen_range(0..f.total_size());
            let g = f.offsets.partition_point(|&o| o <= flat) - 1;
            let x = flat - f.offsets[g];
            if let Some(v) = check(rng.gen_range(0..order), rng.gen_range(0..order), g, x) {
                return fail(mode, v);
            }
        }
        FunctorValidation {
            valid: true,
            mode,
            violation: None,
        }
    }
}

/// `(1/|G|) sum_g |F(g)|`.
pub fn expected_size<S: Scalar>(f: &EquivariantFunctor) -> S {
    S::from_u64(f.total_size() as u64) / S::from_u64(f.group.order() as u64)
}

/// The category of elements as a `G`-set: objects listed fiber by fiber, `h` acting by
/// `(g, x) -> (h g h^-1, F(h)(x))`.
#[derive(Clone, Debug)]
pub struct ElementsCategory {
    pub objects: Vec<ElementsObject>,
    pub action: GroupAction,
}

pub fn category_of_elements(f: &EquivariantFunctor, limits: &Limits) -> Result<ElementsCategory> {
    let group = f.group.clone();
    let order = group.order();
    let total = f.total_size();
    let mut objects = Vec::with_capacity(total);
    for g in 0..order {
        for x in 0..f.fiber_sizes[g] {
            objects.push(ElementsObject { g: GroupElement(g), x });
        }
    }
    let mut table = Vec::with_capacity(order * total);
    for h in 0..order {
        for obj in &objects {
            let g2 = group.conjugate_index(obj.g.0, h);
            let x2 = f.transports[h][f.flat_index(obj.g.0, obj.x)] as usize;
            table.push(f.flat_index(g2, x2) as u32);
        }
    }
    let action = GroupAction::from_table(group, total, table, limits)?;
    Ok(ElementsCategory { objects, action })
}

/// Skeleton of the category of elements read directly off its morphisms: objects are
/// grouped into isomorphism classes, and each class contributes `|Aut(g, x)|`, the number
/// of `h` with `h g h^-1 = g` and `F(h)(x) = x`.
pub fn elements_skeleton_direct(f: &EquivariantFunctor) -> GroupoidSkeleton {
    let group = &f.group;
    let order = group.order();
    let mut class = vec![usize::MAX; f.total_size()];
    let mut components = Vec::new();
    for g in 0..order {
        for x in 0..f.fiber_sizes[g] {
            let idx = f.flat_index(g, x);
            if class[idx] != usize::MAX {
                continue;
            }
            let mut automorphisms = 0u64;
            for h in 0..order {
                let g2 = group.conjugate_index(g, h);
                let x2 = f.transports[h][idx] as usize;
                class[f.flat_index(g2, x2)] = components.len();
                if g2 == g && x2 == x {
                    automorphisms += 1;
                }
            }
            components.push(Component::new(automorphisms, None));
        }
    }
    GroupoidSkeleton::new(components).expect("identity is always an automorphism")
}

/// Both sides of `E(|F|) = |int F|` for one functor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralTheoremReport {
    pub group: String,
    pub group_order: usize,
    pub total_objects: usize,
    #[serde(with = "serde_rational")]
    pub expected_size: Rational,
    #[serde(with = "serde_rational")]
    pub elements_cardinality: Rational,
    #[serde(with = "serde_rational")]
    pub outdegree_cardinality: Rational,
    pub equal: bool,
    /// `Ob(int F) // G`.
    pub quotient_skeleton: GroupoidSkeleton,
    /// `int F` from its morphism description.
    pub elements_skeleton: GroupoidSkeleton,
    pub orbits: Vec<Orbit>,
    pub orbit_stabilizer: bool,
    pub functor_validation: FunctorValidation,
}

impl GeneralTheoremReport {
    pub fn passed(&self) -> bool {
        self.functor_validation.valid
            && self.equal
            && self.outdegree_cardinality == self.expected_size
            && self.orbit_stabilizer
            && crate::groupoid::skeletons_equivalent(&self.quotient_skeleton, &self.elements_skeleton)
    }
}

/// Computes `E(|F|)` and `|int F|` exactly.
pub fn verify_general_theorem(f: &EquivariantFunctor, limits: &Limits) -> Result<GeneralTheoremReport> {
    let functor_validation = validate_functor(f, limits);
    let elements = category_of_elements(f, limits)?;
    let orbits = orbit_decomposition(&elements.action);
    let quotient_skeleton = weak_quotient_from_orbits(&orbits);
    let expected: Rational = expected_size(f);
    let card = quotient_skeleton.cardinality_exact();
    let order = f.group.order();
    Ok(GeneralTheoremReport {
        group: f.group.name(),
        group_order: order,
        total_objects: f.total_size(),
        equal: expected == card,
        expected_size: expected,
        elements_cardinality: card,
        outdegree_cardinality: cardinality_via_outdegrees(&elements.action),
        orbit_stabilizer: orbits.iter().all(|o| o.size * o.stabilizer_order == order),
        elements_skeleton: elements_skeleton_direct(f),
        quotient_skeleton,
        orbits,
        functor_validation,
    })
}

/// `F(g) = {*}` with identity transports.
pub fn trivial_functor(group: &FiniteGroup) -> EquivariantFunctor {
    EquivariantFunctor::from_fn(group.clone(), |_| 1, |_, _, _| 0).expect("one-point fibers")
}

/// On `S_n`: `F(sigma)` is the set of fixed points of `sigma` (ascending), transported by
/// relabelling `a -> tau(a)`.
pub fn make_fixed_point_functor(n: usize, limits: &Limits) -> Result<EquivariantFunctor> {
    let group = FiniteGroup::symmetric(n)?;
    let perms: Vec<_> = enumerate_permutations(n, limits)?.collect();
    let fixed: Vec<Vec<usize>> = perms
        .iter()
        .map(|s| (0..n).filter(|&a| s.apply(a) == a).collect())
        .collect();
    let labels = fixed.iter().flatten().map(|a| a.to_string()).collect();
    let g2 = group.clone();
    EquivariantFunctor::from_fn(
        group,
        |g| fixed[g.0].len(),
        |h, g, x| {
            let image = perms[h.0].apply(fixed[g.0][x]);
            let target = g2.conjugate_index(g.0, h.0);
            fixed[target]
                .binary_search(&image)
                .expect("relabelled fixed point is fixed")
        },
    )?
    .with_labels(labels)?
    .validated(limits)
}

/// On `S_n`: `F(sigma)` is the set of choices of an ordered `p_k`-tuple of distinct
/// `k`-cycles of `sigma` for every `k`, in [`list_cycle_tuples`] order, transported by
/// relabelling cycles.
pub fn make_cycle_tuple_functor(n: usize, p: &PVector, limits: &Limits) -> Result<EquivariantFunctor> {
    p.check_degree(n)?;
    let group = FiniteGroup::symmetric(n)?;
    let perms: Vec<_> = enumerate_permutations(n, limits)?.collect();
    let fibers = perms
        .iter()
        .map(|s| list_cycle_tuples(s, p))
        .collect::<Result<Vec<_>>>()?;
    let codes: Vec<Vec<u128>> = fibers
        .iter()
        .map(|choices| choices.iter().map(CycleTupleChoice::code).collect())
        .collect();
    let labels = fibers
        .iter()
        .flatten()
        .map(|c| serde_json::to_string(c).unwrap_or_default())
        .collect();
    let g2 = group.clone();
    EquivariantFunctor::from_fn(
        group,
        |g| fibers[g.0].len(),
        |h, g, x| {
            let image = fibers[g.0][x].relabel_code(&perms[h.0]);
            let target = g2.conjugate_index(g.0, h.0);
            codes[target]
                .iter()
                .position(|&c| c == image)
                .expect("relabelled choice is a choice")
        },
    )?
    .with_labels(labels)?
    .validated(limits)
}

/// Group part of a functor JSON document: a name such as `"S3"` or a Cayley table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Name(String),
    Cayley(CayleySpec),
}

impl GroupSpec {
    pub fn build(&self, limits: &Limits) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Name(name) => FiniteGroup::from_name(name),
            GroupSpec::Cayley(spec) => spec.build(limits.max_cayley_order),
        }
    }
}

/// JSON form: `{"group": .., "fibers": {g: size}, "transports": {h: {g: [..]}}}`. Every
/// fiber and every `(h, g)` transport must be present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    pub group: GroupSpec,
    pub fibers: BTreeMap<usize, usize>,
    pub transports: BTreeMap<usize, BTreeMap<usize, Vec<usize>>>,
}

impl FunctorSpec {
    pub fn of(f: &EquivariantFunctor) -> Self {
        let order = f.group.order();
        let group = GroupSpec::Cayley(CayleySpec::of(&f.group));
        let fibers = (0..order).map(|g| (g, f.fiber_sizes[g])).collect();
        let transports = (0..order)
            .map(|h| {
                let per_g = (0..order)
                    .map(|g| {
                        let map = (0..f.fiber_sizes[g])
                            .map(|x| f.transport(GroupElement(h), GroupElement(g), x))
                            .collect();
                        (g, map)
                    })
                    .collect();
                (h, per_g)
            })
            .collect();
        FunctorSpec {
            group,
            fibers,
            transports,
        }
    }

    /// Builds the functor; laws are not checked here.
    pub fn build(&self, limits: &Limits) -> Result<EquivariantFunctor> {
        let group = self.group.build(limits)?;
        let order = group.order();
        let mut sizes = Vec::with_capacity(order);
        for g in 0..order {
            let size = self
                .fibers
                .get(&g)
                .ok_or_else(|| Error::InvalidFunctor(format!("missing fiber for element {g}")))?;
            sizes.push(*size);
        }
        if let Some(g) = self.fibers.keys().find(|&&g| g >= order) {
            return Err(Error::InvalidFunctor(format!(
                "fiber given for nonexistent element {g}"
            )));
        }
        let mut transports = Vec::with_capacity(order);
        for h in 0..order {
            let per_g = self
                .transports
                .get(&h)
                .ok_or_else(|| Error::InvalidFunctor(format!("missing transports for h={h}")))?;
            if let Some(g) = per_g.keys().find(|&&g| g >= order) {
                return Err(Error::InvalidFunctor(format!("transport given for nonexistent g={g}")));
            }
            let mut row = Vec::with_capacity(order);
            for g in 0..order {
                let map = per_g
                    .get(&g)
                    .ok_or_else(|| Error::InvalidFunctor(format!("missing transport for (h={h}, g={g})")))?;
                row.push(map.clone());
            }
            transports.push(row);
        }
        if let Some(h) = self.transports.keys().find(|&&h| h >= order) {
            return Err(Error::InvalidFunctor(format!("transports given for nonexistent h={h}")));
        }
        EquivariantFunctor::new(group, sizes, transports)
    }
}

/// Parses a functor document; laws are not checked here.
pub fn functor_from_json(text: &str, limits: &Limits) -> Result<EquivariantFunctor> {
    let spec: FunctorSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    spec.build(limits)
}
