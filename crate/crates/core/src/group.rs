//! Finite groups with elements indexed densely by `0..order`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::permutation::{factorial_usize, Permutation};
use crate::{Error, Limits, Result};

/// Groups up to this order get a precomputed multiplication table.
const TABLE_CACHE_MAX: usize = 1024;

/// Largest degree for which `S_n` can be indexed by `usize` on every platform we target.
const MAX_SYMMETRIC_DEGREE: usize = 20;

/// An element of a [`FiniteGroup`], identified by its index in `0..order`.
///
/// The index is only meaningful relative to the group it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub usize);

impl GroupElement {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug)]
enum Kind {
    /// `Z/k` under addition; element `i` is the residue `i`.
    Cyclic(usize),
    /// `S_n`; element `i` is the permutation of lexicographic rank `i`.
    Symmetric(usize),
    /// `G x H`; element `(a, b)` has index `a * |H| + b`.
    Product(Box<FiniteGroup>, Box<FiniteGroup>),
    /// Validated multiplication table, row-major.
    Cayley { table: Arc<[usize]>, identity: usize },
}

#[derive(Debug)]
struct Tables {
    mul: Vec<u32>,
    inv: Vec<u32>,
}

/// A finite group.
///
/// Values are immutable and cheap to clone.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    kind: Kind,
    order: usize,
    tables: Option<Arc<Tables>>,
    name_override: Option<String>,
}

impl FiniteGroup {
    /// `Z/k`.
    pub fn cyclic(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroOrder);
        }
        Ok(FiniteGroup {
            kind: Kind::Cyclic(k),
            order: k,
            tables: None,
            name_override: None,
        })
    }

    /// `S_n` acting on `{0, .., n-1}`, with `(s * t)(x) = s(t(x))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        let order = match factorial_usize(n) {
            Some(o) if n <= MAX_SYMMETRIC_DEGREE => o,
            _ => {
                return Err(Error::CapExceeded {
                    what: "symmetric group degree",
                    value: n as u64,
                    cap: MAX_SYMMETRIC_DEGREE as u64,
                })
            }
        };
        // S_n tables are shared across the process; building S_6's takes a noticeable moment
        static TABLES: OnceLock<Mutex<HashMap<usize, Option<Arc<Tables>>>>> = OnceLock::new();
        let cache = TABLES.get_or_init(Default::default);
        let cached = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&n).cloned();
        let group = FiniteGroup {
            kind: Kind::Symmetric(n),
            order,
            tables: None,
            name_override: None,
        };
        Ok(match cached {
            Some(tables) => FiniteGroup { tables, ..group },
            None => {
                let group = group.with_tables();
                cache
                    .lock()
                    .unwrap_or_else(|e| e.into_inner())
                    .insert(n, group.tables.clone());
                group
            }
        })
    }

    /// Direct product with componentwise operations.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        FiniteGroup {
            order: g.order * h.order,
            kind: Kind::Product(Box::new(g.clone()), Box::new(h.clone())),
            tables: None,
            name_override: None,
        }
        .with_tables()
    }

    /// Validates a multiplication table with the default order cap.
    pub fn from_cayley_table(table: &[Vec<usize>]) -> Result<Self> {
        Self::from_cayley_table_capped(table, Limits::default().max_cayley_order)
    }

    /// Validates closure, two-sided identity, inverses and associativity (all `m^3`
    /// triples), reporting the first failure.
    pub fn from_cayley_table_capped(table: &[Vec<usize>], max_order: usize) -> Result<Self> {
        let m = table.len();
        if m == 0 {
            return Err(Error::CayleyTable("empty table".into()));
        }
        if m > max_order {
            return Err(Error::CapExceeded {
                what: "Cayley table order",
                value: m as u64,
                cap: max_order as u64,
            });
        }
        let mut flat = Vec::with_capacity(m * m);
        for (i, row) in table.iter().enumerate() {
            if row.len() != m {
                return Err(Error::CayleyTable(format!(
                    "row {i} has length {}, expected {m}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= m {
                    return Err(Error::CayleyTable(format!(
                        "entry ({i},{j}) = {v} is not an element index"
                    )));
                }
            }
            flat.extend_from_slice(row);
        }
        let at = |a: usize, b: usize| flat[a * m + b];

        let identity = (0..m)
            .find(|&e| (0..m).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(Error::NoIdentity)?;
        for x in 0..m {
            if !(0..m).any(|y| at(x, y) == identity && at(y, x) == identity) {
                return Err(Error::NoInverse(x));
            }
        }
        for a in 0..m {
            for b in 0..m {
                let ab = at(a, b);
                for c in 0..m {
                    let left = at(ab, c);
                    let right = at(a, at(b, c));
                    if left != right {
                        return Err(Error::NotAssociative { a, b, c, left, right });
                    }
                }
            }
        }
        Ok(FiniteGroup {
            kind: Kind::Cayley {
                table: flat.into(),
                identity,
            },
            order: m,
            tables: None,
            name_override: None,
        }
        .with_tables())
    }

    /// Parses `{"order": m, "table": [[..], ..]}` and validates it.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: CayleySpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.build(Limits::default().max_cayley_order)
    }

    /// Parses names like `"S3"`, `"Z/4"`, `"Z4"`, `"D4"`, `"Q8"`, `"Z2xZ3"`, `"S3xZ2"`.
    pub fn from_name(name: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown group name {name:?}"));
        let mut factors = name.split(['x', '×']).map(str::trim);
        let parse_one = |f: &str| -> Result<FiniteGroup> {
            if f == "Q8" {
                Ok(FiniteGroup::quaternion())
            } else if let Some(rest) = f.strip_prefix('D') {
                FiniteGroup::dihedral(rest.parse().map_err(|_| bad())?)
            } else if let Some(rest) = f.strip_prefix('S') {
                FiniteGroup::symmetric(rest.parse().map_err(|_| bad())?)
            } else if let Some(rest) = f.strip_prefix('Z') {
                let rest = rest.strip_prefix('/').unwrap_or(rest);
                FiniteGroup::cyclic(rest.parse().map_err(|_| bad())?)
            } else {
                Err(bad())
            }
        };
        let mut group = parse_one(factors.next().ok_or_else(bad)?)?;
        for f in factors {
            group = FiniteGroup::product(&group, &parse_one(f)?);
        }
        Ok(group)
    }

    /// Dihedral group of order `2m` (`m >= 1`): rotations `r^i` at index `i`, reflections
    /// `s r^i` at index `m + i`.
    pub fn dihedral(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroOrder);
        }
        let elem = |refl: bool, i: usize| if refl { m + i } else { i };
        let split = |x: usize| (x >= m, x % m);
        let table: Vec<Vec<usize>> = (0..2 * m)
            .map(|a| {
                (0..2 * m)
                    .map(|b| {
                        let ((sa, ia), (sb, ib)) = (split(a), split(b));
                        // s^x r^a s^y r^b = s^(x+y) r^(b + (-1)^y a)
                        let rot = if sb { (ib + m - ia) % m } else { (ia + ib) % m };
                        elem(sa ^ sb, rot)
                    })
                    .collect()
            })
            .collect();
        let mut g = Self::from_cayley_table_capped(&table, usize::MAX)?;
        g.name_override = Some(format!("D{m}"));
        Ok(g)
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`; index `2u + s` for unit `u` in `1, i, j, k`
    /// and sign bit `s`.
    pub fn quaternion() -> Self {
        // unit products: (sign, unit) for u * v
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let table: Vec<Vec<usize>> = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (sign, unit) = UNIT[a / 2][b / 2];
                        2 * unit + (sign ^ (a % 2) ^ (b % 2))
                    })
                    .collect()
            })
            .collect();
        let mut g = Self::from_cayley_table(&table).expect("quaternion table is a group");
        g.name_override = Some("Q8".into());
        g
    }

    fn with_tables(mut self) -> Self {
        if self.order <= TABLE_CACHE_MAX && !matches!(self.kind, Kind::Cyclic(_)) {
            let m = self.order;
            let mut mul = Vec::with_capacity(m * m);
            for a in 0..m {
                for b in 0..m {
                    mul.push(self.mul_structural(a, b) as u32);
                }
            }
            let e = self.identity_index();
            let mut inv = vec![0u32; m];
            for a in 0..m {
                for b in 0..m {
                    if mul[a * m + b] as usize == e {
                        inv[a] = b as u32;
                        break;
                    }
                }
            }
            self.tables = Some(Arc::new(Tables { mul, inv }));
        }
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Human-readable description such as `S3` or `Z/2 x Z/3`.
    pub fn name(&self) -> String {
        if let Some(name) = &self.name_override {
            return name.clone();
        }
        match &self.kind {
            Kind::Cyclic(k) => format!("Z/{k}"),
            Kind::Symmetric(n) => format!("S{n}"),
            Kind::Product(g, h) => format!("{} x {}", g.name(), h.name()),
            Kind::Cayley { .. } => format!("Cayley({})", self.order),
        }
    }

    /// Degree `n` when this is `S_n`.
    pub fn symmetric_degree(&self) -> Option<usize> {
        match self.kind {
            Kind::Symmetric(n) => Some(n),
            _ => None,
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(self.identity_index())
    }

    fn identity_index(&self) -> usize {
        match &self.kind {
            Kind::Cyclic(_) | Kind::Symmetric(_) => 0,
            Kind::Product(g, h) => g.identity_index() * h.order + h.identity_index(),
            Kind::Cayley { identity, .. } => *identity,
        }
    }

    /// Checked conversion from an index.
    pub fn element(&self, index: usize) -> Result<GroupElement> {
        if index >= self.order {
            return Err(Error::ElementOutOfRange {
                index,
                order: self.order,
            });
        }
        Ok(GroupElement(index))
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + Clone {
        (0..self.order).map(GroupElement)
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        g.0 < self.order
    }

    /// `a * b`.
    ///
    /// # Panics
    ///
    /// If either element is out of range for this group.
    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        assert!(
            self.contains(a) && self.contains(b),
            "element out of range for group of order {}",
            self.order
        );
        GroupElement(self.mul_index(a.0, b.0))
    }

    /// # Panics
    ///
    /// If `a` is out of range for this group.
    pub fn inverse(&self, a: GroupElement) -> GroupElement {
        assert!(
            self.contains(a),
            "element out of range for group of order {}",
            self.order
        );
        GroupElement(self.inverse_index(a.0))
    }

    /// `h * g * h^-1`.
    pub fn conjugate(&self, g: GroupElement, h: GroupElement) -> Result<GroupElement> {
        for x in [g, h] {
            self.element(x.0)?;
        }
        Ok(GroupElement(self.conjugate_index(g.0, h.0)))
    }

    pub(crate) fn conjugate_index(&self, g: usize, h: usize) -> usize {
        self.mul_index(self.mul_index(h, g), self.inverse_index(h))
    }

    /// A generating set: `{1}` for cyclic groups, a transposition and an `n`-cycle for `S_n`,
    /// the factors' generators for products, and a greedy choice for Cayley tables. Empty for
    /// the trivial group.
    pub fn generators(&self) -> Vec<GroupElement> {
        match &self.kind {
            Kind::Cyclic(k) => (*k > 1).then_some(GroupElement(1)).into_iter().collect(),
            Kind::Symmetric(n) if *n < 2 => Vec::new(),
            Kind::Symmetric(n) => {
                let mut swap: Vec<usize> = (0..*n).collect();
                swap.swap(0, 1);
                let shift: Vec<usize> = (0..*n).map(|i| (i + 1) % n).collect();
                let mut gens: Vec<GroupElement> = [swap, shift]
                    .into_iter()
                    .map(|v| GroupElement(Permutation::new(v).expect("bijection").lex_rank()))
                    .collect();
                gens.dedup();
                gens
            }
            Kind::Product(a, b) => {
                let (ea, eb) = (a.identity_index(), b.identity_index());
                a.generators()
                    .into_iter()
                    .map(|g| GroupElement(g.0 * b.order + eb))
                    .chain(b.generators().into_iter().map(|h| GroupElement(ea * b.order + h.0)))
                    .collect()
            }
            Kind::Cayley { .. } => {
                let mut gens = Vec::new();
                let mut reached = vec![false; self.order];
                let mut members = vec![self.identity_index()];
                reached[members[0]] = true;
                for candidate in 0..self.order {
                    if reached[candidate] {
                        continue;
                    }
                    gens.push(GroupElement(candidate));
                    // close up: right-multiply everything reached by every generator
                    let mut i = 0;
                    while i < members.len() {
                        for gen in &gens {
                            let next = self.mul_index(members[i], gen.0);
                            if !reached[next] {
                                reached[next] = true;
                                members.push(next);
                            }
                        }
                        i += 1;
                    }
                }
                gens
            }
        }
    }

    /// Smallest `r >= 1` with `g^r = e`.
    pub fn element_order(&self, g: GroupElement) -> usize {
        let e = self.identity_index();
        let mut x = g.0;
        let mut r = 1;
        while x != e {
            x = self.mul_index(x, g.0);
            r += 1;
        }
        r
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul_index(a, b) == self.mul_index(b, a)))
    }

    /// The full multiplication table, `table[a][b] = a * b`.
    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul_index(a, b)).collect())
            .collect()
    }

    /// The permutation an element of `S_n` stands for.
    pub fn permutation(&self, g: GroupElement) -> Option<Permutation> {
        match self.kind {
            Kind::Symmetric(n) if self.contains(g) => Some(Permutation::from_lex_rank(n, g.0)),
            _ => None,
        }
    }

    /// The element of `S_n` for a permutation of degree `n`.
    pub fn element_of_permutation(&self, p: &Permutation) -> Result<GroupElement> {
        match self.kind {
            Kind::Symmetric(n) if p.degree() == n => Ok(GroupElement(p.lex_rank())),
            Kind::Symmetric(n) => Err(Error::DegreeMismatch {
                left: n,
                right: p.degree(),
            }),
            _ => Err(Error::Precondition(format!("{} is not a symmetric group", self.name()))),
        }
    }

    pub(crate) fn mul_index(&self, a: usize, b: usize) -> usize {
        match &self.tables {
            Some(t) => t.mul[a * self.order + b] as usize,
            None => self.mul_structural(a, b),
        }
    }

    pub(crate) fn inverse_index(&self, a: usize) -> usize {
        if let Some(t) = &self.tables {
            return t.inv[a] as usize;
        }
        match &self.kind {
            Kind::Cyclic(k) => (k - a) % k,
            Kind::Symmetric(n) => Permutation::from_lex_rank(*n, a).inverse().lex_rank(),
            Kind::Product(g, h) => {
                let (x, y) = (a / h.order, a % h.order);
                g.inverse_index(x) * h.order + h.inverse_index(y)
            }
            Kind::Cayley { table, identity } => (0..self.order)
                .find(|&b| table[a * self.order + b] == *identity)
                .expect("validated Cayley table has inverses"),
        }
    }

    fn mul_structural(&self, a: usize, b: usize) -> usize {
        match &self.kind {
            Kind::Cyclic(k) => (a + b) % k,
            Kind::Symmetric(n) => {
                let pa = Permutation::from_lex_rank(*n, a);
                let pb = Permutation::from_lex_rank(*n, b);
                pa.compose(&pb).expect("equal degree").lex_rank()
            }
            Kind::Product(g, h) => {
                let m = h.order;
                g.mul_index(a / m, b / m) * m + h.mul_index(a % m, b % m)
            }
            Kind::Cayley { table, .. } => table[a * self.order + b],
        }
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// The built-in catalogue up to `max_order`: cyclic, symmetric, dihedral, quaternion and
/// products of two smaller built-ins. Isomorphic duplicates are not removed.
pub fn builtin_groups(max_order: usize) -> Vec<FiniteGroup> {
    let mut base = Vec::new();
    for k in 1..=max_order {
        base.push(FiniteGroup::cyclic(k).expect("k >= 1"));
    }
    for n in 0..=MAX_SYMMETRIC_DEGREE {
        match factorial_usize(n) {
            Some(o) if o <= max_order => base.push(FiniteGroup::symmetric(n).expect("small degree")),
            _ => break,
        }
    }
    for m in 3..=max_order / 2 {
        base.push(FiniteGroup::dihedral(m).expect("m >= 1"));
    }
    if max_order >= 8 {
        base.push(FiniteGroup::quaternion());
    }
    let mut products = Vec::new();
    for (i, a) in base.iter().enumerate() {
        for b in &base[i..] {
            if a.order() > 1 && b.order() > 1 && a.order() * b.order() <= max_order {
                products.push(FiniteGroup::product(a, b));
            }
        }
    }
    base.extend(products);
    base
}

/// JSON form of a Cayley table: `{"order": m, "table": [[..], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleySpec {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl CayleySpec {
    pub fn of(group: &FiniteGroup) -> Self {
        CayleySpec {
            order: group.order(),
            table: group.cayley_table(),
        }
    }

    pub fn build(&self, max_order: usize) -> Result<FiniteGroup> {
        if self.table.len() != self.order {
            return Err(Error::CayleyTable(format!(
                "declared order {} but table has {} rows",
                self.order,
                self.table.len()
            )));
        }
        FiniteGroup::from_cayley_table_capped(&self.table, max_order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_examples() {
        assert_eq!(FiniteGroup::cyclic(0).unwrap_err(), Error::ZeroOrder);
        let trivial = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(trivial.order(), 1);
        let z4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(z4.inverse(GroupElement(3)), GroupElement(1));
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(z6.element_order(GroupElement(2)), 3);
    }

    #[test]
    fn symmetric_examples() {
        assert_eq!(FiniteGroup::symmetric(0).unwrap().order(), 1);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        let a = s3
            .element_of_permutation(&Permutation::new(vec![1, 0, 2]).unwrap())
            .unwrap();
        let b = s3
            .element_of_permutation(&Permutation::new(vec![0, 2, 1]).unwrap())
            .unwrap();
        // (01)*(12) applies (12) first: 0->0->1, 1->2->2, 2->1->0.
        let ab = s3.permutation(s3.mul(a, b)).unwrap();
        assert_eq!(ab.images(), &[1, 2, 0]);
        // The opposite convention would give the inverse 3-cycle.
        let ba = s3.permutation(s3.mul(b, a)).unwrap();
        assert_eq!(ba.images(), &[2, 0, 1]);
        assert!(!s3.is_abelian());
        assert!(FiniteGroup::symmetric(21).is_err());
    }

    #[test]
    fn product_examples() {
        let trivial = FiniteGroup::cyclic(1).unwrap();
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(FiniteGroup::product(&trivial, &s3).order(), 6);
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        assert_eq!(FiniteGroup::product(&z2, &z3).order(), 6);
        let klein = FiniteGroup::product(&z2, &z2);
        for g in klein.elements().filter(|&g| g != klein.identity()) {
            assert_eq!(klein.element_order(g), 2);
        }
    }

    #[test]
    fn cayley_examples() {
        let trivial = FiniteGroup::from_cayley_table(&[vec![0]]).unwrap();
        assert_eq!(trivial.order(), 1);
        let z3 = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        assert_eq!(FiniteGroup::from_cayley_table(&z3).unwrap().order(), 3);

        // A commutative loop of order 5 with identity 0 and inverses that is not associative.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match FiniteGroup::from_cayley_table(&loop5) {
            Err(Error::NotAssociative { a, b, c, left, right }) => {
                let at = |x: usize, y: usize| loop5[x][y];
                assert_eq!(at(at(a, b), c), left);
                assert_eq!(at(a, at(b, c)), right);
                assert_ne!(left, right);
            }
            other => panic!("expected associativity failure, got {other:?}"),
        }

        assert_eq!(
            FiniteGroup::from_cayley_table(&[vec![0, 0], vec![0, 0]]).unwrap_err(),
            Error::NoIdentity
        );
        assert!(matches!(
            FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1]]),
            Err(Error::CayleyTable(_))
        ));
        assert!(matches!(
            FiniteGroup::from_cayley_table(&[vec![0, 2], vec![1, 0]]),
            Err(Error::CayleyTable(_))
        ));
        let big = FiniteGroup::cyclic(8).unwrap().cayley_table();
        assert!(matches!(
            FiniteGroup::from_cayley_table_capped(&big, 4),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn cayley_round_trip_of_structural_groups() {
        let groups = [
            FiniteGroup::cyclic(5).unwrap(),
            FiniteGroup::symmetric(3).unwrap(),
            FiniteGroup::symmetric(4).unwrap(),
            FiniteGroup::product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::symmetric(3).unwrap()),
        ];
        for g in &groups {
            let rebuilt = FiniteGroup::from_cayley_table(&g.cayley_table()).unwrap();
            assert_eq!(rebuilt.order(), g.order());
            assert_eq!(rebuilt.identity(), g.identity());
        }
    }

    #[test]
    fn json_ingestion() {
        let g = FiniteGroup::from_json(r#"{"order": 2, "table": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(g.order(), 2);
        assert!(FiniteGroup::from_json(r#"{"order": 3, "table": [[0,1],[1,0]]}"#).is_err());
        let spec = CayleySpec::of(&FiniteGroup::cyclic(3).unwrap());
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(FiniteGroup::from_json(&text).unwrap().order(), 3);
    }

    #[test]
    fn conjugation_examples() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let e = s3.identity();
        for g in s3.elements() {
            assert_eq!(s3.conjugate(g, e).unwrap(), g);
        }
        let z6 = FiniteGroup::cyclic(6).unwrap();
        for g in z6.elements() {
            for h in z6.elements() {
                assert_eq!(z6.conjugate(g, h).unwrap(), g);
            }
        }
        let t01 = s3
            .element_of_permutation(&Permutation::new(vec![1, 0, 2]).unwrap())
            .unwrap();
        let t12 = s3
            .element_of_permutation(&Permutation::new(vec![0, 2, 1]).unwrap())
            .unwrap();
        let t02 = s3
            .element_of_permutation(&Permutation::new(vec![2, 1, 0]).unwrap())
            .unwrap();
        assert_eq!(s3.conjugate(t01, t12).unwrap(), t02);
        assert_eq!(
            s3.conjugate(GroupElement(6), e),
            Err(Error::ElementOutOfRange { index: 6, order: 6 })
        );
    }

    #[test]
    fn dihedral_and_quaternion() {
        let d4 = FiniteGroup::dihedral(4).unwrap();
        assert_eq!(d4.order(), 8);
        assert!(!d4.is_abelian());
        // reflections have order 2, the generating rotation order 4
        assert_eq!(d4.element_order(GroupElement(1)), 4);
        assert!((4..8).all(|i| d4.element_order(GroupElement(i)) == 2));
        let q8 = FiniteGroup::quaternion();
        assert!(!q8.is_abelian());
        // exactly one element of order 2 (namely -1)
        assert_eq!(q8.elements().filter(|&g| q8.element_order(g) == 2).count(), 1);
        assert_eq!(q8.elements().filter(|&g| q8.element_order(g) == 4).count(), 6);
        assert_eq!(FiniteGroup::dihedral(1).unwrap().order(), 2);
    }

    fn generated_subgroup_size(g: &FiniteGroup) -> usize {
        let gens = g.generators();
        let mut reached = vec![false; g.order()];
        let mut stack = vec![g.identity()];
        reached[g.identity().0] = true;
        while let Some(x) = stack.pop() {
            for &s in &gens {
                let y = g.mul(x, s);
                if !reached[y.0] {
                    reached[y.0] = true;
                    stack.push(y);
                }
            }
        }
        reached.iter().filter(|&&r| r).count()
    }

    #[test]
    fn generators_generate() {
        for g in builtin_groups(24) {
            assert_eq!(generated_subgroup_size(&g), g.order(), "{}", g.name());
        }
        let s5 = FiniteGroup::symmetric(5).unwrap();
        assert_eq!(s5.generators().len(), 2);
        assert_eq!(generated_subgroup_size(&s5), 120);
        assert!(FiniteGroup::cyclic(1).unwrap().generators().is_empty());
        assert_eq!(FiniteGroup::symmetric(2).unwrap().generators().len(), 1);
        let z2z2 =
            FiniteGroup::from_cayley_table(&[vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]])
                .unwrap();
        assert_eq!(z2z2.generators().len(), 2);
    }

    #[test]
    fn builtin_catalogue() {
        let all = builtin_groups(24);
        assert!(all.iter().all(|g| g.order() <= 24));
        assert!(all.iter().any(|g| g.name() == "S4"));
        assert!(all.iter().any(|g| g.name() == "Q8"));
        assert!(all.iter().any(|g| g.name() == "Z/4 x S3"));
    }

    #[test]
    fn names() {
        assert_eq!(FiniteGroup::from_name("S3").unwrap().order(), 6);
        assert_eq!(FiniteGroup::from_name("Z/4").unwrap().order(), 4);
        assert_eq!(FiniteGroup::from_name("Z2xZ3").unwrap().order(), 6);
        assert_eq!(FiniteGroup::from_name("Q8").unwrap().order(), 8);
        assert_eq!(FiniteGroup::from_name("D5").unwrap().name(), "D5");
        assert!(FiniteGroup::from_name("X3").is_err());
    }
}
