//! Finite groups as multiplication tables.
//!
//! Elements are dense indices `0..order`. Every map (homomorphism, action,
//! inverse) is an array indexed by element, so all computations are
//! deterministic and table-driven.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

/// An element of a [`FiniteGroup`], as an index into its table.
pub type Elem = usize;

/// Shared handle to a group; homomorphisms and actions refer to groups this way.
pub type Group = Arc<FiniteGroup>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupAxiomFailure {
    /// `table` is not square or an entry is out of range.
    Malformed(String),
    NoIdentity,
    NoInverse(Elem),
    NotAssociative(Elem, Elem, Elem),
}

impl fmt::Display for GroupAxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Malformed(msg) => write!(f, "malformed table: {msg}"),
            Self::NoIdentity => write!(f, "no two-sided identity"),
            Self::NoInverse(a) => write!(f, "element {a} has no inverse"),
            Self::NotAssociative(a, b, c) => {
                write!(f, "({a}*{b})*{c} != {a}*({b}*{c})")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(GroupAxiomFailure),
    #[error("closure exceeds the element cap of {cap}")]
    ClosureTooLarge { cap: usize },
    #[error("subgroup is not normal: conjugating {s} by {g} leaves the subgroup")]
    NotNormal { g: Elem, s: Elem },
    #[error("group is not abelian: {a} and {b} do not commute")]
    NotAbelian { a: Elem, b: Elem },
    #[error("not a homomorphism: f({a}*{b}) != f({a})*f({b})")]
    NotAHomomorphism { a: Elem, b: Elem },
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = GroupError> = std::result::Result<T, E>;

/// Knobs for group construction.
#[derive(Debug, Clone)]
pub struct GroupOptions {
    /// Orders up to this bound get a full O(n^3) associativity scan.
    pub full_check_bound: usize,
    /// Number of random triples tested above `full_check_bound`.
    pub sampled_triples: usize,
    pub seed: u64,
    /// Cap on permutation and subgroup closures.
    pub element_cap: usize,
}

impl Default for GroupOptions {
    fn default() -> Self {
        GroupOptions {
            full_check_bound: 256,
            sampled_triples: 1_000_000,
            seed: 0x5eed,
            element_cap: 20_000,
        }
    }
}

/// A finite group given by its multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: Elem,
    inverse: Vec<Elem>,
    names: Option<Vec<String>>,
    generators: Vec<Elem>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("identity", &self.identity)
            .field("generators", &self.generators)
            .finish()
    }
}

impl FiniteGroup {
    /// Validates a square multiplication table, locating identity and inverses.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        Self::from_table_with(table, &GroupOptions::default())
    }

    pub fn from_table_with(table: &[Vec<usize>], opts: &GroupOptions) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotAGroup(GroupAxiomFailure::Malformed(
                "empty table".into(),
            )));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotAGroup(GroupAxiomFailure::Malformed(format!(
                    "row {i} has length {} (expected {n})",
                    row.len()
                ))));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::NotAGroup(GroupAxiomFailure::Malformed(format!(
                        "entry ({i},{j}) = {v} is out of range"
                    ))));
                }
                flat.push(v as u32);
            }
        }
        Self::from_flat(n, flat, opts)
    }

    fn from_flat(n: usize, flat: Vec<u32>, opts: &GroupOptions) -> Result<Self> {
        let at = |a: usize, b: usize| flat[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or(GroupError::NotAGroup(GroupAxiomFailure::NoIdentity))?;
        let mut inverse = vec![0; n];
        for (a, slot) in inverse.iter_mut().enumerate() {
            *slot = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or(GroupError::NotAGroup(GroupAxiomFailure::NoInverse(a)))?;
        }
        let group = FiniteGroup {
            order: n,
            table: flat,
            identity,
            inverse,
            names: None,
            generators: Vec::new(),
        };
        group.check_associativity(opts)?;
        Ok(group)
    }

    /// Builds a group from a table already known to be a group (internal constructions).
    pub(crate) fn from_trusted(n: usize, flat: Vec<u32>, identity: Elem) -> Self {
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            if inverse[a] != usize::MAX {
                continue;
            }
            for b in 0..n {
                if flat[a * n + b] as usize == identity {
                    inverse[a] = b;
                    inverse[b] = a;
                    break;
                }
            }
        }
        debug_assert!(inverse.iter().all(|&i| i < n));
        FiniteGroup {
            order: n,
            table: flat,
            identity,
            inverse,
            names: None,
            generators: Vec::new(),
        }
    }

    fn check_associativity(&self, opts: &GroupOptions) -> Result<()> {
        let n = self.order;
        let failure = if n <= opts.full_check_bound {
            (0..n).into_par_iter().find_map_first(|a| {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Some((a, b, c));
                        }
                    }
                }
                None
            })
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            (0..opts.sampled_triples).find_map(|_| {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                (self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))).then_some((a, b, c))
            })
        };
        match failure {
            Some((a, b, c)) => Err(GroupError::NotAGroup(GroupAxiomFailure::NotAssociative(a, b, c))),
            None => Ok(()),
        }
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        FiniteGroup::from_trusted(1, vec![0], 0).with_names(vec!["1".into()])
    }

    /// Cyclic group of order `n`, generated by `g = 1`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GroupError::Invalid("cyclic group order must be positive".into()));
        }
        let flat = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
        let names = (0..n).map(|k| power_name("g", k)).collect();
        let gens = if n > 1 { vec![1] } else { vec![] };
        Ok(FiniteGroup::from_trusted(n, flat, 0)
            .with_names(names)
            .with_generators(gens))
    }

    /// Dihedral group of order `2n` with presentation `x^2 = y^n = xyxy = 1`.
    ///
    /// Element `a*n + b` is `x^a y^b`; [`dihedral_x`] and [`dihedral_y`] give
    /// the indices of the generators.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GroupError::Invalid("dihedral parameter must be at least 1".into()));
        }
        let order = 2 * n;
        let mut flat = Vec::with_capacity(order * order);
        for i in 0..order {
            let (a, b) = (i / n, i % n);
            for j in 0..order {
                let (c, d) = (j / n, j % n);
                // y^b x = x y^-b
                let b2 = if c == 1 { (n - b) % n } else { b };
                flat.push((((a + c) % 2) * n + (b2 + d) % n) as u32);
            }
        }
        let names = (0..order)
            .map(|i| {
                let (a, b) = (i / n, i % n);
                match (a, b) {
                    (0, _) => power_name("y", b),
                    (_, 0) => "x".to_string(),
                    _ => format!("x{}", power_name("y", b)),
                }
            })
            .collect();
        let gens = if n == 1 { vec![dihedral_x(n)] } else { vec![dihedral_x(n), dihedral_y(n)] };
        Ok(FiniteGroup::from_trusted(order, flat, 0)
            .with_names(names)
            .with_generators(gens))
    }

    /// Symmetric group on `{0..n-1}`, generated by `(0 1)` and `(0 1 ... n-1)`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GroupError::Invalid("symmetric group degree must be positive".into()));
        }
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
        }
        if n >= 3 {
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        Self::from_permutations(n, &gens)
    }

    /// Closure of permutations (given as image arrays) under composition.
    ///
    /// Products compose left to right: `i^(pq) = (i^p)^q`. Element 0 is the
    /// identity and elements are numbered in breadth-first discovery order.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        Self::from_permutations_with(degree, generators, &GroupOptions::default())
    }

    pub fn from_permutations_with(
        degree: usize,
        generators: &[Vec<usize>],
        opts: &GroupOptions,
    ) -> Result<Self> {
        for g in generators {
            if g.len() != degree {
                return Err(GroupError::Invalid(format!(
                    "permutation {g:?} does not have degree {degree}"
                )));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || seen[x] {
                    return Err(GroupError::Invalid(format!("{g:?} is not a permutation")));
                }
                seen[x] = true;
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut perms = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        // parent[b], via[b]: b = parent[b] * generators[via[b]]
        let mut parent = vec![0usize];
        let mut via = vec![usize::MAX];
        let k = generators.len();
        let mut right = vec![Vec::<usize>::new(); k];
        let mut cursor = 0;
        while cursor < perms.len() {
            for (gi, g) in generators.iter().enumerate() {
                let prod: Vec<usize> = perms[cursor].iter().map(|&i| g[i]).collect();
                let next = perms.len();
                let idx = *index.entry(prod.clone()).or_insert(next);
                if idx == next {
                    if next >= opts.element_cap {
                        return Err(GroupError::ClosureTooLarge { cap: opts.element_cap });
                    }
                    perms.push(prod);
                    parent.push(cursor);
                    via.push(gi);
                }
                right[gi].push(idx);
            }
            cursor += 1;
        }
        let n = perms.len();
        let mut flat = vec![0u32; n * n];
        for a in 0..n {
            flat[a * n] = a as u32;
            for b in 1..n {
                let prev = flat[a * n + parent[b]] as usize;
                flat[a * n + b] = right[via[b]][prev] as u32;
            }
        }
        let names = perms.iter().map(|p| cycle_notation(p)).collect();
        let gens = generators.iter().filter_map(|g| index.get(g).copied()).filter(|&g| g != 0).collect();
        Ok(FiniteGroup::from_trusted(n, flat, 0)
            .with_names(names)
            .with_generators(gens))
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.order);
        self.names = Some(names);
        self
    }

    /// Records distinguished generators (used for naming in reports).
    pub fn with_generators(mut self, generators: Vec<Elem>) -> Self {
        assert!(generators.iter().all(|&g| g < self.order));
        self.generators = generators;
        self
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a]
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut acc = self.identity;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    /// `g x g^-1`
    #[inline]
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `[a, b] = a b a^-1 b^-1`
    #[inline]
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn product<I: IntoIterator<Item = Elem>>(&self, elems: I) -> Elem {
        elems.into_iter().fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn name(&self, a: Elem) -> String {
        match &self.names {
            Some(names) => names[a].clone(),
            None if a == self.identity => "1".to_string(),
            None => format!("e{a}"),
        }
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn find_by_name(&self, name: &str) -> Option<Elem> {
        self.elements().find(|&a| self.name(a) == name)
    }

    /// First non-commuting pair, if any.
    pub fn non_commuting_pair(&self) -> Option<(Elem, Elem)> {
        let n = self.order;
        (0..n).find_map(|a| ((a + 1)..n).find(|&b| self.mul(a, b) != self.mul(b, a)).map(|b| (a, b)))
    }

    pub fn is_abelian(&self) -> bool {
        self.non_commuting_pair().is_none()
    }

    /// Row-major copy of the multiplication table.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// The same group with element labels permuted: element `a` becomes `perm[a]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.order;
        let mut flat = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                flat[perm[a] * n + perm[b]] = perm[self.mul(a, b)] as u32;
            }
        }
        let mut g = FiniteGroup::from_trusted(n, flat, perm[self.identity]);
        if let Some(names) = &self.names {
            let mut renamed = vec![String::new(); n];
            for a in 0..n {
                renamed[perm[a]] = names[a].clone();
            }
            g.names = Some(renamed);
        }
        g.generators = self.generators.iter().map(|&x| perm[x]).collect();
        g
    }
}

/// Index of `x` in [`FiniteGroup::dihedral`]`(n)`.
pub fn dihedral_x(n: usize) -> Elem {
    n % (2 * n)
}

/// Index of `y` in [`FiniteGroup::dihedral`]`(n)`.
pub fn dihedral_y(n: usize) -> Elem {
    1 % n
}

fn power_name(base: &str, k: usize) -> String {
    match k {
        0 => "1".to_string(),
        1 => base.to_string(),
        _ => format!("{base}^{k}"),
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p[x];
        }
        let body: Vec<String> = cycle.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("({})", body.join(" ")));
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

/// A group homomorphism stored as an image array.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Group,
    target: Group,
    image: Vec<Elem>,
}

impl GroupHom {
    /// Checks `f(ab) = f(a)f(b)` exhaustively.
    pub fn new(source: Group, target: Group, image: Vec<Elem>) -> Result<Self> {
        if image.len() != source.order() || image.iter().any(|&x| x >= target.order()) {
            return Err(GroupError::Invalid(format!(
                "image array must have {} entries below {}",
                source.order(),
                target.order()
            )));
        }
        let n = source.order();
        let bad = (0..n).into_par_iter().find_map_first(|a| {
            (0..n)
                .find(|&b| image[source.mul(a, b)] != target.mul(image[a], image[b]))
                .map(|b| (a, b))
        });
        if let Some((a, b)) = bad {
            return Err(GroupError::NotAHomomorphism { a, b });
        }
        Ok(GroupHom { source, target, image })
    }

    pub fn identity(g: &Group) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), image: g.elements().collect() }
    }

    pub fn trivial(source: &Group, target: &Group) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            image: vec![target.identity(); source.order()],
        }
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.image[a]
    }

    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn images(&self) -> &[Elem] {
        &self.image
    }

    /// `other ∘ self`
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        assert!(Arc::ptr_eq(&self.target, &other.source) || *self.target == *other.source);
        GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            image: self.image.iter().map(|&x| other.apply(x)).collect(),
        }
    }

    pub fn kernel(&self) -> Subgroup {
        let members: Vec<Elem> =
            self.source.elements().filter(|&a| self.image[a] == self.target.identity()).collect();
        Subgroup::from_members(&self.source, members)
    }

    pub fn image_subgroup(&self) -> Subgroup {
        let mut mask = vec![false; self.target.order()];
        for &x in &self.image {
            mask[x] = true;
        }
        let members = (0..mask.len()).filter(|&x| mask[x]).collect();
        Subgroup::from_members(&self.target, members)
    }

    pub fn is_surjective(&self) -> bool {
        self.image_subgroup().order() == self.target.order()
    }
}

/// An action of `actor` on the group `space` by automorphisms, written `^p m`.
#[derive(Clone, Debug)]
pub struct GroupAction {
    actor: Group,
    space: Group,
    table: Vec<u32>,
}

impl GroupAction {
    /// `act[p][m]` is `^p m`. Checks the action laws exhaustively.
    pub fn new(actor: Group, space: Group, act: &[Vec<Elem>]) -> Result<Self> {
        let (np, nm) = (actor.order(), space.order());
        if act.len() != np || act.iter().any(|row| row.len() != nm || row.iter().any(|&x| x >= nm)) {
            return Err(GroupError::InvalidAction(format!("expected {np} arrays of {nm} entries")));
        }
        let table = act.iter().flatten().map(|&x| x as u32).collect();
        let action = GroupAction { actor, space, table };
        action.check()?;
        Ok(action)
    }

    pub(crate) fn from_fn_trusted(actor: &Group, space: &Group, f: impl Fn(Elem, Elem) -> Elem) -> Self {
        let mut table = Vec::with_capacity(actor.order() * space.order());
        for p in actor.elements() {
            for m in space.elements() {
                table.push(f(p, m) as u32);
            }
        }
        GroupAction { actor: actor.clone(), space: space.clone(), table }
    }

    /// Builds an action from a function and checks the laws.
    pub fn from_fn(actor: &Group, space: &Group, f: impl Fn(Elem, Elem) -> Elem) -> Result<Self> {
        let nm = space.order();
        let mut table = Vec::with_capacity(actor.order() * nm);
        for p in actor.elements() {
            for m in space.elements() {
                let v = f(p, m);
                if v >= nm {
                    return Err(GroupError::InvalidAction(format!("^{p}{m} = {v} is out of range")));
                }
                table.push(v as u32);
            }
        }
        let action = GroupAction { actor: actor.clone(), space: space.clone(), table };
        action.check()?;
        Ok(action)
    }

    fn check(&self) -> Result<()> {
        let (p_grp, m_grp) = (&self.actor, &self.space);
        for m in m_grp.elements() {
            if self.act(p_grp.identity(), m) != m {
                return Err(GroupError::InvalidAction(format!("identity moves {m}")));
            }
        }
        let bad_hom = p_grp.elements().into_par_iter().find_map_first(|p| {
            for m in m_grp.elements() {
                for m2 in m_grp.elements() {
                    if self.act(p, m_grp.mul(m, m2)) != m_grp.mul(self.act(p, m), self.act(p, m2)) {
                        return Some((p, m, m2));
                    }
                }
            }
            None
        });
        if let Some((p, m, m2)) = bad_hom {
            return Err(GroupError::InvalidAction(format!(
                "^{p}({m}*{m2}) != ^{p}{m} * ^{p}{m2}"
            )));
        }
        let bad_compose = p_grp.elements().into_par_iter().find_map_first(|p| {
            for q in p_grp.elements() {
                let pq = p_grp.mul(p, q);
                for m in m_grp.elements() {
                    if self.act(p, self.act(q, m)) != self.act(pq, m) {
                        return Some((p, q, m));
                    }
                }
            }
            None
        });
        if let Some((p, q, m)) = bad_compose {
            return Err(GroupError::InvalidAction(format!("^{p}(^{q}{m}) != ^({p}*{q}){m}")));
        }
        Ok(())
    }

    /// The trivial action.
    pub fn trivial(actor: &Group, space: &Group) -> Self {
        GroupAction::from_fn_trusted(actor, space, |_, m| m)
    }

    #[inline]
    pub fn act(&self, p: Elem, m: Elem) -> Elem {
        self.table[p * self.space.order() + m] as usize
    }

    pub fn actor(&self) -> &Group {
        &self.actor
    }

    pub fn space(&self) -> &Group {
        &self.space
    }

    /// The action of `hom.source()` obtained through `hom` into the actor.
    pub fn pull_back(&self, hom: &GroupHom) -> GroupAction {
        GroupAction::from_fn_trusted(hom.source(), &self.space, |q, m| self.act(hom.apply(q), m))
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.actor
            .elements()
            .map(|p| self.space.elements().map(|m| self.act(p, m)).collect())
            .collect()
    }
}

/// A subgroup of `parent`, stored as a sorted member list.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Group,
    members: Vec<Elem>,
    mask: Vec<bool>,
    generators: Vec<Elem>,
}

impl Subgroup {
    /// Closure of `gens` under multiplication.
    pub fn generated(parent: &Group, gens: &[Elem]) -> Result<Self> {
        let n = parent.order();
        if let Some(&bad) = gens.iter().find(|&&g| g >= n) {
            return Err(GroupError::Invalid(format!("element {bad} is out of range")));
        }
        let mut mask = vec![false; n];
        mask[parent.identity()] = true;
        let mut queue = VecDeque::from([parent.identity()]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = parent.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    queue.push_back(y);
                }
            }
        }
        let members = (0..n).filter(|&x| mask[x]).collect();
        Ok(Subgroup { parent: parent.clone(), members, mask, generators: gens.to_vec() })
    }

    pub(crate) fn from_members(parent: &Group, members: Vec<Elem>) -> Self {
        let mut mask = vec![false; parent.order()];
        for &m in &members {
            mask[m] = true;
        }
        let members: Vec<Elem> = (0..mask.len()).filter(|&x| mask[x]).collect();
        let generators = members.clone();
        Subgroup { parent: parent.clone(), members, mask, generators }
    }

    pub fn whole(parent: &Group) -> Self {
        Subgroup::from_members(parent, parent.elements().collect())
    }

    pub fn parent(&self) -> &Group {
        &self.parent
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.mask[x]
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// Position of `x` in the member list, i.e. its index in [`Subgroup::as_group`].
    pub fn position(&self, x: Elem) -> Option<usize> {
        self.members.binary_search(&x).ok()
    }

    /// A member `g s g^-1` outside the subgroup, if any.
    pub fn normality_witness(&self) -> Option<(Elem, Elem)> {
        let p = &self.parent;
        p.elements().find_map(|g| {
            self.generators
                .iter()
                .find(|&&s| !self.contains(p.conj(g, s)))
                .map(|&s| (g, s))
        })
    }

    pub fn is_normal(&self) -> bool {
        self.normality_witness().is_none()
    }

    /// The subgroup as a group in its own right, with the inclusion homomorphism.
    /// Element `i` of the new group is `members()[i]`.
    pub fn as_group(&self) -> (Group, GroupHom) {
        let k = self.members.len();
        let p = &self.parent;
        let pos: HashMap<Elem, usize> = self.members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut flat = Vec::with_capacity(k * k);
        for &a in &self.members {
            for &b in &self.members {
                flat.push(pos[&p.mul(a, b)] as u32);
            }
        }
        let gens: Vec<Elem> = self
            .generators
            .iter()
            .filter(|&&g| g != p.identity())
            .map(|g| pos[g])
            .collect();
        let mut group = FiniteGroup::from_trusted(k, flat, pos[&p.identity()]);
        group.names = Some(self.members.iter().map(|&m| p.name(m)).collect());
        group.generators = gens;
        let group = Arc::new(group);
        let incl = GroupHom { source: group.clone(), target: p.clone(), image: self.members.clone() };
        (group, incl)
    }
}

/// `subgroup_generated(G, gens)`
pub fn subgroup_generated(g: &Group, gens: &[Elem]) -> Result<Subgroup> {
    Subgroup::generated(g, gens)
}

pub fn is_normal(s: &Subgroup) -> bool {
    s.is_normal()
}

/// `G / S` with the projection. Cosets are numbered by their minimal element.
pub fn quotient(g: &Group, s: &Subgroup) -> Result<(Group, GroupHom)> {
    if let Some((x, y)) = s.normality_witness() {
        return Err(GroupError::NotNormal { g: x, s: y });
    }
    let n = g.order();
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &m in s.members() {
            coset[g.mul(x, m)] = id;
        }
    }
    let k = reps.len();
    let mut flat = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            flat.push(coset[g.mul(a, b)] as u32);
        }
    }
    let mut q = FiniteGroup::from_trusted(k, flat, coset[g.identity()]);
    q.names = Some(reps.iter().map(|&r| g.name(r)).collect());
    let mut gens: Vec<Elem> = g.generators().iter().map(|&x| coset[x]).filter(|&c| c != q.identity).collect();
    gens.dedup();
    q.generators = gens;
    let q = Arc::new(q);
    let proj = GroupHom { source: g.clone(), target: q.clone(), image: coset };
    Ok((q, proj))
}

pub fn commutator_subgroup(g: &Group) -> Subgroup {
    let mut mask = vec![false; g.order()];
    for a in g.elements() {
        for b in g.elements() {
            mask[g.commutator(a, b)] = true;
        }
    }
    let comms: Vec<Elem> = (0..mask.len()).filter(|&x| mask[x]).collect();
    Subgroup::generated(g, &comms).expect("commutators are in range")
}

pub fn abelianization(g: &Group) -> (Group, GroupHom) {
    let c = commutator_subgroup(g);
    quotient(g, &c).expect("commutator subgroup is normal")
}

/// Invariant factors `d1 | d2 | ...` of a finite abelian group, by counting
/// elements of prime-power order.
pub fn abelian_invariants(g: &FiniteGroup) -> Result<Vec<usize>> {
    if let Some((a, b)) = g.non_commuting_pair() {
        return Err(GroupError::NotAbelian { a, b });
    }
    // exponent partitions per prime
    let mut per_prime: Vec<(usize, Vec<u32>)> = Vec::new();
    for (p, e) in factorize(g.order()) {
        let mut counts = Vec::with_capacity(e as usize + 1);
        let mut pk = 1usize;
        for _ in 0..=e {
            let c = g.elements().filter(|&x| g.pow(x, pk as i64) == g.identity()).count();
            counts.push(c);
            pk *= p;
        }
        // counts[k] = p^{s_k}, s_k = sum_i min(e_i, k)
        let s: Vec<u32> = counts.iter().map(|&c| ilog(c, p)).collect();
        // number of cyclic factors with exponent >= k is s_k - s_{k-1}
        let mut exps = Vec::new();
        for k in 1..=e as usize {
            let at_least_k = s[k] - s[k - 1];
            let at_least_next = if k < e as usize { s[k + 1] - s[k] } else { 0 };
            for _ in 0..(at_least_k - at_least_next) {
                exps.push(k as u32);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.push((p, exps));
    }
    let len = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut factors = vec![1usize; len];
    for (p, exps) in &per_prime {
        for (i, &e) in exps.iter().enumerate() {
            factors[i] *= p.pow(e);
        }
    }
    factors.reverse();
    Ok(factors)
}

fn ilog(mut x: usize, p: usize) -> u32 {
    let mut k = 0;
    while x > 1 {
        x /= p;
        k += 1;
    }
    k
}

pub(crate) fn factorize(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `M ⋊ N` on pairs `(m, n)` with `(m,n)(m',n') = (m ^n m', n n')`.
#[derive(Clone, Debug)]
pub struct SemidirectProduct {
    pub group: Group,
    pub embed_m: GroupHom,
    pub embed_n: GroupHom,
    nn: usize,
}

impl SemidirectProduct {
    #[inline]
    pub fn pair(&self, x: Elem) -> (Elem, Elem) {
        (x / self.nn, x % self.nn)
    }

    #[inline]
    pub fn index(&self, m: Elem, n: Elem) -> Elem {
        m * self.nn + n
    }
}

/// Semidirect product for an action of `N` on `M`.
pub fn semidirect_product(action: &GroupAction) -> SemidirectProduct {
    let (n_grp, m_grp) = (action.actor(), action.space());
    let (nm, nn) = (m_grp.order(), n_grp.order());
    let order = nm * nn;
    let mut flat = Vec::with_capacity(order * order);
    for x in 0..order {
        let (m, n) = (x / nn, x % nn);
        for y in 0..order {
            let (m2, n2) = (y / nn, y % nn);
            let mm = m_grp.mul(m, action.act(n, m2));
            flat.push((mm * nn + n_grp.mul(n, n2)) as u32);
        }
    }
    let identity = m_grp.identity() * nn + n_grp.identity();
    let mut g = FiniteGroup::from_trusted(order, flat, identity);
    g.names = Some(
        (0..order)
            .map(|x| format!("({},{})", m_grp.name(x / nn), n_grp.name(x % nn)))
            .collect(),
    );
    g.generators = m_grp
        .generators()
        .iter()
        .map(|&m| m * nn + n_grp.identity())
        .chain(n_grp.generators().iter().map(|&n| m_grp.identity() * nn + n))
        .collect();
    let g = Arc::new(g);
    let embed_m = GroupHom {
        source: m_grp.clone(),
        target: g.clone(),
        image: m_grp.elements().map(|m| m * nn + n_grp.identity()).collect(),
    };
    let embed_n = GroupHom {
        source: n_grp.clone(),
        target: g.clone(),
        image: n_grp.elements().map(|n| m_grp.identity() * nn + n).collect(),
    };
    SemidirectProduct { group: g, embed_m, embed_n, nn }
}

pub fn direct_product(a: &Group, b: &Group) -> SemidirectProduct {
    semidirect_product(&GroupAction::trivial(b, a))
}

/// Conjugation action of `P` on a normal subgroup `S` (as a group in its own right).
pub fn conjugation_action(s: &Subgroup) -> Result<(GroupAction, GroupHom)> {
    if let Some((g, x)) = s.normality_witness() {
        return Err(GroupError::NotNormal { g, s: x });
    }
    let p = s.parent().clone();
    let (sg, incl) = s.as_group();
    let action = GroupAction::from_fn_trusted(&p, &sg, |g, i| {
        s.position(p.conj(g, s.members()[i])).expect("normal subgroup")
    });
    Ok((action, incl))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(g: FiniteGroup) -> Group {
        Arc::new(g)
    }

    #[test]
    fn trivial_table() {
        let g = FiniteGroup::from_table(&[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.identity(), 0);
    }

    #[test]
    fn z2_table() {
        let g = FiniteGroup::from_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn missing_inverse_is_rejected() {
        let err = FiniteGroup::from_table(&[vec![0, 1], vec![1, 1]]).unwrap_err();
        assert_eq!(err, GroupError::NotAGroup(GroupAxiomFailure::NoInverse(1)));
    }

    #[test]
    fn non_associative_table_names_a_triple() {
        // a loop of order 5 that is not a group
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match FiniteGroup::from_table(&t).unwrap_err() {
            GroupError::NotAGroup(GroupAxiomFailure::NotAssociative(a, b, c)) => {
                let g = |x: usize, y: usize| t[x][y];
                assert_ne!(g(g(a, b), c), g(a, g(b, c)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dihedral_relations() {
        let d4 = FiniteGroup::dihedral(4).unwrap();
        assert_eq!(d4.order(), 8);
        let (x, y) = (dihedral_x(4), dihedral_y(4));
        assert_eq!(d4.product([x, y, x, y]), d4.identity());
        assert_eq!(d4.pow(x, 2), d4.identity());
        assert_eq!(d4.pow(y, 4), d4.identity());
        assert_eq!(d4.name(x), "x");
        assert_eq!(d4.name(y), "y");
        assert_eq!(FiniteGroup::dihedral(1).unwrap().order(), 2);
        let d3 = FiniteGroup::dihedral(3).unwrap();
        assert_eq!(d3.order(), 6);
        assert_ne!(d3.mul(dihedral_x(3), dihedral_y(3)), d3.mul(dihedral_y(3), dihedral_x(3)));
        // the table is a genuine group
        FiniteGroup::from_table(&d3.table_rows()).unwrap();
    }

    #[test]
    fn builtin_orders() {
        assert_eq!(FiniteGroup::cyclic(1).unwrap().order(), 1);
        assert_eq!(FiniteGroup::symmetric(3).unwrap().order(), 6);
        assert_eq!(FiniteGroup::symmetric(4).unwrap().order(), 24);
        let d = FiniteGroup::from_permutations(4, &[vec![1, 2, 3, 0], vec![2, 1, 0, 3]]).unwrap();
        assert_eq!(d.order(), 8);
        FiniteGroup::from_table(&d.table_rows()).unwrap();
    }

    #[test]
    fn closure_cap() {
        let opts = GroupOptions { element_cap: 10, ..Default::default() };
        let err = FiniteGroup::from_permutations_with(4, &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]], &opts)
            .unwrap_err();
        assert_eq!(err, GroupError::ClosureTooLarge { cap: 10 });
    }

    #[test]
    fn quotients() {
        let z4 = arc(FiniteGroup::cyclic(4).unwrap());
        let s = Subgroup::generated(&z4, &[2]).unwrap();
        let (q, proj) = quotient(&z4, &s).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj.kernel().members(), s.members());
        assert!(proj.is_surjective());

        let (q, _) = quotient(&z4, &Subgroup::whole(&z4)).unwrap();
        assert_eq!(q.order(), 1);

        let d4 = arc(FiniteGroup::dihedral(4).unwrap());
        let ys = Subgroup::generated(&d4, &[dihedral_y(4)]).unwrap();
        let (q, _) = quotient(&d4, &ys).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(abelian_invariants(&q).unwrap(), vec![2]);
    }

    #[test]
    fn non_normal_quotient_fails() {
        let s3 = arc(FiniteGroup::symmetric(3).unwrap());
        let t = s3.find_by_name("(0 1)").unwrap();
        let h = Subgroup::generated(&s3, &[t]).unwrap();
        match quotient(&s3, &h) {
            Err(GroupError::NotNormal { g, s }) => assert!(!h.contains(s3.conj(g, s))),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invariants() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(abelian_invariants(&z6).unwrap(), vec![6]);
        let d4 = arc(FiniteGroup::dihedral(4).unwrap());
        let (ab, _) = abelianization(&d4);
        assert_eq!(abelian_invariants(&ab).unwrap(), vec![2, 2]);
        let z2 = arc(FiniteGroup::cyclic(2).unwrap());
        let z4 = arc(FiniteGroup::cyclic(4).unwrap());
        let p = direct_product(&z2, &z4);
        assert_eq!(abelian_invariants(&p.group).unwrap(), vec![2, 4]);
        assert_eq!(abelian_invariants(&FiniteGroup::trivial()).unwrap(), Vec::<usize>::new());
        assert!(matches!(abelian_invariants(&d4), Err(GroupError::NotAbelian { .. })));
    }

    #[test]
    fn semidirect_z3_by_z2() {
        let z3 = arc(FiniteGroup::cyclic(3).unwrap());
        let z2 = arc(FiniteGroup::cyclic(2).unwrap());
        let inv = GroupAction::from_fn(&z2, &z3, |n, m| if n == 1 { z3.inv(m) } else { m }).unwrap();
        let sd = semidirect_product(&inv);
        assert_eq!(sd.group.order(), 6);
        assert!(!sd.group.is_abelian());
        FiniteGroup::from_table(&sd.group.table_rows()).unwrap();
        let triv = direct_product(&z3, &z2);
        assert!(triv.group.is_abelian());
    }

    #[test]
    fn conjugation_on_rotations() {
        let d4 = arc(FiniteGroup::dihedral(4).unwrap());
        let ys = Subgroup::generated(&d4, &[dihedral_y(4)]).unwrap();
        let (act, incl) = conjugation_action(&ys).unwrap();
        let y = ys.position(dihedral_y(4)).unwrap();
        let xy = act.act(dihedral_x(4), y);
        assert_eq!(incl.apply(xy), d4.inv(dihedral_y(4)));
        for s in act.space().elements() {
            assert_eq!(act.act(d4.identity(), s), s);
        }
        let z4 = arc(FiniteGroup::cyclic(4).unwrap());
        let (act, _) = conjugation_action(&Subgroup::whole(&z4)).unwrap();
        for p in z4.elements() {
            for m in z4.elements() {
                assert_eq!(act.act(p, m), m);
            }
        }
    }
}
