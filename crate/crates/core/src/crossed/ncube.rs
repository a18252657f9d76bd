//! Crossed n-cubes of groups.
//!
//! Subsets of `{1, ..., n}` are bitmasks: bit `i - 1` stands for `i`. For
//! `a ∈ M_A`, `b ∈ M_B` with `A ⊆ B` the derived action is `^a b = h(a, b) b`.

use std::collections::BTreeMap;

use super::{
    expect_hom, same_group, scan, CrossedError, CrossedModule, CrossedSquare, Result, ValidationReport,
};
use crate::group::{Elem, Group, GroupAction, GroupHom};

/// Axiom ids, in order.
pub const NCUBE_AXIOMS: [&str; 11] = ["1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11"];

/// A family of groups `M_A` indexed by subsets `A` of `{1..n}`, homomorphisms
/// `μ_i: M_A → M_{A∖{i}}` for `i ∈ A`, and pairings `h: M_A × M_B → M_{A∪B}`.
#[derive(Clone, Debug)]
pub struct CrossedNCube {
    n: usize,
    groups: Vec<Group>,
    /// `mu[A][i]` for `i ∈ A` (bit index `i`)
    mu: Vec<Vec<Option<GroupHom>>>,
    /// `h[A * 2^n + B]`, row-major `|M_A| x |M_B|`
    h: Vec<Vec<u32>>,
}

#[inline]
fn bit(i: usize) -> usize {
    1 << i
}

impl CrossedNCube {
    /// `mu` is keyed by `(i, A)` with `i` a bit index in `A`; `h` by `(A, B)`.
    pub fn new(
        n: usize,
        groups: Vec<Group>,
        mu: BTreeMap<(usize, usize), GroupHom>,
        h: BTreeMap<(usize, usize), Vec<Vec<Elem>>>,
    ) -> Result<Self> {
        let size = 1usize << n;
        if groups.len() != size {
            return Err(CrossedError::MissingComponent(format!(
                "expected {size} groups, found {}",
                groups.len()
            )));
        }
        let mut mu_table = vec![vec![None; n]; size];
        for a in 0..size {
            for i in 0..n {
                if a & bit(i) == 0 {
                    continue;
                }
                let f = mu
                    .get(&(i, a))
                    .ok_or_else(|| CrossedError::MissingComponent(format!("mu_{} on subset {a:#b}", i + 1)))?;
                expect_hom(&format!("mu_{} on subset {a:#b}", i + 1), f, &groups[a], &groups[a & !bit(i)])?;
                mu_table[a][i] = Some(f.clone());
            }
        }
        if let Some(&(i, a)) = mu.keys().find(|&&(i, a)| i >= n || a >= size || a & bit(i) == 0) {
            return Err(CrossedError::Shape(format!("mu_{} given on subset {a:#b} not containing it", i + 1)));
        }
        let mut h_table = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                let t = h
                    .get(&(a, b))
                    .ok_or_else(|| CrossedError::MissingComponent(format!("h on subsets ({a:#b}, {b:#b})")))?;
                let (na, nb, nab) = (groups[a].order(), groups[b].order(), groups[a | b].order());
                if t.len() != na || t.iter().any(|row| row.len() != nb || row.iter().any(|&x| x >= nab)) {
                    return Err(CrossedError::Shape(format!(
                        "h on ({a:#b}, {b:#b}) must be a {na}x{nb} table into a group of order {nab}"
                    )));
                }
                h_table.push(t.iter().flatten().map(|&x| x as u32).collect());
            }
        }
        Ok(CrossedNCube { n, groups, mu: mu_table, h: h_table })
    }

    /// The 1-cube `{M_∅ = P, M_{1} = M}` of a crossed module.
    pub fn from_crossed_module(x: &CrossedModule) -> Self {
        let (m, p) = (x.source().clone(), x.target().clone());
        let act = x.action();
        let table = |rows: usize, cols: usize, f: &dyn Fn(Elem, Elem) -> Elem| -> Vec<u32> {
            (0..rows).flat_map(|a| (0..cols).map(move |b| (a, b))).map(|(a, b)| f(a, b) as u32).collect()
        };
        let (np, nm) = (p.order(), m.order());
        let h = vec![
            table(np, np, &|a, b| p.commutator(a, b)),
            table(np, nm, &|g, b| m.mul(act.act(g, b), m.inv(b))),
            table(nm, np, &|a, g| m.mul(a, m.inv(act.act(g, a)))),
            table(nm, nm, &|a, b| m.commutator(a, b)),
        ];
        CrossedNCube { n: 1, groups: vec![p, m], mu: vec![vec![None], vec![Some(x.boundary().clone())]], h }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn group(&self, a: usize) -> &Group {
        &self.groups[a]
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    /// `μ_i` on `M_A` (the identity when `i ∉ A`); `i` is a bit index.
    #[inline]
    pub fn mu(&self, i: usize, a: usize, x: Elem) -> Elem {
        match &self.mu[a][i] {
            Some(f) => f.apply(x),
            None => x,
        }
    }

    pub fn mu_hom(&self, i: usize, a: usize) -> Option<&GroupHom> {
        self.mu[a][i].as_ref()
    }

    #[inline]
    pub fn h(&self, a: usize, b: usize, x: Elem, y: Elem) -> Elem {
        let size = self.groups.len();
        self.h[a * size + b][x * self.groups[b].order() + y] as usize
    }

    pub fn h_table(&self, a: usize, b: usize) -> Vec<Vec<Elem>> {
        (0..self.groups[a].order())
            .map(|x| (0..self.groups[b].order()).map(|y| self.h(a, b, x, y)).collect())
            .collect()
    }

    /// `^x y = h(x, y) y` for `x ∈ M_A`, `y ∈ M_B`, `A ⊆ B`.
    #[inline]
    pub fn act(&self, a: usize, x: Elem, b: usize, y: Elem) -> Elem {
        debug_assert_eq!(a & b, a);
        self.groups[b].mul(self.h(a, b, x, y), y)
    }

    /// Replays one instance of axiom `id` ("1" to "11") on a witness as
    /// produced by [`CrossedNCube::validate`].
    pub fn holds(&self, id: &str, w: &[usize]) -> bool {
        let g = |s: usize| &*self.groups[s];
        match id {
            "1" => {
                let (i, a, x) = (w[0], w[1], w[2]);
                a & bit(i) != 0 || self.mu(i, a, x) == x
            }
            "2" => {
                let (i, j, a, x) = (w[0], w[1], w[2], w[3]);
                let ai = a & !bit(i);
                let aj = a & !bit(j);
                self.mu(i, aj, self.mu(j, a, x)) == self.mu(j, ai, self.mu(i, a, x))
            }
            "3" => {
                let (i, a, b, x, y) = (w[0], w[1], w[2], w[3], w[4]);
                let (ai, bi) = (a & !bit(i), b & !bit(i));
                self.mu(i, a | b, self.h(a, b, x, y)) == self.h(ai, bi, self.mu(i, a, x), self.mu(i, b, y))
            }
            "4" => {
                let (i, a, b, x, y) = (w[0], w[1], w[2], w[3], w[4]);
                let (ai, bi) = (a & !bit(i), b & !bit(i));
                let v = self.h(a, b, x, y);
                v == self.h(ai, b, self.mu(i, a, x), y) && v == self.h(a, bi, x, self.mu(i, b, y))
            }
            "5" => {
                let (a, x, y) = (w[0], w[1], w[2]);
                self.h(a, a, x, y) == g(a).commutator(x, y)
            }
            "6" => {
                let (a, b, x, y) = (w[0], w[1], w[2], w[3]);
                self.h(a, b, x, y) == g(a | b).inv(self.h(b, a, y, x))
            }
            "7" => {
                let (a, b, side, x) = (w[0], w[1], w[2], w[3]);
                let one = g(a | b).identity();
                if side == 0 {
                    self.h(a, b, g(a).identity(), x) == one
                } else {
                    self.h(a, b, x, g(b).identity()) == one
                }
            }
            "8" => {
                let (a, b, x, x2, y) = (w[0], w[1], w[2], w[3], w[4]);
                let ab = a | b;
                let lhs = self.h(a, b, g(a).mul(x, x2), y);
                let rhs = g(ab).mul(self.act(a, x, ab, self.h(a, b, x2, y)), self.h(a, b, x, y));
                lhs == rhs
            }
            "9" => {
                let (a, b, x, y, y2) = (w[0], w[1], w[2], w[3], w[4]);
                let ab = a | b;
                let lhs = self.h(a, b, x, g(b).mul(y, y2));
                let rhs = g(ab).mul(self.h(a, b, x, y), self.act(b, y, ab, self.h(a, b, x, y2)));
                lhs == rhs
            }
            "10" => {
                let (a, b, c, x, y, z) = (w[0], w[1], w[2], w[3], w[4], w[5]);
                let abc = a | b | c;
                let term = |a: usize, x: Elem, b: usize, y: Elem, c: usize, z: Elem| {
                    let inner = self.h(a, b, g(a).inv(x), y);
                    self.act(a, x, abc, self.h(a | b, c, inner, z))
                };
                let t1 = term(a, x, b, y, c, z);
                let t2 = term(c, z, a, x, b, y);
                let t3 = term(b, y, c, z, a, x);
                g(abc).product([t1, t2, t3]) == g(abc).identity()
            }
            "11" => {
                let (a, b, c, x, y, z) = (w[0], w[1], w[2], w[3], w[4], w[5]);
                let bc = b | c;
                self.act(a, x, bc, self.h(b, c, y, z)) == self.h(b, c, self.act(a, x, b, y), self.act(a, x, c, z))
            }
            _ => false,
        }
    }

    /// Exhaustive check of all eleven axioms.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new(format!("crossed {}-cube", self.n));
        let size = self.groups.len();
        let ord = |s: usize| self.groups[s].order();
        for a in 0..size {
            for i in (0..self.n).filter(|&i| a & bit(i) == 0) {
                scan(&mut report, "1", &[i, a], &[ord(a)], |w| self.holds("1", w));
            }
            for i in 0..self.n {
                for j in 0..self.n {
                    scan(&mut report, "2", &[i, j, a], &[ord(a)], |w| self.holds("2", w));
                }
            }
        }
        for a in 0..size {
            for b in 0..size {
                for i in 0..self.n {
                    scan(&mut report, "3", &[i, a, b], &[ord(a), ord(b)], |w| self.holds("3", w));
                    if a & b & bit(i) != 0 {
                        scan(&mut report, "4", &[i, a, b], &[ord(a), ord(b)], |w| self.holds("4", w));
                    }
                }
                scan(&mut report, "6", &[a, b], &[ord(a), ord(b)], |w| self.holds("6", w));
                scan(&mut report, "7", &[a, b, 0], &[ord(b)], |w| self.holds("7", w));
                scan(&mut report, "7", &[a, b, 1], &[ord(a)], |w| self.holds("7", w));
                scan(&mut report, "8", &[a, b], &[ord(a), ord(a), ord(b)], |w| self.holds("8", w));
                scan(&mut report, "9", &[a, b], &[ord(a), ord(b), ord(b)], |w| self.holds("9", w));
            }
            scan(&mut report, "5", &[a], &[ord(a), ord(a)], |w| self.holds("5", w));
        }
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    let dims = [ord(a), ord(b), ord(c)];
                    scan(&mut report, "10", &[a, b, c], &dims, |w| self.holds("10", w));
                    if a & b & c == a {
                        scan(&mut report, "11", &[a, b, c], &dims, |w| self.holds("11", w));
                    }
                }
            }
        }
        report.failures.sort_by_key(|f| f.axiom.parse::<u32>().unwrap_or(u32::MAX));
        report
    }

    /// Reads a 2-cube back as a crossed square (`M_∅ = P`, `M_{1} = M`,
    /// `M_{2} = N`, `M_{1,2} = L`).
    pub fn to_crossed_square(&self) -> Result<CrossedSquare> {
        if self.n != 2 {
            return Err(CrossedError::Shape(format!("a {}-cube is not a square", self.n)));
        }
        let p = &self.groups[0];
        let missing = |what: &str| CrossedError::MissingComponent(what.to_string());
        let mu = self.mu_hom(0, 0b01).ok_or_else(|| missing("mu_1 on {1}"))?.clone();
        let nu = self.mu_hom(1, 0b10).ok_or_else(|| missing("mu_2 on {2}"))?.clone();
        let lambda = self.mu_hom(1, 0b11).ok_or_else(|| missing("mu_2 on {1,2}"))?.clone();
        let lambda_p = self.mu_hom(0, 0b11).ok_or_else(|| missing("mu_1 on {1,2}"))?.clone();
        let action = |b: usize| GroupAction::from_fn(p, &self.groups[b], |g, y| self.act(0, g, b, y));
        CrossedSquare::new(
            lambda,
            lambda_p,
            mu,
            nu,
            action(0b11)?,
            action(0b01)?,
            action(0b10)?,
            &self.h_table(0b01, 0b10),
        )
    }
}

pub fn validate_crossed_ncube(x: &CrossedNCube) -> ValidationReport {
    x.validate()
}

/// The crossed 2-cube of a crossed square.
pub fn to_crossed_2cube(x: &CrossedSquare) -> CrossedNCube {
    let groups: Vec<Group> = vec![x.p.clone(), x.m.clone(), x.n.clone(), x.l.clone()];
    let diag = x.lambda.then(&x.mu);
    // image in P
    let to_p = |s: usize, e: Elem| match s {
        0 => e,
        1 => x.mu.apply(e),
        2 => x.nu.apply(e),
        _ => diag.apply(e),
    };
    // action of P on M_s
    let p_act = |s: usize, g: Elem, e: Elem| match s {
        0 => x.p.conj(g, e),
        1 => x.act_m.act(g, e),
        2 => x.act_n.act(g, e),
        _ => x.act_l.act(g, e),
    };
    let mut h = Vec::with_capacity(16);
    for a in 0..4usize {
        for b in 0..4usize {
            let (ga, gb) = (&groups[a], &groups[b]);
            let gab = &groups[a | b];
            let mut t = Vec::with_capacity(ga.order() * gb.order());
            for e in ga.elements() {
                for f in gb.elements() {
                    let v = if a == b {
                        ga.commutator(e, f)
                    } else if a & b == a {
                        gb.mul(p_act(b, to_p(a, e), f), gb.inv(f))
                    } else if a & b == b {
                        ga.mul(e, ga.inv(p_act(a, to_p(b, f), e)))
                    } else if a == 0b01 {
                        x.h(e, f)
                    } else {
                        gab.inv(x.h(f, e))
                    };
                    t.push(v as u32);
                }
            }
            h.push(t);
        }
    }
    let mu = vec![
        vec![None, None],
        vec![Some(x.mu.clone()), None],
        vec![None, Some(x.nu.clone())],
        vec![Some(x.lambda_p.clone()), Some(x.lambda.clone())],
    ];
    debug_assert!(same_group(&groups[3], x.lambda.source()));
    CrossedNCube { n: 2, groups, mu, h }
}

impl CrossedModule {
    pub fn to_ncube(&self) -> CrossedNCube {
        CrossedNCube::from_crossed_module(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::group::{commutator_subgroup, FiniteGroup, Subgroup};

    #[test]
    fn one_cube_of_inner_module() {
        let s3: Group = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let cube = CrossedModule::inner(&s3).to_ncube();
        let report = cube.validate();
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn one_cube_of_non_crossed_module_fails() {
        let s3: Group = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let z2: Group = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let bad = CrossedModule::new(GroupHom::trivial(&s3, &z2), GroupAction::trivial(&z2, &s3)).unwrap();
        assert!(!bad.to_ncube().validate().is_valid());
    }

    #[test]
    fn trivial_square_gives_valid_trivial_cube() {
        let cube = to_crossed_2cube(&CrossedSquare::trivial());
        assert!(cube.groups().iter().all(|g| g.order() == 1));
        assert!(cube.validate().is_valid());
    }

    #[test]
    fn inclusion_square_cube_roundtrip() {
        let s3: Group = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let a3 = commutator_subgroup(&s3);
        let whole = Subgroup::whole(&s3);
        for (m, n) in [(&a3, &a3), (&whole, &a3), (&whole, &whole)] {
            let sq = CrossedSquare::inclusion(m, n).unwrap();
            let cube = to_crossed_2cube(&sq);
            let report = cube.validate();
            assert!(report.is_valid(), "{report}");
            let back = cube.to_crossed_square().unwrap();
            assert_eq!(back.h_table(), sq.h_table());
            assert_eq!(back.mu.images(), sq.mu.images());
            assert_eq!(back.lambda_p.images(), sq.lambda_p.images());
            assert_eq!(back.act_l.rows(), sq.act_l.rows());
        }
    }

    #[test]
    fn missing_component_is_reported() {
        let g: Group = Arc::new(FiniteGroup::trivial());
        let err = CrossedNCube::new(1, vec![g.clone(), g], BTreeMap::new(), BTreeMap::new()).unwrap_err();
        assert!(matches!(err, CrossedError::MissingComponent(_)));
    }

    #[test]
    fn broken_h_fails_axioms() {
        let sq = CrossedSquare::cyclic_suspension(3).unwrap();
        let cube = to_crossed_2cube(&sq);
        let mut h = BTreeMap::new();
        for a in 0..4 {
            for b in 0..4 {
                h.insert((a, b), cube.h_table(a, b));
            }
        }
        h.get_mut(&(1, 2)).unwrap()[1][1] = 0;
        let mut mu = BTreeMap::new();
        for a in 0..4 {
            for i in 0..2 {
                if let Some(f) = cube.mu_hom(i, a) {
                    mu.insert((i, a), f.clone());
                }
            }
        }
        let bad = CrossedNCube::new(2, cube.groups().to_vec(), mu, h).unwrap();
        let report = bad.validate();
        assert!(!report.is_valid());
        for f in &report.failures {
            for w in &f.witnesses {
                assert!(!bad.holds(&f.axiom, w), "axiom {} witness {w:?} replays as holding", f.axiom);
            }
        }
    }
}
