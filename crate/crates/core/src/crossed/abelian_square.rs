//! Crossed squares of finitely generated abelian groups.
//!
//! The groups may be infinite, so the axioms are checked on probe elements
//! (all elements of small finite groups; otherwise zero, generators, their
//! negatives, doubles, and pairwise sums and differences) together with exact
//! checks on generators for the structural conditions.

use super::{CrossedError, Result, Slot, SquareAxiom, ValidationReport};
use crate::abelian::{self, AbelianHom, FgAbelian, Matrix, Scalar};

/// A corner of the square acted on by `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corner {
    L,
    M,
    N,
}

impl Corner {
    fn index(self) -> usize {
        self as usize
    }
}

/// Probe sets use every element of finite groups up to this order.
const FULL_PROBE_ORDER: i64 = 32;

#[derive(Clone, Debug)]
pub struct AbelianCrossedSquare<T> {
    pub l: FgAbelian<T>,
    pub m: FgAbelian<T>,
    pub n: FgAbelian<T>,
    pub p: FgAbelian<T>,
    pub lambda: AbelianHom<T>,
    pub lambda_p: AbelianHom<T>,
    pub mu: AbelianHom<T>,
    pub nu: AbelianHom<T>,
    /// action matrix of each generator of `P`, per corner `L, M, N`
    act: [Vec<Matrix<T>>; 3],
    act_inv: [Vec<Matrix<T>>; 3],
    /// `h(e_i, f_j)` for generators `e_i` of `M`, `f_j` of `N`
    h: Vec<Vec<Vec<T>>>,
}

fn fmt_vec<T: Scalar>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

impl<T: Scalar> AbelianCrossedSquare<T> {
    /// `act_*[g]` is the matrix of the `g`-th generator of `P` acting on that
    /// corner; `h[i][j]` is `h(e_i, f_j)` as an element of `L`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda: AbelianHom<T>,
        lambda_p: AbelianHom<T>,
        mu: AbelianHom<T>,
        nu: AbelianHom<T>,
        act_l: Vec<Matrix<T>>,
        act_m: Vec<Matrix<T>>,
        act_n: Vec<Matrix<T>>,
        h: Vec<Vec<Vec<T>>>,
    ) -> Result<Self> {
        let shape = |msg: &str| CrossedError::Shape(msg.to_string());
        let l = lambda.source.clone();
        let m = lambda.target.clone();
        let n = lambda_p.target.clone();
        let p = mu.target.clone();
        if lambda_p.source != l {
            return Err(shape("lambda and lambda' have different sources"));
        }
        if mu.source != m || nu.source != n || nu.target != p {
            return Err(shape("boundary maps do not form a square"));
        }
        let corners = [&l, &m, &n];
        let mut act = [act_l, act_m, act_n];
        for (k, mats) in act.iter_mut().enumerate() {
            if mats.len() != p.ngens() {
                return Err(shape("need one action matrix per generator of P"));
            }
            for a in mats.iter_mut() {
                let g = corners[k];
                let hom = AbelianHom::new(g.clone(), g.clone(), a.clone())?;
                *a = g.reduce_rows(&hom.matrix);
            }
        }
        let mut act_inv: [Vec<Matrix<T>>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for k in 0..3 {
            let g = corners[k];
            for (gi, a) in act[k].iter().enumerate() {
                let d = p.modulus(gi);
                let inv = if d.is_zero() {
                    let inv = a.unimodular_inverse().ok_or_else(|| {
                        CrossedError::UnsupportedAction(format!(
                            "generator {gi} of P acts by a matrix without an integer inverse"
                        ))
                    })?;
                    g.reduce_rows(&inv)
                } else {
                    let e = d - T::one();
                    power(g, a, &e)?
                };
                act_inv[k].push(inv);
            }
        }
        if h.len() != m.ngens() || h.iter().any(|row| row.len() != n.ngens() || row.iter().any(|v| v.len() != l.ngens())) {
            return Err(shape("h must give an element of L for every pair of generators of M and N"));
        }
        let h = h.into_iter().map(|row| row.into_iter().map(|v| l.reduce(&v)).collect()).collect();
        Ok(AbelianCrossedSquare { l, m, n, p, lambda, lambda_p, mu, nu, act, act_inv, h })
    }

    /// A square in which `P` acts trivially everywhere.
    pub fn with_trivial_actions(
        lambda: AbelianHom<T>,
        lambda_p: AbelianHom<T>,
        mu: AbelianHom<T>,
        nu: AbelianHom<T>,
        h: Vec<Vec<Vec<T>>>,
    ) -> Result<Self> {
        let k = mu.target.ngens();
        let id = |g: &FgAbelian<T>| vec![Matrix::identity(g.ngens()); k];
        let (al, am, an) = (id(&lambda.source), id(&mu.source), id(&nu.source));
        Self::new(lambda, lambda_p, mu, nu, al, am, an, h)
    }

    /// `L = M = N = P = Z`, `λ = λ' = 0`, `μ = ν = id`, trivial actions, `h(m, n) = mn`.
    pub fn circle_suspension() -> Self {
        let z = FgAbelian::free(1);
        let zero = AbelianHom::zero(&z, &z);
        let id = AbelianHom::identity(&z);
        Self::with_trivial_actions(zero.clone(), zero, id.clone(), id, vec![vec![vec![T::one()]]])
            .expect("the circle suspension square is well formed")
    }

    pub fn corner(&self, c: Corner) -> &FgAbelian<T> {
        match c {
            Corner::L => &self.l,
            Corner::M => &self.m,
            Corner::N => &self.n,
        }
    }

    pub fn action_generators(&self, c: Corner) -> &[Matrix<T>] {
        &self.act[c.index()]
    }

    /// `h(e_i, f_j)` table.
    pub fn h_generators(&self) -> &[Vec<Vec<T>>] {
        &self.h
    }

    /// Matrix of the action of `p ∈ P` on a corner.
    pub fn action_matrix(&self, c: Corner, p: &[T]) -> Result<Matrix<T>> {
        let g = self.corner(c);
        let p = self.p.reduce(p);
        let mut out = Matrix::identity(g.ngens());
        for (gi, e) in p.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let (base, e) = if e.is_negative() {
                (&self.act_inv[c.index()][gi], -e.clone())
            } else {
                (&self.act[c.index()][gi], e.clone())
            };
            let pw = power(g, base, &e)?;
            out = g.reduce_rows(&out.mul(&pw)?);
        }
        Ok(out)
    }

    /// `^p x` for `x` in a corner.
    pub fn act(&self, c: Corner, p: &[T], x: &[T]) -> Result<Vec<T>> {
        let a = self.action_matrix(c, p)?;
        Ok(self.corner(c).reduce(&a.apply(x)?))
    }

    /// `h(m, n)`, extended bilinearly.
    pub fn h(&self, m: &[T], n: &[T]) -> Result<Vec<T>> {
        let mut out = self.l.zero();
        for (i, a) in m.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in n.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let c = abelian::mul(a, b)?;
                for (o, v) in out.iter_mut().zip(&self.h[i][j]) {
                    *o = abelian::add(o, &abelian::mul(&c, v)?)?;
                }
            }
        }
        Ok(self.l.reduce(&out))
    }

    /// Replays one axiom instance; arithmetic overflow counts as failure.
    pub fn holds(&self, axiom: SquareAxiom, w: &[Vec<T>]) -> bool {
        self.try_holds(axiom, w).unwrap_or(false)
    }

    fn try_holds(&self, axiom: SquareAxiom, w: &[Vec<T>]) -> Result<bool> {
        use SquareAxiom::*;
        let (l, m, n, p) = (&self.l, &self.m, &self.n, &self.p);
        let lam = |x: &[T]| self.lambda.apply(x);
        let lamp = |x: &[T]| self.lambda_p.apply(x);
        let mu = |x: &[T]| self.mu.apply(x);
        let nu = |x: &[T]| self.nu.apply(x);
        let eq = |g: &FgAbelian<T>, a: &[T], b: &[T]| g.reduce(a) == g.reduce(b);
        let m_on = |c: Corner, a: &[T], x: &[T]| -> Result<Vec<T>> { self.act(c, &mu(a)?, x) };
        let n_on = |c: Corner, b: &[T], x: &[T]| -> Result<Vec<T>> { self.act(c, &nu(b)?, x) };
        Ok(match axiom {
            Commutes => eq(p, &mu(&lam(&w[0])?)?, &nu(&lamp(&w[0])?)?),
            LambdaEquivariant => eq(m, &lam(&self.act(Corner::L, &w[0], &w[1])?)?, &self.act(Corner::M, &w[0], &lam(&w[1])?)?),
            LambdaPrimeEquivariant => {
                eq(n, &lamp(&self.act(Corner::L, &w[0], &w[1])?)?, &self.act(Corner::N, &w[0], &lamp(&w[1])?)?)
            }
            MuEquivariant => eq(p, &mu(&self.act(Corner::M, &w[0], &w[1])?)?, &mu(&w[1])?),
            MuPeiffer => eq(m, &m_on(Corner::M, &w[0], &w[1])?, &w[1]),
            NuEquivariant => eq(p, &nu(&self.act(Corner::N, &w[0], &w[1])?)?, &nu(&w[1])?),
            NuPeiffer => eq(n, &n_on(Corner::N, &w[0], &w[1])?, &w[1]),
            LambdaCrossedEquivariant => eq(m, &lam(&m_on(Corner::L, &w[0], &w[1])?)?, &lam(&w[1])?),
            LambdaPeiffer => eq(l, &m_on(Corner::L, &lam(&w[0])?, &w[1])?, &w[1]),
            LambdaPrimeCrossedEquivariant => eq(n, &lamp(&n_on(Corner::L, &w[0], &w[1])?)?, &lamp(&w[1])?),
            LambdaPrimePeiffer => eq(l, &n_on(Corner::L, &lamp(&w[0])?, &w[1])?, &w[1]),
            MuLambdaEquivariant => eq(p, &mu(&lam(&self.act(Corner::L, &w[0], &w[1])?)?)?, &mu(&lam(&w[1])?)?),
            HLeft => {
                let (a, a2, b) = (&w[0], &w[1], &w[2]);
                let lhs = self.h(&m.add(a, a2)?, b)?;
                let rhs = l.add(&self.h(&m_on(Corner::M, a, a2)?, &m_on(Corner::N, a, b)?)?, &self.h(a, b)?)?;
                eq(l, &lhs, &rhs)
            }
            HRight => {
                let (a, b, b2) = (&w[0], &w[1], &w[2]);
                let lhs = self.h(a, &n.add(b, b2)?)?;
                let rhs = l.add(&self.h(a, b)?, &self.h(&n_on(Corner::M, b, a)?, &n_on(Corner::N, b, b2)?)?)?;
                eq(l, &lhs, &rhs)
            }
            LambdaH => {
                let (a, b) = (&w[0], &w[1]);
                eq(m, &lam(&self.h(a, b)?)?, &m.sub(a, &n_on(Corner::M, b, a)?)?)
            }
            LambdaPrimeH => {
                let (a, b) = (&w[0], &w[1]);
                eq(n, &lamp(&self.h(a, b)?)?, &n.sub(&m_on(Corner::N, a, b)?, b)?)
            }
            HLambda => {
                let (x, b) = (&w[0], &w[1]);
                eq(l, &self.h(&lam(x)?, b)?, &l.sub(x, &n_on(Corner::L, b, x)?)?)
            }
            HLambdaPrime => {
                let (a, x) = (&w[0], &w[1]);
                eq(l, &self.h(a, &lamp(x)?)?, &l.sub(&m_on(Corner::L, a, x)?, x)?)
            }
            HEquivariant => {
                let (g, a, b) = (&w[0], &w[1], &w[2]);
                let lhs = self.h(&self.act(Corner::M, g, a)?, &self.act(Corner::N, g, b)?)?;
                eq(l, &lhs, &self.act(Corner::L, g, &self.h(a, b)?)?)
            }
        })
    }

    /// Structural checks on generators plus every axiom on probe tuples.
    pub fn validate(&self) -> ValidationReport<Vec<String>> {
        let mut report = ValidationReport::new("abelian crossed square");
        self.check_structure(&mut report);
        let probes = [probes(&self.l), probes(&self.m), probes(&self.n), probes(&self.p)];
        let set = |s: &Slot| match s {
            Slot::L => &probes[0],
            Slot::M => &probes[1],
            Slot::N => &probes[2],
            Slot::P => &probes[3],
        };
        for ax in SquareAxiom::ALL {
            let sets: Vec<&Vec<Vec<T>>> = ax.slots().iter().map(set).collect();
            let mut idx = vec![0usize; sets.len()];
            let (mut checked, mut count, mut found) = (0u64, 0u64, Vec::new());
            if sets.iter().all(|s| !s.is_empty()) {
                loop {
                    let w: Vec<Vec<T>> = idx.iter().zip(&sets).map(|(&i, s)| s[i].clone()).collect();
                    checked += 1;
                    if !self.holds(ax, &w) {
                        count += 1;
                        found.push(w.iter().map(|v| fmt_vec(v)).collect());
                    }
                    let mut k = idx.len();
                    let done = loop {
                        if k == 0 {
                            break true;
                        }
                        k -= 1;
                        idx[k] += 1;
                        if idx[k] < sets[k].len() {
                            break false;
                        }
                        idx[k] = 0;
                    };
                    if done {
                        break;
                    }
                }
            }
            report.record(ax.id(), checked, count, found);
        }
        report
    }

    fn check_structure(&self, report: &mut ValidationReport<Vec<String>>) {
        let corners = [(Corner::L, "L"), (Corner::M, "M"), (Corner::N, "N")];
        for (c, name) in corners {
            let g = self.corner(c);
            let mats = &self.act[c.index()];
            for (gi, a) in mats.iter().enumerate() {
                let d = self.p.modulus(gi);
                let id = g.reduce_rows(&Matrix::identity(g.ngens()));
                let ok = if d.is_zero() {
                    a.mul(&self.act_inv[c.index()][gi]).map(|x| g.reduce_rows(&x) == id).unwrap_or(false)
                } else {
                    power(g, a, &d).map(|x| x == id).unwrap_or(false)
                };
                report.record("action.order", 1, u64::from(!ok), vec![vec![name.to_string(), gi.to_string()]]);
                for (gk, b) in mats.iter().enumerate().skip(gi + 1) {
                    let ab = a.mul(b).map(|x| g.reduce_rows(&x));
                    let ba = b.mul(a).map(|x| g.reduce_rows(&x));
                    let ok = matches!((ab, ba), (Ok(x), Ok(y)) if x == y);
                    report.record(
                        "action.commute",
                        1,
                        u64::from(!ok),
                        vec![vec![name.to_string(), gi.to_string(), gk.to_string()]],
                    );
                }
            }
        }
        for i in 0..self.m.ngens() {
            for j in 0..self.n.ngens() {
                let (dm, dn) = (self.m.modulus(i), self.n.modulus(j));
                for (d, which) in [(dm, "M"), (dn, "N")] {
                    if d.is_zero() {
                        continue;
                    }
                    let ok = self.l.scale(&d, &self.h[i][j]).map(|v| self.l.is_zero_elem(&v)).unwrap_or(false);
                    report.record(
                        "h.torsion",
                        1,
                        u64::from(!ok),
                        vec![vec![which.to_string(), i.to_string(), j.to_string()]],
                    );
                }
            }
        }
    }
}

/// `a^e` reduced in `g`, for `e >= 0`.
fn power<T: Scalar>(g: &FgAbelian<T>, a: &Matrix<T>, e: &T) -> Result<Matrix<T>> {
    let mut result = Matrix::identity(a.rows());
    let mut base = g.reduce_rows(a);
    let mut e = e.clone();
    let two = T::one() + T::one();
    while !e.is_zero() {
        if e.is_odd() {
            result = g.reduce_rows(&result.mul(&base)?);
        }
        e = e.div_floor(&two);
        if !e.is_zero() {
            base = g.reduce_rows(&base.mul(&base)?);
        }
    }
    Ok(result)
}

/// Probe elements of `g`.
pub(crate) fn probes<T: Scalar>(g: &FgAbelian<T>) -> Vec<Vec<T>> {
    if let Some(order) = g.order() {
        if order <= abelian::from_i64(FULL_PROBE_ORDER) {
            return g.elements().expect("finite group");
        }
    }
    let k = g.ngens();
    let mut out = vec![g.zero()];
    for i in 0..k {
        let e = g.basis(i);
        out.push(e.clone());
        out.push(g.neg(&e));
        out.push(g.reduce(&e.iter().map(|x| x.clone() + x.clone()).collect::<Vec<T>>()));
        for j in (i + 1)..k {
            let f = g.basis(j);
            let sum: Vec<T> = e.iter().zip(&f).map(|(a, b)| a.clone() + b.clone()).collect();
            let diff: Vec<T> = e.iter().zip(&f).map(|(a, b)| a.clone() - b.clone()).collect();
            out.push(g.reduce(&sum));
            out.push(g.reduce(&diff));
        }
    }
    out.sort();
    out.dedup();
    out
}
