//! Crossed modules, crossed squares and crossed n-cubes, with exhaustive
//! axiom validators.
//!
//! Actions are written `^p m`. The commutator is `[a, b] = a b a^-1 b^-1`.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{
    conjugation_action, quotient, Elem, FiniteGroup, Group, GroupAction, GroupError, GroupHom, Subgroup,
};

mod abelian_square;
mod ncube;

pub use abelian_square::{AbelianCrossedSquare, Corner};
pub use ncube::{to_crossed_2cube, validate_crossed_ncube, CrossedNCube, NCUBE_AXIOMS};

/// At most this many witnesses are kept per axiom.
pub const WITNESS_CAP: usize = 100;

#[derive(Debug, Error)]
pub enum CrossedError {
    #[error("missing component: {0}")]
    MissingComponent(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("structure fails validation:\n{0}")]
    Invalid(Box<ValidationReport>),
    #[error("unsupported action: {0}")]
    UnsupportedAction(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Abelian(#[from] crate::abelian::AbelianError),
}

pub type Result<T, E = CrossedError> = std::result::Result<T, E>;

/// Failures of one axiom: how many instances failed and the smallest witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomFailure<W> {
    pub axiom: String,
    pub count: u64,
    pub witnesses: Vec<W>,
}

/// Result of an exhaustive axiom check. An empty failure list means valid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport<W = Vec<Elem>> {
    pub subject: String,
    /// Number of axiom instances evaluated.
    pub checked: u64,
    pub failures: Vec<AxiomFailure<W>>,
}

impl<W: Ord + Clone + fmt::Debug> ValidationReport<W> {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport { subject: subject.into(), checked: 0, failures: Vec::new() }
    }

    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failure(&self, axiom: &str) -> Option<&AxiomFailure<W>> {
        self.failures.iter().find(|f| f.axiom == axiom)
    }

    pub fn failed_axioms(&self) -> Vec<&str> {
        self.failures.iter().map(|f| f.axiom.as_str()).collect()
    }

    /// Adds `checked` evaluations of `axiom`, of which `count` failed.
    pub fn record(&mut self, axiom: &str, checked: u64, count: u64, mut witnesses: Vec<W>) {
        self.checked += checked;
        if count == 0 {
            return;
        }
        match self.failures.iter_mut().find(|f| f.axiom == axiom) {
            Some(f) => {
                f.count += count;
                f.witnesses.append(&mut witnesses);
                f.witnesses.sort();
                f.witnesses.dedup();
                f.witnesses.truncate(WITNESS_CAP);
            }
            None => {
                witnesses.sort();
                witnesses.dedup();
                witnesses.truncate(WITNESS_CAP);
                self.failures.push(AxiomFailure { axiom: axiom.to_string(), count, witnesses });
            }
        }
    }

    /// Folds another report in, prefixing its axiom names.
    pub fn absorb(&mut self, prefix: &str, other: ValidationReport<W>) {
        self.checked += other.checked;
        for f in other.failures {
            let name = format!("{prefix}{}", f.axiom);
            self.record(&name, 0, f.count, f.witnesses);
        }
    }
}

impl<W: fmt::Debug> fmt::Display for ValidationReport<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return write!(f, "{}: valid ({} checks)", self.subject, self.checked);
        }
        write!(f, "{}: INVALID ({} checks)", self.subject, self.checked)?;
        for fail in &self.failures {
            write!(f, "\n  axiom {} failed {} time(s)", fail.axiom, fail.count)?;
            if let Some(w) = fail.witnesses.first() {
                write!(f, "; first witness {w:?}")?;
            }
        }
        Ok(())
    }
}

/// Evaluates `holds` on every tuple `prefix ++ (x_0, ..., x_k)` with
/// `x_i < dims[i]`, parallel over `x_0`, and records the failures.
pub(crate) fn scan(
    report: &mut ValidationReport,
    axiom: &str,
    prefix: &[usize],
    dims: &[usize],
    holds: impl Fn(&[Elem]) -> bool + Sync,
) {
    let total: u64 = dims.iter().map(|&d| d as u64).product();
    if total == 0 {
        return;
    }
    if dims.is_empty() {
        let ok = holds(prefix);
        report.record(axiom, 1, u64::from(!ok), if ok { vec![] } else { vec![prefix.to_vec()] });
        return;
    }
    let base = prefix.len();
    let parts: Vec<(u64, Vec<Vec<Elem>>)> = (0..dims[0])
        .into_par_iter()
        .map(|first| {
            let mut w: Vec<Elem> = prefix.to_vec();
            w.push(first);
            w.extend(std::iter::repeat_n(0, dims.len() - 1));
            let mut count = 0u64;
            let mut found = Vec::new();
            loop {
                if !holds(&w) {
                    count += 1;
                    if found.len() < WITNESS_CAP {
                        found.push(w.clone());
                    }
                }
                let mut k = dims.len();
                loop {
                    k -= 1;
                    if k == 0 {
                        return (count, found);
                    }
                    w[base + k] += 1;
                    if w[base + k] < dims[k] {
                        break;
                    }
                    w[base + k] = 0;
                }
            }
        })
        .collect();
    let count = parts.iter().map(|p| p.0).sum();
    let found = parts.into_iter().flat_map(|p| p.1).collect();
    report.record(axiom, total, count, found);
}

pub(crate) fn same_group(a: &Group, b: &Group) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn expect_hom(what: &str, f: &GroupHom, source: &Group, target: &Group) -> Result<()> {
    if !same_group(f.source(), source) || !same_group(f.target(), target) {
        return Err(CrossedError::Shape(format!("{what} has the wrong source or target")));
    }
    Ok(())
}

fn expect_action(what: &str, a: &GroupAction, actor: &Group, space: &Group) -> Result<()> {
    if !same_group(a.actor(), actor) || !same_group(a.space(), space) {
        return Err(CrossedError::Shape(format!("{what} has the wrong actor or space")));
    }
    Ok(())
}

/// A crossed module `μ: M → P` with an action of `P` on `M`.
#[derive(Clone, Debug)]
pub struct CrossedModule {
    boundary: GroupHom,
    action: GroupAction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleAxiom {
    /// `μ(^p m) = p μ(m) p^-1`, witness `(p, m)`
    Equivariance,
    /// `^(μ m) m' = m m' m^-1`, witness `(m, m')`
    Peiffer,
}

impl ModuleAxiom {
    pub const ALL: [ModuleAxiom; 2] = [ModuleAxiom::Equivariance, ModuleAxiom::Peiffer];

    pub fn id(self) -> &'static str {
        match self {
            ModuleAxiom::Equivariance => "equivariance",
            ModuleAxiom::Peiffer => "peiffer",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.id() == id)
    }
}

impl CrossedModule {
    pub fn new(boundary: GroupHom, action: GroupAction) -> Result<Self> {
        expect_action("action", &action, boundary.target(), boundary.source())?;
        Ok(CrossedModule { boundary, action })
    }

    /// `id: G → G` with conjugation.
    pub fn inner(g: &Group) -> Self {
        let action = GroupAction::from_fn_trusted(g, g, |p, m| g.conj(p, m));
        CrossedModule { boundary: GroupHom::identity(g), action }
    }

    /// Inclusion of a normal subgroup with conjugation.
    pub fn normal_inclusion(s: &Subgroup) -> Result<Self> {
        let (action, incl) = conjugation_action(s)?;
        Ok(CrossedModule { boundary: incl, action })
    }

    pub fn boundary(&self) -> &GroupHom {
        &self.boundary
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn source(&self) -> &Group {
        self.boundary.source()
    }

    pub fn target(&self) -> &Group {
        self.boundary.target()
    }

    pub fn holds(&self, axiom: ModuleAxiom, w: &[Elem]) -> bool {
        let (m, p) = (self.source(), self.target());
        let mu = &self.boundary;
        match axiom {
            ModuleAxiom::Equivariance => {
                let (g, x) = (w[0], w[1]);
                mu.apply(self.action.act(g, x)) == p.conj(g, mu.apply(x))
            }
            ModuleAxiom::Peiffer => {
                let (x, y) = (w[0], w[1]);
                self.action.act(mu.apply(x), y) == m.conj(x, y)
            }
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new("crossed module");
        let (nm, np) = (self.source().order(), self.target().order());
        for ax in ModuleAxiom::ALL {
            let dims = match ax {
                ModuleAxiom::Equivariance => [np, nm],
                ModuleAxiom::Peiffer => [nm, nm],
            };
            scan(&mut report, ax.id(), &[], &dims, |w| self.holds(ax, w));
        }
        report
    }

    /// `ker μ`, a central subgroup of `M` when the module is valid.
    pub fn kernel(&self) -> Subgroup {
        self.boundary.kernel()
    }

    /// `P / μ(M)`.
    pub fn cokernel(&self) -> Result<(Group, GroupHom)> {
        Ok(quotient(self.target(), &self.boundary.image_subgroup())?)
    }
}

pub fn validate_crossed_module(x: &CrossedModule) -> ValidationReport {
    x.validate()
}

/// A crossed square
///
/// ```text
///   L --λ'--> N
///   |λ        |ν
///   v         v
///   M --μ---> P
/// ```
///
/// with actions of `P` on `L`, `M`, `N` and a pairing `h: M × N → L`.
/// `M` and `N` act on everything through `μ` and `ν`.
#[derive(Clone, Debug)]
pub struct CrossedSquare {
    pub l: Group,
    pub m: Group,
    pub n: Group,
    pub p: Group,
    pub lambda: GroupHom,
    pub lambda_p: GroupHom,
    pub mu: GroupHom,
    pub nu: GroupHom,
    pub act_l: GroupAction,
    pub act_m: GroupAction,
    pub act_n: GroupAction,
    h: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SquareAxiom {
    Commutes,
    LambdaEquivariant,
    LambdaPrimeEquivariant,
    MuEquivariant,
    MuPeiffer,
    NuEquivariant,
    NuPeiffer,
    LambdaCrossedEquivariant,
    LambdaPeiffer,
    LambdaPrimeCrossedEquivariant,
    LambdaPrimePeiffer,
    MuLambdaEquivariant,
    HLeft,
    HRight,
    LambdaH,
    LambdaPrimeH,
    HLambda,
    HLambdaPrime,
    HEquivariant,
}

/// Which corner each witness coordinate ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Slot {
    L,
    M,
    N,
    P,
}

impl SquareAxiom {
    pub const ALL: [SquareAxiom; 19] = [
        SquareAxiom::Commutes,
        SquareAxiom::LambdaEquivariant,
        SquareAxiom::LambdaPrimeEquivariant,
        SquareAxiom::MuEquivariant,
        SquareAxiom::MuPeiffer,
        SquareAxiom::NuEquivariant,
        SquareAxiom::NuPeiffer,
        SquareAxiom::LambdaCrossedEquivariant,
        SquareAxiom::LambdaPeiffer,
        SquareAxiom::LambdaPrimeCrossedEquivariant,
        SquareAxiom::LambdaPrimePeiffer,
        SquareAxiom::MuLambdaEquivariant,
        SquareAxiom::HLeft,
        SquareAxiom::HRight,
        SquareAxiom::LambdaH,
        SquareAxiom::LambdaPrimeH,
        SquareAxiom::HLambda,
        SquareAxiom::HLambdaPrime,
        SquareAxiom::HEquivariant,
    ];

    pub fn id(self) -> &'static str {
        use SquareAxiom::*;
        match self {
            Commutes => "i.commutes",
            LambdaEquivariant => "i.lambda_equivariant",
            LambdaPrimeEquivariant => "i.lambda_prime_equivariant",
            MuEquivariant => "i.mu_equivariant",
            MuPeiffer => "i.mu_peiffer",
            NuEquivariant => "i.nu_equivariant",
            NuPeiffer => "i.nu_peiffer",
            LambdaCrossedEquivariant => "i.lambda_crossed_equivariant",
            LambdaPeiffer => "i.lambda_peiffer",
            LambdaPrimeCrossedEquivariant => "i.lambda_prime_crossed_equivariant",
            LambdaPrimePeiffer => "i.lambda_prime_peiffer",
            MuLambdaEquivariant => "i.mu_lambda_equivariant",
            HLeft => "ii.left",
            HRight => "ii.right",
            LambdaH => "iii.lambda",
            LambdaPrimeH => "iii.lambda_prime",
            HLambda => "iv.lambda",
            HLambdaPrime => "iv.lambda_prime",
            HEquivariant => "v.equivariant",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.id() == id)
    }

    pub(crate) fn slots(self) -> &'static [Slot] {
        use Slot::*;
        use SquareAxiom::*;
        match self {
            Commutes => &[L],
            LambdaEquivariant | LambdaPrimeEquivariant | MuLambdaEquivariant => &[P, L],
            MuEquivariant => &[P, M],
            MuPeiffer => &[M, M],
            NuEquivariant => &[P, N],
            NuPeiffer => &[N, N],
            LambdaCrossedEquivariant => &[M, L],
            LambdaPeiffer | LambdaPrimePeiffer => &[L, L],
            LambdaPrimeCrossedEquivariant => &[N, L],
            HLeft => &[M, M, N],
            HRight => &[M, N, N],
            LambdaH | LambdaPrimeH => &[M, N],
            HLambda => &[L, N],
            HLambdaPrime => &[M, L],
            HEquivariant => &[P, M, N],
        }
    }
}

impl CrossedSquare {
    /// Assembles a square from its parts; `h[m][n]` is an element of `L`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda: GroupHom,
        lambda_p: GroupHom,
        mu: GroupHom,
        nu: GroupHom,
        act_l: GroupAction,
        act_m: GroupAction,
        act_n: GroupAction,
        h: &[Vec<Elem>],
    ) -> Result<Self> {
        let l = lambda.source().clone();
        let m = mu.source().clone();
        let n = nu.source().clone();
        let p = mu.target().clone();
        expect_hom("lambda", &lambda, &l, &m)?;
        expect_hom("lambda'", &lambda_p, &l, &n)?;
        expect_hom("nu", &nu, &n, &p)?;
        expect_action("action on L", &act_l, &p, &l)?;
        expect_action("action on M", &act_m, &p, &m)?;
        expect_action("action on N", &act_n, &p, &n)?;
        if h.len() != m.order() || h.iter().any(|row| row.len() != n.order()) {
            return Err(CrossedError::Shape(format!("h must be a {}x{} table", m.order(), n.order())));
        }
        if let Some(&bad) = h.iter().flatten().find(|&&x| x >= l.order()) {
            return Err(CrossedError::Shape(format!("h value {bad} is not an element of L")));
        }
        let h = h.iter().flatten().map(|&x| x as u32).collect();
        Ok(CrossedSquare { l, m, n, p, lambda, lambda_p, mu, nu, act_l, act_m, act_n, h })
    }

    /// The square of normal subgroups `M ∩ N → M, N → P` with `h(m, n) = [m, n]`.
    pub fn inclusion(m_sub: &Subgroup, n_sub: &Subgroup) -> Result<Self> {
        let p = m_sub.parent().clone();
        if !same_group(n_sub.parent(), &p) {
            return Err(CrossedError::Shape("subgroups of different groups".into()));
        }
        let meet: Vec<Elem> = m_sub.members().iter().copied().filter(|&x| n_sub.contains(x)).collect();
        let l_sub = Subgroup::generated(&p, &meet)?;
        let (act_l, l_incl) = conjugation_action(&l_sub)?;
        let (act_m, mu) = conjugation_action(m_sub)?;
        let (act_n, nu) = conjugation_action(n_sub)?;
        let (l, m, n) = (l_incl.source().clone(), mu.source().clone(), nu.source().clone());
        let to = |sub: &Subgroup, x: Elem| sub.position(x).expect("intersection lies in both");
        let lambda = GroupHom::new(l.clone(), m.clone(), l.elements().map(|x| to(m_sub, l_incl.apply(x))).collect())?;
        let lambda_p =
            GroupHom::new(l.clone(), n.clone(), l.elements().map(|x| to(n_sub, l_incl.apply(x))).collect())?;
        let h: Vec<Vec<Elem>> = m
            .elements()
            .map(|a| {
                n.elements()
                    .map(|b| {
                        let c = p.commutator(mu.apply(a), nu.apply(b));
                        l_sub.position(c).ok_or_else(|| {
                            CrossedError::Shape(format!("commutator {c} leaves M ∩ N; subgroups are not normal"))
                        })
                    })
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        CrossedSquare::new(lambda, lambda_p, mu, nu, act_l, act_m, act_n, &h)
    }

    /// The square with all four corners trivial.
    pub fn trivial() -> Self {
        let g: Group = Arc::new(FiniteGroup::trivial());
        let id = GroupHom::identity(&g);
        let act = GroupAction::trivial(&g, &g);
        CrossedSquare::new(id.clone(), id.clone(), id.clone(), id, act.clone(), act.clone(), act, &[vec![0]])
            .expect("trivial square is well formed")
    }

    /// `L = M = N = P = Z/k`, `λ = λ' = 0`, `μ = ν = id`, trivial actions, `h(m, n) = mn`.
    pub fn cyclic_suspension(k: usize) -> Result<Self> {
        let g: Group = Arc::new(FiniteGroup::cyclic(k)?);
        let zero = GroupHom::trivial(&g, &g);
        let id = GroupHom::identity(&g);
        let act = GroupAction::trivial(&g, &g);
        let h: Vec<Vec<Elem>> = (0..k).map(|a| (0..k).map(|b| (a * b) % k).collect()).collect();
        CrossedSquare::new(zero.clone(), zero, id.clone(), id, act.clone(), act.clone(), act, &h)
    }

    #[inline]
    pub fn h(&self, m: Elem, n: Elem) -> Elem {
        self.h[m * self.n.order() + n] as usize
    }

    pub fn h_table(&self) -> Vec<Vec<Elem>> {
        self.m.elements().map(|a| self.n.elements().map(|b| self.h(a, b)).collect()).collect()
    }

    /// `^m l = ^(μ m) l`
    #[inline]
    pub fn m_on_l(&self, m: Elem, l: Elem) -> Elem {
        self.act_l.act(self.mu.apply(m), l)
    }

    #[inline]
    pub fn n_on_l(&self, n: Elem, l: Elem) -> Elem {
        self.act_l.act(self.nu.apply(n), l)
    }

    #[inline]
    pub fn m_on_n(&self, m: Elem, n: Elem) -> Elem {
        self.act_n.act(self.mu.apply(m), n)
    }

    #[inline]
    pub fn n_on_m(&self, n: Elem, m: Elem) -> Elem {
        self.act_m.act(self.nu.apply(n), m)
    }

    /// The crossed module `μλ: L → P`.
    pub fn diagonal(&self) -> CrossedModule {
        CrossedModule { boundary: self.lambda.then(&self.mu), action: self.act_l.clone() }
    }

    /// Replays a single axiom instance.
    pub fn holds(&self, axiom: SquareAxiom, w: &[Elem]) -> bool {
        use SquareAxiom::*;
        let (l, m, n, p) = (&*self.l, &*self.m, &*self.n, &*self.p);
        let (lam, lamp, mu, nu) = (&self.lambda, &self.lambda_p, &self.mu, &self.nu);
        match axiom {
            Commutes => mu.apply(lam.apply(w[0])) == nu.apply(lamp.apply(w[0])),
            LambdaEquivariant => lam.apply(self.act_l.act(w[0], w[1])) == self.act_m.act(w[0], lam.apply(w[1])),
            LambdaPrimeEquivariant => {
                lamp.apply(self.act_l.act(w[0], w[1])) == self.act_n.act(w[0], lamp.apply(w[1]))
            }
            MuEquivariant => mu.apply(self.act_m.act(w[0], w[1])) == p.conj(w[0], mu.apply(w[1])),
            MuPeiffer => self.act_m.act(mu.apply(w[0]), w[1]) == m.conj(w[0], w[1]),
            NuEquivariant => nu.apply(self.act_n.act(w[0], w[1])) == p.conj(w[0], nu.apply(w[1])),
            NuPeiffer => self.act_n.act(nu.apply(w[0]), w[1]) == n.conj(w[0], w[1]),
            LambdaCrossedEquivariant => lam.apply(self.m_on_l(w[0], w[1])) == m.conj(w[0], lam.apply(w[1])),
            LambdaPeiffer => self.m_on_l(lam.apply(w[0]), w[1]) == l.conj(w[0], w[1]),
            LambdaPrimeCrossedEquivariant => lamp.apply(self.n_on_l(w[0], w[1])) == n.conj(w[0], lamp.apply(w[1])),
            LambdaPrimePeiffer => self.n_on_l(lamp.apply(w[0]), w[1]) == l.conj(w[0], w[1]),
            MuLambdaEquivariant => {
                let ml = |x| mu.apply(lam.apply(x));
                ml(self.act_l.act(w[0], w[1])) == p.conj(w[0], ml(w[1]))
            }
            HLeft => {
                let (a, a2, b) = (w[0], w[1], w[2]);
                let lhs = self.h(m.mul(a, a2), b);
                let rhs = l.mul(self.h(m.conj(a, a2), self.m_on_n(a, b)), self.h(a, b));
                lhs == rhs
            }
            HRight => {
                let (a, b, b2) = (w[0], w[1], w[2]);
                let lhs = self.h(a, n.mul(b, b2));
                let rhs = l.mul(self.h(a, b), self.h(self.n_on_m(b, a), n.conj(b, b2)));
                lhs == rhs
            }
            LambdaH => {
                let (a, b) = (w[0], w[1]);
                lam.apply(self.h(a, b)) == m.mul(a, m.inv(self.n_on_m(b, a)))
            }
            LambdaPrimeH => {
                let (a, b) = (w[0], w[1]);
                lamp.apply(self.h(a, b)) == n.mul(self.m_on_n(a, b), n.inv(b))
            }
            HLambda => {
                let (x, b) = (w[0], w[1]);
                self.h(lam.apply(x), b) == l.mul(x, l.inv(self.n_on_l(b, x)))
            }
            HLambdaPrime => {
                let (a, x) = (w[0], w[1]);
                self.h(a, lamp.apply(x)) == l.mul(self.m_on_l(a, x), l.inv(x))
            }
            HEquivariant => {
                let (g, a, b) = (w[0], w[1], w[2]);
                self.h(self.act_m.act(g, a), self.act_n.act(g, b)) == self.act_l.act(g, self.h(a, b))
            }
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new("crossed square");
        for ax in SquareAxiom::ALL {
            let dims: Vec<usize> = ax
                .slots()
                .iter()
                .map(|s| match s {
                    Slot::L => self.l.order(),
                    Slot::M => self.m.order(),
                    Slot::N => self.n.order(),
                    Slot::P => self.p.order(),
                })
                .collect();
            scan(&mut report, ax.id(), &[], &dims, |w| self.holds(ax, w));
        }
        report
    }
}

pub fn validate_crossed_square(x: &CrossedSquare) -> ValidationReport {
    x.validate()
}

/// A crossed square that has passed [`CrossedSquare::validate`].
#[derive(Clone, Debug)]
pub struct ValidatedSquare(CrossedSquare);

impl ValidatedSquare {
    pub fn new(square: CrossedSquare) -> Result<Self> {
        let report = square.validate();
        if report.is_valid() {
            Ok(ValidatedSquare(square))
        } else {
            Err(CrossedError::Invalid(Box::new(report)))
        }
    }

    pub fn into_inner(self) -> CrossedSquare {
        self.0
    }
}

impl Deref for ValidatedSquare {
    type Target = CrossedSquare;
    fn deref(&self) -> &CrossedSquare {
        &self.0
    }
}
