//! Homotopy invariants of the 3-type of a crossed square.
//!
//! For a crossed square with corners `L, M, N, P` the groups are read off the complex
//!
//! ```text
//!   L --d2--> M ⋊ N --d1--> P
//!   d2(l) = (λ(l)^-1, λ'(l)),   d1(m, n) = μ(m) ν(n)
//! ```
//!
//! as `π1 = coker d1`, `π2 = ker d1 / im d2` and `π3 = ker λ ∩ ker λ'`.

use rayon::prelude::*;
use thiserror::Error;

use crate::crossed::{CrossedError, CrossedModule, CrossedSquare, ValidationReport};
use crate::group::{
    abelian_invariants, direct_product, quotient, semidirect_product, Elem, Group, GroupAction, GroupError, GroupHom,
    SemidirectProduct, Subgroup,
};

mod abelian;

pub use abelian::{homotopy_of_abelian_square, AbelianHomotopy};

#[derive(Debug, Error)]
pub enum HomotopyError {
    #[error("subgroup expected to be normal is not: {0}")]
    NormalityFailure(String),
    #[error("invariant depends on the choice of representative: {0}")]
    WellDefinedness(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("Postnikov crossed module fails validation:\n{0}")]
    Postnikov(Box<ValidationReport>),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Crossed(#[from] CrossedError),
    #[error(transparent)]
    Abelian(#[from] crate::abelian::AbelianError),
}

pub type Result<T, E = HomotopyError> = std::result::Result<T, E>;

fn normal_quotient(g: &Group, s: &Subgroup, what: &str) -> Result<(Group, GroupHom)> {
    quotient(g, s).map_err(|e| match e {
        GroupError::NotNormal { g: x, s: y } => {
            HomotopyError::NormalityFailure(format!("{what}: conjugating {y} by {x} leaves the subgroup"))
        }
        other => other.into(),
    })
}

fn abelian_or(g: &Group, what: &str) -> Result<Vec<usize>> {
    abelian_invariants(g).map_err(|_| HomotopyError::Consistency(format!("{what} is not abelian")))
}

/// Smallest element in each fibre of a surjection.
fn fibre_minima(proj: &GroupHom) -> Vec<Elem> {
    let mut reps = vec![usize::MAX; proj.target().order()];
    for x in proj.source().elements().rev() {
        reps[proj.apply(x)] = x;
    }
    reps
}

/// A generating set chosen greedily from `candidates`, skipping the identity
/// and anything already generated.
pub fn greedy_generators(g: &Group, candidates: impl IntoIterator<Item = Elem>) -> Vec<Elem> {
    let mut gens = Vec::new();
    let mut span = Subgroup::generated(g, &[]).expect("trivial subgroup");
    for c in candidates {
        if span.order() == g.order() {
            break;
        }
        if !span.contains(c) {
            gens.push(c);
            span = Subgroup::generated(g, &gens).expect("subgroup of a finite group");
        }
    }
    gens
}

/// The complex `L -> M ⋊ N -> P`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub sd: SemidirectProduct,
    pub d2: GroupHom,
    pub d1: GroupHom,
}

pub fn chain_complex(sq: &CrossedSquare) -> Result<ChainComplex> {
    let sd = semidirect_product(&sq.act_m.pull_back(&sq.nu));
    let g = &sd.group;
    let d2_img: Vec<Elem> = sq
        .l
        .elements()
        .map(|l| sd.index(sq.m.inv(sq.lambda.apply(l)), sq.lambda_p.apply(l)))
        .collect();
    let d1_img: Vec<Elem> = g
        .elements()
        .map(|x| {
            let (m, n) = sd.pair(x);
            sq.p.mul(sq.mu.apply(m), sq.nu.apply(n))
        })
        .collect();
    let d2 = GroupHom::new(sq.l.clone(), g.clone(), d2_img)
        .map_err(|e| HomotopyError::Consistency(format!("d2 is not a homomorphism: {e}")))?;
    let d1 = GroupHom::new(g.clone(), sq.p.clone(), d1_img)
        .map_err(|e| HomotopyError::Consistency(format!("d1 is not a homomorphism: {e}")))?;
    if let Some(l) = sq.l.elements().find(|&l| d1.apply(d2.apply(l)) != sq.p.identity()) {
        return Err(HomotopyError::Consistency(format!("d1 d2 is nontrivial at {}", sq.l.name(l))));
    }
    Ok(ChainComplex { sd, d2, d1 })
}

/// `π1`, `π2`, `π3` of a crossed square.
#[derive(Clone, Debug)]
pub struct HomotopyGroups {
    pub complex: ChainComplex,
    pub pi1: Group,
    /// `P -> π1`
    pub pi1_projection: GroupHom,
    pub ker_d1: Subgroup,
    pub im_d2: Subgroup,
    pub pi2: Group,
    /// Class in `π2` of each element of `ker d1`, indexed by position in `ker_d1`.
    pub pi2_projection: GroupHom,
    /// Smallest element of `M ⋊ N` in each class of `π2`.
    pub pi2_reps: Vec<Elem>,
    pub pi2_invariants: Vec<usize>,
    pub pi3: Subgroup,
    pub pi3_invariants: Vec<usize>,
}

impl HomotopyGroups {
    /// The `π2` class of an element of `M ⋊ N`, if it lies in `ker d1`.
    pub fn pi2_class(&self, x: Elem) -> Option<Elem> {
        self.ker_d1.position(x).map(|i| self.pi2_projection.apply(i))
    }

    /// Abelian invariants of `π1`, when it is abelian.
    pub fn pi1_invariants(&self) -> Option<Vec<usize>> {
        abelian_invariants(&self.pi1).ok()
    }
}

pub fn homotopy_groups(sq: &CrossedSquare) -> Result<HomotopyGroups> {
    let complex = chain_complex(sq)?;
    let (pi1, pi1_projection) = normal_quotient(&sq.p, &complex.d1.image_subgroup(), "im d1 in P")?;

    let ker_d1 = complex.d1.kernel();
    let im_d2 = complex.d2.image_subgroup();
    if let Some(&x) = im_d2.members().iter().find(|&&x| !ker_d1.contains(x)) {
        return Err(HomotopyError::Consistency(format!("im d2 not in ker d1 at {}", complex.sd.group.name(x))));
    }
    let (kg, _) = ker_d1.as_group();
    let im_in_k: Vec<Elem> = im_d2.members().iter().map(|&x| ker_d1.position(x).expect("im d2 in ker d1")).collect();
    let im_sub = Subgroup::generated(&kg, &im_in_k)?;
    let (pi2, pi2_projection) = normal_quotient(&kg, &im_sub, "im d2 in ker d1")?;
    let pi2_reps: Vec<Elem> = fibre_minima(&pi2_projection).into_iter().map(|i| ker_d1.members()[i]).collect();
    let pi2_invariants = abelian_or(&pi2, "pi2")?;

    let pi3_members: Vec<Elem> = sq
        .l
        .elements()
        .filter(|&l| sq.lambda.apply(l) == sq.m.identity() && sq.lambda_p.apply(l) == sq.n.identity())
        .collect();
    let pi3 = Subgroup::generated(&sq.l, &pi3_members)?;
    if let Some((&a, b)) =
        pi3.members().iter().find_map(|a| sq.l.elements().find(|&b| sq.l.mul(*a, b) != sq.l.mul(b, *a)).map(|b| (a, b)))
    {
        return Err(HomotopyError::Consistency(format!(
            "pi3 is not central: {} and {} do not commute",
            sq.l.name(a),
            sq.l.name(b)
        )));
    }
    let pi3_invariants = abelian_or(&pi3.as_group().0, "pi3")?;

    let hg = HomotopyGroups {
        complex,
        pi1,
        pi1_projection,
        ker_d1,
        im_d2,
        pi2,
        pi2_projection,
        pi2_reps,
        pi2_invariants,
        pi3,
        pi3_invariants,
    };
    check_pullback(sq, &hg)?;
    Ok(hg)
}

/// Recomputes `π2` as `(M ×_P N) / {(λl, λ'l)}` and compares it with the
/// complex through `(m, n) -> (m, n^-1)`.
fn check_pullback(sq: &CrossedSquare, hg: &HomotopyGroups) -> Result<()> {
    let dp = direct_product(&sq.m, &sq.n);
    let g = &dp.group;
    let fibre: Vec<Elem> = g
        .elements()
        .filter(|&x| {
            let (m, n) = dp.pair(x);
            sq.mu.apply(m) == sq.nu.apply(n)
        })
        .collect();
    let fibre = Subgroup::generated(g, &fibre)?;
    let (fg, _) = fibre.as_group();
    let diag: Vec<Elem> = sq
        .l
        .elements()
        .map(|l| fibre.position(dp.index(sq.lambda.apply(l), sq.lambda_p.apply(l))).expect("(λl, λ'l) in the pullback"))
        .collect();
    let (q, proj) = normal_quotient(&fg, &Subgroup::generated(&fg, &diag)?, "boundary image in the pullback")?;
    if q.order() != hg.pi2.order() {
        return Err(HomotopyError::Consistency(format!(
            "pullback pi2 has order {} but the complex gives {}",
            q.order(),
            hg.pi2.order()
        )));
    }
    let sd = &hg.complex.sd;
    let mut induced = vec![usize::MAX; q.order()];
    for (i, &x) in hg.ker_d1.members().iter().enumerate() {
        let (m, n) = sd.pair(x);
        let y = fibre
            .position(dp.index(m, sq.n.inv(n)))
            .ok_or_else(|| HomotopyError::Consistency(format!("{} does not map into the pullback", sd.group.name(x))))?;
        let (c, d) = (hg.pi2_projection.apply(i), proj.apply(y));
        if induced[c] == usize::MAX {
            induced[c] = d;
        } else if induced[c] != d {
            return Err(HomotopyError::Consistency("pullback comparison is not well defined".into()));
        }
    }
    let mut seen = vec![false; q.order()];
    for &d in &induced {
        seen[d] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(HomotopyError::Consistency("pullback comparison is not bijective".into()));
    }
    for a in hg.pi2.elements() {
        for b in hg.pi2.elements() {
            if induced[hg.pi2.mul(a, b)] != q.mul(induced[a], induced[b]) {
                return Err(HomotopyError::Consistency("pullback comparison is not a homomorphism".into()));
            }
        }
    }
    Ok(())
}

/// `η*: π2 -> π3` and the Whitehead product `π2 × π2 -> π3`, as tables of
/// elements of `L`.
///
/// `η*` is `h(m, n)` on a representative `(m, n)` of `ker d1`. The Whitehead
/// product of `(m, n)` and `(m', n')` is `^{μ(m')ν(n)} h(m, n') · h(m', n)`,
/// which is `h(m', n) h(m, n')` when the actions are trivial.
#[derive(Clone, Debug)]
pub struct QuadraticInvariants {
    /// `η*(c) = h(m, n)` for a representative `(m, n)` of `c`.
    pub eta: Vec<Elem>,
    /// `W(c, c')` on `ker d1` representatives.
    pub whitehead: Vec<Vec<Elem>>,
}

impl QuadraticInvariants {
    /// First pair `(u, v)` with `η*(uv) != η*(u) η*(v) W(u, v)`.
    pub fn quadratic_defect(&self, l: &Group, pi2: &Group) -> Option<(Elem, Elem)> {
        pi2.elements().find_map(|u| {
            pi2.elements()
                .find(|&v| {
                    self.eta[pi2.mul(u, v)] != l.product([self.eta[u], self.eta[v], self.whitehead[u][v]])
                })
                .map(|v| (u, v))
        })
    }

    /// First `u` with `W(u, u) != η*(u)^2`.
    pub fn diagonal_defect(&self, l: &Group, pi2: &Group) -> Option<Elem> {
        pi2.elements().find(|&u| self.whitehead[u][u] != l.mul(self.eta[u], self.eta[u]))
    }
}

pub fn quadratic_invariants(sq: &CrossedSquare, hg: &HomotopyGroups) -> Result<QuadraticInvariants> {
    let sd = &hg.complex.sd;
    let k = hg.ker_d1.members();
    let class: Vec<Elem> = (0..k.len()).map(|i| hg.pi2_projection.apply(i)).collect();
    let eta_of = |x: Elem| {
        let (m, n) = sd.pair(x);
        sq.h(m, n)
    };
    let w_of = |x: Elem, y: Elem| {
        let ((m, n), (m2, n2)) = (sd.pair(x), sd.pair(y));
        let p = sq.p.mul(sq.mu.apply(m2), sq.nu.apply(n));
        sq.l.mul(sq.act_l.act(p, sq.h(m, n2)), sq.h(m2, n))
    };
    let eta: Vec<Elem> = hg.pi2_reps.iter().map(|&x| eta_of(x)).collect();
    if let Some(&x) = k.iter().zip(&class).find(|&(&x, &c)| eta_of(x) != eta[c]).map(|(x, _)| x) {
        return Err(HomotopyError::WellDefinedness(format!("eta* differs on {}", sd.group.name(x))));
    }
    if let Some(&e) = eta.iter().find(|&&e| !hg.pi3.contains(e)) {
        return Err(HomotopyError::Consistency(format!("eta* takes the value {} outside pi3", sq.l.name(e))));
    }
    let whitehead: Vec<Vec<Elem>> =
        hg.pi2_reps.iter().map(|&x| hg.pi2_reps.iter().map(|&y| w_of(x, y)).collect()).collect();
    let bad = (0..k.len()).into_par_iter().find_map_any(|i| {
        (0..k.len())
            .find(|&j| w_of(k[i], k[j]) != whitehead[class[i]][class[j]])
            .map(|j| (k[i], k[j]))
    });
    if let Some((x, y)) = bad {
        return Err(HomotopyError::WellDefinedness(format!(
            "Whitehead product differs on {}, {}",
            sd.group.name(x),
            sd.group.name(y)
        )));
    }
    Ok(QuadraticInvariants { eta, whitehead })
}

/// The crossed module `(M ⋊ N) / im d2 -> P` modelling the 2-type.
#[derive(Clone, Debug)]
pub struct Postnikov {
    pub module: CrossedModule,
    /// `M ⋊ N -> (M ⋊ N) / im d2`
    pub projection: GroupHom,
}

pub fn postnikov_crossed_module(sq: &CrossedSquare, hg: &HomotopyGroups) -> Result<Postnikov> {
    let sd = &hg.complex.sd;
    let (q, projection) = normal_quotient(&sd.group, &hg.im_d2, "im d2 in M ⋊ N")?;
    let reps = fibre_minima(&projection);
    let boundary_img: Vec<Elem> = reps.iter().map(|&x| hg.complex.d1.apply(x)).collect();
    let boundary = GroupHom::new(q.clone(), sq.p.clone(), boundary_img)
        .map_err(|e| HomotopyError::Consistency(format!("induced boundary: {e}")))?;
    let act_sd = |p: Elem, x: Elem| {
        let (m, n) = sd.pair(x);
        sd.index(sq.act_m.act(p, m), sq.act_n.act(p, n))
    };
    let bad = sd.group.elements().into_par_iter().find_map_any(|x| {
        sq.p.elements()
            .find(|&p| projection.apply(act_sd(p, x)) != projection.apply(act_sd(p, reps[projection.apply(x)])))
            .map(|p| (p, x))
    });
    if let Some((p, x)) = bad {
        return Err(HomotopyError::WellDefinedness(format!(
            "action of {} on the class of {}",
            sq.p.name(p),
            sd.group.name(x)
        )));
    }
    let action = GroupAction::from_fn(&sq.p, &q, |p, c| projection.apply(act_sd(p, reps[c])))
        .map_err(|e| HomotopyError::Consistency(format!("induced action: {e}")))?;
    let module = CrossedModule::new(boundary, action)?;
    let report = module.validate();
    if !report.is_valid() {
        return Err(HomotopyError::Postnikov(Box::new(report)));
    }
    let kernel = module.kernel().as_group().0;
    if abelian_or(&kernel, "Postnikov kernel")? != hg.pi2_invariants {
        return Err(HomotopyError::Consistency("Postnikov kernel differs from pi2".into()));
    }
    let (coker, _) = module.cokernel()?;
    if coker.order() != hg.pi1.order() {
        return Err(HomotopyError::Consistency("Postnikov cokernel differs from pi1".into()));
    }
    Ok(Postnikov { module, projection })
}

/// Everything computed from a crossed square.
#[derive(Clone, Debug)]
pub struct ThreeType {
    pub groups: HomotopyGroups,
    pub quadratic: QuadraticInvariants,
    pub postnikov: Postnikov,
}

impl ThreeType {
    pub fn eta_star(&self, c: Elem) -> Elem {
        self.quadratic.eta[c]
    }

    pub fn whitehead(&self, c: Elem, d: Elem) -> Elem {
        self.quadratic.whitehead[c][d]
    }
}

/// Computes the homotopy groups, `η*`, Whitehead products and the Postnikov
/// crossed module, with all cross-checks.
pub fn analyze(sq: &CrossedSquare) -> Result<ThreeType> {
    let groups = homotopy_groups(sq)?;
    let quadratic = quadratic_invariants(sq, &groups)?;
    if let Some((u, v)) = quadratic.quadratic_defect(&sq.l, &groups.pi2) {
        return Err(HomotopyError::Consistency(format!(
            "eta* is not quadratic with respect to the Whitehead product at ({}, {})",
            groups.pi2.name(u),
            groups.pi2.name(v)
        )));
    }
    if let Some(u) = quadratic.diagonal_defect(&sq.l, &groups.pi2) {
        return Err(HomotopyError::Consistency(format!(
            "W(u, u) differs from eta*(u)^2 at {}",
            groups.pi2.name(u)
        )));
    }
    let postnikov = postnikov_crossed_module(sq, &groups)?;
    Ok(ThreeType { groups, quadratic, postnikov })
}
