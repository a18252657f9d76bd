//! The non-abelian tensor product `M ⊗ N` of normal subgroups of a finite
//! group `P`, realised by coset enumeration, and the universal crossed square
//!
//! ```text
//!   M ⊗ N --> N
//!     |       |
//!     v       v
//!     M ----> P
//! ```

use rayon::prelude::*;
use thiserror::Error;

use crate::crossed::{CrossedError, CrossedSquare, ValidatedSquare, ValidationReport};
use crate::fp::{enumerate_group, EnumerationStats, FpError, FpGroup, Letter, Word};
use crate::group::{conjugation_action, Elem, Group, GroupAction, GroupError, GroupHom, Subgroup};
use crate::homotopy::{analyze, ThreeType};
use crate::report::ThreeTypeReport;

/// Default bound on live cosets for tensor enumerations.
pub const DEFAULT_TENSOR_BOUND: usize = 100_000;

#[derive(Debug, Error)]
pub enum TensorError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Enumeration(#[from] FpError),
    #[error("boundary or action map failed verification: {0}")]
    HomomorphismFailure(String),
    #[error("tensor relation fails in the enumerated group: {0}")]
    RelationFailure(String),
    #[error("universal crossed square fails validation:\n{0}")]
    ValidationFailure(Box<ValidationReport>),
    #[error(transparent)]
    Crossed(#[from] CrossedError),
    #[error(transparent)]
    Homotopy(#[from] crate::homotopy::HomotopyError),
}

pub type Result<T, E = TensorError> = std::result::Result<T, E>;

/// The presentation of `M ⊗ N` with one generator per pair.
#[derive(Clone, Debug)]
pub struct TensorPresentation {
    pub presentation: FpGroup,
    pub m: Subgroup,
    pub n: Subgroup,
}

impl TensorPresentation {
    /// Generator index of `m ⊗ n`, for positions in the member lists.
    #[inline]
    pub fn generator(&self, mi: usize, ni: usize) -> usize {
        mi * self.n.order() + ni
    }
}

fn check_normal(s: &Subgroup) -> Result<()> {
    if let Some((g, x)) = s.normality_witness() {
        return Err(GroupError::NotNormal { g, s: x }.into());
    }
    Ok(())
}

/// Generators `g(m,n)` and relators
/// `g(mm',n)^-1 g(^m m', ^m n) g(m,n)` and `g(m,nn')^-1 g(m,n) g(^n m, ^n n')`,
/// with conjugation actions in `P`.
pub fn tensor_presentation(m: &Subgroup, n: &Subgroup) -> Result<TensorPresentation> {
    check_normal(m)?;
    check_normal(n)?;
    let p = m.parent().clone();
    let (mm, nn) = (m.members(), n.members());
    let (km, kn) = (mm.len(), nn.len());
    let gen = |a: Elem, b: Elem| m.position(a).expect("in M") * kn + n.position(b).expect("in N");
    let names: Vec<String> = mm
        .iter()
        .flat_map(|&a| nn.iter().map(move |&b| (a, b)))
        .map(|(a, b)| format!("{}⊗{}", p.name(a), p.name(b)))
        .collect();
    let mut relators: Vec<Word> = Vec::with_capacity(km * km * kn + km * kn * kn);
    for &a in mm {
        for &a2 in mm {
            for &b in nn {
                relators.push(vec![
                    Letter::inv(gen(p.mul(a, a2), b)),
                    Letter::gen(gen(p.conj(a, a2), p.conj(a, b))),
                    Letter::gen(gen(a, b)),
                ]);
            }
        }
    }
    for &a in mm {
        for &b in nn {
            for &b2 in nn {
                relators.push(vec![
                    Letter::inv(gen(a, p.mul(b, b2))),
                    Letter::gen(gen(a, b)),
                    Letter::gen(gen(p.conj(b, a), p.conj(b, b2))),
                ]);
            }
        }
    }
    let presentation = FpGroup::new(names, relators)?;
    Ok(TensorPresentation { presentation, m: m.clone(), n: n.clone() })
}

/// `M ⊗ N` with its boundary maps and the action of `P`.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub group: Group,
    /// `M` and `N` as groups, with their inclusions into `P` and conjugation actions.
    pub mu: GroupHom,
    pub nu: GroupHom,
    pub act_m: GroupAction,
    pub act_n: GroupAction,
    /// `λ(m ⊗ n) = m (^n m)^-1` into `M`
    pub lambda: GroupHom,
    /// `λ'(m ⊗ n) = (^m n) n^-1` into `N`
    pub lambda_p: GroupHom,
    /// `^p (m ⊗ n) = ^p m ⊗ ^p n`
    pub action: GroupAction,
    pairing: Vec<u32>,
    pub stats: EnumerationStats,
}

impl TensorProduct {
    pub fn p(&self) -> &Group {
        self.mu.target()
    }

    pub fn m(&self) -> &Group {
        self.mu.source()
    }

    pub fn n(&self) -> &Group {
        self.nu.source()
    }

    /// `m ⊗ n` for elements of the groups `M` and `N`.
    #[inline]
    pub fn pair(&self, m: Elem, n: Elem) -> Elem {
        self.pairing[m * self.n().order() + n] as usize
    }

    /// `m ⊗ n` for elements of `P` lying in `M` and `N`.
    pub fn pair_in_p(&self, m: Elem, n: Elem) -> Option<Elem> {
        let mi = self.mu.images().iter().position(|&x| x == m)?;
        let ni = self.nu.images().iter().position(|&x| x == n)?;
        Some(self.pair(mi, ni))
    }

    pub fn pairing_table(&self) -> Vec<Vec<Elem>> {
        (0..self.m().order()).map(|a| (0..self.n().order()).map(|b| self.pair(a, b)).collect()).collect()
    }

    /// Replays both tensor relations over all tuples; returns the first failure.
    pub fn check_relations(&self) -> Result<()> {
        let (l, m, n) = (&*self.group, &**self.m(), &**self.n());
        let m_on_n = |a: Elem, b: Elem| self.act_n.act(self.mu.apply(a), b);
        let n_on_m = |b: Elem, a: Elem| self.act_m.act(self.nu.apply(b), a);
        let bad = m.elements().into_par_iter().find_map_first(|a| {
            for a2 in m.elements() {
                for b in n.elements() {
                    let lhs = self.pair(m.mul(a, a2), b);
                    let rhs = l.mul(self.pair(m.conj(a, a2), m_on_n(a, b)), self.pair(a, b));
                    if lhs != rhs {
                        return Some(format!("mm'⊗n at ({a},{a2},{b})"));
                    }
                }
            }
            for b in n.elements() {
                for b2 in n.elements() {
                    let lhs = self.pair(a, n.mul(b, b2));
                    let rhs = l.mul(self.pair(a, b), self.pair(n_on_m(b, a), n.conj(b, b2)));
                    if lhs != rhs {
                        return Some(format!("m⊗nn' at ({a},{b},{b2})"));
                    }
                }
            }
            None
        });
        match bad {
            Some(msg) => Err(TensorError::RelationFailure(msg)),
            None => Ok(()),
        }
    }
}

/// Evaluates a word letter by letter through `f` on generators.
fn eval_word(g: &Group, w: &[Letter], f: impl Fn(usize) -> Elem) -> Elem {
    w.iter().fold(g.identity(), |acc, l| {
        let x = f(l.generator);
        g.mul(acc, if l.inverse { g.inv(x) } else { x })
    })
}

/// `M ⊗ N` by enumerating cosets of the trivial subgroup.
pub fn nonabelian_tensor(m_sub: &Subgroup, n_sub: &Subgroup, max_cosets: usize) -> Result<TensorProduct> {
    let tp = tensor_presentation(m_sub, n_sub)?;
    let reg = enumerate_group(&tp.presentation, max_cosets)?;
    let stats = reg.coset_table().stats().clone();
    let group = reg.group.clone();
    let (act_m, mu) = conjugation_action(m_sub)?;
    let (act_n, nu) = conjugation_action(n_sub)?;
    let (m, n, p) = (mu.source().clone(), nu.source().clone(), mu.target().clone());
    let (km, kn) = (m.order(), n.order());
    let pairing: Vec<u32> = (0..km * kn).map(|g| reg.generator_images[g] as u32).collect();
    let pair_of = |g: usize| (g / kn, g % kn);

    // [m, n] lies in M ∩ N
    let comm = |g: usize| {
        let (a, b) = pair_of(g);
        p.commutator(mu.apply(a), nu.apply(b))
    };
    let lam_gen: Vec<Elem> =
        (0..km * kn).map(|g| m_sub.position(comm(g)).expect("[m,n] lies in M")).collect();
    let lamp_gen: Vec<Elem> =
        (0..km * kn).map(|g| n_sub.position(comm(g)).expect("[m,n] lies in N")).collect();
    let lambda_img: Vec<Elem> = reg.words.iter().map(|w| eval_word(&m, w, |g| lam_gen[g])).collect();
    let lambda_p_img: Vec<Elem> = reg.words.iter().map(|w| eval_word(&n, w, |g| lamp_gen[g])).collect();
    let hom_fail = |what: &str, e: GroupError| TensorError::HomomorphismFailure(format!("{what}: {e}"));
    let lambda = GroupHom::new(group.clone(), m.clone(), lambda_img).map_err(|e| hom_fail("lambda", e))?;
    let lambda_p = GroupHom::new(group.clone(), n.clone(), lambda_p_img).map_err(|e| hom_fail("lambda'", e))?;
    for g in 0..km * kn {
        if lambda.apply(pairing[g] as usize) != lam_gen[g] || lambda_p.apply(pairing[g] as usize) != lamp_gen[g] {
            return Err(TensorError::HomomorphismFailure(format!(
                "boundary disagrees with its definition on generator {}",
                tp.presentation.generator_names()[g]
            )));
        }
    }

    let act_gen = |q: Elem, g: usize| {
        let (a, b) = pair_of(g);
        pairing[act_m.act(q, a) * kn + act_n.act(q, b)] as usize
    };
    let table: Vec<Vec<Elem>> = p
        .elements()
        .into_par_iter()
        .map(|q| reg.words.iter().map(|w| eval_word(&group, w, |g| act_gen(q, g))).collect())
        .collect();
    let action = GroupAction::new(p.clone(), group.clone(), &table).map_err(|e| hom_fail("P-action", e))?;
    for q in p.elements() {
        for g in 0..km * kn {
            if action.act(q, pairing[g] as usize) != act_gen(q, g) {
                return Err(TensorError::HomomorphismFailure(format!(
                    "P-action disagrees with its definition on generator {}",
                    tp.presentation.generator_names()[g]
                )));
            }
        }
    }
    let t = TensorProduct { group, mu, nu, act_m, act_n, lambda, lambda_p, action, pairing, stats };
    t.check_relations()?;
    Ok(t)
}

impl TensorProduct {
    /// The universal crossed square with corners `(M ⊗ N, M, N, P)`, unvalidated.
    pub fn crossed_square(&self) -> Result<CrossedSquare> {
        Ok(CrossedSquare::new(
            self.lambda.clone(),
            self.lambda_p.clone(),
            self.mu.clone(),
            self.nu.clone(),
            self.action.clone(),
            self.act_m.clone(),
            self.act_n.clone(),
            &self.pairing_table(),
        )?)
    }
}

/// The universal crossed square of two normal subgroups, validated.
pub fn universal_crossed_square(m_sub: &Subgroup, n_sub: &Subgroup, max_cosets: usize) -> Result<(TensorProduct, ValidatedSquare)> {
    let t = nonabelian_tensor(m_sub, n_sub, max_cosets)?;
    let sq = t.crossed_square()?;
    let validated = ValidatedSquare::new(sq).map_err(|e| match e {
        CrossedError::Invalid(report) => TensorError::ValidationFailure(report),
        other => other.into(),
    })?;
    Ok((t, validated))
}

/// The 3-type of the suspension of `K(G, 1)`, from the universal crossed
/// square of `G` with itself.
#[derive(Clone, Debug)]
pub struct Suspension {
    pub tensor: TensorProduct,
    pub square: ValidatedSquare,
    pub three_type: ThreeType,
    /// `[g]` for each generator `g` of `G`, with its class in `π2 ≅ G^ab`,
    /// represented by `(g, g^-1)`.
    pub pi2_generators: Vec<(String, Elem)>,
}

impl Suspension {
    /// The class in `π2` of `g ∈ G`.
    pub fn class_of(&self, g: Elem) -> Elem {
        let sd = &self.three_type.groups.complex.sd;
        let x = sd.index(g, self.square.n.inv(g));
        self.three_type.groups.pi2_class(x).expect("(g, g^-1) lies in ker d1")
    }

    pub fn report(&self, input: &str) -> ThreeTypeReport {
        ThreeTypeReport::finite(input, &self.square, &self.three_type, self.pi2_generators.clone())
            .with_enumeration(&self.tensor.stats)
    }
}

pub fn suspension_three_type(g: &Group, max_cosets: usize) -> Result<Suspension> {
    let whole = Subgroup::whole(g);
    let (tensor, square) = universal_crossed_square(&whole, &whole, max_cosets)?;
    let three_type = analyze(&square)?;
    let mut s = Suspension { tensor, square, three_type, pi2_generators: Vec::new() };
    let mut gens = Vec::new();
    for &x in g.generators() {
        let c = s.class_of(x);
        if c != s.three_type.groups.pi2.identity() && !gens.iter().any(|(_, d)| *d == c) {
            gens.push((format!("[{}]", g.name(x)), c));
        }
    }
    s.pi2_generators = gens;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::{abelian_invariants, dihedral_x, dihedral_y, FiniteGroup};

    fn whole(g: FiniteGroup) -> Subgroup {
        Subgroup::whole(&Arc::new(g))
    }

    #[test]
    fn presentation_counts() {
        let d4 = whole(FiniteGroup::dihedral(4).unwrap());
        let tp = tensor_presentation(&d4, &d4).unwrap();
        assert_eq!(tp.presentation.generator_count(), 64);
        assert_eq!(tp.presentation.relators().len(), 1024);
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let a3 = crate::group::commutator_subgroup(&s3);
        let tp = tensor_presentation(&a3, &Subgroup::whole(&s3)).unwrap();
        assert_eq!(tp.presentation.relators().len(), 3 * 3 * 6 + 3 * 6 * 6);
    }

    #[test]
    fn non_normal_subgroup_is_rejected() {
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let t = Subgroup::generated(&s3, &[s3.generators()[0]]).unwrap();
        assert!(matches!(tensor_presentation(&t, &t), Err(TensorError::Group(GroupError::NotNormal { .. }))));
    }

    #[test]
    fn z2_tensor_z2() {
        let z2 = whole(FiniteGroup::cyclic(2).unwrap());
        let t = nonabelian_tensor(&z2, &z2, DEFAULT_TENSOR_BOUND).unwrap();
        assert_eq!(t.group.order(), 2);
        assert_ne!(t.pair(1, 1), t.group.identity());
        assert_eq!(t.pair(0, 1), t.group.identity());
    }

    #[test]
    fn cyclic_tensor_squares() {
        for n in 1..=6 {
            let z = whole(FiniteGroup::cyclic(n).unwrap());
            let t = nonabelian_tensor(&z, &z, DEFAULT_TENSOR_BOUND).unwrap();
            assert_eq!(t.group.order(), n);
        }
    }

    #[test]
    fn trivial_group() {
        let t = whole(FiniteGroup::trivial());
        let (tp, sq) = universal_crossed_square(&t, &t, 10).unwrap();
        assert_eq!(tp.group.order(), 1);
        assert_eq!(sq.l.order(), 1);
    }

    #[test]
    fn suspension_report_of_d4() {
        let g = Arc::new(FiniteGroup::dihedral(4).unwrap());
        let s = suspension_three_type(&g, DEFAULT_TENSOR_BOUND).unwrap();
        let text = s.report("D4").to_text();
        assert!(text.contains("pi2 invariants: [2,2]"), "{text}");
        assert!(text.contains("pi3 invariants: [2,2,2,2]"), "{text}");
        assert_eq!(s.pi2_generators.len(), 2);
    }

    #[test]
    fn dihedral_square_is_valid() {
        let d4 = whole(FiniteGroup::dihedral(4).unwrap());
        let (t, _sq) = universal_crossed_square(&d4, &d4, DEFAULT_TENSOR_BOUND).unwrap();
        let pi3 = t.lambda.kernel();
        let k: Vec<Elem> = pi3.members().iter().copied().filter(|&x| t.lambda_p.apply(x) == 0).collect();
        assert_eq!(k.len(), 16);
        let x = dihedral_x(4);
        let y = dihedral_y(4);
        let xx = t.pair_in_p(x, x).unwrap();
        assert!(k.contains(&xx));
        let xy = t.pair_in_p(x, y).unwrap();
        let yx = t.pair_in_p(y, x).unwrap();
        assert!(k.contains(&t.group.mul(xy, yx)));
        let (pi3_group, _) = Subgroup::generated(&t.group, &k).unwrap().as_group();
        assert_eq!(abelian_invariants(&pi3_group).unwrap(), vec![2, 2, 2, 2]);
    }
}
