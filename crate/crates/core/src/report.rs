//! Serializable summaries of homotopy computations.
//!
//! Reports carry no timing information, so identical inputs give identical
//! JSON.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::abelian::{FgAbelian, Scalar};
use crate::crossed::{AbelianCrossedSquare, CrossedSquare, ValidationReport};
use crate::fp::EnumerationStats;
use crate::group::{abelian_invariants, Elem, Group, Subgroup};
use crate::homotopy::{greedy_generators, AbelianHomotopy, ThreeType};
use crate::tensor::{TensorPresentation, TensorProduct};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    /// `None` for infinite groups.
    pub order: Option<u64>,
    /// Invariant factors (0 for a free summand); `None` when nonabelian.
    pub invariants: Option<Vec<i64>>,
    pub generators: Vec<String>,
}

impl GroupSummary {
    pub fn finite(g: &Group, generators: Vec<String>) -> Self {
        let invariants = abelian_invariants(g).ok().map(|v| v.into_iter().map(|x| x as i64).collect());
        GroupSummary { order: Some(g.order() as u64), invariants, generators }
    }

    pub fn abelian<T: Scalar>(g: &FgAbelian<T>, generators: Vec<String>) -> Self {
        GroupSummary {
            order: g.order().and_then(|o| o.to_u64()),
            invariants: Some(g.invariants().iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect()),
            generators,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostnikovSummary {
    pub source_order: u64,
    pub target_order: u64,
    pub kernel_invariants: Vec<i64>,
    pub cokernel_order: u64,
    pub checks: u64,
    pub valid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSummary {
    pub cosets_defined: u64,
    pub max_live_cosets: u64,
    pub coincidences: u64,
}

impl From<&EnumerationStats> for EnumerationSummary {
    fn from(s: &EnumerationStats) -> Self {
        EnumerationSummary {
            cosets_defined: s.defined as u64,
            max_live_cosets: s.max_live as u64,
            coincidences: s.coincidences as u64,
        }
    }
}

/// Orders of the four corners (`None` when infinite).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerOrders {
    pub l: Option<u64>,
    pub m: Option<u64>,
    pub n: Option<u64>,
    pub p: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeTypeReport {
    pub input: String,
    pub corners: CornerOrders,
    pub pi1: GroupSummary,
    pub pi2: GroupSummary,
    pub pi3: GroupSummary,
    /// `[generator of π2, η*(generator)]`
    pub eta_star: Vec<(String, String)>,
    /// `[u, v, W(u, v)]` over pairs of generators of π2.
    pub whitehead: Vec<(String, String, String)>,
    pub postnikov_crossed_module: Option<PostnikovSummary>,
    pub enumeration: Option<EnumerationSummary>,
}

fn list<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn order_str(o: Option<u64>) -> String {
    o.map_or_else(|| "infinite".to_string(), |x| x.to_string())
}

impl ThreeTypeReport {
    /// Report for a finite crossed square. `pi2_generators` names chosen
    /// generators of `π2` (class indices); when empty a generating set is
    /// picked from class representatives.
    pub fn finite(input: &str, sq: &CrossedSquare, tt: &ThreeType, pi2_generators: Vec<(String, Elem)>) -> Self {
        let g = &tt.groups;
        let sd = &g.complex.sd.group;
        let pi2_generators = if pi2_generators.is_empty() {
            greedy_generators(&g.pi2, g.pi2.elements())
                .into_iter()
                .map(|c| (sd.name(g.pi2_reps[c]), c))
                .collect()
        } else {
            pi2_generators
        };
        let pi1_gens = greedy_generators(&g.pi1, g.pi1.elements()).into_iter().map(|c| g.pi1.name(c)).collect();
        let (pi3_group, pi3_incl) = g.pi3.as_group();
        let pi3_gens = greedy_generators(&pi3_group, pi3_group.elements())
            .into_iter()
            .map(|c| sq.l.name(pi3_incl.apply(c)))
            .collect();
        let eta_star = pi2_generators.iter().map(|(name, c)| (name.clone(), sq.l.name(tt.eta_star(*c)))).collect();
        let mut whitehead = Vec::new();
        for (a, c) in &pi2_generators {
            for (b, d) in &pi2_generators {
                whitehead.push((a.clone(), b.clone(), sq.l.name(tt.whitehead(*c, *d))));
            }
        }
        let module = &tt.postnikov.module;
        let kernel = module.kernel().as_group().0;
        let postnikov = PostnikovSummary {
            source_order: module.source().order() as u64,
            target_order: module.target().order() as u64,
            kernel_invariants: abelian_invariants(&kernel).unwrap_or_default().into_iter().map(|x| x as i64).collect(),
            cokernel_order: module.cokernel().map(|c| c.0.order() as u64).unwrap_or(0),
            checks: module.validate().checked,
            valid: true,
        };
        ThreeTypeReport {
            input: input.to_string(),
            corners: CornerOrders {
                l: Some(sq.l.order() as u64),
                m: Some(sq.m.order() as u64),
                n: Some(sq.n.order() as u64),
                p: Some(sq.p.order() as u64),
            },
            pi1: GroupSummary::finite(&g.pi1, pi1_gens),
            pi2: GroupSummary::finite(&g.pi2, pi2_generators.iter().map(|(n, _)| n.clone()).collect()),
            pi3: GroupSummary::finite(&pi3_group, pi3_gens),
            eta_star,
            whitehead,
            postnikov_crossed_module: Some(postnikov),
            enumeration: None,
        }
    }

    /// Report for an abelian crossed square. Generators are named by their
    /// lifts; values of `η*` and `W` are given in `π3` coordinates.
    pub fn abelian<T: Scalar>(input: &str, sq: &AbelianCrossedSquare<T>, h: &AbelianHomotopy<T>) -> Self {
        let names = |lifts: &[Vec<T>]| lifts.iter().map(|v| list(v)).collect::<Vec<_>>();
        let pi2_names = names(&h.pi2.lifts);
        let eta_star = pi2_names.iter().zip(&h.eta).map(|(n, e)| (n.clone(), list(e))).collect();
        let mut whitehead = Vec::new();
        for (i, a) in pi2_names.iter().enumerate() {
            for (j, b) in pi2_names.iter().enumerate() {
                whitehead.push((a.clone(), b.clone(), list(&h.whitehead[i][j])));
            }
        }
        let order = |g: &FgAbelian<T>| g.order().and_then(|o| o.to_u64());
        ThreeTypeReport {
            input: input.to_string(),
            corners: CornerOrders { l: order(&sq.l), m: order(&sq.m), n: order(&sq.n), p: order(&sq.p) },
            pi1: GroupSummary::abelian(&h.pi1.group, names(&h.pi1.lifts)),
            pi2: GroupSummary::abelian(&h.pi2.group, pi2_names),
            pi3: GroupSummary::abelian(&h.pi3.group, names(&h.pi3.lifts)),
            eta_star,
            whitehead,
            postnikov_crossed_module: None,
            enumeration: None,
        }
    }

    pub fn with_enumeration(mut self, stats: &EnumerationStats) -> Self {
        self.enumeration = Some(stats.into());
        self
    }

    /// Human-readable report: groups, homotopy groups, `η*`, Whitehead
    /// products, then the Postnikov crossed module.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.corners;
        let _ = writeln!(s, "input: {}", self.input);
        let _ = writeln!(
            s,
            "corner orders: L {}, M {}, N {}, P {}",
            order_str(c.l),
            order_str(c.m),
            order_str(c.n),
            order_str(c.p)
        );
        for (name, g) in [("pi1", &self.pi1), ("pi2", &self.pi2), ("pi3", &self.pi3)] {
            let _ = writeln!(s, "{name} order: {}", order_str(g.order));
            match &g.invariants {
                Some(inv) => {
                    let _ = writeln!(s, "{name} invariants: {}", list(inv));
                }
                None => {
                    let _ = writeln!(s, "{name} invariants: nonabelian");
                }
            }
            let _ = writeln!(s, "{name} generators: {}", g.generators.join(", "));
        }
        for (g, v) in &self.eta_star {
            let _ = writeln!(s, "eta*({g}) = {v}");
        }
        for (a, b, v) in &self.whitehead {
            let _ = writeln!(s, "W({a}, {b}) = {v}");
        }
        if let Some(p) = &self.postnikov_crossed_module {
            let _ = writeln!(
                s,
                "postnikov crossed module: order {} -> order {}, kernel invariants {}, cokernel order {}, {} ({} checks)",
                p.source_order,
                p.target_order,
                list(&p.kernel_invariants),
                p.cokernel_order,
                if p.valid { "valid" } else { "INVALID" },
                p.checks
            );
        }
        if let Some(e) = &self.enumeration {
            let _ = writeln!(
                s,
                "enumeration: {} cosets defined, {} live at most, {} coincidences",
                e.cosets_defined, e.max_live_cosets, e.coincidences
            );
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Summary of a non-abelian tensor product `M ⊗ N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorReport {
    pub input: String,
    pub m_order: u64,
    pub n_order: u64,
    pub p_order: u64,
    pub order: u64,
    /// Invariant factors when `M ⊗ N` is abelian.
    pub invariants: Option<Vec<i64>>,
    pub presentation_generators: u64,
    pub presentation_relators: u64,
    pub lambda_image_order: u64,
    pub lambda_prime_image_order: u64,
    /// `ker λ ∩ ker λ'`
    pub kernel_order: u64,
    pub kernel_invariants: Vec<i64>,
    pub square: ValidationReport,
    pub enumeration: EnumerationSummary,
}

fn invariants_i64(g: &Group) -> Option<Vec<i64>> {
    abelian_invariants(g).ok().map(|v| v.into_iter().map(|x| x as i64).collect())
}

impl TensorReport {
    pub fn new(input: &str, t: &TensorProduct, presentation: &TensorPresentation, square: ValidationReport) -> Self {
        let g = &t.group;
        let id_m = t.m().identity();
        let id_n = t.n().identity();
        let kernel: Vec<Elem> =
            g.elements().filter(|&x| t.lambda.apply(x) == id_m && t.lambda_p.apply(x) == id_n).collect();
        let kernel = Subgroup::generated(g, &kernel).expect("kernel is a subgroup").as_group().0;
        TensorReport {
            input: input.to_string(),
            m_order: t.m().order() as u64,
            n_order: t.n().order() as u64,
            p_order: t.p().order() as u64,
            order: g.order() as u64,
            invariants: invariants_i64(g),
            presentation_generators: presentation.presentation.generator_count() as u64,
            presentation_relators: presentation.presentation.relators().len() as u64,
            lambda_image_order: t.lambda.image_subgroup().order() as u64,
            lambda_prime_image_order: t.lambda_p.image_subgroup().order() as u64,
            kernel_order: kernel.order() as u64,
            kernel_invariants: invariants_i64(&kernel).unwrap_or_default(),
            square,
            enumeration: (&t.stats).into(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "input: {}", self.input);
        let _ = writeln!(s, "orders: M {}, N {}, P {}", self.m_order, self.n_order, self.p_order);
        let _ = writeln!(
            s,
            "presentation: {} generators, {} relators",
            self.presentation_generators, self.presentation_relators
        );
        let _ = writeln!(s, "tensor order: {}", self.order);
        match &self.invariants {
            Some(inv) => {
                let _ = writeln!(s, "tensor invariants: {}", list(inv));
            }
            None => {
                let _ = writeln!(s, "tensor invariants: nonabelian");
            }
        }
        let _ = writeln!(s, "image orders: lambda {}, lambda' {}", self.lambda_image_order, self.lambda_prime_image_order);
        let _ = writeln!(s, "ker lambda ∩ ker lambda' order: {}", self.kernel_order);
        let _ = writeln!(s, "ker lambda ∩ ker lambda' invariants: {}", list(&self.kernel_invariants));
        let _ = writeln!(s, "universal crossed square: {} ({} checks)", if self.square.is_valid() { "valid" } else { "INVALID" }, self.square.checked);
        let e = &self.enumeration;
        let _ = writeln!(
            s,
            "enumeration: {} cosets defined, {} live at most, {} coincidences",
            e.cosets_defined, e.max_live_cosets, e.coincidences
        );
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
