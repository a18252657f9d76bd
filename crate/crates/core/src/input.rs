//! JSON input formats.
//!
//! Groups are objects tagged by `"type"`:
//!
//! ```json
//! {"type": "table", "table": [[0, 1], [1, 0]]}
//! {"type": "builtin", "name": "dihedral", "n": 4}
//! {"type": "permutation", "degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]}
//! {"type": "presentation", "generators": ["x", "y"], "relators": ["x x", "y^4", "x y x y"]}
//! ```
//!
//! Structures are objects tagged by `"kind"`. Elements may be given by index
//! or by name.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{AbelianError, AbelianHom, FgAbelian, Matrix};
use crate::crossed::{AbelianCrossedSquare, CrossedError, CrossedModule, CrossedNCube, CrossedSquare};
use crate::fp::{enumerate_group, EnumerationStats, FpError, FpGroup};
use crate::group::{Elem, FiniteGroup, Group, GroupAction, GroupError, GroupHom, GroupOptions, Subgroup};
use crate::quadratic::{BiadditiveExtension, QuadraticError, QuadraticFunction};
use crate::tensor::{universal_crossed_square, TensorError, DEFAULT_TENSOR_BOUND};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Presentation(#[from] FpError),
    #[error(transparent)]
    Crossed(#[from] CrossedError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Quadratic(#[from] QuadraticError),
}

impl InputError {
    /// Whether the failure is a resource bound being hit rather than bad input.
    pub fn is_resource_exhaustion(&self) -> bool {
        matches!(
            self,
            InputError::Presentation(FpError::Overflow(_))
                | InputError::Tensor(TensorError::Enumeration(FpError::Overflow(_)))
                | InputError::Group(GroupError::ClosureTooLarge { .. })
                | InputError::Abelian(AbelianError::Overflow)
        )
    }
}

pub type Result<T, E = InputError> = std::result::Result<T, E>;

fn invalid(msg: impl Into<String>) -> InputError {
    InputError::Invalid(msg.into())
}

/// Bounds and seeds used while building structures from input.
#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub max_cosets: usize,
    pub group: GroupOptions,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { max_cosets: DEFAULT_TENSOR_BOUND, group: GroupOptions::default() }
    }
}

impl BuildOptions {
    pub fn with_max_cosets(max_cosets: usize) -> Self {
        BuildOptions { max_cosets, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GroupSpec {
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
    Builtin {
        name: String,
        n: usize,
    },
    Permutation {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
    Presentation {
        generators: Vec<String>,
        relators: Vec<String>,
    },
}

impl GroupSpec {
    pub fn build(&self, opts: &BuildOptions) -> Result<Group> {
        let g = match self {
            GroupSpec::Table { table, names } => {
                let g = FiniteGroup::from_table_with(table, &opts.group)?;
                match names {
                    Some(n) if n.len() == g.order() => g.with_names(n.clone()),
                    Some(n) => return Err(invalid(format!("{} names for a group of order {}", n.len(), g.order()))),
                    None => g,
                }
            }
            GroupSpec::Builtin { name, n } => match name.as_str() {
                "cyclic" => FiniteGroup::cyclic(*n)?,
                "dihedral" => FiniteGroup::dihedral(*n)?,
                "symmetric" => FiniteGroup::symmetric(*n)?,
                other => return Err(invalid(format!("unknown builtin group {other:?}"))),
            },
            GroupSpec::Permutation { degree, generators } => FiniteGroup::from_permutations_with(*degree, generators, &opts.group)?,
            GroupSpec::Presentation { generators, relators } => {
                let gens: Vec<&str> = generators.iter().map(String::as_str).collect();
                let rels: Vec<&str> = relators.iter().map(String::as_str).collect();
                let p = FpGroup::parse(&gens, &rels)?;
                return Ok(enumerate_group(&p, opts.max_cosets)?.group);
            }
        };
        Ok(Arc::new(g))
    }

    /// `cyclic:6`, `dihedral:4`, `symmetric:3`, or the shorthands `C6`, `Z6`, `D4`, `S3`.
    pub fn parse_short(s: &str) -> Result<GroupSpec> {
        let s = s.trim();
        let (name, n) = if let Some((a, b)) = s.split_once(':') {
            (a.to_string(), b)
        } else {
            let (head, tail) = s.split_at(s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len()));
            let name = match head {
                "C" | "Z" => "cyclic",
                "D" => "dihedral",
                "S" => "symmetric",
                _ => return Err(invalid(format!("unrecognised group {s:?}"))),
            };
            (name.to_string(), tail)
        };
        let n: usize = n.parse().map_err(|_| invalid(format!("bad group size in {s:?}")))?;
        Ok(GroupSpec::Builtin { name, n })
    }
}

/// An element given by its index or its name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemRef {
    Index(usize),
    Name(String),
}

impl ElemRef {
    pub fn resolve(&self, g: &Group) -> Result<Elem> {
        match self {
            ElemRef::Index(i) if *i < g.order() => Ok(*i),
            ElemRef::Index(i) => Err(invalid(format!("element {i} out of range for a group of order {}", g.order()))),
            ElemRef::Name(n) => {
                if let Some(x) = g.find_by_name(n) {
                    return Ok(x);
                }
                n.parse::<usize>()
                    .ok()
                    .filter(|&i| i < g.order())
                    .ok_or_else(|| invalid(format!("no element named {n:?}")))
            }
        }
    }
}

fn resolve_all(g: &Group, refs: &[ElemRef]) -> Result<Vec<Elem>> {
    refs.iter().map(|r| r.resolve(g)).collect()
}

fn hom(source: &Group, target: &Group, images: &[ElemRef]) -> Result<GroupHom> {
    if images.len() != source.order() {
        return Err(invalid(format!("homomorphism needs {} images, found {}", source.order(), images.len())));
    }
    Ok(GroupHom::new(source.clone(), target.clone(), resolve_all(target, images)?)?)
}

fn action(actor: &Group, space: &Group, rows: &[Vec<ElemRef>]) -> Result<GroupAction> {
    if rows.len() != actor.order() {
        return Err(invalid(format!("action needs {} rows, found {}", actor.order(), rows.len())));
    }
    let rows: Vec<Vec<Elem>> = rows.iter().map(|r| resolve_all(space, r)).collect::<Result<_>>()?;
    Ok(GroupAction::new(actor.clone(), space.clone(), &rows)?)
}

fn table(rows_in: &Group, cols_in: &Group, values_in: &Group, t: &[Vec<ElemRef>]) -> Result<Vec<Vec<Elem>>> {
    if t.len() != rows_in.order() || t.iter().any(|r| r.len() != cols_in.order()) {
        return Err(invalid(format!("pairing table must be {}x{}", rows_in.order(), cols_in.order())));
    }
    t.iter().map(|r| resolve_all(values_in, r)).collect()
}

fn subgroup(g: &Group, gens: &Option<Vec<ElemRef>>) -> Result<Subgroup> {
    match gens {
        None => Ok(Subgroup::whole(g)),
        Some(gens) => Ok(Subgroup::generated(g, &resolve_all(g, gens)?)?),
    }
}

/// A map of an n-cube: `μ_i` from the group at `subset` to the group at `subset \ {i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NCubeMap {
    pub i: usize,
    pub subset: usize,
    pub images: Vec<ElemRef>,
}

/// A pairing `h: G_A × G_B -> G_{A ∪ B}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NCubePairing {
    pub a: usize,
    pub b: usize,
    pub table: Vec<Vec<ElemRef>>,
}

/// An integer matrix given by rows.
pub type Rows = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructureSpec {
    Group {
        group: GroupSpec,
    },
    CrossedModule {
        #[serde(rename = "M")]
        m: GroupSpec,
        #[serde(rename = "P")]
        p: GroupSpec,
        boundary: Vec<ElemRef>,
        action: Vec<Vec<ElemRef>>,
    },
    CrossedSquare {
        #[serde(rename = "L")]
        l: GroupSpec,
        #[serde(rename = "M")]
        m: GroupSpec,
        #[serde(rename = "N")]
        n: GroupSpec,
        #[serde(rename = "P")]
        p: GroupSpec,
        lambda: Vec<ElemRef>,
        lambda_prime: Vec<ElemRef>,
        mu: Vec<ElemRef>,
        nu: Vec<ElemRef>,
        action_l: Vec<Vec<ElemRef>>,
        action_m: Vec<Vec<ElemRef>>,
        action_n: Vec<Vec<ElemRef>>,
        h: Vec<Vec<ElemRef>>,
    },
    /// Normal subgroups `M`, `N` of a group by generators (whole group when omitted).
    UniversalSquare {
        group: GroupSpec,
        #[serde(default, rename = "M", skip_serializing_if = "Option::is_none")]
        m: Option<Vec<ElemRef>>,
        #[serde(default, rename = "N", skip_serializing_if = "Option::is_none")]
        n: Option<Vec<ElemRef>>,
    },
    InclusionSquare {
        group: GroupSpec,
        #[serde(default, rename = "M", skip_serializing_if = "Option::is_none")]
        m: Option<Vec<ElemRef>>,
        #[serde(default, rename = "N", skip_serializing_if = "Option::is_none")]
        n: Option<Vec<ElemRef>>,
    },
    CrossedNcube {
        n: usize,
        /// Keyed by subset bitmask, as a decimal string.
        groups: BTreeMap<String, GroupSpec>,
        mu: Vec<NCubeMap>,
        h: Vec<NCubePairing>,
    },
    AbelianSquare {
        #[serde(rename = "L")]
        l: FgAbelian<i64>,
        #[serde(rename = "M")]
        m: FgAbelian<i64>,
        #[serde(rename = "N")]
        n: FgAbelian<i64>,
        #[serde(rename = "P")]
        p: FgAbelian<i64>,
        lambda: Rows,
        lambda_prime: Rows,
        mu: Rows,
        nu: Rows,
        /// One matrix per generator of `P`; omitted means trivial.
        #[serde(default)]
        action_l: Option<Vec<Rows>>,
        #[serde(default)]
        action_m: Option<Vec<Rows>>,
        #[serde(default)]
        action_n: Option<Vec<Rows>>,
        /// `h(e_i, f_j)` as a vector of `L`.
        h: Vec<Vec<Vec<i64>>>,
    },
}

/// A built structure.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Structure {
    Group(Group),
    Module(CrossedModule),
    /// A square, with enumeration statistics when it came from a tensor product.
    Square(CrossedSquare, Option<EnumerationStats>),
    NCube(CrossedNCube),
    Abelian(AbelianCrossedSquare<i64>),
}

fn checked_group(g: FgAbelian<i64>) -> Result<FgAbelian<i64>> {
    Ok(FgAbelian::new(g.rank, g.torsion)?)
}

fn abelian_hom(source: &FgAbelian<i64>, target: &FgAbelian<i64>, rows: &Rows) -> Result<AbelianHom<i64>> {
    let matrix = if rows.is_empty() || (rows.len() == target.ngens() && source.ngens() == 0) {
        Matrix::zeros(target.ngens(), source.ngens())
    } else {
        Matrix::from_i64_rows(rows)?
    };
    Ok(AbelianHom::new(source.clone(), target.clone(), matrix)?)
}

fn matrices(rows: &Option<Vec<Rows>>, count: usize, dim: usize) -> Result<Vec<Matrix<i64>>> {
    match rows {
        None => Ok(vec![Matrix::identity(dim); count]),
        Some(ms) if ms.len() == count => ms
            .iter()
            .map(|m| if m.is_empty() { Ok(Matrix::identity(dim)) } else { Ok(Matrix::from_i64_rows(m)?) })
            .collect(),
        Some(ms) => Err(invalid(format!("expected {count} action matrices, found {}", ms.len()))),
    }
}

impl StructureSpec {
    pub fn build(&self, opts: &BuildOptions) -> Result<Structure> {
        Ok(match self {
            StructureSpec::Group { group } => Structure::Group(group.build(opts)?),
            StructureSpec::CrossedModule { m, p, boundary, action: act } => {
                let (m, p) = (m.build(opts)?, p.build(opts)?);
                Structure::Module(CrossedModule::new(hom(&m, &p, boundary)?, action(&p, &m, act)?)?)
            }
            StructureSpec::CrossedSquare {
                l,
                m,
                n,
                p,
                lambda,
                lambda_prime,
                mu,
                nu,
                action_l,
                action_m,
                action_n,
                h,
            } => {
                let (l, m, n, p) =
                    (l.build(opts)?, m.build(opts)?, n.build(opts)?, p.build(opts)?);
                let sq = CrossedSquare::new(
                    hom(&l, &m, lambda)?,
                    hom(&l, &n, lambda_prime)?,
                    hom(&m, &p, mu)?,
                    hom(&n, &p, nu)?,
                    action(&p, &l, action_l)?,
                    action(&p, &m, action_m)?,
                    action(&p, &n, action_n)?,
                    &table(&m, &n, &l, h)?,
                )?;
                Structure::Square(sq, None)
            }
            StructureSpec::UniversalSquare { group, m, n } => {
                let g = group.build(opts)?;
                let (t, sq) = universal_crossed_square(&subgroup(&g, m)?, &subgroup(&g, n)?, opts.max_cosets)?;
                Structure::Square(sq.into_inner(), Some(t.stats))
            }
            StructureSpec::InclusionSquare { group, m, n } => {
                let g = group.build(opts)?;
                Structure::Square(CrossedSquare::inclusion(&subgroup(&g, m)?, &subgroup(&g, n)?)?, None)
            }
            StructureSpec::CrossedNcube { n, groups, mu, h } => {
                let size = 1usize << n;
                let mut gs = Vec::with_capacity(size);
                for a in 0..size {
                    let spec = groups
                        .get(&a.to_string())
                        .ok_or_else(|| CrossedError::MissingComponent(format!("group at subset {a}")))?;
                    gs.push(spec.build(opts)?);
                }
                let mut mus = BTreeMap::new();
                for e in mu {
                    if e.subset >= size || e.i >= *n || e.subset & (1 << e.i) == 0 {
                        return Err(invalid(format!("no map mu_{} out of subset {}", e.i, e.subset)));
                    }
                    let target = &gs[e.subset & !(1 << e.i)];
                    mus.insert((e.i, e.subset), hom(&gs[e.subset], target, &e.images)?);
                }
                let mut hs = BTreeMap::new();
                for e in h {
                    if e.a >= size || e.b >= size {
                        return Err(invalid(format!("no pairing for subsets {}, {}", e.a, e.b)));
                    }
                    hs.insert((e.a, e.b), table(&gs[e.a], &gs[e.b], &gs[e.a | e.b], &e.table)?);
                }
                Structure::NCube(CrossedNCube::new(*n, gs, mus, hs)?)
            }
            StructureSpec::AbelianSquare {
                l,
                m,
                n,
                p,
                lambda,
                lambda_prime,
                mu,
                nu,
                action_l,
                action_m,
                action_n,
                h,
            } => {
                let (l, m, n, p) =
                    (checked_group(l.clone())?, checked_group(m.clone())?, checked_group(n.clone())?, checked_group(p.clone())?);
                let k = p.ngens();
                let sq = AbelianCrossedSquare::new(
                    abelian_hom(&l, &m, lambda)?,
                    abelian_hom(&l, &n, lambda_prime)?,
                    abelian_hom(&m, &p, mu)?,
                    abelian_hom(&n, &p, nu)?,
                    matrices(action_l, k, l.ngens())?,
                    matrices(action_m, k, m.ngens())?,
                    matrices(action_n, k, n.ngens())?,
                    h.clone(),
                )?;
                Structure::Abelian(sq)
            }
        })
    }
}

/// An element of an abelian group: a coordinate vector, or a bare integer
/// for cyclic groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AbelianElem {
    Scalar(i64),
    Vector(Vec<i64>),
}

impl AbelianElem {
    fn into_vec(self, g: &FgAbelian<i64>) -> Result<Vec<i64>> {
        let v = match self {
            AbelianElem::Scalar(x) if g.ngens() == 1 => vec![x],
            AbelianElem::Scalar(x) if g.ngens() == 0 && x == 0 => vec![],
            AbelianElem::Scalar(_) => return Err(invalid("bare integers denote elements of cyclic groups only")),
            AbelianElem::Vector(v) => v,
        };
        if v.len() != g.ngens() {
            return Err(invalid(format!("element {v:?} needs {} coordinates", g.ngens())));
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionSpec {
    #[serde(rename = "M")]
    pub m: FgAbelian<i64>,
    /// Matrix of `α: M -> C` by rows.
    pub alpha: Rows,
    /// `φ(e_i, e_j)` as elements of `D`.
    pub phi: Vec<Vec<AbelianElem>>,
}

/// `{"C": .., "D": .., "t": [..], "b": [[..]], "extension": ..}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticSpec {
    #[serde(rename = "C")]
    pub c: FgAbelian<i64>,
    #[serde(rename = "D")]
    pub d: FgAbelian<i64>,
    pub t: Vec<AbelianElem>,
    pub b: Vec<Vec<AbelianElem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionSpec>,
}

impl QuadraticSpec {
    pub fn build(&self) -> Result<(QuadraticFunction<i64>, Option<BiadditiveExtension<i64>>)> {
        let c = checked_group(self.c.clone())?;
        let d = checked_group(self.d.clone())?;
        let t = self.t.iter().map(|x| x.clone().into_vec(&d)).collect::<Result<_>>()?;
        let b = self
            .b
            .iter()
            .map(|r| r.iter().map(|x| x.clone().into_vec(&d)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let q = QuadraticFunction::new(c.clone(), d.clone(), t, b)?;
        let ext = match &self.extension {
            None => None,
            Some(e) => {
                let m = checked_group(e.m.clone())?;
                let alpha = abelian_hom(&m, &c, &e.alpha)?;
                let phi = e
                    .phi
                    .iter()
                    .map(|r| r.iter().map(|x| x.clone().into_vec(&d)).collect::<Result<_>>())
                    .collect::<Result<_>>()?;
                let symmetric = false;
                Some(BiadditiveExtension { m, alpha, phi, symmetric })
            }
        };
        Ok((q, ext))
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| InputError::Io { path: path.display().to_string(), source })
}

/// Parses a structure file. A bare group object (tagged by `"type"`) is
/// accepted as `{"kind": "group", "group": ..}`.
pub fn parse_structure(text: &str) -> Result<StructureSpec> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("kind").is_none() && value.get("type").is_some() {
        return Ok(StructureSpec::Group { group: serde_json::from_value(value)? });
    }
    Ok(serde_json::from_value(value)?)
}

/// Parses a group from a structure file holding a group, or from the group
/// of a universal or inclusion square.
pub fn parse_group(text: &str) -> Result<GroupSpec> {
    match parse_structure(text)? {
        StructureSpec::Group { group }
        | StructureSpec::UniversalSquare { group, .. }
        | StructureSpec::InclusionSquare { group, .. } => Ok(group),
        _ => Err(invalid("expected a group")),
    }
}

pub fn parse_quadratic(text: &str) -> Result<QuadraticSpec> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_and_short_specs() {
        let g = parse_structure(r#"{"type":"builtin","name":"dihedral","n":4}"#).unwrap();
        match g.build(&BuildOptions::with_max_cosets(100)).unwrap() {
            Structure::Group(g) => assert_eq!(g.order(), 8),
            other => panic!("{other:?}"),
        }
        assert_eq!(GroupSpec::parse_short("D4").unwrap(), GroupSpec::Builtin { name: "dihedral".into(), n: 4 });
        assert_eq!(GroupSpec::parse_short("cyclic:6").unwrap(), GroupSpec::Builtin { name: "cyclic".into(), n: 6 });
        assert!(GroupSpec::parse_short("Q8").is_err());
    }

    #[test]
    fn presentation_group() {
        let spec: GroupSpec =
            serde_json::from_str(r#"{"type":"presentation","generators":["x","y"],"relators":["x x","y y y","x y x y"]}"#)
                .unwrap();
        assert_eq!(spec.build(&BuildOptions::with_max_cosets(1000)).unwrap().order(), 6);
    }

    #[test]
    fn crossed_module_by_names() {
        let text = r#"{"kind":"crossed_module",
            "M":{"type":"builtin","name":"cyclic","n":2},
            "P":{"type":"builtin","name":"cyclic","n":2},
            "boundary":[0,1], "action":[[0,1],[0,1]]}"#;
        match parse_structure(text).unwrap().build(&BuildOptions::with_max_cosets(10)).unwrap() {
            Structure::Module(m) => assert!(m.validate().is_valid()),
            other => panic!("{other:?}"),
        }
        let bad = r#"{"kind":"crossed_module",
            "M":{"type":"builtin","name":"cyclic","n":2},
            "P":{"type":"builtin","name":"cyclic","n":2},
            "boundary":[0,7], "action":[[0,1],[0,1]]}"#;
        assert!(matches!(parse_structure(bad).unwrap().build(&BuildOptions::with_max_cosets(10)), Err(InputError::Invalid(_))));
    }

    #[test]
    fn universal_square_spec() {
        let text = r#"{"kind":"universal_square","group":{"type":"builtin","name":"cyclic","n":3}}"#;
        match parse_structure(text).unwrap().build(&BuildOptions::with_max_cosets(1000)).unwrap() {
            Structure::Square(sq, stats) => {
                assert_eq!(sq.l.order(), 3);
                assert!(stats.is_some());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn abelian_square_spec() {
        let text = r#"{"kind":"abelian_square",
            "L":{"rank":1,"torsion":[]},"M":{"rank":1,"torsion":[]},
            "N":{"rank":1,"torsion":[]},"P":{"rank":1,"torsion":[]},
            "lambda":[[0]],"lambda_prime":[[0]],"mu":[[1]],"nu":[[1]],
            "h":[[[1]]]}"#;
        match parse_structure(text).unwrap().build(&BuildOptions::with_max_cosets(10)).unwrap() {
            Structure::Abelian(sq) => assert!(sq.validate().is_valid()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn quadratic_spec_with_scalars() {
        let text = r#"{"C":{"rank":0,"torsion":[2]},"D":{"rank":0,"torsion":[2]},"t":[1],"b":[[0]]}"#;
        let (q, ext) = parse_quadratic(text).unwrap().build().unwrap();
        assert_eq!(q.t, vec![vec![1]]);
        assert!(ext.is_none());
    }

    #[test]
    fn overflow_is_resource_exhaustion() {
        let spec = GroupSpec::Presentation { generators: vec!["x".into()], relators: vec![] };
        let err = spec.build(&BuildOptions::with_max_cosets(50)).unwrap_err();
        assert!(err.is_resource_exhaustion(), "{err}");
    }
}
