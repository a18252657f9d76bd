//! Quadratic functions `t: C -> D` of finitely generated abelian groups and the
//! abelian crossed square realising `t` as `η*: π2 -> π3`.
//!
//! The square has corners `L = D ⊕ K`, `M = N = P` where `α: M -> C` is a
//! biadditive extension of `t` with form `φ` and `K = ker α`:
//!
//! ```text
//!   λ(d, k) = -k,  λ'(d, k) = k,  μ = 1,  ν = -1
//!   ^m (d, k) = (d + φ(m, k), k),  h(m, m') = (φ(m, m'), 0)
//! ```

use serde::Serialize;
use thiserror::Error;

use crate::abelian::{self as ab, AbelianError, AbelianHom, FgAbelian, Matrix, Scalar, Subquotient};
use crate::crossed::{AbelianCrossedSquare, CrossedError, ValidationReport};
use crate::homotopy::{homotopy_of_abelian_square, AbelianHomotopy, HomotopyError};

#[derive(Debug, Error)]
pub enum QuadraticError {
    #[error("quadratic function is invalid:\n{0}")]
    Invalid(Box<ValidationReport<Vec<String>>>),
    #[error("no biadditive extension found: {0}")]
    ExtensionNotFound(String),
    #[error("biadditive extension is invalid:\n{0}")]
    InvalidExtension(Box<ValidationReport<Vec<String>>>),
    #[error("constructed square fails validation:\n{0}")]
    ValidationFailure(Box<ValidationReport<Vec<String>>>),
    #[error("round trip failed: {0}")]
    RoundtripFailure(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error(transparent)]
    Crossed(#[from] CrossedError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
}

pub type Result<T, E = QuadraticError> = std::result::Result<T, E>;

fn fmt_vec<T: Scalar>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// `a (a - 1) / 2`
fn choose2<T: Scalar>(a: &T) -> Result<T> {
    let p = ab::mul(a, &(a.clone() - T::one()))?;
    Ok(p.div_floor(&ab::from_i64(2)))
}

/// `t` given by its values on the generators of `C` and its polar form
/// `b(x, y) = t(x + y) - t(x) - t(y)` on pairs of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticFunction<T> {
    pub c: FgAbelian<T>,
    pub d: FgAbelian<T>,
    pub t: Vec<Vec<T>>,
    pub b: Vec<Vec<Vec<T>>>,
}

impl<T: Scalar> QuadraticFunction<T> {
    pub fn new(c: FgAbelian<T>, d: FgAbelian<T>, t: Vec<Vec<T>>, b: Vec<Vec<Vec<T>>>) -> Result<Self> {
        let k = c.ngens();
        if t.len() != k || t.iter().any(|v| v.len() != d.ngens()) {
            return Err(QuadraticError::Shape(format!("t needs {k} values in D")));
        }
        if b.len() != k || b.iter().any(|r| r.len() != k || r.iter().any(|v| v.len() != d.ngens())) {
            return Err(QuadraticError::Shape(format!("b needs a {k}x{k} table of values in D")));
        }
        let t = t.iter().map(|v| d.reduce(v)).collect();
        let b = b.iter().map(|r| r.iter().map(|v| d.reduce(v)).collect()).collect();
        Ok(QuadraticFunction { c, d, t, b })
    }

    /// The zero function.
    pub fn zero(c: FgAbelian<T>, d: FgAbelian<T>) -> Self {
        let k = c.ngens();
        QuadraticFunction { t: vec![d.zero(); k], b: vec![vec![d.zero(); k]; k], c, d }
    }

    /// `t(Σ a_i e_i) = Σ a_i t(e_i) + Σ_{i<j} a_i a_j b(e_i, e_j) + Σ C(a_i, 2) b(e_i, e_i)`
    pub fn evaluate(&self, a: &[T]) -> Result<Vec<T>> {
        let d = &self.d;
        let mut acc = d.zero();
        for (i, ai) in a.iter().enumerate() {
            acc = d.add(&acc, &d.scale(ai, &self.t[i])?)?;
            acc = d.add(&acc, &d.scale(&choose2(ai)?, &self.b[i][i])?)?;
            for (j, aj) in a.iter().enumerate().skip(i + 1) {
                acc = d.add(&acc, &d.scale(&ab::mul(ai, aj)?, &self.b[i][j])?)?;
            }
        }
        Ok(acc)
    }

    /// Polar form extended bilinearly.
    pub fn polar(&self, x: &[T], y: &[T]) -> Result<Vec<T>> {
        let d = &self.d;
        let mut acc = d.zero();
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                acc = d.add(&acc, &d.scale(&ab::mul(xi, yj)?, &self.b[i][j])?)?;
            }
        }
        Ok(acc)
    }
}

/// Checks that the formula for `t` respects the torsion of `C`, that `b` is
/// symmetric and bilinear on `C`, and that `t(-x) = t(x)`.
pub fn validate_quadratic<T: Scalar>(q: &QuadraticFunction<T>) -> ValidationReport<Vec<String>> {
    let mut report = ValidationReport::new("quadratic function");
    let (c, d) = (&q.c, &q.d);
    let k = c.ngens();
    let s = |v: &[T]| fmt_vec(v);
    let mut record = |axiom: &str, checked: u64, bad: Vec<Vec<String>>| {
        report.record(axiom, checked, bad.len() as u64, bad);
    };

    let mut bad = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            if q.b[i][j] != q.b[j][i] {
                bad.push(vec![format!("e{i}"), format!("e{j}"), s(&q.b[i][j]), s(&q.b[j][i])]);
            }
        }
    }
    record("b.symmetric", (k * k.saturating_sub(1) / 2) as u64, bad);

    let torsion: Vec<usize> = (c.rank..k).collect();
    let mut bad = Vec::new();
    for &i in &torsion {
        for j in 0..k {
            match d.scale(&c.modulus(i), &q.b[i][j]) {
                Ok(v) if d.is_zero_elem(&v) => {}
                _ => bad.push(vec![format!("e{i}"), format!("e{j}"), s(&q.b[i][j])]),
            }
        }
    }
    record("b.torsion", (torsion.len() * k) as u64, bad);

    let mut bad = Vec::new();
    for &i in &torsion {
        let mut a = c.zero();
        a[i] = c.modulus(i);
        match q.evaluate(&a) {
            Ok(v) if d.is_zero_elem(&v) => {}
            Ok(v) => bad.push(vec![format!("e{i}"), s(&v)]),
            Err(_) => bad.push(vec![format!("e{i}"), "overflow".into()]),
        }
    }
    record("t.torsion", torsion.len() as u64, bad);

    let mut bad = Vec::new();
    for i in 0..k {
        let mut a = c.zero();
        a[i] = -T::one();
        match q.evaluate(&a) {
            Ok(v) if v == q.t[i] => {}
            Ok(v) => bad.push(vec![format!("e{i}"), s(&q.t[i]), s(&v)]),
            Err(_) => bad.push(vec![format!("e{i}"), "overflow".into()]),
        }
    }
    record("t.even", k as u64, bad);
    report
}

/// `α: M -> C` onto, with a bilinear form `φ` on `M` valued in `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiadditiveExtension<T> {
    pub m: FgAbelian<T>,
    pub alpha: AbelianHom<T>,
    /// `φ(e_i, e_j)` for generators of `M`.
    pub phi: Vec<Vec<Vec<T>>>,
    /// Whether `φ` is symmetric.
    pub symmetric: bool,
}

impl<T: Scalar> BiadditiveExtension<T> {
    pub fn phi(&self, d: &FgAbelian<T>, x: &[T], y: &[T]) -> Result<Vec<T>> {
        let mut acc = d.zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                acc = d.add(&acc, &d.scale(&ab::mul(xi, yj)?, &self.phi[i][j])?)?;
            }
        }
        Ok(acc)
    }

    /// `K = ker α`, with lifts of its generators into `M`.
    pub fn kernel(&self) -> Result<Subquotient<T>> {
        Ok(ab::kernel(&self.alpha)?.0)
    }
}

/// Checks `φ(m, m) = t α(m)` (on generators and pairwise sums, enough for
/// quadratic maps), `φ(k, k') = 0` on `K = ker α`, surjectivity of `α`, and
/// records whether `φ` is symmetric.
pub fn validate_extension<T: Scalar>(
    q: &QuadraticFunction<T>,
    ext: &BiadditiveExtension<T>,
) -> Result<ValidationReport<Vec<String>>> {
    let mut report = ValidationReport::new("biadditive extension");
    let (d, m) = (&q.d, &ext.m);
    let n = m.ngens();
    if ext.alpha.source != *m || ext.alpha.target != q.c {
        return Err(QuadraticError::Shape("alpha must map M to C".into()));
    }
    if ext.phi.len() != n || ext.phi.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != d.ngens())) {
        return Err(QuadraticError::Shape(format!("phi needs a {n}x{n} table of values in D")));
    }

    let mut bad = Vec::new();
    for i in 0..q.c.ngens() {
        if ext.alpha.preimage(&q.c.basis(i))?.is_none() {
            bad.push(vec![format!("e{i}")]);
        }
    }
    record_into(&mut report, "alpha.onto", q.c.ngens() as u64, bad);

    let mut bad = Vec::new();
    for i in m.rank..n {
        for j in 0..n {
            for (x, y) in [(i, j), (j, i)] {
                if !d.is_zero_elem(&d.scale(&m.modulus(i), &ext.phi[x][y])?) {
                    bad.push(vec![format!("e{x}"), format!("e{y}")]);
                }
            }
        }
    }
    record_into(&mut report, "phi.torsion", (2 * (n - m.rank) * n) as u64, bad);

    let mut probes: Vec<Vec<T>> = (0..n).map(|i| m.basis(i)).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut v = m.basis(i);
            v[j] = T::one();
            probes.push(v);
        }
    }
    let mut bad = Vec::new();
    for v in &probes {
        let lhs = ext.phi(d, v, v)?;
        let rhs = q.evaluate(&ext.alpha.apply(v)?)?;
        if lhs != rhs {
            bad.push(vec![fmt_vec(v), fmt_vec(&lhs), fmt_vec(&rhs)]);
        }
    }
    record_into(&mut report, "phi.diagonal", probes.len() as u64, bad);

    let k = ext.kernel()?;
    let mut bad = Vec::new();
    for a in &k.lifts {
        for b in &k.lifts {
            let v = ext.phi(d, a, b)?;
            if !d.is_zero_elem(&v) {
                bad.push(vec![fmt_vec(a), fmt_vec(b), fmt_vec(&v)]);
            }
        }
    }
    record_into(&mut report, "phi.kernel", (k.lifts.len() * k.lifts.len()) as u64, bad);

    let symmetric = (0..n).all(|i| (0..n).all(|j| ext.phi[i][j] == ext.phi[j][i]));
    if ext.symmetric && !symmetric {
        record_into(&mut report, "phi.symmetric", 1, vec![vec!["phi".into()]]);
    }
    Ok(report)
}

fn record_into(report: &mut ValidationReport<Vec<String>>, axiom: &str, checked: u64, bad: Vec<Vec<String>>) {
    let count = bad.len() as u64;
    report.record(axiom, checked, count, bad);
}

/// `x` in `D` with `2x = b` and `c x = 0`, coordinate by coordinate.
fn solve_half<T: Scalar>(d: &FgAbelian<T>, b: &[T], c: &T) -> Option<Vec<T>> {
    let two: T = ab::from_i64(2);
    let mut x = Vec::with_capacity(b.len());
    for (i, bi) in b.iter().enumerate() {
        let n = d.modulus(i);
        let candidates: Vec<T> = if n.is_zero() {
            if bi.is_even() {
                vec![bi.div_floor(&two)]
            } else {
                vec![]
            }
        } else {
            let g = two.gcd(&n);
            if !bi.is_multiple_of(&g) {
                vec![]
            } else {
                let step = n.div_floor(&g);
                let base = (0..)
                    .map(|k: i64| ab::from_i64::<T>(k))
                    .take_while(|k| *k < n)
                    .find(|k| (two.clone() * k.clone() - bi.clone()).is_multiple_of(&n))?;
                vec![base.clone(), base + step]
            }
        };
        let ok = candidates.into_iter().find(|v| {
            let cv = c.clone() * v.clone();
            if n.is_zero() {
                cv.is_zero()
            } else {
                cv.is_multiple_of(&n)
            }
        })?;
        x.push(ok);
    }
    Some(d.reduce(&x))
}

/// The canonical extension: `M` free on the generators of `C` and `α` the
/// quotient map. A symmetric `φ` (with `φ(e_i, e_i) = t(e_i)` and
/// `2 φ(e_i, e_j) = b(e_i, e_j)`) is used when one exists; otherwise the
/// triangular form `φ(e_i, e_j) = b(e_i, e_j)` for `i < j` and `0` for `i > j`.
pub fn biadditive_extension<T: Scalar>(q: &QuadraticFunction<T>) -> Result<BiadditiveExtension<T>> {
    let report = validate_quadratic(q);
    if !report.is_valid() {
        return Err(QuadraticError::Invalid(Box::new(report)));
    }
    let (c, d) = (&q.c, &q.d);
    let k = c.ngens();
    let m = FgAbelian::free(k);
    let alpha = AbelianHom::new(m.clone(), c.clone(), Matrix::identity(k))?;
    // `d_i d_j` annihilates φ on K (zero for free generators)
    let kfactor = |i: usize, j: usize| -> T {
        if i < c.rank || j < c.rank {
            T::zero()
        } else {
            c.modulus(i) * c.modulus(j)
        }
    };
    let mut phi = vec![vec![d.zero(); k]; k];
    let mut symmetric = true;
    for i in 0..k {
        phi[i][i] = q.t[i].clone();
        for j in (i + 1)..k {
            match solve_half(d, &q.b[i][j], &kfactor(i, j)) {
                Some(x) => {
                    phi[i][j] = x.clone();
                    phi[j][i] = x;
                }
                None => symmetric = false,
            }
        }
    }
    if !symmetric {
        for i in 0..k {
            for j in 0..k {
                if i < j {
                    phi[i][j] = q.b[i][j].clone();
                } else if i > j {
                    phi[i][j] = d.zero();
                }
            }
        }
    }
    let ext = BiadditiveExtension { m, alpha, phi, symmetric };
    let report = validate_extension(q, &ext)?;
    if !report.is_valid() {
        return Err(QuadraticError::ExtensionNotFound(report.to_string()));
    }
    Ok(ext)
}

/// The abelian crossed square of a quadratic function and an extension of it.
pub fn crossed_square_from_quadratic<T: Scalar>(
    q: &QuadraticFunction<T>,
    ext: &BiadditiveExtension<T>,
) -> Result<AbelianCrossedSquare<T>> {
    let report = validate_extension(q, ext)?;
    if !report.is_valid() {
        return Err(QuadraticError::InvalidExtension(Box::new(report)));
    }
    let (d, m) = (&q.d, &ext.m);
    let k = ext.kernel()?;
    let sum = d.direct_sum(&k.group);
    let l = sum.group.clone();
    let nl = l.ngens();
    let kzero = k.group.zero();

    // L -> M: (d, k) -> ∓ lift(k)
    let lam_cols = |sign: bool| -> Result<Vec<Vec<T>>> {
        (0..nl)
            .map(|j| {
                let (_, kc) = sum.split(&l.basis(j))?;
                let v = k.lift(&kc)?;
                Ok(m.reduce(&if sign { m.neg(&v) } else { v }))
            })
            .collect()
    };
    let lambda = AbelianHom::new(l.clone(), m.clone(), Matrix::from_columns(m.ngens(), &lam_cols(true)?)?)?;
    let lambda_p = AbelianHom::new(l.clone(), m.clone(), Matrix::from_columns(m.ngens(), &lam_cols(false)?)?)?;
    let mu = AbelianHom::identity(m);
    let neg_id: Vec<Vec<T>> = (0..m.ngens()).map(|i| m.neg(&m.basis(i))).collect();
    let nu = AbelianHom::new(m.clone(), m.clone(), Matrix::from_columns(m.ngens(), &neg_id)?)?;

    let act_l: Vec<Matrix<T>> = (0..m.ngens())
        .map(|p| {
            let cols: Vec<Vec<T>> = (0..nl)
                .map(|j| {
                    let e = l.basis(j);
                    let (dc, kc) = sum.split(&e)?;
                    let shift = ext.phi(d, &m.basis(p), &k.lift(&kc)?)?;
                    Ok(l.reduce(&sum.pair(&d.add(&dc, &shift)?, &kc)?))
                })
                .collect::<Result<_>>()?;
            Ok(Matrix::from_columns(nl, &cols)?)
        })
        .collect::<Result<_>>()?;
    let trivial = vec![Matrix::identity(m.ngens()); m.ngens()];
    let h: Vec<Vec<Vec<T>>> = (0..m.ngens())
        .map(|i| {
            (0..m.ngens())
                .map(|j| Ok(l.reduce(&sum.pair(&ext.phi[i][j], &kzero)?)))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let sq = AbelianCrossedSquare::new(lambda, lambda_p, mu, nu, act_l, trivial.clone(), trivial, h)?;
    let report = sq.validate();
    if !report.is_valid() {
        return Err(QuadraticError::ValidationFailure(Box::new(report)));
    }
    Ok(sq)
}

/// Outcome of comparing `η*` of the constructed square with `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    pub pi2_invariants: Vec<String>,
    pub pi3_invariants: Vec<String>,
    /// Number of elements of `C` on which `η* = t` was compared.
    pub checked: usize,
    pub symmetric_extension: bool,
}

/// Bound on coefficients when `C` is infinite.
pub const ROUNDTRIP_BOUND: i64 = 3;

fn iso_check<T: Scalar>(f: &AbelianHom<T>, what: &str) -> Result<()> {
    let ker = ab::kernel(f)?.0;
    let coker = ab::cokernel(f)?.0;
    if !ker.group.is_trivial() || !coker.group.is_trivial() {
        return Err(QuadraticError::RoundtripFailure(format!("{what} is not an isomorphism")));
    }
    Ok(())
}

fn sample_elements<T: Scalar>(c: &FgAbelian<T>) -> Vec<Vec<T>> {
    if let Some(all) = c.elements() {
        return all;
    }
    let mut out = vec![c.zero()];
    for i in 0..c.ngens() {
        let mut next = Vec::new();
        for v in &out {
            for a in -ROUNDTRIP_BOUND..=ROUNDTRIP_BOUND {
                let mut w = v.clone();
                w[i] = ab::from_i64(a);
                next.push(c.reduce(&w));
            }
        }
        next.sort();
        next.dedup();
        out = next;
    }
    out
}

/// Runs the abelian homotopy computation on the square and compares `π2`,
/// `π3` and `η*` with `C`, `D` and `t` through explicit isomorphisms
/// `C -> π2`, `c -> [(m, m)]` for a lift `m` of `c`, and `D -> π3`, `d -> (d, 0)`.
pub fn roundtrip_check<T: Scalar>(
    q: &QuadraticFunction<T>,
    ext: &BiadditiveExtension<T>,
    sq: &AbelianCrossedSquare<T>,
) -> Result<RoundtripReport> {
    let hom: AbelianHomotopy<T> = homotopy_of_abelian_square(sq)?;
    let show = |g: &FgAbelian<T>| g.invariants().iter().map(|x| x.to_string()).collect::<Vec<_>>();
    if hom.pi2.group.invariants() != q.c.invariants() {
        return Err(QuadraticError::RoundtripFailure(format!(
            "pi2 = {} but C = {}",
            hom.pi2.group, q.c
        )));
    }
    if hom.pi3.group.invariants() != q.d.invariants() {
        return Err(QuadraticError::RoundtripFailure(format!(
            "pi3 = {} but D = {}",
            hom.pi3.group, q.d
        )));
    }
    let c_cols: Vec<Vec<T>> = (0..q.c.ngens())
        .map(|i| {
            let lift = ext
                .alpha
                .preimage(&q.c.basis(i))?
                .ok_or_else(|| QuadraticError::RoundtripFailure(format!("generator e{i} of C has no lift")))?;
            let v = hom.sum.pair(&lift, &lift)?;
            Ok(hom.pi2.coordinates(&v)?)
        })
        .collect::<Result<_>>()?;
    let psi_c = AbelianHom::new(q.c.clone(), hom.pi2.group.clone(), Matrix::from_columns(hom.pi2.group.ngens(), &c_cols)?)?;
    iso_check(&psi_c, "C -> pi2")?;
    let k = ext.kernel()?;
    let sum = q.d.direct_sum(&k.group);
    let d_cols: Vec<Vec<T>> = (0..q.d.ngens())
        .map(|i| {
            let v = sq.l.reduce(&sum.pair(&q.d.basis(i), &k.group.zero())?);
            Ok(hom.pi3.coordinates(&v)?)
        })
        .collect::<Result<_>>()?;
    let psi_d = AbelianHom::new(q.d.clone(), hom.pi3.group.clone(), Matrix::from_columns(hom.pi3.group.ngens(), &d_cols)?)?;
    iso_check(&psi_d, "D -> pi3")?;

    let elements = sample_elements(&q.c);
    for x in &elements {
        let got = hom.eta_star(sq, &psi_c.apply(x)?)?;
        let want = psi_d.apply(&q.evaluate(x)?)?;
        if hom.pi3.group.reduce(&got) != want {
            return Err(QuadraticError::RoundtripFailure(format!(
                "eta*({}) = {} but t gives {}",
                fmt_vec(x),
                fmt_vec(&got),
                fmt_vec(&want)
            )));
        }
    }
    for i in 0..q.c.ngens() {
        for j in 0..q.c.ngens() {
            let (u, v) = (psi_c.apply(&q.c.basis(i))?, psi_c.apply(&q.c.basis(j))?);
            let got = hom.whitehead_product(sq, &u, &v)?;
            let want = psi_d.apply(&q.b[i][j])?;
            if hom.pi3.group.reduce(&got) != want {
                return Err(QuadraticError::RoundtripFailure(format!(
                    "Whitehead product of e{i}, e{j} is {} but b gives {}",
                    fmt_vec(&got),
                    fmt_vec(&want)
                )));
            }
        }
    }
    Ok(RoundtripReport {
        pi2_invariants: show(&hom.pi2.group),
        pi3_invariants: show(&hom.pi3.group),
        checked: elements.len(),
        symmetric_extension: ext.symmetric,
    })
}

/// Validation, extension, construction and round trip in one call.
pub fn realize<T: Scalar>(q: &QuadraticFunction<T>) -> Result<(BiadditiveExtension<T>, AbelianCrossedSquare<T>, RoundtripReport)> {
    let ext = biadditive_extension(q)?;
    let sq = crossed_square_from_quadratic(q, &ext)?;
    let report = roundtrip_check(q, &ext, &sq)?;
    Ok((ext, sq, report))
}
