//! Homotopy invariants of abelian crossed squares through Smith normal form.

use crate::abelian::{self as ab, homology_at, AbelianHom, DirectSum, Matrix, Scalar, Subquotient};
use crate::crossed::{AbelianCrossedSquare, CrossedError, Corner};

use super::{HomotopyError, Result};

/// The complex `L -> M ⊕ N -> P` with `d2(l) = (-λl, λ'l)`, `d1(m, n) = μm + νn`,
/// and the invariants read from it.
#[derive(Clone, Debug)]
pub struct AbelianHomotopy<T> {
    pub sum: DirectSum<T>,
    pub d2: AbelianHom<T>,
    pub d1: AbelianHom<T>,
    pub pi1: Subquotient<T>,
    pub pi2: Subquotient<T>,
    /// `ker d2`, as a subgroup of `L`.
    pub pi3: Subquotient<T>,
    /// `η*` on the generators of `π2`, in `π3` coordinates.
    pub eta: Vec<Vec<T>>,
    /// Whitehead products of pairs of generators of `π2`, in `π3` coordinates.
    pub whitehead: Vec<Vec<Vec<T>>>,
}

impl<T: Scalar> AbelianHomotopy<T> {
    /// `h(m, n)` in `L` for a vector of `M ⊕ N`.
    fn eta_lift(&self, sq: &AbelianCrossedSquare<T>, v: &[T]) -> Result<Vec<T>> {
        let (m, n) = self.sum.split(v)?;
        Ok(sq.h(&m, &n)?)
    }

    fn whitehead_lift(&self, sq: &AbelianCrossedSquare<T>, u: &[T], v: &[T]) -> Result<Vec<T>> {
        let ((m, n), (m2, n2)) = (self.sum.split(u)?, self.sum.split(v)?);
        let p = sq.p.add(&sq.mu.apply(&m2)?, &sq.nu.apply(&n)?)?;
        let twisted = sq.act(Corner::L, &p, &sq.h(&m, &n2)?)?;
        Ok(sq.l.add(&twisted, &sq.h(&m2, &n)?)?)
    }

    /// `η*` of an element of `π2` given in coordinates; the result is in `π3` coordinates.
    pub fn eta_star(&self, sq: &AbelianCrossedSquare<T>, coords: &[T]) -> Result<Vec<T>> {
        let lift = self.pi2.lift(coords)?;
        Ok(self.pi3.coordinates(&self.eta_lift(sq, &lift)?)?)
    }

    /// `η*` as an element of `L`.
    pub fn eta_star_in_l(&self, sq: &AbelianCrossedSquare<T>, coords: &[T]) -> Result<Vec<T>> {
        self.eta_lift(sq, &self.pi2.lift(coords)?)
    }

    pub fn whitehead_product(&self, sq: &AbelianCrossedSquare<T>, a: &[T], b: &[T]) -> Result<Vec<T>> {
        let (u, v) = (self.pi2.lift(a)?, self.pi2.lift(b)?);
        Ok(self.pi3.coordinates(&self.whitehead_lift(sq, &u, &v)?)?)
    }
}

fn neg<T: Scalar>(v: &[T]) -> Vec<T> {
    v.iter().map(|x| -x.clone()).collect()
}

fn vsum<T: Scalar>(a: &[T], b: &[T]) -> Result<Vec<T>> {
    Ok(a.iter().zip(b).map(|(x, y)| ab::add(x, y)).collect::<Result<_, _>>()?)
}

/// Computes `π1, π2, π3`, `η*` and Whitehead products of an abelian crossed square.
///
/// The semidirect product `M ⋊ N` is a direct sum only when `N` acts trivially
/// on `M`; other actions are rejected with `UnsupportedAction`.
pub fn homotopy_of_abelian_square<T: Scalar>(sq: &AbelianCrossedSquare<T>) -> Result<AbelianHomotopy<T>> {
    for j in 0..sq.n.ngens() {
        let p = sq.nu.apply(&sq.n.basis(j))?;
        let a = sq.action_matrix(Corner::M, &p)?;
        if sq.m.reduce_rows(&a) != sq.m.reduce_rows(&Matrix::identity(sq.m.ngens())) {
            return Err(CrossedError::UnsupportedAction(format!(
                "N acts nontrivially on M through generator {j}"
            ))
            .into());
        }
    }
    let sum = sq.m.direct_sum(&sq.n);
    let s = &sum.group;
    let d2_cols: Vec<Vec<T>> = (0..sq.l.ngens())
        .map(|j| {
            let e = sq.l.basis(j);
            let v = sum.pair(&neg(&sq.lambda.apply(&e)?), &sq.lambda_p.apply(&e)?)?;
            Ok(s.reduce(&v))
        })
        .collect::<Result<_>>()?;
    let d2 = AbelianHom::new(sq.l.clone(), s.clone(), Matrix::from_columns(s.ngens(), &d2_cols)?)?;
    let d1_cols: Vec<Vec<T>> = (0..s.ngens())
        .map(|i| {
            let (m, n) = sum.split(&s.basis(i))?;
            Ok(sq.p.add(&sq.mu.apply(&m)?, &sq.nu.apply(&n)?)?)
        })
        .collect::<Result<_>>()?;
    let d1 = AbelianHom::new(s.clone(), sq.p.clone(), Matrix::from_columns(sq.p.ngens(), &d1_cols)?)?;

    let pi1 = ab::cokernel(&d1)?.0;
    let pi2 = homology_at(&d2, &d1).map_err(|e| match e {
        ab::AbelianError::NotAComplex { witness } => {
            HomotopyError::Consistency(format!("d1 d2 is nonzero on generator {witness} of L"))
        }
        other => other.into(),
    })?;
    let pi3 = ab::kernel(&d2)?.0;

    let mut out = AbelianHomotopy { sum, d2, d1, pi1, pi2, pi3, eta: Vec::new(), whitehead: Vec::new() };
    check_well_defined(sq, &out)?;
    let k = out.pi2.group.ngens();
    let gens: Vec<Vec<T>> = (0..k).map(|i| out.pi2.group.basis(i)).collect();
    out.eta = gens.iter().map(|g| out.eta_star(sq, g)).collect::<Result<_>>()?;
    out.whitehead = gens
        .iter()
        .map(|a| gens.iter().map(|b| out.whitehead_product(sq, a, b)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    Ok(out)
}

/// `η*` is quadratic on `ker d1`, so it suffices to test it on generators and
/// pairwise sums of generators: invariance under `im d2` and the relations of
/// `M ⊕ N`, and landing in `ker d2`.
fn check_well_defined<T: Scalar>(sq: &AbelianCrossedSquare<T>, h: &AbelianHomotopy<T>) -> Result<()> {
    let s = &h.sum.group;
    let xs = h.d1.kernel_preimage()?;
    let mut rs = h.d2.image_columns();
    rs.extend(s.relations());
    let mut r_all = rs.clone();
    for i in 0..rs.len() {
        for j in (i + 1)..rs.len() {
            r_all.push(vsum(&rs[i], &rs[j])?);
        }
    }
    let mut x_all = vec![s.zero()];
    x_all.extend(xs.iter().cloned());
    for x in &x_all {
        let base = h.eta_lift(sq, x)?;
        for r in &r_all {
            if h.eta_lift(sq, &vsum(x, r)?)? != base {
                return Err(HomotopyError::WellDefinedness(format!(
                    "eta* changes when {} is moved by {}",
                    ab_fmt(x),
                    ab_fmt(r)
                )));
            }
        }
    }
    let mut probes = xs.clone();
    for i in 0..xs.len() {
        for j in (i + 1)..xs.len() {
            probes.push(vsum(&xs[i], &xs[j])?);
        }
    }
    for x in &probes {
        let e = h.eta_lift(sq, x)?;
        if !s.is_zero_elem(&h.d2.apply(&e)?) {
            return Err(HomotopyError::Consistency(format!("eta* of {} lies outside pi3", ab_fmt(x))));
        }
    }
    Ok(())
}

fn ab_fmt<T: Scalar>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FgAbelian;

    #[test]
    fn circle_suspension() {
        let sq = AbelianCrossedSquare::<i64>::circle_suspension();
        let h = homotopy_of_abelian_square(&sq).unwrap();
        assert!(h.pi1.group.is_trivial());
        assert_eq!(h.pi2.group, FgAbelian::free(1));
        assert_eq!(h.pi3.group, FgAbelian::free(1));
        let g = h.eta_star(&sq, &[1]).unwrap()[0];
        assert_eq!(g.abs(), 1);
        for k in -5i64..=5 {
            assert_eq!(h.eta_star(&sq, &[k]).unwrap(), vec![g * k * k]);
        }
        let w = h.whitehead_product(&sq, &[1], &[1]).unwrap();
        assert_eq!(w, vec![2 * g]);
    }

    #[test]
    fn nontrivial_n_action_is_rejected() {
        let z = FgAbelian::<i64>::free(1);
        let z2 = FgAbelian::<i64>::cyclic(2).unwrap();
        let zero = |a: &FgAbelian<i64>, b: &FgAbelian<i64>| AbelianHom::zero(a, b);
        // P = Z acting on M = Z by -1; N = Z maps onto P
        let sq = AbelianCrossedSquare::new(
            zero(&z2, &z),
            zero(&z2, &z),
            zero(&z, &z),
            AbelianHom::identity(&z),
            vec![Matrix::identity(1)],
            vec![Matrix::from_i64_rows(&[vec![-1]]).unwrap()],
            vec![Matrix::identity(1)],
            vec![vec![vec![0]]],
        )
        .unwrap();
        assert!(matches!(
            homotopy_of_abelian_square(&sq),
            Err(HomotopyError::Crossed(CrossedError::UnsupportedAction(_)))
        ));
    }
}
