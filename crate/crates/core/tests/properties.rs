use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use xcube::abelian::{smith_normal_form, AbelianError, FgAbelian, Matrix};
use xcube::fp::{enumerate_group, FpGroup};
use xcube::quadratic::QuadraticFunction;
use xcube::tensor::nonabelian_tensor;
use xcube::{FiniteGroup, Subgroup};

fn permutation(degree: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..degree).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Exact over BigInt; over i64 either the same diagonal or a reported overflow.
    #[test]
    fn snf_factorisation(rows in prop::collection::vec(prop::collection::vec(-20i64..=20, 4), 1..=5)) {
        let big_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let a = Matrix::from_rows(big_rows).unwrap();
        let snf = smith_normal_form(&a).unwrap();
        let uav = snf.u.mul(&a).unwrap().mul(&snf.v).unwrap();
        prop_assert_eq!(&uav, &snf.d);
        prop_assert!(snf.d.is_diagonal());
        let d = snf.diagonal();
        for w in d.windows(2) {
            if !w[0].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero(), "{:?}", d);
            } else {
                prop_assert!(w[1].is_zero());
            }
        }
        prop_assert!(d.iter().all(|x| !x.is_negative()));
        prop_assert_eq!(snf.u.mul(&snf.u_inv).unwrap(), Matrix::identity(rows.len()));
        prop_assert_eq!(snf.v.mul(&snf.v_inv).unwrap(), Matrix::identity(4));

        let small: Matrix<i64> = Matrix::from_i64_rows(&rows).unwrap();
        match smith_normal_form(&small) {
            Ok(s) => {
                let as_big: Vec<BigInt> = s.diagonal().into_iter().map(BigInt::from).collect();
                prop_assert_eq!(as_big, d);
            }
            Err(e) => prop_assert!(matches!(e, AbelianError::Overflow), "{}", e),
        }
    }

    #[test]
    fn permutation_closure_is_a_group(
        degree in 1usize..=4,
        seeds in prop::collection::vec(0usize..1000, 1..=3),
    ) {
        let gens: Vec<Vec<usize>> = seeds
            .iter()
            .map(|&s| {
                let mut p: Vec<usize> = (0..degree).collect();
                p.rotate_left(s % degree);
                if s % 2 == 1 && degree > 1 {
                    p.swap(0, 1);
                }
                p
            })
            .collect();
        let g = FiniteGroup::from_permutations(degree, &gens).unwrap();
        let n = g.order();
        prop_assert!((1..=24).contains(&n));
        prop_assert_eq!(24 % n, 0);
        for a in g.elements() {
            prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
            for b in g.elements() {
                for c in g.elements() {
                    prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn shuffled_generators_give_the_same_order(p in permutation(5), q in permutation(5)) {
        let a = FiniteGroup::from_permutations(5, &[p.clone(), q.clone()]).unwrap();
        let b = FiniteGroup::from_permutations(5, &[q, p]).unwrap();
        prop_assert_eq!(a.order(), b.order());
        prop_assert_eq!(120 % a.order(), 0);
    }

    #[test]
    fn enumerates_products_of_cyclic_groups(m in 1usize..=7, n in 1usize..=7) {
        let rel_m = format!("x^{m}");
        let rel_n = format!("y^{n}");
        let p = FpGroup::parse(&["x", "y"], &[&rel_m, &rel_n, "x y x' y'"]).unwrap();
        let g = enumerate_group(&p, 10_000).unwrap();
        prop_assert_eq!(g.group.order(), m * n);
        prop_assert!(g.group.is_abelian());
    }

    /// `⟨a⟩ ⊗ ⟨b⟩` inside a cyclic group is cyclic of order `gcd(|a|, |b|)`.
    #[test]
    fn cyclic_tensor_products(n in 1usize..=12, a in 0usize..12, b in 0usize..12) {
        let g = Arc::new(FiniteGroup::cyclic(n).unwrap());
        let (a, b) = (a % n, b % n);
        let m_sub = Subgroup::generated(&g, &[a]).unwrap();
        let n_sub = Subgroup::generated(&g, &[b]).unwrap();
        let t = nonabelian_tensor(&m_sub, &n_sub, 100_000).unwrap();
        let want = m_sub.order().gcd(&n_sub.order());
        prop_assert_eq!(t.group.order(), want);
        prop_assert!(t.group.is_abelian());
        if want > 1 {
            prop_assert!(t.group.elements().any(|x| t.group.element_order(x) == want));
        }
    }

    /// `t(x + y) - t(x) - t(y)` is the bilinear form with matrix `b`
    /// (diagonal entries counted once).
    #[test]
    fn polarisation(
        t in prop::collection::vec(-5i64..=5, 2),
        b01 in -5i64..=5,
        b00 in -5i64..=5,
        b11 in -5i64..=5,
        x in prop::collection::vec(-6i64..=6, 2),
        y in prop::collection::vec(-6i64..=6, 2),
    ) {
        let b = vec![vec![vec![b00], vec![b01]], vec![vec![b01], vec![b11]]];
        let q = QuadraticFunction::new(
            FgAbelian::free(2),
            FgAbelian::free(1),
            t.iter().map(|&v| vec![v]).collect(),
            b,
        )
        .unwrap();
        let sum = vec![x[0] + y[0], x[1] + y[1]];
        let lhs = q.evaluate(&sum).unwrap()[0] - q.evaluate(&x).unwrap()[0] - q.evaluate(&y).unwrap()[0];
        let form = x[0] * y[0] * b00 + x[1] * y[1] * b11 + (x[0] * y[1] + x[1] * y[0]) * b01;
        prop_assert_eq!(lhs, form);
        prop_assert_eq!(q.polar(&x, &y).unwrap(), vec![form]);
        // t(k e_i) = k t(e_i) + C(k, 2) b_ii
        let k = x[0];
        prop_assert_eq!(q.evaluate(&[k, 0]).unwrap(), vec![k * t[0] + k * (k - 1) / 2 * b00]);
    }
}
