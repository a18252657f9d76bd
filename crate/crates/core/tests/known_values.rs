//! Tensor squares and suspension 3-types with values known from the literature.

use std::sync::Arc;

use xcube::group::abelian_invariants;
use xcube::homotopy::analyze;
use xcube::tensor::{nonabelian_tensor, suspension_three_type, DEFAULT_TENSOR_BOUND};
use xcube::{CrossedSquare, FiniteGroup, Subgroup};

/// `D_n ⊗ D_n` for the dihedral group of order `2n`: `Z_2 × Z_n` for odd `n`,
/// `Z_2^3 × Z_n` for even `n`.
#[test]
fn dihedral_tensor_squares() {
    for n in 3..=8usize {
        let g = Arc::new(FiniteGroup::dihedral(n).unwrap());
        let w = Subgroup::whole(&g);
        let t = nonabelian_tensor(&w, &w, DEFAULT_TENSOR_BOUND).unwrap();
        let got = abelian_invariants(&t.group).unwrap();
        let want = if n % 2 == 1 { vec![2 * n] } else { vec![2, 2, 2, n] };
        assert_eq!(got, want, "D{n}");
    }
}

/// `π3` of the suspension of `K(D_n, 1)` is `Z_2` for odd `n` and `Z_2^4` for even `n`.
#[test]
fn dihedral_suspensions() {
    for n in 3..=8usize {
        let g = Arc::new(FiniteGroup::dihedral(n).unwrap());
        let s = suspension_three_type(&g, DEFAULT_TENSOR_BOUND).unwrap();
        let groups = &s.three_type.groups;
        let want_pi2 = if n % 2 == 1 { vec![2] } else { vec![2, 2] };
        let want_pi3 = if n % 2 == 1 { vec![2] } else { vec![2, 2, 2, 2] };
        assert_eq!(groups.pi2_invariants, want_pi2, "D{n}");
        assert_eq!(groups.pi3_invariants, want_pi3, "D{n}");
        assert_eq!(groups.pi1.order(), 1);
    }
}

#[test]
fn cyclic_suspensions() {
    for n in 1..=9usize {
        let g = Arc::new(FiniteGroup::cyclic(n).unwrap());
        let s = suspension_three_type(&g, DEFAULT_TENSOR_BOUND).unwrap();
        let groups = &s.three_type.groups;
        assert_eq!(groups.pi2.order(), n);
        assert_eq!(groups.pi3.order(), n);
        // the class of g is represented by (g, g^-1), so η*([g]) = g ⊗ g^-1 = (g ⊗ g)^-1
        let l = &s.tensor.group;
        for k in 0..n {
            let c = s.class_of(k);
            let gg = s.tensor.pair(1 % n, 1 % n);
            let want = l.pow(gg, -((k * k) as i64));
            assert_eq!(s.three_type.eta_star(c), want, "Z{n}, k = {k}");
        }
    }
}

#[test]
fn symmetric_group_s3() {
    let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
    let s = suspension_three_type(&g, DEFAULT_TENSOR_BOUND).unwrap();
    assert_eq!(s.tensor.group.order(), 6);
    assert_eq!(s.three_type.groups.pi2_invariants, vec![2]);
    assert_eq!(s.three_type.groups.pi3_invariants, vec![2]);
}

/// An inclusion square of normal subgroups with `M N = P` has trivial homotopy
/// in degrees 1 and 2 when `M ∩ N` is all of `L`.
#[test]
fn inclusion_square_of_whole_group_is_contractible() {
    for g in [FiniteGroup::dihedral(4).unwrap(), FiniteGroup::symmetric(3).unwrap()] {
        let g = Arc::new(g);
        let w = Subgroup::whole(&g);
        let sq = CrossedSquare::inclusion(&w, &w).unwrap();
        let tt = analyze(&sq).unwrap();
        assert_eq!(tt.groups.pi1.order(), 1);
        assert_eq!(tt.groups.pi2.order(), 1);
        assert_eq!(tt.groups.pi3.order(), 1);
    }
}
