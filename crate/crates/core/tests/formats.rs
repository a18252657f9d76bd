use std::sync::Arc;

use xcube::crossed::to_crossed_2cube;
use xcube::input::{parse_quadratic, parse_structure, BuildOptions, ElemRef, GroupSpec, NCubeMap, NCubePairing, Structure, StructureSpec};
use xcube::quadratic::realize;
use xcube::report::ThreeTypeReport;
use xcube::tensor::{suspension_three_type, universal_crossed_square, DEFAULT_TENSOR_BOUND};
use xcube::{FiniteGroup, Subgroup};

fn opts() -> BuildOptions {
    BuildOptions::default()
}

fn table_spec(g: &FiniteGroup) -> GroupSpec {
    GroupSpec::Table { table: g.table_rows(), names: None }
}

/// A universal square written out as a crossed 2-cube file and read back.
#[test]
fn ncube_file_round_trip() {
    let g = Arc::new(FiniteGroup::cyclic(3).unwrap());
    let w = Subgroup::whole(&g);
    let (_, sq) = universal_crossed_square(&w, &w, DEFAULT_TENSOR_BOUND).unwrap();
    let cube = to_crossed_2cube(&sq);
    let idx = |v: Vec<usize>| v.into_iter().map(ElemRef::Index).collect::<Vec<_>>();
    let mut groups = std::collections::BTreeMap::new();
    for a in 0..4 {
        groups.insert(a.to_string(), table_spec(cube.group(a)));
    }
    let mut mu = Vec::new();
    for a in 0..4usize {
        for i in 0..2 {
            if a & (1 << i) != 0 {
                let f = cube.mu_hom(i, a).unwrap();
                mu.push(NCubeMap { i, subset: a, images: idx(f.images().to_vec()) });
            }
        }
    }
    let mut h = Vec::new();
    for a in 0..4usize {
        for b in 0..4usize {
            let table = cube.h_table(a, b).into_iter().map(idx).collect();
            h.push(NCubePairing { a, b, table });
        }
    }
    let spec = StructureSpec::CrossedNcube { n: 2, groups, mu, h };
    let text = serde_json::to_string(&spec).unwrap();
    let back = parse_structure(&text).unwrap();
    assert_eq!(back, spec);
    match back.build(&opts()).unwrap() {
        Structure::NCube(c) => {
            assert!(c.validate().is_valid());
            let sq2 = c.to_crossed_square().unwrap();
            assert_eq!(sq2.l.order(), 3);
            assert!(sq2.validate().is_valid());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn named_elements_resolve() {
    let text = r#"{
        "kind": "inclusion_square",
        "group": {"type": "table", "table": [[0,1],[1,0]], "names": ["e", "t"]},
        "M": ["t"], "N": [1]
    }"#;
    match parse_structure(text).unwrap().build(&opts()).unwrap() {
        Structure::Square(sq, None) => assert_eq!(sq.m.order(), 2),
        other => panic!("{other:?}"),
    }
    let bad = text.replace("[\"t\"]", "[\"nope\"]");
    assert!(parse_structure(&bad).unwrap().build(&opts()).is_err());
}

#[test]
fn user_supplied_extension() {
    let text = r#"{
        "kind": "quadratic",
        "C": {"rank": 0, "torsion": [2]},
        "D": {"rank": 0, "torsion": [2]},
        "t": [1],
        "b": [[0]],
        "extension": {"M": {"rank": 1, "torsion": []}, "alpha": [[1]], "phi": [[1]]}
    }"#;
    let (q, ext) = parse_quadratic(text).unwrap().build().unwrap();
    let ext = ext.unwrap();
    let sq = xcube::quadratic::crossed_square_from_quadratic(&q, &ext).unwrap();
    let r = xcube::quadratic::roundtrip_check(&q, &ext, &sq).unwrap();
    assert_eq!(r.pi2_invariants, vec!["2"]);
    assert_eq!(r.pi3_invariants, vec!["2"]);
    let (auto, _, _) = realize(&q).unwrap();
    assert_eq!(auto.m, ext.m);
}

#[test]
fn report_json_round_trips_and_is_deterministic() {
    let g = Arc::new(FiniteGroup::dihedral(4).unwrap());
    let a = suspension_three_type(&g, DEFAULT_TENSOR_BOUND).unwrap().report("D4").to_json();
    let b = suspension_three_type(&g, DEFAULT_TENSOR_BOUND).unwrap().report("D4").to_json();
    assert_eq!(a, b);
    let parsed: ThreeTypeReport = serde_json::from_str(&a).unwrap();
    assert_eq!(parsed.to_json(), a);
    assert_eq!(parsed.pi3.invariants, Some(vec![2, 2, 2, 2]));
    assert!(parsed.to_text().contains("pi3 invariants: [2,2,2,2]"));
}
