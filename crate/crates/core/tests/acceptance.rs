//! Acceptance suite. Runs without the libtest harness and prints one
//! `PASS`/`FAIL` line per criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use xcube::abelian::{smith_normal_form, FgAbelian, Matrix};
use xcube::crossed::{to_crossed_2cube, AbelianCrossedSquare, NCUBE_AXIOMS};
use xcube::fp::{enumerate_group, FpError, FpGroup};
use xcube::group::{abelian_invariants, dihedral_x, dihedral_y};
use xcube::homotopy::{analyze, homotopy_groups, homotopy_of_abelian_square};
use xcube::quadratic::{
    crossed_square_from_quadratic, realize, roundtrip_check, validate_quadratic, BiadditiveExtension,
    QuadraticFunction,
};
use xcube::tensor::{nonabelian_tensor, suspension_three_type, universal_crossed_square, DEFAULT_TENSOR_BOUND};
use xcube::{CrossedSquare, Elem, FiniteGroup, Group, Subgroup};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn group(g: FiniteGroup) -> Group {
    Arc::new(g)
}

fn single_threaded<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("pool").install(f)
}

/// D4 suspension: π2 = [2,2], π3 = [2,2,2,2] generated by four named elements.
fn criterion_1() -> Check {
    let start = Instant::now();
    let d4 = group(FiniteGroup::dihedral(4).map_err(|e| e.to_string())?);
    let s = single_threaded(|| suspension_three_type(&d4, DEFAULT_TENSOR_BOUND)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let g = &s.three_type.groups;
    ensure(g.pi2_invariants == vec![2, 2], || format!("pi2 invariants {:?}", g.pi2_invariants))?;
    ensure(g.pi3_invariants == vec![2, 2, 2, 2], || format!("pi3 invariants {:?}", g.pi3_invariants))?;
    let (x, y) = (dihedral_x(4), dihedral_y(4));
    let t = &s.tensor;
    let l = &t.group;
    let xy = t.pair(x, y);
    let named = [t.pair(x, x), l.mul(xy, xy), t.pair(y, y), l.mul(xy, t.pair(y, x))];
    let distinct: BTreeSet<Elem> = named.iter().copied().collect();
    ensure(distinct.len() == 4, || "the four elements are not distinct".into())?;
    ensure(named.iter().all(|&e| e != l.identity()), || "a named element is trivial".into())?;
    ensure(named.iter().all(|&e| g.pi3.contains(e)), || "a named element is outside pi3".into())?;
    let span = Subgroup::generated(l, &named).map_err(|e| e.to_string())?;
    ensure(span.order() == g.pi3.order(), || format!("they generate a subgroup of order {}", span.order()))?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("pi2 [2,2], pi3 [2,2,2,2] generated by x⊗x, (x⊗y)^2, y⊗y, (x⊗y)(y⊗x) in {:.3}s", elapsed.as_secs_f64()))
}

/// η* and Whitehead values on D4.
fn criterion_2() -> Check {
    let d4 = group(FiniteGroup::dihedral(4).map_err(|e| e.to_string())?);
    let s = suspension_three_type(&d4, DEFAULT_TENSOR_BOUND).map_err(|e| e.to_string())?;
    let (x, y) = (dihedral_x(4), dihedral_y(4));
    let t = &s.tensor;
    let (cx, cy) = (s.class_of(x), s.class_of(y));
    let tt = &s.three_type;
    ensure(tt.eta_star(cx) == t.pair(x, x), || "eta*(x) != x⊗x".into())?;
    ensure(tt.eta_star(cy) == t.pair(y, y), || "eta*(y) != y⊗y".into())?;
    let w = t.group.mul(t.pair(x, y), t.pair(y, x));
    ensure(tt.whitehead(cx, cy) == w, || "W(x, y) != (x⊗y)(y⊗x)".into())?;
    Ok("eta*(x) = x⊗x, eta*(y) = y⊗y, W(x, y) = (x⊗y)(y⊗x)".into())
}

/// D3: π3 = ⟨x⊗x⟩ and the other candidates fall into it.
fn criterion_3() -> Check {
    let d3 = group(FiniteGroup::dihedral(3).map_err(|e| e.to_string())?);
    let s = suspension_three_type(&d3, DEFAULT_TENSOR_BOUND).map_err(|e| e.to_string())?;
    let (x, y) = (dihedral_x(3), dihedral_y(3));
    let t = &s.tensor;
    let pi3 = &s.three_type.groups.pi3;
    let xx = Subgroup::generated(&t.group, &[t.pair(x, x)]).map_err(|e| e.to_string())?;
    ensure(xx.members() == pi3.members(), || format!("pi3 has order {}, <x⊗x> has order {}", pi3.order(), xx.order()))?;
    let others = [t.pair(y, y), t.group.mul(t.pair(x, y), t.pair(y, x))];
    ensure(others.iter().all(|&e| xx.contains(e)), || "y⊗y or (x⊗y)(y⊗x) is outside <x⊗x>".into())?;
    Ok(format!("pi3 = <x⊗x> of order {}", pi3.order()))
}

/// S¹ suspension on the abelian path.
fn criterion_4() -> Check {
    let sq = AbelianCrossedSquare::<i64>::circle_suspension();
    let h = homotopy_of_abelian_square(&sq).map_err(|e| e.to_string())?;
    ensure(h.pi1.group.is_trivial(), || format!("pi1 = {}", h.pi1.group))?;
    ensure(h.pi2.group.invariants() == vec![0], || format!("pi2 = {}", h.pi2.group))?;
    ensure(h.pi3.group.invariants() == vec![0], || format!("pi3 = {}", h.pi3.group))?;
    let one = h.eta_star(&sq, &[1]).map_err(|e| e.to_string())?;
    let sign = one[0];
    ensure(sign == 1 || sign == -1, || format!("eta*(gen) = {sign}"))?;
    for k in -8i64..=8 {
        let v = h.eta_star(&sq, &[k]).map_err(|e| e.to_string())?;
        ensure(v == vec![sign * k * k], || format!("eta*({k}) = {v:?}"))?;
    }
    Ok(format!("pi1 = 0, pi2 = Z, pi3 = Z, eta*(k) = {sign}·k^2 for |k| <= 8"))
}

fn zn(n: i64) -> FgAbelian<i64> {
    FgAbelian::cyclic(n).expect("cyclic")
}

fn q1(c: FgAbelian<i64>, d: FgAbelian<i64>, t: i64, b: i64) -> Result<QuadraticFunction<i64>, String> {
    QuadraticFunction::new(c, d, vec![vec![t]], vec![vec![vec![b]]]).map_err(|e| e.to_string())
}

/// Entries whose failure is recorded as a conflict in the statement of the
/// battery: they are run and reported, but do not fail the suite.
const KNOWN_CONFLICTS: &[&str] = &["(Z2, Z3, t=1, b=1)"];

/// Quadratic round trips. Returns the verdict and whether every failure is a known conflict.
fn criterion_5() -> (Check, bool) {
    let mut battery: Vec<(String, Result<QuadraticFunction<i64>, String>)> = vec![
        ("(Z2, Z2, t=1, b=0)".into(), q1(zn(2), zn(2), 1, 0)),
        ("(Z2, Z3, t=1, b=1)".into(), q1(zn(2), zn(3), 1, 1)),
    ];
    let mut z4 = 0;
    for t in 0..2 {
        for b in 0..2 {
            match q1(zn(4), zn(2), t, b) {
                Ok(q) if validate_quadratic(&q).is_valid() => {
                    z4 += 1;
                    battery.push((format!("(Z4, Z2, t={t}, b={b})"), Ok(q)));
                }
                _ => {}
            }
        }
    }
    battery.push(("(Z2, Z2, t=0)".into(), q1(zn(2), zn(2), 0, 0)));
    battery.push(("(Z3, Z3, t=0)".into(), q1(zn(3), zn(3), 0, 0)));
    battery.push(("(Z, Z, t=0)".into(), q1(FgAbelian::free(1), FgAbelian::free(1), 0, 0)));
    battery.push(("(Z, Z, t=k^2)".into(), q1(FgAbelian::free(1), FgAbelian::free(1), 1, 2)));

    let mut lines = Vec::new();
    let mut failed = Vec::new();
    for (name, q) in &battery {
        let outcome = q.as_ref().map_err(Clone::clone).and_then(|q| realize(q).map_err(|e| e.to_string()));
        match outcome {
            Ok((_, _, r)) => lines.push(format!("{name} ok ({} points)", r.checked)),
            Err(e) => {
                let msg: Vec<&str> = e.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
                lines.push(format!("{name} FAILED: {}", msg.join(" ")));
                failed.push(name.clone());
            }
        }
    }

    // Supplied extension M = Z, α = mod 2, φ(x, y) = xy.
    let supplied = q1(zn(2), zn(2), 1, 0).and_then(|q| {
        let ext = BiadditiveExtension {
            m: FgAbelian::free(1),
            alpha: xcube::abelian::AbelianHom::new(
                FgAbelian::free(1),
                zn(2),
                Matrix::from_i64_rows(&[vec![1]]).map_err(|e| e.to_string())?,
            )
            .map_err(|e| e.to_string())?,
            phi: vec![vec![vec![1]]],
            symmetric: true,
        };
        let sq = crossed_square_from_quadratic(&q, &ext).map_err(|e| e.to_string())?;
        roundtrip_check(&q, &ext, &sq).map_err(|e| e.to_string())
    });
    match supplied {
        Ok(r) => lines.push(format!("(Z2, Z2) with supplied extension ok ({} points)", r.checked)),
        Err(e) => {
            lines.push(format!("(Z2, Z2) with supplied extension FAILED: {e}"));
            failed.push("supplied".into());
        }
    }
    let detail = format!("{} valid functions on Z4; {}", z4, lines.join("; "));
    let only_known = failed.iter().all(|f| KNOWN_CONFLICTS.contains(&f.as_str()));
    if failed.is_empty() {
        (Ok(detail), true)
    } else {
        (Err(detail), only_known)
    }
}

/// Invariant factors of A ⊗ B for finite A, B given by cyclic orders, by SNF
/// of the relation matrix on the generators a_i ⊗ b_j.
fn abelian_tensor_invariants(a: &[i64], b: &[i64]) -> Vec<i64> {
    let q = b.len();
    let mut rows = Vec::new();
    for (i, &da) in a.iter().enumerate() {
        for (j, &db) in b.iter().enumerate() {
            for d in [da, db] {
                let mut r = vec![0i64; a.len() * q];
                r[i * q + j] = d;
                rows.push(r);
            }
        }
    }
    if rows.is_empty() {
        return Vec::new();
    }
    let snf = smith_normal_form(&Matrix::from_i64_rows(&rows).expect("matrix")).expect("snf");
    let mut inv: Vec<i64> = snf.diagonal().into_iter().map(|x: i64| x.abs()).filter(|&x| x != 1).collect();
    inv.sort_unstable();
    inv
}

/// Nonabelian tensor squares of cyclic groups against the SNF oracle.
fn criterion_6() -> Check {
    let mut seen = Vec::new();
    for n in 1..=8usize {
        let g = group(FiniteGroup::cyclic(n).map_err(|e| e.to_string())?);
        let w = Subgroup::whole(&g);
        let t = nonabelian_tensor(&w, &w, DEFAULT_TENSOR_BOUND).map_err(|e| e.to_string())?;
        ensure(t.group.is_abelian(), || format!("Z{n} ⊗ Z{n} is nonabelian"))?;
        let got: Vec<i64> = abelian_invariants(&t.group).map_err(|e| e.to_string())?.into_iter().map(|x| x as i64).collect();
        let want = abelian_tensor_invariants(&[n as i64], &[n as i64]);
        ensure(got == want, || format!("Z{n}: tensor {got:?}, oracle {want:?}"))?;
        seen.push(format!("Z{n}:{got:?}"));
    }
    Ok(seen.join(" "))
}

fn order_three(g: &Group) -> Elem {
    g.elements().find(|&e| g.element_order(e) == 3).expect("element of order 3")
}

/// (name, group, generators of M, generators of N); `None` means the whole group.
type BatteryEntry = (String, Group, Option<Vec<Elem>>, Option<Vec<Elem>>);

fn universal_battery() -> Vec<BatteryEntry> {
    let s3 = group(FiniteGroup::symmetric(3).expect("S3"));
    let c = order_three(&s3);
    vec![
        ("Z2".into(), group(FiniteGroup::cyclic(2).expect("Z2")), None, None),
        ("Z4".into(), group(FiniteGroup::cyclic(4).expect("Z4")), None, None),
        ("S3 with M = N = A3".into(), s3, Some(vec![c]), Some(vec![c])),
        ("D3".into(), group(FiniteGroup::dihedral(3).expect("D3")), None, None),
        ("D4".into(), group(FiniteGroup::dihedral(4).expect("D4")), None, None),
    ]
}

fn sub(g: &Group, gens: &Option<Vec<Elem>>) -> Result<Subgroup, String> {
    match gens {
        None => Ok(Subgroup::whole(g)),
        Some(v) => Subgroup::generated(g, v).map_err(|e| e.to_string()),
    }
}

/// Universal squares pass the square axioms and the eleven 2-cube axioms.
fn criterion_7() -> Check {
    let mut notes = Vec::new();
    for (name, g, m, n) in universal_battery() {
        let (_, vsq) = universal_crossed_square(&sub(&g, &m)?, &sub(&g, &n)?, DEFAULT_TENSOR_BOUND)
            .map_err(|e| format!("{name}: {e}"))?;
        let sq = vsq.into_inner();
        let r = sq.validate();
        ensure(r.is_valid(), || format!("{name}: {r}"))?;
        let cube = to_crossed_2cube(&sq);
        let rc = cube.validate();
        ensure(rc.is_valid(), || format!("{name} as 2-cube: {rc}"))?;
        notes.push(format!("{name} ({} + {} checks)", r.checked, rc.checked));
    }
    Ok(format!("{} axioms on 2-cubes; {}", NCUBE_AXIOMS.len(), notes.join(", ")))
}

/// Squares used for the chain-complex checks.
fn square_battery() -> Result<Vec<(String, CrossedSquare)>, String> {
    let mut out = Vec::new();
    for (name, g, m, n) in universal_battery() {
        let (_, sq) = universal_crossed_square(&sub(&g, &m)?, &sub(&g, &n)?, DEFAULT_TENSOR_BOUND)
            .map_err(|e| e.to_string())?;
        out.push((format!("universal {name}"), sq.into_inner()));
    }
    let s3 = group(FiniteGroup::symmetric(3).map_err(|e| e.to_string())?);
    let c = order_three(&s3);
    let a3 = Subgroup::generated(&s3, &[c]).map_err(|e| e.to_string())?;
    out.push(("inclusion A3, S3 in S3".into(), CrossedSquare::inclusion(&a3, &Subgroup::whole(&s3)).map_err(|e| e.to_string())?));
    let d4 = group(FiniteGroup::dihedral(4).map_err(|e| e.to_string())?);
    let (x, y) = (dihedral_x(4), dihedral_y(4));
    let rot = Subgroup::generated(&d4, &[y]).map_err(|e| e.to_string())?;
    let klein = Subgroup::generated(&d4, &[x, d4.mul(y, y)]).map_err(|e| e.to_string())?;
    out.push(("inclusion <y>, <x, y^2> in D4".into(), CrossedSquare::inclusion(&rot, &klein).map_err(|e| e.to_string())?));
    for k in [2, 3, 4] {
        out.push((format!("Z{k} suspension"), CrossedSquare::cyclic_suspension(k).map_err(|e| e.to_string())?));
    }
    out.push(("trivial".into(), CrossedSquare::trivial()));
    Ok(out)
}

/// Homology-form π2 against the pullback form, and the Postnikov crossed module.
fn criterion_8() -> Check {
    let mut notes = Vec::new();
    for (name, sq) in square_battery()? {
        let hg = homotopy_groups(&sq).map_err(|e| format!("{name}: {e}"))?;
        let nn = sq.n.order();
        let key = |m: Elem, n: Elem| m * nn + n;
        // M ×_P N and the image of L in it
        let pullback: Vec<(Elem, Elem)> = sq
            .m
            .elements()
            .flat_map(|m| sq.n.elements().map(move |n| (m, n)))
            .filter(|&(m, n)| sq.mu.apply(m) == sq.nu.apply(n))
            .collect();
        let image: BTreeSet<(Elem, Elem)> =
            sq.l.elements().map(|l| (sq.lambda.apply(l), sq.lambda_p.apply(l))).collect();
        let coset = |m: Elem, n: Elem| {
            image.iter().map(|&(a, b)| key(sq.m.mul(m, a), sq.n.mul(n, b))).min().expect("nonempty")
        };
        let cosets: BTreeSet<Elem> = pullback.iter().map(|&(m, n)| coset(m, n)).collect();
        let mut class_to_coset: BTreeMap<Elem, Elem> = BTreeMap::new();
        for &x in hg.ker_d1.members() {
            let (m, n) = hg.complex.sd.pair(x);
            let n_inv = sq.n.inv(n);
            ensure(sq.mu.apply(m) == sq.nu.apply(n_inv), || format!("{name}: (m, n^-1) not in the pullback"))?;
            let class = hg.pi2_class(x).ok_or_else(|| format!("{name}: no class for a kernel element"))?;
            let c = coset(m, n_inv);
            if let Some(&prev) = class_to_coset.get(&class) {
                ensure(prev == c, || format!("{name}: correspondence is not well defined"))?;
            }
            class_to_coset.insert(class, c);
        }
        let hit: BTreeSet<Elem> = class_to_coset.values().copied().collect();
        ensure(class_to_coset.len() == hg.pi2.order(), || format!("{name}: not every class is hit"))?;
        ensure(hit.len() == class_to_coset.len(), || format!("{name}: correspondence is not injective"))?;
        ensure(hit == cosets, || format!("{name}: correspondence is not onto"))?;

        let tt = analyze(&sq).map_err(|e| format!("{name}: {e}"))?;
        let module = &tt.postnikov.module;
        let r = module.validate();
        ensure(r.is_valid(), || format!("{name}: {r}"))?;
        let kernel = module.kernel().as_group().0;
        let kinv = abelian_invariants(&kernel).map_err(|e| format!("{name}: {e}"))?;
        ensure(kinv == hg.pi2_invariants, || format!("{name}: kernel {kinv:?} vs pi2 {:?}", hg.pi2_invariants))?;
        let cok = module.cokernel().map_err(|e| format!("{name}: {e}"))?.0;
        ensure(cok.order() == hg.pi1.order(), || format!("{name}: cokernel order {} vs pi1 order {}", cok.order(), hg.pi1.order()))?;
        notes.push(format!("{name} (|pi2| = {})", hg.pi2.order()));
    }
    Ok(notes.join(", "))
}

fn enumerate(gens: &[&str], rels: &[&str]) -> Result<usize, String> {
    let p = FpGroup::parse(gens, rels).map_err(|e| e.to_string())?;
    Ok(enumerate_group(&p, 100_000).map_err(|e| e.to_string())?.group.order())
}

fn perm_order(degree: usize, gens: &[Vec<usize>]) -> Result<usize, String> {
    Ok(FiniteGroup::from_permutations(degree, gens).map_err(|e| e.to_string())?.order())
}

/// Left regular representation of Q8 = {±1, ±i, ±j, ±k} on 8 points.
fn q8_permutations() -> Vec<Vec<usize>> {
    // unit u in 0..4 (1, i, j, k) and sign s; point = 4 s + u
    let table = [[(0, 0), (1, 0), (2, 0), (3, 0)], [(1, 0), (0, 1), (3, 0), (2, 1)], [(2, 0), (3, 1), (0, 1), (1, 0)], [(3, 0), (2, 0), (1, 1), (0, 1)]];
    let mul = |a: usize, b: usize| {
        let (u, s) = table[a % 4][b % 4];
        4 * ((a / 4 + b / 4 + s) % 2) + u
    };
    [1usize, 2].iter().map(|&g| (0..8).map(|p| mul(g, p)).collect()).collect()
}

/// Todd–Coxeter against known orders and permutation closures.
fn criterion_9() -> Check {
    let mut notes = Vec::new();
    for n in 1..=8usize {
        let got = enumerate(&["x"], &[&format!("x^{n}")])?;
        let want = FiniteGroup::cyclic(n).map_err(|e| e.to_string())?.order();
        ensure(got == n && want == n, || format!("Z{n}: enumerated {got}"))?;
    }
    notes.push("Z1..Z8".to_string());
    for n in 1..=8usize {
        let got = enumerate(&["x", "y"], &["x^2", &format!("y^{n}"), "x y x y"])?;
        let want = if n >= 3 {
            let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
            let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            perm_order(n, &[refl, rot])?
        } else {
            FiniteGroup::dihedral(n).map_err(|e| e.to_string())?.order()
        };
        ensure(got == 2 * n && want == 2 * n, || format!("D{n}: enumerated {got}, closure {want}"))?;
    }
    notes.push("D1..D8".to_string());
    let s3 = enumerate(&["a", "b"], &["a^2", "b^3", "a b a b"])?;
    let s3p = perm_order(3, &[vec![1, 0, 2], vec![1, 2, 0]])?;
    ensure(s3 == 6 && s3p == 6, || format!("S3: enumerated {s3}, closure {s3p}"))?;
    let s4 = enumerate(&["a", "b"], &["a^2", "b^3", "a b a b a b a b"])?;
    let s4p = perm_order(4, &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]])?;
    ensure(s4 == 24 && s4p == 24, || format!("S4: enumerated {s4}, closure {s4p}"))?;
    let q8 = enumerate(&["a", "b"], &["a^4", "a^2 b^-2", "b^-1 a b a"])?;
    let q8p = perm_order(8, &q8_permutations())?;
    ensure(q8 == 8 && q8p == 8, || format!("Q8: enumerated {q8}, closure {q8p}"))?;
    notes.push("S3, S4, Q8".to_string());
    let free = FpGroup::parse(&["x"], &[]).map_err(|e| e.to_string())?;
    match enumerate_group(&free, 10_000) {
        Err(FpError::Overflow(_)) => notes.push("<x|> overflows".into()),
        Err(e) => return Err(format!("<x|>: unexpected error {e}")),
        Ok(g) => return Err(format!("<x|> enumerated to order {}", g.group.order())),
    }
    Ok(notes.join(", "))
}

type Criterion = Box<dyn Fn() -> (Check, bool)>;

fn main() {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 dihedral golden test (n = 4)", Box::new(|| (criterion_1(), false))),
        ("2 eta* and Whitehead values (n = 4)", Box::new(|| (criterion_2(), false))),
        ("3 odd case (n = 3)", Box::new(|| (criterion_3(), false))),
        ("4 suspension of the circle", Box::new(|| (criterion_4(), false))),
        ("5 quadratic round-trip battery", Box::new(criterion_5)),
        ("6 tensor square oracle", Box::new(|| (criterion_6(), false))),
        ("7 axiom suite on universal squares", Box::new(|| (criterion_7(), false))),
        ("8 chain-complex consistency", Box::new(|| (criterion_8(), false))),
        ("9 Todd-Coxeter calibration", Box::new(|| (criterion_9(), false))),
    ];
    let mut unexpected = 0;
    for (name, run) in &criteria {
        let (outcome, tolerated) = run();
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(detail) => {
                if tolerated {
                    println!("criterion {name}: FAIL, known conflict ({detail})");
                } else {
                    println!("criterion {name}: FAIL ({detail})");
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criterion(s) failed");
        std::process::exit(1);
    }
}
