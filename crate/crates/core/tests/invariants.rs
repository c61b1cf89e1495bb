use std::fs;

use handlecalc::ddc::parse_ddc;
use handlecalc::engine::fixtures_root;
use handlecalc::invariants::{
    abelianization, chain_homology, hom_count, homology_4manifold, pi1_presentation, smith_normal_form, tietze_simplify,
    AbelianGroup, IntMatrix, PermGroup, Presentation,
};
use proptest::prelude::*;

fn fixture_homology(name: &str, closed: bool) -> Vec<String> {
    let d = parse_ddc(&fs::read_to_string(fixtures_root().join(name)).unwrap()).unwrap();
    homology_4manifold(&d, closed).unwrap().iter().map(|g| g.to_string()).collect()
}

/// All permutations of 0..n.
fn perms(n: u8) -> Vec<Vec<u8>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in perms(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn even(p: &[u8]) -> bool {
    let inv = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    inv % 2 == 0
}

fn inverse(p: &[u8]) -> Vec<u8> {
    let mut q = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        q[x as usize] = i as u8;
    }
    q
}

fn eval(w: &[i32], imgs: &[Vec<u8>], n: usize) -> Vec<u8> {
    let mut acc: Vec<u8> = (0..n as u8).collect();
    for &l in w {
        let g = &imgs[(l.unsigned_abs() - 1) as usize];
        let g = if l > 0 { g.clone() } else { inverse(g) };
        acc = acc.iter().map(|&x| g[x as usize]).collect();
    }
    acc
}

fn closure(gens: &[Vec<u8>], n: usize) -> usize {
    let mut seen = vec![(0..n as u8).collect::<Vec<u8>>()];
    let mut i = 0;
    while i < seen.len() {
        for g in gens {
            let e: Vec<u8> = seen[i].iter().map(|&x| g[x as usize]).collect();
            if !seen.contains(&e) {
                seen.push(e);
            }
        }
        i += 1;
    }
    seen.len()
}

/// Brute-force (total, surjective) homomorphism counts into `elems`.
fn hom_oracle(p: &Presentation, elems: &[Vec<u8>], n: usize) -> (u64, u64) {
    let k = p.generators.len();
    let (mut total, mut surj) = (0, 0);
    let mut idx = vec![0usize; k];
    let id: Vec<u8> = (0..n as u8).collect();
    loop {
        let imgs: Vec<Vec<u8>> = idx.iter().map(|&i| elems[i].clone()).collect();
        if p.relators.iter().all(|r| eval(r, &imgs, n) == id) {
            total += 1;
            if closure(&imgs, n) == elems.len() {
                surj += 1;
            }
        }
        let mut j = 0;
        while j < k {
            idx[j] += 1;
            if idx[j] < elems.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == k {
            return (total, surj);
        }
    }
}

#[test]
fn fixture_homology_groups() {
    assert_eq!(fixture_homology("s1xb3.ddc", false), ["Z", "Z", "0", "0", "0"]);
    assert_eq!(fixture_homology("mazur.ddc", false), ["Z", "0", "0", "0", "0"]);
    assert_eq!(fixture_homology("hopf_10.ddc", false), ["Z", "0", "Z^2", "0", "0"]);
    assert_eq!(fixture_homology("cancel12.ddc", false), ["Z", "0", "0", "0", "0"]);
    assert_eq!(fixture_homology("cancel23.ddc", true), ["Z", "0", "0", "0", "Z"]);
    assert_eq!(fixture_homology("empty.ddc", true), ["Z", "0", "0", "0", "Z"]);
}

#[test]
fn closed_homology_rejects_impossible_r3() {
    let d = parse_ddc("diagram x\nflag r3=3\n").unwrap();
    assert!(homology_4manifold(&d, true).is_err());
}

#[test]
fn chain_homology_of_projective_plane() {
    let h = chain_homology(&[1, 1, 1], |k| if k == 1 { IntMatrix::zeros(1, 1) } else { IntMatrix::from_rows(&[vec![2]]) });
    let h: Vec<String> = h.iter().map(|g| g.to_string()).collect();
    assert_eq!(h, ["Z", "Z/2", "0"]);
}

#[test]
fn cokernels_by_hand() {
    let g = AbelianGroup::cokernel(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
    assert_eq!(g.to_string(), "Z/6");
    let g = AbelianGroup::cokernel(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
    assert_eq!(g.to_string(), "Z/2 + Z/4");
    let g = AbelianGroup::cokernel(&IntMatrix::from_rows(&[vec![0], vec![0]]));
    assert_eq!(g.to_string(), "Z^2");
    assert_eq!("Z/2 + Z/3 + Z".parse::<AbelianGroup>().unwrap().to_string(), "Z + Z/6");
}

#[test]
fn mazur_group_is_trivial() {
    let d = parse_ddc(&fs::read_to_string(fixtures_root().join("mazur.ddc")).unwrap()).unwrap();
    let p = pi1_presentation(&d);
    assert!(abelianization(&p).is_trivial());
    let c = hom_count(&p, &PermGroup::alternating(5), 60).unwrap();
    assert_eq!((c.total, c.surjective), (1, 0));
    assert_eq!(tietze_simplify(&p, 100).generators.len(), 0);
}

#[test]
fn group_orders() {
    assert_eq!(PermGroup::symmetric(3).order(), 6);
    assert_eq!(PermGroup::alternating(4).order(), 12);
    assert_eq!(PermGroup::alternating(5).order(), 60);
    assert_eq!(PermGroup::named("S4").unwrap().order(), 24);
    assert!(PermGroup::named("Q8").is_err());
    assert!(hom_count(&Presentation::parse("<a|>").unwrap(), &PermGroup::alternating(5), 59).is_err());
}

#[test]
fn hom_counts_match_brute_force() {
    let s3: Vec<Vec<u8>> = perms(3);
    let a5: Vec<Vec<u8>> = perms(5).into_iter().filter(|p| even(p)).collect();
    assert_eq!(a5.len(), 60);
    let cases = ["<a|>", "<a,b | a b a^-1 b^-1>", "<a,b | a b a b^-1 a^-1 b^-1>", "<a,b | a^2, b^3, a b a b>", "<a,b | a^5, b^2, a b a b>"];
    for text in cases {
        let p = Presentation::parse(text).unwrap();
        for (name, elems, n) in [("S3", &s3, 3), ("A5", &a5, 5)] {
            let g = PermGroup::named(name).unwrap();
            let got = hom_count(&p, &g, 60).unwrap();
            assert_eq!((got.total, got.surjective), hom_oracle(&p, elems, n), "{text} -> {name}");
        }
    }
}

fn word() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2), Just(3), Just(-3)], 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn smith_form_is_a_divisor_chain(rows in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 1..=4)) {
        let a = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.left.mul(&a).mul(&s.right), s.diagonal());
        prop_assert_eq!(s.left.det().abs(), 1);
        prop_assert_eq!(s.right.det().abs(), 1);
        for w in s.d.windows(2) {
            prop_assert!(w[0] >= 0 && w[1] >= 0);
            let divides = if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 };
            prop_assert!(divides, "{:?}", s.d);
        }
        // the cokernel is unchanged by transposing
        let t = smith_normal_form(&a.transpose());
        prop_assert_eq!(s.d, t.d);
    }

    #[test]
    fn tietze_keeps_the_group(rels in prop::collection::vec(word(), 0..3)) {
        let p = Presentation::new(vec!["a".into(), "b".into(), "c".into()], rels);
        let q = tietze_simplify(&p, 100);
        prop_assert_eq!(abelianization(&p), abelianization(&q));
        let s3 = PermGroup::symmetric(3);
        prop_assert_eq!(hom_count(&p, &s3, 60).unwrap(), hom_count(&q, &s3, 60).unwrap());
    }
}
