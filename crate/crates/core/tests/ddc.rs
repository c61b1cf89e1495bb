mod common;

use std::fs;

use handlecalc::ddc::{disjoint_union, linking_number, parse_ddc, surface_euler_characteristic};
use handlecalc::engine::fixtures_root;
use handlecalc::Diagram;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fixture(name: &str) -> String {
    fs::read_to_string(fixtures_root().join(name)).unwrap()
}

fn ddc_fixtures() -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(fixtures_root())
        .unwrap()
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter(|n| n.ends_with(".ddc") && n != "broken.ddc")
        .collect();
    v.sort();
    v
}

/// Half the signed crossing count between two components.
fn lk_oracle(d: &Diagram, i: &str, j: &str) -> i64 {
    let s: i64 = d
        .crossings
        .values()
        .filter(|x| (x.over.comp == i && x.under.comp == j) || (x.over.comp == j && x.under.comp == i))
        .map(|x| x.sign as i64)
        .sum();
    s / 2
}

#[test]
fn fixtures_parse_and_validate() {
    for n in ddc_fixtures() {
        let d = parse_ddc(&fixture(&n)).unwrap_or_else(|e| panic!("{n}: {e}"));
        assert!(d.is_valid(), "{n}: {:?}", d.validate());
    }
}

#[test]
fn canonical_text_round_trips() {
    for n in ddc_fixtures() {
        let d = parse_ddc(&fixture(&n)).unwrap().canonical();
        let text = d.to_text();
        let again = parse_ddc(&text).unwrap();
        assert_eq!(again.canonical().to_text(), text, "{n}");
        assert!(again.same_as(&d), "{n}");
    }
}

#[test]
fn broken_fixture_reports_dangling_slot() {
    let e = parse_ddc(&fixture("broken.ddc")).unwrap_err();
    assert_eq!(e.line, 5);
    assert!(e.message.contains("dangling slot reference K.s2"), "{e}");
}

#[test]
fn parse_errors_carry_line_numbers() {
    let e = parse_ddc("diagram x\ncomponent A framed:1 : s1\ncrossing X1 ? over=A.s1 under=A.s1\n").unwrap_err();
    assert_eq!(e.line, 3, "{e}");
}

#[test]
fn validation_catches_self_piercing_and_reuse() {
    let text = "diagram x\ncomponent D dotted : s1\ncomponent K framed:0 : s1\n\
                piercing P1 disk=D strand=D.s1 sign=+\npiercing P2 disk=D strand=K.s1 sign=+\n\
                piercing P3 disk=D strand=K.s1 sign=-\n";
    let errs = parse_ddc(text).unwrap().validate();
    assert!(errs.iter().any(|e| e.contains("dotted self-piercing")), "{errs:?}");
    assert!(errs.iter().any(|e| e.contains("slot used more than once K.s1")), "{errs:?}");
}

#[test]
fn hopf_linking_number() {
    let d = parse_ddc(&fixture("hopf_10.ddc")).unwrap();
    assert_eq!(linking_number(&d, "A", "B").unwrap(), lk_oracle(&d, "A", "B"));
    assert_eq!(linking_number(&d, "A", "B").unwrap(), 1);
    assert!(linking_number(&d, "A", "A").is_err());
}

#[test]
fn surface_euler_of_spun_trefoil_is_two() {
    let d = parse_ddc(&fixture("spun_trefoil.ddc")).unwrap();
    assert_eq!(surface_euler_characteristic(&d).unwrap(), 2);
}

#[test]
fn disjoint_union_renames_clashes() {
    let a = parse_ddc(&fixture("hopf_10.ddc")).unwrap();
    let u = disjoint_union(&a, &a);
    assert_eq!(u.components.len(), 4);
    assert_eq!(u.crossings.len(), 4);
    assert!(u.is_valid(), "{:?}", u.validate());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_codes_round_trip(seed in any::<u64>()) {
        let d = common::random_kirby(&mut ChaCha8Rng::seed_from_u64(seed), 4, 8);
        let c = d.canonical();
        prop_assert_eq!(c.canonical().to_text(), c.to_text());
        let back = parse_ddc(&d.to_text()).unwrap();
        prop_assert!(back.same_as(&d));
        prop_assert_eq!(back.canonical().to_text(), c.to_text());
    }

    #[test]
    fn linking_numbers_match_crossing_count(seed in any::<u64>()) {
        let d = common::random_kirby(&mut ChaCha8Rng::seed_from_u64(seed), 4, 8);
        let f = d.framed_ids();
        for i in &f {
            for j in &f {
                if i != j {
                    prop_assert_eq!(linking_number(&d, i, j).unwrap(), lk_oracle(&d, i, j));
                }
            }
        }
    }
}
