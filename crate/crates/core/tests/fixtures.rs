use std::fs;
use std::path::PathBuf;

use handlecalc::ddc::parse_ddc;
use handlecalc::engine::fixtures_root;
use handlecalc::heegaard::{gluck_cobordism, one_surgery, parse_hgd};
use handlecalc::kirby::{apply_kirby, KirbyMove};
use handlecalc::Diagram;

fn path(name: &str) -> PathBuf {
    fixtures_root().join(name)
}

fn ddc(name: &str) -> Diagram {
    parse_ddc(&fs::read_to_string(path(name)).unwrap()).unwrap()
}

#[test]
fn slide_of_split_pm1_is_hopf_10() {
    let d = ddc("split_pm1.ddc");
    let m = KirbyMove::parse("slide22 i=B j=A band=(from=B.^ to=A.^ orient=+ core=( ))").unwrap();
    let out = apply_kirby(&d, &m).unwrap();
    assert_eq!(out.components["B"].kind.framing(), Some(0));
    let mut want = ddc("hopf_10.ddc");
    want.name = out.name.clone();
    assert_eq!(out.canonical().to_text(), want.canonical().to_text());
}

#[test]
fn gluck_compiler_matches_fixture() {
    let x = ddc("empty.ddc");
    let k = ddc("spun_trefoil.ddc");
    let got = gluck_cobordism(&x, &k).unwrap();
    let want = parse_hgd(&fs::read_to_string(path("gluck_spun_trefoil.hgd")).unwrap()).unwrap();
    assert!(got.same_as(&want), "got\n{}\nwant\n{}", got.canonical(), want.canonical());
}

#[test]
fn one_surgery_matches_fixture() {
    let d = ddc("s1xb3.ddc");
    let frag = fs::read_to_string(path("gamma2.frag")).unwrap();
    let got = one_surgery(&d, &frag, 0).unwrap();
    let want = fs::read_to_string(path("one_surgery_gamma2.ddc")).unwrap();
    let want = parse_ddc(&want).unwrap().canonical().to_text();
    assert_eq!(got.canonical().to_text(), want);
}
