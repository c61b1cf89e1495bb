use std::fs;

use handlecalc::ddc::{parse_ddc, Side};
use handlecalc::engine::fixtures_root;
use handlecalc::heegaard::{
    applicable_heegaard_moves, apply_heegaard, handlebody_heegaard, homology_5manifold, parse_hgd, surgery_kirby,
    FiveKind, HeegaardDiagram, HeegaardMove,
};
use handlecalc::invariants::{homology_4manifold, IntMatrix};
use handlecalc::Error;

fn hgd(name: &str) -> HeegaardDiagram {
    parse_hgd(&fs::read_to_string(fixtures_root().join(name)).unwrap()).unwrap()
}

fn groups(h: &HeegaardDiagram, kind: FiveKind) -> Vec<String> {
    homology_5manifold(h, kind, None).unwrap().iter().map(|g| g.to_string()).collect()
}

fn hgd_fixtures() -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(fixtures_root())
        .unwrap()
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter(|n| n.ends_with(".hgd"))
        .collect();
    v.sort();
    v
}

#[test]
fn fixtures_parse_validate_and_round_trip() {
    for n in hgd_fixtures() {
        let h = hgd(&n);
        assert!(h.validate().is_empty(), "{n}: {:?}", h.validate());
        let text = h.canonical().to_text();
        let again = parse_hgd(&text).unwrap();
        assert!(again.same_as(&h), "{n}");
        assert_eq!(again.canonical().to_text(), text, "{n}");
    }
}

#[test]
fn undeclared_vertex_is_a_parse_error() {
    let text = fs::read_to_string(fixtures_root().join("wu.hgd")).unwrap().replace("xvertex V2", "vertex V2");
    assert!(parse_hgd(&text).is_err());
}

#[test]
fn closed_homology() {
    assert_eq!(groups(&hgd("wu.hgd"), FiveKind::Closed), ["Z", "0", "Z/2", "0", "0", "Z"]);
    assert_eq!(groups(&hgd("s2xs3.hgd"), FiveKind::Closed), ["Z", "0", "Z", "Z", "0", "Z"]);
    assert_eq!(groups(&hgd("s5.hgd"), FiveKind::Closed), ["Z", "0", "0", "0", "0", "Z"]);
    assert_eq!(hgd("wu.hgd").intersection_matrix(), IntMatrix::from_rows(&[vec![2]]));
}

#[test]
fn euler_class_of_closed_fixtures_vanishes() {
    for n in ["wu.hgd", "s2xs3.hgd", "s5.hgd"] {
        let c = hgd(&n).euler_class(FiveKind::Closed).unwrap();
        assert_eq!(c.euler, 0, "{n}");
        assert_eq!(1 - c.k + c.alpha - c.beta + c.r.unwrap() - 1, 0, "{n}");
    }
    let mut h = hgd("wu.hgd");
    h.asserted_r = Some(1);
    assert!(matches!(h.euler_class(FiveKind::Closed), Err(Error::Rejected(_))));
}

#[test]
fn cobordism_handlebody_is_contractible() {
    assert_eq!(groups(&hgd("cobordism.hgd"), FiveKind::ThreeHandlebody), ["Z", "0", "0", "0", "0", "0"]);
    assert!(homology_5manifold(&hgd("gluck_spun_trefoil.hgd"), FiveKind::Cobordism, None).is_err());
}

#[test]
fn side_surgeries_of_wu_are_homology_spheres() {
    let h = hgd("wu.hgd");
    for side in [Side::Alpha, Side::Beta] {
        let d = surgery_kirby(&h, side).unwrap();
        assert!(d.is_valid() && d.is_kirby(), "{:?}", d.validate());
        let hs: Vec<String> = homology_4manifold(&d, true).unwrap().iter().map(|g| g.to_string()).collect();
        assert_eq!(hs, ["Z", "0", "0", "0", "Z"], "{side:?}");
    }
}

#[test]
fn handlebody_of_a_kirby_diagram_has_matching_base() {
    let d = parse_ddc(&fs::read_to_string(fixtures_root().join("mazur.ddc")).unwrap()).unwrap();
    let h = handlebody_heegaard(&d).unwrap();
    assert!(h.validate().is_empty());
    // one 0-framed meridian per dotted circle joins the framed handles
    let base = h.base();
    assert_eq!(base.framed_ids().len(), d.framed_ids().len() + d.dotted_ids().len());
    assert!(d.framed_ids().iter().all(|k| base.components.contains_key(k)));
    assert_eq!(h.sphere_count(Side::Alpha), d.dotted_ids().len());
}

#[test]
fn stabilizations_undo() {
    for n in ["wu.hgd", "s2xs3.hgd", "cobordism.hgd"] {
        let h = hgd(n);
        for stab in [HeegaardMove::Stab1, HeegaardMove::Stab2, HeegaardMove::Stab3] {
            let up = apply_heegaard(&h, &stab).unwrap();
            assert!(up.validate().is_empty(), "{n} {stab}");
            let undo = applicable_heegaard_moves(&up)
                .into_iter()
                .filter(|m| matches!(m, HeegaardMove::Destab1 { .. } | HeegaardMove::Destab2 { .. } | HeegaardMove::Destab3 { .. } | HeegaardMove::Base(_)))
                .map(|m| apply_heegaard(&up, &m).unwrap())
                .find(|x| x.same_as(&h));
            assert!(undo.is_some(), "{n}: nothing undoes {stab}\n{}", up.canonical());
        }
    }
}

#[test]
fn stab2_keeps_closed_homology() {
    let h = hgd("wu.hgd");
    let up = apply_heegaard(&h, &HeegaardMove::Stab2).unwrap();
    assert_eq!(groups(&up, FiveKind::Closed), groups(&h, FiveKind::Closed));
}

#[test]
fn listed_moves_apply() {
    for n in hgd_fixtures() {
        let h = hgd(&n);
        for m in applicable_heegaard_moves(&h) {
            let out = apply_heegaard(&h, &m).unwrap_or_else(|e| panic!("{n}: {m}: {e}"));
            assert!(out.validate().is_empty(), "{n}: {m}");
        }
    }
}

#[test]
fn move_lines_round_trip() {
    for line in [
        "stab1",
        "destab2 a=R b=S",
        "kirby pair12 annihilate k=K d=D",
        "isotopy side=beta cup on=S.^",
        "slide side=alpha i=R j=R2 from=R.v1 to=R2.^ parity=1 core=( pierce(U1,+) )",
    ] {
        assert_eq!(HeegaardMove::parse(line).unwrap().to_string(), format!("heegaard {line}"));
    }
    assert!(matches!(HeegaardMove::parse("isotopy cup on=S.^"), Err(Error::Syntax(_))));
}
