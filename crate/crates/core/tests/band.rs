use std::collections::BTreeSet;
use std::fs;

use handlecalc::band::{applicable_band_moves, apply_band, BandMove};
use handlecalc::ddc::{parse_ddc, surface_euler_characteristic, SlotRef};
use handlecalc::engine::fixtures_root;
use handlecalc::{Diagram, Error};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spun() -> Diagram {
    parse_ddc(&fs::read_to_string(fixtures_root().join("spun_trefoil.ddc")).unwrap()).unwrap()
}

/// The spun trefoil next to a dotted circle and a split framed unknot.
fn spun_with_handles() -> Diagram {
    let mut text = fs::read_to_string(fixtures_root().join("spun_trefoil.ddc")).unwrap();
    text.push_str("component D dotted :\ncomponent F framed:0 :\n");
    parse_ddc(&text).unwrap()
}

#[test]
fn listed_moves_apply_and_keep_the_surface() {
    for d in [spun(), spun_with_handles()] {
        let chi = surface_euler_characteristic(&d).unwrap();
        let moves = applicable_band_moves(&d);
        assert!(!moves.is_empty());
        for m in moves {
            let out = apply_band(&d, &m).unwrap();
            assert!(out.is_valid(), "{m}: {:?}", out.validate());
            assert_eq!(surface_euler_characteristic(&out).unwrap(), chi, "{m}");
        }
    }
}

#[test]
fn handle_moves_are_offered_next_to_handles() {
    let kinds: BTreeSet<&str> = applicable_band_moves(&spun_with_handles()).iter().map(|m| m.kind_name()).collect();
    for k in ["Cup", "BandHandleSlide", "DottedSlide"] {
        assert!(kinds.contains(k), "{kinds:?}");
    }
}

#[test]
fn cup_then_cap_is_identity() {
    let d = spun();
    let up = apply_band(&d, &BandMove::Cup { on: SlotRef::new("k1", "^") }).unwrap();
    assert_eq!(up.bands.len(), 2);
    let new_band = up.bands.keys().find(|b| !d.bands.contains_key(*b)).unwrap().clone();
    let back = apply_band(&up, &BandMove::Cap { band: new_band }).unwrap();
    assert!(back.same_as(&d), "{}", back.to_text());
}

#[test]
fn cap_needs_a_bare_far_end() {
    match apply_band(&spun(), &BandMove::Cap { band: "B".into() }) {
        Err(Error::Rejected(_)) => {}
        other => panic!("{other:?}"),
    }
    match apply_band(&spun(), &BandMove::Cap { band: "Z".into() }) {
        Err(Error::Rejected(m)) => assert!(m.contains("site not found"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn move_lines_round_trip() {
    for line in [
        "cup on=k1.^",
        "cap b=B",
        "slide b=B over=C end=from",
        "swim b=B through=C end=to",
        "handleslide b=B over=F at=1",
        "handleswim b=B on=K.s2 sign=-",
        "dottedslide b=B disk=D variant=over sign=+",
        "vertexswim v=V1 band=B sign=-",
        "isotopy cancel at=k1.f1",
    ] {
        assert_eq!(BandMove::parse(line).unwrap().to_string(), format!("band {line}"));
    }
    assert!(matches!(BandMove::parse("dottedslide b=B disk=D variant=sideways"), Err(Error::Syntax(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn random_band_walks_keep_the_surface(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut d = spun_with_handles();
        let chi = surface_euler_characteristic(&d).unwrap();
        for _ in 0..6 {
            let moves = applicable_band_moves(&d);
            let Some(m) = moves.choose(&mut rng) else { break };
            d = apply_band(&d, m).unwrap();
            prop_assert!(d.is_valid(), "{}", m);
            prop_assert_eq!(surface_euler_characteristic(&d).unwrap(), chi, "{}", m);
            if d.event_count() > 40 {
                break;
            }
        }
    }
}
