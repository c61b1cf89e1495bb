#![allow(dead_code)]

use handlecalc::ddc::{Component, Diagram, SlotRef};
use handlecalc::invariants::{abelianization, euler_of, homology_4manifold, pi1_presentation, AbelianGroup};
use handlecalc::kirby::{annihilable_pairs, apply_kirby, rewrite_sites, KirbyMove, Rewrite, SlideBand};
use handlecalc::Kind;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random Kirby diagram with 1..=max_comps components and at most
/// `max_cross` crossings. Dotted circles carry no slots; framed strands
/// cross each other (in pairs between distinct components, so linking
/// numbers stay integral) and pierce dotted disks.
pub fn random_kirby<R: Rng>(rng: &mut R, max_comps: usize, max_cross: usize) -> Diagram {
    let mut d = Diagram::new("fuzz");
    let n = rng.gen_range(1..=max_comps);
    let mut framed = Vec::new();
    let mut dotted = Vec::new();
    for i in 0..n {
        let id = format!("C{}", i + 1);
        let kind = if i > 0 && rng.gen_bool(0.35) { Kind::Dotted } else { Kind::Framed(rng.gen_range(-3..=3)) };
        if kind.is_dotted() { dotted.push(id.clone()) } else { framed.push(id.clone()) }
        d.components.insert(id, Component { kind, slots: vec![] });
    }
    let mut crossings = 0;
    while crossings < max_cross && rng.gen_bool(0.7) {
        let a = framed.choose(rng).unwrap().clone();
        let b = framed.choose(rng).unwrap().clone();
        if a == b {
            let s1 = random_insert(rng, &mut d, &a);
            let s2 = random_insert(rng, &mut d, &a);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            d.add_crossing(sign, s1, s2);
            crossings += 1;
        } else if crossings + 2 <= max_cross {
            for _ in 0..2 {
                let sa = random_insert(rng, &mut d, &a);
                let sb = random_insert(rng, &mut d, &b);
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                if rng.gen_bool(0.5) { d.add_crossing(sign, sa, sb) } else { d.add_crossing(sign, sb, sa) };
            }
            crossings += 2;
        } else {
            break;
        }
    }
    for dot in &dotted {
        for _ in 0..rng.gen_range(0..=2) {
            let k = framed.choose(rng).unwrap().clone();
            let s = random_insert(rng, &mut d, &k);
            d.add_piercing(dot, s, if rng.gen_bool(0.5) { 1 } else { -1 });
        }
    }
    assert!(d.is_valid(), "{:?}", d.validate());
    d
}

fn random_insert<R: Rng>(rng: &mut R, d: &mut Diagram, comp: &str) -> SlotRef {
    let slots = d.components[comp].slots.clone();
    let after = if slots.is_empty() || rng.gen_bool(0.2) { None } else { Some(slots.choose(rng).unwrap().clone()) };
    d.insert_slot(comp, after.as_deref())
}

fn random_anchor<R: Rng>(rng: &mut R, d: &Diagram, comp: &str) -> SlotRef {
    let slots = &d.components[comp].slots;
    match slots.choose(rng) {
        Some(s) if rng.gen_bool(0.8) => SlotRef::new(comp, s.clone()),
        _ => SlotRef::new(comp, "^"),
    }
}

fn sign<R: Rng>(rng: &mut R) -> i8 {
    if rng.gen_bool(0.5) {
        1
    } else {
        -1
    }
}

/// A random move that keeps the 4-manifold: local isotopies, handle slides
/// and (1,2)-pair creation/cancellation. Cancelling (2,3)-pairs is left out
/// because the open chain complex does not see 3-handles.
pub fn random_preserving_move<R: Rng>(rng: &mut R, d: &Diagram) -> Option<KirbyMove> {
    let framed = d.framed_ids();
    let dotted = d.dotted_ids();
    match rng.gen_range(0..7) {
        0 => rewrite_sites(d).choose(rng).cloned().map(KirbyMove::Isotopy),
        1 => annihilable_pairs(d).into_iter().find(|m| matches!(m, KirbyMove::Pair12Annihilate { .. })),
        2 => Some(KirbyMove::Pair12Create { framing: rng.gen_range(-2..=2) }),
        3 | 4 if framed.len() >= 2 => {
            let mut two: Vec<_> = framed.choose_multiple(rng, 2).cloned().collect();
            let (i, j) = (two.remove(0), two.remove(0));
            let band = SlideBand { from: random_anchor(rng, d, &i), to: random_anchor(rng, d, &j), orient: sign(rng), core: vec![] };
            Some(KirbyMove::Slide22 { i, j, band })
        }
        5 if !framed.is_empty() && !dotted.is_empty() => {
            let i = framed.choose(rng).unwrap().clone();
            let j = dotted.choose(rng).unwrap().clone();
            let band = SlideBand { from: random_anchor(rng, d, &i), to: SlotRef::new(&j, "^"), orient: sign(rng), core: vec![] };
            Some(KirbyMove::Slide21 { i, j, band })
        }
        6 if dotted.len() >= 2 => {
            let mut two: Vec<_> = dotted.choose_multiple(rng, 2).cloned().collect();
            Some(KirbyMove::Slide11 { i: two.remove(0), j: two.remove(0), orient: sign(rng) })
        }
        _ => {
            let c = d.components.keys().next()?.clone();
            let at = random_anchor(rng, d, &c);
            if at.slot == "^" {
                return None;
            }
            Some(KirbyMove::Isotopy(Rewrite::Curl { at, sign: sign(rng) }))
        }
    }
}

/// Homology H0..H4, abelianized π1 and Euler characteristic.
pub fn kirby_invariants(d: &Diagram) -> (Vec<AbelianGroup>, AbelianGroup, i64) {
    let h = homology_4manifold(d, false).expect("homology");
    let ab = abelianization(&pi1_presentation(d));
    let chi = euler_of(&h);
    (h, ab, chi)
}

/// Apply up to `steps` random preserving moves, skipping rejected ones.
/// Returns the final diagram and the applied moves.
pub fn random_walk<R: Rng>(rng: &mut R, d: &Diagram, steps: usize) -> (Diagram, Vec<KirbyMove>) {
    let mut cur = d.clone();
    let mut applied = Vec::new();
    for _ in 0..steps {
        let Some(m) = random_preserving_move(rng, &cur) else { continue };
        if let Ok(next) = apply_kirby(&cur, &m) {
            if next.event_count() > 60 {
                continue;
            }
            cur = next;
            applied.push(m);
        }
    }
    (cur, applied)
}
