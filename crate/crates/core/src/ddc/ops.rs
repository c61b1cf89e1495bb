use std::collections::{BTreeMap, BTreeSet};

use super::model::*;
use crate::invariants::IntMatrix;
use crate::{reject, Result};

impl Diagram {
    fn need(&self, c: &str) -> Result<Kind> {
        match self.kind(c) {
            Some(k) => Ok(k),
            None => reject(format!("component {c} absent")),
        }
    }

    /// Insert a fresh slot immediately before `at` on its component.
    pub fn insert_slot_before(&mut self, at: &SlotRef) -> SlotRef {
        let idx = self.slot_index(at).expect("slot exists");
        let prev = if idx == 0 { None } else { Some(self.components[&at.comp].slots[idx - 1].clone()) };
        self.insert_slot(&at.comp, prev.as_deref())
    }
}

/// Linking number of two distinct components. Between a dotted (or surface)
/// circle and a strand it is the signed count of piercings of the disk.
pub fn linking_number(d: &Diagram, i: &str, j: &str) -> Result<i64> {
    if i == j {
        return reject("linking number of a component with itself; use writhe");
    }
    let (ki, kj) = (d.need(i)?, d.need(j)?);
    if ki.is_dotted() && kj.is_dotted() {
        return reject("linking number between two dotted circles is undefined");
    }
    if ki.has_disk() && !kj.has_disk() {
        return Ok(d.piercing_sum(i, j));
    }
    if kj.has_disk() && !ki.has_disk() {
        return Ok(d.piercing_sum(j, i));
    }
    let s: i64 = d.crossings_between(i, j).iter().map(|(_, x)| x.sign as i64).sum();
    if s % 2 != 0 {
        return reject(format!("odd crossing sum between {i} and {j}"));
    }
    Ok(s / 2)
}

/// Symmetric matrix over framed components (id order): framings on the
/// diagonal, linking numbers off it.
pub fn linking_matrix(d: &Diagram) -> Result<IntMatrix> {
    let f = d.framed_ids();
    let mut m = IntMatrix::zeros(f.len(), f.len());
    for (a, i) in f.iter().enumerate() {
        m.set(a, a, d.kind(i).and_then(Kind::framing).unwrap());
        for (b, j) in f.iter().enumerate().skip(a + 1) {
            let l = linking_number(d, i, j)?;
            m.set(a, b, l);
            m.set(b, a, l);
        }
    }
    Ok(m)
}

/// Blackboard-parallel copy of `i` corrected by clasps so that
/// `lk(i, copy)` equals the framing of `i`. A dotted circle's copy is an
/// ordinary 0-framed curve encircling every strand through the disk, with
/// no clasps.
pub fn push_off(d: &Diagram, i: &str) -> Result<(Diagram, Id)> {
    push_off_mapped(d, i).map(|(o, c, _)| (o, c))
}

/// [`push_off`] together with the map from each slot of `i` to its
/// parallel slot on the copy.
pub fn push_off_mapped(d: &Diagram, i: &str) -> Result<(Diagram, Id, BTreeMap<Id, Id>)> {
    let kind = d.need(i)?;
    if kind.is_surface() {
        return reject(format!("push-off of surface component {i}"));
    }
    let mut out = d.clone();
    let copy = out.fresh_id(&format!("{i}p"));
    let copy_kind = match kind {
        Kind::Dotted => Kind::Framed(0),
        k => k,
    };
    out.components.insert(copy.clone(), Component { kind: copy_kind, slots: vec![] });
    let writhe = d.writhe(i);
    let slots = d.components[i].slots.clone();
    let mut done_self: BTreeSet<Id> = BTreeSet::new();
    // copy slot created for each original slot of i, in order
    let mut copy_of: BTreeMap<Id, Id> = BTreeMap::new();
    for s in &slots {
        let ns = out.push_slot(&copy);
        copy_of.insert(s.clone(), ns.slot);
    }
    for s in &slots {
        let r = SlotRef::new(i, s.clone());
        let cs = SlotRef::new(copy.clone(), copy_of[s].clone());
        match d.use_of(&r) {
            Some(SlotUse::Over(x)) | Some(SlotUse::Under(x)) => {
                let cr = d.crossings[&x].clone();
                let self_x = cr.over.comp == i && cr.under.comp == i;
                if self_x {
                    if !done_self.insert(x.clone()) {
                        continue;
                    }
                    // over pair (a1 on i, a1' on copy) crosses under pair (b1, b1')
                    let a1 = cr.over.clone();
                    let b1 = cr.under.clone();
                    let a1c = SlotRef::new(copy.clone(), copy_of[&a1.slot].clone());
                    let b1c = SlotRef::new(copy.clone(), copy_of[&b1.slot].clone());
                    let a2 = out.insert_slot(i, Some(&a1.slot));
                    let b2 = out.insert_slot(i, Some(&b1.slot));
                    let a2c = out.insert_slot(&copy, Some(&a1c.slot));
                    let b2c = out.insert_slot(&copy, Some(&b1c.slot));
                    out.add_crossing(cr.sign, a2, b1c);
                    out.add_crossing(cr.sign, a1c, b2);
                    out.add_crossing(cr.sign, a2c, b2c);
                } else {
                    let (other, i_over) = if cr.over == r { (cr.under.clone(), true) } else { (cr.over.clone(), false) };
                    let xs = out.insert_slot(&other.comp, Some(&other.slot));
                    if i_over {
                        out.add_crossing(cr.sign, cs, xs);
                    } else {
                        out.add_crossing(cr.sign, xs, cs);
                    }
                }
            }
            Some(SlotUse::Pierce(p)) => {
                let pi = d.piercings[&p].clone();
                out.add_piercing(&pi.disk, cs, pi.sign);
            }
            Some(SlotUse::BandCore(b, k)) => {
                let e = d.bands[&b].core[k].clone();
                let ne = match e {
                    CoreEvent::Over { sign, .. } => CoreEvent::Over { at: cs, sign },
                    CoreEvent::Under { sign, .. } => CoreEvent::Under { at: cs, sign },
                    CoreEvent::Pierce { .. } => unreachable!(),
                };
                let core = &mut out.bands.get_mut(&b).unwrap().core;
                let pos = core.iter().position(|x| x.slot() == Some(&r)).unwrap();
                core.insert(pos + 1, ne);
            }
            _ => return reject(format!("slot {r} cannot be pushed off")),
        }
    }
    if kind.is_dotted() {
        // the copy encircles each strand through the disk: over on the way
        // out, under on the way back
        let ps: Vec<Piercing> = d.piercings.values().filter(|p| p.disk == i).cloned().collect();
        let mut back = Vec::new();
        for p in &ps {
            let t1 = out.insert_slot_before(&p.strand);
            let c1 = out.push_slot(&copy);
            out.add_crossing(p.sign, c1, t1);
            back.push(p.clone());
        }
        for p in back.iter().rev() {
            let t2 = out.insert_slot(&p.strand.comp, Some(&p.strand.slot));
            let c2 = out.push_slot(&copy);
            out.add_crossing(p.sign, t2, c2);
        }
    } else {
        let m = kind.framing().unwrap();
        let n = m - writhe;
        let sg: i8 = if n >= 0 { 1 } else { -1 };
        for _ in 0..n.abs() {
            let e1 = out.push_slot(i);
            let e2 = out.push_slot(i);
            let f1 = out.push_slot(&copy);
            let f2 = out.push_slot(&copy);
            out.add_crossing(sg, e1, f1);
            out.add_crossing(sg, f2, e2);
        }
    }
    Ok((out, copy, copy_of))
}

/// Unused slot name on `comp` avoiding `extra`.
fn fresh_name(d: &Diagram, comp: &str, extra: &BTreeSet<Id>, stem: &str) -> Id {
    let c = &d.components[comp];
    (1..)
        .map(|n| format!("{stem}{n}"))
        .find(|s| !c.slots.contains(s) && !extra.contains(s))
        .unwrap()
}

/// Resolve the listed bands one at a time. Each attachment slot is cut and
/// the strand reconnected along the two band edges; core events become
/// crossings or piercings of both edges and half twists become crossings
/// between the edges.
pub fn band_surgery(d: &Diagram, bands: &[Id]) -> Result<Diagram> {
    let mut out = d.clone();
    for b in bands {
        if !out.bands.contains_key(b) {
            return reject(format!("band {b} not present"));
        }
    }
    for bid in bands {
        let band = out.bands.remove(bid).unwrap();
        let (c1, c2) = (band.from.comp.clone(), band.to.comp.clone());
        for c in [&c1, &c2] {
            if out.kind(c) != Some(Kind::Surface) {
                return reject(format!("band off surface link: band {bid} end on {c}"));
            }
        }
        // Split each crossed strand slot into one slot per edge.
        let mut reserved: BTreeSet<Id> = BTreeSet::new();
        let mut pending_x: Vec<(i8, bool, SlotRef, SlotRef)> = Vec::new(); // sign, edge_over, edge slot, strand slot
        let mut pending_p: Vec<(Id, SlotRef, i8)> = Vec::new();
        let mut a_slots = Vec::new();
        let mut b_slots = Vec::new();
        let host = c1.clone();
        let take = |out: &Diagram, reserved: &mut BTreeSet<Id>, stem: &str| {
            let mut ex = reserved.clone();
            ex.extend(out.components[&c2].slots.iter().cloned());
            let n = fresh_name(out, &host, &ex, stem);
            reserved.insert(n.clone());
            n
        };
        for e in &band.core {
            let sa = take(&out, &mut reserved, &format!("{bid}a"));
            let sb = take(&out, &mut reserved, &format!("{bid}b"));
            match e {
                CoreEvent::Over { at, sign } | CoreEvent::Under { at, sign } => {
                    let over = matches!(e, CoreEvent::Over { .. });
                    let xa = out.insert_slot_before(at);
                    let xb = out.insert_slot_before(at);
                    out.remove_slot(at);
                    pending_x.push((*sign, over, SlotRef::new(host.clone(), sa.clone()), xa));
                    pending_x.push((-*sign, over, SlotRef::new(host.clone(), sb.clone()), xb));
                }
                CoreEvent::Pierce { disk, sign } => {
                    pending_p.push((disk.clone(), SlotRef::new(host.clone(), sa.clone()), *sign));
                    pending_p.push((disk.clone(), SlotRef::new(host.clone(), sb.clone()), -*sign));
                }
            }
            a_slots.push(sa);
            b_slots.push(sb);
        }
        let tsign: i8 = if band.twists >= 0 { 1 } else { -1 };
        let mut ta = Vec::new();
        let mut tb = Vec::new();
        for _ in 0..band.twists.unsigned_abs() {
            ta.push(take(&out, &mut reserved, &format!("{bid}t")));
            tb.push(take(&out, &mut reserved, &format!("{bid}u")));
        }
        let mut seq_a: Vec<Id> = a_slots.clone();
        seq_a.extend(ta.iter().cloned());
        let mut seq_b: Vec<Id> = tb.iter().rev().cloned().collect();
        seq_b.extend(b_slots.iter().rev().cloned());

        let mut moved: Vec<(SlotRef, SlotRef)> = Vec::new();
        if c1 != c2 {
            let l1 = out.components[&c1].slots.clone();
            let l2 = out.components[&c2].slots.clone();
            let p1 = l1.iter().position(|s| *s == band.from.slot).unwrap();
            let p2 = l2.iter().position(|s| *s == band.to.slot).unwrap();
            let mut names: BTreeSet<Id> = l1.iter().cloned().collect();
            names.extend(reserved.iter().cloned());
            let mut l2new = Vec::new();
            for s in l2[p2 + 1..].iter().chain(l2[..p2].iter()) {
                let n = if names.contains(s) {
                    let mut k = 1;
                    loop {
                        let cand = format!("{s}m{k}");
                        if !names.contains(&cand) && !l2.contains(&cand) {
                            break cand;
                        }
                        k += 1;
                    }
                } else {
                    s.clone()
                };
                names.insert(n.clone());
                moved.push((SlotRef::new(c2.clone(), s.clone()), SlotRef::new(c1.clone(), n.clone())));
                l2new.push(n);
            }
            let mut new = Vec::new();
            new.extend(l1[p1 + 1..].iter().cloned());
            new.extend(l1[..p1].iter().cloned());
            new.extend(seq_a.iter().cloned());
            new.extend(l2new);
            new.extend(seq_b.iter().cloned());
            out.components.get_mut(&c1).unwrap().slots = new;
            out.components.remove(&c2);
            for (o, n) in &moved {
                out.move_slot_ref(o, n);
            }
            for p in out.piercings.values_mut() {
                if p.disk == c2 {
                    p.disk = c1.clone();
                }
            }
            for bb in out.bands.values_mut() {
                for e in bb.core.iter_mut() {
                    if let CoreEvent::Pierce { disk, .. } = e {
                        if *disk == c2 {
                            *disk = c1.clone();
                        }
                    }
                }
            }
            for (_, _, _, xs) in pending_x.iter_mut() {
                if let Some((_, n)) = moved.iter().find(|(o, _)| o == xs) {
                    *xs = n.clone();
                }
            }
            for (disk, _, _) in pending_p.iter_mut() {
                if *disk == c2 {
                    *disk = c1.clone();
                }
            }
        } else {
            let l = out.components[&c1].slots.clone();
            let pf = l.iter().position(|s| *s == band.from.slot).unwrap();
            let rot: Vec<Id> = l[pf..].iter().chain(l[..pf].iter()).cloned().collect();
            let pt = rot.iter().position(|s| *s == band.to.slot).unwrap();
            let x_arc: Vec<Id> = rot[1..pt].to_vec();
            let y_arc: Vec<Id> = rot[pt + 1..].to_vec();
            let c3 = out.fresh_id(&format!("{c1}f"));
            let mut first = x_arc.clone();
            first.extend(seq_b.iter().cloned());
            let mut second = y_arc.clone();
            second.extend(seq_a.iter().cloned());
            out.components.get_mut(&c1).unwrap().slots = first;
            out.components.insert(c3.clone(), Component { kind: Kind::Surface, slots: second.clone() });
            for s in &y_arc {
                moved.push((SlotRef::new(c1.clone(), s.clone()), SlotRef::new(c3.clone(), s.clone())));
            }
            for (o, n) in &moved {
                out.move_slot_ref(o, n);
            }
            for (_, _, es, xs) in pending_x.iter_mut() {
                if seq_a.contains(&es.slot) {
                    es.comp = c3.clone();
                }
                if let Some((_, n)) = moved.iter().find(|(o, _)| o == xs) {
                    *xs = n.clone();
                }
            }
            for (_, es, _) in pending_p.iter_mut() {
                if seq_a.contains(&es.slot) {
                    es.comp = c3.clone();
                }
            }
            // twist crossings: edge A slots live on c3
            for (a, b) in ta.iter().zip(tb.iter()) {
                out.add_crossing(tsign, SlotRef::new(c3.clone(), a.clone()), SlotRef::new(c1.clone(), b.clone()));
            }
            for (sign, over, es, xs) in pending_x {
                if over {
                    out.add_crossing(sign, es, xs);
                } else {
                    out.add_crossing(sign, xs, es);
                }
            }
            for (disk, es, sign) in pending_p {
                out.add_piercing(&disk, es, sign);
            }
            continue;
        }
        for (a, b) in ta.iter().zip(tb.iter()) {
            out.add_crossing(tsign, SlotRef::new(c1.clone(), a.clone()), SlotRef::new(c1.clone(), b.clone()));
        }
        for (sign, over, es, xs) in pending_x {
            if over {
                out.add_crossing(sign, es, xs);
            } else {
                out.add_crossing(sign, xs, es);
            }
        }
        for (disk, es, sign) in pending_p {
            out.add_piercing(&disk, es, sign);
        }
    }
    Ok(out)
}

/// Replace every vertex by a crossing: the marked strand passes over on the
/// positive side and under on the negative side.
pub fn resolve_vertices(d: &Diagram, positive: bool) -> Diagram {
    let mut out = d.clone();
    let vs = std::mem::take(&mut out.vertices);
    for (_, v) in vs {
        let a_over = matches!(v.marking, Marking::Ac) == positive;
        let sign = if positive { v.sign } else { -v.sign };
        if a_over {
            out.add_crossing(sign, v.a, v.b);
        } else {
            out.add_crossing(sign, v.b, v.a);
        }
    }
    out
}

fn surface_count(d: &Diagram) -> i64 {
    d.components.values().filter(|c| c.kind.is_surface()).count() as i64
}

/// `|L⁻| − |B| + |L⁺_B|` over the surface components.
pub fn surface_euler_characteristic(d: &Diagram) -> Result<i64> {
    let minus = resolve_vertices(d, false);
    let plus = resolve_vertices(d, true);
    let all: Vec<Id> = sorted_ids(plus.bands.keys());
    let lb = band_surgery(&plus, &all)?;
    Ok(surface_count(&minus) - d.bands.len() as i64 + surface_count(&lb))
}

/// Place two codes side by side, renaming ids of the second that clash.
/// Returns the union and the component renaming applied to `d2`.
pub fn disjoint_union_map(d1: &Diagram, d2: &Diagram) -> (Diagram, BTreeMap<Id, Id>) {
    let mut out = d1.clone();
    let mut d2 = d2.clone();
    let mut map = BTreeMap::new();
    for c in sorted_ids(d2.components.keys()) {
        let mut n = c.clone();
        if out.components.contains_key(&n) || out.bands.contains_key(&n) || out.vertices.contains_key(&n) {
            let mut probe = out.clone();
            probe.components.extend(d2.components.iter().map(|(k, v)| (k.clone(), v.clone())));
            n = probe.fresh_id(&format!("{c}u"));
        }
        if n != c {
            d2.rename_component(&c, &n);
        }
        map.insert(c, n);
    }
    for (_, x) in std::mem::take(&mut d2.crossings) {
        let id = out.fresh_id("X");
        out.crossings.insert(id, x);
    }
    for (_, p) in std::mem::take(&mut d2.piercings) {
        let id = out.fresh_id("P");
        out.piercings.insert(id, p);
    }
    for (id, b) in std::mem::take(&mut d2.bands) {
        let nid = if out.bands.contains_key(&id) || out.components.contains_key(&id) || d2.components.contains_key(&id) {
            out.fresh_id("B")
        } else {
            id
        };
        out.bands.insert(nid, b);
    }
    for (id, v) in std::mem::take(&mut d2.vertices) {
        let nid = if out.vertices.contains_key(&id) || out.components.contains_key(&id) || d2.components.contains_key(&id) {
            out.fresh_id("V")
        } else {
            id
        };
        out.vertices.insert(nid, v);
    }
    out.components.extend(d2.components);
    out.r3 += d2.r3;
    out.resolutions_trivial = match (d1.resolutions_trivial, d2.resolutions_trivial) {
        (None, None) => None,
        (a, b) => Some(a.unwrap_or(true) && b.unwrap_or(true)),
    };
    (out, map)
}

pub fn disjoint_union(d1: &Diagram, d2: &Diagram) -> Diagram {
    disjoint_union_map(d1, d2).0
}

/// Union of two banded unlinks plus one untwisted band joining `c1` to
/// (the renamed) `c2`.
pub fn pair_connected_sum(b1: &Diagram, c1: &str, b2: &Diagram, c2: &str) -> Result<Diagram> {
    for (d, c) in [(b1, c1), (b2, c2)] {
        if d.kind(c) != Some(Kind::Surface) {
            return reject(format!("component {c} is not a surface component"));
        }
    }
    let (mut out, map) = disjoint_union_map(b1, b2);
    let c2n = map[c2].clone();
    let from = out.push_slot(c1);
    let to = out.push_slot(&c2n);
    let id = out.fresh_id("B");
    out.bands.insert(id, Band { from, to, twists: 0, core: vec![] });
    Ok(out)
}
