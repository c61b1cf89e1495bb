//! Moves on Heegaard diagrams.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::HeegaardDiagram;
use crate::args::{syntax, Args};
use crate::band::{apply_band, applicable_band_moves, BandMove};
use crate::ddc::{
    core_event_text, group_items, parse_core_event, sorted_ids, Band, Component, CoreEvent, Diagram, Id, Kind, Side,
    SlotRef, SlotUse, Vertex,
};
use crate::kirby::{anchor, annihilable_pairs, apply_kirby, KirbyMove};
use crate::{reject, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeegaardMove {
    /// A banded-unlink move confined to one side.
    IsotopySide { side: Side, mv: BandMove },
    /// Slide sphere `i` over sphere `j` of the same side. A parallel copy
    /// of `j` is tubed to `i` along a long band and a rainbow band with
    /// the given core; `parity` picks one of the two tubes.
    Slide { side: Side, i: Id, j: Id, from: SlotRef, to: SlotRef, parity: u8, core: Vec<CoreEvent> },
    Stab1,
    Stab2,
    Stab3,
    Destab1 { c: Id },
    Destab2 { alpha: Id, beta: Id },
    Destab3 { c: Id },
    /// A Kirby move of the base, carried across the surface circles.
    Base(KirbyMove),
}

fn parse_side(v: &str) -> Result<Side> {
    match v {
        "alpha" => Ok(Side::Alpha),
        "beta" => Ok(Side::Beta),
        _ => syntax(format!("bad side `{v}`")),
    }
}

impl HeegaardMove {
    pub fn kind_name(&self) -> &'static str {
        match self {
            HeegaardMove::IsotopySide { .. } => "IsotopySide",
            HeegaardMove::Slide { side: Side::Alpha, .. } => "SlideAlpha",
            HeegaardMove::Slide { side: Side::Beta, .. } => "SlideBeta",
            HeegaardMove::Stab1 => "Stab1",
            HeegaardMove::Stab2 => "Stab2",
            HeegaardMove::Stab3 => "Stab3",
            HeegaardMove::Destab1 { .. } => "Destab1",
            HeegaardMove::Destab2 { .. } => "Destab2",
            HeegaardMove::Destab3 { .. } => "Destab3",
            HeegaardMove::Base(_) => "BaseKirby",
        }
    }

    /// Parse the words after `heegaard`.
    pub fn parse(text: &str) -> Result<HeegaardMove> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("kirby ") {
            return Ok(HeegaardMove::Base(KirbyMove::parse(rest)?));
        }
        if let Some(rest) = t.strip_prefix("isotopy ") {
            let mut side = None;
            let mut words = Vec::new();
            for w in rest.split_whitespace() {
                match w.strip_prefix("side=") {
                    Some(v) if side.is_none() => side = Some(parse_side(v)?),
                    _ => words.push(w),
                }
            }
            let Some(side) = side else { return syntax("missing `side=`") };
            return Ok(HeegaardMove::IsotopySide { side, mv: BandMove::parse(&words.join(" "))? });
        }
        let a = Args::parse(t);
        let w: Vec<&str> = a.pos.iter().map(String::as_str).collect();
        let id = |k: &str| a.req(k).map(str::to_string);
        Ok(match w.as_slice() {
            ["slide"] => {
                let mut core = Vec::new();
                if let Some(c) = a.get("core") {
                    let Some(items) = group_items(c) else { return syntax("core must be `( ... )`") };
                    for it in items {
                        match parse_core_event(&it) {
                            Some(e) => core.push(e),
                            None => return syntax(format!("bad core event `{it}`")),
                        }
                    }
                }
                let parity = match a.int_or("parity", 0)? {
                    0 => 0,
                    1 => 1,
                    p => return syntax(format!("parity must be 0 or 1, got {p}")),
                };
                HeegaardMove::Slide {
                    side: parse_side(a.req("side")?)?,
                    i: id("i")?,
                    j: id("j")?,
                    from: a.slot("from")?,
                    to: a.slot("to")?,
                    parity,
                    core,
                }
            }
            ["stab1"] => HeegaardMove::Stab1,
            ["stab2"] => HeegaardMove::Stab2,
            ["stab3"] => HeegaardMove::Stab3,
            ["destab1"] => HeegaardMove::Destab1 { c: id("c")? },
            ["destab2"] => HeegaardMove::Destab2 { alpha: id("a")?, beta: id("b")? },
            ["destab3"] => HeegaardMove::Destab3 { c: id("c")? },
            _ => return syntax(format!("unknown heegaard move `{t}`")),
        })
    }
}

impl fmt::Display for HeegaardMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "heegaard ")?;
        match self {
            HeegaardMove::IsotopySide { side, mv } => {
                let s = mv.to_string();
                write!(f, "isotopy side={} {}", side.name(), s.strip_prefix("band ").unwrap_or(&s))
            }
            HeegaardMove::Slide { side, i, j, from, to, parity, core } => {
                write!(f, "slide side={} i={i} j={j} from={from} to={to} parity={parity} core=(", side.name())?;
                for e in core {
                    write!(f, " {}", core_event_text(e))?;
                }
                write!(f, " )")
            }
            HeegaardMove::Stab1 => write!(f, "stab1"),
            HeegaardMove::Stab2 => write!(f, "stab2"),
            HeegaardMove::Stab3 => write!(f, "stab3"),
            HeegaardMove::Destab1 { c } => write!(f, "destab1 c={c}"),
            HeegaardMove::Destab2 { alpha, beta } => write!(f, "destab2 a={alpha} b={beta}"),
            HeegaardMove::Destab3 { c } => write!(f, "destab3 c={c}"),
            HeegaardMove::Base(m) => {
                let s = m.to_string();
                write!(f, "kirby {}", s.strip_prefix("kirby ").unwrap_or(&s))
            }
        }
    }
}

/// Drop side entries of deleted components and give new surface
/// components the side `fresh`.
fn resync(mut h: HeegaardDiagram, fresh: Option<Side>) -> Result<HeegaardDiagram> {
    let d = &h.diagram;
    h.sides.retain(|c, _| d.components.contains_key(c));
    for c in d.surface_ids() {
        if !h.sides.contains_key(&c) {
            match fresh {
                Some(s) => {
                    h.sides.insert(c, s);
                }
                None => return reject(format!("move created surface component {c} outside both sides")),
            }
        }
    }
    Ok(h)
}

fn band_side(h: &HeegaardDiagram, m: &BandMove) -> Option<Side> {
    let band = match m {
        BandMove::IsotopyLocal(_) => return None,
        BandMove::Cup { on } => return h.sides.get(&on.comp).copied(),
        BandMove::Cap { band }
        | BandMove::BandSlide { band, .. }
        | BandMove::BandSwim { band, .. }
        | BandMove::BandHandleSlide { band, .. }
        | BandMove::BandHandleSwim { band, .. }
        | BandMove::DottedSlide { band, .. }
        | BandMove::VertexBandSlide { band, .. }
        | BandMove::VertexBandSwim { band, .. }
        | BandMove::VertexBandPass { band, .. } => band,
    };
    h.diagram.bands.get(band).and_then(|b| h.sides.get(&b.from.comp).copied())
}

fn bare(d: &Diagram, c: &str) -> bool {
    d.components[c].slots.is_empty()
        && !d.piercings.values().any(|p| p.disk == c)
        && !d.bands.values().any(|b| b.core.iter().any(|e| matches!(e, CoreEvent::Pierce { disk, .. } if disk == c)))
}

fn fresh_surface(h: &mut HeegaardDiagram, prefix: &str, side: Side) -> Id {
    let c = h.diagram.fresh_id(prefix);
    h.diagram.components.insert(c.clone(), Component { kind: Kind::Surface, slots: vec![] });
    h.sides.insert(c.clone(), side);
    c
}

/// The circle `c` on `side`, alone in its sphere with nothing attached.
fn check_lone(h: &HeegaardDiagram, c: &str, side: Side) -> Result<()> {
    if h.sides.get(c) != Some(&side) {
        return reject(format!("{c} is not a {} circle", side.name()));
    }
    if !bare(&h.diagram, c) {
        return reject(format!("{c} is not a split unknot"));
    }
    Ok(())
}

fn bump(v: Option<u32>, up: bool) -> Result<Option<u32>> {
    match (v, up) {
        (None, _) => Ok(None),
        (Some(x), true) => Ok(Some(x + 1)),
        (Some(0), false) => reject("asserted count is already 0"),
        (Some(x), false) => Ok(Some(x - 1)),
    }
}

fn check_destab2(h: &HeegaardDiagram, a: &str, b: &str) -> Result<(Id, Id)> {
    let d = &h.diagram;
    if h.sides.get(a) != Some(&Side::Alpha) || h.sides.get(b) != Some(&Side::Beta) {
        return reject(format!("{a} must be an α circle and {b} a β circle"));
    }
    let bad = || reject(format!("{a} and {b} do not form a cancelling stabilization"));
    for c in [a, b] {
        let slots = &d.components[c].slots;
        if slots.len() != 1 {
            return bad();
        }
    }
    let va = SlotRef::new(a, d.components[a].slots[0].clone());
    let vb = SlotRef::new(b, d.components[b].slots[0].clone());
    match (d.use_of(&va), d.use_of(&vb)) {
        (Some(SlotUse::VertexA(x)), Some(SlotUse::VertexB(y))) | (Some(SlotUse::VertexB(x)), Some(SlotUse::VertexA(y)))
            if x == y => {}
        _ => return bad(),
    }
    let mut partners = Vec::new();
    for c in [a, b] {
        let ps: Vec<_> = d.piercings.values().filter(|p| p.disk == c).collect();
        if ps.len() != 1 || d.bands.values().any(|bd| bd.core.iter().any(|e| matches!(e, CoreEvent::Pierce { disk, .. } if disk == c))) {
            return bad();
        }
        partners.push(ps[0].strand.comp.clone());
    }
    let (ka, kb) = (partners[0].clone(), partners[1].clone());
    if ka == kb || d.kind(&ka) != Some(Kind::Framed(0)) || d.kind(&kb) != Some(Kind::Framed(0)) {
        return bad();
    }
    let xs = d.crossings_between(&ka, &kb);
    if xs.len() != 2 || xs[0].1.sign != xs[1].1.sign {
        return bad();
    }
    if d.components[&ka].slots.len() != 3 || d.components[&kb].slots.len() != 3 {
        return bad();
    }
    Ok((ka, kb))
}

/// Parallel copy of the sphere containing `j`, with every intersection and
/// crossing duplicated; signs are multiplied by `flip`. Returns the
/// diagram, the circle map and, per circle, the slot map.
#[allow(clippy::type_complexity)]
fn copy_sphere(
    h: &HeegaardDiagram,
    side: Side,
    j: &str,
    flip: i8,
) -> Result<(HeegaardDiagram, BTreeMap<Id, Id>, BTreeMap<Id, BTreeMap<Id, Id>>)> {
    let group: Vec<Id> = h.spheres(side).into_iter().find(|g| g.iter().any(|c| c == j)).unwrap();
    let d = &h.diagram;
    let own_bands: Vec<Id> = sorted_ids(d.bands.iter().filter(|(_, b)| group.contains(&b.from.comp)).map(|(k, _)| k));
    let in_group = |c: &str| group.iter().any(|g| g == c);
    let mut out = h.clone();
    let mut cmap = BTreeMap::new();
    let mut smap: BTreeMap<Id, BTreeMap<Id, Id>> = BTreeMap::new();
    for c in &group {
        let cp = out.diagram.fresh_id(&format!("{c}p"));
        out.diagram.components.insert(cp.clone(), Component { kind: Kind::Surface, slots: vec![] });
        out.sides.insert(cp.clone(), side);
        let mut m = BTreeMap::new();
        for s in &d.components[c].slots {
            m.insert(s.clone(), out.diagram.push_slot(&cp).slot);
        }
        cmap.insert(c.clone(), cp);
        smap.insert(c.clone(), m);
    }
    let unsupported = || reject(format!("sphere of {j} meets itself; slide it apart first"));
    for c in &group {
        let cp = cmap[c].clone();
        for s in &d.components[c].slots {
            let r = SlotRef::new(c.clone(), s.clone());
            let cs = SlotRef::new(cp.clone(), smap[c][s].clone());
            match d.use_of(&r) {
                Some(SlotUse::Over(x)) | Some(SlotUse::Under(x)) => {
                    let cr = &d.crossings[&x];
                    let other = if cr.over == r { &cr.under } else { &cr.over };
                    if in_group(&other.comp) {
                        return unsupported();
                    }
                    let t = out.diagram.insert_slot(&other.comp, Some(&other.slot));
                    if cr.over == r {
                        out.diagram.add_crossing(cr.sign * flip, cs, t);
                    } else {
                        out.diagram.add_crossing(cr.sign * flip, t, cs);
                    }
                }
                Some(SlotUse::Pierce(p)) => {
                    let pi = d.piercings[&p].clone();
                    if in_group(&pi.disk) {
                        return unsupported();
                    }
                    out.diagram.add_piercing(&pi.disk, cs, pi.sign * flip);
                }
                Some(SlotUse::BandCore(b, _)) => {
                    if own_bands.contains(&b) {
                        return unsupported();
                    }
                    let core = &mut out.diagram.bands.get_mut(&b).unwrap().core;
                    let pos = core.iter().position(|e| e.slot() == Some(&r)).unwrap();
                    let ne = match &core[pos] {
                        CoreEvent::Over { sign, .. } => CoreEvent::Over { at: cs, sign: sign * flip },
                        CoreEvent::Under { sign, .. } => CoreEvent::Under { at: cs, sign: sign * flip },
                        CoreEvent::Pierce { .. } => unreachable!(),
                    };
                    core.insert(pos + 1, ne);
                }
                Some(SlotUse::VertexA(v)) | Some(SlotUse::VertexB(v)) => {
                    let vx = d.vertices[&v].clone();
                    let is_a = vx.a == r;
                    let other = if is_a { &vx.b } else { &vx.a };
                    let t = out.diagram.insert_slot(&other.comp, Some(&other.slot));
                    let (a, b) = if is_a { (cs, t) } else { (t, cs) };
                    let id = out.diagram.fresh_id("V");
                    out.diagram.vertices.insert(id, Vertex { a, b, sign: vx.sign * flip, marking: vx.marking });
                }
                Some(SlotUse::BandFrom(_)) | Some(SlotUse::BandTo(_)) => {}
                None => return reject(format!("slot {r} is unused")),
            }
        }
        for p in d.piercings.values().filter(|p| p.disk == *c) {
            if in_group(&p.strand.comp) {
                return unsupported();
            }
            let t = out.diagram.insert_slot(&p.strand.comp, Some(&p.strand.slot));
            out.diagram.add_piercing(&cp, t, p.sign * flip);
        }
        for (bid, b) in &d.bands {
            if b.core.iter().any(|e| matches!(e, CoreEvent::Pierce { disk, .. } if disk == c)) {
                if own_bands.contains(bid) {
                    return unsupported();
                }
                let core = &mut out.diagram.bands.get_mut(bid).unwrap().core;
                let mut k = 0;
                while k < core.len() {
                    if let CoreEvent::Pierce { disk, sign } = &core[k] {
                        if disk == c {
                            let ne = CoreEvent::Pierce { disk: cp.clone(), sign: sign * flip };
                            core.insert(k + 1, ne);
                            k += 1;
                        }
                    }
                    k += 1;
                }
            }
        }
    }
    for bid in &own_bands {
        let b = &d.bands[bid];
        let from = SlotRef::new(cmap[&b.from.comp].clone(), smap[&b.from.comp][&b.from.slot].clone());
        let to = SlotRef::new(cmap[&b.to.comp].clone(), smap[&b.to.comp][&b.to.slot].clone());
        let mut core = Vec::new();
        for e in &b.core {
            core.push(match e {
                CoreEvent::Over { at, sign } | CoreEvent::Under { at, sign } => {
                    if in_group(&at.comp) {
                        return unsupported();
                    }
                    let t = out.diagram.insert_slot(&at.comp, Some(&at.slot));
                    if matches!(e, CoreEvent::Over { .. }) {
                        CoreEvent::Over { at: t, sign: sign * flip }
                    } else {
                        CoreEvent::Under { at: t, sign: sign * flip }
                    }
                }
                CoreEvent::Pierce { disk, sign } => {
                    if in_group(disk) {
                        return unsupported();
                    }
                    CoreEvent::Pierce { disk: disk.clone(), sign: sign * flip }
                }
            });
        }
        let nid = out.diagram.fresh_id("B");
        out.diagram.bands.insert(nid, Band { from, to, twists: b.twists, core });
    }
    Ok((out, cmap, smap))
}

#[allow(clippy::too_many_arguments)]
fn slide_sphere(
    h: &HeegaardDiagram,
    side: Side,
    i: &str,
    j: &str,
    from: &SlotRef,
    to: &SlotRef,
    parity: u8,
    core: &[CoreEvent],
) -> Result<HeegaardDiagram> {
    for c in [i, j] {
        if h.sides.get(c) != Some(&side) {
            return reject(format!("{c} is not a {} circle", side.name()));
        }
    }
    let sj = h.spheres(side).into_iter().find(|g| g.iter().any(|c| c == j)).unwrap();
    if sj.iter().any(|c| c == i) {
        return reject(format!("{i} and {j} lie on the same sphere"));
    }
    if from.comp != i || to.comp != j {
        return reject(format!("band must run from {i} to {j}"));
    }
    let d = &h.diagram;
    anchor(d, from)?;
    anchor(d, to)?;
    for e in core {
        match e {
            CoreEvent::Pierce { disk, .. } => {
                if sj.contains(disk) {
                    return reject(format!("band core meets the sphere of {j}"));
                }
                match d.kind(disk) {
                    Some(k) if k.has_disk() => {}
                    _ => return reject(format!("band core pierces non-disk {disk}")),
                }
            }
            _ => {
                let at = e.slot().unwrap();
                if sj.contains(&at.comp) {
                    return reject(format!("band core meets the sphere of {j}"));
                }
                anchor(d, at)?;
            }
        }
    }
    let flip: i8 = if parity == 0 { 1 } else { -1 };
    let (mut out, cmap, smap) = copy_sphere(h, side, j, flip)?;
    let jp = cmap[j].clone();
    let od = &mut out.diagram;
    let f1 = od.insert_slot(i, anchor(d, from)?.as_deref());
    let f2 = od.insert_slot(i, Some(&f1.slot));
    let to_after = anchor(d, to)?.map(|s| smap[j][&s].clone());
    let t1 = od.insert_slot(&jp, to_after.as_deref());
    let t2 = od.insert_slot_before(&t1);
    let mut c1 = Vec::new();
    let mut c2 = Vec::new();
    for e in core {
        match e {
            CoreEvent::Over { at, sign } | CoreEvent::Under { at, sign } => {
                let s1 = od.insert_slot(&at.comp, anchor(d, at)?.as_deref());
                let s2 = od.insert_slot(&at.comp, Some(&s1.slot));
                if matches!(e, CoreEvent::Over { .. }) {
                    c1.push(CoreEvent::Over { at: s1, sign: *sign });
                    c2.push(CoreEvent::Over { at: s2, sign: *sign });
                } else {
                    c1.push(CoreEvent::Under { at: s1, sign: *sign });
                    c2.push(CoreEvent::Under { at: s2, sign: *sign });
                }
            }
            CoreEvent::Pierce { .. } => {
                c1.push(e.clone());
                c2.push(e.clone());
            }
        }
    }
    let tw = parity as i64;
    let b1 = od.fresh_id("B");
    od.bands.insert(b1, Band { from: f1, to: t1, twists: tw, core: c1 });
    let b2 = od.fresh_id("B");
    od.bands.insert(b2, Band { from: f2, to: t2, twists: tw, core: c2 });
    Ok(out)
}

pub fn apply_heegaard(h: &HeegaardDiagram, m: &HeegaardMove) -> Result<HeegaardDiagram> {
    match m {
        HeegaardMove::Base(km) => {
            let mut out = h.clone();
            out.diagram = apply_kirby(&h.diagram, km)?;
            resync(out, None)
        }
        HeegaardMove::IsotopySide { side, mv } => {
            if let Some(s) = band_side(h, mv) {
                if s != *side {
                    return reject(format!("move acts on the {} side", s.name()));
                }
            } else if !matches!(mv, BandMove::IsotopyLocal(_)) {
                return reject(format!("move does not act on the {} side", side.name()));
            }
            let mut out = h.clone();
            out.diagram = apply_band(&h.diagram, mv)?;
            resync(out, Some(*side))
        }
        HeegaardMove::Slide { side, i, j, from, to, parity, core } => {
            slide_sphere(h, *side, i, j, from, to, *parity, core)
        }
        HeegaardMove::Stab1 => {
            let mut out = h.clone();
            fresh_surface(&mut out, "a", Side::Alpha);
            out.asserted_k = bump(h.asserted_k, true)?;
            Ok(out)
        }
        HeegaardMove::Stab3 => {
            let mut out = h.clone();
            fresh_surface(&mut out, "b", Side::Beta);
            out.asserted_r = bump(h.asserted_r, true)?;
            Ok(out)
        }
        HeegaardMove::Stab2 => {
            let mut out = h.clone();
            let a = fresh_surface(&mut out, "a", Side::Alpha);
            let b = fresh_surface(&mut out, "b", Side::Beta);
            let d = &mut out.diagram;
            let ka = d.fresh_id("H");
            d.components.insert(ka.clone(), Component { kind: Kind::Framed(0), slots: vec![] });
            let kb = d.fresh_id("H");
            d.components.insert(kb.clone(), Component { kind: Kind::Framed(0), slots: vec![] });
            let (x1, y1) = (d.push_slot(&ka), d.push_slot(&kb));
            d.add_crossing(1, x1, y1);
            let (x2, y2) = (d.push_slot(&ka), d.push_slot(&kb));
            d.add_crossing(1, y2, x2);
            let s = d.push_slot(&ka);
            d.add_piercing(&a, s, 1);
            let s = d.push_slot(&kb);
            d.add_piercing(&b, s, 1);
            let va = d.push_slot(&a);
            let vb = d.push_slot(&b);
            let v = d.fresh_id("V");
            d.vertices.insert(v, Vertex { a: va, b: vb, sign: 1, marking: crate::ddc::Marking::Ac });
            Ok(out)
        }
        HeegaardMove::Destab1 { c } | HeegaardMove::Destab3 { c } => {
            let side = if matches!(m, HeegaardMove::Destab1 { .. }) { Side::Alpha } else { Side::Beta };
            check_lone(h, c, side)?;
            let mut out = h.clone();
            out.diagram.delete_component(c);
            out.sides.remove(c);
            if side == Side::Alpha {
                out.asserted_k = bump(h.asserted_k, false)?;
            } else {
                out.asserted_r = bump(h.asserted_r, false)?;
            }
            Ok(out)
        }
        HeegaardMove::Destab2 { alpha, beta } => {
            let (ka, kb) = check_destab2(h, alpha, beta)?;
            let mut out = h.clone();
            for c in [alpha, beta, &ka, &kb] {
                out.diagram.delete_component(c);
                out.sides.remove(c);
            }
            Ok(out)
        }
    }
}

/// Destabilizations, base annihilations and side band moves that apply.
pub fn applicable_heegaard_moves(h: &HeegaardDiagram) -> Vec<HeegaardMove> {
    let mut out = Vec::new();
    for (side, kind) in [(Side::Alpha, 1), (Side::Beta, 3)] {
        for c in h.side_ids(side) {
            if check_lone(h, &c, side).is_ok() {
                out.push(if kind == 1 { HeegaardMove::Destab1 { c } } else { HeegaardMove::Destab3 { c } });
            }
        }
    }
    for a in h.side_ids(Side::Alpha) {
        for b in h.side_ids(Side::Beta) {
            if check_destab2(h, &a, &b).is_ok() {
                out.push(HeegaardMove::Destab2 { alpha: a.clone(), beta: b.clone() });
            }
        }
    }
    for km in annihilable_pairs(&h.diagram) {
        out.push(HeegaardMove::Base(km));
    }
    for mv in applicable_band_moves(&h.diagram) {
        let side = band_side(h, &mv).unwrap_or(Side::Alpha);
        let m = HeegaardMove::IsotopySide { side, mv };
        if apply_heegaard(h, &m).is_ok() {
            out.push(m);
        }
    }
    out
}
