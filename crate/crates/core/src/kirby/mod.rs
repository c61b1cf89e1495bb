//! Kirby moves as validated rewrites of diagram codes.

mod isotopy;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use isotopy::{apply_rewrite, next_slot, rewrite_sites, Rewrite};
pub(crate) use isotopy::anchor;

use crate::args::{syntax, Args};
use crate::ddc::{
    band_surgery, core_event_text, group_items, linking_number, parse_core_event, push_off_mapped, sign_str, Band,
    Component, CoreEvent, Diagram, Id, Kind, SlotRef, SlotUse,
};
use crate::{reject, Result};

/// Sliding band of a 2-handle slide: attachment anchors on the moving
/// component and on the target (whose push-off receives the band), the
/// orientation of the push-off, and the events met by the band core.
/// Anchors and core slots name the slot after which the new slot goes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlideBand {
    pub from: SlotRef,
    pub to: SlotRef,
    pub orient: i8,
    pub core: Vec<CoreEvent>,
}

impl SlideBand {
    pub fn plain(from: SlotRef, to: SlotRef) -> Self {
        SlideBand { from, to, orient: 1, core: vec![] }
    }
}

impl fmt::Display for SlideBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(from={} to={} orient={} core=(", self.from, self.to, sign_str(self.orient))?;
        for e in &self.core {
            write!(f, " {}", core_event_text(e))?;
        }
        write!(f, " ))")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KirbyMove {
    Slide11 { i: Id, j: Id, orient: i8 },
    Slide21 { i: Id, j: Id, band: SlideBand },
    Slide22 { i: Id, j: Id, band: SlideBand },
    Pair12Create { framing: i64 },
    Pair12Annihilate { framed: Id, dotted: Id },
    Pair23Create,
    Pair23Annihilate { c: Id },
    BlowUp { sign: i8 },
    BlowDown { c: Id },
    /// Exchange a dotted circle with a 0-framed one (changes the 4-manifold,
    /// keeps the boundary).
    DotZero { c: Id },
    Isotopy(Rewrite),
}

impl KirbyMove {
    pub fn kind_name(&self) -> &'static str {
        match self {
            KirbyMove::Slide11 { .. } => "Slide11",
            KirbyMove::Slide21 { .. } => "Slide21",
            KirbyMove::Slide22 { .. } => "Slide22",
            KirbyMove::Pair12Create { .. } => "Pair12Create",
            KirbyMove::Pair12Annihilate { .. } => "Pair12Annihilate",
            KirbyMove::Pair23Create => "Pair23Create",
            KirbyMove::Pair23Annihilate { .. } => "Pair23Annihilate",
            KirbyMove::BlowUp { .. } => "BlowUp",
            KirbyMove::BlowDown { .. } => "BlowDown",
            KirbyMove::DotZero { .. } => "DotZero",
            KirbyMove::Isotopy(_) => "LocalIsotopy",
        }
    }

    /// Moves that leave the 4-manifold unchanged.
    pub fn preserves_manifold(&self) -> bool {
        !matches!(self, KirbyMove::BlowUp { .. } | KirbyMove::BlowDown { .. } | KirbyMove::DotZero { .. })
    }

    /// Parse the words after `kirby`.
    pub fn parse(text: &str) -> Result<KirbyMove> {
        let a = Args::parse(text);
        let w: Vec<&str> = a.pos.iter().map(String::as_str).collect();
        let id = |k: &str| a.req(k).map(str::to_string);
        Ok(match w.as_slice() {
            ["slide11"] => KirbyMove::Slide11 { i: id("i")?, j: id("j")?, orient: a.sign_or("orient", 1)? },
            ["slide21"] => KirbyMove::Slide21 { i: id("i")?, j: id("j")?, band: parse_band(a.req("band")?)? },
            ["slide22"] => KirbyMove::Slide22 { i: id("i")?, j: id("j")?, band: parse_band(a.req("band")?)? },
            ["pair12", "create"] => KirbyMove::Pair12Create { framing: a.int_or("framing", 0)? },
            ["pair12", "annihilate"] => KirbyMove::Pair12Annihilate { framed: id("k")?, dotted: id("d")? },
            ["pair23", "create"] => KirbyMove::Pair23Create,
            ["pair23", "annihilate"] => KirbyMove::Pair23Annihilate { c: id("c")? },
            ["blowup"] => KirbyMove::BlowUp { sign: a.sign("sign")? },
            ["blowdown"] => KirbyMove::BlowDown { c: id("site")? },
            ["dotzero"] => KirbyMove::DotZero { c: id("c")? },
            ["isotopy", rw] => KirbyMove::Isotopy(Rewrite::from_args(&a, rw)?),
            _ => return syntax(format!("unknown kirby move `{}`", text.trim())),
        })
    }
}

fn parse_band(v: &str) -> Result<SlideBand> {
    let inner = match v.trim().strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
        Some(x) => x,
        None => return syntax("band must be `( ... )`"),
    };
    let a = Args::parse(inner);
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
    Ok(SlideBand { from: a.slot("from")?, to: a.slot("to")?, orient: a.sign_or("orient", 1)?, core })
}

impl fmt::Display for KirbyMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "kirby ")?;
        match self {
            KirbyMove::Slide11 { i, j, orient } => write!(f, "slide11 i={i} j={j} orient={}", sign_str(*orient)),
            KirbyMove::Slide21 { i, j, band } => write!(f, "slide21 i={i} j={j} band={band}"),
            KirbyMove::Slide22 { i, j, band } => write!(f, "slide22 i={i} j={j} band={band}"),
            KirbyMove::Pair12Create { framing } => write!(f, "pair12 create framing={framing}"),
            KirbyMove::Pair12Annihilate { framed, dotted } => write!(f, "pair12 annihilate k={framed} d={dotted}"),
            KirbyMove::Pair23Create => write!(f, "pair23 create"),
            KirbyMove::Pair23Annihilate { c } => write!(f, "pair23 annihilate c={c}"),
            KirbyMove::BlowUp { sign } => write!(f, "blowup sign={}", sign_str(*sign)),
            KirbyMove::BlowDown { c } => write!(f, "blowdown site={c}"),
            KirbyMove::DotZero { c } => write!(f, "dotzero c={c}"),
            KirbyMove::Isotopy(rw) => write!(f, "isotopy {rw}"),
        }
    }
}

fn need_kind(d: &Diagram, c: &str) -> Result<Kind> {
    match d.kind(c) {
        Some(k) => Ok(k),
        None => reject(format!("site not found: component {c}")),
    }
}

/// Reverse a component's orientation: crossings with other strands and
/// piercings by it change sign.
pub fn reverse_component(d: &mut Diagram, c: &str) {
    if let Some(comp) = d.components.get_mut(c) {
        comp.slots.reverse();
    }
    for x in d.crossings.values_mut() {
        if (x.over.comp == c) != (x.under.comp == c) {
            x.sign = -x.sign;
        }
    }
    for p in d.piercings.values_mut() {
        if p.strand.comp == c {
            p.sign = -p.sign;
        }
    }
}

fn slide_2h(d: &Diagram, i: &str, j: &str, band: &SlideBand, over_dotted: bool) -> Result<Diagram> {
    let (ki, kj) = (need_kind(d, i)?, need_kind(d, j)?);
    if i == j {
        return reject("a component cannot slide over itself");
    }
    match (over_dotted, ki, kj) {
        (false, Kind::Framed(_), Kind::Framed(_)) | (true, Kind::Framed(_), Kind::Dotted) => {}
        _ => {
            let want = if over_dotted { "framed over dotted" } else { "framed over framed" };
            return reject(format!("slide needs {want}; got {ki} over {kj}"));
        }
    }
    if band.from.comp != i || band.to.comp != j {
        return reject(format!("band must run from {i} to {j}"));
    }
    if band.orient != 1 && band.orient != -1 {
        return reject("band orientation must be + or -");
    }
    anchor(d, &band.from)?;
    anchor(d, &band.to)?;
    for e in &band.core {
        match e {
            CoreEvent::Pierce { disk, .. } => {
                if disk == j {
                    return reject(format!("band core meets {j}"));
                }
                match d.kind(disk) {
                    Some(k) if k.has_disk() => {}
                    _ => return reject(format!("band core pierces non-disk {disk}")),
                }
            }
            _ => {
                let at = e.slot().unwrap();
                if at.comp == j {
                    return reject(format!("band core meets {j}"));
                }
                anchor(d, at)?;
            }
        }
    }
    let m_i = ki.framing().unwrap();
    let eps = band.orient as i64;
    let framing = if over_dotted {
        m_i + 2 * eps * d.piercing_sum(j, i)
    } else {
        m_i + kj.framing().unwrap() + 2 * eps * linking_number(d, i, j)?
    };
    let (mut out, copy, map) = push_off_mapped(d, j)?;
    if band.orient < 0 {
        reverse_component(&mut out, &copy);
    }
    let from = out.insert_slot(i, anchor(d, &band.from)?.as_deref());
    let to_after = anchor(d, &band.to)?.map(|s| map[&s].clone());
    let to = out.insert_slot(&copy, to_after.as_deref());
    let mut core = Vec::new();
    for e in &band.core {
        core.push(match e {
            CoreEvent::Over { at, sign } => CoreEvent::Over { at: out.insert_slot(&at.comp, anchor(d, at)?.as_deref()), sign: *sign },
            CoreEvent::Under { at, sign } => CoreEvent::Under { at: out.insert_slot(&at.comp, anchor(d, at)?.as_deref()), sign: *sign },
            CoreEvent::Pierce { .. } => e.clone(),
        });
    }
    out.components.get_mut(i).unwrap().kind = Kind::Surface;
    out.components.get_mut(&copy).unwrap().kind = Kind::Surface;
    let bid = out.fresh_id("B");
    out.bands.insert(bid.clone(), Band { from, to, twists: 0, core });
    let mut out = band_surgery(&out, &[bid])?;
    out.components.get_mut(i).unwrap().kind = Kind::Framed(framing);
    Ok(out)
}

fn slide_11(d: &Diagram, i: &str, j: &str, orient: i8) -> Result<Diagram> {
    if i == j {
        return reject("a component cannot slide over itself");
    }
    if !need_kind(d, i)?.is_dotted() || !need_kind(d, j)?.is_dotted() {
        return reject(format!("slide11 needs two dotted circles; got {i}, {j}"));
    }
    let mut out = d.clone();
    let ps: Vec<_> = d.piercings.values().filter(|p| p.disk == j).cloned().collect();
    for p in ps {
        let s = out.insert_slot(&p.strand.comp, Some(&p.strand.slot));
        out.add_piercing(i, s, p.sign * orient);
    }
    for b in out.bands.values_mut() {
        let mut core = Vec::new();
        for e in &b.core {
            core.push(e.clone());
            if let CoreEvent::Pierce { disk, sign } = e {
                if disk == j {
                    core.push(CoreEvent::Pierce { disk: i.to_string(), sign: sign * orient });
                }
            }
        }
        b.core = core;
    }
    Ok(out)
}

/// Dotted disks (not surface disks) pierced by `k`, with multiplicity.
fn dotted_piercings_by<'a>(d: &'a Diagram, k: &str) -> Vec<&'a crate::ddc::Piercing> {
    d.piercings.values().filter(|p| p.strand.comp == k && d.kind(&p.disk) == Some(Kind::Dotted)).collect()
}

fn disk_pierced_by_band(d: &Diagram, disk: &str) -> bool {
    d.bands.values().any(|b| b.core.iter().any(|e| matches!(e, CoreEvent::Pierce { disk: x, .. } if x == disk)))
}

fn check_pair12(d: &Diagram, k: &str, dot: &str) -> Result<()> {
    if !need_kind(d, k)?.is_framed() {
        return reject(format!("{k} is not framed"));
    }
    if !need_kind(d, dot)?.is_dotted() {
        return reject(format!("{dot} is not dotted"));
    }
    if dotted_piercings_by(d, k).iter().filter(|p| p.disk == dot).count() != 1 {
        return reject(format!("{k} must pierce the disk of {dot} exactly once"));
    }
    if d.piercings.values().any(|p| p.disk == dot && p.strand.comp != k) || disk_pierced_by_band(d, dot) {
        return reject(format!("the disk of {dot} is pierced by another strand"));
    }
    if !d.components[dot].slots.is_empty() {
        return reject(format!("dotted circle {dot} has crossings"));
    }
    Ok(())
}

fn check_pair23(d: &Diagram, c: &str) -> Result<()> {
    if need_kind(d, c)? != Kind::Framed(0) {
        return reject(format!("{c} is not 0-framed"));
    }
    if !d.components[c].slots.is_empty() {
        return reject(format!("{c} is not a split crossingless unknot"));
    }
    if d.r3 == 0 {
        return reject("no 3-handle available to cancel");
    }
    Ok(())
}

fn blow_down(d: &Diagram, c: &str) -> Result<Diagram> {
    let eps = match need_kind(d, c)? {
        Kind::Framed(1) => 1,
        Kind::Framed(-1) => -1,
        k => return reject(format!("blow-down needs a ±1-framed unknot; {c} is {k}")),
    };
    if !d.crossings_between(c, c).is_empty() {
        return reject(format!("{c} has self-crossings"));
    }
    if d.piercings.values().any(|p| p.strand.comp == c) {
        return reject(format!("{c} pierces a disk"));
    }
    let mut lk: BTreeMap<Id, i64> = BTreeMap::new();
    let mut signs: BTreeMap<Id, i8> = BTreeMap::new();
    for (_, x) in d.crossings.iter().filter(|(_, x)| (x.over.comp == c) != (x.under.comp == c)) {
        let p = if x.over.comp == c { &x.under.comp } else { &x.over.comp };
        match d.kind(p) {
            Some(Kind::Framed(_)) => {}
            _ => return reject(format!("non-coherent blow-down: partner {p} is not framed")),
        }
        if *signs.entry(p.clone()).or_insert(x.sign) != x.sign {
            return reject(format!("non-coherent blow-down: strands of {p} cross {c} with both signs"));
        }
        *lk.entry(p.clone()).or_default() += x.sign as i64;
    }
    let lk: Vec<(Id, i64)> = lk.into_iter().map(|(p, s)| (p, s / 2)).collect();
    let mut out = d.clone();
    out.delete_component(c);
    for (p, l) in &lk {
        let k = out.components.get_mut(p).unwrap();
        k.kind = Kind::Framed(k.kind.framing().unwrap() - eps * l * l);
    }
    for (a, (p, lp)) in lk.iter().enumerate() {
        for (q, lq) in lk.iter().skip(a + 1) {
            let delta = -eps * lp * lq;
            let s: i8 = if delta >= 0 { 1 } else { -1 };
            for _ in 0..delta.abs() {
                let p1 = out.push_slot(p);
                let p2 = out.push_slot(p);
                let q1 = out.push_slot(q);
                let q2 = out.push_slot(q);
                out.add_crossing(s, p1, q1);
                out.add_crossing(s, q2, p2);
            }
        }
    }
    Ok(out)
}

/// Replace a dotted circle by a 0-framed one: each piercing of its disk
/// becomes a crossing with the strand over and one with it under, both of
/// the piercing's sign.
fn dot_to_zero(d: &mut Diagram, c: &str) {
    let ps: Vec<(Id, crate::ddc::Piercing)> =
        d.piercings.iter().filter(|(_, p)| p.disk == c).map(|(k, p)| (k.clone(), p.clone())).collect();
    d.components.get_mut(c).unwrap().kind = Kind::Framed(0);
    let mut back = Vec::new();
    for (id, p) in &ps {
        d.piercings.remove(id);
        let t1 = d.insert_slot_before(&p.strand);
        let c1 = d.push_slot(c);
        d.add_crossing(p.sign, c1, t1);
        back.push(p.clone());
    }
    for p in back.iter().rev() {
        // the old piercing slot now carries the under-passage of the circle
        let c2 = d.push_slot(c);
        d.add_crossing(p.sign, p.strand.clone(), c2);
    }
}

pub fn apply_kirby(d: &Diagram, m: &KirbyMove) -> Result<Diagram> {
    match m {
        KirbyMove::Slide11 { i, j, orient } => slide_11(d, i, j, *orient),
        KirbyMove::Slide21 { i, j, band } => slide_2h(d, i, j, band, true),
        KirbyMove::Slide22 { i, j, band } => slide_2h(d, i, j, band, false),
        KirbyMove::Pair12Create { framing } => {
            let mut out = d.clone();
            let k = out.fresh_id("K");
            out.components.insert(k.clone(), Component { kind: Kind::Framed(*framing), slots: vec!["s1".into()] });
            let dot = out.fresh_id("D");
            out.components.insert(dot.clone(), Component { kind: Kind::Dotted, slots: vec![] });
            out.add_piercing(&dot, SlotRef::new(k, "s1"), 1);
            Ok(out)
        }
        KirbyMove::Pair12Annihilate { framed, dotted } => {
            check_pair12(d, framed, dotted)?;
            let mut out = d.clone();
            out.delete_component(framed);
            out.delete_component(dotted);
            Ok(out)
        }
        KirbyMove::Pair23Create => {
            let mut out = d.clone();
            let k = out.fresh_id("K");
            out.components.insert(k, Component { kind: Kind::Framed(0), slots: vec![] });
            out.r3 += 1;
            Ok(out)
        }
        KirbyMove::Pair23Annihilate { c } => {
            check_pair23(d, c)?;
            let mut out = d.clone();
            out.delete_component(c);
            out.r3 -= 1;
            Ok(out)
        }
        KirbyMove::BlowUp { sign } => {
            let mut out = d.clone();
            let e = out.fresh_id("E");
            out.components.insert(e, Component { kind: Kind::Framed(*sign as i64), slots: vec![] });
            Ok(out)
        }
        KirbyMove::BlowDown { c } => blow_down(d, c),
        KirbyMove::DotZero { c } => {
            let mut out = d.clone();
            match need_kind(d, c)? {
                Kind::Dotted => {
                    if disk_pierced_by_band(d, c) {
                        return reject(format!("a band passes through the disk of {c}"));
                    }
                    dot_to_zero(&mut out, c);
                }
                Kind::Framed(0) if d.components[c].slots.is_empty() => {
                    out.components.get_mut(c).unwrap().kind = Kind::Dotted;
                }
                k => return reject(format!("dot/zero exchange needs a dotted or split 0-framed circle; {c} is {k}")),
            }
            Ok(out)
        }
        KirbyMove::Isotopy(rw) => apply_rewrite(d, rw),
    }
}

/// Every cancelling-pair annihilation whose preconditions hold.
pub fn annihilable_pairs(d: &Diagram) -> Vec<KirbyMove> {
    let mut out = Vec::new();
    for k in d.framed_ids() {
        let disks: BTreeSet<String> = dotted_piercings_by(d, &k).iter().map(|p| p.disk.clone()).collect();
        for dot in disks {
            if check_pair12(d, &k, &dot).is_ok() {
                out.push(KirbyMove::Pair12Annihilate { framed: k.clone(), dotted: dot });
            }
        }
    }
    for k in d.framed_ids() {
        if check_pair23(d, &k).is_ok() {
            out.push(KirbyMove::Pair23Annihilate { c: k });
        }
    }
    out
}

/// Diagram of the boundary 3-manifold: every dotted circle becomes
/// 0-framed.
pub fn boundary_diagram(d: &Diagram) -> Result<Diagram> {
    if !d.is_kirby() {
        return reject("boundary diagram needs a Kirby diagram");
    }
    let mut out = d.clone();
    for c in d.dotted_ids() {
        dot_to_zero(&mut out, &c);
    }
    out.r3 = 0;
    Ok(out)
}

/// True when a slot is claimed by a piercing of a dotted disk.
pub fn is_dotted_piercing(d: &Diagram, r: &SlotRef) -> bool {
    matches!(d.use_of(r), Some(SlotUse::Pierce(p)) if d.kind(&d.piercings[&p].disk) == Some(Kind::Dotted))
}
