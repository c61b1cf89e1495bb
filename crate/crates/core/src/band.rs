//! Moves of (singular) banded unlink diagrams.
//!
//! Each move is a pattern rewrite on event lists. A band foot is the slot
//! holding one end of a band; feet of two bands, or a foot and a vertex
//! slot, only pass each other through the moves here.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::args::{syntax, Args};
use crate::ddc::{push_off_mapped, sign_str, sorted_ids, Band, Component, CoreEvent, Diagram, Id, Kind, SlotRef, SlotUse};
use crate::kirby::{anchor, apply_rewrite, next_slot, rewrite_sites, Rewrite};
use crate::{reject, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum End {
    From,
    To,
}

impl End {
    fn name(self) -> &'static str {
        match self {
            End::From => "from",
            End::To => "to",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DottedVariant {
    /// The core pushes a finger through the disk and back.
    Finger,
    /// The core passes over the dotted circle and back.
    Over,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BandMove {
    IsotopyLocal(Rewrite),
    /// New surface unknot joined to `on` by a new band.
    Cup { on: SlotRef },
    /// Remove a band whose far end is a bare unknot, and that unknot.
    Cap { band: Id },
    /// Slide the `end` of `band` along the adjacent band `over` to its
    /// other foot. With `over == band` the end is turned around its own
    /// bare unknot, removing one half twist.
    BandSlide { band: Id, over: Id, end: End },
    /// Swap the `end` foot of `band` with an adjacent foot of `through`.
    BandSwim { band: Id, through: Id, end: End },
    /// The core follows a push-off of the framed component `over`.
    BandHandleSlide { band: Id, over: Id, at: Option<usize> },
    /// The core encircles the strand at `on`.
    BandHandleSwim { band: Id, on: SlotRef, sign: i8, at: Option<usize> },
    DottedSlide { band: Id, disk: Id, variant: DottedVariant, sign: i8, at: Option<usize> },
    /// A vertex slot next to a foot of `band` moves to the other foot.
    VertexBandSlide { vertex: Id, band: Id },
    /// The core encircles the vertex's other strand next to the vertex.
    VertexBandSwim { vertex: Id, band: Id, sign: i8 },
    /// A vertex slot and an adjacent foot of `band` trade places.
    VertexBandPass { vertex: Id, band: Id },
}

impl BandMove {
    pub fn kind_name(&self) -> &'static str {
        match self {
            BandMove::IsotopyLocal(_) => "IsotopyLocal",
            BandMove::Cup { .. } => "Cup",
            BandMove::Cap { .. } => "Cap",
            BandMove::BandSlide { .. } => "BandSlide",
            BandMove::BandSwim { .. } => "BandSwim",
            BandMove::BandHandleSlide { .. } => "BandHandleSlide",
            BandMove::BandHandleSwim { .. } => "BandHandleSwim",
            BandMove::DottedSlide { .. } => "DottedSlide",
            BandMove::VertexBandSlide { .. } => "VertexBandSlide",
            BandMove::VertexBandSwim { .. } => "VertexBandSwim",
            BandMove::VertexBandPass { .. } => "VertexBandPass",
        }
    }

    /// Parse the words after `band`.
    pub fn parse(text: &str) -> Result<BandMove> {
        let a = Args::parse(text);
        let w: Vec<&str> = a.pos.iter().map(String::as_str).collect();
        let id = |k: &str| a.req(k).map(str::to_string);
        let at = || -> Result<Option<usize>> {
            match a.get("at") {
                None => Ok(None),
                Some(v) => v.parse().map(Some).or_else(|_| syntax(format!("bad core index `{v}`"))),
            }
        };
        let end = || -> Result<End> {
            match a.get("end").unwrap_or("to") {
                "from" => Ok(End::From),
                "to" => Ok(End::To),
                v => syntax(format!("bad band end `{v}`")),
            }
        };
        Ok(match w.as_slice() {
            ["isotopy", rw] => BandMove::IsotopyLocal(Rewrite::from_args(&a, rw)?),
            ["cup"] => BandMove::Cup { on: a.slot("on")? },
            ["cap"] => BandMove::Cap { band: id("b")? },
            ["slide"] => BandMove::BandSlide { band: id("b")?, over: id("over")?, end: end()? },
            ["swim"] => BandMove::BandSwim { band: id("b")?, through: id("through")?, end: end()? },
            ["handleslide"] => BandMove::BandHandleSlide { band: id("b")?, over: id("over")?, at: at()? },
            ["handleswim"] => BandMove::BandHandleSwim { band: id("b")?, on: a.slot("on")?, sign: a.sign_or("sign", 1)?, at: at()? },
            ["dottedslide"] => BandMove::DottedSlide {
                band: id("b")?,
                disk: id("disk")?,
                variant: match a.get("variant").unwrap_or("finger") {
                    "finger" => DottedVariant::Finger,
                    "over" => DottedVariant::Over,
                    v => return syntax(format!("bad dotted-slide variant `{v}`")),
                },
                sign: a.sign_or("sign", 1)?,
                at: at()?,
            },
            ["vertexslide"] => BandMove::VertexBandSlide { vertex: id("v")?, band: id("band")? },
            ["vertexswim"] => BandMove::VertexBandSwim { vertex: id("v")?, band: id("band")?, sign: a.sign_or("sign", 1)? },
            ["vertexpass"] => BandMove::VertexBandPass { vertex: id("v")?, band: id("band")? },
            _ => return syntax(format!("unknown band move `{}`", text.trim())),
        })
    }
}

fn at_text(at: &Option<usize>) -> String {
    at.map(|k| format!(" at={k}")).unwrap_or_default()
}

impl fmt::Display for BandMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "band ")?;
        match self {
            BandMove::IsotopyLocal(rw) => write!(f, "isotopy {rw}"),
            BandMove::Cup { on } => write!(f, "cup on={on}"),
            BandMove::Cap { band } => write!(f, "cap b={band}"),
            BandMove::BandSlide { band, over, end } => write!(f, "slide b={band} over={over} end={}", end.name()),
            BandMove::BandSwim { band, through, end } => write!(f, "swim b={band} through={through} end={}", end.name()),
            BandMove::BandHandleSlide { band, over, at } => write!(f, "handleslide b={band} over={over}{}", at_text(at)),
            BandMove::BandHandleSwim { band, on, sign, at } => {
                write!(f, "handleswim b={band} on={on} sign={}{}", sign_str(*sign), at_text(at))
            }
            BandMove::DottedSlide { band, disk, variant, sign, at } => {
                let v = match variant {
                    DottedVariant::Finger => "finger",
                    DottedVariant::Over => "over",
                };
                write!(f, "dottedslide b={band} disk={disk} variant={v} sign={}{}", sign_str(*sign), at_text(at))
            }
            BandMove::VertexBandSlide { vertex, band } => write!(f, "vertexslide v={vertex} band={band}"),
            BandMove::VertexBandSwim { vertex, band, sign } => write!(f, "vertexswim v={vertex} band={band} sign={}", sign_str(*sign)),
            BandMove::VertexBandPass { vertex, band } => write!(f, "vertexpass v={vertex} band={band}"),
        }
    }
}

fn need_band<'a>(d: &'a Diagram, b: &str) -> Result<&'a Band> {
    match d.bands.get(b) {
        Some(x) => Ok(x),
        None => reject(format!("site not found: band {b}")),
    }
}

fn foot(b: &Band, e: End) -> &SlotRef {
    match e {
        End::From => &b.from,
        End::To => &b.to,
    }
}

fn adjacent(d: &Diagram, a: &SlotRef, b: &SlotRef) -> bool {
    next_slot(d, a).as_ref() == Some(b) || next_slot(d, b).as_ref() == Some(a)
}

fn swap_slots(d: &mut Diagram, a: &SlotRef, b: &SlotRef) {
    let slots = &mut d.components.get_mut(&a.comp).unwrap().slots;
    let i = slots.iter().position(|s| *s == a.slot).unwrap();
    let j = slots.iter().position(|s| *s == b.slot).unwrap();
    slots.swap(i, j);
}

/// A component carrying nothing but the given slot, with an unpierced disk.
fn bare_unknot_with(d: &Diagram, r: &SlotRef) -> bool {
    d.kind(&r.comp) == Some(Kind::Surface)
        && d.components[&r.comp].slots == [r.slot.clone()]
        && !d.piercings.values().any(|p| p.disk == r.comp)
        && !d.bands.values().any(|b| b.core.iter().any(|e| matches!(e, CoreEvent::Pierce { disk, .. } if *disk == r.comp)))
}

fn insert_core(d: &mut Diagram, band: &str, at: Option<usize>, events: Vec<CoreEvent>) -> Result<()> {
    let core = &mut d.bands.get_mut(band).unwrap().core;
    let k = at.unwrap_or(core.len());
    if k > core.len() {
        return reject(format!("core index {k} out of range for band {band}"));
    }
    core.splice(k..k, events);
    Ok(())
}

/// Events of `over`'s core re-laid on fresh slots parallel to the
/// originals, listed from `start` foot to the opposite one.
fn parallel_core(d: &mut Diagram, over: &str, from_start: bool) -> Vec<CoreEvent> {
    let core = d.bands[over].core.clone();
    let mut out = Vec::new();
    for e in core {
        out.push(match e {
            CoreEvent::Over { at, sign } => CoreEvent::Over { at: d.insert_slot(&at.comp, Some(&at.slot)), sign },
            CoreEvent::Under { at, sign } => CoreEvent::Under { at: d.insert_slot(&at.comp, Some(&at.slot)), sign },
            p @ CoreEvent::Pierce { .. } => p,
        });
    }
    if !from_start {
        out.reverse();
        for e in out.iter_mut() {
            match e {
                CoreEvent::Over { sign, .. } | CoreEvent::Under { sign, .. } | CoreEvent::Pierce { sign, .. } => *sign = -*sign,
            }
        }
    }
    out
}

fn vertex_slot_at_foot(d: &Diagram, v: &str, band: &str) -> Result<(SlotRef, bool, End)> {
    let Some(vx) = d.vertices.get(v) else {
        return reject(format!("site not found: vertex {v}"));
    };
    let b = need_band(d, band)?;
    for (slot, is_a) in [(&vx.a, true), (&vx.b, false)] {
        for e in [End::From, End::To] {
            let f = foot(b, e);
            if f.comp == slot.comp && adjacent(d, slot, f) {
                return Ok((slot.clone(), is_a, e));
            }
        }
    }
    reject(format!("vertex {v} is not adjacent to a foot of band {band}"))
}

pub fn apply_band(d: &Diagram, m: &BandMove) -> Result<Diagram> {
    let mut out = d.clone();
    match m {
        BandMove::IsotopyLocal(rw) => return apply_rewrite(d, rw),
        BandMove::Cup { on } => {
            if d.kind(&on.comp) != Some(Kind::Surface) {
                return reject(format!("cup needs a surface component; {} is not", on.comp));
            }
            let a = anchor(d, on)?;
            let from = out.insert_slot(&on.comp, a.as_deref());
            let u = out.fresh_id("U");
            out.components.insert(u.clone(), Component { kind: Kind::Surface, slots: vec!["s1".into()] });
            let bid = out.fresh_id("B");
            out.bands.insert(bid, Band { from, to: SlotRef::new(u, "s1"), twists: 0, core: vec![] });
        }
        BandMove::Cap { band } => {
            let b = need_band(d, band)?.clone();
            if b.twists != 0 || !b.core.is_empty() {
                return reject(format!("band {band} is twisted or has core events"));
            }
            let u = if b.from.comp == b.to.comp {
                None
            } else if bare_unknot_with(d, &b.to) {
                Some(b.to.comp.clone())
            } else if bare_unknot_with(d, &b.from) {
                Some(b.from.comp.clone())
            } else {
                None
            };
            let Some(u) = u else {
                return reject(format!("band {band} does not end on a bare unknot"));
            };
            out.remove_band(band);
            out.components.remove(&u);
        }
        BandMove::BandSlide { band, over, end } => {
            let b = need_band(d, band)?.clone();
            if band == over {
                let f = foot(&b, *end);
                if b.twists == 0 {
                    return reject(format!("band {band} has no twist to remove"));
                }
                if !bare_unknot_with(d, f) {
                    return reject(format!("the {} end of band {band} is not on a bare unknot", end.name()));
                }
                out.bands.get_mut(band).unwrap().twists -= b.twists.signum();
                return Ok(out);
            }
            let b2 = need_band(d, over)?.clone();
            let f = foot(&b, *end).clone();
            let (g_other, g_is_from) = if b2.from.comp == f.comp && adjacent(d, &f, &b2.from) {
                (b2.to.clone(), true)
            } else if b2.to.comp == f.comp && adjacent(d, &f, &b2.to) {
                (b2.from.clone(), false)
            } else {
                return reject(format!("the {} end of band {band} is not next to a foot of band {over}", end.name()));
            };
            // the moved foot travels from g to g_other along `over`
            let mut path = parallel_core(&mut out, over, g_is_from);
            out.remove_slot(&f);
            let nf = out.insert_slot(&g_other.comp, Some(&g_other.slot));
            let bm = out.bands.get_mut(band).unwrap();
            match end {
                End::To => {
                    bm.to = nf;
                    bm.core.extend(path);
                }
                End::From => {
                    bm.from = nf;
                    path.reverse();
                    for e in path.iter_mut() {
                        match e {
                            CoreEvent::Over { sign, .. } | CoreEvent::Under { sign, .. } | CoreEvent::Pierce { sign, .. } => *sign = -*sign,
                        }
                    }
                    path.extend(bm.core.drain(..));
                    bm.core = path;
                }
            }
        }
        BandMove::BandSwim { band, through, end } => {
            if band == through {
                return reject("a band cannot swim through itself");
            }
            let b = need_band(d, band)?;
            let b2 = need_band(d, through)?;
            let f = foot(b, *end);
            let g = [&b2.from, &b2.to].into_iter().find(|g| g.comp == f.comp && adjacent(d, f, g));
            let Some(g) = g else {
                return reject(format!("the {} end of band {band} is not next to a foot of band {through}", end.name()));
            };
            swap_slots(&mut out, f, g);
        }
        BandMove::BandHandleSlide { band, over, at } => {
            need_band(d, band)?;
            match d.kind(over) {
                Some(Kind::Framed(_)) => {}
                _ => return reject(format!("band/2-handle slide needs a framed component; {over} is not")),
            }
            if !d.crossings_between(over, over).is_empty() {
                return reject(format!("{over} has self-crossings"));
            }
            for s in &d.components[over].slots {
                match d.use_of(&SlotRef::new(over.clone(), s.clone())) {
                    Some(SlotUse::Over(_) | SlotUse::Under(_) | SlotUse::Pierce(_)) => {}
                    _ => return reject(format!("{over} meets a band or vertex")),
                }
            }
            let (mut p, copy, _) = push_off_mapped(d, over)?;
            let mut events = Vec::new();
            for s in p.components[&copy].slots.clone() {
                let r = SlotRef::new(copy.clone(), s);
                match p.use_of(&r) {
                    Some(SlotUse::Over(x)) => {
                        let c = p.crossings.remove(&x).unwrap();
                        events.push(CoreEvent::Over { at: c.under, sign: c.sign });
                    }
                    Some(SlotUse::Under(x)) => {
                        let c = p.crossings.remove(&x).unwrap();
                        events.push(CoreEvent::Under { at: c.over, sign: c.sign });
                    }
                    Some(SlotUse::Pierce(x)) => {
                        let pc = p.piercings.remove(&x).unwrap();
                        events.push(CoreEvent::Pierce { disk: pc.disk, sign: pc.sign });
                    }
                    _ => return reject(format!("push-off of {over} left an unexpected slot")),
                }
            }
            p.components.remove(&copy);
            out = p;
            insert_core(&mut out, band, *at, events)?;
        }
        BandMove::BandHandleSwim { band, on, sign, at } => {
            need_band(d, band)?;
            match d.kind(&on.comp) {
                Some(Kind::Framed(_)) => {}
                _ => return reject(format!("band/2-handle swim needs a framed component; {} is not", on.comp)),
            }
            let a = anchor(d, on)?;
            let s1 = out.insert_slot(&on.comp, a.as_deref());
            let s2 = out.insert_slot(&on.comp, Some(&s1.slot));
            insert_core(&mut out, band, *at, vec![CoreEvent::Over { at: s1, sign: *sign }, CoreEvent::Under { at: s2, sign: *sign }])?;
        }
        BandMove::DottedSlide { band, disk, variant, sign, at } => {
            need_band(d, band)?;
            if d.kind(disk) != Some(Kind::Dotted) {
                return reject(format!("{disk} is not dotted"));
            }
            let events = match variant {
                DottedVariant::Finger => vec![CoreEvent::Pierce { disk: disk.clone(), sign: *sign }, CoreEvent::Pierce { disk: disk.clone(), sign: -*sign }],
                DottedVariant::Over => {
                    let s1 = out.insert_slot(disk, None);
                    let s2 = out.insert_slot(disk, Some(&s1.slot));
                    vec![CoreEvent::Over { at: s1, sign: *sign }, CoreEvent::Over { at: s2, sign: -*sign }]
                }
            };
            insert_core(&mut out, band, *at, events)?;
        }
        BandMove::VertexBandSlide { vertex, band } => {
            let (x, is_a, e) = vertex_slot_at_foot(d, vertex, band)?;
            let b = &d.bands[band];
            let g = match e {
                End::From => &b.to,
                End::To => &b.from,
            };
            let vx = &d.vertices[vertex];
            let other = if is_a { &vx.b } else { &vx.a };
            if other.comp == g.comp {
                return reject(format!("vertex {vertex} would join {} to itself", g.comp));
            }
            out.remove_slot(&x);
            let nx = out.insert_slot(&g.comp, Some(&g.slot));
            let vm = out.vertices.get_mut(vertex).unwrap();
            if is_a {
                vm.a = nx;
            } else {
                vm.b = nx;
            }
        }
        BandMove::VertexBandSwim { vertex, band, sign } => {
            let (_, is_a, _) = vertex_slot_at_foot(d, vertex, band)?;
            let vx = &d.vertices[vertex];
            let other = if is_a { vx.b.clone() } else { vx.a.clone() };
            let s1 = out.insert_slot(&other.comp, Some(&other.slot));
            let s2 = out.insert_slot(&other.comp, Some(&s1.slot));
            insert_core(&mut out, band, None, vec![CoreEvent::Over { at: s1, sign: *sign }, CoreEvent::Under { at: s2, sign: *sign }])?;
        }
        BandMove::VertexBandPass { vertex, band } => {
            let (x, _, e) = vertex_slot_at_foot(d, vertex, band)?;
            let f = foot(&d.bands[band], e).clone();
            swap_slots(&mut out, &x, &f);
        }
    }
    Ok(out)
}

/// Every site where a band move's precondition holds. Kinds taking free
/// parameters are listed once with default parameters.
pub fn applicable_band_moves(d: &Diagram) -> Vec<BandMove> {
    let mut cand = Vec::new();
    for rw in rewrite_sites(d) {
        cand.push(BandMove::IsotopyLocal(rw));
    }
    for c in d.surface_ids() {
        cand.push(BandMove::Cup { on: SlotRef::new(c, "^") });
    }
    let bands = sorted_ids(d.bands.keys());
    for b in &bands {
        cand.push(BandMove::Cap { band: b.clone() });
        for o in &bands {
            for end in [End::From, End::To] {
                cand.push(BandMove::BandSlide { band: b.clone(), over: o.clone(), end });
                if b != o {
                    cand.push(BandMove::BandSwim { band: b.clone(), through: o.clone(), end });
                }
            }
        }
        for k in d.framed_ids() {
            cand.push(BandMove::BandHandleSlide { band: b.clone(), over: k, at: None });
        }
        for k in d.dotted_ids() {
            cand.push(BandMove::DottedSlide { band: b.clone(), disk: k, variant: DottedVariant::Finger, sign: 1, at: None });
        }
        for v in sorted_ids(d.vertices.keys()) {
            cand.push(BandMove::VertexBandSlide { vertex: v.clone(), band: b.clone() });
            cand.push(BandMove::VertexBandSwim { vertex: v.clone(), band: b.clone(), sign: 1 });
            cand.push(BandMove::VertexBandPass { vertex: v, band: b.clone() });
        }
    }
    cand.into_iter().filter(|m| apply_band(d, m).is_ok()).collect()
}

/// Identifiers of the bands in `d` (id order).
pub fn band_ids(d: &Diagram) -> Vec<Id> {
    sorted_ids(d.bands.keys())
}
