use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub type Id = String;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SlotRef {
    pub comp: Id,
    pub slot: Id,
}

impl SlotRef {
    pub fn new(comp: impl Into<Id>, slot: impl Into<Id>) -> Self {
        SlotRef { comp: comp.into(), slot: slot.into() }
    }
}

impl fmt::Display for SlotRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.comp, self.slot)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    Dotted,
    Framed(i64),
    Surface,
}

impl Kind {
    pub fn is_dotted(self) -> bool {
        matches!(self, Kind::Dotted)
    }
    pub fn is_framed(self) -> bool {
        matches!(self, Kind::Framed(_))
    }
    pub fn is_surface(self) -> bool {
        matches!(self, Kind::Surface)
    }
    pub fn framing(self) -> Option<i64> {
        match self {
            Kind::Framed(m) => Some(m),
            _ => None,
        }
    }
    /// Kinds whose spanning disk may be pierced.
    pub fn has_disk(self) -> bool {
        matches!(self, Kind::Dotted | Kind::Surface)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Dotted => write!(f, "dotted"),
            Kind::Framed(m) => write!(f, "framed:{m}"),
            Kind::Surface => write!(f, "surface"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub kind: Kind,
    /// Cyclic list of event slots in traversal order.
    pub slots: Vec<Id>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub sign: i8,
    pub over: SlotRef,
    pub under: SlotRef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piercing {
    pub disk: Id,
    pub strand: SlotRef,
    pub sign: i8,
}

/// An event met by a band core. `Over`/`Under` claim a slot on the strand
/// being crossed; `Pierce` passes through the disk of a dotted or surface
/// circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoreEvent {
    Over { at: SlotRef, sign: i8 },
    Under { at: SlotRef, sign: i8 },
    Pierce { disk: Id, sign: i8 },
}

impl CoreEvent {
    pub fn slot(&self) -> Option<&SlotRef> {
        match self {
            CoreEvent::Over { at, .. } | CoreEvent::Under { at, .. } => Some(at),
            CoreEvent::Pierce { .. } => None,
        }
    }
    pub fn sign(&self) -> i8 {
        match self {
            CoreEvent::Over { sign, .. } | CoreEvent::Under { sign, .. } | CoreEvent::Pierce { sign, .. } => *sign,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Band {
    pub from: SlotRef,
    pub to: SlotRef,
    pub twists: i64,
    pub core: Vec<CoreEvent>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Marking {
    Ac,
    Bd,
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Marking::Ac => write!(f, "ac"),
            Marking::Bd => write!(f, "bd"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub a: SlotRef,
    pub b: SlotRef,
    pub sign: i8,
    pub marking: Marking,
}

/// What claims a slot.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SlotUse {
    Over(Id),
    Under(Id),
    Pierce(Id),
    BandFrom(Id),
    BandTo(Id),
    BandCore(Id, usize),
    VertexA(Id),
    VertexB(Id),
}

/// A decorated diagram code. Kirby diagrams use dotted and framed
/// components only; banded unlinks add surface components, bands and
/// vertices over the same code.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub name: String,
    pub components: BTreeMap<Id, Component>,
    pub crossings: BTreeMap<Id, Crossing>,
    pub piercings: BTreeMap<Id, Piercing>,
    pub bands: BTreeMap<Id, Band>,
    pub vertices: BTreeMap<Id, Vertex>,
    pub resolutions_trivial: Option<bool>,
    /// Number of implicit 3-handles.
    pub r3: u32,
}

pub type DiagramCode = Diagram;
pub type BandedUnlink = Diagram;

/// Compare ids so that `K2` sorts before `K10`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut i, mut j) = (a.as_bytes(), b.as_bytes());
    loop {
        match (i.first(), j.first()) {
            (None, None) => return a.cmp(b),
            (None, _) => return Ordering::Less,
            (_, None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let ni = i.iter().take_while(|c| c.is_ascii_digit()).count();
                let nj = j.iter().take_while(|c| c.is_ascii_digit()).count();
                let (da, db) = (&i[..ni], &j[..nj]);
                let ta: &[u8] = { let z = da.iter().take_while(|c| **c == b'0').count(); &da[z..] };
                let tb: &[u8] = { let z = db.iter().take_while(|c| **c == b'0').count(); &db[z..] };
                let o = ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb));
                if o != Ordering::Equal {
                    return o;
                }
                i = &i[ni..];
                j = &j[nj..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                i = &i[1..];
                j = &j[1..];
            }
        }
    }
}

pub fn sorted_ids<'a, I: IntoIterator<Item = &'a Id>>(ids: I) -> Vec<Id> {
    let mut v: Vec<Id> = ids.into_iter().cloned().collect();
    v.sort_by(|a, b| natural_cmp(a, b));
    v
}

pub fn sign_str(s: i8) -> &'static str {
    if s >= 0 {
        "+"
    } else {
        "-"
    }
}

impl Diagram {
    pub fn new(name: impl Into<String>) -> Self {
        Diagram { name: name.into(), ..Default::default() }
    }

    pub fn kind(&self, comp: &str) -> Option<Kind> {
        self.components.get(comp).map(|c| c.kind)
    }

    pub fn ids_of(&self, pred: impl Fn(Kind) -> bool) -> Vec<Id> {
        sorted_ids(self.components.iter().filter(|(_, c)| pred(c.kind)).map(|(k, _)| k))
    }

    pub fn dotted_ids(&self) -> Vec<Id> {
        self.ids_of(Kind::is_dotted)
    }
    pub fn framed_ids(&self) -> Vec<Id> {
        self.ids_of(Kind::is_framed)
    }
    pub fn surface_ids(&self) -> Vec<Id> {
        self.ids_of(Kind::is_surface)
    }

    pub fn has_slot(&self, r: &SlotRef) -> bool {
        self.components.get(&r.comp).is_some_and(|c| c.slots.iter().any(|s| *s == r.slot))
    }

    pub fn slot_index(&self, r: &SlotRef) -> Option<usize> {
        self.components.get(&r.comp)?.slots.iter().position(|s| *s == r.slot)
    }

    /// Every record claiming each slot.
    pub fn slot_uses(&self) -> BTreeMap<SlotRef, Vec<SlotUse>> {
        let mut m: BTreeMap<SlotRef, Vec<SlotUse>> = BTreeMap::new();
        for (id, x) in &self.crossings {
            m.entry(x.over.clone()).or_default().push(SlotUse::Over(id.clone()));
            m.entry(x.under.clone()).or_default().push(SlotUse::Under(id.clone()));
        }
        for (id, p) in &self.piercings {
            m.entry(p.strand.clone()).or_default().push(SlotUse::Pierce(id.clone()));
        }
        for (id, b) in &self.bands {
            m.entry(b.from.clone()).or_default().push(SlotUse::BandFrom(id.clone()));
            m.entry(b.to.clone()).or_default().push(SlotUse::BandTo(id.clone()));
            for (k, e) in b.core.iter().enumerate() {
                if let Some(s) = e.slot() {
                    m.entry(s.clone()).or_default().push(SlotUse::BandCore(id.clone(), k));
                }
            }
        }
        for (id, v) in &self.vertices {
            m.entry(v.a.clone()).or_default().push(SlotUse::VertexA(id.clone()));
            m.entry(v.b.clone()).or_default().push(SlotUse::VertexB(id.clone()));
        }
        m
    }

    /// The single record claiming a slot, if exactly one does.
    pub fn use_of(&self, r: &SlotRef) -> Option<SlotUse> {
        let mut found = None;
        let mut n = 0;
        for (id, x) in &self.crossings {
            if x.over == *r {
                found = Some(SlotUse::Over(id.clone()));
                n += 1;
            }
            if x.under == *r {
                found = Some(SlotUse::Under(id.clone()));
                n += 1;
            }
        }
        for (id, p) in &self.piercings {
            if p.strand == *r {
                found = Some(SlotUse::Pierce(id.clone()));
                n += 1;
            }
        }
        for (id, b) in &self.bands {
            if b.from == *r {
                found = Some(SlotUse::BandFrom(id.clone()));
                n += 1;
            }
            if b.to == *r {
                found = Some(SlotUse::BandTo(id.clone()));
                n += 1;
            }
            for (k, e) in b.core.iter().enumerate() {
                if e.slot() == Some(r) {
                    found = Some(SlotUse::BandCore(id.clone(), k));
                    n += 1;
                }
            }
        }
        for (id, v) in &self.vertices {
            if v.a == *r {
                found = Some(SlotUse::VertexA(id.clone()));
                n += 1;
            }
            if v.b == *r {
                found = Some(SlotUse::VertexB(id.clone()));
                n += 1;
            }
        }
        if n == 1 {
            found
        } else {
            None
        }
    }

    fn all_record_ids(&self) -> BTreeSet<&str> {
        let mut s = BTreeSet::new();
        s.extend(self.components.keys().map(String::as_str));
        s.extend(self.crossings.keys().map(String::as_str));
        s.extend(self.piercings.keys().map(String::as_str));
        s.extend(self.bands.keys().map(String::as_str));
        s.extend(self.vertices.keys().map(String::as_str));
        s
    }

    /// Smallest `prefix<n>` (n ≥ 1) not used by any component or record.
    pub fn fresh_id(&self, prefix: &str) -> Id {
        let used = self.all_record_ids();
        (1..).map(|n| format!("{prefix}{n}")).find(|c| !used.contains(c.as_str())).unwrap()
    }

    pub fn fresh_slot(&self, comp: &str) -> Id {
        let c = &self.components[comp];
        (1..).map(|n| format!("n{n}")).find(|c2| !c.slots.contains(c2)).unwrap()
    }

    /// Insert a fresh slot right after `after` (or at the head when `None`).
    pub fn insert_slot(&mut self, comp: &str, after: Option<&str>) -> SlotRef {
        let s = self.fresh_slot(comp);
        let c = self.components.get_mut(comp).expect("component exists");
        let pos = match after {
            None => 0,
            Some(a) => c.slots.iter().position(|x| x == a).map(|p| p + 1).unwrap_or(c.slots.len()),
        };
        c.slots.insert(pos, s.clone());
        SlotRef::new(comp, s)
    }

    pub fn push_slot(&mut self, comp: &str) -> SlotRef {
        let s = self.fresh_slot(comp);
        self.components.get_mut(comp).expect("component exists").slots.push(s.clone());
        SlotRef::new(comp, s)
    }

    pub fn remove_slot(&mut self, r: &SlotRef) {
        if let Some(c) = self.components.get_mut(&r.comp) {
            c.slots.retain(|s| *s != r.slot);
        }
    }

    pub fn add_crossing(&mut self, sign: i8, over: SlotRef, under: SlotRef) -> Id {
        let id = self.fresh_id("X");
        self.crossings.insert(id.clone(), Crossing { sign, over, under });
        id
    }

    pub fn add_piercing(&mut self, disk: &str, strand: SlotRef, sign: i8) -> Id {
        let id = self.fresh_id("P");
        self.piercings.insert(id.clone(), Piercing { disk: disk.to_string(), strand, sign });
        id
    }

    pub fn remove_crossing(&mut self, id: &str) {
        if let Some(x) = self.crossings.remove(id) {
            self.remove_slot(&x.over);
            self.remove_slot(&x.under);
        }
    }

    pub fn remove_piercing(&mut self, id: &str) {
        if let Some(p) = self.piercings.remove(id) {
            self.remove_slot(&p.strand);
        }
    }

    pub fn remove_band(&mut self, id: &str) {
        if let Some(b) = self.bands.remove(id) {
            self.remove_slot(&b.from);
            self.remove_slot(&b.to);
            for e in &b.core {
                if let Some(s) = e.slot() {
                    self.remove_slot(s);
                }
            }
        }
    }

    pub fn remove_vertex(&mut self, id: &str) {
        if let Some(v) = self.vertices.remove(id) {
            self.remove_slot(&v.a);
            self.remove_slot(&v.b);
        }
    }

    /// Delete a component together with every record touching it; slots the
    /// deleted records held on other components are removed too.
    pub fn delete_component(&mut self, comp: &str) {
        let xs: Vec<Id> = self
            .crossings
            .iter()
            .filter(|(_, x)| x.over.comp == comp || x.under.comp == comp)
            .map(|(k, _)| k.clone())
            .collect();
        for x in xs {
            self.remove_crossing(&x);
        }
        let ps: Vec<Id> = self
            .piercings
            .iter()
            .filter(|(_, p)| p.disk == comp || p.strand.comp == comp)
            .map(|(k, _)| k.clone())
            .collect();
        for p in ps {
            self.remove_piercing(&p);
        }
        let bs: Vec<Id> = self
            .bands
            .iter()
            .filter(|(_, b)| {
                b.from.comp == comp
                    || b.to.comp == comp
                    || b.core.iter().any(|e| match e {
                        CoreEvent::Pierce { disk, .. } => disk == comp,
                        _ => e.slot().is_some_and(|s| s.comp == comp),
                    })
            })
            .map(|(k, _)| k.clone())
            .collect();
        for b in bs {
            // A band merely passing this component keeps existing with the
            // event dropped; bands attached to it disappear.
            let band = self.bands[&b].clone();
            if band.from.comp == comp || band.to.comp == comp {
                self.remove_band(&b);
            } else {
                let bm = self.bands.get_mut(&b).unwrap();
                bm.core.retain(|e| match e {
                    CoreEvent::Pierce { disk, .. } => disk != comp,
                    _ => e.slot().is_some_and(|s| s.comp != comp),
                });
            }
        }
        let vs: Vec<Id> = self
            .vertices
            .iter()
            .filter(|(_, v)| v.a.comp == comp || v.b.comp == comp)
            .map(|(k, _)| k.clone())
            .collect();
        for v in vs {
            self.remove_vertex(&v);
        }
        self.components.remove(comp);
    }

    /// Rename a component id everywhere.
    pub fn rename_component(&mut self, old: &str, new: &str) {
        if old == new {
            return;
        }
        if let Some(c) = self.components.remove(old) {
            self.components.insert(new.to_string(), c);
        }
        let fix = |r: &mut SlotRef| {
            if r.comp == old {
                r.comp = new.to_string();
            }
        };
        for x in self.crossings.values_mut() {
            fix(&mut x.over);
            fix(&mut x.under);
        }
        for p in self.piercings.values_mut() {
            fix(&mut p.strand);
            if p.disk == old {
                p.disk = new.to_string();
            }
        }
        for b in self.bands.values_mut() {
            fix(&mut b.from);
            fix(&mut b.to);
            for e in b.core.iter_mut() {
                match e {
                    CoreEvent::Over { at, .. } | CoreEvent::Under { at, .. } => fix(at),
                    CoreEvent::Pierce { disk, .. } => {
                        if disk == old {
                            *disk = new.to_string()
                        }
                    }
                }
            }
        }
        for v in self.vertices.values_mut() {
            fix(&mut v.a);
            fix(&mut v.b);
        }
    }

    /// Rewrite every reference to slot `old` as `new` (which may live on a
    /// different component).
    pub fn move_slot_ref(&mut self, old: &SlotRef, new: &SlotRef) {
        let fix = |r: &mut SlotRef| {
            if r == old {
                *r = new.clone();
            }
        };
        for x in self.crossings.values_mut() {
            fix(&mut x.over);
            fix(&mut x.under);
        }
        for p in self.piercings.values_mut() {
            fix(&mut p.strand);
        }
        for b in self.bands.values_mut() {
            fix(&mut b.from);
            fix(&mut b.to);
            for e in b.core.iter_mut() {
                if let CoreEvent::Over { at, .. } | CoreEvent::Under { at, .. } = e {
                    fix(at)
                }
            }
        }
        for v in self.vertices.values_mut() {
            fix(&mut v.a);
            fix(&mut v.b);
        }
    }

    /// Crossings whose two slots lie on `i` and `j` respectively (either
    /// order); `i == j` gives self-crossings.
    pub fn crossings_between(&self, i: &str, j: &str) -> Vec<(&Id, &Crossing)> {
        self.crossings
            .iter()
            .filter(|(_, x)| {
                (x.over.comp == i && x.under.comp == j) || (x.over.comp == j && x.under.comp == i)
            })
            .collect()
    }

    pub fn writhe(&self, i: &str) -> i64 {
        self.crossings_between(i, i).iter().map(|(_, x)| x.sign as i64).sum()
    }

    /// Signed piercings of the disk of `disk` by strands of `strand`.
    pub fn piercing_sum(&self, disk: &str, strand: &str) -> i64 {
        self.piercings
            .values()
            .filter(|p| p.disk == disk && p.strand.comp == strand)
            .map(|p| p.sign as i64)
            .sum()
    }

    /// Number of crossings plus piercings.
    pub fn event_count(&self) -> usize {
        self.crossings.len() + self.piercings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}
