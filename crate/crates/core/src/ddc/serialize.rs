use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::model::*;

pub fn component_line(id: &str, c: &Component) -> String {
    let mut s = format!("component {id} {} :", c.kind);
    for sl in &c.slots {
        s.push(' ');
        s.push_str(sl);
    }
    s
}

pub fn crossing_line(id: &str, x: &Crossing) -> String {
    format!("crossing {id} {} over={} under={}", sign_str(x.sign), x.over, x.under)
}

pub fn piercing_line(id: &str, p: &Piercing) -> String {
    format!("piercing {id} disk={} strand={} sign={}", p.disk, p.strand, sign_str(p.sign))
}

pub fn core_event_text(e: &CoreEvent) -> String {
    match e {
        CoreEvent::Over { at, sign } => format!("over({at},{})", sign_str(*sign)),
        CoreEvent::Under { at, sign } => format!("under({at},{})", sign_str(*sign)),
        CoreEvent::Pierce { disk, sign } => format!("pierce({disk},{})", sign_str(*sign)),
    }
}

pub fn band_line(id: &str, b: &Band) -> String {
    let mut s = format!("band {id} from={} to={} twists={} core=(", b.from, b.to, b.twists);
    for e in &b.core {
        s.push(' ');
        s.push_str(&core_event_text(e));
    }
    s.push_str(" )");
    s
}

pub fn vertex_line(keyword: &str, id: &str, v: &Vertex) -> String {
    format!("{keyword} {id} a={} b={} sign={} marking={}", v.a, v.b, sign_str(v.sign), v.marking)
}

impl Diagram {
    /// Canonical relabelling: slots become `s1..sn` in traversal order and
    /// crossings/piercings are numbered `X1..`/`P1..` in order of first
    /// appearance when walking components in id order.
    pub fn canonical(&self) -> Diagram {
        let comps = sorted_ids(self.components.keys());
        let mut slot_map: BTreeMap<SlotRef, SlotRef> = BTreeMap::new();
        for c in &comps {
            for (k, s) in self.components[c].slots.iter().enumerate() {
                slot_map.insert(SlotRef::new(c.clone(), s.clone()), SlotRef::new(c.clone(), format!("s{}", k + 1)));
            }
        }
        let m = |r: &SlotRef| slot_map.get(r).cloned().unwrap_or_else(|| r.clone());

        let uses = self.slot_uses();
        let mut xorder: Vec<Id> = Vec::new();
        let mut porder: Vec<Id> = Vec::new();
        for c in &comps {
            for s in &self.components[c].slots {
                if let Some(us) = uses.get(&SlotRef::new(c.clone(), s.clone())) {
                    for u in us {
                        match u {
                            SlotUse::Over(x) | SlotUse::Under(x) if !xorder.contains(x) => xorder.push(x.clone()),
                            SlotUse::Pierce(p) if !porder.contains(p) => porder.push(p.clone()),
                            _ => {}
                        }
                    }
                }
            }
        }
        for x in sorted_ids(self.crossings.keys()) {
            if !xorder.contains(&x) {
                xorder.push(x);
            }
        }
        for p in sorted_ids(self.piercings.keys()) {
            if !porder.contains(&p) {
                porder.push(p);
            }
        }

        let mut out = Diagram {
            name: self.name.clone(),
            resolutions_trivial: self.resolutions_trivial,
            r3: self.r3,
            ..Default::default()
        };
        for c in &comps {
            let comp = &self.components[c];
            out.components.insert(
                c.clone(),
                Component { kind: comp.kind, slots: (1..=comp.slots.len()).map(|k| format!("s{k}")).collect() },
            );
        }
        for (k, x) in xorder.iter().enumerate() {
            let cr = &self.crossings[x];
            out.crossings.insert(format!("X{}", k + 1), Crossing { sign: cr.sign, over: m(&cr.over), under: m(&cr.under) });
        }
        for (k, p) in porder.iter().enumerate() {
            let pi = &self.piercings[p];
            out.piercings.insert(format!("P{}", k + 1), Piercing { disk: pi.disk.clone(), strand: m(&pi.strand), sign: pi.sign });
        }
        for (id, b) in &self.bands {
            let core = b
                .core
                .iter()
                .map(|e| match e {
                    CoreEvent::Over { at, sign } => CoreEvent::Over { at: m(at), sign: *sign },
                    CoreEvent::Under { at, sign } => CoreEvent::Under { at: m(at), sign: *sign },
                    CoreEvent::Pierce { .. } => e.clone(),
                })
                .collect();
            out.bands.insert(id.clone(), Band { from: m(&b.from), to: m(&b.to), twists: b.twists, core });
        }
        for (id, v) in &self.vertices {
            out.vertices.insert(id.clone(), Vertex { a: m(&v.a), b: m(&v.b), sign: v.sign, marking: v.marking });
        }
        out
    }

    /// Canonical DDC text.
    pub fn to_text(&self) -> String {
        let c = self.canonical();
        let mut s = String::new();
        writeln!(s, "diagram {}", c.name).unwrap();
        c.write_body(&mut s, |_| true, "vertex");
        s
    }

    /// Lines for the records accepted by `keep` (a component filter);
    /// records are placed with the component of their first slot.
    pub(crate) fn write_body(&self, s: &mut String, keep: impl Fn(&str) -> bool, vertex_kw: &str) {
        if self.r3 > 0 {
            writeln!(s, "flag r3={}", self.r3).unwrap();
        }
        if let Some(t) = self.resolutions_trivial {
            writeln!(s, "flag resolutions_trivial={t}").unwrap();
        }
        self.write_records(s, keep, vertex_kw);
    }

    pub(crate) fn write_records(&self, s: &mut String, keep: impl Fn(&str) -> bool, vertex_kw: &str) {
        for id in sorted_ids(self.components.keys()) {
            if keep(&id) {
                writeln!(s, "{}", component_line(&id, &self.components[&id])).unwrap();
            }
        }
        for id in sorted_ids(self.crossings.keys()) {
            let x = &self.crossings[&id];
            if keep(&x.over.comp) && keep(&x.under.comp) {
                writeln!(s, "{}", crossing_line(&id, x)).unwrap();
            }
        }
        for id in sorted_ids(self.piercings.keys()) {
            let p = &self.piercings[&id];
            if keep(&p.disk) && keep(&p.strand.comp) {
                writeln!(s, "{}", piercing_line(&id, p)).unwrap();
            }
        }
        for id in sorted_ids(self.bands.keys()) {
            let b = &self.bands[&id];
            if keep(&b.from.comp) {
                writeln!(s, "{}", band_line(&id, b)).unwrap();
            }
        }
        for id in sorted_ids(self.vertices.keys()) {
            let v = &self.vertices[&id];
            if keep(&v.a.comp) && keep(&v.b.comp) {
                writeln!(s, "{}", vertex_line(vertex_kw, &id, v)).unwrap();
            }
        }
    }

    /// Structural equality after canonicalization.
    pub fn same_as(&self, other: &Diagram) -> bool {
        let mut a = self.canonical();
        a.name = other.name.clone();
        a == other.canonical()
    }
}
