use super::model::*;

impl Diagram {
    /// Violated structural invariants; empty iff the code is well formed.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let uses = self.slot_uses();
        for (cid, c) in &self.components {
            for s in &c.slots {
                let r = SlotRef::new(cid.clone(), s.clone());
                match uses.get(&r).map(Vec::len).unwrap_or(0) {
                    0 => out.push(format!("unused slot {r}")),
                    1 => {}
                    _ => out.push(format!("slot used more than once {r}")),
                }
            }
        }
        for r in uses.keys() {
            if !self.has_slot(r) {
                out.push(format!("dangling slot reference {r}"));
            }
        }
        for (id, x) in &self.crossings {
            if x.over == x.under {
                out.push(format!("crossing {id} uses one slot twice"));
            }
            if x.sign != 1 && x.sign != -1 {
                out.push(format!("crossing {id} has bad sign"));
            }
        }
        for (id, p) in &self.piercings {
            match self.kind(&p.disk) {
                None => out.push(format!("piercing {id} names missing disk {}", p.disk)),
                Some(k) if !k.has_disk() => out.push(format!("piercing {id} disk {} is not dotted", p.disk)),
                _ => {}
            }
            if self.kind(&p.strand.comp) == Some(Kind::Dotted) {
                out.push(format!("dotted self-piercing: piercing {id} on {}", p.strand));
            }
            if p.strand.comp == p.disk {
                out.push(format!("piercing {id} pierces its own disk"));
            }
        }
        for (id, b) in &self.bands {
            for end in [&b.from, &b.to] {
                if self.kind(&end.comp) != Some(Kind::Surface) {
                    out.push(format!("band off surface link: band {id} end {end}"));
                }
            }
            for e in &b.core {
                if let CoreEvent::Pierce { disk, .. } = e {
                    match self.kind(disk) {
                        Some(k) if k.has_disk() => {}
                        _ => out.push(format!("band {id} core pierces non-disk {disk}")),
                    }
                }
            }
        }
        for (id, v) in &self.vertices {
            if v.a == v.b {
                out.push(format!("vertex {id} uses one slot twice"));
            }
            for end in [&v.a, &v.b] {
                if self.kind(&end.comp) != Some(Kind::Surface) {
                    out.push(format!("vertex off surface link: vertex {id} end {end}"));
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Only dotted and framed components, no bands or vertices.
    pub fn is_kirby(&self) -> bool {
        self.components.values().all(|c| !c.kind.is_surface()) && self.bands.is_empty() && self.vertices.is_empty()
    }
}
