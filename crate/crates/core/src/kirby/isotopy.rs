use std::fmt;

use serde::{Deserialize, Serialize};

use crate::args::{syntax, Args};
use crate::ddc::{Diagram, Id, SlotRef, SlotUse};
use crate::{reject, Result};

/// The closed list of local isotopy rewrites. Anchors of the creating
/// rewrites name the slot after which new slots go; slot `^` means the head
/// of the list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rewrite {
    /// Swap `at` with the next slot (two piercings never commute).
    Commute { at: SlotRef },
    /// Remove an adjacent Reidemeister II pair, or two adjacent opposite
    /// piercings of one disk, starting at `at`.
    Cancel { at: SlotRef },
    /// Remove a kink formed by `at` and the next slot.
    Uncurl { at: SlotRef },
    Curl { at: SlotRef, sign: i8 },
    /// Push `over`'s strand across `under`'s strand, making two crossings.
    Poke { over: SlotRef, under: SlotRef, sign: i8 },
    /// Push a finger of the strand through a disk and back.
    PokePierce { at: SlotRef, disk: Id, sign: i8 },
}

impl Rewrite {
    /// Rewrites that only remove or reorder events.
    pub fn is_creating(&self) -> bool {
        matches!(self, Rewrite::Curl { .. } | Rewrite::Poke { .. } | Rewrite::PokePierce { .. })
    }

    /// Parse `commute at=K.s1` and the like.
    pub fn parse(text: &str) -> Result<Rewrite> {
        let a = Args::parse(text);
        match a.pos.as_slice() {
            [w] => Self::from_args(&a, w),
            _ => syntax(format!("bad isotopy rewrite `{}`", text.trim())),
        }
    }

    pub(crate) fn from_args(a: &Args, word: &str) -> Result<Rewrite> {
        Ok(match word {
            "commute" => Rewrite::Commute { at: a.slot("at")? },
            "cancel" => Rewrite::Cancel { at: a.slot("at")? },
            "uncurl" => Rewrite::Uncurl { at: a.slot("at")? },
            "curl" => Rewrite::Curl { at: a.slot("at")?, sign: a.sign_or("sign", 1)? },
            "poke" => Rewrite::Poke { over: a.slot("over")?, under: a.slot("under")?, sign: a.sign_or("sign", 1)? },
            "pokepierce" => Rewrite::PokePierce { at: a.slot("at")?, disk: a.req("disk")?.to_string(), sign: a.sign_or("sign", 1)? },
            _ => return syntax(format!("unknown isotopy rewrite `{word}`")),
        })
    }
}

fn sg(s: i8) -> &'static str {
    crate::ddc::sign_str(s)
}

impl fmt::Display for Rewrite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rewrite::Commute { at } => write!(f, "commute at={at}"),
            Rewrite::Cancel { at } => write!(f, "cancel at={at}"),
            Rewrite::Uncurl { at } => write!(f, "uncurl at={at}"),
            Rewrite::Curl { at, sign } => write!(f, "curl at={at} sign={}", sg(*sign)),
            Rewrite::Poke { over, under, sign } => write!(f, "poke over={over} under={under} sign={}", sg(*sign)),
            Rewrite::PokePierce { at, disk, sign } => write!(f, "pokepierce at={at} disk={disk} sign={}", sg(*sign)),
        }
    }
}

/// Slot following `r` cyclically on its component.
pub fn next_slot(d: &Diagram, r: &SlotRef) -> Option<SlotRef> {
    let c = d.components.get(&r.comp)?;
    let i = c.slots.iter().position(|s| *s == r.slot)?;
    if c.slots.len() < 2 {
        return None;
    }
    Some(SlotRef::new(r.comp.clone(), c.slots[(i + 1) % c.slots.len()].clone()))
}

fn adjacent(d: &Diagram, a: &SlotRef, b: &SlotRef) -> bool {
    next_slot(d, a).as_ref() == Some(b) || next_slot(d, b).as_ref() == Some(a)
}

/// `None` for the head anchor `^`.
pub(crate) fn anchor(d: &Diagram, r: &SlotRef) -> Result<Option<String>> {
    if d.kind(&r.comp).is_none() {
        return reject(format!("component {} absent", r.comp));
    }
    if r.slot == "^" {
        return Ok(None);
    }
    if !d.has_slot(r) {
        return reject(format!("site not found: slot {r}"));
    }
    Ok(Some(r.slot.clone()))
}

fn pair(d: &Diagram, at: &SlotRef) -> Result<(SlotRef, SlotUse, SlotUse)> {
    if !d.has_slot(at) {
        return reject(format!("site not found: slot {at}"));
    }
    let Some(t) = next_slot(d, at) else {
        return reject(format!("slot {at} has no neighbour"));
    };
    match (d.use_of(at), d.use_of(&t)) {
        (Some(u), Some(v)) => Ok((t, u, v)),
        _ => reject(format!("slots {at} and {t} are not singly claimed")),
    }
}

pub fn apply_rewrite(d: &Diagram, rw: &Rewrite) -> Result<Diagram> {
    let mut out = d.clone();
    match rw {
        Rewrite::Commute { at } => {
            let (t, u, v) = pair(d, at)?;
            if matches!(u, SlotUse::Pierce(_)) && matches!(v, SlotUse::Pierce(_)) {
                return reject(format!("piercings at {at} and {t} do not commute"));
            }
            let foot = |x: &SlotUse| matches!(x, SlotUse::BandFrom(_) | SlotUse::BandTo(_));
            let vert = |x: &SlotUse| matches!(x, SlotUse::VertexA(_) | SlotUse::VertexB(_));
            if (foot(&u) && foot(&v)) || (foot(&u) && vert(&v)) || (vert(&u) && foot(&v)) {
                return reject(format!("slots {at} and {t} pass only by a band move"));
            }
            let slots = &mut out.components.get_mut(&at.comp).unwrap().slots;
            let i = slots.iter().position(|s| *s == at.slot).unwrap();
            let j = slots.iter().position(|s| *s == t.slot).unwrap();
            slots.swap(i, j);
        }
        Rewrite::Cancel { at } => {
            let (t, u, v) = pair(d, at)?;
            match (&u, &v) {
                (SlotUse::Over(x), SlotUse::Over(y)) | (SlotUse::Under(x), SlotUse::Under(y)) if x != y => {
                    let (cx, cy) = (&d.crossings[x], &d.crossings[y]);
                    if cx.sign != -cy.sign {
                        return reject(format!("crossings {x} and {y} have equal signs"));
                    }
                    let px = if cx.over == *at { &cx.under } else { &cx.over };
                    let py = if cy.over == t { &cy.under } else { &cy.over };
                    if px.comp != py.comp || !adjacent(d, px, py) {
                        return reject(format!("crossings {x} and {y} do not form a bigon"));
                    }
                    out.remove_crossing(x);
                    out.remove_crossing(y);
                }
                (SlotUse::Pierce(x), SlotUse::Pierce(y)) => {
                    let (px, py) = (&d.piercings[x], &d.piercings[y]);
                    if px.disk != py.disk || px.sign != -py.sign {
                        return reject(format!("piercings {x} and {y} do not cancel"));
                    }
                    out.remove_piercing(x);
                    out.remove_piercing(y);
                }
                _ => return reject(format!("no cancelling pair at {at}")),
            }
        }
        Rewrite::Uncurl { at } => {
            let (_, u, v) = pair(d, at)?;
            match (&u, &v) {
                (SlotUse::Over(x), SlotUse::Under(y)) | (SlotUse::Under(x), SlotUse::Over(y)) if x == y => {
                    out.remove_crossing(x);
                }
                _ => return reject(format!("no kink at {at}")),
            }
        }
        Rewrite::Curl { at, sign } => {
            let a = anchor(d, at)?;
            let s1 = out.insert_slot(&at.comp, a.as_deref());
            let s2 = out.insert_slot(&at.comp, Some(&s1.slot));
            out.add_crossing(*sign, s1, s2);
        }
        Rewrite::Poke { over, under, sign } => {
            let (a, b) = (anchor(d, over)?, anchor(d, under)?);
            if over == under {
                return reject("poke needs two distinct anchors");
            }
            let a1 = out.insert_slot(&over.comp, a.as_deref());
            let a2 = out.insert_slot(&over.comp, Some(&a1.slot));
            let b1 = out.insert_slot(&under.comp, b.as_deref());
            let b2 = out.insert_slot(&under.comp, Some(&b1.slot));
            out.add_crossing(*sign, a1, b1);
            out.add_crossing(-*sign, a2, b2);
        }
        Rewrite::PokePierce { at, disk, sign } => {
            let a = anchor(d, at)?;
            match d.kind(disk) {
                Some(k) if k.has_disk() => {}
                _ => return reject(format!("{disk} has no disk to pierce")),
            }
            if at.comp == *disk || d.kind(&at.comp).is_some_and(|k| k.is_dotted()) {
                return reject(format!("{} cannot pierce {disk}", at.comp));
            }
            let s1 = out.insert_slot(&at.comp, a.as_deref());
            let s2 = out.insert_slot(&at.comp, Some(&s1.slot));
            out.add_piercing(disk, s1, *sign);
            out.add_piercing(disk, s2, -*sign);
        }
    }
    Ok(out)
}

/// All applicable non-creating rewrites, in component/slot order.
pub fn rewrite_sites(d: &Diagram) -> Vec<Rewrite> {
    let mut out = Vec::new();
    for c in crate::ddc::sorted_ids(d.components.keys()) {
        for s in &d.components[&c].slots {
            let at = SlotRef::new(c.clone(), s.clone());
            for rw in [Rewrite::Cancel { at: at.clone() }, Rewrite::Uncurl { at: at.clone() }, Rewrite::Commute { at: at.clone() }] {
                if apply_rewrite(d, &rw).is_ok() {
                    out.push(rw);
                }
            }
        }
    }
    out
}
