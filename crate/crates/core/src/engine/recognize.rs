use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::State;
use crate::ddc::{Diagram, Kind, SlotUse};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Recognized {
    EmptyS4orB5,
    DottedUnlink(usize),
    FramedZeroUnlink(usize),
    /// Hopf pairs with even and with odd intersection form.
    HopfPairs(usize, usize),
    Unknown,
}

impl fmt::Display for Recognized {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recognized::EmptyS4orB5 => write!(f, "EmptyS4orB5"),
            Recognized::DottedUnlink(k) => write!(f, "DottedUnlink({k})"),
            Recognized::FramedZeroUnlink(m) => write!(f, "FramedZeroUnlink({m})"),
            Recognized::HopfPairs(m, n) => write!(f, "HopfPairs({m},{n})"),
            Recognized::Unknown => write!(f, "Unknown"),
        }
    }
}

fn hopf_pairs(d: &Diagram) -> Option<(usize, usize)> {
    if !d.piercings.is_empty() || d.components.values().any(|c| !c.kind.is_framed()) {
        return None;
    }
    let mut seen = BTreeSet::new();
    let (mut even, mut odd) = (0, 0);
    for (id, c) in &d.components {
        if seen.contains(id) {
            continue;
        }
        if c.slots.len() != 2 {
            return None;
        }
        let mut partner = None;
        let mut signs = Vec::new();
        for s in &c.slots {
            let x = match d.use_of(&crate::ddc::SlotRef::new(id.clone(), s.clone()))? {
                SlotUse::Over(x) | SlotUse::Under(x) => d.crossings[&x].clone(),
                _ => return None,
            };
            let other = if x.over.comp == *id { x.under.comp.clone() } else { x.over.comp.clone() };
            if other == *id || partner.as_ref().is_some_and(|p| *p != other) {
                return None;
            }
            partner = Some(other);
            signs.push(x.sign);
        }
        let p = partner?;
        if signs[0] != signs[1] || d.components[&p].slots.len() != 2 {
            return None;
        }
        let (a, b) = (c.kind.framing()?, d.components[&p].kind.framing()?);
        if (a * b - 1).abs() != 1 {
            return None;
        }
        if a % 2 == 0 && b % 2 == 0 {
            even += 1;
        } else {
            odd += 1;
        }
        seen.insert(id.clone());
        seen.insert(p);
    }
    Some((even, odd))
}

fn recognize_diagram(d: &Diagram) -> Recognized {
    if !d.bands.is_empty() || !d.vertices.is_empty() || d.r3 != 0 {
        return Recognized::Unknown;
    }
    if d.components.is_empty() {
        return Recognized::EmptyS4orB5;
    }
    let split = d.crossings.is_empty() && d.piercings.is_empty() && d.components.values().all(|c| c.slots.is_empty());
    let n = d.components.len();
    if split && d.components.values().all(|c| c.kind == Kind::Dotted) {
        return Recognized::DottedUnlink(n);
    }
    if split && d.components.values().all(|c| c.kind == Kind::Framed(0)) {
        return Recognized::FramedZeroUnlink(n);
    }
    match hopf_pairs(d) {
        Some((m, k)) => Recognized::HopfPairs(m, k),
        None => Recognized::Unknown,
    }
}

/// Exact pattern match against a few standard diagrams; anything else is
/// `Unknown`.
pub fn canonical_recognize(s: &State) -> Recognized {
    match s {
        State::Kirby(d) => recognize_diagram(d),
        State::Heegaard(h) => {
            if h.sides.is_empty() {
                recognize_diagram(&h.diagram)
            } else {
                Recognized::Unknown
            }
        }
    }
}
