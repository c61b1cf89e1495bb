use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use serde::{Deserialize, Serialize};

use super::State;
use crate::ddc::{Diagram, Id, Kind, SlotRef};
use crate::heegaard::{apply_heegaard, applicable_heegaard_moves, HeegaardMove};
use crate::kirby::{annihilable_pairs, apply_kirby, rewrite_sites, KirbyMove, Rewrite, SlideBand};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best: State,
    /// Move lines taking the input to `best`, valid on canonical states.
    pub witness: Vec<String>,
    pub explored: usize,
}

/// A move lifted to the state's own move language.
#[derive(Clone, Debug)]
enum Lifted {
    Kirby(KirbyMove),
    Heegaard(HeegaardMove),
}

impl Lifted {
    fn text(&self) -> String {
        match self {
            Lifted::Kirby(m) => m.to_string(),
            Lifted::Heegaard(m) => m.to_string(),
        }
    }
}

fn lift(s: &State, m: KirbyMove) -> Lifted {
    match s {
        State::Kirby(_) => Lifted::Kirby(m),
        State::Heegaard(_) => Lifted::Heegaard(HeegaardMove::Base(m)),
    }
}

fn apply(s: &State, m: &Lifted) -> Option<State> {
    match (s, m) {
        (State::Kirby(d), Lifted::Kirby(k)) => apply_kirby(d, k).ok().map(|d| State::Kirby(d.canonical())),
        (State::Heegaard(h), Lifted::Heegaard(k)) => apply_heegaard(h, k).ok().map(|h| State::Heegaard(h.canonical())),
        _ => None,
    }
}

fn prev_slot(d: &Diagram, r: &SlotRef) -> Option<String> {
    let slots = &d.components[&r.comp].slots;
    let i = slots.iter().position(|s| *s == r.slot)?;
    Some(slots[(i + slots.len() - 1) % slots.len()].clone())
}

/// Slides of a framed strand over a 0-framed circle that meets one
/// dotted disk once, oriented so the new piercing opposes the old one.
fn meridian_slides(d: &Diagram) -> Vec<(Id, KirbyMove)> {
    let mut out = Vec::new();
    for dot in d.dotted_ids() {
        let through: Vec<_> = d.piercings.values().filter(|p| p.disk == dot).collect();
        for m in d.framed_ids() {
            if !d.kind(&m).is_some_and(Kind::is_framed) {
                continue;
            }
            let mine: Vec<_> = through.iter().filter(|p| p.strand.comp == m).collect();
            if mine.len() != 1 {
                continue;
            }
            let tau = mine[0].sign;
            let mut to_anchors: Vec<SlotRef> = vec![SlotRef::new(m.clone(), "^")];
            to_anchors.extend(d.components[&m].slots.iter().map(|s| SlotRef::new(m.clone(), s.clone())));
            for p in through.iter().filter(|p| p.strand.comp != m) {
                let k: &Id = &p.strand.comp;
                if !d.kind(k).is_some_and(Kind::is_framed) {
                    continue;
                }
                let orient = -p.sign * tau;
                let mut from_anchors = vec![p.strand.clone()];
                if let Some(s) = prev_slot(d, &p.strand) {
                    if s != p.strand.slot {
                        from_anchors.push(SlotRef::new(k.clone(), s));
                    }
                }
                for from in &from_anchors {
                    for to in &to_anchors {
                        out.push((dot.clone(), KirbyMove::Slide22 {
                            i: k.clone(),
                            j: m.clone(),
                            band: SlideBand { from: from.clone(), to: to.clone(), orient, core: vec![] },
                        }));
                    }
                }
            }
        }
    }
    out
}

fn cancels(d: &Diagram) -> Vec<KirbyMove> {
    rewrite_sites(d)
        .into_iter()
        .filter(|r| matches!(r, Rewrite::Cancel { .. } | Rewrite::Uncurl { .. }))
        .map(KirbyMove::Isotopy)
        .collect()
}

/// Apply cancellations until none is left; returns applied move lines.
fn settle(mut s: State, moves: &mut Vec<String>) -> State {
    for _ in 0..256 {
        let Some(m) = cancels(s.diagram()).into_iter().map(|k| lift(&s, k)).find(|m| apply(&s, m).is_some()) else {
            break;
        };
        s = apply(&s, &m).unwrap();
        moves.push(m.text());
    }
    s
}

fn piercings_of(d: &Diagram, disk: &str) -> usize {
    d.piercings.values().filter(|p| p.disk == disk).count()
}

/// Successor states with the move lines producing them.
fn successors(s: &State) -> Vec<(Vec<String>, State)> {
    let d = s.diagram();
    let mut moves: Vec<Lifted> = Vec::new();
    match s {
        State::Kirby(_) => {
            moves.extend(annihilable_pairs(d).into_iter().map(Lifted::Kirby));
        }
        State::Heegaard(h) => {
            for m in applicable_heegaard_moves(h) {
                if matches!(m, HeegaardMove::Destab1 { .. } | HeegaardMove::Destab2 { .. } | HeegaardMove::Destab3 { .. } | HeegaardMove::Base(_)) {
                    moves.push(Lifted::Heegaard(m));
                }
            }
        }
    }
    moves.extend(rewrite_sites(d).into_iter().map(|r| lift(s, KirbyMove::Isotopy(r))));
    let mut out = Vec::new();
    for m in moves {
        if let Some(n) = apply(s, &m) {
            out.push((vec![m.text()], n));
        }
    }
    for (dot, k) in meridian_slides(d) {
        let m = lift(s, k);
        if let Some(n) = apply(s, &m) {
            let mut lines = vec![m.text()];
            let n = settle(n, &mut lines);
            if piercings_of(n.diagram(), &dot) < piercings_of(d, &dot) {
                out.push((lines, n));
            }
        }
    }
    out
}

type Key = ((usize, usize, usize), String);

fn key(s: &State) -> Key {
    (s.score(), s.to_text())
}

/// Best-first search from `start`, expanding at most `budget` nodes.
pub fn simplify_search(start: &State, budget: usize) -> SearchResult {
    let start = start.canonical();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut heap: BinaryHeap<Reverse<(Key, usize)>> = BinaryHeap::new();
    let mut nodes: Vec<(State, Vec<String>)> = vec![(start.clone(), vec![])];
    seen.insert(start.to_text());
    heap.push(Reverse((key(&start), 0)));
    let mut best = 0usize;
    let mut explored = 0;
    while let Some(Reverse((k, idx))) = heap.pop() {
        if explored >= budget.max(1) {
            break;
        }
        explored += 1;
        if k < key(&nodes[best].0) {
            best = idx;
        }
        if nodes[idx].0.diagram().is_empty() && nodes[idx].0.diagram().r3 == 0 {
            break;
        }
        let (state, path) = nodes[idx].clone();
        for (lines, n) in successors(&state) {
            let t = n.to_text();
            if seen.insert(t) {
                let mut p = path.clone();
                p.extend(lines);
                let kk = key(&n);
                nodes.push((n, p));
                heap.push(Reverse((kk, nodes.len() - 1)));
            }
        }
    }
    // nodes generated but never expanded can still be the best
    for (i, (n, _)) in nodes.iter().enumerate() {
        if key(n) < key(&nodes[best].0) {
            best = i;
        }
    }
    let (b, w) = nodes.swap_remove(best);
    SearchResult { best: b, witness: w, explored }
}
