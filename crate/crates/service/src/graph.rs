//! Abstract render graph and record deltas. No coordinates: layout is the
//! client's job.

use std::collections::BTreeMap;

use handlecalc::ddc::{band_line, component_line, core_event_text, crossing_line, piercing_line, vertex_line, Side};
use handlecalc::engine::State;
use handlecalc::Kind;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    /// Component id, or `C.s` for a slot.
    pub id: String,
    /// `component` or `slot`.
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<String>,
    /// `dotted`, `framed` or `surface` for components.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub handle: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub framing: Option<i64>,
    /// `base`, `alpha` or `beta`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<String>,
    /// Slot ids in traversal order, for components.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub slots: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    /// `crossing`, `piercing`, `band` or `vertex`.
    pub kind: String,
    pub from: String,
    pub to: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twists: Option<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub core: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marking: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

fn side_of(s: &State, comp: &str) -> String {
    match s {
        State::Kirby(_) => "base".into(),
        State::Heegaard(h) => match h.sides.get(comp) {
            Some(Side::Alpha) => "alpha".into(),
            Some(Side::Beta) => "beta".into(),
            None => "base".into(),
        },
    }
}

fn edge(id: &str, kind: &str, from: String, to: String, sign: i8) -> Edge {
    Edge { id: id.into(), kind: kind.into(), from, to, sign: Some(sign), twists: None, core: vec![], marking: None }
}

pub fn render_graph(s: &State) -> RenderGraph {
    let d = s.diagram();
    let mut g = RenderGraph::default();
    for (id, c) in &d.components {
        let handle = match c.kind {
            Kind::Dotted => "dotted",
            Kind::Framed(_) => "framed",
            Kind::Surface => "surface",
        };
        g.nodes.push(Node {
            id: id.clone(),
            kind: "component".into(),
            component: None,
            handle: Some(handle.into()),
            framing: c.kind.framing(),
            side: Some(side_of(s, id)),
            slots: c.slots.clone(),
        });
        for slot in &c.slots {
            g.nodes.push(Node {
                id: format!("{id}.{slot}"),
                kind: "slot".into(),
                component: Some(id.clone()),
                handle: None,
                framing: None,
                side: None,
                slots: vec![],
            });
        }
    }
    for (id, x) in &d.crossings {
        g.edges.push(edge(id, "crossing", x.over.to_string(), x.under.to_string(), x.sign));
    }
    for (id, p) in &d.piercings {
        g.edges.push(edge(id, "piercing", p.strand.to_string(), p.disk.clone(), p.sign));
    }
    for (id, b) in &d.bands {
        g.edges.push(Edge {
            id: id.clone(),
            kind: "band".into(),
            from: b.from.to_string(),
            to: b.to.to_string(),
            sign: None,
            twists: Some(b.twists),
            core: b.core.iter().map(core_event_text).collect(),
            marking: None,
        });
    }
    for (id, v) in &d.vertices {
        let mut e = edge(id, "vertex", v.a.to_string(), v.b.to_string(), v.sign);
        e.marking = Some(v.marking.to_string());
        g.edges.push(e);
    }
    g
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Delta {
    pub added: Vec<String>,
    pub removed: Vec<String>,
    pub changed: Vec<String>,
}

/// Record text keyed by record id.
fn records(s: &State) -> BTreeMap<String, String> {
    let d = s.diagram();
    let mut m = BTreeMap::new();
    for (id, c) in &d.components {
        m.insert(id.clone(), format!("{} {}", component_line(id, c), side_of(s, id)));
    }
    m.extend(d.crossings.iter().map(|(id, x)| (id.clone(), crossing_line(id, x))));
    m.extend(d.piercings.iter().map(|(id, p)| (id.clone(), piercing_line(id, p))));
    m.extend(d.bands.iter().map(|(id, b)| (id.clone(), band_line(id, b))));
    m.extend(d.vertices.iter().map(|(id, v)| (id.clone(), vertex_line("vertex", id, v))));
    m
}

/// Ids whose records appear, disappear or change between two states.
pub fn delta(before: &State, after: &State) -> Delta {
    let (a, b) = (records(before), records(after));
    let mut out = Delta::default();
    for (id, line) in &b {
        match a.get(id) {
            None => out.added.push(id.clone()),
            Some(old) if old != line => out.changed.push(id.clone()),
            _ => {}
        }
    }
    out.removed = a.keys().filter(|id| !b.contains_key(*id)).cloned().collect();
    out
}
