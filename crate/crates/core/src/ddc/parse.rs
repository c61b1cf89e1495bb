use std::collections::{BTreeMap, BTreeSet};

use super::model::*;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, col, message: message.into() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub enum Side {
    Alpha,
    Beta,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Alpha => "alpha",
            Side::Beta => "beta",
        }
    }
    pub fn other(self) -> Side {
        match self {
            Side::Alpha => Side::Beta,
            Side::Beta => Side::Alpha,
        }
    }
}

/// Whitespace tokens with 1-based columns. A token with an unclosed `(`
/// swallows following tokens until the parentheses balance.
pub fn tokenize(line: &str) -> Vec<(usize, String)> {
    let mut raw = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                raw.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        raw.push((s, &line[s..]));
    }
    let mut out: Vec<(usize, String)> = Vec::new();
    let mut depth = 0i32;
    for (col, t) in raw {
        let d: i32 = t.chars().map(|c| match c { '(' => 1, ')' => -1, _ => 0 }).sum();
        if depth > 0 {
            let last = out.last_mut().unwrap();
            last.1.push(' ');
            last.1.push_str(t);
        } else {
            out.push((col + 1, t.to_string()));
        }
        depth += d;
    }
    out
}

pub fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub fn parse_sign(s: &str) -> Option<i8> {
    match s {
        "+" | "+1" | "1" => Some(1),
        "-" | "-1" => Some(-1),
        _ => None,
    }
}

pub fn parse_slot_ref(s: &str) -> Option<SlotRef> {
    let (c, sl) = s.split_once('.')?;
    if c.is_empty() || sl.is_empty() || sl.contains('.') {
        return None;
    }
    Some(SlotRef::new(c, sl))
}

/// `over(C.s,+)`, `under(C.s,-)` or `pierce(D,+)`.
pub fn parse_core_event(tok: &str) -> Option<CoreEvent> {
    let open = tok.find('(')?;
    if !tok.ends_with(')') {
        return None;
    }
    let head = &tok[..open];
    let inner = &tok[open + 1..tok.len() - 1];
    let (a, s) = inner.split_once(',')?;
    let sign = parse_sign(s.trim())?;
    let a = a.trim();
    match head {
        "over" => Some(CoreEvent::Over { at: parse_slot_ref(a)?, sign }),
        "under" => Some(CoreEvent::Under { at: parse_slot_ref(a)?, sign }),
        "pierce" => {
            if a.is_empty() || a.contains('.') {
                None
            } else {
                Some(CoreEvent::Pierce { disk: a.to_string(), sign })
            }
        }
        _ => None,
    }
}

/// Split the inside of a `key=( ... )` group into tokens.
pub fn group_items(v: &str) -> Option<Vec<String>> {
    let v = v.trim();
    let inner = v.strip_prefix('(')?.strip_suffix(')')?;
    Some(tokenize(inner).into_iter().map(|(_, t)| t).collect())
}

pub(crate) struct Parsed {
    pub diagram: Diagram,
    pub sides: BTreeMap<Id, Side>,
    pub xvertices: BTreeSet<Id>,
    /// Heegaard header directives: (key, value, line).
    pub header: Vec<(String, String, usize)>,
    pub heegaard: bool,
}

struct Kv<'a> {
    line: usize,
    items: Vec<(usize, &'a str, &'a str)>,
}

impl<'a> Kv<'a> {
    fn new(line: usize, toks: &'a [(usize, String)]) -> Result<Self, ParseError> {
        let mut items = Vec::new();
        for (col, t) in toks {
            match t.split_once('=') {
                Some((k, v)) => items.push((*col, k, v)),
                None => return err(line, *col, format!("expected key=value, found `{t}`")),
            }
        }
        Ok(Kv { line, items })
    }
    fn get(&self, key: &str, anchor_col: usize) -> Result<(usize, &'a str), ParseError> {
        self.items
            .iter()
            .find(|(_, k, _)| *k == key)
            .map(|(c, _, v)| (*c, *v))
            .ok_or(ParseError { line: self.line, col: anchor_col, message: format!("missing `{key}=`") })
    }
    fn slot(&self, key: &str, anchor: usize, refs: &mut Vec<(usize, usize, SlotRef)>) -> Result<SlotRef, ParseError> {
        let (c, v) = self.get(key, anchor)?;
        let r = parse_slot_ref(v).ok_or(ParseError { line: self.line, col: c, message: format!("bad slot reference `{v}`") })?;
        refs.push((self.line, c, r.clone()));
        Ok(r)
    }
    fn sign(&self, key: &str, anchor: usize) -> Result<i8, ParseError> {
        let (c, v) = self.get(key, anchor)?;
        parse_sign(v).ok_or(ParseError { line: self.line, col: c, message: format!("bad sign `{v}`") })
    }
}

pub(crate) fn parse_generic(text: &str, allow_heegaard: bool) -> Result<Parsed, ParseError> {
    let mut d = Diagram::new("untitled");
    let mut sides = BTreeMap::new();
    let mut xvertices = BTreeSet::new();
    let mut header = Vec::new();
    let mut heegaard = false;
    let mut side: Option<Side> = None;
    let mut seen_header = false;
    let mut ids: BTreeSet<String> = BTreeSet::new();
    let mut slot_refs: Vec<(usize, usize, SlotRef)> = Vec::new();
    let mut disk_refs: Vec<(usize, usize, Id)> = Vec::new();

    for (ln0, raw) in text.lines().enumerate() {
        let ln = ln0 + 1;
        let toks = tokenize(strip_comment(raw));
        if toks.is_empty() {
            continue;
        }
        let (c0, head) = (&toks[0].0, toks[0].1.as_str());
        let c0 = *c0;
        let mut claim = |id: &str, col: usize| -> Result<(), ParseError> {
            if !ids.insert(id.to_string()) {
                return err(ln, col, format!("duplicate id {id}"));
            }
            Ok(())
        };
        match head {
            "diagram" | "heegaard" => {
                if head == "heegaard" && !allow_heegaard {
                    return err(ln, c0, "heegaard header in a plain diagram");
                }
                if seen_header {
                    return err(ln, c0, "repeated header");
                }
                seen_header = true;
                heegaard = head == "heegaard";
                let name: Vec<&str> = toks[1..].iter().map(|(_, t)| t.as_str()).collect();
                d.name = if name.is_empty() { "untitled".into() } else { name.join(" ") };
            }
            "alpha:" | "beta:" | "base:" if allow_heegaard => {
                side = match head {
                    "alpha:" => Some(Side::Alpha),
                    "beta:" => Some(Side::Beta),
                    _ => None,
                };
            }
            "asserted_k" | "asserted_r" | "class" if allow_heegaard => {
                if toks.len() != 2 {
                    return err(ln, c0, format!("`{head}` takes one value"));
                }
                header.push((head.to_string(), toks[1].1.clone(), ln));
            }
            "component" => {
                if toks.len() < 4 || toks[3].1 != ":" {
                    return err(ln, c0, "expected `component <id> <kind> : <slots>`");
                }
                let id = toks[1].1.clone();
                claim(&id, toks[1].0)?;
                let kt = toks[2].1.as_str();
                let kind = match kt {
                    "dotted" => Kind::Dotted,
                    "surface" => Kind::Surface,
                    _ => match kt.strip_prefix("framed:").and_then(|m| m.parse::<i64>().ok()) {
                        Some(m) => Kind::Framed(m),
                        None => return err(ln, toks[2].0, format!("bad component kind `{kt}`")),
                    },
                };
                let mut slots = Vec::new();
                for (c, s) in &toks[4..] {
                    if s.contains('.') || s.contains('=') {
                        return err(ln, *c, format!("bad slot name `{s}`"));
                    }
                    if slots.contains(s) {
                        return err(ln, *c, format!("duplicate slot {s}"));
                    }
                    slots.push(s.clone());
                }
                if let Some(sd) = side {
                    sides.insert(id.clone(), sd);
                }
                d.components.insert(id, Component { kind, slots });
            }
            "crossing" => {
                if toks.len() != 5 {
                    return err(ln, c0, "expected `crossing <id> <sign> over=<slot> under=<slot>`");
                }
                let id = toks[1].1.clone();
                claim(&id, toks[1].0)?;
                let sign = parse_sign(&toks[2].1).ok_or(ParseError { line: ln, col: toks[2].0, message: "bad sign".into() })?;
                let kv = Kv::new(ln, &toks[3..])?;
                let over = kv.slot("over", c0, &mut slot_refs)?;
                let under = kv.slot("under", c0, &mut slot_refs)?;
                d.crossings.insert(id, Crossing { sign, over, under });
            }
            "piercing" => {
                if toks.len() < 2 {
                    return err(ln, c0, "missing piercing id");
                }
                let id = toks[1].1.clone();
                claim(&id, toks[1].0)?;
                let kv = Kv::new(ln, &toks[2..])?;
                let (dc, disk) = kv.get("disk", c0)?;
                disk_refs.push((ln, dc, disk.to_string()));
                let strand = kv.slot("strand", c0, &mut slot_refs)?;
                let sign = kv.sign("sign", c0)?;
                d.piercings.insert(id, Piercing { disk: disk.to_string(), strand, sign });
            }
            "band" => {
                if toks.len() < 2 {
                    return err(ln, c0, "missing band id");
                }
                let id = toks[1].1.clone();
                claim(&id, toks[1].0)?;
                let kv = Kv::new(ln, &toks[2..])?;
                let from = kv.slot("from", c0, &mut slot_refs)?;
                let to = kv.slot("to", c0, &mut slot_refs)?;
                let twists = match kv.get("twists", c0) {
                    Ok((c, v)) => v.parse::<i64>().map_err(|_| ParseError { line: ln, col: c, message: format!("bad twist count `{v}`") })?,
                    Err(_) => 0,
                };
                let mut core = Vec::new();
                if let Ok((cc, v)) = kv.get("core", c0) {
                    let items = group_items(v).ok_or(ParseError { line: ln, col: cc, message: "core must be `( ... )`".into() })?;
                    for it in items {
                        let e = parse_core_event(&it).ok_or(ParseError { line: ln, col: cc, message: format!("bad core event `{it}`") })?;
                        match &e {
                            CoreEvent::Pierce { disk, .. } => disk_refs.push((ln, cc, disk.clone())),
                            _ => slot_refs.push((ln, cc, e.slot().unwrap().clone())),
                        }
                        core.push(e);
                    }
                }
                d.bands.insert(id, Band { from, to, twists, core });
            }
            "vertex" | "xvertex" => {
                if head == "xvertex" && !allow_heegaard {
                    return err(ln, c0, "xvertex outside a heegaard file");
                }
                if toks.len() < 2 {
                    return err(ln, c0, "missing vertex id");
                }
                let id = toks[1].1.clone();
                claim(&id, toks[1].0)?;
                let kv = Kv::new(ln, &toks[2..])?;
                let a = kv.slot("a", c0, &mut slot_refs)?;
                let b = kv.slot("b", c0, &mut slot_refs)?;
                let sign = kv.sign("sign", c0)?;
                let (mc, m) = kv.get("marking", c0)?;
                let marking = match m {
                    "ac" => Marking::Ac,
                    "bd" => Marking::Bd,
                    _ => return err(ln, mc, format!("bad marking `{m}`")),
                };
                if head == "xvertex" {
                    xvertices.insert(id.clone());
                }
                d.vertices.insert(id, Vertex { a, b, sign, marking });
            }
            "flag" => {
                for (c, t) in &toks[1..] {
                    match t.split_once('=') {
                        Some(("resolutions_trivial", "true")) => d.resolutions_trivial = Some(true),
                        Some(("resolutions_trivial", "false")) => d.resolutions_trivial = Some(false),
                        Some(("r3", v)) => {
                            d.r3 = v.parse().map_err(|_| ParseError { line: ln, col: *c, message: format!("bad r3 `{v}`") })?
                        }
                        _ => return err(ln, *c, format!("unknown flag `{t}`")),
                    }
                }
            }
            _ => return err(ln, c0, format!("unknown directive `{head}`")),
        }
    }

    for (ln, col, r) in &slot_refs {
        if !d.has_slot(r) {
            return err(*ln, *col, format!("dangling slot reference {r}"));
        }
    }
    for (ln, col, c) in &disk_refs {
        if !d.components.contains_key(c) {
            return err(*ln, *col, format!("undefined component {c}"));
        }
    }
    Ok(Parsed { diagram: d, sides, xvertices, header, heegaard })
}

/// Parse DDC source into a diagram.
pub fn parse_ddc(text: &str) -> Result<Diagram, ParseError> {
    Ok(parse_generic(text, false)?.diagram)
}
