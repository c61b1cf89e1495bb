use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use handlecalc::engine::{apply_move_line, invariant_or_error, State};
use handlecalc::Result;
use serde::{Deserialize, Serialize};

/// Invariants watched when a session does not name its own.
pub const DEFAULT_WATCH: &[&str] = &["h1", "h2", "pi1ab", "chi", "recognize"];

/// One diagram under edit. The undo stack holds canonical serializations
/// of earlier states, newest last.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub state: State,
    pub undo: Vec<String>,
    pub watch: Vec<String>,
    /// Read Kirby diagrams as closed 4-manifolds.
    pub closed: bool,
}

impl Session {
    pub fn new(id: String, text: &str, watch: Option<Vec<String>>, closed: bool) -> Result<Session> {
        let state = State::parse(text)?.canonical();
        let watch = watch.unwrap_or_else(|| DEFAULT_WATCH.iter().map(|s| s.to_string()).collect());
        Ok(Session { id, state, undo: vec![], watch, closed })
    }

    pub fn text(&self) -> String {
        self.state.to_text()
    }

    /// Apply a move line; on success the old state goes on the undo stack.
    pub fn apply(&mut self, line: &str) -> Result<State> {
        let next = apply_move_line(&self.state, line)?.canonical();
        let prev = std::mem::replace(&mut self.state, next);
        self.undo.push(prev.to_text());
        Ok(prev)
    }

    /// Step back one move. Returns the state undone, or `None` at the start.
    pub fn undo(&mut self) -> Result<Option<State>> {
        let Some(text) = self.undo.pop() else {
            return Ok(None);
        };
        let prev = State::parse(&text)?;
        Ok(Some(std::mem::replace(&mut self.state, prev)))
    }

    pub fn invariants(&self, keys: &[String]) -> BTreeMap<String, String> {
        keys.iter().map(|k| (k.clone(), invariant_or_error(&self.state, k, self.closed))).collect()
    }

    pub fn snapshot_path(dir: &Path, id: &str) -> PathBuf {
        dir.join(format!("session-{id}.json"))
    }

    pub fn save(&self, dir: &Path) -> std::io::Result<PathBuf> {
        let p = Self::snapshot_path(dir, &self.id);
        std::fs::write(&p, serde_json::to_string_pretty(self)?)?;
        Ok(p)
    }

    /// Every session snapshot found in `dir`.
    pub fn load_all(dir: &Path) -> std::io::Result<Vec<Session>> {
        let mut out = Vec::new();
        for e in std::fs::read_dir(dir)? {
            let p = e?.path();
            let is_snap = p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with("session-") && n.ends_with(".json"));
            if is_snap {
                let s: Session = serde_json::from_str(&std::fs::read_to_string(&p)?)?;
                out.push(s);
            }
        }
        Ok(out)
    }
}
