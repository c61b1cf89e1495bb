//! Scripts, invariant watching, simplification search and recognition.

mod recognize;
mod script;
mod search;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use recognize::*;
pub use script::*;
pub use search::*;

use crate::ddc::{parse_ddc, Diagram};
use crate::band::applicable_band_moves;
use crate::heegaard::{applicable_heegaard_moves, homology_5manifold, parse_hgd, pi1_heegaard, FiveKind, HeegaardDiagram};
use crate::kirby::{annihilable_pairs, apply_kirby, rewrite_sites, KirbyMove};
use crate::invariants::{abelianization, euler_of, hom_count, homology_4manifold, pi1_presentation, tietze_simplify, AbelianGroup, PermGroup, Presentation, DEFAULT_ORDER_BOUND};
use crate::{reject, Result};

/// A Kirby/banded-unlink diagram or a Heegaard diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "diagram", rename_all = "lowercase")]
pub enum State {
    Kirby(Diagram),
    Heegaard(HeegaardDiagram),
}

impl State {
    /// Parse `.ddc` or `.hgd` text, told apart by the header keyword.
    pub fn parse(text: &str) -> Result<State> {
        let heegaard = text
            .lines()
            .map(|l| crate::ddc::strip_comment(l).trim())
            .any(|l| l == "heegaard" || l.starts_with("heegaard "));
        if heegaard {
            Ok(State::Heegaard(parse_hgd(text)?))
        } else {
            Ok(State::Kirby(parse_ddc(text)?))
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            State::Kirby(d) => d.to_text(),
            State::Heegaard(h) => h.to_text(),
        }
    }

    pub fn canonical(&self) -> State {
        match self {
            State::Kirby(d) => State::Kirby(d.canonical()),
            State::Heegaard(h) => State::Heegaard(h.canonical()),
        }
    }

    /// The underlying combined diagram code.
    pub fn diagram(&self) -> &Diagram {
        match self {
            State::Kirby(d) => d,
            State::Heegaard(h) => &h.diagram,
        }
    }

    pub fn validate(&self) -> Vec<String> {
        match self {
            State::Kirby(d) => d.validate(),
            State::Heegaard(h) => h.validate(),
        }
    }

    /// Lexicographic simplification score: components, events, bands.
    pub fn score(&self) -> (usize, usize, usize) {
        let d = self.diagram();
        (d.components.len(), d.crossings.len() + d.piercings.len() + d.vertices.len(), d.bands.len())
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Kirby diagram part of a banded unlink (surfaces dropped).
fn kirby_part(d: &Diagram) -> Diagram {
    let mut k = d.clone();
    for c in d.surface_ids() {
        k.delete_component(&c);
    }
    k
}

/// Homology groups: 4-manifold groups for Kirby states, 5-manifold groups
/// for Heegaard states of their declared class.
pub fn homology_of(s: &State, closed: bool) -> Result<Vec<AbelianGroup>> {
    match s {
        State::Kirby(d) => homology_4manifold(&kirby_part(d), closed),
        State::Heegaard(h) => homology_5manifold(h, h.class.unwrap_or(FiveKind::ThreeHandlebody), None),
    }
}

pub fn pi1_of(s: &State) -> Presentation {
    match s {
        State::Kirby(d) => pi1_presentation(&kirby_part(d)),
        State::Heegaard(h) => pi1_heegaard(h),
    }
}

pub fn euler_of_state(s: &State, closed: bool) -> Result<i64> {
    match s {
        State::Kirby(_) => Ok(euler_of(&homology_of(s, closed)?)),
        State::Heegaard(h) => Ok(h.euler_class(h.class.unwrap_or(FiveKind::ThreeHandlebody))?.euler),
    }
}

/// Names accepted by [`invariant`].
pub const INVARIANT_KEYS: &[&str] =
    &["h0", "h1", "h2", "h3", "h4", "h5", "pi1", "pi1ab", "chi", "recognize", "components", "valid"];

/// One invariant as canonical text. `hom:<G>` and `surj:<G>` count
/// homomorphisms from π1 into a named permutation group.
pub fn invariant(s: &State, key: &str, closed: bool) -> Result<String> {
    if let Some(g) = key.strip_prefix("hom:").or_else(|| key.strip_prefix("surj:")) {
        let group = PermGroup::named(g).map_err(crate::Error::Rejected)?;
        let c = hom_count(&pi1_of(s), &group, DEFAULT_ORDER_BOUND).map_err(crate::Error::Rejected)?;
        return Ok(if key.starts_with("hom:") { c.total } else { c.surjective }.to_string());
    }
    if let Some(n) = key.strip_prefix('h').and_then(|n| n.parse::<usize>().ok()) {
        let hs = homology_of(s, closed)?;
        return match hs.get(n) {
            Some(g) => Ok(g.to_string()),
            None => Ok(AbelianGroup::trivial().to_string()),
        };
    }
    Ok(match key {
        "pi1" => tietze_simplify(&pi1_of(s), 100).to_string(),
        "pi1ab" => abelianization(&pi1_of(s)).to_string(),
        "chi" => euler_of_state(s, closed)?.to_string(),
        "recognize" => canonical_recognize(s).to_string(),
        "components" => s.diagram().components.len().to_string(),
        "valid" => (s.validate().is_empty()).to_string(),
        _ => return reject(format!("unknown invariant `{key}`")),
    })
}

/// [`invariant`] with errors folded into the value.
pub fn invariant_or_error(s: &State, key: &str, closed: bool) -> String {
    invariant(s, key, closed).unwrap_or_else(|e| format!("error: {e}"))
}

/// A move available in the current state: its kind and its script line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveOption {
    pub kind: String,
    pub line: String,
}

/// Moves whose preconditions hold now. Moves with free parameters (handle
/// slides, stabilizations) are not enumerated.
pub fn applicable_moves(s: &State) -> Vec<MoveOption> {
    let opt = |kind: &str, line: String| MoveOption { kind: kind.to_string(), line };
    match s {
        State::Kirby(d) => {
            let mut out: Vec<MoveOption> =
                annihilable_pairs(d).into_iter().map(|m| opt(m.kind_name(), m.to_string())).collect();
            if d.bands.is_empty() && d.surface_ids().is_empty() {
                for r in rewrite_sites(d) {
                    let m = KirbyMove::Isotopy(r);
                    if apply_kirby(d, &m).is_ok() {
                        out.push(opt(m.kind_name(), m.to_string()));
                    }
                }
            } else {
                out.extend(applicable_band_moves(d).into_iter().map(|m| opt(m.kind_name(), m.to_string())));
            }
            out
        }
        State::Heegaard(h) => applicable_heegaard_moves(h).into_iter().map(|m| opt(m.kind_name(), m.to_string())).collect(),
    }
}

/// Apply one `kirby`, `band` or `heegaard` move line.
pub fn apply_move_line(s: &State, line: &str) -> Result<State> {
    let d = Directive::parse(line)?;
    if !matches!(d, Directive::Kirby(_) | Directive::Band(_) | Directive::Heegaard(_)) {
        return Err(crate::Error::Syntax(format!("`{}` is not a move", line.trim())));
    }
    Ok(apply_directive(s, &d, std::path::Path::new("."))?.0)
}
