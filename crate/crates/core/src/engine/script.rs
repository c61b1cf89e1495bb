//! `.kms` move scripts.
//!
//! One directive per line; `#` starts a comment.
//!
//! ```text
//! load mazur.ddc
//! compile heegaard
//! watch h1,h2,pi1ab
//! heegaard kirby pair12 annihilate k=K d=D
//! simplify budget=200
//! expect recognize = EmptyS4orB5
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{invariant_or_error, simplify_search, State};
use crate::args::{syntax, Args};
use crate::band::{apply_band, BandMove};
use crate::ddc::{parse_ddc, strip_comment, Side};
use crate::heegaard::{
    apply_heegaard, double_kirby, gluck_cobordism, handlebody_heegaard, one_surgery, s2bundles_to_double,
    surgery_kirby, HeegaardMove,
};
use crate::invariants::AbelianGroup;
use crate::kirby::{apply_kirby, KirbyMove};
use crate::{reject, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Compile {
    Surgery(Side),
    Double,
    Heegaard,
    S2Double,
    Gluck { knot: String },
    OneSurgery { circle: String, framing: i64 },
    Base,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Op {
    Eq,
    Ne,
    Ge,
    Le,
}

impl Op {
    fn text(self) -> &'static str {
        match self {
            Op::Eq => "=",
            Op::Ne => "!=",
            Op::Ge => ">=",
            Op::Le => "<=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Directive {
    Load { path: String, closed: bool },
    Kirby(KirbyMove),
    Band(BandMove),
    Heegaard(HeegaardMove),
    Compile(Compile),
    Simplify { budget: usize },
    Expect { key: String, op: Op, value: String },
    Watch(Vec<String>),
}

impl Directive {
    pub fn parse(text: &str) -> Result<Directive> {
        let t = text.trim();
        let (head, rest) = t.split_once(char::is_whitespace).unwrap_or((t, ""));
        let rest = rest.trim();
        Ok(match head {
            "load" => {
                let w: Vec<&str> = rest.split_whitespace().collect();
                match w.as_slice() {
                    [p] => Directive::Load { path: p.to_string(), closed: false },
                    [p, "closed"] => Directive::Load { path: p.to_string(), closed: true },
                    _ => return syntax("expected `load <path> [closed]`"),
                }
            }
            "kirby" => Directive::Kirby(KirbyMove::parse(rest)?),
            "band" => Directive::Band(BandMove::parse(rest)?),
            "heegaard" => Directive::Heegaard(HeegaardMove::parse(rest)?),
            "compile" => {
                let a = Args::parse(rest);
                let c = match a.pos.first().map(String::as_str) {
                    Some("surgery") => Compile::Surgery(match a.get("side").unwrap_or("alpha") {
                        "alpha" => Side::Alpha,
                        "beta" => Side::Beta,
                        v => return syntax(format!("bad side `{v}`")),
                    }),
                    Some("double") => Compile::Double,
                    Some("heegaard") => Compile::Heegaard,
                    Some("s2double") => Compile::S2Double,
                    Some("gluck") => Compile::Gluck { knot: a.req("knot")?.to_string() },
                    Some("one-surgery") => {
                        Compile::OneSurgery { circle: a.req("circle")?.to_string(), framing: a.int_or("framing", 0)? }
                    }
                    Some("base") => Compile::Base,
                    _ => return syntax(format!("unknown compile target in `{t}`")),
                };
                Directive::Compile(c)
            }
            "simplify" => {
                let a = Args::parse(rest);
                let b = a.int_or("budget", 500)?;
                if b < 1 {
                    return syntax("budget must be at least 1");
                }
                Directive::Simplify { budget: b as usize }
            }
            "expect" => {
                let w: Vec<&str> = rest.split_whitespace().collect();
                if w.len() < 3 {
                    return syntax("expected `expect <invariant> <op> <value>`");
                }
                let op = match w[1] {
                    "=" | "==" => Op::Eq,
                    "!=" => Op::Ne,
                    ">=" => Op::Ge,
                    "<=" => Op::Le,
                    o => return syntax(format!("bad comparison `{o}`")),
                };
                Directive::Expect { key: w[0].to_string(), op, value: w[2..].join(" ") }
            }
            "watch" => {
                let keys: Vec<String> =
                    rest.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                if keys.is_empty() {
                    return syntax("watch needs at least one invariant");
                }
                Directive::Watch(keys)
            }
            _ => return syntax(format!("unknown directive `{head}`")),
        })
    }

    /// Whether the step keeps the manifold (compile steps never do).
    pub fn preserves_manifold(&self) -> bool {
        match self {
            Directive::Kirby(m) => m.preserves_manifold(),
            Directive::Heegaard(HeegaardMove::Base(m)) => m.preserves_manifold(),
            Directive::Band(_) | Directive::Heegaard(_) | Directive::Simplify { .. } => true,
            Directive::Expect { .. } | Directive::Watch(_) => true,
            Directive::Load { .. } | Directive::Compile(_) => false,
        }
    }

    fn changes_state(&self) -> bool {
        !matches!(self, Directive::Expect { .. } | Directive::Watch(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptLine {
    pub line: usize,
    pub text: String,
    pub directive: Directive,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveScript {
    pub steps: Vec<ScriptLine>,
}

impl MoveScript {
    pub fn parse(text: &str) -> Result<MoveScript> {
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let t = strip_comment(raw).trim();
            if t.is_empty() {
                continue;
            }
            let directive = Directive::parse(t).map_err(|e| match e {
                Error::Syntax(m) => Error::Syntax(format!("line {}: {m}", i + 1)),
                e => Error::Rejected(format!("line {}: {e}", i + 1)),
            })?;
            if matches!(directive, Directive::Load { .. }) && !steps.is_empty() {
                return Err(Error::Rejected(format!("line {}: `load` must be the first directive", i + 1)));
            }
            steps.push(ScriptLine { line: i + 1, text: t.to_string(), directive });
        }
        Ok(MoveScript { steps })
    }

    pub fn from_lines<S: AsRef<str>>(lines: &[S]) -> Result<MoveScript> {
        let text: Vec<&str> = lines.iter().map(AsRef::as_ref).collect();
        MoveScript::parse(&text.join("\n"))
    }
}

/// Fixture root: `HANDLECALC_FIXTURES` or the workspace `fixtures/`.
pub fn fixtures_root() -> PathBuf {
    match std::env::var_os("HANDLECALC_FIXTURES") {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"),
    }
}

/// `p` relative to `base`, falling back to the fixture root.
pub fn resolve_path(base: &Path, p: &str) -> PathBuf {
    let direct = base.join(p);
    if direct.exists() {
        return direct;
    }
    let fx = fixtures_root().join(p);
    if fx.exists() {
        fx
    } else {
        direct
    }
}

pub fn read_file(base: &Path, p: &str) -> Result<String> {
    let path = resolve_path(base, p);
    std::fs::read_to_string(&path).map_err(|e| Error::Rejected(format!("cannot read {}: {e}", path.display())))
}

pub fn load_state(base: &Path, p: &str) -> Result<State> {
    State::parse(&read_file(base, p)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: usize,
    pub line: usize,
    pub directive: String,
    pub state: String,
    pub preserving: bool,
    /// Watched invariants after this step.
    pub invariants: BTreeMap<String, String>,
    /// Watched invariants whose value differs from the previous step.
    pub changed: Vec<String>,
    /// Moves run by a `simplify` step.
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectResult {
    pub line: usize,
    pub step: usize,
    pub key: String,
    pub op: Op,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

impl fmt::Display for ExpectResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        if self.passed && self.op == Op::Eq {
            write!(f, "{verdict} {}={}", self.key, self.actual)
        } else {
            write!(f, "{verdict} {} {} {} (got {})", self.key, self.op.text(), self.expected, self.actual)
        }
    }
}

/// A watched invariant that changed across a manifold-preserving step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Drift {
    pub step: usize,
    pub directive: String,
    pub key: String,
    pub before: String,
    pub after: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
    pub expectations: Vec<ExpectResult>,
    pub drift: Vec<Drift>,
}

impl Trace {
    pub fn passed(&self) -> bool {
        self.expectations.iter().all(|e| e.passed) && self.drift.is_empty()
    }
    pub fn final_state(&self) -> Option<&str> {
        self.entries.last().map(|e| e.state.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptFailure {
    pub step: usize,
    pub line: usize,
    pub directive: String,
    pub error: Error,
    pub trace: Trace,
}

impl fmt::Display for ScriptFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {} (line {}): `{}`: {}", self.step, self.line, self.directive, self.error)
    }
}

impl std::error::Error for ScriptFailure {}

fn compare(key: &str, op: Op, actual: &str, expected: &str) -> bool {
    if let (Ok(a), Ok(b)) = (actual.parse::<i64>(), expected.parse::<i64>()) {
        return match op {
            Op::Eq => a == b,
            Op::Ne => a != b,
            Op::Ge => a >= b,
            Op::Le => a <= b,
        };
    }
    let groupish = key == "pi1ab" || (key.starts_with('h') && key[1..].parse::<usize>().is_ok());
    let eq = if groupish {
        match (actual.parse::<AbelianGroup>(), expected.parse::<AbelianGroup>()) {
            (Ok(a), Ok(b)) => a == b,
            _ => actual == expected,
        }
    } else {
        actual == expected
    };
    match op {
        Op::Eq => eq,
        Op::Ne => !eq,
        Op::Ge | Op::Le => false,
    }
}

fn compile(state: &State, c: &Compile, base: &Path) -> Result<State> {
    let kirby = |what: &str| match state {
        State::Kirby(d) => Ok(d.clone()),
        State::Heegaard(_) => reject(format!("compile {what} needs a Kirby diagram")),
    };
    Ok(match c {
        Compile::Surgery(side) => match state {
            State::Heegaard(h) => State::Kirby(surgery_kirby(h, *side)?),
            State::Kirby(_) => return reject("compile surgery needs a Heegaard diagram"),
        },
        Compile::Base => match state {
            State::Heegaard(h) => State::Kirby(h.base()),
            State::Kirby(_) => return reject("compile base needs a Heegaard diagram"),
        },
        Compile::Double => State::Kirby(double_kirby(&kirby("double")?)?),
        Compile::Heegaard => State::Heegaard(handlebody_heegaard(&kirby("heegaard")?)?),
        Compile::S2Double => State::Heegaard(s2bundles_to_double(&kirby("s2double")?)?),
        Compile::Gluck { knot } => {
            let k = parse_ddc(&read_file(base, knot)?)?;
            State::Heegaard(gluck_cobordism(&kirby("gluck")?, &k)?)
        }
        Compile::OneSurgery { circle, framing } => {
            State::Kirby(one_surgery(&kirby("one-surgery")?, &read_file(base, circle)?, *framing)?)
        }
    })
}

/// Apply one state-changing directive.
pub fn apply_directive(state: &State, d: &Directive, base: &Path) -> Result<(State, Vec<String>)> {
    let out = match (d, state) {
        (Directive::Kirby(m), State::Kirby(x)) => State::Kirby(apply_kirby(x, m)?),
        (Directive::Band(m), State::Kirby(x)) => State::Kirby(apply_band(x, m)?),
        (Directive::Heegaard(m), State::Heegaard(h)) => State::Heegaard(apply_heegaard(h, m)?),
        (Directive::Kirby(_) | Directive::Band(_), State::Heegaard(_)) => {
            return reject("kirby/band moves need a Kirby diagram; use `heegaard kirby ...` or `heegaard isotopy ...`")
        }
        (Directive::Heegaard(_), State::Kirby(_)) => return reject("heegaard move on a Kirby diagram"),
        (Directive::Compile(c), _) => compile(state, c, base)?,
        (Directive::Simplify { budget }, _) => {
            let r = simplify_search(state, *budget);
            return Ok((r.best, r.witness));
        }
        (Directive::Load { path, .. }, _) => load_state(base, path)?,
        (Directive::Expect { .. } | Directive::Watch(_), _) => state.clone(),
    };
    Ok((out.canonical(), vec![]))
}

fn snapshot(s: &State, keys: &[String], closed: bool) -> BTreeMap<String, String> {
    keys.iter().map(|k| (k.clone(), invariant_or_error(s, k, closed))).collect()
}

/// Run a script. `input` is used when the script has no `load` line;
/// relative paths resolve against `base`.
pub fn run_script(script: &MoveScript, input: Option<&State>, base: &Path) -> std::result::Result<Trace, ScriptFailure> {
    run_watched(script, input, base, &[])
}

/// [`run_script`] with extra invariants watched from the start.
pub fn run_watched(
    script: &MoveScript,
    input: Option<&State>,
    base: &Path,
    watch: &[String],
) -> std::result::Result<Trace, ScriptFailure> {
    let mut trace = Trace::default();
    let mut keys: Vec<String> = watch.to_vec();
    let mut closed = false;
    let fail = |trace: &Trace, step: usize, sl: Option<&ScriptLine>, error: Error| ScriptFailure {
        step,
        line: sl.map_or(0, |s| s.line),
        directive: sl.map_or_else(|| "<input>".to_string(), |s| s.text.clone()),
        error,
        trace: trace.clone(),
    };
    let mut steps = script.steps.iter().peekable();
    let mut state = match (steps.peek().map(|s| &s.directive), input) {
        (Some(Directive::Load { path, closed: c }), _) => {
            let sl = steps.next().unwrap();
            closed = *c;
            load_state(base, path).map_err(|e| fail(&trace, 0, Some(sl), e))?.canonical()
        }
        (_, Some(s)) => s.canonical(),
        (_, None) => return Err(fail(&trace, 0, None, Error::Rejected("script has no `load` and no input".into()))),
    };
    if let Some(e) = state.validate().into_iter().next() {
        return Err(fail(&trace, 0, None, Error::Rejected(format!("input does not validate: {e}"))));
    }
    trace.entries.push(TraceEntry {
        step: 0,
        line: 0,
        directive: "<input>".into(),
        state: state.to_text(),
        preserving: true,
        invariants: snapshot(&state, &keys, closed),
        changed: vec![],
        witness: vec![],
    });
    for sl in steps {
        let step = trace.entries.len();
        match &sl.directive {
            Directive::Watch(ks) => {
                for k in ks {
                    if !keys.contains(k) {
                        keys.push(k.clone());
                    }
                }
                let last = trace.entries.last_mut().unwrap();
                last.invariants = snapshot(&state, &keys, closed);
                continue;
            }
            Directive::Expect { key, op, value } => {
                let actual = invariant_or_error(&state, key, closed);
                let passed = compare(key, *op, &actual, value);
                trace.expectations.push(ExpectResult {
                    line: sl.line,
                    step: step - 1,
                    key: key.clone(),
                    op: *op,
                    expected: value.clone(),
                    actual,
                    passed,
                });
                continue;
            }
            _ => {}
        }
        debug_assert!(sl.directive.changes_state());
        let (next, witness) = apply_directive(&state, &sl.directive, base).map_err(|e| fail(&trace, step, Some(sl), e))?;
        state = next;
        let inv = snapshot(&state, &keys, closed);
        let prev = &trace.entries.last().unwrap().invariants;
        let changed: Vec<String> = keys.iter().filter(|k| prev.get(*k) != inv.get(*k)).cloned().collect();
        let preserving = sl.directive.preserves_manifold();
        if preserving {
            for k in &changed {
                trace.drift.push(Drift {
                    step,
                    directive: sl.text.clone(),
                    key: k.clone(),
                    before: prev.get(k).cloned().unwrap_or_default(),
                    after: inv[k].clone(),
                });
            }
        }
        trace.entries.push(TraceEntry {
            step,
            line: sl.line,
            directive: sl.text.clone(),
            state: state.to_text(),
            preserving,
            invariants: inv,
            changed,
            witness,
        });
    }
    Ok(trace)
}

/// Per-step values of `keys` and every change across a manifold-preserving
/// step. A failing step ends the report early.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WatchReport {
    pub trace: Trace,
    pub error: Option<String>,
}

impl WatchReport {
    pub fn clean(&self) -> bool {
        self.error.is_none() && self.trace.drift.is_empty()
    }
}

pub fn watch_invariants(script: &MoveScript, input: Option<&State>, base: &Path, keys: &[String]) -> WatchReport {
    match run_watched(script, input, base, keys) {
        Ok(trace) => WatchReport { trace, error: None },
        Err(f) => WatchReport { error: Some(f.to_string()), trace: f.trace },
    }
}
