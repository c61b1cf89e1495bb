use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::{AbelianGroup, IntMatrix};
use crate::ddc::{Diagram, Kind};

/// A letter is `±(g + 1)` for generator index `g`; negative means inverse.
pub type Word = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

pub fn letter(gen: usize, inverse: bool) -> i32 {
    let l = gen as i32 + 1;
    if inverse {
        -l
    } else {
        l
    }
}

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[i32]) -> Word {
    let mut v = free_reduce(w);
    while v.len() >= 2 && v[0] == -v[v.len() - 1] {
        v.pop();
        v.remove(0);
    }
    v
}

pub fn invert(w: &[i32]) -> Word {
    w.iter().rev().map(|l| -l).collect()
}

/// Least rotation of `w` or of its inverse; identifies relators that
/// define the same normal closure trivially.
fn cyclic_key(w: &[i32]) -> Word {
    let mut best: Option<Word> = None;
    for cand in [w.to_vec(), invert(w)] {
        for k in 0..cand.len().max(1) {
            let mut r = cand[k..].to_vec();
            r.extend_from_slice(&cand[..k]);
            if best.as_ref().is_none_or(|b| r < *b) {
                best = Some(r);
            }
        }
    }
    best.unwrap_or_default()
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Self {
        Presentation { generators, relators }
    }

    pub fn word_text(&self, w: &[i32]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|&l| {
                let g = &self.generators[(l.unsigned_abs() - 1) as usize];
                if l < 0 {
                    format!("{g}^-1")
                } else {
                    g.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Exponent-sum matrix: generators × relators.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.generators.len(), self.relators.len());
        for (j, w) in self.relators.iter().enumerate() {
            for &l in w {
                let g = (l.unsigned_abs() - 1) as usize;
                m.set(g, j, m.get(g, j) + l.signum() as i64);
            }
        }
        m
    }

    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let inner = s
            .strip_prefix('<')
            .and_then(|x| x.strip_suffix('>'))
            .ok_or_else(|| format!("presentation must look like <gens | rels>: `{s}`"))?;
        let (g, r) = inner.split_once('|').unwrap_or((inner, ""));
        let generators: Vec<String> =
            g.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect();
        let mut relators = Vec::new();
        for rel in r.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let mut w = Word::new();
            for tok in rel.split_whitespace() {
                if tok == "1" {
                    continue;
                }
                let (name, exp) = match tok.split_once('^') {
                    Some((n, e)) => (n, e.parse::<i32>().map_err(|_| format!("bad exponent in `{tok}`"))?),
                    None => (tok, 1),
                };
                let gi = generators
                    .iter()
                    .position(|x| x == name)
                    .ok_or_else(|| format!("unknown generator `{name}`"))?;
                for _ in 0..exp.unsigned_abs() {
                    w.push(letter(gi, exp < 0));
                }
            }
            relators.push(w);
        }
        Ok(Presentation { generators, relators })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|w| self.word_text(w)).collect();
        write!(f, "<{} | {}>", self.generators.join(","), rels.join(", "))
    }
}

/// Generators are the dotted circles; each framed component reads off its
/// cyclic word of signed piercings through dotted disks.
pub fn pi1_presentation(d: &Diagram) -> Presentation {
    let gens = d.dotted_ids();
    let mut rels = Vec::new();
    for f in d.framed_ids() {
        let mut w = Word::new();
        for s in &d.components[&f].slots {
            for p in d.piercings.values() {
                if p.strand.comp == f && p.strand.slot == *s && d.kind(&p.disk) == Some(Kind::Dotted) {
                    let g = gens.iter().position(|x| *x == p.disk).unwrap();
                    w.push(letter(g, p.sign < 0));
                }
            }
        }
        rels.push(w);
    }
    Presentation { generators: gens, relators: rels }
}

pub fn abelianization(p: &Presentation) -> AbelianGroup {
    AbelianGroup::cokernel(&p.exponent_matrix())
}

/// Substitute generator `g := w` in `r` (`w` has no `g`).
fn substitute(r: &[i32], g: usize, w: &[i32]) -> Word {
    let mut out = Word::new();
    let winv = invert(w);
    for &l in r {
        if (l.unsigned_abs() - 1) as usize == g {
            out.extend_from_slice(if l > 0 { w } else { &winv });
        } else {
            out.push(l);
        }
    }
    out
}

/// Bounded Tietze simplification: reductions, duplicate removal, and
/// elimination of a generator occurring exactly once in some relator.
pub fn tietze_simplify(p: &Presentation, budget: usize) -> Presentation {
    let mut p = p.clone();
    let mut steps = 0usize;
    loop {
        if steps >= budget {
            break;
        }
        // reduce and drop trivial/duplicate relators
        let mut changed = false;
        let mut seen: Vec<Word> = Vec::new();
        let mut rels = Vec::new();
        for r in &p.relators {
            let c = cyclic_reduce(r);
            if c != *r {
                changed = true;
            }
            if c.is_empty() {
                changed = true;
                continue;
            }
            let k = cyclic_key(&c);
            if seen.contains(&k) {
                changed = true;
                continue;
            }
            seen.push(k);
            rels.push(c);
        }
        p.relators = rels;
        if changed {
            steps += 1;
            continue;
        }
        // eliminate a generator appearing once in a relator, shortest first
        let mut best: Option<(usize, usize, usize)> = None; // (len, relator, gen)
        for (ri, r) in p.relators.iter().enumerate() {
            for g in 0..p.generators.len() {
                let n = r.iter().filter(|l| (l.unsigned_abs() - 1) as usize == g).count();
                if n == 1 && best.is_none_or(|(bl, _, _)| r.len() < bl) {
                    best = Some((r.len(), ri, g));
                }
            }
        }
        let Some((_, ri, g)) = best else { break };
        let r = p.relators.remove(ri);
        let pos = r.iter().position(|l| (l.unsigned_abs() - 1) as usize == g).unwrap();
        // r = a g^e b  ⇒  g^e = a^-1 b^-1 rotated: g^e = (b a)^-1
        let mut ba = r[pos + 1..].to_vec();
        ba.extend_from_slice(&r[..pos]);
        let w = if r[pos] > 0 { invert(&ba) } else { ba };
        let rels: Vec<Word> = p.relators.iter().map(|x| substitute(x, g, &w)).collect();
        // renumber generators above g
        let renum = |l: i32| {
            let gi = (l.unsigned_abs() - 1) as usize;
            let ni = if gi > g { gi - 1 } else { gi };
            letter(ni, l < 0)
        };
        p.relators = rels.into_iter().map(|x| x.into_iter().map(renum).collect()).collect();
        p.generators.remove(g);
        steps += 1;
    }
    p
}

/// A finite permutation group with its full multiplication table.
#[derive(Clone, Debug)]
pub struct PermGroup {
    pub name: String,
    pub elements: Vec<Vec<u8>>,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
}

pub const DEFAULT_ORDER_BOUND: usize = 60;

fn compose(a: &[u8], b: &[u8]) -> Vec<u8> {
    // apply a then b
    a.iter().map(|&x| b[x as usize]).collect()
}

impl PermGroup {
    /// Close the given permutations under composition. Errors when the
    /// order exceeds `bound`.
    pub fn generate(name: &str, gens: &[Vec<u8>], bound: usize) -> Result<Self, String> {
        let n = gens.first().map_or(0, Vec::len);
        if gens.iter().any(|g| g.len() != n) {
            return Err("generators act on different point sets".into());
        }
        let id: Vec<u8> = (0..n as u8).collect();
        let mut elements = vec![id.clone()];
        let mut i = 0;
        while i < elements.len() {
            for g in gens {
                let e = compose(&elements[i], g);
                if !elements.contains(&e) {
                    if elements.len() >= bound {
                        return Err(format!("target group order exceeds bound {bound}"));
                    }
                    elements.push(e);
                }
            }
            i += 1;
        }
        elements.sort();
        let index = |p: &Vec<u8>| elements.binary_search(p).unwrap();
        let m = elements.len();
        let mut mul = vec![0; m * m];
        let mut inv = vec![0; m];
        for a in 0..m {
            for b in 0..m {
                mul[a * m + b] = index(&compose(&elements[a], &elements[b]));
            }
            let mut pinv = vec![0u8; n];
            for (x, &y) in elements[a].iter().enumerate() {
                pinv[y as usize] = x as u8;
            }
            inv[a] = index(&pinv);
        }
        let identity = index(&id);
        Ok(PermGroup { name: name.into(), elements, mul, inv, identity })
    }

    pub fn symmetric(n: u8) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<u8> = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        Self::generate(&format!("S{n}"), &gens, usize::MAX).unwrap()
    }

    pub fn alternating(n: u8) -> Self {
        // 3-cycles (0 1 k) generate A_n
        let gens: Vec<Vec<u8>> = (2..n)
            .map(|k| {
                let mut p: Vec<u8> = (0..n).collect();
                p[0] = 1;
                p[1] = k;
                p[k as usize] = 0;
                p
            })
            .collect();
        Self::generate(&format!("A{n}"), &gens, usize::MAX).unwrap()
    }

    /// `S3`, `A4`, `A5`, `Sn`, `An` for small n.
    pub fn named(s: &str) -> Result<Self, String> {
        let (kind, n) = s.split_at(1.min(s.len()));
        let n: u8 = n.parse().map_err(|_| format!("unknown group `{s}`"))?;
        if n == 0 || n > 8 {
            return Err(format!("unknown group `{s}`"));
        }
        match kind {
            "S" => Ok(Self::symmetric(n)),
            "A" => Ok(Self::alternating(n)),
            _ => Err(format!("unknown group `{s}`")),
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    fn m(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.elements.len() + b]
    }

    fn eval(&self, w: &[i32], img: &[usize]) -> usize {
        let mut acc = self.identity;
        for &l in w {
            let g = img[(l.unsigned_abs() - 1) as usize];
            acc = self.m(acc, if l > 0 { g } else { self.inv[g] });
        }
        acc
    }

    fn generated_order(&self, imgs: &[usize]) -> usize {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &g in imgs {
                let y = self.m(x, g);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomCount {
    pub total: u64,
    pub surjective: u64,
}

/// Exhaustive count of homomorphisms `p → g`, pruning each relator as soon
/// as all of its generators have images.
pub fn hom_count(p: &Presentation, g: &PermGroup, bound: usize) -> Result<HomCount, String> {
    if g.order() > bound {
        return Err(format!("target group order {} exceeds bound {bound}", g.order()));
    }
    let n = p.generators.len();
    // relators checkable once generator index `k` is assigned
    let mut due: Vec<Vec<&Word>> = vec![Vec::new(); n.max(1)];
    let mut at_start = Vec::new();
    for r in &p.relators {
        match r.iter().map(|l| (l.unsigned_abs() - 1) as usize).max() {
            Some(k) => due[k].push(r),
            None => at_start.push(r),
        }
    }
    let mut out = HomCount { total: 0, surjective: 0 };
    let mut img = vec![g.identity; n];
    fn rec(k: usize, n: usize, g: &PermGroup, due: &[Vec<&Word>], img: &mut Vec<usize>, out: &mut HomCount) {
        if k == n {
            out.total += 1;
            if g.generated_order(img) == g.order() {
                out.surjective += 1;
            }
            return;
        }
        for e in 0..g.order() {
            img[k] = e;
            if due[k].iter().all(|r| g.eval(r, img) == g.identity) {
                rec(k + 1, n, g, due, img, out);
            }
        }
    }
    rec(0, n, g, &due, &mut img, &mut out);
    Ok(out)
}
