//! Heegaard diagrams of 5-manifolds and the constructions built on them.
//!
//! A [`HeegaardDiagram`] keeps one combined code: the base Kirby diagram
//! plus the α and β surface circles, their bands and the vertices where α
//! meets β. The side of each surface circle is recorded separately.

mod compile;
mod moves;

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

pub use compile::*;
pub use moves::*;

use crate::ddc::{
    band_line, component_line, crossing_line, parse_generic, piercing_line, sorted_ids, vertex_line, Diagram, Id, Kind,
    ParseError, Side,
};
use crate::invariants::{chain_homology, smith_normal_form, AbelianGroup, IntMatrix};
use crate::{reject, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiveKind {
    Cobordism,
    ThreeHandlebody,
    Closed,
}

impl FiveKind {
    pub fn name(self) -> &'static str {
        match self {
            FiveKind::Cobordism => "cobordism",
            FiveKind::ThreeHandlebody => "three-handlebody",
            FiveKind::Closed => "closed",
        }
    }
    pub fn parse(s: &str) -> Option<FiveKind> {
        match s {
            "cobordism" => Some(FiveKind::Cobordism),
            "three-handlebody" => Some(FiveKind::ThreeHandlebody),
            "closed" => Some(FiveKind::Closed),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeegaardDiagram {
    /// Base, α and β records together.
    pub diagram: Diagram,
    pub sides: BTreeMap<Id, Side>,
    pub asserted_k: Option<u32>,
    pub asserted_r: Option<u32>,
    pub class: Option<FiveKind>,
}

fn perr<T>(line: usize, msg: impl Into<String>) -> std::result::Result<T, ParseError> {
    Err(ParseError { line, col: 1, message: msg.into() })
}

impl HeegaardDiagram {
    pub fn new(diagram: Diagram) -> Self {
        HeegaardDiagram { diagram, sides: BTreeMap::new(), asserted_k: None, asserted_r: None, class: None }
    }

    pub fn name(&self) -> &str {
        &self.diagram.name
    }

    /// Components that are neither α nor β.
    pub fn base_ids(&self) -> Vec<Id> {
        sorted_ids(self.diagram.components.keys().filter(|c| !self.sides.contains_key(*c)))
    }

    pub fn side_ids(&self, side: Side) -> Vec<Id> {
        sorted_ids(self.sides.iter().filter(|(_, s)| **s == side).map(|(c, _)| c))
    }

    /// The base Kirby diagram alone.
    pub fn base(&self) -> Diagram {
        let mut d = self.diagram.clone();
        for c in self.sides.keys() {
            d.delete_component(c);
        }
        d
    }

    /// Circles of one side grouped into spheres by band connectivity;
    /// groups ordered by their least id.
    pub fn spheres(&self, side: Side) -> Vec<Vec<Id>> {
        let ids = self.side_ids(side);
        let mut parent: BTreeMap<Id, Id> = ids.iter().map(|c| (c.clone(), c.clone())).collect();
        fn find(p: &mut BTreeMap<Id, Id>, x: &str) -> Id {
            let y = p[x].clone();
            if y == x {
                return y;
            }
            let r = find(p, &y);
            p.insert(x.to_string(), r.clone());
            r
        }
        for b in self.diagram.bands.values() {
            if parent.contains_key(&b.from.comp) && parent.contains_key(&b.to.comp) {
                let (x, y) = (find(&mut parent, &b.from.comp), find(&mut parent, &b.to.comp));
                if x != y {
                    parent.insert(x, y);
                }
            }
        }
        let mut groups: BTreeMap<Id, Vec<Id>> = BTreeMap::new();
        for c in &ids {
            let r = find(&mut parent, c);
            groups.entry(r).or_default().push(c.clone());
        }
        let mut out: Vec<Vec<Id>> = groups.into_values().map(|g| sorted_ids(g.iter())).collect();
        out.sort_by(|a, b| crate::ddc::natural_cmp(&a[0], &b[0]));
        out
    }

    pub fn sphere_count(&self, side: Side) -> usize {
        self.spheres(side).len()
    }

    fn sphere_of(&self, side: Side, c: &str) -> Option<usize> {
        self.spheres(side).iter().position(|g| g.iter().any(|x| x == c))
    }

    /// Structural problems beyond those of the combined code.
    pub fn validate(&self) -> Vec<String> {
        let mut out = self.diagram.validate();
        for c in self.diagram.surface_ids() {
            if !self.sides.contains_key(&c) {
                out.push(format!("surface component {c} belongs to neither side"));
            }
        }
        for c in self.sides.keys() {
            match self.diagram.kind(c) {
                Some(Kind::Surface) => {}
                Some(k) => out.push(format!("side component {c} is {k}, not surface")),
                None => out.push(format!("side lists missing component {c}")),
            }
        }
        for (id, b) in &self.diagram.bands {
            if self.sides.get(&b.from.comp) != self.sides.get(&b.to.comp) {
                out.push(format!("band {id} joins the two sides"));
            }
        }
        for (id, v) in &self.diagram.vertices {
            match (self.sides.get(&v.a.comp), self.sides.get(&v.b.comp)) {
                (Some(a), Some(b)) if a != b => {}
                _ => out.push(format!("vertex {id} does not join an α circle to a β circle")),
            }
        }
        out
    }

    pub fn canonical(&self) -> HeegaardDiagram {
        HeegaardDiagram { diagram: self.diagram.canonical(), ..self.clone() }
    }

    pub fn same_as(&self, other: &HeegaardDiagram) -> bool {
        let mut a = self.canonical();
        a.diagram.name = other.diagram.name.clone();
        a == other.canonical()
    }

    fn rank(&self, c: &str) -> u8 {
        match self.sides.get(c) {
            None => 0,
            Some(Side::Alpha) => 1,
            Some(Side::Beta) => 2,
        }
    }

    /// Canonical `.hgd` text.
    pub fn to_text(&self) -> String {
        let h = self.canonical();
        let d = &h.diagram;
        let mut s = String::new();
        writeln!(s, "heegaard {}", d.name).unwrap();
        if let Some(k) = h.asserted_k {
            writeln!(s, "asserted_k {k}").unwrap();
        }
        if let Some(r) = h.asserted_r {
            writeln!(s, "asserted_r {r}").unwrap();
        }
        if let Some(c) = h.class {
            writeln!(s, "class {}", c.name()).unwrap();
        }
        if d.r3 > 0 {
            writeln!(s, "flag r3={}", d.r3).unwrap();
        }
        if let Some(t) = d.resolutions_trivial {
            writeln!(s, "flag resolutions_trivial={t}").unwrap();
        }
        for (rank, label) in [(0u8, "base:"), (1, "alpha:"), (2, "beta:")] {
            let mut block = String::new();
            for id in sorted_ids(d.components.keys()) {
                if h.rank(&id) == rank {
                    writeln!(block, "{}", component_line(&id, &d.components[&id])).unwrap();
                }
            }
            for id in sorted_ids(d.crossings.keys()) {
                let x = &d.crossings[&id];
                if h.rank(&x.over.comp).max(h.rank(&x.under.comp)) == rank {
                    writeln!(block, "{}", crossing_line(&id, x)).unwrap();
                }
            }
            for id in sorted_ids(d.piercings.keys()) {
                let p = &d.piercings[&id];
                if h.rank(&p.disk).max(h.rank(&p.strand.comp)) == rank {
                    writeln!(block, "{}", piercing_line(&id, p)).unwrap();
                }
            }
            for id in sorted_ids(d.bands.keys()) {
                let b = &d.bands[&id];
                if h.rank(&b.from.comp) == rank {
                    writeln!(block, "{}", band_line(&id, b)).unwrap();
                }
            }
            if rank == 2 {
                for id in sorted_ids(d.vertices.keys()) {
                    writeln!(block, "{}", vertex_line("xvertex", &id, &d.vertices[&id])).unwrap();
                }
            }
            if !block.is_empty() || rank > 0 {
                writeln!(s, "{label}").unwrap();
                s.push_str(&block);
            }
        }
        s
    }

    /// Euler characteristic and handle counts for the chosen kind.
    pub fn euler_class(&self, kind: FiveKind) -> Result<FiveManifoldClass> {
        let a = self.sphere_count(Side::Alpha) as i64;
        let b = self.sphere_count(Side::Beta) as i64;
        let need = |v: Option<u32>, what: &str| match v {
            Some(x) => Ok(x as i64),
            None => reject(format!("{what} is not asserted")),
        };
        let (k, r, euler) = match kind {
            FiveKind::ThreeHandlebody => {
                let k = need(self.asserted_k, "asserted_k")?;
                (k, None, 1 - k + a - b)
            }
            FiveKind::Closed => {
                let k = need(self.asserted_k, "asserted_k")?;
                let r = need(self.asserted_r, "asserted_r")?;
                (k, Some(r), 1 - k + a - b + r - 1)
            }
            FiveKind::Cobordism => (self.asserted_k.map_or(0, |x| x as i64), self.asserted_r.map(|x| x as i64), a - b),
        };
        if kind == FiveKind::Closed && euler != 0 {
            return reject(format!("closed diagram has Euler characteristic {euler}, not 0"));
        }
        Ok(FiveManifoldClass { kind, euler, k, alpha: a, beta: b, r })
    }

    /// `1 − k + |α|` of the 2-handlebody built from the α side.
    pub fn alpha_handlebody_euler(&self) -> Result<i64> {
        match self.asserted_k {
            Some(k) => Ok(1 - k as i64 + self.sphere_count(Side::Alpha) as i64),
            None => reject("asserted_k is not asserted"),
        }
    }

    /// Algebraic intersection numbers: α spheres × β spheres.
    pub fn intersection_matrix(&self) -> IntMatrix {
        let sa = self.spheres(Side::Alpha);
        let sb = self.spheres(Side::Beta);
        let mut m = IntMatrix::zeros(sa.len(), sb.len());
        for v in self.diagram.vertices.values() {
            let (ac, bc) = match self.sides.get(&v.a.comp) {
                Some(Side::Alpha) => (&v.a.comp, &v.b.comp),
                _ => (&v.b.comp, &v.a.comp),
            };
            if let (Some(i), Some(j)) = (self.sphere_of(Side::Alpha, ac), self.sphere_of(Side::Beta, bc)) {
                m.set(i, j, m.get(i, j) + v.sign as i64);
            }
        }
        m
    }
}

impl fmt::Display for HeegaardDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn parse_hgd(text: &str) -> std::result::Result<HeegaardDiagram, ParseError> {
    let p = parse_generic(text, true)?;
    if !p.heegaard {
        return perr(1, "expected `heegaard <name>` header");
    }
    let mut h = HeegaardDiagram::new(p.diagram);
    h.sides = p.sides;
    for (k, v, line) in p.header {
        match k.as_str() {
            "asserted_k" => h.asserted_k = Some(v.parse().or_else(|_| perr(line, format!("bad asserted_k `{v}`")))?),
            "asserted_r" => h.asserted_r = Some(v.parse().or_else(|_| perr(line, format!("bad asserted_r `{v}`")))?),
            "class" => h.class = Some(FiveKind::parse(&v).map_or_else(|| perr(line, format!("bad class `{v}`")), Ok)?),
            _ => {}
        }
    }
    if let Some(v) = h.diagram.vertices.keys().find(|v| !p.xvertices.contains(*v)) {
        return perr(1, format!("vertex {v} must be declared with `xvertex`"));
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiveManifoldClass {
    pub kind: FiveKind,
    pub euler: i64,
    pub k: i64,
    pub alpha: i64,
    pub beta: i64,
    pub r: Option<i64>,
}

/// Map from the α circles to `H_1(Σ(α)) ≅ Z^k`: columns are α spheres.
fn alpha_boundary(h: &HeegaardDiagram) -> Result<IntMatrix> {
    let s = surgery_kirby(h, Side::Alpha)?;
    let p = crate::invariants::piercing_matrix(&s);
    let sf = smith_normal_form(&p);
    if sf.d.iter().any(|&x| x > 1) {
        return reject("H1 of the α-surgered 4-manifold has torsion; it is not a connected sum of S1×S3");
    }
    let rank = sf.rank();
    let k = p.rows - rank;
    if let Some(ak) = h.asserted_k {
        if ak as usize != k {
            return reject(format!("asserted_k = {ak} but H1 of the α-surgered 4-manifold has rank {k}"));
        }
    }
    let dotted = s.dotted_ids();
    let spheres = h.spheres(Side::Alpha);
    let mut m = IntMatrix::zeros(k, spheres.len());
    for (j, g) in spheres.iter().enumerate() {
        // every circle of a sphere is one generator in Σ(α); bands identify
        // them up to conjugacy, so any representative will do
        let col = dotted.iter().position(|x| *x == g[0]).unwrap();
        for i in 0..k {
            m.set(i, j, sf.left.get(rank + i, col));
        }
    }
    Ok(m)
}

/// `H_0 .. H_5` of the 5-manifold. `d4` is the matrix of the boundary
/// from 4-handles to β spheres, needed only for closed diagrams with
/// `asserted_r > 0`.
pub fn homology_5manifold(h: &HeegaardDiagram, kind: FiveKind, d4: Option<&IntMatrix>) -> Result<Vec<AbelianGroup>> {
    let d2 = alpha_boundary(h)?;
    let d3 = h.intersection_matrix();
    if !d2.mul(&d3).is_zero() {
        return reject("boundary maps do not compose to zero");
    }
    let (k, a, b) = (d2.rows, d3.rows, d3.cols);
    match kind {
        FiveKind::Cobordism => reject("homology of a cobordism diagram is not computed"),
        FiveKind::ThreeHandlebody => {
            let mut hs = chain_homology(&[1, k, a, b], |i| match i {
                1 => IntMatrix::zeros(1, k),
                2 => d2.clone(),
                _ => d3.clone(),
            });
            hs.push(AbelianGroup::trivial());
            hs.push(AbelianGroup::trivial());
            Ok(hs)
        }
        FiveKind::Closed => {
            let r = match h.asserted_r {
                Some(r) => r as usize,
                None => return reject("asserted_r is not asserted"),
            };
            let d4m = if r == 0 {
                IntMatrix::zeros(b, 0)
            } else {
                match d4 {
                    Some(m) if m.rows == b && m.cols == r => m.clone(),
                    Some(m) => return reject(format!("4-handle boundary must be {b}×{r}, got {}×{}", m.rows, m.cols)),
                    None => return reject("closed homology with 4-handles needs their boundary matrix"),
                }
            };
            if !d3.mul(&d4m).is_zero() {
                return reject("boundary maps do not compose to zero");
            }
            Ok(chain_homology(&[1, k, a, b, r, 1], |i| match i {
                1 => IntMatrix::zeros(1, k),
                2 => d2.clone(),
                3 => d3.clone(),
                4 => d4m.clone(),
                _ => IntMatrix::zeros(r, 1),
            }))
        }
    }
}

/// π1 presentation of the base (dotted generators, framed relators).
pub fn pi1_heegaard(h: &HeegaardDiagram) -> crate::invariants::Presentation {
    crate::invariants::pi1_presentation(&h.base())
}
