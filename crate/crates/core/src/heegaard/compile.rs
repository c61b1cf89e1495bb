//! Constructions producing Kirby and Heegaard diagrams.

use super::{FiveKind, HeegaardDiagram};
use crate::ddc::{
    parse_generic, sorted_ids, Band, Component, CoreEvent, Diagram, Id, Kind, Marking, Side, SlotRef, Vertex,
};
use crate::{reject, Result};

/// `want` when it is free in `d`, otherwise a fresh id built from it.
fn pick(d: &Diagram, want: &str) -> Id {
    let taken = d.components.contains_key(want)
        || d.crossings.contains_key(want)
        || d.piercings.contains_key(want)
        || d.bands.contains_key(want)
        || d.vertices.contains_key(want);
    if taken {
        d.fresh_id(want)
    } else {
        want.to_string()
    }
}

fn add_component(d: &mut Diagram, want: &str, kind: Kind) -> Id {
    let id = pick(d, want);
    d.components.insert(id.clone(), Component { kind, slots: vec![] });
    id
}

/// Add a 0-framed meridian linking `k` once positively; returns its id.
pub fn add_meridian(d: &mut Diagram, k: &str, want: &str) -> Id {
    let m = add_component(d, want, Kind::Framed(0));
    let a = d.push_slot(k);
    let b = d.push_slot(k);
    let ma = d.push_slot(&m);
    let mb = d.push_slot(&m);
    d.add_crossing(1, a, ma);
    d.add_crossing(1, mb, b);
    m
}

fn non_surface_part(d: &Diagram) -> Diagram {
    let mut out = d.clone();
    for c in d.surface_ids() {
        out.delete_component(&c);
    }
    out
}

fn check_over(base: &Diagram, over: &Diagram, what: &str) -> Result<()> {
    let mut a = non_surface_part(over);
    a.name = base.name.clone();
    a.vertices.clear();
    if !a.same_as(base) {
        return reject(format!("{what} is not drawn over the expected base diagram"));
    }
    Ok(())
}

/// Kirby diagram of the 4-manifold obtained by surgering one side of `h`.
///
/// The other side is deleted. Each circle of the side becomes dotted and
/// each band becomes a 0-framed circle running along both band edges,
/// piercing the disks at its attachments with opposite signs. One 3-handle
/// is added per sphere of the side.
pub fn surgery_kirby(h: &HeegaardDiagram, side: Side) -> Result<Diagram> {
    let mut d = h.diagram.clone();
    for c in h.side_ids(side.other()) {
        d.delete_component(&c);
    }
    if let Some(v) = d.vertices.keys().next() {
        return reject(format!("vertex {v} lies within the {} side", side.name()));
    }
    let circles = h.side_ids(side);
    let spheres = h.sphere_count(side);
    let bands: Vec<Id> = sorted_ids(
        d.bands.iter().filter(|(_, b)| circles.contains(&b.from.comp)).map(|(k, _)| k),
    );
    if bands.len() + spheres != circles.len() {
        return reject(format!("the {} side has a component that is not a sphere", side.name()));
    }
    for bid in &bands {
        let b = d.bands.remove(bid).unwrap();
        let c = pick(&d, bid);
        d.components.insert(c.clone(), Component { kind: Kind::Framed(0), slots: vec![] });
        let s = d.push_slot(&c);
        d.add_piercing(&b.from.comp, s, 1);
        for e in &b.core {
            let s = d.push_slot(&c);
            match e {
                CoreEvent::Over { at, sign } => {
                    d.add_crossing(*sign, s, at.clone());
                }
                CoreEvent::Under { at, sign } => {
                    d.add_crossing(*sign, at.clone(), s);
                }
                CoreEvent::Pierce { disk, sign } => {
                    d.add_piercing(disk, s, *sign);
                }
            }
        }
        let tw = b.twists.signum() as i8;
        let edge_a: Vec<SlotRef> = (0..b.twists.abs()).map(|_| d.push_slot(&c)).collect();
        let s = d.push_slot(&c);
        d.add_piercing(&b.to.comp, s, -1);
        for a in edge_a.iter().rev() {
            let s = d.push_slot(&c);
            d.add_crossing(tw, a.clone(), s);
        }
        for e in b.core.iter().rev() {
            let s = d.push_slot(&c);
            match e {
                CoreEvent::Over { at, sign } => {
                    let t = d.insert_slot(&at.comp, Some(&at.slot));
                    d.add_crossing(-*sign, s, t);
                }
                CoreEvent::Under { at, sign } => {
                    let t = d.insert_slot(&at.comp, Some(&at.slot));
                    d.add_crossing(-*sign, t, s);
                }
                CoreEvent::Pierce { disk, sign } => {
                    d.add_piercing(disk, s, -*sign);
                }
            }
        }
        d.remove_slot(&b.from);
        d.remove_slot(&b.to);
    }
    for c in &circles {
        d.components.get_mut(c).unwrap().kind = Kind::Dotted;
    }
    d.r3 += spheres as u32;
    d.resolutions_trivial = None;
    d.name = format!("{}_{}", h.diagram.name, side.name());
    Ok(d)
}

/// Surgery along an embedded circle described by `fragment`: a diagram
/// text holding one new component and its piercings of disks of `d` (and
/// its self-crossings). The circle is added with the given framing together
/// with a 0-framed meridian.
pub fn one_surgery(d: &Diagram, fragment: &str, framing: i64) -> Result<Diagram> {
    let mut text = String::new();
    for c in d.ids_of(Kind::has_disk) {
        let declared = fragment.lines().any(|l| {
            let t: Vec<&str> = l.split_whitespace().collect();
            t.len() > 1 && t[0] == "component" && t[1] == c
        });
        if !declared {
            text.push_str(&format!("component {c} dotted :\n"));
        }
    }
    text.push_str(fragment);
    let f = parse_generic(&text, false)?.diagram;
    let new: Vec<Id> = sorted_ids(f.components.keys().filter(|c| !d.components.contains_key(*c)));
    let g = match new.as_slice() {
        [g] => g.clone(),
        _ => return reject(format!("fragment must add exactly one circle, found {}", new.len())),
    };
    let mut out = d.clone();
    out.name = f.name.clone();
    out.components.insert(g.clone(), Component { kind: Kind::Framed(framing), slots: f.components[&g].slots.clone() });
    for x in f.crossings.values() {
        if x.over.comp != g || x.under.comp != g {
            return reject("fragment crossings must lie on the new circle");
        }
        out.add_crossing(x.sign, x.over.clone(), x.under.clone());
    }
    for p in f.piercings.values() {
        if p.strand.comp != g {
            return reject("fragment piercings must be by the new circle");
        }
        out.add_piercing(&p.disk, p.strand.clone(), p.sign);
    }
    if !f.bands.is_empty() || !f.vertices.is_empty() {
        return reject("fragment may not contain bands or vertices");
    }
    add_meridian(&mut out, &g, "M");
    Ok(out)
}

/// Double of a 2-handlebody: a 0-framed meridian for every framed
/// component and one 3-handle per dotted circle.
pub fn double_kirby(d: &Diagram) -> Result<Diagram> {
    if !d.surface_ids().is_empty() || !d.bands.is_empty() {
        return reject("double is defined for Kirby diagrams only");
    }
    let mut out = d.clone();
    for k in d.framed_ids() {
        add_meridian(&mut out, &k, "M");
    }
    out.r3 += d.dotted_ids().len() as u32;
    out.name = format!("double_{}", d.name);
    Ok(out)
}

/// α side of a doubled handlebody: one circle per framed component of
/// `d`, parallel to its meridian. Returns the α ids in framed order.
fn add_alpha(h: &mut HeegaardDiagram, framed: &[Id]) -> Vec<Id> {
    let mut out = Vec::new();
    for k in framed {
        let r = add_component(&mut h.diagram, "R", Kind::Surface);
        let s = h.diagram.push_slot(k);
        h.diagram.add_piercing(&r, s, 1);
        h.sides.insert(r.clone(), Side::Alpha);
        out.push(r);
    }
    out
}

/// Heegaard diagram of `Y × I` for a 2-handlebody `Y`.
pub fn handlebody_heegaard(d: &Diagram) -> Result<HeegaardDiagram> {
    let base = double_kirby(d)?;
    let mut h = HeegaardDiagram::new(base);
    h.diagram.name = format!("{}_x_I", d.name);
    add_alpha(&mut h, &d.framed_ids());
    h.asserted_k = Some(d.dotted_ids().len() as u32);
    h.class = Some(FiveKind::ThreeHandlebody);
    Ok(h)
}

/// One α–β intersection for [`twisted_double_heegaard`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossSpec {
    /// α circle, named `R`, `R1`, ... in framed-component order.
    pub alpha: Id,
    /// An unused slot on a β circle.
    pub beta: SlotRef,
    pub sign: i8,
    pub marking: Marking,
}

/// Heegaard diagram of a twisted double: the α side of
/// [`handlebody_heegaard`] together with a β side drawn over
/// `double_kirby(d)`.
pub fn twisted_double_heegaard(d: &Diagram, beta: &Diagram, cross: &[CrossSpec]) -> Result<HeegaardDiagram> {
    let base = double_kirby(d)?;
    check_over(&base, beta, "β side")?;
    let mut h = HeegaardDiagram::new(beta.clone());
    h.diagram.vertices.clear();
    h.diagram.name = format!("twisted_double_{}", d.name);
    for c in beta.surface_ids() {
        h.sides.insert(c, Side::Beta);
    }
    add_alpha(&mut h, &d.framed_ids());
    for x in cross {
        if h.sides.get(&x.alpha) != Some(&Side::Alpha) {
            return reject(format!("{} is not an α circle", x.alpha));
        }
        if h.sides.get(&x.beta.comp) != Some(&Side::Beta) || !h.diagram.has_slot(&x.beta) {
            return reject(format!("{} is not a slot on a β circle", x.beta));
        }
        if h.diagram.use_of(&x.beta).is_some() {
            return reject(format!("slot {} is already used", x.beta));
        }
        let a = h.diagram.push_slot(&x.alpha);
        let id = h.diagram.fresh_id("V");
        h.diagram.vertices.insert(id, Vertex { a, b: x.beta.clone(), sign: x.sign, marking: x.marking });
    }
    h.asserted_k = Some(0);
    h.asserted_r = Some(0);
    h.class = Some(FiveKind::Closed);
    Ok(h)
}

/// Cobordism from a connected sum of S²-bundles to the double of `d`:
/// the dotted circles of `double_kirby(d)` are redrawn as β circles.
pub fn s2bundles_to_double(d: &Diagram) -> Result<HeegaardDiagram> {
    let mut base = double_kirby(d)?;
    base.r3 = 0;
    let dotted = d.dotted_ids();
    for c in &dotted {
        base.components.get_mut(c).unwrap().kind = Kind::Surface;
    }
    let mut h = HeegaardDiagram::new(base);
    h.diagram.name = format!("s2bundles_to_{}", h.diagram.name);
    for c in dotted {
        h.sides.insert(c, Side::Beta);
    }
    h.class = Some(FiveKind::Cobordism);
    Ok(h)
}

/// Cobordism for the Gluck twist of `x` along the 2-knot `knot`, which is
/// a banded unlink drawn over `x`. The base gains a 1-framed and 0-framed
/// Hopf pair; α is a fiber of the 1-framed summand and β is the knot
/// joined by a band to a parallel fiber.
pub fn gluck_cobordism(x: &Diagram, knot: &Diagram) -> Result<HeegaardDiagram> {
    check_over(x, knot, "knot")?;
    if !knot.vertices.is_empty() {
        return reject("knot diagram may not contain vertices");
    }
    let surfaces = knot.surface_ids();
    let first = match surfaces.first() {
        Some(c) => c.clone(),
        None => return reject("knot diagram has no surface components"),
    };
    let mut d = knot.clone();
    d.name = format!("gluck_{}", knot.name);
    let g1 = add_component(&mut d, "G1", Kind::Framed(1));
    let g0 = add_component(&mut d, "G0", Kind::Framed(0));
    let (a, b) = (d.push_slot(&g1), d.push_slot(&g1));
    let (c, e) = (d.push_slot(&g0), d.push_slot(&g0));
    d.add_crossing(1, a, c);
    d.add_crossing(1, e, b);
    let f = add_component(&mut d, "F", Kind::Surface);
    let s = d.push_slot(&g1);
    d.add_piercing(&f, s, 1);
    let fp = add_component(&mut d, "Fp", Kind::Surface);
    let s = d.push_slot(&g1);
    d.add_piercing(&fp, s, 1);
    let from = d.push_slot(&first);
    let to = d.push_slot(&fp);
    let bid = pick(&d, "Bg");
    d.bands.insert(bid, Band { from, to, twists: 0, core: vec![] });
    let mut h = HeegaardDiagram::new(d);
    for c in surfaces {
        h.sides.insert(c, Side::Beta);
    }
    h.sides.insert(f, Side::Alpha);
    h.sides.insert(fp, Side::Beta);
    h.class = Some(FiveKind::Cobordism);
    Ok(h)
}
