use super::matrix::{chain_homology, smith_normal_form, AbelianGroup, IntMatrix};
use crate::ddc::Diagram;
use crate::{reject, Result};

/// Signed piercing counts: dotted circles (rows) × framed components
/// (columns), both in id order.
pub fn piercing_matrix(d: &Diagram) -> IntMatrix {
    let dot = d.dotted_ids();
    let fr = d.framed_ids();
    let mut m = IntMatrix::zeros(dot.len(), fr.len());
    for (i, x) in dot.iter().enumerate() {
        for (j, k) in fr.iter().enumerate() {
            m.set(i, j, d.piercing_sum(x, k));
        }
    }
    m
}

/// `H_0 .. H_4` of the 4-manifold of a Kirby diagram. When `closed`, the
/// diagram's `r3` 3-handles and a 4-handle are added and the groups above
/// degree 1 come from Poincaré duality together with the Euler
/// characteristic, since the code carries no 3-handle attaching data.
pub fn homology_4manifold(d: &Diagram, closed: bool) -> Result<Vec<AbelianGroup>> {
    if !d.surface_ids().is_empty() || !d.bands.is_empty() || !d.vertices.is_empty() {
        return reject("homology needs a Kirby diagram (dotted and framed components only)");
    }
    let p = piercing_matrix(d);
    let (k, f) = (p.rows, p.cols);
    let open = chain_homology(&[1, k, f], |i| if i == 1 { IntMatrix::zeros(1, k) } else { p.clone() });
    if !closed {
        return Ok(vec![open[0].clone(), open[1].clone(), open[2].clone(), AbelianGroup::trivial(), AbelianGroup::trivial()]);
    }
    let h1 = open[1].clone();
    let b1 = h1.rank as i64;
    let chi = 2 - k as i64 + f as i64 - d.r3 as i64;
    let b2 = chi - 2 + 2 * b1;
    let ker_rank = (f - smith_normal_form(&p).rank()) as i64;
    if b2 < 0 || b2 > ker_rank {
        return reject(format!(
            "closed homology inconsistent with r3 = {}: second Betti number would be {b2}",
            d.r3
        ));
    }
    Ok(vec![
        AbelianGroup::free(1),
        h1.clone(),
        AbelianGroup { rank: b2 as usize, torsion: h1.torsion.clone() },
        AbelianGroup::free(b1 as usize),
        AbelianGroup::free(1),
    ])
}

/// Alternating sum of ranks.
pub fn euler_of(groups: &[AbelianGroup]) -> i64 {
    groups.iter().enumerate().map(|(i, g)| if i % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) }).sum()
}
