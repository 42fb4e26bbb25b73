//! Structural curvature check on edge links (and vertex links of the
//! two-dimensional part).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::report::{CheckReport, Verdict, Witness};
use crate::complex::{SimplexId, SimplicialComplex};
use crate::error::Result;
use crate::metric::{comparison_angle, dihedral_angle, realize_tetrahedron, tet_lengths, MetricAssignment};

/// Angle sums may fall short of `2π` by this much.
pub const LINK_TOL: f64 = 1e-9;

/// Weighted link graph: arcs `(u, v, angle)` between link vertices.
struct LinkGraph {
    arcs: Vec<(u32, u32, f64)>,
}

impl LinkGraph {
    /// Shortest cycle, with its arcs, or `None` for a forest.
    fn girth(&self) -> Option<(f64, Vec<usize>)> {
        let mut best: Option<(f64, Vec<usize>)> = None;
        for (skip, &(u, v, w)) in self.arcs.iter().enumerate() {
            if let Some((d, mut path)) = self.shortest(u, v, skip) {
                path.push(skip);
                if best.as_ref().is_none_or(|b| d + w < b.0) {
                    best = Some((d + w, path));
                }
            }
        }
        best
    }

    /// Dijkstra from `s` to `t` without arc `skip`; arcs are few.
    fn shortest(&self, s: u32, t: u32, skip: usize) -> Option<(f64, Vec<usize>)> {
        let mut dist: BTreeMap<u32, (f64, Option<usize>)> = BTreeMap::new();
        let mut done: Vec<u32> = Vec::new();
        dist.insert(s, (0.0, None));
        loop {
            let (&u, &(du, _)) = dist.iter().filter(|(n, _)| !done.contains(n)).min_by(|a, b| a.1 .0.total_cmp(&b.1 .0))?;
            if u == t {
                break;
            }
            done.push(u);
            for (i, &(x, y, w)) in self.arcs.iter().enumerate() {
                if i == skip || (x != u && y != u) {
                    continue;
                }
                let other = if x == u { y } else { x };
                if dist.get(&other).is_none_or(|(d, _)| du + w < *d) {
                    dist.insert(other, (du + w, Some(i)));
                }
            }
        }
        let mut path = Vec::new();
        let mut at = t;
        while let Some((_, Some(i))) = dist.get(&at) {
            path.push(*i);
            let (x, y, _) = self.arcs[*i];
            at = if x == at { y } else { x };
        }
        Some((dist[&t].0, path))
    }
}

fn edge_link(k: &SimplicialComplex, metric: &MetricAssignment, e: &SimplexId) -> Result<LinkGraph> {
    let mut arcs = Vec::new();
    for t in k.cofaces(e).filter(|s| s.dim() == 3) {
        let p = realize_tetrahedron(&tet_lengths(&metric.simplex_lengths(t)?))?;
        let (i, j) = (t.position(e.vertices()[0]).unwrap(), t.position(e.vertices()[1]).unwrap());
        let rest: Vec<u32> = t.vertices().iter().copied().filter(|v| !e.contains(*v)).collect();
        arcs.push((rest[0], rest[1], dihedral_angle(&p, i, j)));
    }
    Ok(LinkGraph { arcs })
}

/// Link of a vertex whose star has no tetrahedra, built from its triangles.
fn vertex_link(k: &SimplicialComplex, metric: &MetricAssignment, v: u32) -> Result<Option<LinkGraph>> {
    let star: Vec<&SimplexId> = k.cofaces(&SimplexId::vertex(v)).collect();
    if star.iter().any(|s| s.dim() == 3) {
        return Ok(None);
    }
    let mut arcs = Vec::new();
    for t in star.into_iter().filter(|s| s.dim() == 2) {
        let rest: Vec<u32> = t.vertices().iter().copied().filter(|w| *w != v).collect();
        let angle = comparison_angle(metric.len(rest[0], rest[1]), metric.len(v, rest[0]), metric.len(v, rest[1]))?;
        arcs.push((rest[0], rest[1], angle));
    }
    Ok(Some(LinkGraph { arcs }))
}

/// Every cycle in the link of an edge (angles = dihedral angles of the
/// incident tetrahedra) must have length at least `2π`; so must every
/// cycle in the link of a vertex of the two-dimensional part (angles =
/// triangle angles). Edges and vertices whose links are forests are
/// unconstrained.
pub fn edge_link_check(k: &SimplicialComplex, metric: &MetricAssignment) -> Result<CheckReport> {
    let mut worst: Option<(f64, SimplexId, Vec<SimplexId>)> = None;
    let mut checked = 0usize;
    let mut consider = |graph: LinkGraph, centre: SimplexId, worst: &mut Option<(f64, SimplexId, Vec<SimplexId>)>| {
        if let Some((len, arcs)) = graph.girth() {
            checked += 1;
            let slack = len - 2.0 * PI;
            if worst.as_ref().is_none_or(|w| slack < w.0) {
                let cells = arcs
                    .iter()
                    .map(|&i| {
                        let (x, y, _) = graph.arcs[i];
                        let mut vs = centre.vertices().to_vec();
                        vs.extend([x, y]);
                        SimplexId::new(&vs).unwrap()
                    })
                    .collect();
                *worst = Some((slack, centre, cells));
            }
        }
    };
    for e in k.edges().copied().collect::<Vec<_>>() {
        consider(edge_link(k, metric, &e)?, e, &mut worst);
    }
    for v in k.vertices() {
        if let Some(g) = vertex_link(k, metric, v)? {
            consider(g, SimplexId::vertex(v), &mut worst);
        }
    }
    let Some((slack, centre, cells)) = worst else {
        return Ok(CheckReport::new("edge_link", Verdict::Pass, 0.0).detail("links_with_cycles", 0).detail("min_slack", "none"));
    };
    let violation = (-slack).max(0.0);
    let verdict = if slack >= -LINK_TOL { Verdict::Pass } else { Verdict::Fail };
    let mut r = CheckReport::new("edge_link", verdict, violation)
        .detail("links_with_cycles", checked)
        .detail("min_slack", format!("{slack:.17e}"));
    if verdict == Verdict::Fail {
        r = r.with_witness(Witness {
            description: format!("angles around {} sum to {:.17e} < 2π", k.name(&centre), slack + 2.0 * PI),
            points: vec![],
            simplices: std::iter::once(centre).chain(cells).collect(),
            values: vec![("angle_sum".into(), slack + 2.0 * PI), ("deficit".into(), violation)],
        });
    }
    Ok(r)
}
