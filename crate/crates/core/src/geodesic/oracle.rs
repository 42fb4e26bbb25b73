//! Brute-force shortest paths over edge subdivision points.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use super::{PiecewisePath, SimplexPoint};
use crate::complex::SimplexId;
use crate::error::{Error, Result};
use super::engine::realize_cell;
use crate::metric::{MetricAssignment, Point3};

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub length: f64,
    pub path: PiecewisePath,
    /// Nodes settled before the target.
    pub settled: usize,
}

#[derive(Clone, Copy, PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Graph<'a> {
    cells: &'a [SimplexId],
    pos: Vec<[Point3; 4]>,
    vertices: Vec<u32>,
    edges: Vec<SimplexId>,
    /// Subdivisions per edge.
    k: usize,
}

enum Node {
    Vertex(u32),
    OnEdge(usize, usize),
    Source,
    Target,
}

impl Graph<'_> {
    fn n_nodes(&self) -> usize {
        self.vertices.len() + self.edges.len() * (self.k - 1) + 2
    }

    fn node(&self, id: usize) -> Node {
        let nv = self.vertices.len();
        let ne = self.edges.len() * (self.k - 1);
        if id < nv {
            Node::Vertex(self.vertices[id])
        } else if id < nv + ne {
            let r = id - nv;
            Node::OnEdge(r / (self.k - 1), r % (self.k - 1) + 1)
        } else if id == nv + ne {
            Node::Source
        } else {
            Node::Target
        }
    }

    fn vertex_id(&self, v: u32) -> usize {
        self.vertices.binary_search(&v).unwrap()
    }

    fn edge_node(&self, e: usize, i: usize) -> usize {
        if i == 0 {
            self.vertex_id(self.edges[e].vertices()[0])
        } else if i == self.k {
            self.vertex_id(self.edges[e].vertices()[1])
        } else {
            self.vertices.len() + e * (self.k - 1) + i - 1
        }
    }
}

fn at(cell: &SimplexId, pos: &[Point3; 4], p: &SimplexPoint) -> Point3 {
    let c = p.coords_in(cell).unwrap();
    (0..cell.len()).fold(Point3::zeros(), |acc, i| acc + pos[i] * c[i])
}

/// Dijkstra over `resolution` evenly spaced points per edge of `cells`, plus
/// the vertices and the two endpoints. Two nodes are joined when they lie in
/// a common cell, with the chord length as weight.
pub fn subdivision_oracle(
    metric: &MetricAssignment,
    cells: &[SimplexId],
    p: &SimplexPoint,
    q: &SimplexPoint,
    resolution: usize,
) -> Result<OracleResult> {
    if resolution < 1 {
        return Err(Error::Domain("resolution must be at least 1".into()));
    }
    if resolution >= 4 && resolution % 2 == 0 {
        // A coarser graph on every other node bounds the search from above.
        let coarse = subdivision_oracle_bounded(metric, cells, p, q, resolution / 2, f64::INFINITY)?;
        return subdivision_oracle_bounded(metric, cells, p, q, resolution, coarse.length * (1.0 + 1e-12));
    }
    subdivision_oracle_bounded(metric, cells, p, q, resolution, f64::INFINITY)
}

fn subdivision_oracle_bounded(
    metric: &MetricAssignment,
    cells: &[SimplexId],
    p: &SimplexPoint,
    q: &SimplexPoint,
    resolution: usize,
    bound: f64,
) -> Result<OracleResult> {
    let mut vertices: Vec<u32> = cells.iter().flat_map(|c| c.vertices().to_vec()).collect();
    vertices.sort_unstable();
    vertices.dedup();
    let mut edge_set: BTreeMap<SimplexId, ()> = BTreeMap::new();
    for c in cells {
        for (i, j) in c.edge_index_pairs() {
            edge_set.insert(SimplexId::edge(c.vertices()[i], c.vertices()[j]), ());
        }
    }
    let g = Graph {
        cells,
        pos: cells.iter().map(|c| realize_cell(metric, c)).collect::<Result<_>>()?,
        vertices,
        edges: edge_set.into_keys().collect(),
        k: resolution,
    };
    let n = g.n_nodes();
    let (src, dst) = (n - 2, n - 1);
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Entry(0.0, src));
    let mut settled = 0;
    let (sp, sq) = (p.support(), q.support());
    while let Some(Entry(du, u)) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        settled += 1;
        if u == dst {
            break;
        }
        let limit = dist[dst].min(bound);
        if du >= limit {
            break;
        }
        let (here, support): (SimplexPoint, SimplexId) = match g.node(u) {
            Node::Vertex(v) => (SimplexPoint::vertex(v), SimplexId::vertex(v)),
            Node::OnEdge(e, i) => {
                let ev = g.edges[e].vertices();
                (SimplexPoint::on_edge(ev[0], ev[1], i as f64 / g.k as f64), g.edges[e])
            }
            Node::Source => (*p, sp),
            Node::Target => unreachable!(),
        };
        for (ci, cell) in g.cells.iter().enumerate() {
            if !support.is_face_of(cell) {
                continue;
            }
            let pos = &g.pos[ci];
            let pu = at(cell, pos, &here);
            let radius = limit - du;
            let mut relax = |v: usize, w: f64, dist: &mut Vec<f64>, heap: &mut BinaryHeap<Entry>| {
                let nd = du + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    pred[v] = u;
                    heap.push(Entry(nd, v));
                }
            };
            if sq.is_face_of(cell) {
                let w = (at(cell, pos, q) - pu).norm();
                relax(dst, w, &mut dist, &mut heap);
            }
            for (e, edge) in g.edges.iter().enumerate() {
                if !edge.is_face_of(cell) {
                    continue;
                }
                let ev = edge.vertices();
                let a = pos[cell.position(ev[0]).unwrap()];
                let b = pos[cell.position(ev[1]).unwrap()];
                // |a + (i/k)(b − a) − pu|² = c0 + c1·i + c2·i².
                let (ab, au) = ((b - a) / g.k as f64, a - pu);
                let (c0, c1, c2) = (au.norm_squared(), 2.0 * au.dot(&ab), ab.norm_squared());
                let (mut lo, mut hi) = (0usize, g.k);
                if radius.is_finite() {
                    let disc = c1 * c1 - 4.0 * c2 * (c0 - radius * radius);
                    if disc < 0.0 {
                        continue;
                    }
                    let r = disc.sqrt();
                    let (i0, i1) = ((-c1 - r) / (2.0 * c2), (-c1 + r) / (2.0 * c2));
                    if i1 < 0.0 || i0 > g.k as f64 {
                        continue;
                    }
                    lo = i0.max(0.0).ceil() as usize;
                    hi = (i1.min(g.k as f64)).floor() as usize;
                }
                for i in lo..=hi {
                    let v = g.edge_node(e, i);
                    if done[v] {
                        continue;
                    }
                    let fi = i as f64;
                    let w = (c0 + fi * (c1 + fi * c2)).max(0.0).sqrt();
                    relax(v, w, &mut dist, &mut heap);
                }
            }
        }
    }
    if !dist[dst].is_finite() {
        return Err(Error::NoPath("the endpoints are not connected in the subdivision graph".into()));
    }
    let mut ids = vec![dst];
    while *ids.last().unwrap() != src {
        ids.push(pred[*ids.last().unwrap()]);
    }
    ids.reverse();
    let points: Vec<SimplexPoint> = ids
        .iter()
        .map(|&id| match g.node(id) {
            Node::Vertex(v) => SimplexPoint::vertex(v),
            Node::OnEdge(e, i) => {
                let ev = g.edges[e].vertices();
                SimplexPoint::on_edge(ev[0], ev[1], i as f64 / g.k as f64)
            }
            Node::Source => *p,
            Node::Target => *q,
        })
        .collect();
    Ok(OracleResult { length: dist[dst], path: PiecewisePath { points, length: dist[dst] }, settled })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;

    #[test]
    fn flat_rhombus_converges() {
        let k = build_complex(&[vec!["a", "b", "c"], vec!["b", "c", "d"]]).unwrap();
        let m = MetricAssignment::standard(&k);
        let cells = k.maximal_simplices();
        let (a, d) = (SimplexPoint::vertex(0), SimplexPoint::vertex(3));
        let r = subdivision_oracle(&m, &cells, &a, &d, 200).unwrap();
        // The diagonal crosses bc at its midpoint, a grid node.
        assert!((r.length - 3f64.sqrt()).abs() < 1e-12);
        let p = SimplexPoint::new(cells[0], &[0.6, 0.3, 0.1]).unwrap();
        let (r1, r2) = (subdivision_oracle(&m, &cells, &p, &d, 10).unwrap(), subdivision_oracle(&m, &cells, &p, &d, 1000).unwrap());
        assert!(r2.length <= r1.length + 1e-15);
        assert!(r2.path.is_valid_in(&k));
    }
}
