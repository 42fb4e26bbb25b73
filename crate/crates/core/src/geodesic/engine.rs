//! Shortest paths in piecewise-flat complexes of dimension at most three.
//!
//! A path is routed through a gallery: a sequence of distinct maximal cells,
//! consecutive ones sharing a face of dimension at least one. Inside a
//! gallery the length is a convex function of the crossing points. Cells
//! glued along a common triangle are unfolded rigidly (the path crosses the
//! triangle's plane straight); cells glued along an edge contribute one
//! parameter on that edge. A rigid crossing that falls outside its triangle
//! is handled by the variants that cross one of the triangle's edges instead.
//!
//! Paths whose consecutive cells share only a vertex go through a vertex
//! graph, or through the common vertex when every cell has one.
//!
//! Cells are treated as geodesically convex, which holds in nonpositively
//! curved complexes. Elsewhere the reported lengths are lengths of actual
//! paths, hence upper bounds.

use super::{PiecewisePath, SimplexPoint};
use crate::complex::{SimplexId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::metric::{realize_tetrahedron, realize_triangle, tet_lengths, MetricAssignment, Point3};

/// A rigid crossing may leave its triangle by this much in barycentric terms.
const FEASIBLE: f64 = -1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineOptions {
    /// Longest gallery considered.
    pub max_cells: usize,
    /// Galleries with more triangle hinges only try variants with at most
    /// two of them crossed through an edge.
    pub max_face_variants: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { max_cells: 8, max_face_variants: 3 }
    }
}

#[derive(Clone, Debug)]
struct Cell {
    s: SimplexId,
    pos: [Point3; 4],
}

impl Cell {
    fn at(&self, pos: &[Point3; 4], p: &SimplexPoint) -> Point3 {
        let c = p.coords_in(&self.s).expect("point lies in the cell");
        (0..self.s.len()).fold(Point3::zeros(), |acc, i| acc + pos[i] * c[i])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Link {
    /// Rigid unfolding across a shared triangle.
    Face(SimplexId),
    /// One free parameter on a shared edge.
    Edge(SimplexId),
}

/// An edge hinge seen from both sides: endpoint positions in the frame of
/// the group before and after it.
struct Axial {
    e: SimplexId,
    before: [Point3; 2],
    after: [Point3; 2],
}

/// Cells unfolded into one frame, with the rigid faces between them.
struct Group {
    cells: Vec<(usize, [Point3; 4])>,
    faces: Vec<SimplexId>,
}

struct Found {
    length: f64,
    points: Vec<SimplexPoint>,
}

pub struct GeodesicEngine {
    metric: MetricAssignment,
    cells: Vec<Cell>,
    /// Neighbours sharing a face of dimension at least one.
    adj: Vec<Vec<(usize, SimplexId)>>,
    hub: Option<u32>,
    vertices: Vec<u32>,
    /// All-pairs vertex distances and successors, when there is no hub.
    dv: Vec<Vec<f64>>,
    next: Vec<Vec<usize>>,
    opts: EngineOptions,
}

impl std::fmt::Debug for GeodesicEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GeodesicEngine").field("cells", &self.cells.len()).field("hub", &self.hub).finish()
    }
}

pub(crate) fn realize_cell(metric: &MetricAssignment, s: &SimplexId) -> Result<[Point3; 4]> {
    let l = metric.simplex_lengths(s)?;
    let mut pos = [Point3::zeros(); 4];
    match s.dim() {
        0 => {}
        1 => pos[1] = Point3::new(l[0][1], 0.0, 0.0),
        2 => {
            let t = realize_triangle(l[0][1], l[1][2], l[0][2])?;
            for i in 0..3 {
                pos[i] = Point3::new(t[i].x, t[i].y, 0.0);
            }
        }
        _ => pos = realize_tetrahedron(&tet_lengths(&l))?,
    }
    Ok(pos)
}

/// Distance from `p` to the convex hull of one, two or three points.
fn dist_to_hull(p: &Point3, q: &[Point3]) -> f64 {
    match q.len() {
        1 => (p - q[0]).norm(),
        2 => {
            let e = q[1] - q[0];
            let t = ((p - q[0]).dot(&e) / e.norm_squared()).clamp(0.0, 1.0);
            (p - (q[0] + e * t)).norm()
        }
        _ => (p - closest_on_triangle(p, &q[0], &q[1], &q[2])).norm(),
    }
}

/// Closest point of triangle `abc` to `p` by Voronoi-region classification.
fn closest_on_triangle(p: &Point3, a: &Point3, b: &Point3, c: &Point3) -> Point3 {
    let (ab, ac, ap) = (b - a, c - a, p - a);
    let (d1, d2) = (ab.dot(&ap), ac.dot(&ap));
    if d1 <= 0.0 && d2 <= 0.0 {
        return *a;
    }
    let bp = p - b;
    let (d3, d4) = (ab.dot(&bp), ac.dot(&bp));
    if d3 >= 0.0 && d4 <= d3 {
        return *b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let (d5, d6) = (ab.dot(&cp), ac.dot(&cp));
    if d6 >= 0.0 && d5 <= d6 {
        return *c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let den = 1.0 / (va + vb + vc);
    a + ab * (vb * den) + ac * (vc * den)
}

/// Point at distances `r` from `p[0..3]`, on the side of their plane away
/// from `away`.
fn trilaterate(p: &[Point3; 3], r: [f64; 3], away: &Point3) -> Point3 {
    let ex = p[1] - p[0];
    let d = ex.norm();
    let ex = ex / d;
    let w = p[2] - p[0];
    let i = ex.dot(&w);
    let ey = (w - ex * i).normalize();
    let j = ey.dot(&w);
    let ez = ex.cross(&ey);
    let x = (r[0] * r[0] - r[1] * r[1] + d * d) / (2.0 * d);
    let y = (r[0] * r[0] - r[2] * r[2] + i * i + j * j) / (2.0 * j) - i / j * x;
    let z = (r[0] * r[0] - x * x - y * y).max(0.0).sqrt();
    let side = if ez.dot(&(away - p[0])) > 0.0 { -1.0 } else { 1.0 };
    p[0] + ex * x + ey * y + ez * (side * z)
}

/// Minimises `Σ |r_j|` over `s ∈ [0,1]^k` where `r_j` joins consecutive
/// points of the chain `X, A₁(s₁), …, A_k(s_k), Y`.
///
/// `lines[j]` gives hinge `j` as `(start, direction)` in the frame before
/// it and in the frame after it.
fn solve_axial(x: &Point3, y: &Point3, lines: &[[(Point3, Point3); 2]]) -> Vec<f64> {
    let k = lines.len();
    if k == 0 {
        return vec![];
    }
    if k == 1 {
        // Unfold the two half-planes about the edge.
        let [(u0, e0), (u1, e1)] = lines[0];
        let l = e0.norm();
        let (ux, uy) = (e0 / l, e1 / e1.norm());
        let (tx, ty) = ((x - u0).dot(&ux), (y - u1).dot(&uy));
        let hx = ((x - u0) - ux * tx).norm();
        let hy = ((y - u1) - uy * ty).norm();
        let t = if hx + hy > 0.0 { (tx * hy + ty * hx) / (hx + hy) } else { 0.5 * (tx + ty) };
        return vec![(t / l).clamp(0.0, 1.0)];
    }
    // r_j = (b0_j + s_{j+1} b1_j) − (a0_j + s_j a1_j) in frame j.
    let mut a0 = vec![*x; k + 1];
    let mut a1 = vec![Point3::zeros(); k + 1];
    let mut b0 = vec![*y; k + 1];
    let mut b1 = vec![Point3::zeros(); k + 1];
    let mut scale = 0.0f64;
    for (j, l) in lines.iter().enumerate() {
        b0[j] = l[0].0;
        b1[j] = l[0].1;
        a0[j + 1] = l[1].0;
        a1[j + 1] = l[1].1;
        scale = scale.max(l[0].1.norm());
    }
    let resid = |s: &[f64], j: usize| {
        let mut r = b0[j] - a0[j];
        if j < k {
            r += b1[j] * s[j];
        }
        if j > 0 {
            r -= a1[j] * s[j - 1];
        }
        r
    };
    let value = |s: &[f64], eps2: f64| (0..=k).map(|j| (resid(s, j).norm_squared() + eps2).sqrt()).sum::<f64>();
    let mut s = vec![0.5; k];
    let mut eps = 1e-2 * scale;
    while eps > 1e-13 * scale {
        let eps2 = eps * eps;
        for _ in 0..60 {
            let mut grad = vec![0.0; k];
            let mut diag = vec![0.0; k];
            let mut off = vec![0.0; k];
            for j in 0..=k {
                let r = resid(&s, j);
                let g = (r.norm_squared() + eps2).sqrt();
                // Columns of the Jacobian of r_j: s_{j-1} ↦ −a1_j, s_j ↦ b1_j.
                let cols: [(Option<usize>, Point3); 2] =
                    [(j.checked_sub(1), -a1[j]), (if j < k { Some(j) } else { None }, b1[j])];
                for (iu, cu) in cols.iter() {
                    let Some(u) = *iu else { continue };
                    grad[u] += r.dot(cu) / g;
                    for (iv, cv) in cols.iter() {
                        let Some(v) = *iv else { continue };
                        let h = cu.dot(cv) / g - r.dot(cu) * r.dot(cv) / (g * g * g);
                        if u == v {
                            diag[u] += h;
                        } else if v == u + 1 {
                            off[u] += h;
                        }
                    }
                }
            }
            let free: Vec<usize> =
                (0..k).filter(|&i| !((s[i] <= 0.0 && grad[i] > 0.0) || (s[i] >= 1.0 && grad[i] < 0.0))).collect();
            let pg = free.iter().map(|&i| grad[i].abs()).fold(0.0, f64::max);
            if pg < 1e-15 * scale.max(1.0) {
                break;
            }
            let mut d = vec![0.0; k];
            if !tridiagonal_solve(&free, &diag, &off, &grad, &mut d) || free.iter().map(|&i| d[i] * grad[i]).sum::<f64>() >= 0.0 {
                for &i in &free {
                    d[i] = -grad[i] / diag[i].abs().max(1e-300);
                }
            }
            let f0 = value(&s, eps2);
            let mut alpha = 1.0;
            let mut moved = false;
            for _ in 0..40 {
                let trial: Vec<f64> = (0..k).map(|i| (s[i] + alpha * d[i]).clamp(0.0, 1.0)).collect();
                let dec: f64 = (0..k).map(|i| grad[i] * (s[i] - trial[i])).sum();
                if value(&trial, eps2) <= f0 - 1e-4 * dec.max(0.0) {
                    let step = (0..k).map(|i| (trial[i] - s[i]).abs()).fold(0.0, f64::max);
                    s = trial;
                    moved = step > 1e-16;
                    break;
                }
                alpha *= 0.5;
            }
            if !moved {
                break;
            }
        }
        eps *= 1e-2;
    }
    s
}

/// Solves the Newton system `H_FF d_F = −g_F` for the free indices of a
/// tridiagonal matrix; fixed indices keep `d = 0`.
fn tridiagonal_solve(free: &[usize], diag: &[f64], off: &[f64], g: &[f64], d: &mut [f64]) -> bool {
    let n = free.len();
    if n == 0 {
        return true;
    }
    let mut c = vec![0.0; n];
    let mut r = vec![0.0; n];
    let mut prev_c = 0.0;
    let mut prev_r = 0.0;
    for (m, &i) in free.iter().enumerate() {
        let sub = if m > 0 && free[m - 1] + 1 == i { off[i - 1] } else { 0.0 };
        let sup = if m + 1 < n && free[m + 1] == i + 1 { off[i] } else { 0.0 };
        let piv = diag[i] - sub * prev_c;
        if !(piv > 1e-300) {
            return false;
        }
        c[m] = sup / piv;
        r[m] = (-g[i] - sub * prev_r) / piv;
        prev_c = c[m];
        prev_r = r[m];
    }
    let mut x = 0.0;
    for m in (0..n).rev() {
        x = r[m] - if m + 1 < n { c[m] * x } else { 0.0 };
        d[free[m]] = x;
    }
    true
}

impl GeodesicEngine {
    pub fn new(k: &SimplicialComplex, metric: &MetricAssignment) -> Result<Self> {
        Self::with_cells(k, metric, &k.maximal_simplices(), EngineOptions::default())
    }

    /// Engine over the subcomplex spanned by `cells`, which must be pairwise
    /// non-nested simplices of `k`.
    pub fn with_cells(k: &SimplicialComplex, metric: &MetricAssignment, cells: &[SimplexId], opts: EngineOptions) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::DegenerateInput("a geodesic engine needs at least one cell".into()));
        }
        let mut built = Vec::with_capacity(cells.len());
        for s in cells {
            if !k.contains(s) {
                return Err(Error::UnknownVertex(format!("{s:?} is not a simplex of the complex")));
            }
            built.push(Cell { s: *s, pos: realize_cell(metric, s)? });
        }
        let n = built.len();
        let mut adj = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    if let Some(f) = built[i].s.intersection(&built[j].s).filter(|f| f.dim() >= 1) {
                        adj[i].push((j, f));
                    }
                }
            }
        }
        let hub = built.iter().skip(1).try_fold(built[0].s, |acc, c| acc.intersection(&c.s)).map(|s| s.vertices()[0]);
        let mut vertices: Vec<u32> = built.iter().flat_map(|c| c.s.vertices().to_vec()).collect();
        vertices.sort_unstable();
        vertices.dedup();
        let mut engine = GeodesicEngine {
            metric: metric.clone(),
            cells: built,
            adj,
            hub,
            vertices,
            dv: vec![],
            next: vec![],
            opts,
        };
        if engine.hub.is_none() {
            engine.build_vertex_graph();
        }
        Ok(engine)
    }

    fn build_vertex_graph(&mut self) {
        let n = self.vertices.len();
        let mut d = vec![vec![f64::INFINITY; n]; n];
        let mut next = vec![vec![usize::MAX; n]; n];
        for i in 0..n {
            d[i][i] = 0.0;
            next[i][i] = i;
            for j in i + 1..n {
                let (vi, vj) = (SimplexPoint::vertex(self.vertices[i]), SimplexPoint::vertex(self.vertices[j]));
                if let Some(f) = self.search(&vi, &vj) {
                    d[i][j] = f.length;
                    d[j][i] = f.length;
                    next[i][j] = j;
                    next[j][i] = i;
                }
            }
        }
        for m in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i][m] + d[m][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                        next[i][j] = next[i][m];
                    }
                }
            }
        }
        self.dv = d;
        self.next = next;
    }

    pub fn cells(&self) -> impl Iterator<Item = SimplexId> + '_ {
        self.cells.iter().map(|c| c.s)
    }

    pub fn metric(&self) -> &MetricAssignment {
        &self.metric
    }

    /// Vertex common to every cell, if any.
    pub fn hub(&self) -> Option<u32> {
        self.hub
    }

    pub fn contains_point(&self, p: &SimplexPoint) -> bool {
        let s = p.support();
        self.cells.iter().any(|c| s.is_face_of(&c.s))
    }

    pub fn distance(&self, x: &SimplexPoint, y: &SimplexPoint) -> Result<f64> {
        self.route(x, y, false).map(|p| p.length)
    }

    pub fn geodesic(&self, x: &SimplexPoint, y: &SimplexPoint) -> Result<PiecewisePath> {
        self.route(x, y, true)
    }

    fn route(&self, x: &SimplexPoint, y: &SimplexPoint, want_path: bool) -> Result<PiecewisePath> {
        for p in [x, y] {
            if !self.contains_point(p) {
                return Err(Error::NoPath(format!("point {p:?} is outside the neighbourhood")));
            }
        }
        let direct = self.search(x, y);
        let mut best = direct.map(|f| PiecewisePath { points: f.points, length: f.length });
        let better = |best: &Option<PiecewisePath>, l: f64| best.as_ref().is_none_or(|b| l < b.length);
        if let Some(a) = self.hub {
            let va = SimplexPoint::vertex(a);
            let l1 = self.search(x, &va).ok_or_else(|| Error::NoPath("hub unreachable".into()))?;
            let l2 = self.search(&va, y).ok_or_else(|| Error::NoPath("hub unreachable".into()))?;
            if better(&best, l1.length + l2.length) {
                let p1 = PiecewisePath { points: l1.points, length: l1.length };
                let p2 = PiecewisePath { points: l2.points, length: l2.length };
                best = Some(p1.concat(&p2));
            }
        } else {
            let n = self.vertices.len();
            let to: Vec<Option<Found>> = self.vertices.iter().map(|&v| self.search(x, &SimplexPoint::vertex(v))).collect();
            let from: Vec<Option<Found>> = self.vertices.iter().map(|&v| self.search(&SimplexPoint::vertex(v), y)).collect();
            let mut pick: Option<(f64, usize, usize)> = None;
            for i in 0..n {
                let Some(a) = &to[i] else { continue };
                for j in 0..n {
                    let Some(b) = &from[j] else { continue };
                    let l = a.length + self.dv[i][j] + b.length;
                    if l.is_finite() && pick.is_none_or(|p| l < p.0) {
                        pick = Some((l, i, j));
                    }
                }
            }
            if let Some((l, i, j)) = pick {
                if better(&best, l) {
                    let mut path = PiecewisePath { points: to[i].as_ref().unwrap().points.clone(), length: 0.0 };
                    if want_path {
                        let mut u = i;
                        while u != j {
                            let w = self.next[u][j];
                            let seg = self
                                .search(&SimplexPoint::vertex(self.vertices[u]), &SimplexPoint::vertex(self.vertices[w]))
                                .expect("graph edges are reachable");
                            path = path.concat(&PiecewisePath { points: seg.points, length: 0.0 });
                            u = w;
                        }
                        path = path.concat(&PiecewisePath { points: from[j].as_ref().unwrap().points.clone(), length: 0.0 });
                    }
                    path.length = l;
                    best = Some(path);
                }
            }
        }
        best.ok_or_else(|| Error::NoPath("the points lie in different components".into()))
    }

    /// Best path whose consecutive cells share at least an edge.
    fn search(&self, x: &SimplexPoint, y: &SimplexPoint) -> Option<Found> {
        let (sx, sy) = (x.support(), y.support());
        let mut best: Option<Found> = None;
        let mut stack = Vec::with_capacity(self.opts.max_cells);
        for c0 in 0..self.cells.len() {
            if sx.is_face_of(&self.cells[c0].s) {
                stack.push(c0);
                self.extend(x, y, &sx, &sy, &mut stack, 0.0, &mut best);
                stack.pop();
            }
        }
        best
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        x: &SimplexPoint,
        y: &SimplexPoint,
        sx: &SimplexId,
        sy: &SimplexId,
        stack: &mut Vec<usize>,
        lb0: f64,
        best: &mut Option<Found>,
    ) {
        let c = *stack.last().unwrap();
        let bound = best.as_ref().map_or(f64::INFINITY, |b| b.length);
        if sy.is_face_of(&self.cells[c].s) {
            let m = stack.len();
            if m > 1 {
                let f = self.shared(stack[m - 2], c);
                let cell = &self.cells[c];
                let q: Vec<Point3> = f.vertices().iter().map(|v| cell.pos[cell.s.position(*v).unwrap()]).collect();
                if lb0 + dist_to_hull(&cell.at(&cell.pos, y), &q) >= bound {
                    return;
                }
            }
            if let Some(f) = self.evaluate_cells(stack, x, y, bound) {
                if f.length < bound {
                    *best = Some(f);
                }
            }
            return;
        }
        if stack.len() >= self.opts.max_cells {
            return;
        }
        for &(n, f) in &self.adj[c] {
            if stack.contains(&n) || sx.is_face_of(&self.cells[n].s) {
                continue;
            }
            let mut lb = lb0;
            if stack.len() >= 2 {
                let prev = self.shared(stack[stack.len() - 2], c);
                if f.is_face_of(&prev) || prev.is_face_of(&f) {
                    continue;
                }
            } else {
                let cell = &self.cells[c];
                let q: Vec<Point3> = f.vertices().iter().map(|v| cell.pos[cell.s.position(*v).unwrap()]).collect();
                lb = dist_to_hull(&cell.at(&cell.pos, x), &q);
            }
            if lb >= best.as_ref().map_or(f64::INFINITY, |b| b.length) {
                continue;
            }
            stack.push(n);
            self.extend(x, y, sx, sy, stack, lb, best);
            stack.pop();
        }
    }

    fn shared(&self, i: usize, j: usize) -> SimplexId {
        self.cells[i].s.intersection(&self.cells[j].s).unwrap()
    }

    /// Best variant of one cell sequence.
    fn evaluate_cells(&self, cells: &[usize], x: &SimplexPoint, y: &SimplexPoint, bound: f64) -> Option<Found> {
        let mut base = Vec::with_capacity(cells.len().saturating_sub(1));
        let mut faces = Vec::new();
        for w in cells.windows(2) {
            let f = self.shared(w[0], w[1]);
            if f.dim() == 2 && self.cells[w[0]].s.dim() == 3 && self.cells[w[1]].s.dim() == 3 {
                faces.push(base.len());
                base.push(Link::Face(f));
            } else {
                base.push(Link::Edge(f));
            }
        }
        if faces.is_empty() {
            return self.evaluate(cells, &base, x, y);
        }
        if let Some(f) = self.evaluate(cells, &base, x, y) {
            // The rigid relaxation is feasible, so it is optimal.
            return Some(f);
        }
        let mut best: Option<Found> = None;
        let n = faces.len();
        let limit = if n <= self.opts.max_face_variants { n } else { 2 };
        // Choice 0 keeps the face rigid, 1..=3 cross its edges.
        let mut choice = vec![0usize; n];
        loop {
            let mut i = 0;
            while i < n {
                choice[i] += 1;
                if choice[i] <= 3 {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            if choice.iter().filter(|&&c| c > 0).count() > limit {
                continue;
            }
            let mut links = base.clone();
            for (m, &fi) in faces.iter().enumerate() {
                if choice[m] > 0 {
                    let Link::Face(f) = base[fi] else { unreachable!() };
                    links[fi] = Link::Edge(f.facets()[choice[m] - 1]);
                }
            }
            if let Some(f) = self.evaluate(cells, &links, x, y) {
                if f.length < best.as_ref().map_or(bound, |b| b.length) {
                    best = Some(f);
                }
            }
        }
        best
    }

    /// Optimal path through a gallery with fixed hinge kinds; `None` when a
    /// rigid crossing leaves its triangle.
    fn evaluate(&self, cells: &[usize], links: &[Link], x: &SimplexPoint, y: &SimplexPoint) -> Option<Found> {
        let mut groups = Vec::new();
        let mut hinges: Vec<Axial> = Vec::new();
        let first = &self.cells[cells[0]];
        let mut cur = Group { cells: vec![(cells[0], first.pos)], faces: vec![] };
        for (i, link) in links.iter().enumerate() {
            let (pc, ppos) = *cur.cells.last().unwrap();
            let prev = &self.cells[pc];
            let nxt = &self.cells[cells[i + 1]];
            match *link {
                Link::Face(f) => {
                    let fv = f.vertices();
                    let p = [0, 1, 2].map(|m| ppos[prev.s.position(fv[m]).unwrap()]);
                    let away = ppos[prev.s.position(prev.s.opposite(&f).unwrap()).unwrap()];
                    let w = nxt.s.opposite(&f).unwrap();
                    let apex = trilaterate(&p, fv_map(fv, |v| self.metric.len(v, w)), &away);
                    let mut pos = [Point3::zeros(); 4];
                    for (m, &v) in nxt.s.vertices().iter().enumerate() {
                        pos[m] = fv.iter().position(|&u| u == v).map_or(apex, |k| p[k]);
                    }
                    cur.cells.push((cells[i + 1], pos));
                    cur.faces.push(f);
                }
                Link::Edge(e) => {
                    let ev = e.vertices();
                    let before = [ppos[prev.s.position(ev[0]).unwrap()], ppos[prev.s.position(ev[1]).unwrap()]];
                    let after = [nxt.pos[nxt.s.position(ev[0]).unwrap()], nxt.pos[nxt.s.position(ev[1]).unwrap()]];
                    hinges.push(Axial { e, before, after });
                    groups.push(std::mem::replace(&mut cur, Group { cells: vec![(cells[i + 1], nxt.pos)], faces: vec![] }));
                }
            }
        }
        groups.push(cur);
        let xp = first.at(&first.pos, x);
        let (lc, lpos) = *groups.last().unwrap().cells.last().unwrap();
        let yp = self.cells[lc].at(&lpos, y);
        let lines: Vec<[(Point3, Point3); 2]> =
            hinges.iter().map(|h| [(h.before[0], h.before[1] - h.before[0]), (h.after[0], h.after[1] - h.after[0])]).collect();
        let s = solve_axial(&xp, &yp, &lines);
        let mut points = vec![*x];
        let mut length = 0.0;
        for (g, group) in groups.iter().enumerate() {
            let a = if g == 0 { xp } else { lines[g - 1][1].0 + lines[g - 1][1].1 * s[g - 1] };
            let b = if g + 1 < groups.len() { lines[g][0].0 + lines[g][0].1 * s[g] } else { yp };
            let mut last = a;
            for (m, f) in group.faces.iter().enumerate() {
                let (ci, cpos) = group.cells[m];
                let cell = &self.cells[ci];
                let q = [0, 1, 2].map(|k| cpos[cell.s.position(f.vertices()[k]).unwrap()]);
                let bc = line_plane_barycentric(&a, &b, &q)?;
                let z = q[0] * bc[0] + q[1] * bc[1] + q[2] * bc[2];
                length += (z - last).norm();
                last = z;
                points.push(SimplexPoint::normalized(*f, &bc).canonical());
            }
            length += (b - last).norm();
            if g + 1 < groups.len() {
                let ev = hinges[g].e.vertices();
                points.push(SimplexPoint::on_edge(ev[0], ev[1], s[g]));
            }
        }
        points.push(*y);
        points.dedup_by(|p, q| p.canonical() == q.canonical());
        if points.len() == 1 {
            points.push(*y);
        }
        Some(Found { length, points })
    }
}

fn fv_map<F: FnMut(u32) -> f64>(fv: &[u32], mut f: F) -> [f64; 3] {
    [f(fv[0]), f(fv[1]), f(fv[2])]
}

/// Barycentric coordinates of the point where line `ab` meets the plane of
/// triangle `q`, if that point lies in the closed triangle.
fn line_plane_barycentric(a: &Point3, b: &Point3, q: &[Point3; 3]) -> Option<[f64; 3]> {
    let (u, w) = (q[1] - q[0], q[2] - q[0]);
    let n = u.cross(&w);
    let dir = b - a;
    let den = n.dot(&dir);
    if den.abs() <= 1e-14 * n.norm() * dir.norm() {
        return None;
    }
    let lam = n.dot(&(q[0] - a)) / den;
    let z = a + dir * lam - q[0];
    let (uu, uw, ww) = (u.dot(&u), u.dot(&w), w.dot(&w));
    let (zu, zw) = (z.dot(&u), z.dot(&w));
    let det = uu * ww - uw * uw;
    let beta = (zu * ww - zw * uw) / det;
    let gamma = (zw * uu - zu * uw) / det;
    let bc = [1.0 - beta - gamma, beta, gamma];
    bc.iter().all(|c| *c >= FEASIBLE).then_some(bc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::geodesic::path_length;

    fn pt(k: &SimplicialComplex, labels: &[&str], c: &[f64]) -> SimplexPoint {
        SimplexPoint::new(k.simplex_from_labels(labels).unwrap(), c).unwrap()
    }

    #[test]
    fn chord_in_one_cell() {
        let k = build_complex(&[vec!["a", "b", "c", "d"]]).unwrap();
        let m = MetricAssignment::standard(&k);
        let e = GeodesicEngine::new(&k, &m).unwrap();
        let x = pt(&k, &["a", "b", "c", "d"], &[0.7, 0.1, 0.1, 0.1]);
        let y = pt(&k, &["a", "b", "c", "d"], &[0.1, 0.2, 0.3, 0.4]);
        let d = e.distance(&x, &y).unwrap();
        assert!((d - crate::geodesic::chord(&m, &x, &y).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn flat_strip_of_triangles() {
        // Four unit triangles in a row form a flat parallelogram strip.
        let k = build_complex(&[vec!["a", "b", "c"], vec!["b", "c", "d"], vec!["c", "d", "e"], vec!["d", "e", "f"]]).unwrap();
        let m = MetricAssignment::standard(&k);
        let e = GeodesicEngine::new(&k, &m).unwrap();
        let x = SimplexPoint::vertex(0);
        let y = SimplexPoint::vertex(5);
        let p = e.geodesic(&x, &y).unwrap();
        // Unfolded, a = (0, 0) and f = (2, √3).
        let want = 7f64.sqrt();
        assert!((p.length - want).abs() < 1e-9, "{}", p.length);
        assert!(p.is_valid_in(&k));
        assert!((path_length(&p, &m).unwrap() - p.length).abs() < 1e-9);
    }

    #[test]
    fn two_tets_across_a_face() {
        let k = build_complex(&[vec!["a", "b", "c", "d"], vec!["b", "c", "d", "e"]]).unwrap();
        let m = MetricAssignment::standard(&k);
        let e = GeodesicEngine::new(&k, &m).unwrap();
        let d = e.distance(&SimplexPoint::vertex(0), &SimplexPoint::vertex(4)).unwrap();
        // Twice the height of a unit tetrahedron.
        assert!((d - 2.0 * (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn tets_around_an_edge_bend_on_it() {
        // Two tets sharing only the edge ab: the path bends on ab.
        let k = build_complex(&[vec!["a", "b", "c", "d"], vec!["a", "b", "e", "f"]]).unwrap();
        let m = MetricAssignment::standard(&k);
        let e = GeodesicEngine::new(&k, &m).unwrap();
        let x = pt(&k, &["c", "d"], &[0.5, 0.5]);
        let y = pt(&k, &["e", "f"], &[0.5, 0.5]);
        let d = e.distance(&x, &y).unwrap();
        // Both midpoints are at distance √2/2 from the midpoint of ab.
        assert!((d - 2f64.sqrt()).abs() < 1e-12, "{d}");
    }

    #[test]
    fn cone_of_six_is_flat() {
        let k = build_complex(&[
            vec!["o", "1", "2"],
            vec!["o", "2", "3"],
            vec!["o", "3", "4"],
            vec!["o", "4", "5"],
            vec!["o", "5", "6"],
            vec!["o", "1", "6"],
        ])
        .unwrap();
        let m = MetricAssignment::standard(&k);
        let e = GeodesicEngine::new(&k, &m).unwrap();
        let v = |l: &str| SimplexPoint::vertex(k.vertex_index(l).unwrap());
        // Opposite rim vertices of a flat hexagon are 2 apart.
        assert!((e.distance(&v("1"), &v("4")).unwrap() - 2.0).abs() < 1e-12);
        assert!((e.distance(&v("1"), &v("3")).unwrap() - 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn two_triangles_meeting_at_a_vertex() {
        let k = build_complex(&[vec!["a", "b", "c"], vec!["c", "d", "e"]]).unwrap();
        let m = MetricAssignment::standard(&k);
        let e = GeodesicEngine::new(&k, &m).unwrap();
        let d = e.distance(&SimplexPoint::vertex(0), &SimplexPoint::vertex(4)).unwrap();
        assert!((d - 2.0).abs() < 1e-15);
        let p = e.geodesic(&SimplexPoint::vertex(0), &SimplexPoint::vertex(4)).unwrap();
        assert!(p.is_valid_in(&k));
    }

    #[test]
    fn disconnected_points_have_no_path() {
        let k = build_complex(&[vec!["a", "b"], vec!["c", "d"]]).unwrap();
        let m = MetricAssignment::standard(&k);
        let e = GeodesicEngine::new(&k, &m).unwrap();
        assert!(matches!(e.distance(&SimplexPoint::vertex(0), &SimplexPoint::vertex(3)), Err(Error::NoPath(_))));
    }
}
