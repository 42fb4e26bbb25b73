//! Finite simplicial complexes of dimension at most three.
//!
//! Vertices are interned as `u32` indices into a label table shared by every
//! complex derived from the same input. Simplices are unoriented and are
//! identified by their sorted vertex tuple.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::verify::CheckReport;

/// An unoriented simplex given by 1 to 4 distinct sorted vertex indices.
///
/// Ordering is lexicographic on the vertex tuple, so a face sorts before
/// every simplex it is a prefix of.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SimplexId {
    len: u8,
    v: [u32; 4],
}

impl SimplexId {
    pub fn new(vertices: &[u32]) -> Result<Self> {
        if vertices.is_empty() || vertices.len() > 4 {
            return Err(Error::MalformedInput(format!(
                "a simplex needs 1 to 4 vertices, got {}",
                vertices.len()
            )));
        }
        let mut v = [0u32; 4];
        v[..vertices.len()].copy_from_slice(vertices);
        v[..vertices.len()].sort_unstable();
        if v[..vertices.len()].windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedInput(format!("repeated vertex in {vertices:?}")));
        }
        Ok(SimplexId { len: vertices.len() as u8, v })
    }

    pub fn vertex(v: u32) -> Self {
        SimplexId { len: 1, v: [v, 0, 0, 0] }
    }

    pub fn edge(a: u32, b: u32) -> Self {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        assert!(a != b, "degenerate edge");
        SimplexId { len: 2, v: [a, b, 0, 0] }
    }

    /// Builds from a slice that is already strictly increasing.
    pub(crate) fn from_sorted(vertices: &[u32]) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        let mut v = [0u32; 4];
        v[..vertices.len()].copy_from_slice(vertices);
        SimplexId { len: vertices.len() as u8, v }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.v[..self.len as usize]
    }

    pub fn dim(&self) -> usize {
        self.len as usize - 1
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn contains(&self, v: u32) -> bool {
        self.vertices().contains(&v)
    }

    pub fn position(&self, v: u32) -> Option<usize> {
        self.vertices().iter().position(|&w| w == v)
    }

    /// `self ⊆ other`, faces included (not necessarily proper).
    pub fn is_face_of(&self, other: &SimplexId) -> bool {
        self.vertices().iter().all(|v| other.contains(*v))
    }

    pub fn is_proper_face_of(&self, other: &SimplexId) -> bool {
        self.len < other.len && self.is_face_of(other)
    }

    /// All nonempty proper faces.
    pub fn proper_faces(&self) -> Vec<SimplexId> {
        let n = self.len();
        let mut out = Vec::with_capacity((1usize << n) - 2);
        for mask in 1u32..(1 << n) - 1 {
            let mut buf = [0u32; 4];
            let mut k = 0;
            for (i, &vi) in self.vertices().iter().enumerate() {
                if mask & (1 << i) != 0 {
                    buf[k] = vi;
                    k += 1;
                }
            }
            out.push(SimplexId::from_sorted(&buf[..k]));
        }
        out
    }

    /// Codimension-one faces, in the order of the omitted vertex.
    pub fn facets(&self) -> Vec<SimplexId> {
        if self.len == 1 {
            return Vec::new();
        }
        self.vertices().iter().map(|&w| self.without(w)).collect()
    }

    pub fn without(&self, w: u32) -> SimplexId {
        let mut buf = [0u32; 4];
        let mut k = 0;
        for &vi in self.vertices() {
            if vi != w {
                buf[k] = vi;
                k += 1;
            }
        }
        SimplexId::from_sorted(&buf[..k])
    }

    pub fn intersection(&self, other: &SimplexId) -> Option<SimplexId> {
        let mut buf = [0u32; 4];
        let mut k = 0;
        for &vi in self.vertices() {
            if other.contains(vi) {
                buf[k] = vi;
                k += 1;
            }
        }
        (k > 0).then(|| SimplexId::from_sorted(&buf[..k]))
    }

    pub fn union(&self, other: &SimplexId) -> Option<SimplexId> {
        let mut all: Vec<u32> = self.vertices().to_vec();
        for &w in other.vertices() {
            if !all.contains(&w) {
                all.push(w);
            }
        }
        if all.len() > 4 {
            return None;
        }
        all.sort_unstable();
        Some(SimplexId::from_sorted(&all))
    }

    /// The single vertex of `self` not in `face`, for a facet `face`.
    pub fn opposite(&self, face: &SimplexId) -> Option<u32> {
        if face.len() + 1 != self.len() || !face.is_face_of(self) {
            return None;
        }
        self.vertices().iter().copied().find(|v| !face.contains(*v))
    }

    /// Edges of this simplex as index pairs into `vertices()`.
    pub fn edge_index_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                out.push((i, j));
            }
        }
        out
    }
}

impl Ord for SimplexId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.vertices().cmp(other.vertices())
    }
}

impl PartialOrd for SimplexId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SimplexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{:?}", self.vertices())
    }
}

/// A pair `(coface, free_face)` with `free_face` a proper face of `coface`
/// and of no other simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeFacePair {
    pub coface: SimplexId,
    pub free_face: SimplexId,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialComplex {
    labels: Arc<[String]>,
    simplices: BTreeSet<SimplexId>,
    cofaces: BTreeMap<SimplexId, BTreeSet<SimplexId>>,
}

/// Face closure of the given maximal simplices, with vertex labels interned
/// in lexicographic label order.
pub fn build_complex<S: AsRef<str>>(maximal_simplices: &[Vec<S>]) -> Result<SimplicialComplex> {
    let mut labels: Vec<String> = maximal_simplices
        .iter()
        .flat_map(|t| t.iter().map(|s| s.as_ref().to_string()))
        .collect();
    labels.sort();
    labels.dedup();
    SimplicialComplex::from_labeled(labels, maximal_simplices)
}

impl SimplicialComplex {
    /// Face closure using an explicit vertex table. Every label of every
    /// tuple must appear in `labels`; labels must be distinct.
    pub fn from_labeled<S: AsRef<str>>(labels: Vec<String>, maximal_simplices: &[Vec<S>]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::MalformedInput(format!("duplicate vertex label {l:?}")));
            }
        }
        let index: BTreeMap<&str, u32> =
            labels.iter().enumerate().map(|(i, l)| (l.as_str(), i as u32)).collect();
        let mut tuples = Vec::with_capacity(maximal_simplices.len());
        for t in maximal_simplices {
            let mut ids = Vec::with_capacity(t.len());
            for s in t {
                let s = s.as_ref();
                ids.push(*index.get(s).ok_or_else(|| Error::UnknownVertex(s.to_string()))?);
            }
            tuples.push(ids);
        }
        Self::from_indexed(labels, &tuples)
    }

    pub fn from_indexed(labels: Vec<String>, maximal_simplices: &[Vec<u32>]) -> Result<Self> {
        let mut simplices = BTreeSet::new();
        for t in maximal_simplices {
            if t.iter().any(|&v| v as usize >= labels.len()) {
                return Err(Error::MalformedInput(format!("vertex index out of range in {t:?}")));
            }
            let s = SimplexId::new(t)?;
            simplices.insert(s);
            simplices.extend(s.proper_faces());
        }
        Ok(Self::from_closed_set(labels.into(), simplices))
    }

    fn from_closed_set(labels: Arc<[String]>, simplices: BTreeSet<SimplexId>) -> Self {
        let mut cofaces: BTreeMap<SimplexId, BTreeSet<SimplexId>> =
            simplices.iter().map(|s| (*s, BTreeSet::new())).collect();
        for s in &simplices {
            for f in s.proper_faces() {
                cofaces.get_mut(&f).expect("face-closed").insert(*s);
            }
        }
        SimplicialComplex { labels, simplices, cofaces }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: u32) -> &str {
        &self.labels[v as usize]
    }

    pub fn vertex_index(&self, label: &str) -> Option<u32> {
        self.labels.iter().position(|l| l == label).map(|i| i as u32)
    }

    pub fn simplex_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<SimplexId> {
        let ids = labels
            .iter()
            .map(|l| self.vertex_index(l.as_ref()).ok_or_else(|| Error::UnknownVertex(l.as_ref().to_string())))
            .collect::<Result<Vec<_>>>()?;
        SimplexId::new(&ids)
    }

    /// Comma-joined vertex labels.
    pub fn name(&self, s: &SimplexId) -> String {
        s.vertices().iter().map(|&v| self.label(v)).collect::<Vec<_>>().join(",")
    }

    pub fn simplices(&self) -> impl Iterator<Item = &SimplexId> {
        self.simplices.iter()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn contains(&self, s: &SimplexId) -> bool {
        self.simplices.contains(s)
    }

    pub fn dimension(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.dim()).max()
    }

    /// Proper cofaces of `s` (empty for simplices not in the complex).
    pub fn cofaces(&self, s: &SimplexId) -> impl Iterator<Item = &SimplexId> {
        self.cofaces.get(s).into_iter().flatten()
    }

    pub fn coface_count(&self, s: &SimplexId) -> usize {
        self.cofaces.get(s).map_or(0, |c| c.len())
    }

    pub fn of_dim(&self, d: usize) -> impl Iterator<Item = &SimplexId> {
        self.simplices.iter().filter(move |s| s.dim() == d)
    }

    pub fn count_by_dim(&self) -> [usize; 4] {
        let mut c = [0; 4];
        for s in &self.simplices {
            c[s.dim()] += 1;
        }
        c
    }

    pub fn vertices(&self) -> Vec<u32> {
        self.of_dim(0).map(|s| s.vertices()[0]).collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = &SimplexId> {
        self.of_dim(1)
    }

    pub fn maximal_simplices(&self) -> Vec<SimplexId> {
        self.simplices.iter().filter(|s| self.coface_count(s) == 0).copied().collect()
    }

    /// Face closure and coface index, both re-derived by brute force.
    pub fn check_invariants(&self) -> bool {
        let closed = self
            .simplices
            .iter()
            .all(|s| s.dim() <= 3 && s.proper_faces().iter().all(|f| self.simplices.contains(f)));
        let index_ok = self.simplices.iter().all(|s| {
            let brute: BTreeSet<SimplexId> =
                self.simplices.iter().filter(|t| s.is_proper_face_of(t)).copied().collect();
            self.cofaces.get(s) == Some(&brute)
        }) && self.cofaces.len() == self.simplices.len();
        closed && index_ok
    }

    /// All free pairs, ordered by free face then coface.
    pub fn free_faces(&self) -> Vec<FreeFacePair> {
        let mut out: Vec<FreeFacePair> = self
            .cofaces
            .iter()
            .filter(|(_, c)| c.len() == 1)
            .map(|(f, c)| FreeFacePair { coface: *c.iter().next().unwrap(), free_face: *f })
            .collect();
        out.sort_by(|a, b| a.free_face.cmp(&b.free_face).then(a.coface.cmp(&b.coface)));
        out
    }

    pub fn is_free(&self, pair: &FreeFacePair) -> bool {
        pair.free_face.is_proper_face_of(&pair.coface)
            && self.contains(&pair.coface)
            && self.cofaces.get(&pair.free_face).is_some_and(|c| c.len() == 1 && c.contains(&pair.coface))
    }

    /// `K \ {coface, free_face}`.
    pub fn elementary_collapse(&self, pair: &FreeFacePair) -> Result<SimplicialComplex> {
        let mut k = self.clone();
        k.collapse_in_place(pair)?;
        Ok(k)
    }

    pub(crate) fn collapse_in_place(&mut self, pair: &FreeFacePair) -> Result<()> {
        if !self.is_free(pair) {
            return Err(Error::NotFree { coface: self.name(&pair.coface), free_face: self.name(&pair.free_face) });
        }
        for s in [pair.coface, pair.free_face] {
            self.simplices.remove(&s);
            self.cofaces.remove(&s);
            for f in s.proper_faces() {
                if let Some(c) = self.cofaces.get_mut(&f) {
                    c.remove(&s);
                }
            }
        }
        Ok(())
    }

    /// Adds simplices back; the result must be face-closed.
    pub fn with_simplices(&self, extra: &[SimplexId]) -> Result<SimplicialComplex> {
        let mut all = self.simplices.clone();
        all.extend(extra.iter().copied());
        if let Some(s) = all.iter().find(|s| s.proper_faces().iter().any(|f| !all.contains(f))) {
            return Err(Error::MalformedInput(format!("adding {} breaks face closure", self.name(s))));
        }
        Ok(Self::from_closed_set(self.labels.clone(), all))
    }

    /// The full subcomplex of simplices satisfying `keep`, closed under faces.
    pub fn subcomplex<F: Fn(&SimplexId) -> bool>(&self, keep: F) -> SimplicialComplex {
        let mut all = BTreeSet::new();
        for s in self.simplices.iter().filter(|s| keep(s)) {
            all.insert(*s);
            all.extend(s.proper_faces());
        }
        Self::from_closed_set(self.labels.clone(), all)
    }

    /// Same complex with vertex `v` renamed to `perm[v]`; labels follow.
    pub fn relabeled(&self, perm: &[u32]) -> Result<SimplicialComplex> {
        let n = self.labels.len();
        if perm.len() != n || (0..n as u32).any(|v| !perm.contains(&v)) {
            return Err(Error::MalformedInput("relabeling is not a permutation".into()));
        }
        let mut labels = vec![String::new(); n];
        for (old, &new) in perm.iter().enumerate() {
            labels[new as usize] = self.labels[old].clone();
        }
        let simplices = self
            .simplices
            .iter()
            .map(|s| SimplexId::new(&s.vertices().iter().map(|&v| perm[v as usize]).collect::<Vec<_>>()))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(Self::from_closed_set(labels.into(), simplices))
    }

    /// Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        let c = self.count_by_dim();
        c[0] as i64 - c[1] as i64 + c[2] as i64 - c[3] as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// First pair of [`SimplicialComplex::free_faces`].
    GreedyLex,
    /// Highest-dimensional coface first, ties broken lexicographically.
    #[default]
    Prefer3Simplices,
}

impl Strategy {
    pub fn select(&self, k: &SimplicialComplex) -> Option<FreeFacePair> {
        let pairs = k.free_faces();
        match self {
            Strategy::GreedyLex => pairs.into_iter().next(),
            Strategy::Prefer3Simplices => {
                let top = pairs.iter().map(|p| p.coface.dim()).max()?;
                pairs.into_iter().find(|p| p.coface.dim() == top)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::GreedyLex => "greedy_lex",
            Strategy::Prefer3Simplices => "prefer_3_simplices",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CollapseTrace {
    pub initial: SimplicialComplex,
    pub steps: Vec<FreeFacePair>,
    /// One list per step; empty lists for unverified steps.
    pub verification_reports: Vec<Vec<CheckReport>>,
}

impl CollapseTrace {
    pub fn new(initial: SimplicialComplex) -> Self {
        CollapseTrace { initial, steps: Vec::new(), verification_reports: Vec::new() }
    }

    /// Complexes after each prefix, starting with the initial one.
    pub fn replay(&self) -> Result<Vec<SimplicialComplex>> {
        let mut out = vec![self.initial.clone()];
        let mut k = self.initial.clone();
        for p in &self.steps {
            k.collapse_in_place(p)?;
            out.push(k.clone());
        }
        Ok(out)
    }

    pub fn final_complex(&self) -> Result<SimplicialComplex> {
        let mut k = self.initial.clone();
        for p in &self.steps {
            k.collapse_in_place(p)?;
        }
        Ok(k)
    }
}

#[derive(Clone, Debug)]
pub struct StuckReport {
    pub step: usize,
    pub trace: CollapseTrace,
    pub stuck: SimplicialComplex,
}

#[derive(Clone, Debug)]
pub enum CollapseOutcome {
    Collapsed(CollapseTrace),
    NoFreeFace(StuckReport),
}

/// Collapses greedily until one vertex remains or no free pair exists.
pub fn collapse_sequence(k: &SimplicialComplex, strategy: Strategy) -> CollapseOutcome {
    let mut trace = CollapseTrace::new(k.clone());
    let mut cur = k.clone();
    while cur.len() > 1 {
        let Some(pair) = strategy.select(&cur) else {
            return CollapseOutcome::NoFreeFace(StuckReport { step: trace.steps.len(), trace, stuck: cur });
        };
        cur.collapse_in_place(&pair).expect("selected pair is free");
        trace.steps.push(pair);
        trace.verification_reports.push(Vec::new());
    }
    if cur.is_empty() {
        return CollapseOutcome::NoFreeFace(StuckReport { step: trace.steps.len(), trace, stuck: cur });
    }
    CollapseOutcome::Collapsed(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(tuples: &[&[&str]]) -> SimplicialComplex {
        build_complex(&tuples.iter().map(|t| t.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn tetrahedron_closure() {
        let t = k(&[&["a", "b", "c", "d"]]);
        assert_eq!(t.count_by_dim(), [4, 6, 4, 1]);
        assert_eq!(t.len(), 15);
        assert!(t.check_invariants());
    }

    #[test]
    fn duplicate_vertex_rejected() {
        assert!(matches!(build_complex(&[vec!["a", "a"]]), Err(Error::MalformedInput(_))));
    }

    #[test]
    fn point_complex() {
        let p = k(&[&["a"]]);
        assert_eq!(p.len(), 1);
        assert!(p.free_faces().is_empty());
        assert!(matches!(collapse_sequence(&p, Strategy::GreedyLex), CollapseOutcome::Collapsed(t) if t.steps.is_empty()));
    }

    #[test]
    fn tetrahedron_free_faces_are_its_triangles() {
        let t = k(&[&["a", "b", "c", "d"]]);
        let f = t.free_faces();
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|p| p.free_face.dim() == 2 && p.coface.dim() == 3));
    }

    #[test]
    fn collapse_removes_exactly_two() {
        let t = k(&[&["a", "b", "c", "d"]]);
        let pair = FreeFacePair {
            coface: t.simplex_from_labels(&["a", "b", "c", "d"]).unwrap(),
            free_face: t.simplex_from_labels(&["a", "b", "c"]).unwrap(),
        };
        let t2 = t.elementary_collapse(&pair).unwrap();
        assert_eq!(t2.len(), 13);
        assert_eq!(t2.vertices().len(), 4);
        assert!(t2.check_invariants());
        let back = t2.with_simplices(&[pair.coface, pair.free_face]).unwrap();
        assert_eq!(back, t);
        assert!(matches!(t2.elementary_collapse(&pair), Err(Error::NotFree { .. })));
    }

    #[test]
    fn edge_collapse_in_triangle_leaves_path() {
        let t = k(&[&["a", "b", "c"]]);
        let pair = FreeFacePair {
            coface: t.simplex_from_labels(&["a", "b", "c"]).unwrap(),
            free_face: t.simplex_from_labels(&["a", "b"]).unwrap(),
        };
        let p = t.elementary_collapse(&pair).unwrap();
        let mut max: Vec<String> = p.maximal_simplices().iter().map(|s| p.name(s)).collect();
        max.sort();
        assert_eq!(max, vec!["a,c", "b,c"]);
    }

    #[test]
    fn sequences_of_small_complexes() {
        let t = k(&[&["a", "b", "c", "d"]]);
        match collapse_sequence(&t, Strategy::Prefer3Simplices) {
            CollapseOutcome::Collapsed(tr) => assert_eq!(tr.steps.len(), 7),
            other => panic!("{other:?}"),
        }
        let path = k(&[&["a", "b"], &["b", "c"]]);
        match collapse_sequence(&path, Strategy::GreedyLex) {
            CollapseOutcome::Collapsed(tr) => assert_eq!(tr.steps.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hollow_triangle_is_stuck() {
        let h = k(&[&["a", "b"], &["b", "c"], &["a", "c"]]);
        match collapse_sequence(&h, Strategy::GreedyLex) {
            CollapseOutcome::NoFreeFace(r) => {
                assert_eq!(r.step, 0);
                assert_eq!(r.stuck, h);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn face_sorts_before_its_extensions() {
        let ab = SimplexId::new(&[0, 1]).unwrap();
        let abc = SimplexId::new(&[0, 1, 2]).unwrap();
        let ac = SimplexId::new(&[0, 2]).unwrap();
        assert!(ab < abc && abc < ac);
    }
}
