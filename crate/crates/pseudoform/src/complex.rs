//! Abstract simplicial complexes stored by their facet sets.
//!
//! A complex is an immutable value: every operation that would mutate one
//! returns a fresh complex instead. Face tables and the 1-skeleton adjacency
//! map are derived lazily and cached behind a `OnceLock`, so complexes can be
//! shared freely between threads.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex labels are opaque non-negative integers, unique within one complex.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

/// A face is a sorted, duplicate-free vertex list. The empty face has
/// dimension -1 and belongs to every nonempty complex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(Vec<VertexId>);

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().map(|v| v.to_string()).join(","))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

impl Face {
    /// Builds a face from raw labels, sorting them. Fails on repeats.
    pub fn try_new(labels: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut v: Vec<u32> = labels.into_iter().collect();
        v.sort_unstable();
        let raw = v.clone();
        v.dedup();
        if v.len() != raw.len() {
            return Err(Error::DuplicateVertexInFacet(raw));
        }
        Ok(Face(v.into_iter().map(VertexId).collect()))
    }

    /// Builds a face from labels known to be distinct. Panics on repeats.
    pub fn new(labels: impl IntoIterator<Item = u32>) -> Self {
        Self::try_new(labels).expect("face labels must be distinct")
    }

    pub fn empty() -> Self {
        Face(Vec::new())
    }

    pub(crate) fn from_sorted(vertices: Vec<VertexId>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Face(vertices)
    }

    pub fn from_vertex_set(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let set: BTreeSet<VertexId> = vertices.into_iter().collect();
        Face(set.into_iter().collect())
    }

    pub fn dim(&self) -> i32 {
        self.0.len() as i32 - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn labels(&self) -> Vec<u32> {
        self.0.iter().map(|v| v.0).collect()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    pub fn intersection(&self, other: &Face) -> Face {
        Face(
            self.0
                .iter()
                .filter(|v| other.contains(**v))
                .copied()
                .collect(),
        )
    }

    pub fn union(&self, other: &Face) -> Face {
        let mut set: BTreeSet<VertexId> = self.0.iter().copied().collect();
        set.extend(other.0.iter().copied());
        Face(set.into_iter().collect())
    }

    pub fn difference(&self, other: &Face) -> Face {
        Face(
            self.0
                .iter()
                .filter(|v| !other.contains(**v))
                .copied()
                .collect(),
        )
    }

    pub fn without(&self, v: VertexId) -> Face {
        Face(self.0.iter().filter(|w| **w != v).copied().collect())
    }

    pub fn with(&self, v: VertexId) -> Face {
        if self.contains(v) {
            self.clone()
        } else {
            let mut vs = self.0.clone();
            vs.push(v);
            vs.sort_unstable();
            Face(vs)
        }
    }

    pub fn is_disjoint(&self, other: &Face) -> bool {
        self.0.iter().all(|v| !other.contains(*v))
    }

    /// All subfaces of a given cardinality (`k` vertices).
    pub fn subfaces(&self, k: usize) -> impl Iterator<Item = Face> + '_ {
        self.0.iter().copied().combinations(k).map(Face)
    }

    /// The codimension-one subfaces.
    pub fn ridges(&self) -> impl Iterator<Item = Face> + '_ {
        let n = self.0.len();
        self.subfaces(n.saturating_sub(1))
    }

    fn all_subsets(&self) -> Vec<Face> {
        let n = self.0.len();
        let mut out = Vec::with_capacity(1 << n);
        for mask in 0u32..(1 << n) {
            let vs: Vec<VertexId> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.0[i])
                .collect();
            out.push(Face(vs));
        }
        out
    }

    pub fn relabeled(&self, map: &BTreeMap<VertexId, VertexId>) -> Face {
        Face::from_vertex_set(self.0.iter().map(|v| *map.get(v).unwrap_or(v)))
    }
}

/// A walk in the 1-skeleton, retained mostly as a witness for admissibility
/// violations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path(pub Vec<VertexId>);

/// A cycle of distinct vertices; stored without repeating the first vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Circle(Vec<VertexId>);

impl Circle {
    /// Canonical form: rotate so the minimum vertex is first, then pick the
    /// direction whose second vertex is smaller.
    pub fn canonical(cycle: Vec<VertexId>) -> Self {
        assert!(cycle.len() >= 3, "a circle has at least three vertices");
        let n = cycle.len();
        let min_pos = (0..n).min_by_key(|&i| cycle[i]).unwrap();
        let fwd: Vec<VertexId> = (0..n).map(|i| cycle[(min_pos + i) % n]).collect();
        let bwd: Vec<VertexId> = (0..n).map(|i| cycle[(min_pos + n - i) % n]).collect();
        if fwd[1] <= bwd[1] {
            Circle(fwd)
        } else {
            Circle(bwd)
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edges(&self) -> Vec<Face> {
        let n = self.0.len();
        (0..n)
            .map(|i| Face::from_vertex_set([self.0[i], self.0[(i + 1) % n]]))
            .collect()
    }
}

struct Caches {
    /// `faces_by_card[k]` holds all faces with `k` vertices, sorted.
    faces_by_card: Vec<Vec<Face>>,
    adjacency: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

/// An abstract simplicial complex, determined by its inclusion-maximal faces.
pub struct SimplicialComplex {
    facets: Vec<Face>,
    caches: OnceLock<Caches>,
}

impl Clone for SimplicialComplex {
    fn clone(&self) -> Self {
        SimplicialComplex {
            facets: self.facets.clone(),
            caches: OnceLock::new(),
        }
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

impl std::hash::Hash for SimplicialComplex {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.facets.hash(state);
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex[{}]", self.facets.iter().map(|x| format!("{x:?}")).join(" "))
    }
}

/// Enumeration invariants of one complex: the f-, h- and g-vectors, `g2`
/// and the (non-reduced) Euler characteristic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceVectorReport {
    /// `f[i]` counts the faces of dimension `i - 1`; `f[0] = 1` for the empty face.
    pub f: Vec<i64>,
    pub h: Vec<i64>,
    pub g: Vec<i64>,
    pub g2: i64,
    pub euler: i64,
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl SimplicialComplex {
    /// Builds a complex from raw facet label lists. Inclusion-maximal faces
    /// are retained as facets; closure under subsets is implicit.
    pub fn from_facets<I>(facets: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: IntoIterator<Item = u32>,
    {
        let mut faces = Vec::new();
        for raw in facets {
            let face = Face::try_new(raw)?;
            if face.is_empty() {
                return Err(Error::EmptyFacet);
            }
            faces.push(face);
        }
        Ok(Self::from_face_list(faces))
    }

    /// Builds a complex from an arbitrary face list, filtering down to the
    /// inclusion-maximal ones. Empty faces are dropped.
    pub(crate) fn from_face_list(mut faces: Vec<Face>) -> Self {
        faces.retain(|f| !f.is_empty());
        faces.sort_by_key(|f| std::cmp::Reverse(f.len()));
        faces.dedup();
        let mut maximal: Vec<Face> = Vec::new();
        for face in faces {
            if !maximal.iter().any(|m| face.is_subset_of(m)) {
                maximal.push(face);
            }
        }
        maximal.sort();
        SimplicialComplex {
            facets: maximal,
            caches: OnceLock::new(),
        }
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    /// Maximum facet dimension; -1 for the complex with no nonempty faces.
    pub fn dim(&self) -> i32 {
        self.facets.iter().map(|f| f.dim()).max().unwrap_or(-1)
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.facets.iter().all(|f| f.dim() == d)
    }

    fn caches(&self) -> &Caches {
        self.caches.get_or_init(|| {
            let max_card = self.facets.iter().map(|f| f.len()).max().unwrap_or(0);
            let mut sets: Vec<BTreeSet<Face>> = vec![BTreeSet::new(); max_card + 1];
            sets[0].insert(Face::empty());
            for facet in &self.facets {
                for sub in facet.all_subsets() {
                    let k = sub.len();
                    sets[k].insert(sub);
                }
            }
            let mut adjacency: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
            for v in sets.get(1).into_iter().flatten() {
                adjacency.insert(v.vertices()[0], BTreeSet::new());
            }
            for e in sets.get(2).into_iter().flatten() {
                let (a, b) = (e.vertices()[0], e.vertices()[1]);
                adjacency.get_mut(&a).unwrap().insert(b);
                adjacency.get_mut(&b).unwrap().insert(a);
            }
            Caches {
                faces_by_card: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
                adjacency,
            }
        })
    }

    /// All faces with `k` vertices (dimension `k - 1`), sorted.
    pub fn faces_with_card(&self, k: usize) -> &[Face] {
        self.caches().faces_by_card.get(k).map_or(&[], |v| &v[..])
    }

    /// All faces of the given dimension, sorted. `dim = -1` yields the empty face.
    pub fn faces_of_dim(&self, dim: i32) -> &[Face] {
        if dim < -1 {
            return &[];
        }
        self.faces_with_card((dim + 1) as usize)
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &Face> {
        self.caches().faces_by_card.iter().flatten()
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.caches()
            .faces_by_card
            .get(face.len())
            .is_some_and(|v| v.binary_search(face).is_ok())
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        self.faces_with_card(1)
            .iter()
            .map(|f| f.vertices()[0])
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.faces_with_card(1).len()
    }

    pub fn max_label(&self) -> Option<u32> {
        self.vertices().last().map(|v| v.0)
    }

    /// Smallest label strictly above every label in use.
    pub fn fresh_label(&self) -> u32 {
        self.max_label().map_or(0, |m| m + 1)
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.caches().adjacency.contains_key(&v)
    }

    pub fn neighbors(&self, v: VertexId) -> Result<&BTreeSet<VertexId>> {
        self.caches()
            .adjacency
            .get(&v)
            .ok_or(Error::VertexNotPresent(v.0))
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        Ok(self.neighbors(v)?.len())
    }

    pub fn face_vectors(&self) -> FaceVectorReport {
        let d = self.dim() as i64;
        let f: Vec<i64> = (0..=(d + 1))
            .map(|k| self.faces_with_card(k as usize).len() as i64)
            .collect();
        let mut h = Vec::new();
        for i in 0..=(d + 1) {
            let mut hi = 0i64;
            for j in 0..=i {
                let sign = if (i - j) % 2 == 0 { 1 } else { -1 };
                hi += sign * binomial(d + 1 - j, i - j) * f[j as usize];
            }
            h.push(hi);
        }
        let mut g = vec![h[0]];
        for i in 1..h.len() {
            g.push(h[i] - h[i - 1]);
        }
        let f0 = *f.get(1).unwrap_or(&0);
        let f1 = *f.get(2).unwrap_or(&0);
        let g2 = f1 - (d + 1) * f0 + binomial(d + 2, 2);
        debug_assert!(d < 1 || g2 == h[2] - h[1]);
        let euler = f
            .iter()
            .skip(1)
            .enumerate()
            .map(|(i, cnt)| if i % 2 == 0 { *cnt } else { -*cnt })
            .sum();
        FaceVectorReport { f, h, g, g2, euler }
    }

    pub fn g2(&self) -> i64 {
        let report = self.face_vectors();
        report.g2
    }

    /// The link of a face: all faces disjoint from it whose union with it is
    /// again a face. `link(∅)` is the complex itself.
    pub fn link(&self, sigma: &Face) -> Result<SimplicialComplex> {
        if !self.contains(sigma) {
            return Err(Error::FaceNotPresent(format!("{sigma:?}")));
        }
        let faces = self
            .facets
            .iter()
            .filter(|f| sigma.is_subset_of(f))
            .map(|f| f.difference(sigma))
            .collect();
        Ok(SimplicialComplex::from_face_list(faces))
    }

    /// The closed star of a face: all faces whose union with it is a face.
    pub fn star(&self, sigma: &Face) -> Result<SimplicialComplex> {
        if !self.contains(sigma) {
            return Err(Error::FaceNotPresent(format!("{sigma:?}")));
        }
        let faces = self
            .facets
            .iter()
            .filter(|f| sigma.is_subset_of(f))
            .cloned()
            .collect();
        Ok(SimplicialComplex::from_face_list(faces))
    }

    /// Shortest-path distance in the 1-skeleton; `None` across components.
    pub fn edge_distance(&self, u: VertexId, v: VertexId) -> Result<Option<usize>> {
        if !self.has_vertex(u) {
            return Err(Error::VertexNotPresent(u.0));
        }
        if !self.has_vertex(v) {
            return Err(Error::VertexNotPresent(v.0));
        }
        Ok(self.bfs_path(u, v).map(|p| p.len() - 1))
    }

    /// One shortest path from `u` to `v`, inclusive of endpoints.
    pub fn bfs_path(&self, u: VertexId, v: VertexId) -> Option<Vec<VertexId>> {
        if u == v {
            return Some(vec![u]);
        }
        let adj = &self.caches().adjacency;
        let mut prev: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        let mut queue = VecDeque::from([u]);
        while let Some(cur) = queue.pop_front() {
            for &next in &adj[&cur] {
                if next != u && !prev.contains_key(&next) {
                    prev.insert(next, cur);
                    if next == v {
                        let mut path = vec![v];
                        let mut at = v;
                        while at != u {
                            at = prev[&at];
                            path.push(at);
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(next);
                }
            }
        }
        None
    }

    /// The induced subcomplex on a vertex set.
    pub fn induced(&self, w: &BTreeSet<VertexId>) -> SimplicialComplex {
        let faces = self
            .facets
            .iter()
            .map(|f| Face::from_vertex_set(f.vertices().iter().copied().filter(|v| w.contains(v))))
            .collect();
        SimplicialComplex::from_face_list(faces)
    }

    /// All vertex sets of size `dim + 1` that are not faces but whose full
    /// boundary is present.
    pub fn missing_simplices(&self, dim: i32) -> Vec<Face> {
        assert!(dim >= 2, "missing simplices are defined for dim >= 2");
        let k = (dim + 1) as usize;
        let verts = self.vertices();
        let mut out = Vec::new();
        for combo in verts.into_iter().combinations(k) {
            let candidate = Face::from_sorted(combo);
            if self.contains(&candidate) {
                continue;
            }
            if candidate.ridges().all(|r| self.contains(&r)) {
                out.push(candidate);
            }
        }
        out
    }

    /// All vertex subsets of size at most `max_len` whose induced subcomplex
    /// is a single circle.
    pub fn induced_circles(&self, max_len: usize) -> Vec<Circle> {
        assert!(max_len >= 3, "circles have at least three vertices");
        let verts = self.vertices();
        let mut out = Vec::new();
        for size in 3..=max_len.min(verts.len()) {
            for combo in verts.iter().copied().combinations(size) {
                if let Some(c) = self.induced_circle_on(&combo) {
                    out.push(c);
                }
            }
        }
        out
    }

    /// Checks whether the induced subcomplex on `w` is a circle and returns it.
    pub fn induced_circle_on(&self, w: &[VertexId]) -> Option<Circle> {
        let set: BTreeSet<VertexId> = w.iter().copied().collect();
        if set.len() < 3 {
            return None;
        }
        // No face of dimension >= 2 may live inside w.
        for tri in self.faces_with_card(3) {
            if tri.vertices().iter().all(|v| set.contains(v)) {
                return None;
            }
        }
        // Every vertex must have exactly two neighbors inside w.
        let mut local: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for &v in &set {
            let nb: Vec<VertexId> = match self.neighbors(v) {
                Ok(n) => n.iter().copied().filter(|u| set.contains(u)).collect(),
                Err(_) => return None,
            };
            if nb.len() != 2 {
                return None;
            }
            local.insert(v, nb);
        }
        // Walk the cycle; it must close up over all of w.
        let start = *set.iter().next().unwrap();
        let mut cycle = vec![start];
        let mut prev = start;
        let mut cur = local[&start][0];
        while cur != start {
            cycle.push(cur);
            let nb = &local[&cur];
            let next = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
        }
        if cycle.len() == set.len() {
            Some(Circle::canonical(cycle))
        } else {
            None
        }
    }

    /// Vertices adjacent to every other vertex.
    pub fn graph_cone_points(&self) -> Vec<VertexId> {
        let n = self.vertex_count();
        if n == 0 {
            return Vec::new();
        }
        self.vertices()
            .into_iter()
            .filter(|v| self.degree(*v).unwrap() == n - 1)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_components().len() <= 1
    }

    pub fn vertex_components(&self) -> Vec<BTreeSet<VertexId>> {
        let adj = &self.caches().adjacency;
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut comps = Vec::new();
        for &v in adj.keys() {
            if seen.contains(&v) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([v]);
            seen.insert(v);
            while let Some(cur) = queue.pop_front() {
                comp.insert(cur);
                for &next in &adj[&cur] {
                    if seen.insert(next) {
                        queue.push_back(next);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// Components of the facet-adjacency (dual) graph, where two facets are
    /// adjacent when they share a ridge not contained in `cut`.
    pub fn dual_components(&self, cut: &BTreeSet<Face>) -> Vec<Vec<Face>> {
        let n = self.facets.len();
        let mut ridge_map: BTreeMap<Face, Vec<usize>> = BTreeMap::new();
        for (i, facet) in self.facets.iter().enumerate() {
            for ridge in facet.ridges() {
                if !cut.contains(&ridge) {
                    ridge_map.entry(ridge).or_default().push(i);
                }
            }
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for ids in ridge_map.values() {
            for (&a, &b) in ids.iter().tuple_combinations() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([i]);
            seen[i] = true;
            while let Some(cur) = queue.pop_front() {
                comp.push(self.facets[cur].clone());
                for &next in &adj[cur] {
                    if !seen[next] {
                        seen[next] = true;
                        queue.push_back(next);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// Applies an injective relabeling to every facet.
    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> Result<SimplicialComplex> {
        let mut seen = BTreeSet::new();
        for v in self.vertices() {
            let img = *map.get(&v).unwrap_or(&v);
            if !seen.insert(img) {
                return Err(Error::MalformedBijection(format!(
                    "relabeling is not injective at image {img}"
                )));
            }
        }
        let faces = self.facets.iter().map(|f| f.relabeled(map)).collect();
        Ok(SimplicialComplex::from_face_list(faces))
    }

    /// f-vector of the link of each vertex, used as an isomorphism invariant.
    fn vertex_signature(&self, v: VertexId) -> (usize, Vec<i64>) {
        let link = self.link(&Face::from_sorted(vec![v])).unwrap();
        (self.degree(v).unwrap(), link.face_vectors().f)
    }

    /// Exact backtracking isomorphism test. Returns a facet-preserving vertex
    /// bijection if one exists. Intended for small complexes; errors above
    /// `MAX_ISO_VERTICES` vertices.
    pub fn isomorphism(
        &self,
        other: &SimplicialComplex,
    ) -> Result<Option<BTreeMap<VertexId, VertexId>>> {
        const MAX_ISO_VERTICES: usize = 32;
        for k in [self.vertex_count(), other.vertex_count()] {
            if k > MAX_ISO_VERTICES {
                return Err(Error::SizeLimitExceeded {
                    limit: MAX_ISO_VERTICES,
                    actual: k,
                });
            }
        }
        if self.face_vectors().f != other.face_vectors().f {
            return Ok(None);
        }
        let mine = self.vertices();
        let theirs = other.vertices();
        let my_sig: BTreeMap<VertexId, (usize, Vec<i64>)> = mine
            .iter()
            .map(|&v| (v, self.vertex_signature(v)))
            .collect();
        let their_sig: BTreeMap<VertexId, (usize, Vec<i64>)> = theirs
            .iter()
            .map(|&v| (v, other.vertex_signature(v)))
            .collect();
        let mut my_classes: BTreeMap<&(usize, Vec<i64>), usize> = BTreeMap::new();
        for sig in my_sig.values() {
            *my_classes.entry(sig).or_insert(0) += 1;
        }
        let mut their_classes: BTreeMap<&(usize, Vec<i64>), usize> = BTreeMap::new();
        for sig in their_sig.values() {
            *their_classes.entry(sig).or_insert(0) += 1;
        }
        if my_classes != their_classes {
            return Ok(None);
        }
        // Most constrained vertices first: rare signature class, then high degree.
        let mut order = mine.clone();
        order.sort_by_key(|v| {
            let sig = &my_sig[v];
            (my_classes[sig], std::cmp::Reverse(sig.0), *v)
        });

        struct Search<'a> {
            a: &'a SimplicialComplex,
            b: &'a SimplicialComplex,
            order: Vec<VertexId>,
            candidates: BTreeMap<VertexId, Vec<VertexId>>,
        }

        impl Search<'_> {
            fn consistent(
                &self,
                map: &BTreeMap<VertexId, VertexId>,
                used: &BTreeSet<VertexId>,
                v: VertexId,
                w: VertexId,
            ) -> bool {
                if used.contains(&w) {
                    return false;
                }
                let nv = self.a.neighbors(v).unwrap();
                let nw = self.b.neighbors(w).unwrap();
                for (src, dst) in map.iter() {
                    if nv.contains(src) != nw.contains(dst) {
                        return false;
                    }
                }
                // Facets fully mapped once v -> w is added must map onto facets.
                for facet in self.a.facets() {
                    if !facet.contains(v) {
                        continue;
                    }
                    if facet
                        .vertices()
                        .iter()
                        .all(|x| *x == v || map.contains_key(x))
                    {
                        let image = Face::from_vertex_set(
                            facet
                                .vertices()
                                .iter()
                                .map(|x| if *x == v { w } else { map[x] }),
                        );
                        if self.b.facets().binary_search(&image).is_err() {
                            return false;
                        }
                    }
                }
                true
            }

            fn dfs(
                &self,
                idx: usize,
                map: &mut BTreeMap<VertexId, VertexId>,
                used: &mut BTreeSet<VertexId>,
            ) -> bool {
                if idx == self.order.len() {
                    return true;
                }
                let v = self.order[idx];
                for &w in &self.candidates[&v] {
                    if self.consistent(map, used, v, w) {
                        map.insert(v, w);
                        used.insert(w);
                        if self.dfs(idx + 1, map, used) {
                            return true;
                        }
                        map.remove(&v);
                        used.remove(&w);
                    }
                }
                false
            }
        }

        let candidates: BTreeMap<VertexId, Vec<VertexId>> = mine
            .iter()
            .map(|&v| {
                let sig = &my_sig[&v];
                (
                    v,
                    theirs
                        .iter()
                        .copied()
                        .filter(|w| &their_sig[w] == sig)
                        .collect(),
                )
            })
            .collect();
        let search = Search {
            a: self,
            b: other,
            order,
            candidates,
        };
        let mut map = BTreeMap::new();
        let mut used = BTreeSet::new();
        if search.dfs(0, &mut map, &mut used) {
            debug_assert_eq!(
                &self.relabel(&map).unwrap(),
                other,
                "isomorphism search returned a non-isomorphism"
            );
            Ok(Some(map))
        } else {
            Ok(None)
        }
    }

    pub fn is_isomorphic(&self, other: &SimplicialComplex) -> Result<bool> {
        Ok(self.isomorphism(other)?.is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn boundary_4_simplex() -> SimplicialComplex {
        SimplicialComplex::from_facets([
            vec![0u32, 1, 2, 3],
            vec![0, 1, 2, 4],
            vec![0, 1, 3, 4],
            vec![0, 2, 3, 4],
            vec![1, 2, 3, 4],
        ])
        .unwrap()
    }

    #[test]
    fn from_facets_boundary_simplex() {
        let k = boundary_4_simplex();
        assert_eq!(k.dim(), 3);
        assert_eq!(k.facets().len(), 5);
        assert!(k.is_pure());
    }

    #[test]
    fn from_facets_circle() {
        let k = SimplicialComplex::from_facets([vec![0u32, 1], vec![1, 2], vec![2, 0]]).unwrap();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.facets().len(), 3);
        assert!(k.induced_circle_on(&k.vertices()).is_some());
    }

    #[test]
    fn from_facets_filters_to_maximal() {
        let k = SimplicialComplex::from_facets([vec![0u32, 1, 2], vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(k.facets(), &[Face::new([0, 1, 2, 3])]);
    }

    #[test]
    fn from_facets_rejects_duplicates() {
        let err = SimplicialComplex::from_facets([vec![0u32, 1, 1]]).unwrap_err();
        assert!(matches!(err, Error::DuplicateVertexInFacet(_)));
    }

    #[test]
    fn face_vectors_boundary_simplex() {
        let report = boundary_4_simplex().face_vectors();
        assert_eq!(report.f, vec![1, 5, 10, 10, 5]);
        assert_eq!(report.h, vec![1, 1, 1, 1, 1]);
        assert_eq!(report.g2, 0);
        assert_eq!(report.euler, 0);
    }

    #[test]
    fn face_vectors_projective_plane() {
        let report = catalog::rp2_6().face_vectors();
        assert_eq!(report.f, vec![1, 6, 15, 10]);
        assert_eq!(report.g2, 3);
        assert_eq!(report.euler, 1);
    }

    #[test]
    fn stacked_spheres_have_g2_zero_and_linear_f1() {
        // Induction target f1 = 4n - 10, checked by direct count per size.
        for n in 5..=12 {
            let k = catalog::stacked_sphere(3, n, 7).unwrap();
            let report = k.face_vectors();
            assert_eq!(report.f[1], n as i64);
            assert_eq!(report.f[2], 4 * n as i64 - 10);
            assert_eq!(report.g2, 0);
        }
    }

    #[test]
    fn link_of_vertex_in_boundary_simplex() {
        let k = boundary_4_simplex();
        let link = k.link(&Face::new([0])).unwrap();
        let expected = SimplicialComplex::from_facets([
            vec![1u32, 2, 3],
            vec![1, 2, 4],
            vec![1, 3, 4],
            vec![2, 3, 4],
        ])
        .unwrap();
        assert_eq!(link, expected);
    }

    #[test]
    fn link_of_empty_face_is_identity() {
        let k = boundary_4_simplex();
        assert_eq!(k.link(&Face::empty()).unwrap(), k);
    }

    #[test]
    fn star_of_vertex_is_cone() {
        let k = boundary_4_simplex();
        let star = k.star(&Face::new([0])).unwrap();
        assert_eq!(star.facets().len(), 4);
        assert!(star.facets().iter().all(|f| f.contains(VertexId(0))));
    }

    #[test]
    fn link_of_absent_face_fails() {
        let k = boundary_4_simplex();
        assert!(matches!(
            k.link(&Face::new([0, 1, 2, 3, 4])),
            Err(Error::FaceNotPresent(_))
        ));
    }

    #[test]
    fn edge_distance_cases() {
        let k = boundary_4_simplex();
        assert_eq!(k.edge_distance(VertexId(0), VertexId(0)).unwrap(), Some(0));
        assert_eq!(k.edge_distance(VertexId(0), VertexId(3)).unwrap(), Some(1));
        let two = SimplicialComplex::from_facets([vec![0u32, 1], vec![2, 3]]).unwrap();
        assert_eq!(two.edge_distance(VertexId(0), VertexId(3)).unwrap(), None);
        assert!(matches!(
            two.edge_distance(VertexId(0), VertexId(9)),
            Err(Error::VertexNotPresent(9))
        ));
    }

    #[test]
    fn induced_subcomplex_cases() {
        let k = boundary_4_simplex();
        let w: BTreeSet<VertexId> = [0, 1, 2, 3].map(VertexId).into_iter().collect();
        let tetra = k.induced(&w);
        assert_eq!(tetra.facets(), &[Face::new([0, 1, 2, 3])]);
        let all: BTreeSet<VertexId> = k.vertices().into_iter().collect();
        assert_eq!(k.induced(&all), k);

        let hex = SimplicialComplex::from_facets(
            (0u32..6).map(|i| vec![i, (i + 1) % 6]).collect::<Vec<_>>(),
        )
        .unwrap();
        let odd: BTreeSet<VertexId> = [0, 2, 4].map(VertexId).into_iter().collect();
        let pts = hex.induced(&odd);
        assert_eq!(pts.dim(), 0);
        assert_eq!(pts.facets().len(), 3);
    }

    #[test]
    fn missing_simplices_cases() {
        let k = boundary_4_simplex();
        assert!(k.missing_simplices(3).is_empty());

        let sub = crate::ops::facet_subdivide(&k, &Face::new([1, 2, 3, 4]), None)
            .unwrap()
            .complex;
        assert_eq!(sub.missing_simplices(3), vec![Face::new([1, 2, 3, 4])]);

        let rp2 = catalog::rp2_6();
        assert_eq!(rp2.missing_simplices(2).len(), 10);
    }

    /// Independent oracle: recheck missing simplices with a freshly built
    /// closure set, not the cached face table.
    fn missing_by_scan(k: &SimplicialComplex, dim: i32) -> Vec<Face> {
        let mut closure: BTreeSet<Vec<u32>> = BTreeSet::new();
        for facet in k.facets() {
            let labels = facet.labels();
            let n = labels.len();
            for mask in 0u32..(1 << n) {
                let sub: Vec<u32> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| labels[i]).collect();
                closure.insert(sub);
            }
        }
        let verts: Vec<u32> = k.vertices().iter().map(|v| v.0).collect();
        let mut out = Vec::new();
        for combo in verts.into_iter().combinations((dim + 1) as usize) {
            if closure.contains(&combo) {
                continue;
            }
            let all_bd = combo
                .iter()
                .map(|skip| combo.iter().copied().filter(|x| x != skip).collect::<Vec<_>>())
                .all(|b| closure.contains(&b));
            if all_bd {
                out.push(Face::new(combo));
            }
        }
        out
    }

    #[test]
    fn missing_simplices_match_exhaustive_scan() {
        let complexes = [
            catalog::rp2_6(),
            catalog::torus_7(),
            catalog::stacked_sphere(3, 9, 3).unwrap(),
            catalog::boundary_simplex(4),
        ];
        for k in &complexes {
            for dim in 2..=3 {
                if dim > k.dim() {
                    continue;
                }
                assert_eq!(k.missing_simplices(dim), missing_by_scan(k, dim));
            }
        }
    }

    #[test]
    fn induced_circles_cases() {
        let k = boundary_4_simplex();
        assert!(k.induced_circles(4).is_empty());

        let square =
            SimplicialComplex::from_facets([vec![0u32, 1], vec![1, 2], vec![2, 3], vec![3, 0]])
                .unwrap();
        let circles = square.induced_circles(4);
        assert_eq!(circles.len(), 1);
        assert_eq!(circles[0].len(), 4);

        let rp2 = catalog::rp2_6();
        let circles = rp2.induced_circles(3);
        assert_eq!(circles.len(), 10);
        let missing: BTreeSet<Face> = rp2.missing_simplices(2).into_iter().collect();
        for c in circles {
            assert!(missing.contains(&Face::from_vertex_set(c.vertices().iter().copied())));
        }
    }

    #[test]
    fn isomorphism_cases() {
        let k = boundary_4_simplex();
        assert!(k.is_isomorphic(&k).unwrap());

        let map: BTreeMap<VertexId, VertexId> = [(0, 10), (1, 11), (2, 12), (3, 13), (4, 14)]
            .into_iter()
            .map(|(a, b)| (VertexId(a), VertexId(b)))
            .collect();
        let relabeled = k.relabel(&map).unwrap();
        assert!(k.is_isomorphic(&relabeled).unwrap());

        let sub = crate::ops::facet_subdivide(&k, &Face::new([1, 2, 3, 4]), None)
            .unwrap()
            .complex;
        assert!(!k.is_isomorphic(&sub).unwrap());
    }

    #[test]
    fn graph_cone_points_cases() {
        assert_eq!(catalog::rp2_6().graph_cone_points().len(), 6);
        assert_eq!(boundary_4_simplex().graph_cone_points().len(), 5);

        let sub = crate::ops::facet_subdivide(
            &boundary_4_simplex(),
            &Face::new([1, 2, 3, 4]),
            None,
        )
        .unwrap()
        .complex;
        // Degree count: exactly the subdivided facet's vertices stay adjacent
        // to all others.
        let expected: Vec<VertexId> = [1, 2, 3, 4].map(VertexId).to_vec();
        assert_eq!(sub.graph_cone_points(), expected);
        let n = sub.vertex_count();
        for v in sub.vertices() {
            let full = sub.degree(v).unwrap() == n - 1;
            assert_eq!(full, expected.contains(&v));
        }
    }

    #[test]
    fn euler_characteristic_matches_alternating_sum() {
        for k in [catalog::rp2_6(), catalog::torus_7(), boundary_4_simplex()] {
            let report = k.face_vectors();
            let alt: i64 = (0..=k.dim())
                .map(|d| {
                    let cnt = k.faces_of_dim(d).len() as i64;
                    if d % 2 == 0 {
                        cnt
                    } else {
                        -cnt
                    }
                })
                .sum();
            assert_eq!(report.euler, alt);
        }
    }

    #[test]
    fn link_composition_law() {
        // link(link(K, s), t) = link(K, s ∪ t) for disjoint s, t with s ∪ t a face.
        let complexes = [catalog::torus_7(), boundary_4_simplex(), catalog::rp2_6()];
        for k in &complexes {
            for sigma in k.all_faces() {
                for tau in k.all_faces() {
                    if !sigma.is_disjoint(tau) || sigma.is_empty() {
                        continue;
                    }
                    let both = sigma.union(tau);
                    if !k.contains(&both) {
                        continue;
                    }
                    let lhs = k.link(sigma).unwrap().link(tau).unwrap();
                    let rhs = k.link(&both).unwrap();
                    assert_eq!(lhs, rhs, "link composition failed at {sigma:?}, {tau:?}");
                }
            }
        }
    }

    #[test]
    fn cone_preserves_g2_in_dim_two() {
        for k in [catalog::rp2_6(), catalog::torus_7()] {
            let apex = k.fresh_label();
            let cone = SimplicialComplex::from_face_list(
                k.facets().iter().map(|f| f.with(VertexId(apex))).collect(),
            );
            assert_eq!(cone.g2(), k.g2());
        }
    }
}
