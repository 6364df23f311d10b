//! The forward constructions: one-vertex suspension, facet subdivision,
//! handle addition, connected sum, vertex folding and edge folding.
//!
//! Each operation validates admissibility, performs the construction, and
//! then verifies the change in `g2` and the link identities of the identified
//! vertices exactly. A failed verification is an implementation bug, so those
//! checks are hard asserts rather than recoverable errors.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::complex::{binomial, Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::trace::ConstructionRecord;

/// What a facet bijection is allowed to identify: nothing shared (plain),
/// one shared fixed vertex, or one shared fixed edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FoldKind {
    Plain,
    VertexFolding(VertexId),
    EdgeFolding(VertexId, VertexId),
}

/// A bijection between two facets, with the fold kind it is meant for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetBijection {
    pub source: Face,
    pub target: Face,
    pub pairs: Vec<(VertexId, VertexId)>,
    pub kind: FoldKind,
}

impl FacetBijection {
    /// Validates the structural invariants: the pairs map the source facet
    /// bijectively onto the target facet and the fold kind's fixed vertices
    /// are fixed.
    pub fn new(
        source: Face,
        target: Face,
        pairs: Vec<(VertexId, VertexId)>,
        kind: FoldKind,
    ) -> Result<Self> {
        let srcs = Face::from_vertex_set(pairs.iter().map(|p| p.0));
        let tgts = Face::from_vertex_set(pairs.iter().map(|p| p.1));
        if srcs != source || srcs.len() != pairs.len() {
            return Err(Error::MalformedBijection(
                "pair sources do not enumerate the source facet".into(),
            ));
        }
        if tgts != target || tgts.len() != pairs.len() {
            return Err(Error::MalformedBijection(
                "pair targets do not enumerate the target facet".into(),
            ));
        }
        let shared = source.intersection(&target);
        match &kind {
            FoldKind::Plain => {}
            FoldKind::VertexFolding(apex) => {
                if shared != Face::from_vertex_set([*apex]) {
                    return Err(Error::MalformedBijection(format!(
                        "facets must intersect exactly in the apex {apex}"
                    )));
                }
                if !pairs.contains(&(*apex, *apex)) {
                    return Err(Error::MalformedBijection("apex must be fixed".into()));
                }
            }
            FoldKind::EdgeFolding(u, v) => {
                if shared != Face::from_vertex_set([*u, *v]) {
                    return Err(Error::MalformedBijection(format!(
                        "facets must intersect exactly in the edge {u}{v}"
                    )));
                }
                if !pairs.contains(&(*u, *u)) || !pairs.contains(&(*v, *v)) {
                    return Err(Error::MalformedBijection(
                        "both edge endpoints must be fixed".into(),
                    ));
                }
            }
        }
        // A vertex fixed by the bijection must be a declared fixed point.
        for (s, t) in &pairs {
            if s == t {
                let ok = match &kind {
                    FoldKind::Plain => false,
                    FoldKind::VertexFolding(apex) => s == apex,
                    FoldKind::EdgeFolding(u, v) => s == u || s == v,
                };
                if !ok {
                    return Err(Error::MalformedBijection(format!(
                        "unexpected fixed vertex {s}"
                    )));
                }
            }
        }
        Ok(FacetBijection {
            source,
            target,
            pairs,
            kind,
        })
    }

    pub fn fixed_vertices(&self) -> Vec<VertexId> {
        match &self.kind {
            FoldKind::Plain => Vec::new(),
            FoldKind::VertexFolding(apex) => vec![*apex],
            FoldKind::EdgeFolding(u, v) => vec![*u, *v],
        }
    }

    /// Pairs that actually merge two distinct vertices.
    pub fn moving_pairs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.pairs.iter().copied().filter(|(s, t)| s != t)
    }

    pub fn reversed(&self) -> FacetBijection {
        FacetBijection {
            source: self.target.clone(),
            target: self.source.clone(),
            pairs: self.pairs.iter().map(|&(s, t)| (t, s)).collect(),
            kind: self.kind.clone(),
        }
    }
}

/// Result of an admissibility check, with the first violating pair and a
/// short witness path when inadmissible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub violation: Option<AdmissibilityViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityViolation {
    pub pair: (VertexId, VertexId),
    pub witness: Vec<VertexId>,
}

/// Checks the distance and path conditions of the three admissibility kinds:
/// plain needs edge distance at least three for every pair; vertex folding
/// needs every length-two path between paired vertices to run through the
/// apex; edge folding needs every path of length at most two to run through
/// one of the fixed edge endpoints. Identified vertices may never be
/// adjacent, since the quotient would not be simplicial.
pub fn check_admissible(
    k: &SimplicialComplex,
    psi: &FacetBijection,
) -> Result<AdmissibilityReport> {
    for facet in [&psi.source, &psi.target] {
        if k.facets().binary_search(facet).is_err() {
            return Err(Error::NotAFacet(format!("{facet:?}")));
        }
    }
    let fixed: BTreeSet<VertexId> = psi.fixed_vertices().into_iter().collect();
    let mut violation = None;
    'outer: for (s, t) in psi.moving_pairs() {
        match &psi.kind {
            FoldKind::Plain => {
                if let Some(path) = k.bfs_path(s, t) {
                    if path.len() - 1 < 3 {
                        violation = Some(AdmissibilityViolation {
                            pair: (s, t),
                            witness: path,
                        });
                        break 'outer;
                    }
                }
            }
            FoldKind::VertexFolding(_) | FoldKind::EdgeFolding(_, _) => {
                let ns = k.neighbors(s)?;
                let nt = k.neighbors(t)?;
                if ns.contains(&t) {
                    violation = Some(AdmissibilityViolation {
                        pair: (s, t),
                        witness: vec![s, t],
                    });
                    break 'outer;
                }
                for w in ns.intersection(nt) {
                    if !fixed.contains(w) {
                        violation = Some(AdmissibilityViolation {
                            pair: (s, t),
                            witness: vec![s, *w, t],
                        });
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(AdmissibilityReport {
        admissible: violation.is_none(),
        violation,
    })
}

fn require_admissible(k: &SimplicialComplex, psi: &FacetBijection) -> Result<()> {
    let report = check_admissible(k, psi)?;
    match report.violation {
        None => Ok(()),
        Some(v) => Err(Error::NotAdmissible {
            pair_source: v.pair.0 .0,
            pair_target: v.pair.1 .0,
            witness: v.witness.iter().map(|x| x.0).collect(),
        }),
    }
}

/// Identifies two facets along a bijection and removes the merged facet
/// while keeping its boundary. The merged vertices keep the source labels.
pub(crate) fn identify_facets(
    k: &SimplicialComplex,
    psi: &FacetBijection,
) -> SimplicialComplex {
    let map: BTreeMap<VertexId, VertexId> = psi.moving_pairs().map(|(s, t)| (t, s)).collect();
    let merged = psi.source.clone();
    let mut faces: Vec<Face> = Vec::new();
    for facet in k.facets() {
        let image = facet.relabeled(&map);
        debug_assert_eq!(
            image.len(),
            facet.len(),
            "a face collapsed during identification; admissibility was violated"
        );
        if image != merged {
            faces.push(image);
        }
    }
    faces.extend(merged.ridges());
    SimplicialComplex::from_face_list(faces)
}

/// The expected link of an identified vertex: the links of the two premerge
/// vertices, made disjoint by relabeling their shared (fixed) vertices, then
/// identified along the induced facet bijection.
fn expected_identified_link(
    k: &SimplicialComplex,
    psi: &FacetBijection,
    a: VertexId,
    b: VertexId,
) -> SimplicialComplex {
    let link_a = k.link(&Face::from_vertex_set([a])).unwrap();
    let link_b = k.link(&Face::from_vertex_set([b])).unwrap();
    let va: BTreeSet<VertexId> = link_a.vertices().into_iter().collect();
    let vb: BTreeSet<VertexId> = link_b.vertices().into_iter().collect();
    let shared: Vec<VertexId> = va.intersection(&vb).copied().collect();
    let fixed: BTreeSet<VertexId> = psi.fixed_vertices().into_iter().collect();
    assert!(
        shared.iter().all(|v| fixed.contains(v)),
        "links of identified vertices may only share the fixed vertices"
    );
    let base = k.fresh_label();
    let dup: BTreeMap<VertexId, VertexId> = shared
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, VertexId(base + i as u32)))
        .collect();
    let link_b2 = link_b.relabel(&dup).unwrap();
    let union = SimplicialComplex::from_face_list(
        link_a
            .facets()
            .iter()
            .chain(link_b2.facets())
            .cloned()
            .collect(),
    );
    let source = psi.source.without(a);
    let target = psi.target.without(b).relabeled(&dup);
    let pairs: Vec<(VertexId, VertexId)> = psi
        .pairs
        .iter()
        .filter(|(s, _)| *s != a)
        .map(|(s, t)| (*s, *dup.get(t).unwrap_or(t)))
        .collect();
    let local =
        FacetBijection::new(source, target, pairs, FoldKind::Plain).unwrap_or_else(|_| {
            panic!("induced link bijection must be well formed")
        });
    identify_facets(&union, &local)
}

/// Verifies `lk(merged) = lk(a) # lk(b)` for every merging pair of `psi`.
fn verify_identified_links(
    k: &SimplicialComplex,
    out: &SimplicialComplex,
    psi: &FacetBijection,
) {
    for (a, b) in psi.moving_pairs() {
        let expected = expected_identified_link(k, psi, a, b);
        let actual = out.link(&Face::from_vertex_set([a])).unwrap();
        assert_eq!(
            actual, expected,
            "link of merged vertex {a} is not the connected sum of the premerge links"
        );
    }
}

/// A construction output together with its replayable record.
#[derive(Clone, Debug)]
pub struct Constructed {
    pub complex: SimplicialComplex,
    pub record: ConstructionRecord,
}

fn fresh_pair(k: &SimplicialComplex, fresh: Option<(u32, u32)>) -> Result<(u32, u32)> {
    match fresh {
        None => {
            let base = k.fresh_label();
            Ok((base, base + 1))
        }
        Some((x, y)) if x != y => Ok((x, y)),
        Some((x, _)) => Err(Error::BadParameters(format!(
            "fresh labels must be distinct, got {x} twice"
        ))),
    }
}

/// One-vertex suspension at `v`: the suspension of the complex realized with
/// a single extra vertex. The link of the fresh edge equals the old link of
/// `v`, and `g2` grows by the number of non-neighbors of `v`.
pub fn one_vertex_suspension(
    k: &SimplicialComplex,
    v: VertexId,
    fresh: Option<(u32, u32)>,
) -> Result<Constructed> {
    if !k.has_vertex(v) {
        return Err(Error::VertexNotPresent(v.0));
    }
    let (x, y) = fresh_pair(k, fresh)?;
    for label in [x, y] {
        if k.has_vertex(VertexId(label)) && VertexId(label) != v {
            return Err(Error::BadParameters(format!(
                "suspension label {label} is already in use"
            )));
        }
    }
    let (xv, yv) = (VertexId(x), VertexId(y));
    let mut faces = Vec::new();
    for facet in k.facets() {
        if facet.contains(v) {
            faces.push(facet.without(v).with(xv).with(yv));
        } else {
            faces.push(facet.with(xv));
            faces.push(facet.with(yv));
        }
    }
    let out = SimplicialComplex::from_face_list(faces);

    let old_link = k.link(&Face::from_vertex_set([v]))?;
    let new_edge_link = out.link(&Face::from_vertex_set([xv, yv]))?;
    assert_eq!(
        new_edge_link, old_link,
        "link of the suspension edge must equal the old vertex link"
    );
    let non_neighbors = k.vertex_count() as i64 - 1 - k.degree(v)? as i64;
    assert_eq!(
        out.g2(),
        k.g2() + non_neighbors,
        "suspension must raise g2 by the number of non-neighbors"
    );

    let mut record = ConstructionRecord::new("one_vertex_suspension");
    record.vertex = Some(v.0);
    record.fresh.insert("x".into(), x);
    record.fresh.insert("y".into(), y);
    Ok(Constructed {
        complex: out,
        record,
    })
}

/// Replaces a facet by the cone over its boundary. Leaves `g2` unchanged.
pub fn facet_subdivide(
    k: &SimplicialComplex,
    sigma: &Face,
    fresh: Option<u32>,
) -> Result<Constructed> {
    if k.facets().binary_search(sigma).is_err() {
        return Err(Error::NotAFacet(format!("{sigma:?}")));
    }
    if k.dim() < 2 {
        return Err(Error::BadParameters(
            "facet subdivision needs dimension at least 2".into(),
        ));
    }
    let w = fresh.unwrap_or_else(|| k.fresh_label());
    if k.has_vertex(VertexId(w)) {
        return Err(Error::BadParameters(format!(
            "subdivision label {w} is already in use"
        )));
    }
    let wv = VertexId(w);
    let mut faces: Vec<Face> = k
        .facets()
        .iter()
        .filter(|f| *f != sigma)
        .cloned()
        .collect();
    for ridge in sigma.ridges() {
        faces.push(ridge.with(wv));
    }
    let out = SimplicialComplex::from_face_list(faces);
    assert_eq!(out.g2(), k.g2(), "facet subdivision must not change g2");

    let mut record = ConstructionRecord::new("facet_subdivide");
    record.face = Some(sigma.labels());
    record.fresh.insert("w".into(), w);
    Ok(Constructed {
        complex: out,
        record,
    })
}

/// Identifies two facets of one complex along a plain-admissible bijection.
/// Raises `g2` by `C(d+2, 2)`.
pub fn handle_addition(k: &SimplicialComplex, psi: &FacetBijection) -> Result<Constructed> {
    if psi.kind != FoldKind::Plain {
        return Err(Error::MalformedBijection(
            "handle addition takes a plain bijection".into(),
        ));
    }
    require_admissible(k, psi)?;
    let out = identify_facets(k, psi);
    let d = k.dim() as i64;
    assert_eq!(
        out.g2(),
        k.g2() + binomial(d + 2, 2),
        "handle addition must raise g2 by C(d+2,2)"
    );
    verify_identified_links(k, &out, psi);

    let mut record = ConstructionRecord::new("handle_addition");
    record.bijection = Some(psi.pairs.iter().map(|(s, t)| (s.0, t.0)).collect());
    Ok(Constructed {
        complex: out,
        record,
    })
}

/// Connected sum of two complexes: labels of the second complex are
/// relabeled away from the first on collision, the facets are identified and
/// removed. `g2` is additive.
pub fn connected_sum(
    k1: &SimplicialComplex,
    k2: &SimplicialComplex,
    source: &Face,
    target: &Face,
    pairs: &[(VertexId, VertexId)],
    relabel_override: Option<&BTreeMap<u32, u32>>,
) -> Result<Constructed> {
    if k1.dim() != k2.dim() {
        return Err(Error::BadParameters(format!(
            "summands have different dimensions {} and {}",
            k1.dim(),
            k2.dim()
        )));
    }
    let v1: BTreeSet<VertexId> = k1.vertices().into_iter().collect();
    let relabel: BTreeMap<VertexId, VertexId> = match relabel_override {
        Some(m) => m
            .iter()
            .map(|(&from, &to)| (VertexId(from), VertexId(to)))
            .collect(),
        None => {
            let mut base = k1
                .max_label()
                .unwrap_or(0)
                .max(k2.max_label().unwrap_or(0))
                + 1;
            let mut m = BTreeMap::new();
            for v in k2.vertices() {
                if v1.contains(&v) {
                    m.insert(v, VertexId(base));
                    base += 1;
                }
            }
            m
        }
    };
    let k2r = k2.relabel(&relabel)?;
    if k2r.vertices().iter().any(|v| v1.contains(v)) {
        return Err(Error::BadParameters(
            "relabeling did not make the summands disjoint".into(),
        ));
    }
    let union = SimplicialComplex::from_face_list(
        k1.facets().iter().chain(k2r.facets()).cloned().collect(),
    );
    let mapped_pairs: Vec<(VertexId, VertexId)> = pairs
        .iter()
        .map(|(s, t)| (*s, *relabel.get(t).unwrap_or(t)))
        .collect();
    let psi = FacetBijection::new(
        source.clone(),
        target.relabeled(&relabel),
        mapped_pairs,
        FoldKind::Plain,
    )?;
    require_admissible(&union, &psi)?;
    let out = identify_facets(&union, &psi);
    assert_eq!(
        out.g2(),
        k1.g2() + k2.g2(),
        "connected sum must add g2 values"
    );
    verify_identified_links(&union, &out, &psi);

    let mut record = ConstructionRecord::new("connected_sum");
    record.bijection = Some(pairs.iter().map(|(s, t)| (s.0, t.0)).collect());
    for (from, to) in &relabel {
        record.fresh.insert(format!("r{from}"), to.0);
    }
    Ok(Constructed {
        complex: out,
        record,
    })
}

/// Vertex folding: identifies two facets sharing exactly the apex. Raises
/// `g2` by `C(d+1, 2)`; the apex link undergoes the same identification.
pub fn vertex_fold(k: &SimplicialComplex, psi: &FacetBijection) -> Result<Constructed> {
    let FoldKind::VertexFolding(apex) = psi.kind else {
        return Err(Error::MalformedBijection(
            "vertex folding takes a vertex-folding bijection".into(),
        ));
    };
    require_admissible(k, psi)?;
    let out = identify_facets(k, psi);
    let d = k.dim() as i64;
    assert_eq!(
        out.g2(),
        k.g2() + binomial(d + 1, 2),
        "vertex folding must raise g2 by C(d+1,2)"
    );
    // The apex link undergoes a handle-style identification of the two
    // residual facets.
    let apex_face = Face::from_vertex_set([apex]);
    let link = k.link(&apex_face)?;
    let local = FacetBijection::new(
        psi.source.without(apex),
        psi.target.without(apex),
        psi.pairs
            .iter()
            .filter(|(s, _)| *s != apex)
            .copied()
            .collect(),
        FoldKind::Plain,
    )?;
    let expected_apex_link = identify_facets(&link, &local);
    assert_eq!(
        out.link(&apex_face)?,
        expected_apex_link,
        "apex link must be the identification of the old apex link"
    );
    verify_identified_links(k, &out, psi);

    let mut record = ConstructionRecord::new("vertex_fold");
    record.bijection = Some(psi.pairs.iter().map(|(s, t)| (s.0, t.0)).collect());
    Ok(Constructed {
        complex: out,
        record,
    })
}

/// Whether an edge folding kept the complex normal: the link of the folded
/// edge is one circle (normal) or two disjoint circles (pinched).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormalityFlag {
    Normal,
    NonNormal,
    /// Dimension other than 3; the analysis is not performed.
    NotEvaluated,
}

#[derive(Clone, Debug)]
pub struct EdgeFolded {
    pub complex: SimplicialComplex,
    pub record: ConstructionRecord,
    pub normality: NormalityFlag,
}

/// Edge folding: identifies two facets sharing exactly one edge. Raises `g2`
/// by `C(d, 2)`. In dimension 3 the link of the folded edge is inspected:
/// one circle keeps the output normal, two circles pinch it.
pub fn edge_fold(k: &SimplicialComplex, psi: &FacetBijection) -> Result<EdgeFolded> {
    let FoldKind::EdgeFolding(u, v) = psi.kind else {
        return Err(Error::MalformedBijection(
            "edge folding takes an edge-folding bijection".into(),
        ));
    };
    require_admissible(k, psi)?;
    let out = identify_facets(k, psi);
    let d = k.dim() as i64;
    assert_eq!(
        out.g2(),
        k.g2() + binomial(d, 2),
        "edge folding must raise g2 by C(d,2)"
    );

    let mut normality = NormalityFlag::NotEvaluated;
    if k.dim() == 3 {
        // Each endpoint link undergoes a vertex-folding identification at the
        // other endpoint.
        for (end, other) in [(u, v), (v, u)] {
            let end_face = Face::from_vertex_set([end]);
            let link = k.link(&end_face)?;
            let local = FacetBijection::new(
                psi.source.without(end),
                psi.target.without(end),
                psi.pairs
                    .iter()
                    .filter(|(s, _)| *s != end)
                    .copied()
                    .collect(),
                FoldKind::VertexFolding(other),
            )?;
            let expected = identify_facets(&link, &local);
            assert_eq!(
                out.link(&end_face)?,
                expected,
                "endpoint link must be the vertex folding of the old link"
            );
        }
        verify_identified_links(k, &out, psi);

        let edge_link = out.link(&Face::from_vertex_set([u, v]))?;
        let comps = edge_link.vertex_components().len();
        assert!(
            edge_link.dim() == 1
                && edge_link
                    .vertices()
                    .iter()
                    .all(|&w| edge_link.degree(w).unwrap() == 2),
            "link of the folded edge must be a disjoint union of circles"
        );
        assert!((1..=2).contains(&comps));
        normality = if comps == 1 {
            NormalityFlag::Normal
        } else {
            NormalityFlag::NonNormal
        };
    }

    let mut record = ConstructionRecord::new("edge_fold");
    record.bijection = Some(psi.pairs.iter().map(|(s, t)| (s.0, t.0)).collect());
    Ok(EdgeFolded {
        complex: out,
        record,
        normality,
    })
}

/// Stellar subdivision of an edge: every face containing the edge is split
/// at a fresh vertex. Used to compare the one-vertex suspension with the
/// usual two-point suspension.
pub(crate) fn stellar_subdivide_edge(
    k: &SimplicialComplex,
    edge: &Face,
    fresh: Option<u32>,
) -> Result<SimplicialComplex> {
    assert_eq!(edge.len(), 2);
    if !k.contains(edge) {
        return Err(Error::FaceNotPresent(format!("{edge:?}")));
    }
    let w = VertexId(fresh.unwrap_or_else(|| k.fresh_label()));
    let (a, b) = (edge.vertices()[0], edge.vertices()[1]);
    let mut faces = Vec::new();
    for facet in k.facets() {
        if edge.is_subset_of(facet) {
            faces.push(facet.without(a).with(w));
            faces.push(facet.without(b).with(w));
        } else {
            faces.push(facet.clone());
        }
    }
    Ok(SimplicialComplex::from_face_list(faces))
}

/// Enumerates the admissible bijections of one kind inside a complex,
/// ordered by facet pair and pairing permutation.
pub fn admissible_bijections(k: &SimplicialComplex, kind_filter: &FoldKind) -> Vec<FacetBijection> {
    let facets = k.facets();
    let mut out = Vec::new();
    for (i, source) in facets.iter().enumerate() {
        for target in facets.iter().skip(i + 1) {
            let shared = source.intersection(target);
            let candidate_kinds: Vec<FoldKind> = match kind_filter {
                FoldKind::Plain if shared.is_empty() => vec![FoldKind::Plain],
                FoldKind::VertexFolding(_) if shared.len() == 1 => {
                    vec![FoldKind::VertexFolding(shared.vertices()[0])]
                }
                FoldKind::EdgeFolding(_, _) if shared.len() == 2 => vec![FoldKind::EdgeFolding(
                    shared.vertices()[0],
                    shared.vertices()[1],
                )],
                _ => continue,
            };
            for kind in candidate_kinds {
                let fixed: Vec<VertexId> = shared.vertices().to_vec();
                let movable_src: Vec<VertexId> = source
                    .vertices()
                    .iter()
                    .copied()
                    .filter(|x| !shared.contains(*x))
                    .collect();
                let movable_tgt: Vec<VertexId> = target
                    .vertices()
                    .iter()
                    .copied()
                    .filter(|x| !shared.contains(*x))
                    .collect();
                for perm in movable_tgt.iter().copied().permutations(movable_tgt.len()) {
                    let mut pairs: Vec<(VertexId, VertexId)> =
                        fixed.iter().map(|&f| (f, f)).collect();
                    pairs.extend(movable_src.iter().copied().zip(perm));
                    let Ok(psi) = FacetBijection::new(
                        source.clone(),
                        target.clone(),
                        pairs,
                        kind.clone(),
                    ) else {
                        continue;
                    };
                    if check_admissible(k, &psi)
                        .map(|r| r.admissible)
                        .unwrap_or(false)
                    {
                        out.push(psi);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis;
    use crate::catalog;

    #[test]
    fn suspension_of_projective_plane() {
        let rp2 = catalog::rp2_6();
        let built = one_vertex_suspension(&rp2, VertexId(0), None).unwrap();
        let k = built.complex;
        assert_eq!(k.vertex_count(), 7);
        assert_eq!(k.face_vectors().f[2], 21);
        assert_eq!(k.g2(), 3);
        let sing = analysis::singularity_multiset(&k).unwrap();
        assert_eq!(sing.len(), 2);
        assert!(sing
            .classes()
            .iter()
            .all(|c| *c == analysis::SurfaceClass { b1: 1, orientable: false }));
    }

    #[test]
    fn suspension_of_boundary_tetrahedron_is_boundary_4_simplex() {
        let k = one_vertex_suspension(&catalog::boundary_simplex(3), VertexId(0), None)
            .unwrap()
            .complex;
        assert_eq!(k.vertex_count(), 5);
        assert_eq!(k.g2(), 0);
        assert!(k.is_isomorphic(&catalog::boundary_simplex(4)).unwrap());
    }

    #[test]
    fn suspension_of_square_circle() {
        let square =
            SimplicialComplex::from_facets([vec![0u32, 1], vec![1, 2], vec![2, 3], vec![3, 0]])
                .unwrap();
        let built = one_vertex_suspension(&square, VertexId(0), None).unwrap();
        let k = built.complex;
        assert_eq!(k.vertex_count(), 5);
        // g2 of the square is -1 and vertex 0 has one non-neighbor.
        assert_eq!(k.g2(), square.g2() + 1);
        assert_eq!(analysis::surface_classify(&k).unwrap(), analysis::SurfaceClass::sphere());
    }

    #[test]
    fn suspension_missing_vertex_fails() {
        assert!(matches!(
            one_vertex_suspension(&catalog::rp2_6(), VertexId(77), None),
            Err(Error::VertexNotPresent(77))
        ));
    }

    #[test]
    fn subdivision_counts() {
        let mut k = catalog::boundary_simplex(4);
        assert_eq!(k.g2(), 0);
        for step in 0..4 {
            let facet = k.facets()[0].clone();
            k = facet_subdivide(&k, &facet, None).unwrap().complex;
            let n = 6 + step as i64;
            assert_eq!(k.face_vectors().f[1], n);
            assert_eq!(k.face_vectors().f[2], 4 * n - 10);
            assert_eq!(k.g2(), 0);
        }

        let rp2 = catalog::rp2_6();
        let facet = rp2.facets()[0].clone();
        let sub = facet_subdivide(&rp2, &facet, None).unwrap().complex;
        assert_eq!(sub.face_vectors().f, vec![1, 7, 18, 12]);
        assert_eq!(sub.g2(), 3);
    }

    #[test]
    fn subdivision_rejects_non_facets() {
        let k = catalog::boundary_simplex(4);
        assert!(matches!(
            facet_subdivide(&k, &Face::new([0, 1, 2]), None),
            Err(Error::NotAFacet(_))
        ));
    }

    #[test]
    fn admissibility_examples() {
        // Two facets in distinct components are plain admissible.
        let two = SimplicialComplex::from_facets([vec![0u32, 1, 2, 3], vec![4, 5, 6, 7]]).unwrap();
        let psi = FacetBijection::new(
            Face::new([0, 1, 2, 3]),
            Face::new([4, 5, 6, 7]),
            vec![
                (VertexId(0), VertexId(4)),
                (VertexId(1), VertexId(5)),
                (VertexId(2), VertexId(6)),
                (VertexId(3), VertexId(7)),
            ],
            FoldKind::Plain,
        )
        .unwrap();
        assert!(check_admissible(&two, &psi).unwrap().admissible);

        // No bijection between facets of the boundary 4-simplex is admissible
        // for any kind: everything is at distance one.
        let k = catalog::boundary_simplex(4);
        for kind in [
            FoldKind::Plain,
            FoldKind::VertexFolding(VertexId(0)),
            FoldKind::EdgeFolding(VertexId(0), VertexId(1)),
        ] {
            assert!(admissible_bijections(&k, &kind).is_empty());
        }
    }

    #[test]
    fn admissibility_reports_witness_path() {
        // A plain bijection with fixed vertices is structurally malformed.
        let k = catalog::boundary_simplex(4);
        let malformed = FacetBijection::new(
            Face::new([0, 1, 2, 3]),
            Face::new([1, 2, 3, 4]),
            vec![
                (VertexId(0), VertexId(4)),
                (VertexId(1), VertexId(1)),
                (VertexId(2), VertexId(2)),
                (VertexId(3), VertexId(3)),
            ],
            FoldKind::Plain,
        );
        assert!(matches!(malformed, Err(Error::MalformedBijection(_))));

        // A derangement pairing is well formed but inadmissible at distance 1.
        let psi = FacetBijection::new(
            Face::new([0, 1, 2, 3]),
            Face::new([1, 2, 3, 4]),
            vec![
                (VertexId(0), VertexId(1)),
                (VertexId(1), VertexId(2)),
                (VertexId(2), VertexId(3)),
                (VertexId(3), VertexId(4)),
            ],
            FoldKind::Plain,
        )
        .unwrap();
        let report = check_admissible(&k, &psi).unwrap();
        assert!(!report.admissible);
        let violation = report.violation.unwrap();
        assert_eq!(violation.witness.len(), 2);
        assert!(matches!(
            handle_addition(&k, &psi),
            Err(Error::NotAdmissible { .. })
        ));
    }

    #[test]
    fn connected_sum_with_boundary_simplex_is_subdivision() {
        let k = catalog::boundary_simplex(4);
        let other = catalog::boundary_simplex(4);
        let source = k.facets()[0].clone();
        let target = other.facets()[0].clone();
        let pairs: Vec<(VertexId, VertexId)> = source
            .vertices()
            .iter()
            .zip(target.vertices())
            .map(|(a, b)| (*a, *b))
            .collect();
        let sum = connected_sum(&k, &other, &source, &target, &pairs, None)
            .unwrap()
            .complex;
        assert_eq!(sum.vertex_count(), 6);
        assert_eq!(sum.g2(), 0);
        let facet = k.facets()[0].clone();
        let sub = facet_subdivide(&k, &facet, None).unwrap().complex;
        assert!(sum.is_isomorphic(&sub).unwrap());
    }

    #[test]
    fn connected_sum_of_projective_plane_and_sphere() {
        let rp2 = catalog::rp2_6();
        let sphere = catalog::boundary_simplex(3);
        let source = rp2.facets()[0].clone();
        let target = sphere.facets()[0].clone();
        let pairs: Vec<(VertexId, VertexId)> = source
            .vertices()
            .iter()
            .zip(target.vertices())
            .map(|(a, b)| (*a, *b))
            .collect();
        let sum = connected_sum(&rp2, &sphere, &source, &target, &pairs, None)
            .unwrap()
            .complex;
        assert_eq!(sum.vertex_count(), 7);
        assert_eq!(sum.g2(), 3);
        assert_eq!(
            analysis::surface_classify(&sum).unwrap(),
            analysis::SurfaceClass {
                b1: 1,
                orientable: false
            }
        );
    }

    #[test]
    fn connected_sum_is_commutative_up_to_isomorphism() {
        let a = catalog::rp2_6();
        let b = catalog::stacked_sphere(2, 6, 9).unwrap();
        let (sa, sb) = (a.facets()[0].clone(), b.facets()[0].clone());
        let pairs_ab: Vec<(VertexId, VertexId)> = sa
            .vertices()
            .iter()
            .zip(sb.vertices())
            .map(|(x, y)| (*x, *y))
            .collect();
        let pairs_ba: Vec<(VertexId, VertexId)> =
            pairs_ab.iter().map(|&(x, y)| (y, x)).collect();
        let ab = connected_sum(&a, &b, &sa, &sb, &pairs_ab, None).unwrap().complex;
        let ba = connected_sum(&b, &a, &sb, &sa, &pairs_ba, None).unwrap().complex;
        assert!(ab.is_isomorphic(&ba).unwrap());
    }

    #[test]
    fn suspension_then_edge_subdivision_matches_two_point_suspension() {
        for base in [catalog::rp2_6(), catalog::torus_7()] {
            let built = one_vertex_suspension(&base, VertexId(0), None).unwrap();
            let x = built.record.fresh["x"];
            let y = built.record.fresh["y"];
            let split =
                stellar_subdivide_edge(&built.complex, &Face::new([x, y]), None).unwrap();
            // Ordinary suspension with two fresh points.
            let p = base.fresh_label();
            let q = p + 1;
            let two_point = SimplicialComplex::from_face_list(
                base.facets()
                    .iter()
                    .flat_map(|f| [f.with(VertexId(p)), f.with(VertexId(q))])
                    .collect(),
            );
            assert_eq!(split.face_vectors().f, two_point.face_vectors().f);
            assert!(split.is_isomorphic(&two_point).unwrap());
        }
    }
}
