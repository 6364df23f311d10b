//! Pseudomanifold and normality predicates, classification of closed
//! triangulated surfaces, singularity multisets, stacked-sphere recognition,
//! and side/separation analysis of triangle circles inside surfaces.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::complex::{Circle, Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};

/// Topological type of a closed connected surface: the Z/2 first Betti
/// number together with orientability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SurfaceClass {
    pub b1: u32,
    pub orientable: bool,
}

impl SurfaceClass {
    pub fn sphere() -> Self {
        SurfaceClass {
            b1: 0,
            orientable: true,
        }
    }

    pub fn is_sphere(&self) -> bool {
        self.b1 == 0 && self.orientable
    }
}

impl std::fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(b1={}, {})",
            self.b1,
            if self.orientable {
                "orientable"
            } else {
                "non-orientable"
            }
        )
    }
}

/// Multiset of non-sphere vertex-link classes, kept sorted so equality is
/// order-insensitive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct SingularityMultiset(Vec<SurfaceClass>);

impl SingularityMultiset {
    pub fn new(mut classes: Vec<SurfaceClass>) -> Self {
        classes.sort();
        SingularityMultiset(classes)
    }

    pub fn classes(&self) -> &[SurfaceClass] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Outcome of cutting a surface along a triangle circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideReport {
    /// Components of the surface after removing the circle (1 or 2).
    pub component_count: usize,
    /// Whether a regular neighborhood of the circle is an annulus.
    pub two_sided: bool,
}

impl SideReport {
    pub fn separates(&self) -> bool {
        self.component_count == 2
    }
}

fn require_pure(k: &SimplicialComplex) -> Result<()> {
    let d = k.dim();
    for f in k.facets() {
        if f.dim() != d {
            return Err(Error::NotPure(f.dim(), d));
        }
    }
    Ok(())
}

fn ridge_incidence(k: &SimplicialComplex) -> BTreeMap<Face, usize> {
    let mut counts: BTreeMap<Face, usize> = BTreeMap::new();
    for facet in k.facets() {
        for ridge in facet.ridges() {
            *counts.entry(ridge).or_insert(0) += 1;
        }
    }
    counts
}

/// A pure complex in which every codimension-one face lies in exactly two
/// facets.
pub fn is_pseudomanifold(k: &SimplicialComplex) -> Result<bool> {
    require_pure(k)?;
    Ok(ridge_incidence(k).values().all(|&c| c == 2))
}

/// A pure complex whose ridges lie in one or two facets and whose boundary
/// ridges themselves form a pseudomanifold.
pub fn is_pseudomanifold_with_boundary(k: &SimplicialComplex) -> Result<bool> {
    require_pure(k)?;
    let counts = ridge_incidence(k);
    if counts.values().any(|&c| c > 2) {
        return Ok(false);
    }
    let boundary = boundary_complex(k)?;
    if boundary.facets().is_empty() {
        return Ok(true);
    }
    is_pseudomanifold(&boundary)
}

/// Closure of the ridges contained in exactly one facet. Empty for a closed
/// pseudomanifold.
pub fn boundary_complex(k: &SimplicialComplex) -> Result<SimplicialComplex> {
    require_pure(k)?;
    let ridges: Vec<Face> = ridge_incidence(k)
        .into_iter()
        .filter(|(_, c)| *c == 1)
        .map(|(r, _)| r)
        .collect();
    Ok(SimplicialComplex::from_face_list(ridges))
}

/// Connected pseudomanifold whose faces of codimension two or more all have
/// connected links. Circles and vertex pairs qualify in dimensions 1 and 0.
pub fn is_normal(k: &SimplicialComplex) -> Result<bool> {
    let pm = is_pseudomanifold(k).map_err(|e| Error::NotPseudomanifold(e.to_string()))?;
    if !pm {
        return Err(Error::NotPseudomanifold(
            "some ridge is not in exactly two facets".into(),
        ));
    }
    let d = k.dim();
    if d <= 0 {
        return Ok(true);
    }
    if !k.is_connected() {
        return Ok(false);
    }
    for card in 1..=((d - 1).max(0) as usize) {
        for face in k.faces_with_card(card) {
            if face.dim() > d - 2 {
                continue;
            }
            let link = k.link(face)?;
            if !link.is_connected() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn ensure_normal(k: &SimplicialComplex) -> Result<()> {
    if is_normal(k)? {
        Ok(())
    } else {
        Err(Error::NotNormal(
            "disconnected complex or disconnected link in codimension >= 2".into(),
        ))
    }
}

/// The cyclic vertex order of a 1-dimensional complex that is a single
/// circle; `None` otherwise.
pub fn circle_order(k: &SimplicialComplex) -> Option<Vec<VertexId>> {
    if k.dim() != 1 {
        return None;
    }
    k.induced_circle_on(&k.vertices())
        .map(|c| c.vertices().to_vec())
}

fn validate_surface(k: &SimplicialComplex) -> Result<()> {
    if k.dim() != 2 {
        return Err(Error::NotASurface(format!("dimension {} != 2", k.dim())));
    }
    require_pure(k).map_err(|e| Error::NotASurface(e.to_string()))?;
    if !ridge_incidence(k).values().all(|&c| c == 2) {
        return Err(Error::NotASurface(
            "some edge is not in exactly two triangles".into(),
        ));
    }
    if !k.is_connected() {
        return Err(Error::NotASurface("not connected".into()));
    }
    for v in k.vertices() {
        let link = k.link(&Face::from_vertex_set([v]))?;
        if circle_order(&link).is_none() {
            return Err(Error::NotASurface(format!(
                "link of {v} is not a single circle"
            )));
        }
    }
    Ok(())
}

/// Classifies a connected closed triangulated surface by `b1 = 2 - χ` and
/// orientability. Orientability is decided by propagating coherent triangle
/// orientations across shared edges, no homology needed.
pub fn surface_classify(k: &SimplicialComplex) -> Result<SurfaceClass> {
    validate_surface(k)?;
    let report = k.face_vectors();
    let b1 = 2 - report.euler;
    debug_assert!(b1 >= 0);
    Ok(SurfaceClass {
        b1: b1 as u32,
        orientable: orientation_propagates(k),
    })
}

/// Sign of the edge (i-th and j-th vertex, i < j) in the reference cyclic
/// order of a sorted triangle: (a,b) and (b,c) run forward, (a,c) backward.
fn edge_sign(tri: &Face, e: &Face) -> i8 {
    let vs = tri.vertices();
    let (x, y) = (e.vertices()[0], e.vertices()[1]);
    if x == vs[0] && y == vs[2] {
        -1
    } else {
        1
    }
}

fn orientation_propagates(k: &SimplicialComplex) -> bool {
    let facets = k.facets();
    let mut edge_to_tris: BTreeMap<Face, Vec<usize>> = BTreeMap::new();
    for (i, t) in facets.iter().enumerate() {
        for e in t.ridges() {
            edge_to_tris.entry(e).or_default().push(i);
        }
    }
    let mut sign: Vec<Option<i8>> = vec![None; facets.len()];
    for start in 0..facets.len() {
        if sign[start].is_some() {
            continue;
        }
        sign[start] = Some(1);
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let si = sign[i].unwrap();
            for e in facets[i].ridges() {
                for &j in &edge_to_tris[&e] {
                    if j == i {
                        continue;
                    }
                    // Coherent orientation traverses a shared edge in
                    // opposite directions in the two triangles.
                    let required = -si * edge_sign(&facets[i], &e) * edge_sign(&facets[j], &e);
                    match sign[j] {
                        None => {
                            sign[j] = Some(required);
                            stack.push(j);
                        }
                        Some(sj) if sj != required => return false,
                        _ => {}
                    }
                }
            }
        }
    }
    true
}

/// Classes of all vertex links of a 3-dimensional normal pseudomanifold.
pub fn vertex_link_classes(k: &SimplicialComplex) -> Result<BTreeMap<VertexId, SurfaceClass>> {
    ensure_normal(k)?;
    let mut out = BTreeMap::new();
    for v in k.vertices() {
        let link = k.link(&Face::from_vertex_set([v]))?;
        out.insert(v, surface_classify(&link)?);
    }
    Ok(out)
}

/// Vertices of a 3-dimensional normal pseudomanifold whose links are not
/// spheres.
pub fn singular_vertices(k: &SimplicialComplex) -> Result<Vec<VertexId>> {
    Ok(vertex_link_classes(k)?
        .into_iter()
        .filter(|(_, class)| !class.is_sphere())
        .map(|(v, _)| v)
        .collect())
}

pub fn singularity_multiset(k: &SimplicialComplex) -> Result<SingularityMultiset> {
    Ok(SingularityMultiset::new(
        vertex_link_classes(k)?
            .into_values()
            .filter(|class| !class.is_sphere())
            .collect(),
    ))
}

/// Stacked-sphere test. In dimension >= 3 this is `g2 = 0` for normal
/// pseudomanifolds; in dimension 2 degree-three vertices are removed until
/// the boundary of a tetrahedron remains.
pub fn is_stacked_sphere(k: &SimplicialComplex) -> Result<bool> {
    ensure_normal(k)?;
    let d = k.dim();
    if d >= 3 {
        return Ok(k.g2() == 0);
    }
    if d != 2 {
        return Err(Error::NotNormal(format!(
            "stacked-sphere test needs dimension >= 2, got {d}"
        )));
    }
    let mut cur = k.clone();
    loop {
        if cur.vertex_count() == 4 {
            return Ok(cur.facets().len() == 4);
        }
        let Some((v, opposite)) = cur.vertices().into_iter().find_map(|v| {
            if cur.degree(v).ok()? != 3 {
                return None;
            }
            let nb: Vec<VertexId> = cur.neighbors(v).ok()?.iter().copied().collect();
            Some((v, Face::from_vertex_set(nb)))
        }) else {
            return Ok(false);
        };
        // In a connected surface with more than four vertices the opposite
        // triangle of a degree-three vertex cannot already be present.
        if cur.contains(&opposite) {
            return Ok(false);
        }
        let mut faces: Vec<Face> = cur
            .facets()
            .iter()
            .filter(|f| !f.contains(v))
            .cloned()
            .collect();
        faces.push(opposite);
        cur = SimplicialComplex::from_face_list(faces);
    }
}

/// Cuts a closed surface along a triangle circle and reports how many
/// components remain and whether the circle is two-sided.
///
/// The two-sidedness test performs the cut explicitly: around each circle
/// vertex the rotation of corners splits in two arcs, each arc stitches one
/// side of each incident circle edge, and the stitched sides close into
/// either one boundary circle (Möbius neighborhood) or two (annulus).
pub fn cut_along_circle(surface: &SimplicialComplex, circle: &Circle) -> Result<SideReport> {
    validate_surface(surface).map_err(|e| {
        Error::NotACircleInSurface(format!("{:?}", circle.vertices()), e.to_string())
    })?;
    if circle.len() != 3 {
        return Err(Error::NotACircleInSurface(
            format!("{:?}", circle.vertices()),
            "only triangle circles are supported".into(),
        ));
    }
    let edges = circle.edges();
    for e in &edges {
        if !surface.contains(e) {
            return Err(Error::NotACircleInSurface(
                format!("{:?}", circle.vertices()),
                format!("edge {e:?} is absent"),
            ));
        }
    }
    let cut: BTreeSet<Face> = edges.iter().cloned().collect();
    let component_count = surface.dual_components(&cut).len();
    assert!(
        (1..=2).contains(&component_count),
        "cutting a surface along one circle leaves one or two components"
    );

    // Node = (circle edge, one of its two coboundary triangles).
    let mut pairings: BTreeMap<(Face, Face), Vec<(Face, Face)>> = BTreeMap::new();
    let verts = circle.vertices();
    for i in 0..3 {
        let v = verts[i];
        let u = verts[(i + 1) % 3];
        let w = verts[(i + 2) % 3];
        let link = surface.link(&Face::from_vertex_set([v]))?;
        let rotation = circle_order(&link).ok_or_else(|| {
            Error::NotACircleInSurface(
                format!("{:?}", circle.vertices()),
                format!("link of {v} is not a circle"),
            )
        })?;
        let n = rotation.len();
        let pos_u = rotation.iter().position(|&x| x == u).unwrap();
        // Walk both ways around the rotation from u until w; each arc pairs a
        // side of edge uv with a side of edge wv.
        for dir in [1isize, -1] {
            let mut arc = vec![u];
            let mut idx = pos_u as isize;
            loop {
                idx = (idx + dir).rem_euclid(n as isize);
                let x = rotation[idx as usize];
                arc.push(x);
                if x == w {
                    break;
                }
            }
            let first_tri = Face::from_vertex_set([v, arc[0], arc[1]]);
            let last_tri = Face::from_vertex_set([v, arc[arc.len() - 2], arc[arc.len() - 1]]);
            let node_a = (Face::from_vertex_set([u, v]), first_tri);
            let node_b = (Face::from_vertex_set([w, v]), last_tri);
            pairings.entry(node_a.clone()).or_default().push(node_b.clone());
            pairings.entry(node_b).or_default().push(node_a);
        }
    }
    for (node, mates) in &pairings {
        assert!(
            surface.contains(&node.1) && mates.len() == 2,
            "each edge side is stitched at both endpoints"
        );
    }
    // Count cycles of the 2-regular pairing graph.
    let mut seen: BTreeSet<(Face, Face)> = BTreeSet::new();
    let mut boundary_circles = 0usize;
    for start in pairings.keys() {
        if seen.contains(start) {
            continue;
        }
        boundary_circles += 1;
        let mut prev = start.clone();
        let mut cur = pairings[start][0].clone();
        seen.insert(prev.clone());
        while &cur != start {
            seen.insert(cur.clone());
            let mates = &pairings[&cur];
            let next = if mates[0] == prev {
                mates[1].clone()
            } else {
                mates[0].clone()
            };
            prev = cur;
            cur = next;
        }
    }
    assert!(
        (1..=2).contains(&boundary_circles),
        "cut boundary must close into one or two circles, got {boundary_circles}"
    );
    let report = SideReport {
        component_count,
        two_sided: boundary_circles == 2,
    };
    assert!(
        !(report.component_count == 2 && !report.two_sided),
        "a separating circle is always two-sided"
    );
    Ok(report)
}
