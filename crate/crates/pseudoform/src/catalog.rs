//! Deterministic generators for the canonical complexes used across the
//! test suites: boundaries of simplices, stacked spheres, the six-vertex
//! projective plane, the seven-vertex torus, cyclic polytope boundaries,
//! cone-point surfaces of a requested class, and search-built golden
//! instances for the folding operations.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{surface_classify, SingularityMultiset, SurfaceClass};
use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::ops::{self, FacetBijection, FoldKind, NormalityFlag};
use crate::trace::ConstructionRecord;

/// A named complex with frozen expectations; the golden test recomputes and
/// compares them bit for bit.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub complex: SimplicialComplex,
    pub expected_f: Vec<i64>,
    pub expected_g2: i64,
    pub expected_singularities: SingularityMultiset,
    pub record: Option<ConstructionRecord>,
}

/// Boundary of the n-simplex on vertices `0..=n`.
pub fn boundary_simplex(n: u32) -> SimplicialComplex {
    let all: Vec<u32> = (0..=n).collect();
    let facets: Vec<Vec<u32>> = (0..=n)
        .map(|skip| all.iter().copied().filter(|&v| v != skip).collect())
        .collect();
    SimplicialComplex::from_facets(facets).expect("simplex boundary is well formed")
}

/// Stacked d-sphere: seeded random facet subdivisions of the boundary of a
/// (d+1)-simplex until the vertex count is reached.
pub fn stacked_sphere(d: u32, n_vertices: u32, seed: u64) -> Result<SimplicialComplex> {
    if d < 2 {
        return Err(Error::BadParameters(
            "stacked spheres need dimension at least 2".into(),
        ));
    }
    if n_vertices < d + 2 {
        return Err(Error::BadParameters(format!(
            "a stacked {d}-sphere needs at least {} vertices",
            d + 2
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut k = boundary_simplex(d + 1);
    while (k.vertex_count() as u32) < n_vertices {
        let facet = k.facets().choose(&mut rng).unwrap().clone();
        k = ops::facet_subdivide(&k, &facet, None)?.complex;
    }
    Ok(k)
}

/// The unique six-vertex triangulation of the projective plane: the
/// antipodal quotient of the icosahedron, hard-coded.
pub fn rp2_6() -> SimplicialComplex {
    SimplicialComplex::from_facets([
        vec![0u32, 1, 3],
        vec![0, 1, 5],
        vec![0, 2, 3],
        vec![0, 2, 4],
        vec![0, 4, 5],
        vec![1, 2, 4],
        vec![1, 2, 5],
        vec![1, 3, 4],
        vec![2, 3, 5],
        vec![3, 4, 5],
    ])
    .expect("six-vertex projective plane is well formed")
}

/// The seven-vertex 2-neighborly torus (facets `{i, i+1, i+3}` and
/// `{i, i+2, i+3}` mod 7).
pub fn torus_7() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0u32..7 {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimplicialComplex::from_facets(facets).expect("seven-vertex torus is well formed")
}

/// Boundary of the cyclic polytope C(d, n) via Gale's evenness condition on
/// the linear order `0..n`.
pub fn cyclic_polytope_boundary(d: u32, n: u32) -> Result<SimplicialComplex> {
    if n <= d || d < 2 {
        return Err(Error::BadParameters(format!(
            "cyclic polytope boundary needs n > d >= 2, got d={d}, n={n}"
        )));
    }
    let mut facets = Vec::new();
    let verts: Vec<u32> = (0..n).collect();
    for combo in combinations(&verts, d as usize) {
        let inside: BTreeSet<u32> = combo.iter().copied().collect();
        let outside: Vec<u32> = verts.iter().copied().filter(|v| !inside.contains(v)).collect();
        let mut even = true;
        'pairs: for (ai, &a) in outside.iter().enumerate() {
            for &b in &outside[ai + 1..] {
                let between = inside.iter().filter(|&&s| a < s && s < b).count();
                if between % 2 == 1 {
                    even = false;
                    break 'pairs;
                }
            }
        }
        if even {
            facets.push(combo);
        }
    }
    SimplicialComplex::from_facets(facets)
}

fn combinations(items: &[u32], k: usize) -> Vec<Vec<u32>> {
    use itertools::Itertools;
    items.iter().copied().combinations(k).collect()
}

/// Flips the edge `{a,b}` against its two opposite vertices. `None` when the
/// flip would leave the surface category (degree-3 endpoint or the opposite
/// edge already present).
pub(crate) fn edge_flip(k: &SimplicialComplex, edge: &Face) -> Option<SimplicialComplex> {
    let (a, b) = (edge.vertices()[0], edge.vertices()[1]);
    let link = k.link(edge).ok()?;
    let opp = link.vertices();
    if opp.len() != 2 {
        return None;
    }
    let (x, y) = (opp[0], opp[1]);
    if k.contains(&Face::from_vertex_set([x, y])) {
        return None;
    }
    if k.degree(a).ok()? <= 3 || k.degree(b).ok()? <= 3 {
        return None;
    }
    let mut faces: Vec<Face> = k
        .facets()
        .iter()
        .filter(|f| !edge.is_subset_of(f))
        .cloned()
        .collect();
    faces.push(Face::from_vertex_set([x, y, a]));
    faces.push(Face::from_vertex_set([x, y, b]));
    Some(SimplicialComplex::from_face_list(faces))
}

/// Contracts `gone` into `keep` when the surface link condition holds: the
/// common neighborhood is exactly the two opposite vertices of the edge.
pub(crate) fn contract_edge(
    k: &SimplicialComplex,
    keep: VertexId,
    gone: VertexId,
) -> Option<SimplicialComplex> {
    let edge = Face::from_vertex_set([keep, gone]);
    if !k.contains(&edge) || k.vertex_count() <= 4 {
        return None;
    }
    let common: BTreeSet<VertexId> = k
        .neighbors(keep)
        .ok()?
        .intersection(k.neighbors(gone).ok()?)
        .copied()
        .collect();
    if common.len() != 2 {
        return None;
    }
    let mut faces = Vec::new();
    for facet in k.facets() {
        if edge.is_subset_of(facet) {
            continue;
        }
        if facet.contains(gone) {
            faces.push(facet.without(gone).with(keep));
        } else {
            faces.push(facet.clone());
        }
    }
    Some(SimplicialComplex::from_face_list(faces))
}

/// Hill-climbs a surface with flips and contractions until some vertex is
/// adjacent to every other.
fn make_cone_point(start: &SimplicialComplex, seed: u64, budget: usize) -> Result<SimplicialComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = start.clone();
    for _ in 0..budget {
        if !cur.graph_cone_points().is_empty() {
            return Ok(cur);
        }
        let v = cur
            .vertices()
            .into_iter()
            .max_by_key(|&v| cur.degree(v).unwrap())
            .unwrap();
        // A flip whose new edge is incident to v raises its degree by one.
        let raised = cur.faces_with_card(2).iter().find_map(|edge| {
            if edge.contains(v) {
                return None;
            }
            let link = cur.link(edge).ok()?;
            let opp = link.vertices();
            if opp.len() == 2 && (opp[0] == v || opp[1] == v) {
                let z = if opp[0] == v { opp[1] } else { opp[0] };
                if !cur.neighbors(v).ok()?.contains(&z) {
                    return edge_flip(&cur, edge);
                }
            }
            None
        });
        if let Some(next) = raised {
            cur = next;
            continue;
        }
        // Absorb a neighbor whose contraction is legal.
        let absorbed = cur
            .neighbors(v)
            .unwrap()
            .iter()
            .copied()
            .collect::<Vec<_>>()
            .into_iter()
            .find_map(|w| contract_edge(&cur, v, w));
        if let Some(next) = absorbed {
            cur = next;
            continue;
        }
        // Shake with a random flip and retry.
        let edges: Vec<Face> = cur.faces_with_card(2).to_vec();
        let mut flipped = None;
        for _ in 0..edges.len() {
            let e = &edges[rng.gen_range(0..edges.len())];
            if let Some(next) = edge_flip(&cur, e) {
                flipped = Some(next);
                break;
            }
        }
        match flipped {
            Some(next) => cur = next,
            None => {
                return Err(Error::SearchExhausted(
                    "no legal flip while hunting for a cone point".into(),
                ))
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no cone point after {budget} moves"
    )))
}

/// A triangulation of the requested surface class that has at least one
/// graph cone point. Small classes are hard-coded; larger ones start from
/// connected sums of the projective plane and torus, then hill-climb.
pub fn cone_point_surface(b1: u32, orientable: bool, seed: u64) -> Result<SimplicialComplex> {
    if orientable && b1 % 2 == 1 {
        return Err(Error::BadParameters(format!(
            "orientable surfaces have even b1, got {b1}"
        )));
    }
    match (b1, orientable) {
        (0, true) => return Ok(boundary_simplex(3)),
        (0, false) => {
            return Err(Error::BadParameters(
                "b1 = 0 forces the orientable sphere".into(),
            ))
        }
        (1, false) => return Ok(rp2_6()),
        (2, true) => return Ok(torus_7()),
        _ => {}
    }
    let pieces: Vec<SimplicialComplex> = if orientable {
        (0..b1 / 2).map(|_| torus_7()).collect()
    } else {
        (0..b1).map(|_| rp2_6()).collect()
    };
    let mut cur = pieces[0].clone();
    for piece in &pieces[1..] {
        let source = cur.facets()[0].clone();
        let target = piece.facets()[0].clone();
        let pairs: Vec<(VertexId, VertexId)> = source
            .vertices()
            .iter()
            .zip(target.vertices())
            .map(|(a, b)| (*a, *b))
            .collect();
        cur = ops::connected_sum(&cur, piece, &source, &target, &pairs, None)?.complex;
    }
    let found = make_cone_point(&cur, seed, 10_000)?;
    let class = surface_classify(&found)?;
    assert_eq!(
        class,
        SurfaceClass { b1, orientable },
        "flip search must preserve the surface class"
    );
    assert!(!found.graph_cone_points().is_empty());
    Ok(found)
}

/// Subdivides facets containing `apex` until an admissible vertex folding at
/// `apex` whose facets avoid `avoid` and whose output satisfies `accept`
/// exists, then performs it. Returns the folded complex and the replayable
/// records (subdivisions first, fold last).
///
/// Subdivisions alternate between two nested chains dug into the star of the
/// apex: each step subdivides the facet spanned by the apex and the chain's
/// most recent fresh vertices. Fresh vertices three levels deep into a chain
/// have no neighbors outside the chain besides the apex, so two chains of
/// depth five always provide an admissible facet pair; scattered shallow
/// subdivisions never do, because first-level fresh vertices keep shared
/// neighbors on the original vertex set.
pub(crate) fn vertex_fold_with_room(
    k: &SimplicialComplex,
    apex: VertexId,
    avoid: &BTreeSet<VertexId>,
    accept: &dyn Fn(&SimplicialComplex) -> bool,
    subdivision_budget: usize,
) -> Result<(SimplicialComplex, Vec<ConstructionRecord>)> {
    let mut cur = k.clone();
    let mut records = Vec::new();
    let mut chains: [Vec<VertexId>; 2] = [Vec::new(), Vec::new()];
    for attempt in 0..=subdivision_budget {
        for psi in ops::admissible_bijections(&cur, &FoldKind::VertexFolding(apex)) {
            if psi.kind != FoldKind::VertexFolding(apex) {
                continue;
            }
            let touches_avoided = psi
                .source
                .vertices()
                .iter()
                .chain(psi.target.vertices())
                .any(|v| avoid.contains(v));
            if touches_avoided {
                continue;
            }
            let folded = ops::vertex_fold(&cur, &psi)?;
            if accept(&folded.complex) {
                records.push(folded.record);
                return Ok((folded.complex, records));
            }
        }
        if attempt == subdivision_budget {
            break;
        }
        let c = attempt % 2;
        let other: BTreeSet<VertexId> = chains[1 - c].iter().copied().collect();
        let chain_tail = chains[c].last().copied();
        let facet = cur
            .facets()
            .iter()
            .filter(|f| {
                f.contains(apex)
                    && !f
                        .vertices()
                        .iter()
                        .any(|v| avoid.contains(v) || other.contains(v))
                    && chain_tail.is_none_or(|w| f.contains(w))
            })
            .max_by_key(|f| {
                let depth = f
                    .vertices()
                    .iter()
                    .filter(|v| chains[c].contains(v))
                    .count();
                (depth, std::cmp::Reverse((*f).clone()))
            })
            .cloned()
            .ok_or_else(|| {
                Error::SearchExhausted("no facet at the apex is free for subdivision".into())
            })?;
        let sub = ops::facet_subdivide(&cur, &facet, None)?;
        chains[c].push(VertexId(sub.record.fresh["w"]));
        records.push(sub.record);
        cur = sub.complex;
    }
    Err(Error::SearchExhausted(format!(
        "no acceptable vertex folding at {apex} within {subdivision_budget} subdivisions"
    )))
}

/// Search result for the edge-folding golden instance: a stacked 3-sphere
/// with a facet pair admitting both pairings, one normal and one pinching.
pub(crate) struct EdgeFoldGolden {
    pub base: SimplicialComplex,
    pub normal: FacetBijection,
    pub pinching: FacetBijection,
}

pub(crate) fn edge_fold_golden() -> EdgeFoldGolden {
    for n in 7..=14 {
        for seed in 0..8 {
            let Ok(base) = stacked_sphere(3, n, seed) else {
                continue;
            };
            let all = ops::admissible_bijections(
                &base,
                &FoldKind::EdgeFolding(VertexId(0), VertexId(1)),
            );
            // Group the two pairings of each facet pair.
            for psi in &all {
                let mate = all.iter().find(|other| {
                    other.source == psi.source
                        && other.target == psi.target
                        && other.pairs != psi.pairs
                });
                let Some(mate) = mate else { continue };
                let f1 = ops::edge_fold(&base, psi).unwrap();
                let f2 = ops::edge_fold(&base, mate).unwrap();
                match (f1.normality, f2.normality) {
                    (NormalityFlag::Normal, NormalityFlag::NonNormal) => {
                        return EdgeFoldGolden {
                            base,
                            normal: psi.clone(),
                            pinching: mate.clone(),
                        }
                    }
                    (NormalityFlag::NonNormal, NormalityFlag::Normal) => {
                        return EdgeFoldGolden {
                            base,
                            normal: mate.clone(),
                            pinching: psi.clone(),
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    unreachable!("edge-folding golden search is deterministic and known to succeed")
}

/// A stacked 3-sphere with a plain admissible facet bijection, together with
/// that bijection. Two nested subdivision chains are dug into the boundary
/// 4-simplex; the deep facets of the two chains end up at mutual edge
/// distance three. Random stacked spheres essentially never contain such a
/// pair, because the original vertices act as short-path hubs.
pub(crate) fn plain_admissible_golden() -> (SimplicialComplex, FacetBijection) {
    let mut cur = boundary_simplex(4);
    let mut chains: [Vec<VertexId>; 2] = [Vec::new(), Vec::new()];
    for step in 0..24 {
        if step >= 10 {
            if let Some(psi) = ops::admissible_bijections(&cur, &FoldKind::Plain)
                .into_iter()
                .next()
            {
                return (cur, psi);
            }
        }
        let c = step % 2;
        let other: BTreeSet<VertexId> = chains[1 - c].iter().copied().collect();
        let tail = chains[c].last().copied();
        let facet = cur
            .facets()
            .iter()
            .filter(|f| {
                !f.vertices().iter().any(|v| other.contains(v))
                    && tail.is_none_or(|w| f.contains(w))
            })
            .max_by_key(|f| {
                let depth = f
                    .vertices()
                    .iter()
                    .filter(|v| chains[c].contains(v))
                    .count();
                (depth, std::cmp::Reverse((*f).clone()))
            })
            .cloned()
            .expect("a chain facet is always available in a stacked sphere");
        let sub = ops::facet_subdivide(&cur, &facet, None).unwrap();
        chains[c].push(VertexId(sub.record.fresh["w"]));
        cur = sub.complex;
    }
    unreachable!("plain-admissibility golden search is deterministic and known to succeed")
}

fn rp2_class() -> SurfaceClass {
    SurfaceClass {
        b1: 1,
        orientable: false,
    }
}

/// The search-built golden instances exercising the identification
/// operations, each with its replayable record.
pub fn golden_instances() -> Vec<CatalogEntry> {
    let mut out = Vec::new();

    // Edge-folded stacked 3-sphere: g2 = 3, singularities two projective planes.
    let golden = edge_fold_golden();
    let folded = ops::edge_fold(&golden.base, &golden.normal).unwrap();
    assert_eq!(folded.normality, NormalityFlag::Normal);
    let record = folded
        .record
        .clone()
        .with_inputs(vec![ConstructionRecord::leaf(&golden.base, None)]);
    let f = folded.complex.face_vectors().f.clone();
    out.push(CatalogEntry {
        name: "edge_folded_stacked_sphere".into(),
        complex: folded.complex,
        expected_f: f,
        expected_g2: 3,
        expected_singularities: SingularityMultiset::new(vec![rp2_class(), rp2_class()]),
        record: Some(record),
    });

    // Vertex-folded suspension: fold the suspension of the projective plane
    // at one suspension point, subdividing until a folding fits.
    let sus = ops::one_vertex_suspension(&rp2_6(), VertexId(0), None).unwrap();
    let apex = VertexId(sus.record.fresh["x"]);
    let other_pole = VertexId(sus.record.fresh["y"]);
    let avoid: BTreeSet<VertexId> = [other_pole].into_iter().collect();
    let (folded, mut records) =
        vertex_fold_with_room(&sus.complex, apex, &avoid, &|_| true, 20).unwrap();
    let mut node = records.pop().unwrap();
    let mut child = sus
        .record
        .clone()
        .with_inputs(vec![ConstructionRecord::seed("rp2_6", None)]);
    for rec in records {
        child = rec.with_inputs(vec![child]);
    }
    node = node.with_inputs(vec![child]);
    let f = folded.face_vectors().f.clone();
    assert_eq!(folded.g2(), 9);
    out.push(CatalogEntry {
        name: "vertex_folded_suspension".into(),
        complex: folded,
        expected_f: f,
        expected_g2: 9,
        expected_singularities: SingularityMultiset::new(vec![
            rp2_class(),
            SurfaceClass {
                b1: 3,
                orientable: false,
            },
        ]),
        record: Some(node),
    });

    // Handle addition on a stacked sphere: a 3-manifold with g2 = 10.
    let (base, psi) = plain_admissible_golden();
    let handled = ops::handle_addition(&base, &psi).unwrap();
    let record = handled
        .record
        .clone()
        .with_inputs(vec![ConstructionRecord::leaf(&base, None)]);
    let f = handled.complex.face_vectors().f.clone();
    out.push(CatalogEntry {
        name: "handle_addition_manifold".into(),
        complex: handled.complex,
        expected_f: f,
        expected_g2: 10,
        expected_singularities: SingularityMultiset::default(),
        record: Some(record),
    });

    // The base of the handle addition, kept as the distance-three witness.
    let mut witness = ConstructionRecord::new("handle_addition");
    witness.bijection = Some(psi.pairs.iter().map(|(s, t)| (s.0, t.0)).collect());
    let f = base.face_vectors().f.clone();
    out.push(CatalogEntry {
        name: "plain_admissible_stacked_sphere".into(),
        complex: base,
        expected_f: f,
        expected_g2: 0,
        expected_singularities: SingularityMultiset::default(),
        record: Some(witness),
    });

    out
}

/// The fixed catalog complexes used by the cross-module suites.
pub fn catalog_complexes() -> Vec<CatalogEntry> {
    let mut out = vec![
        CatalogEntry {
            name: "boundary_simplex_3".into(),
            complex: boundary_simplex(3),
            expected_f: vec![1, 4, 6, 4],
            expected_g2: 0,
            expected_singularities: SingularityMultiset::default(),
            record: None,
        },
        CatalogEntry {
            name: "boundary_simplex_4".into(),
            complex: boundary_simplex(4),
            expected_f: vec![1, 5, 10, 10, 5],
            expected_g2: 0,
            expected_singularities: SingularityMultiset::default(),
            record: None,
        },
        CatalogEntry {
            name: "rp2_6".into(),
            complex: rp2_6(),
            expected_f: vec![1, 6, 15, 10],
            expected_g2: 3,
            expected_singularities: SingularityMultiset::default(),
            record: None,
        },
        CatalogEntry {
            name: "torus_7".into(),
            complex: torus_7(),
            expected_f: vec![1, 7, 21, 14],
            expected_g2: 6,
            expected_singularities: SingularityMultiset::default(),
            record: None,
        },
        CatalogEntry {
            name: "stacked_2_8".into(),
            complex: stacked_sphere(2, 8, 1).unwrap(),
            expected_f: vec![1, 8, 18, 12],
            expected_g2: 0,
            expected_singularities: SingularityMultiset::default(),
            record: None,
        },
        CatalogEntry {
            name: "stacked_3_8".into(),
            complex: stacked_sphere(3, 8, 1).unwrap(),
            expected_f: vec![1, 8, 22, 28, 14],
            expected_g2: 0,
            expected_singularities: SingularityMultiset::default(),
            record: None,
        },
        CatalogEntry {
            name: "stacked_3_12".into(),
            complex: stacked_sphere(3, 12, 2).unwrap(),
            expected_f: vec![1, 12, 38, 52, 26],
            expected_g2: 0,
            expected_singularities: SingularityMultiset::default(),
            record: None,
        },
        CatalogEntry {
            name: "cyclic_4_7".into(),
            complex: cyclic_polytope_boundary(4, 7).unwrap(),
            expected_f: vec![1, 7, 21, 28, 14],
            expected_g2: 3,
            expected_singularities: SingularityMultiset::default(),
            record: None,
        },
    ];

    let sus = ops::one_vertex_suspension(&rp2_6(), VertexId(0), None).unwrap();
    out.push(CatalogEntry {
        name: "suspension_rp2_6".into(),
        complex: sus.complex,
        expected_f: vec![1, 7, 21, 30, 15],
        expected_g2: 3,
        expected_singularities: SingularityMultiset::new(vec![rp2_class(), rp2_class()]),
        record: Some(
            sus.record
                .with_inputs(vec![ConstructionRecord::seed("rp2_6", None)]),
        ),
    });

    out.extend(golden_instances());
    out
}

/// Resolves a generator by name, as used by trace seed leaves and the CLI.
///
/// Accepted names: `rp2_6`, `torus_7`, `boundary_simplex_<n>`,
/// `stacked_sphere_<d>_<n>`, `cyclic_<d>_<n>`,
/// `cone_point_surface_<b1>_<or|non>`, plus every catalog entry name.
pub fn generate(name: &str, seed: u64) -> Result<SimplicialComplex> {
    match name {
        "rp2_6" => return Ok(rp2_6()),
        "torus_7" => return Ok(torus_7()),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("boundary_simplex_") {
        let n: u32 = rest
            .parse()
            .map_err(|_| Error::BadParameters(format!("bad simplex dimension in {name:?}")))?;
        if n == 0 {
            return Err(Error::BadParameters("simplex dimension must be positive".into()));
        }
        return Ok(boundary_simplex(n));
    }
    if let Some(rest) = name.strip_prefix("stacked_sphere_") {
        let (d, n) = parse_two(rest, name)?;
        return stacked_sphere(d, n, seed);
    }
    if let Some(rest) = name.strip_prefix("cyclic_") {
        let (d, n) = parse_two(rest, name)?;
        return cyclic_polytope_boundary(d, n);
    }
    if let Some(rest) = name.strip_prefix("cone_point_surface_") {
        let mut parts = rest.split('_');
        let b1: u32 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::BadParameters(format!("bad b1 in {name:?}")))?;
        let orientable = match parts.next() {
            Some("or") => true,
            Some("non") => false,
            _ => {
                return Err(Error::BadParameters(format!(
                    "orientability must be 'or' or 'non' in {name:?}"
                )))
            }
        };
        return cone_point_surface(b1, orientable, seed);
    }
    for entry in catalog_complexes() {
        if entry.name == name {
            return Ok(entry.complex);
        }
    }
    Err(Error::BadParameters(format!("unknown generator {name:?}")))
}

fn parse_two(rest: &str, name: &str) -> Result<(u32, u32)> {
    let mut parts = rest.split('_');
    let a = parts.next().and_then(|s| s.parse().ok());
    let b = parts.next().and_then(|s| s.parse().ok());
    match (a, b, parts.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(Error::BadParameters(format!(
            "expected two integer parameters in {name:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis;
    use crate::trace;

    #[test]
    fn stacked_sphere_counts() {
        for k in 0..5 {
            let s = stacked_sphere(3, 5 + k, 42).unwrap();
            assert_eq!(s.vertex_count() as u32, 5 + k);
            assert_eq!(s.g2(), 0);
        }
        assert!(stacked_sphere(3, 4, 0).is_err());
    }

    #[test]
    fn rp2_is_the_projective_plane() {
        let k = rp2_6();
        assert!(analysis::is_normal(&k).unwrap());
        assert_eq!(
            analysis::surface_classify(&k).unwrap(),
            SurfaceClass {
                b1: 1,
                orientable: false
            }
        );
        assert_eq!(k.g2(), 3);
    }

    #[test]
    fn torus_7_is_the_two_neighborly_torus() {
        let k = torus_7();
        assert_eq!(
            analysis::surface_classify(&k).unwrap(),
            SurfaceClass {
                b1: 2,
                orientable: true
            }
        );
        assert_eq!(k.g2(), 6);
        assert_eq!(k.graph_cone_points().len(), 7);
        assert_eq!(k.face_vectors().f[2], 21);
    }

    #[test]
    fn cyclic_4_7_is_a_two_neighborly_sphere() {
        let k = cyclic_polytope_boundary(4, 7).unwrap();
        assert!(analysis::is_normal(&k).unwrap());
        assert_eq!(k.face_vectors().f, vec![1, 7, 21, 28, 14]);
        assert_eq!(k.g2(), 3);
        assert!(analysis::singularity_multiset(&k).unwrap().is_empty());
    }

    #[test]
    fn cone_point_surfaces_hit_their_class() {
        let cases = [(0, true), (1, false), (2, true), (2, false), (3, false)];
        for (b1, orientable) in cases {
            let k = cone_point_surface(b1, orientable, 17).unwrap();
            assert_eq!(
                analysis::surface_classify(&k).unwrap(),
                SurfaceClass { b1, orientable }
            );
            assert!(!k.graph_cone_points().is_empty());
        }
        assert!(cone_point_surface(1, true, 0).is_err());
        assert!(cone_point_surface(0, false, 0).is_err());
    }

    #[test]
    fn golden_entries_match_recomputation() {
        for entry in catalog_complexes() {
            let report = entry.complex.face_vectors();
            assert_eq!(report.f, entry.expected_f, "f-vector of {}", entry.name);
            assert_eq!(report.g2, entry.expected_g2, "g2 of {}", entry.name);
            if entry.complex.dim() == 3 && analysis::is_normal(&entry.complex).unwrap_or(false) {
                assert_eq!(
                    analysis::singularity_multiset(&entry.complex).unwrap(),
                    entry.expected_singularities,
                    "singularities of {}",
                    entry.name
                );
            }
            if let Some(record) = &entry.record {
                if !record.inputs.is_empty() {
                    assert_eq!(
                        trace::replay(record).unwrap(),
                        entry.complex,
                        "record of {} must replay exactly",
                        entry.name
                    );
                }
            }
        }
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(
            stacked_sphere(3, 10, 9).unwrap(),
            stacked_sphere(3, 10, 9).unwrap()
        );
        assert_eq!(generate("rp2_6", 0).unwrap(), rp2_6());
        assert_eq!(
            generate("stacked_sphere_3_9", 4).unwrap(),
            stacked_sphere(3, 9, 4).unwrap()
        );
        assert!(generate("no_such_thing", 0).is_err());
    }

    #[test]
    fn reversed_pairing_of_edge_fold_golden_pinches() {
        let golden = edge_fold_golden();
        let normal = ops::edge_fold(&golden.base, &golden.normal).unwrap();
        assert_eq!(normal.normality, NormalityFlag::Normal);
        assert!(analysis::is_normal(&normal.complex).unwrap());
        let pinched = ops::edge_fold(&golden.base, &golden.pinching).unwrap();
        assert_eq!(pinched.normality, NormalityFlag::NonNormal);
        assert!(!analysis::is_normal(&pinched.complex).unwrap());
    }
}
