//! Generic rigidity over exact arithmetic.
//!
//! Ranks of rigidity matrices are computed at random integer configurations
//! with fraction-free (Bareiss) elimination over big integers, so a reported
//! rank is exact for that configuration and a lower bound for the generic
//! rank; taking the maximum over trials is therefore sound. Stress bases are
//! computed over exact rationals and scaled to primitive integer vectors.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis;
use crate::complex::{binomial, Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};

pub const DEFAULT_TRIALS: u32 = 3;
pub const DEFAULT_COORDINATE_BOUND: i64 = 1_000_000;

/// A finite simple graph with sorted vertex and edge lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId)>,
}

impl Graph {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Self {
        let mut vs: BTreeSet<VertexId> = vertices.into_iter().collect();
        let es: BTreeSet<(VertexId, VertexId)> = edges
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        for &(a, b) in &es {
            vs.insert(a);
            vs.insert(b);
        }
        Graph {
            vertices: vs.into_iter().collect(),
            edges: es.into_iter().collect(),
        }
    }

    pub fn from_complex(k: &SimplicialComplex) -> Self {
        Graph::new(
            k.vertices(),
            k.faces_with_card(2)
                .iter()
                .map(|e| (e.vertices()[0], e.vertices()[1])),
        )
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn union(&self, other: &Graph) -> Graph {
        Graph::new(
            self.vertices.iter().chain(&other.vertices).copied(),
            self.edges.iter().chain(&other.edges).copied(),
        )
    }

    pub fn intersection(&self, other: &Graph) -> Graph {
        let vs: Vec<VertexId> = self
            .vertices
            .iter()
            .filter(|v| other.vertices.binary_search(v).is_ok())
            .copied()
            .collect();
        let es: Vec<(VertexId, VertexId)> = self
            .edges
            .iter()
            .filter(|e| other.edges.binary_search(e).is_ok())
            .copied()
            .collect();
        Graph::new(vs, es)
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.edges.binary_search(&key).is_ok()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertices.len();
        self.edges.len() == n * (n - 1) / 2
    }

    /// Whether some `d` vertices span a complete subgraph.
    pub fn contains_complete_subgraph(&self, d: usize) -> bool {
        if self.vertices.len() < d {
            return false;
        }
        self.vertices
            .iter()
            .copied()
            .combinations(d)
            .any(|combo| {
                combo
                    .iter()
                    .tuple_combinations()
                    .all(|(&a, &b)| self.has_edge(a, b))
            })
    }

    /// Extends the graph by one edge.
    pub fn with_edge(&self, a: VertexId, b: VertexId) -> Graph {
        Graph::new(
            self.vertices.iter().copied(),
            self.edges.iter().copied().chain([(a, b)]),
        )
    }
}

/// An integer point configuration for the vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    pub dim: usize,
    pub coords: BTreeMap<VertexId, Vec<i64>>,
    pub seed: u64,
}

impl Configuration {
    pub fn random(
        vertices: &[VertexId],
        dim: usize,
        bound: i64,
        seed: u64,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let coords = vertices
            .iter()
            .map(|&v| {
                let point = (0..dim).map(|_| rng.gen_range(-bound..=bound)).collect();
                (v, point)
            })
            .collect();
        Configuration { dim, coords, seed }
    }
}

/// The rigidity matrix: one row per edge, `dim` columns per vertex. The row
/// of edge `uv` carries `f(u) - f(v)` in `u`'s block and the negative in
/// `v`'s block; stresses are exactly the left null space.
pub fn rigidity_matrix(graph: &Graph, cfg: &Configuration) -> Result<Vec<Vec<BigInt>>> {
    let index: BTreeMap<VertexId, usize> = graph
        .vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    for &v in &graph.vertices {
        if !cfg.coords.contains_key(&v) {
            return Err(Error::MissingCoordinate(v.0));
        }
    }
    let d = cfg.dim;
    let cols = d * graph.vertices.len();
    let mut m = Vec::with_capacity(graph.edges.len());
    for &(u, v) in &graph.edges {
        let mut row = vec![BigInt::zero(); cols];
        let (pu, pv) = (&cfg.coords[&u], &cfg.coords[&v]);
        for c in 0..d {
            let diff = BigInt::from(pu[c] - pv[c]);
            row[index[&u] * d + c] = diff.clone();
            row[index[&v] * d + c] = -diff;
        }
        m.push(row);
    }
    Ok(m)
}

/// Fraction-free Gaussian elimination; exact rank over the rationals.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot_row) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row_data = &top[rank];
        for row in rest.iter_mut() {
            if row[col].is_zero() {
                // Still scale to keep the Bareiss invariant exact.
                for j in (col + 1)..cols {
                    let val = &pivot_row_data[col] * &row[j];
                    row[j] = val / &prev;
                }
                continue;
            }
            for j in (col + 1)..cols {
                let val = &pivot_row_data[col] * &row[j] - &row[col] * &pivot_row_data[j];
                row[j] = val / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Basis of the left null space `{w : wᵀ M = 0}` as primitive integer
/// vectors, via rational row reduction of the transpose.
pub fn left_kernel_basis(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    // a = transpose(m): unknowns are the row weights of m.
    let mut a: Vec<Vec<BigRational>> = (0..cols)
        .map(|c| {
            (0..rows)
                .map(|r| BigRational::from_integer(m[r][c].clone()))
                .collect()
        })
        .collect();
    let n = rows;
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x /= inv.clone();
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in 0..n {
                    let sub = &factor * &a[r][j];
                    a[i][j] -= sub;
                }
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut vec_q = vec![BigRational::zero(); n];
        vec_q[free] = BigRational::one();
        for c in 0..n {
            if let Some(pr) = pivot_of_col[c] {
                vec_q[c] = -a[pr][free].clone();
            }
        }
        // Scale to a primitive integer vector.
        let mut denom_lcm = BigInt::one();
        for q in &vec_q {
            denom_lcm = num_integer::lcm(denom_lcm, q.denom().clone());
        }
        let mut ints: Vec<BigInt> = vec_q
            .iter()
            .map(|q| q.numer() * (&denom_lcm / q.denom()))
            .collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = num_integer::gcd(g, x.clone());
        }
        if !g.is_zero() && !g.is_one() {
            for x in ints.iter_mut() {
                *x = &*x / &g;
            }
        }
        basis.push(ints);
    }
    basis
}

/// Maximum rank and stress-space dimension over random integer
/// configurations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StressSpaceReport {
    pub ambient_d: usize,
    pub edge_count: usize,
    pub matrix_rank: usize,
    pub stress_dim: usize,
    pub trials: u32,
    pub is_generically_rigid: bool,
    /// Per-trial ranks; a disagreement flags an unlucky non-generic draw.
    pub trial_ranks: Vec<usize>,
}

impl StressSpaceReport {
    pub fn trials_disagree(&self) -> bool {
        self.trial_ranks.iter().any(|&r| r != self.matrix_rank)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RigidityOptions {
    pub trials: u32,
    pub seed: u64,
    pub coordinate_bound: i64,
}

impl Default for RigidityOptions {
    fn default() -> Self {
        RigidityOptions {
            trials: DEFAULT_TRIALS,
            seed: 0,
            coordinate_bound: DEFAULT_COORDINATE_BOUND,
        }
    }
}

/// Draws `trials` random configurations in the given ambient dimension and
/// reports the maximum exact rank. Exact ranks never exceed the generic
/// rank, so the maximum is a sound, reproducible lower bound for it.
pub fn stress_dimension(graph: &Graph, ambient_d: usize, opts: RigidityOptions) -> StressSpaceReport {
    assert!(ambient_d >= 1, "ambient dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let trials = opts.trials.max(1);
    let mut trial_ranks = Vec::new();
    for _ in 0..trials {
        let cfg = Configuration::random(
            &graph.vertices,
            ambient_d,
            opts.coordinate_bound,
            opts.seed,
            &mut rng,
        );
        let m = rigidity_matrix(graph, &cfg).expect("random configuration covers all vertices");
        trial_ranks.push(bareiss_rank(m));
    }
    let matrix_rank = *trial_ranks.iter().max().unwrap();
    let n = graph.vertices.len();
    let is_generically_rigid = if n >= ambient_d + 1 {
        matrix_rank as i64 == ambient_d as i64 * n as i64 - binomial(ambient_d as i64 + 1, 2)
    } else {
        graph.is_complete()
    };
    StressSpaceReport {
        ambient_d,
        edge_count: graph.edges.len(),
        matrix_rank,
        stress_dim: graph.edges.len() - matrix_rank,
        trials,
        is_generically_rigid,
        trial_ranks,
    }
}

/// Exact stress basis at one random configuration; every vector is verified
/// against the stress equation before being returned.
pub fn stress_basis(
    graph: &Graph,
    ambient_d: usize,
    opts: RigidityOptions,
) -> (Configuration, Vec<Vec<BigInt>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let cfg = Configuration::random(
        &graph.vertices,
        ambient_d,
        opts.coordinate_bound,
        opts.seed,
        &mut rng,
    );
    let m = rigidity_matrix(graph, &cfg).expect("random configuration covers all vertices");
    let basis = left_kernel_basis(&m);
    for stress in &basis {
        assert!(
            stress_equation_holds(graph, &cfg, stress),
            "computed stress must satisfy the equilibrium equation exactly"
        );
    }
    (cfg, basis)
}

/// Checks `Σ_{uv ∈ E} ω(uv) (f(v) - f(u)) = 0` at every vertex, exactly.
pub fn stress_equation_holds(graph: &Graph, cfg: &Configuration, weights: &[BigInt]) -> bool {
    if weights.len() != graph.edges.len() {
        return false;
    }
    let mut balance: BTreeMap<VertexId, Vec<BigInt>> = graph
        .vertices
        .iter()
        .map(|&v| (v, vec![BigInt::zero(); cfg.dim]))
        .collect();
    for (w, &(u, v)) in weights.iter().zip(&graph.edges) {
        let (pu, pv) = (&cfg.coords[&u], &cfg.coords[&v]);
        for c in 0..cfg.dim {
            let diff = BigInt::from(pu[c] - pv[c]);
            let contrib = w * &diff;
            balance.get_mut(&u).unwrap()[c] += &contrib;
            balance.get_mut(&v).unwrap()[c] -= &contrib;
        }
    }
    balance.values().all(|b| b.iter().all(|x| x.is_zero()))
}

/// Verifies that the stress-space dimension of the 1-skeleton in ambient
/// dimension `d + 1` equals `g2` and the skeleton is generically
/// `(d+1)`-rigid.
pub fn verify_g2_stress(k: &SimplicialComplex, opts: RigidityOptions) -> Result<bool> {
    if !analysis::is_normal(k)? {
        return Err(Error::NotNormal("rigidity check needs a normal input".into()));
    }
    let d = k.dim();
    assert!(d >= 2);
    let graph = Graph::from_complex(k);
    let report = stress_dimension(&graph, (d + 1) as usize, opts);
    Ok(report.is_generically_rigid && report.stress_dim as i64 == k.g2())
}

/// Union lemma: two generically d-rigid graphs sharing a complete graph on
/// `d` vertices have a generically d-rigid union.
pub fn check_union_lemma(g1: &Graph, g2: &Graph, d: usize, opts: RigidityOptions) -> Result<bool> {
    for (name, g) in [("first graph", g1), ("second graph", g2)] {
        if !stress_dimension(g, d, opts).is_generically_rigid {
            return Err(Error::HypothesisNotMet(format!(
                "{name} is not generically {d}-rigid"
            )));
        }
    }
    if !g1.intersection(g2).contains_complete_subgraph(d) {
        return Err(Error::HypothesisNotMet(format!(
            "intersection contains no complete graph on {d} vertices"
        )));
    }
    Ok(stress_dimension(&g1.union(g2), d, opts).is_generically_rigid)
}

/// Cone lemma: the cone over a generically d-rigid complex is
/// `(d+1)`-rigid, and when `g2 > 0` some stress touches the cone vertex.
pub fn check_cone_lemma(k: &SimplicialComplex, d: usize, opts: RigidityOptions) -> Result<bool> {
    let graph = Graph::from_complex(k);
    if !stress_dimension(&graph, d, opts).is_generically_rigid {
        return Err(Error::HypothesisNotMet(format!(
            "complex is not generically {d}-rigid"
        )));
    }
    let apex = VertexId(k.fresh_label());
    let cone = Graph::new(
        graph.vertices().iter().copied().chain([apex]),
        graph
            .edges()
            .iter()
            .copied()
            .chain(graph.vertices().iter().map(|&v| (v, apex))),
    );
    let report = stress_dimension(&cone, d + 1, opts);
    if !report.is_generically_rigid {
        return Ok(false);
    }
    if k.g2() > 0 {
        let (_, basis) = stress_basis(&cone, d + 1, opts);
        let apex_touched = basis.iter().any(|stress| {
            stress
                .iter()
                .zip(cone.edges())
                .any(|(w, &(a, b))| !w.is_zero() && (a == apex || b == apex))
        });
        return Ok(apex_touched);
    }
    Ok(true)
}

/// Relative lower bound at a face of codimension at least three:
/// `g2(K) >= g2(lk σ)`, and `g2(st σ) = g2(lk σ)`.
pub fn lower_bound_check(k: &SimplicialComplex, sigma: &Face) -> Result<bool> {
    if !analysis::is_normal(k)? {
        return Err(Error::NotNormal(
            "lower bound check needs a normal input".into(),
        ));
    }
    let codim = k.dim() - sigma.dim();
    if codim < 3 {
        return Err(Error::CodimTooSmall {
            face: format!("{sigma:?}"),
            codim,
        });
    }
    let link = k.link(sigma)?;
    let star = k.star(sigma)?;
    Ok(k.g2() >= link.g2() && star.g2() == link.g2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ops;

    fn opts(seed: u64) -> RigidityOptions {
        RigidityOptions {
            seed,
            ..RigidityOptions::default()
        }
    }

    #[test]
    fn tiny_graph_ranks() {
        let edge = Graph::new([], [(VertexId(0), VertexId(1))]);
        let report = stress_dimension(&edge, 1, opts(1));
        assert_eq!(report.matrix_rank, 1);
        assert_eq!(report.stress_dim, 0);

        let triangle = Graph::new(
            [],
            [
                (VertexId(0), VertexId(1)),
                (VertexId(1), VertexId(2)),
                (VertexId(0), VertexId(2)),
            ],
        );
        let report = stress_dimension(&triangle, 2, opts(1));
        assert_eq!(report.matrix_rank, 3);
        assert_eq!(report.stress_dim, 0);
        assert!(report.is_generically_rigid);

        let k4 = Graph::new(
            [],
            (0u32..4)
                .tuple_combinations()
                .map(|(a, b)| (VertexId(a), VertexId(b)))
                .collect::<Vec<_>>(),
        );
        let report = stress_dimension(&k4, 2, opts(1));
        assert_eq!(report.matrix_rank, 5);
        assert_eq!(report.stress_dim, 1);
    }

    #[test]
    fn catalog_ranks_match_expected() {
        let k = catalog::boundary_simplex(4);
        let report = stress_dimension(&Graph::from_complex(&k), 4, opts(7));
        assert_eq!(report.matrix_rank, 10);
        assert_eq!(report.stress_dim, 0);
        assert!(report.is_generically_rigid);

        let rp2 = catalog::rp2_6();
        let report = stress_dimension(&Graph::from_complex(&rp2), 3, opts(7));
        assert_eq!(report.matrix_rank, 12);
        assert_eq!(report.stress_dim, 3);

        let sus = ops::one_vertex_suspension(&rp2, VertexId(0), None)
            .unwrap()
            .complex;
        let report = stress_dimension(&Graph::from_complex(&sus), 4, opts(7));
        assert_eq!(report.edge_count, 21);
        assert_eq!(report.matrix_rank, 18);
        assert_eq!(report.stress_dim, 3);
    }

    #[test]
    fn stress_dimension_is_deterministic() {
        let g = Graph::from_complex(&catalog::rp2_6());
        assert_eq!(stress_dimension(&g, 3, opts(99)), stress_dimension(&g, 3, opts(99)));
    }

    #[test]
    fn verify_g2_for_small_complexes() {
        for k in [
            catalog::boundary_simplex(4),
            catalog::rp2_6(),
            catalog::cyclic_polytope_boundary(4, 7).unwrap(),
            catalog::stacked_sphere(3, 11, 5).unwrap(),
        ] {
            assert!(verify_g2_stress(&k, opts(3)).unwrap());
        }
        let solid = SimplicialComplex::from_facets([vec![0u32, 1, 2, 3]]).unwrap();
        assert!(verify_g2_stress(&solid, opts(3)).is_err());
    }

    #[test]
    fn union_lemma_cases() {
        // Two tetrahedron-boundary graphs sharing a triangle.
        let g1 = Graph::from_complex(&catalog::boundary_simplex(3));
        let shifted = catalog::boundary_simplex(3)
            .relabel(
                &[(3u32, 4u32)]
                    .into_iter()
                    .map(|(a, b)| (VertexId(a), VertexId(b)))
                    .collect(),
            )
            .unwrap();
        let g2 = Graph::from_complex(&shifted);
        assert!(check_union_lemma(&g1, &g2, 3, opts(5)).unwrap());

        let far = catalog::boundary_simplex(3)
            .relabel(
                &(0u32..4)
                    .map(|i| (VertexId(i), VertexId(i + 10)))
                    .collect(),
            )
            .unwrap();
        let disjoint = Graph::from_complex(&far);
        assert!(matches!(
            check_union_lemma(&g1, &disjoint, 3, opts(5)),
            Err(Error::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn cone_lemma_over_projective_plane() {
        assert!(check_cone_lemma(&catalog::rp2_6(), 3, opts(11)).unwrap());
        assert!(check_cone_lemma(&catalog::boundary_simplex(3), 3, opts(11)).unwrap());
    }

    #[test]
    fn lower_bound_examples() {
        let k = catalog::boundary_simplex(4);
        assert!(lower_bound_check(&k, &Face::new([0])).unwrap());
        assert!(matches!(
            lower_bound_check(&k, &Face::new([0, 1])),
            Err(Error::CodimTooSmall { .. })
        ));

        let sus = ops::one_vertex_suspension(&catalog::rp2_6(), VertexId(0), None).unwrap();
        let pole = VertexId(sus.record.fresh["x"]);
        let k = sus.complex;
        assert!(lower_bound_check(&k, &Face::from_vertex_set([pole])).unwrap());
        let link = k.link(&Face::from_vertex_set([pole])).unwrap();
        assert_eq!(link.g2(), k.g2());
    }

    #[test]
    fn rank_monotone_under_edge_insertion() {
        let rp2 = catalog::rp2_6();
        let g = Graph::from_complex(&rp2);
        let base = stress_dimension(&g, 3, opts(2));
        // rp2_6 is 2-neighborly, so grow a fresh vertex instead.
        let grown = Graph::new(
            g.vertices().iter().copied().chain([VertexId(50)]),
            g.edges()
                .iter()
                .copied()
                .chain([(VertexId(0), VertexId(50))]),
        );
        let more = stress_dimension(&grown, 3, opts(2));
        assert!(more.matrix_rank >= base.matrix_rank);

        // Adding one edge to a generically rigid graph adds one stress.
        let sphere = Graph::from_complex(&catalog::stacked_sphere(2, 7, 4).unwrap());
        let report = stress_dimension(&sphere, 3, opts(2));
        assert!(report.is_generically_rigid);
        let missing = sphere
            .vertices()
            .iter()
            .copied()
            .tuple_combinations()
            .find(|&(a, b)| !sphere.has_edge(a, b))
            .unwrap();
        let plus = sphere.with_edge(missing.0, missing.1);
        let report_plus = stress_dimension(&plus, 3, opts(2));
        assert_eq!(report_plus.stress_dim, report.stress_dim + 1);
    }

    #[test]
    fn stress_basis_is_exact() {
        let g = Graph::from_complex(&catalog::rp2_6());
        let (cfg, basis) = stress_basis(&g, 3, opts(21));
        assert_eq!(basis.len(), 3);
        for stress in &basis {
            assert!(stress_equation_holds(&g, &cfg, stress));
        }
    }
}
