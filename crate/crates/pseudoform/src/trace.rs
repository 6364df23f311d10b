//! Replayable construction traces.
//!
//! A trace is a tree of [`ConstructionRecord`] nodes. Leaves name a catalog
//! seed or carry an inline facet list; inner nodes name a construction from
//! the operation registry. Replaying the root reproduces the certified
//! complex facet for facet, because every record stores the fresh-vertex
//! assignments its operation made.
//!
//! Each construction sits behind the [`Construction`] trait and is registered
//! by name; `replay`, the CLI `apply` command and trace deserialization all
//! dispatch through the same registry.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::{catalog, ops};

/// One node of an operation trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionRecord {
    pub op: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<ConstructionRecord>,
    /// Seed leaves: generator name; inline leaves may carry a display name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Inline leaves: explicit facet list.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bijection: Option<Vec<(u32, u32)>>,
    /// Fresh-vertex assignments, e.g. `x`/`y` for suspensions, `w` for
    /// subdivisions, `r<old>` for collision relabelings in connected sums.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub fresh: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A full trace is just its root record.
pub type OperationTrace = ConstructionRecord;

impl ConstructionRecord {
    pub fn new(op: impl Into<String>) -> Self {
        ConstructionRecord {
            op: op.into(),
            inputs: Vec::new(),
            name: None,
            facets: None,
            vertex: None,
            face: None,
            bijection: None,
            fresh: BTreeMap::new(),
            seed: None,
        }
    }

    /// Leaf node carrying an explicit complex.
    pub fn leaf(complex: &SimplicialComplex, name: Option<String>) -> Self {
        let mut rec = ConstructionRecord::new("complex");
        rec.name = name;
        rec.facets = Some(complex.facets().iter().map(|f| f.labels()).collect());
        rec
    }

    /// Leaf node naming a catalog generator.
    pub fn seed(name: impl Into<String>, seed: Option<u64>) -> Self {
        let mut rec = ConstructionRecord::new("seed");
        rec.name = Some(name.into());
        rec.seed = seed;
        rec
    }

    pub fn with_inputs(mut self, inputs: Vec<ConstructionRecord>) -> Self {
        self.inputs = inputs;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedTrace(e.to_string()))
    }

    fn pairs(&self) -> Result<Vec<(VertexId, VertexId)>> {
        let raw = self
            .bijection
            .as_ref()
            .ok_or_else(|| Error::MalformedTrace(format!("{} needs a bijection", self.op)))?;
        Ok(raw.iter().map(|&(s, t)| (VertexId(s), VertexId(t))).collect())
    }

    /// Rebuilds the facet bijection of a fold/identification record; the
    /// facets are implicit in the pair endpoints.
    fn facet_bijection(&self, kind_hint: BijectionShape) -> Result<ops::FacetBijection> {
        let pairs = self.pairs()?;
        let source = Face::from_vertex_set(pairs.iter().map(|p| p.0));
        let target = Face::from_vertex_set(pairs.iter().map(|p| p.1));
        let fixed: Vec<VertexId> = pairs.iter().filter(|(s, t)| s == t).map(|(s, _)| *s).collect();
        let kind = match (kind_hint, fixed.len()) {
            (BijectionShape::Plain, 0) => ops::FoldKind::Plain,
            (BijectionShape::Vertex, 1) => ops::FoldKind::VertexFolding(fixed[0]),
            (BijectionShape::Edge, 2) => ops::FoldKind::EdgeFolding(fixed[0], fixed[1]),
            (shape, n) => {
                return Err(Error::MalformedTrace(format!(
                    "{:?} bijection cannot have {n} fixed vertices",
                    shape
                )))
            }
        };
        ops::FacetBijection::new(source, target, pairs, kind)
    }
}

#[derive(Clone, Copy, Debug)]
enum BijectionShape {
    Plain,
    Vertex,
    Edge,
}

/// One registered construction: replays a record against its input complexes.
pub trait Construction: Send + Sync {
    fn name(&self) -> &'static str;
    /// Number of child complexes the node consumes.
    fn arity(&self) -> usize;
    fn apply(
        &self,
        inputs: &[SimplicialComplex],
        record: &ConstructionRecord,
    ) -> Result<SimplicialComplex>;
}

struct ComplexLeaf;

impl Construction for ComplexLeaf {
    fn name(&self) -> &'static str {
        "complex"
    }
    fn arity(&self) -> usize {
        0
    }
    fn apply(&self, _: &[SimplicialComplex], rec: &ConstructionRecord) -> Result<SimplicialComplex> {
        let facets = rec
            .facets
            .as_ref()
            .ok_or_else(|| Error::MalformedTrace("complex leaf needs facets".into()))?;
        SimplicialComplex::from_facets(facets.iter().cloned())
    }
}

struct SeedLeaf;

impl Construction for SeedLeaf {
    fn name(&self) -> &'static str {
        "seed"
    }
    fn arity(&self) -> usize {
        0
    }
    fn apply(&self, _: &[SimplicialComplex], rec: &ConstructionRecord) -> Result<SimplicialComplex> {
        let name = rec
            .name
            .as_ref()
            .ok_or_else(|| Error::MalformedTrace("seed leaf needs a name".into()))?;
        catalog::generate(name, rec.seed.unwrap_or(0))
    }
}

struct Suspension;

impl Construction for Suspension {
    fn name(&self) -> &'static str {
        "one_vertex_suspension"
    }
    fn arity(&self) -> usize {
        1
    }
    fn apply(&self, inputs: &[SimplicialComplex], rec: &ConstructionRecord) -> Result<SimplicialComplex> {
        let v = rec
            .vertex
            .ok_or_else(|| Error::MalformedTrace("suspension needs a vertex".into()))?;
        let fresh = match (rec.fresh.get("x"), rec.fresh.get("y")) {
            (Some(&x), Some(&y)) => Some((x, y)),
            _ => None,
        };
        Ok(ops::one_vertex_suspension(&inputs[0], VertexId(v), fresh)?.complex)
    }
}

struct Subdivide;

impl Construction for Subdivide {
    fn name(&self) -> &'static str {
        "facet_subdivide"
    }
    fn arity(&self) -> usize {
        1
    }
    fn apply(&self, inputs: &[SimplicialComplex], rec: &ConstructionRecord) -> Result<SimplicialComplex> {
        let face = rec
            .face
            .as_ref()
            .ok_or_else(|| Error::MalformedTrace("subdivision needs a face".into()))?;
        let sigma = Face::try_new(face.iter().copied())?;
        Ok(ops::facet_subdivide(&inputs[0], &sigma, rec.fresh.get("w").copied())?.complex)
    }
}

struct Handle;

impl Construction for Handle {
    fn name(&self) -> &'static str {
        "handle_addition"
    }
    fn arity(&self) -> usize {
        1
    }
    fn apply(&self, inputs: &[SimplicialComplex], rec: &ConstructionRecord) -> Result<SimplicialComplex> {
        let psi = rec.facet_bijection(BijectionShape::Plain)?;
        Ok(ops::handle_addition(&inputs[0], &psi)?.complex)
    }
}

struct Sum;

impl Construction for Sum {
    fn name(&self) -> &'static str {
        "connected_sum"
    }
    fn arity(&self) -> usize {
        2
    }
    fn apply(&self, inputs: &[SimplicialComplex], rec: &ConstructionRecord) -> Result<SimplicialComplex> {
        let pairs = rec.pairs()?;
        let source = Face::from_vertex_set(pairs.iter().map(|p| p.0));
        let target = Face::from_vertex_set(pairs.iter().map(|p| p.1));
        let mut relabel: BTreeMap<u32, u32> = BTreeMap::new();
        for (key, &to) in &rec.fresh {
            if let Some(old) = key.strip_prefix('r') {
                let from: u32 = old
                    .parse()
                    .map_err(|_| Error::MalformedTrace(format!("bad relabel key {key}")))?;
                relabel.insert(from, to);
            }
        }
        let relabel_opt = if relabel.is_empty() { None } else { Some(&relabel) };
        Ok(ops::connected_sum(&inputs[0], &inputs[1], &source, &target, &pairs, relabel_opt)?
            .complex)
    }
}

struct VertexFold;

impl Construction for VertexFold {
    fn name(&self) -> &'static str {
        "vertex_fold"
    }
    fn arity(&self) -> usize {
        1
    }
    fn apply(&self, inputs: &[SimplicialComplex], rec: &ConstructionRecord) -> Result<SimplicialComplex> {
        let psi = rec.facet_bijection(BijectionShape::Vertex)?;
        Ok(ops::vertex_fold(&inputs[0], &psi)?.complex)
    }
}

struct EdgeFold;

impl Construction for EdgeFold {
    fn name(&self) -> &'static str {
        "edge_fold"
    }
    fn arity(&self) -> usize {
        1
    }
    fn apply(&self, inputs: &[SimplicialComplex], rec: &ConstructionRecord) -> Result<SimplicialComplex> {
        let psi = rec.facet_bijection(BijectionShape::Edge)?;
        Ok(ops::edge_fold(&inputs[0], &psi)?.complex)
    }
}

/// Name-indexed registry of all constructions.
pub fn registry() -> &'static BTreeMap<&'static str, Box<dyn Construction>> {
    static REGISTRY: OnceLock<BTreeMap<&'static str, Box<dyn Construction>>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let entries: Vec<Box<dyn Construction>> = vec![
            Box::new(ComplexLeaf),
            Box::new(SeedLeaf),
            Box::new(Suspension),
            Box::new(Subdivide),
            Box::new(Handle),
            Box::new(Sum),
            Box::new(VertexFold),
            Box::new(EdgeFold),
        ];
        entries.into_iter().map(|c| (c.name(), c)).collect()
    })
}

pub fn lookup(name: &str) -> Result<&'static dyn Construction> {
    registry()
        .get(name)
        .map(|b| b.as_ref())
        .ok_or_else(|| Error::UnknownOperation(name.to_string()))
}

/// Replays a trace bottom-up through the registry.
pub fn replay(trace: &ConstructionRecord) -> Result<SimplicialComplex> {
    let op = lookup(&trace.op)?;
    if trace.inputs.len() != op.arity() {
        return Err(Error::MalformedTrace(format!(
            "{} expects {} inputs, trace has {}",
            trace.op,
            op.arity(),
            trace.inputs.len()
        )));
    }
    let inputs: Vec<SimplicialComplex> = trace
        .inputs
        .iter()
        .map(replay)
        .collect::<Result<Vec<_>>>()?;
    op.apply(&inputs, trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_contains_all_operations() {
        let names: Vec<&str> = registry().keys().copied().collect();
        assert_eq!(
            names,
            vec![
                "complex",
                "connected_sum",
                "edge_fold",
                "facet_subdivide",
                "handle_addition",
                "one_vertex_suspension",
                "seed",
                "vertex_fold"
            ]
        );
    }

    #[test]
    fn replay_reproduces_forward_construction() {
        let rp2 = catalog::rp2_6();
        let built = ops::one_vertex_suspension(&rp2, VertexId(2), None).unwrap();
        let trace = built
            .record
            .clone()
            .with_inputs(vec![ConstructionRecord::seed("rp2_6", None)]);
        assert_eq!(replay(&trace).unwrap(), built.complex);

        let json = trace.to_json();
        let back = ConstructionRecord::from_json(&json).unwrap();
        assert_eq!(back, trace);
        assert_eq!(replay(&back).unwrap(), built.complex);
    }

    #[test]
    fn replay_rejects_unknown_ops_and_bad_arity() {
        let rec = ConstructionRecord::new("frobnicate");
        assert!(matches!(replay(&rec), Err(Error::UnknownOperation(_))));

        let rec = ConstructionRecord::new("facet_subdivide");
        assert!(matches!(replay(&rec), Err(Error::MalformedTrace(_))));
    }
}
