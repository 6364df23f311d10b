//! JSON interchange format for complexes.
//!
//! `{"name": <string?>, "dim": <int>, "facets": [[int,...],...]}` — facets
//! need not be sorted on input and are sorted on output. The `dim` field is
//! optional on input; when present it must match the computed dimension.

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<i32>,
    facets: Vec<Vec<u32>>,
}

/// A complex paired with an optional display name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedComplex {
    pub name: Option<String>,
    pub complex: SimplicialComplex,
}

impl NamedComplex {
    pub fn new(name: impl Into<String>, complex: SimplicialComplex) -> Self {
        NamedComplex {
            name: Some(name.into()),
            complex,
        }
    }

    pub fn anonymous(complex: SimplicialComplex) -> Self {
        NamedComplex {
            name: None,
            complex,
        }
    }
}

pub fn complex_from_json(text: &str) -> Result<NamedComplex> {
    let raw: ComplexJson =
        serde_json::from_str(text).map_err(|e| Error::InvalidComplexJson(e.to_string()))?;
    let complex = SimplicialComplex::from_facets(raw.facets)?;
    if let Some(dim) = raw.dim {
        if dim != complex.dim() {
            return Err(Error::InvalidComplexJson(format!(
                "declared dim {} but facets have dimension {}",
                dim,
                complex.dim()
            )));
        }
    }
    Ok(NamedComplex {
        name: raw.name,
        complex,
    })
}

pub fn complex_to_json(named: &NamedComplex) -> String {
    let raw = ComplexJson {
        name: named.name.clone(),
        dim: Some(named.complex.dim()),
        facets: named
            .complex
            .facets()
            .iter()
            .map(|f| f.labels())
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("complex serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn roundtrip_preserves_facets() {
        let named = NamedComplex::new("rp2_6", catalog::rp2_6());
        let text = complex_to_json(&named);
        let back = complex_from_json(&text).unwrap();
        assert_eq!(back, named);
    }

    #[test]
    fn input_tolerates_unsorted_facets_and_whitespace() {
        let text = "  {\"facets\":\n [[3,1,0,2],  [4,2,1,0],[0,1,3,4],[0,2,3,4],[1,2,3,4]]} ";
        let named = complex_from_json(text).unwrap();
        assert_eq!(named.complex, catalog::boundary_simplex(4));
        assert_eq!(named.name, None);
    }

    #[test]
    fn dim_mismatch_is_rejected() {
        let text = r#"{"dim": 2, "facets": [[0,1,2,3]]}"#;
        assert!(matches!(
            complex_from_json(text),
            Err(Error::InvalidComplexJson(_))
        ));
    }
}
