//! Versioned JSON document for zonotopes.
//!
//! ```json
//! { "schema": "1",
//!   "generators": [[x, y, z], ...],
//!   "frame": [[x, y, z] x 4] | null,
//!   "beta": [b12, b13, b14, b23, b24, b34] | null,
//!   "vertices": [[x, y, z], ...],
//!   "edges": [{"vertices": [a, b], "generator": g}, ...],
//!   "facets": [{"vertices": [...], "normal": [x, y, z], "area": A}, ...] }
//! ```
//!
//! Reading rebuilds the complex from `frame`/`beta` when both are present,
//! otherwise from `generators`; stored vertex, edge and facet lists are only
//! checked for consistent counts.

use serde::{Deserialize, Serialize};

use super::{BetaVector, GeneratorSet, Zonotope, ZonotopeError};
use crate::geometry::{from_array, to_array};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZonotopeDocument {
    pub schema: String,
    pub generators: Vec<[f64; 3]>,
    #[serde(default)]
    pub frame: Option<[[f64; 3]; 4]>,
    #[serde(default)]
    pub beta: Option<[f64; 6]>,
    #[serde(default)]
    pub vertices: Vec<[f64; 3]>,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
    #[serde(default)]
    pub facets: Vec<FacetRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub vertices: [usize; 2],
    pub generator: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FacetRecord {
    pub vertices: Vec<usize>,
    pub normal: [f64; 3],
    pub area: f64,
}

impl From<&Zonotope> for ZonotopeDocument {
    fn from(z: &Zonotope) -> Self {
        Self {
            schema: SCHEMA_VERSION.to_string(),
            generators: z.generators.iter().map(|g| to_array(&g.direction)).collect(),
            frame: z.frame.map(|f| f.vectors().map(|v| to_array(&v))),
            beta: z.beta.map(|b| *b.values()),
            vertices: z.vertices.iter().map(to_array).collect(),
            edges: z
                .edges
                .iter()
                .map(|e| EdgeRecord { vertices: e.vertices, generator: e.generator })
                .collect(),
            facets: z
                .facets
                .iter()
                .map(|f| FacetRecord {
                    vertices: f.vertices.clone(),
                    normal: to_array(&f.normal),
                    area: f.area,
                })
                .collect(),
        }
    }
}

impl TryFrom<&ZonotopeDocument> for Zonotope {
    type Error = ZonotopeError;

    fn try_from(doc: &ZonotopeDocument) -> Result<Self, Self::Error> {
        if doc.schema != SCHEMA_VERSION {
            return Err(ZonotopeError::Document(format!("unsupported schema {:?}", doc.schema)));
        }
        let z = match (doc.frame, doc.beta) {
            (Some(frame), Some(beta)) => {
                let g = GeneratorSet::validate(frame.map(from_array))?;
                Zonotope::from_parameters(&g, &BetaVector::new(beta)?)?
            }
            _ => {
                let dirs: Vec<_> = doc.generators.iter().map(|&a| from_array(a)).collect();
                Zonotope::from_vectors(&dirs)?
            }
        };
        let check = |name: &str, stored: usize, built: usize| {
            if stored != 0 && stored != built {
                Err(ZonotopeError::Document(format!(
                    "{name}: document has {stored}, rebuilt complex has {built}"
                )))
            } else {
                Ok(())
            }
        };
        check("vertices", doc.vertices.len(), z.vertices.len())?;
        check("edges", doc.edges.len(), z.edges.len())?;
        check("facets", doc.facets.len(), z.facets.len())?;
        Ok(z)
    }
}

impl Zonotope {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ZonotopeDocument::from(self)).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ZonotopeError> {
        let doc: ZonotopeDocument =
            serde_json::from_str(text).map_err(|e| ZonotopeError::Document(e.to_string()))?;
        Zonotope::try_from(&doc)
    }
}
