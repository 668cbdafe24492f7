use super::{ProjectionSet, ValuationError, VectorSetJson};

const CATALOG: &[(&str, &str)] = &[
    ("peres33", include_str!("../../data/peres33.json")),
    ("cabello18", include_str!("../../data/cabello18.json")),
];

pub fn catalog_names() -> Vec<&'static str> {
    CATALOG.iter().map(|(name, _)| *name).collect()
}

/// Loads an embedded Kochen–Specker set. The data holds unnormalized exact
/// components; they are normalized here and the graph rebuilt.
pub fn ks_catalog(name: &str) -> Result<ProjectionSet, ValuationError> {
    let (_, text) =
        CATALOG
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| ValuationError::UnknownCatalog {
                name: name.to_string(),
                available: catalog_names().iter().map(|s| s.to_string()).collect(),
            })?;
    let json: VectorSetJson =
        serde_json::from_str(text).map_err(|e| ValuationError::InvalidSet(e.to_string()))?;
    ProjectionSet::normalized(json.name.clone(), json.dim, json.raw_vectors()?)
}
