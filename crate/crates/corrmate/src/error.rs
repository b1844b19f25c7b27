//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate Mobius matrix (determinant within tolerance of zero)")]
    DegenerateMobius,

    #[error("geodesic endpoints coincide within tolerance")]
    DegenerateGeodesic,

    #[error("geodesic endpoint is not on the unit circle")]
    GeodesicEndpointOffCircle,

    #[error("expected a finite point, found infinity")]
    UnexpectedInfinity,

    #[error("group parameters out of range: need n >= 1, p >= 1, np >= 3 (got n={n}, p={p})")]
    BadGroupParameters { n: u32, p: u32 },

    #[error("non-hyperbolic orbifold signature: {0}")]
    NonHyperbolicSignature(String),

    #[error("point lies strictly inside the fundamental polygon: {0}")]
    InsideFundamentalPolygon(String),

    #[error("point outside the closed unit disk: {0}")]
    OutsideDisk(String),

    #[error("circle map is not expansive (sampled derivative minimum {0} <= 1)")]
    NotExpansive(f64),

    #[error("Markov refinement failed: {0}")]
    MarkovRefinement(String),

    #[error("polynomial root finding did not converge (degree {degree})")]
    RootsDiverged { degree: usize },

    #[error("rational map is degenerate: {0}")]
    DegenerateRationalMap(String),

    #[error("family parameters invalid: {0}")]
    BadFamilyParameters(String),

    #[error("family audit failed: {0}")]
    FamilyAudit(String),

    #[error("domain audit failed: {0}")]
    DomainAudit(String),

    #[error("deck transformation continuation lost track: {0}")]
    ContinuationLost(String),

    #[error("deck transformation is only computable for p = 1 (got p = {0})")]
    DeckUnsupported(u32),

    #[error("normal form audit failed: {0}")]
    NormalFormAudit(String),

    #[error("render job invalid: {0}")]
    BadRenderJob(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}
