//! Fuchsian groups with rotational symmetry, their factor Bowen-Series
//! circle maps, the normalized rational-map families uniformizing matings of
//! those maps with power maps, and the bi-degree d:d algebraic
//! correspondences the rational maps define.
//!
//! The crate is organized bottom-up:
//!
//! - [`sphere`]: Riemann-sphere arithmetic, Möbius maps, disk geodesics.
//! - [`group`]: the groups Γ(n,p) with side-paired ideal np-gons, orbifold
//!   signatures, and Teichmüller dimension counts.
//! - [`circle`]: Bowen-Series and factor Bowen-Series maps, Markov
//!   partitions, expansivity estimates, and the conjugacy to `z -> z^d`.
//! - [`rational`]: coefficient-level rational map algebra on the sphere.
//! - [`bers`]: the three normalized families that realize a Bers slice in
//!   the space of correspondences.
//! - [`corr`]: branch solving, orbit classification, grand-orbit clouds,
//!   deck transformations, and free-product checks for the correspondence
//!   `(R(w) - R(1/z)) / (w - 1/z) = 0`.
//! - [`normal`]: reduction of the fully ramified cubic case to the classical
//!   2:2 normal form `u^3 - 3u`.
//! - [`render`]: deterministic raster and point-cloud images.
//! - [`cli`]: the `corrmate` command-line entry point.
//!
//! A narrative guide with runnable examples lives in `book/`; its code
//! blocks are compiled as doc-tests (see the `guide` module).

pub mod bers;
pub mod circle;
pub mod cli;
pub mod config;
pub mod corr;
pub mod error;
pub mod group;
pub mod normal;
pub mod poly;
pub mod rational;
pub mod render;
pub mod sphere;

pub use config::Config;
pub use error::Error;
pub use sphere::{ArcSide, Geodesic, MobiusMap, SpherePoint};

/// Book chapters compiled as doc-tests so the guide cannot drift from the
/// library.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/sphere.md")]
    mod sphere {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/circle-maps.md")]
    mod circle_maps {}
    #[doc = include_str!("../../../book/src/rational-maps.md")]
    mod rational_maps {}
    #[doc = include_str!("../../../book/src/bers-families.md")]
    mod bers_families {}
    #[doc = include_str!("../../../book/src/correspondences.md")]
    mod correspondences {}
    #[doc = include_str!("../../../book/src/normal-form.md")]
    mod normal_form {}
}
