//! Minkowski products `K1 K2 = {ab : a in K1, b in K2}` of planar compact
//! convex sets, with closed-form product regions, star centers and a
//! brute-force oracle to check them against.

pub mod disk;
pub mod error;
pub mod frame;
pub mod geom;
pub mod membership;
pub mod numrange;
pub mod polyprod;
pub mod segconvex;
pub mod segseg;

pub use error::{Error, Result};

/// The guide, one module per chapter, so its examples run as doc tests.
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/segments.md")]
    pub mod segments {}
    #[doc = include_str!("../../../book/src/segment-convex.md")]
    pub mod segment_convex {}
    #[doc = include_str!("../../../book/src/polygons.md")]
    pub mod polygons {}
    #[doc = include_str!("../../../book/src/disks.md")]
    pub mod disks {}
    #[doc = include_str!("../../../book/src/numerical-ranges.md")]
    pub mod numerical_ranges {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    pub mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
