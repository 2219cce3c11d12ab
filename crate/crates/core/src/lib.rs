//! Exact computation of splitting types of kernel, tangent, and normal
//! bundles restricted to rational curves on hypersurfaces, over the
//! rationals or a prime field.

// Matrix-style index loops over parallel structures are the house idiom
// in the linear-algebra code, and a few return types carry paired vectors.
#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod binary;
pub mod bundle;
pub mod config;
pub mod curve;
pub mod error;
pub mod example;
pub mod experiments;
pub mod field;
pub mod json;
pub mod linalg;
pub mod multi;
pub mod point;

pub use binary::BinaryForm;
pub use bundle::{FreeGradedModule, GradedMap, SplittingType};
pub use curve::{CombNode, CombReport, CurveBundles, Hypersurface, RationalCurve, TypicalityReport};
pub use error::{Error, Result};
pub use experiments::{SectionLiftReport, TrialConfig, TrialStats, Witness};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use linalg::Mat;
pub use multi::MultiForm;
pub use point::ProjectivePoint;

/// Concrete aliases for the two scalar domains the library supports.
pub type HypersurfaceQ = Hypersurface<Rationals>;
pub type HypersurfaceFp = Hypersurface<PrimeField>;
pub type CurveQ = RationalCurve<Rationals>;
pub type CurveFp = RationalCurve<PrimeField>;
pub type BundlesQ = CurveBundles<Rationals>;
pub type BundlesFp = CurveBundles<PrimeField>;
pub type MatQ = Mat<Rationals>;
pub type MatFp = Mat<PrimeField>;
