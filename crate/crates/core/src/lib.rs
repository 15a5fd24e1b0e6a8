pub mod error;
pub mod global;
pub mod node;
pub mod oracle;
pub mod series;
pub mod smooth;

pub use error::{Error, Result};
pub use global::{
    ComponentOrbit, DimensionReport, Extended, GlobalCurveSpec, GlobalFlags, RamificationOrbit,
    SingularOrbit,
};
pub use node::{
    Branch, CyclicNodeAction, FirstOrderNodeLift, NodeAutomorphism, NodeLocalData, NodeProfile,
    RelevabilityClass,
};
pub use oracle::{FpMatrix, ModuleShape, OracleInput, TruncatedModule};
pub use series::{FpScalar, LaurentSeries, TruncatedSeries, Valuation};
pub use smooth::{CyclicSmoothAction, RamificationProfile, SmoothAutomorphism, VectorField};
