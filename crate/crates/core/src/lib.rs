pub mod error;
pub mod exact_linalg;
pub mod gitfan;
pub mod grassmann;
pub mod polyhedral;
pub mod report;
pub mod semilattice;

pub use error::{Error, Result};
pub use exact_linalg::{ExactScalar, QMatrix, QVector, ZVector};
pub use gitfan::{GitChamber, GitContext};
pub use grassmann::{PairIdx, TwoBlock, WeightData, YSet};
pub use polyhedral::{Cone, Fan, Membership};
pub use report::{FanJson, Report};
pub use semilattice::{ElementFamily, FiniteSemilattice, Label};
