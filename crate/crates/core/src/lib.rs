pub mod bijection;
pub mod boundary;
pub mod error;
pub mod kernel;
pub mod map;
pub mod mobile;
pub mod numeric;
pub mod oracle;
pub mod series;
pub mod verify;

pub use bijection::{aggregate, bdg_forward, bdg_forward_rooted, blossoming_to_mobile, disaggregate, mobile_to_blossoming};
pub use boundary::{alpha, gf_boundaries, slicings_count, BoundarySpec, DerivedQuantities};
pub use error::{BijectionError, BoundaryError, Error, MapError, OracleError, ParseError, SeriesError};
pub use kernel::{compute_r, compute_rp, compute_s, compute_t, compute_tp, lagrange_coeff, KernelParams};
pub use map::{HypermapColoring, PlanarMap};
pub use mobile::{validate_mobile, BlossomingTree, Mobile, MobileClass, MobileForest, NodeKind};
pub use numeric::{Integer, Rational};
pub use series::{solve_fixpoint, Monomial, Series, TruncationSpec};
