//! Exact computations with valuations of polynomial rings given by curvettes:
//! values, approximate roots, standard forms, separating ideals, blowups of
//! surface charts and signed dual graphs.

pub mod arith;
pub mod blowup;
pub mod dual_graph;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod roots;
pub mod semigroup;
pub mod separating;
pub mod series;
pub mod session;
pub mod standard_form;
pub mod valuation;
pub mod walkthrough;

pub use arith::{ParamAssumption, Rat, RatFn, Sign};
pub use error::{Error, Result};
pub use poly::Poly;
pub use semigroup::Semigroup;
pub use series::{series_substitute, SeriesOrder, TruncSeries};
pub use valuation::{Curvette, InitialForm, MonomialValuation};
