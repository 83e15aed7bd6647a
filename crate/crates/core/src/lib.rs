//! Exact formal power series toolkit for fast-growth transcendence criteria.
//!
//! - [`exactnum`]: rational scalars, archimedean and p-adic absolute values,
//!   rigorous `log2` magnitude intervals.
//! - [`series`]: truncated series arithmetic, division and polynomials over
//!   series.
//! - [`decomp`]: core/tail power splitting and the four-part decomposition
//!   of `A(X)_n`.
//! - [`oracle`]: brute-force tuple enumeration used to cross-check the above.
//! - [`growth`]: growth laws, margin evaluation for the growth criteria, the
//!   division bound check and a growth classifier.
//! - [`constructions`]: the gap series, factorial-type series and checks of
//!   the gap-series claims.

pub mod constructions;
pub mod decomp;
pub mod error;
pub mod exactnum;
pub mod growth;
pub mod oracle;
pub mod series;

pub use error::{Error, Result};
pub use exactnum::{AbsValue, LogMagInterval, Prime, Scalar};
pub use series::{Series, SeriesPoly, SparseSeries};
