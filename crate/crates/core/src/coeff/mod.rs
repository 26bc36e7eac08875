//! Exact arithmetic in `Z[v^±1, t^±1]` (with `q = v^2`), its fractions, and
//! truncated expansions in `v`.

mod json;
mod laurent;
mod ratfn;
mod series;

pub(crate) use laurent::format_terms;
pub use laurent::{BiLaurent, Exp};
pub use ratfn::{sum_over_powers, ArithOp, RatFn};
pub use series::{series_expand, SeriesWindow};
