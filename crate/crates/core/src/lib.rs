//! The semigroup `(ℕ₀, *_f)` induced from the sums of two squares, the
//! monochromatic configuration families it carries, and finite searches for
//! witnesses of those configurations.
//!
//! Write Σ = {s_0 < s_1 < s_2 < …} = {0, 1, 2, 4, 5, 8, 9, …}. The rank map
//! `g(s) = #{y ∈ Σ : y < s}` and its inverse `f(n) = s_n` transport ordinary
//! multiplication on Σ to `m *_f n = g(s_m · s_n)`; for example `2 *_f 5 = 9`
//! because `s_2 · s_5 = 2 · 8 = 16 = s_9`.
//!
//! ```
//! use twosq::{ground::GroundTable, semigroup::star};
//!
//! let table = GroundTable::build(1_000).unwrap();
//! assert_eq!(star(&table, 2, 5).unwrap(), 9);
//! ```

pub mod cli;
pub mod colorings;
pub mod error;
pub mod ground;
pub mod hjlab;
pub mod patterns;
pub mod search;
pub mod semigroup;

pub use error::{Error, Result};
