//! Random and exhaustive experiments on the polynomial ensembles.

pub mod bounded;
pub mod ensemble;
pub mod irreducible;
pub mod moments;
pub mod spec;
pub mod tail;

pub use bounded::{delta_boundedness, delta_boundedness_grid, Boundedness, BoundednessRow};
pub use ensemble::{draw_stream, sample_g, sample_gq, Enumeration, DEFAULT_BUDGET};
pub use irreducible::{irreducible, irreducible_rate, IrreducibleRate};
pub use moments::{moment_bound_check, moment_discrete, moment_uniform, MomentCheck};
pub use spec::{tail_threshold, ExperimentSpec, Model, Nu, Samples};
pub use tail::{small_disc_probability, TailEstimate};
