//! Time integration of the discrete inclusion and attainable-set sampling.

mod attainability;
mod selection;
mod stepper;
mod trajectory;

pub use attainability::{attainability_set, AttainabilitySample};
pub use selection::{heaviside_select, heaviside_select_at, in_heaviside_graph, SelectionPolicy};
pub use stepper::{step, Stepper};
pub use trajectory::{concatenate, integrate, integrate_steps, step_count, Trajectory};
