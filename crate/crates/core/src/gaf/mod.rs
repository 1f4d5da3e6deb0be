//! The span/profunctor engine: free profunctors between finite skeletal
//! groupoids, equivariant spans between them, both compositions, the
//! pivotal structure and a string-diagram builder.

mod diagram;
mod equations;
pub mod laws;
mod pivotal;
mod profunctor;
pub mod random;
mod semantics;
mod span;

pub use diagram::{nest, whisker, Diagram};
pub use equations::{
    biunitary_span, cap_then_cup, check_graphical_biunitarity, crossing_pair, measurement_equations,
    yellow_biunitary_equations, yellow_blue_crossing, yellow_yellow_crossing, MeasurementReport, YellowReport,
};
pub use pivotal::{associator, boundary_star_iso, cap, cup, left_unitor, reassociate, right_unitor};
pub use profunctor::Profunctor;
pub use semantics::{bend_cap, bend_cup, quarter_turn, Engine, EngineNetwork, Rotation};
pub use span::{Row, Span};
