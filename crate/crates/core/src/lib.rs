//! Exact simulation and verification of groupoid-valued classical bits.
//!
//! A groudit is a finite skeletal groupoid whose automorphism groups are put
//! in bijection with its object set by two balancers. The crate provides
//!
//! * [`groupoid`]: groups, groupoids, groudits and their JSON form,
//! * [`biunitary`]: the balancer/biunitary correspondence and enumeration,
//! * [`gaf`]: profunctors, spans and their compositions (the reference engine),
//! * [`quantize`]: the functor into finite-dimensional complex matrices,
//! * [`netsim`]: the multiset network simulator,
//! * [`protocols`]: the protocol library built on top of it.

pub mod biunitary;
pub mod error;
pub mod gaf;
pub mod groupoid;
pub mod netsim;
pub mod protocols;
pub mod quantize;
pub mod verify;

pub use biunitary::{
    balancers_to_biunitary, biunitary_to_balancers, check_biunitary, enumerate_biunitaries, BalancerOrdering,
    Biunitary, BiunitaryCheck, DEFAULT_ENUM_GUARD,
};
pub use error::{Error, Result};
pub use groupoid::{make_cyclic_groudit, make_cyclic_identity, make_groubit, Dit, Groudit, Group, Groupoid, Morphism};
pub use netsim::{
    run_program, states_equal_up_to_scalar, Configuration, MultisetState, Network, Op, Program, Step, SystemKind,
    Trace, Value,
};
