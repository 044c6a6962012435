//! Carriers, elements, exact distributions and their constructions.

mod dist;
mod graph;
mod io;
mod structure;
mod word;

pub use dist::{independent_join, ratio, uniform_on, Dist, Joint, Prob};
pub use graph::{graph_coupling, BipartiteGraph, GraphCoupling};
pub use io::{format_prob, parse_prob, CarrierRepr};
pub use structure::{
    canonicalize, group_inv, group_op, is_prime, ring_mul, Carrier, Element, GroupSpec, RingSpec,
};
pub use word::Word;

