//! Full factorizations accelerated by randomization: blocked pivoted QR with
//! sketched pivot selection, and the blocked rank-revealing UTV.

mod hqrrp;
mod randutv;

pub use hqrrp::{hqrrp, hqrrp_with, HqrrpOptions, PivotRule};
pub use randutv::{randutv, UtvFactors};
