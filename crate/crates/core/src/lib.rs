#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod exact;
pub mod generate;
pub mod geometry;
pub mod haq;
pub mod mpc;
pub mod oracle;
mod radial;
pub mod relative;
pub mod report;
pub mod sweep;
pub mod wspd;
