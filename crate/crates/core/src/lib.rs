#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod decoherence;
pub mod error;
pub mod interp;
pub mod io;
pub mod moments;
pub mod oracle;
pub mod quadrature;
pub mod report;
pub mod sampling;
pub mod state;
pub mod thermal;
pub mod tunneling;
