//! Littlewood-Paley machinery on the periodic lattice.

pub mod audit;
pub mod besov;
pub mod bony;
pub mod partition;

pub use besov::{besov_norm, besov_report, BesovIndex, BesovReport};
pub use bony::{bony_decompose, BonyParts};
pub use partition::DyadicPartition;
