//! Numerical audits of the estimate structure: contraction of the Picard
//! sequence, Gronwall envelopes for twin solves, energy balance and
//! working-space membership.

pub mod apriori;
pub mod cauchy;
pub mod energy;
pub mod gronwall;
pub mod uniqueness;
pub mod verdict;

pub use apriori::{apriori_monitor, block_terms, AprioriReport, BlockTerms};
pub use cauchy::{cauchy_report, fit_ratio, CauchyReport};
pub use energy::{energy_audit, EnergyAudit};
pub use gronwall::{gronwall_envelope, EnvelopeSeries};
pub use uniqueness::{fit_gronwall_constant, uniqueness_experiment, UniquenessReport};
pub use verdict::Verdict;
