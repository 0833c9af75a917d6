//! Diophantine diagnostics: continued fractions, empirical constants, scheme checks.

pub mod cf;
pub mod checks;
pub mod estimate;

pub use cf::{cf_expand, convergent_denominators, is_bad_quadratic, mod4_example_quotients, BadCertificate, CfExpansion};
pub use checks::{check_d, check_df, check_flag_condition, estimates_csv, DReport, DfReport, FactorCheck, FlagReport, FlagRun};
pub use estimate::{default_schedule, dioph_estimate, empirical_verdict, parse_schedule, DiophantineEstimate, EmbeddedGroup, EstimateRecord, Eta, Verdict};
