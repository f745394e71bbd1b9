//! The rank-3 period domain: filtrations on `Λ`, the nilpotent-orbit
//! criterion, relative monodromy filtrations and the boundary chart.

mod chart;
mod heisenberg;
mod lambda;
mod rmf;
pub mod rmf_oracle;

use thiserror::Error;

pub use chart::{alpha_of_q, boundary_chart_point, reduce_mod_integral, BoundaryChartPoint, ChartClass};
pub use heisenberg::{same_class, HeisenbergPoint, IntegerUnipotent};
pub use lambda::{
    gaussian, generates_nilpotent_orbit, griffiths_transversal, hodge_filtration_from, HodgeFiltration,
    LambdaData, NilpotentEndo, OrbitVerdict,
};
pub use rmf::{
    conjugate, relative_monodromy_filtration, verify_relative_monodromy, RmfCheck, RmfError,
    WeightFiltrationGeneric,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HodgeError {
    #[error("chart points with q = 0 must have β = 0")]
    BoundaryBeta,
    #[error("filtration is not in the unipotent orbit of the reference flag")]
    NotInPeriodDomain,
    #[error("malformed flag: {0}")]
    BadFlag(String),
    #[error(transparent)]
    Rmf(#[from] RmfError),
}
