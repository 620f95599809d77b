//! Special functions: confluent hypergeometric Φ and Ψ, Γ, associated
//! Legendre functions and spherical harmonics.

pub mod gamma;
pub mod hypergeometric;
pub mod legendre;

pub use gamma::{gamma, pochhammer, rgamma};
pub use hypergeometric::{kummer_phi, kummer_phi_dz, tricomi_psi, tricomi_psi_dz, HypergeomParams};
pub use legendre::{assoc_legendre, sph_harm, theta_index, theta_table, SphericalPoint};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecfunError {
    #[error("{function} did not converge: {detail}")]
    NonConvergent { function: &'static str, detail: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported parameters: {0}")]
    UnsupportedParams(String),
    #[error("argument outside domain: {0}")]
    DomainError(String),
}
