//! Bound states of the Coulomb problem outside a ball of radius `r0` under a
//! general rotation-invariant boundary condition
//! `ψ|_{∂K} * α + ∂_ν ψ|_{∂K} * β = 0`.
//!
//! Modules, bottom-up:
//! - [`specfun`]: Kummer Φ, Tricomi Ψ, Γ, associated Legendre, spherical harmonics.
//! - [`radial`]: physical parameters, quantization, the two-function radial basis.
//! - [`harmonics`]: spherical-harmonic transforms and zonal convolution.
//! - [`bvp`]: per-channel boundary solve, eigenfunction assembly, normalization.
//! - [`oracle`]: finite-difference Sturm–Liouville eigensolver per channel.
//! - [`verify`]: seeded invariant suites.
//!
//! Everything numerical is generic over [`Real`] (`f32`/`f64`); the `*64`
//! aliases below fix the precision used by the command-line tool.

pub mod bvp;
pub mod harmonics;
pub mod oracle;
pub mod quadrature;
pub mod radial;
pub mod scalar;
pub mod specfun;
pub mod verify;

pub use scalar::Real;

pub type PhysParams64 = radial::PhysParams<f64>;
pub type QuantumNumbers64 = radial::QuantumNumbers;
pub type BoundaryData64 = bvp::BoundaryData<f64>;
pub type Eigenpair64 = bvp::Eigenpair<f64>;
pub type SphericalSpectrum64 = harmonics::SphericalSpectrum<f64>;
pub type SphereGrid64 = harmonics::SphereGrid<f64>;
pub type ChannelProblem64 = oracle::ChannelProblem<f64>;
pub type ChannelEigs64 = oracle::ChannelEigs<f64>;
pub type HypergeomParams64 = specfun::HypergeomParams<f64>;
pub type SphericalPoint64 = specfun::SphericalPoint<f64>;
