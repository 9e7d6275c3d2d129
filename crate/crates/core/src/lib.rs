//! Exact equivariant localization for rank-r highly frozen triples
//! `O(-n)^r -> F` on local P^1.
//!
//! The pipeline runs bottom-up:
//!
//! 1. [`algebra`]: Laurent polynomial characters of the torus
//!    `(C*)^3 x (C*)^r`, rational characters over `prod (1 - m)`, weights.
//! 2. [`geometry`]: the fixed points and the sheaf characters on each patch.
//! 3. [`vertex`]: the finite virtual tangent character at a fixed point.
//! 4. [`localization`]: Euler weights and the generating series in `q`.
//!
//! ```
//! use hft_vertex::algebra::Specialization;
//! use hft_vertex::geometry::LocalP1Config;
//! use hft_vertex::localization::vertex_series;
//! use hft_vertex::vertex::PipelineOptions;
//!
//! let config = LocalP1Config::new(1, 0).unwrap();
//! let spec = Specialization::calabi_yau(1, 2, &[5]).unwrap();
//! let series = vertex_series(config, 3, &spec, &PipelineOptions::default()).unwrap();
//! let coeffs: Vec<String> = series.coefficients().iter().map(|c| c.to_string()).collect();
//! assert_eq!(coeffs, ["1", "-2", "3", "-4"]);
//! ```

pub mod algebra;
pub mod cli;
pub mod geometry;
pub mod localization;
pub mod verify;
pub mod vertex;
