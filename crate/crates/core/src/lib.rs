pub mod afm;
pub mod airy;
pub mod certificate;
pub mod error;
pub mod extrapolate;
pub mod galerkin;
pub mod grid;
pub mod kinematics;
pub mod nr_oracle;
pub mod potential;
pub mod q;
pub mod quantum;
pub mod roots;
pub mod sse;
