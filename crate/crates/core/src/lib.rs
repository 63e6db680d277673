//! Numerical laboratory for conformal metrics of curvature -1 on the unit
//! disk: the weighted Gauss curvature equation `Lap u = |H|^2 e^{2u}`, its
//! canonical and maximal solutions, finite Blaschke products and their
//! critical points, and the Liouville correspondence between the two
//! worlds.

pub mod blaschke;
pub mod canonical;
pub mod error;
pub mod field;
pub mod gce;
pub mod green;
pub mod grid;
pub mod harmonic;
pub mod heins;
pub mod holo;
pub mod io;
pub mod laplacian;
pub mod liouville;
pub mod mobius;
pub mod poly;
pub mod pullback;
pub mod verify;

pub use blaschke::BlaschkeProduct;
pub use error::{Error, Result};
pub use field::ScalarField;
pub use gce::{solve_gce, GceProblem, GceSolution};
pub use grid::{make_grid, DiskGrid};
pub use holo::HoloFn;
pub use mobius::MobiusDisk;
