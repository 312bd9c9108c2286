//! Periodic quantum graphs: vertex couplings in ST-form, the bond scattering
//! matrix, the secular determinant and numerical band detection.

pub mod coupling;
pub mod graph;
pub mod secular;

pub use coupling::{associated_scale_invariant, delta_coupling, vertex_scattering, CMatrix, VertexCoupling};
pub use graph::{Edge, GraphDocument, PeriodicCellGraph, Vertex};
pub use secular::{
    bond_scattering, in_spectrum, min_abs_secular, momentum_period, scan_bands, secular, SecularAtMomentum,
    SecularMinimum, SpectrumOptions,
};
