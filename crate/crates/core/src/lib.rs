//! Entanglement of states generated by bilocal spin-flip group algebras.
//!
//! A group `G = X(𝒜)` of X-type operators acting on |0…0⟩ gives the
//! G-homogeneous state `|G⟩ ∝ Σ_g g|0…0⟩`. Its entropy across any cut is a
//! rank computation over GF(2): [`homogeneous_entropy`]. The same machinery
//! covers 2-colourable graph states ([`graph_entropy`]), star-operator
//! lattices on a torus ([`lattice`]), qudit shift groups ([`qudit`]) and the
//! n-tangle ([`ntangle_closed_form`]). The [`oracle`] module is an
//! independent statevector implementation used to check all of them.

pub mod entanglement;
pub mod error;
pub mod gf2;
pub mod graph_state;
pub mod lattice;
pub mod oracle;
pub mod qudit;
pub mod spin_flip;
pub mod stabilizer;
pub mod tangle;

pub use entanglement::{
    homogeneous_entropy, is_product_partition, shannon_bits, weighted_bound, weighted_entropy_exact, EntropyReport,
    Partition,
};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitRow};
pub use graph_state::{graph_entropy, graph_state_stabilizer, to_ghomogeneous, two_coloring, Graph, TwoColoring};
pub use lattice::{arealaw_check, build_torus, physical_state_entropy_check, region_cut, Rect, StarLattice};
pub use oracle::{DenseState, Oracle};
pub use qudit::{cyclic_group, qudit_entropy, QuditShiftGroup};
pub use spin_flip::{SpinFlipGroup, WeightedGState};
pub use stabilizer::{groups_equal, LocalClifford, PauliString, StabilizerGroup};
pub use tangle::{group_parity, ntangle_closed_form, NTangleReport, ParityProfile};
