//! Geometric phases of geodesic triangles on SU(3)/U(2) and SU(4)/U(3),
//! and their realization as multi-channel optical interferometers.
//!
//! The crate is layered bottom-up:
//!
//! * [`matrix`], [`unitary`], [`state`], [`lift`]: small dense complex
//!   linear algebra, SU(2) parametrizations, channel embeddings and the
//!   photon-number representations of SU(2);
//! * [`geodesic`], [`triangle`]: geodesic legs and triangles;
//! * [`phase`]: the triangle phase by three independent methods;
//! * [`decompose`]: factoring SU(N) into two-channel elements;
//! * [`circuit`]: interferometer netlists built from triangles.

pub mod angle;
pub mod circuit;
pub mod decompose;
pub mod error;
pub mod geodesic;
pub mod lift;
pub mod matrix;
pub mod matrix_io;
pub mod phase;
pub mod sampling;
pub mod state;
pub mod tol;
pub mod triangle;
pub mod unitary;

pub use num_complex::Complex64;

pub use circuit::{
    build_su3_circuit, build_su4_circuit, closure, simulate_single_photon,
    simulate_two_channel_multiphoton, transfer_matrix, Circuit, OpticalElement,
};
pub use decompose::{
    decompose_su3_pattern, decompose_su4_pattern, decompose_sun, element_count, recompose,
    FactorChain, FactorKind, NullingOrder, SU2Factor,
};
pub use error::{Error, Result};
pub use geodesic::{geodesic_curve, geodesic_evolution, is_geodesic, leg_rephase, reference_rotation, GeodesicLeg};
pub use lift::{lift_su2, PhotonNumber};
pub use matrix::Matrix;
pub use phase::{
    bargmann_phase, phase_bargmann, phase_closed_form_su3, phase_closed_form_su4,
    phase_operator_cycle, PhaseMethod, PhaseResult,
};
pub use state::StateVector;
pub use triangle::{
    reparametrize_psi3, triangle_su3, triangle_su4, GeodesicTriangle, ReparamPsi3,
    TriangleParamsSU3, TriangleParamsSU4,
};
pub use unitary::{
    apply, beam_splitter, embed, special_unitarize, su2_from_euler, BeamSplitterParams,
    ChannelPair, SU2Params, UnitaryMatrix,
};
