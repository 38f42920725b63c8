//! Berge Hamiltonicity of uniform hypergraphs: exact decision with
//! certificates, certified spectral radius brackets, extremal edge and
//! spectral thresholds, and exhaustive verification sweeps.

pub mod berge;
pub mod bounds;
pub mod canon;
pub mod enumeration;
pub mod hypergraph;
pub mod io;
pub mod spectral;
pub mod verify;

pub use berge::{
    brute_force_oracle, find_hamiltonian_berge_cycle, find_hamiltonian_berge_path, is_hamiltonian_connected,
    rotate_path_to_cycle, search_cycle, search_path, verify_certificate, BergeCertificate, BergeError,
    CertificateKind, NoneReason, RotationFailure, SearchOutcome, SearchStats, Violation,
};
pub use bounds::{bai_lu_bound, binom, p, p_inverse, stanley_bound, threshold, BoundsError, Threshold, ThresholdName};
pub use canon::{automorphism_count, canonical_form, is_canonical, labeled_copy_count, CanonicalForm};
pub use hypergraph::{Edge, Hypergraph, HypergraphError, VertexId};
pub use spectral::{
    classify, evaluate_form, exceeds_threshold, exceeds_threshold_with, gradient_form, spectral_radius, SpectralEstimate, ThresholdVerdict,
    WeightVector,
};
