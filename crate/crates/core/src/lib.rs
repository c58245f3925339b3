//! Spectral certification of k-connectivity through the signless Laplacian.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: bit-row graphs, graph6, constructors, exhaustive enumeration.
//! - [`spectral`]: `Q = D + A`, certified Perron-root brackets, dense oracle.
//! - [`connectivity`]: exact vertex connectivity by vertex-split unit flows.
//! - [`extremal`]: the graphs `A(n,k,δ)`, `M_k(n)`, `L_k(n)`, removed-edge families.
//! - [`certifier`]: the certification verdict and the lemma checkers.
//! - [`harness`]: corpus streaming, random graphs, and verification campaigns.

pub mod graph;
pub mod harness;
pub mod connectivity;
pub mod certifier;
pub mod extremal;
pub mod spectral;
