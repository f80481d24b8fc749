//! Exact degrees-of-freedom (DoF) analysis and interference-alignment
//! transceiver synthesis for symmetric cellular MIMO networks.
//!
//! The network model is `G` cells with `K` users each; every base station
//! has `M` antennas and every user `N`. All analysis (region
//! classification, DoF bounds, subspace chains, feasibility tests) is
//! carried out in exact rational arithmetic; the synthesizer then builds
//! complex-valued linear transceivers for the bracketed ratios and checks
//! them numerically against explicit tolerances.

pub mod align;
pub mod bounds;
pub mod chain;
pub mod channel;
pub mod config;
pub mod design;
pub mod feasibility;
pub mod linalg;
pub mod rational;
pub mod sequence;
pub mod synth;
