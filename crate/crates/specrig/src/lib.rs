//! Numerical toolkit for degree-d rational dynamics on the Riemann sphere:
//! periodic points and their multiplier/length spectra, spectrum-based map
//! comparison, moduli-space operations (conjugacy detection, quadratic
//! Milnor coordinates, exceptional families), and one-parameter family
//! experiments (Green/bifurcation measures, postcritically finite parameter
//! solving, orbit classification, expansion diagnostics, similarity frames).
//!
//! Everything is deterministic for a fixed seed; randomized paths draw from
//! seeded ChaCha8 streams only.

pub mod cli;
pub mod config;
pub mod cpoly;
pub mod error;
pub mod famdyn;
pub mod moduli;
pub(crate) mod jsonc;
pub mod ratmap;
pub mod spectrum;

pub use config::{OutputFormat, RunConfig};
pub use cpoly::{poly_roots, poly_roots_with, ComplexPoly, Precision, RootCluster, RootOptions};
pub use error::{Error, Result};
pub use famdyn::{
    bifurcation_grid, ce_exponent_estimate, classify_orbit, dynamically_related_probe,
    equidistribution_discrepancy, family_eval, green_value, is_hyperbolic_disjoint, is_pcf,
    marked_orbit, pcf_parameters_unicritical, recurrence_exponent_estimate,
    separation_statistics, similarity_frames, FamilySpec, GreenValue, GridMeasure, MarkedPoint,
    OrbitClassification, OrbitStatus, PcfKind, RelationVerdict, SeparationStats,
    SimilarityFrame, SimilarityReport, Window,
};
pub use moduli::{
    conjugacy_test, elementary_transform, exceptional_map, flexible_lattes, milnor_coordinates,
    semiconjugacy_search, ConjugacyWitness, ExceptionalKind, LattesParams, MilnorCoordinates,
};
pub use ratmap::{chordal_distance, MobiusTransform, ProjPoint, RationalMap};
pub use spectrum::{
    compare_spectra, compare_spectra_with_tol, fixed_points, fixed_points_with,
    index_sum_check, length_spectrum, multiplier, multiplier_spectrum, spectrum_coordinates,
    tau, tau_with, LengthTable, PeriodicPointSet, SpectrumOptions, SpectrumTable,
};
