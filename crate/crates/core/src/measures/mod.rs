//! Singular measures, dyadic arcs and Carleson boxes, the heavy-light
//! decomposition, Beurling–Carleson set tests and the sublevel-set integral.

mod bcset;
mod dyadic;
mod heavy_light;
mod measure;
mod sublevel;
mod verdict;

pub use bcset::{
    bc_complementary_sum, bc_dyadic_sum, bc_integral, classify_bc, gap_log_integral, generalized_cantor,
    BcClassification, BcSeries, BoundarySet, CantorRule, Gap, CLASSIFY_DEPTH, NULL_TOL,
};
pub use dyadic::{CarlesonBox, DyadicArc, MAX_LEVEL};
pub use heavy_light::{
    exact_arc_mass, heavy_light_decompose, Generation, HeavyArc, HeavyLightForest, HeavyLightReport, LightArc,
    UnresolvedArc, UnresolvedReason,
};
pub use measure::{poisson_integral, Atom, AtomAngle, DyadicTree, SingularMeasure, MAX_TREE_DEPTH, POISSON_REL_TOL};
pub use sublevel::{sublevel_fraction, sublevel_integral, SublevelResult, DEFAULT_SHELL_DEPTH, MAX_SHELL_DEPTH};
pub use verdict::{
    tail_verdict, Verdict, CONVERGENT_EXPONENT, DIVERGENT_EXPONENT, MIN_GENERATIONS, RATIO_THRESHOLD, TAIL_WINDOW,
};
