//! Connecting chains, the form Ω₀ and its periods.

mod ceresa;
mod cone;
mod cw;
mod periods;

pub use ceresa::{
    alignment, ceresa_invariant, ceresa_report, connecting_chain, difference_cycle, stokes_integral,
    symbolic_invariant, CeresaInvariant, CeresaOptions, CeresaReport, ChainMethod, SymbolicInvariant, Verdict,
};
pub use cone::cone_chain;
pub use cw::{build_cw, solve_boundary, CellBoundary, CwComplex, PlaneFamily, DEFAULT_PLANE_BUDGET};
pub use periods::{
    period_generators, period_integral, period_minors, symmetric_generators, PeriodLattice, SymbolicPeriodLattice,
};
