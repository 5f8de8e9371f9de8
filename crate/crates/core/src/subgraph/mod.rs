//! Finite connected subgraphs, morphism counts and their growth functions.

pub mod count;
pub mod graph;
pub mod growth;
pub mod method;
pub mod report;

pub use count::{
    c_series, count_by_final_state, count_morphisms, count_morphisms_backtracking, count_table,
    final_states, MorphismCountTable,
};
pub use graph::{Subgraph, SubgraphEdge};
pub use growth::{
    check_shape, default_fit_window, delta_offsets, growth_exact, growth_fit, ExactGrowth,
    FitOutcome, DEFAULT_VERIFY_WINDOW,
};
pub use method::{
    GrowthJob, GrowthMethod, GrowthOptions, MethodRegistry, MethodResult, MethodStatus,
};
pub use report::{run_growth, verify_main_theorem, GrowthReport, Verdict};
