//! Integer polynomials, rational series over powers of `(1 − z)`, and walk counting.

pub mod gf;
pub mod poly;
pub mod walks;

pub use gf::{b_from_c, c_from_b, gf_add, gf_mul, gf_scale, gf_sub, gf_sum, CoeffSeq, RationalGF};
pub use poly::IntPoly;
pub use walks::{
    state_growth, tail_series, tail_terms, vertex_growth, walk_count, walk_count_table, TailTerm,
    WalkCounter,
};
