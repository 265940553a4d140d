//! Linear and weighted simple games on the shift order.

pub mod chains;
pub mod census;
pub mod coalition;
pub mod error;
pub mod game;
pub mod geometry;
pub mod lp;
pub mod mposet;
pub mod poset;
pub mod weighted;

pub use coalition::{shift_leq, Coalition, MAX_VOTERS};
pub use error::{Error, Result};
pub use game::{Classification, Desirability, GameJson, Hierarchy, LinearGame, LosingFrontier};
pub use lp::Rational;
pub use mposet::{build_m_poset, CoalitionPoset};
pub use weighted::{
    check_certificate, find_trade_failure, footprint_weighted_cover, footprint_weighted_covered, is_weighted,
    verify_realization, NeighborVerdict, Realization, TradeCertificate, Weightedness,
};
pub use geometry::{
    classify_facets, dual_reflection_check, footprint_hierarchy, polytope_constraints, symmetric_games_above_corner,
    vertical_chain, ChainStep, Facet, HalfSpace, Point, PolytopeReport,
};
pub use poset::{build_poset, build_poset_with, local_neighbors, GamePoset, PosetKind};
pub use chains::{
    chain_consistency, enumerate_maximal_chains, enumerate_self_dual_chains, probe_induced_conjecture, probe_vertical_chains, ChainEnumeration,
    ChainReport, Comparison, InducedProbe, VerticalProbe,
};
pub use census::{
    one_generator_proper_brute, one_generator_proper_count, one_generator_proper_list, symmetric_game_counts,
    symmetric_game_counts_enumerated, symmetric_games, verify_appendix, AppendixReport, AppendixRow, Census,
    CountsReport, SymmetricCounts,
};
