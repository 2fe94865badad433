//! Koszul strands, cohomology dimensions and Betti tables.

mod hilbert;
mod oracle;
mod strand;
mod table;
pub mod wedge;

pub use hilbert::{hilbert_check, reindex_check, HilbertReport};
pub use oracle::{brute_kpq, brute_kpq_with, OracleMode, ORACLE_MAX_MIDDLE};
pub use strand::{
    build_strand, build_strand_with, kpq_dim, CellResult, Differential, Engine, EngineConfig, KoszulStrand,
    LocalBoundary, MultiPrimeCell,
};
pub use table::{
    assemble_table, betti_table, betti_table_multi, betti_table_with, compute_cells, q_bounds, rational_f64,
    table_cells, table_from_csv, BettiTable, BettiValue, FieldTag, Method, MultiPrimeTable, PartialTable,
    TableError, TableSource,
};
pub(crate) use table::render_grid;
