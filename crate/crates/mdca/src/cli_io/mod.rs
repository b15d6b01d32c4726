//! Instance files, the built-in catalog, command drivers and reports.

mod catalog;
mod commands;
mod format;
mod report;

pub use catalog::{abelian, catalog_instance, catalog_text, NAMES};
pub use commands::{
    cmd_catalog_emit, cmd_catalog_list, cmd_check, cmd_cohomology, cmd_roundtrip, configure_threads, load,
    mdca_structure, parse_kind, parse_window, sh_data,
};
pub use format::{
    emit_instance, emit_value, instance_json, parse_instance, InputError, Instance, Kind, MdcaTables, Policy,
    ShTables, Structure, DEFAULT_W,
};
pub use report::{BettiEntry, Report, ResidualEntry, Verdict};

/// Exit status for input errors.
pub const EXIT_INPUT: i32 = 2;
