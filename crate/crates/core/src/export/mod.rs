//! World artifacts and corpus metrics.

pub mod bundle;
pub mod metrics;
pub mod occupancy;
pub mod svg;

pub use bundle::{read_world_bundle, write_world_bundle, BundleIoError, Provenance, WorldBundle, BUNDLE_FILES};
pub use metrics::{evaluate_corpus, pearson, Aggregate, LevelAggregate, MetricsReport, MetricsRow, METRICS};
pub use occupancy::{export_occupancy_grid, parse_pgm, OccupancyGrid, PgmError, FREE, OCCUPIED, UNKNOWN};
pub use svg::{count_kind_elements, export_svg, CHROME_ELEMENTS};
