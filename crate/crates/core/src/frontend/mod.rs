//! Frame files, the analysis pipeline and its JSON report.

pub mod analyze;
pub mod parse;
pub mod report;

pub use analyze::{analyze, AnalysisFailure, AnalyzeOptions, StratifyOptions};
pub use parse::{parse_frame, FieldDef, FrameDocument, Term, WeightsSetting};
pub use report::Report;
