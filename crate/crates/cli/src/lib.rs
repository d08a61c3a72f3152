//! IO companion for the Ford domain library: representation documents,
//! canonical numeric formatting, and deterministic scene output.

pub mod fmtnum;
pub mod repdoc;
pub mod scene;
