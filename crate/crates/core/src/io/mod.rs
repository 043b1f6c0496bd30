//! File formats, scenarios and output rendering.

pub mod dot;
pub mod format;
pub mod scenario;
pub mod trace;
