//! The shipped Newton itinerarium.

use crate::itn::parse_document;
use crate::model::{has_errors, validate, ItineraryDoc};

/// Source text of `corpus/newton.itn`.
pub const NEWTON_ITN: &str = include_str!("../corpus/newton.itn");

pub fn newton_corpus() -> ItineraryDoc {
    let doc = parse_document(NEWTON_ITN).expect("shipped corpus parses");
    debug_assert!(!has_errors(&validate(&doc, true)));
    doc
}
