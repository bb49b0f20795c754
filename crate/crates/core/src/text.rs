//! The Roman-style textual itinerarium.
//!
//! ```text
//! ITINERARIUM: <subject> - <title>
//! 1. <name> (<lat>, <lon>)  <from>-<to>
//!    → <distance> km
//! 2. ...
//! total: <D> km
//! ```

use std::fmt::Write as _;

use crate::timeline::Timeline;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum TextError {
    #[error("empty-timeline: nothing to list")]
    EmptyTimeline,
}

pub fn emit_itinerarium(tl: &Timeline<'_>) -> Result<String, TextError> {
    if tl.is_empty() {
        return Err(TextError::EmptyTimeline);
    }
    let doc = tl.doc();
    let legs = tl.legs();

    let mut out = String::new();
    let _ = writeln!(out, "ITINERARIUM: {} - {}", doc.subject, doc.title);
    for (n, entry) in tl.entries().iter().enumerate() {
        let place = entry.place;
        let _ = writeln!(
            out,
            "{}. {} ({:.6}, {:.6})  {}-{}",
            n + 1,
            place.name,
            place.point.lat,
            place.point.lon,
            entry.stay.from,
            entry.stay.to
        );
        if let Some(leg) = legs.get(n) {
            let _ = writeln!(out, "   → {:.1} km", leg.distance_km);
        }
    }
    let _ = writeln!(out, "total: {:.1} km", tl.total_distance());
    Ok(out)
}
