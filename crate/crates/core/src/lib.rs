//! Compile a plain-text itinerarium of a person's life into placemark and
//! tour KML, a Roman-style text itinerary and an SVG map sketch.
//!
//! The pipeline is `itn::parse_document` → `model::validate` →
//! `timeline::build_timeline` → one of the emitters in [`kml`], [`text`]
//! or [`svg`].

pub mod cli;
pub mod corpus;
pub mod geo;
pub mod itn;
pub mod kml;
pub mod model;
pub mod svg;
pub mod text;
pub mod timeline;
mod xml;

pub use model::{
    CalendarDate, Diagnostic, ItineraryDoc, MediaKind, MediaRef, Place, Severity, Stay,
};
pub use timeline::{build_timeline, Leg, Timeline};
