mod common;

use common::check_golden;
use itinerarium::corpus::{newton_corpus, NEWTON_ITN};
use itinerarium::itn::{parse_document, serialize_document};
use itinerarium::kml::{emit_placemarks, emit_tour, TourConfig};
use itinerarium::svg::{emit_map_sketch, SketchConfig};
use itinerarium::text::emit_itinerarium;
use itinerarium::timeline::build_timeline;

#[test]
fn placemarks_golden() {
    check_golden("newton.kml", &emit_placemarks(&newton_corpus())).unwrap();
}

#[test]
fn tour_golden() {
    let doc = newton_corpus();
    let tl = build_timeline(&doc).unwrap();
    check_golden("newton-tour.kml", &emit_tour(&tl, &TourConfig::default()).unwrap()).unwrap();
}

#[test]
fn itinerarium_golden() {
    let doc = newton_corpus();
    check_golden("newton.txt", &emit_itinerarium(&build_timeline(&doc).unwrap()).unwrap()).unwrap();
}

#[test]
fn map_golden() {
    let doc = newton_corpus();
    let tl = build_timeline(&doc).unwrap();
    check_golden("newton.svg", &emit_map_sketch(&tl, &SketchConfig::default()).unwrap()).unwrap();
}

#[test]
fn canonical_form_golden() {
    check_golden("newton.canonical.itn", &serialize_document(&newton_corpus())).unwrap();
}

#[test]
fn corpus_serialization_is_a_fixed_point() {
    let once = serialize_document(&parse_document(NEWTON_ITN).unwrap());
    let twice = serialize_document(&parse_document(&once).unwrap());
    assert_eq!(once, twice);
    assert_eq!(parse_document(&once).unwrap(), newton_corpus());
}
