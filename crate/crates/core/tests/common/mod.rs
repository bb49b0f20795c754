#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use itinerarium::model::{has_errors, validate, CalendarDate, GeoPoint, ItineraryDoc, MediaKind, MediaRef, Place, Stay};
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn corpus_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus/newton.itn")
}

pub fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus/golden").join(name)
}

/// Compares against a frozen golden file; `UPDATE_GOLDEN=1` rewrites it.
pub fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).map_err(|e| format!("writing {}: {e}", path.display()))?;
        return Ok(());
    }
    let expected = fs::read_to_string(&path).map_err(|e| format!("reading {}: {e}", path.display()))?;
    if expected == actual {
        return Ok(());
    }
    let line = expected
        .lines()
        .zip(actual.lines())
        .position(|(a, b)| a != b)
        .map(|i| i + 1)
        .unwrap_or_else(|| expected.lines().count().min(actual.lines().count()) + 1);
    Err(format!("{name} differs from golden starting at line {line}"))
}

const TEXT_CHARS: &[char] = &[
    'a', 'b', 'c', 'x', 'y', 'z', 'A', 'Q', '0', '7', ' ', ' ', '<', '>', '&', '"', '\'', '#', '=', '|', '[', ']',
    'é', 'ü', '→', '—', '/', ':', ';', ',', '.', '%',
];

pub fn text<R: Rng>(rng: &mut R, max_len: usize) -> String {
    let len = rng.random_range(1..=max_len);
    let raw: String = (0..len).map(|_| *TEXT_CHARS.choose(rng).unwrap()).collect();
    let trimmed = raw.trim();
    if trimmed.is_empty() { "x".to_owned() } else { trimmed.to_owned() }
}

fn url<R: Rng>(rng: &mut R) -> String {
    const PATH: &[u8] = b"abcdefxyz0123456789-_./?=&%~";
    let len = rng.random_range(0..20);
    let path: String = (0..len).map(|_| *PATH.choose(rng).unwrap() as char).collect();
    let scheme = if rng.random_bool(0.5) { "https" } else { "http" };
    format!("{scheme}://example.org/{path}")
}

pub fn date<R: Rng>(rng: &mut R, years: std::ops::RangeInclusive<i32>) -> CalendarDate {
    let year = rng.random_range(years);
    match rng.random_range(0..3) {
        0 => CalendarDate::year(year),
        1 => CalendarDate::year_month(year, rng.random_range(1..=12)),
        _ => {
            let month = rng.random_range(1..=12);
            let day = rng.random_range(1..=itinerarium::model::days_in_month(year, month));
            CalendarDate::ymd(year, month, day)
        }
    }
}

/// Coordinates on the six-decimal grid so they survive serialization.
fn coordinate<R: Rng>(rng: &mut R, limit: i64) -> f64 {
    rng.random_range(-limit * 1_000_000..=limit * 1_000_000) as f64 / 1e6
}

pub struct Shape {
    pub max_places: usize,
    pub max_stays: usize,
    /// Half-width in degrees of the region places are drawn from; `None` is the globe.
    pub region_deg: Option<f64>,
}

impl Default for Shape {
    fn default() -> Self {
        Self { max_places: 6, max_stays: 8, region_deg: None }
    }
}

/// A random document with no validation errors (overlap warnings allowed).
pub fn valid_doc<R: Rng>(rng: &mut R, shape: &Shape) -> ItineraryDoc {
    let place_count = rng.random_range(1..=shape.max_places);
    let mut letters: Vec<char> = ('A'..='Z').collect();
    let (center_lat, center_lon) = (coordinate(rng, 60), coordinate(rng, 170));
    let places: Vec<Place> = (0..place_count)
        .map(|i| {
            let point = match shape.region_deg {
                None => GeoPoint::new(coordinate(rng, 90), coordinate(rng, 180)),
                Some(r) => {
                    let micro = (r * 1e6) as i64;
                    GeoPoint::new(
                        center_lat + rng.random_range(-micro..=micro) as f64 / 1e6,
                        center_lon + rng.random_range(-micro..=micro) as f64 / 1e6,
                    )
                }
            };
            let point = GeoPoint::new((point.lat * 1e6).round() / 1e6, (point.lon * 1e6).round() / 1e6);
            let mut place = Place::new(format!("p{i}-{}", rng.random_range(0..1000)), text(rng, 24), point);
            if rng.random_bool(0.4) && !letters.is_empty() {
                let k = rng.random_range(0..letters.len());
                place.label = Some(letters.swap_remove(k));
            }
            if rng.random_bool(0.5) {
                place.description = Some(text(rng, 60));
            }
            for _ in 0..rng.random_range(0..3) {
                let kind = *[MediaKind::Image, MediaKind::Youtube, MediaKind::Link].choose(rng).unwrap();
                let caption = rng.random_bool(0.5).then(|| text(rng, 20));
                place.media.push(MediaRef { kind, url: url(rng), caption });
            }
            place
        })
        .collect();

    let stays = (0..rng.random_range(1..=shape.max_stays))
        .map(|_| {
            let place = places.choose(rng).unwrap().id.clone();
            let a = date(rng, 1500..=1800);
            let b = date(rng, 1500..=1800);
            let (from, to) = if a.first_day() <= b.last_day() { (a, b) } else { (b, a) };
            let mut stay = Stay::new(place, from, to);
            if rng.random_bool(0.3) {
                stay.note = Some(text(rng, 30));
            }
            stay
        })
        .collect();

    let doc = ItineraryDoc { title: text(rng, 30), subject: text(rng, 20), places, stays };
    let diagnostics = validate(&doc, false);
    assert!(!has_errors(&diagnostics), "generator produced an invalid document: {diagnostics:?}");
    doc
}

/// Random UTF-8 text biased towards `.itn` syntax fragments.
pub fn fuzz_input<R: Rng>(rng: &mut R) -> String {
    const FRAGMENTS: &[&str] = &[
        "[header]\n", "[place]\n", "[stay]\n", "[", "]", "=", " = ", "\n", "\r\n", "#", "title", "subject", "id",
        "name", "lat", "lon", "label", "media", "image ", "youtube ", "https://x", " | ", "place", "from", "to",
        "note", "52.8", "-0.6", "1642", "-12-25", "-", "nan", "1e400", "\u{feff}", "é", "→", "\0", "\t",
    ];
    let mut out = String::new();
    for _ in 0..rng.random_range(0..60) {
        if rng.random_bool(0.7) {
            out.push_str(FRAGMENTS.choose(rng).unwrap());
        } else {
            out.push(rng.random::<char>());
        }
    }
    out
}
