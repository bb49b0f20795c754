//! The `.itn` itinerarium text format.
//!
//! ```text
//! # comments and blank lines are ignored
//! [header]
//! title = A tour about a life
//! subject = Somebody
//!
//! [place]
//! id = home
//! name = Birthplace
//! lat = 52.809100
//! lon = -0.628100
//! label = A
//! description = Where it started.
//! media = image https://example.org/home.jpg | The house
//!
//! [stay]
//! place = home
//! from = 1642-12-25
//! to = 1655
//! note = Childhood
//! ```
//!
//! Sections may appear in any order and `[place]`/`[stay]` may repeat.
//! Keys are exact; unknown keys are errors. Values are trimmed.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::model::{
    CalendarDate, Code, Diagnostic, GeoPoint, ItineraryDoc, MediaKind, MediaRef, Place, Stay,
    Target,
};

pub use crate::model::SourceSpan;

/// Where each section and key of a parsed document came from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SourceMap {
    pub header: Option<SectionLines>,
    pub places: Vec<SectionLines>,
    pub stays: Vec<SectionLines>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SectionLines {
    /// Line of the `[section]` header.
    pub line: usize,
    /// Line of the first occurrence of each key.
    pub keys: HashMap<&'static str, usize>,
}

impl SectionLines {
    fn line_of(&self, key: Option<&'static str>) -> usize {
        key.and_then(|k| self.keys.get(k).copied()).unwrap_or(self.line)
    }
}

impl SourceMap {
    pub fn line_for(&self, target: Target) -> Option<usize> {
        match target {
            Target::Header { key } => self.header.as_ref().map(|s| s.line_of(key)),
            Target::Place { index, key } => self.places.get(index).map(|s| s.line_of(key)),
            Target::Stay { index, key } => self.stays.get(index).map(|s| s.line_of(key)),
        }
    }

    /// Gives line numbers to diagnostics that only know their target.
    pub fn locate(&self, diagnostics: &mut [Diagnostic]) {
        for diag in diagnostics.iter_mut().filter(|d| d.span.is_none()) {
            let line = diag.target.and_then(|t| self.line_for(t)).unwrap_or(1);
            diag.span = Some(SourceSpan::new(line, 1));
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub doc: ItineraryDoc,
    pub source_map: SourceMap,
}

pub fn parse_document(text: &str) -> Result<ItineraryDoc, Vec<Diagnostic>> {
    parse_with_source_map(text).map(|p| p.doc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Header,
    Place,
    Stay,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Header => "header",
            Kind::Place => "place",
            Kind::Stay => "stay",
        }
    }

    fn scalar_keys(self) -> &'static [&'static str] {
        match self {
            Kind::Header => &["title", "subject"],
            Kind::Place => &["id", "name", "lat", "lon", "label", "description"],
            Kind::Stay => &["place", "from", "to", "note"],
        }
    }

    fn required_keys(self) -> &'static [&'static str] {
        match self {
            Kind::Header => &["title", "subject"],
            Kind::Place => &["id", "name", "lat", "lon"],
            Kind::Stay => &["place", "from", "to"],
        }
    }

    fn intern(self, key: &str) -> Option<&'static str> {
        if self == Kind::Place && key == "media" {
            return Some("media");
        }
        self.scalar_keys().iter().copied().find(|k| *k == key)
    }
}

struct Entry<'a> {
    value: &'a str,
    span: SourceSpan,
}

struct Section<'a> {
    kind: Kind,
    line: usize,
    scalars: HashMap<&'static str, Entry<'a>>,
    media: Vec<Entry<'a>>,
}

impl<'a> Section<'a> {
    fn new(kind: Kind, line: usize) -> Self {
        Self { kind, line, scalars: HashMap::new(), media: Vec::new() }
    }

    fn lines(&self) -> SectionLines {
        let mut keys: HashMap<&'static str, usize> =
            self.scalars.iter().map(|(k, e)| (*k, e.span.line)).collect();
        if let Some(first) = self.media.first() {
            keys.insert("media", first.span.line);
        }
        SectionLines { line: self.line, keys }
    }
}

/// Parses and also reports where every section and key was found.
pub fn parse_with_source_map(text: &str) -> Result<Parsed, Vec<Diagnostic>> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut diags = Vec::new();
    let mut sections: Vec<Section<'_>> = Vec::new();
    // False while skipping the body of an unrecognised section header.
    let mut in_known_section = false;

    for (index, raw) in text.split('\n').enumerate() {
        let line_no = index + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        let column = line[..indent].chars().count() + 1;
        let span = SourceSpan::new(line_no, column);

        if trimmed.starts_with('[') {
            let kind = match trimmed {
                "[header]" => Some(Kind::Header),
                "[place]" => Some(Kind::Place),
                "[stay]" => Some(Kind::Stay),
                _ => None,
            };
            match kind {
                Some(kind) => {
                    sections.push(Section::new(kind, line_no));
                    in_known_section = true;
                }
                None => {
                    diags.push(
                        Diagnostic::error(Code::Syntax, format!("unknown section header {trimmed:?}"))
                            .at(span),
                    );
                    in_known_section = false;
                }
            }
            continue;
        }

        let Some((key, value)) = trimmed.split_once('=') else {
            diags.push(Diagnostic::error(Code::Syntax, "expected `key = value`, a [section] header or a # comment").at(span));
            continue;
        };
        let key = key.trim_end();
        let value = value.trim_start();
        if key.is_empty() {
            diags.push(Diagnostic::error(Code::Syntax, "missing key before `=`").at(span));
            continue;
        }
        if !in_known_section {
            if sections.is_empty() {
                diags.push(Diagnostic::error(Code::Syntax, format!("key {key:?} appears before any section")).at(span));
            }
            continue;
        }
        let section = sections.last_mut().expect("known section is open");
        let Some(key) = section.kind.intern(key) else {
            diags.push(
                Diagnostic::error(Code::UnknownKey, format!("unknown key {key:?} in [{}]", section.kind.name()))
                    .at(span),
            );
            continue;
        };
        let entry = Entry { value, span };
        if key == "media" {
            section.media.push(entry);
        } else if let Some(first) = section.scalars.get(key) {
            diags.push(
                Diagnostic::error(
                    Code::DuplicateKey,
                    format!("key {key:?} repeated (first given on line {})", first.span.line),
                )
                .at(span),
            );
        } else {
            section.scalars.insert(key, entry);
        }
    }

    let mut header: Option<(String, String)> = None;
    let mut source_map = SourceMap::default();
    let mut places = Vec::new();
    let mut stays = Vec::new();

    for section in &sections {
        let section_span = SourceSpan::new(section.line, 1);
        let missing: Vec<&str> = section
            .kind
            .required_keys()
            .iter()
            .copied()
            .filter(|k| !section.scalars.contains_key(k))
            .collect();
        if !missing.is_empty() {
            diags.push(
                Diagnostic::error(
                    Code::MissingRequired,
                    format!("[{}] is missing required key(s): {}", section.kind.name(), missing.join(", ")),
                )
                .at(section_span),
            );
        }
        let get = |key: &str| section.scalars.get(key);

        match section.kind {
            Kind::Header => {
                if header.is_some() {
                    diags.push(Diagnostic::error(Code::Syntax, "more than one [header] section").at(section_span));
                    continue;
                }
                if let (Some(title), Some(subject)) = (get("title"), get("subject")) {
                    header = Some((title.value.to_owned(), subject.value.to_owned()));
                    source_map.header = Some(section.lines());
                }
            }
            Kind::Place => {
                let lat = get("lat").and_then(|e| parse_coordinate(e, "lat", &mut diags));
                let lon = get("lon").and_then(|e| parse_coordinate(e, "lon", &mut diags));
                let label = get("label").and_then(|e| {
                    let mut chars = e.value.chars();
                    match (chars.next(), chars.next()) {
                        (Some(c), None) => Some(c),
                        _ => {
                            diags.push(
                                Diagnostic::error(Code::Syntax, format!("label {:?} must be a single letter", e.value))
                                    .at(e.span),
                            );
                            None
                        }
                    }
                });
                let media: Vec<MediaRef> = section
                    .media
                    .iter()
                    .filter_map(|e| match parse_media(e.value) {
                        Ok(m) => Some(m),
                        Err(msg) => {
                            diags.push(Diagnostic::error(Code::Syntax, msg).at(e.span));
                            None
                        }
                    })
                    .collect();
                if let (Some(id), Some(name), Some(lat), Some(lon)) = (get("id"), get("name"), lat, lon) {
                    places.push(Place {
                        id: id.value.to_owned(),
                        name: name.value.to_owned(),
                        point: GeoPoint::new(lat, lon),
                        description: get("description").map(|e| e.value.to_owned()),
                        media,
                        label,
                    });
                    source_map.places.push(section.lines());
                }
            }
            Kind::Stay => {
                let from = get("from").and_then(|e| parse_date(e, "from", &mut diags));
                let to = get("to").and_then(|e| parse_date(e, "to", &mut diags));
                if let (Some(place), Some(from), Some(to)) = (get("place"), from, to) {
                    stays.push(Stay {
                        place_id: place.value.to_owned(),
                        from,
                        to,
                        note: get("note").map(|e| e.value.to_owned()),
                    });
                    source_map.stays.push(section.lines());
                }
            }
        }
    }

    if !sections.iter().any(|s| s.kind == Kind::Header) {
        diags.push(
            Diagnostic::error(Code::MissingRequired, "document has no [header] section with title and subject")
                .at(SourceSpan::new(1, 1)),
        );
    }

    if !diags.is_empty() {
        diags.sort_by_key(|d| d.span);
        return Err(diags);
    }
    let (title, subject) = header.expect("header present when no diagnostics");
    Ok(Parsed {
        doc: ItineraryDoc { title, subject, places, stays },
        source_map,
    })
}

fn parse_coordinate(entry: &Entry<'_>, key: &str, diags: &mut Vec<Diagnostic>) -> Option<f64> {
    match entry.value.parse::<f64>() {
        Ok(v) if v.is_finite() => Some(v),
        _ => {
            diags.push(
                Diagnostic::error(Code::BadNumber, format!("{key} {:?} is not a decimal number", entry.value))
                    .at(entry.span),
            );
            None
        }
    }
}

fn parse_date(entry: &Entry<'_>, key: &str, diags: &mut Vec<Diagnostic>) -> Option<CalendarDate> {
    match entry.value.parse::<CalendarDate>() {
        Ok(d) => Some(d),
        Err(e) => {
            diags.push(Diagnostic::error(Code::BadDate, format!("{key} {:?}: {e}", entry.value)).at(entry.span));
            None
        }
    }
}

/// `<kind> <url> [| caption]`
fn parse_media(value: &str) -> Result<MediaRef, String> {
    let (head, caption) = match value.split_once('|') {
        Some((head, caption)) => {
            let caption = caption.trim();
            (head, (!caption.is_empty()).then(|| caption.to_owned()))
        }
        None => (value, None),
    };
    let mut words = head.split_whitespace();
    let (Some(kind), Some(url), None) = (words.next(), words.next(), words.next()) else {
        return Err(format!("media {value:?} must look like `<kind> <url> [| caption]`"));
    };
    let kind = kind
        .parse::<MediaKind>()
        .map_err(|_| format!("media kind {kind:?} must be one of image, youtube, link"))?;
    Ok(MediaRef { kind, url: url.to_owned(), caption })
}

/// Canonical `.itn` text for a validated document.
///
/// Places come before stays, keys follow the grammar's declaration order
/// and coordinates carry exactly six decimals.
pub fn serialize_document(doc: &ItineraryDoc) -> String {
    let mut out = String::new();
    out.push_str("[header]\n");
    let _ = writeln!(out, "title = {}", doc.title);
    let _ = writeln!(out, "subject = {}", doc.subject);

    for place in &doc.places {
        out.push_str("\n[place]\n");
        let _ = writeln!(out, "id = {}", place.id);
        let _ = writeln!(out, "name = {}", place.name);
        let _ = writeln!(out, "lat = {:.6}", place.point.lat);
        let _ = writeln!(out, "lon = {:.6}", place.point.lon);
        if let Some(label) = place.label {
            let _ = writeln!(out, "label = {label}");
        }
        if let Some(description) = &place.description {
            let _ = writeln!(out, "description = {description}");
        }
        for media in &place.media {
            let _ = write!(out, "media = {} {}", media.kind, media.url);
            if let Some(caption) = &media.caption {
                let _ = write!(out, " | {caption}");
            }
            out.push('\n');
        }
    }

    for stay in &doc.stays {
        out.push_str("\n[stay]\n");
        let _ = writeln!(out, "place = {}", stay.place_id);
        let _ = writeln!(out, "from = {}", stay.from);
        let _ = writeln!(out, "to = {}", stay.to);
        if let Some(note) = &stay.note {
            let _ = writeln!(out, "note = {note}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[header]
title = Tour
subject = Someone

[place]
id = home
name = Home
lat = 52.8091
lon = -0.6281

[stay]
place = home
from = 1642
to = 1655
";

    fn codes(diags: &[Diagnostic]) -> Vec<&'static str> {
        diags.iter().map(|d| d.code.as_str()).collect()
    }

    #[test]
    fn empty_input_lacks_header() {
        let diags = parse_document("").unwrap_err();
        assert!(codes(&diags).contains(&"missing-required"));
        assert!(diags.iter().all(|d| d.line() == Some(1)));
    }

    #[test]
    fn minimal_document_echoes_fields() {
        let doc = parse_document(MINIMAL).unwrap();
        assert_eq!(doc.title, "Tour");
        assert_eq!(doc.subject, "Someone");
        assert_eq!(doc.places.len(), 1);
        let place = &doc.places[0];
        assert_eq!((place.id.as_str(), place.name.as_str()), ("home", "Home"));
        assert_eq!(place.point, GeoPoint::new(52.8091, -0.6281));
        assert_eq!(place.label, None);
        assert_eq!(place.description, None);
        assert_eq!(doc.stays, vec![Stay::new("home", CalendarDate::year(1642), CalendarDate::year(1655))]);
    }

    #[test]
    fn bad_number_points_at_line() {
        let text = MINIMAL.replace("lat = 52.8091", "lat = 52.80.91");
        let diags = parse_document(&text).unwrap_err();
        assert_eq!(codes(&diags), ["bad-number"]);
        assert_eq!(diags[0].line(), Some(8));
    }

    #[test]
    fn non_finite_numbers_are_rejected() {
        for bad in ["nan", "inf", "-infinity", "1e999"] {
            let text = MINIMAL.replace("lon = -0.6281", &format!("lon = {bad}"));
            assert_eq!(codes(&parse_document(&text).unwrap_err()), ["bad-number"], "{bad}");
        }
    }

    #[test]
    fn error_codes() {
        let text = "\
[header]
title = a
title = b
subject = s
colour = red
nonsense line
[place]
id = x
[stay]
place = x
from = 1600-13
to = 1700
[bogus]
junk = 1
";
        let diags = parse_document(text).unwrap_err();
        let found: Vec<(usize, &str)> = diags.iter().map(|d| (d.line().unwrap(), d.code.as_str())).collect();
        assert_eq!(
            found,
            [
                (3, "duplicate-key"),
                (5, "unknown-key"),
                (6, "syntax"),
                (7, "missing-required"),
                (11, "bad-date"),
                (13, "syntax"),
            ]
        );
    }

    #[test]
    fn key_before_section() {
        let diags = parse_document(&format!("title = x\n{MINIMAL}")).unwrap_err();
        assert_eq!(codes(&diags), ["syntax"]);
        assert_eq!(diags[0].line(), Some(1));
    }

    #[test]
    fn second_header_is_an_error() {
        let text = format!("{MINIMAL}[header]\ntitle = x\nsubject = y\n");
        assert_eq!(codes(&parse_document(&text).unwrap_err()), ["syntax"]);
    }

    #[test]
    fn media_lines() {
        let text = MINIMAL.replace(
            "lon = -0.6281\n",
            "lon = -0.6281\nmedia = image https://e.org/a.jpg | A | picture\nmedia = youtube https://youtu.be/x\nmedia = link  https://e.org\n",
        );
        let doc = parse_document(&text).unwrap();
        let media = &doc.places[0].media;
        assert_eq!(media.len(), 3);
        assert_eq!(media[0].kind, MediaKind::Image);
        assert_eq!(media[0].caption.as_deref(), Some("A | picture"));
        assert_eq!(media[1].caption, None);
        assert_eq!(media[2].url, "https://e.org");

        for bad in ["video https://x", "image", "image a b"] {
            let text = MINIMAL.replace("lon = -0.6281\n", &format!("lon = -0.6281\nmedia = {bad}\n"));
            assert_eq!(codes(&parse_document(&text).unwrap_err()), ["syntax"], "{bad}");
        }
    }

    #[test]
    fn crlf_bom_and_indentation() {
        let text = format!("\u{feff}{}", MINIMAL.replace('\n', "\r\n").replace("name = Home", "   name   =   Home  "));
        assert_eq!(parse_document(&text).unwrap(), parse_document(MINIMAL).unwrap());
    }

    #[test]
    fn source_map_locates_validation_diagnostics() {
        let text = MINIMAL.replace("place = home", "place = away");
        let parsed = parse_with_source_map(&text).unwrap();
        let mut diags = crate::model::validate(&parsed.doc, false);
        parsed.source_map.locate(&mut diags);
        assert_eq!(codes(&diags), ["unknown-place"]);
        assert_eq!(diags[0].line(), Some(12));
    }

    #[test]
    fn fixed_precision_coordinates() {
        let mut doc = parse_document(MINIMAL).unwrap();
        doc.places[0].point.lat = 52.8;
        let text = serialize_document(&doc);
        assert!(text.contains("lat = 52.800000\n"));
        assert!(text.contains("lon = -0.628100\n"));
    }

    #[test]
    fn minimal_round_trip() {
        let doc = parse_document(MINIMAL).unwrap();
        assert_eq!(parse_document(&serialize_document(&doc)).unwrap(), doc);
    }
}
