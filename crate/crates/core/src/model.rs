//! Domain types for an itinerarium and the document-level validator.
//!
//! Everything here is a plain value. [`validate`] never fails: it reports
//! every invariant violation it finds as a [`Diagnostic`], and a document is
//! emission-ready exactly when no error diagnostics come back.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

/// A WGS84 position in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    pub const fn new(lat: f64, lon: f64) -> Self {
        Self { lat, lon }
    }

    pub fn lat_in_range(&self) -> bool {
        (-90.0..=90.0).contains(&self.lat)
    }

    pub fn lon_in_range(&self) -> bool {
        (-180.0..=180.0).contains(&self.lon)
    }

    pub fn is_valid(&self) -> bool {
        self.lat_in_range() && self.lon_in_range()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MediaKind {
    Image,
    Youtube,
    Link,
}

impl MediaKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MediaKind::Image => "image",
            MediaKind::Youtube => "youtube",
            MediaKind::Link => "link",
        }
    }
}

impl FromStr for MediaKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "image" => Ok(MediaKind::Image),
            "youtube" => Ok(MediaKind::Youtube),
            "link" => Ok(MediaKind::Link),
            _ => Err(()),
        }
    }
}

impl fmt::Display for MediaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A picture, video or web page attached to a place's balloon.
#[derive(Debug, Clone, PartialEq)]
pub struct MediaRef {
    pub kind: MediaKind,
    pub url: String,
    pub caption: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Place {
    pub id: String,
    pub name: String,
    pub point: GeoPoint,
    pub description: Option<String>,
    pub media: Vec<MediaRef>,
    /// Marker letter for map sketches.
    pub label: Option<char>,
}

impl Place {
    pub fn new(id: impl Into<String>, name: impl Into<String>, point: GeoPoint) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            point,
            description: None,
            media: Vec::new(),
            label: None,
        }
    }
}

/// A proleptic Gregorian date label at year, month or day precision.
///
/// Dates are labels: nothing in this crate converts between calendars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CalendarDate {
    pub year: i32,
    pub month: Option<u8>,
    pub day: Option<u8>,
}

/// Largest absolute year accepted by the date parser.
pub const MAX_ABS_YEAR: i32 = 999_999;

/// A fully specified day, ordered chronologically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DayKey {
    pub year: i32,
    pub month: u8,
    pub day: u8,
}

impl DayKey {
    /// Days since 1970-01-01 in the proleptic Gregorian calendar.
    pub fn day_number(&self) -> i64 {
        days_from_civil(i64::from(self.year), u32::from(self.month), u32::from(self.day))
    }
}

// Howard Hinnant's days_from_civil.
fn days_from_civil(year: i64, month: u32, day: u32) -> i64 {
    let y = if month <= 2 { year - 1 } else { year };
    let era = y.div_euclid(400);
    let yoe = y - era * 400;
    let m = i64::from(month);
    let mp = if m > 2 { m - 3 } else { m + 9 };
    let doy = (153 * mp + 2) / 5 + i64::from(day) - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + doe - 719_468
}

pub fn is_leap_year(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

pub fn days_in_month(year: i32, month: u8) -> u8 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap_year(year) => 29,
        2 => 28,
        _ => 0,
    }
}

impl CalendarDate {
    pub const fn year(year: i32) -> Self {
        Self { year, month: None, day: None }
    }

    pub const fn year_month(year: i32, month: u8) -> Self {
        Self { year, month: Some(month), day: None }
    }

    pub const fn ymd(year: i32, month: u8, day: u8) -> Self {
        Self { year, month: Some(month), day: Some(day) }
    }

    pub fn is_valid(&self) -> bool {
        if self.year.abs() > MAX_ABS_YEAR {
            return false;
        }
        match (self.month, self.day) {
            (None, None) => true,
            (None, Some(_)) => false,
            (Some(m), None) => (1..=12).contains(&m),
            (Some(m), Some(d)) => (1..=12).contains(&m) && d >= 1 && d <= days_in_month(self.year, m),
        }
    }

    /// The first day covered by this date at its stated precision.
    pub fn first_day(&self) -> DayKey {
        DayKey {
            year: self.year,
            month: self.month.unwrap_or(1),
            day: self.day.unwrap_or(1),
        }
    }

    /// The last day covered by this date at its stated precision.
    pub fn last_day(&self) -> DayKey {
        let month = self.month.unwrap_or(12);
        DayKey {
            year: self.year,
            month,
            day: self.day.unwrap_or_else(|| days_in_month(self.year, month)),
        }
    }
}

impl fmt::Display for CalendarDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.year < 0 {
            write!(f, "-{:04}", self.year.unsigned_abs())?;
        } else {
            write!(f, "{:04}", self.year)?;
        }
        if let Some(m) = self.month {
            write!(f, "-{m:02}")?;
        }
        if let Some(d) = self.day {
            write!(f, "-{d:02}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DateParseError {
    #[error("expected YYYY, YYYY-MM or YYYY-MM-DD")]
    Format,
    #[error("year out of range")]
    Year,
    #[error("month must be 01-12")]
    Month,
    #[error("day {day} is not valid for {year:04}-{month:02}")]
    Day { year: i32, month: u8, day: u8 },
}

impl FromStr for CalendarDate {
    type Err = DateParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (negative, rest) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s),
        };
        let mut parts = rest.split('-');
        let year_part = parts.next().unwrap_or_default();
        let month_part = parts.next();
        let day_part = parts.next();
        if parts.next().is_some() {
            return Err(DateParseError::Format);
        }

        if year_part.is_empty() || !year_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(DateParseError::Format);
        }
        if year_part.len() > 6 {
            return Err(DateParseError::Year);
        }
        let magnitude: i32 = year_part.parse().map_err(|_| DateParseError::Year)?;
        let year = if negative { -magnitude } else { magnitude };

        let two_digits = |p: &str| -> Result<u8, DateParseError> {
            if p.len() == 2 && p.bytes().all(|b| b.is_ascii_digit()) {
                Ok(p.parse().expect("two ascii digits"))
            } else {
                Err(DateParseError::Format)
            }
        };
        let month = month_part.map(two_digits).transpose()?;
        let day = day_part.map(two_digits).transpose()?;

        if let Some(m) = month {
            if !(1..=12).contains(&m) {
                return Err(DateParseError::Month);
            }
            if let Some(d) = day {
                if d == 0 || d > days_in_month(year, m) {
                    return Err(DateParseError::Day { year, month: m, day: d });
                }
            }
        }
        Ok(CalendarDate { year, month, day })
    }
}

/// One dated interval of residence at one place.
#[derive(Debug, Clone, PartialEq)]
pub struct Stay {
    pub place_id: String,
    pub from: CalendarDate,
    pub to: CalendarDate,
    pub note: Option<String>,
}

impl Stay {
    pub fn new(place_id: impl Into<String>, from: CalendarDate, to: CalendarDate) -> Self {
        Self { place_id: place_id.into(), from, to, note: None }
    }

    /// Whole days between the first day of `from` and the last day of `to`.
    pub fn length_days(&self) -> i64 {
        (self.to.last_day().day_number() - self.from.first_day().day_number()).max(0)
    }

    fn overlaps(&self, other: &Stay) -> bool {
        self.from.first_day() <= other.to.last_day() && other.from.first_day() <= self.to.last_day()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItineraryDoc {
    pub title: String,
    pub subject: String,
    pub places: Vec<Place>,
    pub stays: Vec<Stay>,
}

impl ItineraryDoc {
    pub fn place(&self, id: &str) -> Option<&Place> {
        self.places.iter().find(|p| p.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// 1-based position in `.itn` source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize) -> Self {
        debug_assert!(line >= 1 && column >= 1);
        Self { line, column }
    }
}

/// Machine-readable diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Code {
    Syntax,
    UnknownKey,
    DuplicateKey,
    BadNumber,
    BadDate,
    MissingRequired,
    EmptyTitle,
    EmptySubject,
    NoPlaces,
    NoStays,
    BadId,
    DuplicateId,
    EmptyName,
    LatOutOfRange,
    LonOutOfRange,
    BadLabel,
    DuplicateLabel,
    BadUrl,
    BadText,
    InvalidDate,
    ReversedStay,
    UnknownPlace,
    OverlappingStays,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::Syntax => "syntax",
            Code::UnknownKey => "unknown-key",
            Code::DuplicateKey => "duplicate-key",
            Code::BadNumber => "bad-number",
            Code::BadDate => "bad-date",
            Code::MissingRequired => "missing-required",
            Code::EmptyTitle => "empty-title",
            Code::EmptySubject => "empty-subject",
            Code::NoPlaces => "no-places",
            Code::NoStays => "no-stays",
            Code::BadId => "bad-id",
            Code::DuplicateId => "duplicate-id",
            Code::EmptyName => "empty-name",
            Code::LatOutOfRange => "lat-out-of-range",
            Code::LonOutOfRange => "lon-out-of-range",
            Code::BadLabel => "bad-label",
            Code::DuplicateLabel => "duplicate-label",
            Code::BadUrl => "bad-url",
            Code::BadText => "bad-text",
            Code::InvalidDate => "invalid-date",
            Code::ReversedStay => "reversed-stay",
            Code::UnknownPlace => "unknown-place",
            Code::OverlappingStays => "overlapping-stays",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The document element a validation diagnostic is about, so a source map
/// can later attach a line number to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Header { key: Option<&'static str> },
    Place { index: usize, key: Option<&'static str> },
    Stay { index: usize, key: Option<&'static str> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Option<SourceSpan>,
    pub code: Code,
    pub message: String,
    pub target: Option<Target>,
}

impl Diagnostic {
    pub fn error(code: Code, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            span: None,
            code,
            message: message.into(),
            target: None,
        }
    }

    pub fn warning(code: Code, message: impl Into<String>) -> Self {
        Self { severity: Severity::Warning, ..Self::error(code, message) }
    }

    pub fn at(mut self, span: SourceSpan) -> Self {
        self.span = Some(span);
        self
    }

    pub fn about(mut self, target: Target) -> Self {
        self.target = Some(target);
        self
    }

    pub fn line(&self) -> Option<usize> {
        self.span.map(|s| s.line)
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line() {
            write!(f, "{line}: ")?;
        }
        write!(f, "{}: {}: {}", self.severity, self.code, self.message)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

pub fn is_valid_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_' || b == b'-')
}

/// Free text must survive a trip through one `key = value` line.
fn is_line_safe(text: &str) -> bool {
    !text.is_empty() && text.trim() == text && !text.chars().any(char::is_control)
}

fn is_valid_url(url: &str) -> bool {
    let rest = url
        .strip_prefix("http://")
        .or_else(|| url.strip_prefix("https://"));
    match rest {
        Some(r) => !r.is_empty() && !url.chars().any(|c| c.is_whitespace() || c.is_control() || c == '|'),
        None => false,
    }
}

/// Checks every document invariant.
///
/// Overlapping stays are reported as warnings, or as errors when `strict`.
pub fn validate(doc: &ItineraryDoc, strict: bool) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    let header = |key| Target::Header { key: Some(key) };
    if doc.title.is_empty() {
        out.push(Diagnostic::error(Code::EmptyTitle, "title is empty").about(header("title")));
    } else if !is_line_safe(&doc.title) {
        out.push(bad_text("title").about(header("title")));
    }
    if doc.subject.is_empty() {
        out.push(Diagnostic::error(Code::EmptySubject, "subject is empty").about(header("subject")));
    } else if !is_line_safe(&doc.subject) {
        out.push(bad_text("subject").about(header("subject")));
    }
    if doc.places.is_empty() {
        out.push(Diagnostic::error(Code::NoPlaces, "document lists no places").about(Target::Header { key: None }));
    }
    if doc.stays.is_empty() {
        out.push(Diagnostic::error(Code::NoStays, "document lists no stays").about(Target::Header { key: None }));
    }

    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut labels: HashMap<char, usize> = HashMap::new();
    for (index, place) in doc.places.iter().enumerate() {
        let at = |key| Target::Place { index, key: Some(key) };
        if !is_valid_id(&place.id) {
            out.push(
                Diagnostic::error(Code::BadId, format!("place id {:?} must match [a-z0-9_-]+", place.id))
                    .about(at("id")),
            );
        } else if let Some(first) = ids.get(place.id.as_str()) {
            out.push(
                Diagnostic::error(
                    Code::DuplicateId,
                    format!("place id {:?} already used by place #{}", place.id, first + 1),
                )
                .about(at("id")),
            );
        } else {
            ids.insert(&place.id, index);
        }

        if place.name.is_empty() {
            out.push(Diagnostic::error(Code::EmptyName, format!("place {:?} has an empty name", place.id)).about(at("name")));
        } else if !is_line_safe(&place.name) {
            out.push(bad_text("name").about(at("name")));
        }

        if !place.point.lat_in_range() {
            out.push(
                Diagnostic::error(Code::LatOutOfRange, format!("latitude {} outside [-90, 90]", place.point.lat))
                    .about(at("lat")),
            );
        }
        if !place.point.lon_in_range() {
            out.push(
                Diagnostic::error(Code::LonOutOfRange, format!("longitude {} outside [-180, 180]", place.point.lon))
                    .about(at("lon")),
            );
        }

        if let Some(label) = place.label {
            if !label.is_ascii_uppercase() {
                out.push(
                    Diagnostic::error(Code::BadLabel, format!("label {label:?} must be a single letter A-Z"))
                        .about(at("label")),
                );
            } else if let Some(first) = labels.get(&label) {
                out.push(
                    Diagnostic::error(
                        Code::DuplicateLabel,
                        format!("label {label} already used by place #{}", first + 1),
                    )
                    .about(at("label")),
                );
            } else {
                labels.insert(label, index);
            }
        }

        if let Some(text) = &place.description {
            if !is_line_safe(text) {
                out.push(bad_text("description").about(at("description")));
            }
        }
        for media in &place.media {
            if !is_valid_url(&media.url) {
                out.push(
                    Diagnostic::error(Code::BadUrl, format!("media url {:?} must be an absolute http(s) URL", media.url))
                        .about(at("media")),
                );
            }
            if let Some(caption) = &media.caption {
                if !is_line_safe(caption) {
                    out.push(bad_text("media caption").about(at("media")));
                }
            }
        }
    }

    let known: HashSet<&str> = doc.places.iter().map(|p| p.id.as_str()).collect();
    let mut dated = Vec::with_capacity(doc.stays.len());
    for (index, stay) in doc.stays.iter().enumerate() {
        let at = |key| Target::Stay { index, key: Some(key) };
        if !known.contains(stay.place_id.as_str()) {
            out.push(
                Diagnostic::error(Code::UnknownPlace, format!("stay refers to unknown place {:?}", stay.place_id))
                    .about(at("place")),
            );
        }
        let mut dates_ok = true;
        for (key, date) in [("from", &stay.from), ("to", &stay.to)] {
            if !date.is_valid() {
                dates_ok = false;
                out.push(Diagnostic::error(Code::InvalidDate, format!("{key} date {date:?} is not a valid date")).about(at(key)));
            }
        }
        if dates_ok {
            if stay.from.first_day() > stay.to.last_day() {
                out.push(
                    Diagnostic::error(Code::ReversedStay, format!("stay ends ({}) before it begins ({})", stay.to, stay.from))
                        .about(at("to")),
                );
            } else {
                dated.push(index);
            }
        }
        if let Some(note) = &stay.note {
            if !is_line_safe(note) {
                out.push(bad_text("note").about(at("note")));
            }
        }
    }

    for (n, &i) in dated.iter().enumerate() {
        for &j in &dated[n + 1..] {
            let (a, b) = (&doc.stays[i], &doc.stays[j]);
            if a.overlaps(b) {
                let message = format!(
                    "stay at {:?} ({}-{}) overlaps stay #{} at {:?} ({}-{})",
                    b.place_id,
                    b.from,
                    b.to,
                    i + 1,
                    a.place_id,
                    a.from,
                    a.to
                );
                let diag = if strict {
                    Diagnostic::error(Code::OverlappingStays, message)
                } else {
                    Diagnostic::warning(Code::OverlappingStays, message)
                };
                out.push(diag.about(Target::Stay { index: j, key: None }));
            }
        }
    }

    out
}

fn bad_text(field: &str) -> Diagnostic {
    Diagnostic::error(
        Code::BadText,
        format!("{field} must be non-empty single-line text without surrounding whitespace"),
    )
}
