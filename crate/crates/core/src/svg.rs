//! Static SVG map sketch: lettered markers on an equirectangular canvas, the
//! route in time order, and a time-line legend in the upper-left corner.

use std::collections::HashSet;

use crate::geo::{bounding_box, BBox};
use crate::model::{GeoPoint, ItineraryDoc};
use crate::timeline::Timeline;
use crate::xml::XmlWriter;

pub const SVG_NS: &str = "http://www.w3.org/2000/svg";

/// Half-size in degrees given to a box dimension with zero extent.
const DEGENERATE_PAD_DEG: f64 = 0.01;
const PAD_FRACTION: f64 = 0.1;
const LEGEND_LINE_PX: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SvgError {
    #[error("empty-timeline: nothing to draw")]
    EmptyTimeline,
    #[error("invalid sketch size: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SketchConfig {
    pub width_px: u32,
    pub height_px: u32,
    pub margin_px: u32,
    pub marker_radius_px: u32,
}

impl Default for SketchConfig {
    fn default() -> Self {
        Self { width_px: 800, height_px: 600, margin_px: 40, marker_radius_px: 8 }
    }
}

impl SketchConfig {
    pub fn check(&self) -> Result<(), SvgError> {
        let twice_margin = u64::from(self.margin_px) * 2;
        if u64::from(self.width_px) <= twice_margin {
            return Err(SvgError::Config(format!("width {} must exceed twice the margin", self.width_px)));
        }
        if u64::from(self.height_px) <= twice_margin {
            return Err(SvgError::Config(format!("height {} must exceed twice the margin", self.height_px)));
        }
        if self.marker_radius_px == 0 {
            return Err(SvgError::Config("marker radius must be positive".into()));
        }
        Ok(())
    }
}

/// Plate carrée mapping of a padded bounding box into the margined canvas,
/// one scale for both axes, centered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    frame: BBox,
    scale: f64,
    origin_x: f64,
    origin_y: f64,
}

fn pad(min: f64, max: f64) -> (f64, f64) {
    let span = max - min;
    if span > 0.0 {
        (min - PAD_FRACTION * span, max + PAD_FRACTION * span)
    } else {
        (min - DEGENERATE_PAD_DEG, max + DEGENERATE_PAD_DEG)
    }
}

impl Projection {
    pub fn fit(bbox: &BBox, cfg: &SketchConfig) -> Self {
        let (min_lat, max_lat) = pad(bbox.min_lat, bbox.max_lat);
        let (min_lon, max_lon) = pad(bbox.min_lon, bbox.max_lon);
        let frame = BBox { min_lat, max_lat, min_lon, max_lon };

        let margin = f64::from(cfg.margin_px);
        let avail_w = f64::from(cfg.width_px) - 2.0 * margin;
        let avail_h = f64::from(cfg.height_px) - 2.0 * margin;
        let scale = (avail_w / frame.lon_span()).min(avail_h / frame.lat_span());
        Self {
            frame,
            scale,
            origin_x: margin + (avail_w - frame.lon_span() * scale) / 2.0,
            origin_y: margin + (avail_h - frame.lat_span() * scale) / 2.0,
        }
    }

    /// Canvas position; y grows downward, so north is up.
    pub fn project(&self, p: GeoPoint) -> (f64, f64) {
        (
            self.origin_x + (p.lon - self.frame.min_lon) * self.scale,
            self.origin_y + (self.frame.max_lat - p.lat) * self.scale,
        )
    }
}

/// A, B, … Z, AA, AB, …
fn letters(mut n: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'A' + (n % 26) as u8);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// Marker labels in document order: the explicit `label` when present,
/// otherwise the next letter sequence not claimed by an explicit label.
pub fn marker_labels(doc: &ItineraryDoc) -> Vec<String> {
    let taken: HashSet<String> = doc.places.iter().filter_map(|p| p.label).map(String::from).collect();
    let mut auto = (0..).map(letters).filter(|l| !taken.contains(l));
    doc.places
        .iter()
        .map(|p| match p.label {
            Some(c) => c.to_string(),
            None => auto.next().expect("unbounded sequence"),
        })
        .collect()
}

fn px(v: f64) -> String {
    format!("{v:.2}")
}

pub fn emit_map_sketch(tl: &Timeline<'_>, cfg: &SketchConfig) -> Result<String, SvgError> {
    cfg.check()?;
    if tl.is_empty() {
        return Err(SvgError::EmptyTimeline);
    }
    let doc = tl.doc();
    let points: Vec<GeoPoint> = doc.places.iter().map(|p| p.point).collect();
    let bbox = bounding_box(&points).expect("a non-empty timeline implies places");
    let projection = Projection::fit(&bbox, cfg);
    let labels = marker_labels(doc);
    let label_of = |id: &str| {
        doc.places
            .iter()
            .position(|p| p.id == id)
            .map(|i| labels[i].as_str())
            .unwrap_or("?")
    };

    let (w, h) = (cfg.width_px.to_string(), cfg.height_px.to_string());
    let view_box = format!("0 0 {w} {h}");
    let mut svg = XmlWriter::new();
    svg.open(
        "svg",
        &[
            ("xmlns", SVG_NS),
            ("version", "1.1"),
            ("width", &w),
            ("height", &h),
            ("viewBox", &view_box),
            ("font-family", "sans-serif"),
        ],
    );
    svg.leaf("title", &[], &format!("{} - {}", doc.subject, doc.title));
    svg.empty("rect", &[("width", &w), ("height", &h), ("fill", "#f4f1e8")]);

    // Legend first so markers stay visible on top of it.
    let lines: Vec<String> = tl
        .entries()
        .iter()
        .map(|e| format!("{}: {} {}-{}", label_of(&e.place.id), e.place.name, e.stay.from, e.stay.to))
        .collect();
    let widest = lines.iter().chain([&doc.subject]).map(|l| l.chars().count()).max().unwrap_or(0);
    let legend_w = (widest as u32) * 7 + 16;
    let legend_h = (lines.len() as u32 + 1) * LEGEND_LINE_PX + 12;
    svg.open("g", &[("id", "legend")]);
    svg.empty(
        "rect",
        &[
            ("x", "8"),
            ("y", "8"),
            ("width", &legend_w.to_string()),
            ("height", &legend_h.to_string()),
            ("fill", "#ffffff"),
            ("fill-opacity", "0.85"),
            ("stroke", "#999999"),
        ],
    );
    svg.leaf("text", &[("x", "16"), ("y", "26"), ("font-size", "13"), ("font-weight", "bold")], &doc.subject);
    for (i, line) in lines.iter().enumerate() {
        let y = 26 + (i as u32 + 1) * LEGEND_LINE_PX;
        svg.leaf("text", &[("x", "16"), ("y", &y.to_string()), ("font-size", "12")], line);
    }
    svg.close();

    let route: Vec<String> = tl
        .entries()
        .iter()
        .map(|e| {
            let (x, y) = projection.project(e.place.point);
            format!("{},{}", px(x), px(y))
        })
        .collect();
    svg.empty(
        "polyline",
        &[
            ("points", &route.join(" ")),
            ("fill", "none"),
            ("stroke", "#555555"),
            ("stroke-width", "2"),
            ("stroke-dasharray", "6 4"),
        ],
    );

    let radius = cfg.marker_radius_px.to_string();
    svg.open("g", &[("id", "markers")]);
    for (place, label) in doc.places.iter().zip(&labels) {
        let (x, y) = projection.project(place.point);
        svg.empty(
            "circle",
            &[
                ("cx", &px(x)),
                ("cy", &px(y)),
                ("r", &radius),
                ("fill", "#d62728"),
                ("stroke", "#ffffff"),
                ("stroke-width", "1.5"),
            ],
        );
        let r = f64::from(cfg.marker_radius_px);
        svg.leaf(
            "text",
            &[("x", &px(x + r + 2.0)), ("y", &px(y - r)), ("font-size", "14"), ("font-weight", "bold")],
            label,
        );
    }
    svg.close();

    svg.close();
    Ok(svg.finish())
}
