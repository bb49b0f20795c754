//! KML 2.2 output: a placemark document with HTML balloons and a `gx:Tour`
//! that flies the camera through the stays in time order.

use std::fmt::Write as _;

use crate::geo::{bounding_box, initial_bearing, lookat_range};
use crate::model::{CalendarDate, ItineraryDoc, MediaKind, Place, Stay};
use crate::timeline::Timeline;
use crate::xml::{escape, XmlWriter};

pub const KML_NS: &str = "http://www.opengis.net/kml/2.2";
pub const GX_NS: &str = "http://www.google.com/kml/ext/2.2";

/// Longest a tour lingers at one stay, in seconds.
pub const MAX_DWELL_S: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KmlError {
    #[error("empty-timeline: a tour needs at least one stay")]
    EmptyTimeline,
    #[error("invalid tour setting: {0}")]
    Config(String),
}

/// Pacing and camera settings for a tour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TourConfig {
    pub fly_duration_s: f64,
    pub dwell_base_s: f64,
    pub dwell_scale_s: f64,
    pub camera_floor_m: f64,
    pub tilt_deg: f64,
}

impl Default for TourConfig {
    fn default() -> Self {
        Self {
            fly_duration_s: 5.0,
            dwell_base_s: 4.0,
            dwell_scale_s: 2.0,
            camera_floor_m: 2000.0,
            tilt_deg: 45.0,
        }
    }
}

impl TourConfig {
    pub fn check(&self) -> Result<(), KmlError> {
        let bad = |what: &str, value: f64| Err(KmlError::Config(format!("{what} {value} out of range")));
        if !(self.fly_duration_s.is_finite() && self.fly_duration_s > 0.0) {
            return bad("fly duration", self.fly_duration_s);
        }
        if !(self.dwell_base_s.is_finite() && self.dwell_base_s >= 0.0) {
            return bad("dwell base", self.dwell_base_s);
        }
        if !(self.dwell_scale_s.is_finite() && self.dwell_scale_s >= 0.0) {
            return bad("dwell scale", self.dwell_scale_s);
        }
        if !(self.camera_floor_m.is_finite() && self.camera_floor_m > 0.0) {
            return bad("camera floor", self.camera_floor_m);
        }
        if !(0.0..=90.0).contains(&self.tilt_deg) {
            return bad("tilt", self.tilt_deg);
        }
        Ok(())
    }

    /// Seconds to hold the view on a stay: logarithmic in its length,
    /// clamped to `[dwell_base_s, MAX_DWELL_S]`.
    pub fn dwell(&self, stay_length_days: i64) -> f64 {
        let days = stay_length_days.max(0) as f64;
        let raw = self.dwell_base_s + self.dwell_scale_s * (1.0 + days).log10();
        raw.min(MAX_DWELL_S).max(self.dwell_base_s)
    }
}

pub fn dwell(cfg: &TourConfig, stay: &Stay) -> f64 {
    cfg.dwell(stay.length_days())
}

fn coordinates(place: &Place) -> String {
    format!("{:.6},{:.6},0", place.point.lon, place.point.lat)
}

/// Earliest `from` and latest `to` across the given stays.
fn time_span<'s>(stays: impl IntoIterator<Item = &'s Stay>) -> Option<(CalendarDate, CalendarDate)> {
    stays.into_iter().fold(None, |span, stay| match span {
        None => Some((stay.from, stay.to)),
        Some((begin, end)) => Some((
            if stay.from.first_day() < begin.first_day() { stay.from } else { begin },
            if stay.to.last_day() > end.last_day() { stay.to } else { end },
        )),
    })
}

/// HTML for a placemark balloon. All user text is escaped.
pub fn balloon_html(place: &Place, stays_at_place: &[&Stay]) -> String {
    let mut html = String::new();
    let _ = write!(html, "<h2>{}</h2>", escape(&place.name));
    if let Some(description) = &place.description {
        let _ = write!(html, "<p>{}</p>", escape(description));
    }
    for media in &place.media {
        let url = escape(&media.url);
        match media.kind {
            MediaKind::Image => {
                let alt = media.caption.as_deref().unwrap_or(&place.name);
                let _ = write!(html, "<p><img src=\"{url}\" alt=\"{}\" width=\"320\"/>", escape(alt));
                if let Some(caption) = &media.caption {
                    let _ = write!(html, "<br/>{}", escape(caption));
                }
                html.push_str("</p>");
            }
            MediaKind::Youtube => {
                let text = media.caption.as_deref().unwrap_or("Watch on YouTube");
                let _ = write!(html, "<p><a href=\"{url}\">{}</a></p>", escape(text));
            }
            MediaKind::Link => {
                let text = media.caption.as_deref().unwrap_or(&media.url);
                let _ = write!(html, "<p><a href=\"{url}\">{}</a></p>", escape(text));
            }
        }
    }
    html.push_str("<table>");
    for stay in stays_at_place {
        let _ = write!(html, "<tr><td>{} - {}</td>", stay.from, stay.to);
        if let Some(note) = &stay.note {
            let _ = write!(html, "<td>{}</td>", escape(note));
        }
        html.push_str("</tr>");
    }
    html.push_str("</table>");
    html
}

fn open_kml(w: &mut XmlWriter, name: &str) {
    w.open("kml", &[("xmlns", KML_NS), ("xmlns:gx", GX_NS)]);
    w.open("Document", &[]);
    w.leaf("name", &[], name);
}

fn close_kml(w: &mut XmlWriter) {
    w.close();
    w.close();
}

fn write_places_folder(w: &mut XmlWriter, doc: &ItineraryDoc) {
    w.open("Folder", &[]);
    w.leaf("name", &[], "Places");
    w.leaf("description", &[], &doc.subject);
    for place in &doc.places {
        let mut stays: Vec<&Stay> = doc.stays.iter().filter(|s| s.place_id == place.id).collect();
        stays.sort_by_key(|s| s.from.first_day());

        let id = format!("place-{}", place.id);
        w.open("Placemark", &[("id", &id)]);
        w.leaf("name", &[], &place.name);
        w.cdata("description", &balloon_html(place, &stays));
        if let Some((begin, end)) = time_span(stays.iter().copied()) {
            w.open("TimeSpan", &[]);
            w.leaf("begin", &[], &begin.to_string());
            w.leaf("end", &[], &end.to_string());
            w.close();
        }
        w.open("Point", &[]);
        w.leaf("coordinates", &[], &coordinates(place));
        w.close();
        w.close();
    }
    w.close();
}

/// A KML document with one placemark per place, in document order.
pub fn emit_placemarks(doc: &ItineraryDoc) -> String {
    let mut w = XmlWriter::new();
    open_kml(&mut w, &doc.title);
    write_places_folder(&mut w, doc);
    close_kml(&mut w);
    w.finish()
}

fn seconds(value: f64) -> String {
    format!("{value:.3}")
}

/// A KML document with the placemarks and a `gx:Tour` visiting every stay
/// in time order.
pub fn emit_tour(tl: &Timeline<'_>, cfg: &TourConfig) -> Result<String, KmlError> {
    cfg.check()?;
    let doc = tl.doc();
    if tl.is_empty() {
        return Err(KmlError::EmptyTimeline);
    }

    let mut w = XmlWriter::new();
    open_kml(&mut w, &doc.title);
    w.open("gx:Tour", &[]);
    w.leaf("name", &[], &format!("Tour: {}", doc.subject));
    w.open("gx:Playlist", &[]);

    let fly = seconds(cfg.fly_duration_s);
    let tilt = format!("{:.6}", cfg.tilt_deg);
    let mut previous: Option<&Place> = None;
    for entry in tl.entries() {
        let place = entry.place;
        let heading = previous
            .and_then(|prev| initial_bearing(prev.point, place.point).ok())
            .unwrap_or(0.0);
        let frame = bounding_box(&[place.point]).expect("one point");
        let range = lookat_range(&frame, cfg.camera_floor_m);

        w.open("gx:FlyTo", &[]);
        w.leaf("gx:duration", &[], &fly);
        w.leaf("gx:flyToMode", &[], "smooth");
        w.open("LookAt", &[]);
        w.open("gx:TimeSpan", &[]);
        w.leaf("begin", &[], &entry.stay.from.to_string());
        w.leaf("end", &[], &entry.stay.to.to_string());
        w.close();
        w.leaf("longitude", &[], &format!("{:.6}", place.point.lon));
        w.leaf("latitude", &[], &format!("{:.6}", place.point.lat));
        w.leaf("altitude", &[], "0");
        w.leaf("heading", &[], &format!("{heading:.6}"));
        w.leaf("tilt", &[], &tilt);
        w.leaf("range", &[], &format!("{range:.6}"));
        w.leaf("altitudeMode", &[], "clampToGround");
        w.close();
        w.close();

        w.open("gx:Wait", &[]);
        w.leaf("gx:duration", &[], &seconds(dwell(cfg, entry.stay)));
        w.close();

        previous = Some(place);
    }

    w.close();
    w.close();
    write_places_folder(&mut w, doc);
    close_kml(&mut w);
    Ok(w.finish())
}
