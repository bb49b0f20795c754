//! Chronological ordering of stays and the legs between them.

use crate::geo::great_circle_distance;
use crate::model::{CalendarDate, ItineraryDoc, Place, Stay};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TimelineError {
    #[error("unknown-place: stay #{index} refers to unknown place {place_id:?}")]
    UnknownPlace { index: usize, place_id: String },
}

/// A stay together with the place it resolves to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimelineEntry<'a> {
    pub stay: &'a Stay,
    pub place: &'a Place,
    /// Position of the stay in the source document.
    pub source_index: usize,
}

/// Stays ordered by the first day of their `from` date; ties keep source order.
#[derive(Debug, Clone, PartialEq)]
pub struct Timeline<'a> {
    doc: &'a ItineraryDoc,
    entries: Vec<TimelineEntry<'a>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Leg<'a> {
    pub from_place: &'a Place,
    pub to_place: &'a Place,
    pub distance_km: f64,
    pub departs: CalendarDate,
    pub arrives: CalendarDate,
}

pub fn build_timeline(doc: &ItineraryDoc) -> Result<Timeline<'_>, TimelineError> {
    let mut entries = doc
        .stays
        .iter()
        .enumerate()
        .map(|(source_index, stay)| {
            doc.place(&stay.place_id)
                .map(|place| TimelineEntry { stay, place, source_index })
                .ok_or_else(|| TimelineError::UnknownPlace {
                    index: source_index + 1,
                    place_id: stay.place_id.clone(),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    entries.sort_by_key(|e| e.stay.from.first_day());
    Ok(Timeline { doc, entries })
}

impl<'a> Timeline<'a> {
    /// The document the timeline was built from.
    pub fn doc(&self) -> &'a ItineraryDoc {
        self.doc
    }

    pub fn entries(&self) -> &[TimelineEntry<'a>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn legs(&self) -> Vec<Leg<'a>> {
        self.entries
            .windows(2)
            .map(|pair| {
                let (earlier, later) = (pair[0], pair[1]);
                Leg {
                    from_place: earlier.place,
                    to_place: later.place,
                    distance_km: great_circle_distance(earlier.place.point, later.place.point),
                    departs: earlier.stay.to,
                    arrives: later.stay.from,
                }
            })
            .collect()
    }

    /// Sum of leg distances in kilometers, summed in time order.
    pub fn total_distance(&self) -> f64 {
        self.legs().iter().fold(0.0, |sum, leg| sum + leg.distance_km)
    }
}

pub fn legs<'a>(tl: &Timeline<'a>) -> Vec<Leg<'a>> {
    tl.legs()
}

pub fn total_distance(tl: &Timeline<'_>) -> f64 {
    tl.total_distance()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GeoPoint;

    fn doc(stays: Vec<Stay>) -> ItineraryDoc {
        ItineraryDoc {
            title: "t".into(),
            subject: "s".into(),
            places: vec![
                Place::new("woolsthorpe", "Woolsthorpe Manor", GeoPoint::new(52.8091, -0.6281)),
                Place::new("grantham", "Grantham", GeoPoint::new(52.9137, -0.6414)),
                Place::new("trinity", "Trinity College", GeoPoint::new(52.2070, 0.1167)),
            ],
            stays,
        }
    }

    fn stay(place: &str, from: i32, to: i32) -> Stay {
        Stay::new(place, CalendarDate::year(from), CalendarDate::year(to))
    }

    #[test]
    fn single_stay() {
        let d = doc(vec![stay("woolsthorpe", 1642, 1655)]);
        let tl = build_timeline(&d).unwrap();
        assert_eq!(tl.len(), 1);
        assert!(tl.legs().is_empty());
        assert_eq!(tl.total_distance(), 0.0);
        assert!(tl.total_distance().is_sign_positive());
    }

    #[test]
    fn sorted_and_stable() {
        let d = doc(vec![
            stay("woolsthorpe", 1665, 1667),
            stay("grantham", 1642, 1650),
            stay("trinity", 1661, 1663),
            stay("woolsthorpe", 1661, 1662),
        ]);
        let tl = build_timeline(&d).unwrap();
        let order: Vec<usize> = tl.entries().iter().map(|e| e.source_index).collect();
        assert_eq!(order, [1, 2, 3, 0]);
    }

    #[test]
    fn partial_dates_sort_by_interval_start() {
        let d = doc(vec![
            Stay::new("grantham", CalendarDate::year_month(1661, 2), CalendarDate::year(1662)),
            Stay::new("trinity", CalendarDate::year(1661), CalendarDate::year(1662)),
        ]);
        let tl = build_timeline(&d).unwrap();
        assert_eq!(tl.entries()[0].place.id, "trinity");
    }

    #[test]
    fn woolsthorpe_to_grantham_leg() {
        // Independent haversine run: 11.67 km.
        let d = doc(vec![stay("woolsthorpe", 1642, 1654), stay("grantham", 1655, 1659)]);
        let tl = build_timeline(&d).unwrap();
        let legs = tl.legs();
        assert_eq!(legs.len(), 1);
        assert!((legs[0].distance_km - 11.5).abs() <= 1.0, "{}", legs[0].distance_km);
        assert_eq!(legs[0].departs, CalendarDate::year(1654));
        assert_eq!(legs[0].arrives, CalendarDate::year(1655));
        assert_eq!(tl.total_distance(), legs[0].distance_km);
    }

    #[test]
    fn there_and_back() {
        let d = doc(vec![stay("woolsthorpe", 1642, 1654), stay("trinity", 1661, 1664), stay("woolsthorpe", 1665, 1666)]);
        let legs = build_timeline(&d).unwrap().legs();
        assert_eq!(legs.len(), 2);
        assert_eq!(legs[0].distance_km, legs[1].distance_km);
    }

    #[test]
    fn repeated_place_gives_zero_leg() {
        let d = doc(vec![stay("trinity", 1661, 1664), stay("trinity", 1667, 1696)]);
        let legs = build_timeline(&d).unwrap().legs();
        assert_eq!(legs[0].distance_km, 0.0);
    }

    #[test]
    fn dangling_place_is_an_error() {
        let d = doc(vec![stay("nowhere", 1642, 1650)]);
        assert_eq!(
            build_timeline(&d),
            Err(TimelineError::UnknownPlace { index: 1, place_id: "nowhere".into() })
        );
    }
}
