//! Spherical-earth geodesy.
//!
//! Distances use the haversine formula on a sphere; inputs are degrees,
//! distances kilometers unless a function says otherwise.

use crate::model::GeoPoint;

/// Mean earth radius used for every distance in this crate.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum GeoError {
    #[error("coincident-points: bearing is undefined between identical points")]
    CoincidentPoints,
    #[error("empty-input: no points to bound")]
    EmptyInput,
}

/// Axis-aligned latitude/longitude box. Never wraps the antimeridian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min_lat: f64,
    pub max_lat: f64,
    pub min_lon: f64,
    pub max_lon: f64,
}

impl BBox {
    pub fn south_west(&self) -> GeoPoint {
        GeoPoint::new(self.min_lat, self.min_lon)
    }

    pub fn north_east(&self) -> GeoPoint {
        GeoPoint::new(self.max_lat, self.max_lon)
    }

    pub fn lat_span(&self) -> f64 {
        self.max_lat - self.min_lat
    }

    pub fn lon_span(&self) -> f64 {
        self.max_lon - self.min_lon
    }
}

/// Wraps a longitude into [-180, 180).
pub fn normalize_lon(lon: f64) -> f64 {
    let wrapped = (lon + 180.0).rem_euclid(360.0) - 180.0;
    if wrapped >= 180.0 {
        wrapped - 360.0
    } else {
        wrapped
    }
}

fn radians(p: GeoPoint) -> (f64, f64) {
    (p.lat.to_radians(), normalize_lon(p.lon).to_radians())
}

/// Haversine distance in kilometers.
pub fn great_circle_distance(a: GeoPoint, b: GeoPoint) -> f64 {
    // Fixed argument order makes the result bit-for-bit symmetric.
    let (a, b) = if (a.lat, a.lon) <= (b.lat, b.lon) { (a, b) } else { (b, a) };
    let (lat1, lon1) = radians(a);
    let (lat2, lon2) = radians(b);
    let half_dlat = ((lat2 - lat1) / 2.0).sin();
    let half_dlon = ((lon2 - lon1) / 2.0).sin();
    let h = half_dlat * half_dlat + lat1.cos() * lat2.cos() * half_dlon * half_dlon;
    2.0 * EARTH_RADIUS_KM * h.clamp(0.0, 1.0).sqrt().asin()
}

/// Forward azimuth from `a` to `b` in degrees, 0 = north, 90 = east.
pub fn initial_bearing(a: GeoPoint, b: GeoPoint) -> Result<f64, GeoError> {
    if a == b {
        return Err(GeoError::CoincidentPoints);
    }
    let (lat1, lon1) = radians(a);
    let (lat2, lon2) = radians(b);
    let dlon = lon2 - lon1;
    let y = dlon.sin() * lat2.cos();
    let x = lat1.cos() * lat2.sin() - lat1.sin() * lat2.cos() * dlon.cos();
    let deg = y.atan2(x).to_degrees().rem_euclid(360.0);
    // rem_euclid of a tiny negative value rounds up to exactly 360.
    Ok(if deg >= 360.0 { 0.0 } else { deg })
}

pub fn bounding_box(points: &[GeoPoint]) -> Result<BBox, GeoError> {
    let (first, rest) = points.split_first().ok_or(GeoError::EmptyInput)?;
    let init = BBox {
        min_lat: first.lat,
        max_lat: first.lat,
        min_lon: first.lon,
        max_lon: first.lon,
    };
    Ok(rest.iter().fold(init, |b, p| BBox {
        min_lat: b.min_lat.min(p.lat),
        max_lat: b.max_lat.max(p.lat),
        min_lon: b.min_lon.min(p.lon),
        max_lon: b.max_lon.max(p.lon),
    }))
}

/// Camera range in meters that frames the box diagonal with a 20% margin,
/// never closer than `min_range_m`.
pub fn lookat_range(bbox: &BBox, min_range_m: f64) -> f64 {
    let diagonal_m = great_circle_distance(bbox.south_west(), bbox.north_east()) * 1000.0;
    min_range_m.max(1.2 * diagonal_m)
}
