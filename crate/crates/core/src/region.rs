//! Annotated-image data model, hit-testing and CAM statistics.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::geometry::{self, round9, Point, Rect};

/// Address of an area: a top-level index, optionally followed by a sub-area
/// index within it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AreaPath {
    pub top: usize,
    pub sub: Option<usize>,
}

impl AreaPath {
    pub const fn top(top: usize) -> Self {
        Self { top, sub: None }
    }

    pub const fn sub(top: usize, sub: usize) -> Self {
        Self { top, sub: Some(sub) }
    }

    pub fn is_top(&self) -> bool {
        self.sub.is_none()
    }

    pub fn parent(&self) -> Option<AreaPath> {
        self.sub.map(|_| AreaPath::top(self.top))
    }
}

impl fmt::Display for AreaPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sub {
            None => write!(f, "{}", self.top),
            Some(s) => write!(f, "{}/{}", self.top, s),
        }
    }
}

impl Serialize for AreaPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.sub {
            None => [self.top].serialize(serializer),
            Some(s) => [self.top, s].serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for AreaPath {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(deserializer)?;
        match v.as_slice() {
            [t] => Ok(AreaPath::top(*t)),
            [t, s] => Ok(AreaPath::sub(*t, *s)),
            _ => Err(de::Error::custom("area path must have one or two indices")),
        }
    }
}

/// Which areas touches currently resolve to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Level {
    #[default]
    Top,
    /// Entered into the top-level area with this index.
    Inside(usize),
}

fn serialize_opt_round9<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&round9(*v)),
        None => s.serialize_none(),
    }
}

fn serialize_vec_round9<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| round9(*x)))
}

fn is_false(b: &bool) -> bool {
    !*b
}

pub type ExtraKeys = BTreeMap<String, serde_json::Value>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Area {
    pub label: String,
    pub polygon: Vec<Point>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub recommended: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sub_areas: Vec<Area>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "serialize_opt_round9"
    )]
    pub prominence: Option<f64>,
    /// Keys the format does not define; kept so files round-trip.
    #[serde(flatten, default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: ExtraKeys,
}

impl Area {
    pub fn new(label: impl Into<String>, polygon: Vec<Point>) -> Self {
        Self {
            label: label.into(),
            polygon,
            recommended: false,
            sub_areas: Vec::new(),
            prominence: None,
            extra: ExtraKeys::new(),
        }
    }

    pub fn with_sub_areas(mut self, subs: Vec<Area>) -> Self {
        self.sub_areas = subs;
        self
    }

    pub fn recommended(mut self) -> Self {
        self.recommended = true;
        self
    }

    pub fn area(&self) -> f64 {
        geometry::polygon_area(&self.polygon)
    }

    pub fn contains(&self, p: Point) -> bool {
        geometry::contains(&self.polygon, p)
    }

    pub fn has_sub_areas(&self) -> bool {
        !self.sub_areas.is_empty()
    }
}

/// Area-weighted centroid of the area's polygon.
pub fn centroid(area: &Area) -> Point {
    geometry::centroid(&area.polygon)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CamGrid {
    pub rows: usize,
    pub cols: usize,
    #[serde(serialize_with = "serialize_vec_round9")]
    pub values: Vec<f64>,
    #[serde(flatten, default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: ExtraKeys,
}

impl CamGrid {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Self {
        Self { rows, cols, values, extra: ExtraKeys::new() }
    }

    pub fn uniform(rows: usize, cols: usize, value: f64) -> Self {
        Self::new(rows, cols, vec![value; rows * cols])
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    /// Normalized coordinates of the center of cell `(row, col)`.
    pub fn cell_center(&self, row: usize, col: usize) -> Point {
        Point::new(
            (col as f64 + 0.5) / self.cols as f64,
            (row as f64 + 0.5) / self.rows as f64,
        )
    }

    /// The cell whose extent contains `p`; the far edges belong to the last
    /// row and column.
    pub fn cell_at(&self, p: Point) -> (usize, usize) {
        let idx = |v: f64, n: usize| ((v.clamp(0.0, 1.0) * n as f64).floor() as usize).min(n - 1);
        (idx(p.y, self.rows), idx(p.x, self.cols))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedImage {
    pub image_id: String,
    pub width_px: u32,
    pub height_px: u32,
    #[serde(default)]
    pub caption: String,
    pub areas: Vec<Area>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cam: Option<CamGrid>,
    #[serde(flatten, default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: ExtraKeys,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegionError {
    #[error("no such area: {0}")]
    NoSuchArea(String),
}

impl AnnotatedImage {
    pub fn new(image_id: impl Into<String>, areas: Vec<Area>) -> Self {
        Self {
            image_id: image_id.into(),
            width_px: 1000,
            height_px: 1000,
            caption: String::new(),
            areas,
            cam: None,
            extra: ExtraKeys::new(),
        }
    }

    pub fn area(&self, path: AreaPath) -> Option<&Area> {
        let top = self.areas.get(path.top)?;
        match path.sub {
            None => Some(top),
            Some(s) => top.sub_areas.get(s),
        }
    }

    pub fn area_mut(&mut self, path: AreaPath) -> Option<&mut Area> {
        let top = self.areas.get_mut(path.top)?;
        match path.sub {
            None => Some(top),
            Some(s) => top.sub_areas.get_mut(s),
        }
    }

    pub fn require(&self, path: AreaPath) -> Result<&Area, RegionError> {
        self.area(path).ok_or_else(|| RegionError::NoSuchArea(path.to_string()))
    }

    /// Every area and sub-area path, depth-first in annotation order.
    pub fn all_paths(&self) -> Vec<AreaPath> {
        let mut out = Vec::new();
        for (i, a) in self.areas.iter().enumerate() {
            out.push(AreaPath::top(i));
            out.extend((0..a.sub_areas.len()).map(|s| AreaPath::sub(i, s)));
        }
        out
    }

    pub fn total_areas(&self) -> usize {
        self.areas.iter().map(|a| 1 + a.sub_areas.len()).sum()
    }

    /// Paths of the areas that are touchable at `level`.
    pub fn level_paths(&self, level: Level) -> Vec<AreaPath> {
        match level {
            Level::Top => (0..self.areas.len()).map(AreaPath::top).collect(),
            Level::Inside(t) => self
                .areas
                .get(t)
                .map(|a| (0..a.sub_areas.len()).map(|s| AreaPath::sub(t, s)).collect())
                .unwrap_or_default(),
        }
    }
}

fn smallest_containing<'a>(
    candidates: impl Iterator<Item = (usize, &'a Area)>,
    point: Point,
    keep: impl Fn(usize) -> bool,
) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, area) in candidates {
        if !area.contains(point) || !keep(i) {
            continue;
        }
        let a = area.area();
        // Strict comparison keeps the earlier area on ties.
        if best.is_none_or(|(_, best_a)| a < best_a) {
            best = Some((i, a));
        }
    }
    best.map(|(i, _)| i)
}

/// Resolves a point to the area it touches at `level`.
///
/// Overlaps resolve to the smallest polygon by absolute area, ties to the
/// earlier area. Inside a parent, points outside the parent polygon never
/// hit a sub-area.
pub fn hit_test(
    image: &AnnotatedImage,
    point: Point,
    level: Level,
) -> Result<Option<AreaPath>, RegionError> {
    hit_test_in(image, point, level, |_| true)
}

/// [`hit_test`] restricted to the areas `keep` accepts.
pub fn hit_test_in(
    image: &AnnotatedImage,
    point: Point,
    level: Level,
    keep: impl Fn(AreaPath) -> bool,
) -> Result<Option<AreaPath>, RegionError> {
    match level {
        Level::Top => Ok(smallest_containing(image.areas.iter().enumerate(), point, |t| keep(AreaPath::top(t)))
            .map(AreaPath::top)),
        Level::Inside(t) => {
            let parent = image
                .areas
                .get(t)
                .ok_or_else(|| RegionError::NoSuchArea(t.to_string()))?;
            if !parent.contains(point) {
                return Ok(None);
            }
            Ok(smallest_containing(parent.sub_areas.iter().enumerate(), point, |s| keep(AreaPath::sub(t, s)))
                .map(|s| AreaPath::sub(t, s)))
        }
    }
}

/// Whether `path` shares interior with `quadrant`; always true unzoomed.
pub fn visible_in(image: &AnnotatedImage, path: AreaPath, quadrant: Option<Quadrant>) -> bool {
    match quadrant {
        None => true,
        Some(q) => image
            .area(path)
            .is_some_and(|a| geometry::intersects_rect(&a.polygon, q.rect())),
    }
}

/// Mean CAM activation over the cells whose centers fall inside the area.
///
/// Cells are visited in row-major order. When no center is covered the
/// value of the cell under the polygon centroid is returned.
pub fn area_prominence(area: &Area, cam: &CamGrid) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    let bbox = geometry::bounding_box(&area.polygon);
    for row in 0..cam.rows {
        for col in 0..cam.cols {
            let c = cam.cell_center(row, col);
            if c.y < bbox.y0 - geometry::BOUNDARY_TOLERANCE
                || c.y > bbox.y1 + geometry::BOUNDARY_TOLERANCE
                || c.x < bbox.x0 - geometry::BOUNDARY_TOLERANCE
                || c.x > bbox.x1 + geometry::BOUNDARY_TOLERANCE
            {
                continue;
            }
            if area.contains(c) {
                sum += cam.get(row, col);
                count += 1;
            }
        }
    }
    if count == 0 {
        let (row, col) = cam.cell_at(centroid(area));
        return cam.get(row, col);
    }
    sum / count as f64
}

/// One of the four fixed zoom quadrants, numbered in reading order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quadrant {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::Q1, Quadrant::Q2, Quadrant::Q3, Quadrant::Q4];

    /// Quadrant containing `p`. Points on the center lines go to the
    /// lower-numbered quadrant.
    pub fn containing(p: Point) -> Quadrant {
        match (p.x <= 0.5, p.y <= 0.5) {
            (true, true) => Quadrant::Q1,
            (false, true) => Quadrant::Q2,
            (true, false) => Quadrant::Q3,
            (false, false) => Quadrant::Q4,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn origin(self) -> Point {
        match self {
            Quadrant::Q1 => Point::new(0.0, 0.0),
            Quadrant::Q2 => Point::new(0.5, 0.0),
            Quadrant::Q3 => Point::new(0.0, 0.5),
            Quadrant::Q4 => Point::new(0.5, 0.5),
        }
    }

    pub fn rect(self) -> Rect {
        let o = self.origin();
        Rect::new(o.x, o.y, o.x + 0.5, o.y + 0.5)
    }
}
