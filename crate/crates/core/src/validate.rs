//! Structural and geometric checks over an [`AnnotatedImage`].

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::geometry;
use crate::region::{AnnotatedImage, Area, ExtraKeys};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationIssue {
    pub severity: Severity,
    /// JSON-path-like location, e.g. `areas[1].sub_areas[0]`.
    pub path: String,
    pub message: String,
}

impl ValidationIssue {
    fn error(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { severity: Severity::Error, path: path.into(), message: message.into() }
    }

    fn warning(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { severity: Severity::Warning, path: path.into(), message: message.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev} at {}: {}", self.path, self.message)
    }
}

pub fn has_errors(issues: &[ValidationIssue]) -> bool {
    issues.iter().any(ValidationIssue::is_error)
}

/// Returns every invariant violation found in `image`; empty means valid.
pub fn validate(image: &AnnotatedImage) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    unknown_keys(&image.extra, "$", &mut issues);
    if image.width_px == 0 || image.height_px == 0 {
        issues.push(ValidationIssue::error("$", "image dimensions must be positive"));
    }
    if image.areas.is_empty() {
        issues.push(ValidationIssue::warning("$.areas", "image has no areas"));
    }
    check_level(&image.areas, "areas", true, &mut issues);
    for (i, area) in image.areas.iter().enumerate() {
        let path = format!("areas[{i}]");
        check_area(area, &path, true, &mut issues);
        for (s, sub) in area.sub_areas.iter().enumerate() {
            let sub_path = format!("{path}.sub_areas[{s}]");
            check_area(sub, &sub_path, false, &mut issues);
            if sub.polygon.len() >= 3
                && area.polygon.len() >= 3
                && !geometry::contains(&area.polygon, geometry::centroid(&sub.polygon))
            {
                issues.push(ValidationIssue::error(
                    &sub_path,
                    "sub-area centroid outside parent",
                ));
            }
        }
        if area.has_sub_areas() {
            check_level(&area.sub_areas, &format!("{path}.sub_areas"), false, &mut issues);
        }
    }
    if let Some(cam) = &image.cam {
        unknown_keys(&cam.extra, "cam", &mut issues);
        if cam.rows == 0 || cam.cols == 0 {
            issues.push(ValidationIssue::error("cam", "CAM grid must have positive rows and cols"));
        }
        if cam.values.len() != cam.rows * cam.cols {
            issues.push(ValidationIssue::error(
                "cam.values",
                format!("expected {} values, found {}", cam.rows * cam.cols, cam.values.len()),
            ));
        }
        if let Some(k) = cam.values.iter().position(|v| !v.is_finite() || !(0.0..=1.0).contains(v)) {
            issues.push(ValidationIssue::error(
                format!("cam.values[{k}]"),
                "CAM value must be finite and within [0,1]",
            ));
        }
    }
    issues
}

fn unknown_keys(extra: &ExtraKeys, path: &str, issues: &mut Vec<ValidationIssue>) {
    for key in extra.keys() {
        issues.push(ValidationIssue::warning(path, format!("unknown key \"{key}\"")));
    }
}

fn check_area(area: &Area, path: &str, top_level: bool, issues: &mut Vec<ValidationIssue>) {
    unknown_keys(&area.extra, path, issues);
    if area.label.trim().is_empty() {
        issues.push(ValidationIssue::error(path, "empty label"));
    }
    for (k, p) in area.polygon.iter().enumerate() {
        if !p.x.is_finite() || !p.y.is_finite() || !p.in_unit_square() {
            issues.push(ValidationIssue::error(
                format!("{path}.polygon[{k}]"),
                "vertex out of bounds",
            ));
        }
    }
    if area.polygon.len() < 3 {
        issues.push(ValidationIssue::error(path, "polygon needs at least 3 vertices"));
    } else {
        if geometry::polygon_area(&area.polygon) < geometry::DEGENERATE_AREA {
            issues.push(ValidationIssue::error(path, "polygon has zero area"));
        }
        if !geometry::is_simple(&area.polygon) {
            issues.push(ValidationIssue::error(path, "polygon is self-intersecting"));
        }
    }
    if area.recommended && !top_level {
        issues.push(ValidationIssue::error(path, "only top-level areas may be recommended"));
    }
    if let Some(p) = area.prominence {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            issues.push(ValidationIssue::error(path, "prominence must be within [0,1]"));
        }
    }
    if !top_level && area.has_sub_areas() {
        issues.push(ValidationIssue::error(path, "sub-areas cannot have sub-areas"));
    }
}

fn check_level(areas: &[Area], path: &str, top_level: bool, issues: &mut Vec<ValidationIssue>) {
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (i, area) in areas.iter().enumerate() {
        let key = area.label.to_lowercase();
        if let Some(first) = seen.get(&key) {
            issues.push(ValidationIssue::error(
                format!("{path}[{i}]"),
                format!("duplicate label \"{}\" (first at {path}[{first}])", area.label),
            ));
        } else {
            seen.insert(key, i);
        }
    }
    let usable = |a: &Area| a.polygon.len() >= 3 && geometry::is_simple(&a.polygon);
    for i in 0..areas.len() {
        for j in (i + 1)..areas.len() {
            if usable(&areas[i])
                && usable(&areas[j])
                && geometry::polygons_overlap(&areas[i].polygon, &areas[j].polygon)
            {
                let msg = if top_level { "top-level overlap" } else { "sub-area overlap" };
                issues.push(ValidationIssue::warning(
                    format!("{path}[{j}]"),
                    format!("{msg} with {path}[{i}]"),
                ));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::region::CamGrid;

    fn unit_square() -> Vec<Point> {
        vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ]
    }

    #[test]
    fn minimal_image_is_valid() {
        let img = AnnotatedImage::new("t", vec![Area::new("all", unit_square())]);
        assert_eq!(validate(&img), vec![]);
    }

    #[test]
    fn out_of_bounds_vertex() {
        let poly = vec![
            Point::new(0.0, 0.0),
            Point::new(1.2, 0.5),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        let issues = validate(&AnnotatedImage::new("t", vec![Area::new("a", poly)]));
        assert_eq!(issues.len(), 1);
        assert!(issues[0].is_error());
        assert_eq!(issues[0].message, "vertex out of bounds");
    }

    #[test]
    fn identical_polygons_warn_once() {
        let img = AnnotatedImage::new(
            "t",
            vec![Area::new("a", unit_square()), Area::new("b", unit_square())],
        );
        let issues = validate(&img);
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].severity, Severity::Warning);
        assert!(issues[0].message.starts_with("top-level overlap"));
    }

    #[test]
    fn duplicate_labels_ignore_case() {
        let half = |x0: f64| {
            vec![
                Point::new(x0, 0.0),
                Point::new(x0 + 0.5, 0.0),
                Point::new(x0 + 0.5, 1.0),
                Point::new(x0, 1.0),
            ]
        };
        let img = AnnotatedImage::new("t", vec![Area::new("Tree", half(0.0)), Area::new("tree", half(0.5))]);
        let issues = validate(&img);
        assert_eq!(issues.len(), 1);
        assert!(issues[0].message.starts_with("duplicate label"));
    }

    #[test]
    fn structural_errors() {
        let deep = Area::new("leaf", unit_square());
        let mut sub = Area::new("sub", unit_square()).with_sub_areas(vec![deep]);
        sub.recommended = true;
        let far = Area::new(
            "far",
            vec![Point::new(0.9, 0.9), Point::new(1.0, 0.9), Point::new(1.0, 1.0)],
        );
        let parent = Area::new(
            "parent",
            vec![Point::new(0.0, 0.0), Point::new(0.5, 0.0), Point::new(0.5, 0.5), Point::new(0.0, 0.5)],
        )
        .with_sub_areas(vec![sub, far]);
        let mut img = AnnotatedImage::new("t", vec![parent]);
        img.cam = Some(CamGrid::new(2, 2, vec![0.1, 0.2, 1.5]));
        let messages: Vec<String> = validate(&img).into_iter().map(|i| i.message).collect();
        for needle in [
            "only top-level areas may be recommended",
            "sub-areas cannot have sub-areas",
            "sub-area centroid outside parent",
            "expected 4 values, found 3",
            "CAM value must be finite and within [0,1]",
        ] {
            assert!(messages.iter().any(|m| m == needle), "missing {needle:?} in {messages:?}");
        }
    }
}
