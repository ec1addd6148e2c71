//! Training and reference pixel lists.
//!
//! One `x,y,class` row per pixel. Blank lines and lines starting with `#`
//! are ignored; whitespace around fields is trimmed. Duplicate positions
//! are kept.

use std::fs;
use std::path::Path;

use super::{write_atomic, RasterImage};
use crate::multiclass::{validate_class_name, ClassSamples, ClassSet};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPosition {
    pub x: usize,
    pub y: usize,
    pub class: String,
}

pub fn parse_positions(text: &str) -> Result<Vec<LabeledPosition>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let line_start = offset;
        offset += line.len();
        let content = line.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                line_start,
                format!("expected 3 columns (x,y,class), found {}", fields.len()),
            ));
        }
        let coord = |s: &str, what: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(line_start, format!("invalid {what} coordinate '{s}'")))
        };
        let x = coord(fields[0], "x")?;
        let y = coord(fields[1], "y")?;
        validate_class_name(fields[2]).map_err(|e| Error::parse(line_start, e.to_string()))?;
        out.push(LabeledPosition {
            x,
            y,
            class: fields[2].to_string(),
        });
    }
    Ok(out)
}

pub fn format_positions(positions: &[LabeledPosition]) -> String {
    let mut s = String::from("# x,y,class\n");
    for p in positions {
        s.push_str(&format!("{},{},{}\n", p.x, p.y, p.class));
    }
    s
}

pub fn load_positions(path: impl AsRef<Path>) -> Result<Vec<LabeledPosition>> {
    let bytes = fs::read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Error::parse(e.valid_up_to(), "file is not valid UTF-8"))?;
    parse_positions(text)
}

pub fn save_positions(path: impl AsRef<Path>, positions: &[LabeledPosition]) -> Result<()> {
    write_atomic(path.as_ref(), format_positions(positions).as_bytes())
}

/// Feature vectors extracted from a raster at labelled positions.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub entries: Vec<(Vec<f64>, String)>,
}

impl SampleSet {
    pub fn from_positions(positions: &[LabeledPosition], raster: &RasterImage) -> Result<Self> {
        let mut entries = Vec::with_capacity(positions.len());
        for p in positions {
            if !raster.contains(p.x, p.y) {
                return Err(Error::input(format!(
                    "sample position ({}, {}) lies outside the {}x{} raster",
                    p.x,
                    p.y,
                    raster.width(),
                    raster.height()
                )));
            }
            entries.push((raster.pixel(p.x, p.y), p.class.clone()));
        }
        Ok(SampleSet { entries })
    }

    /// Class names in order of first appearance.
    pub fn class_names(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        for (_, c) in &self.entries {
            if !names.contains(c) {
                names.push(c.clone());
            }
        }
        names
    }

    /// Groups entries by class, using `classes` for the order when given
    /// and first appearance otherwise.
    pub fn to_class_samples(&self, classes: Option<&ClassSet>) -> Result<ClassSamples> {
        let classes = match classes {
            Some(c) => c.clone(),
            None => ClassSet::new(self.class_names())?,
        };
        let mut groups = vec![Vec::new(); classes.len()];
        for (x, c) in &self.entries {
            let k = classes
                .index_of(c)
                .ok_or_else(|| Error::input(format!("sample class '{c}' is not in the class list")))?;
            groups[k].push(x.clone());
        }
        ClassSamples::new(classes, groups)
    }
}

/// Reads `x,y,class` rows from `path` and extracts their features from
/// `raster`.
pub fn load_samples(path: impl AsRef<Path>, raster: &RasterImage) -> Result<SampleSet> {
    SampleSet::from_positions(&load_positions(path)?, raster)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extracts_features() {
        let raster = RasterImage::new(1, 1, 1, vec![7.0]).unwrap();
        let pos = parse_positions("0,0,water\n").unwrap();
        let s = SampleSet::from_positions(&pos, &raster).unwrap();
        assert_eq!(s.entries, vec![(vec![7.0], "water".to_string())]);
    }

    #[test]
    fn duplicates_and_comments() {
        let raster = RasterImage::new(2, 1, 1, vec![1.0, 2.0]).unwrap();
        let pos = parse_positions("# header\n\n1,0,a\n 1 , 0 , a \n0,0,b").unwrap();
        assert_eq!(pos.len(), 3);
        let s = SampleSet::from_positions(&pos, &raster).unwrap();
        assert_eq!(s.entries[0], s.entries[1]);
        assert_eq!(s.class_names(), vec!["a", "b"]);
        let grouped = s.to_class_samples(None).unwrap();
        assert_eq!(grouped.class_samples(0).len(), 2);
    }

    #[test]
    fn out_of_bounds_is_rejected() {
        let raster = RasterImage::new(2, 2, 1, vec![0.0; 4]).unwrap();
        let pos = parse_positions("2,0,water").unwrap();
        assert!(SampleSet::from_positions(&pos, &raster).is_err());
    }

    #[test]
    fn malformed_rows_report_line_offset() {
        let text = "0,0,a\n1,2\n";
        match parse_positions(text) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_positions("0,0,a,b").is_err());
        assert!(parse_positions("-1,0,a").is_err());
        assert!(parse_positions("0,0,").is_err());
    }

    #[test]
    fn format_round_trips() {
        let pos = vec![
            LabeledPosition {
                x: 3,
                y: 4,
                class: "built-up".into(),
            },
            LabeledPosition {
                x: 0,
                y: 0,
                class: "water".into(),
            },
        ];
        assert_eq!(parse_positions(&format_positions(&pos)).unwrap(), pos);
    }
}
