//! Land-cover map rendering as binary PPM (P6).
//!
//! Unclassified pixels are black and mixed pixels red. Classes 0, 1 and 2
//! are blue, green and gray; further classes cycle through
//! [`EXTRA_COLORS`]. A legend file next to the image lists
//! `R G B name` per color.

use std::path::{Path, PathBuf};

use super::write_atomic;
use crate::multiclass::{LabelGrid, PixelLabel};
use crate::{Error, Result};

pub const UNCLASSIFIED_COLOR: [u8; 3] = [0, 0, 0];
pub const MIXED_COLOR: [u8; 3] = [255, 0, 0];

const BASE_COLORS: [[u8; 3]; 3] = [[0, 0, 255], [0, 160, 0], [128, 128, 128]];

/// yellow, cyan, magenta, orange, purple, brown, pink, olive
pub const EXTRA_COLORS: [[u8; 3]; 8] = [
    [255, 255, 0],
    [0, 255, 255],
    [255, 0, 255],
    [255, 165, 0],
    [128, 0, 128],
    [139, 69, 19],
    [255, 192, 203],
    [128, 128, 0],
];

pub fn palette_color(class: usize) -> [u8; 3] {
    match BASE_COLORS.get(class) {
        Some(c) => *c,
        None => EXTRA_COLORS[(class - BASE_COLORS.len()) % EXTRA_COLORS.len()],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LandCoverMap {
    pub grid: LabelGrid,
    pub class_names: Vec<String>,
}

impl LandCoverMap {
    pub fn new(grid: LabelGrid, class_names: Vec<String>) -> Result<Self> {
        let expected = grid
            .width
            .checked_mul(grid.height)
            .ok_or_else(|| Error::input("map dimensions overflow"))?;
        if grid.labels.len() != expected {
            return Err(Error::input(format!(
                "{}x{} map needs {expected} labels, got {}",
                grid.width,
                grid.height,
                grid.labels.len()
            )));
        }
        let n = class_names.len();
        for label in &grid.labels {
            let ok = match label {
                PixelLabel::Class(k) => *k < n,
                PixelLabel::Unclassified => true,
                PixelLabel::Mixed(set) => set.len() >= 2 && set.iter().all(|&k| k < n),
            };
            if !ok {
                return Err(Error::input(format!("label {label} is invalid for {n} classes")));
            }
        }
        Ok(LandCoverMap { grid, class_names })
    }

    pub fn color(&self, label: &PixelLabel) -> [u8; 3] {
        match label {
            PixelLabel::Class(k) => palette_color(*k),
            PixelLabel::Unclassified => UNCLASSIFIED_COLOR,
            PixelLabel::Mixed(_) => MIXED_COLOR,
        }
    }

    pub fn legend(&self) -> String {
        let mut s = String::new();
        for (k, name) in self.class_names.iter().enumerate() {
            let [r, g, b] = palette_color(k);
            s.push_str(&format!("{r} {g} {b} {name}\n"));
        }
        let [r, g, b] = UNCLASSIFIED_COLOR;
        s.push_str(&format!("{r} {g} {b} unclassified\n"));
        let [r, g, b] = MIXED_COLOR;
        s.push_str(&format!("{r} {g} {b} mixed\n"));
        s
    }
}

pub fn encode_ppm(map: &LandCoverMap) -> Vec<u8> {
    let header = format!("P6\n{} {}\n255\n", map.grid.width, map.grid.height);
    let mut out = Vec::with_capacity(header.len() + 3 * map.grid.labels.len());
    out.extend_from_slice(header.as_bytes());
    for label in &map.grid.labels {
        out.extend_from_slice(&map.color(label));
    }
    out
}

/// Decodes a binary PPM with maxval 255 into `(width, height, pixels)`.
pub fn decode_ppm(bytes: &[u8]) -> Result<(usize, usize, Vec<[u8; 3]>)> {
    let mut pos = 0;
    let token = |pos: &mut usize| -> Result<(usize, String)> {
        loop {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
            if *pos < bytes.len() && bytes[*pos] == b'#' {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
                continue;
            }
            break;
        }
        let start = *pos;
        while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() && bytes[*pos] != b'#' {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::parse(start, "unexpected end of PPM header"));
        }
        Ok((start, String::from_utf8_lossy(&bytes[start..*pos]).into_owned()))
    };
    let (off, magic) = token(&mut pos)?;
    if magic != "P6" {
        return Err(Error::parse(off, "not a binary PPM (P6)"));
    }
    let mut numbers = [0usize; 3];
    for n in &mut numbers {
        let (off, t) = token(&mut pos)?;
        *n = t
            .parse()
            .map_err(|_| Error::parse(off, format!("invalid PPM header value '{t}'")))?;
    }
    let [width, height, maxval] = numbers;
    if maxval != 255 {
        return Err(Error::parse(pos, format!("unsupported maxval {maxval}")));
    }
    // exactly one whitespace byte separates the header from the data
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(Error::parse(pos, "missing whitespace after PPM header"));
    }
    pos += 1;
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::parse(pos, "PPM dimensions overflow"))?;
    let data = &bytes[pos..];
    if count.checked_mul(3) != Some(data.len()) {
        return Err(Error::parse(
            pos,
            format!("PPM data has {} bytes, expected {}x{}x3", data.len(), width, height),
        ));
    }
    let pixels = data.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
    Ok((width, height, pixels))
}

/// Path of the legend written next to a map image.
pub fn legend_path(path: &Path) -> PathBuf {
    path.with_extension("legend.txt")
}

/// Writes the PPM image and its legend.
pub fn export_map(map: &LandCoverMap, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_atomic(path, &encode_ppm(map))?;
    write_atomic(&legend_path(path), map.legend().as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(labels: Vec<PixelLabel>, w: usize, h: usize) -> LandCoverMap {
        LandCoverMap::new(
            LabelGrid {
                width: w,
                height: h,
                labels,
            },
            vec!["water".into(), "vegetation".into(), "built-up".into()],
        )
        .unwrap()
    }

    #[test]
    fn unclassified_renders_black() {
        let (_, _, px) = decode_ppm(&encode_ppm(&map(vec![PixelLabel::Unclassified], 1, 1))).unwrap();
        assert_eq!(px, vec![[0, 0, 0]]);
    }

    #[test]
    fn mixed_renders_red() {
        let (_, _, px) = decode_ppm(&encode_ppm(&map(vec![PixelLabel::Mixed(vec![0, 1])], 1, 1))).unwrap();
        assert_eq!(px, vec![[255, 0, 0]]);
    }

    #[test]
    fn class_pixels_use_palette() {
        let bytes = encode_ppm(&map(vec![PixelLabel::Class(0), PixelLabel::Class(0)], 2, 1));
        assert_eq!(&bytes[..11], b"P6\n2 1\n255\n");
        let (w, h, px) = decode_ppm(&bytes).unwrap();
        assert_eq!((w, h), (2, 1));
        assert_eq!(px, vec![palette_color(0); 2]);
    }

    #[test]
    fn palette_never_uses_reserved_colors() {
        for k in 0..40 {
            let c = palette_color(k);
            assert_ne!(c, UNCLASSIFIED_COLOR);
            assert_ne!(c, MIXED_COLOR);
        }
        assert_eq!(palette_color(3), palette_color(11));
    }

    #[test]
    fn rejects_invalid_labels() {
        let grid = LabelGrid {
            width: 1,
            height: 1,
            labels: vec![PixelLabel::Class(5)],
        };
        assert!(LandCoverMap::new(grid, vec!["a".into(), "b".into()]).is_err());
        let grid = LabelGrid {
            width: 2,
            height: 1,
            labels: vec![PixelLabel::Unclassified],
        };
        assert!(LandCoverMap::new(grid, vec!["a".into(), "b".into()]).is_err());
    }

    #[test]
    fn decode_handles_comments_and_rejects_garbage() {
        let (w, h, px) = decode_ppm(b"P6 # comment\n1 1\n255\n\x01\x02\x03").unwrap();
        assert_eq!((w, h, px), (1, 1, vec![[1, 2, 3]]));
        assert!(decode_ppm(b"P3\n1 1\n255\n").is_err());
        assert!(decode_ppm(b"P6\n1 1\n65535\n\x00\x00\x00").is_err());
        assert!(decode_ppm(b"P6\n2 1\n255\n\x00\x00\x00").is_err());
        assert!(decode_ppm(b"P6\n1").is_err());
    }

    #[test]
    fn export_writes_legend() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("map_1aa_rbf.ppm");
        export_map(&map(vec![PixelLabel::Class(2)], 1, 1), &path).unwrap();
        let legend = std::fs::read_to_string(dir.path().join("map_1aa_rbf.legend.txt")).unwrap();
        assert_eq!(
            legend,
            "0 0 255 water\n0 160 0 vegetation\n128 128 128 built-up\n0 0 0 unclassified\n255 0 0 mixed\n"
        );
        assert!(export_map(&map(vec![PixelLabel::Class(2)], 1, 1), dir.path().join("missing/x.ppm")).is_err());
    }
}
