//! Raster, sample and map file formats.
//!
//! # Raster format
//!
//! A single ASCII header line followed by raw little-endian samples:
//!
//! ```text
//! LCRASTER 1 <width> <height> <bands> <u8|u16|f64>\n
//! <band 0: height rows of width values> <band 1> ...
//! ```
//!
//! Values are band-sequential; within a band they are row-major. The data
//! section must be exactly `width·height·bands` values long.

mod ppm;
mod samples;
mod synth;

pub use ppm::{
    decode_ppm, encode_ppm, export_map, legend_path, palette_color, LandCoverMap, MIXED_COLOR, UNCLASSIFIED_COLOR,
};
pub use samples::{
    format_positions, load_positions, load_samples, parse_positions, save_positions, LabeledPosition, SampleSet,
};
pub use synth::{default_class_names, gen_synthetic, SyntheticScene, SyntheticSpec};

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::{Error, Result};

pub const RASTER_MAGIC: &str = "LCRASTER";
pub const RASTER_VERSION: u32 = 1;
const MAX_HEADER_LEN: usize = 256;

/// Storage type of raster values on disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueType {
    U8,
    U16,
    F64,
}

impl ValueType {
    pub fn size(self) -> usize {
        match self {
            ValueType::U8 => 1,
            ValueType::U16 => 2,
            ValueType::F64 => 8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ValueType::U8 => "u8",
            ValueType::U16 => "u16",
            ValueType::F64 => "f64",
        }
    }
}

impl fmt::Display for ValueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ValueType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "u8" => Ok(ValueType::U8),
            "u16" => Ok(ValueType::U16),
            "f64" => Ok(ValueType::F64),
            other => Err(Error::input(format!("unknown value type '{other}'"))),
        }
    }
}

/// A multi-band image with band-sequential storage.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    bands: usize,
    values: Vec<f64>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, bands: usize, values: Vec<f64>) -> Result<Self> {
        if bands == 0 {
            return Err(Error::input("raster needs at least one band"));
        }
        let expected = width
            .checked_mul(height)
            .and_then(|p| p.checked_mul(bands))
            .ok_or_else(|| Error::input("raster dimensions overflow"))?;
        if values.len() != expected {
            return Err(Error::input(format!(
                "{width}x{height}x{bands} raster needs {expected} values, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("raster values must be finite"));
        }
        Ok(RasterImage {
            width,
            height,
            bands,
            values,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    /// Band-sequential values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn band(&self, b: usize) -> &[f64] {
        let plane = self.width * self.height;
        &self.values[b * plane..(b + 1) * plane]
    }

    pub fn value(&self, band: usize, x: usize, y: usize) -> f64 {
        self.values[(band * self.height + y) * self.width + x]
    }

    /// Feature vector of pixel `(x, y)`, one value per band.
    pub fn pixel(&self, x: usize, y: usize) -> Vec<f64> {
        (0..self.bands).map(|b| self.value(b, x, y)).collect()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x < self.width && y < self.height
    }

    /// Encodes to the raster file format. Integer types require integral
    /// values within range.
    pub fn to_bytes(&self, ty: ValueType) -> Result<Vec<u8>> {
        let header = format!(
            "{RASTER_MAGIC} {RASTER_VERSION} {} {} {} {ty}\n",
            self.width, self.height, self.bands
        );
        let mut out = Vec::with_capacity(header.len() + self.values.len() * ty.size());
        out.extend_from_slice(header.as_bytes());
        for (i, &v) in self.values.iter().enumerate() {
            let integral = |max: f64| -> Result<()> {
                if v.fract() != 0.0 || v < 0.0 || v > max {
                    Err(Error::input(format!(
                        "value {v} at index {i} is not representable as {ty}"
                    )))
                } else {
                    Ok(())
                }
            };
            match ty {
                ValueType::U8 => {
                    integral(u8::MAX as f64)?;
                    out.push(v as u8);
                }
                ValueType::U16 => {
                    integral(u16::MAX as f64)?;
                    out.extend_from_slice(&(v as u16).to_le_bytes());
                }
                ValueType::F64 => out.extend_from_slice(&v.to_le_bytes()),
            }
        }
        Ok(out)
    }

    /// Decodes the raster file format.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let search = &bytes[..bytes.len().min(MAX_HEADER_LEN)];
        let newline = search
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::parse(0, "raster header line not terminated"))?;
        let header = std::str::from_utf8(&bytes[..newline])
            .map_err(|e| Error::parse(e.valid_up_to(), "raster header is not valid UTF-8"))?;

        let mut fields = Vec::new();
        let mut offset = 0;
        for token in header.split(' ') {
            fields.push((offset, token));
            offset += token.len() + 1;
        }
        if fields.len() != 6 {
            return Err(Error::parse(
                0,
                format!("raster header needs 6 fields, found {}", fields.len()),
            ));
        }
        if fields[0].1 != RASTER_MAGIC {
            return Err(Error::parse(0, format!("bad magic, expected {RASTER_MAGIC}")));
        }
        let number = |(off, tok): (usize, &str), what: &str| -> Result<usize> {
            tok.parse::<usize>()
                .map_err(|_| Error::parse(off, format!("invalid {what} '{tok}'")))
        };
        let version = number(fields[1], "version")?;
        if version != RASTER_VERSION as usize {
            return Err(Error::parse(fields[1].0, format!("unsupported version {version}")));
        }
        let width = number(fields[2], "width")?;
        let height = number(fields[3], "height")?;
        let bands = number(fields[4], "band count")?;
        if bands == 0 {
            return Err(Error::parse(fields[4].0, "band count must be positive"));
        }
        let ty: ValueType = fields[5]
            .1
            .parse()
            .map_err(|_| Error::parse(fields[5].0, format!("unknown value type '{}'", fields[5].1)))?;

        let data_start = newline + 1;
        let count = width
            .checked_mul(height)
            .and_then(|p| p.checked_mul(bands))
            .ok_or_else(|| Error::parse(fields[2].0, "raster dimensions overflow"))?;
        let data = &bytes[data_start..];
        let needed = count
            .checked_mul(ty.size())
            .ok_or_else(|| Error::parse(fields[2].0, "raster dimensions overflow"))?;
        if data.len() < needed {
            let complete = data.len() / ty.size();
            return Err(Error::parse(
                data_start + complete * ty.size(),
                format!("truncated raster data: header declares {count} values, found {complete}"),
            ));
        }
        if data.len() > needed {
            return Err(Error::parse(
                data_start + needed,
                format!("{} unexpected trailing bytes", data.len() - needed),
            ));
        }
        let mut values = Vec::with_capacity(count);
        for (i, chunk) in data.chunks_exact(ty.size()).enumerate() {
            let v = match ty {
                ValueType::U8 => chunk[0] as f64,
                ValueType::U16 => u16::from_le_bytes([chunk[0], chunk[1]]) as f64,
                ValueType::F64 => {
                    let v = f64::from_le_bytes(chunk.try_into().expect("chunk of 8 bytes"));
                    if !v.is_finite() {
                        return Err(Error::parse(data_start + i * 8, "non-finite raster value"));
                    }
                    v
                }
            };
            values.push(v);
        }
        Ok(RasterImage {
            width,
            height,
            bands,
            values,
        })
    }
}

pub fn load_raster(path: impl AsRef<Path>) -> Result<RasterImage> {
    RasterImage::from_bytes(&fs::read(path)?)
}

pub fn save_raster(path: impl AsRef<Path>, raster: &RasterImage, ty: ValueType) -> Result<()> {
    write_atomic(path.as_ref(), &raster.to_bytes(ty)?)
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::input(format!("'{}' is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(rest: &str) -> Vec<u8> {
        format!("LCRASTER 1 {rest}\n").into_bytes()
    }

    #[test]
    fn reads_row_major_values() {
        let mut bytes = header("2 2 1 u8");
        bytes.extend([1, 2, 3, 4]);
        let r = RasterImage::from_bytes(&bytes).unwrap();
        assert_eq!(r.values(), &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(r.pixel(1, 0), vec![2.0]);
        assert_eq!(r.pixel(0, 1), vec![3.0]);
    }

    #[test]
    fn truncated_data_reports_offset() {
        let mut bytes = header("2 2 1 u8");
        let start = bytes.len();
        bytes.extend([1, 2, 3]);
        match RasterImage::from_bytes(&bytes) {
            Err(Error::Parse { offset, message }) => {
                assert_eq!(offset, start + 3);
                assert!(message.contains("truncated"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn six_band_raster() {
        let r = RasterImage::new(3, 2, 6, (0..36).map(f64::from).collect()).unwrap();
        let back = RasterImage::from_bytes(&r.to_bytes(ValueType::U16).unwrap()).unwrap();
        assert_eq!(back.bands(), 6);
        assert_eq!(back, r);
        assert_eq!(back.pixel(2, 1), vec![5.0, 11.0, 17.0, 23.0, 29.0, 35.0]);
    }

    #[test]
    fn rejects_bad_headers() {
        for bad in [
            &b"LCRASTER 1 2 2 1\n"[..],
            b"NOTRASTR 1 1 1 1 u8\n\x00",
            b"LCRASTER 2 1 1 1 u8\n\x00",
            b"LCRASTER 1 1 1 0 u8\n",
            b"LCRASTER 1 1 1 1 i32\n\x00",
            b"LCRASTER 1 x 1 1 u8\n\x00",
            b"LCRASTER 1 1 1 1 u8",
            b"LCRASTER 1 99999999999 99999999999 99999999999 f64\n",
        ] {
            assert!(
                matches!(RasterImage::from_bytes(bad), Err(Error::Parse { .. })),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn rejects_trailing_and_non_finite_data() {
        let mut bytes = header("1 1 1 u8");
        bytes.extend([1, 2]);
        assert!(RasterImage::from_bytes(&bytes).is_err());
        let mut bytes = header("1 1 1 f64");
        let start = bytes.len();
        bytes.extend(f64::NAN.to_le_bytes());
        match RasterImage::from_bytes(&bytes) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, start),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn integer_encoding_requires_integral_values() {
        let r = RasterImage::new(1, 1, 1, vec![1.5]).unwrap();
        assert!(r.to_bytes(ValueType::U16).is_err());
        let r = RasterImage::new(1, 1, 1, vec![300.0]).unwrap();
        assert!(r.to_bytes(ValueType::U8).is_err());
        assert!(r.to_bytes(ValueType::U16).is_ok());
    }

    #[test]
    fn empty_raster_round_trips() {
        let r = RasterImage::new(0, 0, 3, vec![]).unwrap();
        assert_eq!(
            RasterImage::from_bytes(&r.to_bytes(ValueType::F64).unwrap()).unwrap(),
            r
        );
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.lcr");
        let r = RasterImage::new(1, 1, 1, vec![2.0]).unwrap();
        save_raster(&path, &r, ValueType::F64).unwrap();
        save_raster(&path, &r, ValueType::U8).unwrap();
        assert_eq!(load_raster(&path).unwrap(), r);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
