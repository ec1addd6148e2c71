//! Versioned line-oriented text formats for trained models, label grids and
//! assessment records.
//!
//! Every format starts with a magic line and version, has one `key value`
//! pair per line and ends with `end`. Reals are written in Rust's shortest
//! round-trip notation so reading a file back reproduces every bit.
//!
//! Model file:
//!
//! ```text
//! LCSVM-MODEL 1
//! strategy 1aa
//! kernel rbf
//! degree 3
//! gamma 0.16666666666666666
//! coef0 1.0
//! c 10.0
//! tolerance 0.001
//! max_passes 10
//! max_sweeps 10000
//! classes 3
//! class water
//! class vegetation
//! class built-up
//! standardizer 6
//! mean <6 reals>
//! scale <6 reals>
//! meta cv_accuracy 0.99
//! machines 3
//! machine 0 rest          (1aa; "machine 0 1" for a 1a1 pair)
//! bias -0.25
//! support_vectors 2
//! sv <coef> <x1> ... <xd>
//! sv <coef> <x1> ... <xd>
//! ...
//! end
//! ```
//!
//! A `standardizer 0` line means no standardization and is followed by no
//! `mean`/`scale` lines.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::assessment::ConfusionMatrix;
use crate::binary_svm::{BinaryModel, TrainConfig};
use crate::kernels::{KernelKind, KernelSpec, Standardizer};
use crate::multiclass::{
    ClassSet, LabelGrid, Machines, MulticlassModel, PairMachine, PixelLabel, Strategy, TallySummary,
};
use crate::raster_io::write_atomic;
use crate::{Error, Result};

pub const MODEL_MAGIC: &str = "LCSVM-MODEL";
pub const LABELS_MAGIC: &str = "LCSVM-LABELS";
pub const ASSESSMENT_MAGIC: &str = "LCSVM-ASSESSMENT";
pub const FORMAT_VERSION: u32 = 1;

struct Reader<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    end_offset: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines = Vec::new();
        let mut offset = 0;
        for raw in text.split_inclusive('\n') {
            let line = raw.trim_end_matches(['\n', '\r']);
            if !line.trim().is_empty() {
                lines.push((offset, line));
            }
            offset += raw.len();
        }
        Reader {
            lines,
            pos: 0,
            end_offset: text.len(),
        }
    }

    fn remaining(&self) -> usize {
        self.lines.len() - self.pos
    }

    fn next_line(&mut self) -> Result<(usize, &'a str)> {
        let line = self
            .lines
            .get(self.pos)
            .copied()
            .ok_or_else(|| Error::parse(self.end_offset, "unexpected end of file"))?;
        self.pos += 1;
        Ok(line)
    }

    fn peek_key(&self) -> Option<&'a str> {
        self.lines
            .get(self.pos)
            .map(|(_, l)| l.split_once(' ').map_or(*l, |(k, _)| k))
    }

    /// Next line, which must be `key` optionally followed by a value.
    fn keyed(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (off, line) = self.next_line()?;
        let (k, rest) = line.split_once(' ').unwrap_or((line, ""));
        if k != key {
            return Err(Error::parse(off, format!("expected '{key}', found '{k}'")));
        }
        Ok((off, rest))
    }

    fn value<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let (off, rest) = self.keyed(key)?;
        parse_token(off, rest.trim(), key)
    }

    fn header(&mut self, magic: &str) -> Result<()> {
        let (off, line) = self.next_line()?;
        if line != format!("{magic} {FORMAT_VERSION}") {
            return Err(Error::parse(off, format!("expected header '{magic} {FORMAT_VERSION}'")));
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        self.keyed("end")?;
        if let Some(&(off, _)) = self.lines.get(self.pos) {
            return Err(Error::parse(off, "content after 'end'"));
        }
        Ok(())
    }

    /// A declared element count, which cannot exceed the remaining lines.
    fn count(&mut self, key: &str, lines_per_item: usize) -> Result<usize> {
        let (off, rest) = self.keyed(key)?;
        let n: usize = parse_token(off, rest.trim(), key)?;
        if n.saturating_mul(lines_per_item) > self.remaining() {
            return Err(Error::parse(off, format!("{key} count {n} exceeds the file length")));
        }
        Ok(n)
    }
}

fn parse_token<T: std::str::FromStr>(off: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(off, format!("invalid {what} value '{tok}'")))
}

fn parse_reals(off: usize, text: &str, what: &str) -> Result<Vec<f64>> {
    text.split_whitespace()
        .map(|t| {
            let v: f64 = parse_token(off, t, what)?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::parse(off, format!("non-finite {what} value")))
            }
        })
        .collect()
}

fn join_reals(values: &[f64]) -> String {
    let mut s = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{v:?}");
    }
    s
}

fn write_classes(s: &mut String, classes: &ClassSet) {
    let _ = writeln!(s, "classes {}", classes.len());
    for name in classes.names() {
        let _ = writeln!(s, "class {name}");
    }
}

fn read_classes(r: &mut Reader<'_>) -> Result<ClassSet> {
    let (off, _) = r.lines.get(r.pos).copied().unwrap_or((r.end_offset, ""));
    let n = r.count("classes", 1)?;
    let mut names = Vec::with_capacity(n);
    for _ in 0..n {
        let (_, name) = r.keyed("class")?;
        names.push(name.to_string());
    }
    ClassSet::new(names).map_err(|e| Error::parse(off, e.to_string()))
}

/// Serializes a model to the text format.
pub fn model_to_string(model: &MulticlassModel) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{MODEL_MAGIC} {FORMAT_VERSION}");
    let _ = writeln!(s, "strategy {}", model.strategy());
    let k = &model.kernel;
    let _ = writeln!(s, "kernel {}", k.kind);
    let _ = writeln!(s, "degree {}", k.degree);
    let _ = writeln!(s, "gamma {:?}", k.gamma);
    let _ = writeln!(s, "coef0 {:?}", k.coef0);
    let cfg = &model.config;
    let _ = writeln!(s, "c {:?}", cfg.c);
    let _ = writeln!(s, "tolerance {:?}", cfg.tolerance);
    let _ = writeln!(s, "max_passes {}", cfg.max_passes);
    let _ = writeln!(s, "max_sweeps {}", cfg.max_sweeps);
    write_classes(&mut s, &model.classes);
    match &model.standardizer {
        Some(st) => {
            let _ = writeln!(s, "standardizer {}", st.bands());
            let _ = writeln!(s, "mean {}", join_reals(&st.mean));
            let _ = writeln!(s, "scale {}", join_reals(&st.scale));
        }
        None => s.push_str("standardizer 0\n"),
    }
    for (key, value) in &model.metadata {
        let _ = writeln!(s, "meta {key} {value}");
    }
    let _ = writeln!(s, "machines {}", model.machine_count());
    let mut write_machine = |tag: String, m: &BinaryModel| {
        let _ = writeln!(s, "machine {tag}");
        let _ = writeln!(s, "bias {:?}", m.bias);
        let _ = writeln!(s, "support_vectors {}", m.support_vectors.len());
        for (sv, coef) in m.support_vectors.iter().zip(&m.dual_coefs) {
            let _ = writeln!(s, "sv {coef:?} {}", join_reals(sv));
        }
    };
    match &model.machines {
        Machines::OneVsAll(ms) => {
            for (k, m) in ms.iter().enumerate() {
                write_machine(format!("{k} rest"), m);
            }
        }
        Machines::OneVsOne(ms) => {
            for p in ms {
                write_machine(format!("{} {}", p.positive, p.negative), &p.model);
            }
        }
    }
    s.push_str("end\n");
    s
}

/// Parses the model text format and validates the result.
pub fn parse_model(text: &str) -> Result<MulticlassModel> {
    let mut r = Reader::new(text);
    r.header(MODEL_MAGIC)?;
    let (off, strategy) = r.keyed("strategy")?;
    let strategy: Strategy = strategy.parse().map_err(|_| Error::parse(off, "unknown strategy"))?;
    let (off, kind) = r.keyed("kernel")?;
    let kind: KernelKind = kind.parse().map_err(|_| Error::parse(off, "unknown kernel"))?;
    let kernel = KernelSpec {
        kind,
        degree: r.value("degree")?,
        gamma: r.value("gamma")?,
        coef0: r.value("coef0")?,
    };
    kernel.validate().map_err(|e| Error::parse(off, e.to_string()))?;
    let (cfg_off, _) = r.lines.get(r.pos).copied().unwrap_or((0, ""));
    let config = TrainConfig {
        c: r.value("c")?,
        tolerance: r.value("tolerance")?,
        max_passes: r.value("max_passes")?,
        max_sweeps: r.value("max_sweeps")?,
    };
    config.validate().map_err(|e| Error::parse(cfg_off, e.to_string()))?;
    let classes = read_classes(&mut r)?;

    let (off, bands) = r.keyed("standardizer")?;
    let bands: usize = parse_token(off, bands.trim(), "standardizer")?;
    let standardizer = if bands == 0 {
        None
    } else {
        let (off, mean) = r.keyed("mean")?;
        let mean = parse_reals(off, mean, "mean")?;
        let (off2, scale) = r.keyed("scale")?;
        let scale = parse_reals(off2, scale, "scale")?;
        if mean.len() != bands || scale.len() != bands {
            return Err(Error::parse(
                off,
                format!("standardizer needs {bands} means and scales"),
            ));
        }
        if scale.iter().any(|s| *s <= 0.0) {
            return Err(Error::parse(off2, "standardizer scales must be positive"));
        }
        Some(Standardizer { mean, scale })
    };

    let mut metadata = Vec::new();
    while r.peek_key() == Some("meta") {
        let (off, rest) = r.keyed("meta")?;
        let (key, value) = rest
            .split_once(' ')
            .ok_or_else(|| Error::parse(off, "meta line needs a key and a value"))?;
        metadata.push((key.to_string(), value.to_string()));
    }

    let count = r.count("machines", 3)?;
    let read_machine = |r: &mut Reader<'_>| -> Result<(usize, (usize, Option<usize>), BinaryModel)> {
        let (off, tag) = r.keyed("machine")?;
        let (a, b) = tag
            .split_once(' ')
            .ok_or_else(|| Error::parse(off, "machine line needs two fields"))?;
        let a: usize = parse_token(off, a, "machine class")?;
        let b = if b == "rest" {
            None
        } else {
            Some(parse_token::<usize>(off, b, "machine class")?)
        };
        let bias: f64 = r.value("bias")?;
        if !bias.is_finite() {
            return Err(Error::parse(off, "non-finite bias"));
        }
        let m = r.count("support_vectors", 1)?;
        let mut support_vectors = Vec::with_capacity(m);
        let mut dual_coefs = Vec::with_capacity(m);
        for _ in 0..m {
            let (off, rest) = r.keyed("sv")?;
            let mut values = parse_reals(off, rest, "support vector")?;
            if values.len() < 2 {
                return Err(Error::parse(
                    off,
                    "support vector line needs a coefficient and features",
                ));
            }
            dual_coefs.push(values.remove(0));
            support_vectors.push(values);
        }
        Ok((
            off,
            (a, b),
            BinaryModel {
                kernel,
                support_vectors,
                dual_coefs,
                bias,
                c: config.c,
            },
        ))
    };

    let machines = match strategy {
        Strategy::OneVsAll => {
            let mut ms = Vec::with_capacity(count);
            for k in 0..count {
                let (off, tag, m) = read_machine(&mut r)?;
                if tag != (k, None) {
                    return Err(Error::parse(off, format!("expected 'machine {k} rest'")));
                }
                ms.push(m);
            }
            Machines::OneVsAll(ms)
        }
        Strategy::OneVsOne => {
            let mut ms = Vec::with_capacity(count);
            for _ in 0..count {
                let (off, tag, model) = read_machine(&mut r)?;
                let (positive, negative) = match tag {
                    (a, Some(b)) => (a, b),
                    _ => return Err(Error::parse(off, "pair machine needs two class indices")),
                };
                ms.push(PairMachine {
                    positive,
                    negative,
                    model,
                });
            }
            Machines::OneVsOne(ms)
        }
    };
    r.finish()?;
    let model = MulticlassModel {
        classes,
        kernel,
        config,
        standardizer,
        machines,
        metadata,
    };
    model
        .validate()
        .map_err(|e| Error::parse(0, format!("inconsistent model: {e}")))?;
    Ok(model)
}

pub fn save_model(path: impl AsRef<Path>, model: &MulticlassModel) -> Result<()> {
    write_atomic(path.as_ref(), model_to_string(model).as_bytes())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<MulticlassModel> {
    parse_model(&read_text(path.as_ref())?)
}

fn read_text(path: &Path) -> Result<String> {
    let bytes = fs::read(path)?;
    String::from_utf8(bytes).map_err(|e| Error::parse(e.utf8_error().valid_up_to(), "file is not valid UTF-8"))
}

/// A classified label grid tagged with the run that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelFile {
    pub kernel: KernelKind,
    pub strategy: Strategy,
    pub classes: ClassSet,
    pub grid: LabelGrid,
}

impl LabelFile {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{LABELS_MAGIC} {FORMAT_VERSION}");
        let _ = writeln!(s, "kernel {}", self.kernel);
        let _ = writeln!(s, "strategy {}", self.strategy);
        write_classes(&mut s, &self.classes);
        let _ = writeln!(s, "width {}", self.grid.width);
        let _ = writeln!(s, "height {}", self.grid.height);
        if self.grid.width > 0 {
            for row in self.grid.labels.chunks(self.grid.width) {
                s.push_str("row");
                for label in row {
                    let _ = write!(s, " {label}");
                }
                s.push('\n');
            }
        }
        s.push_str("end\n");
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut r = Reader::new(text);
        r.header(LABELS_MAGIC)?;
        let (off, kernel) = r.keyed("kernel")?;
        let kernel: KernelKind = kernel.parse().map_err(|_| Error::parse(off, "unknown kernel"))?;
        let (off, strategy) = r.keyed("strategy")?;
        let strategy: Strategy = strategy.parse().map_err(|_| Error::parse(off, "unknown strategy"))?;
        let classes = read_classes(&mut r)?;
        let width: usize = r.value("width")?;
        let (off, _) = r.lines.get(r.pos).copied().unwrap_or((0, ""));
        let height = if width == 0 {
            r.value("height")?
        } else {
            r.count("height", 1)?
        };
        if width == 0 && height != 0 {
            return Err(Error::parse(off, "zero-width grid must have zero height"));
        }
        let n = classes.len();
        let mut labels = Vec::new();
        for _ in 0..if width == 0 { 0 } else { height } {
            let (off, rest) = r.keyed("row")?;
            let before = labels.len();
            for tok in rest.split_whitespace() {
                labels.push(parse_label(off, tok, n)?);
                if labels.len() - before > width {
                    break;
                }
            }
            if labels.len() - before != width {
                return Err(Error::parse(off, format!("row must have {width} labels")));
            }
        }
        r.finish()?;
        Ok(LabelFile {
            kernel,
            strategy,
            classes,
            grid: LabelGrid { width, height, labels },
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_atomic(path.as_ref(), self.to_text().as_bytes())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&read_text(path.as_ref())?)
    }
}

fn parse_label(off: usize, tok: &str, classes: usize) -> Result<PixelLabel> {
    if tok == "U" {
        return Ok(PixelLabel::Unclassified);
    }
    if let Some(set) = tok.strip_prefix("M:") {
        let mut members = Vec::new();
        for part in set.split('+') {
            let k: usize = parse_token(off, part, "mixed class")?;
            if k >= classes || members.last().is_some_and(|&last| last >= k) {
                return Err(Error::parse(off, format!("invalid mixed label '{tok}'")));
            }
            members.push(k);
        }
        if members.len() < 2 {
            return Err(Error::parse(off, format!("mixed label '{tok}' needs two classes")));
        }
        return Ok(PixelLabel::Mixed(members));
    }
    let k: usize = parse_token(off, tok, "label")?;
    if k >= classes {
        return Err(Error::parse(off, format!("class index {k} out of range")));
    }
    Ok(PixelLabel::Class(k))
}

/// Tally and confusion matrix of one kernel × strategy run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssessmentRecord {
    pub kernel: KernelKind,
    pub strategy: Strategy,
    pub classes: ClassSet,
    pub tally: TallySummary,
    pub confusion: ConfusionMatrix,
}

impl AssessmentRecord {
    /// Text form. Kappa and its variance are appended for readers; parsing
    /// recomputes them from the matrix.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{ASSESSMENT_MAGIC} {FORMAT_VERSION}");
        let _ = writeln!(s, "kernel {}", self.kernel);
        let _ = writeln!(s, "strategy {}", self.strategy);
        write_classes(&mut s, &self.classes);
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "tally {}", join(&self.tally.per_class));
        let _ = writeln!(s, "unclassified {}", self.tally.unclassified);
        let _ = writeln!(s, "mixed {}", self.tally.mixed);
        for row in self.confusion.rows() {
            let _ = writeln!(s, "matrix {}", join(&row));
        }
        if let Ok(k) = crate::assessment::kappa(&self.confusion) {
            let _ = writeln!(s, "# kappa {:?}", k.kappa);
            let _ = writeln!(s, "# variance {:?}", k.variance);
        }
        s.push_str("end\n");
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let stripped: String = text
            .split_inclusive('\n')
            .map(|l| if l.starts_with('#') { "\n" } else { l })
            .collect();
        let mut r = Reader::new(&stripped);
        r.header(ASSESSMENT_MAGIC)?;
        let (off, kernel) = r.keyed("kernel")?;
        let kernel: KernelKind = kernel.parse().map_err(|_| Error::parse(off, "unknown kernel"))?;
        let (off, strategy) = r.keyed("strategy")?;
        let strategy: Strategy = strategy.parse().map_err(|_| Error::parse(off, "unknown strategy"))?;
        let classes = read_classes(&mut r)?;
        let n = classes.len();
        let counts = |off: usize, rest: &str, what: &str| -> Result<Vec<u64>> {
            let v = rest
                .split_whitespace()
                .map(|t| parse_token::<u64>(off, t, what))
                .collect::<Result<Vec<_>>>()?;
            if v.len() != n {
                return Err(Error::parse(off, format!("{what} needs {n} counts")));
            }
            Ok(v)
        };
        let (off, rest) = r.keyed("tally")?;
        let per_class = counts(off, rest, "tally")?;
        let tally = TallySummary {
            per_class,
            unclassified: r.value("unclassified")?,
            mixed: r.value("mixed")?,
        };
        let mut rows = Vec::with_capacity(n + 2);
        for _ in 0..n + 2 {
            let (off, rest) = r.keyed("matrix")?;
            rows.push(counts(off, rest, "matrix row")?);
        }
        let confusion = ConfusionMatrix::from_rows(&rows).map_err(|e| Error::parse(0, e.to_string()))?;
        r.finish()?;
        Ok(AssessmentRecord {
            kernel,
            strategy,
            classes,
            tally,
            confusion,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_atomic(path.as_ref(), self.to_text().as_bytes())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&read_text(path.as_ref())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiclass::{train, ClassSamples};

    fn model(strategy: Strategy, standardize: bool) -> MulticlassModel {
        let classes = ClassSet::new(["water", "vegetation", "built-up"]).unwrap();
        let samples = (0..3)
            .map(|k| {
                (0..4)
                    .map(|i| vec![k as f64 * 5.0 + 0.1 * i as f64, 1.0 / 3.0 * i as f64])
                    .collect()
            })
            .collect();
        let data = ClassSamples::new(classes, samples).unwrap();
        let mut m = train(
            strategy,
            &data,
            &KernelSpec::rbf(0.5),
            &TrainConfig::with_c(10.0),
            standardize,
        )
        .unwrap();
        m.metadata.push(("cv_accuracy".into(), "0.975".into()));
        m
    }

    #[test]
    fn model_round_trips_exactly() {
        for s in Strategy::ALL {
            for st in [true, false] {
                let m = model(s, st);
                let text = model_to_string(&m);
                let back = parse_model(&text).unwrap();
                assert_eq!(back, m);
                assert_eq!(model_to_string(&back), text);
            }
        }
    }

    #[test]
    fn model_parse_errors_carry_offsets() {
        let text = model_to_string(&model(Strategy::OneVsOne, true));
        assert!(matches!(parse_model(""), Err(Error::Parse { offset: 0, .. })));
        let bad = text.replace("kernel rbf", "kernel sigmoid");
        let offset = text.find("kernel rbf").unwrap();
        match parse_model(&bad) {
            Err(Error::Parse { offset: o, .. }) => assert_eq!(o, offset),
            other => panic!("unexpected {other:?}"),
        }
        let truncated = &text[..text.len() / 2];
        assert!(matches!(parse_model(truncated), Err(Error::Parse { .. })));
        assert!(parse_model(&text.replace("machines 3", "machines 2")).is_err());
        assert!(parse_model(&text.replace("machines 3", "machines 99999999")).is_err());
        assert!(parse_model(&format!("{text}extra\n")).is_err());
    }

    #[test]
    fn label_file_round_trips() {
        let f = LabelFile {
            kernel: KernelKind::Quadratic,
            strategy: Strategy::OneVsAll,
            classes: ClassSet::new(["a", "b", "c"]).unwrap(),
            grid: LabelGrid {
                width: 2,
                height: 2,
                labels: vec![
                    PixelLabel::Class(2),
                    PixelLabel::Unclassified,
                    PixelLabel::Mixed(vec![0, 1, 2]),
                    PixelLabel::Class(0),
                ],
            },
        };
        let text = f.to_text();
        assert!(text.contains("row 2 U\nrow M:0+1+2 0\n"));
        assert_eq!(LabelFile::parse(&text).unwrap(), f);
        for bad in ["M:1+0", "M:0", "3", "M:0+5", "X"] {
            let t = text.replace("row 2 U", &format!("row 2 {bad}"));
            assert!(LabelFile::parse(&t).is_err(), "{bad}");
        }
        assert!(LabelFile::parse(&text.replace("row 2 U", "row 2 U 1")).is_err());
    }

    #[test]
    fn empty_label_grid() {
        let f = LabelFile {
            kernel: KernelKind::Linear,
            strategy: Strategy::OneVsOne,
            classes: ClassSet::new(["a", "b"]).unwrap(),
            grid: LabelGrid {
                width: 0,
                height: 0,
                labels: vec![],
            },
        };
        assert_eq!(LabelFile::parse(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn assessment_round_trips() {
        let rec = AssessmentRecord {
            kernel: KernelKind::Rbf,
            strategy: Strategy::OneVsAll,
            classes: ClassSet::new(["a", "b"]).unwrap(),
            tally: TallySummary {
                per_class: vec![10, 12],
                unclassified: 3,
                mixed: 1,
            },
            confusion: ConfusionMatrix::from_rows(&[vec![40, 5], vec![3, 45], vec![2, 1], vec![0, 4]]).unwrap(),
        };
        let text = rec.to_text();
        assert!(text.contains("# kappa"));
        assert_eq!(AssessmentRecord::parse(&text).unwrap(), rec);
        assert!(AssessmentRecord::parse(&text.replace("matrix 0 4", "matrix 0")).is_err());
    }
}
