//! Text formats for measures and sample sets.
//!
//! ```text
//! skewscope-measure v1 n=<n> format=<dense|sparse>
//! skewscope-samples v1 n=<n>
//! ```
//! Dense bodies list `2^n` densities in point order; sparse bodies list
//! `<bits-hex> <density>` pairs with absent points at 0. Sample bodies hold
//! one `{0,1}` string per line, character `i` being bit `i` of the point.

use std::io::{BufRead, Write};

use super::{ExplicitMeasure, SampleSet};
use crate::error::{Error, Result};

const MEASURE_MAGIC: &str = "skewscope-measure";
const SAMPLES_MAGIC: &str = "skewscope-samples";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureFormat {
    Dense,
    Sparse,
}

/// Either kind of input file, told apart by its header.
#[derive(Clone, Debug)]
pub enum InputFile {
    Measure(ExplicitMeasure),
    Samples(SampleSet),
}

impl InputFile {
    pub fn dim(&self) -> usize {
        match self {
            InputFile::Measure(m) => m.dim(),
            InputFile::Samples(s) => s.dim(),
        }
    }

    /// Reads either format; `renormalize` applies to measures only.
    pub fn read(reader: impl BufRead, renormalize: bool) -> Result<InputFile> {
        let mut lines = Lines::new(reader);
        let (magic, header) = lines.header()?;
        match magic.as_str() {
            MEASURE_MAGIC => read_measure_body(&mut lines, &header, renormalize).map(InputFile::Measure),
            SAMPLES_MAGIC => read_samples_body(&mut lines, &header).map(InputFile::Samples),
            other => Err(parse_err(1, format!("unknown file type {other:?}"))),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn new(reader: R) -> Self {
        Lines { inner: reader.lines(), line: 0 }
    }

    /// Next non-blank, non-comment line.
    fn next_line(&mut self) -> Result<Option<String>> {
        for l in self.inner.by_ref() {
            self.line += 1;
            let l = l?;
            let t = l.trim();
            if !t.is_empty() && !t.starts_with('#') {
                return Ok(Some(t.to_string()));
            }
        }
        Ok(None)
    }

    fn header(&mut self) -> Result<(String, Vec<(String, String)>)> {
        let h = self.next_line()?.ok_or_else(|| parse_err(1, "missing header"))?;
        let mut toks = h.split_whitespace();
        let magic = toks.next().unwrap_or_default().to_string();
        if toks.next() != Some("v1") {
            return Err(parse_err(self.line, "expected version v1"));
        }
        let kv = toks
            .filter_map(|t| t.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())))
            .collect();
        Ok((magic, kv))
    }
}

fn header_n(header: &[(String, String)], line: usize) -> Result<usize> {
    let v = header.iter().find(|(k, _)| k == "n").ok_or_else(|| parse_err(line, "header lacks n="))?;
    v.1.parse().map_err(|_| parse_err(line, format!("bad n={}", v.1)))
}

fn read_measure_body<R: BufRead>(
    lines: &mut Lines<R>,
    header: &[(String, String)],
    renormalize: bool,
) -> Result<ExplicitMeasure> {
    let n = header_n(header, lines.line)?;
    if n == 0 || n > super::MAX_EXPLICIT_DIM {
        return Err(Error::DimensionOutOfRange { n, max: super::MAX_EXPLICIT_DIM });
    }
    let format = match header.iter().find(|(k, _)| k == "format").map(|(_, v)| v.as_str()) {
        Some("dense") | None => MeasureFormat::Dense,
        Some("sparse") => MeasureFormat::Sparse,
        Some(other) => return Err(parse_err(lines.line, format!("unknown format {other}"))),
    };
    let size = 1usize << n;
    let mut density = Vec::with_capacity(if format == MeasureFormat::Dense { size } else { 0 });
    if format == MeasureFormat::Sparse {
        density.resize(size, 0.0);
    }
    while let Some(l) = lines.next_line()? {
        match format {
            MeasureFormat::Dense => {
                let v: f64 = l.parse().map_err(|_| parse_err(lines.line, format!("bad density {l:?}")))?;
                density.push(v);
            }
            MeasureFormat::Sparse => {
                let (a, b) = l
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| parse_err(lines.line, "expected '<bits-hex> <density>'"))?;
                let a = a.trim_start_matches("0x");
                let x = u64::from_str_radix(a, 16).map_err(|_| parse_err(lines.line, format!("bad point {a:?}")))?;
                if x >= size as u64 {
                    return Err(Error::BitsOutOfRange { bits: x, n });
                }
                density[x as usize] = b.trim().parse().map_err(|_| parse_err(lines.line, format!("bad density {b:?}")))?;
            }
        }
    }
    if density.len() != size {
        return Err(parse_err(lines.line, format!("expected {size} densities, found {}", density.len())));
    }
    if renormalize {
        ExplicitMeasure::from_weights(n, density)
    } else {
        ExplicitMeasure::new(n, density)
    }
}

fn read_samples_body<R: BufRead>(lines: &mut Lines<R>, header: &[(String, String)]) -> Result<SampleSet> {
    let n = header_n(header, lines.line)?;
    let seed = header
        .iter()
        .find(|(k, _)| k == "seed")
        .and_then(|(_, v)| v.parse().ok())
        .unwrap_or(0);
    let mut points = Vec::new();
    while let Some(l) = lines.next_line()? {
        if l.len() != n {
            return Err(parse_err(lines.line, format!("point has {} characters, expected {n}", l.len())));
        }
        let mut bits = 0u64;
        for (i, c) in l.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => bits |= 1 << i,
                _ => return Err(parse_err(lines.line, format!("bad character {:?}", c as char))),
            }
        }
        points.push(bits);
    }
    SampleSet::new(n, points, seed)
}

pub fn read_measure(reader: impl BufRead, renormalize: bool) -> Result<ExplicitMeasure> {
    match InputFile::read(reader, renormalize)? {
        InputFile::Measure(m) => Ok(m),
        InputFile::Samples(_) => Err(parse_err(1, "expected a measure file, found samples")),
    }
}

pub fn read_samples(reader: impl BufRead) -> Result<SampleSet> {
    match InputFile::read(reader, false)? {
        InputFile::Samples(s) => Ok(s),
        InputFile::Measure(_) => Err(parse_err(1, "expected a sample file, found a measure")),
    }
}

pub fn write_measure(mut w: impl Write, m: &ExplicitMeasure, format: MeasureFormat) -> Result<()> {
    match format {
        MeasureFormat::Dense => {
            writeln!(w, "{MEASURE_MAGIC} v1 n={} format=dense", m.dim())?;
            for v in m.density() {
                writeln!(w, "{v}")?;
            }
        }
        MeasureFormat::Sparse => {
            writeln!(w, "{MEASURE_MAGIC} v1 n={} format=sparse", m.dim())?;
            for x in m.support() {
                writeln!(w, "{x:x} {}", m.value(x))?;
            }
        }
    }
    Ok(())
}

pub fn write_samples(mut w: impl Write, s: &SampleSet) -> Result<()> {
    writeln!(w, "{SAMPLES_MAGIC} v1 n={} seed={}", s.dim(), s.seed())?;
    let mut line = vec![b'0'; s.dim()];
    for &p in s.points() {
        for (i, c) in line.iter_mut().enumerate() {
            *c = if p >> i & 1 == 1 { b'1' } else { b'0' };
        }
        w.write_all(&line)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
