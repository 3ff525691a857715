use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};

use crate::domain::{clamp_unit, Configuration, ValueOracle};
use crate::error::{Result, UvpError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Lin,
    Log,
}

/// Affine map applied to one embedding column during ingestion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnScaling {
    pub scale: Scale,
    /// Minimum and maximum after the optional log transform.
    pub min: f64,
    pub max: f64,
}

impl ColumnScaling {
    pub fn apply(&self, v: f64) -> f64 {
        let v = match self.scale {
            Scale::Lin => v,
            Scale::Log => v.ln(),
        };
        if self.max > self.min {
            (v - self.min) / (self.max - self.min)
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadOptions {
    /// Min-max normalize embedding columns to [0, 1].
    pub normalize: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self { normalize: true }
    }
}

/// Learning curves read from a long-format CSV table.
///
/// Curves are stored after monotone wrapping, so queries answer the running
/// maximum of the raw rows.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularBenchmark {
    pub configs: Vec<Configuration>,
    pub curves: Vec<Vec<f64>>,
    pub names: Vec<String>,
    pub scaling: Vec<ColumnScaling>,
    pub source: Option<PathBuf>,
}

impl TabularBenchmark {
    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.configs.first().map_or(0, Configuration::dim)
    }
}

impl ValueOracle for TabularBenchmark {
    fn dimension(&self) -> usize {
        self.dim()
    }

    fn horizon(&self) -> usize {
        self.curves.first().map_or(0, Vec::len)
    }

    fn query(&self, x: &Configuration, b: usize) -> f64 {
        self.curves[x.id][b - 1]
    }
}

pub fn load_tabular(path: impl AsRef<Path>, opts: LoadOptions) -> Result<TabularBenchmark> {
    let path = path.as_ref();
    let file = File::open(path)?;
    let mut bench = read_tabular(BufReader::new(file), opts)?;
    bench.source = Some(path.to_path_buf());
    Ok(bench)
}

fn parse_err(row: u64, column: usize, message: impl Into<String>) -> UvpError {
    UvpError::Parse {
        row: row as usize,
        column,
        message: message.into(),
    }
}

fn parse_f64(field: &str, row: u64, column: usize) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|e| parse_err(row, column, format!("'{field}': {e}")))
}

struct Pending {
    coords: Vec<f64>,
    row: u64,
    values: Vec<Option<f64>>,
}

pub fn read_tabular<R: Read>(reader: R, opts: LoadOptions) -> Result<TabularBenchmark> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut records = rdr.records();

    let header = records
        .next()
        .transpose()?
        .ok_or_else(|| UvpError::Schema("empty file".into()))?;
    let cols: Vec<&str> = header.iter().map(str::trim).collect();
    let d = cols.len().saturating_sub(3);
    let well_formed = cols.len() >= 4
        && cols[0] == "id"
        && cols[cols.len() - 2] == "b"
        && cols[cols.len() - 1] == "value"
        && (0..d).all(|j| cols[1 + j] == format!("x{j}"));
    if !well_formed {
        return Err(UvpError::Schema(format!(
            "header must be id,x0,...,x{{d-1}},b,value with d >= 1, got '{}'",
            cols.join(",")
        )));
    }

    let mut scales = vec![Scale::Lin; d];
    let mut order: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut pending: Vec<Pending> = Vec::new();
    let mut first_data = true;

    for rec in records {
        let rec = rec?;
        let row = rec.position().map_or(0, |p| p.line());
        if first_data && rec.get(0).map(str::trim) == Some("scale") {
            first_data = false;
            for j in 0..d {
                scales[j] = match rec.get(1 + j).map(str::trim) {
                    Some("lin") => Scale::Lin,
                    Some("log") => Scale::Log,
                    other => {
                        return Err(parse_err(row, 2 + j, format!("scale flag must be lin or log, got {other:?}")))
                    }
                };
            }
            continue;
        }
        first_data = false;
        if rec.len() != d + 3 {
            return Err(parse_err(row, rec.len().min(d + 3), format!("expected {} fields, found {}", d + 3, rec.len())));
        }
        let name = rec[0].trim().to_string();
        let coords = (0..d)
            .map(|j| {
                let v = parse_f64(&rec[1 + j], row, 2 + j)?;
                if !v.is_finite() {
                    return Err(parse_err(row, 2 + j, "coordinate must be finite"));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        let b: usize = rec[d + 1]
            .trim()
            .parse()
            .map_err(|e| parse_err(row, d + 2, format!("budget '{}': {e}", &rec[d + 1])))?;
        if b == 0 {
            return Err(parse_err(row, d + 2, "budgets are 1-based"));
        }
        let raw = parse_f64(&rec[d + 2], row, d + 3)?;
        let value = clamp_unit(raw).ok_or_else(|| parse_err(row, d + 3, format!("value {raw} outside [0, 1]")))?;

        let idx = *index.entry(name.clone()).or_insert_with(|| {
            order.push(name.clone());
            pending.push(Pending {
                coords: coords.clone(),
                row,
                values: Vec::new(),
            });
            pending.len() - 1
        });
        let entry = &mut pending[idx];
        if entry.coords != coords {
            return Err(UvpError::Schema(format!(
                "configuration '{name}' has different coordinates on lines {} and {row}",
                entry.row
            )));
        }
        if entry.values.len() < b {
            entry.values.resize(b, None);
        }
        if entry.values[b - 1].replace(value).is_some() {
            return Err(UvpError::Schema(format!("configuration '{name}' repeats budget {b} on line {row}")));
        }
    }

    if pending.is_empty() {
        return Err(UvpError::Schema("no data rows".into()));
    }
    let horizon = pending[0].values.len();
    let mut curves = Vec::with_capacity(pending.len());
    for (name, p) in order.iter().zip(&pending) {
        if p.values.len() != horizon {
            return Err(UvpError::Schema(format!(
                "configuration '{name}' has {} budget steps, expected {horizon}",
                p.values.len()
            )));
        }
        let mut best = f64::NEG_INFINITY;
        let mut curve = Vec::with_capacity(horizon);
        for (b, v) in p.values.iter().enumerate() {
            let v = v.ok_or_else(|| UvpError::Schema(format!("configuration '{name}' is missing budget {}", b + 1)))?;
            best = best.max(v);
            curve.push(best);
        }
        curves.push(curve);
    }

    let scaling = (0..d)
        .map(|j| {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for p in &pending {
                let v = p.coords[j];
                let v = match scales[j] {
                    Scale::Lin => v,
                    Scale::Log if v > 0.0 => v.ln(),
                    Scale::Log => return Err(parse_err(p.row, 2 + j, format!("log-scaled coordinate {v} must be positive"))),
                };
                lo = lo.min(v);
                hi = hi.max(v);
            }
            Ok(ColumnScaling {
                scale: scales[j],
                min: lo,
                max: hi,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let configs = pending
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let coords = if opts.normalize {
                p.coords.iter().zip(&scaling).map(|(&v, s)| s.apply(v)).collect()
            } else {
                p.coords.clone()
            };
            Configuration::new(i, coords)
        })
        .collect();

    Ok(TabularBenchmark {
        configs,
        curves,
        names: order,
        scaling,
        source: None,
    })
}

/// Writes `oracle` over `points` at budgets `1..=horizon` in the long format
/// accepted by [`read_tabular`]. Ids are written as plain integers.
pub fn write_tabular<W: Write>(
    writer: W,
    points: &[Configuration],
    oracle: &dyn ValueOracle,
    horizon: usize,
    scales: Option<&[Scale]>,
) -> Result<()> {
    let d = oracle.dimension();
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(writer);
    let mut header = vec!["id".to_string()];
    header.extend((0..d).map(|j| format!("x{j}")));
    header.push("b".into());
    header.push("value".into());
    w.write_record(&header)?;
    if let Some(scales) = scales {
        let mut line = vec!["scale".to_string()];
        line.extend(scales.iter().map(|s| match s {
            Scale::Lin => "lin".to_string(),
            Scale::Log => "log".to_string(),
        }));
        w.write_record(&line)?;
    }
    for p in points {
        for b in 1..=horizon {
            let mut rec = Vec::with_capacity(d + 3);
            rec.push(p.id.to_string());
            rec.extend(p.coords.iter().map(f64::to_string));
            rec.push(b.to_string());
            rec.push(oracle.query(p, b).to_string());
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}
