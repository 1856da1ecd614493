//! `.rsf` field-grid files.
//!
//! One UTF-8 JSON header line terminated by `\n`, then the payload: raw
//! little-endian `f64` values interleaved as
//! `Re Fx, Im Fx, Re Fy, Im Fy, Re Fz, Im Fz` per node, x-index fastest.
//!
//! ```text
//! {"format":"rsf","version":1,"space":"position","counts":[64,64,64],
//!  "spacings":[0.25,0.25,0.25],"origins":[-7.875,-7.875,-7.875],
//!  "layout":"interleaved-complex-vec3","order":"x-fastest",
//!  "byte_order":"little-endian","value_type":"f64"}
//! ```

use super::grid::{Axis, FieldGrid, Grid, Space};
use crate::{Complex64, Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

const MAGIC: &str = "rsf";
const VERSION: u32 = 1;
const LAYOUT: &str = "interleaved-complex-vec3";
const ORDER: &str = "x-fastest";
const BYTE_ORDER: &str = "little-endian";
const VALUE_TYPE: &str = "f64";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub version: u32,
    pub space: Space,
    pub counts: [usize; 3],
    pub spacings: [f64; 3],
    pub origins: [f64; 3],
    pub layout: String,
    pub order: String,
    pub byte_order: String,
    pub value_type: String,
}

impl Header {
    fn of(field: &FieldGrid) -> Self {
        let ax = field.grid.axes;
        Self {
            format: MAGIC.into(),
            version: VERSION,
            space: field.space,
            counts: ax.map(|a| a.n),
            spacings: ax.map(|a| a.spacing),
            origins: ax.map(|a| a.origin),
            layout: LAYOUT.into(),
            order: ORDER.into(),
            byte_order: BYTE_ORDER.into(),
            value_type: VALUE_TYPE.into(),
        }
    }

    fn validate(&self) -> Result<Grid> {
        let expect = |what: &str, got: &str, want: &str| {
            if got == want {
                Ok(())
            } else {
                Err(Error::Format(format!("{what} is {got:?}, expected {want:?}")))
            }
        };
        expect("format", &self.format, MAGIC)?;
        if self.version != VERSION {
            return Err(Error::Format(format!("unsupported version {}", self.version)));
        }
        expect("layout", &self.layout, LAYOUT)?;
        expect("order", &self.order, ORDER)?;
        expect("byte_order", &self.byte_order, BYTE_ORDER)?;
        expect("value_type", &self.value_type, VALUE_TYPE)?;
        let axes =
            std::array::from_fn(|a| Axis { n: self.counts[a], spacing: self.spacings[a], origin: self.origins[a] });
        Grid::new(axes).map_err(|e| Error::Format(e.to_string()))
    }
}

pub fn write_rsf_to(field: &FieldGrid, mut out: impl Write) -> Result<()> {
    let header = serde_json::to_string(&Header::of(field)).map_err(|e| Error::Format(e.to_string()))?;
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    let mut buf = Vec::with_capacity(field.values().len() * 48);
    for v in field.values() {
        for c in v {
            buf.extend_from_slice(&c.re.to_le_bytes());
            buf.extend_from_slice(&c.im.to_le_bytes());
        }
    }
    out.write_all(&buf)?;
    out.flush()?;
    Ok(())
}

pub fn read_rsf_from(input: impl Read) -> Result<FieldGrid> {
    let mut reader = BufReader::new(input);
    let mut line = Vec::new();
    reader.read_until(b'\n', &mut line)?;
    if line.last() != Some(&b'\n') {
        return Err(Error::Format("missing header line".into()));
    }
    line.pop();
    let text = std::str::from_utf8(&line).map_err(|e| Error::Format(format!("header is not UTF-8: {e}")))?;
    let header: Header = serde_json::from_str(text).map_err(|e| Error::Format(format!("bad header: {e}")))?;
    let grid = header.validate()?;
    let expected = grid.len() * 48;
    let mut payload = Vec::with_capacity(expected);
    reader.read_to_end(&mut payload)?;
    if payload.len() != expected {
        return Err(Error::Format(format!("payload has {} bytes, header implies {expected}", payload.len())));
    }
    let f = |b: &[u8]| f64::from_le_bytes(b.try_into().expect("8-byte chunk"));
    let values = payload
        .chunks_exact(48)
        .map(|node| {
            std::array::from_fn(|c| Complex64::new(f(&node[16 * c..16 * c + 8]), f(&node[16 * c + 8..16 * c + 16])))
        })
        .collect();
    FieldGrid::new(header.space, grid, values)
}

pub fn write_rsf(field: &FieldGrid, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_rsf_to(field, std::io::BufWriter::new(file))
}

pub fn read_rsf(path: impl AsRef<Path>) -> Result<FieldGrid> {
    read_rsf_from(std::fs::File::open(path)?)
}
