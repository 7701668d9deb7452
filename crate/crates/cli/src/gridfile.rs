//! Grid files: one JSON header line, then the values.
//!
//! The binary form stores little-endian `f64` pairs `(re, im)` in row-major
//! order after the header's newline. The `.csv` debug form prefixes the
//! header with `# ` and writes one `i,j,re,im` row per value.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use tfq_core::spectral::{Grid2D, GridKind};

use crate::error::{CliError, CliResult};

pub const FORMAT: &str = "tfq-grid";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridHeader {
    pub format: String,
    pub version: u32,
    pub kind: String,
    pub n1: usize,
    pub n2: usize,
    pub origin: [f64; 2],
    pub steps: [f64; 2],
    #[serde(default)]
    pub generator: Map<String, Value>,
}

impl GridHeader {
    pub fn describe(g: &Grid2D, generator: Map<String, Value>) -> Self {
        let [n1, n2] = g.shape();
        GridHeader {
            format: FORMAT.into(),
            version: VERSION,
            kind: g.kind().as_str().into(),
            n1,
            n2,
            origin: g.origin(),
            steps: g.step(),
            generator,
        }
    }

    fn validate(&self) -> CliResult<GridKind> {
        if self.format != FORMAT {
            return Err(CliError::input(format!("not a grid file (format {:?})", self.format)));
        }
        if self.version != VERSION {
            return Err(CliError::input(format!("unsupported grid file version {}", self.version)));
        }
        if self.n1 == 0 || self.n2 == 0 {
            return Err(CliError::input("empty grid"));
        }
        GridKind::parse(&self.kind).ok_or_else(|| CliError::input(format!("unknown grid kind {:?}", self.kind)))
    }
}

#[derive(Debug, Clone)]
pub struct GridFile {
    pub grid: Grid2D,
    pub generator: Map<String, Value>,
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn write_grid(path: &Path, g: &Grid2D, generator: Map<String, Value>) -> CliResult<()> {
    let header = serde_json::to_string(&GridHeader::describe(g, generator))?;
    let mut out = BufWriter::new(fs::File::create(path)?);
    if is_csv(path) {
        writeln!(out, "# {header}")?;
        let [_, n2] = g.shape();
        for (k, v) in g.data().iter().enumerate() {
            writeln!(out, "{},{},{:?},{:?}", k / n2, k % n2, v.re, v.im)?;
        }
    } else {
        writeln!(out, "{header}")?;
        for v in g.data() {
            out.write_all(&v.re.to_le_bytes())?;
            out.write_all(&v.im.to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn read_grid(path: &Path) -> CliResult<GridFile> {
    let file = fs::File::open(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let mut reader = BufReader::new(file);
    let mut line = String::new();
    reader.read_line(&mut line)?;
    let csv = is_csv(path);
    let text = if csv { line.trim_end().strip_prefix('#').map(str::trim) } else { Some(line.trim_end()) };
    let text = text.ok_or_else(|| CliError::input(format!("{}: missing '#' header line", path.display())))?;
    let header: GridHeader = serde_json::from_str(text)
        .map_err(|e| CliError::input(format!("{}: bad grid header: {e}", path.display())))?;
    let kind = header.validate()?;
    let count = header.n1 * header.n2;

    let data = if csv {
        let mut data = vec![Complex64::new(0.0, 0.0); count];
        let mut seen = vec![false; count];
        for (ln, row) in reader.lines().enumerate() {
            let row = row?;
            if row.trim().is_empty() {
                continue;
            }
            let bad = || CliError::input(format!("{}: line {}: expected i,j,re,im", path.display(), ln + 2));
            let parts: Vec<&str> = row.split(',').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(bad());
            }
            let i: usize = parts[0].parse().map_err(|_| bad())?;
            let j: usize = parts[1].parse().map_err(|_| bad())?;
            let re: f64 = parts[2].parse().map_err(|_| bad())?;
            let im: f64 = parts[3].parse().map_err(|_| bad())?;
            if i >= header.n1 || j >= header.n2 {
                return Err(bad());
            }
            data[i * header.n2 + j] = Complex64::new(re, im);
            seen[i * header.n2 + j] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(CliError::input(format!("{}: missing grid values", path.display())));
        }
        data
    } else {
        let mut bytes = Vec::new();
        reader.read_to_end(&mut bytes)?;
        if bytes.len() != 16 * count {
            return Err(CliError::input(format!(
                "{}: expected {} payload bytes for a {}x{} grid, found {}",
                path.display(),
                16 * count,
                header.n1,
                header.n2,
                bytes.len()
            )));
        }
        bytes
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
                Complex64::new(re, im)
            })
            .collect()
    };
    let grid = Grid2D::new([header.n1, header.n2], header.origin, header.steps, kind, data)?;
    Ok(GridFile { grid, generator: header.generator })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Grid2D {
        Grid2D::from_fn([5, 3], [-0.3, 1.0 / 3.0], [0.1, 0.7], GridKind::DelayDoppler, |x, w| {
            Complex64::new(x.sin() * 1e-7, w.exp() / 3.0)
        })
        .unwrap()
    }

    fn generator() -> Map<String, Value> {
        json!({"method": "wigner", "sigma": 0.1}).as_object().unwrap().clone()
    }

    #[test]
    fn binary_and_csv_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let g = sample();
        for name in ["g.grid", "g.csv"] {
            let p = dir.path().join(name);
            write_grid(&p, &g, generator()).unwrap();
            let back = read_grid(&p).unwrap();
            assert_eq!(back.grid, g, "{name}");
            assert_eq!(back.generator, generator());
        }
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.grid");
        write_grid(&p, &sample(), Map::new()).unwrap();
        let mut bytes = fs::read(&p).unwrap();
        bytes.truncate(bytes.len() - 3);
        fs::write(&p, bytes).unwrap();
        assert!(read_grid(&p).is_err());
    }

    #[test]
    fn empty_and_foreign_headers_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.grid");
        fs::write(&p, "{\"format\":\"tfq-grid\",\"version\":1,\"kind\":\"generic\",\"n1\":0,\"n2\":4,\"origin\":[0,0],\"steps\":[1,1]}\n").unwrap();
        assert!(read_grid(&p).unwrap_err().to_string().contains("empty grid"));
        fs::write(&p, "{\"format\":\"other\"}\n").unwrap();
        assert!(read_grid(&p).is_err());
    }
}
