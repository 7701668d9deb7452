//! Signal files.
//!
//! CSV: a `# tfq-signal v1, n=<N>, dt=<float>, t0=<float>` header followed by
//! `index,re,im` rows. Raw: little-endian f64 pairs `re, im` in a `.bin`,
//! `.raw` or `.f64` file, with metadata in a `<file>.json` sidecar holding
//! `{"n", "dt", "t0"}`. Floats are written in shortest round-trip form, so a
//! write/read cycle is bit-exact.

use num_complex::Complex64;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{Signal, Timebase};
use crate::error::{Result, TfqError};

const MAGIC: &str = "# tfq-signal v1";

fn is_raw(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("bin") | Some("raw") | Some("f64")
    )
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn write_signal(s: &Signal, path: &Path) -> Result<()> {
    if is_raw(path) {
        let mut bytes = Vec::with_capacity(16 * s.len());
        for v in s.samples() {
            bytes.extend_from_slice(&v.re.to_le_bytes());
            bytes.extend_from_slice(&v.im.to_le_bytes());
        }
        fs::write(path, bytes)?;
        let meta = serde_json::to_string(&s.timebase()).expect("timebase serialises");
        fs::write(sidecar_path(path), meta + "\n")?;
        return Ok(());
    }
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{MAGIC}, n={}, dt={:?}, t0={:?}", s.len(), s.dt(), s.t0())?;
    for (i, v) in s.samples().iter().enumerate() {
        writeln!(w, "{i},{:?},{:?}", v.re, v.im)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_signal(path: &Path) -> Result<Signal> {
    if is_raw(path) {
        read_raw(path)
    } else {
        read_csv(path)
    }
}

fn check_meta(tb: &Timebase) -> Result<()> {
    if !(tb.dt.is_finite() && tb.dt > 0.0) {
        return Err(TfqError::Format(format!("dt must be positive, got {}", tb.dt)));
    }
    if tb.n < 2 {
        return Err(TfqError::Format(format!("signal length must be at least 2, got {}", tb.n)));
    }
    if !tb.t0.is_finite() {
        return Err(TfqError::Format("t0 must be finite".into()));
    }
    Ok(())
}

fn read_raw(path: &Path) -> Result<Signal> {
    let side = sidecar_path(path);
    let meta = fs::read_to_string(&side)
        .map_err(|e| TfqError::Format(format!("missing metadata sidecar {}: {e}", side.display())))?;
    let tb: Timebase = serde_json::from_str(&meta)
        .map_err(|e| TfqError::Format(format!("bad metadata in {}: {e}", side.display())))?;
    check_meta(&tb)?;
    let bytes = fs::read(path)?;
    if bytes.len() != 16 * tb.n {
        return Err(TfqError::Format(format!(
            "raw file holds {} bytes, n = {} needs {}",
            bytes.len(),
            tb.n,
            16 * tb.n
        )));
    }
    let samples = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    Signal::new(samples, tb.dt, tb.t0)
}

fn parse_header(line: &str) -> Result<Timebase> {
    let rest = line
        .strip_prefix(MAGIC)
        .ok_or_else(|| TfqError::Format(format!("expected header starting with '{MAGIC}'")))?;
    let (mut n, mut dt, mut t0) = (None, None, None);
    for field in rest.split(',').map(str::trim).filter(|f| !f.is_empty()) {
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| TfqError::Parse { line: 1, msg: format!("bad header field '{field}'") })?;
        let bad = |_| TfqError::Parse { line: 1, msg: format!("bad value in header field '{field}'") };
        match k.trim() {
            "n" => n = Some(v.trim().parse::<usize>().map_err(|_| bad(()))?),
            "dt" => dt = Some(v.trim().parse::<f64>().map_err(|_| bad(()))?),
            "t0" => t0 = Some(v.trim().parse::<f64>().map_err(|_| bad(()))?),
            _ => {}
        }
    }
    let missing = |k: &str| TfqError::Format(format!("header is missing '{k}'"));
    let tb = Timebase {
        n: n.ok_or_else(|| missing("n"))?,
        dt: dt.ok_or_else(|| missing("dt"))?,
        t0: t0.ok_or_else(|| missing("t0"))?,
    };
    check_meta(&tb)?;
    Ok(tb)
}

fn read_csv(path: &Path) -> Result<Signal> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut lines = reader.lines();
    let header = lines
        .next()
        .transpose()?
        .ok_or_else(|| TfqError::Format("empty signal file".into()))?;
    let tb = parse_header(header.trim_end())?;
    let mut samples = Vec::with_capacity(tb.n);
    for (k, line) in lines.enumerate() {
        let lineno = k + 2;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 3 {
            return Err(TfqError::Parse {
                line: lineno,
                msg: format!("expected 3 columns (index,re,im), found {}", cols.len()),
            });
        }
        let perr = |what: &str| TfqError::Parse { line: lineno, msg: format!("invalid {what}") };
        let idx: usize = cols[0].parse().map_err(|_| perr("index"))?;
        if idx != samples.len() {
            return Err(TfqError::Parse {
                line: lineno,
                msg: format!("expected index {}, found {idx}", samples.len()),
            });
        }
        let re: f64 = cols[1].parse().map_err(|_| perr("real part"))?;
        let im: f64 = cols[2].parse().map_err(|_| perr("imaginary part"))?;
        samples.push(Complex64::new(re, im));
    }
    if samples.len() != tb.n {
        return Err(TfqError::Format(format!(
            "header declares n = {} but the file has {} rows",
            tb.n,
            samples.len()
        )));
    }
    Signal::new(samples, tb.dt, tb.t0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::{synth_noise, Timebase};

    fn noisy() -> Signal {
        let tb = Timebase::new(100, 0.1, -3.3).unwrap();
        synth_noise(&tb, 1.7, 9).unwrap()
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        let s = noisy();
        write_signal(&s, &p).unwrap();
        assert_eq!(read_signal(&p).unwrap(), s);
    }

    #[test]
    fn raw_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.bin");
        let s = noisy();
        write_signal(&s, &p).unwrap();
        assert!(sidecar_path(&p).exists());
        assert_eq!(read_signal(&p).unwrap(), s);
        fs::remove_file(sidecar_path(&p)).unwrap();
        assert!(matches!(read_signal(&p), Err(TfqError::Format(_))));
    }

    #[test]
    fn malformed_rows_name_their_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        fs::write(&p, "# tfq-signal v1, n=3, dt=0.5, t0=0\n0,1,0\n1,2\n2,0,0\n").unwrap();
        match read_signal(&p) {
            Err(TfqError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_is_validated() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("h.csv");
        fs::write(&p, "# tfq-signal v1, n=2, dt=0, t0=0\n0,1,0\n1,1,0\n").unwrap();
        assert!(matches!(read_signal(&p), Err(TfqError::Format(_))));
        fs::write(&p, "# tfq-signal v1, n=2, t0=0\n0,1,0\n1,1,0\n").unwrap();
        assert!(matches!(read_signal(&p), Err(TfqError::Format(_))));
        fs::write(&p, "# tfq-signal v1, n=3, dt=1, t0=0\n0,1,0\n1,1,0\n").unwrap();
        assert!(matches!(read_signal(&p), Err(TfqError::Format(_))));
    }
}
