//! Flat binary storage for [`AverageGrid4`].
//!
//! Layout (little endian): the 8-byte magic `RAVGGRD1`, four `u64` axis sizes,
//! four `f64` origins, four `f64` spacings, the `f64` horizon, then the values
//! in row-major `(t, x₁, x₂, x₃)` order. Quadrature metadata goes to a
//! `key = value` text sidecar at `<path>.meta`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::kinetic::average::{AverageGrid4, GridMeta};
use crate::{Error, Result};

const MAGIC: &[u8; 8] = b"RAVGGRD1";
const HEADER_LEN: usize = 8 + 4 * 8 + 4 * 8 + 4 * 8 + 8;

pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

pub fn encode_grid(grid: &AverageGrid4) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * grid.values.len());
    out.extend_from_slice(MAGIC);
    for d in grid.dims {
        out.extend_from_slice(&(d as u64).to_le_bytes());
    }
    for v in grid.origin.iter().chain(&grid.spacing).chain(std::iter::once(&grid.horizon)) {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in &grid.values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn format_err(path: &Path, reason: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

pub fn decode_grid(bytes: &[u8], path: &Path) -> Result<AverageGrid4> {
    if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
        return Err(format_err(path, "missing RAVGGRD1 header"));
    }
    let word = |i: usize| -> [u8; 8] { bytes[8 + 8 * i..16 + 8 * i].try_into().expect("8-byte slice") };
    let mut dims = [0usize; 4];
    for (k, d) in dims.iter_mut().enumerate() {
        *d = usize::try_from(u64::from_le_bytes(word(k))).map_err(|_| format_err(path, "axis size overflow"))?;
    }
    let f = |i: usize| f64::from_le_bytes(word(i));
    let origin = [f(4), f(5), f(6), f(7)];
    let spacing = [f(8), f(9), f(10), f(11)];
    let horizon = f(12);
    let n = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| format_err(path, "axis sizes overflow"))?;
    let body = &bytes[HEADER_LEN..];
    if body.len() != 8 * n {
        return Err(format_err(
            path,
            format!("expected {} value bytes for dims {dims:?}, found {}", 8 * n, body.len()),
        ));
    }
    let mut grid = AverageGrid4::zeros(dims, origin, spacing, horizon).map_err(|e| format_err(path, e.to_string()))?;
    for (v, chunk) in grid.values.iter_mut().zip(body.chunks_exact(8)) {
        *v = f64::from_le_bytes(chunk.try_into().expect("8-byte chunk"));
    }
    Ok(grid)
}

fn encode_meta(meta: &GridMeta) -> String {
    let json = |v: &crate::numerics::QuadratureRule| serde_json::to_string(v).expect("rule serializes");
    format!(
        "damped = {}\nball_rule = {}\ntime_rule = {}\nsource = {}\n",
        meta.damped,
        json(&meta.ball_rule),
        json(&meta.time_rule),
        meta.source
    )
}

fn decode_meta(text: &str, path: &Path) -> Result<GridMeta> {
    let mut meta = GridMeta::default();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (key, value) = line
            .split_once(" = ")
            .ok_or_else(|| format_err(path, format!("bad metadata line `{line}`")))?;
        let bad = |e: serde_json::Error| format_err(path, format!("{key}: {e}"));
        match key {
            "damped" => meta.damped = value == "true",
            "ball_rule" => meta.ball_rule = serde_json::from_str(value).map_err(bad)?,
            "time_rule" => meta.time_rule = serde_json::from_str(value).map_err(bad)?,
            "source" => meta.source = value.to_string(),
            _ => {}
        }
    }
    Ok(meta)
}

/// Writes the binary grid and its `.meta` sidecar.
pub fn write_grid(grid: &AverageGrid4, path: &Path) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
    file.write_all(&encode_grid(grid))
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    let mp = meta_path(path);
    fs::write(&mp, encode_meta(&grid.meta)).map_err(|e| Error::io(format!("writing {}", mp.display()), e))
}

/// Reads a grid written by [`write_grid`]; a missing sidecar leaves default metadata.
pub fn read_grid(path: &Path) -> Result<AverageGrid4> {
    let bytes = fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let mut grid = decode_grid(&bytes, path)?;
    let mp = meta_path(path);
    if mp.exists() {
        let text = fs::read_to_string(&mp).map_err(|e| Error::io(format!("reading {}", mp.display()), e))?;
        grid.meta = decode_meta(&text, &mp)?;
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::QuadratureRule;

    #[test]
    fn round_trip_through_disk() {
        let mut g = AverageGrid4::from_fn([3, 4, 2, 5], [0.0, -1.0, -2.0, -3.0], [0.5, 0.25, 1.0, 0.1], 1.0, |t, x| {
            t + x[0] * 10.0 - x[2]
        })
        .unwrap();
        g.meta.damped = true;
        g.meta.ball_rule = QuadratureRule::SphericalProduct {
            radial: 4,
            polar: 4,
            azimuthal: 8,
            radius: 1.0,
        };
        g.meta.source = "bump".into();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u.grid");
        write_grid(&g, &path).unwrap();
        assert_eq!(read_grid(&path).unwrap(), g);
    }

    #[test]
    fn rejects_truncated_files() {
        let g = AverageGrid4::zeros([2, 2, 2, 2], [0.0; 4], [1.0; 4], 1.0).unwrap();
        let bytes = encode_grid(&g);
        let p = Path::new("x");
        assert!(decode_grid(&bytes[..bytes.len() - 1], p).is_err());
        assert!(decode_grid(b"RAVGGRD0", p).is_err());
    }
}
