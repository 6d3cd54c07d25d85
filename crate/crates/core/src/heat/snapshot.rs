use std::io::{BufRead, Write};

use super::{HeatError, SpatialGrid};
use crate::scalar::Real;

/// Writes `N L M t` on the first line, then the values row-major, one row per line.
pub fn write_snapshot<T: Real, W: Write>(mut w: W, grid: &SpatialGrid<T>, t: T) -> Result<(), HeatError> {
    writeln!(w, "{} {} {} {}", grid.dim, grid.half_width, grid.points, t)?;
    for chunk in grid.values.chunks(grid.points) {
        let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Inverse of [`write_snapshot`]; returns the grid and its time stamp.
pub fn read_snapshot<T: Real + std::str::FromStr, R: BufRead>(
    r: R,
) -> Result<(SpatialGrid<T>, T), HeatError> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| HeatError::Snapshot("empty".into()))??;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 {
        return Err(HeatError::Snapshot("header needs N L M t".into()));
    }
    let bad = |s: &str| HeatError::Snapshot(format!("unparsable field {s:?}"));
    let dim: usize = parts[0].parse().map_err(|_| bad(parts[0]))?;
    let half_width: T = parts[1].parse().map_err(|_| bad(parts[1]))?;
    let points: usize = parts[2].parse().map_err(|_| bad(parts[2]))?;
    let t: T = parts[3].parse().map_err(|_| bad(parts[3]))?;
    let mut grid = SpatialGrid::zeros(dim, half_width, points)?;
    let mut values = Vec::with_capacity(grid.len());
    for line in lines {
        for tok in line?.split_whitespace() {
            values.push(tok.parse().map_err(|_| bad(tok))?);
        }
    }
    if values.len() != grid.len() {
        return Err(HeatError::Snapshot(format!("expected {} values, found {}", grid.len(), values.len())));
    }
    grid.values = values;
    Ok((grid, t))
}

