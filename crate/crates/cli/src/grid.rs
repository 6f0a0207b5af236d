//! Grid specifications: `lo:hi:log[:factor]` or `lo:hi:lin[:step]`.
//! Endpoints accept scientific notation (`1e3:1e8:log`); the high endpoint
//! is always included.

use anyhow::{bail, Context, Result};

pub fn parse_grid(spec: &str) -> Result<Vec<u64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() < 3 || parts.len() > 4 {
        bail!("grid spec must be lo:hi:log|lin[:step], got {spec:?}");
    }
    let lo = parse_number(parts[0])?;
    let hi = parse_number(parts[1])?;
    if lo < 1 || hi < lo {
        bail!("grid needs 1 <= lo <= hi, got {lo}..{hi}");
    }
    let mut grid = Vec::new();
    match parts[2] {
        "log" => {
            let factor = match parts.get(3) {
                Some(f) => parse_number(f)?,
                None => 10,
            };
            if factor < 2 {
                bail!("log grid factor must be >= 2");
            }
            let mut x = lo;
            while x < hi {
                grid.push(x);
                x = match x.checked_mul(factor) {
                    Some(v) => v,
                    None => break,
                };
            }
            grid.push(hi);
        }
        "lin" => {
            let step = match parts.get(3) {
                Some(s) => parse_number(s)?,
                None => ((hi - lo) / 9).max(1),
            };
            if step < 1 {
                bail!("lin grid step must be >= 1");
            }
            let mut x = lo;
            while x < hi {
                grid.push(x);
                x = match x.checked_add(step) {
                    Some(v) => v,
                    None => break,
                };
            }
            grid.push(hi);
        }
        other => bail!("grid mode must be log or lin, got {other:?}"),
    }
    grid.dedup();
    Ok(grid)
}

fn parse_number(text: &str) -> Result<u64> {
    if let Ok(v) = text.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = text
        .parse()
        .with_context(|| format!("not a number: {text:?}"))?;
    if !f.is_finite() || f < 0.0 || f > u64::MAX as f64 {
        bail!("number out of range: {text:?}");
    }
    Ok(f.round() as u64)
}
