//! Value parsers for counts written like `1e7` and sweeps `start:end:step`.

pub fn count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(v >= 0.0) || v.fract() != 0.0 || v > u64::MAX as f64 {
        return Err(format!("`{s}` is not a non-negative integer"));
    }
    Ok(v as u64)
}

/// A parsed `start:end:step` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep(pub Vec<f64>);

/// Points `start + i·step` up to `end`, which is included when it lies
/// within half a step of the grid.
pub fn sweep(s: &str) -> Result<Sweep, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, end, step] = parts.as_slice() else {
        return Err(format!("`{s}` is not start:end:step"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
    let (start, end, step) = (num(start)?, num(end)?, num(step)?);
    if !(step > 0.0) || !(end >= start) || !start.is_finite() || !end.is_finite() {
        return Err(format!("`{s}` needs step > 0 and end ≥ start"));
    }
    let n = ((end - start) / step + 0.5).floor() as u64;
    if n > 10_000_000 {
        return Err(format!("`{s}` has too many points"));
    }
    Ok(Sweep((0..=n).map(|i| start + step * i as f64).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(count("1e7"), Ok(10_000_000));
        assert_eq!(count("123"), Ok(123));
        assert!(count("1.5").is_err());
        assert!(count("-3").is_err());
        assert!(count("x").is_err());
    }

    #[test]
    fn sweeps() {
        assert_eq!(sweep("0:1:0.25").unwrap().0, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let s = sweep("0.5:2.0:0.001").unwrap().0;
        assert_eq!(s.len(), 1501);
        assert!((s[1500] - 2.0).abs() < 1e-9);
        assert_eq!(sweep("0:1:0.3").unwrap().0.len(), 4);
        assert!(sweep("1:0:0.1").is_err());
        assert!(sweep("0:1").is_err());
        assert!(sweep("0:1:0").is_err());
    }
}
