//! Parsers for list and range arguments.

use crate::Failure;

pub fn usize_list(s: &str) -> Result<Vec<usize>, Failure> {
    let v: Result<Vec<usize>, _> = s.split(',').map(|t| t.trim().parse::<usize>()).collect();
    match v {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(Failure::usage(format!("malformed integer list '{s}'"))),
    }
}

/// `a,b,c` or inclusive `start:stop:step`.
pub fn f64_range(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::usage(format!("malformed range '{s}'"));
    if s.contains(':') {
        let parts: Vec<f64> =
            s.split(':').map(|t| t.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        let [start, stop, step] = parts[..] else { return Err(bad()) };
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| start + step * i as f64).map(|x| (x * 1e12).round() / 1e12).collect())
    } else {
        s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| bad())).collect()
    }
}

/// `toric:W,H`.
pub fn toric(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::usage(format!("outer code must look like toric:W,H, got '{s}'"));
    let rest = s.strip_prefix("toric:").ok_or_else(bad)?;
    match usize_list(rest).map_err(|_| bad())?[..] {
        [w, h] => Ok((w, h)),
        _ => Err(bad()),
    }
}

/// `p[,p_erase[,seed]]`.
pub fn sample(s: &str) -> Result<(f64, f64, Option<u64>), Failure> {
    let bad = || Failure::usage(format!("--sample expects p[,p_erase[,seed]], got '{s}'"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.is_empty() || parts.len() > 3 {
        return Err(bad());
    }
    let p = parts[0].parse().map_err(|_| bad())?;
    let pe = parts.get(1).map(|t| t.parse()).transpose().map_err(|_| bad())?.unwrap_or(0.0);
    let seed = parts.get(2).map(|t| t.parse()).transpose().map_err(|_| bad())?;
    Ok((p, pe, seed))
}
