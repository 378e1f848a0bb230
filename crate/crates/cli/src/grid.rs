//! Numeric grids on the command line: `a:b:step`, comma lists, or a mix
//! such as `10,20:30:5`.

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let fields: Vec<&str> = part.split(':').collect();
        match fields.as_slice() {
            [v] => out.push(number(v)?),
            [a, b, step] => {
                let (a, b, step) = (number(a)?, number(b)?, number(step)?);
                if !(step > 0.0) {
                    return Err(format!("step must be positive in `{part}`"));
                }
                if b < a {
                    return Err(format!("empty range `{part}`"));
                }
                let n = ((b - a) / step * (1.0 + 1e-12)).floor() as usize;
                out.extend((0..=n).map(|i| a + i as f64 * step));
            }
            _ => return Err(format!("`{part}` is neither a number nor a:b:step")),
        }
    }
    if out.is_empty() {
        return Err("empty grid".into());
    }
    Ok(out)
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v)
}

/// `a:b:step` with `a <= b` and `step > 0`, kept symbolic so the sampler
/// can rebuild the grid itself.
pub fn parse_range(spec: &str) -> Result<(f64, f64, f64), String> {
    match spec.split(':').collect::<Vec<_>>().as_slice() {
        [a, b, step] => {
            let (a, b, step) = (number(a)?, number(b)?, number(step)?);
            if !(step > 0.0) || b < a {
                return Err(format!("`{spec}` needs a <= b and a positive step"));
            }
            Ok((a, b, step))
        }
        _ => Err(format!("`{spec}` is not of the form a:b:step")),
    }
}

/// Comma list of integer orders in `[2, 8]`.
pub fn parse_orders(spec: &str) -> Result<Vec<u32>, String> {
    let ks = spec
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| format!("`{p}` is not an integer")))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(k) = ks.iter().find(|k| !(2..=8).contains(*k)) {
        return Err(format!("k = {k} is outside [2, 8]"));
    }
    if ks.is_empty() {
        return Err("no k given".into());
    }
    Ok(ks)
}
