//! Axis specifications for parameter grids.

/// Parses "2", "0.1,0.2,0.3", or "lo:hi:n" (n evenly spaced points,
/// endpoints included).
pub fn parse_axis(spec: &str) -> Result<Vec<f64>, String> {
    let bad = |what: &str| Err(format!("bad axis '{spec}': {what}"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return bad("ranges are lo:hi:n");
        }
        let lo: f64 = parts[0].parse().map_err(|_| format!("bad axis '{spec}': lo"))?;
        let hi: f64 = parts[1].parse().map_err(|_| format!("bad axis '{spec}': hi"))?;
        let n: usize = parts[2].parse().map_err(|_| format!("bad axis '{spec}': n"))?;
        if n == 0 {
            return bad("n must be at least 1");
        }
        if n == 1 {
            return Ok(vec![lo]);
        }
        let step = (hi - lo) / (n - 1) as f64;
        return Ok((0..n).map(|i| lo + step * i as f64).collect());
    }
    spec.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad axis '{spec}': '{s}' is not a number")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::parse_axis;

    #[test]
    fn scalar_list_and_range_forms() {
        assert_eq!(parse_axis("2").unwrap(), vec![2.0]);
        assert_eq!(parse_axis("0.1, 0.2").unwrap(), vec![0.1, 0.2]);
        assert_eq!(parse_axis("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_axis("5:9:1").unwrap(), vec![5.0]);
        assert!(parse_axis("0:1").is_err());
        assert!(parse_axis("a,b").is_err());
        assert!(parse_axis("0:1:0").is_err());
    }
}
