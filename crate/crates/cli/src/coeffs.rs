use ratlin::C64;

/// Parses one `re`, `re+imi`, `re-imi` or `imi` entry.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let s = s.trim();
    let bad = || format!("invalid complex number {s:?}");
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // The split is the last sign that is neither leading nor an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => t.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(C64::new(re, im))
}

/// Comma-separated ascending coefficients.
pub fn parse_list(s: &str) -> Result<Vec<C64>, String> {
    if s.trim().is_empty() {
        return Err("empty coefficient list".into());
    }
    s.split(',').map(parse_complex).collect()
}
