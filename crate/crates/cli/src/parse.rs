//! Complex numbers written as `a+bi`, with rational parts allowed:
//! `-3/4+5i/4`, `2i`, `1/5+i/4`, `-1+4i`, `0.25-1e-3i`.

use num_complex::Complex64;

fn number(s: &str) -> Result<f64, String> {
    let s = if s.starts_with('/') { format!("1{s}") } else { s.to_string() };
    if s.is_empty() {
        return Ok(1.0);
    }
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = if p.is_empty() { 1.0 } else { p.parse().map_err(|_| format!("bad numerator {p:?}"))? };
            let q: f64 = q.parse().map_err(|_| format!("bad denominator {q:?}"))?;
            if q == 0.0 {
                return Err("zero denominator".into());
            }
            Ok(p / q)
        }
        None => s.parse().map_err(|_| format!("bad number {s:?}")),
    }
}

/// Split at top-level signs, keeping exponent signs such as `1e-3`.
fn terms(s: &str) -> Vec<&str> {
    let b = s.as_bytes();
    let mut cuts = vec![0];
    for i in 1..b.len() {
        if (b[i] == b'+' || b[i] == b'-') && !matches!(b[i - 1], b'e' | b'E') {
            cuts.push(i);
        }
    }
    cuts.push(b.len());
    cuts.windows(2).map(|w| &s[w[0]..w[1]]).collect()
}

pub fn parse_complex(input: &str) -> Result<Complex64, String> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.replace('−', "-");
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    let mut z = Complex64::new(0.0, 0.0);
    for term in terms(&s) {
        let (sign, body) = match term.as_bytes()[0] {
            b'-' => (-1.0, &term[1..]),
            b'+' => (1.0, &term[1..]),
            _ => (1.0, term),
        };
        if body.is_empty() {
            return Err(format!("dangling sign in {input:?}"));
        }
        if body.matches('i').count() > 1 {
            return Err(format!("bad term {term:?}"));
        }
        if body.contains('i') {
            z.im += sign * number(&body.replacen('i', "", 1)).map_err(|e| format!("{e} in {input:?}"))?;
        } else {
            z.re += sign * number(body).map_err(|e| format!("{e} in {input:?}"))?;
        }
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(format!("non-finite value {input:?}"));
    }
    Ok(z)
}
