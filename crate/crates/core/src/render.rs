//! Deterministic text rendering of membership degrees.

/// Largest denominator tried when recognising a rational value.
pub const MAX_DENOMINATOR: u64 = 10_000;

const RATIONAL_TOL: f64 = 1e-12;

/// Best rational approximation `p/q` with `q ≤ max_den`, by continued
/// fractions.
pub fn rational(v: f64, max_den: u64) -> Option<(i64, u64)> {
    if !v.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1u64, 1i64, 0u64);
    let mut x = v;
    for _ in 0..64 {
        let a = x.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i64;
        let q2 = (ai.unsigned_abs()).checked_mul(q1).and_then(|t| t.checked_add(q0))?;
        if q2 > max_den {
            break;
        }
        let p2 = ai.checked_mul(p1).and_then(|t| t.checked_add(p0))?;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        if (p1 as f64 / q1 as f64 - v).abs() <= RATIONAL_TOL {
            return Some((p1, q1));
        }
        let frac = x - a;
        if frac.abs() < 1e-300 {
            break;
        }
        x = 1.0 / frac;
    }
    None
}

fn terminating(q: u64) -> bool {
    let mut q = q;
    while q.is_multiple_of(2) {
        q /= 2;
    }
    while q.is_multiple_of(5) {
        q /= 5;
    }
    q == 1
}

/// A short decimal when the value is a terminating decimal, `p/q` when it
/// is another rational with `q ≤ 10000`, else 12 significant digits.
pub fn render(v: f64) -> String {
    match rational(v, MAX_DENOMINATOR) {
        Some((p, 1)) => p.to_string(),
        Some((p, q)) if terminating(q) => {
            let s = format!("{:.12}", p as f64 / q as f64);
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        }
        Some((p, q)) => format!("{p}/{q}"),
        None => significant(v, 12),
    }
}

fn significant(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let s = format!("{:.*e}", digits - 1, v);
    let parsed: f64 = s.parse().expect("formatted float parses");
    let mag = parsed.abs().log10().floor() as i32;
    if (-4..12).contains(&mag) {
        let decimals = (digits as i32 - 1 - mag).max(0) as usize;
        let s = format!("{parsed:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        s
    }
}

/// Parses a decimal number or a fraction `p/q`.
pub fn parse_value(s: &str) -> Option<f64> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q): (f64, f64) = (p.trim().parse().ok()?, q.trim().parse().ok()?);
            (q != 0.0).then(|| p / q)
        }
        None => s.parse().ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders() {
        assert_eq!(render(10.0 / 63.0), "10/63");
        assert_eq!(render(0.36), "0.36");
        assert_eq!(render(1.0), "1");
        assert_eq!(render(0.0), "0");
        assert_eq!(render(7.0 / 18.0), "7/18");
        assert_eq!(render(0.5 * 0.4 * 0.3), "0.06");
        assert_eq!(render(std::f64::consts::PI / 4.0), "0.785398163397");
        assert_eq!(render(1.0 / 10007.0), "9.99300489657e-5");
    }

    #[test]
    fn parses() {
        assert_eq!(parse_value("5/9"), Some(5.0 / 9.0));
        assert_eq!(parse_value(" 0.25 "), Some(0.25));
        assert_eq!(parse_value("1/0"), None);
        assert_eq!(parse_value("x"), None);
    }
}
