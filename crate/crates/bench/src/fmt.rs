//! Number formatting shared by the CLI and the CSV writer.

/// `%.12g`: twelve significant digits, trailing zeros dropped, exponent form
/// outside `1e-4 <= |x| < 1e12`.
pub fn g12(x: f64) -> String {
    g(x, 12)
}

/// `%.10g`, for values coming out of the interior-point solver, whose
/// tolerance is 1e-10; more digits would only print solver noise.
pub fn g10(x: f64) -> String {
    g(x, 10)
}

/// `%.{digits}g` for `1 <= digits <= 17`.
pub fn g(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(format!("{:.*}", decimals, x))
    } else {
        let m = trim(mantissa.to_string());
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn opt_g12(x: Option<f64>) -> String {
    x.map(g12).unwrap_or_default()
}
