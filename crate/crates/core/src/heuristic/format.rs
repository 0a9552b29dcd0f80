//! Number formatting and sentence assembly helpers.

/// Formats `x` with four significant figures, trimming trailing zeros.
///
/// Magnitudes of at least 1e7 or below 1e-4 use exponent notation
/// (`1.235e+07`); everything else is written out in full, so integers such
/// as `1234567` become `1235000`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.3e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let sign = if x < 0.0 { "-" } else { "" };

    if !(-4..7).contains(&exp) {
        let m = trim_fraction(mantissa);
        let esign = if exp < 0 { '-' } else { '+' };
        return format!("{sign}{m}e{esign}{:02}", exp.abs());
    }

    let point = exp + 1; // digits before the decimal point
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{digits}{}", "0".repeat(point as usize - digits.len()))
    } else {
        let (int, frac) = digits.split_at(point as usize);
        format!("{int}.{frac}")
    };
    format!("{sign}{}", trim_fraction(&body))
}

fn trim_fraction(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Formats a value that should always show a decimal point, as in `y=0.0`.
pub fn format_decimal(x: f64) -> String {
    let s = format_number(x);
    if s.contains(['.', 'e', 'n']) {
        s
    } else {
        format!("{s}.0")
    }
}

/// Uppercases the first character and every character that directly
/// follows ". ".
pub fn sentence_case(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut capitalize = true;
    let mut prev_period = false;
    for c in text.chars() {
        if capitalize {
            out.extend(c.to_uppercase());
        } else {
            out.push(c);
        }
        capitalize = prev_period && c == ' ';
        prev_period = c == '.';
    }
    out
}

/// Lowercases only the first character.
pub fn lower_first(text: &str) -> String {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Joins items as "a", "a and b" or "a, b, and c".
pub fn join_list<S: AsRef<str>>(items: &[S]) -> String {
    match items {
        [] => String::new(),
        [one] => one.as_ref().to_string(),
        [a, b] => format!("{} and {}", a.as_ref(), b.as_ref()),
        _ => {
            let head: Vec<&str> = items[..items.len() - 1].iter().map(AsRef::as_ref).collect();
            format!("{}, and {}", head.join(", "), items[items.len() - 1].as_ref())
        }
    }
}

/// Joins non-empty parts with single spaces.
pub fn join_sentences<S: AsRef<str>>(parts: &[S]) -> String {
    parts
        .iter()
        .map(AsRef::as_ref)
        .filter(|p| !p.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}
