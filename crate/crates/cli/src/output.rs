use std::fs;
use std::io::{self, Write};
use std::path::Path;

use ballmaps_core::Complex64;

use crate::error::CliError;

/// `x` rounded to `digits` significant digits, fixed-point for moderate
/// magnitudes and scientific otherwise.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let e = x.abs().log10().floor() as i32;
    if (-5..digits as i32).contains(&e) {
        let decimals = (digits as i32 - 1 - e).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.prec$e}", prec = digits - 1)
    }
}

/// Six significant digits, for human summaries.
pub fn short(x: f64) -> String {
    sig(x, 6)
}

pub fn short_complex(c: Complex64) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", short(c.re), short(c.im.abs()))
}

/// Full precision for CSV cells.
pub fn cell(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, content).map_err(|e| CliError::Output(format!("writing {}: {e}", p.display()))),
        None => io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| CliError::Output(format!("writing stdout: {e}"))),
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("reading {}: {e}", path.display())))
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.5493061443340548, 15), "0.549306144334055");
        assert_eq!(sig(1.0, 6), "1.00000");
        assert_eq!(sig(123456.789, 6), "123457");
        assert_eq!(sig(2.5e-9, 6), "2.50000e-9");
        assert_eq!(sig(-0.000123456789, 6), "-0.000123457");
        assert_eq!(sig(0.0, 6), "0");
    }

    #[test]
    fn complex_formatting() {
        assert_eq!(short_complex(Complex64::new(1.0, -0.5)), "1.00000-0.500000i");
    }
}
