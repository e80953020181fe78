use std::fmt;
use std::io::Write;
use std::path::Path;

use super::CliError;

/// Shortest representation that parses back to the same `f64`, with `.` as
/// the decimal separator and an exponent only for very large or small
/// magnitudes.
pub fn format_number(x: f64) -> String {
    format!("{x:?}")
}

/// Ordered `key=value` pairs rendered on one line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary(Vec<(String, String)>);

impl Summary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn text(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.0.push((key.to_string(), value.to_string()));
        self
    }

    pub fn num(self, key: &str, value: f64) -> Self {
        self.text(key, format_number(value))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Inverse of the [`Summary`] rendering.
pub fn parse_summary(line: &str) -> Vec<(String, String)> {
    line.split_whitespace()
        .filter_map(|kv| kv.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// Comma-separated table with LF line endings.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        Self { buf }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.buf.push_str(&cells.join(","));
        self.buf.push('\n');
    }

    /// Writes to `out` if given, else to `stdout`. Returns whether the data
    /// went to `stdout`.
    pub fn emit(&self, out: Option<&Path>, stdout: &mut dyn Write) -> Result<bool, CliError> {
        match out {
            Some(path) => {
                std::fs::write(path, &self.buf)?;
                Ok(false)
            }
            None => {
                stdout.write_all(self.buf.as_bytes())?;
                Ok(true)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn summary_renders_on_one_line() {
        let s = Summary::new()
            .num("tau", 1.0)
            .text("branch", "tanh")
            .num("eps", 1e-16);
        assert_eq!(s.to_string(), "tau=1.0 branch=tanh eps=1e-16");
        assert_eq!(s.get("branch"), Some("tanh"));
        assert_eq!(parse_summary(&s.to_string())[2], ("eps".into(), "1e-16".into()));
    }

    #[test]
    fn csv_layout() {
        let mut csv = Csv::new(&["t", "X_C"]);
        csv.row(&[format_number(0.5), format_number(1.0 / 3.0)]);
        let mut sink = Vec::new();
        assert!(csv.emit(None, &mut sink).unwrap());
        assert_eq!(
            String::from_utf8(sink).unwrap(),
            "t,X_C\n0.5,0.3333333333333333\n"
        );
    }

    proptest! {
        #[test]
        fn numbers_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let text = format_number(x);
            prop_assert!(!text.contains(' ') && !text.contains(','));
            prop_assert_eq!(text.parse::<f64>().unwrap(), x);
        }
    }
}
