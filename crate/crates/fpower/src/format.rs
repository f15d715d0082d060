//! CSV output: comma separated, header first, `\n` line endings, numbers
//! rounded to 10 significant digits.

use std::fmt::Write;

/// Rounds to 10 significant digits and prints the shortest form of the
/// rounded value, switching to scientific notation outside `[1e-5, 1e15)`.
pub fn sig10(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.9e}").parse().expect("formatted float parses");
    let magnitude = rounded.abs();
    if (1e-5..1e15).contains(&magnitude) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// A CSV table with a fixed header.
#[derive(Debug, Clone)]
pub struct Csv {
    out: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut out = header.join(",");
        out.push('\n');
        Csv {
            out,
            columns: header.len(),
        }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut count = 0;
        for (i, f) in fields.into_iter().enumerate() {
            if i > 0 {
                self.out.push(',');
            }
            self.out.push_str(f.as_ref());
            count += 1;
        }
        debug_assert_eq!(count, self.columns, "row width differs from header");
        self.out.push('\n');
    }

    pub fn numeric_row(&mut self, values: &[f64]) {
        self.row(values.iter().map(|v| sig10(*v)));
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// Parses CSV text produced by [`Csv`] back into a header and numeric rows.
/// Non-numeric fields are returned as `NaN`.
pub fn parse_numeric(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .map(|h| h.split(',').map(str::to_owned).collect())
        .unwrap_or_default();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(',')
                .map(|f| f.parse().unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    (header, rows)
}

pub(crate) fn line(out: &mut String, value: f64) {
    writeln!(out, "{}", sig10(value)).expect("writing to a String cannot fail");
}
