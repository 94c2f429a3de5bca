//! Number formatting and table rendering.

use compind_core::panel::significance_stars;

/// Fixed decimals; negative zero prints without a sign.
pub fn fixed(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Eight significant characters: as many decimals as fit next to the
/// integer part (`0.180280`, `16.30000`, `65422.84`, `149930.1`).
pub fn width8(x: f64) -> String {
    let int_digits = {
        let a = x.abs();
        if a < 1.0 {
            1
        } else {
            a.log10().floor() as usize + 1
        }
    };
    let decimals = 7usize.saturating_sub(int_digits).max(1);
    let s = fixed(x, decimals);
    // rounding may carry into a new integer digit (9.9999999 -> 10.000000)
    if s.trim_start_matches('-').len() > 8 && decimals > 1 {
        fixed(x, decimals - 1)
    } else {
        s
    }
}

/// Fixed decimals, widened so a small nonzero value keeps two significant
/// digits (`0.0000026` rather than `0.000003`).
pub fn estimate(x: f64, decimals: usize) -> String {
    if x != 0.0 && x.is_finite() {
        let lead = -x.abs().log10().floor();
        if lead >= 0.0 && lead as usize + 1 > decimals {
            return fixed(x, lead as usize + 1);
        }
    }
    fixed(x, decimals)
}

/// Regression cell `estimate{stars} (t)`.
pub fn coefficient_cell(estimate_value: f64, t_value: f64, p_value: f64, decimals: usize) -> String {
    format!(
        "{}{} ({})",
        estimate(estimate_value, decimals),
        significance_stars(p_value),
        fixed(t_value, decimals)
    )
}

/// A header plus rows of pre-formatted cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(Into::into).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .flexible(true)
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("cells are UTF-8")
    }

    pub fn from_csv(text: &str) -> Result<Self, csv::Error> {
        let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
        let header = rdr.headers()?.iter().map(str::to_string).collect();
        let rows = rdr
            .records()
            .map(|r| r.map(|r| r.iter().map(str::to_string).collect()))
            .collect::<Result<_, _>>()?;
        Ok(Table { header, rows })
    }

    /// Column-aligned text: first column left-aligned, the rest right-aligned.
    pub fn to_aligned(&self) -> String {
        let ncols = self
            .rows
            .iter()
            .map(Vec::len)
            .chain([self.header.len()])
            .max()
            .unwrap_or(0);
        let mut widths = vec![0usize; ncols];
        for row in std::iter::once(&self.header).chain(&self.rows) {
            for (j, c) in row.iter().enumerate() {
                widths[j] = widths[j].max(c.chars().count());
            }
        }
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let mut line = String::new();
            for (j, w) in widths.iter().enumerate() {
                let c = row.get(j).map(String::as_str).unwrap_or("");
                let pad = w - c.chars().count();
                if j == 0 {
                    line.push_str(c);
                    line.push_str(&" ".repeat(pad));
                } else {
                    line.push_str("  ");
                    line.push_str(&" ".repeat(pad));
                    line.push_str(c);
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}
