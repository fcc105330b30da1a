use std::f64::consts::PI;
use std::fmt::Write as _;

use riesz_equilibrium::measures::FieldParams;
use serde_json::{Map, Value};

/// 17 significant digits, the shortest width that round-trips every f64.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        // avoid "-0" rows for exact zeros
        return "0.0000000000000000e0".to_string();
    }
    format!("{v:.16e}")
}

/// `a cos(kπ/(n − 1))`, k = 0..n, in increasing order. The two halves are
/// exact mirrors and the middle point of an odd grid is exactly zero.
pub fn chebyshev_grid(a: f64, n: usize) -> Vec<f64> {
    mirrored(n, |k| a * (PI * k as f64 / (n - 1) as f64).cos())
}

/// `a cos((2k + 1)π/(2n))`: Chebyshev points strictly inside `(−a, a)`.
pub fn chebyshev_interior_grid(a: f64, n: usize) -> Vec<f64> {
    mirrored(n, |k| a * (PI * (2 * k + 1) as f64 / (2 * n) as f64).cos())
}

fn mirrored(n: usize, node: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut xs = vec![0.0; n];
    for k in 0..n / 2 {
        let x = node(k);
        xs[n - 1 - k] = x;
        xs[k] = -x;
    }
    xs
}

/// `n` points from `lo` to `hi`, equally spaced in `ln a`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (l, h) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => (l + (h - l) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

/// Metadata for the `#` header block and for JSON envelopes.
pub(crate) struct Meta {
    entries: Vec<(String, Value)>,
}

impl Meta {
    pub fn new(command: &str) -> Self {
        Self {
            entries: vec![
                ("command".into(), command.into()),
                ("version".into(), env!("CARGO_PKG_VERSION").into()),
            ],
        }
    }

    pub fn field(self, p: &FieldParams) -> Self {
        self.value("s", p.s).value("q", p.q).value("b", p.b)
    }

    pub fn value(mut self, key: &str, v: f64) -> Self {
        self.entries.push((key.into(), v.into()));
        self
    }

    pub fn count(mut self, key: &str, v: usize) -> Self {
        self.entries.push((key.into(), v.into()));
        self
    }

    pub fn into_json(self) -> Map<String, Value> {
        self.entries.into_iter().collect()
    }

    fn header(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let v = match v {
                Value::Number(n) if n.is_f64() => format_number(n.as_f64().unwrap_or(f64::NAN)),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "# {k} = {v}");
        }
        out
    }
}

pub(crate) struct Csv {
    text: String,
}

impl Csv {
    pub fn new(meta: Meta, columns: &[&str]) -> Self {
        let mut text = meta.header();
        text.push_str(&columns.join(","));
        text.push('\n');
        Self { text }
    }

    pub fn rows(mut self, rows: &[[f64; 2]]) -> Self {
        for r in rows {
            let _ = writeln!(self.text, "{},{}", format_number(r[0]), format_number(r[1]));
        }
        self
    }

    pub fn text_rows(mut self, rows: &[(String, String)]) -> Self {
        for (k, v) in rows {
            let _ = writeln!(self.text, "{k},{v}");
        }
        self
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// `key,value` pairs of a JSON value; nested keys are joined with `.` and
/// array elements are indexed.
pub(crate) fn flatten_json(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                flatten_json(&join(k), v, out);
            }
        }
        Value::Array(a) => {
            for (i, v) in a.iter().enumerate() {
                flatten_json(&join(&i.to_string()), v, out);
            }
        }
        Value::Number(n) => out.push((prefix.to_string(), format_number(n.as_f64().unwrap_or(f64::NAN)))),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_are_symmetric() {
        for n in [2, 5, 6, 101] {
            let g = chebyshev_grid(2.0, n);
            assert_eq!(g.len(), n);
            assert_eq!(g[0], -2.0);
            assert_eq!(g[n - 1], 2.0);
            for k in 0..n {
                assert_eq!(g[k], -g[n - 1 - k]);
            }
            assert!(g.windows(2).all(|w| w[0] < w[1]));
            let h = chebyshev_interior_grid(2.0, n);
            assert!(h[0] > -2.0 && h[n - 1] < 2.0);
        }
        assert_eq!(chebyshev_grid(1.0, 5)[2], 0.0);
    }

    #[test]
    fn number_format() {
        assert_eq!(format_number(1.0), "1.0000000000000000e0");
        assert_eq!(format_number(0.0), format_number(-0.0));
        let x = 0.1 + 0.2;
        assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        let g = log_grid(0.1, 100.0, 4);
        assert_eq!((g[0], g[3]), (0.1, 100.0));
    }
}
