//! Convergence tables: the common output record of sweeps, rendered as CSV
//! (metadata in `#` comment lines) or JSON.

use serde::Serialize;

use crate::{format_rational, to_f64, Rational};

/// One row: parameter, exact value (if any), its float rendering, target and
/// relative error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub param: i64,
    pub exact: Option<String>,
    pub float: f64,
    pub target: Option<f64>,
    pub rel_err: Option<f64>,
}

/// Ordered rows plus free-form metadata.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub param_name: String,
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<Row>,
}

/// `|value − target| / |target|`, or `None` for a zero target.
pub fn rel_err(value: f64, target: f64) -> Option<f64> {
    (target != 0.0).then(|| (value - target).abs() / target.abs())
}

impl ConvergenceTable {
    pub fn new(param_name: &str) -> Self {
        ConvergenceTable {
            param_name: param_name.to_string(),
            ..Default::default()
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.push((key.to_string(), value.into()));
        self
    }

    /// Appends a row for an exact value.
    pub fn push_exact(&mut self, param: i64, exact: &Rational, target: Option<f64>) {
        let float = to_f64(exact);
        self.rows.push(Row {
            param,
            exact: Some(format_rational(exact)),
            float,
            target,
            rel_err: target.and_then(|t| rel_err(float, t)),
        });
    }

    /// Appends a row for a floating-point value.
    pub fn push_float(&mut self, param: i64, float: f64, target: Option<f64>) {
        self.rows.push(Row {
            param,
            exact: None,
            float,
            target,
            rel_err: target.and_then(|t| rel_err(float, t)),
        });
    }

    /// Relative errors of all rows that have one, in row order.
    pub fn errors(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.rel_err).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let opt = |v: Option<f64>| v.map(fmt_float).unwrap_or_default();
        w.write_record([self.param_name.as_str(), "exact", "float", "target", "rel_err"])
            .expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.param.to_string(),
                r.exact.clone().unwrap_or_default(),
                fmt_float(r.float),
                opt(r.target),
                opt(r.rel_err),
            ])
            .expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf8"));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

/// Shortest round-trip rendering of a float.
pub fn fmt_float(v: f64) -> String {
    format!("{v:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = ConvergenceTable::new("N").with_meta("command", "ratio");
        t.push_exact(2, &Rational::new(1.into(), 2.into()), Some(0.5));
        t.push_float(3, 0.25, None);
        let csv = t.to_csv();
        assert_eq!(
            csv,
            "# command: ratio\nN,exact,float,target,rel_err\n2,1/2,0.5,0.5,0.0\n3,,0.25,,\n"
        );
        assert!(t.to_json().contains("\"param_name\": \"N\""));
    }

    #[test]
    fn relative_error() {
        assert_eq!(rel_err(1.1, 1.0).map(|e| (e * 10.0).round()), Some(1.0));
        assert_eq!(rel_err(1.0, 0.0), None);
    }
}
