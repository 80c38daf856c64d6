//! Tabular and summary output with fixed number formatting.
//!
//! Floats go out with 6 significant digits unless a cell carries its own
//! rendering. Non-finite values print as `inf`, `-inf` or `nan`, and missing
//! quantities as `undefined`, in CSV and JSON alike.

use serde_json::{Map, Number, Value};

use crate::error::LabResult;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    /// A number with a fixed rendering.
    Shown(f64, String),
    Int(i64),
    Text(String),
    Undefined,
}

impl Cell {
    pub fn opt(x: Option<f64>) -> Cell {
        x.map_or(Cell::Undefined, Cell::Num)
    }

    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) => sig6(*x),
            Cell::Shown(x, s) => if x.is_finite() { s.clone() } else { special(*x).to_string() },
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Undefined => "undefined".to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) | Cell::Shown(x, _) if !x.is_finite() => Value::String(special(*x).into()),
            Cell::Num(_) | Cell::Shown(..) => {
                // Parse the printed digits back so JSON and CSV agree.
                let x: f64 = self.render().parse().expect("formatted float");
                Number::from_f64(x).map_or(Value::Null, Value::Number)
            }
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Undefined => Value::String("undefined".into()),
        }
    }
}

fn special(x: f64) -> &'static str {
    if x.is_nan() {
        "nan"
    } else if x > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

/// `%g`-style rendering with 6 significant digits and trailing zeros dropped.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return special(x).to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.5e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..6).contains(&exp) {
        let fixed = format!("{:.*}", (5 - exp) as usize, x);
        trim(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim(mant))
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `decimals` places after the point.
pub fn fixed(x: f64, decimals: usize) -> Cell {
    Cell::Shown(x, format!("{x:.decimals$}"))
}

/// At most `sig` significant digits and at most `max_decimals` places.
pub fn capped(x: f64, sig: i32, max_decimals: i32) -> Cell {
    if x == 0.0 || !x.is_finite() {
        return fixed(x, max_decimals.max(0) as usize);
    }
    let lead = x.abs().log10().floor() as i32;
    let d = (sig - 1 - lead).clamp(0, max_decimals) as usize;
    fixed(x, d)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// One run of a command: scalar results and an optional table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Section {
    pub summary: Vec<(String, Cell)>,
    pub table: Option<Table>,
}

impl Section {
    pub fn put(&mut self, key: &str, cell: Cell) {
        self.summary.push((key.to_string(), cell));
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), sections: Vec::new() }
    }

    /// Tables stacked under one header when any section has one, otherwise
    /// one row per summary.
    pub fn to_csv(&self) -> LabResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let write_err = |e: csv::Error| crate::error::LabError::Csv { path: "<output>".into(), source: e };
        if let Some(first) = self.sections.iter().find_map(|s| s.table.as_ref()) {
            w.write_record(&first.columns).map_err(write_err)?;
            for t in self.sections.iter().filter_map(|s| s.table.as_ref()) {
                for row in &t.rows {
                    w.write_record(row.iter().map(Cell::render)).map_err(write_err)?;
                }
            }
        } else if let Some(first) = self.sections.first() {
            w.write_record(first.summary.iter().map(|(k, _)| k)).map_err(write_err)?;
            for s in &self.sections {
                w.write_record(s.summary.iter().map(|(_, c)| c.render())).map_err(write_err)?;
            }
        }
        let bytes = w.into_inner().expect("in-memory writer");
        Ok(String::from_utf8(bytes).expect("utf-8 output"))
    }

    pub fn to_json(&self) -> String {
        let sections: Vec<Value> = self
            .sections
            .iter()
            .map(|s| {
                let mut obj = Map::new();
                let summary: Map<String, Value> = s.summary.iter().map(|(k, c)| (k.clone(), c.json())).collect();
                obj.insert("summary".into(), Value::Object(summary));
                if let Some(t) = &s.table {
                    obj.insert("columns".into(), t.columns.iter().map(|c| Value::String(c.clone())).collect());
                    let rows = t.rows.iter().map(|r| r.iter().map(Cell::json).collect()).collect();
                    obj.insert("rows".into(), Value::Array(rows));
                }
                Value::Object(obj)
            })
            .collect();
        let mut root = Map::new();
        root.insert("command".into(), Value::String(self.command.clone()));
        root.insert("sections".into(), Value::Array(sections));
        let mut out = serde_json::to_string_pretty(&Value::Object(root)).expect("serializable");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(6.896848619376), "6.89685");
        assert_eq!(sig6(54.1825), "54.1825");
        assert_eq!(sig6(6189.4704), "6189.47");
        assert_eq!(sig6(1.0), "1");
        assert_eq!(sig6(-2.0), "-2");
        assert_eq!(sig6(1e-3), "0.001");
        assert_eq!(sig6(1.234567e-7), "1.23457e-7");
        assert_eq!(sig6(3.4e12), "3.4e12");
        assert_eq!(sig6(999999.7), "1e6");
        assert_eq!(sig6(f64::INFINITY), "inf");
        assert_eq!(sig6(-0.0), "0");
    }

    #[test]
    fn capped_rendering() {
        assert_eq!(capped(132.384, 4, 3).render(), "132.4");
        assert_eq!(capped(10.4995, 4, 3).render(), "10.50");
        assert_eq!(capped(0.3333, 4, 3).render(), "0.333");
        assert_eq!(capped(6189.4704, 6, 3).render(), "6189.47");
        assert_eq!(capped(f64::INFINITY, 6, 3).render(), "inf");
    }

    #[test]
    fn csv_falls_back_to_summaries() {
        let mut r = Report::new("wd");
        for mu in [2.0, 2.5] {
            let mut s = Section::default();
            s.put("mu_e", Cell::Num(mu));
            s.put("note", Cell::text("a,b"));
            r.sections.push(s);
        }
        assert_eq!(r.to_csv().unwrap(), "mu_e,note\n2,\"a,b\"\n2.5,\"a,b\"\n");
    }

    #[test]
    fn json_keeps_specials_as_strings() {
        let mut s = Section::default();
        s.put("xi1", Cell::Num(f64::INFINITY));
        s.put("omega0", Cell::Undefined);
        s.put("m1", Cell::Num(2.0182359));
        let r = Report { command: "x".into(), sections: vec![s] };
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        let sum = &v["sections"][0]["summary"];
        assert_eq!(sum["xi1"], "inf");
        assert_eq!(sum["omega0"], "undefined");
        assert_eq!(sum["m1"], 2.01824);
    }
}
