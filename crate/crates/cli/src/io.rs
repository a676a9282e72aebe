//! Canonical JSON and CSV emission.
//!
//! JSON floats are printed with 17 significant digits; infinities become the
//! strings "inf" and "-inf". Field order is fixed by construction, so
//! re-reading a summary and re-printing it reproduces the bytes exactly.
//! CSV uses shortest round-trip floats, a header row, and LF line endings.

use std::fmt::Write as _;

/// JSON document builder with a deterministic renderer.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Bool(bool),
    UInt(u64),
    Int(i64),
    Float(f64),
    Str(String),
    Array(Vec<Json>),
    Object(Vec<(String, Json)>),
}

impl Json {
    pub fn obj(fields: Vec<(&str, Json)>) -> Json {
        Json::Object(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Bool(b) => {
                let _ = write!(out, "{b}");
            }
            Json::UInt(v) => {
                let _ = write!(out, "{v}");
            }
            Json::Int(v) => {
                let _ = write!(out, "{v}");
            }
            Json::Float(v) => out.push_str(&float_token(*v)),
            Json::Str(s) => out.push_str(&escape(s)),
            Json::Array(items) => write_items(out, indent, '[', ']', items.iter(), |out, item, ind| {
                item.write(out, ind)
            }),
            Json::Object(fields) => {
                write_items(out, indent, '{', '}', fields.iter(), |out, (k, v), ind| {
                    out.push_str(&escape(k));
                    out.push_str(": ");
                    v.write(out, ind);
                })
            }
        }
    }
}

fn write_items<T>(
    out: &mut String,
    indent: usize,
    open: char,
    close: char,
    items: impl ExactSizeIterator<Item = T>,
    mut write_one: impl FnMut(&mut String, T, usize),
) {
    if items.len() == 0 {
        out.push(open);
        out.push(close);
        return;
    }
    out.push(open);
    let inner = indent + 2;
    let mut first = true;
    for item in items {
        if !first {
            out.push(',');
        }
        first = false;
        out.push('\n');
        out.push_str(&" ".repeat(inner));
        write_one(out, item, inner);
    }
    out.push('\n');
    out.push_str(&" ".repeat(indent));
    out.push(close);
}

/// Fixed JSON float token: 17 significant digits, or a quoted string for
/// non-finite values.
pub fn float_token(v: f64) -> String {
    if v.is_nan() {
        "\"nan\"".into()
    } else if v == f64::INFINITY {
        "\"inf\"".into()
    } else if v == f64::NEG_INFINITY {
        "\"-inf\"".into()
    } else {
        format!("{v:.16e}")
    }
}

fn escape(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization")
}

/// Renders a parsed JSON value in the same canonical layout, for byte-exact
/// reprint round-trips of previously written summaries.
pub fn render_value(value: &serde_json::Value) -> String {
    let mut out = String::new();
    write_value(value, &mut out, 0);
    out.push('\n');
    out
}

fn write_value(value: &serde_json::Value, out: &mut String, indent: usize) {
    use serde_json::Value;
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else {
                out.push_str(&float_token(n.as_f64().expect("numeric")));
            }
        }
        Value::String(s) => out.push_str(&escape(s)),
        Value::Array(items) => write_items(out, indent, '[', ']', items.iter(), |out, item, ind| {
            write_value(item, out, ind)
        }),
        Value::Object(fields) => {
            write_items(out, indent, '{', '}', fields.iter(), |out, (k, v), ind| {
                out.push_str(&escape(k));
                out.push_str(": ");
                write_value(v, out, ind);
            })
        }
    }
}

/// CSV of welfare and normalized-margin samples, in sample order.
pub fn samples_csv(welfare: &[f64], s_norm: &[f64]) -> String {
    let mut out = String::from("w,s_norm\n");
    for (w, s) in welfare.iter().zip(s_norm) {
        let _ = writeln!(out, "{w},{s}");
    }
    out
}

/// CSV of exact welfare atoms.
pub fn atoms_csv(atoms: &[welfare_core::oracle::Atom]) -> String {
    let mut out = String::from("value,probability\n");
    for atom in atoms {
        let _ = writeln!(out, "{},{}", atom.value, atom.probability);
    }
    out
}

/// CSV of convergence sweep rows with gap columns.
pub fn converge_csv(rows: &[welfare_core::engine::SweepRow]) -> String {
    let mut out = String::from(
        "n,u_hat,delta_hat,p_hat,u_limit,delta_limit,p_limit,u_gap,delta_gap,p_gap,lambda,ks\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.u_hat,
            r.delta_hat,
            r.p_hat,
            r.u_limit,
            r.delta_limit,
            r.p_limit,
            (r.u_hat - r.u_limit).abs(),
            (r.delta_hat - r.delta_limit).abs(),
            (r.p_hat - r.p_limit).abs(),
            r.lambda,
            r.ks,
        );
    }
    out
}
