//! Deterministic output encoding shared by the CLI subcommands.
//!
//! JSON is canonical: keys sorted, no insignificant whitespace. With
//! serde_json's default features `Value` maps are BTreeMaps, so routing
//! serialization through `Value` sorts every object. CSV rows use
//! RFC-style quoting with a header row. Text output is human-oriented and
//! carries no stability guarantee.

use serde::Serialize;

/// Output format selector shared by all subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Json,
}

/// Canonical JSON encoding of any serializable report.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("report types serialize");
    serde_json::to_string(&value).expect("values print")
}

/// A field is quoted when it contains a comma, quote or line break;
/// embedded quotes are doubled.
fn csv_field(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// One CSV row, terminated with a newline.
pub fn csv_row<S: AsRef<str>>(fields: impl IntoIterator<Item = S>) -> String {
    let mut row = String::new();
    for (i, field) in fields.into_iter().enumerate() {
        if i > 0 {
            row.push(',');
        }
        row.push_str(&csv_field(field.as_ref()));
    }
    row.push('\n');
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn json_keys_are_sorted() {
        let mut map = HashMap::new();
        map.insert("zeta", 1);
        map.insert("alpha", 2);
        map.insert("mid", 3);
        assert_eq!(to_canonical_json(&map), r#"{"alpha":2,"mid":3,"zeta":1}"#);
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_row(["a", "b,c", "d\"e"]), "a,\"b,c\",\"d\"\"e\"\n");
        assert_eq!(csv_row(["plain"]), "plain\n");
    }
}
