//! Deterministic TSV and JSON emission.
//!
//! A report is an ordered list of metadata entries followed by named tables. TSV puts
//! metadata on `#` lines; JSON mirrors the same data under a versioned schema key with
//! key order preserved.

use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "blockfunctor-report/1";

/// Column order of multiplicity tables.
pub const MULT_COLUMNS: [&str; 7] = [
    "class_id",
    "L_order",
    "u_order",
    "out_order",
    "irr_index",
    "irr_degree",
    "multiplicity",
];

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub meta: Vec<(String, Value)>,
    pub tables: Vec<Table>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.replace(['\t', '\n'], " "),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            meta: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.meta.push((key.to_string(), value.into()));
        self
    }

    pub fn get_meta(&self, key: &str) -> Option<&Value> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn to_tsv(&self) -> String {
        let mut s = format!("# schema_version\t{}\n# command\t{}\n", SCHEMA_VERSION, self.command);
        for (k, v) in &self.meta {
            s.push_str(&format!("# {}\t{}\n", k, cell(v)));
        }
        for t in &self.tables {
            if self.tables.len() > 1 {
                s.push_str(&format!("# table\t{}\n", t.name));
            }
            s.push_str(&t.columns.join("\t"));
            s.push('\n');
            for r in &t.rows {
                let cells: Vec<String> = r.iter().map(cell).collect();
                s.push_str(&cells.join("\t"));
                s.push('\n');
            }
        }
        s
    }

    pub fn to_json_value(&self) -> Value {
        let mut root = Map::new();
        root.insert("schema_version".into(), SCHEMA_VERSION.into());
        root.insert("command".into(), self.command.clone().into());
        let meta: Map<String, Value> = self.meta.iter().cloned().collect();
        root.insert("meta".into(), Value::Object(meta));
        let mut tables = Map::new();
        for t in &self.tables {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| {
                    Value::Object(t.columns.iter().cloned().zip(r.iter().cloned()).collect())
                })
                .collect();
            tables.insert(t.name.clone(), Value::Array(rows));
        }
        root.insert("tables".into(), Value::Object(tables));
        Value::Object(root)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("serializable");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn tsv_and_json_agree() {
        let mut r = Report::new("mult");
        r.meta("group", "S3").meta("k", 3);
        let mut t = Table::new("multiplicities", &MULT_COLUMNS);
        t.push(vec![json!(0), json!(1), json!(1), json!(1), json!(0), json!(1), json!(2)]);
        r.tables.push(t);
        let tsv = r.to_tsv();
        assert!(tsv.starts_with("# schema_version\tblockfunctor-report/1\n# command\tmult\n"));
        assert!(tsv.ends_with("class_id\tL_order\tu_order\tout_order\tirr_index\tirr_degree\tmultiplicity\n0\t1\t1\t1\t0\t1\t2\n"));
        let v = r.to_json_value();
        assert_eq!(v["schema_version"], "blockfunctor-report/1");
        assert_eq!(v["tables"]["multiplicities"][0]["multiplicity"], 2);
        let keys: Vec<&String> = v["tables"]["multiplicities"][0].as_object().unwrap().keys().collect();
        assert_eq!(keys, MULT_COLUMNS.iter().map(|s| s.to_string()).collect::<Vec<_>>().iter().collect::<Vec<_>>());
    }
}
