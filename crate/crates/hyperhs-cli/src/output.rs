//! Output plumbing: CSV/JSON rendering and the write-to-file-or-stdout
//! sink. Every document carries the schema major version; stochastic ones
//! also carry the master seed so the run can be reproduced exactly.

use std::path::PathBuf;

use clap::ValueEnum;
use hyperhs::FORMAT_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
}

/// CSV document: "# hyperhs-csv <version> [seed=N]" comment, header, rows.
pub fn csv_table(seed: Option<u64>, columns: &str, rows: &[Vec<String>]) -> String {
    let mut out = match seed {
        Some(s) => format!("# hyperhs-csv {FORMAT_VERSION} seed={s}\n"),
        None => format!("# hyperhs-csv {FORMAT_VERSION}\n"),
    };
    out.push_str(columns);
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

/// JSON document with the format version injected at the top level.
pub fn json_doc(mut value: serde_json::Value) -> String {
    if let Some(map) = value.as_object_mut() {
        map.insert(
            "format_version".into(),
            serde_json::Value::from(FORMAT_VERSION),
        );
    }
    let mut text = serde_json::to_string_pretty(&value).expect("serializable value");
    text.push('\n');
    text
}

pub fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
