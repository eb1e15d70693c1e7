use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{tokenize, FeatureKind, RawColumn, RawDataset, RawValue};
use crate::error::{Error, Result};

/// Declared layout of a CSV input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsvSchema {
    pub columns: Vec<CsvColumn>,
    /// Header name of the binary label column.
    pub label: String,
    /// Header name of an optional positive example-weight column.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsvColumn {
    pub name: String,
    #[serde(rename = "type", with = "kind_name")]
    pub kind: FeatureKind,
}

mod kind_name {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use crate::dataset::FeatureKind;

    pub fn serialize<S: Serializer>(kind: &FeatureKind, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match kind {
            FeatureKind::Numerical => "numerical",
            FeatureKind::Categorical => "categorical",
            FeatureKind::CategoricalSet => "set",
        })
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<FeatureKind, D::Error> {
        let name = String::deserialize(d)?;
        match name.as_str() {
            "numerical" => Ok(FeatureKind::Numerical),
            "categorical" => Ok(FeatureKind::Categorical),
            "set" | "categorical_set" => Ok(FeatureKind::CategoricalSet),
            other => Err(de::Error::custom(format!("unknown column type `{other}`"))),
        }
    }
}

fn parse_label(cell: &str, row: usize, column: &str) -> Result<u8> {
    match cell.trim() {
        "0" => Ok(0),
        "1" => Ok(1),
        other => Err(Error::Parse {
            row,
            column: column.to_owned(),
            message: format!("label `{other}` is not 0 or 1"),
        }),
    }
}

fn parse_cell(cell: &str, kind: FeatureKind, row: usize, column: &str) -> Result<RawValue> {
    let err = |message: String| Error::Parse {
        row,
        column: column.to_owned(),
        message,
    };
    if cell.is_empty() {
        return Ok(RawValue::Missing);
    }
    match kind {
        FeatureKind::Numerical => {
            let v: f64 = cell
                .trim()
                .parse()
                .map_err(|_| err(format!("`{cell}` is not a number")))?;
            Ok(if v.is_nan() {
                RawValue::Missing
            } else {
                RawValue::Numerical(v)
            })
        }
        FeatureKind::Categorical => Ok(RawValue::Categorical(cell.to_owned())),
        FeatureKind::CategoricalSet => {
            let inner = cell
                .trim()
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| err(format!("set cell `{cell}` is not enclosed in braces")))?;
            Ok(RawValue::Tokens(tokenize(inner)))
        }
    }
}

/// Reads a headed, comma-separated file.
///
/// Set cells hold space-separated tokens inside braces (`{blue red}`); `{}` is
/// the empty set and an empty cell is a missing value in every column type.
pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<RawDataset> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, schema)
}

pub(crate) fn read_csv<R: std::io::Read>(input: R, schema: &CsvSchema) -> Result<RawDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header_err = |e: csv::Error| Error::Parse {
        row: 1,
        column: String::new(),
        message: e.to_string(),
    };
    let headers = reader.headers().map_err(header_err)?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("column `{name}` not found in header")))
    };
    let positions = schema
        .columns
        .iter()
        .map(|c| find(&c.name))
        .collect::<Result<Vec<_>>>()?;
    let label_pos = find(&schema.label)?;
    let weight_pos = schema.weight.as_deref().map(find).transpose()?;

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut weights = weight_pos.map(|_| Vec::new());
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| Error::Parse {
            row: line,
            column: String::new(),
            message: e.to_string(),
        })?;
        let cell = |pos: usize| record.get(pos).unwrap_or("");
        let row = schema
            .columns
            .iter()
            .zip(&positions)
            .map(|(c, &p)| parse_cell(cell(p), c.kind, line, &c.name))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
        labels.push(parse_label(cell(label_pos), line, &schema.label)?);
        if let (Some(p), Some(w)) = (weight_pos, weights.as_mut()) {
            let name = schema.weight.as_deref().unwrap_or_default();
            let value: f64 = cell(p).trim().parse().map_err(|_| Error::Parse {
                row: line,
                column: name.to_owned(),
                message: format!("weight `{}` is not a number", cell(p)),
            })?;
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Parse {
                    row: line,
                    column: name.to_owned(),
                    message: "weight must be positive".into(),
                });
            }
            w.push(value);
        }
    }
    Ok(RawDataset {
        columns: schema
            .columns
            .iter()
            .map(|c| RawColumn {
                name: c.name.clone(),
                kind: c.kind,
            })
            .collect(),
        rows,
        labels,
        weights,
    })
}

/// Reads `<label>\t<text>` lines into a single categorical-set column named
/// `text`. Blank lines are skipped.
pub fn load_text_corpus(path: impl AsRef<Path>) -> Result<RawDataset> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_text_corpus(&content)
}

pub fn parse_text_corpus(content: &str) -> Result<RawDataset> {
    let mut texts = Vec::new();
    let mut labels = Vec::new();
    for (i, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (label, text) = line.split_once('\t').ok_or_else(|| Error::Parse {
            row: i + 1,
            column: "label".into(),
            message: "expected `<label>\\t<text>`".into(),
        })?;
        labels.push(parse_label(label, i + 1, "label")?);
        texts.push(text);
    }
    Ok(RawDataset::from_texts(&texts, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema() -> CsvSchema {
        toml::from_str(
            r#"
            label = "y"
            columns = [
                { name = "x", type = "numerical" },
                { name = "c", type = "categorical" },
                { name = "s", type = "set" },
            ]
            "#,
        )
        .unwrap()
    }

    #[test]
    fn parses_all_cell_types() {
        let data = "x,c,s,y\n1.5,red,{blue red green},1\n,,{},0\n2,blue,,0\n";
        let raw = read_csv(data.as_bytes(), &schema()).unwrap();
        assert_eq!(raw.labels, vec![1, 0, 0]);
        assert_eq!(raw.rows[0][0], RawValue::Numerical(1.5));
        assert_eq!(raw.rows[0][1], RawValue::Categorical("red".into()));
        assert_eq!(
            raw.rows[0][2],
            RawValue::Tokens(vec!["blue".into(), "green".into(), "red".into()])
        );
        assert_eq!(raw.rows[1][0], RawValue::Missing);
        assert_eq!(raw.rows[1][1], RawValue::Missing);
        assert_eq!(raw.rows[1][2], RawValue::Tokens(vec![]));
        assert_eq!(raw.rows[2][2], RawValue::Missing);
    }

    #[test]
    fn reports_location_of_bad_cells() {
        let data = "x,c,s,y\n1,a,{a},1\nabc,a,{a},0\n";
        match read_csv(data.as_bytes(), &schema()) {
            Err(Error::Parse { row, column, .. }) => {
                assert_eq!(row, 3);
                assert_eq!(column, "x");
            }
            other => panic!("unexpected {other:?}"),
        }
        let data = "x,c,s,y\n1,a,a b,1\n";
        assert!(matches!(
            read_csv(data.as_bytes(), &schema()),
            Err(Error::Parse { row: 2, .. })
        ));
        let data = "x,c,s,y\n1,a,{a},7\n";
        assert!(matches!(
            read_csv(data.as_bytes(), &schema()),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn missing_header_column_is_a_schema_error() {
        let data = "x,c,y\n1,a,1\n";
        assert!(matches!(
            read_csv(data.as_bytes(), &schema()),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn unknown_column_type_is_rejected() {
        let parsed: std::result::Result<CsvSchema, _> =
            toml::from_str("label = \"y\"\ncolumns = [{ name = \"x\", type = \"image\" }]");
        assert!(parsed.is_err());
    }

    #[test]
    fn text_corpus_lines() {
        let raw = parse_text_corpus("1\tgood movie good\n\n0\tbad\n").unwrap();
        assert_eq!(raw.labels, vec![1, 0]);
        assert_eq!(
            raw.rows[0][0],
            RawValue::Tokens(vec!["good".into(), "movie".into()])
        );
        assert!(parse_text_corpus("2\tx\n").is_err());
        assert!(parse_text_corpus("no tab here\n").is_err());
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_text_corpus("/nonexistent/corpus.tsv"),
            Err(Error::Io { .. })
        ));
    }
}
