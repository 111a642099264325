use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};

/// On-disk dataset layouts understood by the loaders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DataFormat {
    Csv,
    Keel,
}

impl DataFormat {
    /// `.dat` files and files whose first non-blank line starts with `@` are
    /// KEEL; everything else is CSV.
    pub fn detect(path: &Path) -> DataFormat {
        if path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("dat"))
        {
            return DataFormat::Keel;
        }
        let first = File::open(path).ok().and_then(|f| {
            BufReader::new(f)
                .lines()
                .map_while(|l| l.ok())
                .find(|l| !l.trim().is_empty())
        });
        match first {
            Some(l) if l.trim_start().starts_with('@') => DataFormat::Keel,
            _ => DataFormat::Csv,
        }
    }
}

impl std::str::FromStr for DataFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(DataFormat::Csv),
            "keel" | "dat" => Ok(DataFormat::Keel),
            other => Err(format!("unknown format {other:?} (expected csv or keel)")),
        }
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

/// Loads a headed CSV file. Every column other than `label_column` must be
/// numeric.
pub fn load_csv(
    path: impl AsRef<Path>,
    label_column: &str,
    minority: Option<&str>,
) -> Result<Dataset> {
    read_csv(open(path.as_ref())?, Some(label_column), minority)
}

/// Reads CSV from any reader. Without `label_column` the last column is the
/// label.
pub fn read_csv<R: Read>(
    reader: R,
    label_column: Option<&str>,
    minority: Option<&str>,
) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let label_idx = match label_column {
        Some(name) => header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingLabelColumn(name.to_string()))?,
        None => header
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::MissingLabelColumn("<last>".into()))?,
    };
    let feature_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != label_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let mut row = Vec::with_capacity(feature_names.len());
        for (j, cell) in rec.iter().enumerate() {
            if j == label_idx {
                labels.push(cell.to_string());
                continue;
            }
            let v: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::NonNumeric {
                    row: r + 1,
                    column: header[j].clone(),
                    value: cell.to_string(),
                })?;
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Dataset::new(rows, labels, minority, feature_names)
}

/// Loads a KEEL `.dat` file.
pub fn load_keel(path: impl AsRef<Path>) -> Result<Dataset> {
    read_keel(open(path.as_ref())?)
}

struct Attribute {
    name: String,
    nominal: bool,
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect()
}

fn parse_attribute(rest: &str) -> Result<Attribute> {
    let rest = rest.trim();
    // Name may be quoted; type follows.
    let (name, tail) = if let Some(stripped) = rest.strip_prefix('\'') {
        let end = stripped
            .find('\'')
            .ok_or_else(|| Error::Keel(format!("unterminated attribute name: {rest}")))?;
        (stripped[..end].to_string(), stripped[end + 1..].trim())
    } else {
        let end = rest
            .find(|c: char| c.is_whitespace() || c == '{' || c == '[')
            .unwrap_or(rest.len());
        (rest[..end].to_string(), rest[end..].trim())
    };
    if name.is_empty() {
        return Err(Error::Keel("attribute without name".into()));
    }
    let lower = tail.to_ascii_lowercase();
    let nominal = tail.starts_with('{')
        || !(lower.starts_with("real")
            || lower.starts_with("integer")
            || lower.starts_with("numeric"));
    Ok(Attribute { name, nominal })
}

/// Reads the KEEL subset: `@relation`, `@attribute`, `@inputs`, `@outputs`
/// and `@data`, followed by comma-separated rows.
pub fn read_keel<R: Read>(reader: R) -> Result<Dataset> {
    let mut attributes: Vec<Attribute> = Vec::new();
    let mut inputs: Option<Vec<String>> = None;
    let mut output: Option<String> = None;
    let mut data_lines: Option<Vec<(usize, String)>> = None;

    for (lineno, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| Error::io("<keel input>", e))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        if let Some(rows) = data_lines.as_mut() {
            rows.push((lineno + 1, t.to_string()));
            continue;
        }
        if !t.starts_with('@') {
            return Err(Error::Keel(format!("line {}: expected a header line", lineno + 1)));
        }
        let (kw, rest) = t[1..]
            .split_once(char::is_whitespace)
            .unwrap_or((&t[1..], ""));
        match kw.to_ascii_lowercase().as_str() {
            "relation" => {}
            "attribute" => attributes.push(parse_attribute(rest)?),
            "inputs" | "input" => inputs = Some(split_list(rest)),
            "outputs" | "output" => {
                let outs = split_list(rest);
                if outs.len() != 1 {
                    return Err(Error::Keel(format!(
                        "expected a single output attribute, got {outs:?}"
                    )));
                }
                output = outs.into_iter().next();
            }
            "data" => data_lines = Some(Vec::new()),
            other => return Err(Error::Keel(format!("unknown header @{other}"))),
        }
    }

    let data_lines = data_lines.ok_or_else(|| Error::Keel("no @data section".into()))?;
    let output = output.ok_or_else(|| Error::Keel("output attribute not declared".into()))?;
    let out_idx = attributes
        .iter()
        .position(|a| a.name == output)
        .ok_or_else(|| Error::Keel(format!("output attribute {output:?} not declared")))?;
    let input_names = inputs.unwrap_or_else(|| {
        attributes
            .iter()
            .filter(|a| a.name != output)
            .map(|a| a.name.clone())
            .collect()
    });
    let mut input_idx = Vec::with_capacity(input_names.len());
    for name in &input_names {
        let j = attributes
            .iter()
            .position(|a| &a.name == name)
            .ok_or_else(|| Error::Keel(format!("input {name:?} has no @attribute line")))?;
        if attributes[j].nominal {
            return Err(Error::NominalAttribute(name.clone()));
        }
        input_idx.push(j);
    }
    if data_lines.is_empty() {
        return Err(Error::EmptyDataset);
    }

    let mut rows = Vec::with_capacity(data_lines.len());
    let mut labels = Vec::with_capacity(data_lines.len());
    for (r, (lineno, line)) in data_lines.iter().enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != attributes.len() {
            return Err(Error::Keel(format!(
                "line {lineno}: {} values for {} attributes",
                cells.len(),
                attributes.len()
            )));
        }
        let row = input_idx
            .iter()
            .map(|&j| {
                cells[j]
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::NonNumeric {
                        row: r + 1,
                        column: attributes[j].name.clone(),
                        value: cells[j].to_string(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
        labels.push(cells[out_idx].to_string());
    }
    Dataset::new(rows, labels, None, input_names)
}

/// Loads a dataset in `format` (auto-detected when `None`). `label_column`
/// and `minority` apply to CSV only; KEEL files declare their output.
pub fn load_dataset(
    path: impl AsRef<Path>,
    format: Option<DataFormat>,
    label_column: Option<&str>,
    minority: Option<&str>,
) -> Result<Dataset> {
    let path = path.as_ref();
    match format.unwrap_or_else(|| DataFormat::detect(path)) {
        DataFormat::Csv => read_csv(open(path)?, label_column, minority),
        DataFormat::Keel => {
            let d = read_keel(open(path)?)?;
            match minority {
                Some(m) if m != d.minority_label() => Err(Error::MinorityNotRarer {
                    label: m.to_string(),
                    minority: d.count(super::Class::Majority),
                    majority: d.count(super::Class::Minority),
                }),
                _ => Ok(d),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Class;

    #[test]
    fn csv_basic_and_errors() {
        let d = read_csv("f1,f2,y\n1,2,a\n3,4,a\n5,6,a\n7,8,b\n".as_bytes(), Some("y"), None)
            .unwrap();
        assert_eq!((d.n(), d.p()), (4, 2));
        assert_eq!(d.minority_label(), "b");
        assert_eq!(d.label(3), Class::Minority);

        let err = read_csv("f1,y\n1,a\n2,b\n3,c\n".as_bytes(), Some("y"), None).unwrap_err();
        assert!(err.to_string().contains("more than two classes"), "{err}");

        let err = read_csv("f1,y\n1,a\nx,b\n".as_bytes(), Some("y"), None).unwrap_err();
        match err {
            Error::NonNumeric { row, column, .. } => {
                assert_eq!(row, 2);
                assert_eq!(column, "f1");
            }
            e => panic!("unexpected {e}"),
        }

        let err = read_csv("f1,y\n1,a\n".as_bytes(), Some("label"), None).unwrap_err();
        assert!(matches!(err, Error::MissingLabelColumn(_)));

        let err = read_csv("f1,y\n,a\n2,b\n".as_bytes(), Some("y"), None).unwrap_err();
        assert!(matches!(err, Error::NonNumeric { .. }));
    }

    #[test]
    fn label_column_may_be_anywhere() {
        let d = read_csv("y, f1\nb, 1.5\na, 2\na, 3\n".as_bytes(), Some("y"), None).unwrap();
        assert_eq!(d.feature_names(), &["f1".to_string()]);
        assert_eq!(d.row(0), &[1.5]);
        assert_eq!(d.minority_label(), "b");
    }

    const KEEL: &str = "@relation toy
@attribute A real [0.0, 10.0]
@attribute B integer [0, 5]
@attribute Class {positive, negative}
@inputs A, B
@outputs Class
@data
1.0, 2, negative
2.5,3, negative
0.5, 1, positive
";

    #[test]
    fn keel_reader() {
        let d = read_keel(KEEL.as_bytes()).unwrap();
        assert_eq!((d.n(), d.p()), (3, 2));
        assert_eq!(d.minority_label(), "positive");
        assert_eq!(d.row(1), &[2.5, 3.0]);
        assert_eq!(d.feature_names(), &["A".to_string(), "B".to_string()]);
    }

    #[test]
    fn keel_errors() {
        let empty = KEEL.split("@data").next().unwrap().to_string() + "@data\n";
        assert!(matches!(read_keel(empty.as_bytes()), Err(Error::EmptyDataset)));

        let nodata = KEEL.split("@data").next().unwrap();
        assert!(read_keel(nodata.as_bytes())
            .unwrap_err()
            .to_string()
            .contains("no @data"));

        let noout = KEEL.replace("@outputs Class\n", "");
        assert!(read_keel(noout.as_bytes())
            .unwrap_err()
            .to_string()
            .contains("output attribute not declared"));

        let nominal = KEEL
            .replace("@attribute B integer [0, 5]", "@attribute B {x, y}")
            .replace(", 2,", ", x,")
            .replace(",3,", ",y,")
            .replace(", 1,", ", x,");
        let err = read_keel(nominal.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("non-numeric feature unsupported"), "{err}");
    }
}
