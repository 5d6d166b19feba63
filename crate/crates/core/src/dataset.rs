//! Categorical datasets: ingest, validation and columnar access.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::subset::VariableSubset;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub cardinality: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delimiter {
    #[default]
    Csv,
    Tsv,
}

impl Delimiter {
    fn byte(self) -> u8 {
        match self {
            Delimiter::Csv => b',',
            Delimiter::Tsv => b'\t',
        }
    }

    /// Guesses from a file extension; anything other than `.tsv`/`.tab` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("tsv") | Some("tab") => Delimiter::Tsv,
            _ => Delimiter::Csv,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    pub delimiter: Delimiter,
    pub header: bool,
    /// Map arbitrary text labels to dense codes instead of requiring integers.
    pub map_labels: bool,
    /// Declared cardinalities; each must be at least the observed one.
    pub cardinalities: Option<Vec<u32>>,
}

/// Per-column label lists; the code of a label is its position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMap {
    pub columns: Vec<ColumnLabels>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnLabels {
    pub name: String,
    pub labels: Vec<String>,
}

impl LabelMap {
    pub fn write_json(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        serde_json::to_writer_pretty(file, self)?;
        Ok(())
    }
}

/// An immutable table of category codes, stored column-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    variables: Vec<Variable>,
    columns: Vec<Vec<u32>>,
    n_samples: usize,
    labels: Option<LabelMap>,
}

impl Dataset {
    /// Validates and wraps columns of codes.
    pub fn new(variables: Vec<Variable>, columns: Vec<Vec<u32>>) -> Result<Self> {
        if variables.len() != columns.len() {
            return Err(Error::out_of_range(
                "columns",
                format!("{} variables but {} columns", variables.len(), columns.len()),
            ));
        }
        let n_samples = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != n_samples) {
            return Err(Error::UnequalColumns);
        }
        let mut seen = HashSet::new();
        for v in &variables {
            if !seen.insert(v.name.as_str()) {
                return Err(Error::DuplicateColumn(v.name.clone()));
            }
        }
        for (v, col) in variables.iter().zip(&columns) {
            if let Some(&code) = col.iter().find(|&&c| c >= v.cardinality) {
                return Err(Error::CodeOutOfRange {
                    name: v.name.clone(),
                    code,
                    cardinality: v.cardinality,
                });
            }
        }
        Ok(Self {
            variables,
            columns,
            n_samples,
            labels: None,
        })
    }

    /// Infers each cardinality as `max code + 1` (1 for an empty column).
    pub fn from_columns(names: Vec<String>, columns: Vec<Vec<u32>>) -> Result<Self> {
        let variables = names
            .into_iter()
            .zip(&columns)
            .map(|(name, col)| Variable {
                name,
                cardinality: col.iter().max().map_or(1, |m| m + 1),
            })
            .collect();
        Self::new(variables, columns)
    }

    pub fn load(path: &Path, options: &LoadOptions) -> Result<Self> {
        let mut text = String::new();
        File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(|e| Error::io(path, e))?;
        Self::parse(&text, options)
    }

    pub fn parse(text: &str, options: &LoadOptions) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(options.delimiter.byte())
            .has_headers(false)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut records = reader.records();

        let mut names: Option<Vec<String>> = None;
        if options.header {
            match records.next() {
                Some(rec) => names = Some(rec?.iter().map(|s| s.trim().to_string()).collect()),
                None => return Err(Error::EmptyFile),
            }
        }

        let mut raw: Vec<Vec<String>> = Vec::new();
        let mut width = names.as_ref().map(Vec::len);
        for (row, rec) in records.enumerate() {
            let rec = rec?;
            let expected = *width.get_or_insert(rec.len());
            if rec.len() != expected {
                return Err(Error::RaggedRows {
                    row,
                    expected,
                    found: rec.len(),
                });
            }
            raw.push(rec.iter().map(|s| s.trim().to_string()).collect());
        }
        if raw.is_empty() {
            return Err(Error::EmptyFile);
        }
        let n = width.unwrap_or(0);
        let names = names.unwrap_or_else(|| (0..n).map(|j| format!("V{j}")).collect());

        let mut columns = vec![Vec::with_capacity(raw.len()); n];
        let mut label_columns = Vec::new();
        if options.map_labels {
            for (j, name) in names.iter().enumerate() {
                let mut labels = BTreeSet::new();
                for (row, r) in raw.iter().enumerate() {
                    if r[j].is_empty() {
                        return Err(Error::MissingValue { row, column: j });
                    }
                    labels.insert(r[j].as_str());
                }
                let index: BTreeMap<&str, u32> = labels.iter().enumerate().map(|(i, &l)| (l, i as u32)).collect();
                columns[j] = raw.iter().map(|r| index[r[j].as_str()]).collect();
                label_columns.push(ColumnLabels {
                    name: name.clone(),
                    labels: labels.into_iter().map(str::to_string).collect(),
                });
            }
        } else {
            for (row, r) in raw.iter().enumerate() {
                for (j, cell) in r.iter().enumerate() {
                    if cell.is_empty() {
                        return Err(Error::MissingValue { row, column: j });
                    }
                    let code = cell.parse::<u32>().map_err(|_| Error::NonIntegerCell {
                        row,
                        column: j,
                        value: cell.clone(),
                    })?;
                    columns[j].push(code);
                }
            }
        }

        let mut ds = Self::from_columns(names, columns)?;
        if let Some(declared) = &options.cardinalities {
            ds = ds.with_cardinalities(declared)?;
        }
        if options.map_labels {
            ds.labels = Some(LabelMap { columns: label_columns });
        }
        Ok(ds)
    }

    /// Raises cardinalities to the declared values. Never lowers them.
    pub fn with_cardinalities(mut self, declared: &[u32]) -> Result<Self> {
        if declared.len() != self.variables.len() {
            return Err(Error::out_of_range(
                "cardinalities",
                format!("{} given for {} variables", declared.len(), self.variables.len()),
            ));
        }
        for (v, &d) in self.variables.iter_mut().zip(declared) {
            if d < v.cardinality {
                return Err(Error::CardinalityTooSmall {
                    name: v.name.clone(),
                    declared: d,
                    observed: v.cardinality,
                });
            }
            v.cardinality = d;
        }
        Ok(self)
    }

    pub fn write(&self, path: &Path, delimiter: Delimiter, header: bool) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_to(file, delimiter, header)
    }

    pub fn write_to<W: Write>(&self, out: W, delimiter: Delimiter, header: bool) -> Result<()> {
        let mut w = csv::WriterBuilder::new().delimiter(delimiter.byte()).from_writer(out);
        if header {
            w.write_record(self.variables.iter().map(|v| v.name.as_str()))?;
        }
        let mut record = Vec::with_capacity(self.n_vars());
        for row in 0..self.n_samples {
            record.clear();
            record.extend(self.columns.iter().map(|c| c[row].to_string()));
            w.write_record(&record)?;
        }
        w.flush().map_err(|e| Error::io("<dataset output>", e))?;
        Ok(())
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn labels(&self) -> Option<&LabelMap> {
        self.labels.as_ref()
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.columns[j]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub(crate) fn check_subset(&self, subset: &VariableSubset) -> Result<()> {
        let max = subset.max_index();
        if max >= self.n_vars() {
            return Err(Error::IndexOutOfRange {
                index: max,
                n: self.n_vars(),
            });
        }
        Ok(())
    }

    /// One tuple per sample, members in ascending index order.
    pub fn column_view(&self, subset: &VariableSubset) -> Result<Vec<Vec<u32>>> {
        self.check_subset(subset)?;
        let cols: Vec<&[u32]> = subset.iter().map(|j| self.column(j)).collect();
        Ok((0..self.n_samples)
            .map(|row| cols.iter().map(|c| c[row]).collect())
            .collect())
    }

    /// A new dataset holding the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        Dataset {
            variables: self.variables.clone(),
            columns: self
                .columns
                .iter()
                .map(|c| rows.iter().map(|&r| c[r]).collect())
                .collect(),
            n_samples: rows.len(),
            labels: self.labels.clone(),
        }
    }

    /// Rows `start..end`.
    pub fn slice_rows(&self, start: usize, end: usize) -> Dataset {
        let rows: Vec<usize> = (start..end.min(self.n_samples)).collect();
        self.select_rows(&rows)
    }

    /// Replaces one column, keeping the declared cardinality.
    pub fn with_column(&self, j: usize, values: Vec<u32>) -> Result<Dataset> {
        let mut columns = self.columns.clone();
        columns[j] = values;
        let mut ds = Dataset::new(self.variables.clone(), columns)?;
        ds.labels = self.labels.clone();
        Ok(ds)
    }

    pub(crate) fn columns_mut(&mut self) -> &mut [Vec<u32>] {
        &mut self.columns
    }

    /// SHA-256 over names, cardinalities and codes, as lowercase hex.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.n_samples as u64).to_le_bytes());
        for (v, col) in self.variables.iter().zip(&self.columns) {
            h.update((v.name.len() as u64).to_le_bytes());
            h.update(v.name.as_bytes());
            h.update(v.cardinality.to_le_bytes());
            for &c in col {
                h.update(c.to_le_bytes());
            }
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(header: bool) -> LoadOptions {
        LoadOptions {
            header,
            ..Default::default()
        }
    }

    #[test]
    fn parses_header_and_infers_cardinality() {
        let ds = Dataset::parse("A,B\n0,1\n1,1\n", &opts(true)).unwrap();
        assert_eq!(ds.n_vars(), 2);
        assert_eq!(ds.n_samples(), 2);
        assert_eq!(ds.variables()[0].cardinality, 2);
        assert_eq!(ds.variables()[1].cardinality, 2);
        assert_eq!(ds.variables()[1].name, "B");
    }

    #[test]
    fn constant_column() {
        let ds = Dataset::parse("0\n0\n0\n0\n0\n", &opts(false)).unwrap();
        assert_eq!(ds.n_vars(), 1);
        assert_eq!(ds.n_samples(), 5);
        assert_eq!(ds.variables()[0].cardinality, 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Dataset::parse("0,1,2\n0,1,2,3\n", &opts(false)),
            Err(Error::RaggedRows { .. })
        ));
        assert!(matches!(Dataset::parse("", &opts(false)), Err(Error::EmptyFile)));
        assert!(matches!(Dataset::parse("A,B\n", &opts(true)), Err(Error::EmptyFile)));
        assert!(matches!(
            Dataset::parse("0,x\n", &opts(false)),
            Err(Error::NonIntegerCell { column: 1, .. })
        ));
        assert!(matches!(
            Dataset::parse("0,-1\n", &opts(false)),
            Err(Error::NonIntegerCell { .. })
        ));
        assert!(matches!(
            Dataset::parse("A,A\n0,1\n", &opts(true)),
            Err(Error::DuplicateColumn(_))
        ));
        assert!(matches!(
            Dataset::parse("0,\n1,1\n", &opts(false)),
            Err(Error::MissingValue { row: 0, column: 1 })
        ));
    }

    #[test]
    fn label_mapping_is_sorted_and_dense() {
        let options = LoadOptions {
            header: true,
            map_labels: true,
            ..Default::default()
        };
        let ds = Dataset::parse("G,P\nhigh,yes\nlow,no\nhigh,no\n", &options).unwrap();
        assert_eq!(ds.column(0), &[0, 1, 0]);
        assert_eq!(ds.column(1), &[1, 0, 0]);
        let labels = ds.labels().unwrap();
        assert_eq!(labels.columns[0].labels, vec!["high", "low"]);
    }

    #[test]
    fn declared_cardinality_may_only_grow() {
        let ds = Dataset::parse("0\n1\n", &opts(false)).unwrap();
        let grown = ds.clone().with_cardinalities(&[4]).unwrap();
        assert_eq!(grown.variables()[0].cardinality, 4);
        assert!(matches!(
            ds.with_cardinalities(&[1]),
            Err(Error::CardinalityTooSmall { .. })
        ));
    }

    #[test]
    fn column_view_tuples() {
        let ds = Dataset::parse("A,B\n0,1\n1,1\n", &opts(true)).unwrap();
        let ab = VariableSubset::from_indices([1, 0]).unwrap();
        assert_eq!(ds.column_view(&ab).unwrap(), vec![vec![0, 1], vec![1, 1]]);
        let b = VariableSubset::singleton(1);
        assert_eq!(ds.column_view(&b).unwrap(), vec![vec![1], vec![1]]);
        assert!(matches!(
            ds.column_view(&VariableSubset::singleton(2)),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn tsv_and_roundtrip() {
        let options = LoadOptions {
            delimiter: Delimiter::Tsv,
            header: true,
            ..Default::default()
        };
        let ds = Dataset::parse("X\tY\n3\t0\n1\t2\n", &options).unwrap();
        let mut buf = Vec::new();
        ds.write_to(&mut buf, Delimiter::Tsv, true).unwrap();
        let again = Dataset::parse(std::str::from_utf8(&buf).unwrap(), &options).unwrap();
        assert_eq!(ds, again);
        assert_eq!(ds.fingerprint(), again.fingerprint());
    }
}
