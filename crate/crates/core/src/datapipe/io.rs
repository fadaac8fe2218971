//! Delimited-text formats.
//!
//! Labels: `example_id,class_name` per row, with an optional `id,label`
//! header. Predictions: a mandatory header `example_id,p_<class0>,...`
//! followed by one probability vector per row. Numbers are written with the
//! shortest representation that parses back to the same value.

use std::io::{Read, Write};

use super::LabelTable;
use crate::ensemble::{normalize_probabilities, PredictionSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn reader<R: Read>(source: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source)
}

fn line_of(rec: &csv::StringRecord) -> u64 {
    rec.position().map(|p| p.line()).unwrap_or(0)
}

fn is_blank(rec: &csv::StringRecord) -> bool {
    rec.iter().all(str::is_empty)
}

/// Reads a label table. With `classes` given, rows naming any other class
/// are rejected and the class order is taken from `classes`.
pub fn load_labels<R: Read>(source: R, classes: Option<&[String]>) -> Result<LabelTable> {
    let mut table = LabelTable::with_classes(classes.map(<[String]>::to_vec).unwrap_or_default());
    let fixed = classes.is_some();
    let mut first = true;
    for rec in reader(source).records() {
        let rec = rec?;
        if is_blank(&rec) {
            continue;
        }
        let line = line_of(&rec);
        if std::mem::take(&mut first)
            && rec.len() == 2
            && rec[0].eq_ignore_ascii_case("id")
            && rec[1].eq_ignore_ascii_case("label")
        {
            continue;
        }
        if rec.len() != 2 {
            return Err(Error::parse(line, format!("expected 'example_id,class', found {} fields", rec.len())));
        }
        table
            .push(rec[0].to_string(), &rec[1], fixed)
            .map_err(|e| Error::parse(line, e.to_string()))?;
    }
    if table.is_empty() {
        return Err(Error::Empty("label table has no rows".into()));
    }
    Ok(table)
}

pub fn write_labels<W: Write>(table: &LabelTable, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["id", "label"])?;
    for (id, c) in table.iter() {
        w.write_record([id, table.class_names()[c.get()].as_str()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads one model's predictions for the examples of `labels`.
///
/// The header must name the label classes in order. Each vector is checked
/// and renormalised; ids not present in `labels` are rejected.
pub fn load_predictions<T: Scalar, R: Read>(
    source: R,
    model_id: &str,
    labels: &LabelTable,
) -> Result<PredictionSet<T>> {
    let n = labels.n_classes();
    let mut rdr = reader(source);
    let mut records = rdr.records();
    let header = loop {
        match records.next() {
            None => return Err(Error::Empty("prediction file has no header".into())),
            Some(rec) => {
                let rec = rec?;
                if !is_blank(&rec) {
                    break rec;
                }
            }
        }
    };
    let expected: Vec<String> = labels.class_names().iter().map(|c| format!("p_{c}")).collect();
    if header.len() != n + 1 || header.iter().skip(1).ne(expected.iter().map(String::as_str)) {
        return Err(Error::parse(
            line_of(&header),
            format!("header must be 'example_id,{}'", expected.join(",")),
        ));
    }

    let mut rows = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for rec in records {
        let rec = rec?;
        if is_blank(&rec) {
            continue;
        }
        let line = line_of(&rec);
        if rec.len() != n + 1 {
            return Err(Error::parse(line, format!("expected {} fields, found {}", n + 1, rec.len())));
        }
        let id = rec[0].to_string();
        if !labels.contains(&id) {
            return Err(Error::Alignment(format!("line {line}: example '{id}' is not in the label table")));
        }
        if !seen.insert(id.clone()) {
            return Err(Error::parse(line, format!("duplicate example id '{id}'")));
        }
        let mut v = Vec::with_capacity(n);
        for field in rec.iter().skip(1) {
            let x: f64 = field
                .parse()
                .map_err(|_| Error::parse(line, format!("'{field}' is not a number")))?;
            v.push(T::lit(x));
        }
        normalize_probabilities(&mut v, n).map_err(|m| Error::parse(line, m))?;
        rows.push((id, v));
    }
    if rows.is_empty() {
        return Err(Error::Empty("prediction file has no rows".into()));
    }
    PredictionSet::new(model_id, labels.class_names().to_vec(), rows)
}

pub fn write_predictions<T: Scalar, W: Write>(set: &PredictionSet<T>, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    let mut header = vec!["example_id".to_string()];
    header.extend(set.class_names().iter().map(|c| format!("p_{c}")));
    w.write_record(&header)?;
    for (id, v) in set.entries() {
        let mut row = Vec::with_capacity(v.len() + 1);
        row.push(id.clone());
        row.extend(v.iter().map(|p| p.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
