//! Label and prediction tables, their text formats, and the sampling plans
//! built from them (stratified splits and random oversampling).

mod io;
mod oversample;
mod split;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::evalcore::ClassIndex;

pub use io::{load_labels, load_predictions, write_labels, write_predictions};
pub use oversample::{oversample_plan, OversamplePlan};
pub use split::{stratified_split, stratified_split_by_class, Assignment, SplitPlan};

/// Ground-truth class of every example, in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelTable {
    class_names: Vec<String>,
    entries: IndexMap<String, ClassIndex>,
}

impl LabelTable {
    /// Builds a table from `(example_id, class_name)` rows.
    ///
    /// With `classes` given, every row must use one of them; otherwise the
    /// class list is inferred in first-appearance order.
    pub fn from_rows(
        rows: impl IntoIterator<Item = (String, String)>,
        classes: Option<Vec<String>>,
    ) -> Result<Self> {
        let mut table = LabelTable::with_classes(classes.unwrap_or_default());
        let fixed = !table.class_names.is_empty();
        for (id, class) in rows {
            table.push(id, &class, fixed)?;
        }
        if table.is_empty() {
            return Err(Error::Empty("label table has no rows".into()));
        }
        Ok(table)
    }

    pub(crate) fn with_classes(class_names: Vec<String>) -> Self {
        LabelTable {
            class_names,
            entries: IndexMap::new(),
        }
    }

    pub(crate) fn push(&mut self, id: String, class: &str, fixed_classes: bool) -> Result<()> {
        if id.is_empty() {
            return Err(Error::Invalid("empty example id".into()));
        }
        let idx = match self.class_index(class) {
            Some(i) => i,
            None if fixed_classes => {
                return Err(Error::Invalid(format!("unknown class '{class}' for '{id}'")));
            }
            None => {
                self.class_names.push(class.to_string());
                ClassIndex(self.class_names.len() - 1)
            }
        };
        if self.entries.contains_key(&id) {
            return Err(Error::Invalid(format!("duplicate example id '{id}'")));
        }
        self.entries.insert(id, idx);
        Ok(())
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_index(&self, name: &str) -> Option<ClassIndex> {
        self.class_names.iter().position(|c| c == name).map(ClassIndex)
    }

    pub fn class_of(&self, example_id: &str) -> Option<ClassIndex> {
        self.entries.get(example_id).copied()
    }

    pub fn contains(&self, example_id: &str) -> bool {
        self.entries.contains_key(example_id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, ClassIndex)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of examples per class, indexed by class.
    pub fn class_counts(&self) -> Vec<u64> {
        let mut counts = vec![0; self.n_classes()];
        for c in self.entries.values() {
            counts[c.get()] += 1;
        }
        counts
    }

    /// Example ids of class `c`, in table order.
    pub fn members(&self, c: ClassIndex) -> Vec<&str> {
        self.iter().filter(|(_, k)| *k == c).map(|(id, _)| id).collect()
    }

    /// The same labels under new example ids.
    pub fn renamed(&self, mut rename: impl FnMut(&str) -> String) -> Result<Self> {
        let mut out = LabelTable::with_classes(self.class_names.clone());
        for (id, c) in self.iter() {
            let name = self.class_names[c.get()].clone();
            out.push(rename(id), &name, true)?;
        }
        Ok(out)
    }
}
