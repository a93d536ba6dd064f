//! Feature matrices, the four dissimilarity measures, pairwise distance
//! matrices and column standardization.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{mean, squared_euclidean, Scalar};

/// An `n x p` table of entities (rows) by variables (columns), stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix<T> {
    values: Vec<T>,
    n_rows: usize,
    n_cols: usize,
    row_ids: Vec<String>,
    column_names: Vec<String>,
}

impl<T: Scalar> FeatureMatrix<T> {
    pub fn new(rows: Vec<Vec<T>>, row_ids: Vec<String>, column_names: Vec<String>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = column_names.len();
        if n_rows < 2 {
            return Err(Error::InvalidMatrix(format!(
                "need at least 2 rows, got {n_rows}"
            )));
        }
        if n_cols < 1 {
            return Err(Error::InvalidMatrix("need at least 1 column".into()));
        }
        if row_ids.len() != n_rows {
            return Err(Error::InvalidMatrix(format!(
                "{} row ids for {n_rows} rows",
                row_ids.len()
            )));
        }
        check_unique(&row_ids, "row id")?;
        check_unique(&column_names, "column name")?;

        let mut values = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} values, expected {n_cols}",
                    row_ids[i],
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidMatrix(format!(
                    "non-finite value at row {}, column {}",
                    row_ids[i], column_names[j]
                )));
            }
            values.extend(row);
        }
        Ok(Self {
            values,
            n_rows,
            n_cols,
            row_ids,
            column_names,
        })
    }

    /// Builds a matrix with generated identifiers `r0..`, `c0..`.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        let row_ids = (0..n).map(|i| format!("r{i}")).collect();
        let column_names = (0..p).map(|j| format!("c{j}")).collect();
        Self::new(rows, row_ids, column_names)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.values.chunks_exact(self.n_cols)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.n_cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.n_rows).map(|i| self.get(i, j)).collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.column_names.iter().position(|c| c == name)
    }

    pub fn column_by_name(&self, name: &str) -> Option<Vec<T>> {
        self.column_index(name).map(|j| self.column(j))
    }

    /// Keeps only the named columns, in the order given.
    pub fn select_columns(&self, names: &[String]) -> Result<Self> {
        let idx = names
            .iter()
            .map(|name| {
                self.column_index(name)
                    .ok_or_else(|| Error::InvalidMatrix(format!("unknown column: {name}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let rows = self
            .rows()
            .map(|row| idx.iter().map(|&j| row[j]).collect())
            .collect();
        Self::new(rows, self.row_ids.clone(), names.to_vec())
    }

    /// Copies the rows at `indices` (in that order).
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        let rows = indices.iter().map(|&i| self.row(i).to_vec()).collect();
        let ids = indices.iter().map(|&i| self.row_ids[i].clone()).collect();
        Self::new(rows, ids, self.column_names.clone())
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows().map(<[T]>::to_vec).collect()
    }
}

fn check_unique(names: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::with_capacity(names.len());
    for name in names {
        if !seen.insert(name.as_str()) {
            return Err(Error::InvalidMatrix(format!("duplicate {what}: {name}")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMetric {
    Euclidean,
    Manhattan,
    Canberra,
    /// `1 - r` with `r` the Pearson correlation of the two vectors.
    Pearson,
}

impl DistanceMetric {
    pub const ALL: [DistanceMetric; 4] = [
        DistanceMetric::Euclidean,
        DistanceMetric::Manhattan,
        DistanceMetric::Canberra,
        DistanceMetric::Pearson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistanceMetric::Euclidean => "euclidean",
            DistanceMetric::Manhattan => "manhattan",
            DistanceMetric::Canberra => "canberra",
            DistanceMetric::Pearson => "pearson",
        }
    }
}

impl fmt::Display for DistanceMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistanceMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" => Ok(DistanceMetric::Euclidean),
            "manhattan" => Ok(DistanceMetric::Manhattan),
            "canberra" => Ok(DistanceMetric::Canberra),
            "pearson" => Ok(DistanceMetric::Pearson),
            other => Err(Error::InvalidParameter(format!("unknown metric: {other}"))),
        }
    }
}

/// Dissimilarity between two equal-length vectors.
pub fn distance<T: Scalar>(a: &[T], b: &[T], metric: DistanceMetric) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::TooShort {
            required: 1,
            actual: 0,
        });
    }
    let value = match metric {
        DistanceMetric::Euclidean => squared_euclidean(a, b).sqrt(),
        DistanceMetric::Manhattan => a.iter().zip(b).map(|(&x, &y)| (x - y).abs()).sum(),
        DistanceMetric::Canberra => a
            .iter()
            .zip(b)
            .map(|(&x, &y)| {
                let denom = x.abs() + y.abs();
                // 0/0 contributes nothing
                if denom == T::zero() {
                    T::zero()
                } else {
                    (x - y).abs() / denom
                }
            })
            .sum(),
        DistanceMetric::Pearson => {
            if a.len() < 2 {
                return Err(Error::TooShort {
                    required: 2,
                    actual: a.len(),
                });
            }
            let r = centered_correlation(a, b)?;
            if a == b {
                T::zero()
            } else {
                T::one() - r
            }
        }
    };
    Ok(value)
}

/// Pearson correlation via centered sums; symmetric in its arguments.
pub(crate) fn centered_correlation<T: Scalar>(a: &[T], b: &[T]) -> Result<T> {
    let ma = mean(a);
    let mb = mean(b);
    let (mut sab, mut saa, mut sbb) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in a.iter().zip(b) {
        let dx = x - ma;
        let dy = y - mb;
        sab = sab + dx * dy;
        saa = saa + dx * dx;
        sbb = sbb + dy * dy;
    }
    if saa == T::zero() {
        return Err(Error::ConstantInput("first"));
    }
    if sbb == T::zero() {
        return Err(Error::ConstantInput("second"));
    }
    let r = sab / (saa * sbb).sqrt();
    Ok(r.max(-T::one()).min(T::one()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Rows,
    Columns,
}

/// Symmetric `n x n` dissimilarity table with zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix<T> {
    values: Vec<T>,
    n: usize,
    metric: DistanceMetric,
    ids: Vec<String>,
}

impl<T: Scalar> DistanceMatrix<T> {
    /// Wraps a full row-major matrix after checking symmetry, zero diagonal
    /// and non-negativity.
    pub fn from_full(rows: Vec<Vec<T>>, metric: DistanceMetric, ids: Vec<String>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::InvalidMatrix(format!(
                "need at least 2 entities, got {n}"
            )));
        }
        if ids.len() != n {
            return Err(Error::InvalidMatrix(format!(
                "{} ids for {n} entities",
                ids.len()
            )));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("distance matrix is not square".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row[i] != T::zero() {
                return Err(Error::InvalidMatrix(format!("nonzero diagonal at {i}")));
            }
            for (j, &v) in row.iter().enumerate() {
                if !(v >= T::zero()) || !v.is_finite() {
                    return Err(Error::InvalidMatrix(format!("invalid entry at ({i}, {j})")));
                }
                if v != rows[j][i] {
                    return Err(Error::InvalidMatrix(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self {
            values: rows.into_iter().flatten().collect(),
            n,
            metric,
            ids,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn metric(&self) -> DistanceMetric {
        self.metric
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.values
            .chunks_exact(self.n)
            .map(<[T]>::to_vec)
            .collect()
    }

    /// Largest off-diagonal entry.
    pub fn max_distance(&self) -> T {
        self.values.iter().copied().fold(T::zero(), T::max)
    }

    /// Restriction to the given entities, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        let values = indices
            .iter()
            .flat_map(|&i| indices.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Self {
            values,
            n: indices.len(),
            metric: self.metric,
            ids: indices.iter().map(|&i| self.ids[i].clone()).collect(),
        }
    }
}

/// Pairwise distances between the rows (entities) or columns (variables) of `x`.
pub fn distance_matrix<T: Scalar>(
    x: &FeatureMatrix<T>,
    metric: DistanceMetric,
    axis: Axis,
) -> Result<DistanceMatrix<T>> {
    let (vectors, ids): (Vec<Vec<T>>, Vec<String>) = match axis {
        Axis::Rows => (x.to_rows(), x.row_ids().to_vec()),
        Axis::Columns => {
            if x.n_cols() < 2 {
                return Err(Error::InvalidMatrix(
                    "column distances need at least 2 columns".into(),
                ));
            }
            (
                (0..x.n_cols()).map(|j| x.column(j)).collect(),
                x.column_names().to_vec(),
            )
        }
    };
    let n = vectors.len();
    let mut values = vec![T::zero(); n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = distance(&vectors[i], &vectors[j], metric).map_err(|e| Error::Pair {
                left: ids[i].clone(),
                right: ids[j].clone(),
                source: Box::new(e),
            })?;
            values[i * n + j] = d;
            values[j * n + i] = d;
        }
    }
    Ok(DistanceMatrix {
        values,
        n,
        metric,
        ids,
    })
}

/// Centers each column and scales it to unit sample standard deviation.
pub fn standardize<T: Scalar>(x: &FeatureMatrix<T>) -> Result<FeatureMatrix<T>> {
    let n = x.n_rows();
    let mut stats = Vec::with_capacity(x.n_cols());
    for j in 0..x.n_cols() {
        let col = x.column(j);
        let m = mean(&col);
        let var = col.iter().map(|&v| (v - m) * (v - m)).sum::<T>() / T::from_count(n - 1);
        if var == T::zero() {
            return Err(Error::ZeroVariance(x.column_names()[j].clone()));
        }
        stats.push((m, var.sqrt()));
    }
    let rows = x
        .rows()
        .map(|row| {
            row.iter()
                .zip(&stats)
                .map(|(&v, &(m, sd))| (v - m) / sd)
                .collect()
        })
        .collect();
    FeatureMatrix::new(rows, x.row_ids().to_vec(), x.column_names().to_vec())
}
