use crate::{Error, Result};

/// Rows of a dense block followed by a sparse block.
///
/// Feature ids `0..dense_dim` address the dense block, which is multiplied by
/// `dense_scale` on the fly; ids `dense_dim..dense_dim + sparse_dim` address
/// the sparse block. Sparse rows are stored once and never densified.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    rows: usize,
    dense_dim: usize,
    dense: Vec<f64>,
    dense_scale: f64,
    sparse_dim: usize,
    sparse_ptr: Vec<usize>,
    sparse: Vec<(u32, f64)>,
    labels: Option<Vec<bool>>,
}

/// Borrowed view of one row.
#[derive(Debug, Clone, Copy)]
pub struct Row<'a> {
    pub dense: &'a [f64],
    pub dense_scale: f64,
    /// `(id, value)` pairs with ids local to the sparse block.
    pub sparse: &'a [(u32, f64)],
}

impl<'a> Row<'a> {
    pub fn dense(values: &'a [f64]) -> Self {
        Row {
            dense: values,
            dense_scale: 1.0,
            sparse: &[],
        }
    }
}

impl FeatureMatrix {
    /// Dense rows only; `data` is row-major.
    pub fn dense(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Self::from_parts(0, Vec::new(), 0, vec![Vec::new(); data.len()]);
        }
        let rows = data.len() / dim;
        Self::from_parts(dim, data, 0, vec![Vec::new(); rows])
    }

    pub fn sparse(dim: usize, rows: Vec<Vec<(u32, f64)>>) -> Result<Self> {
        Self::from_parts(0, Vec::new(), dim, rows)
    }

    /// Concatenation `dense ‖ sparse` per row. `sparse_rows.len()` fixes the
    /// row count.
    pub fn from_parts(
        dense_dim: usize,
        dense: Vec<f64>,
        sparse_dim: usize,
        sparse_rows: Vec<Vec<(u32, f64)>>,
    ) -> Result<Self> {
        let rows = sparse_rows.len();
        if dense.len() != rows * dense_dim {
            return Err(Error::DimensionMismatch {
                expected: rows * dense_dim,
                actual: dense.len(),
            });
        }
        let mut sparse_ptr = Vec::with_capacity(rows + 1);
        sparse_ptr.push(0);
        let mut sparse = Vec::with_capacity(sparse_rows.iter().map(Vec::len).sum());
        for mut row in sparse_rows {
            row.sort_by_key(|e| e.0);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidArgument("duplicate sparse feature id".into()));
            }
            if let Some(&(id, _)) = row.last() {
                if id as usize >= sparse_dim {
                    return Err(Error::DimensionMismatch {
                        expected: sparse_dim,
                        actual: id as usize + 1,
                    });
                }
            }
            sparse.extend(row);
            sparse_ptr.push(sparse.len());
        }
        if dense.iter().chain(sparse.iter().map(|e| &e.1)).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("feature values".into()));
        }
        Ok(FeatureMatrix {
            rows,
            dense_dim,
            dense,
            dense_scale: 1.0,
            sparse_dim,
            sparse_ptr,
            sparse,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<bool>) -> Result<Self> {
        if labels.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                actual: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_dense_scale(mut self, scale: f64) -> Result<Self> {
        self.set_dense_scale(scale)?;
        Ok(self)
    }

    pub fn set_dense_scale(&mut self, scale: f64) -> Result<()> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "scale must be > 0, got {scale}"
            )));
        }
        self.dense_scale = scale;
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Total feature dimension.
    pub fn dim(&self) -> usize {
        self.dense_dim + self.sparse_dim
    }

    pub fn dense_dim(&self) -> usize {
        self.dense_dim
    }

    pub fn sparse_dim(&self) -> usize {
        self.sparse_dim
    }

    pub fn dense_scale(&self) -> f64 {
        self.dense_scale
    }

    pub fn labels(&self) -> Option<&[bool]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn row(&self, i: usize) -> Row<'_> {
        Row {
            dense: &self.dense[i * self.dense_dim..(i + 1) * self.dense_dim],
            dense_scale: self.dense_scale,
            sparse: &self.sparse[self.sparse_ptr[i]..self.sparse_ptr[i + 1]],
        }
    }

    /// Rows `indices` (with their labels) in the given order.
    pub fn select(&self, indices: &[usize]) -> FeatureMatrix {
        let mut dense = Vec::with_capacity(indices.len() * self.dense_dim);
        let mut sparse_ptr = Vec::with_capacity(indices.len() + 1);
        sparse_ptr.push(0);
        let mut sparse = Vec::new();
        for &i in indices {
            let r = self.row(i);
            dense.extend_from_slice(r.dense);
            sparse.extend_from_slice(r.sparse);
            sparse_ptr.push(sparse.len());
        }
        FeatureMatrix {
            rows: indices.len(),
            dense_dim: self.dense_dim,
            dense,
            dense_scale: self.dense_scale,
            sparse_dim: self.sparse_dim,
            sparse_ptr,
            sparse,
            labels: self
                .labels
                .as_ref()
                .map(|l| indices.iter().map(|&i| l[i]).collect()),
        }
    }
}
