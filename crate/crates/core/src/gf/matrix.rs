use std::fmt;

use super::{FieldSpec, GfError};

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FieldMatrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        FieldMatrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(field: &FieldSpec, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self, GfError> {
        if data.len() != rows * cols {
            return Err(GfError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&value) = data.iter().find(|&&v| !field.contains(v)) {
            return Err(GfError::OutOfRange { value, order: field.order() });
        }
        Ok(FieldMatrix { field: field.clone(), rows, cols, data })
    }

    /// Builds from nested rows. An empty slice gives a 0x0 matrix.
    pub fn from_rows<R: AsRef<[u32]>>(field: &FieldSpec, rows: &[R]) -> Result<Self, GfError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(GfError::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::from_vec(field, rows.len(), cols, data)
    }

    /// Column vector.
    pub fn column(field: &FieldSpec, values: &[u32]) -> Result<Self, GfError> {
        Self::from_vec(field, values.len(), 1, values.to_vec())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        assert!(self.field.contains(v), "{v} is not an element of {}", self.field);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn check_field(&self, other: &Self) -> Result<(), GfError> {
        if self.field != other.field {
            return Err(GfError::FieldMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, GfError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(GfError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d = f.add(*d, f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[u32]) -> Result<Vec<u32>, GfError> {
        if x.len() != self.cols {
            return Err(GfError::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self, GfError> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(GfError::DimensionMismatch(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.field.add(a, b)).collect();
        Ok(FieldMatrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    /// Rows picked by index, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        FieldMatrix { field: self.field.clone(), rows: idx.len(), cols: self.cols, data }
    }

    pub fn rank(&self) -> usize {
        let mut work = self.data.clone();
        reduce(&self.field, &mut work, self.rows, self.cols, self.cols).len()
    }

    /// Indices of the first maximal linearly independent set of rows, found
    /// by scanning rows top to bottom and keeping each one that is not in the
    /// span of those already kept.
    pub fn independent_rows(&self) -> Vec<usize> {
        let f = &self.field;
        // basis rows kept in echelon form, each tagged with its pivot column
        let mut basis: Vec<(usize, Vec<u32>)> = Vec::new();
        let mut kept = Vec::new();
        for i in 0..self.rows {
            let mut r = self.row(i).to_vec();
            for (p, b) in &basis {
                let c = r[*p];
                if c != 0 {
                    for (x, &y) in r.iter_mut().zip(b) {
                        *x = f.sub(*x, f.mul(c, y));
                    }
                }
            }
            if let Some(p) = r.iter().position(|&v| v != 0) {
                let inv = f.inv(r[p]).expect("pivot is nonzero");
                r.iter_mut().for_each(|v| *v = f.mul(*v, inv));
                basis.push((p, r));
                kept.push(i);
            }
        }
        kept
    }

    /// Solves `self * x = y` for `x` when `self` has full column rank.
    /// `y` may carry several right-hand sides as columns.
    pub fn solve(&self, y: &Self) -> Result<Self, GfError> {
        self.check_field(y)?;
        if y.rows != self.rows {
            return Err(GfError::DimensionMismatch(format!(
                "{}x{} system with {} right-hand rows",
                self.rows, self.cols, y.rows
            )));
        }
        let n = self.cols;
        let width = n + y.cols;
        let mut aug = Vec::with_capacity(self.rows * width);
        for i in 0..self.rows {
            aug.extend_from_slice(self.row(i));
            aug.extend_from_slice(y.row(i));
        }
        let pivots = reduce(&self.field, &mut aug, self.rows, width, n);
        if pivots.len() < n {
            return Err(GfError::RankDeficient { rank: pivots.len(), cols: n });
        }
        if aug[n * width..].iter().any(|&v| v != 0) {
            return Err(GfError::InconsistentSystem);
        }
        let mut data = Vec::with_capacity(n * y.cols);
        for i in 0..n {
            data.extend_from_slice(&aug[i * width + n..(i + 1) * width]);
        }
        Ok(FieldMatrix { field: self.field.clone(), rows: n, cols: y.cols, data })
    }

    pub fn solve_vec(&self, y: &[u32]) -> Result<Vec<u32>, GfError> {
        let y = Self::column(&self.field, y)?;
        Ok(self.solve(&y)?.data)
    }
}

/// Gauss-Jordan elimination in place on a `rows x width` buffer, choosing
/// pivots only among the first `pivot_cols` columns. The pivot for each
/// column is the first row at or below the current one with a nonzero
/// entry. Returns the pivot columns; pivot rows end up at the top.
fn reduce(f: &FieldSpec, a: &mut [u32], rows: usize, width: usize, pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| a[i * width + c] != 0) else {
            continue;
        };
        if p != r {
            for k in 0..width {
                a.swap(p * width + k, r * width + k);
            }
        }
        let inv = f.inv(a[r * width + c]).expect("pivot is nonzero");
        for k in c..width {
            a[r * width + k] = f.mul(a[r * width + k], inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[i * width + c];
            if factor == 0 {
                continue;
            }
            for k in c..width {
                let v = f.mul(factor, a[r * width + k]);
                a[i * width + k] = f.sub(a[i * width + k], v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {}", self.rows, self.cols, self.field)?;
        write!(f, "{self}")
    }
}

/// Column-aligned plain text, one row per line.
impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.data.iter().map(|v| v.to_string().len()).max().unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v:>width$}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
