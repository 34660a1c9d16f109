use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::weight::MaxPlus;

/// Dense max-plus matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaxPlusMatrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<MaxPlus<S>>,
}

impl<S: Scalar> MaxPlusMatrix<S> {
    /// All entries ⊥.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MaxPlusMatrix { rows, cols, entries: vec![MaxPlus::Bottom; rows * cols] }
    }

    /// 𝟙 on the diagonal, ⊥ elsewhere.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, MaxPlus::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<MaxPlus<S>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(MaxPlusMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &MaxPlus<S> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, w: MaxPlus<S>) {
        self.entries[i * self.cols + j] = w;
    }

    pub fn row(&self, i: usize) -> &[MaxPlus<S>] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// (A ⊗ B)_ij = max_k A_ik + B_kj
    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_bottom() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.times(other.get(k, j));
                    let idx = i * out.cols + j;
                    out.entries[idx].plus_assign(prod);
                }
            }
        }
        Ok(out)
    }

    /// Entry-wise ⊕.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(MaxPlusMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.plus(b)).collect(),
        })
    }
}

impl<S: fmt::Display> fmt::Display for MaxPlusMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> =
                self.entries[i * self.cols..(i + 1) * self.cols].iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = MaxPlusMatrix<i64>;

    fn m(rows: &[&[Option<i64>]]) -> M {
        M::from_rows(
            rows.iter().map(|r| r.iter().map(|v| v.map_or(MaxPlus::Bottom, MaxPlus::Finite)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let a = m(&[&[Some(1), None], &[Some(-3), Some(2)]]);
        assert_eq!(M::identity(2).mat_mul(&a).unwrap(), a);
        assert_eq!(a.mat_mul(&M::identity(2)).unwrap(), a);
    }

    #[test]
    fn scalar_product() {
        let a = m(&[&[Some(3)]]);
        let b = m(&[&[Some(4)]]);
        assert_eq!(a.mat_mul(&b).unwrap(), m(&[&[Some(7)]]));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(M::zeros(2, 3).mat_mul(&M::zeros(2, 3)).is_err());
        assert!(M::zeros(2, 3).plus(&M::zeros(3, 2)).is_err());
        assert!(M::from_rows(vec![vec![MaxPlus::Bottom], vec![]]).is_err());
    }
}
