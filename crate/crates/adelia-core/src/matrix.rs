//! Dense matrices of exact scalars. Row convention throughout: matrices act
//! on row vectors from the right, so a map with matrix M sends x to x*M.

use crate::scalar::{Scalar, ScalarFamily};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub family: ScalarFamily,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(family: ScalarFamily, rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, family, data: vec![Scalar::zero(family); rows * cols] }
    }

    pub fn identity(family: ScalarFamily, n: usize) -> Mat {
        let mut m = Mat::zeros(family, n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one(family);
        }
        m
    }

    pub fn from_rows(family: ScalarFamily, rows: Vec<Vec<Scalar>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            for x in row {
                assert_eq!(x.family(), family, "entry family mismatch");
                data.push(x);
            }
        }
        Mat { rows: r, cols: c, family, data }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(
            ScalarFamily::Rational,
            rows.iter()
                .map(|r| r.iter().map(|&n| Scalar::from_int(n)).collect())
                .collect(),
        )
    }

    pub fn diagonal(family: ScalarFamily, entries: &[Scalar]) -> Mat {
        let n = entries.len();
        let mut m = Mat::zeros(family, n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Scalar> {
        self.row(i).to_vec()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zeros(self.family, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "dimension mismatch in matrix product");
        let mut out = Mat::zeros(self.family, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&o.data) {
            *a = a.add(b);
        }
        out
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&o.data) {
            *a = a.sub(b);
        }
        out
    }

    pub fn neg(&self) -> Mat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.neg();
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.mul(c);
        }
        out
    }

    /// Vertical stack: self on top of other.
    pub fn vstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Mat { rows: self.rows + o.rows, cols: self.cols, family: self.family, data }
    }

    /// Horizontal stack: self to the left of other.
    pub fn hstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.rows, o.rows, "row mismatch in hstack");
        let mut m = Mat::zeros(self.family, self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..o.cols {
                m[(i, self.cols + j)] = o[(i, j)].clone();
            }
        }
        m
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, o: &Mat) -> Mat {
        let mut m = Mat::zeros(self.family, self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                m[(self.rows + i, self.cols + j)] = o[(i, j)].clone();
            }
        }
        m
    }

    pub fn submatrix_cols(&self, range: std::ops::Range<usize>) -> Mat {
        let mut m = Mat::zeros(self.family, self.rows, range.len());
        for i in 0..self.rows {
            for (jj, j) in range.clone().enumerate() {
                m[(i, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Determinant by fraction-field Gaussian elimination; exact.
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one(self.family);
        for k in 0..n {
            let pivot_row = (k..n).find(|&i| !m[(i, k)].is_zero());
            let Some(pr) = pivot_row else {
                return Scalar::zero(self.family);
            };
            if pr != k {
                m.swap_rows(pr, k);
                det = det.neg();
            }
            let pivot = m[(k, k)].clone();
            det = det.mul(&pivot);
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = m[(i, k)].div(&pivot).unwrap();
                for j in k..n {
                    let sub = f.mul(&m[(k, j)]);
                    m[(i, j)] = m[(i, j)].sub(&sub);
                }
            }
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Exact serialization: rows of decimal strings ("3", "-5/7", "t^2+1").
pub fn mat_to_json(m: &Mat) -> serde_json::Value {
    serde_json::Value::Array(
        m.rows_iter()
            .map(|row| {
                serde_json::Value::Array(
                    row.iter()
                        .map(|x| serde_json::Value::String(x.to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_det() {
        let a = Mat::from_int_rows(&[&[1, 2], &[3, 4]]);
        let b = Mat::from_int_rows(&[&[0, 1], &[1, 0]]);
        let ab = a.mul(&b);
        assert_eq!(ab, Mat::from_int_rows(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.det(), Scalar::from_int(-2));
        assert_eq!(b.det(), Scalar::from_int(-1));
    }

    #[test]
    fn stacking() {
        let a = Mat::from_int_rows(&[&[1, 2]]);
        let b = Mat::from_int_rows(&[&[3, 4]]);
        assert_eq!(a.vstack(&b), Mat::from_int_rows(&[&[1, 2], &[3, 4]]));
        assert_eq!(a.hstack(&b), Mat::from_int_rows(&[&[1, 2, 3, 4]]));
    }
}
