use num_traits::Zero;

use crate::rational::Rational;

/// Row-sparse matrix of rationals; zero entries are never stored.
///
/// Constructed networks are mostly identity and block-diagonal pieces, so
/// storing only non-zeros keeps deep compositions cheap.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Rational)>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, &Rational::from_integer(1.into()))
    }

    pub fn scaled_identity(n: usize, s: &Rational) -> Self {
        let mut m = Self::zeros(n, n);
        if !s.is_zero() {
            for (i, row) in m.data.iter_mut().enumerate() {
                row.push((i, s.clone()));
            }
        }
        m
    }

    /// From dense rows; every row must have length `cols`.
    pub fn from_dense(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let n = rows.len();
        let data = rows
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged dense matrix");
                r.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Matrix { rows: n, cols, data }
    }

    /// Row vector `1 × n` from entries.
    pub fn row(entries: Vec<Rational>) -> Self {
        let n = entries.len();
        Self::from_dense(vec![entries], n)
    }

    /// Column vector `n × 1` from entries.
    pub fn column(entries: Vec<Rational>) -> Self {
        Self::from_dense(entries.into_iter().map(|e| vec![e]).collect(), 1)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        Self::from_dense(
            (0..rows).map(|i| (0..cols).map(|j| f(i, j)).collect()).collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// Sets entry `(i, j)`; setting zero removes it.
    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) if v.is_zero() => {
                row.remove(k);
            }
            Ok(k) => row[k].1 = v,
            Err(_) if v.is_zero() => {}
            Err(k) => row.insert(k, (j, v)),
        }
    }

    /// Non-zero entries of row `i`, sorted by column.
    pub fn row_entries(&self, i: usize) -> &[(usize, Rational)] {
        &self.data[i]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|i| {
                let mut r = vec![Rational::zero(); self.cols];
                for (j, v) in &self.data[i] {
                    r[*j] = v.clone();
                }
                r
            })
            .collect()
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        let data = self
            .data
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(j, v)| (*j, f(v)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        self.map(|v| v * s)
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Matrix) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// `[self, other]`.
    pub fn hstack(&self, other: &Matrix) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(j, v)| (j + self.cols, v.clone())));
                r
            })
            .collect();
        Matrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    /// Block-diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Matrix) -> Self {
        self.hstack(&Matrix::zeros(self.rows, other.cols))
            .vstack(&Matrix::zeros(other.rows, self.cols).hstack(other))
    }

    /// Assembles a block matrix; `None` blocks are zero. Block shapes must agree
    /// along rows and columns.
    pub fn blocks(grid: &[Vec<Option<&Matrix>>], row_dims: &[usize], col_dims: &[usize]) -> Self {
        let rows: usize = row_dims.iter().sum();
        let cols: usize = col_dims.iter().sum();
        let mut data = vec![Vec::new(); rows];
        let mut r0 = 0;
        for (bi, brow) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, blk) in brow.iter().enumerate() {
                if let Some(m) = blk {
                    assert_eq!((m.rows, m.cols), (row_dims[bi], col_dims[bj]), "block shape");
                    for (i, r) in m.data.iter().enumerate() {
                        data[r0 + i].extend(r.iter().map(|(j, v)| (c0 + j, v.clone())));
                    }
                }
                c0 += col_dims[bj];
            }
            r0 += row_dims[bi];
        }
        Matrix { rows, cols, data }
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Matrix) -> Self {
        assert_eq!(self.cols, other.rows, "product dimension mismatch");
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut acc = vec![Rational::zero(); other.cols];
                for (k, a) in r {
                    for (j, b) in &other.data[*k] {
                        acc[*j] += a * b;
                    }
                }
                acc.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Matrix { rows: self.rows, cols: other.cols, data }
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, x.len(), "apply dimension mismatch");
        self.data
            .iter()
            .map(|r| r.iter().fold(Rational::zero(), |acc, (j, v)| acc + v * &x[*j]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn block_assembly() {
        let i2 = Matrix::identity(2);
        let r = Matrix::row(vec![int(1), int(-1)]);
        let m = Matrix::blocks(&[vec![Some(&i2)], vec![Some(&r)]], &[2, 1], &[2]);
        assert_eq!(m.to_dense(), vec![vec![int(1), int(0)], vec![int(0), int(1)], vec![int(1), int(-1)]]);
        let d = i2.block_diag(&r);
        assert_eq!((d.rows(), d.cols()), (3, 4));
        assert_eq!(d.get(2, 3), int(-1));
        assert_eq!(d.get(0, 2), int(0));
    }

    #[test]
    fn set_and_product() {
        let mut m = Matrix::zeros(2, 2);
        m.set(0, 1, int(3));
        m.set(1, 0, int(2));
        let p = m.mul(&m);
        assert_eq!(p.to_dense(), vec![vec![int(6), int(0)], vec![int(0), int(6)]]);
        m.set(0, 1, int(0));
        assert_eq!(m.nnz(), 1);
    }
}
