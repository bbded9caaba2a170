//! Dense linear algebra over F5.

const P: u8 = 5;

fn inv(a: u8) -> u8 {
    match a % P {
        1 => 1,
        2 => 3,
        3 => 2,
        4 => 4,
        _ => panic!("zero has no inverse in F5"),
    }
}

/// Row-major matrix with entries in `0..5`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<u8>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has the wrong length");
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<u8>]) -> Self {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {i} has the wrong length");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u8) {
        self.data[i * self.cols + j] = x % P;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let s: u32 = self.row(i).iter().zip(v).map(|(&a, &b)| u32::from(a) * u32::from(b)).sum();
                (s % u32::from(P)) as u8
            })
            .collect()
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, p);
            let s = inv(m.get(r, c));
            m.scale_row(r, s);
            for i in 0..m.rows {
                let f = m.get(i, c);
                if i != r && f != 0 {
                    m.add_row_multiple(i, r, P - f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<u8>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u8; self.cols];
            v[free] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = (P - r.get(i, free)) % P;
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `M x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[u8]) -> Option<Vec<u8>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u8; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols);
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, i: usize, s: u8) {
        for j in 0..self.cols {
            let x = self.get(i, j);
            self.set(i, j, x * s);
        }
    }

    /// row_i += f * row_src
    fn add_row_multiple(&mut self, i: usize, src: usize, f: u8) {
        for j in 0..self.cols {
            let x = self.get(i, j) + f * self.get(src, j);
            self.set(i, j, x);
        }
    }
}

/// Row-reduced spanning set of a subspace of `F5^n`, used to pick canonical
/// coset representatives.
#[derive(Debug, Clone)]
pub struct Subspace {
    dim: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(dim: usize, vectors: &[Vec<u8>]) -> Self {
        let (r, pivots) = Matrix::from_rows(dim, vectors).rref();
        let rows = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { dim, rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// The unique representative of `v + self` vanishing on every pivot.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = out[p];
            if f != 0 {
                for (o, &x) in out.iter_mut().zip(row) {
                    *o = (*o + (P - f) * x) % P;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// `self ∩ other`, via the kernel of `[A | -B]`.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.dim, other.dim);
        let mut columns: Vec<Vec<u8>> = self.rows.clone();
        columns.extend(other.rows.iter().map(|r| r.iter().map(|&x| (P - x) % P).collect()));
        let m = Matrix::from_columns(self.dim, &columns);
        let k = self.rows.len();
        let vectors: Vec<Vec<u8>> = m
            .kernel()
            .into_iter()
            .map(|coef| {
                let mut v = vec![0u8; self.dim];
                for (c, row) in coef[..k].iter().zip(&self.rows) {
                    for (o, &x) in v.iter_mut().zip(row) {
                        *o = (*o + c * x) % P;
                    }
                }
                v
            })
            .collect();
        Subspace::span(self.dim, &vectors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        let m = Matrix::from_rows(3, &[vec![1, 2, 3], vec![0, 1, 1], vec![1, 3, 4]]);
        // third row = first + second
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(m.mul_vec(&k[0]), vec![0, 0, 0]);
    }

    #[test]
    fn solve_consistency() {
        let m = Matrix::from_rows(2, &[vec![1, 1], vec![2, 2]]);
        let x = m.solve(&[3, 1]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![3, 1]);
        assert_eq!(m.solve(&[1, 1]), None);
    }

    #[test]
    fn subspace_representatives() {
        let s = Subspace::span(3, &[vec![1, 1, 0], vec![2, 2, 0]]);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.reduce(&[1, 1, 0]), vec![0, 0, 0]);
        assert_eq!(s.reduce(&[3, 0, 1]), s.reduce(&[2, 4, 1]));
        let t = Subspace::span(3, &[vec![1, 1, 0], vec![0, 0, 1]]);
        let u = Subspace::span(3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let i = t.intersect(&u);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[1, 1, 0]));
    }
}
