//! Exact integer linear algebra on small vectors and matrices.
//!
//! Everything here is exact machine-integer arithmetic. The lattices in this
//! crate have rank 2 or 3 and all entries stay small, so `i64` is plenty;
//! overflow checks are active in debug and test builds.

use thiserror::Error;

/// Scalar type used for all lattice arithmetic.
pub type Int = i64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("not unimodular: determinant {0}")]
    NotUnimodular(Int),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub fn gcd(a: Int, b: Int) -> Int {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// gcd of all entries; 0 for the empty or zero vector.
pub fn gcd_of(v: &[Int]) -> Int {
    v.iter().fold(0, |g, &x| gcd(g, x))
}

/// A primitive vector generates its ray: the gcd of its entries is 1.
pub fn is_primitive(v: &[Int]) -> bool {
    gcd_of(v) == 1
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    assert_eq!(a.len(), b.len(), "dot product dimension mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[Int], b: &[Int]) -> Vec<Int> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Dense row-major integer matrix acting on column vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMat {
    n_rows: usize,
    n_cols: usize,
    data: Vec<Int>,
}

impl std::fmt::Debug for IntMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "IntMat{:?}", self.rows().collect::<Vec<_>>())
    }
}

impl IntMat {
    pub fn zero(n_rows: usize, n_cols: usize) -> Self {
        Self { n_rows, n_cols, data: vec![0; n_rows * n_cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Int>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged rows");
        Self { n_rows, n_cols, data: rows.concat() }
    }

    pub fn from_cols(cols: &[Vec<Int>]) -> Self {
        let n_cols = cols.len();
        let n_rows = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|c| c.len() == n_rows), "ragged columns");
        let mut m = Self::zero(n_rows, n_cols);
        for (j, col) in cols.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Int]> {
        (0..self.n_rows).map(|i| self.row(i))
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.n_rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matvec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.n_cols, "matvec dimension mismatch");
        self.rows().map(|r| dot(r, v)).collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n_cols, other.n_rows, "matmul dimension mismatch");
        let mut out = Self::zero(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.n_cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Exact determinant by Laplace expansion along the first row.
    /// Only sensible for the tiny square matrices this crate works with.
    pub fn det(&self) -> Int {
        assert_eq!(self.n_rows, self.n_cols, "determinant of non-square matrix");
        match self.n_rows {
            0 => 1,
            1 => self[(0, 0)],
            n => {
                let mut acc = 0;
                for j in 0..n {
                    let a = self[(0, j)];
                    if a == 0 {
                        continue;
                    }
                    let minor = self.minor(0, j);
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    acc += sign * a * minor.det();
                }
                acc
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> Self {
        let n = self.n_rows;
        let mut m = Self::zero(n - 1, n - 1);
        let mut r = 0;
        for i in 0..n {
            if i == row {
                continue;
            }
            let mut c = 0;
            for j in 0..n {
                if j == col {
                    continue;
                }
                m[(r, c)] = self[(i, j)];
                c += 1;
            }
            r += 1;
        }
        m
    }

    pub fn is_unimodular(&self) -> bool {
        self.n_rows == self.n_cols && self.det().abs() == 1
    }

    /// Integer inverse via the adjugate. Defined exactly when det = ±1.
    pub fn inverse_unimodular(&self) -> Result<Self, LatticeError> {
        assert_eq!(self.n_rows, self.n_cols);
        let d = self.det();
        if d.abs() != 1 {
            return Err(LatticeError::NotUnimodular(d));
        }
        let n = self.n_rows;
        let mut inv = Self::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                // adjugate transposes the cofactor matrix
                inv[(j, i)] = sign * self.minor(i, j).det() * d;
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.n_cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.n_cols + j]
    }
}

/// Solves `A x = b` over the integers via column Hermite reduction.
///
/// Returns `None` when no integer solution exists; that is a normal outcome,
/// not an error. `A` may be any shape.
pub fn solve_integer(a: &IntMat, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(a.n_rows(), b.len(), "solve_integer dimension mismatch");
    let m = a.n_rows();
    let n = a.n_cols();

    // Column operations on H, mirrored on U, keep A·U = H.
    let mut h = a.clone();
    let mut u = IntMat::identity(n);

    let swap_cols = |mat: &mut IntMat, p: usize, q: usize| {
        for i in 0..mat.n_rows() {
            let t = mat[(i, p)];
            mat[(i, p)] = mat[(i, q)];
            mat[(i, q)] = t;
        }
    };
    let add_col = |mat: &mut IntMat, dst: usize, src: usize, k: Int| {
        for i in 0..mat.n_rows() {
            let s = mat[(i, src)];
            mat[(i, dst)] += k * s;
        }
    };

    let mut pivot_of_row: Vec<Option<usize>> = vec![None; m];
    let mut p = 0; // next free pivot column
    for r in 0..m {
        if p >= n {
            break;
        }
        // gcd-sweep row r across columns p..n
        loop {
            let pivot = (p..n)
                .filter(|&j| h[(r, j)] != 0)
                .min_by_key(|&j| (h[(r, j)].abs(), j));
            let Some(j) = pivot else { break };
            if j != p {
                swap_cols(&mut h, p, j);
                swap_cols(&mut u, p, j);
            }
            let mut done = true;
            for j in p + 1..n {
                if h[(r, j)] != 0 {
                    let q = h[(r, j)].div_euclid(h[(r, p)]);
                    add_col(&mut h, j, p, -q);
                    add_col(&mut u, j, p, -q);
                    if h[(r, j)] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[(r, p)] != 0 {
            pivot_of_row[r] = Some(p);
            p += 1;
        }
    }

    // Forward substitution: H is in column echelon form.
    let mut y = vec![0; n];
    for r in 0..m {
        let partial = (0..n).map(|j| h[(r, j)] * y[j]).sum::<Int>();
        let need = b[r] - partial;
        match pivot_of_row[r] {
            Some(j) => {
                if need % h[(r, j)] != 0 {
                    return None;
                }
                y[j] = need / h[(r, j)];
            }
            None => {
                if need != 0 {
                    return None;
                }
            }
        }
    }

    let x = u.matvec(&y);
    debug_assert_eq!(a.matvec(&x), b, "solve_integer produced a non-solution");
    Some(x)
}
