//! Dense integer matrices with Smith and Hermite normal forms.
//!
//! Sizes here are tiny (a handful of rows and columns), so everything is
//! plain row-major `Vec<BigInt>` with no attempt at modular tricks.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone().into();
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(BigInt::zero(), |acc, j| acc + &self[(i, j)] * &v[j])
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    // row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    // col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

/// `left * original * right = diagonal`, with `left` and `right` unimodular
/// and the diagonal entries nonnegative, each dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub diagonal: IntMatrix,
    pub original: IntMatrix,
}

impl SnfDecomposition {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.diagonal.rows().min(self.diagonal.cols());
        (0..n).map(|i| self.diagonal[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors()
            .iter()
            .take_while(|d| !d.is_zero())
            .count()
    }
}

/// Smith normal form by alternating row and column elimination, always
/// pivoting on the entry of smallest absolute value.
pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero |entry| in the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if pivot.is_none_or(|(pi, pj)| d[(i, j)].abs() < d[(pi, pj)].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish(m, left, right, d);
            };
            d.swap_rows(t, pi);
            left.swap_rows(t, pi);
            d.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                right.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole trailing block
            let bad_row = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&d[(i, j)] % &d[(t, t)]).is_zero()));
            match bad_row {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => {
                    if d[(t, t)].is_negative() {
                        d.negate_row(t);
                        left.negate_row(t);
                    }
                    break;
                }
            }
        }
    }
    finish(m, left, right, d)
}

fn finish(original: &IntMatrix, left: IntMatrix, right: IntMatrix, diagonal: IntMatrix) -> SnfDecomposition {
    SnfDecomposition {
        left,
        right,
        diagonal,
        original: original.clone(),
    }
}

/// Column-style Hermite normal form of the lattice spanned by the columns of
/// `gens` (which must have full row rank).
///
/// The result `H` is square, upper triangular with positive diagonal, and
/// every entry to the right of a diagonal entry is reduced into
/// `[0, H[i][i])`. Two generating sets span the same lattice exactly when
/// their forms are equal.
pub fn hermite_normal_form(gens: &IntMatrix) -> Option<IntMatrix> {
    let r = gens.rows();
    let mut cols: Vec<Vec<BigInt>> = gens.columns();
    cols.retain(|c| c.iter().any(|v| !v.is_zero()));
    let mut basis: Vec<Vec<BigInt>> = vec![Vec::new(); r];

    for i in (0..r).rev() {
        // collapse row i among the remaining columns with a gcd walk
        loop {
            let mut nz: Vec<usize> = (0..cols.len()).filter(|&k| !cols[k][i].is_zero()).collect();
            if nz.is_empty() {
                return None;
            }
            if nz.len() == 1 {
                let mut c = cols.swap_remove(nz[0]);
                if c[i].is_negative() {
                    c.iter_mut().for_each(|v| *v = -v.clone());
                }
                basis[i] = c;
                break;
            }
            nz.sort_by(|&a, &b| cols[a][i].abs().cmp(&cols[b][i].abs()));
            let piv = nz[0];
            for &k in &nz[1..] {
                let q = cols[k][i].div_floor(&cols[piv][i]);
                let (pc, kc) = if piv < k {
                    let (lo, hi) = cols.split_at_mut(k);
                    (&lo[piv], &mut hi[0])
                } else {
                    let (lo, hi) = cols.split_at_mut(piv);
                    (&hi[0], &mut lo[k])
                };
                for (dst, src) in kc.iter_mut().zip(pc.iter()) {
                    *dst -= &q * src;
                }
            }
            cols.retain(|c| c.iter().any(|v| !v.is_zero()));
        }
    }

    // reduce above-diagonal entries, right to left within each row
    for j in 0..r {
        for i in (0..j).rev() {
            let q = basis[j][i].div_floor(&basis[i][i]);
            if q.is_zero() {
                continue;
            }
            let (lo, hi) = basis.split_at_mut(j);
            for (dst, src) in hi[0].iter_mut().zip(lo[i].iter()) {
                *dst -= &q * src;
            }
        }
    }
    Some(IntMatrix::from_columns(r, &basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_snf(m: &IntMatrix) {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.left * m) * &s.right, s.diagonal, "U M V != D for {m:?}");
        assert!(s.left.determinant().abs().is_one());
        assert!(s.right.determinant().abs().is_one());
        let d = &s.diagonal;
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j {
                    assert!(d[(i, j)].is_zero());
                }
            }
        }
        let fs = s.invariant_factors();
        for w in fs.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!((&w[1] % &w[0]).is_zero(), "{:?}", fs);
            }
        }
    }

    #[test]
    fn worked_examples() {
        let id = IntMatrix::identity(2);
        assert_eq!(smith_normal_form(&id).diagonal, id);
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(
            smith_normal_form(&m).invariant_factors(),
            vec![BigInt::from(1), BigInt::from(6)]
        );
        let z = IntMatrix::zeros(2, 2);
        assert!(smith_normal_form(&z).diagonal.is_zero());
        check_snf(&m);
    }

    #[test]
    fn rectangular_and_degenerate() {
        check_snf(&IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
        check_snf(&IntMatrix::from_rows(&[vec![6, 10, 15]]));
        check_snf(&IntMatrix::from_rows(&[vec![6], vec![10], vec![15]]));
        check_snf(&IntMatrix::zeros(0, 3));
        let s = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
        assert_eq!(
            s.invariant_factors(),
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
    }

    #[test]
    fn hnf_canonical() {
        // the lattice {(x, y): x = y mod 3} in two different bases
        let a = IntMatrix::from_rows(&[vec![1, 3], vec![1, 0]]);
        let b = IntMatrix::from_rows(&[vec![4, -2, 7], vec![1, 1, 1]]);
        let ha = hermite_normal_form(&a).unwrap();
        let hb = hermite_normal_form(&b).unwrap();
        assert_eq!(ha, hb);
        assert_eq!(ha, IntMatrix::from_rows(&[vec![3, 1], vec![0, 1]]));
        assert!(hermite_normal_form(&IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]])).is_none());
    }

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_rows(&[vec![0, 2, 1], vec![3, 0, 0], vec![1, 1, 1]]);
        assert_eq!(m.determinant(), BigInt::from(-3));
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-20i64..20, c), r)
                .prop_map(|rows| IntMatrix::from_rows(&rows))
        })
    }

    proptest! {
        #[test]
        fn snf_invariants(m in small_matrix()) {
            check_snf(&m);
        }

        #[test]
        fn hnf_spans_same_lattice(m in small_matrix()) {
            // append 30*I to guarantee full rank
            let r = m.rows();
            let scaled: Vec<BigInt> = vec![BigInt::from(30); r];
            let gens = m.hcat(&IntMatrix::diagonal(&scaled));
            let h = hermite_normal_form(&gens).unwrap();
            for i in 0..r {
                prop_assert!(h[(i, i)].is_positive());
                for j in 0..r {
                    if i > j { prop_assert!(h[(i, j)].is_zero()); }
                    if j > i {
                        prop_assert!(!h[(i, j)].is_negative() && h[(i, j)] < h[(i, i)]);
                    }
                }
            }
            // same lattice: shuffling the generators does not change the form
            let mut cols = gens.columns();
            cols.reverse();
            let h2 = hermite_normal_form(&IntMatrix::from_columns(r, &cols)).unwrap();
            prop_assert_eq!(h, h2);
        }
    }
}
