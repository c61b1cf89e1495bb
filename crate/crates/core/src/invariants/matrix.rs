use std::fmt;

use serde::{Deserialize, Serialize};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, entries: rows.concat() }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    m.entries[i * o.cols + j] += a * o.get(k, j);
                }
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// Determinant by fraction-free elimination (square matrices only).
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = self.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        (sign * a[n - 1][n - 1]) as i64
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: i64) {
        for j in 0..self.cols {
            let v = self.get(src, j);
            self.entries[dst * self.cols + j] += q * v;
        }
    }
    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: i64) {
        for i in 0..self.rows {
            let v = self.get(i, src);
            self.entries[i * self.cols + dst] += q * v;
        }
    }
    fn neg_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self.entries[r * self.cols + j] = -self.entries[r * self.cols + j];
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `left · A · right = diag(d)` with `d[i] | d[i+1]` and unimodular
/// transforms. `d` has length `min(rows, cols)`; trailing zeros allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub d: Vec<i64>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|&&x| x != 0).count()
    }

    pub fn diagonal(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.left.rows, self.right.cols);
        for (i, &x) in self.d.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }
}

/// Smith normal form by alternating row and column elimination with a
/// minimal-magnitude pivot.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (r, c) = (a.rows, a.cols);
    let mut m = a.clone();
    let mut left = IntMatrix::identity(r);
    let mut right = IntMatrix::identity(c);
    let n = r.min(c);
    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let v = m.get(i, j);
                    if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < m.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            m.swap_rows(t, pi);
            left.swap_rows(t, pi);
            m.swap_cols(t, pj);
            right.swap_cols(t, pj);
            let p = m.get(t, t);
            let mut clean = true;
            for i in t + 1..r {
                let q = m.get(i, t) / p;
                if q != 0 {
                    m.add_row(i, t, -q);
                    left.add_row(i, t, -q);
                }
                if m.get(i, t) != 0 {
                    clean = false;
                }
            }
            for j in t + 1..c {
                let q = m.get(t, j) / p;
                if q != 0 {
                    m.add_col(j, t, -q);
                    right.add_col(j, t, -q);
                }
                if m.get(t, j) != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| m.get(i, j) % p != 0));
            match bad {
                Some(i) => {
                    m.add_row(t, i, 1);
                    left.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if m.get(t, t) < 0 {
            m.neg_row(t);
            left.neg_row(t);
        }
    }
    let d = (0..n).map(|i| m.get(i, i)).collect();
    SmithForm { d, left, right }
}

/// Finitely generated abelian group `Z^rank ⊕ Z/t_1 ⊕ ...` with
/// `t_i > 1` and `t_i | t_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<i64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { rank: 0, torsion: vec![] }
    }
    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, torsion: vec![] }
    }
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
    /// Cokernel of an `n × m` matrix viewed as a map `Z^m → Z^n`.
    pub fn cokernel(a: &IntMatrix) -> Self {
        let s = smith_normal_form(a);
        let torsion = s.d.iter().copied().filter(|&x| x > 1).collect();
        AbelianGroup { rank: a.rows - s.rank(), torsion }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl std::str::FromStr for AbelianGroup {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::trivial());
        }
        let mut g = Self::trivial();
        for part in s.split('+').map(str::trim) {
            if part == "Z" {
                g.rank += 1;
            } else if let Some(k) = part.strip_prefix("Z^") {
                g.rank += k.parse::<usize>().map_err(|_| format!("bad group `{s}`"))?;
            } else if let Some(t) = part.strip_prefix("Z/") {
                g.torsion.push(t.parse::<i64>().map_err(|_| format!("bad group `{s}`"))?);
            } else {
                return Err(format!("bad group `{s}`"));
            }
        }
        // normalise torsion to invariant factors
        let mut m = IntMatrix::zeros(g.torsion.len(), g.torsion.len());
        for (i, t) in g.torsion.iter().enumerate() {
            m.set(i, i, *t);
        }
        g.torsion = smith_normal_form(&m).d.into_iter().filter(|&x| x > 1).collect();
        Ok(g)
    }
}

/// Homology of a chain complex `C_n → ... → C_0`. `boundary(k)` is the
/// matrix of `∂_k : C_k → C_{k-1}` with shape `dims[k-1] × dims[k]`.
pub fn chain_homology(dims: &[usize], boundary: impl Fn(usize) -> IntMatrix) -> Vec<AbelianGroup> {
    let n = dims.len();
    let ranks: Vec<usize> = (0..=n)
        .map(|k| if k == 0 || k >= n { 0 } else { smith_normal_form(&boundary(k)).rank() })
        .collect();
    (0..n)
        .map(|k| {
            let rank = dims[k] - ranks[k] - ranks[k + 1];
            let torsion = if k + 1 < n {
                smith_normal_form(&boundary(k + 1)).d.into_iter().filter(|&x| x > 1).collect()
            } else {
                vec![]
            };
            AbelianGroup { rank, torsion }
        })
        .collect()
}
