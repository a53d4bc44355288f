//! Dense exact linear algebra over a prime field `F_m`, sized for the
//! class-sum matrices of desk-scale groups (dimensions in the hundreds,
//! moduli below 2^31).

#[inline]
pub fn addm(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn subm(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

#[inline]
pub fn mulm(a: u64, b: u64, m: u64) -> u64 {
    a * b % m
}

pub fn powm(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulm(acc, base, m);
        }
        base = mulm(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn invm(a: u64, m: u64) -> u64 {
    // m prime
    powm(a, m - 2, m)
}

/// Multiplicative order of `a` in `F_m^x`.
pub fn mult_order(a: u64, m: u64) -> u64 {
    let mut k = 1;
    let mut acc = a % m;
    while acc != 1 {
        acc = mulm(acc, a, m);
        k += 1;
    }
    k
}

/// A square root of `a` mod prime `m`, by scan (moduli here are small).
pub fn sqrtm(a: u64, m: u64) -> Option<u64> {
    let a = a % m;
    for r in 0..m {
        if mulm(r, r, m) == a {
            return Some(r);
        }
    }
    None
}

/// Dense row-major matrix over `F_m`.
#[derive(Debug, Clone)]
pub struct MatF {
    pub n: usize,
    pub cols: usize,
    pub a: Vec<u64>,
}

impl MatF {
    pub fn zeros(n: usize, cols: usize) -> MatF {
        MatF {
            n,
            cols,
            a: vec![0; n * cols],
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.a[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }
}

/// Reduce `rows` (each of length `cols`) to reduced row echelon form in
/// place; returns the pivot column of each surviving row. Zero rows are
/// dropped.
pub fn rref(rows: &mut Vec<Vec<u64>>, m: u64) -> Vec<usize> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let mut piv = None;
        for i in r..rows.len() {
            if rows[i][c] != 0 {
                piv = Some(i);
                break;
            }
        }
        let Some(p) = piv else { continue };
        rows.swap(r, p);
        let inv = invm(rows[r][c], m);
        for j in c..cols {
            rows[r][j] = mulm(rows[r][j], inv, m);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in c..cols {
                    let t = mulm(f, rows[r][j], m);
                    rows[i][j] = subm(rows[i][j], t, m);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of the (right) kernel of an `n x n` matrix.
pub fn kernel_basis(mat: &MatF, m: u64) -> Vec<Vec<u64>> {
    let n = mat.n;
    let mut rows: Vec<Vec<u64>> = (0..n).map(|i| mat.row(i).to_vec()).collect();
    let pivots = rref(&mut rows, m);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (ri, &pc) in pivots.iter().enumerate() {
            // row: x_pc + sum coeff * x_free = 0
            v[pc] = subm(0, rows[ri][free], m);
        }
        basis.push(v);
    }
    basis
}

/// Upper Hessenberg form by elementary similarity transforms, with the
/// accumulated transform: returns `(H, Q)` with `X = Q H Q^{-1}`, so
/// kernels of `X - lambda` are `Q` applied to kernels of `H - lambda`.
pub fn hessenberg_with_transform(mat: &MatF, m: u64) -> (MatF, MatF) {
    let n = mat.n;
    let mut h: Vec<Vec<u64>> = (0..n).map(|i| mat.row(i).to_vec()).collect();
    let mut q = MatF::zeros(n, n);
    for i in 0..n {
        q.set(i, i, 1);
    }
    for c in 0..n.saturating_sub(2) {
        let mut piv = None;
        for r in c + 1..n {
            if h[r][c] != 0 {
                piv = Some(r);
                break;
            }
        }
        let Some(p) = piv else { continue };
        if p != c + 1 {
            h.swap(p, c + 1);
            for row in h.iter_mut() {
                row.swap(p, c + 1);
            }
            for i in 0..n {
                let (a, b) = (q.at(i, p), q.at(i, c + 1));
                q.set(i, p, b);
                q.set(i, c + 1, a);
            }
        }
        let inv = invm(h[c + 1][c], m);
        for r in c + 2..n {
            if h[r][c] == 0 {
                continue;
            }
            let f = mulm(h[r][c], inv, m);
            for j in 0..n {
                let t = mulm(f, h[c + 1][j], m);
                h[r][j] = subm(h[r][j], t, m);
            }
            // matching column operation: col[c+1] += f * col[r]
            for i in 0..n {
                let t = mulm(f, h[i][r], m);
                h[i][c + 1] = addm(h[i][c + 1], t, m);
            }
            // accumulate the inverse transform on Q
            for i in 0..n {
                let t = mulm(f, q.at(i, r), m);
                q.set(i, c + 1, addm(q.at(i, c + 1), t, m));
            }
        }
    }
    let mut hm = MatF::zeros(n, n);
    for (i, row) in h.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            hm.set(i, j, v);
        }
    }
    (hm, q)
}

/// Characteristic polynomial of an upper Hessenberg matrix by the
/// standard leading-minor recurrence (monic, coefficients low-to-high).
pub fn charpoly_of_hessenberg(h: &MatF, m: u64) -> Vec<u64> {
    let n = h.n;
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 1..=n {
        let mut p = vec![0u64; k + 1];
        let prev = &polys[k - 1];
        for (i, &c) in prev.iter().enumerate() {
            p[i + 1] = addm(p[i + 1], c, m);
            p[i] = subm(p[i], mulm(h.at(k - 1, k - 1), c, m), m);
        }
        let mut beta = 1u64;
        for i in 1..k {
            beta = mulm(beta, h.at(k - i, k - i - 1), m);
            if beta == 0 {
                break;
            }
            let coef = mulm(beta, h.at(k - 1 - i, k - 1), m);
            if coef == 0 {
                continue;
            }
            for (j, &c) in polys[k - 1 - i].iter().enumerate() {
                p[j] = subm(p[j], mulm(coef, c, m), m);
            }
        }
        polys.push(p);
    }
    polys.pop().unwrap()
}

/// Characteristic polynomial via Hessenberg reduction.
pub fn charpoly(mat: &MatF, m: u64) -> Vec<u64> {
    let (h, _) = hessenberg_with_transform(mat, m);
    charpoly_of_hessenberg(&h, m)
}

/// Kernel basis of `H - lambda I` for upper Hessenberg `H`: the row
/// echelon step only ever touches the few rows that can be nonzero in
/// each column, so the reduction is quadratic rather than cubic.
pub fn hessenberg_kernel(hmat: &MatF, lambda: u64, m: u64) -> Vec<Vec<u64>> {
    let d = hmat.n;
    let mut a: Vec<Vec<u64>> = (0..d)
        .map(|i| {
            let mut row = hmat.row(i).to_vec();
            row[i] = subm(row[i], lambda, m);
            row
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..d {
        // rows beyond c+1 are still untouched Hessenberg rows, zero at c
        let hi = (c + 1).min(d - 1);
        if r > hi {
            break;
        }
        let mut piv = None;
        for i in r..=hi {
            if a[i][c] != 0 {
                piv = Some(i);
                break;
            }
        }
        let Some(p) = piv else { continue };
        a.swap(r, p);
        let inv = invm(a[r][c], m);
        for j in c..d {
            a[r][j] = mulm(a[r][j], inv, m);
        }
        for i in (r + 1)..=hi {
            if a[i][c] != 0 {
                let f = a[i][c];
                for j in c..d {
                    a[i][j] = subm(a[i][j], mulm(f, a[r][j], m), m);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == d {
            break;
        }
    }
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..d {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; d];
        v[free] = 1;
        // back-substitute bottom-up over the echelon rows
        for k in (0..pivots.len()).rev() {
            let pc = pivots[k];
            if pc > free {
                continue;
            }
            let mut s = 0u64;
            for j in pc + 1..=free {
                if v[j] != 0 {
                    s = addm(s, mulm(a[k][j], v[j], m), m);
                }
            }
            v[pc] = subm(0, s, m);
        }
        basis.push(v);
    }
    basis
}

pub fn eval_poly(p: &[u64], x: u64, m: u64) -> u64 {
    p.iter().rev().fold(0u64, |acc, &c| addm(mulm(acc, x, m), c, m))
}

/// All roots in `F_m` of a polynomial, by direct scan.
pub fn roots_by_scan(p: &[u64], m: u64) -> Vec<u64> {
    (0..m).filter(|&x| eval_poly(p, x, m) == 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_small() {
        let m = 97;
        // [[2, 1], [0, 3]]: (x-2)(x-3) = x^2 - 5x + 6
        let mut a = MatF::zeros(2, 2);
        a.set(0, 0, 2);
        a.set(0, 1, 1);
        a.set(1, 1, 3);
        let p = charpoly(&a, m);
        assert_eq!(p, vec![6, 97 - 5, 1]);
        assert_eq!(roots_by_scan(&p, m), vec![2, 3]);
    }

    #[test]
    fn charpoly_needs_hessenberg() {
        let m = 101;
        // companion-like with nonzero subdiagonal structure
        let mut a = MatF::zeros(3, 3);
        // matrix [[0,0,5],[1,0,2],[0,1,7]]: x^3 - 7x^2 - 2x - 5
        a.set(0, 2, 5);
        a.set(1, 0, 1);
        a.set(1, 2, 2);
        a.set(2, 1, 1);
        a.set(2, 2, 7);
        let p = charpoly(&a, m);
        assert_eq!(p, vec![m - 5, m - 2, m - 7, 1]);
    }

    #[test]
    fn kernel_of_singular() {
        let m = 97;
        let mut a = MatF::zeros(3, 3);
        // rank-1 matrix: rows (1,2,3)
        for j in 0..3 {
            a.set(0, j, (j + 1) as u64);
            a.set(1, j, 2 * (j + 1) as u64 % m);
            a.set(2, j, 3 * (j + 1) as u64 % m);
        }
        let k = kernel_basis(&a, m);
        assert_eq!(k.len(), 2);
        for v in &k {
            for i in 0..3 {
                let s: u64 = (0..3).fold(0, |acc, j| addm(acc, mulm(a.at(i, j), v[j], m), m));
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn modular_roots_and_order() {
        let m = 73;
        assert_eq!(mult_order(powm(5, (m - 1) / 24, m), m) * 1, {
            // 5 is a generator mod 73? just check the order divides 72
            let o = mult_order(5, m);
            assert_eq!(72 % o, 0);
            mult_order(powm(5, (m - 1) / 24, m), m)
        });
        assert_eq!(sqrtm(4, m), Some(2));
    }
}
