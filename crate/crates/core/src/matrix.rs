//! Exact dense square matrices and the small amount of linear algebra the
//! group machinery needs (spans, null spaces).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::Poly;

/// Square matrix, row-major. The owning field is supplied to every operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    n: usize,
    e: Vec<Elem>,
}

impl Mat {
    pub fn from_entries(n: usize, e: Vec<Elem>) -> Mat {
        assert_eq!(e.len(), n * n, "expected {n}x{n} entries");
        Mat { n, e }
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Mat {
        let n = rows.len();
        let e: Vec<Elem> = rows.into_iter().flatten().collect();
        Mat::from_entries(n, e)
    }

    pub fn zero(f: &Field, n: usize) -> Mat {
        Mat {
            n,
            e: vec![f.zero(); n * n],
        }
    }

    pub fn scalar(f: &Field, n: usize, c: &Elem) -> Mat {
        let mut m = Mat::zero(f, n);
        for i in 0..n {
            m.e[i * n + i] = c.clone();
        }
        m
    }

    pub fn identity(f: &Field, n: usize) -> Mat {
        Mat::scalar(f, n, &f.one())
    }

    pub fn diag(f: &Field, d: &[Elem]) -> Mat {
        let n = d.len();
        let mut m = Mat::zero(f, n);
        for (i, x) in d.iter().enumerate() {
            m.e[i * n + i] = x.clone();
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.e[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.e[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[Elem] {
        &self.e
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.e[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let e = (0..n * n)
            .map(|k| self.e[(k % n) * n + k / n].clone())
            .collect();
        Mat { n, e }
    }

    pub fn mul(&self, f: &Field, o: &Mat) -> Mat {
        let n = self.n;
        debug_assert_eq!(n, o.n);
        let mut e = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = f.zero();
                for k in 0..n {
                    let a = &self.e[i * n + k];
                    if f.is_zero(a) {
                        continue;
                    }
                    acc = f.add(&acc, &f.mul(a, &o.e[k * n + j]));
                }
                e.push(acc);
            }
        }
        Mat { n, e }
    }

    pub fn add(&self, f: &Field, o: &Mat) -> Mat {
        let e = self.e.iter().zip(&o.e).map(|(a, b)| f.add(a, b)).collect();
        Mat { n: self.n, e }
    }

    pub fn sub(&self, f: &Field, o: &Mat) -> Mat {
        let e = self.e.iter().zip(&o.e).map(|(a, b)| f.sub(a, b)).collect();
        Mat { n: self.n, e }
    }

    pub fn scale(&self, f: &Field, c: &Elem) -> Mat {
        Mat {
            n: self.n,
            e: self.e.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    pub fn apply(&self, f: &Field, v: &[Elem]) -> Vec<Elem> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    pub fn trace(&self, f: &Field) -> Elem {
        (0..self.n).fold(f.zero(), |acc, i| f.add(&acc, self.get(i, i)))
    }

    pub fn is_scalar(&self, f: &Field) -> bool {
        let d = self.get(0, 0);
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    x == d
                } else {
                    f.is_zero(x)
                }
            })
        })
    }

    pub fn is_identity(&self, f: &Field) -> bool {
        self.is_scalar(f) && f.is_one(self.get(0, 0))
    }

    pub fn is_diagonal(&self, f: &Field) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || f.is_zero(self.get(i, j))))
    }

    /// Exact determinant: Gaussian elimination over GF(p^k), fraction-free
    /// Bareiss elimination on cleared denominators over Q.
    pub fn det(&self, f: &Field) -> Elem {
        if f.is_finite() {
            self.det_gauss(f)
        } else {
            self.det_bareiss(f)
        }
    }

    fn det_gauss(&self, f: &Field) -> Elem {
        let n = self.n;
        let mut a = self.e.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !f.is_zero(&a[r * n + c])) else {
                return f.zero();
            };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = f.neg(&det);
            }
            let piv = a[c * n + c].clone();
            det = f.mul(&det, &piv);
            let inv = f.inv(&piv).expect("nonzero pivot");
            for r in c + 1..n {
                let factor = f.mul(&a[r * n + c], &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..n {
                    let t = f.mul(&factor, &a[c * n + j]);
                    a[r * n + j] = f.sub(&a[r * n + j], &t);
                }
            }
        }
        det
    }

    fn det_bareiss(&self, f: &Field) -> Elem {
        let n = self.n;
        let rats: Vec<&BigRational> = self.e.iter().map(|x| f.as_rational(x).unwrap()).collect();
        // clear denominators row by row
        let mut scale = BigInt::one();
        let mut a: Vec<BigInt> = Vec::with_capacity(n * n);
        for i in 0..n {
            let l = rats[i * n..(i + 1) * n]
                .iter()
                .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            for r in &rats[i * n..(i + 1) * n] {
                a.push((*r * &l).to_integer());
            }
            scale *= l;
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return f.zero();
                };
                for j in 0..n {
                    a.swap(p * n + j, k * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        Elem::Rat(BigRational::new(sign * &a[n * n - 1], scale))
    }

    pub fn inv(&self, f: &Field) -> Result<Mat> {
        let n = self.n;
        let w = 2 * n;
        let mut a = vec![f.zero(); n * w];
        for i in 0..n {
            for j in 0..n {
                a[i * w + j] = self.e[i * n + j].clone();
            }
            a[i * w + n + i] = f.one();
        }
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !f.is_zero(&a[r * w + c]))
                .ok_or(Error::Singular)?;
            if p != c {
                for j in 0..w {
                    a.swap(p * w + j, c * w + j);
                }
            }
            let inv = f.inv(&a[c * w + c])?;
            for j in 0..w {
                a[c * w + j] = f.mul(&a[c * w + j], &inv);
            }
            for r in 0..n {
                if r == c || f.is_zero(&a[r * w + c]) {
                    continue;
                }
                let factor = a[r * w + c].clone();
                for j in 0..w {
                    let t = f.mul(&factor, &a[c * w + j]);
                    a[r * w + j] = f.sub(&a[r * w + j], &t);
                }
            }
        }
        let e = (0..n)
            .flat_map(|i| a[i * w + n..(i + 1) * w].to_vec())
            .collect();
        Ok(Mat { n, e })
    }

    pub fn pow(&self, f: &Field, mut e: u64) -> Mat {
        let mut acc = Mat::identity(f, self.n);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &b);
            }
            b = b.mul(f, &b);
            e >>= 1;
        }
        acc
    }

    pub fn powi(&self, f: &Field, e: i64) -> Result<Mat> {
        if e >= 0 {
            Ok(self.pow(f, e as u64))
        } else {
            Ok(self.inv(f)?.pow(f, e.unsigned_abs()))
        }
    }

    /// `t · m · t⁻¹`
    pub fn conjugate(f: &Field, t: &Mat, m: &Mat) -> Result<Mat> {
        Ok(t.mul(f, m).mul(f, &t.inv(f)?))
    }

    /// `a⁻¹ b⁻¹ a b`
    pub fn commutator(f: &Field, a: &Mat, b: &Mat) -> Result<Mat> {
        Ok(a.inv(f)?.mul(f, &b.inv(f)?).mul(f, a).mul(f, b))
    }

    /// Representative of `m·F^x`: scaled so the first nonzero entry (row-major) is 1.
    pub fn projective_canonical(&self, f: &Field) -> Mat {
        match self.e.iter().find(|x| !f.is_zero(x)) {
            Some(lead) if !f.is_one(lead) => {
                let inv = f.inv(lead).expect("nonzero");
                self.scale(f, &inv)
            }
            _ => self.clone(),
        }
    }

    /// Characteristic polynomial `det(X·1 - m)` via reduction to upper Hessenberg form.
    pub fn charpoly(&self, f: &Field) -> Poly {
        let n = self.n;
        let mut h: Vec<Vec<Elem>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        for c in 0..n.saturating_sub(2) {
            let Some(p) = (c + 1..n).find(|&r| !f.is_zero(&h[r][c])) else {
                continue;
            };
            if p != c + 1 {
                h.swap(p, c + 1);
                for row in h.iter_mut() {
                    row.swap(p, c + 1);
                }
            }
            let inv = f.inv(&h[c + 1][c]).expect("nonzero pivot");
            for r in c + 2..n {
                let factor = f.mul(&h[r][c], &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in 0..n {
                    let t = f.mul(&factor, &h[c + 1][j]);
                    h[r][j] = f.sub(&h[r][j], &t);
                }
                // similarity: add factor * column r to column c+1
                for row in h.iter_mut() {
                    let t = f.mul(&factor, &row[r]);
                    row[c + 1] = f.add(&row[c + 1], &t);
                }
            }
        }
        // p_k = characteristic polynomial of the leading k×k block
        let mut polys: Vec<Poly> = vec![Poly::constant(f, f.one())];
        for k in 1..=n {
            let x_minus = Poly::linear(f, &h[k - 1][k - 1]);
            let mut pk = x_minus.mul(f, &polys[k - 1]);
            let mut prod = f.one();
            for i in (1..k).rev() {
                prod = f.mul(&prod, &h[i][i - 1]);
                let coef = f.mul(&prod, &h[i - 1][k - 1]);
                let term = polys[i - 1].scale(f, &coef);
                pk = pk.sub(f, &term);
            }
            polys.push(pk);
        }
        polys.pop().unwrap()
    }

    /// Evaluate a polynomial at this matrix (Horner).
    pub fn eval_poly(&self, f: &Field, p: &Poly) -> Mat {
        p.coeffs.iter().rev().fold(Mat::zero(f, self.n), |acc, c| {
            acc.mul(f, self).add(f, &Mat::scalar(f, self.n, c))
        })
    }

    /// Parse `a,b;c,d` (rows separated by `;`, entries by `,`).
    pub fn parse(f: &Field, text: &str) -> Result<Mat> {
        let bad = |why: &str| Error::BadMatrix(text.to_string(), why.to_string());
        let rows: Vec<Vec<Elem>> = text
            .split(';')
            .map(|r| {
                r.split(',')
                    .map(|x| f.parse_elem(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()
            .map_err(|e| bad(&e.to_string()))?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(bad("matrix must be square"));
        }
        Ok(Mat::from_rows(rows))
    }

    pub fn format(&self, f: &Field) -> String {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| f.format_elem(x))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Rows as vectors of element strings.
    pub fn to_strings(&self, f: &Field) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|x| f.format_elem(x)).collect())
            .collect()
    }

    /// Entries as one flat vector, for span computations in the matrix algebra.
    pub fn as_vector(&self) -> &[Elem] {
        &self.e
    }
}

/// Incrementally maintained row space in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Span {
    dim: usize,
    rows: Vec<(usize, Vec<Elem>)>,
}

impl Span {
    pub fn new(dim: usize) -> Span {
        Span {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn reduce(&self, f: &Field, v: &[Elem]) -> Vec<Elem> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if f.is_zero(&v[*p]) {
                continue;
            }
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x = f.sub(x, &f.mul(&c, r));
            }
        }
        v
    }

    pub fn contains(&self, f: &Field, v: &[Elem]) -> bool {
        self.reduce(f, v).iter().all(|x| f.is_zero(x))
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, f: &Field, v: &[Elem]) -> bool {
        let r = self.reduce(f, v);
        let Some(p) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[p]).expect("nonzero");
        let r: Vec<Elem> = r.iter().map(|x| f.mul(x, &inv)).collect();
        for (_, row) in self.rows.iter_mut() {
            if !f.is_zero(&row[p]) {
                let c = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        self.rows.push((p, r));
        self.rows.sort_by_key(|(p, _)| *p);
        true
    }

    pub fn basis(&self) -> Vec<Vec<Elem>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

/// Basis of `{x : A x = 0}` for `A` given by its rows (each of length `ncols`).
pub fn nullspace(f: &Field, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut a: Vec<Vec<Elem>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !f.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        let inv = f.inv(&a[r][c]).expect("nonzero");
        for x in a[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..a.len() {
            if i != r && !f.is_zero(&a[i][c]) {
                let factor = a[i][c].clone();
                for j in 0..ncols {
                    let t = f.mul(&factor, &a[r][j]);
                    a[i][j] = f.sub(&a[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); ncols];
            v[fc] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&a[i][fc]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(f: &Field, s: &str) -> Mat {
        Mat::parse(f, s).unwrap()
    }

    #[test]
    fn determinants() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(Mat::identity(&f7, 3).det(&f7), f7.one());
        let q = Field::rationals();
        let a = m(&q, "1/2,3;-4,5/3");
        // 5/6 + 12
        assert_eq!(a.det(&q), q.parse_elem("77/6").unwrap());
        let s = m(&q, "1,2,3;2,4,6;0,1,1");
        assert!(q.is_zero(&s.det(&q)));
        let p = m(&q, "0,1,0;0,0,1;5,0,0");
        assert_eq!(p.det(&q), q.from_i64(5));
    }

    #[test]
    fn charpoly_examples() {
        let f3 = Field::prime(3).unwrap();
        let one = Mat::identity(&f3, 2);
        // (X-1)^2 = X^2 - 2X + 1
        assert_eq!(
            one.charpoly(&f3),
            Poly::new(&f3, vec![f3.one(), f3.from_i64(-2), f3.one()])
        );
        let f7 = Field::prime(7).unwrap();
        let i2 = m(&f7, "0,1,0;0,0,1;2,0,0");
        assert_eq!(i2.charpoly(&f7), Poly::binomial(&f7, 3, &f7.from_i64(2)));
        let q = Field::rationals();
        let ia = m(&q, "0,1;3,0");
        assert_eq!(ia.charpoly(&q), Poly::binomial(&q, 2, &q.from_i64(3)));
    }

    #[test]
    fn inverse_and_scalars() {
        let f5 = Field::prime(5).unwrap();
        let a = m(&f5, "1,2;3,4");
        let ai = a.inv(&f5).unwrap();
        assert!(a.mul(&f5, &ai).is_identity(&f5));
        assert_eq!(m(&f5, "1,2;2,4").inv(&f5), Err(Error::Singular));
        assert!(Mat::diag(&f5, &[f5.from_i64(2), f5.from_i64(2)]).is_scalar(&f5));
        assert!(!m(&f5, "0,1;1,0").is_scalar(&f5));
        let t = Mat::identity(&f5, 2);
        assert_eq!(Mat::conjugate(&f5, &t, &a).unwrap(), a);
    }

    #[test]
    fn parse_errors() {
        let f = Field::prime(3).unwrap();
        assert!(Mat::parse(&f, "1,2;3").is_err());
        assert!(Mat::parse(&f, "1,x;0,1").is_err());
        assert_eq!(m(&f, "0,1;1,0").format(&f), "0,1;1,0");
    }

    #[test]
    fn nullspace_and_span() {
        let f = Field::prime(5).unwrap();
        let rows = vec![vec![f.one(), f.from_i64(2), f.zero()]];
        let ns = nullspace(&f, &rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot = f.add(&v[0], &f.mul(&f.from_i64(2), &v[1]));
            assert!(f.is_zero(&dot));
        }
        let mut s = Span::new(3);
        assert!(s.insert(&f, &ns[0]));
        assert!(s.insert(&f, &ns[1]));
        assert!(!s.insert(&f, &[f.from_i64(3), f.one(), f.from_i64(4)]));
        assert_eq!(s.rank(), 2);
    }
}
