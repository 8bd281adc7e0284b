//! Exact arithmetic over the cyclotomic field Q(ζ_N).
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(N)-1}` modulo the
//! N-th cyclotomic polynomial, with big-rational coefficients. Everything the
//! group-theoretic layers compute (fixed-point subspaces, kernel dimensions,
//! subspace equality) goes through this module, so no tolerance is involved.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Reduced fraction with positive denominator.
pub type Rational = BigRational;

/// Column vector over Q(ζ_N).
pub type CycloVector = Vec<Cyclotomic>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("root of unity of order {requested} does not live in Q(zeta_{field})")]
    MismatchedOrder { field: u32, requested: u32 },
    #[error("matrix dimensions {left:?} and {right:?} are incompatible")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
}

#[derive(Debug)]
struct FieldData {
    order: u32,
    degree: usize,
    /// `x^k mod Φ_N` for `k < 2·degree`, integer coefficients (Φ_N is monic).
    reductions: Vec<Vec<i64>>,
    /// `ζ^k` for `0 ≤ k < N`.
    powers: Vec<Vec<i64>>,
}

/// Handle on Q(ζ_N). Cheap to clone.
#[derive(Clone, Debug)]
pub struct CyclotomicField(Arc<FieldData>);

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.0.order == other.0.order
    }
}

impl Eq for CyclotomicField {}

/// Integer coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    // x^n - 1
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_divide(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = *den.last().unwrap();
    debug_assert!(lead == 1 || lead == -1);
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let q = rem[i + dd] / lead;
        quot[i] = q;
        for (j, &c) in den.iter().enumerate() {
            rem[i + j] -= q * c;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

impl CyclotomicField {
    pub fn new(order: u32) -> Self {
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let mut reductions: Vec<Vec<i64>> = Vec::with_capacity(2 * degree);
        for k in 0..degree {
            let mut v = vec![0; degree];
            v[k] = 1;
            reductions.push(v);
        }
        // x^degree = -(m_0 + m_1 x + … + m_{d-1} x^{d-1})
        let mut cur: Vec<i64> = modulus[..degree].iter().map(|c| -c).collect();
        for _ in degree..(2 * degree).max(order as usize + 1) {
            reductions.push(cur.clone());
            let top = cur[degree - 1];
            let mut next = vec![0; degree];
            for j in (1..degree).rev() {
                next[j] = cur[j - 1];
            }
            for j in 0..degree {
                next[j] -= top * modulus[j];
            }
            cur = next;
        }
        let powers = (0..order as usize).map(|k| reductions[k].clone()).collect();
        CyclotomicField(Arc::new(FieldData {
            order,
            degree,
            reductions,
            powers,
        }))
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// φ(N), the dimension over Q.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn zero(&self) -> Cyclotomic {
        Cyclotomic {
            field: self.clone(),
            coeffs: vec![Rational::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> Cyclotomic {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> Cyclotomic {
        self.from_rational(Rational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(&self, v: Rational) -> Cyclotomic {
        let mut z = self.zero();
        z.coeffs[0] = v;
        z
    }

    /// ζ_N^k for any integer k.
    pub fn zeta_pow(&self, k: i64) -> Cyclotomic {
        let n = self.order() as i64;
        let idx = k.rem_euclid(n) as usize;
        Cyclotomic {
            field: self.clone(),
            coeffs: self.0.powers[idx]
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    fn int_vec(&self, v: &[i64]) -> Cyclotomic {
        Cyclotomic {
            field: self.clone(),
            coeffs: v
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }
}

/// ζ_n^k inside `field`. `n` must divide the field order.
pub fn root_of_unity(field: &CyclotomicField, k: i64, n: u32) -> Result<Cyclotomic, ExactError> {
    if n == 0 || field.order() % n != 0 {
        return Err(ExactError::MismatchedOrder {
            field: field.order(),
            requested: n,
        });
    }
    let scale = (field.order() / n) as i64;
    Ok(field.zeta_pow(k * scale))
}

/// An element of Q(ζ_N).
#[derive(Clone)]
pub struct Cyclotomic {
    field: CyclotomicField,
    coeffs: Vec<Rational>,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => write!(f, "z^{k}")?,
                _ => write!(f, "{a}*z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Cyclotomic {
    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Complex conjugation, the automorphism ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Cyclotomic {
        let n = self.field.order() as usize;
        let mut out = self.field.zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = &self.field.0.powers[(n - j) % n];
            for (slot, &m) in out.coeffs.iter_mut().zip(img) {
                if m != 0 {
                    *slot += c * Rational::from_integer(BigInt::from(m));
                }
            }
        }
        out
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Cyclotomic> {
        if self.is_zero() {
            return None;
        }
        let d = self.field.degree();
        // Column j of the multiplication-by-self matrix is self·x^j.
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(d);
        for j in 0..d {
            let xj = self.field.int_vec(&self.field.0.reductions[j]);
            cols.push((self * &xj).coeffs);
        }
        let mut aug: Vec<Vec<Rational>> = (0..d)
            .map(|i| {
                let mut row: Vec<Rational> = (0..d).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 {
                    Rational::one()
                } else {
                    Rational::zero()
                });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, piv);
            let p = aug[col][col].clone();
            for v in aug[col].iter_mut() {
                *v /= &p;
            }
            for r in 0..d {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in col..=d {
                        let t = &aug[col][c] * &f;
                        aug[r][c] -= t;
                    }
                }
            }
        }
        Some(Cyclotomic {
            field: self.field.clone(),
            coeffs: aug.into_iter().map(|mut r| r.pop().unwrap()).collect(),
        })
    }

    /// Evaluate at ζ_N = e^{2πi/N} in double precision.
    pub fn numeric(&self) -> Complex64 {
        let n = self.field.order() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), theta)
            })
            .sum()
    }

    fn check_field(&self, other: &Cyclotomic) {
        assert!(
            self.field == other.field,
            "mixing Q(zeta_{}) with Q(zeta_{})",
            self.field.order(),
            other.field.order()
        );
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        let d = self.field.degree();
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut out = prod[..d].to_vec();
        for (k, c) in prod.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (slot, &m) in out.iter_mut().zip(&self.field.0.reductions[k]) {
                if m != 0 {
                    *slot += c * Rational::from_integer(BigInt::from(m));
                }
            }
        }
        Cyclotomic {
            field: self.field.clone(),
            coeffs: out,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

/// Dense matrix over Q(ζ_N), row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycloMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Cyclotomic>,
}

impl CycloMatrix {
    pub fn zeros(field: &CyclotomicField, rows: usize, cols: usize) -> Self {
        CycloMatrix {
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &CyclotomicField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cyclotomic) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        CycloMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Stack matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[CycloMatrix]) -> Result<Self, ExactError> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut entries = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(ExactError::DimensionMismatch {
                    left: (rows, cols),
                    right: (b.rows, b.cols),
                });
            }
            rows += b.rows;
            entries.extend(b.entries.iter().cloned());
        }
        Ok(CycloMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclotomic) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &CycloMatrix) -> Result<CycloMatrix, ExactError> {
        if self.cols != rhs.rows {
            return Err(ExactError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let field = self.entries[0].field().clone();
        Ok(CycloMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = field.zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = rhs.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        }))
    }

    pub fn apply(&self, v: &[Cyclotomic]) -> Result<CycloVector, ExactError> {
        if v.len() != self.cols {
            return Err(ExactError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = v[0].field().zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn conj_transpose(&self) -> CycloMatrix {
        CycloMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Reduced row echelon form and pivot columns. The pivot in each column
    /// is the first nonzero entry at or below the current row.
    pub fn rref(&self) -> (CycloMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.entries.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for j in col..m.cols {
                    let pj = m.get(row, j);
                    if pj.is_zero() {
                        continue;
                    }
                    let v = m.get(r, j) - &(&f * pj);
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact basis of the null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<CycloVector> {
        let field = match self.entries.first() {
            Some(e) => e.field().clone(),
            None => return Vec::new(),
        };
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![field.zero(); self.cols];
                v[f] = field.one();
                for (prow, &pcol) in pivots.iter().enumerate() {
                    v[pcol] = -r.get(prow, f);
                }
                v
            })
            .collect()
    }
}

/// Canonical basis (nonzero RREF rows) of the span of `vectors`; two lists
/// span the same subspace exactly when their canonical bases are equal.
pub fn canonical_span(field: &CyclotomicField, vectors: &[CycloVector], dim: usize) -> Vec<CycloVector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = CycloMatrix::from_fn(vectors.len(), dim, |i, j| vectors[i][j].clone());
    let (r, pivots) = m.rref();
    let _ = field;
    (0..pivots.len())
        .map(|i| (0..dim).map(|j| r.get(i, j).clone()).collect())
        .collect()
}
