//! Arithmetic in `L = K[X]/(f)` for an Eisenstein polynomial `f`, and minimum
//! polynomials of other uniformizers of `L`.
//!
//! Elements are vectors of `K`-coordinates on the basis `1, pi_L, ..., pi_L^{n-1}`.
//! Characteristic polynomials are computed with Berkowitz's division-free
//! algorithm, which stays exact in the truncated ring `O_K / pi^N`.

use std::sync::Arc;

use thiserror::Error;

use crate::eisenstein::{EisError, EisensteinPoly};
use crate::literal::XPoly;
use crate::local_field::{KElem, LocalField, Valuation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtError {
    #[error("elements belong to different extensions")]
    MixedOwners,
    #[error("expression is not a uniformizer: v_L = {0}")]
    NotUniformizer(String),
    #[error("characteristic polynomial is not Eisenstein (precision loss?): {0}")]
    NotEisensteinResult(EisError),
}

struct Inner {
    f: EisensteinPoly,
    /// `pi_L^n = sum_e red[e] pi_L^e`.
    red: Vec<KElem>,
}

#[derive(Clone)]
pub struct Extension(Arc<Inner>);

impl std::fmt::Debug for Extension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "K[X]/({})", self.0.f.render())
    }
}

impl PartialEq for Extension {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.f == other.0.f
    }
}

impl Extension {
    pub fn new(f: &EisensteinPoly) -> Self {
        let n = f.degree();
        let red = (0..n).map(|e| f.x_coeff(e).neg()).collect();
        Extension(Arc::new(Inner { f: f.clone(), red }))
    }

    pub fn poly(&self) -> &EisensteinPoly {
        &self.0.f
    }
    pub fn base(&self) -> &LocalField {
        self.0.f.field()
    }
    pub fn degree(&self) -> usize {
        self.0.f.degree()
    }

    pub fn from_coeffs(&self, coeffs: Vec<KElem>) -> LElem {
        assert_eq!(coeffs.len(), self.degree());
        LElem { ext: self.clone(), coeffs }
    }
    pub fn from_base(&self, a: &KElem) -> LElem {
        let mut coeffs = vec![self.base().zero(); self.degree()];
        coeffs[0] = a.clone();
        self.from_coeffs(coeffs)
    }
    pub fn zero(&self) -> LElem {
        self.from_base(&self.base().zero())
    }
    pub fn one(&self) -> LElem {
        self.from_base(&self.base().one())
    }
    /// `pi_L`.
    pub fn pi_l(&self) -> LElem {
        self.one().mul_by_pi_l()
    }

    /// Evaluates a polynomial expression in `X` at `pi_L`.
    pub fn eval(&self, expr: &XPoly) -> LElem {
        let mut acc = self.zero();
        let mut power = self.one();
        let mut e = 0u32;
        for (&exp, c) in &expr.terms {
            while e < exp {
                power = power.mul_by_pi_l();
                e += 1;
            }
            acc = acc.add(&power.scale(c));
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub struct LElem {
    ext: Extension,
    coeffs: Vec<KElem>,
}

impl PartialEq for LElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.ext == other.ext
    }
}

impl LElem {
    pub fn coeffs(&self) -> &[KElem] {
        &self.coeffs
    }
    pub fn extension(&self) -> &Extension {
        &self.ext
    }

    pub fn add(&self, other: &LElem) -> LElem {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect();
        LElem { ext: self.ext.clone(), coeffs }
    }
    pub fn sub(&self, other: &LElem) -> LElem {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect();
        LElem { ext: self.ext.clone(), coeffs }
    }
    pub fn scale(&self, c: &KElem) -> LElem {
        let coeffs = self.coeffs.iter().map(|a| a.mul(c)).collect();
        LElem { ext: self.ext.clone(), coeffs }
    }

    pub fn mul_by_pi_l(&self) -> LElem {
        let n = self.coeffs.len();
        let top = &self.coeffs[n - 1];
        let mut coeffs = Vec::with_capacity(n);
        for e in 0..n {
            let shifted = if e == 0 { self.ext.base().zero() } else { self.coeffs[e - 1].clone() };
            coeffs.push(shifted.add(&top.mul(&self.ext.0.red[e])));
        }
        LElem { ext: self.ext.clone(), coeffs }
    }

    pub fn mul(&self, other: &LElem) -> Result<LElem, ExtError> {
        if self.ext != other.ext {
            return Err(ExtError::MixedOwners);
        }
        Ok(l_mul(self, other))
    }

    /// `v_L`, certified when the minimum of `n v_K(a_i) + i` is attained by an
    /// exactly known coordinate below every precision bound.
    pub fn valuation(&self) -> Valuation {
        let n = self.coeffs.len() as u32;
        let mut best: Option<u32> = None;
        let mut bound: Option<u32> = None;
        for (i, a) in self.coeffs.iter().enumerate() {
            match a.valuation() {
                Valuation::Exact(v) => {
                    let x = n * v + i as u32;
                    best = Some(best.map_or(x, |b| b.min(x)));
                }
                Valuation::BelowPrecision(p) => {
                    let x = n * p + i as u32;
                    bound = Some(bound.map_or(x, |b| b.min(x)));
                }
            }
        }
        match (best, bound) {
            (Some(b), None) => Valuation::Exact(b),
            (Some(b), Some(lb)) if b < lb => Valuation::Exact(b),
            (Some(b), Some(lb)) => Valuation::BelowPrecision(b.min(lb)),
            (None, Some(lb)) => Valuation::BelowPrecision(lb),
            (None, None) => unreachable!("degree is positive"),
        }
    }

    pub fn mul_matrix(&self) -> MulMatrix {
        let n = self.coeffs.len();
        let mut cols = Vec::with_capacity(n);
        let mut col = self.clone();
        for i in 0..n {
            if i > 0 {
                col = col.mul_by_pi_l();
            }
            cols.push(col.coeffs.clone());
        }
        let rows = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        MulMatrix { rows }
    }

    pub fn norm(&self) -> KElem {
        norm(self)
    }
}

pub fn l_mul(a: &LElem, b: &LElem) -> LElem {
    let n = a.coeffs.len();
    let base = a.ext.base();
    let mut prod = vec![base.zero(); 2 * n - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() && x.prec() >= base.precision() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            prod[i + j] = prod[i + j].add(&x.mul(y));
        }
    }
    let red = &a.ext.0.red;
    for i in (n..2 * n - 1).rev() {
        let top = prod[i].clone();
        for (e, r) in red.iter().enumerate() {
            prod[i - n + e] = prod[i - n + e].add(&top.mul(r));
        }
    }
    prod.truncate(n);
    LElem { ext: a.ext.clone(), coeffs: prod }
}

/// Matrix of multiplication by an element on the basis `1, pi_L, ...`;
/// column `i` holds the coordinates of `alpha * pi_L^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct MulMatrix {
    pub rows: Vec<Vec<KElem>>,
}

/// Coefficients `[a_1, ..., a_n]` of `det(X I - M) = X^n + a_1 X^{n-1} + ... + a_n`.
pub fn charpoly(m: &[Vec<KElem>]) -> Vec<KElem> {
    let n = m.len();
    if n == 0 {
        return Vec::new();
    }
    let field = m[0][0].field().clone();
    // q holds [1, q_1, ..., q_r] for the leading r x r block
    let mut q: Vec<KElem> = vec![field.one(), m[0][0].neg()];
    for r in 1..n {
        let a = &m[r][r];
        let row: Vec<&KElem> = (0..r).map(|c| &m[r][c]).collect();
        let mut v: Vec<KElem> = (0..r).map(|i| m[i][r].clone()).collect();
        let mut s = Vec::with_capacity(r);
        for j in 0..r {
            if j > 0 {
                v = (0..r)
                    .map(|i| (0..r).fold(field.zero(), |acc, c| acc.add(&m[i][c].mul(&v[c]))))
                    .collect();
            }
            s.push(row.iter().zip(&v).fold(field.zero(), |acc, (x, y)| acc.add(&x.mul(y))));
        }
        let mut next = vec![field.zero(); r + 2];
        for (i, qi) in q.iter().enumerate() {
            next[i] = next[i].add(qi);
            next[i + 1] = next[i + 1].sub(&a.mul(qi));
        }
        // subtract sum_j x^{r-1-j} sum_{i<=j} q_i s_{j-i}; x^{r-1-j} sits at index j + 2
        for j in 0..r {
            let t = (0..=j).fold(field.zero(), |acc, i| acc.add(&q[i].mul(&s[j - i])));
            next[j + 2] = next[j + 2].sub(&t);
        }
        q = next;
    }
    q.split_off(1)
}

/// Determinant of the multiplication matrix, i.e. the norm to `K`.
pub fn norm(a: &LElem) -> KElem {
    let m = a.mul_matrix();
    let cp = charpoly(&m.rows);
    let n = cp.len();
    cp[n - 1].signed(n % 2 == 1)
}

/// Minimum polynomial of the uniformizer `expr(pi_L)`.
pub fn minpoly_uniformizer(f: &EisensteinPoly, expr: &XPoly) -> Result<EisensteinPoly, ExtError> {
    let ext = Extension::new(f);
    let alpha = ext.eval(expr);
    minpoly_of(&alpha)
}

pub fn minpoly_of(alpha: &LElem) -> Result<EisensteinPoly, ExtError> {
    let v = alpha.valuation();
    if v != Valuation::Exact(1) {
        return Err(ExtError::NotUniformizer(v.to_string()));
    }
    let m = alpha.mul_matrix();
    let cp = charpoly(&m.rows);
    let coeffs = cp
        .iter()
        .enumerate()
        .map(|(i, a)| Some(a.signed((i + 1) % 2 == 1)))
        .collect();
    EisensteinPoly::new(alpha.ext.base(), coeffs).map_err(ExtError::NotEisensteinResult)
}
