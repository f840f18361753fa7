//! Finite residue fields `F_{p^d}` and the additive maps `x -> x^{p^k} - c x`
//! whose cokernels parametrise the last digit of a standard form.
//!
//! Elements are coefficient vectors on the basis `1, g, ..., g^{d-1}`, where
//! `g` is a root of the field's monic irreducible modulus. The total order on
//! elements compares coefficients starting from the constant term; every
//! enumeration in this crate (elements, coset representatives, solutions)
//! follows that order so that outputs are reproducible.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::literal;

/// Largest supported extension degree (irreducibility is checked exhaustively).
pub const MAX_DEGREE: usize = 12;
/// Largest supported characteristic; keeps every intermediate product in `u64`.
pub const MAX_PRIME: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RfError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic {0} exceeds the supported bound {MAX_PRIME}")]
    PrimeTooLarge(u64),
    #[error("extension degree {0} outside the supported range 1..={MAX_DEGREE}")]
    DegreeOutOfRange(usize),
    #[error("field of size {p}^{d} is too large")]
    FieldTooLarge { p: u64, d: usize },
    #[error("modulus must be monic of degree {expected}, got `{found}`")]
    BadModulus { expected: usize, found: String },
    #[error("modulus `{0}` is reducible")]
    ReducibleModulus(String),
    #[error("omega must be nonzero")]
    ZeroOmega,
    #[error("b0 = {0} is divisible by the characteristic")]
    B0DivisibleByP(u64),
    #[error("elements belong to different residue fields")]
    MixedFields,
    #[error("zero is not invertible")]
    ZeroInverse,
    #[error("cannot parse residue literal `{0}`: {1}")]
    Parse(String, String),
}

struct Inner {
    p: u64,
    d: usize,
    /// Monic modulus, `d + 1` coefficients from the constant term upwards.
    modulus: Vec<u64>,
    q: u64,
}

/// The finite field `F_p[g]/(modulus)`.
#[derive(Clone)]
pub struct ResidueField(Arc<Inner>);

impl PartialEq for ResidueField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for ResidueField {}

impl fmt::Debug for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod ({})", self.0.p, self.0.d, self.modulus_literal())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

impl ResidueField {
    /// Builds `F_{p^d}`. Without an explicit modulus the smallest monic
    /// irreducible polynomial in element order is used.
    pub fn new(p: u64, d: usize, modulus: Option<&[u64]>) -> Result<Self, RfError> {
        if !is_prime(p) {
            return Err(RfError::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(RfError::PrimeTooLarge(p));
        }
        if d == 0 || d > MAX_DEGREE {
            return Err(RfError::DegreeOutOfRange(d));
        }
        let q = (p as u128).checked_pow(d as u32).filter(|q| *q < (1u128 << 62));
        let q = q.ok_or(RfError::FieldTooLarge { p, d })? as u64;
        let modulus = match modulus {
            Some(m) => {
                let m: Vec<u64> = m.iter().map(|c| c % p).collect();
                let m = trim(m);
                if m.len() != d + 1 || m[d] != 1 {
                    return Err(RfError::BadModulus {
                        expected: d,
                        found: literal::render_poly_in(&m, "g"),
                    });
                }
                if !is_irreducible(&m, p) {
                    return Err(RfError::ReducibleModulus(literal::render_poly_in(&m, "g")));
                }
                m
            }
            None => smallest_irreducible(p, d),
        };
        Ok(ResidueField(Arc::new(Inner { p, d, modulus, q })))
    }

    /// Parses a modulus literal such as `g^2 + 1`.
    pub fn with_modulus_literal(p: u64, d: usize, modulus: &str) -> Result<Self, RfError> {
        let coeffs = literal::parse_g_poly(modulus, p)
            .map_err(|e| RfError::Parse(modulus.to_string(), e))?;
        Self::new(p, d, Some(&coeffs))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn degree(&self) -> usize {
        self.0.d
    }
    pub fn size(&self) -> u64 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }
    pub fn modulus_literal(&self) -> String {
        literal::render_poly_in(&self.0.modulus, "g")
    }

    pub fn zero(&self) -> RFElem {
        RFElem { field: self.clone(), c: vec![0; self.0.d] }
    }
    pub fn one(&self) -> RFElem {
        self.from_int(1)
    }
    pub fn from_int(&self, n: i64) -> RFElem {
        let mut c = vec![0; self.0.d];
        c[0] = n.rem_euclid(self.0.p as i64) as u64;
        RFElem { field: self.clone(), c }
    }
    /// The class of `g` itself.
    pub fn generator(&self) -> RFElem {
        self.from_poly(&[0, 1])
    }
    /// Reduces an arbitrary integer polynomial in `g`.
    pub fn from_poly(&self, coeffs: &[u64]) -> RFElem {
        let p = self.0.p;
        let mut v: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
        self.reduce_raw(&mut v);
        RFElem { field: self.clone(), c: v }
    }
    pub fn from_coeffs(&self, coeffs: Vec<u64>) -> RFElem {
        self.from_poly(&coeffs)
    }
    pub fn parse(&self, s: &str) -> Result<RFElem, RfError> {
        let coeffs =
            literal::parse_g_poly(s, self.0.p).map_err(|e| RfError::Parse(s.to_string(), e))?;
        Ok(self.from_poly(&coeffs))
    }

    /// Element with index `i` in the canonical order (`0 <= i < q`).
    pub fn element(&self, mut i: u64) -> RFElem {
        let (p, d) = (self.0.p, self.0.d);
        let mut c = vec![0; d];
        for slot in c.iter_mut().rev() {
            *slot = i % p;
            i /= p;
        }
        RFElem { field: self.clone(), c }
    }

    /// All `q` elements in canonical order, starting with zero.
    pub fn elements(&self) -> impl Iterator<Item = RFElem> + '_ {
        (0..self.0.q).map(move |i| self.element(i))
    }

    /// Reduces a coefficient vector (entries already `< p`) modulo the modulus
    /// in place, leaving exactly `d` entries.
    pub(crate) fn reduce_raw(&self, v: &mut Vec<u64>) {
        let (p, d) = (self.0.p, self.0.d);
        let m = &self.0.modulus;
        if v.len() > d {
            for i in (d..v.len()).rev() {
                let c = v[i];
                if c != 0 {
                    let neg = p - c;
                    for j in 0..d {
                        v[i - d + j] = (v[i - d + j] + neg * m[j]) % p;
                    }
                }
            }
        }
        v.resize(d, 0);
    }

    /// Product of two raw coefficient vectors of length `d`.
    pub(crate) fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (p, d) = (self.0.p, self.0.d);
        let mut out = vec![0u64; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        self.reduce_raw(&mut out);
        out
    }
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p`.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= dm {
        return r;
    }
    for i in (dm..r.len()).rev() {
        let c = r[i] % p;
        if c != 0 {
            let neg = p - c;
            for j in 0..=dm {
                r[i - dm + j] = (r[i - dm + j] + neg * m[j]) % p;
            }
        }
    }
    r.truncate(dm);
    r
}

/// Exhaustive trial division by every monic polynomial of degree `1..=d/2`.
pub(crate) fn is_irreducible(m: &[u64], p: u64) -> bool {
    let d = m.len() - 1;
    if d == 1 {
        return true;
    }
    for e in 1..=d / 2 {
        let count = p.pow(e as u32);
        let mut divisor = vec![0u64; e + 1];
        divisor[e] = 1;
        for idx in 0..count {
            let mut x = idx;
            for slot in divisor.iter_mut().take(e) {
                *slot = x % p;
                x /= p;
            }
            if poly_rem(m, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible of degree `d`, scanning lower coefficients with the
/// constant term most significant.
fn smallest_irreducible(p: u64, d: usize) -> Vec<u64> {
    let count = p.pow(d as u32);
    for idx in 0..count {
        let mut m = vec![0u64; d + 1];
        m[d] = 1;
        let mut x = idx;
        for i in (0..d).rev() {
            m[i] = x % p;
            x /= p;
        }
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("every finite field has an irreducible polynomial of each degree")
}

/// An element of a [`ResidueField`].
#[derive(Clone)]
pub struct RFElem {
    field: ResidueField,
    c: Vec<u64>,
}

impl PartialEq for RFElem {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.field == other.field
    }
}
impl Eq for RFElem {}

impl std::hash::Hash for RFElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl PartialOrd for RFElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for RFElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.cmp(&other.c)
    }
}

impl fmt::Debug for RFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for RFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&literal::render_poly_in(&self.c, "g"))
    }
}

impl RFElem {
    pub fn field(&self) -> &ResidueField {
        &self.field
    }
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }
    /// Position of this element in the canonical enumeration.
    pub fn index(&self) -> u64 {
        let p = self.field.p();
        self.c.iter().fold(0, |acc, &x| acc * p + x)
    }

    fn check(&self, other: &RFElem) {
        debug_assert!(self.field == other.field, "mixed residue fields");
    }

    pub fn add(&self, other: &RFElem) -> RFElem {
        self.check(other);
        let p = self.field.p();
        let c = self.c.iter().zip(&other.c).map(|(a, b)| (a + b) % p).collect();
        RFElem { field: self.field.clone(), c }
    }
    pub fn sub(&self, other: &RFElem) -> RFElem {
        self.add(&other.neg())
    }
    pub fn neg(&self) -> RFElem {
        let p = self.field.p();
        let c = self.c.iter().map(|&a| (p - a) % p).collect();
        RFElem { field: self.field.clone(), c }
    }
    pub fn mul(&self, other: &RFElem) -> RFElem {
        self.check(other);
        RFElem { field: self.field.clone(), c: self.field.mul_raw(&self.c, &other.c) }
    }
    pub fn scale(&self, n: i64) -> RFElem {
        self.mul(&self.field.from_int(n))
    }
    pub fn pow(&self, mut e: u64) -> RFElem {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
    pub fn frobenius(&self) -> RFElem {
        self.pow(self.field.p())
    }
    /// `x^{p^k}` by `k` Frobenius steps.
    pub fn frobenius_pow(&self, k: u32) -> RFElem {
        let d = self.field.degree() as u32;
        (0..k % d).fold(self.clone(), |x, _| x.frobenius())
    }
    pub fn inv(&self) -> Result<RFElem, RfError> {
        if self.is_zero() {
            return Err(RfError::ZeroInverse);
        }
        Ok(self.pow(self.field.size() - 2))
    }
    /// Multiplicative order of a nonzero element.
    pub fn order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let n = self.field.size() - 1;
        let mut ord = n;
        for f in prime_factors(n) {
            while ord.is_multiple_of(f) && self.pow(ord / f).is_one() {
                ord /= f;
            }
        }
        Some(ord)
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The unique `x` with `x^{p^k} = a`.
pub fn rf_pk_root(a: &RFElem, k: u32) -> RFElem {
    let d = a.field().degree() as u32;
    let m = (d - k % d) % d;
    a.frobenius_pow(m)
}

/// Whether `a` is an `n`-th power in the residue field.
pub fn rf_is_nth_power(a: &RFElem, n: u64) -> bool {
    if a.is_zero() {
        return true;
    }
    let q1 = a.field().size() - 1;
    let g = num_integer::gcd(n, q1);
    a.pow(q1 / g).is_one()
}

/// Parameters `(k, A0, b0, omega)` of the residue map
/// `x -> x^{p^k} - (-1)^{A0} b0 omega x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiParams {
    pub k: u32,
    pub a0: u64,
    pub b0: u64,
    pub omega: RFElem,
}

impl PsiParams {
    pub fn new(k: u32, a0: u64, b0: u64, omega: RFElem) -> Result<Self, RfError> {
        if omega.is_zero() {
            return Err(RfError::ZeroOmega);
        }
        if b0.is_multiple_of(omega.field().p()) {
            return Err(RfError::B0DivisibleByP(b0));
        }
        Ok(PsiParams { k, a0, b0, omega })
    }

    /// The linear coefficient `(-1)^{A0} b0 omega`.
    pub fn linear_coefficient(&self) -> RFElem {
        let sign = if self.a0.is_multiple_of(2) { 1 } else { -1 };
        self.omega.scale(sign * (self.b0 % self.omega.field().p()) as i64)
    }

    pub fn eval(&self, x: &RFElem) -> RFElem {
        x.frobenius_pow(self.k).sub(&self.linear_coefficient().mul(x))
    }
}

pub fn psi_bar_eval(k: u32, a0: u64, b0: u64, omega: &RFElem, x: &RFElem) -> Result<RFElem, RfError> {
    Ok(PsiParams::new(k, a0, b0, omega.clone())?.eval(x))
}

/// Linear-algebra view of the map `psi` over `F_p`: its matrix on the basis
/// `1, g, ..., g^{d-1}`, the image, and a canonical set of coset
/// representatives for the cokernel.
#[derive(Clone, Debug)]
pub struct AdditiveMapAnalysis {
    pub params: PsiParams,
    /// `matrix[row][col]`: coordinate `row` of `psi(g^col)`.
    pub matrix: Vec<Vec<u64>>,
    pub rank: usize,
    /// Lexicographically first element of every coset of the image, in order.
    pub coset_reps: Vec<RFElem>,
    image: EchelonBasis,
    kernel: EchelonBasis,
}

/// Coset representatives of `F_q / psi(F_q)`: each coset is represented by its
/// smallest element in the canonical order, and the list is sorted, so the
/// first entry is zero and a surjective map yields `[0]`.
pub fn coset_reps(k: u32, a0: u64, b0: u64, omega: &RFElem) -> Result<AdditiveMapAnalysis, RfError> {
    Ok(AdditiveMapAnalysis::new(PsiParams::new(k, a0, b0, omega.clone())?))
}

impl AdditiveMapAnalysis {
    pub fn new(params: PsiParams) -> Self {
        let field = params.omega.field().clone();
        let (p, d) = (field.p(), field.degree());
        let columns: Vec<Vec<u64>> = (0..d)
            .map(|i| {
                let mut basis = vec![0; d];
                basis[i] = 1;
                params.eval(&field.from_coeffs(basis)).c
            })
            .collect();
        let matrix = (0..d).map(|r| columns.iter().map(|col| col[r]).collect()).collect();
        let image = EchelonBasis::span(p, d, columns.clone());
        let kernel = EchelonBasis::span(p, d, kernel_vectors(p, d, &columns));
        let rank = image.rows.len();

        let free: Vec<usize> = (0..d).filter(|i| !image.pivots.contains(i)).collect();
        let count = p.pow(free.len() as u32);
        let coset_reps = (0..count)
            .map(|mut idx| {
                let mut c = vec![0; d];
                for &pos in free.iter().rev() {
                    c[pos] = idx % p;
                    idx /= p;
                }
                field.from_coeffs(c)
            })
            .collect();
        AdditiveMapAnalysis { params, matrix, rank, coset_reps, image, kernel }
    }

    pub fn is_surjective(&self) -> bool {
        self.rank == self.params.omega.field().degree()
    }

    /// The representative of the coset containing `x`.
    pub fn coset_rep_of(&self, x: &RFElem) -> RFElem {
        x.field().from_coeffs(self.image.normal_form(&x.c))
    }

    pub fn in_image(&self, x: &RFElem) -> bool {
        self.image.normal_form(&x.c).iter().all(|&c| c == 0)
    }

    /// Smallest `r` (canonical order) with `psi(r) = y`, if any.
    pub fn solve(&self, y: &RFElem) -> Option<RFElem> {
        let field = y.field();
        let (p, d) = (field.p(), field.degree());
        let particular = solve_linear(p, d, &self.matrix, &y.c)?;
        Some(field.from_coeffs(self.kernel.normal_form(&particular)))
    }
}

/// Row-reduced basis of a subspace of `F_p^d`; pivots are the leftmost
/// nonzero coordinates, so normal forms are lexicographically minimal.
#[derive(Clone, Debug)]
struct EchelonBasis {
    p: u64,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl EchelonBasis {
    fn span(p: u64, d: usize, vectors: Vec<Vec<u64>>) -> Self {
        let mut rows = vectors;
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..d {
            let Some(found) = (top..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(top, found);
            let inv = inv_mod(rows[top][col], p);
            for x in rows[top].iter_mut() {
                *x = *x * inv % p;
            }
            for r in 0..rows.len() {
                if r != top && rows[r][col] != 0 {
                    let f = rows[r][col];
                    for c in 0..d {
                        rows[r][c] = (rows[r][c] + (p - f) * rows[top][c]) % p;
                    }
                }
            }
            pivots.push(col);
            top += 1;
        }
        rows.truncate(top);
        EchelonBasis { p, rows, pivots }
    }

    fn normal_form(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut out = v.to_vec();
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            let f = out[col];
            if f != 0 {
                for (o, &x) in out.iter_mut().zip(row) {
                    *o = (*o + (p - f) * x) % p;
                }
            }
        }
        out
    }
}

/// Basis of the null space of the matrix whose columns are `columns`.
fn kernel_vectors(p: u64, d: usize, columns: &[Vec<u64>]) -> Vec<Vec<u64>> {
    // rows of A
    let rows: Vec<Vec<u64>> = (0..d).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
    let ech = EchelonBasis::span(p, columns.len(), rows);
    let n = columns.len();
    let free: Vec<usize> = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// Some solution of `A x = y` over `F_p`, with `A` given by rows.
fn solve_linear(p: u64, d: usize, a: &[Vec<u64>], y: &[u64]) -> Option<Vec<u64>> {
    let n = a.first().map_or(0, |r| r.len());
    let aug: Vec<Vec<u64>> = (0..d)
        .map(|r| {
            let mut row = a[r].clone();
            row.push(y[r]);
            row
        })
        .collect();
    let ech = EchelonBasis::span(p, n + 1, aug);
    if ech.pivots.contains(&n) {
        return None;
    }
    let mut x = vec![0u64; n];
    for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
        x[pc] = row[n];
    }
    Some(x)
}
