//! Base fields `K` with a fixed absolute `pi`-adic precision.
//!
//! Two models are supported: equal characteristic `F_q((t))`, where elements
//! are truncated power series with coefficients in the residue field, and the
//! unramified extension of `Q_p` with residue field `F_q`, where elements are
//! exact residues in `(Z/p^N)[g]/(M(g))` for the lifted modulus `M`. Every
//! element carries its own absolute precision `prec <= N`: it is known modulo
//! `pi^prec` and nothing beyond that is ever reported.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::residue_field::{RFElem, ResidueField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KError {
    #[error("element of valuation {0} is not a unit")]
    NonUnitInverse(String),
    #[error("elements belong to different base fields")]
    MixedFields,
    #[error("bad field description: {0}")]
    BadSpec(String),
    #[error("cannot divide by pi^{k}: element is only known to valuation {known}")]
    NotDivisible { k: u32, known: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    /// `F_q((t))`, absolute ramification index infinite.
    EqualChar,
    /// Unramified extension of `Q_p`, absolute ramification index 1.
    MixedUnramified,
}

/// A nonnegative integer or `+inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    Fin(u64),
    Inf,
}

impl ExtInt {
    pub fn finite(self) -> Option<u64> {
        match self {
            ExtInt::Fin(v) => Some(v),
            ExtInt::Inf => None,
        }
    }
    pub fn is_inf(self) -> bool {
        self == ExtInt::Inf
    }
    pub fn add(self, other: ExtInt) -> ExtInt {
        match (self, other) {
            (ExtInt::Fin(a), ExtInt::Fin(b)) => ExtInt::Fin(a + b),
            _ => ExtInt::Inf,
        }
    }
    pub fn mul(self, m: u64) -> ExtInt {
        match self {
            ExtInt::Fin(a) => ExtInt::Fin(a * m),
            ExtInt::Inf if m == 0 => ExtInt::Fin(0),
            ExtInt::Inf => ExtInt::Inf,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::Fin(v) => write!(f, "{v}"),
            ExtInt::Inf => f.write_str("inf"),
        }
    }
}

/// Result of a valuation query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Exact(u32),
    /// Every digit below `prec` vanishes; the valuation is unknown but `>= prec`.
    BelowPrecision(u32),
}

impl Valuation {
    pub fn exact(self) -> Option<u32> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::BelowPrecision(_) => None,
        }
    }
    /// A certified lower bound.
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Exact(v) | Valuation::BelowPrecision(v) => v,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::BelowPrecision(v) => write!(f, ">={v}"),
        }
    }
}

struct Inner {
    model: Model,
    residue: ResidueField,
    precision: u32,
    /// `p^0 .. p^N` (mixed model only).
    p_pows: Vec<u64>,
}

#[derive(Clone)]
pub struct LocalField(Arc<Inner>);

impl PartialEq for LocalField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.model == other.0.model
                && self.0.precision == other.0.precision
                && self.0.residue == other.0.residue)
    }
}
impl Eq for LocalField {}

impl fmt::Debug for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} over {:?}, precision {}", self.0.model, self.0.residue, self.0.precision)
    }
}

impl LocalField {
    pub fn new(model: Model, residue: ResidueField, precision: u32) -> Result<Self, KError> {
        if precision == 0 {
            return Err(KError::BadSpec("precision must be at least 1".into()));
        }
        let mut p_pows = Vec::new();
        if model == Model::MixedUnramified {
            let p = residue.p() as u128;
            let mut acc: u128 = 1;
            p_pows.push(1u64);
            for _ in 0..precision {
                acc *= p;
                if acc >= 1u128 << 63 {
                    return Err(KError::BadSpec(format!(
                        "{}^{} does not fit the 63-bit integer representation",
                        residue.p(),
                        precision
                    )));
                }
                p_pows.push(acc as u64);
            }
        }
        Ok(LocalField(Arc::new(Inner { model, residue, precision, p_pows })))
    }

    pub fn model(&self) -> Model {
        self.0.model
    }
    pub fn residue(&self) -> &ResidueField {
        &self.0.residue
    }
    pub fn precision(&self) -> u32 {
        self.0.precision
    }
    pub fn p(&self) -> u64 {
        self.0.residue.p()
    }
    /// Absolute ramification index `e_K`.
    pub fn e_k(&self) -> ExtInt {
        match self.0.model {
            Model::EqualChar => ExtInt::Inf,
            Model::MixedUnramified => ExtInt::Fin(1),
        }
    }

    /// Same residue field and model with a different precision.
    pub fn with_precision(&self, precision: u32) -> Result<Self, KError> {
        LocalField::new(self.0.model, self.0.residue.clone(), precision)
    }

    fn modulus_pow(&self, prec: u32) -> u64 {
        self.0.p_pows[prec as usize]
    }

    fn raw_zero(&self) -> Repr {
        let d = self.0.residue.degree();
        match self.0.model {
            Model::MixedUnramified => Repr::Mixed(vec![0; d]),
            Model::EqualChar => Repr::Equal(vec![vec![0; d]; self.0.precision as usize]),
        }
    }

    pub fn zero(&self) -> KElem {
        self.zero_with_prec(self.0.precision)
    }
    pub fn zero_with_prec(&self, prec: u32) -> KElem {
        KElem { field: self.clone(), prec: prec.min(self.0.precision), repr: self.raw_zero() }
    }
    pub fn one(&self) -> KElem {
        self.from_int(1)
    }
    /// The uniformizer `pi` (`p`, respectively `t`).
    pub fn pi(&self) -> KElem {
        self.one().shift_up(1)
    }
    pub fn pi_pow(&self, k: u32) -> KElem {
        self.one().shift_up(k)
    }

    pub fn from_int(&self, n: i64) -> KElem {
        let mut x = self.zero();
        match &mut x.repr {
            Repr::Mixed(c) => {
                let m = self.modulus_pow(self.0.precision) as i128;
                c[0] = (n as i128).rem_euclid(m) as u64;
            }
            Repr::Equal(digits) => {
                digits[0][0] = (n as i128).rem_euclid(self.p() as i128) as u64;
            }
        }
        x.normalize();
        x
    }

    /// Element with constant coefficients given on the residue basis; in the
    /// mixed model these are read as integers (not Teichmüller digits).
    pub fn from_basis_ints(&self, coeffs: &[i64]) -> KElem {
        let mut x = self.zero();
        match &mut x.repr {
            Repr::Mixed(c) => {
                let m = self.modulus_pow(self.0.precision) as i128;
                for (slot, &v) in c.iter_mut().zip(coeffs) {
                    *slot = (v as i128).rem_euclid(m) as u64;
                }
            }
            Repr::Equal(digits) => {
                let p = self.p() as i128;
                for (slot, &v) in digits[0].iter_mut().zip(coeffs) {
                    *slot = (v as i128).rem_euclid(p) as u64;
                }
            }
        }
        x.normalize();
        x
    }

    /// Some lift of `a` (its coefficients read as integers in `[0, p)`).
    pub fn naive_lift(&self, a: &RFElem) -> KElem {
        let coeffs: Vec<i64> = a.coeffs().iter().map(|&c| c as i64).collect();
        self.from_basis_ints(&coeffs)
    }

    /// The Teichmüller representative of `a` at full precision.
    pub fn teich(&self, a: &RFElem) -> KElem {
        let x = self.naive_lift(a);
        match self.0.model {
            Model::EqualChar => x,
            Model::MixedUnramified => {
                let q = self.0.residue.size();
                (0..self.0.precision).fold(x, |y, _| y.pow(q))
            }
        }
    }

    /// `sum teich(a_i) pi^i`, at full precision.
    pub fn from_digits(&self, digits: &[RFElem]) -> KElem {
        let mut acc = self.zero();
        for (i, a) in digits.iter().enumerate() {
            if !a.is_zero() && (i as u32) < self.0.precision {
                acc = acc.add(&self.teich(a).shift_up(i as u32));
            }
        }
        acc
    }

    /// `sum teich(a_i) pi^i` from `(exponent, digit)` pairs.
    pub fn from_digit_terms(&self, terms: &[(u32, RFElem)]) -> KElem {
        let mut acc = self.zero();
        for (i, a) in terms {
            if !a.is_zero() && *i < self.0.precision {
                acc = acc.add(&self.teich(a).shift_up(*i));
            }
        }
        acc
    }
}

#[derive(Clone, PartialEq, Eq)]
enum Repr {
    /// Coefficients on `1, g, ..., g^{d-1}` modulo `p^prec`.
    Mixed(Vec<u64>),
    /// `N` series coefficients, each a residue coefficient vector; entries at
    /// index `>= prec` are zero.
    Equal(Vec<Vec<u64>>),
}

/// An element of a [`LocalField`], known modulo `pi^prec`.
#[derive(Clone)]
pub struct KElem {
    field: LocalField,
    prec: u32,
    repr: Repr,
}

impl PartialEq for KElem {
    fn eq(&self, other: &Self) -> bool {
        self.prec == other.prec && self.repr == other.repr && self.field == other.field
    }
}
impl Eq for KElem {}

impl fmt::Debug for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::literal::render_k(self))
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::literal::render_k(self))
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl KElem {
    pub fn field(&self) -> &LocalField {
        &self.field
    }
    pub fn prec(&self) -> u32 {
        self.prec
    }

    fn check(&self, other: &KElem) {
        debug_assert!(self.field == other.field, "mixed base fields");
    }

    fn normalize(&mut self) {
        match &mut self.repr {
            Repr::Mixed(c) => {
                let m = self.field.modulus_pow(self.prec);
                for x in c.iter_mut() {
                    *x %= m;
                }
            }
            Repr::Equal(digits) => {
                for d in digits.iter_mut().skip(self.prec as usize) {
                    d.iter_mut().for_each(|x| *x = 0);
                }
            }
        }
    }

    /// Forgets everything beyond `pi^prec` (never increases precision).
    pub fn truncate(&self, prec: u32) -> KElem {
        let mut out = self.clone();
        out.prec = self.prec.min(prec);
        out.normalize();
        out
    }

    /// Reinterprets a value as known to precision `prec`, filling unknown
    /// digits with zero. Used for values that are exact by construction.
    pub fn assume_prec(&self, prec: u32) -> KElem {
        let mut out = self.clone();
        out.prec = prec.min(self.field.precision());
        out.normalize();
        out
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Mixed(c) => c.iter().all(|&x| x == 0),
            Repr::Equal(d) => d.iter().all(|v| v.iter().all(|&x| x == 0)),
        }
    }

    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Mixed(c) => {
                let p = self.field.p();
                let v = c
                    .iter()
                    .filter(|&&x| x != 0)
                    .map(|&x| {
                        let mut x = x;
                        let mut v = 0;
                        while x % p == 0 {
                            x /= p;
                            v += 1;
                        }
                        v
                    })
                    .min();
                match v {
                    Some(v) => Valuation::Exact(v),
                    None => Valuation::BelowPrecision(self.prec),
                }
            }
            Repr::Equal(d) => match d.iter().position(|v| v.iter().any(|&x| x != 0)) {
                Some(i) => Valuation::Exact(i as u32),
                None => Valuation::BelowPrecision(self.prec),
            },
        }
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Exact(0)
    }

    pub fn add(&self, other: &KElem) -> KElem {
        self.check(other);
        let prec = self.prec.min(other.prec);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Mixed(a), Repr::Mixed(b)) => {
                let m = self.field.modulus_pow(prec);
                Repr::Mixed(a.iter().zip(b).map(|(x, y)| ((*x as u128 + *y as u128) % m as u128) as u64).collect())
            }
            (Repr::Equal(a), Repr::Equal(b)) => {
                let p = self.field.p();
                Repr::Equal(
                    a.iter()
                        .zip(b)
                        .map(|(u, v)| u.iter().zip(v).map(|(x, y)| (x + y) % p).collect())
                        .collect(),
                )
            }
            _ => unreachable!("mixed representations"),
        };
        let mut out = KElem { field: self.field.clone(), prec, repr };
        out.normalize();
        out
    }

    pub fn neg(&self) -> KElem {
        let repr = match &self.repr {
            Repr::Mixed(a) => {
                let m = self.field.modulus_pow(self.prec);
                Repr::Mixed(a.iter().map(|&x| (m - x % m) % m).collect())
            }
            Repr::Equal(a) => {
                let p = self.field.p();
                Repr::Equal(a.iter().map(|u| u.iter().map(|&x| (p - x) % p).collect()).collect())
            }
        };
        KElem { field: self.field.clone(), prec: self.prec, repr }
    }

    pub fn sub(&self, other: &KElem) -> KElem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &KElem) -> KElem {
        self.check(other);
        let prec = self.prec.min(other.prec);
        let rf = self.field.residue();
        let d = rf.degree();
        let repr = match (&self.repr, &other.repr) {
            (Repr::Mixed(a), Repr::Mixed(b)) => {
                let m = self.field.modulus_pow(prec);
                let mut prod = vec![0u64; 2 * d - 1];
                for (i, &x) in a.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.iter().enumerate() {
                        prod[i + j] = ((prod[i + j] as u128 + x as u128 * y as u128) % m as u128) as u64;
                    }
                }
                let modulus = rf.modulus();
                for i in (d..prod.len()).rev() {
                    let c = prod[i];
                    if c != 0 {
                        let neg = m - c;
                        for j in 0..d {
                            let t = mulmod(neg, modulus[j], m);
                            prod[i - d + j] = ((prod[i - d + j] as u128 + t as u128) % m as u128) as u64;
                        }
                    }
                }
                prod.truncate(d);
                Repr::Mixed(prod)
            }
            (Repr::Equal(a), Repr::Equal(b)) => {
                let n = a.len();
                let p = self.field.p();
                let mut acc = vec![vec![0u64; 2 * d]; n];
                for i in 0..(prec as usize).min(n) {
                    if a[i].iter().all(|&x| x == 0) {
                        continue;
                    }
                    for j in 0..(prec as usize - i) {
                        if b[j].iter().all(|&x| x == 0) {
                            continue;
                        }
                        let slot = &mut acc[i + j];
                        for (s, &x) in a[i].iter().enumerate() {
                            if x == 0 {
                                continue;
                            }
                            for (t, &y) in b[j].iter().enumerate() {
                                slot[s + t] = (slot[s + t] + x * y) % p;
                            }
                        }
                    }
                }
                Repr::Equal(
                    acc.into_iter()
                        .map(|mut v| {
                            rf.reduce_raw(&mut v);
                            v
                        })
                        .collect(),
                )
            }
            _ => unreachable!("mixed representations"),
        };
        let mut out = KElem { field: self.field.clone(), prec, repr };
        out.normalize();
        out
    }

    pub fn scale(&self, n: i64) -> KElem {
        self.mul(&self.field.from_int(n))
    }

    pub fn pow(&self, mut e: u64) -> KElem {
        let mut base = self.clone();
        let mut acc = self.field.one().truncate(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Signed power: `(-1)^s * x^e` helper used by sign-convention code.
    pub fn signed(&self, negative: bool) -> KElem {
        if negative {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Inverse of a unit, by Newton iteration from the residue inverse.
    pub fn inv(&self) -> Result<KElem, KError> {
        if !self.is_unit() {
            return Err(KError::NonUnitInverse(self.valuation().to_string()));
        }
        let r = self.residue().inv().expect("unit has nonzero residue");
        let mut x = self.field.naive_lift(&r).truncate(self.prec);
        let two = self.field.from_int(2);
        let mut good = 1u32;
        while good < self.prec {
            x = x.mul(&two.sub(&self.mul(&x)));
            good *= 2;
        }
        Ok(x)
    }

    /// Multiplication by `pi^k`.
    pub fn shift_up(&self, k: u32) -> KElem {
        let n = self.field.precision();
        let prec = (self.prec + k).min(n);
        let repr = match &self.repr {
            Repr::Mixed(a) => {
                let m = self.field.modulus_pow(prec);
                let f = if k >= n { 0 } else { self.field.modulus_pow(k) };
                Repr::Mixed(a.iter().map(|&x| mulmod(x, f, m)).collect())
            }
            Repr::Equal(a) => {
                let d = self.field.residue().degree();
                let mut out = vec![vec![0; d]; n as usize];
                for i in 0..(n.saturating_sub(k)) as usize {
                    out[i + k as usize] = a[i].clone();
                }
                Repr::Equal(out)
            }
        };
        let mut out = KElem { field: self.field.clone(), prec, repr };
        out.normalize();
        out
    }

    /// Exact division by `pi^k`; requires every digit below `k` to vanish.
    pub fn shift_down(&self, k: u32) -> Result<KElem, KError> {
        if k == 0 {
            return Ok(self.clone());
        }
        if self.valuation().lower_bound() < k {
            return Err(KError::NotDivisible { k, known: self.valuation().to_string() });
        }
        if k > self.prec {
            return Ok(self.field.zero_with_prec(0));
        }
        let prec = self.prec - k;
        let repr = match &self.repr {
            Repr::Mixed(a) => {
                let f = self.field.modulus_pow(k);
                Repr::Mixed(a.iter().map(|&x| x / f).collect())
            }
            Repr::Equal(a) => {
                let d = self.field.residue().degree();
                let n = a.len();
                let mut out = vec![vec![0; d]; n];
                for i in k as usize..n {
                    out[i - k as usize] = a[i].clone();
                }
                Repr::Equal(out)
            }
        };
        let mut out = KElem { field: self.field.clone(), prec, repr };
        out.normalize();
        Ok(out)
    }

    /// Image in the residue field (zero when `prec = 0`).
    pub fn residue(&self) -> RFElem {
        let rf = self.field.residue();
        if self.prec == 0 {
            return rf.zero();
        }
        match &self.repr {
            Repr::Mixed(a) => rf.from_poly(a),
            Repr::Equal(a) => rf.from_coeffs(a[0].clone()),
        }
    }

    /// Residue of `x / pi^t`; requires `v(x) >= t`.
    pub fn residue_at(&self, t: u32) -> Result<RFElem, KError> {
        Ok(self.shift_down(t)?.residue())
    }

    /// Greedy Teichmüller expansion: `(i, a_i)` for each nonzero digit below
    /// the precision, with `x = sum teich(a_i) pi^i`.
    pub fn teich_digits(&self) -> Vec<(u32, RFElem)> {
        match &self.repr {
            Repr::Equal(a) => {
                let rf = self.field.residue();
                (0..self.prec)
                    .map(|i| (i, rf.from_coeffs(a[i as usize].clone())))
                    .filter(|(_, x)| !x.is_zero())
                    .collect()
            }
            Repr::Mixed(_) => {
                let mut out = Vec::new();
                let mut rest = self.clone();
                for i in 0..self.prec {
                    let digit = rest.residue_at(i).expect("lower digits were removed");
                    if !digit.is_zero() {
                        rest = rest.sub(&self.field.teich(&digit).shift_up(i));
                        out.push((i, digit));
                    }
                }
                out
            }
        }
    }

    /// All digits `0..prec`, zeros included.
    pub fn digit_vector(&self) -> Vec<RFElem> {
        let rf = self.field.residue();
        let mut out = vec![rf.zero(); self.prec as usize];
        for (i, a) in self.teich_digits() {
            out[i as usize] = a;
        }
        out
    }

    /// Whether `self - other` vanishes modulo `pi^m` (requires both precisions `>= m`).
    pub fn eq_mod(&self, other: &KElem, m: u32) -> bool {
        self.sub(other).truncate(m).is_zero()
    }

    /// Coefficients on the residue basis (integers mod `p^prec`); mixed model only.
    pub fn basis_ints(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Mixed(a) => Some(a),
            Repr::Equal(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3(n: u32) -> LocalField {
        LocalField::new(Model::MixedUnramified, ResidueField::new(3, 1, None).unwrap(), n).unwrap()
    }
    fn q9(n: u32) -> LocalField {
        LocalField::new(Model::MixedUnramified, ResidueField::new(3, 2, None).unwrap(), n).unwrap()
    }
    fn f9t(n: u32) -> LocalField {
        LocalField::new(Model::EqualChar, ResidueField::new(3, 2, None).unwrap(), n).unwrap()
    }

    #[test]
    fn teichmuller_lifts() {
        for k in [q3(8), q9(8), f9t(8)] {
            let one = k.residue().one();
            assert_eq!(k.teich(&one), k.one());
            for a in k.residue().elements() {
                let t = k.teich(&a);
                assert_eq!(t.pow(k.residue().size()), t);
                assert_eq!(t.residue(), a);
            }
        }
        let k = q3(8);
        let two = k.residue().from_int(2);
        assert_eq!(k.teich(&two), k.from_int(-1));
        assert_eq!(k.from_int(-1).teich_digits(), vec![(0, two.clone())]);
        let f = f9t(5);
        let g = f.residue().generator();
        assert_eq!(f.teich(&g).teich_digits(), vec![(0, g)]);
    }

    #[test]
    fn valuations() {
        let k = q9(8);
        let u = k.teich(&k.residue().generator()).add(&k.pi());
        assert_eq!(u.shift_up(3).valuation(), Valuation::Exact(3));
        assert_eq!(k.one().valuation(), Valuation::Exact(0));
        assert_eq!(k.zero().valuation(), Valuation::BelowPrecision(8));
        assert_eq!(k.pi_pow(9).valuation(), Valuation::BelowPrecision(8));
        let f = f9t(8);
        assert_eq!(f.pi_pow(5).valuation(), Valuation::Exact(5));
    }

    #[test]
    fn arithmetic_examples() {
        let k = q3(8);
        let two = k.residue().from_int(2);
        let t2 = k.teich(&two);
        assert_eq!(t2.mul(&t2), k.one());
        let x = k.from_int(7).shift_up(2).truncate(5);
        assert!(x.add(&x.neg()).is_zero());
        assert_eq!(x.add(&x.neg()).prec(), 5);
        let sum = t2.add(&t2);
        assert_eq!(sum, k.from_int(-2));
        let digits = sum.teich_digits();
        assert_eq!(digits[0], (0, k.residue().from_int(1)));
        assert_eq!(digits[1], (1, k.residue().from_int(2)));
        assert_eq!(k.from_digit_terms(&digits), sum);
        let five: Vec<u64> = k.from_int(5).digit_vector()[..3].iter().map(|a| a.coeffs()[0]).collect();
        assert_eq!(five, vec![2, 2, 1]);
    }

    #[test]
    fn inverse() {
        for k in [q3(10), q9(7), f9t(9)] {
            for a in k.residue().elements().skip(1) {
                let u = k.teich(&a).add(&k.pi().mul(&k.naive_lift(&a)));
                assert_eq!(u.mul(&u.inv().unwrap()), k.one());
            }
            assert!(matches!(k.pi().inv(), Err(KError::NonUnitInverse(_))));
        }
    }

    #[test]
    fn shifts_and_precision() {
        let k = q9(6);
        let x = k.teich(&k.residue().generator()).shift_up(2);
        assert_eq!(x.prec(), 6);
        let y = x.shift_down(2).unwrap();
        assert_eq!(y.prec(), 4);
        assert_eq!(y.residue(), k.residue().generator());
        assert!(x.shift_down(3).is_err());
        let a = k.one().truncate(3);
        assert_eq!(a.mul(&k.one()).prec(), 3);
        assert!(LocalField::new(Model::MixedUnramified, ResidueField::new(3, 1, None).unwrap(), 60).is_err());
    }
}
