//! Eisenstein polynomials and their indices of inseparability.
//!
//! A degree-`n` polynomial is stored through the coefficients `c_1, ..., c_n`
//! of `X^n - c_1 X^{n-1} + c_2 X^{n-2} - ... + (-1)^n c_n`. A coefficient may
//! be an exact zero (`None`), which is the only way a term contributes
//! nothing to the index computations; a stored coefficient that merely
//! vanishes to its precision is a lower bound, never an infinity.

use std::collections::BTreeMap;

use num_rational::Ratio;
use thiserror::Error;

use crate::local_field::{ExtInt, KElem, LocalField, Valuation};

pub type Rat = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EisError {
    #[error("not Eisenstein at coefficient c_{h}: {reason}")]
    NotEisenstein { h: usize, reason: String },
    #[error("insufficient precision at coefficient c_{h}: need {needed} digits")]
    InsufficientPrecision { h: usize, needed: String },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("polynomials have different degrees ({0} and {1})")]
    DegreeMismatch(usize, usize),
    #[error("polynomials live over different base fields")]
    MixedFields,
    #[error("not a two-index extension of degree p^k: {0}")]
    NotTwoIndex(String),
    #[error("polynomial is not monic of the expected degree: {0}")]
    NotMonic(String),
}

/// `v_p(h)`, with `v_p(0)` reported as `u32::MAX`.
pub fn vp(mut h: u64, p: u64) -> u32 {
    if h == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while h.is_multiple_of(p) {
        h /= p;
        v += 1;
    }
    v
}

#[derive(Clone, Debug)]
pub struct EisensteinPoly {
    field: LocalField,
    n: usize,
    u: u64,
    k: u32,
    /// `coeffs[h - 1] = c_h`.
    coeffs: Vec<Option<KElem>>,
}

impl PartialEq for EisensteinPoly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.n == other.n
            && (1..=self.n).all(|h| self.coeff(h) == other.coeff(h))
    }
}

impl EisensteinPoly {
    /// Validates the Eisenstein conditions: `v(c_h) >= 1` for `h < n` and
    /// `v(c_n) = 1`.
    pub fn new(field: &LocalField, coeffs: Vec<Option<KElem>>) -> Result<Self, EisError> {
        let n = coeffs.len();
        if n == 0 {
            return Err(EisError::ZeroDegree);
        }
        for (i, c) in coeffs.iter().enumerate() {
            let h = i + 1;
            let Some(c) = c else {
                if h == n {
                    return Err(EisError::NotEisenstein { h, reason: "constant term is zero".into() });
                }
                continue;
            };
            if c.field() != field {
                return Err(EisError::MixedFields);
            }
            let v = c.valuation();
            if h < n {
                match v {
                    Valuation::Exact(0) => {
                        return Err(EisError::NotEisenstein { h, reason: "coefficient is a unit".into() })
                    }
                    Valuation::BelowPrecision(0) => {
                        return Err(EisError::InsufficientPrecision { h, needed: "1".into() })
                    }
                    _ => {}
                }
            } else {
                match v {
                    Valuation::Exact(1) => {}
                    Valuation::Exact(v) => {
                        return Err(EisError::NotEisenstein {
                            h,
                            reason: format!("constant term has valuation {v}, expected 1"),
                        })
                    }
                    Valuation::BelowPrecision(_) => {
                        return Err(EisError::InsufficientPrecision { h, needed: "2".into() })
                    }
                }
            }
        }
        let p = field.p();
        let k = vp(n as u64, p);
        let u = n as u64 / p.pow(k);
        Ok(EisensteinPoly { field: field.clone(), n, u, k, coeffs })
    }

    /// Builds from a map `h -> c_h` (absent entries are exact zeros).
    pub fn from_terms(field: &LocalField, n: usize, terms: &BTreeMap<usize, KElem>) -> Result<Self, EisError> {
        let mut coeffs = vec![None; n];
        for (&h, c) in terms {
            if h == 0 || h > n {
                return Err(EisError::NotEisenstein { h, reason: "index outside 1..=n".into() });
            }
            coeffs[h - 1] = Some(c.clone());
        }
        Self::new(field, coeffs)
    }

    /// Builds from ordinary monomial coefficients `X^e -> a_e`; the leading
    /// coefficient `a_n` must be exactly 1.
    pub fn from_x_coeffs(field: &LocalField, x_coeffs: &BTreeMap<u32, KElem>) -> Result<Self, EisError> {
        let n = *x_coeffs.keys().next_back().ok_or(EisError::ZeroDegree)? as usize;
        if n == 0 {
            return Err(EisError::ZeroDegree);
        }
        let lead = &x_coeffs[&(n as u32)];
        if lead.prec() == 0 || !lead.sub(&field.one()).is_zero() {
            return Err(EisError::NotMonic(format!("leading coefficient {lead}")));
        }
        let mut coeffs = vec![None; n];
        for (&e, a) in x_coeffs {
            let e = e as usize;
            if e == n {
                continue;
            }
            let h = n - e;
            coeffs[h - 1] = Some(a.signed(h % 2 == 1));
        }
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }
    pub fn degree(&self) -> usize {
        self.n
    }
    pub fn u(&self) -> u64 {
        self.u
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    /// `c_h`, with exact zeros as zero at full precision.
    pub fn coeff(&self, h: usize) -> KElem {
        self.coeffs[h - 1].clone().unwrap_or_else(|| self.field.zero())
    }
    pub fn coeff_opt(&self, h: usize) -> Option<&KElem> {
        self.coeffs[h - 1].as_ref()
    }
    pub fn coeffs(&self) -> &[Option<KElem>] {
        &self.coeffs
    }
    /// Coefficient of `X^e` in the monomial basis, for `e < n`.
    pub fn x_coeff(&self, e: usize) -> KElem {
        let h = self.n - e;
        self.coeff(h).signed(h % 2 == 1)
    }
    /// Minimum precision over stored coefficients.
    pub fn min_prec(&self) -> u32 {
        self.coeffs.iter().flatten().map(|c| c.prec()).min().unwrap_or(self.field.precision())
    }

    /// Number of nonzero terms including the leading `X^n`; coefficients that
    /// vanish to their precision count as zero.
    pub fn term_count(&self) -> usize {
        1 + self.coeffs.iter().flatten().filter(|c| !c.is_zero()).count()
    }

    /// Truncates every stored coefficient to `pi^prec`.
    pub fn truncate(&self, prec: u32) -> EisensteinPoly {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.as_ref().map(|c| c.truncate(prec)))
            .collect();
        EisensteinPoly { coeffs, ..self.clone() }
    }

    /// Replaces coefficients that vanish to their precision by exact zeros.
    pub fn with_exact_zeros(&self) -> EisensteinPoly {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.as_ref().filter(|c| !c.is_zero()).cloned())
            .collect();
        EisensteinPoly { coeffs, ..self.clone() }
    }

    /// Map `h -> c_h` of stored coefficients.
    pub fn terms(&self) -> BTreeMap<usize, KElem> {
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.as_ref().map(|c| (i + 1, c.clone())))
            .collect()
    }

    /// Human-readable monomial rendering, e.g. `X^9 + (1)*pi^1*X^8 + ...`.
    pub fn render(&self) -> String {
        let mut parts = vec![format!("X^{}", self.n)];
        for e in (0..self.n).rev() {
            let h = self.n - e;
            let Some(c) = &self.coeffs[h - 1] else { continue };
            if c.is_zero() && c.prec() >= self.field.precision() {
                continue;
            }
            let a = c.signed(h % 2 == 1);
            let mono = match e {
                0 => String::new(),
                1 => "*X".to_string(),
                _ => format!("*X^{e}"),
            };
            parts.push(format!("[{a}]{mono}"));
        }
        parts.join(" + ")
    }

    pub fn tilde_indices(&self) -> Result<Vec<ExtInt>, EisError> {
        tilde_indices(self)
    }
    pub fn indices(&self) -> Result<InsepProfile, EisError> {
        indices(self)
    }
}

/// Two-index data of a degree-`p^k` profile with `i_0 = ... = i_{k-1} > i_k = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoIndex {
    pub i0: u64,
    pub a0: u64,
    pub b0: u64,
    /// `B = i_0 / (p^k - 1)`.
    pub brk: Rat,
}

impl TwoIndex {
    pub fn from_i0(i0: u64, pk: u64) -> TwoIndex {
        let a0 = i0.div_ceil(pk);
        let b0 = pk * a0 - i0;
        let (a0, b0) = if b0 == 0 { (a0 + 1, pk) } else { (a0, b0) };
        TwoIndex { i0, a0, b0, brk: Rat::new(i0 as i64, pk as i64 - 1) }
    }
    pub fn break_is_integral(&self) -> bool {
        self.brk.is_integer()
    }
    pub fn floor_break(&self) -> u64 {
        self.brk.floor().to_integer() as u64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsepProfile {
    pub p: u64,
    pub n: u64,
    pub u: u64,
    pub k: u32,
    pub e_k: ExtInt,
    pub tilde: Vec<ExtInt>,
    pub idx: Vec<ExtInt>,
    pub distinct_count: usize,
    pub two_index: Option<TwoIndex>,
}

pub fn tilde_indices(f: &EisensteinPoly) -> Result<Vec<ExtInt>, EisError> {
    let p = f.field.p();
    let n = f.n as u64;
    let mut out = Vec::new();
    for j in 0..=f.k {
        let mut best: Option<u64> = None;
        let mut bound: Option<(u64, usize)> = None;
        for h in 1..=f.n {
            if vp(h as u64, p) > j {
                continue;
            }
            let Some(c) = &f.coeffs[h - 1] else { continue };
            match c.valuation() {
                Valuation::Exact(v) => {
                    let val = n * v as u64 - h as u64;
                    best = Some(best.map_or(val, |b| b.min(val)));
                }
                Valuation::BelowPrecision(prec) => {
                    let lb = (n * prec as u64).saturating_sub(h as u64);
                    if bound.is_none_or(|(b, _)| lb < b) {
                        bound = Some((lb, h));
                    }
                }
            }
        }
        let value = match (best, bound) {
            (Some(b), None) => ExtInt::Fin(b),
            (Some(b), Some((lb, _))) if b <= lb => ExtInt::Fin(b),
            (None, None) => ExtInt::Inf,
            (_, Some((_, h))) => {
                let needed = best.map_or("more".to_string(), |b| ((b + h as u64) / n + 1).to_string());
                return Err(EisError::InsufficientPrecision { h, needed });
            }
        };
        out.push(value);
    }
    Ok(out)
}

/// `i_j = min_{j' >= j} (tilde_{j'} + (j' - j) n e_K)`.
pub fn indices_from_tilde(tilde: &[ExtInt], n: u64, e_k: ExtInt) -> Vec<ExtInt> {
    let k = tilde.len() - 1;
    (0..=k)
        .map(|j| {
            (j..=k)
                .map(|jp| tilde[jp].add(e_k.mul(n * (jp - j) as u64)))
                .min()
                .expect("nonempty range")
        })
        .collect()
}

pub fn indices(f: &EisensteinPoly) -> Result<InsepProfile, EisError> {
    let tilde = tilde_indices(f)?;
    let e_k = f.field.e_k();
    let n = f.n as u64;
    let idx = indices_from_tilde(&tilde, n, e_k);
    Ok(profile_from_indices(f.field.p(), n, f.u, f.k, e_k, tilde, idx))
}

pub fn profile_from_indices(
    p: u64,
    n: u64,
    u: u64,
    k: u32,
    e_k: ExtInt,
    tilde: Vec<ExtInt>,
    idx: Vec<ExtInt>,
) -> InsepProfile {
    let mut values = idx.clone();
    values.sort();
    values.dedup();
    let distinct_count = values.len();
    let two_index = if u == 1 && k >= 1 && distinct_count == 2 {
        match idx[0] {
            ExtInt::Fin(i0) => Some(TwoIndex::from_i0(i0, n)),
            ExtInt::Inf => None,
        }
    } else {
        None
    };
    InsepProfile { p, n, u, k, e_k, tilde, idx, distinct_count, two_index }
}

impl InsepProfile {
    /// The profile of a degree-`p^k` two-index extension with the given `i_0`.
    pub fn two_index(p: u64, k: u32, i0: u64, e_k: ExtInt) -> InsepProfile {
        let n = p.pow(k);
        let mut idx = vec![ExtInt::Fin(i0); k as usize];
        idx.push(ExtInt::Fin(0));
        profile_from_indices(p, n, 1, k, e_k, idx.clone(), idx)
    }

    pub fn require_two_index(&self) -> Result<&TwoIndex, EisError> {
        self.two_index.as_ref().ok_or_else(|| {
            let shown: Vec<String> = self.idx.iter().map(|i| i.to_string()).collect();
            EisError::NotTwoIndex(format!("degree {} with indices ({})", self.n, shown.join(", ")))
        })
    }

    /// `phi_j(x) = min_{j0 <= j} (i_{j0} + p^{j0} x)`; `None` when every term is infinite.
    pub fn phi_j(&self, j: u32, x: Rat) -> Option<Rat> {
        (0..=j.min(self.k))
            .filter_map(|j0| {
                self.idx[j0 as usize]
                    .finite()
                    .map(|i| Rat::from_integer(i as i64) + x * self.p.pow(j0) as i64)
            })
            .min()
    }

    /// `phi_{L/K}(x) = phi_k(x) / n`.
    pub fn phi_lk(&self, x: Rat) -> Rat {
        self.phi_j(self.k, x).expect("i_k is finite") / self.n as i64
    }

    /// `rho_h(l) = ceil((phi_{min(v_p(h), k)}(l) + h) / n)`.
    pub fn rho(&self, h: u64, ell: u64) -> ExtInt {
        let j = vp(h, self.p).min(self.k);
        match self.phi_j(j, Rat::from_integer(ell as i64)) {
            Some(phi) => {
                let v = (phi + h as i64) / self.n as i64;
                ExtInt::Fin(v.ceil().to_integer() as u64)
            }
            None => ExtInt::Inf,
        }
    }

    /// Largest `rho_h(l)` over all `h`.
    pub fn rho_max(&self, ell: u64) -> ExtInt {
        (1..=self.n).map(|h| self.rho(h, ell)).max().unwrap_or(ExtInt::Fin(0))
    }
}

pub fn ram_break(profile: &InsepProfile) -> Result<Rat, EisError> {
    Ok(profile.require_two_index()?.brk)
}

/// Closed forms for two-index profiles, used to cross-check [`InsepProfile::rho`].
pub mod two_index_forms {
    use super::*;

    pub fn phi_lk(t: &TwoIndex, pk: u64, x: Rat) -> Rat {
        if x <= t.brk {
            x
        } else {
            (x + t.i0 as i64) / pk as i64
        }
    }

    pub fn rho(t: &TwoIndex, pk: u64, h: u64, ell: u64) -> u64 {
        if h < pk {
            (t.i0 + ell + h).div_ceil(pk)
        } else {
            phi_lk(t, pk, Rat::from_integer(ell as i64)).ceil().to_integer() as u64 + 1
        }
    }
}

/// Outcome of comparing two polynomials coefficientwise against `rho_h(l)`.
pub fn l_equiv(f: &EisensteinPoly, g: &EisensteinPoly, ell: u64) -> Result<bool, EisError> {
    let profile = f.indices()?;
    l_equiv_with(&profile, f, g, ell)
}

/// [`l_equiv`] with a precomputed profile of `f`.
pub fn l_equiv_with(profile: &InsepProfile, f: &EisensteinPoly, g: &EisensteinPoly, ell: u64) -> Result<bool, EisError> {
    if f.n != g.n {
        return Err(EisError::DegreeMismatch(f.n, g.n));
    }
    if f.field != g.field {
        return Err(EisError::MixedFields);
    }
    let mut missing = None;
    for h in 1..=f.n {
        let (a, b) = (f.coeff_opt(h), g.coeff_opt(h));
        if a.is_none() && b.is_none() {
            continue;
        }
        let diff = g.coeff(h).sub(&f.coeff(h));
        let rho = profile.rho(h as u64, ell);
        match (diff.valuation(), rho) {
            (Valuation::Exact(v), ExtInt::Fin(r)) if (v as u64) < r => return Ok(false),
            (Valuation::Exact(_), ExtInt::Inf) => return Ok(false),
            (Valuation::Exact(_), _) => {}
            (Valuation::BelowPrecision(prec), ExtInt::Fin(r)) if prec as u64 >= r => {}
            (Valuation::BelowPrecision(_), rho) => {
                missing.get_or_insert(EisError::InsufficientPrecision { h, needed: rho.to_string() });
            }
        }
    }
    match missing {
        Some(e) => Err(e),
        None => Ok(true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::Model;
    use crate::residue_field::ResidueField;

    fn q9(n: u32) -> LocalField {
        LocalField::new(Model::MixedUnramified, ResidueField::new(3, 2, None).unwrap(), n).unwrap()
    }
    fn f3t(n: u32) -> LocalField {
        LocalField::new(Model::EqualChar, ResidueField::new(3, 1, None).unwrap(), n).unwrap()
    }

    /// Polynomial from `X`-exponent terms, e.g. `[(7, pi), (0, -pi)]` plus the
    /// monic leading term.
    fn poly(k: &LocalField, n: u32, terms: &[(u32, KElem)]) -> EisensteinPoly {
        let mut m: BTreeMap<u32, KElem> = terms.iter().cloned().collect();
        m.insert(n, k.one());
        EisensteinPoly::from_x_coeffs(k, &m).unwrap()
    }

    fn fin(v: &[u64]) -> Vec<ExtInt> {
        v.iter().map(|&x| ExtInt::Fin(x)).collect()
    }

    #[test]
    fn validation() {
        let k = q9(8);
        let f = poly(&k, 9, &[(8, k.pi()), (0, k.pi().neg())]);
        assert_eq!((f.degree(), f.k(), f.u()), (9, 2, 1));
        let mut m = BTreeMap::new();
        m.insert(9, k.one());
        m.insert(0, k.from_int(-1));
        assert!(matches!(EisensteinPoly::from_x_coeffs(&k, &m), Err(EisError::NotEisenstein { h: 9, .. })));
        let c = f3t(8);
        let t = c.pi();
        let g = poly(&c, 6, &[(5, t.neg()), (4, t.clone()), (0, t.clone())]);
        assert_eq!((g.u(), g.k()), (2, 1));
    }

    #[test]
    fn index_examples() {
        for k in [q9(8), f3t(8)] {
            let pi = k.pi();
            let f = poly(&k, 9, &[(7, pi.clone()), (6, pi.neg()), (3, pi.clone()), (0, pi.neg())]);
            assert_eq!(f.tilde_indices().unwrap(), fin(&[7, 3, 0]));
            assert_eq!(f.indices().unwrap().idx, fin(&[7, 3, 0]));
            assert_eq!(f.indices().unwrap().distinct_count, 3);
        }
        let c = f3t(8);
        let t = c.pi();
        let g = poly(&c, 6, &[(5, t.neg()), (4, t.clone()), (0, t.clone())]);
        assert_eq!(g.tilde_indices().unwrap(), fin(&[4, 0]));

        let k = q9(8);
        let pi = k.pi();
        let f = poly(&k, 9, &[(0, pi.neg())]);
        assert_eq!(f.tilde_indices().unwrap(), vec![ExtInt::Inf, ExtInt::Inf, ExtInt::Fin(0)]);
        assert_eq!(f.indices().unwrap().idx, fin(&[18, 9, 0]));

        // c_5 = pi^2, c_6 = pi, c_9 = pi
        let f = poly(&k, 9, &[(4, pi.pow(2).neg()), (3, pi.clone()), (0, pi.neg())]);
        assert_eq!(f.indices().unwrap().idx, fin(&[12, 3, 0]));
    }

    #[test]
    fn precision_is_never_infinity() {
        let k = q9(8);
        let f = poly(&k, 9, &[(8, k.zero().truncate(1)), (0, k.pi().neg())]);
        assert!(matches!(f.tilde_indices(), Err(EisError::InsufficientPrecision { h: 1, .. })));
    }

    #[test]
    fn break_and_herbrand() {
        let p = InsepProfile::two_index(3, 2, 8, ExtInt::Fin(1));
        assert_eq!(ram_break(&p).unwrap(), Rat::from_integer(1));
        let t = p.two_index.clone().unwrap();
        assert_eq!((t.a0, t.b0), (1, 1));
        assert_eq!(p.phi_lk(Rat::from_integer(2)), Rat::new(10, 9));
        assert_eq!(p.phi_lk(Rat::from_integer(0)), Rat::from_integer(0));
        assert_eq!(p.rho(1, 1), ExtInt::Fin(2));
        let p7 = InsepProfile::two_index(3, 2, 7, ExtInt::Inf);
        assert_eq!(ram_break(&p7).unwrap(), Rat::new(7, 8));
        let three = InsepProfile::two_index(3, 2, 8, ExtInt::Inf);
        assert_eq!(three.rho(9, 1), ExtInt::Fin(2));
        let not_two = profile_from_indices(3, 9, 1, 2, ExtInt::Inf, fin(&[7, 3, 0]), fin(&[7, 3, 0]));
        assert!(ram_break(&not_two).is_err());
    }

    #[test]
    fn rho_matches_closed_forms() {
        for (p, k) in [(2u64, 2u32), (3, 2), (2, 3), (5, 2), (3, 3)] {
            let pk = p.pow(k);
            for i0 in 1..(3 * pk) {
                if (pk - i0 % pk) % p == 0 {
                    continue;
                }
                let prof = InsepProfile::two_index(p, k, i0, ExtInt::Inf);
                let t = prof.two_index.clone().unwrap();
                assert_eq!(i0, pk * t.a0 - t.b0);
                for ell in 1..(3 * pk) {
                    assert_eq!(prof.phi_lk(Rat::from_integer(ell as i64)), two_index_forms::phi_lk(&t, pk, Rat::from_integer(ell as i64)));
                    for h in 1..=pk {
                        assert_eq!(prof.rho(h, ell), ExtInt::Fin(two_index_forms::rho(&t, pk, h, ell)));
                    }
                }
                // rho_h(1) = A_0 for h < b_0
                for h in 1..t.b0 {
                    assert_eq!(prof.rho(h, 1), ExtInt::Fin(t.a0));
                }
            }
        }
    }

    #[test]
    fn equivalence() {
        let k = q9(8);
        let pi = k.pi();
        let f = poly(&k, 9, &[(8, pi.clone()), (0, pi.neg())]);
        for ell in 1..5 {
            assert!(l_equiv(&f, &f, ell).unwrap());
        }
        let g = poly(&k, 9, &[(8, pi.clone()), (0, pi.mul(&k.from_int(4)).neg())]);
        // rho_9(l) = l + 1 for l <= 1, so the difference of valuation 2 is visible from l = 2 on
        assert!(l_equiv(&f, &g, 1).unwrap());
        assert!(!l_equiv(&f, &g, 2).unwrap());
    }
}
