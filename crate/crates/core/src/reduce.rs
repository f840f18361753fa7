//! Reduction of two-index Eisenstein polynomials of degree `p^k` to standard
//! form, and the coefficient predictions for perturbed uniformizers
//! `pi_L + r pi_L^{l+1}` that drive it.
//!
//! The reduction keeps an approximant: a standard form whose `a`-digits are
//! filled in as they become determined. After the step at level `l` the
//! current polynomial is verified to be `(l+1)`-equivalent to the rendered
//! approximant; a failed check aborts with [`ReduceError::PostconditionFailed`].

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::eisenstein::{l_equiv_with, vp, EisError, EisensteinPoly, InsepProfile, Rat, TwoIndex};
use crate::ext_arith::{minpoly_uniformizer, ExtError};
use crate::literal::XPoly;
use crate::local_field::KElem;
use crate::residue_field::{rf_pk_root, AdditiveMapAnalysis, PsiParams, RFElem};
use crate::standard_form::{check_parameters, StandardForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("degree out of scope: {0}")]
    DegreeOutOfScope(String),
    #[error("not a two-index extension: {0}")]
    NotTwoIndex(String),
    #[error("input has indices of inseparability ({0}); three or more distinct indices admit no three-term form")]
    ThreeIndexInput(String),
    #[error("hypothesis min(v_p(phi_{j}({ell})), k) = {j} fails")]
    HypothesisFailed { j: u32, ell: u64 },
    #[error("precision exhausted at l = {ell}: {detail}")]
    PrecisionExhausted { ell: u64, detail: String },
    #[error("postcondition failed at l = {ell}: {detail}")]
    PostconditionFailed { ell: u64, detail: String },
    #[error("l_max = {given} is too small; at least {needed} steps are needed to fix every digit")]
    EllMaxTooSmall { given: u64, needed: u64 },
    #[error(transparent)]
    Eisenstein(#[from] EisError),
    #[error(transparent)]
    Extension(#[from] ExtError),
}

impl ReduceError {
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            ReduceError::PrecisionExhausted { .. }
                | ReduceError::Eisenstein(EisError::InsufficientPrecision { .. })
                | ReduceError::Extension(ExtError::NotEisensteinResult(EisError::InsufficientPrecision { .. }))
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    Case1,
    Case2Below,
    Case2At,
    Case2Above,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::Case1 => "Case1",
            CaseTag::Case2Below => "Case2-below",
            CaseTag::Case2At => "Case2-at",
            CaseTag::Case2Above => "Case2-above",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub ell: u64,
    pub case: CaseTag,
    pub r: RFElem,
    pub h: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    /// Residue of the scaling `xi` with `xi^{p^k} = c_{p^k} / pi mod pi`.
    pub xi: RFElem,
    pub steps: Vec<TraceStep>,
    /// The output is certified `l`-equivalent to the last polynomial for this `l`.
    pub certified_ell: u64,
}

impl ReductionTrace {
    pub fn to_json(&self) -> Value {
        json!({
            "xi": self.xi.to_string(),
            "certified_ell": self.certified_ell,
            "steps": self.steps.iter().map(|s| json!({
                "ell": s.ell,
                "case": s.case.to_string(),
                "r": s.r.to_string(),
                "h": s.h,
            })).collect::<Vec<_>>(),
        })
    }
}

/// The predicted class of `c~_h` modulo `pi^{t+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub h: usize,
    pub t: u64,
    pub s_j: Vec<u32>,
    /// `(m, g_m)` for `m` in `S_j`.
    pub g: Vec<(u32, i64)>,
    pub value: KElem,
}

/// `i = A n - b` with `1 <= b <= n`.
fn split_index(i: u64, n: u64) -> (u64, u64) {
    let b = match i % n {
        0 => n,
        rem => n - rem,
    };
    ((i + b) / n, b)
}

fn sign(e: u64) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Coefficient prediction for the minimum polynomial of `pi_L + r pi_L^{l+1}`
/// (valid for any uniformizer congruent to it modulo `pi_L^{l+2}`), for
/// general degree `n = u p^k`.
pub fn perturb_predict(
    f: &EisensteinPoly,
    profile: &InsepProfile,
    ell: u64,
    r: &KElem,
    j: u32,
) -> Result<Prediction, ReduceError> {
    let (p, n, k) = (profile.p, profile.n, profile.k);
    if j > k {
        return Err(ReduceError::HypothesisFailed { j, ell });
    }
    let phi = profile
        .phi_j(j, Rat::from_integer(ell as i64))
        .ok_or(ReduceError::HypothesisFailed { j, ell })?
        .to_integer() as u64;
    if vp(phi, p).min(k) != j {
        return Err(ReduceError::HypothesisFailed { j, ell });
    }
    let h = match phi % n {
        0 => n,
        rem => n - rem,
    };
    let t = (phi + h) / n;
    let h0 = (h / p.pow(j)) as i64;
    let field = f.field();
    let c_n = f.coeff(n as usize);
    let mut value = f.coeff(h as usize).truncate(t as u32 + 1);
    let mut s_j = Vec::new();
    let mut gs = Vec::new();
    for m in 0..=j {
        let Some(i_m) = profile.idx[m as usize].finite() else { continue };
        if i_m + p.pow(m) * ell != phi {
            continue;
        }
        let (a_m, b_m) = split_index(i_m, n);
        let s = sign(t + ell + a_m);
        let pjm = p.pow(j - m) as i64;
        let upkm = (profile.u * p.pow(k - m)) as i64;
        let g = if b_m == n {
            s * upkm
        } else if b_m < h {
            s * (h0 * pjm + ell as i64 - upkm)
        } else {
            s * (h0 * pjm + ell as i64)
        };
        let term = c_n
            .pow(t - a_m)
            .mul(&f.coeff(b_m as usize))
            .mul(&r.pow(p.pow(m)))
            .mul(&field.from_int(g));
        value = value.add(&term.truncate(t as u32 + 1));
        s_j.push(m);
        gs.push((m, g));
    }
    Ok(Prediction { h: h as usize, t, s_j, g: gs, value })
}

/// Specialised predictions for two-index extensions of degree `p^k`: the
/// constant-term congruences below and at the break, and the single-term
/// congruence otherwise. Returns every form that applies, paired with the
/// level `j` of the general prediction it specialises.
pub fn two_index_predict(
    f: &EisensteinPoly,
    two: &TwoIndex,
    k: u32,
    ell: u64,
    r: &KElem,
) -> Vec<(u32, Prediction)> {
    let field = f.field();
    let p = field.p();
    let pk = p.pow(k);
    let c = f.coeff(pk as usize);
    let c_b0 = f.coeff(two.b0 as usize);
    let l = Rat::from_integer(ell as i64);
    let mut out = Vec::new();
    if l <= two.brk {
        let t = ell + 1;
        let mut value = c.add(&c.pow(ell + 1).mul(&r.pow(pk)));
        let mut s_j = vec![k];
        let mut g = vec![(k, 1)];
        if l == two.brk {
            let coeff = sign(two.a0 + 1) * two.b0 as i64;
            value = value.add(&c.pow(ell + 1 - two.a0).mul(&c_b0).mul(r).mul(&field.from_int(coeff)));
            s_j.insert(0, 0);
            g.insert(0, (0, coeff));
        }
        out.push((k, Prediction { h: pk as usize, t, s_j, g, value: value.truncate(t as u32 + 1) }));
    }
    if l > two.brk || ell % pk != two.b0 % pk {
        let s = two.i0 + ell;
        let h = match s % pk {
            0 => pk,
            rem => pk - rem,
        };
        let t = (s + h) / pk;
        let coeff = sign(t + ell + two.a0) * two.b0 as i64;
        let value = f
            .coeff(h as usize)
            .add(&c.pow(t - two.a0).mul(&c_b0).mul(r).mul(&field.from_int(coeff)))
            .truncate(t as u32 + 1);
        let j = vp(s, p).min(k);
        out.push((j, Prediction { h: h as usize, t, s_j: vec![0], g: vec![(0, coeff)], value }));
    }
    out
}

/// Minimum polynomial of `pi_L + r pi_L^{l+1}`.
pub fn perturb(f: &EisensteinPoly, ell: u64, r: &KElem) -> Result<EisensteinPoly, ExtError> {
    let mut terms = BTreeMap::new();
    terms.insert(1u32, f.field().one());
    terms.insert(ell as u32 + 1, r.clone());
    minpoly_uniformizer(f, &XPoly { terms, cap: None })
}

/// Profile and two-index data of an input in scope for reduction.
pub fn two_index_profile(f: &EisensteinPoly) -> Result<(InsepProfile, TwoIndex), ReduceError> {
    if f.u() != 1 {
        return Err(ReduceError::DegreeOutOfScope(format!(
            "degree {} is not a power of p = {}",
            f.degree(),
            f.field().p()
        )));
    }
    if f.k() < 2 {
        return Err(ReduceError::DegreeOutOfScope(format!("degree {} has k < 2", f.degree())));
    }
    let profile = f.indices()?;
    let shown = || profile.idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ");
    if profile.distinct_count > 2 {
        return Err(ReduceError::ThreeIndexInput(shown()));
    }
    let two = profile.two_index.clone().ok_or_else(|| ReduceError::NotTwoIndex(shown()))?;
    check_parameters(f.field(), f.k(), two.i0).map_err(|e| ReduceError::NotTwoIndex(e.to_string()))?;
    Ok((profile, two))
}

/// `rho_max(l) = ceil((i_0 + l + p^k) / p^k) + 1`.
pub fn rho_max(two: &TwoIndex, pk: u64, ell: u64) -> u64 {
    (two.i0 + ell + pk).div_ceil(pk) + 1
}

/// Default number of steps: `p^k (floor(B) + 2)`.
pub fn default_ell_max(two: &TwoIndex, pk: u64) -> u64 {
    pk * (two.floor_break() + 2)
}

/// Precision needed to run `l_max` steps: `rho_max(l_max) + 2` guard digits.
pub fn required_precision(two: &TwoIndex, pk: u64, ell_max: u64) -> u64 {
    rho_max(two, pk, ell_max) + 2
}

/// Scales `pi_L` by `xi^{-1}` so that `c_{p^k} = pi mod pi^2`; returns the
/// residue of `xi` and the scaled polynomial (`c_j -> xi^{-j} c_j`).
pub fn normalize_constant(f: &EisensteinPoly) -> Result<(RFElem, EisensteinPoly), ReduceError> {
    let n = f.degree();
    let field = f.field();
    let beta = f
        .coeff(n)
        .residue_at(1)
        .map_err(|e| ReduceError::NotTwoIndex(e.to_string()))?;
    let xi = rf_pk_root(&beta, f.k());
    let xi_inv = field.teich(&xi.inv().expect("constant term has valuation 1"));
    let mut scale = field.one();
    let mut coeffs = Vec::with_capacity(n);
    for c in f.coeffs() {
        scale = scale.mul(&xi_inv);
        coeffs.push(c.as_ref().map(|c| c.mul(&scale)));
    }
    Ok((xi, EisensteinPoly::new(field, coeffs)?))
}

/// Data shared by every step of one reduction.
#[derive(Clone, Debug)]
pub struct ReductionContext {
    pub profile: InsepProfile,
    pub two: TwoIndex,
    pub pk: u64,
    pub analysis: AdditiveMapAnalysis,
}

impl ReductionContext {
    fn omega(&self) -> &RFElem {
        &self.analysis.params.omega
    }
}

fn map_equiv(ell: u64, what: &str, r: Result<bool, EisError>) -> Result<(), ReduceError> {
    match r {
        Ok(true) => Ok(()),
        Ok(false) => Err(ReduceError::PostconditionFailed { ell, detail: format!("{what} does not hold") }),
        Err(EisError::InsufficientPrecision { h, needed }) => Err(ReduceError::PrecisionExhausted {
            ell,
            detail: format!("checking {what} needs {needed} digits of c_{h}"),
        }),
        Err(e) => Err(e.into()),
    }
}

/// The three-term polynomial sharing `f`'s `A_0`, `b_0` and leading digit of
/// `c_{b_0}`, with `a = 1`; `f` must already be normalised. Returns the
/// corresponding approximant and the reduction context.
pub fn one_standard(f: &EisensteinPoly) -> Result<(StandardForm, ReductionContext), ReduceError> {
    let (profile, two) = two_index_profile(f)?;
    let field = f.field();
    let pk = field.p().pow(f.k());
    let omega = f
        .coeff(two.b0 as usize)
        .residue_at(two.a0 as u32)
        .map_err(|e| ReduceError::PostconditionFailed { ell: 1, detail: e.to_string() })?;
    if omega.is_zero() {
        return Err(ReduceError::PostconditionFailed { ell: 1, detail: "c_b0 has the wrong valuation".into() });
    }
    let approx = StandardForm {
        field: field.clone(),
        k: f.k(),
        a0: two.a0,
        b0: two.b0,
        omega: omega.clone(),
        alphas: BTreeMap::new(),
        gamma: None,
    };
    let params = PsiParams::new(f.k(), two.a0, two.b0, omega).map_err(|e| ReduceError::NotTwoIndex(e.to_string()))?;
    let ctx = ReductionContext { profile, two, pk, analysis: AdditiveMapAnalysis::new(params) };
    map_equiv(1, "f ~_1 g", l_equiv_with(&ctx.profile, f, &approx.render(), 1))?;
    Ok((approx, ctx))
}

/// Residue of `x / pi^t`, which must be integral.
fn digit_at(x: &KElem, t: u64, ell: u64, what: &str) -> Result<RFElem, ReduceError> {
    if (x.prec() as u64) <= t {
        return Err(ReduceError::PrecisionExhausted {
            ell,
            detail: format!("{what} is known to {} digits, digit {t} is needed", x.prec()),
        });
    }
    x.residue_at(t as u32).map_err(|e| ReduceError::PostconditionFailed { ell, detail: format!("{what}: {e}") })
}

pub struct StepResult {
    pub r: RFElem,
    pub poly: EisensteinPoly,
    pub approx: StandardForm,
    pub step: TraceStep,
}

/// One step: from an `l`-standard `f` with approximant `approx` to an
/// `(l+1)`-standard polynomial.
pub fn reduce_step(
    ctx: &ReductionContext,
    f: &EisensteinPoly,
    ell: u64,
    approx: &StandardForm,
) -> Result<StepResult, ReduceError> {
    let field = f.field();
    let rf = field.residue();
    let (pk, two) = (ctx.pk, &ctx.two);
    let omega = ctx.omega();
    let b0w_inv = omega.scale(two.b0 as i64).inv().expect("p does not divide b0");
    let k = f.k();
    let l = Rat::from_integer(ell as i64);
    let c_pk = f.coeff(pk as usize);
    let approx_cpk = approx.a_value().shift_up(1);

    let (case, h, r) = if ell % pk != two.b0 % pk {
        let h1 = (two.b0 + pk - ell % pk) % pk;
        let t = ctx.profile.rho(h1, ell).finite().expect("two-index rho is finite");
        let target = if h1 == two.b0 { f.coeff(h1 as usize).sub(&approx.render().coeff(h1 as usize)) } else { f.coeff(h1 as usize) };
        let alpha = digit_at(&target, t, ell, &format!("c_{h1}"))?;
        let r = alpha.mul(&b0w_inv).scale(sign(t + ell + two.a0 + 1));
        (CaseTag::Case1, h1, r)
    } else if l < two.brk {
        let alpha = digit_at(&c_pk.sub(&approx_cpk), ell + 1, ell, "c_{p^k}")?;
        (CaseTag::Case2Below, pk, rf_pk_root(&alpha.neg(), k))
    } else if l == two.brk {
        let alpha = digit_at(&c_pk.sub(&approx_cpk), ell + 1, ell, "c_{p^k}")?;
        let gamma = ctx.analysis.coset_rep_of(&alpha);
        let r = ctx.analysis.solve(&gamma.sub(&alpha)).ok_or_else(|| ReduceError::PostconditionFailed {
            ell,
            detail: "no solution of psi(r) = gamma - alpha".into(),
        })?;
        (CaseTag::Case2At, pk, r)
    } else {
        let t = ctx.profile.rho(pk, ell).finite().expect("two-index rho is finite");
        let alpha = digit_at(&c_pk.sub(&approx_cpk), t, ell, "c_{p^k}")?;
        let r = alpha.mul(&b0w_inv).scale(sign(t + ell + two.a0 + 1));
        (CaseTag::Case2Above, pk, r)
    };

    let next = if r.is_zero() { f.clone() } else { perturb(f, ell, &field.teich(&r))? };
    map_equiv(ell, "stability f ~_l f~", l_equiv_with(&ctx.profile, f, &next, ell))?;

    let mut approx_next = approx.clone();
    let top = ell.min(two.floor_break());
    if top >= 1 {
        let a = next.coeff(pk as usize).shift_down(1).map_err(|e| ReduceError::PostconditionFailed {
            ell,
            detail: e.to_string(),
        })?;
        if (a.prec() as u64) <= top {
            return Err(ReduceError::PrecisionExhausted { ell, detail: format!("a-digit {top} is beyond precision") });
        }
        let digits = a.digit_vector();
        if digits[0] != rf.one() {
            return Err(ReduceError::PostconditionFailed { ell, detail: "c_{p^k} is not normalised".into() });
        }
        for j in 1..=top {
            let d = digits[j as usize].clone();
            if two.break_is_integral() && j == two.floor_break() {
                if ctx.analysis.coset_rep_of(&d) != d {
                    return Err(ReduceError::PostconditionFailed { ell, detail: format!("digit {j} = {d} is not a coset representative") });
                }
                approx_next.gamma = Some(d);
            } else {
                if j % pk == two.b0 % pk && !d.is_zero() {
                    return Err(ReduceError::PostconditionFailed { ell, detail: format!("digit {j} = {d} should vanish") });
                }
                approx_next.alphas.insert(j, d);
            }
        }
    }
    map_equiv(ell, "(l+1)-standardness", l_equiv_with(&ctx.profile, &next, &approx_next.render(), ell + 1))?;
    Ok(StepResult { r: r.clone(), poly: next, approx: approx_next, step: TraceStep { ell, case, r, h } })
}

/// Full reduction: normalisation, the one-standard approximant, and steps
/// `l = 1..=l_max` (default `p^k (floor(B) + 2)`).
pub fn reduce_to_standard(
    f: &EisensteinPoly,
    ell_max: Option<u64>,
) -> Result<(StandardForm, ReductionTrace), ReduceError> {
    let (_, two) = two_index_profile(f)?;
    let pk = f.field().p().pow(f.k());
    let ell_max = ell_max.unwrap_or_else(|| default_ell_max(&two, pk));
    let needed_steps = two.floor_break().max(1);
    if ell_max < needed_steps {
        return Err(ReduceError::EllMaxTooSmall { given: ell_max, needed: needed_steps });
    }
    let needed = required_precision(&two, pk, ell_max);
    if (f.min_prec() as u64) < needed {
        return Err(ReduceError::PrecisionExhausted {
            ell: 0,
            detail: format!("{ell_max} steps need {needed} digits, coefficients carry {}", f.min_prec()),
        });
    }
    let (xi, normalized) = normalize_constant(f)?;
    let (mut approx, ctx) = one_standard(&normalized)?;
    let mut poly = normalized;
    let mut steps = Vec::new();
    for ell in 1..=ell_max {
        let out = reduce_step(&ctx, &poly, ell, &approx)?;
        poly = out.poly;
        approx = out.approx;
        steps.push(out.step);
    }
    approx.validate().map_err(|e| ReduceError::PostconditionFailed { ell: ell_max, detail: e.to_string() })?;
    Ok((approx, ReductionTrace { xi, steps, certified_ell: ell_max + 1 }))
}

/// Whether a profile entry is finite; small helper for callers reporting profiles.
pub fn finite_indices(profile: &InsepProfile) -> Option<Vec<u64>> {
    profile.idx.iter().map(|i| i.finite()).collect()
}
