//! Three-term standard forms
//! `X^{p^k} + (-1)^{b_0} w pi^{A_0} X^{p^k - b_0} + (-1)^{p^k} a pi`
//! with `a = 1 + sum_j alpha_j pi^j (+ gamma pi^B)`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::eisenstein::{EisensteinPoly, TwoIndex};
use crate::local_field::{ExtInt, KElem, LocalField};
use crate::residue_field::{AdditiveMapAnalysis, PsiParams, RFElem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SfError {
    #[error("excluded parameters: {0}")]
    Excluded(String),
    #[error("invalid standard form: {0}")]
    Invalid(String),
    #[error("malformed standard form record: {0}")]
    Malformed(String),
}

#[derive(Clone, Debug)]
pub struct StandardForm {
    pub field: LocalField,
    pub k: u32,
    pub a0: u64,
    pub b0: u64,
    pub omega: RFElem,
    /// `alpha_j` for `1 <= j <= floor(B)` (excluding `j = B` when `B` is an
    /// integer), forced zeros included.
    pub alphas: BTreeMap<u64, RFElem>,
    /// Present exactly when `B` is an integer.
    pub gamma: Option<RFElem>,
}

impl PartialEq for StandardForm {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.k == other.k
            && self.a0 == other.a0
            && self.b0 == other.b0
            && self.omega == other.omega
            && self.alphas == other.alphas
            && self.gamma == other.gamma
    }
}
impl Eq for StandardForm {}

/// Checks the exclusions `p | b_0` and `A_0 > e_K` for a given `i_0`.
pub fn check_parameters(field: &LocalField, k: u32, i0: u64) -> Result<TwoIndex, SfError> {
    if k == 0 {
        return Err(SfError::Excluded("k must be positive".into()));
    }
    if i0 == 0 {
        return Err(SfError::Excluded("i0 must be positive".into()));
    }
    let p = field.p();
    let pk = p.pow(k);
    let t = TwoIndex::from_i0(i0, pk);
    if t.b0.is_multiple_of(p) {
        return Err(SfError::Excluded(format!("b0 = {} is divisible by p = {p}", t.b0)));
    }
    if ExtInt::Fin(t.a0) > field.e_k() {
        return Err(SfError::Excluded(format!("A0 = {} exceeds e_K = {}", t.a0, field.e_k())));
    }
    Ok(t)
}

/// Indices `j` carrying a free or forced `alpha_j`.
pub fn alpha_range(t: &TwoIndex) -> impl Iterator<Item = u64> {
    let top = if t.break_is_integral() { t.floor_break().saturating_sub(1) } else { t.floor_break() };
    1..=top
}

impl StandardForm {
    pub fn pk(&self) -> u64 {
        self.field.p().pow(self.k)
    }
    pub fn i0(&self) -> u64 {
        self.pk() * self.a0 - self.b0
    }
    pub fn two_index(&self) -> TwoIndex {
        TwoIndex::from_i0(self.i0(), self.pk())
    }
    pub fn psi(&self) -> Result<PsiParams, SfError> {
        PsiParams::new(self.k, self.a0, self.b0, self.omega.clone()).map_err(|e| SfError::Invalid(e.to_string()))
    }
    pub fn psi_analysis(&self) -> Result<AdditiveMapAnalysis, SfError> {
        Ok(AdditiveMapAnalysis::new(self.psi()?))
    }

    pub fn validate(&self) -> Result<(), SfError> {
        let t = check_parameters(&self.field, self.k, self.i0())?;
        if t.a0 != self.a0 || t.b0 != self.b0 || self.b0 == 0 || self.b0 > self.pk() {
            return Err(SfError::Invalid(format!("bad (A0, b0) = ({}, {})", self.a0, self.b0)));
        }
        if self.omega.is_zero() {
            return Err(SfError::Invalid("omega is zero".into()));
        }
        let keys: Vec<u64> = self.alphas.keys().copied().collect();
        let expected: Vec<u64> = alpha_range(&t).collect();
        if keys != expected {
            return Err(SfError::Invalid(format!("alpha indices {keys:?}, expected {expected:?}")));
        }
        for (j, a) in &self.alphas {
            if j % self.pk() == self.b0 % self.pk() && !a.is_zero() {
                return Err(SfError::Invalid(format!("alpha_{j} must vanish")));
            }
        }
        match (&self.gamma, t.break_is_integral()) {
            (Some(g), true) => {
                if self.psi_analysis()?.coset_rep_of(g) != *g {
                    return Err(SfError::Invalid(format!("gamma = {g} is not a chosen coset representative")));
                }
            }
            (None, false) => {}
            (Some(_), false) => return Err(SfError::Invalid("gamma given but B is not an integer".into())),
            (None, true) => return Err(SfError::Invalid("gamma missing although B is an integer".into())),
        }
        Ok(())
    }

    /// `a = 1 + sum alpha_j pi^j + gamma pi^B`.
    pub fn a_value(&self) -> KElem {
        let mut terms = vec![(0u32, self.field.residue().one())];
        for (j, a) in &self.alphas {
            terms.push((*j as u32, a.clone()));
        }
        if let Some(g) = &self.gamma {
            terms.push((self.two_index().floor_break() as u32, g.clone()));
        }
        self.field.from_digit_terms(&terms)
    }

    /// The three-term polynomial.
    pub fn render(&self) -> EisensteinPoly {
        let pk = self.pk() as usize;
        let mut coeffs = vec![None; pk];
        coeffs[self.b0 as usize - 1] = Some(self.field.teich(&self.omega).shift_up(self.a0 as u32));
        coeffs[pk - 1] = Some(self.a_value().shift_up(1));
        EisensteinPoly::new(&self.field, coeffs).expect("standard forms are Eisenstein")
    }

    pub fn to_json(&self) -> Value {
        let mut alphas = Map::new();
        for (j, a) in &self.alphas {
            alphas.insert(j.to_string(), Value::String(a.to_string()));
        }
        json!({
            "k": self.k,
            "A0": self.a0,
            "b0": self.b0,
            "omega": self.omega.to_string(),
            "alphas": alphas,
            "gamma": self.gamma.as_ref().map(|g| g.to_string()),
        })
    }

    pub fn from_json(field: &LocalField, v: &Value) -> Result<StandardForm, SfError> {
        let num = |key: &str| {
            v.get(key)
                .and_then(Value::as_u64)
                .ok_or_else(|| SfError::Malformed(format!("missing integer `{key}`")))
        };
        let rf = field.residue();
        let parse = |s: &Value| -> Result<RFElem, SfError> {
            let s = s.as_str().ok_or_else(|| SfError::Malformed("expected a residue literal string".into()))?;
            rf.parse(s).map_err(|e| SfError::Malformed(e.to_string()))
        };
        let omega = parse(v.get("omega").ok_or_else(|| SfError::Malformed("missing `omega`".into()))?)?;
        let mut alphas = BTreeMap::new();
        if let Some(m) = v.get("alphas") {
            let m = m.as_object().ok_or_else(|| SfError::Malformed("`alphas` must be an object".into()))?;
            for (j, a) in m {
                let j: u64 = j.parse().map_err(|_| SfError::Malformed(format!("bad alpha index `{j}`")))?;
                alphas.insert(j, parse(a)?);
            }
        }
        let gamma = match v.get("gamma") {
            None | Some(Value::Null) => None,
            Some(g) => Some(parse(g)?),
        };
        let sf = StandardForm {
            field: field.clone(),
            k: num("k")? as u32,
            a0: num("A0")?,
            b0: num("b0")?,
            omega,
            alphas,
            gamma,
        };
        sf.validate()?;
        Ok(sf)
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

    #[test]
    fn render_and_round_trip() {
        let k = q9(10);
        let rf = k.residue();
        let sf = StandardForm {
            field: k.clone(),
            k: 2,
            a0: 1,
            b0: 1,
            omega: rf.from_int(-1),
            alphas: BTreeMap::new(),
            gamma: Some(rf.generator()),
        };
        sf.validate().unwrap();
        let f = sf.render();
        assert_eq!(f.term_count(), 3);
        let prof = f.indices().unwrap();
        assert_eq!(prof.two_index.unwrap().i0, 8);
        // X^9 + 3 X^8 - 3 (1 + 3 gamma)
        assert_eq!(f.x_coeff(8), k.pi());
        let gamma_hat = k.teich(&rf.generator());
        assert_eq!(f.x_coeff(0), k.pi().mul(&k.one().add(&k.pi().mul(&gamma_hat))).neg());
        let json = sf.to_json();
        assert_eq!(StandardForm::from_json(&k, &json).unwrap(), sf);
    }

    #[test]
    fn exclusions_and_validation() {
        let k = q9(10);
        assert!(matches!(check_parameters(&k, 2, 6), Err(SfError::Excluded(_))));
        assert!(matches!(check_parameters(&k, 2, 10), Err(SfError::Excluded(_))));
        assert!(check_parameters(&k, 2, 8).is_ok());
        let rf = k.residue();
        let bad = StandardForm {
            field: k.clone(),
            k: 2,
            a0: 1,
            b0: 1,
            omega: rf.generator(),
            alphas: BTreeMap::new(),
            gamma: Some(rf.generator()),
        };
        // psi is surjective for omega != -1, so only gamma = 0 is allowed
        assert!(bad.validate().is_err());
    }
}
