//! Enumeration of standard forms for given `(K, k, i_0)`, the Galois test and
//! a description of the splitting field.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::eisenstein::TwoIndex;
use crate::literal::render_k;
use crate::local_field::{KElem, LocalField};
use crate::residue_field::{rf_is_nth_power, AdditiveMapAnalysis, PsiParams, RFElem};
use crate::standard_form::{alpha_range, check_parameters, SfError, StandardForm};

pub const DEFAULT_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("excluded case: {0}")]
    ExcludedCase(String),
    #[error("{count} standard forms exceed the cap of {cap}")]
    CapExceeded { count: BigUint, cap: u64 },
}

#[derive(Clone, Debug)]
pub struct ClassificationRequest {
    pub field: LocalField,
    pub k: u32,
    pub i0: u64,
    pub cap: u64,
}

impl ClassificationRequest {
    pub fn new(field: &LocalField, k: u32, i0: u64) -> Self {
        ClassificationRequest { field: field.clone(), k, i0, cap: DEFAULT_CAP }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn two_index(&self) -> Result<TwoIndex, ClassifyError> {
        if self.k < 2 {
            return Err(ClassifyError::ExcludedCase(format!("k = {} < 2", self.k)));
        }
        check_parameters(&self.field, self.k, self.i0).map_err(|e| match e {
            SfError::Excluded(s) | SfError::Invalid(s) | SfError::Malformed(s) => ClassifyError::ExcludedCase(s),
        })
    }

    /// Indices `j` whose digit `alpha_j` is free.
    pub fn free_indices(&self) -> Result<Vec<u64>, ClassifyError> {
        let t = self.two_index()?;
        let pk = self.field.p().pow(self.k);
        Ok(alpha_range(&t).filter(|j| j % pk != t.b0 % pk).collect())
    }

    /// Number of standard forms: `sum_w q^{#free} |T_w|`. The cokernel of
    /// `psi_w(x) = x^{p^k} - c x` has the size of its kernel, `1 + gcd(p^k - 1, q - 1)`
    /// when `c` is a `(p^k-1)`-th power and `1` otherwise; summed over `w` this
    /// is `2 (q - 1)`.
    pub fn count(&self) -> Result<BigUint, ClassifyError> {
        let t = self.two_index()?;
        let q = self.field.residue().size();
        let free = self.free_indices()?.len();
        let per_omega = BigUint::from(q).pow(free as u32);
        let cosets = if t.break_is_integral() { 2u64 } else { 1 };
        Ok(per_omega * BigUint::from(q - 1) * BigUint::from(cosets))
    }

    fn check_cap(&self) -> Result<u64, ClassifyError> {
        let count = self.count()?;
        match count.to_u64() {
            Some(c) if c <= self.cap => Ok(c),
            _ => Err(ClassifyError::CapExceeded { count, cap: self.cap }),
        }
    }

    /// Every standard form in the order: `omega` over nonzero residues, then the
    /// free `alpha` digits (lowest `j` most significant), then `gamma` over the
    /// sorted coset representatives.
    pub fn enumerate(&self) -> Result<impl Iterator<Item = StandardForm> + '_, ClassifyError> {
        self.check_cap()?;
        let t = self.two_index()?;
        let free = self.free_indices()?;
        let q = self.field.residue().size();
        Ok((1..q).flat_map(move |w| self.forms_for_omega(&t, free.clone(), w)))
    }

    /// Same list as [`enumerate`](Self::enumerate), built in parallel over `omega`.
    pub fn enumerate_par(&self) -> Result<Vec<StandardForm>, ClassifyError> {
        self.check_cap()?;
        let t = self.two_index()?;
        let free = self.free_indices()?;
        let q = self.field.residue().size();
        let chunks: Vec<Vec<StandardForm>> =
            (1..q).into_par_iter().map(|w| self.forms_for_omega(&t, free.clone(), w).collect()).collect();
        Ok(chunks.into_iter().flatten().collect())
    }

    fn forms_for_omega(&self, t: &TwoIndex, free: Vec<u64>, w: u64) -> impl Iterator<Item = StandardForm> + '_ {
        let rf = self.field.residue().clone();
        let q = rf.size();
        let omega = rf.element(w);
        let pk = self.field.p().pow(self.k);
        let forced: Vec<u64> = alpha_range(t).filter(|j| j % pk == t.b0 % pk).collect();
        let gammas: Vec<Option<RFElem>> = if t.break_is_integral() {
            let params = PsiParams::new(self.k, t.a0, t.b0, omega.clone()).expect("omega is nonzero");
            AdditiveMapAnalysis::new(params).coset_reps.into_iter().map(Some).collect()
        } else {
            vec![None]
        };
        let tuples = q.pow(free.len() as u32);
        let (a0, b0, k) = (t.a0, t.b0, self.k);
        (0..tuples).flat_map(move |mut idx| {
            let mut alphas = std::collections::BTreeMap::new();
            for &j in free.iter().rev() {
                alphas.insert(j, rf.element(idx % q));
                idx /= q;
            }
            for &j in &forced {
                alphas.insert(j, rf.zero());
            }
            let field = self.field.clone();
            let omega = omega.clone();
            gammas.clone().into_iter().map(move |gamma| StandardForm {
                field: field.clone(),
                k,
                a0,
                b0,
                omega: omega.clone(),
                alphas: alphas.clone(),
                gamma,
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisInfo {
    pub galois: bool,
    /// `(Z/pZ)^k` when Galois.
    pub group: Option<String>,
}

/// Exponent of `pi` in the radicand: `p^k - b_0 + A_0 - 1`.
fn radicand_exponent(sf: &StandardForm) -> u64 {
    sf.pk() - sf.b0 + sf.a0 - 1
}

/// Residue of the unit part `(-1)^{b_0} b_0 w` of the radicand.
fn radicand_unit(sf: &StandardForm) -> RFElem {
    let s = if sf.b0.is_multiple_of(2) { 1 } else { -1 };
    sf.omega.scale(s * (sf.b0 % sf.field.p()) as i64)
}

/// Galois iff `(p^k - 1) | (q - 1)` and the radicand is a `(p^k - 1)`-th power
/// in `K`; by Hensel's lemma the latter is a valuation test plus a residue test.
pub fn is_galois(sf: &StandardForm) -> GaloisInfo {
    let m = sf.pk() - 1;
    let q = sf.field.residue().size();
    let galois =
        (q - 1).is_multiple_of(m) && radicand_exponent(sf).is_multiple_of(m) && rf_is_nth_power(&radicand_unit(sf), m);
    GaloisInfo { galois, group: galois.then(|| format!("(Z/{}Z)^{}", sf.field.p(), sf.k)) }
}

#[derive(Clone, Debug)]
pub struct SplittingFieldDescr {
    /// The extension `L = K(pi_L)` defined by the rendered standard form.
    pub base: String,
    /// `m = p^k - 1`: order of the adjoined root of unity and degree of the radical.
    pub m: u64,
    pub radicand: KElem,
    pub radicand_exponent: u64,
    /// `[K(zeta_m) : K]`, the order of `q` modulo `m`.
    pub unramified_degree: u64,
    /// Order of the radicand in `K(zeta_m)^* / (K(zeta_m)^*)^m`.
    pub radical_degree: u64,
    pub tame_degree: u64,
}

impl SplittingFieldDescr {
    pub fn equals_base(&self) -> bool {
        self.tame_degree == 1
    }

    pub fn description(&self) -> String {
        format!("K(pi_L, zeta_{m}, ({})^(1/{m}))", render_k(&self.radicand), m = self.m)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base,
            "description": self.description(),
            "root_of_unity_order": self.m,
            "radicand": render_k(&self.radicand),
            "radicand_pi_exponent": self.radicand_exponent,
            "radical_degree_bound": self.m,
            "unramified_degree": self.unramified_degree,
            "radical_degree": self.radical_degree,
            "tame_degree": self.tame_degree,
            "equals_base": self.equals_base(),
        })
    }
}

/// The splitting field `L(zeta_m, radicand^(1/m))`, with the degree of its
/// tame part `K(zeta_m, radicand^(1/m))` over `K`.
pub fn splitting_field(sf: &StandardForm) -> SplittingFieldDescr {
    let field = &sf.field;
    let m = sf.pk() - 1;
    let q = field.residue().size();
    let e = radicand_exponent(sf);
    let unit = radicand_unit(sf);
    let s = if sf.b0.is_multiple_of(2) { 1 } else { -1 };
    let radicand = field
        .teich(&sf.omega)
        .mul(&field.from_int(s * sf.b0 as i64))
        .shift_up(e as u32);

    let mut f = 1u64;
    let mut qf = q % m;
    while qf != 1 % m {
        qf = qf * (q % m) % m;
        f += 1;
    }
    let big_q = BigUint::from(q).pow(f as u32);
    let cofactor = (big_q - BigUint::one()) / BigUint::from(m);
    let ord = BigUint::from(unit.order().expect("radicand unit is nonzero"));
    let radical = (1..=m)
        .find(|&s| (s * e).is_multiple_of(m) && (&cofactor * BigUint::from(s)).mod_floor(&ord).is_zero())
        .expect("s = m always works");
    SplittingFieldDescr {
        base: sf.render().render(),
        m,
        radicand,
        radicand_exponent: e,
        unramified_degree: f,
        radical_degree: radical,
        tame_degree: f * radical,
    }
}
