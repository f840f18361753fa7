//! Seeded random fields, elements, Eisenstein polynomials and uniformizer
//! expressions for property suites.

use std::collections::BTreeMap;

use rand::Rng;

use crate::eisenstein::{EisensteinPoly, TwoIndex};
use crate::literal::XPoly;
use crate::local_field::{KElem, LocalField, Model};
use crate::residue_field::{RFElem, ResidueField};

pub fn random_residue<R: Rng>(rng: &mut R, rf: &ResidueField) -> RFElem {
    rf.element(rng.gen_range(0..rf.size()))
}

pub fn random_nonzero_residue<R: Rng>(rng: &mut R, rf: &ResidueField) -> RFElem {
    rf.element(rng.gen_range(1..rf.size()))
}

/// A small field: `p` in {2, 3, 5}, `d` in {1, 2}, either model.
pub fn random_field<R: Rng>(rng: &mut R, precision: u32) -> LocalField {
    let p = [2u64, 3, 5][rng.gen_range(0..3)];
    let d = rng.gen_range(1..=2);
    let model = if rng.gen_bool(0.5) { Model::MixedUnramified } else { Model::EqualChar };
    LocalField::new(model, ResidueField::new(p, d, None).expect("small field"), precision).expect("precision fits")
}

/// `sum_{i >= v} teich(a_i) pi^i` with random digits, each kept with probability `density`.
pub fn random_element<R: Rng>(rng: &mut R, field: &LocalField, v: u32, density: f64) -> KElem {
    let rf = field.residue();
    let mut terms = Vec::new();
    for i in v..field.precision() {
        if rng.gen_bool(density) {
            terms.push((i, random_residue(rng, rf)));
        }
    }
    field.from_digit_terms(&terms)
}

/// A unit times `pi^v`.
pub fn random_exact_valuation<R: Rng>(rng: &mut R, field: &LocalField, v: u32) -> KElem {
    let lead = field.teich(&random_nonzero_residue(rng, field.residue())).shift_up(v);
    lead.add(&random_element(rng, field, v + 1, 0.5))
}

/// Random Eisenstein polynomial of degree `n`; each `c_h` (`h < n`) is present
/// with probability `density`.
pub fn random_eisenstein<R: Rng>(rng: &mut R, field: &LocalField, n: usize, density: f64) -> EisensteinPoly {
    let mut coeffs = vec![None; n];
    for c in coeffs.iter_mut().take(n - 1) {
        if rng.gen_bool(density) {
            let v = rng.gen_range(1..=3.min(field.precision() - 1).max(1));
            *c = Some(random_element(rng, field, v, 0.6));
        }
    }
    coeffs[n - 1] = Some(random_exact_valuation(rng, field, 1));
    EisensteinPoly::new(field, coeffs).expect("constructed Eisenstein")
}

/// Random polynomial of degree `p^k` whose indices are `(i_0, ..., i_0, 0)`:
/// `c_{b_0}` has valuation `A_0`, `c_{p^k}` valuation 1 and every other `c_h`
/// valuation at least `ceil((i_0 + h) / p^k)`.
pub fn random_two_index<R: Rng>(rng: &mut R, field: &LocalField, k: u32, i0: u64) -> EisensteinPoly {
    let pk = field.p().pow(k);
    let t = TwoIndex::from_i0(i0, pk);
    let n = pk as usize;
    let mut coeffs = vec![None; n];
    for h in 1..n as u64 {
        let c = if h == t.b0 {
            random_exact_valuation(rng, field, t.a0 as u32)
        } else {
            let v = ((i0 + h).div_ceil(pk) as u32).max(1);
            if v >= field.precision() || !rng.gen_bool(0.5) {
                continue;
            }
            random_element(rng, field, v, 0.5)
        };
        coeffs[h as usize - 1] = Some(c);
    }
    coeffs[n - 1] = Some(random_exact_valuation(rng, field, 1));
    EisensteinPoly::new(field, coeffs).expect("constructed Eisenstein")
}

/// `u X + sum_{e=2}^{max_deg} a_e X^e` with `u` a unit: a uniformizer of any
/// totally ramified extension.
pub fn random_uniformizer_expr<R: Rng>(rng: &mut R, field: &LocalField, max_deg: u32) -> XPoly {
    let mut terms = BTreeMap::new();
    terms.insert(1, random_exact_valuation(rng, field, 0));
    for e in 2..=max_deg {
        if rng.gen_bool(0.7) {
            terms.insert(e, random_element(rng, field, 0, 0.5));
        }
    }
    XPoly { terms, cap: None }
}
