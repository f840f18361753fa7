//! Fixed fields and polynomials used by tests, the acceptance suite and the
//! `verify-paper` command.

use std::collections::BTreeMap;

use crate::classify::ClassificationRequest;
use crate::eisenstein::EisensteinPoly;
use crate::local_field::{KElem, LocalField, Model};
use crate::residue_field::ResidueField;
use crate::standard_form::StandardForm;

/// `Q_3(zeta_8)`: unramified of degree 2 over `Q_3`, residue field `F_3[g]/(g^2 + 1)`.
pub fn q3_zeta8(precision: u32) -> LocalField {
    let rf = ResidueField::with_modulus_literal(3, 2, "g^2 + 1").expect("g^2 + 1 is irreducible over F_3");
    LocalField::new(Model::MixedUnramified, rf, precision).expect("3^precision fits")
}

/// `F_3((t))`.
pub fn f3_laurent(precision: u32) -> LocalField {
    LocalField::new(Model::EqualChar, ResidueField::new(3, 1, None).expect("F_3"), precision).expect("valid precision")
}

/// Builds `X^n + sum (-1)^h c_h X^{n-h}` from `h -> c_h`.
fn from_c(field: &LocalField, n: usize, terms: &[(usize, KElem)]) -> EisensteinPoly {
    let map: BTreeMap<usize, KElem> = terms.iter().cloned().collect();
    EisensteinPoly::from_terms(field, n, &map).expect("fixture is Eisenstein")
}

/// `X^9 + pi X^7 - pi X^6 + pi X^3 - pi`, indices `(7, 3, 0)`.
pub fn three_index_nonic(field: &LocalField) -> EisensteinPoly {
    let pi = field.pi();
    from_c(field, 9, &[(2, pi.clone()), (3, pi.clone()), (6, pi.clone()), (9, pi)])
}

/// `X^6 - pi X^5 + pi X^4 + pi`, indices `(4, 0)`.
pub fn sextic(field: &LocalField) -> EisensteinPoly {
    let pi = field.pi();
    from_c(field, 6, &[(1, pi.clone()), (2, pi.clone()), (6, pi)])
}

/// `X^9 - pi^2 X^4 + pi X^3 - pi` over a base with `e_K = 1`: indices
/// `(12, 3, 0)`, the same as those of `X^9 + pi X^3 - pi`.
pub fn same_indices_nonic(field: &LocalField) -> EisensteinPoly {
    let pi = field.pi();
    from_c(field, 9, &[(5, pi.pow(2)), (6, pi.clone()), (9, pi)])
}

/// `X^9 + pi X^3 - pi`, three nonzero terms with indices `(12, 3, 0)` when `e_K = 1`.
pub fn same_indices_trinomial(field: &LocalField) -> EisensteinPoly {
    let pi = field.pi();
    from_c(field, 9, &[(6, pi.clone()), (9, pi)])
}

/// `X^9 + t X^8 + t (1 + t^5)` over `F_3((t))`.
pub fn laurent_nonic(field: &LocalField) -> EisensteinPoly {
    let t = field.pi();
    from_c(field, 9, &[(1, t.neg()), (9, t.mul(&field.one().add(&t.pow(5))).neg())])
}

/// The 16 standard forms over `Q_3(zeta_8)` with `k = 2`, `i_0 = 8`.
pub fn q3_zeta8_forms(field: &LocalField) -> Vec<StandardForm> {
    ClassificationRequest::new(field, 2, 8).enumerate().expect("16 forms").collect()
}

/// Ten standard forms over `F_3((t))` with `k = 2`: all forms for `i_0 = 8`
/// and `i_0 = 7`, then the first ones for `i_0 = 16`.
pub fn laurent_forms(field: &LocalField) -> Vec<StandardForm> {
    [8u64, 7, 16]
        .iter()
        .flat_map(|&i0| ClassificationRequest::new(field, 2, i0).enumerate().expect("small classification").collect::<Vec<_>>())
        .take(10)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::ExtInt;

    fn fin(v: &[ExtInt]) -> Vec<u64> {
        v.iter().map(|i| i.finite().unwrap()).collect()
    }

    #[test]
    fn fixture_indices() {
        let k = q3_zeta8(12);
        assert_eq!(fin(&three_index_nonic(&k).indices().unwrap().idx), vec![7, 3, 0]);
        assert_eq!(fin(&sextic(&k).indices().unwrap().idx), vec![4, 0]);
        assert_eq!(fin(&same_indices_nonic(&k).indices().unwrap().idx), vec![12, 3, 0]);
        assert_eq!(fin(&same_indices_trinomial(&k).indices().unwrap().idx), vec![12, 3, 0]);
        let t = f3_laurent(16);
        assert_eq!(fin(&three_index_nonic(&t).indices().unwrap().idx), vec![7, 3, 0]);
        assert_eq!(laurent_nonic(&t).x_coeff(8), t.pi());
        assert_eq!(laurent_forms(&t).len(), 10);
        assert_eq!(q3_zeta8_forms(&k).len(), 16);
    }
}
