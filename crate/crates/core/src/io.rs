//! JSON formats for fields, polynomials and standard forms.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::eisenstein::EisensteinPoly;
use crate::error::Error;
use crate::literal::{parse_k, render_k};
use crate::local_field::{LocalField, Model};
use crate::residue_field::ResidueField;
use crate::standard_form::StandardForm;

/// `{"model": "mixed" | "equal", "p": 3, "d": 2, "modulus": "g^2 + 1", "precision": 12}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub model: String,
    pub p: u64,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
    pub precision: u32,
}

impl FieldSpec {
    pub fn to_field(&self) -> Result<LocalField, Error> {
        let model = match self.model.as_str() {
            "mixed" => Model::MixedUnramified,
            "equal" => Model::EqualChar,
            other => return Err(Error::Format(format!("unknown model `{other}`, expected \"mixed\" or \"equal\""))),
        };
        let residue = match &self.modulus {
            Some(m) => ResidueField::with_modulus_literal(self.p, self.d, m)?,
            None => ResidueField::new(self.p, self.d, None)?,
        };
        Ok(LocalField::new(model, residue, self.precision)?)
    }

    pub fn from_field(field: &LocalField) -> FieldSpec {
        let rf = field.residue();
        FieldSpec {
            model: match field.model() {
                Model::MixedUnramified => "mixed",
                Model::EqualChar => "equal",
            }
            .into(),
            p: rf.p(),
            d: rf.degree(),
            modulus: Some(rf.modulus_literal()),
            precision: field.precision(),
        }
    }
}

pub fn field_from_value(v: &Value) -> Result<LocalField, Error> {
    FieldSpec::deserialize(v)?.to_field()
}

pub fn field_to_value(field: &LocalField) -> Value {
    serde_json::to_value(FieldSpec::from_field(field)).expect("field specs serialize")
}

/// Polynomial file `{"field": {...}?, "degree": n, "terms": {"h": "<c_h>"}}`
/// in the sign convention `X^n + sum (-1)^h c_h X^{n-h}`. An explicit `field`
/// argument takes precedence over the embedded one.
pub fn poly_from_value(v: &Value, field: Option<&LocalField>) -> Result<EisensteinPoly, Error> {
    let obj = v.as_object().ok_or_else(|| Error::Format("polynomial file must be a JSON object".into()))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "field" | "degree" | "terms") {
            return Err(Error::Format(format!("unknown key `{key}` in polynomial file")));
        }
    }
    let field = match (field, obj.get("field")) {
        (Some(f), _) => f.clone(),
        (None, Some(spec)) => field_from_value(spec)?,
        (None, None) => return Err(Error::Format("no field given: pass --field or embed \"field\"".into())),
    };
    let n = obj
        .get("degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Format("missing integer `degree`".into()))? as usize;
    let terms = obj
        .get("terms")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Format("missing object `terms`".into()))?;
    let mut coeffs = BTreeMap::new();
    for (h, lit) in terms {
        let h: usize = h.parse().map_err(|_| Error::Format(format!("bad term index `{h}`")))?;
        let lit = lit.as_str().ok_or_else(|| Error::Format(format!("term {h} must be a string literal")))?;
        let c = parse_k(lit, &field).map_err(|e| Error::Format(format!("term {h}: {e}")))?;
        coeffs.insert(h, c);
    }
    Ok(EisensteinPoly::from_terms(&field, n, &coeffs)?)
}

pub fn poly_to_value(f: &EisensteinPoly, with_field: bool) -> Value {
    let mut obj = Map::new();
    if with_field {
        obj.insert("field".into(), field_to_value(f.field()));
    }
    obj.insert("degree".into(), Value::from(f.degree()));
    let mut terms = Map::new();
    for (h, c) in f.terms() {
        terms.insert(h.to_string(), Value::String(render_k(&c)));
    }
    obj.insert("terms".into(), Value::Object(terms));
    Value::Object(obj)
}

pub fn standard_form_from_value(v: &Value, field: &LocalField) -> Result<StandardForm, Error> {
    Ok(StandardForm::from_json(field, v)?)
}

pub fn read_json(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json(path: &Path, v: &Value) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.display().to_string(), source })
}
