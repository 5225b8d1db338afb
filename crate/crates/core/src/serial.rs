//! JSON wire format for polynomials.
//!
//! ```json
//! { "field": "gf:5", "variables": ["z1", "z2"],
//!   "terms": [ { "coeff": "3", "exponents": [2, 0] } ] }
//! ```
//!
//! Terms are written leading-first (descending grevlex), so the encoding of
//! a polynomial is canonical.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, PrimeField, RationalField};
use crate::poly::{Monomial, MultiPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub field: String,
    pub variables: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: String,
    pub exponents: Vec<u32>,
}

impl<K: Field> MultiPoly<K> {
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            field: self.field().spec().to_string(),
            variables: self.vars().to_vec(),
            terms: self
                .terms()
                .rev()
                .map(|(m, c)| TermJson { coeff: self.field().format_elem(c), exponents: m.exponents().to_vec() })
                .collect(),
        }
    }

    /// Decodes `json` over `field`; the declared field must match.
    pub fn from_json(field: K, json: &PolyJson) -> Result<Self> {
        let declared: FieldSpec = json.field.parse()?;
        if declared != field.spec() {
            return Err(Error::input(format!("polynomial declared over {declared}, expected {}", field.spec())));
        }
        let n = json.variables.len();
        let mut terms = Vec::with_capacity(json.terms.len());
        for t in &json.terms {
            if t.exponents.len() != n {
                return Err(Error::input(format!(
                    "exponents array of length {} but {} variables",
                    t.exponents.len(),
                    n
                )));
            }
            terms.push((Monomial::new(t.exponents.clone()), field.parse_elem(&t.coeff)?));
        }
        MultiPoly::from_terms(field, json.variables.clone(), terms)
    }
}

/// A polynomial whose field is only known at runtime.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPoly {
    Rational(MultiPoly<RationalField>),
    Prime(MultiPoly<PrimeField>),
}

impl AnyPoly {
    pub fn from_json(json: &PolyJson) -> Result<Self> {
        match json.field.parse::<FieldSpec>()? {
            FieldSpec::Rational => Ok(AnyPoly::Rational(MultiPoly::from_json(RationalField, json)?)),
            FieldSpec::Prime(p) => Ok(AnyPoly::Prime(MultiPoly::from_json(PrimeField::new(p)?, json)?)),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let json: PolyJson =
            serde_json::from_str(text).map_err(|e| Error::input(format!("malformed polynomial JSON: {e}")))?;
        Self::from_json(&json)
    }

    pub fn to_json(&self) -> PolyJson {
        match self {
            AnyPoly::Rational(p) => p.to_json(),
            AnyPoly::Prime(p) => p.to_json(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::random_poly;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_exponent_length() {
        let text = r#"{"field":"rational","variables":["x","y"],"terms":[{"coeff":"1","exponents":[1]}]}"#;
        assert!(AnyPoly::parse(text).is_err());
    }

    #[test]
    fn rejects_unknown_keys_and_fields() {
        let text = r#"{"field":"gf:4","variables":["x"],"terms":[]}"#;
        assert!(AnyPoly::parse(text).is_err());
        let text = r#"{"field":"rational","variables":["x"],"terms":[],"extra":1}"#;
        assert!(AnyPoly::parse(text).is_err());
    }

    #[test]
    fn rational_coefficients_parse() {
        let text = r#"{"field":"rational","variables":["x","y"],"terms":[{"coeff":"-3/6","exponents":[1,1]}]}"#;
        let p = AnyPoly::parse(text).unwrap();
        assert_eq!(p.to_json().terms[0].coeff, "-1/2");
    }

    proptest! {
        #[test]
        fn json_roundtrip_is_identity(seed in any::<u64>(), deg in 0u32..4, hom in any::<bool>()) {
            let vars: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
            let p = random_poly(deg, vars, PrimeField::new(7).unwrap(), hom, seed);
            let json = p.to_json();
            let text = serde_json::to_string(&json).unwrap();
            let back = AnyPoly::parse(&text).unwrap();
            prop_assert_eq!(back, AnyPoly::Prime(p));
        }
    }
}
