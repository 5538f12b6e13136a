//! JSON round trip for series.
//!
//! Schema:
//! `{"K":int,"L":int,"nw":int,"d":int,"terms":[{"k":int,"l":int,"mono":[ints],"re":num,"im":num}]}`
//!
//! One JSON term corresponds to one monomial of one coefficient
//! polynomial; `mono` lists the 2*nw exponents (w block then wbar block).
//! In float mode `re`/`im` are JSON numbers. In exact-rational mode they
//! are strings and parse as either fractions `p/q` or finite decimals;
//! serialization emits fractions, which represent every rational exactly.
//! Terms serialize sorted by (k, l, mono), so output is deterministic.

use crate::error::SeriesError;
use crate::poly::WPolynomial;
use crate::scalar::{C64, CRat, Coeff, format_rational, parse_rational};
use crate::series::TruncatedBiSeries;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SeriesJson {
    #[serde(rename = "K")]
    pub kmax: usize,
    #[serde(rename = "L")]
    pub lmax: usize,
    pub nw: usize,
    pub d: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TermJson {
    pub k: usize,
    pub l: usize,
    pub mono: Vec<u32>,
    pub re: NumJson,
    pub im: NumJson,
}

/// A numeric field that is a JSON number in float mode and a string in
/// exact-rational mode.
#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(untagged)]
pub enum NumJson {
    Float(f64),
    Text(String),
}

/// Conversion between a scalar type and its JSON number encoding.
pub trait JsonScalar: Coeff {
    fn encode(part_re: &Self) -> (NumJson, NumJson);
    fn decode(re: &NumJson, im: &NumJson) -> Result<Self, SeriesError>;
}

impl JsonScalar for C64 {
    fn encode(value: &Self) -> (NumJson, NumJson) {
        (NumJson::Float(value.re), NumJson::Float(value.im))
    }
    fn decode(re: &NumJson, im: &NumJson) -> Result<Self, SeriesError> {
        let part = |n: &NumJson| -> Result<f64, SeriesError> {
            match n {
                NumJson::Float(x) => Ok(*x),
                NumJson::Text(s) => s.parse::<f64>().map_err(|e| SeriesError::Json {
                    reason: format!("bad float {s:?}: {e}"),
                }),
            }
        };
        Ok(C64::new(part(re)?, part(im)?))
    }
}

impl JsonScalar for CRat {
    fn encode(value: &Self) -> (NumJson, NumJson) {
        (
            NumJson::Text(format_rational(&value.re)),
            NumJson::Text(format_rational(&value.im)),
        )
    }
    fn decode(re: &NumJson, im: &NumJson) -> Result<Self, SeriesError> {
        let part = |n: &NumJson| match n {
            NumJson::Float(x) => {
                num::rational::BigRational::from_float(*x).ok_or_else(|| SeriesError::Json {
                    reason: format!("non-finite float {x}"),
                })
            }
            NumJson::Text(s) => parse_rational(s).map_err(|reason| SeriesError::Json { reason }),
        };
        Ok(CRat::new(part(re)?, part(im)?))
    }
}

pub fn series_to_json<T: JsonScalar>(series: &TruncatedBiSeries<T>) -> SeriesJson {
    let mut terms = Vec::new();
    for ((k, l), poly) in series.coeffs() {
        for (mono, coeff) in poly.terms() {
            let (re, im) = T::encode(coeff);
            terms.push(TermJson {
                k: *k,
                l: *l,
                mono: mono.iter().map(|&e| e as u32).collect(),
                re,
                im,
            });
        }
    }
    terms.sort_by(|a, b| (a.k, a.l, &a.mono).cmp(&(b.k, b.l, &b.mono)));
    SeriesJson {
        kmax: series.kmax(),
        lmax: series.lmax(),
        nw: series.nw(),
        d: series.degree_cap(),
        terms,
    }
}

pub fn series_from_json<T: JsonScalar>(doc: &SeriesJson) -> Result<TruncatedBiSeries<T>, SeriesError> {
    let mut out = TruncatedBiSeries::zero(doc.kmax, doc.lmax, doc.nw, doc.d);
    for term in &doc.terms {
        if term.k > doc.kmax || term.l > doc.lmax {
            return Err(SeriesError::IndexOutOfWindow {
                k: term.k,
                l: term.l,
                kmax: doc.kmax,
                lmax: doc.lmax,
            });
        }
        if term.mono.len() != 2 * doc.nw {
            return Err(SeriesError::BadMonomial {
                expected: 2 * doc.nw,
                got: term.mono.len(),
            });
        }
        if term.mono.iter().any(|&e| e > u8::MAX as u32) {
            return Err(SeriesError::Json {
                reason: format!("exponent above {} in term ({}, {})", u8::MAX, term.k, term.l),
            });
        }
        let mono: Vec<u8> = term.mono.iter().map(|&e| e as u8).collect();
        let value = T::decode(&term.re, &term.im)?;
        let single = WPolynomial::monomial(doc.nw, doc.d, mono, value)?;
        let updated = out.coeff(term.k, term.l).add(&single)?;
        out.set_coeff(term.k, term.l, updated)?;
    }
    out.check_reality();
    Ok(out)
}

pub fn series_to_string<T: JsonScalar>(series: &TruncatedBiSeries<T>) -> String {
    serde_json::to_string(&series_to_json(series)).expect("series json serializes")
}

pub fn series_from_str<T: JsonScalar>(text: &str) -> Result<TruncatedBiSeries<T>, SeriesError> {
    let doc: SeriesJson = serde_json::from_str(text).map_err(|e| SeriesError::Json {
        reason: e.to_string(),
    })?;
    series_from_json(&doc)
}
