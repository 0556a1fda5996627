//! `interval-map/1`: the JSON document for a constructed map.
//!
//! Documents are canonical: object keys are sorted, rationals are written in
//! lowest terms as `"num/den"` strings and floats as their shortest
//! round-trip decimal, so re-serializing a parsed document reproduces it byte
//! for byte.

use serde::{Deserialize, Serialize};

use crate::construct::TypedMap;
use crate::error::{Error, Result};
use crate::interval::NamedInterval;
use crate::plmap::PLMap;
use crate::scalar::Scalar;
use crate::sharkovskii::SharkovskiiValue;

pub const FORMAT: &str = "interval-map/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub format: String,
    pub params: DocParams,
    pub claims: Claims,
    pub map: MapData,
    pub markers: Markers,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocParams {
    pub p: u64,
    pub d: u32,
    pub lambda: Scalar,
    /// The slope as given on input (`"2"`, `"lambda_p"`, ...).
    pub lambda_input: String,
    /// `"exact"` or `"float"`.
    pub mode: String,
    pub rescaled: bool,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Claims {
    #[serde(rename = "type")]
    pub type_n: SharkovskiiValue,
    pub entropy: String,
    pub entropy_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapData {
    pub breakpoints: Vec<Scalar>,
    pub values: Vec<Scalar>,
}

/// Markers of the base map `f_{p,lambda}` (before any square root).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Markers {
    pub orbit: Vec<Scalar>,
    pub t: Scalar,
    pub ell: Scalar,
    pub k: u64,
    pub intervals: Vec<NamedInterval>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool: String,
    pub created_unix: u64,
}

/// `"log 2"`, `"(log 2)/4"`, `"log(3/2)"`, `"(log 1.51...)/2"`.
pub fn entropy_claim(lambda: &Scalar, d: u32) -> String {
    let log = match lambda.as_rational() {
        Some(r) if r.is_integer() => format!("log {}", r.numer()),
        Some(r) => format!("log({}/{})", r.numer(), r.denom()),
        None => format!("log {lambda}"),
    };
    if d == 0 {
        log
    } else {
        format!("({log})/{}", 1u64 << d)
    }
}

impl MapDocument {
    pub fn from_typed(tm: &TypedMap, lambda_input: &str, tool: &str, created_unix: u64) -> Self {
        let params = &tm.params;
        MapDocument {
            format: FORMAT.to_string(),
            params: DocParams {
                p: params.p,
                d: params.d,
                lambda: params.lambda.clone(),
                lambda_input: lambda_input.to_string(),
                mode: if params.lambda.is_exact() { "exact" } else { "float" }.to_string(),
                rescaled: params.rescale,
                tol: params.tol,
            },
            claims: Claims {
                type_n: SharkovskiiValue::Finite(params.type_claim()),
                entropy: entropy_claim(&params.lambda, params.d),
                entropy_value: params.target_entropy(),
            },
            map: MapData {
                breakpoints: tm.map.breakpoints().to_vec(),
                values: tm.map.values().to_vec(),
            },
            markers: Markers {
                orbit: tm.base.orbit.clone(),
                t: tm.base.t.clone(),
                ell: tm.base.ell.clone(),
                k: tm.base.k,
                intervals: tm.base.intervals.clone(),
            },
            provenance: Provenance {
                tool: tool.to_string(),
                created_unix,
            },
        }
    }

    pub fn to_json(&self) -> String {
        // Value's object map is ordered by key.
        let value = serde_json::to_value(self).expect("document is always serializable");
        let mut s = serde_json::to_string_pretty(&value).expect("value is always serializable");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: MapDocument = serde_json::from_str(s).map_err(|e| Error::Parse(format!("map document: {e}")))?;
        if doc.format != FORMAT {
            return Err(Error::Parse(format!("unsupported format {:?}, expected {FORMAT:?}", doc.format)));
        }
        doc.to_plmap()?;
        Ok(doc)
    }

    pub fn to_plmap(&self) -> Result<PLMap> {
        PLMap::new(self.map.breakpoints.clone(), self.map.values.clone())
    }

    pub fn claimed_type(&self) -> SharkovskiiValue {
        self.claims.type_n
    }

    /// The `I/J/K` pseudo-partition, which lives on the map's own domain only
    /// when no square root was taken.
    pub fn partition(&self) -> Option<&[NamedInterval]> {
        (self.params.d == 0).then_some(&self.markers.intervals[..])
    }
}
