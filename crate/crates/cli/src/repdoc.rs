//! JSON document format for compression-body representations.

use fordom_core::group::{validate, CompressionBodyRep};
use fordom_core::{ComplexValue, MoebiusMap, Tol};
use serde::{Deserialize, Serialize};

/// On-disk layout: complex numbers as [re, im], matrices as [a, b, c, d].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepDocument {
    pub t_alpha: [f64; 2],
    pub t_beta: [f64; 2],
    pub gammas: Vec<[[f64; 2]; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug)]
pub enum DocError {
    Parse(String),
    Validation(String),
}

impl core::fmt::Display for DocError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DocError::Parse(msg) => write!(f, "parse error: {msg}"),
            DocError::Validation(msg) => write!(f, "invalid representation: {msg}"),
        }
    }
}

fn complex(pair: [f64; 2]) -> ComplexValue {
    ComplexValue::new(pair[0], pair[1])
}

fn pair(z: ComplexValue) -> [f64; 2] {
    [z.re, z.im]
}

/// Parses and validates a representation document. Generators whose raw
/// determinant drifts from one are renormalized; each such repair is
/// reported as a warning so silent corruption stays visible.
pub fn parse_rep(text: &str) -> Result<(CompressionBodyRep, Vec<String>), DocError> {
    let doc: RepDocument =
        serde_json::from_str(text).map_err(|e| DocError::Parse(e.to_string()))?;
    let mut warnings = Vec::new();
    let mut gammas = Vec::with_capacity(doc.gammas.len());
    for (i, entries) in doc.gammas.iter().enumerate() {
        let [a, b, c, d] = entries.map(complex);
        let det = a * d - b * c;
        if (det - ComplexValue::new(1.0, 0.0)).norm() > 1e-9 {
            warnings.push(format!(
                "gammas[{i}]: determinant {},{} renormalized",
                det.re, det.im
            ));
        }
        let g = MoebiusMap::normalize(a, b, c, d)
            .map_err(|e| DocError::Validation(format!("gammas[{i}]: {e}")))?;
        gammas.push(g);
    }
    let tol = doc.tolerance.map_or_else(Tol::default, Tol::new);
    let rep = CompressionBodyRep {
        t_alpha: complex(doc.t_alpha),
        t_beta: complex(doc.t_beta),
        gammas,
        tol,
        family: None,
    };
    let report = validate(&rep);
    if let Some(failure) = report.failure {
        return Err(DocError::Validation(format!("{failure:?}")));
    }
    Ok((rep, warnings))
}

/// Serializes a representation back to the document format.
pub fn serialize_rep(rep: &CompressionBodyRep) -> String {
    let doc = RepDocument {
        t_alpha: pair(rep.t_alpha),
        t_beta: pair(rep.t_beta),
        gammas: rep
            .gammas
            .iter()
            .map(|g| [pair(g.a), pair(g.b), pair(g.c), pair(g.d)])
            .collect(),
        tolerance: Some(rep.tol.eq),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    text.push('\n');
    text
}
