//! Serializable verification reports and fan exports.

use serde::Serialize;
use serde_json::Value;

use crate::exact_linalg::{QMatrix, ZVector};
use crate::polyhedral::Fan;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub claim: String,
    pub n: Option<usize>,
    pub result: bool,
    pub certificates: Vec<Value>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(claim: impl Into<String>, n: Option<usize>) -> Report {
        Report { claim: claim.into(), n, result: true, certificates: Vec::new(), elapsed_ms: 0 }
    }

    /// Records a certificate and folds its verdict into the result.
    pub fn check(&mut self, ok: bool, certificate: Value) {
        self.result &= ok;
        self.certificates.push(certificate);
    }
}

/// `{n, rays, cones}` with integer entries as decimal strings.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FanJson {
    pub n: usize,
    pub ambient_dim: usize,
    pub rays: Vec<Vec<String>>,
    pub lineality: Vec<Vec<String>>,
    pub cones: Vec<Vec<usize>>,
}

impl FanJson {
    pub fn new(n: usize, f: &Fan) -> FanJson {
        FanJson {
            n,
            ambient_dim: f.ambient_dim(),
            rays: f.rays().iter().map(int_strings).collect(),
            lineality: f.lineality().iter().map(int_strings).collect(),
            cones: f.cone_rays().to_vec(),
        }
    }
}

pub fn int_strings(v: &ZVector) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Rows of a rational matrix as `"p/q"` strings (`"p"` for integers).
pub fn matrix_strings(m: &QMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect()
}

pub(crate) fn ser_int<S: serde::Serializer>(x: &num_bigint::BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

pub(crate) fn ser_ints<S: serde::Serializer>(v: &[num_bigint::BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}
