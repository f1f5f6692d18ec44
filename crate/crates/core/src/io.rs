//! JSON formats for chains and distributions.
//!
//! Rationals are written as strings `"a/b"` or `"n"`; bare JSON integers are
//! accepted on input. A chain file is
//!
//! ```json
//! {"P": [["1/2", "1/2"], ["2/3", "1/3"]], "M": [1]}
//! ```
//!
//! and a distribution is tagged by `"type"`, for example
//! `{"type": "negbinomial", "p": "1/2", "k": 3}`.

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chain::PartitionedChain;
use crate::distributions::DistributionSpec;
use crate::error::Error;
use crate::matrix::Matrix;
use crate::scalar::{format_rational, parse_rational};

/// A rational read from `"a/b"`, `"n"` or a JSON integer.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalText(pub BigRational);

impl Serialize for RationalText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => parse_rational(&s)
                .map(RationalText)
                .map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(RationalText(BigRational::from_integer(n.into()))),
        }
    }
}

fn to_matrix(rows: &[Vec<RationalText>]) -> Result<Matrix<BigRational>, Error> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|v| v.0.clone()).collect())
            .collect(),
    )
}

fn from_matrix(m: &Matrix<BigRational>) -> Vec<Vec<RationalText>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(RationalText).collect())
        .collect()
}

/// Rows of rational strings.
pub fn matrix_strings(m: &Matrix<BigRational>) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    #[serde(rename = "P")]
    pub p: Vec<Vec<RationalText>>,
    #[serde(rename = "M")]
    pub m: Vec<usize>,
}

impl ChainFile {
    pub fn to_chain(&self) -> Result<PartitionedChain<BigRational>, Error> {
        PartitionedChain::partition(to_matrix(&self.p)?, &self.m)
    }

    pub fn from_chain(c: &PartitionedChain<BigRational>) -> Self {
        ChainFile {
            p: from_matrix(c.p()),
            m: c.m_states().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum DistributionFile {
    #[serde(rename = "binomial")]
    Binomial { n: usize, p: RationalText },
    #[serde(rename = "poisson")]
    Poisson { lambda: RationalText },
    #[serde(rename = "negbinomial")]
    NegBinomial { p: RationalText, k: usize },
    #[serde(rename = "altnegbinomial")]
    AltNegBinomial {
        p: RationalText,
        q: RationalText,
        k: usize,
    },
    #[serde(rename = "uniform")]
    Uniform {
        #[serde(rename = "N")]
        n: usize,
    },
    #[serde(rename = "phasetype")]
    PhaseType {
        a: Vec<RationalText>,
        #[serde(rename = "A")]
        a_mat: Vec<Vec<RationalText>>,
    },
    #[serde(rename = "recurrence")]
    Recurrence {
        #[serde(rename = "P")]
        p: Vec<Vec<RationalText>>,
        #[serde(rename = "M")]
        m: Vec<usize>,
    },
}

impl DistributionFile {
    pub fn to_spec(&self) -> Result<DistributionSpec<BigRational>, Error> {
        let spec = match self {
            DistributionFile::Binomial { n, p } => DistributionSpec::Binomial {
                n: *n,
                p: p.0.clone(),
            },
            DistributionFile::Poisson { lambda } => DistributionSpec::Poisson {
                lambda: lambda.0.clone(),
            },
            DistributionFile::NegBinomial { p, k } => DistributionSpec::NegBinomial {
                p: p.0.clone(),
                k: *k,
            },
            DistributionFile::AltNegBinomial { p, q, k } => DistributionSpec::AltNegBinomial {
                p: p.0.clone(),
                q: q.0.clone(),
                k: *k,
            },
            DistributionFile::Uniform { n } => DistributionSpec::DiscreteUniform { n: *n },
            DistributionFile::PhaseType { a, a_mat } => DistributionSpec::PhaseType {
                a: to_matrix(std::slice::from_ref(a))?,
                a_mat: to_matrix(a_mat)?,
            },
            DistributionFile::Recurrence { p, m } => {
                DistributionSpec::Recurrence(PartitionedChain::partition(to_matrix(p)?, m)?)
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_spec(d: &DistributionSpec<BigRational>) -> Self {
        let t = |v: &BigRational| RationalText(v.clone());
        match d {
            DistributionSpec::Binomial { n, p } => DistributionFile::Binomial { n: *n, p: t(p) },
            DistributionSpec::Poisson { lambda } => DistributionFile::Poisson { lambda: t(lambda) },
            DistributionSpec::NegBinomial { p, k } => {
                DistributionFile::NegBinomial { p: t(p), k: *k }
            }
            DistributionSpec::AltNegBinomial { p, q, k } => DistributionFile::AltNegBinomial {
                p: t(p),
                q: t(q),
                k: *k,
            },
            DistributionSpec::DiscreteUniform { n } => DistributionFile::Uniform { n: *n },
            DistributionSpec::PhaseType { a, a_mat } => DistributionFile::PhaseType {
                a: from_matrix(a).remove(0),
                a_mat: from_matrix(a_mat),
            },
            DistributionSpec::Recurrence(c) => DistributionFile::Recurrence {
                p: from_matrix(c.p()),
                m: c.m_states().to_vec(),
            },
        }
    }
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn parse_chain(text: &str) -> Result<PartitionedChain<BigRational>, Error> {
    parse_json::<ChainFile>(text, "chain")?.to_chain()
}

pub fn chain_to_json(c: &PartitionedChain<BigRational>) -> String {
    serde_json::to_string(&ChainFile::from_chain(c)).expect("chain serialises")
}

pub fn parse_distribution(text: &str) -> Result<DistributionSpec<BigRational>, Error> {
    parse_json::<DistributionFile>(text, "distribution")?.to_spec()
}

pub fn distribution_to_json(d: &DistributionSpec<BigRational>) -> String {
    serde_json::to_string(&DistributionFile::from_spec(d)).expect("distribution serialises")
}
