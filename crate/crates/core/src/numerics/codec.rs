//! Binary container for multilinear forms.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! offset  size  content
//! 0       8     magic b"SUMFORM1"
//! 8       4     u32 header length H
//! 12      H     UTF-8 JSON header
//! 12+H    ...   coefficient payload
//! ```
//!
//! The header is
//! `{"order":m,"dim":n,"exponents":[..],"codomain":"scalar"|"c0_coordinates",
//! "seed":u64|null,"coefficients":"real"|"complex"|"diagonal"|"coordinate","count":N}`
//! with infinite exponents written as `"inf"`. The payload holds `count` IEEE-754
//! `f64` bit patterns for real forms, `count` `(re, im)` pairs for complex
//! forms, and nothing for the implicit diagonal and coordinate operators. Bit
//! patterns are copied verbatim, so a round trip is bit-exact.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::form::{Codomain, Coefficients, MultilinearForm};
use crate::{Error, Exponent, Result};

pub const MAGIC: &[u8; 8] = b"SUMFORM1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormHeader {
    pub order: usize,
    pub dim: usize,
    pub exponents: Vec<Exponent>,
    pub codomain: Codomain,
    pub seed: Option<u64>,
    pub coefficients: String,
    pub count: usize,
}

impl FormHeader {
    pub fn of(form: &MultilinearForm) -> Self {
        let count = match form.coefficients() {
            Coefficients::Real(c) => c.len(),
            Coefficients::Complex(c) => c.len(),
            _ => 0,
        };
        FormHeader {
            order: form.order(),
            dim: form.dim(),
            exponents: form.exponents().to_vec(),
            codomain: form.codomain(),
            seed: form.seed(),
            coefficients: form.coefficients().kind_name().to_string(),
            count,
        }
    }
}

pub fn write_form<W: Write>(form: &MultilinearForm, mut out: W) -> Result<()> {
    let header = serde_json::to_vec(&FormHeader::of(form))
        .map_err(|e| Error::Data(format!("cannot encode header: {e}")))?;
    out.write_all(MAGIC)?;
    out.write_all(&(header.len() as u32).to_le_bytes())?;
    out.write_all(&header)?;
    match form.coefficients() {
        Coefficients::Real(c) => {
            for v in c {
                out.write_all(&v.to_bits().to_le_bytes())?;
            }
        }
        Coefficients::Complex(c) => {
            for v in c {
                out.write_all(&v.re.to_bits().to_le_bytes())?;
                out.write_all(&v.im.to_bits().to_le_bytes())?;
            }
        }
        Coefficients::Diagonal | Coefficients::Coordinate => {}
    }
    Ok(())
}

pub fn encode_form(form: &MultilinearForm) -> Vec<u8> {
    let mut buf = Vec::new();
    write_form(form, &mut buf).expect("writing to a Vec cannot fail");
    buf
}

fn read_f64<R: Read>(input: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    input
        .read_exact(&mut b)
        .map_err(|_| Error::Data("truncated coefficient payload".into()))?;
    Ok(f64::from_bits(u64::from_le_bytes(b)))
}

pub fn read_form<R: Read>(mut input: R) -> Result<MultilinearForm> {
    let mut magic = [0u8; 8];
    input
        .read_exact(&mut magic)
        .map_err(|_| Error::Data("file too short for a form".into()))?;
    if &magic != MAGIC {
        return Err(Error::Data("not a form file (bad magic)".into()));
    }
    let mut len = [0u8; 4];
    input
        .read_exact(&mut len)
        .map_err(|_| Error::Data("truncated header length".into()))?;
    let mut header = vec![0u8; u32::from_le_bytes(len) as usize];
    input
        .read_exact(&mut header)
        .map_err(|_| Error::Data("truncated header".into()))?;
    let header: FormHeader = serde_json::from_slice(&header)
        .map_err(|e| Error::Schema(format!("form header: {e}")))?;
    let coefficients = match header.coefficients.as_str() {
        "real" => Coefficients::Real(
            (0..header.count)
                .map(|_| read_f64(&mut input))
                .collect::<Result<_>>()?,
        ),
        "complex" => Coefficients::Complex(
            (0..header.count)
                .map(|_| Ok(Complex64::new(read_f64(&mut input)?, read_f64(&mut input)?)))
                .collect::<Result<_>>()?,
        ),
        "diagonal" => Coefficients::Diagonal,
        "coordinate" => Coefficients::Coordinate,
        other => {
            return Err(Error::Schema(format!(
                "form header: unknown coefficient kind {other:?}"
            )))
        }
    };
    MultilinearForm::from_parts(
        header.order,
        header.dim,
        header.exponents,
        header.codomain,
        coefficients,
        header.seed,
    )
}

pub fn decode_form(bytes: &[u8]) -> Result<MultilinearForm> {
    read_form(bytes)
}
