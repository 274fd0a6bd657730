//! Binary and CSV serialization of sequence buffers.
//!
//! Binary layout, little-endian:
//!
//! ```text
//! magic  "XISQ"
//! u32    format version (1)
//! u32    kind tag
//! f64    kind parameter (α for quadratic, 0/1 = rademacher/steinhaus for rand_*)
//! u64    n0, n1, seed
//! f64×2  (re, im) for each n in [n0, n1)
//! ```

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::{MultiplierKind, PrimeDistribution, SequenceBuffer, MAX_LEN};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"XISQ";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 + 8 + 3 * 8;

fn encode_kind(kind: MultiplierKind) -> (u32, f64) {
    let base = |b: PrimeDistribution| match b {
        PrimeDistribution::Rademacher => 0.0,
        PrimeDistribution::Steinhaus => 1.0,
    };
    match kind {
        MultiplierKind::IidGaussian => (0, 0.0),
        MultiplierKind::IidRademacher => (1, 0.0),
        MultiplierKind::IidSteinhaus => (2, 0.0),
        MultiplierKind::Quadratic { alpha } => (3, alpha),
        MultiplierKind::RandMult { base: b } => (4, base(b)),
        MultiplierKind::RandComplMult { base: b } => (5, base(b)),
        MultiplierKind::Grs => (6, 0.0),
        MultiplierKind::Squarefree => (7, 0.0),
        MultiplierKind::ThueMorse => (8, 0.0),
        MultiplierKind::Constant => (9, 0.0),
    }
}

fn decode_kind(tag: u32, param: f64) -> Result<MultiplierKind> {
    let base = || match param {
        0.0 => Ok(PrimeDistribution::Rademacher),
        1.0 => Ok(PrimeDistribution::Steinhaus),
        p => Err(Error::Format(format!("unknown prime distribution code {p}"))),
    };
    let kind = match tag {
        0 => MultiplierKind::IidGaussian,
        1 => MultiplierKind::IidRademacher,
        2 => MultiplierKind::IidSteinhaus,
        3 => MultiplierKind::Quadratic { alpha: param },
        4 => MultiplierKind::RandMult { base: base()? },
        5 => MultiplierKind::RandComplMult { base: base()? },
        6 => MultiplierKind::Grs,
        7 => MultiplierKind::Squarefree,
        8 => MultiplierKind::ThueMorse,
        9 => MultiplierKind::Constant,
        t => return Err(Error::Format(format!("unknown kind tag {t}"))),
    };
    kind.validate().map_err(Error::Format)?;
    Ok(kind)
}

fn take<const N: usize>(bytes: &[u8], at: &mut usize) -> [u8; N] {
    let out = bytes[*at..*at + N].try_into().expect("length checked by caller");
    *at += N;
    out
}

impl SequenceBuffer {
    pub fn to_bytes(&self) -> Vec<u8> {
        let (tag, param) = encode_kind(self.kind);
        let mut out = Vec::with_capacity(HEADER_LEN + 16 * self.values.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&tag.to_le_bytes());
        out.extend_from_slice(&param.to_le_bytes());
        for v in [self.n0, self.n1, self.seed] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for z in &self.values {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Format(format!("sequence file too short ({} bytes)", bytes.len())));
        }
        let mut at = 0;
        if &take::<4>(bytes, &mut at) != MAGIC {
            return Err(Error::Format("bad magic, not a sequence file".into()));
        }
        let version = u32::from_le_bytes(take(bytes, &mut at));
        if version != VERSION {
            return Err(Error::Format(format!("unsupported sequence format version {version}")));
        }
        let tag = u32::from_le_bytes(take(bytes, &mut at));
        let param = f64::from_le_bytes(take(bytes, &mut at));
        let kind = decode_kind(tag, param)?;
        let n0 = u64::from_le_bytes(take(bytes, &mut at));
        let n1 = u64::from_le_bytes(take(bytes, &mut at));
        let seed = u64::from_le_bytes(take(bytes, &mut at));
        if n1 <= n0 || n1 - n0 > MAX_LEN {
            return Err(Error::Format(format!("invalid range [{n0}, {n1})")));
        }
        let body = &bytes[HEADER_LEN..];
        let expected = (n1 - n0) as u128 * 16;
        if body.len() as u128 != expected {
            return Err(Error::Format(format!("payload holds {} bytes, header implies {expected}", body.len())));
        }
        let values = body
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect();
        Ok(Self::from_parts(kind, n0, seed, values))
    }

    pub fn write_binary(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn read_binary(path: impl AsRef<Path>) -> Result<Self> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }
}

/// Writes `n,re,im` rows with a header line.
pub fn write_csv<W: Write>(buf: &SequenceBuffer, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "re", "im"])?;
    for (i, z) in buf.values().iter().enumerate() {
        w.write_record(&[(buf.n0() + i as u64).to_string(), z.re.to_string(), z.im.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(serde::Deserialize)]
struct Row {
    n: u64,
    re: f64,
    im: f64,
}

/// Reads `n,re,im` rows; indices must be consecutive. Returns `(n0, values)`.
pub fn read_csv<R: Read>(input: R) -> Result<(u64, Vec<Complex64>)> {
    let mut r = csv::Reader::from_reader(input);
    let mut n0 = None;
    let mut values = Vec::new();
    for row in r.deserialize::<Row>() {
        let row = row?;
        let start = *n0.get_or_insert(row.n);
        if row.n.checked_sub(start) != Some(values.len() as u64) {
            return Err(Error::Format(format!("non-consecutive index {} in sequence CSV", row.n)));
        }
        values.push(Complex64::new(row.re, row.im));
    }
    match n0 {
        Some(n0) => Ok((n0, values)),
        None => Err(Error::Format("sequence CSV has no rows".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::super::generate;
    use super::*;

    #[test]
    fn binary_roundtrip_all_kinds() {
        let kinds = [
            MultiplierKind::IidGaussian,
            MultiplierKind::IidRademacher,
            MultiplierKind::IidSteinhaus,
            MultiplierKind::Quadratic { alpha: std::f64::consts::SQRT_2 },
            MultiplierKind::RandMult { base: PrimeDistribution::Rademacher },
            MultiplierKind::RandComplMult { base: PrimeDistribution::Steinhaus },
            MultiplierKind::Grs,
            MultiplierKind::Squarefree,
            MultiplierKind::ThueMorse,
            MultiplierKind::Constant,
        ];
        for kind in kinds {
            let b = generate(kind, 3, 40, 11).unwrap();
            let back = SequenceBuffer::from_bytes(&b.to_bytes()).unwrap();
            assert_eq!(b, back, "{kind:?}");
        }
    }

    #[test]
    fn binary_rejects_corruption() {
        let b = generate(MultiplierKind::Grs, 0, 4, 0).unwrap();
        let bytes = b.to_bytes();
        assert!(SequenceBuffer::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'Y';
        assert!(SequenceBuffer::from_bytes(&bad).is_err());
        let mut bad = bytes;
        bad[8] = 200;
        assert!(SequenceBuffer::from_bytes(&bad).is_err());
    }

    #[test]
    fn csv_roundtrip() {
        let b = generate(MultiplierKind::IidSteinhaus, 7, 30, 5).unwrap();
        let mut out = Vec::new();
        write_csv(&b, &mut out).unwrap();
        let (n0, values) = read_csv(out.as_slice()).unwrap();
        assert_eq!(n0, 7);
        assert_eq!(values, b.values());
        assert!(read_csv("n,re,im\n1,0,0\n3,0,0\n".as_bytes()).is_err());
    }
}
