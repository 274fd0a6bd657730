use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Enclosure;
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    re: f64,
    im: f64,
    multiplicity: u64,
    enclosure_radius: f64,
}

/// Columns `re, im, multiplicity, enclosure_radius`.
pub fn write_zeros_csv<W: Write>(zeros: &[Enclosure], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for z in zeros {
        out.serialize(Row {
            re: z.center.re,
            im: z.center.im,
            multiplicity: z.multiplicity,
            enclosure_radius: z.radius,
        })?;
    }
    out.flush()?;
    Ok(())
}

/// Inverse of [`write_zeros_csv`]; the resolved flag is not stored and reads back as `true`.
pub fn read_zeros_csv<R: Read>(r: R) -> Result<Vec<Enclosure>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let row: Row = row?;
        let ok = row.re.is_finite() && row.im.is_finite() && row.enclosure_radius.is_finite() && row.enclosure_radius > 0.0;
        if !ok || row.multiplicity == 0 {
            return Err(Error::Format(format!("invalid zero row {row:?}")));
        }
        out.push(Enclosure {
            center: Complex64::new(row.re, row.im),
            radius: row.enclosure_radius,
            multiplicity: row.multiplicity,
            resolved: true,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let z = vec![Enclosure { center: Complex64::new(0.5, -1.25), radius: 0.01, multiplicity: 2, resolved: true }];
        let mut buf = Vec::new();
        write_zeros_csv(&z, &mut buf).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("re,im,multiplicity,enclosure_radius\n"));
        assert_eq!(read_zeros_csv(buf.as_slice()).unwrap(), z);
        assert!(read_zeros_csv("re,im,multiplicity,enclosure_radius\n1,2,0,0.1\n".as_bytes()).is_err());
    }
}
