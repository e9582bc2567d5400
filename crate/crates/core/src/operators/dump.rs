//! Matrix dumps for external inspection.
//!
//! CSV: one matrix row per line, each entry written as `re,im` with 17
//! significant digits. Binary: little-endian `u64` row and column counts
//! followed by row-major `(re, im)` pairs of `f64`.

use crate::linalg::Matrix;
use std::io::{self, Write};

pub fn write_csv<W: Write>(m: &Matrix, mut out: W) -> io::Result<()> {
    for i in 0..m.rows() {
        let mut line = String::new();
        for j in 0..m.cols() {
            if j > 0 {
                line.push(',');
            }
            let v = m[(i, j)];
            line.push_str(&format!("{:.16e},{:.16e}", v.re, v.im));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn write_binary<W: Write>(m: &Matrix, mut out: W) -> io::Result<()> {
    out.write_all(&(m.rows() as u64).to_le_bytes())?;
    out.write_all(&(m.cols() as u64).to_le_bytes())?;
    for v in m.data() {
        out.write_all(&v.re.to_le_bytes())?;
        out.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}
