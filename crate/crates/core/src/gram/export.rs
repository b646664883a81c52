use std::io::Write;

use serde::Serialize;

use super::{GramError, GramMatrix, SCALE};
use crate::exact::{format_rational, ExactScalar};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExportManifest {
    pub dimension: usize,
    pub scaling_factor: i64,
    /// `"fixed p/q"` or `"symbolic"`.
    pub x_status: String,
    /// Column layout of each line.
    pub format: String,
    /// Lines written: nonzero entries of the upper triangle.
    pub entries: usize,
}

/// Writes the matrix scaled by [`SCALE`] as lines `i j value` over the
/// nonzero entries with i ≤ j. With x left symbolic each line carries the
/// constant part and the coefficient of x instead: `i j constant x_coeff`.
pub fn export_matrix<W: Write>(
    m: &GramMatrix,
    x: Option<&ExactScalar>,
    mut out: W,
) -> Result<ExportManifest, GramError> {
    let n = m.dim();
    let mut entries = 0;
    let (x_status, format) = match x {
        Some(x) => {
            let pal = m.scaled_palette(Some(x), SCALE)?;
            for i in 0..n {
                for (j, &code) in m.row_codes(i).iter().enumerate().skip(i) {
                    let v = pal[code as usize];
                    if v != 0 {
                        writeln!(out, "{i} {j} {v}")?;
                        entries += 1;
                    }
                }
            }
            (format!("fixed {}", format_rational(x)), "i j value")
        }
        None => {
            let pal = m.scaled_affine_palette(SCALE)?;
            for i in 0..n {
                for (j, &code) in m.row_codes(i).iter().enumerate().skip(i) {
                    let (c, k) = pal[code as usize];
                    if c != 0 || k != 0 {
                        writeln!(out, "{i} {j} {c} {k}")?;
                        entries += 1;
                    }
                }
            }
            ("symbolic".to_string(), "i j constant x_coeff")
        }
    };
    out.flush()?;
    Ok(ExportManifest {
        dimension: n,
        scaling_factor: SCALE,
        x_status,
        format: format.to_string(),
        entries,
    })
}
