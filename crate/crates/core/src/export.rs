//! Serialization of results to CSV and JSON.
//!
//! Every floating-point value is written with 17 significant digits, which is
//! enough for a binary64 value to survive a write/parse cycle bit-for-bit.
//! The JSON writer installs a custom formatter for the same reason: the
//! shortest-representation default would already round-trip, but fixing the
//! digit count keeps reruns byte-identical across serializer versions.

use std::io::{self, Write};

use serde::Serialize;

use crate::bifurcation::BifurcationDiagram;
use crate::error::Result;
use crate::float::Real;
use crate::forcing::DrivePoint;
use crate::lyapunov::{LyapunovEstimate, Stability};

/// Renders a scalar with 17 significant digits (1 leading + 16 after the
/// point, scientific notation). Parsing the result recovers the exact value.
pub fn format_real<F: Real>(x: F) -> String {
    format!("{:.16e}", x)
}

/// Writes a bifurcation diagram as `lambda,x` rows, one per retained sample.
pub fn write_diagram_csv<F: Real, W: Write + ?Sized>(
    w: &mut W,
    diagram: &BifurcationDiagram<F>,
) -> Result<()> {
    writeln!(w, "lambda,x")?;
    for row in &diagram.rows {
        for &x in &row.samples {
            writeln!(w, "{},{}", format_real(row.lambda), format_real(x))?;
        }
    }
    Ok(())
}

/// Writes a forcing trace as `t,amplitude,lambda` rows.
pub fn write_forcing_csv<F: Real, W: Write + ?Sized>(
    w: &mut W,
    points: &[DrivePoint<F>],
) -> Result<()> {
    writeln!(w, "t,amplitude,lambda")?;
    for p in points {
        writeln!(
            w,
            "{},{},{}",
            format_real(p.t),
            format_real(p.amplitude),
            format_real(p.lambda)
        )?;
    }
    Ok(())
}

/// One exponent estimate at one control-parameter value, ready for CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentRow<F> {
    pub lambda: F,
    pub estimate: LyapunovEstimate<F>,
    pub classification: Stability,
}

/// Writes exponent rows as `lambda,exponent,method,classification`.
pub fn write_exponent_csv<F: Real, W: Write + ?Sized>(
    w: &mut W,
    rows: &[ExponentRow<F>],
) -> Result<()> {
    writeln!(w, "lambda,exponent,method,classification")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{}",
            format_real(row.lambda),
            format_real(row.estimate.exponent),
            row.estimate.method.label(),
            row.classification.label()
        )?;
    }
    Ok(())
}

/// JSON formatter that prints every float with a fixed 17-significant-digit
/// scientific rendering; layout is otherwise serde_json's compact default.
struct FullPrecisionFormatter;

impl serde_json::ser::Formatter for FullPrecisionFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        // binary32 needs 9 significant digits to round-trip.
        write!(writer, "{value:.8e}")
    }
}

/// Serializes any value as newline-terminated JSON with full-precision floats.
pub fn write_json<W: Write + ?Sized, T: Serialize + ?Sized>(w: &mut W, value: &T) -> Result<()> {
    let mut serializer = serde_json::Serializer::with_formatter(&mut *w, FullPrecisionFormatter);
    value.serialize(&mut serializer)?;
    writeln!(w)?;
    Ok(())
}

/// [`write_json`] straight to a string.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    write_json(&mut buf, value)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}
