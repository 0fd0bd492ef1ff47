//! CSV, JSON and SVG exchange formats.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::jacobi::PlaneProfile;

/// Serde adapter writing non-finite floats as the strings `"inf"`, `"-inf"`
/// and `"nan"`, since JSON numbers cannot express them.
pub mod ext_f64 {
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;
    use std::fmt;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    struct ExtVisitor;

    impl Visitor<'_> for ExtVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a number or one of \"inf\", \"-inf\", \"nan\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(E::custom(format!("unexpected string {v:?}"))),
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(ExtVisitor)
    }
}

/// Writes `r,m,mp,K` rows at spacing `step` (the window end is always included).
pub fn write_profile_csv<W: Write>(profile: &PlaneProfile, step: f64, out: W) -> Result<()> {
    if !(step > 0.0) {
        return Err(Error::InvalidInput("grid step must be positive".into()));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r", "m", "mp", "K"])?;
    let r_max = profile.r_max();
    let n = (r_max / step).ceil() as usize;
    for i in 0..=n {
        let r = (i as f64 * step).min(r_max);
        let [m, mp] = profile.state(r);
        let k = profile.curvature(r);
        w.write_record(&[fmt(r), fmt(m), fmt(mp), fmt(k)])?;
        if r >= r_max {
            break;
        }
    }
    w.flush()?;
    Ok(())
}

fn fmt(v: f64) -> String {
    // Shortest representation that parses back to the same bits.
    format!("{v:?}")
}

/// Reads a profile CSV written by [`write_profile_csv`] into a table-backed profile.
pub fn read_profile_csv<R: Read>(input: R, tol: f64) -> Result<PlaneProfile> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::InvalidInput(format!("profile CSV lacks a {name:?} column")))
    };
    let (ir, im, imp, ik) = (col("r")?, col("m")?, col("mp")?, col("K")?);
    let (mut r, mut m, mut mp, mut k) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec?;
        let get = |i: usize| -> Result<f64> {
            rec.get(i)
                .ok_or_else(|| Error::InvalidInput("short CSV row".into()))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidInput(format!("bad number in profile CSV: {e}")))
        };
        r.push(get(ir)?);
        m.push(get(im)?);
        mp.push(get(imp)?);
        k.push(get(ik)?);
    }
    PlaneProfile::from_samples(r, m, mp, k, tol)
}

/// Minimal SVG polyline plot of `(x, y)` points in a square viewport.
pub fn svg_polyline(points: &[(f64, f64)], title: &str, equal_axes: bool) -> String {
    svg_plot(&[points], title, equal_axes)
}

/// Several polylines sharing one coordinate frame; non-finite points are
/// dropped. The first series is drawn in black, later ones in grey.
pub fn svg_plot(series: &[&[(f64, f64)]], title: &str, equal_axes: bool) -> String {
    let size = 600.0;
    let pad = 30.0;
    let finite = |p: &&(f64, f64)| p.0.is_finite() && p.1.is_finite();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in series.iter().flat_map(|s| s.iter()).filter(finite) {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let mut sx = (x1 - x0).max(1e-12);
    let mut sy = (y1 - y0).max(1e-12);
    if equal_axes {
        let s = sx.max(sy);
        x0 -= 0.5 * (s - sx);
        y0 -= 0.5 * (s - sy);
        sx = s;
        sy = s;
    }
    let span = size - 2.0 * pad;
    let title = title.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n\
         <title>{title}</title>\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    for (i, pts) in series.iter().enumerate() {
        let coords: Vec<String> = pts
            .iter()
            .filter(finite)
            .map(|&(x, y)| {
                let px = pad + (x - x0) / sx * span;
                let py = size - pad - (y - y0) / sy * span;
                format!("{px:.3},{py:.3}")
            })
            .collect();
        let stroke = if i == 0 { "black" } else { "grey" };
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.2\" points=\"{}\"/>\n",
            coords.join(" ")
        ));
    }
    out.push_str("</svg>\n");
    out
}
