//! Report files: pretty JSON with floats at 17 significant digits, CSV and
//! SVG, each carrying the tool version, the config echo and the annulus
//! index convention.

use crate::puzzle::ANNULUS_CONVENTION;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};
use std::io::{self, Write};
use std::path::Path;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Pretty printer that writes every float as `d.dddddddddddddddde±x`.
struct FixedFloats<'a>(PrettyFormatter<'a>);

impl Formatter for FixedFloats<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("in-memory serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn point(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn points(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| point(z)).collect())
}

/// Header block embedded in every output.
pub fn meta(command: &str, config: &Value) -> Value {
    json!({
        "tool": "yoccoz",
        "version": VERSION,
        "command": command,
        "config": config,
        "convention": ANNULUS_CONVENTION,
    })
}

/// `{"meta": …}` followed by the fields of `body`.
pub fn with_meta(meta: &Value, body: Value) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("meta".into(), meta.clone());
    if let Value::Object(m) = body {
        out.extend(m);
    }
    Value::Object(out)
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> io::Result<()> {
    std::fs::write(dir.join(name), contents)
}

/// CSV preceded by `#` comment lines carrying the header block.
pub fn csv_with_meta(meta: &Value, body: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("# yoccoz {VERSION}\n"));
    out.push_str(&format!("# config: {}\n", serde_json::to_string(&meta["config"]).expect("serializable")));
    out.push_str(&format!("# convention: {ANNULUS_CONVENTION}\n"));
    out.push_str(body);
    out
}

/// Polylines drawn in a square viewport with `y` pointing up.
pub fn svg(meta: &Value, paths: &[(&str, &[Complex64])], dots: &[Complex64]) -> String {
    let all = paths.iter().flat_map(|p| p.1.iter()).chain(dots).filter(|z| z.is_finite());
    let (mut lo, mut hi) = (Complex64::new(f64::INFINITY, f64::INFINITY), Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for z in all {
        lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    if !lo.re.is_finite() {
        lo = Complex64::new(-1.0, -1.0);
        hi = Complex64::new(1.0, 1.0);
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-12) * 1.05;
    let mid = (lo + hi) / 2.0;
    let size = 800.0;
    let map = |z: Complex64| ((z.re - mid.re) / span * size + size / 2.0, size / 2.0 - (z.im - mid.im) / span * size);
    let mut out = String::new();
    out.push_str(&format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"));
    out.push_str(&format!("<!-- {} -->\n", serde_json::to_string(meta).expect("serializable").replace("--", "- -")));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (stroke, zs) in paths {
        let d: Vec<String> = zs.iter().filter(|z| z.is_finite()).map(|&z| {
            let (x, y) = map(z);
            format!("{x:.3},{y:.3}")
        }).collect();
        if d.len() >= 2 {
            out.push_str(&format!("<polyline fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1\" points=\"{}\"/>\n", d.join(" ")));
        }
    }
    for &z in dots {
        let (x, y) = map(z);
        out.push_str(&format!("<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\" fill=\"red\"/>\n"));
    }
    out.push_str("</svg>\n");
    out
}
