//! CSV rendering.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

/// Twelve significant digits, trailing zeros trimmed; scientific notation
/// outside `[1e-5, 1e15)`.
pub fn real(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{v:.11e}");
        let (mant, e) = s.split_once('e').expect("scientific format");
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{mant}e{e}")
    }
}

/// Header plus rows, each row already joined by commas.
pub struct Table {
    lines: Vec<String>,
}

impl Table {
    pub fn new(header: &str) -> Self {
        Self { lines: vec![header.to_string()] }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.lines.push(fields.join(","));
    }

    pub fn write(&self, out: Option<&Path>) -> Result<()> {
        let mut text = self.lines.join("\n");
        text.push('\n');
        match out {
            Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout"),
        }
    }
}
