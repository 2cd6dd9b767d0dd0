//! Resumable JSON-lines scans. Keys are canonical curve strings; curves
//! are checked in parallel chunks and appended by this thread alone.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;
use slopekit_core::verify::{check_curve, random_curves};
use slopekit_core::CurveSpec;

use crate::record::RunRecord;

const CHUNK: usize = 64;

pub struct Summary {
    pub skipped: usize,
    pub written: usize,
    pub violations: usize,
    pub errors: usize,
}

pub fn family_curves(family: &str) -> Result<Vec<CurveSpec>, String> {
    if let Some(rest) = family.strip_prefix("random:") {
        let (seed, count) = rest
            .split_once(':')
            .and_then(|(a, b)| Some((a.parse::<u64>().ok()?, b.parse::<usize>().ok()?)))
            .ok_or_else(|| format!("expected random:SEED:COUNT, got {family:?}"))?;
        return Ok(random_curves(seed, count));
    }
    let mut p = None;
    let mut u = 1;
    let mut s = 1;
    let mut d = None;
    for word in family.split_whitespace() {
        let (k, v) = word
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got {word:?}"))?;
        let v: u64 = v.parse().map_err(|_| format!("bad value in {word:?}"))?;
        match k {
            "p" => p = Some(v),
            "u" => u = v as u32,
            "s" => s = v as u32,
            "d" => d = Some(v as usize),
            _ => return Err(format!("unknown key {k:?}")),
        }
    }
    let (p, d) = p.zip(d).ok_or("family needs p= and d=")?;
    if d == 0 || d > 16 {
        return Err("d must be between 1 and 16".into());
    }
    let total = (p as u128).checked_pow(d as u32 - 1).filter(|&t| t <= 1 << 20);
    let total = total.ok_or("family too large")? as u64;
    let mut out = Vec::new();
    for mask in 0..total {
        let mut coeffs = vec![0u32; d + 1];
        let mut m = mask;
        for c in coeffs.iter_mut().take(d).skip(1) {
            *c = (m % p) as u32;
            m /= p;
        }
        coeffs[d] = 1;
        out.push(CurveSpec::over_prime_subfield(p, u, s, &coeffs).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn existing_keys(path: &Path) -> io::Result<HashSet<String>> {
    let mut keys = HashSet::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(keys),
        Err(e) => return Err(e),
    };
    for line in BufReader::new(file).lines() {
        let line = line?;
        // A torn final line from an interrupted run is recomputed.
        if let Ok(v) = serde_json::from_str::<serde_json::Value>(&line) {
            if let Some(k) = v.get("curve").and_then(|k| k.as_str()) {
                keys.insert(k.to_string());
            }
        }
    }
    Ok(keys)
}

pub fn run(curves: &[CurveSpec], out: &Path, verify: bool, budget: u64) -> io::Result<Summary> {
    let done = existing_keys(out)?;
    let mut seen = HashSet::new();
    let todo: Vec<&CurveSpec> = curves
        .iter()
        .filter(|c| {
            let key = c.render();
            !done.contains(&key) && seen.insert(key)
        })
        .collect();
    let mut summary = Summary {
        skipped: curves.len() - todo.len(),
        written: 0,
        violations: 0,
        errors: 0,
    };
    let mut file = OpenOptions::new().create(true).append(true).open(out)?;
    for chunk in todo.chunks(CHUNK) {
        let results: Vec<_> = chunk
            .par_iter()
            .map(|c| (c, check_curve(c, verify, budget)))
            .collect();
        let mut buf = String::new();
        for (c, r) in results {
            match r {
                Ok(r) => {
                    if !r.violations().is_empty() {
                        summary.violations += 1;
                    }
                    buf.push_str(&serde_json::to_string(&RunRecord::from_check(c, &r)).expect("serializable"));
                    buf.push('\n');
                    summary.written += 1;
                }
                Err(e) => {
                    eprintln!("{}: {e}", c.render());
                    summary.errors += 1;
                }
            }
        }
        file.write_all(buf.as_bytes())?;
        file.flush()?;
    }
    Ok(summary)
}
