//! Plain-text edge-list format.
//!
//! ```text
//! N <node_count> kind=<kind>
//! u v
//! ...
//! ```
//!
//! Edges are written with `u < v` in ascending order, node ids 0-based.
//! Per-node infection rates, when present, go to a sibling `<stem>.rates`
//! file with one rate per line in node order.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::network::{ContactNetwork, NetworkKind};
use crate::error::{Error, Result};

/// Path of the rates file that accompanies `path`.
pub fn rates_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_os_string()).unwrap_or_default();
    let mut name = stem;
    name.push(".rates");
    path.with_file_name(name)
}

pub fn write_network(net: &ContactNetwork, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "N {} kind={}", net.node_count(), net.kind())?;
    for (u, v) in net.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    if let Some(rates) = net.infection_rates() {
        let mut out = BufWriter::new(File::create(rates_path(path))?);
        for r in rates {
            writeln!(out, "{r}")?;
        }
        out.flush()?;
    }
    Ok(())
}

pub fn read_network(path: &Path) -> Result<ContactNetwork> {
    let bad = |reason: String| Error::NetworkFormat {
        path: path.to_path_buf(),
        reason,
    };
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let header = lines.next().ok_or_else(|| bad("empty file".into()))??;
    let (n, kind) = parse_header(&header).map_err(bad)?;

    let mut edges = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(u), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad(format!("line {}: expected `u v`", idx + 2)));
        };
        let parse = |s: &str| s.parse::<u32>().map_err(|e| bad(format!("line {}: {e}", idx + 2)));
        let (u, v) = (parse(u)?, parse(v)?);
        if u >= v {
            return Err(bad(format!("line {}: expected u < v, got {u} {v}", idx + 2)));
        }
        edges.push((u, v));
    }
    let net = ContactNetwork::from_edges(n, kind, &edges).map_err(|e| bad(e.to_string()))?;
    if net.edge_count() != edges.len() {
        return Err(bad("duplicate edges".into()));
    }

    let rates_file = rates_path(path);
    if kind == NetworkKind::GammaInfectiousness || rates_file.exists() {
        let reader = BufReader::new(File::open(&rates_file)?);
        let mut rates = Vec::with_capacity(n);
        for line in reader.lines() {
            let line = line?;
            let rate: f64 = line
                .trim()
                .parse()
                .map_err(|e| bad(format!("rates file: {e}")))?;
            rates.push(rate);
        }
        if rates.len() != n {
            return Err(bad(format!("rates file has {} entries, expected {n}", rates.len())));
        }
        return Ok(net.with_infection_rates(rates));
    }
    Ok(net)
}

fn parse_header(header: &str) -> std::result::Result<(usize, NetworkKind), String> {
    let mut parts = header.split_whitespace();
    if parts.next() != Some("N") {
        return Err(format!("header must start with `N`, got `{header}`"));
    }
    let n = parts
        .next()
        .ok_or("missing node count")?
        .parse::<usize>()
        .map_err(|e| format!("node count: {e}"))?;
    let kind = parts
        .next()
        .and_then(|s| s.strip_prefix("kind="))
        .ok_or("missing kind=<kind>")?
        .parse::<NetworkKind>()
        .map_err(|e| e.to_string())?;
    Ok((n, kind))
}
