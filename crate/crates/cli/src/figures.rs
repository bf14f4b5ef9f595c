//! The shipped figure set: rendering into a directory with a hash manifest,
//! and recomputing it against a stored manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use holodyn::planes::{
    class, render_escape, render_inverse, yoccoz_disks_figure, Cell, ClassifiedGrid, Palette,
    Window,
};
use holodyn::Complex64;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::config::{parse_key_values, ExperimentConfig};
use crate::error::{numeric, CliError};
use crate::output::{load_palette, write_file, Outcome, Raster};
use crate::presets::preset;

pub const FIGURE_TABLE: &str = include_str!("../assets/figures.conf");
pub const MANIFEST: &str = "manifest.sha256";

/// Directory holding the manifest that ships with the crate.
pub fn shipped_baseline() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/baseline"))
}

#[derive(Clone, Debug, PartialEq)]
pub enum FigureKind {
    /// Escape-time render of a preset map.
    Map { preset: String, max_iter: usize },
    /// Preimage cloud of a preset map, for sets without interior. Pixels hit
    /// by a point are bounded, with the hit count as value.
    Inverse {
        preset: String,
        depth: usize,
        budget: usize,
    },
    /// Yoccoz disks in the log-multiplier plane.
    Yoccoz { q_max: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Figure {
    pub name: String,
    pub kind: FigureKind,
    pub window: Window,
}

/// Parses `name.key=value` lines, keeping the order of first appearance.
pub fn parse_figures(text: &str) -> Result<Vec<Figure>, CliError> {
    let mut order: Vec<String> = Vec::new();
    let mut fields: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    for (k, v) in parse_key_values(text)? {
        let Some((name, key)) = k.split_once('.') else {
            return Err(CliError::config(format!(
                "figure key {k:?} is not name.key"
            )));
        };
        if !fields.contains_key(name) {
            order.push(name.to_string());
        }
        fields
            .entry(name.to_string())
            .or_default()
            .insert(key.to_string(), v);
    }
    order
        .into_iter()
        .map(|name| {
            let f = &fields[&name];
            let get = |key: &str| {
                f.get(key)
                    .map(String::as_str)
                    .ok_or_else(|| CliError::config(format!("figure {name} needs {key}")))
            };
            let number = |key: &str| -> Result<u64, CliError> {
                let raw = get(key)?;
                raw.parse().map_err(|_| {
                    CliError::config(format!("figure {name}: {key} {raw:?} is not an integer"))
                })
            };
            let known: &[&str] = match f.get("kind").map(String::as_str).unwrap_or("julia") {
                "julia" => &["kind", "map", "window", "size", "max-iter"],
                "inverse" => &["kind", "map", "window", "size", "depth", "budget"],
                "yoccoz" => &["kind", "q-max", "window", "size"],
                other => {
                    return Err(CliError::config(format!(
                        "figure {name}: unknown kind {other:?}"
                    )))
                }
            };
            if let Some(extra) = f.keys().find(|k| !known.contains(&k.as_str())) {
                return Err(CliError::config(format!(
                    "figure {name}: unknown key {extra:?}"
                )));
            }
            let window = Window::parse(get("window")?, get("size")?)
                .map_err(|e| CliError::config(format!("figure {name}: {e}")))?;
            let kind = match f.get("kind").map(String::as_str) {
                Some("yoccoz") => FigureKind::Yoccoz {
                    q_max: number("q-max")?,
                },
                Some("inverse") => FigureKind::Inverse {
                    preset: get("map")?.to_string(),
                    depth: number("depth")? as usize,
                    budget: number("budget")? as usize,
                },
                _ => {
                    let max_iter = number("max-iter")? as usize;
                    if max_iter == 0 {
                        return Err(CliError::config(format!(
                            "figure {name}: max-iter must be positive"
                        )));
                    }
                    FigureKind::Map {
                        preset: get("map")?.to_string(),
                        max_iter,
                    }
                }
            };
            Ok(Figure { name, kind, window })
        })
        .collect()
}

/// Base point of the preimage trees of inverse figures.
const INVERSE_ROOT: Complex64 = Complex64::new(0.0, 3.0);

fn density_grid(window: Window, points: &[Complex64]) -> ClassifiedGrid {
    let mut cells = vec![Cell::new(class::ESCAPED, 0.0, 0); window.len()];
    for z in points {
        if let Some((i, j)) = window.pixel(*z) {
            let cell = &mut cells[j * window.columns + i];
            cell.class = class::BOUNDED;
            cell.value += 1.0;
            cell.aux += 1;
        }
    }
    ClassifiedGrid::new(window, cells)
}

pub fn render_figure(figure: &Figure) -> Result<ClassifiedGrid, CliError> {
    let lookup = |name: &str| {
        preset(name)?.ok_or_else(|| {
            CliError::config(format!("figure {}: unknown preset {name:?}", figure.name))
        })
    };
    match &figure.kind {
        FigureKind::Map {
            preset: name,
            max_iter,
        } => render_escape(&lookup(name)?, figure.window, *max_iter).map_err(numeric),
        FigureKind::Inverse {
            preset: name,
            depth,
            budget,
        } => {
            let points = render_inverse(&lookup(name)?, INVERSE_ROOT, *depth, *budget, 0)
                .map_err(numeric)?;
            Ok(density_grid(figure.window, &points))
        }
        FigureKind::Yoccoz { q_max } => {
            yoccoz_disks_figure(*q_max, figure.window).map_err(|e| CliError::config(e.to_string()))
        }
    }
}

/// The hashed files of one figure: its PPM and its class CSV. PNG output is
/// written for viewing only; encoder versions may change its bytes.
pub fn hashed_files(
    figure: &Figure,
    grid: &ClassifiedGrid,
    palette: &Palette,
) -> Vec<(String, Vec<u8>)> {
    vec![
        (
            format!("{}.ppm", figure.name),
            Raster::from_grid(grid, palette).ppm(),
        ),
        (format!("{}.csv", figure.name), grid.to_csv().into_bytes()),
    ]
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Reads `<hash>  <file>` lines.
pub fn parse_manifest(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let Some((hash, file)) = line.split_once("  ") else {
            return Err(CliError::config(format!(
                "{MANIFEST} line {}: expected `<sha256>  <file>`",
                n + 1
            )));
        };
        if hash.len() != 64 || !hash.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(CliError::config(format!(
                "{MANIFEST} line {}: bad hash {hash:?}",
                n + 1
            )));
        }
        out.insert(file.trim().to_string(), hash.to_ascii_lowercase());
    }
    Ok(out)
}

fn figure_table(cfg: &ExperimentConfig) -> Result<Vec<Figure>, CliError> {
    match cfg.get("figures") {
        Some(path) => {
            parse_figures(&std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?)
        }
        None => parse_figures(FIGURE_TABLE),
    }
}

pub fn paper_figures(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let dir = PathBuf::from(cfg.require("dir")?);
    let palette = load_palette(cfg)?;
    let figures = figure_table(cfg)?;
    let mut manifest = String::new();
    let mut rows = Vec::new();
    for figure in &figures {
        let grid = render_figure(figure)?;
        let mut files = Vec::new();
        for (file, bytes) in hashed_files(figure, &grid, &palette) {
            let hash = sha256_hex(&bytes);
            let _ = writeln!(manifest, "{hash}  {file}");
            write_file(&dir.join(&file), &bytes)?;
            files.push(json!({ "file": file, "sha256": hash }));
        }
        let png = Raster::from_grid(&grid, &palette).png()?;
        write_file(&dir.join(format!("{}.png", figure.name)), &png)?;
        rows.push(json!({
            "name": figure.name,
            "window": figure.window,
            "class_counts": crate::commands::class_counts(&grid),
            "files": files,
        }));
    }
    write_file(&dir.join(MANIFEST), manifest.as_bytes())?;
    let result = json!({ "dir": dir.display().to_string(), "manifest": MANIFEST, "figures": rows });
    Ok(Outcome::new(result))
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub file: String,
    pub expected: Option<String>,
    pub actual: String,
    pub pass: bool,
}

/// Recomputes every figure and compares hashes with the manifest. Returns the
/// rows and the number of failures; the table is printed on stderr.
pub fn baseline_check(cfg: &ExperimentConfig) -> Result<(Outcome, usize), CliError> {
    let dir = cfg.get("dir").map_or_else(shipped_baseline, PathBuf::from);
    let manifest_path = dir.join(MANIFEST);
    let text = std::fs::read_to_string(&manifest_path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", manifest_path.display())))?;
    let expected = parse_manifest(&text)?;
    let palette = load_palette(cfg)?;
    let mut rows = Vec::new();
    for figure in &figure_table(cfg)? {
        let grid = render_figure(figure)?;
        for (file, bytes) in hashed_files(figure, &grid, &palette) {
            let actual = sha256_hex(&bytes);
            let want = expected.get(&file).cloned();
            let pass = want.as_deref() == Some(actual.as_str());
            rows.push(CheckRow {
                file,
                expected: want,
                actual,
                pass,
            });
        }
    }
    let failures = rows.iter().filter(|r| !r.pass).count();
    print_table(&rows, &manifest_path);
    let result = json!({
        "manifest": manifest_path.display().to_string(),
        "checked": rows.len(),
        "failures": failures,
        "rows": rows,
    });
    Ok((Outcome::new(result), failures))
}

fn print_table(rows: &[CheckRow], manifest: &Path) {
    let width = rows.iter().map(|r| r.file.len()).max().unwrap_or(4).max(4);
    eprintln!("baseline {}", manifest.display());
    for r in rows {
        let status = if r.pass { "PASS" } else { "FAIL" };
        let note = match (&r.expected, r.pass) {
            (_, true) => String::new(),
            (None, false) => "  not in manifest".to_string(),
            (Some(e), false) => format!("  expected {}.. got {}..", &e[..12], &r.actual[..12]),
        };
        eprintln!(
            "{}",
            format!("{status}  {:width$}{note}", r.file).trim_end()
        );
    }
}
