use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use holodyn::planes::{ppm_bytes, ClassifiedGrid, Palette};
use image::codecs::png::PngEncoder;
use image::{ExtendedColorType, ImageEncoder};
use serde::Serialize;
use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// Row-major RGB image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    pub columns: usize,
    pub rows: usize,
    pub rgb: Vec<u8>,
}

impl Raster {
    pub fn filled(columns: usize, rows: usize, color: [u8; 3]) -> Self {
        Raster {
            columns,
            rows,
            rgb: color.repeat(columns * rows),
        }
    }

    pub fn from_grid(grid: &ClassifiedGrid, palette: &Palette) -> Self {
        Raster {
            columns: grid.window.columns,
            rows: grid.window.rows,
            rgb: palette.rgb(grid),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, color: [u8; 3]) {
        if i < self.columns && j < self.rows {
            let k = 3 * (j * self.columns + i);
            self.rgb[k..k + 3].copy_from_slice(&color);
        }
    }

    pub fn ppm(&self) -> Vec<u8> {
        ppm_bytes(self.columns, self.rows, &self.rgb)
    }

    pub fn png(&self) -> Result<Vec<u8>, CliError> {
        let mut out = Vec::new();
        PngEncoder::new(&mut out)
            .write_image(
                &self.rgb,
                self.columns as u32,
                self.rows as u32,
                ExtendedColorType::Rgb8,
            )
            .map_err(|e| CliError::Numeric(format!("png encoding: {e}")))?;
        Ok(out)
    }
}

/// What a subcommand produced, before it is written out.
#[derive(Debug, Default)]
pub struct Outcome {
    pub result: Value,
    /// Tolerances and caps in force, echoed into the report.
    pub tolerances: Vec<(&'static str, f64)>,
    pub grid: Option<ClassifiedGrid>,
    pub image: Option<Raster>,
    pub csv: Option<String>,
    /// Additional files requested by subcommand keys.
    pub extra: Vec<(PathBuf, Vec<u8>)>,
}

impl Outcome {
    pub fn new(result: Value) -> Self {
        Outcome {
            result,
            ..Outcome::default()
        }
    }

    pub fn tolerance(mut self, name: &'static str, value: f64) -> Self {
        self.tolerances.push((name, value));
        self
    }
}

#[derive(Serialize)]
pub struct Report<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'a str,
    pub seed: u64,
    pub config: &'a BTreeMap<String, String>,
    pub tolerances: BTreeMap<&'static str, f64>,
    /// Seconds; the only field that differs between identical runs.
    pub wall_time: f64,
    pub outputs: Vec<String>,
    pub result: &'a Value,
}

pub fn load_palette(cfg: &ExperimentConfig) -> Result<Palette, CliError> {
    match cfg.get("palette") {
        None => Ok(Palette::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            Palette::parse(&text).map_err(|e| CliError::config(format!("{path}: {e}")))
        }
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Writes the primary output in the configured format, then the report:
/// to `--out` for JSON runs that name a file, otherwise on stdout.
pub fn emit(cfg: &ExperimentConfig, outcome: Outcome, wall_time: f64) -> Result<String, CliError> {
    let format = cfg.format();
    let default_path = |ext: &str| PathBuf::from(format!("{}.{ext}", cfg.subcommand));
    let mut outputs = Vec::new();
    let primary: Option<(PathBuf, Vec<u8>)> = match format {
        "ppm" | "png" => {
            let raster = match (&outcome.image, &outcome.grid) {
                (Some(r), _) => r.clone(),
                (None, Some(g)) => Raster::from_grid(g, &load_palette(cfg)?),
                (None, None) => {
                    return Err(CliError::config(format!(
                        "{} has no image output",
                        cfg.subcommand
                    )))
                }
            };
            let bytes = if format == "ppm" {
                raster.ppm()
            } else {
                raster.png()?
            };
            Some((
                cfg.get("out")
                    .map_or_else(|| default_path(format), PathBuf::from),
                bytes,
            ))
        }
        "csv" => {
            let csv = match (&outcome.csv, &outcome.grid) {
                (Some(c), _) => c.clone(),
                (None, Some(g)) => g.to_csv(),
                (None, None) => {
                    return Err(CliError::config(format!(
                        "{} has no csv output",
                        cfg.subcommand
                    )))
                }
            };
            Some((
                cfg.get("out")
                    .map_or_else(|| default_path("csv"), PathBuf::from),
                csv.into_bytes(),
            ))
        }
        _ => None,
    };
    if let Some((path, bytes)) = &primary {
        write_file(path, bytes)?;
        outputs.push(path.display().to_string());
    }
    for (path, bytes) in &outcome.extra {
        write_file(path, bytes)?;
        outputs.push(path.display().to_string());
    }
    let report_path = if format == "json" {
        cfg.get("out").map(PathBuf::from)
    } else {
        None
    };
    if let Some(p) = &report_path {
        outputs.insert(0, p.display().to_string());
    }
    let report = Report {
        tool: "holodyn",
        version: holodyn::VERSION,
        subcommand: &cfg.subcommand,
        seed: cfg.seed,
        config: &cfg.params,
        tolerances: outcome.tolerances.iter().copied().collect(),
        wall_time,
        outputs,
        result: &outcome.result,
    };
    let text =
        serde_json::to_string_pretty(&report).map_err(|e| CliError::Numeric(e.to_string()))? + "\n";
    match &report_path {
        Some(p) => write_file(p, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(text)
}

/// A curve to plot and its colour.
pub type Curve<'a> = (&'a dyn Fn(f64) -> f64, [u8; 3]);

/// Graphs of maps of `[0, 1]` into itself on a white square with the diagonal.
pub fn plot_graphs(curves: &[Curve<'_>], size: usize) -> Raster {
    let mut img = Raster::filled(size, size, [255, 255, 255]);
    let last = (size - 1) as f64;
    let row = |y: f64| (last - (y.clamp(0.0, 1.0) * last).round()) as usize;
    for k in 0..size {
        img.set(k, size - 1 - k, [200, 200, 200]);
        for (a, b) in [(k, 0), (k, size - 1), (0, k), (size - 1, k)] {
            img.set(a, b, [0, 0, 0]);
        }
    }
    for (f, color) in curves {
        let mut prev = row(f(0.0));
        for i in 0..size {
            let here = row(f(i as f64 / last));
            let (lo, hi) = if prev <= here {
                (prev, here)
            } else {
                (here, prev)
            };
            for j in lo..=hi {
                img.set(i, j, *color);
            }
            prev = here;
        }
    }
    img
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn png_decodes_to_same_pixels() {
        let mut r = Raster::filled(3, 2, [10, 20, 30]);
        r.set(2, 1, [255, 0, 0]);
        let png = r.png().unwrap();
        let back = image::load_from_memory(&png).unwrap().to_rgb8();
        assert_eq!(back.as_raw(), &r.rgb);
        assert!(r.ppm().starts_with(b"P6\n3 2\n255\n"));
    }

    #[test]
    fn identity_graph_is_diagonal() {
        let id = |x: f64| x;
        let img = plot_graphs(&[(&id, [255, 0, 0])], 64);
        for k in 1..63 {
            let idx = 3 * ((63 - k) * 64 + k);
            assert_eq!(&img.rgb[idx..idx + 3], &[255, 0, 0]);
        }
    }
}
