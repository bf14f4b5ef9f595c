use super::{class, Cell, ClassifiedGrid, PlanesError};

/// The shipped palette, `r g b` per line.
pub const DEFAULT_PALETTE: &str = include_str!("../../assets/palette.txt");

/// Fixed 256-entry colour table.
///
/// | index   | use                                     |
/// |---------|-----------------------------------------|
/// | 0       | bounded                                 |
/// | 1       | escaped, flat                           |
/// | 2-15    | classes 2-15                            |
/// | 16-239  | escape gradient `16 + floor(4 v) % 224` |
/// | 240-253 | classes 16-253, `240 + (c - 2) % 14`    |
/// | 254     | bad                                     |
/// | 255     | undecided                               |
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Palette {
    colors: Vec<[u8; 3]>,
}

impl Default for Palette {
    fn default() -> Self {
        Palette::parse(DEFAULT_PALETTE).expect("shipped palette is valid")
    }
}

impl Palette {
    pub fn parse(text: &str) -> Result<Self, PlanesError> {
        let mut colors = Vec::with_capacity(256);
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let v: Vec<u8> = line
                .split_whitespace()
                .map(|s| s.parse::<u8>())
                .collect::<Result<_, _>>()
                .map_err(|e| PlanesError::Palette(format!("line {}: {e}", n + 1)))?;
            if v.len() != 3 {
                return Err(PlanesError::Palette(format!(
                    "line {}: expected 3 components",
                    n + 1
                )));
            }
            colors.push([v[0], v[1], v[2]]);
        }
        if colors.len() != 256 {
            return Err(PlanesError::Palette(format!(
                "expected 256 entries, found {}",
                colors.len()
            )));
        }
        Ok(Palette { colors })
    }

    pub fn color(&self, index: u8) -> [u8; 3] {
        self.colors[index as usize]
    }

    pub fn index_for(cell: &Cell) -> u8 {
        match cell.class {
            class::ESCAPED => {
                let v = if cell.value.is_finite() {
                    cell.value.max(0.0)
                } else {
                    0.0
                };
                16 + ((4.0 * v).floor() as u64 % 224) as u8
            }
            c @ 0..=15 => c,
            c @ 16..=253 => 240 + (c - 2) % 14,
            c => c,
        }
    }

    /// Row-major RGB bytes.
    pub fn rgb(&self, grid: &ClassifiedGrid) -> Vec<u8> {
        grid.cells
            .iter()
            .flat_map(|c| self.color(Self::index_for(c)))
            .collect()
    }

    /// Binary P6 image.
    pub fn ppm(&self, grid: &ClassifiedGrid) -> Vec<u8> {
        let mut out =
            format!("P6\n{} {}\n255\n", grid.window.columns, grid.window.rows).into_bytes();
        out.extend(self.rgb(grid));
        out
    }
}

/// Write an RGB buffer as binary P6.
pub fn ppm_bytes(columns: usize, rows: usize, rgb: &[u8]) -> Vec<u8> {
    let mut out = format!("P6\n{columns} {rows}\n255\n").into_bytes();
    out.extend_from_slice(rgb);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planes::Window;

    #[test]
    fn shipped_palette_loads() {
        let p = Palette::default();
        assert_eq!(p.color(0), [0, 0, 0]);
        assert_eq!(p.color(254), [255, 0, 0]);
    }

    #[test]
    fn index_table() {
        let idx = |class, value| Palette::index_for(&Cell::new(class, value, 0));
        assert_eq!(idx(class::BOUNDED, 0.0), 0);
        assert_eq!(idx(class::ESCAPED, 0.0), 16);
        assert_eq!(idx(class::ESCAPED, 56.1), 16);
        assert_eq!(idx(class::ESCAPED, 1.3), 21);
        assert_eq!(idx(5, 0.0), 5);
        assert_eq!(idx(16, 0.0), 240);
        assert_eq!(idx(class::UNDECIDED, 0.0), 255);
    }

    #[test]
    fn ppm_layout() {
        let w = Window::square(1.0, 2).unwrap();
        let g = ClassifiedGrid::new(w, vec![Cell::new(0, 0.0, 0); 4]);
        let bytes = Palette::default().ppm(&g);
        assert!(bytes.starts_with(b"P6\n2 2\n255\n"));
        assert_eq!(bytes.len(), 11 + 12);
    }

    #[test]
    fn rejects_short_palette() {
        assert!(Palette::parse("0 0 0\n").is_err());
    }
}
