use std::fmt::Write as _;

use serde::Serialize;

use super::Window;

/// Class codes shared by every renderer.
pub mod class {
    pub const BOUNDED: u8 = 0;
    pub const ESCAPED: u8 = 1;
    /// Basin `k` of an enumerated attractor is `BASIN + k`.
    pub const BASIN: u8 = 2;
    pub const BAD: u8 = 254;
    pub const UNDECIDED: u8 = 255;

    pub fn basin(k: usize) -> u8 {
        (BASIN as usize + k).min(BAD as usize - 1) as u8
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub class: u8,
    /// Smooth iteration count, iteration count or distance, per renderer.
    pub value: f64,
    pub aux: u32,
}

impl Cell {
    pub const fn new(class: u8, value: f64, aux: u32) -> Self {
        Cell { class, value, aux }
    }
}

/// Per-pixel classification of a window, row-major from the top row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifiedGrid {
    pub window: Window,
    pub cells: Vec<Cell>,
}

impl ClassifiedGrid {
    pub fn new(window: Window, cells: Vec<Cell>) -> Self {
        assert_eq!(
            cells.len(),
            window.len(),
            "cell count must match the window"
        );
        ClassifiedGrid { window, cells }
    }

    /// Evaluate `classify` at every pixel centre, in parallel.
    pub fn from_fn(
        window: Window,
        classify: impl Fn(num_complex::Complex64) -> Cell + Sync,
    ) -> Self {
        use rayon::prelude::*;
        let cols = window.columns;
        let cells: Vec<Cell> = (0..window.len())
            .into_par_iter()
            .map(|k| classify(window.point(k % cols, k / cols)))
            .collect();
        ClassifiedGrid { window, cells }
    }

    pub fn get(&self, i: usize, j: usize) -> Cell {
        self.cells[j * self.window.columns + i]
    }

    pub fn at(&self, z: num_complex::Complex64) -> Option<Cell> {
        self.window.pixel(z).map(|(i, j)| self.get(i, j))
    }

    pub fn classes(&self) -> impl Iterator<Item = u8> + '_ {
        self.cells.iter().map(|c| c.class)
    }

    pub fn count(&self, class: u8) -> usize {
        self.classes().filter(|&c| c == class).count()
    }

    /// Pixels of class `class` with a pixel of a different class within
    /// `reach` pixels (Chebyshev distance).
    pub fn boundary_mask(&self, reach: usize) -> Vec<bool> {
        let (cols, rows) = (self.window.columns, self.window.rows);
        let mut mask = vec![false; cols * rows];
        for j in 0..rows {
            for i in 0..cols {
                let c = self.get(i, j).class;
                let (i0, i1) = (i.saturating_sub(reach), (i + reach).min(cols - 1));
                let (j0, j1) = (j.saturating_sub(reach), (j + reach).min(rows - 1));
                mask[j * cols + i] =
                    (j0..=j1).any(|jj| (i0..=i1).any(|ii| self.get(ii, jj).class != c));
            }
        }
        mask
    }

    /// `i,j,class,value` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(self.cells.len() * 16);
        s.push_str("i,j,class,value\n");
        for (k, c) in self.cells.iter().enumerate() {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                k % self.window.columns,
                k / self.window.columns,
                c.class,
                c.value
            );
        }
        s
    }

    /// Grid flipped top to bottom.
    pub fn mirrored(&self) -> Self {
        let cols = self.window.columns;
        let cells = self.cells.chunks(cols).rev().flatten().copied().collect();
        ClassifiedGrid {
            window: self.window,
            cells,
        }
    }
}
